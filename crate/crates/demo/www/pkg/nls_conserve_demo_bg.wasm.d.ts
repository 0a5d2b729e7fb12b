/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const __wbg_wasmevolution_free: (a: number, b: number) => void;
export const __wbg_wasmidentities_free: (a: number, b: number) => void;
export const wasm_evolve: (a: number, b: number, c: number, d: number, e: number, f: number, g: number) => [number, number, number];
export const wasm_identities: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number, number];
export const wasm_w_versus_p: (a: number, b: number, c: number, d: number, e: number) => [number, number, number, number];
export const wasmevolution_charge: (a: number) => [number, number];
export const wasmevolution_density: (a: number) => [number, number];
export const wasmevolution_energy: (a: number) => [number, number];
export const wasmevolution_times: (a: number) => [number, number];
export const wasmevolution_warnings: (a: number) => [number, number];
export const wasmevolution_x: (a: number) => [number, number];
export const wasmidentities_pc_lhs: (a: number) => [number, number];
export const wasmidentities_pc_relative: (a: number) => number;
export const wasmidentities_pc_rhs: (a: number) => [number, number];
export const wasmidentities_times: (a: number) => [number, number];
export const wasmidentities_virial_lhs: (a: number) => [number, number];
export const wasmidentities_virial_relative: (a: number) => number;
export const wasmidentities_virial_rhs: (a: number) => [number, number];
export const wasmidentities_warnings: (a: number) => [number, number];
export const __wbindgen_externrefs: WebAssembly.Table;
export const __externref_table_dealloc: (a: number) => void;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __wbindgen_start: () => void;
