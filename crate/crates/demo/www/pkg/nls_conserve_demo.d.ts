/* tslint:disable */
/* eslint-disable */

export class WasmEvolution {
    private constructor();
    free(): void;
    [Symbol.dispose](): void;
    readonly charge: Float64Array;
    readonly density: Float64Array;
    readonly energy: Float64Array;
    readonly times: Float64Array;
    readonly warnings: string;
    readonly x: Float64Array;
}

export class WasmIdentities {
    private constructor();
    free(): void;
    [Symbol.dispose](): void;
    readonly pc_lhs: Float64Array;
    readonly pc_relative: number;
    readonly pc_rhs: Float64Array;
    readonly times: Float64Array;
    readonly virial_lhs: Float64Array;
    readonly virial_relative: number;
    readonly virial_rhs: Float64Array;
    readonly warnings: string;
}

export function wasm_evolve(lambda: number, p: number, amplitude: number, width: number, wavenumber: number, t_final: number, frames: number): WasmEvolution;

export function wasm_identities(lambda: number, p: number, amplitude: number, width: number, wavenumber: number, t_final: number): WasmIdentities;

/**
 * Returns `[p_0, …, p_{n−1}, W_0, …, W_{n−1}]`.
 */
export function wasm_w_versus_p(lambda: number, amplitude: number, p_min: number, p_max: number, count: number): Float64Array;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly __wbg_wasmevolution_free: (a: number, b: number) => void;
    readonly __wbg_wasmidentities_free: (a: number, b: number) => void;
    readonly wasm_evolve: (a: number, b: number, c: number, d: number, e: number, f: number, g: number) => [number, number, number];
    readonly wasm_identities: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number, number];
    readonly wasm_w_versus_p: (a: number, b: number, c: number, d: number, e: number) => [number, number, number, number];
    readonly wasmevolution_charge: (a: number) => [number, number];
    readonly wasmevolution_density: (a: number) => [number, number];
    readonly wasmevolution_energy: (a: number) => [number, number];
    readonly wasmevolution_times: (a: number) => [number, number];
    readonly wasmevolution_warnings: (a: number) => [number, number];
    readonly wasmevolution_x: (a: number) => [number, number];
    readonly wasmidentities_pc_lhs: (a: number) => [number, number];
    readonly wasmidentities_pc_relative: (a: number) => number;
    readonly wasmidentities_pc_rhs: (a: number) => [number, number];
    readonly wasmidentities_times: (a: number) => [number, number];
    readonly wasmidentities_virial_lhs: (a: number) => [number, number];
    readonly wasmidentities_virial_relative: (a: number) => number;
    readonly wasmidentities_virial_rhs: (a: number) => [number, number];
    readonly wasmidentities_warnings: (a: number) => [number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __externref_table_dealloc: (a: number) => void;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
    readonly __wbindgen_start: () => void;
}

export type SyncInitInput = BufferSource | WebAssembly.Module;

/**
 * Instantiates the given `module`, which can either be bytes or
 * a precompiled `WebAssembly.Module`.
 *
 * @param {{ module: SyncInitInput }} module - Passing `SyncInitInput` directly is deprecated.
 *
 * @returns {InitOutput}
 */
export function initSync(module: { module: SyncInitInput } | SyncInitInput): InitOutput;

/**
 * If `module_or_path` is {RequestInfo} or {URL}, makes a request and
 * for everything else, calls `WebAssembly.instantiate` directly.
 *
 * @param {{ module_or_path: InitInput | Promise<InitInput> }} module_or_path - Passing `InitInput` directly is deprecated.
 *
 * @returns {Promise<InitOutput>}
 */
export default function __wbg_init (module_or_path?: { module_or_path: InitInput | Promise<InitInput> } | InitInput | Promise<InitInput>): Promise<InitOutput>;
