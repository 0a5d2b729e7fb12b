//! Browser front end for `nls-conserve`: a 1D Gaussian packet is evolved on a
//! fixed periodic box and the page plots what the library measures.
//!
//! The plain functions are what the tests exercise; the `wasm_*` exports wrap
//! them for JavaScript.

use nls_conserve::verify::{pc_residual, virial_chain, EnergyMode};
use nls_conserve::{evolve, make_grid, ComplexField, Grid, PowerNonlinearity, Result, SolverConfig, Trajectory};
use num_complex::Complex64;
use wasm_bindgen::prelude::*;

pub const POINTS: usize = 256;
pub const BOX_LENGTH: f64 = 40.0;
const DT: f64 = 1e-3;

/// Initial packet `a·exp(−x²/w²)·e^{ikx}` and the power law acting on it.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Packet {
    pub lambda: f64,
    pub p: f64,
    pub amplitude: f64,
    pub width: f64,
    /// Carrier wavenumber, snapped to the nearest grid mode.
    pub wavenumber: f64,
}

impl Packet {
    fn grid() -> Grid {
        make_grid(1, POINTS, BOX_LENGTH).expect("fixed demo grid is valid")
    }

    fn field(&self, grid: &Grid) -> ComplexField {
        let dk = std::f64::consts::TAU / BOX_LENGTH;
        let k = (self.wavenumber / dk).round() * dk;
        let w2 = self.width * self.width;
        ComplexField::from_fn(grid, |x| Complex64::from_polar(self.amplitude * (-x[0] * x[0] / w2).exp(), k * x[0]))
    }

    fn run(&self, t_final: f64, frames: usize) -> Result<Trajectory> {
        let nl = PowerNonlinearity::new(self.lambda, self.p)?;
        let steps = (t_final / DT).round().max(1.0) as usize;
        let store_every = (steps / frames.max(2)).max(1);
        let cfg = SolverConfig { store_every, ..SolverConfig::new(DT, steps as f64 * DT) };
        evolve(&self.field(&Self::grid()), &nl, &cfg)
    }
}

/// Densities and conserved quantities at each stored time.
#[derive(Clone, Debug, Default)]
pub struct Evolution {
    pub x: Vec<f64>,
    pub times: Vec<f64>,
    /// `times.len()` rows of `|u|²`, each `x.len()` long.
    pub density: Vec<f64>,
    pub charge: Vec<f64>,
    pub energy: Vec<f64>,
    pub warnings: Vec<String>,
}

pub fn run_evolution(packet: &Packet, t_final: f64, frames: usize) -> Result<Evolution> {
    let traj = packet.run(t_final, frames)?;
    let log = traj.observables();
    Ok(Evolution {
        x: traj.grid().coords().to_vec(),
        times: traj.times().to_vec(),
        density: traj.states().iter().flat_map(|u| u.values().iter().map(|z| z.norm_sqr())).collect(),
        charge: log.iter().map(|r| r.charge).collect(),
        energy: log.iter().map(|r| r.energy).collect(),
        warnings: traj.warnings().to_vec(),
    })
}

/// Both sides of the pseudo-conformal law and the virial identity over time.
#[derive(Clone, Debug, Default)]
pub struct IdentitySeries {
    pub times: Vec<f64>,
    pub pc_lhs: Vec<f64>,
    pub pc_rhs: Vec<f64>,
    pub virial_lhs: Vec<f64>,
    pub virial_rhs: Vec<f64>,
    pub pc_relative: f64,
    pub virial_relative: f64,
    pub warnings: Vec<String>,
}

pub fn run_identities(packet: &Packet, t_final: f64) -> Result<IdentitySeries> {
    let traj = packet.run(t_final, 200)?;
    let nl = PowerNonlinearity::new(packet.lambda, packet.p)?;
    let pc = pc_residual(&traj, &nl)?;
    let virial = virial_chain(&traj, &nl, EnergyMode::Initial)?.virial;
    Ok(IdentitySeries {
        times: pc.series.iter().map(|r| r.t).collect(),
        pc_lhs: pc.series.iter().map(|r| r.lhs).collect(),
        pc_rhs: pc.series.iter().map(|r| r.rhs).collect(),
        virial_lhs: virial.series.iter().map(|r| r.lhs).collect(),
        virial_rhs: virial.series.iter().map(|r| r.rhs).collect(),
        pc_relative: pc.max_relative_residual(),
        virial_relative: virial.max_relative_residual(),
        warnings: pc.warnings.iter().chain(&virial.warnings).cloned().collect(),
    })
}

/// `𝒲(u)` of a fixed real Gaussian as the exponent sweeps `[p_min, p_max]`;
/// it changes sign at the critical exponent `1 + 4/d`.
pub fn w_versus_p(lambda: f64, amplitude: f64, p_min: f64, p_max: f64, count: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    let grid = Packet::grid();
    let packet = Packet { lambda, p: p_min, amplitude, width: 1.0, wavenumber: 0.0 };
    let u = packet.field(&grid);
    let count = count.max(2);
    let ps: Vec<f64> = (0..count).map(|i| p_min + (p_max - p_min) * i as f64 / (count - 1) as f64).collect();
    let ws = ps.iter().map(|&p| Ok(PowerNonlinearity::new(lambda, p)?.w_integral(&u))).collect::<Result<_>>()?;
    Ok((ps, ws))
}

fn js_error(e: nls_conserve::Error) -> JsError {
    JsError::new(&e.to_string())
}

#[wasm_bindgen]
pub struct WasmEvolution(Evolution);

#[wasm_bindgen]
impl WasmEvolution {
    #[wasm_bindgen(getter)]
    pub fn x(&self) -> Vec<f64> {
        self.0.x.clone()
    }
    #[wasm_bindgen(getter)]
    pub fn times(&self) -> Vec<f64> {
        self.0.times.clone()
    }
    #[wasm_bindgen(getter)]
    pub fn density(&self) -> Vec<f64> {
        self.0.density.clone()
    }
    #[wasm_bindgen(getter)]
    pub fn charge(&self) -> Vec<f64> {
        self.0.charge.clone()
    }
    #[wasm_bindgen(getter)]
    pub fn energy(&self) -> Vec<f64> {
        self.0.energy.clone()
    }
    #[wasm_bindgen(getter)]
    pub fn warnings(&self) -> String {
        self.0.warnings.join("\n")
    }
}

#[wasm_bindgen]
pub struct WasmIdentities(IdentitySeries);

#[wasm_bindgen]
impl WasmIdentities {
    #[wasm_bindgen(getter)]
    pub fn times(&self) -> Vec<f64> {
        self.0.times.clone()
    }
    #[wasm_bindgen(getter)]
    pub fn pc_lhs(&self) -> Vec<f64> {
        self.0.pc_lhs.clone()
    }
    #[wasm_bindgen(getter)]
    pub fn pc_rhs(&self) -> Vec<f64> {
        self.0.pc_rhs.clone()
    }
    #[wasm_bindgen(getter)]
    pub fn virial_lhs(&self) -> Vec<f64> {
        self.0.virial_lhs.clone()
    }
    #[wasm_bindgen(getter)]
    pub fn virial_rhs(&self) -> Vec<f64> {
        self.0.virial_rhs.clone()
    }
    #[wasm_bindgen(getter)]
    pub fn pc_relative(&self) -> f64 {
        self.0.pc_relative
    }
    #[wasm_bindgen(getter)]
    pub fn virial_relative(&self) -> f64 {
        self.0.virial_relative
    }
    #[wasm_bindgen(getter)]
    pub fn warnings(&self) -> String {
        self.0.warnings.join("\n")
    }
}

#[wasm_bindgen]
pub fn wasm_evolve(
    lambda: f64,
    p: f64,
    amplitude: f64,
    width: f64,
    wavenumber: f64,
    t_final: f64,
    frames: usize,
) -> Result<WasmEvolution, JsError> {
    let packet = Packet { lambda, p, amplitude, width, wavenumber };
    run_evolution(&packet, t_final, frames).map(WasmEvolution).map_err(js_error)
}

#[wasm_bindgen]
pub fn wasm_identities(
    lambda: f64,
    p: f64,
    amplitude: f64,
    width: f64,
    wavenumber: f64,
    t_final: f64,
) -> Result<WasmIdentities, JsError> {
    let packet = Packet { lambda, p, amplitude, width, wavenumber };
    run_identities(&packet, t_final).map(WasmIdentities).map_err(js_error)
}

/// Returns `[p_0, …, p_{n−1}, W_0, …, W_{n−1}]`.
#[wasm_bindgen]
pub fn wasm_w_versus_p(lambda: f64, amplitude: f64, p_min: f64, p_max: f64, count: usize) -> Result<Vec<f64>, JsError> {
    let (mut ps, ws) = w_versus_p(lambda, amplitude, p_min, p_max, count).map_err(js_error)?;
    ps.extend(ws);
    Ok(ps)
}
