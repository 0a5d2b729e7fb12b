use std::str::FromStr;

use num_complex::Complex64;

use super::registry::Check;
use super::report::{IdentityReport, ReportParams, SeriesRow};
use crate::dynamics::{running_duhamel, Trajectory};
use crate::error::{Error, Result};
use crate::field::{inner_product, ComplexField};
use crate::nonlinearity::PowerNonlinearity;
use crate::quadrature::{cumulative, Quadrature};
use crate::spectral::{free_propagate, partial};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Data fed into the master identity when it is checked along a solved
/// trajectory.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum MasterPairing {
    /// `ψ₁ = ψ₂ = φ`, `g₁ = g₂ = f(u)`.
    Charge,
    /// `ψ₁ = φ`, `ψ₂ = ∂₁φ`, `g₁ = f(u)`, `g₂ = ∂₁f(u)`.
    #[default]
    Momentum,
}

impl FromStr for MasterPairing {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "charge" => Ok(MasterPairing::Charge),
            "momentum" => Ok(MasterPairing::Momentum),
            other => Err(Error::InvalidConfig(format!("unknown master pairing {other:?}"))),
        }
    }
}

fn uniform_spacing(times: &[f64]) -> Result<f64> {
    if times.len() < 3 {
        return Err(Error::Identity(format!("need at least three time samples, got {}", times.len())));
    }
    if times[0] != 0.0 {
        return Err(Error::Identity("time samples must start at 0".into()));
    }
    let h = times[1];
    for (m, &t) in times.iter().enumerate() {
        if (t - m as f64 * h).abs() > 1e-9 * h.max(t.abs() * 1e-6) {
            return Err(Error::Identity("time samples must be uniformly spaced".into()));
        }
    }
    Ok(h)
}

/// `v(t) = U(t)ψ − i∫₀ᵗ U(t−s) g(s) ds` at every sample.
fn duhamel_solution(psi: &ComplexField, g: &[ComplexField], h: f64, quad: Quadrature) -> Result<Vec<ComplexField>> {
    let forced = running_duhamel(g, h, quad)?;
    Ok(forced.iter().enumerate().map(|(m, d)| &free_propagate(psi, m as f64 * h) + d).collect())
}

/// Residual of `(v₁(t), v₂(t)) = (ψ₁, ψ₂) + i∫₀ᵗ [inner(v₁, g₂) − inner(g₁, v₂)] ds`
/// where `v_j` solves `i∂ₜv_j + ½Δv_j = g_j`, `v_j(0) = ψ_j`.
///
/// `g1`, `g2` are sampled at the uniform `times` (starting at 0).
pub fn master_residual(
    psi1: &ComplexField,
    psi2: &ComplexField,
    g1: &[ComplexField],
    g2: &[ComplexField],
    times: &[f64],
    quad: Quadrature,
) -> Result<IdentityReport> {
    if g1.len() != times.len() || g2.len() != times.len() {
        return Err(Error::Identity(format!(
            "sampling mismatch: {} times, {} and {} forcing samples",
            times.len(),
            g1.len(),
            g2.len()
        )));
    }
    let h = uniform_spacing(times)?;
    let grid = psi1.grid();
    if psi2.grid() != grid || g1.iter().chain(g2).any(|g| g.grid() != grid) {
        return Err(Error::GridMismatch);
    }
    let v1 = duhamel_solution(psi1, g1, h, quad)?;
    let v2 = duhamel_solution(psi2, g2, h, quad)?;

    let integrand: Vec<Complex64> = (0..times.len())
        .map(|m| inner_product(&v1[m], &g2[m]).unwrap() - inner_product(&g1[m], &v2[m]).unwrap())
        .collect();
    let running = cumulative(&integrand, h, quad.running_rule())?;
    let initial = inner_product(psi1, psi2)?;

    let series = times
        .iter()
        .enumerate()
        .map(|(m, &t)| {
            let lhs = inner_product(&v1[m], &v2[m]).unwrap();
            let rhs = initial + I * running[m];
            SeriesRow {
                lhs_im: Some(lhs.im),
                rhs_im: Some(rhs.im),
                residual: (lhs - rhs).norm(),
                ..SeriesRow::real(t, lhs.re, rhs.re)
            }
        })
        .collect();
    let params = ReportParams::for_grid(grid).with_quadrature(quad);
    Ok(IdentityReport::new(Check::Master.name(), params, series, Check::Master.default_tolerance()))
}

/// Master identity along a solved trajectory with forcing `f(u(s))`.
pub fn master_along(traj: &Trajectory, nl: &PowerNonlinearity, pairing: MasterPairing) -> Result<IdentityReport> {
    let forcing: Vec<ComplexField> = traj.states().iter().map(|u| nl.f_eval(u)).collect();
    let phi = traj.initial();
    let quad = traj.solver().quad_order;
    let report = match pairing {
        MasterPairing::Charge => master_residual(phi, phi, &forcing, &forcing, traj.times(), quad)?,
        MasterPairing::Momentum => {
            let dphi = partial(phi, 0);
            let dforcing: Vec<ComplexField> = forcing.iter().map(|g| partial(g, 0)).collect();
            master_residual(phi, &dphi, &forcing, &dforcing, traj.times(), quad)?
        }
    };
    Ok(report.with_params(ReportParams::for_trajectory(traj, nl)))
}
