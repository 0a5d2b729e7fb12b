//! Pointwise-in-time algebra and the potential-energy calculus.
//!
//! Paper pairings translate to [`inner_product`](crate::field::inner_product)
//! as `⟨a, b̄⟩ = inner(a, b)`; every term below is written in that form.

use super::registry::Check;
use super::report::{IdentityReport, ReportParams, SeriesRow};
use super::virial::boundary_warning;
use crate::dynamics::{time_derivative, Trajectory};
use crate::error::{Error, Result};
use crate::field::{inner_product, ComplexField};
use crate::nonlinearity::PowerNonlinearity;
use crate::observables::{accumulate_series, Kernel, ObservableRecord};
use crate::spectral::{boundary_check, galilean, gradient};

const AXES: [&str; 3] = ["density_cancel_x", "density_cancel_y", "density_cancel_z"];

/// Rows of the three static identities for one field at one `s`.
fn algebra_rows(v: &ComplexField, nl: &PowerNonlinearity, s: f64) -> Vec<SeriesRow> {
    let fv = nl.f_eval(v);
    let grad_v = gradient(v);
    let grad_f = gradient(&fv);
    let jv = galilean(v, s).value;
    let jf = galilean(&fv, s).value;
    let d_sc = nl.scaling_derivative(v);
    let im_grad = grad_v.dot(&grad_f).im;

    let pseudo = jv.dot(&jf).im;
    let cross = grad_v.dot(&jf).re - jv.dot(&grad_f).re;
    let mut rows = vec![
        SeriesRow::labeled(s, "J_pseudo", pseudo, s * d_sc + s * s * im_grad),
        SeriesRow::labeled(s, "J_cross", cross, d_sc + 2.0 * s * im_grad),
    ];
    for (axis, g) in grad_v.components().iter().enumerate() {
        let density = inner_product(g, &fv).expect("same grid").re;
        rows.push(SeriesRow::labeled(s, AXES[axis], density, 0.0));
    }
    rows
}

/// Static identities for a single field `v` and weight time `s`:
///
/// * `Σ_j Im inner(J_j v, J_j f(v)) = s D_sc(v) + s² Σ_j Im inner(∂_j v, ∂_j f(v))`
/// * `Σ_j Re inner(∂_j v, J_j f(v)) − Re inner(J_j v, ∂_j f(v)) = D_sc(v) + 2s Σ_j Im inner(∂_j v, ∂_j f(v))`
/// * `Re inner(∂_j v, f(v)) = 0` for every axis
///
/// with `J_j = x_j + is∂_j`.
pub fn algebra_residuals(v: &ComplexField, nl: &PowerNonlinearity, s: f64) -> IdentityReport {
    let params = ReportParams::for_grid(v.grid()).with_nonlinearity(nl);
    let mut report =
        IdentityReport::new(Check::Algebra.name(), params, algebra_rows(v, nl, s), Check::Algebra.default_tolerance());
    if let Some(b) = boundary_check(v) {
        report.warn(format!("field not boundary-negligible: relative shell mass {:.3e}", b.relative_mass));
    }
    report
}

/// Static identities at every stored state, with `s = t`.
pub fn algebra_along(traj: &Trajectory, nl: &PowerNonlinearity) -> IdentityReport {
    let series = traj.times().iter().zip(traj.states()).flat_map(|(&t, u)| algebra_rows(u, nl, t)).collect();
    let mut report = IdentityReport::new(
        Check::Algebra.name(),
        ReportParams::for_trajectory(traj, nl),
        series,
        Check::Algebra.default_tolerance(),
    );
    if let Some(w) = boundary_warning(traj) {
        report.warn(w);
    }
    report
}

/// `Σ_j Im inner(∂_j u, ∂_j f(u))` against `2 Re inner(∂ₜu, f(u))` with
/// `∂ₜu = i(½Δu − f(u))`, for a single field.
pub fn im_grad_static(u: &ComplexField, nl: &PowerNonlinearity) -> IdentityReport {
    let params = ReportParams::for_grid(u.grid()).with_nonlinearity(nl);
    IdentityReport::new(Check::ImGrad.name(), params, vec![im_grad_row(u, nl, 0.0)], Check::ImGrad.default_tolerance())
}

fn im_grad_row(u: &ComplexField, nl: &PowerNonlinearity, t: f64) -> SeriesRow {
    let fu = nl.f_eval(u);
    let lhs = gradient(u).dot(&gradient(&fu)).im;
    let rhs = 2.0 * inner_product(&time_derivative(u, nl), &fu).expect("same grid").re;
    SeriesRow::real(t, lhs, rhs)
}

/// [`im_grad_static`] at every stored state, read from the observable log.
pub fn im_grad_residual(traj: &Trajectory, nl: &PowerNonlinearity) -> IdentityReport {
    let series = traj.observables().iter().map(|r| SeriesRow::real(r.t, r.im_grad, r.potential_rate)).collect();
    IdentityReport::new(
        Check::ImGrad.name(),
        ReportParams::for_trajectory(traj, nl),
        series,
        Check::ImGrad.default_tolerance(),
    )
}

fn column(log: &[ObservableRecord], f: impl Fn(&ObservableRecord) -> f64) -> Vec<f64> {
    log.iter().map(f).collect()
}

/// Finite-difference derivative of uniformly sampled values: fourth order
/// (five-point stencils, one-sided near the ends) when at least five samples
/// exist, second order otherwise.
fn sampled_derivative(values: &[f64], h: f64) -> Vec<f64> {
    let n = values.len();
    let v = values;
    if n < 5 {
        return (0..n)
            .map(|m| {
                if m == 0 {
                    (-3.0 * v[0] + 4.0 * v[1] - v[2]) / (2.0 * h)
                } else if m == n - 1 {
                    (3.0 * v[m] - 4.0 * v[m - 1] + v[m - 2]) / (2.0 * h)
                } else {
                    (v[m + 1] - v[m - 1]) / (2.0 * h)
                }
            })
            .collect();
    }
    let forward = |a: &dyn Fn(usize) -> f64, m: usize| match m {
        0 => -25.0 * a(0) + 48.0 * a(1) - 36.0 * a(2) + 16.0 * a(3) - 3.0 * a(4),
        _ => -3.0 * a(0) - 10.0 * a(1) + 18.0 * a(2) - 6.0 * a(3) + a(4),
    };
    (0..n)
        .map(|m| {
            let d = if m < 2 {
                forward(&|j| v[j], m)
            } else if m >= n - 2 {
                -forward(&|j| v[n - 1 - j], n - 1 - m)
            } else {
                v[m - 2] - 8.0 * v[m - 1] + 8.0 * v[m + 1] - v[m + 2]
            };
            d / (12.0 * h)
        })
        .collect()
}

fn require_samples(traj: &Trajectory) -> Result<()> {
    if traj.len() < 3 {
        return Err(Error::Identity(format!("need at least three stored samples, got {}", traj.len())));
    }
    Ok(())
}

fn potential_rows(traj: &Trajectory, k: u32, with_rate: bool) -> Result<Vec<SeriesRow>> {
    if !(1..=2).contains(&k) {
        return Err(Error::Identity(format!("weight power k must be 1 or 2, got {k}")));
    }
    require_samples(traj)?;
    let log = traj.observables();
    let h = traj.sample_spacing();
    let quad = traj.solver().quad_order;
    let potential = column(log, |r| r.potential);
    let rate = column(log, |r| r.potential_rate);
    let mut rows = Vec::new();
    if with_rate {
        let fd = sampled_derivative(&potential, h);
        rows.extend(log.iter().zip(&fd).map(|(r, d)| SeriesRow::labeled(r.t, "rate", *d, r.potential_rate)));
    }
    let kf = k as i32;
    let weighted: Vec<f64> = log.iter().zip(&rate).map(|(r, g)| r.t.powi(kf) * g).collect();
    let lower: Vec<f64> = log.iter().zip(&potential).map(|(r, v)| r.t.powi(kf - 1) * v).collect();
    let lhs = accumulate_series(&weighted, h, Kernel::One, quad)?;
    let lower = accumulate_series(&lower, h, Kernel::One, quad)?;
    let label = format!("integrated_k{k}");
    rows.extend(
        log.iter()
            .enumerate()
            .map(|(m, r)| SeriesRow::labeled(r.t, &label, lhs[m], r.t.powi(kf) * r.potential - k as f64 * lower[m])),
    );
    Ok(rows)
}

/// `d𝒱/dt = 2 Re inner(∂ₜu, f(u))` (rows `rate`, central differences of the
/// logged potential) and
/// `2∫₀ᵗ sᵏ Re inner(∂ₜu, f(u)) ds = tᵏ𝒱(u(t)) − k∫₀ᵗ sᵏ⁻¹𝒱(u(s)) ds`
/// (rows `integrated_k<k>`).
pub fn potential_calculus_residual(traj: &Trajectory, nl: &PowerNonlinearity, k: u32) -> Result<IdentityReport> {
    let rows = potential_rows(traj, k, true)?;
    Ok(IdentityReport::new(
        Check::PotentialCalculus.name(),
        ReportParams::for_trajectory(traj, nl),
        rows,
        Check::PotentialCalculus.default_tolerance(),
    ))
}

/// Rate rows plus the integrated form for both `k = 1` and `k = 2`.
pub fn potential_calculus(traj: &Trajectory, nl: &PowerNonlinearity) -> Result<IdentityReport> {
    let mut rows = potential_rows(traj, 1, true)?;
    rows.extend(potential_rows(traj, 2, false)?);
    Ok(IdentityReport::new(
        Check::PotentialCalculus.name(),
        ReportParams::for_trajectory(traj, nl),
        rows,
        Check::PotentialCalculus.default_tolerance(),
    ))
}

/// `∫₀ᵗ Σ_j Im inner(J_j u, J_j f(u)) ds = t²𝒱(u(t)) − ∫₀ᵗ s𝒲(u(s)) ds` (rows
/// `pseudo`) and
/// `∫₀ᵗ Σ_j [Re inner(∂_j u, J_j f(u)) − Re inner(J_j u, ∂_j f(u))] ds = −∫₀ᵗ𝒲 ds + 2t𝒱(u(t))`
/// (rows `cross`), with `J = J(s)` along the trajectory.
pub fn integrated_j_residuals(traj: &Trajectory, nl: &PowerNonlinearity) -> Result<IdentityReport> {
    require_samples(traj)?;
    let log = traj.observables();
    let h = traj.sample_spacing();
    let quad = traj.solver().quad_order;
    let pseudo = accumulate_series(&column(log, |r| r.j_pseudo), h, Kernel::One, quad)?;
    let cross = accumulate_series(&column(log, |r| r.j_cross), h, Kernel::One, quad)?;
    let w = column(log, |r| r.w_integral);
    let sw = accumulate_series(&w, h, Kernel::S, quad)?;
    let w1 = accumulate_series(&w, h, Kernel::One, quad)?;
    let mut rows = Vec::with_capacity(2 * log.len());
    for (m, r) in log.iter().enumerate() {
        rows.push(SeriesRow::labeled(r.t, "pseudo", pseudo[m], r.t * r.t * r.potential - sw[m]));
    }
    for (m, r) in log.iter().enumerate() {
        rows.push(SeriesRow::labeled(r.t, "cross", cross[m], -w1[m] + 2.0 * r.t * r.potential));
    }
    let mut report = IdentityReport::new(
        Check::IntegratedJ.name(),
        ReportParams::for_trajectory(traj, nl),
        rows,
        Check::IntegratedJ.default_tolerance(),
    );
    if let Some(w) = boundary_warning(traj) {
        report.warn(w);
    }
    Ok(report)
}
