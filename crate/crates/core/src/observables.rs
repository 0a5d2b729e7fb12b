//! Scalar observables of a field and running time integrals over a
//! trajectory.
//!
//! Every `Im(·,·)` below is spelled with [`inner_product`] argument order:
//! `cross_term = Σ_j Im inner(∂_j u, x_j u)`.

use std::io::Write;

use num_complex::Complex64;
use serde::Serialize;

use crate::dynamics::{time_derivative, Trajectory};
use crate::error::{Error, Result};
use crate::field::{inner_product, ComplexField, VectorField};
use crate::nonlinearity::PowerNonlinearity;
use crate::quadrature::{cumulative, Quadrature};
use crate::spectral::{boundary_mass_fraction, galilean, gradient, weight_x};

/// Everything the identity checks read at one stored time.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ObservableRecord {
    pub t: f64,
    pub charge: f64,
    pub energy: f64,
    pub momentum: Vec<f64>,
    pub potential: f64,
    pub w_integral: f64,
    pub grad_norm_sq: f64,
    pub j_norm_sq: f64,
    pub x_norm_sq: f64,
    pub cross_term: f64,
    /// `2 Re inner(∂ₜu, f(u))`
    pub potential_rate: f64,
    /// `Σ_j Im inner(∂_j u, ∂_j f(u))`
    pub im_grad: f64,
    /// `Σ_j Im inner(J_j(t)u, J_j(t)f(u))`
    pub j_pseudo: f64,
    /// `Σ_j Re inner(∂_j u, J_j(t)f(u)) − Re inner(J_j(t)u, ∂_j f(u))`
    pub j_cross: f64,
    /// Relative mass near the box boundary.
    pub boundary_mass: f64,
}

pub fn charge(u: &ComplexField) -> f64 {
    u.norm_sq()
}

pub fn grad_norm_sq(u: &ComplexField) -> f64 {
    gradient(u).norm_sq()
}

/// `½‖∇u‖² + 𝒱(u)`
pub fn energy(u: &ComplexField, nl: &PowerNonlinearity) -> f64 {
    0.5 * grad_norm_sq(u) + nl.v_integral(u)
}

/// `P_j = Im ∫ ū ∂_j u = Im inner(∂_j u, u)`
pub fn momentum(u: &ComplexField) -> Vec<f64> {
    momentum_from(u, &gradient(u))
}

fn momentum_from(u: &ComplexField, grad: &VectorField) -> Vec<f64> {
    grad.components().iter().map(|g| g.dot(u).im).collect()
}

/// `Σ_j ‖x_j u + it ∂_j u‖²`
pub fn j_norm_sq(u: &ComplexField, t: f64) -> f64 {
    galilean(u, t).value.norm_sq()
}

pub fn x_norm_sq(u: &ComplexField) -> f64 {
    weight_x(u).value.norm_sq()
}

/// `Σ_j Im inner(∂_j u, x_j u)`
pub fn cross_term(u: &ComplexField) -> f64 {
    cross_from(&gradient(u), &weight_x(u).value)
}

fn cross_from(grad: &VectorField, xu: &VectorField) -> f64 {
    grad.dot(xu).im
}

fn combine(x: &VectorField, grad: &VectorField, t: f64) -> VectorField {
    let it = Complex64::new(0.0, t);
    let components = x
        .components()
        .iter()
        .zip(grad.components())
        .map(|(a, b)| {
            let mut c = a.clone();
            c.axpy(it, b);
            c
        })
        .collect();
    VectorField::new(components).expect("components share a grid")
}

/// All observables of `u` at time `t`.
pub fn record(u: &ComplexField, t: f64, nl: &PowerNonlinearity) -> ObservableRecord {
    let grad = gradient(u);
    let xu = weight_x(u).value;
    let fu = nl.f_eval(u);
    let grad_f = gradient(&fu);
    let xf = weight_x(&fu).value;
    let ju = combine(&xu, &grad, t);
    let jf = combine(&xf, &grad_f, t);

    let grad_norm_sq = grad.norm_sq();
    let potential = nl.v_integral(u);
    let dudt = time_derivative(u, nl);
    let potential_rate = 2.0 * inner_product(&dudt, &fu).expect("same grid").re;
    let im_grad = grad.dot(&grad_f).im;
    let j_pseudo = ju.dot(&jf).im;
    let j_cross = grad.dot(&jf).re - ju.dot(&grad_f).re;

    ObservableRecord {
        t,
        charge: u.norm_sq(),
        energy: 0.5 * grad_norm_sq + potential,
        momentum: momentum_from(u, &grad),
        potential,
        w_integral: nl.w_integral(u),
        grad_norm_sq,
        j_norm_sq: ju.norm_sq(),
        x_norm_sq: xu.norm_sq(),
        cross_term: cross_from(&grad, &xu),
        potential_rate,
        im_grad,
        j_pseudo,
        j_cross,
        boundary_mass: boundary_mass_fraction(u),
    }
}

/// Weight of a running time integral.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kernel {
    /// `∫₀ᵗ g ds`
    One,
    /// `∫₀ᵗ s g ds`
    S,
    /// `∫₀ᵗ ∫₀ˢ g dτ ds`
    Double,
}

/// Running integral of samples `g_m = g(m h)` at every sample time.
pub fn accumulate_series(values: &[f64], h: f64, kernel: Kernel, rule: Quadrature) -> Result<Vec<f64>> {
    let rule = rule.running_rule();
    match kernel {
        Kernel::One => cumulative(values, h, rule),
        Kernel::S => {
            let weighted: Vec<f64> = values.iter().enumerate().map(|(m, g)| m as f64 * h * g).collect();
            cumulative(&weighted, h, rule)
        }
        Kernel::Double => {
            let inner = cumulative(values, h, rule)?;
            cumulative(&inner, h, rule)
        }
    }
}

/// Running integral of `𝒲(u(s))` over the trajectory's stored samples.
pub fn accumulate(traj: &Trajectory, kernel: Kernel) -> Result<Vec<f64>> {
    if traj.len() < 3 {
        return Err(Error::Quadrature(format!(
            "running integrals need at least three stored samples, got {}",
            traj.len()
        )));
    }
    let w: Vec<f64> = traj.observables().iter().map(|r| r.w_integral).collect();
    accumulate_series(&w, traj.sample_spacing(), kernel, traj.solver().quad_order)
}

/// CSV header for a `dim`-dimensional run.
pub fn csv_header(dim: usize) -> String {
    let momentum = ["px", "py", "pz"][..dim].join(",");
    format!("t,charge,energy,{momentum},potential,w_integral,grad_norm_sq,j_norm_sq,x_norm_sq,cross_term")
}

pub fn write_csv<W: Write>(log: &[ObservableRecord], mut out: W) -> Result<()> {
    let dim = log.first().map_or(1, |r| r.momentum.len());
    writeln!(out, "{}", csv_header(dim))?;
    for r in log {
        let mut row = vec![r.t, r.charge, r.energy];
        row.extend(&r.momentum);
        row.extend([r.potential, r.w_integral, r.grad_norm_sq, r.j_norm_sq, r.x_norm_sq, r.cross_term]);
        let row: Vec<String> = row.iter().map(|v| v.to_string()).collect();
        writeln!(out, "{}", row.join(","))?;
    }
    Ok(())
}
