//! Brute-force references for validating the fast paths: a dense DFT
//! propagator, a finite-difference scaling derivative with spectral
//! resampling, and exact solutions checked by substitution.
//!
//! None of this goes through the FFT plans held by [`Grid`].

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::field::ComplexField;
use crate::grid::Grid;
use crate::nonlinearity::PowerNonlinearity;
use crate::spectral::laplacian;

/// Largest `n` accepted by [`dense_propagate`].
pub const DENSE_MAX_N: usize = 32;
/// Largest dimension accepted by [`dense_propagate`].
pub const DENSE_MAX_DIM: usize = 2;

/// Relative spectral mass allowed beyond two thirds of the Nyquist mode
/// before resampling is refused.
pub const RESAMPLE_TAIL_TOLERANCE: f64 = 1e-6;

/// Wavenumber `2πm/L` of mode index `i` in wraparound order.
fn wavenumber(i: usize, n: usize, length: f64) -> f64 {
    let m = if i < n / 2 { i as i64 } else { i as i64 - n as i64 };
    2.0 * PI * m as f64 / length
}

fn axis_coords(grid: &Grid) -> Vec<f64> {
    let (n, l) = (grid.n(), grid.length());
    (0..n).map(|j| -0.5 * l + j as f64 * l / n as f64).collect()
}

/// `U(t)u` by explicit sums over every (mode, point) pair.
pub fn dense_propagate(u: &ComplexField, t: f64) -> Result<ComplexField> {
    let grid = u.grid();
    let (d, n, l) = (grid.dim(), grid.n(), grid.length());
    if n > DENSE_MAX_N || d > DENSE_MAX_DIM {
        return Err(Error::Oracle(format!(
            "dense propagator limited to n <= {DENSE_MAX_N}, d <= {DENSE_MAX_DIM}; got n = {n}, d = {d}"
        )));
    }
    let x = axis_coords(grid);
    let total = n.pow(d as u32);
    // Multi-indices, last axis fastest.
    let split = |flat: usize| -> Vec<usize> {
        let mut idx = vec![0; d];
        let mut rem = flat;
        for a in (0..d).rev() {
            idx[a] = rem % n;
            rem /= n;
        }
        idx
    };
    let points: Vec<Vec<f64>> = (0..total).map(|p| split(p).iter().map(|&j| x[j]).collect()).collect();
    let modes: Vec<Vec<f64>> = (0..total).map(|k| split(k).iter().map(|&i| wavenumber(i, n, l)).collect()).collect();
    let phase = |k: &[f64], p: &[f64]| k.iter().zip(p).map(|(a, b)| a * b).sum::<f64>();

    let coeffs: Vec<Complex64> = modes
        .iter()
        .map(|k| {
            let c: Complex64 =
                points.iter().zip(u.values()).map(|(p, z)| z * Complex64::from_polar(1.0, -phase(k, p))).sum();
            let k2: f64 = k.iter().map(|v| v * v).sum();
            c * Complex64::from_polar(1.0, -0.5 * t * k2)
        })
        .collect();
    let values = points
        .iter()
        .map(|p| {
            let s: Complex64 =
                modes.iter().zip(&coeffs).map(|(k, c)| c * Complex64::from_polar(1.0, phase(k, p))).sum();
            s / total as f64
        })
        .collect();
    ComplexField::new(grid.clone(), values)
}

/// Dense matrix evaluating the trigonometric interpolant of samples on the
/// axis at the points `scale · x_a` (Nyquist mode taken as a cosine).
fn interpolation_matrix(grid: &Grid, scale: f64) -> Vec<Complex64> {
    let (n, l) = (grid.n(), grid.length());
    let x = axis_coords(grid);
    let x0 = x[0];
    let mut m = vec![Complex64::new(0.0, 0.0); n * n];
    for a in 0..n {
        let y = scale * x[a] - x0;
        for (j, &xj) in x.iter().enumerate() {
            let s = xj - x0;
            let mut acc = Complex64::new(0.0, 0.0);
            for i in 0..n {
                let k = wavenumber(i, n, l);
                if i == n / 2 {
                    acc += Complex64::new((k * (y - s)).cos(), 0.0);
                } else {
                    acc += Complex64::from_polar(1.0, k * (y - s));
                }
            }
            m[a * n + j] = acc / n as f64;
        }
    }
    m
}

/// Applies the same `n × n` matrix along every axis.
fn apply_separable(u: &ComplexField, matrix: &[Complex64]) -> ComplexField {
    let grid = u.grid();
    let (d, n) = (grid.dim(), grid.n());
    let mut data = u.values().to_vec();
    for axis in 0..d {
        let stride = n.pow((d - 1 - axis) as u32);
        let block = stride * n;
        let mut out = vec![Complex64::new(0.0, 0.0); data.len()];
        for base in (0..data.len()).step_by(block) {
            for inner in 0..stride {
                for a in 0..n {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for j in 0..n {
                        acc += matrix[a * n + j] * data[base + inner + j * stride];
                    }
                    out[base + inner + a * stride] = acc;
                }
            }
        }
        data = out;
    }
    ComplexField::new(grid.clone(), data).expect("finite resample")
}

/// Fraction of spectral mass with some `|m_j| > n/3`, from a dense DFT.
fn spectral_tail(u: &ComplexField) -> f64 {
    let grid = u.grid();
    let n = grid.n();
    let x = axis_coords(grid);
    // Per-axis DFT matrix; reuse the separable apply.
    let mut dft = vec![Complex64::new(0.0, 0.0); n * n];
    for i in 0..n {
        let k = wavenumber(i, n, grid.length());
        for (j, &xj) in x.iter().enumerate() {
            dft[i * n + j] = Complex64::from_polar(1.0, -k * (xj - x[0]));
        }
    }
    let spec = apply_separable(u, &dft);
    let limit = n / 3;
    let d = grid.dim();
    let (mut tail, mut total) = (0.0, 0.0);
    for (flat, c) in spec.values().iter().enumerate() {
        let w = c.norm_sqr();
        total += w;
        let mut rem = flat;
        let mut high = false;
        for _ in 0..d {
            let i = rem % n;
            rem /= n;
            let m = if i < n / 2 { i } else { n - i };
            high |= m > limit;
        }
        if high {
            tail += w;
        }
    }
    if total == 0.0 {
        0.0
    } else {
        tail / total
    }
}

/// `u_μ(x) = μ^{d/2} u(μx)` by trigonometric interpolation.
pub fn dilate(u: &ComplexField, mu: f64) -> ComplexField {
    let d = u.grid().dim() as f64;
    let m = interpolation_matrix(u.grid(), mu);
    apply_separable(u, &m).scale(Complex64::new(mu.powf(0.5 * d), 0.0))
}

/// `[𝒱(u_{1+h}) − 𝒱(u_{1−h})] / 2h`, a second-order approximation of the
/// scaling derivative.
pub fn fd_scaling_derivative(nl: &PowerNonlinearity, u: &ComplexField, h: f64) -> Result<f64> {
    if !(1e-6..=1e-2).contains(&h) {
        return Err(Error::Oracle(format!("step h = {h} outside [1e-6, 1e-2]")));
    }
    let tail = spectral_tail(u);
    if tail > RESAMPLE_TAIL_TOLERANCE {
        return Err(Error::Oracle(format!(
            "field under-resolved for resampling: spectral tail {tail:.3e} beyond 2/3 Nyquist"
        )));
    }
    let plus = nl.v_integral(&dilate(u, 1.0 + h));
    let minus = nl.v_integral(&dilate(u, 1.0 - h));
    Ok((plus - minus) / (2.0 * h))
}

/// Closed-form solutions of `i∂ₜu + ½Δu = f(u)`.
#[derive(Clone, Debug, PartialEq)]
pub enum ExactSolution {
    /// `A e^{i(k·x − ωt)}`, `ω = |k|²/2 + λ|A|^{p−1}`.
    PlaneWave { amplitude: Complex64, k: Vec<f64> },
    /// `sech(x − vt) e^{i(vx + (1 − v²)t/2)}` for `d = 1, p = 3, λ = −1`.
    Soliton { velocity: f64 },
}

/// Shortest box accepted for the soliton.
pub const SOLITON_MIN_LENGTH: f64 = 30.0;

fn lattice_compatible(k: f64, length: f64) -> bool {
    let m = k * length / (2.0 * PI);
    (m - m.round()).abs() <= 1e-9 * m.abs().max(1.0)
}

impl ExactSolution {
    /// Checks that the solution exists for `nl` and fits on `grid`.
    pub fn validate(&self, grid: &Grid, nl: &PowerNonlinearity) -> Result<()> {
        match self {
            ExactSolution::PlaneWave { k, .. } => {
                if k.len() != grid.dim() {
                    return Err(Error::Oracle(format!(
                        "wave vector has {} components, grid has d = {}",
                        k.len(),
                        grid.dim()
                    )));
                }
                if let Some(bad) = k.iter().find(|&&kj| !lattice_compatible(kj, grid.length())) {
                    return Err(Error::Oracle(format!("k = {bad} is not a multiple of 2π/L")));
                }
                Ok(())
            }
            ExactSolution::Soliton { velocity } => {
                if grid.dim() != 1 || nl.exponent() != 3.0 || nl.lambda() != -1.0 {
                    return Err(Error::Oracle("soliton needs d = 1, p = 3, lambda = -1".into()));
                }
                if grid.length() < SOLITON_MIN_LENGTH {
                    return Err(Error::Oracle(format!("soliton needs L >= {SOLITON_MIN_LENGTH}")));
                }
                if !lattice_compatible(*velocity, grid.length()) {
                    return Err(Error::Oracle(format!("velocity {velocity} is not a multiple of 2π/L")));
                }
                Ok(())
            }
        }
    }

    /// Temporal frequency of a plane wave.
    pub fn omega(&self, nl: &PowerNonlinearity) -> Option<f64> {
        match self {
            ExactSolution::PlaneWave { amplitude, k } => {
                let k2: f64 = k.iter().map(|v| v * v).sum();
                Some(0.5 * k2 + nl.phase_rate(amplitude.norm()))
            }
            ExactSolution::Soliton { .. } => None,
        }
    }

    /// The solution at time `t`, sampled on `grid` (the soliton centre is
    /// wrapped into the box).
    pub fn eval(&self, t: f64, grid: &Grid, nl: &PowerNonlinearity) -> Result<ComplexField> {
        self.validate(grid, nl)?;
        Ok(match self {
            ExactSolution::PlaneWave { amplitude, k } => {
                let omega = self.omega(nl).expect("plane wave");
                ComplexField::from_fn(grid, |x| {
                    let phase: f64 = k.iter().zip(x).map(|(a, b)| a * b).sum::<f64>() - omega * t;
                    amplitude * Complex64::from_polar(1.0, phase)
                })
            }
            ExactSolution::Soliton { velocity: v } => {
                let l = grid.length();
                let centre = v * t;
                ComplexField::from_fn(grid, |x| {
                    let xi = (x[0] - centre + 0.5 * l).rem_euclid(l) - 0.5 * l;
                    Complex64::from_polar(1.0 / xi.cosh(), v * x[0] + 0.5 * (1.0 - v * v) * t)
                })
            }
        })
    }

    /// `‖i∂ₜu + ½Δu − f(u)‖ / ‖u‖` at time `t`, with `∂ₜ` from a fourth-order
    /// central difference of step `5e-4` and the spectral Laplacian.
    pub fn substitution_residual(&self, t: f64, grid: &Grid, nl: &PowerNonlinearity) -> Result<f64> {
        let delta = 5e-4;
        let at = |s: f64| self.eval(t + s * delta, grid, nl);
        let (m2, m1, p1, p2) = (at(-2.0)?, at(-1.0)?, at(1.0)?, at(2.0)?);
        let u = self.eval(t, grid, nl)?;
        let mut dudt = &m2 - &p2;
        dudt.axpy(Complex64::new(8.0, 0.0), &(&p1 - &m1));
        let dudt = dudt.scale(Complex64::new(1.0 / (12.0 * delta), 0.0));
        let mut residual = dudt.scale(Complex64::new(0.0, 1.0));
        residual.axpy(Complex64::new(0.5, 0.0), &laplacian(&u));
        residual.axpy(Complex64::new(-1.0, 0.0), &nl.f_eval(&u));
        Ok(residual.norm() / u.norm())
    }
}
