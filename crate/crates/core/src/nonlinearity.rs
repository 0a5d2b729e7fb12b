//! Power nonlinearity `f(z) = λ|z|^{p-1} z` and the potential-energy
//! functionals built from it.
//!
//! With `V(z) = 2λ/(p+1) |z|^{p+1}` one has `f = ∂V/∂z̄` (Wirtinger), `V(0) = 0`
//! and `V'(r) = 2λ r^p`. The scaling derivative and the density `W` are
//! evaluated from their pointwise definitions, never from a hand-reduced
//! multiple of `𝒱`.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::ComplexField;

/// `|p - (1 + 4/d)|` below which the exponent counts as L²-critical.
pub const CRITICAL_TOLERANCE: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PowerNonlinearity {
    lambda: f64,
    exponent: f64,
}

impl PowerNonlinearity {
    /// `lambda` any finite real (negative focusing, positive defocusing), `p > 1`.
    pub fn new(lambda: f64, exponent: f64) -> Result<Self> {
        if !lambda.is_finite() {
            return Err(Error::InvalidNonlinearity(format!("lambda must be finite, got {lambda}")));
        }
        if !(exponent.is_finite() && exponent > 1.0) {
            return Err(Error::InvalidNonlinearity(format!("exponent must satisfy 1 < p < ∞, got {exponent}")));
        }
        Ok(Self { lambda, exponent })
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn exponent(&self) -> f64 {
        self.exponent
    }

    /// Energy-subcritical bound `p <= 1 + 4/(d-2)` for `d >= 3`.
    pub fn validate_dimension(&self, dim: usize) -> Result<()> {
        if dim >= 3 {
            let bound = 1.0 + 4.0 / (dim as f64 - 2.0);
            if self.exponent > bound {
                return Err(Error::InvalidNonlinearity(format!(
                    "p = {} exceeds 1 + 4/(d-2) = {bound} in d = {dim}",
                    self.exponent
                )));
            }
        }
        Ok(())
    }

    /// L²-critical exponent `p = 1 + 4/d`.
    pub fn is_critical(&self, dim: usize) -> bool {
        (self.exponent - (1.0 + 4.0 / dim as f64)).abs() <= CRITICAL_TOLERANCE
    }

    /// Canonical admissible pair `(q, r) = (4(p+1)/(d(p-1)), p+1)`.
    pub fn admissible_pair(&self, dim: usize) -> (f64, f64) {
        let p = self.exponent;
        (4.0 * (p + 1.0) / (dim as f64 * (p - 1.0)), p + 1.0)
    }

    /// `|z|^{p-1}` with the value 0 at the origin.
    #[inline]
    fn modulus_power(&self, r: f64) -> f64 {
        if r == 0.0 {
            0.0
        } else {
            ((self.exponent - 1.0) * r.ln()).exp()
        }
    }

    /// `λ|z|^{p-1}`, so that `f(z) = phase_rate(|z|) z`.
    #[inline]
    pub fn phase_rate(&self, r: f64) -> f64 {
        self.lambda * self.modulus_power(r)
    }

    #[inline]
    pub fn f(&self, z: Complex64) -> Complex64 {
        z * (self.lambda * self.modulus_power(z.norm()))
    }

    /// `V(z) = 2λ/(p+1) |z|^{p+1}`
    #[inline]
    pub fn potential(&self, z: Complex64) -> f64 {
        let r = z.norm();
        2.0 * self.lambda / (self.exponent + 1.0) * r * r * self.modulus_power(r)
    }

    /// `V'(r) = 2λ r^p`
    #[inline]
    pub fn potential_derivative(&self, r: f64) -> f64 {
        2.0 * self.lambda * r * self.modulus_power(r)
    }

    /// `W(z) = (d+2)V(z) - (d/2) V'(|z|)|z|`
    #[inline]
    pub fn w_density(&self, z: Complex64, dim: usize) -> f64 {
        let d = dim as f64;
        let r = z.norm();
        (d + 2.0) * self.potential(z) - 0.5 * d * self.potential_derivative(r) * r
    }

    /// Pointwise `f(u)`.
    pub fn f_eval(&self, u: &ComplexField) -> ComplexField {
        u.map(|z| self.f(z))
    }

    /// `𝒱(u) = ∫ V(u) dx`
    pub fn v_integral(&self, u: &ComplexField) -> f64 {
        u.values().iter().map(|&z| self.potential(z)).sum::<f64>() * u.grid().cell_volume()
    }

    /// `∫ W(u) dx`
    pub fn w_integral(&self, u: &ComplexField) -> f64 {
        let d = u.grid().dim();
        u.values().iter().map(|&z| self.w_density(z, d)).sum::<f64>() * u.grid().cell_volume()
    }

    /// `D_sc(u) = -d 𝒱(u) + (d/2) ∫ V'(|u|)|u| dx`
    pub fn scaling_derivative(&self, u: &ComplexField) -> f64 {
        let d = u.grid().dim() as f64;
        let h = u.grid().cell_volume();
        let mut v = 0.0;
        let mut vr = 0.0;
        for &z in u.values() {
            let r = z.norm();
            v += self.potential(z);
            vr += self.potential_derivative(r) * r;
        }
        -d * v * h + 0.5 * d * vr * h
    }

    /// Executable form of the structural assumptions: charge neutrality
    /// `Im(z̄ f(z)) = 0`, gauge equivariance and `f = ∂V/∂z̄` (central finite
    /// differences of `V`).
    pub fn check_assumptions(&self, samples: &[Complex64]) -> Result<AssumptionReport> {
        if samples.is_empty() {
            return Err(Error::InvalidNonlinearity("assumption check needs samples".into()));
        }
        const THETAS: [f64; 3] = [0.3, 1.7, -2.9];
        let rows: Vec<AssumptionSample> = samples
            .iter()
            .map(|&z| {
                let charge = (z.conj() * self.f(z)).im.abs();
                let gauge = THETAS
                    .iter()
                    .map(|&th| {
                        let e = Complex64::from_polar(1.0, th);
                        (self.f(e * z) - e * self.f(z)).norm()
                    })
                    .fold(0.0, f64::max);
                let wirtinger = (self.f(z) - self.wirtinger_fd(z)).norm();
                let tolerance = ASSUMPTION_TOLERANCE * (1.0 + z.norm().powf(self.exponent));
                AssumptionSample { z, charge, gauge, wirtinger, tolerance }
            })
            .collect();
        Ok(AssumptionReport { samples: rows })
    }

    /// `½(∂_x V + i ∂_y V)` by central differences.
    fn wirtinger_fd(&self, z: Complex64) -> Complex64 {
        let h = 1e-5 * z.norm().max(1.0);
        let dx = (self.potential(z + h) - self.potential(z - h)) / (2.0 * h);
        let ih = Complex64::new(0.0, h);
        let dy = (self.potential(z + ih) - self.potential(z - ih)) / (2.0 * h);
        Complex64::new(0.5 * dx, 0.5 * dy)
    }
}

/// Relative tolerance of [`PowerNonlinearity::check_assumptions`], scaled by `1 + |z|^p`.
pub const ASSUMPTION_TOLERANCE: f64 = 1e-6;

#[derive(Clone, Debug, Serialize)]
pub struct AssumptionSample {
    pub z: Complex64,
    /// `|Im(z̄ f(z))|`
    pub charge: f64,
    /// max over test angles of `|f(e^{iθ}z) - e^{iθ}f(z)|`
    pub gauge: f64,
    /// `|f(z) - ∂V/∂z̄|` with the derivative from finite differences
    pub wirtinger: f64,
    pub tolerance: f64,
}

impl AssumptionSample {
    pub fn holds(&self) -> bool {
        self.charge <= self.tolerance && self.gauge <= self.tolerance && self.wirtinger <= self.tolerance
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct AssumptionReport {
    pub samples: Vec<AssumptionSample>,
}

impl AssumptionReport {
    pub fn all_hold(&self) -> bool {
        self.samples.iter().all(AssumptionSample::holds)
    }

    pub fn max_gauge(&self) -> f64 {
        self.samples.iter().map(|s| s.gauge).fold(0.0, f64::max)
    }

    pub fn max_charge(&self) -> f64 {
        self.samples.iter().map(|s| s.charge).fold(0.0, f64::max)
    }

    pub fn violations(&self) -> impl Iterator<Item = &AssumptionSample> {
        self.samples.iter().filter(|s| !s.holds())
    }
}
