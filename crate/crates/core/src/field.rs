//! Complex-valued fields on a [`Grid`] and the discrete L² geometry.
//!
//! Pairing conventions. The L² inner product conjugates its second slot:
//! `(u, v) = h^d Σ u·conj(v)`. Duality pairings `⟨a, b⟩` are bilinear
//! (`h^d Σ a·b`), so the forms that show up in the identities map as
//!
//! | pairing        | computed as              |
//! |----------------|--------------------------|
//! | `⟨a, conj b⟩`  | `inner_product(a, b)`    |
//! | `⟨conj a, b⟩`  | `inner_product(b, a)`    |
//! | `(a, b)`       | `inner_product(a, b)`    |

use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::Grid;

#[derive(Clone, Debug)]
pub struct ComplexField {
    grid: Grid,
    values: Vec<Complex64>,
}

impl ComplexField {
    /// Checks length and finiteness.
    pub fn new(grid: Grid, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::InvalidField(format!("expected {} values, got {}", grid.len(), values.len())));
        }
        if let Some(i) = values.iter().position(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::InvalidField(format!("non-finite value at index {i}")));
        }
        Ok(Self { grid, values })
    }

    /// Skips the finiteness scan; used by kernels that check finiteness themselves.
    pub(crate) fn from_raw(grid: Grid, values: Vec<Complex64>) -> Self {
        debug_assert_eq!(values.len(), grid.len());
        Self { grid, values }
    }

    pub fn zeros(grid: &Grid) -> Self {
        Self::from_raw(grid.clone(), vec![Complex64::new(0.0, 0.0); grid.len()])
    }

    /// Samples `f(x)` at every grid point; `x` has `dim` entries.
    pub fn from_fn(grid: &Grid, mut f: impl FnMut(&[f64]) -> Complex64) -> Self {
        let mut x = vec![0.0; grid.dim()];
        let values = (0..grid.len())
            .map(|i| {
                grid.point(i, &mut x);
                f(&x)
            })
            .collect();
        Self::from_raw(grid.clone(), values)
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [Complex64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// `(self, other)`; panics if the grids differ. See [`inner_product`] for
    /// the fallible version.
    pub fn dot(&self, other: &ComplexField) -> Complex64 {
        assert!(self.grid == other.grid, "inner product of fields on different grids");
        let sum: Complex64 = self.values.iter().zip(&other.values).map(|(a, b)| a * b.conj()).sum();
        sum * self.grid.cell_volume()
    }

    /// `‖u‖²`
    pub fn norm_sq(&self) -> f64 {
        self.values.iter().map(|z| z.norm_sqr()).sum::<f64>() * self.grid.cell_volume()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    /// Largest pointwise modulus.
    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn map(&self, mut f: impl FnMut(Complex64) -> Complex64) -> Self {
        Self::from_raw(self.grid.clone(), self.values.iter().map(|&z| f(z)).collect())
    }

    pub fn conj(&self) -> Self {
        self.map(|z| z.conj())
    }

    pub fn scale(&self, c: Complex64) -> Self {
        self.map(|z| z * c)
    }

    /// `self += a * x`
    pub fn axpy(&mut self, a: Complex64, x: &ComplexField) {
        assert!(self.grid == x.grid, "axpy on fields on different grids");
        for (y, xv) in self.values.iter_mut().zip(&x.values) {
            *y += a * xv;
        }
    }

    /// Fourier coefficients (unnormalized forward DFT, wraparound order).
    pub fn spectrum(&self) -> Vec<Complex64> {
        let mut data = self.values.clone();
        self.grid.forward(&mut data);
        data
    }

    /// Inverse of [`spectrum`](Self::spectrum).
    pub fn from_spectrum(grid: &Grid, mut coeffs: Vec<Complex64>) -> Self {
        grid.inverse(&mut coeffs);
        Self::from_raw(grid.clone(), coeffs)
    }

    /// Applies a real-or-complex Fourier multiplier given per flat mode index.
    pub fn apply_multiplier(&self, mut multiplier: impl FnMut(usize) -> Complex64) -> Self {
        let mut data = self.spectrum();
        for (k, z) in data.iter_mut().enumerate() {
            *z *= multiplier(k);
        }
        Self::from_spectrum(&self.grid, data)
    }
}

impl Add for &ComplexField {
    type Output = ComplexField;
    fn add(self, rhs: &ComplexField) -> ComplexField {
        assert!(self.grid == rhs.grid, "sum of fields on different grids");
        let values = self.values.iter().zip(&rhs.values).map(|(a, b)| a + b).collect();
        ComplexField::from_raw(self.grid.clone(), values)
    }
}

impl Sub for &ComplexField {
    type Output = ComplexField;
    fn sub(self, rhs: &ComplexField) -> ComplexField {
        assert!(self.grid == rhs.grid, "difference of fields on different grids");
        let values = self.values.iter().zip(&rhs.values).map(|(a, b)| a - b).collect();
        ComplexField::from_raw(self.grid.clone(), values)
    }
}

impl Mul<Complex64> for &ComplexField {
    type Output = ComplexField;
    fn mul(self, rhs: Complex64) -> ComplexField {
        self.scale(rhs)
    }
}

impl Mul<f64> for &ComplexField {
    type Output = ComplexField;
    fn mul(self, rhs: f64) -> ComplexField {
        self.map(|z| z * rhs)
    }
}

/// `d` component fields sharing one grid (∇u, xu, J(t)u, ...).
#[derive(Clone, Debug)]
pub struct VectorField {
    components: Vec<ComplexField>,
}

impl VectorField {
    pub fn new(components: Vec<ComplexField>) -> Result<Self> {
        let first = components.first().ok_or_else(|| Error::InvalidField("vector field needs components".into()))?;
        if components.iter().any(|c| c.grid() != first.grid()) {
            return Err(Error::GridMismatch);
        }
        Ok(Self { components })
    }

    pub(crate) fn from_components(components: Vec<ComplexField>) -> Self {
        Self { components }
    }

    pub fn components(&self) -> &[ComplexField] {
        &self.components
    }

    pub fn component(&self, axis: usize) -> &ComplexField {
        &self.components[axis]
    }

    pub fn into_components(self) -> Vec<ComplexField> {
        self.components
    }

    pub fn grid(&self) -> &Grid {
        self.components[0].grid()
    }

    /// `Σ_j (a_j, b_j)`
    pub fn dot(&self, other: &VectorField) -> Complex64 {
        self.components.iter().zip(&other.components).map(|(a, b)| a.dot(b)).sum()
    }

    pub fn norm_sq(&self) -> f64 {
        self.components.iter().map(ComplexField::norm_sq).sum()
    }

    pub fn map_components(&self, f: impl FnMut(&ComplexField) -> ComplexField) -> Self {
        Self { components: self.components.iter().map(f).collect() }
    }
}

impl Add for &VectorField {
    type Output = VectorField;
    fn add(self, rhs: &VectorField) -> VectorField {
        VectorField { components: self.components.iter().zip(&rhs.components).map(|(a, b)| a + b).collect() }
    }
}

impl Sub for &VectorField {
    type Output = VectorField;
    fn sub(self, rhs: &VectorField) -> VectorField {
        VectorField { components: self.components.iter().zip(&rhs.components).map(|(a, b)| a - b).collect() }
    }
}

/// `(u, v) = h^d Σ u·conj(v)`, conjugate-linear in the second argument.
pub fn inner_product(u: &ComplexField, v: &ComplexField) -> Result<Complex64> {
    if u.grid() != v.grid() {
        return Err(Error::GridMismatch);
    }
    Ok(u.dot(v))
}

/// Bilinear duality pairing `⟨u, v⟩ = h^d Σ u·v`.
pub fn pairing(u: &ComplexField, v: &ComplexField) -> Result<Complex64> {
    if u.grid() != v.grid() {
        return Err(Error::GridMismatch);
    }
    let sum: Complex64 = u.values().iter().zip(v.values()).map(|(a, b)| a * b).sum();
    Ok(sum * u.grid().cell_volume())
}

/// Values that can be combined linearly; lets the quadrature code run on
/// scalars and whole fields alike.
pub trait Linear: Clone {
    fn zero_like(&self) -> Self;
    /// `self += a * x`
    fn add_scaled(&mut self, a: f64, x: &Self);
}

impl Linear for f64 {
    fn zero_like(&self) -> Self {
        0.0
    }
    fn add_scaled(&mut self, a: f64, x: &Self) {
        *self += a * x;
    }
}

impl Linear for Complex64 {
    fn zero_like(&self) -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn add_scaled(&mut self, a: f64, x: &Self) {
        *self += a * x;
    }
}

impl Linear for ComplexField {
    fn zero_like(&self) -> Self {
        ComplexField::zeros(&self.grid)
    }
    fn add_scaled(&mut self, a: f64, x: &Self) {
        self.axpy(Complex64::new(a, 0.0), x);
    }
}
