//! Periodic box discretization and the multi-dimensional FFT behind every
//! spectral operator.
//!
//! The box is `[-L/2, L/2)^d` with `n` points per axis. Fields are stored in
//! row-major order (last axis fastest). Frequencies are kept in the standard
//! wraparound order `0, 1, ..., n/2-1, -n/2, ..., -1` (times `2π/L`), which is
//! the order the transform produces, so no permutation ever happens.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};

struct GridInner {
    dim: usize,
    n: usize,
    length: f64,
    spacing: f64,
    coords: Vec<f64>,
    freqs: Vec<f64>,
    /// |ξ|² for every flat mode index.
    xi_sq: Vec<f64>,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

/// A uniform periodic grid. Cheap to clone; clones share FFT plans.
#[derive(Clone)]
pub struct Grid {
    inner: Arc<GridInner>,
}

impl fmt::Debug for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Grid")
            .field("dim", &self.inner.dim)
            .field("n", &self.inner.n)
            .field("length", &self.inner.length)
            .finish()
    }
}

impl PartialEq for Grid {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
            || (self.inner.dim == other.inner.dim
                && self.inner.n == other.inner.n
                && self.inner.length == other.inner.length)
    }
}

/// Builds a grid; see [`Grid::new`].
pub fn make_grid(dim: usize, n: usize, length: f64) -> Result<Grid> {
    Grid::new(dim, n, length)
}

impl Grid {
    /// `dim` in {1, 2, 3}, `n` even and at least 4, `length > 0`.
    pub fn new(dim: usize, n: usize, length: f64) -> Result<Self> {
        if !(1..=3).contains(&dim) {
            return Err(Error::InvalidGrid(format!("dimension {dim} not in {{1,2,3}}")));
        }
        if n < 4 || !n.is_multiple_of(2) {
            return Err(Error::InvalidGrid(format!("points per axis must be even and >= 4, got {n}")));
        }
        if !(length.is_finite() && length > 0.0) {
            return Err(Error::InvalidGrid(format!("box length must be positive, got {length}")));
        }

        let spacing = length / n as f64;
        let coords: Vec<f64> = (0..n).map(|j| -0.5 * length + j as f64 * spacing).collect();
        let dk = 2.0 * std::f64::consts::PI / length;
        let freqs: Vec<f64> = (0..n).map(|i| wrap_index(i, n) as f64 * dk).collect();

        let total = n.pow(dim as u32);
        let mut xi_sq = vec![0.0; total];
        for (flat, slot) in xi_sq.iter_mut().enumerate() {
            let mut rem = flat;
            let mut acc = 0.0;
            for _ in 0..dim {
                let k = freqs[rem % n];
                acc += k * k;
                rem /= n;
            }
            *slot = acc;
        }

        let mut planner = FftPlanner::new();
        let forward = planner.plan_fft_forward(n);
        let inverse = planner.plan_fft_inverse(n);

        Ok(Self { inner: Arc::new(GridInner { dim, n, length, spacing, coords, freqs, xi_sq, forward, inverse }) })
    }

    pub fn dim(&self) -> usize {
        self.inner.dim
    }

    /// Points per axis.
    pub fn n(&self) -> usize {
        self.inner.n
    }

    pub fn length(&self) -> f64 {
        self.inner.length
    }

    pub fn spacing(&self) -> f64 {
        self.inner.spacing
    }

    /// `h^d`, the weight of every grid point in physical-space integrals.
    pub fn cell_volume(&self) -> f64 {
        self.inner.spacing.powi(self.inner.dim as i32)
    }

    /// Total number of grid points, `n^d`.
    pub fn len(&self) -> usize {
        self.inner.xi_sq.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Sawtooth coordinates of one axis, strictly increasing in `[-L/2, L/2)`.
    pub fn coords(&self) -> &[f64] {
        &self.inner.coords
    }

    /// Angular frequencies of one axis in wraparound order.
    pub fn freqs(&self) -> &[f64] {
        &self.inner.freqs
    }

    /// Integer mode number of a wraparound index (`-n/2 ..= n/2-1`).
    pub fn mode_number(&self, index: usize) -> i64 {
        wrap_index(index, self.inner.n)
    }

    /// |ξ|² for each flat mode index.
    pub fn xi_sq(&self) -> &[f64] {
        &self.inner.xi_sq
    }

    /// Flat-index stride of `axis` (the last axis has stride 1).
    pub fn stride(&self, axis: usize) -> usize {
        self.inner.n.pow((self.inner.dim - 1 - axis) as u32)
    }

    /// Per-axis index of a flat index along `axis`.
    #[inline]
    pub fn axis_index(&self, flat: usize, axis: usize) -> usize {
        (flat / self.stride(axis)) % self.inner.n
    }

    /// Coordinate `x_axis` of the grid point with the given flat index.
    #[inline]
    pub fn coordinate(&self, flat: usize, axis: usize) -> f64 {
        self.inner.coords[self.axis_index(flat, axis)]
    }

    /// Frequency `ξ_axis` of the mode with the given flat index.
    #[inline]
    pub fn frequency(&self, flat: usize, axis: usize) -> f64 {
        self.inner.freqs[self.axis_index(flat, axis)]
    }

    /// Writes the coordinates of the point `flat` into `out` (length `dim`).
    pub fn point(&self, flat: usize, out: &mut [f64]) {
        for (axis, slot) in out.iter_mut().enumerate().take(self.inner.dim) {
            *slot = self.coordinate(flat, axis);
        }
    }

    /// Unnormalized forward DFT over all axes, in place.
    pub fn forward(&self, data: &mut [Complex64]) {
        self.transform(data, &self.inner.forward);
    }

    /// Inverse DFT over all axes including the `1/n^d` factor, in place.
    pub fn inverse(&self, data: &mut [Complex64]) {
        self.transform(data, &self.inner.inverse);
        let norm = 1.0 / self.len() as f64;
        for z in data.iter_mut() {
            *z *= norm;
        }
    }

    fn transform(&self, data: &mut [Complex64], plan: &Arc<dyn Fft<f64>>) {
        assert_eq!(data.len(), self.len(), "buffer length does not match grid");
        let n = self.inner.n;
        let mut scratch = vec![Complex64::new(0.0, 0.0); plan.get_inplace_scratch_len()];
        let mut line = vec![Complex64::new(0.0, 0.0); n];
        for axis in 0..self.inner.dim {
            let stride = self.stride(axis);
            if stride == 1 {
                plan.process_with_scratch(data, &mut scratch);
                continue;
            }
            let block = stride * n;
            for base in (0..data.len()).step_by(block) {
                for offset in 0..stride {
                    let start = base + offset;
                    for (j, slot) in line.iter_mut().enumerate() {
                        *slot = data[start + j * stride];
                    }
                    plan.process_with_scratch(&mut line, &mut scratch);
                    for (j, value) in line.iter().enumerate() {
                        data[start + j * stride] = *value;
                    }
                }
            }
        }
    }
}

fn wrap_index(i: usize, n: usize) -> i64 {
    if i < n / 2 {
        i as i64
    } else {
        i as i64 - n as i64
    }
}
