//! Linear operators on periodic fields: spectral derivatives, the free
//! Schrödinger group `U(t) = e^{itΔ/2}`, the position weight `x` and the
//! Galilean operator `J(t) = x + it∇`.

use num_complex::Complex64;

use crate::field::{ComplexField, VectorField};
use crate::grid::Grid;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Fraction of each half-axis, measured from the boundary, that counts as the
/// boundary shell.
pub const BOUNDARY_SHELL_FRACTION: f64 = 0.1;
/// Shell mass (relative to total mass) above which `x`-weighted quantities are
/// flagged.
pub const BOUNDARY_MASS_TOLERANCE: f64 = 1e-8;

/// Mass found in the boundary shell when it exceeded [`BOUNDARY_MASS_TOLERANCE`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundaryMass {
    pub relative_mass: f64,
}

/// A value together with the boundary diagnostic of the field it came from.
#[derive(Clone, Debug)]
pub struct Flagged<T> {
    pub value: T,
    pub boundary: Option<BoundaryMass>,
}

impl<T> Flagged<T> {
    pub fn map<U>(self, f: impl FnOnce(T) -> U) -> Flagged<U> {
        Flagged { value: f(self.value), boundary: self.boundary }
    }

    pub fn is_flagged(&self) -> bool {
        self.boundary.is_some()
    }
}

/// Relative L² mass with `max_j |x_j| >= (1 - shell) L/2`. Zero for the zero field.
pub fn boundary_mass_fraction(u: &ComplexField) -> f64 {
    let grid = u.grid();
    let cutoff = (1.0 - BOUNDARY_SHELL_FRACTION) * 0.5 * grid.length();
    let mut shell = 0.0;
    let mut total = 0.0;
    for (i, z) in u.values().iter().enumerate() {
        let m = z.norm_sqr();
        total += m;
        if (0..grid.dim()).any(|a| grid.coordinate(i, a).abs() >= cutoff) {
            shell += m;
        }
    }
    if total == 0.0 {
        0.0
    } else {
        shell / total
    }
}

/// `Some` when the shell mass exceeds the tolerance.
pub fn boundary_check(u: &ComplexField) -> Option<BoundaryMass> {
    let relative_mass = boundary_mass_fraction(u);
    (relative_mass > BOUNDARY_MASS_TOLERANCE).then_some(BoundaryMass { relative_mass })
}

/// `∂_axis u` with multiplier `iξ_axis`.
pub fn partial(u: &ComplexField, axis: usize) -> ComplexField {
    let grid = u.grid().clone();
    u.apply_multiplier(|k| I * grid.frequency(k, axis))
}

/// Spectral gradient (one forward transform, `d` inverse transforms).
pub fn gradient(u: &ComplexField) -> VectorField {
    let grid = u.grid();
    let spec = u.spectrum();
    let components = (0..grid.dim())
        .map(|axis| {
            let coeffs = spec.iter().enumerate().map(|(k, z)| z * I * grid.frequency(k, axis)).collect();
            ComplexField::from_spectrum(grid, coeffs)
        })
        .collect();
    VectorField::from_components(components)
}

/// `Δu` with multiplier `-|ξ|²`.
pub fn laplacian(u: &ComplexField) -> ComplexField {
    let grid = u.grid().clone();
    u.apply_multiplier(|k| Complex64::new(-grid.xi_sq()[k], 0.0))
}

/// `U(t)u`: multiplier `exp(-i t |ξ|²/2)`.
pub fn free_propagate(u: &ComplexField, t: f64) -> ComplexField {
    if t == 0.0 {
        return u.clone();
    }
    let grid = u.grid().clone();
    u.apply_multiplier(|k| Complex64::from_polar(1.0, -0.5 * t * grid.xi_sq()[k]))
}

/// Multiplier of `U(t)` for every flat mode, for callers that stay in
/// Fourier space across several steps.
pub fn propagator_multiplier(grid: &Grid, t: f64) -> Vec<Complex64> {
    grid.xi_sq().iter().map(|&k2| Complex64::from_polar(1.0, -0.5 * t * k2)).collect()
}

/// `x_j u` for every axis `j`, multiplied pointwise by the sawtooth coordinate.
pub fn weight_x(u: &ComplexField) -> Flagged<VectorField> {
    let grid = u.grid();
    let components = (0..grid.dim())
        .map(|axis| {
            let values = u.values().iter().enumerate().map(|(i, z)| z * grid.coordinate(i, axis)).collect();
            ComplexField::from_raw(grid.clone(), values)
        })
        .collect();
    Flagged { value: VectorField::from_components(components), boundary: boundary_check(u) }
}

/// `J(t)u = xu + it∇u`.
pub fn galilean(u: &ComplexField, t: f64) -> Flagged<VectorField> {
    let xu = weight_x(u);
    if t == 0.0 {
        return xu;
    }
    let grad = gradient(u);
    let it = Complex64::new(0.0, t);
    let components = xu
        .value
        .components()
        .iter()
        .zip(grad.components())
        .map(|(x, g)| {
            let mut c = x.clone();
            c.axpy(it, g);
            c
        })
        .collect();
    Flagged { value: VectorField::from_components(components), boundary: xu.boundary }
}

/// Relative spectral mass above which a state counts as under-resolved.
pub const SPECTRAL_TAIL_TOLERANCE: f64 = 1e-10;

fn beyond_two_thirds(grid: &Grid, k: usize) -> bool {
    let limit = grid.n() as i64 / 3;
    (0..grid.dim()).any(|a| grid.mode_number(grid.axis_index(k, a)).abs() > limit)
}

/// Relative spectral mass in modes with `|k_j| > n/3` on some axis. Zero for
/// the zero field.
pub fn spectral_tail_fraction(u: &ComplexField) -> f64 {
    let grid = u.grid();
    let (mut tail, mut total) = (0.0, 0.0);
    for (k, c) in u.spectrum().iter().enumerate() {
        let m = c.norm_sqr();
        total += m;
        if beyond_two_thirds(grid, k) {
            tail += m;
        }
    }
    if total == 0.0 {
        0.0
    } else {
        tail / total
    }
}

/// Zeroes every mode with `|k_j| > n/3` on some axis (2/3 rule).
pub fn dealias(u: &ComplexField) -> ComplexField {
    let grid = u.grid().clone();
    u.apply_multiplier(|k| Complex64::new(if beyond_two_thirds(&grid, k) { 0.0 } else { 1.0 }, 0.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::inner_product;
    use crate::grid::make_grid;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn gaussian(grid: &Grid, width: f64, k: f64) -> ComplexField {
        ComplexField::from_fn(grid, |x| {
            let r2: f64 = x.iter().map(|v| v * v).sum();
            Complex64::from_polar((-r2 / (width * width)).exp(), k * x[0])
        })
    }

    fn rel(a: &ComplexField, b: &ComplexField) -> f64 {
        (a - b).norm() / b.norm().max(1e-300)
    }

    #[test]
    fn gradient_of_constant_vanishes() {
        let g = make_grid(2, 8, 3.0).unwrap();
        let u = ComplexField::from_fn(&g, |_| Complex64::new(2.0, -1.0));
        let grad = gradient(&u);
        assert!(grad.components().iter().all(|c| c.max_abs() < 1e-14));
    }

    #[test]
    fn gradient_of_plane_wave() {
        let g = make_grid(2, 16, 4.0).unwrap();
        let k = [2.0 * PI / 4.0 * 3.0, -2.0 * PI / 4.0 * 5.0];
        let u = ComplexField::from_fn(&g, |x| Complex64::from_polar(1.0, k[0] * x[0] + k[1] * x[1]));
        let grad = gradient(&u);
        for (axis, kk) in k.iter().enumerate() {
            let expect = u.scale(I * kk);
            assert!(rel(grad.component(axis), &expect) < 1e-12);
        }
    }

    #[test]
    fn laplacian_of_sine() {
        let l = 6.0;
        let g = make_grid(1, 32, l).unwrap();
        let w = 2.0 * PI / l;
        let u = ComplexField::from_fn(&g, |x| Complex64::new((w * x[0]).sin(), 0.0));
        let expect = u.scale(Complex64::new(-w * w, 0.0));
        assert!((&laplacian(&u) - &expect).max_abs() < 1e-12);

        // second-difference oracle on n = 128: O(h²) agreement
        let g = make_grid(1, 128, l).unwrap();
        let u = ComplexField::from_fn(&g, |x| Complex64::new((w * x[0]).sin(), 0.0));
        let h = g.spacing();
        let v = u.values();
        let n = v.len();
        let fd: Vec<Complex64> = (0..n).map(|j| (v[(j + 1) % n] - 2.0 * v[j] + v[(j + n - 1) % n]) / (h * h)).collect();
        let spec = laplacian(&u);
        let err = spec.values().iter().zip(&fd).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        let predicted = w.powi(4) * h * h / 12.0;
        assert!(err < 1.01 * predicted && err > 0.9 * predicted, "{err} vs {predicted}");
    }

    #[test]
    fn laplacian_is_sum_of_second_partials() {
        let g = make_grid(3, 8, 5.0).unwrap();
        let u = gaussian(&g, 1.3, 0.7);
        let mut sum = ComplexField::zeros(&g);
        for a in 0..3 {
            let second = partial(&partial(&u, a), a);
            sum.axpy(Complex64::new(1.0, 0.0), &second);
        }
        assert!(rel(&sum, &laplacian(&u)) < 1e-12);
    }

    #[test]
    fn free_propagate_identity_and_mode() {
        let g = make_grid(1, 32, 8.0).unwrap();
        let u = gaussian(&g, 1.0, 0.3);
        assert!(rel(&free_propagate(&u, 0.0), &u) <= 1e-14);
        let k = 2.0 * PI / 8.0 * 3.0;
        let t = 0.77;
        let mode = ComplexField::from_fn(&g, |x| Complex64::from_polar(1.0, k * x[0]));
        let expect = mode.scale(Complex64::from_polar(1.0, -0.5 * k * k * t));
        assert!(rel(&free_propagate(&mode, t), &expect) < 1e-12);
    }

    #[test]
    fn weight_x_basic() {
        let g = make_grid(1, 64, 20.0).unwrap();
        let zero = weight_x(&ComplexField::zeros(&g));
        assert_eq!(zero.value.component(0).max_abs(), 0.0);
        assert!(!zero.is_flagged());

        // even bump -> odd output (index j <-> n - j mirrors x -> -x)
        let u = gaussian(&g, 1.0, 0.0);
        let xu = weight_x(&u).value;
        let v = xu.component(0).values();
        for j in 1..64 {
            assert!((v[j] + v[64 - j]).norm() < 1e-15);
        }
    }

    #[test]
    fn weighted_norm_of_gaussian() {
        // ‖x e^{-x²}‖² = ∫ x² e^{-2x²} dx = √(π/2)/4
        let g = make_grid(1, 256, 40.0).unwrap();
        let u = ComplexField::from_fn(&g, |x| Complex64::new((-x[0] * x[0]).exp(), 0.0));
        let value = weight_x(&u).value.norm_sq();
        let exact = (PI / 2.0).sqrt() / 4.0;
        assert!((value - exact).abs() < 1e-10, "{value} {exact}");
    }

    #[test]
    fn boundary_flag_fires_for_wide_fields() {
        let g = make_grid(1, 64, 10.0).unwrap();
        let wide = gaussian(&g, 4.0, 0.0);
        assert!(weight_x(&wide).is_flagged());
        assert!(galilean(&wide, 0.5).is_flagged());
        let narrow = gaussian(&g, 0.8, 0.0);
        assert!(!weight_x(&narrow).is_flagged());
    }

    #[test]
    fn galilean_matches_conjugated_weight() {
        let g = make_grid(1, 512, 40.0).unwrap();
        let u = ComplexField::from_fn(&g, |x| Complex64::from_polar((-x[0] * x[0] / 2.0).exp(), x[0]));
        for t in [0.0, 0.4, -0.9] {
            let direct = galilean(&u, t).value;
            let back = free_propagate(&u, -t);
            let routed = free_propagate(weight_x(&back).value.component(0), t);
            assert!(rel(direct.component(0), &routed) <= 1e-8, "t = {t}");
        }
        let z = galilean(&ComplexField::zeros(&g), 0.3).value;
        assert_eq!(z.component(0).max_abs(), 0.0);
        assert!(rel(galilean(&u, 0.0).value.component(0), weight_x(&u).value.component(0)) == 0.0);
    }

    #[test]
    fn spectral_tail_of_smooth_and_rough_fields() {
        let g = make_grid(1, 128, 20.0).unwrap();
        assert!(spectral_tail_fraction(&gaussian(&g, 1.0, 0.0)) < 1e-30);
        assert_eq!(spectral_tail_fraction(&ComplexField::zeros(&g)), 0.0);
        let comb = ComplexField::from_fn(&g, |x| Complex64::new((x[0] * 10.0).round().rem_euclid(2.0), 0.0));
        assert!(spectral_tail_fraction(&comb) > SPECTRAL_TAIL_TOLERANCE);
    }

    #[test]
    fn dealias_drops_high_modes() {
        let g = make_grid(1, 12, 12.0).unwrap();
        let dk = 2.0 * PI / 12.0;
        let low = ComplexField::from_fn(&g, |x| Complex64::from_polar(1.0, 4.0 * dk * x[0]));
        let high = ComplexField::from_fn(&g, |x| Complex64::from_polar(1.0, 5.0 * dk * x[0]));
        assert!(rel(&dealias(&low), &low) < 1e-13);
        assert!(dealias(&high).max_abs() < 1e-13);
    }

    fn random_smooth(grid: &Grid, coeffs: &[(f64, f64)]) -> ComplexField {
        ComplexField::from_fn(grid, |x| {
            let env = (-x.iter().map(|v| v * v).sum::<f64>() / 4.0).exp();
            let mut z = Complex64::new(0.0, 0.0);
            for (m, (a, b)) in coeffs.iter().enumerate() {
                z += Complex64::new(*a, *b) * Complex64::from_polar(1.0, m as f64 * 0.5 * x[0]);
            }
            z * env
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn unitarity_and_group_law(
            coeffs in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 1..5),
            t in -2.0f64..2.0,
            s in -2.0f64..2.0,
        ) {
            let g = make_grid(1, 64, 16.0).unwrap();
            let u = random_smooth(&g, &coeffs);
            let n2 = u.norm_sq();
            prop_assume!(n2 > 1e-6);
            let ut = free_propagate(&u, t);
            prop_assert!((ut.norm_sq() - n2).abs() <= 1e-12 * n2);
            let uts = free_propagate(&ut, s);
            let direct = free_propagate(&u, t + s);
            prop_assert!((&uts - &direct).norm() <= 1e-12 * n2.sqrt());
        }

        #[test]
        fn gradient_commutes_with_propagator(
            coeffs in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 1..5),
            t in -2.0f64..2.0,
        ) {
            let g = make_grid(2, 16, 10.0).unwrap();
            let u = random_smooth(&g, &coeffs);
            let h1 = (u.norm_sq() + gradient(&u).norm_sq()).sqrt();
            let a = gradient(&free_propagate(&u, t));
            let b = gradient(&u).map_components(|c| free_propagate(c, t));
            prop_assert!((&a - &b).norm_sq().sqrt() <= 1e-12 * h1.max(1e-300));
        }

        #[test]
        fn parseval_and_self_adjointness(
            cu in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 1..5),
            cv in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 1..5),
        ) {
            let g = make_grid(1, 32, 12.0).unwrap();
            let u = random_smooth(&g, &cu);
            let v = random_smooth(&g, &cv);
            let ip = inner_product(&u, &v).unwrap();
            let (su, sv) = (u.spectrum(), v.spectrum());
            let fourier: Complex64 = su.iter().zip(&sv).map(|(a, b)| a * b.conj()).sum::<Complex64>()
                * g.cell_volume() / g.len() as f64;
            prop_assert!((ip - fourier).norm() <= 1e-13 * (u.norm() * v.norm()).max(1e-300));
            let lap = inner_product(&laplacian(&u), &u).unwrap();
            prop_assert!(lap.im.abs() <= 1e-12 * u.norm_sq().max(1.0));
        }
    }
}
