//! Time stepping: Strang splitting with the exact nonlinear phase flow,
//! Picard iteration on the Duhamel equation, and Duhamel quadrature.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::ComplexField;
use crate::grid::Grid;
use crate::nonlinearity::PowerNonlinearity;
use crate::observables::{self, ObservableRecord};
use crate::quadrature::{self, Quadrature};
use crate::spectral::{
    boundary_check, free_propagate, laplacian, propagator_multiplier, spectral_tail_fraction, SPECTRAL_TAIL_TOLERANCE,
};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scheme {
    Strang,
    Picard,
}

impl std::fmt::Display for Scheme {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Scheme::Strang => "strang",
            Scheme::Picard => "picard",
        })
    }
}

impl std::str::FromStr for Scheme {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "strang" => Ok(Scheme::Strang),
            "picard" => Ok(Scheme::Picard),
            other => Err(Error::InvalidConfig(format!("unknown scheme {other:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub dt: f64,
    pub t_final: f64,
    pub scheme: Scheme,
    pub picard_max_iter: usize,
    /// Relative L² stopping tolerance of the Picard iteration.
    pub picard_tol: f64,
    pub quad_order: Quadrature,
    pub store_every: usize,
    /// Length of the Picard segments used when `scheme` is `picard`.
    pub picard_window: f64,
    /// Apply the 2/3-rule truncation after every nonlinear substep (Strang
    /// only).
    #[serde(default)]
    pub dealias: bool,
}

impl SolverConfig {
    pub fn new(dt: f64, t_final: f64) -> Self {
        Self {
            dt,
            t_final,
            scheme: Scheme::Strang,
            picard_max_iter: 50,
            picard_tol: 1e-12,
            quad_order: Quadrature::Simpson,
            store_every: 1,
            picard_window: 0.1,
            dealias: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidConfig(msg));
        if !(self.dt.is_finite() && self.dt > 0.0) {
            return bad(format!("dt must be positive, got {}", self.dt));
        }
        if !(self.t_final.is_finite() && self.t_final >= 0.0) {
            return bad(format!("t_final must be non-negative, got {}", self.t_final));
        }
        if self.t_final > 0.0 && self.dt > self.t_final * (1.0 + 1e-12) {
            return bad(format!("dt = {} exceeds t_final = {}", self.dt, self.t_final));
        }
        if !(self.picard_tol.is_finite() && self.picard_tol > 0.0) {
            return bad(format!("picard_tol must be positive, got {}", self.picard_tol));
        }
        if self.picard_max_iter == 0 {
            return bad("picard_max_iter must be at least 1".into());
        }
        if self.store_every == 0 {
            return bad("store_every must be at least 1".into());
        }
        if !(self.picard_window.is_finite() && self.picard_window > 0.0) {
            return bad(format!("picard_window must be positive, got {}", self.picard_window));
        }
        Ok(())
    }

    /// Number of time steps; `t_final` must be a multiple of `dt · store_every`.
    pub fn step_count(&self) -> Result<usize> {
        self.validate()?;
        steps_for(self.t_final, self.dt, self.store_every)
    }

    /// Spacing of stored samples.
    pub fn sample_spacing(&self) -> f64 {
        self.dt * self.store_every as f64
    }
}

fn steps_for(t: f64, dt: f64, store_every: usize) -> Result<usize> {
    let steps = (t / dt).round();
    if (steps * dt - t).abs() > 1e-9 * t.max(dt) {
        return Err(Error::InvalidConfig(format!("t = {t} is not a multiple of dt = {dt}")));
    }
    let steps = steps as usize;
    if !steps.is_multiple_of(store_every) {
        return Err(Error::InvalidConfig(format!("{steps} steps are not a multiple of store_every = {store_every}")));
    }
    Ok(steps)
}

/// Fields and observables at uniformly spaced times starting from 0.
#[derive(Clone, Debug)]
pub struct Trajectory {
    times: Vec<f64>,
    states: Vec<ComplexField>,
    observable_log: Vec<ObservableRecord>,
    solver: SolverConfig,
    warnings: Vec<String>,
}

impl Trajectory {
    /// Builds a trajectory from stored states and logs their observables.
    /// `times` must start at 0 and be uniformly spaced.
    pub fn from_states(
        times: Vec<f64>,
        states: Vec<ComplexField>,
        nl: &PowerNonlinearity,
        solver: SolverConfig,
    ) -> Result<Self> {
        if times.is_empty() || times.len() != states.len() {
            return Err(Error::InvalidConfig("trajectory needs one state per time".into()));
        }
        if times[0] != 0.0 {
            return Err(Error::InvalidConfig("trajectory must start at t = 0".into()));
        }
        let grid = states[0].grid();
        if states.iter().any(|s| s.grid() != grid) {
            return Err(Error::GridMismatch);
        }
        if times.len() > 1 {
            let h = times[1] - times[0];
            let uniform =
                times.windows(2).all(|w| w[1] > w[0] && ((w[1] - w[0]) - h).abs() <= 1e-9 * h.max(w[1].abs() * 1e-3));
            if !uniform {
                return Err(Error::InvalidConfig("trajectory times must be uniformly spaced".into()));
            }
        }
        let observable_log = times.iter().zip(&states).map(|(&t, u)| observables::record(u, t, nl)).collect();
        let mut warnings = Vec::new();
        if let Some(b) = boundary_check(&states[0]) {
            warnings
                .push(format!("initial datum not boundary-negligible: relative shell mass {:.3e}", b.relative_mass));
        }
        let tails: Vec<f64> = states.iter().map(spectral_tail_fraction).collect();
        if let Some(first) = tails.iter().position(|&f| f > SPECTRAL_TAIL_TOLERANCE) {
            let worst = tails.iter().copied().fold(0.0, f64::max);
            warnings.push(format!(
                "under-resolved from t = {}: up to {worst:.3e} of the spectral mass sits beyond |k| = n/3",
                times[first]
            ));
        }
        Ok(Self { times, states, observable_log, solver, warnings })
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn states(&self) -> &[ComplexField] {
        &self.states
    }

    pub fn observables(&self) -> &[ObservableRecord] {
        &self.observable_log
    }

    pub fn solver(&self) -> &SolverConfig {
        &self.solver
    }

    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    pub fn push_warning(&mut self, warning: impl Into<String>) {
        self.warnings.push(warning.into());
    }

    pub fn grid(&self) -> &Grid {
        self.states[0].grid()
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn initial(&self) -> &ComplexField {
        &self.states[0]
    }

    pub fn last(&self) -> &ComplexField {
        self.states.last().expect("trajectory is never empty")
    }

    /// Spacing between stored samples (0 for a single sample).
    pub fn sample_spacing(&self) -> f64 {
        if self.times.len() < 2 {
            0.0
        } else {
            self.times[1] - self.times[0]
        }
    }
}

/// A state became non-finite. Carries the last finite state and everything
/// stored before it.
#[derive(Clone, Debug)]
pub struct BlowUp {
    pub time: f64,
    pub last_state: ComplexField,
    pub partial: Trajectory,
}

/// Strang step with precomputed half-step multiplier.
struct StrangStepper {
    half: Vec<Complex64>,
    /// `half` with the modes removed by dealiasing set to zero.
    closing: Vec<Complex64>,
    nl: PowerNonlinearity,
    dt: f64,
}

impl StrangStepper {
    fn new(grid: &Grid, nl: &PowerNonlinearity, dt: f64, dealias: bool) -> Self {
        let half = propagator_multiplier(grid, 0.5 * dt);
        let limit = grid.n() as i64 / 3;
        let closing = half
            .iter()
            .enumerate()
            .map(|(k, &m)| {
                let kept = !dealias || (0..grid.dim()).all(|a| grid.mode_number(grid.axis_index(k, a)).abs() <= limit);
                if kept {
                    m
                } else {
                    Complex64::new(0.0, 0.0)
                }
            })
            .collect();
        Self { half, closing, nl: *nl, dt }
    }

    fn step(&self, u: &ComplexField) -> ComplexField {
        let v = u.apply_multiplier(|k| self.half[k]);
        let v = nonlinear_flow(&v, &self.nl, self.dt);
        v.apply_multiplier(|k| self.closing[k])
    }

    /// One step on Fourier coefficients, in place, with a single inverse and
    /// forward transform. Returns `false` if the physical values went
    /// non-finite.
    fn advance(&self, grid: &Grid, coeffs: &mut [Complex64]) -> bool {
        for (z, m) in coeffs.iter_mut().zip(&self.half) {
            *z *= m;
        }
        grid.inverse(coeffs);
        let mut finite = true;
        for z in coeffs.iter_mut() {
            *z *= Complex64::from_polar(1.0, -self.dt * self.nl.phase_rate(z.norm()));
            finite &= z.re.is_finite() && z.im.is_finite();
        }
        grid.forward(coeffs);
        for (z, m) in coeffs.iter_mut().zip(&self.closing) {
            *z *= m;
        }
        finite
    }
}

/// Exact flow of `i∂ₜu = f(u)`: `|u|` is frozen, so the phase rotates at
/// rate `λ|u|^{p-1}`.
fn nonlinear_flow(u: &ComplexField, nl: &PowerNonlinearity, dt: f64) -> ComplexField {
    u.map(|z| z * Complex64::from_polar(1.0, -dt * nl.phase_rate(z.norm())))
}

/// One step `U(dt/2) ∘ N(dt) ∘ U(dt/2)`. Returns a blow-up error if the
/// result is not finite.
pub fn strang_step(u: &ComplexField, nl: &PowerNonlinearity, dt: f64) -> Result<ComplexField> {
    let next = StrangStepper::new(u.grid(), nl, dt, false).step(u);
    if next.is_finite() {
        Ok(next)
    } else {
        let solver = SolverConfig::new(dt.abs().max(f64::MIN_POSITIVE), dt.abs());
        let partial = Trajectory::from_states(vec![0.0], vec![u.clone()], nl, solver)?;
        Err(Error::BlowUp(Box::new(BlowUp { time: 0.0, last_state: u.clone(), partial })))
    }
}

/// `∂ₜu = i(½Δu − f(u))`
pub fn time_derivative(u: &ComplexField, nl: &PowerNonlinearity) -> ComplexField {
    let mut rhs = &laplacian(u) * 0.5;
    rhs.axpy(Complex64::new(-1.0, 0.0), &nl.f_eval(u));
    rhs.scale(I)
}

fn check_inputs(u0: &ComplexField, nl: &PowerNonlinearity, cfg: &SolverConfig) -> Result<usize> {
    nl.validate_dimension(u0.grid().dim())?;
    if !u0.is_finite() {
        return Err(Error::InvalidField("initial datum has non-finite values".into()));
    }
    cfg.step_count()
}

/// Runs the configured scheme from 0 to `cfg.t_final`, storing every
/// `cfg.store_every` steps.
pub fn evolve(u0: &ComplexField, nl: &PowerNonlinearity, cfg: &SolverConfig) -> Result<Trajectory> {
    let steps = check_inputs(u0, nl, cfg)?;
    match cfg.scheme {
        Scheme::Strang => evolve_strang(u0, nl, cfg, steps),
        Scheme::Picard => evolve_picard(u0, nl, cfg, steps),
    }
}

fn blow_up(
    time: f64,
    last_state: ComplexField,
    times: Vec<f64>,
    states: Vec<ComplexField>,
    nl: &PowerNonlinearity,
    cfg: &SolverConfig,
) -> Error {
    match Trajectory::from_states(times, states, nl, cfg.clone()) {
        Ok(mut partial) => {
            partial.push_warning(format!("blow-up: non-finite state after t = {time}"));
            Error::BlowUp(Box::new(BlowUp { time, last_state, partial }))
        }
        Err(e) => e,
    }
}

fn evolve_strang(u0: &ComplexField, nl: &PowerNonlinearity, cfg: &SolverConfig, steps: usize) -> Result<Trajectory> {
    let grid = u0.grid();
    let stepper = StrangStepper::new(grid, nl, cfg.dt, cfg.dealias);
    let mut times = vec![0.0];
    let mut states = vec![u0.clone()];
    let mut coeffs = u0.spectrum();
    let mut previous = coeffs.clone();
    for step in 1..=steps {
        previous.copy_from_slice(&coeffs);
        if !stepper.advance(grid, &mut coeffs) || coeffs.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
            let t = (step - 1) as f64 * cfg.dt;
            let last = ComplexField::from_spectrum(grid, previous);
            return Err(blow_up(t, last, times, states, nl, cfg));
        }
        if step % cfg.store_every == 0 {
            times.push(step as f64 * cfg.dt);
            states.push(ComplexField::from_spectrum(grid, coeffs.clone()));
        }
    }
    Trajectory::from_states(times, states, nl, cfg.clone())
}

fn evolve_picard(u0: &ComplexField, nl: &PowerNonlinearity, cfg: &SolverConfig, steps: usize) -> Result<Trajectory> {
    if steps > 0 && steps < 2 {
        return Err(Error::InvalidConfig("picard scheme needs at least two steps".into()));
    }
    let window = ((cfg.picard_window / cfg.dt).round() as usize).max(2);
    let segments = steps.div_ceil(window).max(1);
    let mut times = vec![0.0];
    let mut states = vec![u0.clone()];
    let mut start = u0.clone();
    let mut done = 0;
    for seg in 0..segments {
        // Spread the steps evenly so that no segment is shorter than two steps.
        let len = steps / segments + usize::from(seg < steps % segments);
        if len == 0 {
            break;
        }
        let (samples, _) = picard_iterate(&start, nl, len, cfg)?;
        for (m, s) in samples.into_iter().enumerate().skip(1) {
            let step = done + m;
            if !s.is_finite() {
                let t = (step - 1) as f64 * cfg.dt;
                return Err(blow_up(t, start, times, states, nl, cfg));
            }
            if step % cfg.store_every == 0 {
                times.push(step as f64 * cfg.dt);
                states.push(s.clone());
            }
            if m == len {
                start = s;
            }
        }
        done += len;
    }
    Trajectory::from_states(times, states, nl, cfg.clone())
}

/// Result of a converged Picard iteration.
#[derive(Clone, Debug)]
pub struct PicardOutcome {
    pub trajectory: Trajectory,
    pub iterations: usize,
    /// `max_t ‖u⁽ⁿ⁺¹⁾(t) − u⁽ⁿ⁾(t)‖` for every iteration.
    pub differences: Vec<f64>,
}

/// Fixed-point iteration `u⁽ⁿ⁺¹⁾(t) = U(t)u₀ − i∫₀ᵗ U(t−s) f(u⁽ⁿ⁾(s)) ds` on
/// `[0, t_end]`, sampled every `cfg.dt`.
pub fn picard_solve(
    u0: &ComplexField,
    nl: &PowerNonlinearity,
    t_end: f64,
    cfg: &SolverConfig,
) -> Result<PicardOutcome> {
    let cfg = SolverConfig { t_final: t_end, scheme: Scheme::Picard, ..cfg.clone() };
    let steps = check_inputs(u0, nl, &cfg)?;
    if steps < 2 {
        return Err(Error::InvalidConfig("picard_solve needs at least two time steps".into()));
    }
    let (samples, differences) = picard_iterate(u0, nl, steps, &cfg)?;
    let mut times = Vec::new();
    let mut states = Vec::new();
    for (m, s) in samples.into_iter().enumerate() {
        if m % cfg.store_every == 0 {
            times.push(m as f64 * cfg.dt);
            states.push(s);
        }
    }
    let trajectory = Trajectory::from_states(times, states, nl, cfg)?;
    Ok(PicardOutcome { trajectory, iterations: differences.len(), differences })
}

fn picard_iterate(
    u0: &ComplexField,
    nl: &PowerNonlinearity,
    steps: usize,
    cfg: &SolverConfig,
) -> Result<(Vec<ComplexField>, Vec<f64>)> {
    let dt = cfg.dt;
    let rule = cfg.quad_order;
    if rule == Quadrature::Gauss4 {
        return Err(Error::Quadrature("picard iteration needs a rule on uniform samples".into()));
    }
    let free: Vec<ComplexField> = (0..=steps).map(|m| free_propagate(u0, m as f64 * dt)).collect();
    let threshold = cfg.picard_tol * u0.norm();
    let mut current = free.clone();
    let mut differences: Vec<f64> = Vec::new();
    let mut rising = 0;
    for iteration in 1..=cfg.picard_max_iter {
        let forcing: Vec<ComplexField> = current.iter().map(|u| nl.f_eval(u)).collect();
        let duhamel = running_duhamel(&forcing, dt, rule)?;
        let next: Vec<ComplexField> = free.iter().zip(&duhamel).map(|(a, b)| a + b).collect();
        let diff = next.iter().zip(&current).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        current = next;
        if !diff.is_finite() {
            differences.push(diff);
            return Err(Error::NonContraction { iterations: iteration, differences });
        }
        if let Some(&prev) = differences.last() {
            rising = if diff >= prev { rising + 1 } else { 0 };
        }
        differences.push(diff);
        if diff <= threshold {
            return Ok((current, differences));
        }
        if rising >= 3 {
            return Err(Error::NonContraction { iterations: iteration, differences });
        }
    }
    Err(Error::MaxIterations { iterations: cfg.picard_max_iter, differences })
}

/// Running Duhamel term `D(t_m) = −i∫₀^{t_m} U(t_m−s) g(s) ds` at every sample
/// `t_m = m·dt`, from samples of `g` at the same times.
pub fn running_duhamel(g: &[ComplexField], dt: f64, quad: Quadrature) -> Result<Vec<ComplexField>> {
    let pulled: Vec<ComplexField> = g.iter().enumerate().map(|(m, gm)| free_propagate(gm, -(m as f64) * dt)).collect();
    let running = quadrature::cumulative(&pulled, dt, quad.running_rule())?;
    Ok(running.iter().enumerate().map(|(m, c)| free_propagate(c, m as f64 * dt).scale(-I)).collect())
}

/// `−i Σ w_m U(t−s_m) g(s_m)` for samples at the nodes of `quad` on `[0, t]`.
pub fn duhamel_integral(times: &[f64], samples: &[ComplexField], t: f64, quad: Quadrature) -> Result<ComplexField> {
    if times.len() != samples.len() {
        return Err(Error::Quadrature(format!("{} times but {} samples", times.len(), samples.len())));
    }
    let panels = quad.panels_for(0.0, t, times)?;
    let grid = samples[0].grid();
    if samples.iter().any(|g| g.grid() != grid) {
        return Err(Error::GridMismatch);
    }
    let (_, weights) = quad.nodes_weights(0.0, t, panels)?;
    let terms: Vec<ComplexField> = times.iter().zip(samples).map(|(&s, g)| free_propagate(g, t - s)).collect();
    Ok(quadrature::integrate(&terms, &weights).scale(-I))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::make_grid;
    use std::f64::consts::PI;

    fn gaussian(grid: &Grid, amp: f64) -> ComplexField {
        ComplexField::from_fn(grid, |x| Complex64::new(amp * (-x.iter().map(|v| v * v).sum::<f64>()).exp(), 0.0))
    }

    fn cubic(lambda: f64) -> PowerNonlinearity {
        PowerNonlinearity::new(lambda, 3.0).unwrap()
    }

    fn rel_diff(a: &ComplexField, b: &ComplexField) -> f64 {
        (a - b).norm() / b.norm().max(1e-300)
    }

    #[test]
    fn zero_datum_stays_zero() {
        let g = make_grid(1, 32, 10.0).unwrap();
        let cfg = SolverConfig::new(0.01, 0.1);
        let traj = evolve(&ComplexField::zeros(&g), &cubic(-1.0), &cfg).unwrap();
        assert_eq!(traj.len(), 11);
        assert!(traj.states().iter().all(|u| u.max_abs() == 0.0));
    }

    #[test]
    fn evolve_matches_repeated_steps() {
        let g = make_grid(2, 16, 8.0).unwrap();
        let u0 = ComplexField::from_fn(&g, |x| Complex64::from_polar((-x[0] * x[0] - x[1] * x[1]).exp(), x[1]));
        let nl = cubic(-1.0);
        let traj = evolve(&u0, &nl, &SolverConfig { store_every: 5, ..SolverConfig::new(0.02, 0.2) }).unwrap();
        let mut u = u0;
        for _ in 0..10 {
            u = strang_step(&u, &nl, 0.02).unwrap();
        }
        assert!(rel_diff(traj.last(), &u) < 1e-13);
    }

    #[test]
    fn dealiasing_removes_high_modes() {
        let g = make_grid(1, 32, 10.0).unwrap();
        let u0 = ComplexField::from_fn(&g, |x| Complex64::new(2.0 * (-x[0] * x[0]).exp(), 0.0));
        let cfg = SolverConfig { dealias: true, ..SolverConfig::new(0.01, 0.05) };
        let traj = evolve(&u0, &PowerNonlinearity::new(1.0, 5.0).unwrap(), &cfg).unwrap();
        let spectrum = traj.last().spectrum();
        for (k, c) in spectrum.iter().enumerate() {
            if g.mode_number(k).abs() > 10 {
                assert!(c.norm() < 1e-12, "mode {} = {c}", g.mode_number(k));
            }
        }
        assert!(rel_diff(traj.last(), &crate::spectral::dealias(traj.last())) < 1e-14);
    }

    #[test]
    fn zero_coupling_is_free_flow() {
        let g = make_grid(1, 64, 20.0).unwrap();
        let u = ComplexField::from_fn(&g, |x| Complex64::new((-x[0] * x[0]).exp(), 0.3 * x[0]));
        let nl = PowerNonlinearity::new(0.0, 2.5).unwrap();
        let stepped = strang_step(&u, &nl, 0.05).unwrap();
        assert!(rel_diff(&stepped, &free_propagate(&u, 0.05)) < 1e-14);
    }

    #[test]
    fn plane_wave_step_is_exact() {
        let g = make_grid(2, 16, 2.0 * PI).unwrap();
        let (a, k) = (0.7, [2.0, -1.0]);
        let nl = PowerNonlinearity::new(1.3, 3.5).unwrap();
        let u = ComplexField::from_fn(&g, |x| Complex64::from_polar(a, k[0] * x[0] + k[1] * x[1]));
        let dt = 0.1;
        let omega = 0.5 * (k[0] * k[0] + k[1] * k[1]) + 1.3 * a.powf(2.5);
        let expected = u.scale(Complex64::from_polar(1.0, -omega * dt));
        assert!(rel_diff(&strang_step(&u, &nl, dt).unwrap(), &expected) < 1e-13);
        let dudt = time_derivative(&u, &nl);
        assert!(rel_diff(&dudt, &u.scale(Complex64::new(0.0, -omega))) < 1e-12);
    }

    #[test]
    fn step_preserves_charge_and_reverses() {
        let g = make_grid(1, 128, 30.0).unwrap();
        let u = ComplexField::from_fn(&g, |x| Complex64::from_polar(1.5 / x[0].cosh(), 0.4 * x[0]));
        let nl = cubic(-1.0);
        let v = strang_step(&u, &nl, 0.01).unwrap();
        assert!((v.norm_sq() - u.norm_sq()).abs() <= 1e-13 * u.norm_sq());
        let back = strang_step(&v, &nl, -0.01).unwrap();
        assert!(rel_diff(&back, &u) < 1e-12);
    }

    #[test]
    fn detects_blow_up() {
        let g = make_grid(1, 16, 10.0).unwrap();
        let u = gaussian(&g, 1e200);
        let cfg = SolverConfig::new(0.01, 0.05);
        match evolve(&u, &cubic(-1.0), &cfg) {
            Err(Error::BlowUp(b)) => {
                assert_eq!(b.time, 0.0);
                assert_eq!(b.partial.len(), 1);
                assert!(b.last_state.is_finite());
            }
            other => panic!("expected blow-up, got {other:?}"),
        }
        assert!(matches!(strang_step(&u, &cubic(-1.0), 0.01), Err(Error::BlowUp(_))));
    }

    #[test]
    fn collapse_is_flagged_as_under_resolved() {
        let g = make_grid(1, 128, 20.0).unwrap();
        let u = ComplexField::from_fn(&g, |x| Complex64::new(3.0 * (-x[0] * x[0]).exp(), 0.0));
        let nl = PowerNonlinearity::new(-1.0, 5.0).unwrap();
        let traj = evolve(&u, &nl, &SolverConfig { store_every: 10, ..SolverConfig::new(1e-3, 0.5) }).unwrap();
        assert!(traj.states().iter().all(ComplexField::is_finite));
        assert!(traj.warnings().iter().any(|w| w.contains("under-resolved")), "{:?}", traj.warnings());

        let mild = ComplexField::from_fn(&g, |x| Complex64::new((-x[0] * x[0]).exp(), 0.0));
        let calm = evolve(&mild, &cubic(1.0), &SolverConfig::new(1e-2, 0.5)).unwrap();
        assert!(calm.warnings().is_empty(), "{:?}", calm.warnings());
    }

    #[test]
    fn storage_cadence() {
        let g = make_grid(1, 32, 10.0).unwrap();
        let mut cfg = SolverConfig::new(0.01, 0.2);
        cfg.store_every = 5;
        let traj = evolve(&gaussian(&g, 1.0), &cubic(1.0), &cfg).unwrap();
        assert_eq!(traj.times().len(), 5);
        assert!((traj.sample_spacing() - 0.05).abs() < 1e-15);
        assert!((traj.times()[4] - 0.2).abs() < 1e-15);
        cfg.store_every = 3;
        assert!(evolve(&gaussian(&g, 1.0), &cubic(1.0), &cfg).is_err());
    }

    #[test]
    fn config_validation() {
        assert!(SolverConfig::new(0.0, 1.0).validate().is_err());
        assert!(SolverConfig::new(2.0, 1.0).validate().is_err());
        assert!(SolverConfig::new(0.3, 1.0).step_count().is_err());
        let mut cfg = SolverConfig::new(0.1, 1.0);
        cfg.picard_tol = 0.0;
        assert!(cfg.validate().is_err());
        assert_eq!(SolverConfig::new(0.1, 1.0).step_count().unwrap(), 10);
        assert_eq!(SolverConfig::new(0.1, 0.0).step_count().unwrap(), 0);
        assert_eq!("Picard".parse::<Scheme>().unwrap(), Scheme::Picard);
    }

    #[test]
    fn duhamel_of_zero_and_constant_integrand() {
        let g = make_grid(1, 64, 20.0).unwrap();
        let psi = gaussian(&g, 1.0);
        let t = 0.8;
        let (times, _) = Quadrature::Simpson.nodes_weights(0.0, t, 8).unwrap();
        let zeros = vec![ComplexField::zeros(&g); times.len()];
        assert_eq!(duhamel_integral(&times, &zeros, t, Quadrature::Simpson).unwrap().max_abs(), 0.0);
        // g(s) = U(s)ψ makes the integrand the constant U(t)ψ.
        let samples: Vec<_> = times.iter().map(|&s| free_propagate(&psi, s)).collect();
        let got = duhamel_integral(&times, &samples, t, Quadrature::Simpson).unwrap();
        let expected = free_propagate(&psi, t).scale(Complex64::new(0.0, -t));
        assert!(rel_diff(&got, &expected) < 1e-13);
        assert!(duhamel_integral(&times[..8], &samples[..8], t, Quadrature::Simpson).is_err());
    }

    #[test]
    fn duhamel_simpson_refines_at_fourth_order() {
        let g = make_grid(1, 64, 20.0).unwrap();
        let psi = ComplexField::from_fn(&g, |x| Complex64::new((-x[0] * x[0]).exp(), 0.0));
        let t = 1.0;
        let run = |quad: Quadrature, panels: usize| {
            let (times, _) = quad.nodes_weights(0.0, t, panels).unwrap();
            let samples: Vec<_> = times.iter().map(|&s| psi.scale(Complex64::new(s, 0.0))).collect();
            duhamel_integral(&times, &samples, t, quad).unwrap()
        };
        let reference = run(Quadrature::Gauss4, 64);
        let e1 = (&run(Quadrature::Simpson, 8) - &reference).norm();
        let e2 = (&run(Quadrature::Simpson, 16) - &reference).norm();
        let ratio = e1 / e2;
        assert!((14.0..18.0).contains(&ratio), "ratio {ratio}");
    }

    #[test]
    fn picard_without_coupling_converges_immediately() {
        let g = make_grid(1, 64, 20.0).unwrap();
        let u0 = gaussian(&g, 1.0);
        let nl = PowerNonlinearity::new(0.0, 3.0).unwrap();
        let out = picard_solve(&u0, &nl, 0.1, &SolverConfig::new(0.01, 0.1)).unwrap();
        assert_eq!(out.iterations, 1);
        assert!(rel_diff(out.trajectory.last(), &free_propagate(&u0, 0.1)) < 1e-14);
    }

    #[test]
    fn picard_contracts_geometrically_and_matches_strang() {
        let g = make_grid(1, 128, 30.0).unwrap();
        let u0 = gaussian(&g, 1.0);
        let nl = cubic(1.0);
        let cfg = SolverConfig::new(0.005, 0.2);
        let out = picard_solve(&u0, &nl, 0.2, &cfg).unwrap();
        let d = &out.differences;
        assert!(d.len() >= 4);
        for w in d.windows(2).skip(1).take(3) {
            assert!(w[1] / w[0] < 0.5, "{d:?}");
        }
        let strang = evolve(&u0, &nl, &cfg).unwrap();
        assert!(rel_diff(out.trajectory.last(), strang.last()) < 1e-4);
        let mut pcfg = cfg.clone();
        pcfg.scheme = Scheme::Picard;
        pcfg.picard_window = 0.05;
        let windowed = evolve(&u0, &nl, &pcfg).unwrap();
        assert_eq!(windowed.len(), strang.len());
        assert!(rel_diff(windowed.last(), out.trajectory.last()) < 1e-6);
    }

    #[test]
    fn picard_reports_non_contraction() {
        let g = make_grid(1, 64, 20.0).unwrap();
        let u0 = gaussian(&g, 4.0);
        let nl = cubic(1.0);
        let mut cfg = SolverConfig::new(0.01, 3.0);
        cfg.picard_max_iter = 200;
        match picard_solve(&u0, &nl, 3.0, &cfg) {
            Err(Error::NonContraction { differences, .. }) => assert!(differences.len() >= 4),
            other => panic!("expected non-contraction, got {:?}", other.map(|o| o.differences)),
        }
    }
}
