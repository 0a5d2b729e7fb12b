//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails. The oracle gate runs first; when it fails
//! the remaining criteria are reported as failed without being run.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::Instant;

use nls_conserve::observables::{charge, energy, momentum};
use nls_conserve::oracle::{dense_propagate, fd_scaling_derivative, ExactSolution};
use nls_conserve::spectral::free_propagate;
use nls_conserve::verify::{
    algebra_residuals, im_grad_residual, integrated_j_residuals, master_residual, measured_order, pc_residual,
    potential_calculus, virial_chain, EnergyMode, IdentityReport, MeasuredOrder,
};
use nls_conserve::{evolve, make_grid, picard_solve, ComplexField, Grid, PowerNonlinearity, Quadrature, SolverConfig};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn soliton_setup(length: f64, n: usize, velocity: f64) -> (Grid, PowerNonlinearity, ExactSolution) {
    let grid = make_grid(1, n, length).unwrap();
    let nl = PowerNonlinearity::new(-1.0, 3.0).unwrap();
    (grid, nl, ExactSolution::Soliton { velocity })
}

fn gaussian(grid: &Grid) -> ComplexField {
    ComplexField::from_fn(grid, |x| Complex64::new((-x[0] * x[0]).exp(), 0.0))
}

fn relative_l2(a: &ComplexField, b: &ComplexField) -> f64 {
    (a - b).norm() / b.norm()
}

fn order_ok(order: &MeasuredOrder, min: f64) -> bool {
    match order {
        MeasuredOrder::Saturated => true,
        MeasuredOrder::Order(q) => *q >= min,
        MeasuredOrder::NotMeasured => false,
    }
}

fn order_text(order: &MeasuredOrder) -> String {
    match order {
        MeasuredOrder::Saturated => "saturated".into(),
        MeasuredOrder::Order(q) => format!("{q:.3}"),
        MeasuredOrder::NotMeasured => "n/a".into(),
    }
}

fn list(values: &[f64]) -> String {
    let items: Vec<String> = values.iter().map(|v| format!("{v:.2e}")).collect();
    format!("[{}]", items.join(", "))
}

const HALVINGS: [f64; 3] = [2e-3, 1e-3, 5e-4];

fn oracle_gate() -> Outcome {
    let mut worst_dense: f64 = 0.0;
    for dim in [1, 2] {
        let grid = make_grid(dim, 16, 2.0 * PI).unwrap();
        let u = ComplexField::from_fn(&grid, |x| {
            let r2: f64 = x.iter().map(|v| v * v).sum();
            Complex64::from_polar((-r2).exp(), x[0])
        });
        for t in [0.3, -1.1, 2.0] {
            let err = relative_l2(&dense_propagate(&u, t).map_err(|e| e.to_string())?, &free_propagate(&u, t));
            worst_dense = worst_dense.max(err);
        }
    }
    let mut worst_sub: f64 = 0.0;
    let (grid, nl, _) = soliton_setup(60.0, 512, 0.0);
    for v in [0.0, 2.0 * PI * 6.0 / 60.0] {
        let sol = ExactSolution::Soliton { velocity: v };
        for t in [0.0, 0.7] {
            worst_sub = worst_sub.max(sol.substitution_residual(t, &grid, &nl).map_err(|e| e.to_string())?);
        }
    }
    let wave_grid = make_grid(2, 32, 2.0 * PI).unwrap();
    let wave_nl = PowerNonlinearity::new(1.0, 2.5).unwrap();
    let wave = ExactSolution::PlaneWave { amplitude: Complex64::new(0.6, 0.2), k: vec![3.0, -2.0] };
    worst_sub = worst_sub.max(wave.substitution_residual(0.4, &wave_grid, &wave_nl).map_err(|e| e.to_string())?);
    ensure(
        worst_dense <= 1e-12 && worst_sub <= 1e-10,
        format!("dense vs fft {worst_dense:.2e} (tol 1e-12), substitution {worst_sub:.2e} (tol 1e-10)"),
    )
}

fn charge_conservation() -> Outcome {
    let (grid, nl, sol) = soliton_setup(40.0, 256, 0.0);
    let u0 = sol.eval(0.0, &grid, &nl).unwrap();
    let traj = evolve(&u0, &nl, &SolverConfig { store_every: 10, ..SolverConfig::new(1e-3, 5.0) })
        .map_err(|e| e.to_string())?;
    let i0 = charge(traj.initial());
    let drift = traj.states().iter().map(|u| (charge(u) - i0).abs() / i0).fold(0.0, f64::max);
    ensure(drift <= 1e-12, format!("max |I(t)-I(0)|/I(0) = {drift:.2e} (tol 1e-12)"))
}

fn momentum_conservation() -> Outcome {
    let grid = make_grid(1, 256, 40.0).unwrap();
    let nl = PowerNonlinearity::new(-1.0, 3.0).unwrap();
    let k = 2.0 * PI * 6.0 / 40.0;
    let u0 = ComplexField::from_fn(&grid, |x| Complex64::from_polar(1.0 / x[0].cosh(), k * x[0]));
    let traj = evolve(&u0, &nl, &SolverConfig { store_every: 10, ..SolverConfig::new(1e-3, 5.0) })
        .map_err(|e| e.to_string())?;
    let p0 = momentum(traj.initial())[0];
    let drift = traj.states().iter().map(|u| (momentum(u)[0] - p0).abs() / (1.0 + p0.abs())).fold(0.0, f64::max);
    ensure(drift <= 1e-10, format!("k = {k:.4}, max |P(t)-P(0)|/(1+|P(0)|) = {drift:.2e} (tol 1e-10)"))
}

fn energy_drift(u0: &ComplexField, nl: &PowerNonlinearity, dt: f64, t: f64) -> Result<f64, String> {
    let traj = evolve(u0, nl, &SolverConfig::new(dt, t)).map_err(|e| e.to_string())?;
    let e0 = energy(traj.initial(), nl);
    Ok(traj.states().iter().map(|u| (energy(u, nl) - e0).abs() / e0.abs()).fold(0.0, f64::max))
}

fn energy_conservation() -> Outcome {
    let (grid, nl, sol) = soliton_setup(40.0, 256, 0.0);
    let exact = sol.eval(0.0, &grid, &nl).unwrap();
    let (fine, half) = (energy_drift(&exact, &nl, 1e-3, 5.0)?, energy_drift(&exact, &nl, 5e-4, 5.0)?);
    let exact_order = measured_order(&[1e-3, 5e-4], &[fine, half]);
    let bumped = exact.scale(Complex64::new(1.2, 0.0));
    let (coarse, finer) = (energy_drift(&bumped, &nl, 1e-3, 1.0)?, energy_drift(&bumped, &nl, 5e-4, 1.0)?);
    let ratio = coarse / finer;
    let ratio_ok = (3.2..=4.8).contains(&ratio);
    let exact_ratio_ok = match exact_order {
        MeasuredOrder::Saturated => true,
        _ => (3.2..=4.8).contains(&(fine / half)),
    };
    ensure(
        fine <= 1e-6 && coarse <= 1e-6 && ratio_ok && exact_ratio_ok,
        format!(
            "soliton drift(1e-3) = {fine:.2e}, ratio {} ; 1.2 sech drift(1e-3) = {coarse:.2e}, ratio {ratio:.3} (band [3.2, 4.8], tol 1e-6)",
            order_text(&exact_order)
        ),
    )
}

fn exact_solution_accuracy() -> Outcome {
    let (grid, nl, sol) = soliton_setup(40.0, 256, 0.0);
    let u0 = sol.eval(0.0, &grid, &nl).unwrap();
    let target = sol.eval(1.0, &grid, &nl).unwrap();
    let mut errors = Vec::new();
    for dt in HALVINGS {
        let traj = evolve(&u0, &nl, &SolverConfig::new(dt, 1.0)).map_err(|e| e.to_string())?;
        errors.push(relative_l2(traj.last(), &target));
    }
    let order = nls_conserve::verify::fit_order(&HALVINGS, &errors).unwrap_or(f64::NAN);

    let wave_grid = make_grid(1, 64, 2.0 * PI).unwrap();
    let wave_nl = PowerNonlinearity::new(1.0, 3.0).unwrap();
    let wave = ExactSolution::PlaneWave { amplitude: Complex64::new(0.8, 0.0), k: vec![3.0] };
    let w0 = wave.eval(0.0, &wave_grid, &wave_nl).unwrap();
    let traj = evolve(&w0, &wave_nl, &SolverConfig { store_every: 1000, ..SolverConfig::new(1e-3, 1.0) })
        .map_err(|e| e.to_string())?;
    let exact = wave.eval(1.0, &wave_grid, &wave_nl).unwrap();
    let phase_err =
        traj.last().values().iter().zip(exact.values()).map(|(a, b)| (a / b).arg().abs()).fold(0.0, f64::max);
    ensure(
        (order - 2.0).abs() <= 0.1 && phase_err <= 1e-10,
        format!(
            "soliton errors {}, order {order:.3} (2.0 ± 0.1); plane-wave phase error {phase_err:.2e} (tol 1e-10)",
            list(&errors)
        ),
    )
}

fn manufactured_master(samples: usize) -> Result<IdentityReport, String> {
    let grid = make_grid(1, 128, 20.0).unwrap();
    let bump = |c: f64, w: f64, k: f64| {
        ComplexField::from_fn(&grid, move |x| {
            let y = (x[0] - c) / w;
            Complex64::from_polar((-y * y).exp(), k * x[0])
        })
    };
    let psi1 = bump(-1.0, 1.0, 0.5);
    let psi2 = bump(0.5, 1.3, -0.3).scale(Complex64::new(0.4, 0.9));
    let e1 = bump(1.0, 0.8, 0.2);
    let e2 = bump(-0.5, 1.1, 0.0).scale(Complex64::new(0.0, 1.0));
    let h = 1.0 / samples as f64;
    let times: Vec<f64> = (0..=samples).map(|m| m as f64 * h).collect();
    let g1: Vec<ComplexField> = times.iter().map(|s| e1.scale(Complex64::new((-s).exp(), 0.0))).collect();
    let g2: Vec<ComplexField> = times.iter().map(|s| e2.scale(Complex64::new((-2.0 * s).exp(), 0.0))).collect();
    master_residual(&psi1, &psi2, &g1, &g2, &times, Quadrature::Simpson).map_err(|e| e.to_string())
}

fn master_identity() -> Outcome {
    let coarse = manufactured_master(80)?;
    let fine = manufactured_master(160)?;
    let ratio = coarse.max_residual() / fine.max_residual();
    let rel = fine.max_relative_residual();
    ensure(
        (12.0..=20.0).contains(&ratio) && rel <= 1e-9,
        format!(
            "residuals {:.2e} -> {:.2e}, ratio {ratio:.2} (band [12, 20]); finest {rel:.2e}·scale (tol 1e-9)",
            coarse.max_residual(),
            fine.max_residual()
        ),
    )
}

fn pseudo_conformal() -> Outcome {
    let grid = make_grid(1, 256, 40.0).unwrap();
    let critical = PowerNonlinearity::new(1.0, 5.0).unwrap();
    let traj = evolve(&gaussian(&grid), &critical, &SolverConfig::new(5e-4, 1.0)).map_err(|e| e.to_string())?;
    let log = traj.observables();
    let x0 = log[0].x_norm_sq;
    let conserved =
        log.iter().map(|r| (r.j_norm_sq + 2.0 * r.t * r.t * r.potential - x0).abs() / x0).fold(0.0, f64::max);

    let sub = PowerNonlinearity::new(1.0, 3.0).unwrap();
    let mut residuals = Vec::new();
    for dt in HALVINGS {
        let traj = evolve(&gaussian(&grid), &sub, &SolverConfig::new(dt, 1.0)).map_err(|e| e.to_string())?;
        residuals.push(pc_residual(&traj, &sub).map_err(|e| e.to_string())?.max_relative_residual());
    }
    let order = measured_order(&HALVINGS, &residuals);
    ensure(
        conserved <= 1e-7 && order_ok(&order, 1.9),
        format!(
            "critical drift {conserved:.2e}·‖xφ‖² (tol 1e-7); subcritical residuals {}, order {} (min 1.9)",
            list(&residuals),
            order_text(&order)
        ),
    )
}

fn virial_family() -> Outcome {
    let grid = make_grid(1, 256, 40.0).unwrap();
    let nl = PowerNonlinearity::new(1.0, 3.0).unwrap();
    let mut table: Vec<[f64; 3]> = Vec::new();
    let mut defect: f64 = 0.0;
    for dt in HALVINGS {
        let traj = evolve(&gaussian(&grid), &nl, &SolverConfig::new(dt, 1.0)).map_err(|e| e.to_string())?;
        let chain = virial_chain(&traj, &nl, EnergyMode::Initial).map_err(|e| e.to_string())?;
        defect = defect.max(chain.composition_defect).max(chain.bound_excess);
        table.push([
            chain.virial1.max_relative_residual(),
            chain.cross_term.max_relative_residual(),
            chain.virial.max_relative_residual(),
        ]);
    }
    let mut ok = defect <= 1e-11;
    let mut detail = Vec::new();
    for (j, name) in ["virial1", "cross_term", "virial"].iter().enumerate() {
        let column: Vec<f64> = table.iter().map(|row| row[j]).collect();
        let order = measured_order(&HALVINGS, &column);
        ok &= column[1] <= 1e-6 && order_ok(&order, 1.9);
        detail.push(format!("{name} {:.2e} order {}", column[1], order_text(&order)));
    }
    ensure(ok, format!("{} at dt=1e-3 (tol 1e-6, min order 1.9); chain defect {defect:.1e}", detail.join(", ")))
}

/// Sum of `count` random chirped Gaussians well inside the box.
fn random_field(grid: &Grid, rng: &mut ChaCha8Rng, count: usize) -> ComplexField {
    let bumps: Vec<(f64, f64, f64, Complex64)> = (0..count)
        .map(|_| {
            (
                rng.gen_range(-5.0..5.0),
                rng.gen_range(0.6..2.0),
                rng.gen_range(-2.0..2.0),
                Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
            )
        })
        .collect();
    ComplexField::from_fn(grid, |x| {
        bumps
            .iter()
            .map(|&(c, w, k, a)| {
                let y = (x[0] - c) / w;
                a * Complex64::from_polar((-y * y).exp(), k * x[0])
            })
            .sum()
    })
}

fn static_algebra() -> Outcome {
    let grid = make_grid(1, 256, 40.0).unwrap();
    let nls = [(-1.0, 3.0), (1.0, 3.0), (1.0, 5.0), (-1.0, 7.0)];
    let mut rng = ChaCha8Rng::seed_from_u64(20);
    let mut worst: f64 = 0.0;
    for i in 0..20 {
        let v = random_field(&grid, &mut rng, 3);
        let (lambda, p) = nls[i % nls.len()];
        let nl = PowerNonlinearity::new(lambda, p).unwrap();
        for s in [0.0, 0.7, -1.3] {
            worst = worst.max(algebra_residuals(&v, &nl, s).max_relative_residual());
        }
    }
    ensure(worst <= 1e-8, format!("20 fields × 3 times, worst {worst:.2e}·scale (tol 1e-8)"))
}

fn scaling_calculus() -> Outcome {
    let grid = make_grid(1, 256, 40.0).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let (mut fd_worst, mut w_worst, mut crit_worst): (f64, f64, f64) = (0.0, 0.0, 0.0);
    for (lambda, p) in [(1.0, 3.0), (-1.0, 2.5), (1.0, 4.0), (-2.0, 7.0)] {
        let nl = PowerNonlinearity::new(lambda, p).unwrap();
        let count = if p % 2.0 == 1.0 { 3 } else { 1 };
        for _ in 0..3 {
            let u = random_field(&grid, &mut rng, count);
            let (v, dsc, w) = (nl.v_integral(&u), nl.scaling_derivative(&u), nl.w_integral(&u));
            let scale = 1f64.max(v.abs()).max(dsc.abs());
            let fd = fd_scaling_derivative(&nl, &u, 1e-4).map_err(|e| e.to_string())?;
            fd_worst = fd_worst.max((dsc - fd).abs() / scale);
            w_worst = w_worst.max((w - (2.0 * v - dsc)).abs() / scale);
        }
    }
    for (d, n) in [(1, 256), (2, 64)] {
        let grid = make_grid(d, n, 20.0).unwrap();
        let nl = PowerNonlinearity::new(1.0, 1.0 + 4.0 / d as f64).unwrap();
        let u = ComplexField::from_fn(&grid, |x| {
            let r2: f64 = x.iter().map(|v| v * v).sum();
            Complex64::from_polar(1.5 * (-r2).exp(), x[0])
        });
        let scale = 1f64.max(nl.v_integral(&u).abs());
        crit_worst = crit_worst.max(nl.w_integral(&u).abs() / scale);
    }
    ensure(
        fd_worst <= 1e-6 && w_worst <= 1e-12 && crit_worst <= 1e-12,
        format!(
            "fd gap {fd_worst:.2e} (tol 1e-6), W consistency {w_worst:.2e} (tol 1e-12), critical W {crit_worst:.2e} (tol 1e-12)"
        ),
    )
}

fn lemma_runs() -> Outcome {
    let grid = make_grid(1, 256, 40.0).unwrap();
    let soliton = PowerNonlinearity::new(-1.0, 3.0).unwrap();
    let defocusing = PowerNonlinearity::new(1.0, 3.0).unwrap();
    let sech = ExactSolution::Soliton { velocity: 2.0 * PI * 3.0 / 40.0 }.eval(0.0, &grid, &soliton).unwrap();
    let mut ok = true;
    let mut detail = Vec::new();
    for (label, u0, nl) in [("soliton", &sech, &soliton), ("gaussian", &gaussian(&grid), &defocusing)] {
        let mut table: Vec<[f64; 3]> = Vec::new();
        for dt in HALVINGS {
            let traj = evolve(u0, nl, &SolverConfig::new(dt, 1.0)).map_err(|e| e.to_string())?;
            table.push([
                potential_calculus(&traj, nl).map_err(|e| e.to_string())?.max_relative_residual(),
                im_grad_residual(&traj, nl).max_relative_residual(),
                integrated_j_residuals(&traj, nl).map_err(|e| e.to_string())?.max_relative_residual(),
            ]);
        }
        for (j, name) in ["potential_calculus", "im_grad", "integrated_j"].iter().enumerate() {
            let column: Vec<f64> = table.iter().map(|row| row[j]).collect();
            let order = measured_order(&HALVINGS, &column);
            ok &= column[1] <= 1e-6 && order_ok(&order, 1.9);
            detail.push(format!("{label}/{name} {:.1e} order {}", column[1], order_text(&order)));
        }
    }
    ensure(ok, format!("{} (tol 1e-6 at dt=1e-3, min order 1.9)", detail.join(", ")))
}

fn solver_cross_validation() -> Outcome {
    let (grid, nl, sol) = soliton_setup(40.0, 256, 2.0 * PI * 3.0 / 40.0);
    let u0 = sol.eval(0.0, &grid, &nl).unwrap();
    let cfg = SolverConfig::new(1e-3, 0.1);
    let strang = evolve(&u0, &nl, &cfg).map_err(|e| e.to_string())?;
    let picard = picard_solve(&u0, &nl, 0.1, &cfg).map_err(|e| e.to_string())?;
    let gap = strang.states().iter().zip(picard.trajectory.states()).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
    let d = &picard.differences;
    let ratios: Vec<f64> = d.windows(2).skip(1).map(|w| w[1] / w[0]).collect();
    let worst_ratio = ratios.iter().copied().fold(0.0, f64::max);
    ensure(
        gap <= 1e-6 && worst_ratio < 0.5,
        format!(
            "L² gap {gap:.2e} (tol 1e-6); {} iterations, worst ratio after iteration 2 {worst_ratio:.3} (< 0.5)",
            picard.iterations
        ),
    )
}

fn main() -> ExitCode {
    let criteria: [Criterion; 11] = [
        ("c01 charge conservation", charge_conservation),
        ("c02 momentum conservation", momentum_conservation),
        ("c03 energy conservation", energy_conservation),
        ("c04 exact-solution accuracy", exact_solution_accuracy),
        ("c05 master identity", master_identity),
        ("c06 pseudo-conformal law", pseudo_conformal),
        ("c07 virial chain", virial_family),
        ("c08 static algebra", static_algebra),
        ("c09 scaling calculus", scaling_calculus),
        ("c10 potential calculus and lemmas", lemma_runs),
        ("c11 solver cross-validation", solver_cross_validation),
    ];
    let mut failures = 0;
    let mut report = |name: &str, outcome: Outcome, start: Instant| {
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {name}: {detail} [{secs:.1}s]"),
            Err(detail) => {
                failures += 1;
                println!("FAIL {name}: {detail} [{secs:.1}s]");
            }
        }
    };
    let start = Instant::now();
    let gate = oracle_gate();
    let gate_ok = gate.is_ok();
    report("c12 oracle gate", gate, start);
    for (name, run) in criteria {
        let start = Instant::now();
        let outcome = if gate_ok { run() } else { Err("not run, oracle gate failed".into()) };
        report(name, outcome, start);
    }
    println!("acceptance: {} of 12 criteria passed", 12 - failures);
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
