use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::Path;
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use nls_conserve::io::write_field;
use nls_conserve::observables::write_csv;
use nls_conserve::verify::{fit_order, measured_order, run_check, MeasuredOrder};
use nls_conserve::{evolve, Check, Error, IdentityReport, SolverConfig, Trajectory};
use rayon::prelude::*;

use crate::config::ExperimentConfig;
use crate::error::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    Passed,
    Failed,
    BlewUp,
}

impl From<Outcome> for ExitCode {
    fn from(o: Outcome) -> Self {
        ExitCode::from(match o {
            Outcome::Passed => 0,
            Outcome::Failed => 1,
            Outcome::BlewUp => 3,
        })
    }
}

/// Timestamped lines kept out of the report payloads.
struct RunLog(BufWriter<File>);

impl RunLog {
    fn open(dir: &Path) -> Result<Self, CliError> {
        let path = dir.join("run.log");
        let file = File::create(&path).map_err(CliError::output(&path))?;
        Ok(Self(BufWriter::new(file)))
    }

    fn line(&mut self, msg: impl AsRef<str>) {
        let now = SystemTime::now().duration_since(UNIX_EPOCH).unwrap_or_default();
        let _ = writeln!(self.0, "{}.{:03} {}", now.as_secs(), now.subsec_millis(), msg.as_ref());
    }
}

fn create_parent(path: &Path) -> Result<(), CliError> {
    match path.parent() {
        Some(dir) if !dir.as_os_str().is_empty() => fs::create_dir_all(dir).map_err(CliError::output(dir)),
        _ => Ok(()),
    }
}

fn write_series(traj: &Trajectory, path: &Path) -> Result<(), CliError> {
    create_parent(path)?;
    let file = File::create(path).map_err(CliError::output(path))?;
    write_csv(traj.observables(), BufWriter::new(file))?;
    Ok(())
}

fn write_report(report: &IdentityReport, dir: &Path) -> Result<(), CliError> {
    let path = dir.join(format!("{}.json", report.name));
    fs::write(&path, report.to_json() + "\n").map_err(CliError::output(&path))
}

/// Runs the solver; a blow-up yields the partial trajectory.
fn solve(cfg: &ExperimentConfig, solver: &SolverConfig) -> Result<(Trajectory, bool), CliError> {
    match evolve(&cfg.initial, &cfg.nl, solver) {
        Ok(traj) => Ok((traj, false)),
        Err(Error::BlowUp(b)) => {
            eprintln!("warning: blow-up detected after t = {}", b.time);
            Ok((b.partial, true))
        }
        Err(e) => Err(e.into()),
    }
}

fn verdict(report: &IdentityReport) -> String {
    format!(
        "{} {:<18} residual/scale {:.3e} (tol {:.1e})",
        if report.pass { "PASS" } else { "FAIL" },
        report.name,
        report.max_relative_residual(),
        report.tolerance
    )
}

pub fn simulate(cfg: &ExperimentConfig) -> Result<Outcome, CliError> {
    let (traj, blew_up) = solve(cfg, &cfg.solver)?;
    write_series(&traj, &cfg.csv_path)?;
    if let Some(path) = &cfg.field_path {
        create_parent(path)?;
        let file = File::create(path).map_err(CliError::output(path))?;
        write_field(traj.last(), BufWriter::new(file))?;
    }
    for w in traj.warnings() {
        eprintln!("warning: {w}");
    }
    let last = traj.observables().last().expect("trajectory holds the initial state");
    println!(
        "t = {}  charge = {:.15e}  energy = {:.15e}  ({} samples -> {})",
        last.t,
        last.charge,
        last.energy,
        traj.len(),
        cfg.csv_path.display()
    );
    Ok(if blew_up { Outcome::BlewUp } else { Outcome::Passed })
}

fn run_all(cfg: &ExperimentConfig, traj: &Trajectory) -> Result<Vec<IdentityReport>, CliError> {
    let reports: Result<Vec<_>, _> =
        cfg.checks.par_iter().map(|&c| run_check(c, traj, &cfg.nl, &cfg.options)).collect();
    Ok(reports?)
}

pub fn verify(cfg: &ExperimentConfig) -> Result<Outcome, CliError> {
    cfg.require_checks()?;
    fs::create_dir_all(&cfg.json_dir).map_err(CliError::output(&cfg.json_dir))?;
    let mut log = RunLog::open(&cfg.json_dir)?;
    log.line(format!("verify start dt={} t_final={}", cfg.solver.dt, cfg.solver.t_final));
    let (traj, blew_up) = solve(cfg, &cfg.solver)?;
    log.line(format!("solver done, {} samples", traj.len()));
    write_series(&traj, &cfg.csv_path)?;
    if blew_up && traj.len() < 3 {
        eprintln!("warning: too few samples before blow-up to evaluate identities");
        return Ok(Outcome::BlewUp);
    }
    let reports = run_all(cfg, &traj)?;
    log.line("checks done");
    for report in &reports {
        write_report(report, &cfg.json_dir)?;
        println!("{}", verdict(report));
        for w in &report.warnings {
            eprintln!("warning [{}]: {w}", report.name);
        }
    }
    log.line("reports written");
    Ok(if blew_up {
        Outcome::BlewUp
    } else if reports.iter().all(|r| r.pass) {
        Outcome::Passed
    } else {
        Outcome::Failed
    })
}

fn order_cell(order: &MeasuredOrder) -> String {
    match order {
        MeasuredOrder::NotMeasured => String::new(),
        MeasuredOrder::Order(q) => format!("{q}"),
        MeasuredOrder::Saturated => "saturated".into(),
    }
}

struct Level {
    dt: f64,
    reports: Vec<IdentityReport>,
    /// Relative max-norm distance to the exact solution at `t_final`.
    exact_error: Option<f64>,
}

fn run_level(cfg: &ExperimentConfig, level: usize) -> Result<Level, CliError> {
    let solver = SolverConfig { dt: cfg.solver.dt / f64::powi(2.0, level as i32), ..cfg.solver.clone() };
    solver.step_count()?;
    let traj = evolve(&cfg.initial, &cfg.nl, &solver)?;
    let exact_error = match &cfg.exact {
        Some(exact) => {
            let target = exact.eval(solver.t_final, &cfg.grid, &cfg.nl)?;
            let err = (traj.last() - &target).max_abs() / target.max_abs();
            Some(err)
        }
        None => None,
    };
    Ok(Level { dt: solver.dt, reports: run_all(cfg, &traj)?, exact_error })
}

/// Reruns the experiment with `dt` halved per level and fits convergence
/// orders. Writes the finest-level reports (with `measured_order` set), a
/// `convergence.csv` table and a `run.log` sidecar into the JSON directory.
pub fn convergence(cfg: &ExperimentConfig, levels: usize) -> Result<Outcome, CliError> {
    if levels < 2 {
        return Err(CliError::Config(format!("convergence needs at least 2 levels, got {levels}")));
    }
    cfg.require_checks()?;
    fs::create_dir_all(&cfg.json_dir).map_err(CliError::output(&cfg.json_dir))?;
    let mut log = RunLog::open(&cfg.json_dir)?;
    log.line(format!("convergence start, {levels} levels from dt={}", cfg.solver.dt));
    let results: Vec<Result<Level, CliError>> = (0..levels).into_par_iter().map(|l| run_level(cfg, l)).collect();
    let mut runs = Vec::with_capacity(levels);
    for (l, r) in results.into_iter().enumerate() {
        match r {
            Ok(level) => {
                log.line(format!("level {l} dt={} done", level.dt));
                runs.push(level);
            }
            Err(e) => {
                log.line(format!("level {l} failed: {e}"));
                return Err(e);
            }
        }
    }
    let steps: Vec<f64> = runs.iter().map(|r| r.dt).collect();

    let table_path = cfg.json_dir.join("convergence.csv");
    let mut table = String::from("identity,level,dt,max_residual,relative_residual,measured_order\n");
    let mut all_pass = true;
    for (i, &check) in cfg.checks.iter().enumerate() {
        let relative: Vec<f64> = runs.iter().map(|r| r.reports[i].max_relative_residual()).collect();
        let order = measured_order(&steps, &relative);
        for (l, run) in runs.iter().enumerate() {
            let rep = &run.reports[i];
            table += &format!(
                "{},{l},{},{},{},{}\n",
                check.name(),
                run.dt,
                rep.max_residual(),
                rep.max_relative_residual(),
                order_cell(&order)
            );
        }
        let mut finest = runs.last().expect("at least two levels").reports[i].clone();
        finest.measured_order = order;
        all_pass &= finest.pass;
        write_report(&finest, &cfg.json_dir)?;
        println!("{}  order {}", verdict(&finest), order_text(&order));
    }
    if cfg.exact.is_some() {
        let errors: Vec<f64> = runs.iter().filter_map(|r| r.exact_error).collect();
        let order = measured_order(&steps, &errors);
        for (l, (run, err)) in runs.iter().zip(&errors).enumerate() {
            table += &format!("exact_error,{l},{},{err},{err},{}\n", run.dt, order_cell(&order));
        }
        let fitted = fit_order(&steps, &errors).map_or("n/a".into(), |q| format!("{q:.3}"));
        println!(
            "     exact_error        finest {:.3e}  order {} (fit {fitted})",
            errors[errors.len() - 1],
            order_text(&order)
        );
    }
    fs::write(&table_path, table).map_err(CliError::output(&table_path))?;
    log.line("table written");
    Ok(if all_pass { Outcome::Passed } else { Outcome::Failed })
}

fn order_text(order: &MeasuredOrder) -> String {
    match order {
        MeasuredOrder::NotMeasured => "n/a".into(),
        MeasuredOrder::Order(q) => format!("{q:.3}"),
        MeasuredOrder::Saturated => "saturated".into(),
    }
}

pub fn list_identities() {
    for check in Check::ALL {
        println!("{}", check.listing());
    }
}
