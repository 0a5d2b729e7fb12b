//! Experiment configuration.
//!
//! The text format is flat `key = value` lines with dotted sections, e.g.
//!
//! ```text
//! grid.d = 1
//! grid.n = 256
//! grid.L = 40.0
//! nonlinearity.lambda = -1.0
//! nonlinearity.p = 3.0
//! initial.kind = "soliton"
//! solver.dt = 1e-3
//! solver.t_final = 1.0
//! checks = ["charge", "energy"]
//! output.json_path = "reports"
//! ```
//!
//! which is TOML, so `[section]` headers work too. A JSON document with the
//! same nesting is accepted as well. Relative paths are taken relative to the
//! directory holding the config file.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fs::File;
use std::io::BufReader;
use std::path::{Path, PathBuf};

use nls_conserve::io::read_field;
use nls_conserve::oracle::ExactSolution;
use nls_conserve::verify::{Check, EnergyMode, MasterPairing, VerifyOptions};
use nls_conserve::{make_grid, ComplexField, Grid, PowerNonlinearity, Quadrature, Scheme, SolverConfig};
use num_complex::Complex64;
use serde::Deserialize;

use crate::error::CliError;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSection {
    pub d: usize,
    pub n: usize,
    #[serde(rename = "L")]
    pub length: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NonlinearitySection {
    pub lambda: f64,
    pub p: f64,
}

fn one() -> f64 {
    1.0
}

/// Initial datum. Gaussians are `amplitude·exp(−|x−center|²/width²)·e^{i phase_k·x}`.
#[derive(Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum InitialSection {
    Gaussian {
        #[serde(default = "one")]
        width: f64,
        #[serde(default = "one")]
        amplitude: f64,
        #[serde(default)]
        center: Vec<f64>,
        #[serde(default)]
        phase_k: Vec<f64>,
    },
    PlaneWave {
        #[serde(alias = "A")]
        amplitude: f64,
        /// Phase of the complex amplitude, in radians.
        #[serde(default)]
        phase: f64,
        k: Vec<f64>,
    },
    Soliton {
        #[serde(default)]
        velocity: f64,
    },
    FieldFile {
        path: PathBuf,
    },
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverSection {
    pub dt: Option<f64>,
    pub t_final: Option<f64>,
    pub scheme: Option<Scheme>,
    pub picard_max_iter: Option<usize>,
    pub picard_tol: Option<f64>,
    pub quad_order: Option<Quadrature>,
    pub store_every: Option<usize>,
    pub picard_window: Option<f64>,
    pub dealias: Option<bool>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    pub json_path: Option<PathBuf>,
    pub csv_path: Option<PathBuf>,
    /// Final state as a field file (simulate only).
    pub field_path: Option<PathBuf>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifySection {
    pub energy_mode: Option<String>,
    pub master_pairing: Option<String>,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
pub enum CheckList {
    List(Vec<String>),
    Text(String),
}

impl Default for CheckList {
    fn default() -> Self {
        CheckList::List(Vec::new())
    }
}

/// The document as written.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawConfig {
    pub grid: GridSection,
    pub nonlinearity: NonlinearitySection,
    pub initial: InitialSection,
    #[serde(default)]
    pub solver: SolverSection,
    #[serde(default)]
    pub checks: CheckList,
    #[serde(default)]
    pub output: OutputSection,
    pub refinement_levels: Option<usize>,
    #[serde(default)]
    pub verify: VerifySection,
    #[serde(default)]
    pub tolerance: BTreeMap<String, f64>,
}

/// A validated experiment.
#[derive(Debug)]
pub struct ExperimentConfig {
    pub grid: Grid,
    pub nl: PowerNonlinearity,
    pub initial: ComplexField,
    /// Closed-form solution matching the initial datum, if there is one.
    pub exact: Option<ExactSolution>,
    pub solver: SolverConfig,
    pub checks: Vec<Check>,
    pub options: VerifyOptions,
    pub json_dir: PathBuf,
    pub csv_path: PathBuf,
    pub field_path: Option<PathBuf>,
    pub refinement_levels: usize,
}

fn bad(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}

impl RawConfig {
    pub fn parse(text: &str, json: bool) -> Result<Self, CliError> {
        if json {
            serde_json::from_str(text).map_err(|e| bad(format!("config: {e}")))
        } else {
            toml::from_str(text).map_err(|e| bad(format!("config: {e}")))
        }
    }
}

fn looks_like_json(path: &Path, text: &str) -> bool {
    path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json")) || text.trim_start().starts_with('{')
}

fn resolve(base: &Path, p: &Path) -> PathBuf {
    if p.is_absolute() {
        p.to_path_buf()
    } else {
        base.join(p)
    }
}

fn solver_config(s: &SolverSection) -> Result<SolverConfig, CliError> {
    let dt = s.dt.ok_or_else(|| bad("solver.dt is required"))?;
    let t_final = s.t_final.ok_or_else(|| bad("solver.t_final is required"))?;
    let mut cfg = SolverConfig::new(dt, t_final);
    if let Some(v) = s.scheme {
        cfg.scheme = v;
    }
    if let Some(v) = s.picard_max_iter {
        cfg.picard_max_iter = v;
    }
    if let Some(v) = s.picard_tol {
        cfg.picard_tol = v;
    }
    if let Some(v) = s.quad_order {
        cfg.quad_order = v;
    }
    if let Some(v) = s.store_every {
        cfg.store_every = v;
    }
    if let Some(v) = s.picard_window {
        cfg.picard_window = v;
    }
    if let Some(v) = s.dealias {
        cfg.dealias = v;
    }
    cfg.step_count()?;
    Ok(cfg)
}

fn per_axis(values: &[f64], dim: usize, what: &str) -> Result<Vec<f64>, CliError> {
    match values.len() {
        0 => Ok(vec![0.0; dim]),
        n if n == dim => Ok(values.to_vec()),
        n => Err(bad(format!("initial.{what} has {n} components, grid has d = {dim}"))),
    }
}

fn initial_field(
    init: &InitialSection,
    grid: &Grid,
    nl: &PowerNonlinearity,
    base: &Path,
) -> Result<(ComplexField, Option<ExactSolution>), CliError> {
    match init {
        InitialSection::Gaussian { width, amplitude, center, phase_k } => {
            if !(width.is_finite() && *width > 0.0) {
                return Err(bad(format!("initial.width must be positive, got {width}")));
            }
            let center = per_axis(center, grid.dim(), "center")?;
            let k = per_axis(phase_k, grid.dim(), "phase_k")?;
            let u = ComplexField::from_fn(grid, |x| {
                let r2: f64 = x.iter().zip(&center).map(|(a, c)| (a - c) * (a - c)).sum();
                let phase: f64 = x.iter().zip(&k).map(|(a, b)| a * b).sum();
                Complex64::from_polar(amplitude * (-r2 / (width * width)).exp(), phase)
            });
            Ok((u, None))
        }
        InitialSection::PlaneWave { amplitude, phase, k } => {
            for &kj in k {
                let m = (kj * grid.length() / (2.0 * PI)).round();
                if m.abs() >= (grid.n() / 2) as f64 {
                    return Err(bad(format!("plane-wave k = {kj} is not resolved by n = {}", grid.n())));
                }
            }
            let exact = ExactSolution::PlaneWave { amplitude: Complex64::from_polar(*amplitude, *phase), k: k.clone() };
            Ok((exact.eval(0.0, grid, nl)?, Some(exact)))
        }
        InitialSection::Soliton { velocity } => {
            let exact = ExactSolution::Soliton { velocity: *velocity };
            Ok((exact.eval(0.0, grid, nl)?, Some(exact)))
        }
        InitialSection::FieldFile { path } => {
            let path = resolve(base, path);
            let file = File::open(&path).map_err(|e| bad(format!("{}: {e}", path.display())))?;
            let u = read_field(BufReader::new(file))?;
            if u.grid() != grid {
                return Err(bad(format!("{} does not match the configured grid", path.display())));
            }
            Ok((u, None))
        }
    }
}

fn check_list(list: &CheckList) -> Result<Vec<Check>, CliError> {
    let names: Vec<String> = match list {
        CheckList::List(v) => v.clone(),
        CheckList::Text(s) if s.trim() == "all" => return Ok(Check::ALL.to_vec()),
        CheckList::Text(s) => s.split(',').map(str::to_string).filter(|s| !s.trim().is_empty()).collect(),
    };
    let mut checks = Vec::new();
    for name in names {
        let check: Check = name.parse()?;
        if !checks.contains(&check) {
            checks.push(check);
        }
    }
    Ok(checks)
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| bad(format!("{}: {e}", path.display())))?;
        let raw = RawConfig::parse(&text, looks_like_json(path, &text))?;
        let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Self::from_raw(raw, &base)
    }

    pub fn from_raw(raw: RawConfig, base: &Path) -> Result<Self, CliError> {
        let grid = make_grid(raw.grid.d, raw.grid.n, raw.grid.length)?;
        let nl = PowerNonlinearity::new(raw.nonlinearity.lambda, raw.nonlinearity.p)?;
        nl.validate_dimension(grid.dim())?;
        let solver = solver_config(&raw.solver)?;
        let (initial, exact) = initial_field(&raw.initial, &grid, &nl, base)?;

        let mut options = VerifyOptions::default();
        if let Some(mode) = &raw.verify.energy_mode {
            options.energy_mode = mode.parse::<EnergyMode>()?;
        }
        if let Some(pairing) = &raw.verify.master_pairing {
            options.master_pairing = pairing.parse::<MasterPairing>()?;
        }
        for (name, &tol) in &raw.tolerance {
            if !(tol.is_finite() && tol > 0.0) {
                return Err(bad(format!("tolerance.{name} must be positive")));
            }
            options.tolerances.insert(name.parse()?, tol);
        }

        let refinement_levels = raw.refinement_levels.unwrap_or(3);
        if refinement_levels == 0 {
            return Err(bad("refinement_levels must be at least 1"));
        }
        Ok(Self {
            grid,
            nl,
            initial,
            exact,
            solver,
            checks: check_list(&raw.checks)?,
            options,
            json_dir: resolve(base, raw.output.json_path.as_deref().unwrap_or(Path::new("reports"))),
            csv_path: resolve(base, raw.output.csv_path.as_deref().unwrap_or(Path::new("observables.csv"))),
            field_path: raw.output.field_path.as_deref().map(|p| resolve(base, p)),
            refinement_levels,
        })
    }

    /// Preconditions of verify and convergence mode.
    pub fn require_checks(&self) -> Result<(), CliError> {
        if self.checks.is_empty() {
            return Err(bad("checks must name at least one identity"));
        }
        let samples = self.solver.step_count()? / self.solver.store_every + 1;
        if samples < 3 {
            return Err(bad(format!("identity checks need at least 3 stored samples, this run stores {samples}")));
        }
        Ok(())
    }
}
