use serde::{Serialize, Serializer};

use super::registry::Check;
use crate::dynamics::Trajectory;
use crate::grid::Grid;
use crate::nonlinearity::PowerNonlinearity;
use crate::quadrature::Quadrature;

/// Run parameters echoed into every report. Fields that do not apply to a
/// check are `null`.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct ReportParams {
    pub d: Option<usize>,
    pub n: Option<usize>,
    #[serde(rename = "L")]
    pub length: Option<f64>,
    pub lambda: Option<f64>,
    pub p: Option<f64>,
    pub dt: Option<f64>,
    pub t_final: Option<f64>,
    pub scheme: Option<String>,
    pub quad: Option<String>,
}

impl ReportParams {
    pub fn for_grid(grid: &Grid) -> Self {
        Self { d: Some(grid.dim()), n: Some(grid.n()), length: Some(grid.length()), ..Self::default() }
    }

    pub fn with_nonlinearity(mut self, nl: &PowerNonlinearity) -> Self {
        self.lambda = Some(nl.lambda());
        self.p = Some(nl.exponent());
        self
    }

    pub fn with_quadrature(mut self, quad: Quadrature) -> Self {
        self.quad = Some(quad.to_string());
        self
    }

    pub fn for_trajectory(traj: &Trajectory, nl: &PowerNonlinearity) -> Self {
        let solver = traj.solver();
        Self {
            dt: Some(solver.dt),
            t_final: Some(solver.t_final),
            scheme: Some(solver.scheme.to_string()),
            quad: Some(solver.quad_order.to_string()),
            ..Self::for_grid(traj.grid()).with_nonlinearity(nl)
        }
    }
}

/// One row of a residual series. Rows of multi-part checks carry a `term`
/// label; the master identity also reports imaginary parts.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SeriesRow {
    pub t: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub term: Option<String>,
    pub lhs: f64,
    pub rhs: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lhs_im: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rhs_im: Option<f64>,
    pub residual: f64,
}

impl SeriesRow {
    pub fn real(t: f64, lhs: f64, rhs: f64) -> Self {
        Self { t, term: None, lhs, rhs, lhs_im: None, rhs_im: None, residual: (lhs - rhs).abs() }
    }

    pub fn labeled(t: f64, term: &str, lhs: f64, rhs: f64) -> Self {
        Self { term: Some(term.to_string()), ..Self::real(t, lhs, rhs) }
    }

    fn lhs_magnitude(&self) -> f64 {
        self.lhs.hypot(self.lhs_im.unwrap_or(0.0))
    }
}

/// Convergence order fitted over a refinement sequence.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub enum MeasuredOrder {
    #[default]
    NotMeasured,
    Order(f64),
    /// Residuals sit at roundoff on every level.
    Saturated,
}

impl Serialize for MeasuredOrder {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            MeasuredOrder::NotMeasured => s.serialize_none(),
            MeasuredOrder::Order(p) => s.serialize_f64(*p),
            MeasuredOrder::Saturated => s.serialize_str("saturated"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IdentityReport {
    pub name: String,
    pub params: ReportParams,
    pub admissible_pair: Option<[f64; 2]>,
    pub series: Vec<SeriesRow>,
    pub scale: f64,
    pub tolerance: f64,
    pub measured_order: MeasuredOrder,
    pub pass: bool,
    pub warnings: Vec<String>,
    /// Argument order of the pairings, `inner(a, b) = h^d Σ a·conj(b)`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pairing: Option<String>,
    #[serde(skip)]
    forced_failure: bool,
}

/// Canonical admissible pair `(4(p+1)/(d(p-1)), p+1)`.
fn admissible_pair(params: &ReportParams) -> Option<[f64; 2]> {
    match (params.d, params.p) {
        (Some(d), Some(p)) if p > 1.0 => Some([4.0 * (p + 1.0) / (d as f64 * (p - 1.0)), p + 1.0]),
        _ => None,
    }
}

impl IdentityReport {
    /// Builds a report; `scale = max(1, max |lhs|)` and the check passes when
    /// every `residual / scale` is within `tolerance`.
    pub fn new(name: &str, params: ReportParams, series: Vec<SeriesRow>, tolerance: f64) -> Self {
        let scale = series.iter().map(SeriesRow::lhs_magnitude).fold(1.0, f64::max);
        let mut report = Self {
            name: name.to_string(),
            admissible_pair: None,
            params,
            series,
            scale,
            tolerance,
            measured_order: MeasuredOrder::NotMeasured,
            pass: false,
            warnings: Vec::new(),
            pairing: name.parse::<Check>().ok().and_then(Check::pairing).map(str::to_string),
            forced_failure: false,
        };
        report.admissible_pair = admissible_pair(&report.params);
        report.pass = report.max_relative_residual() <= tolerance;
        report
    }

    /// Replaces the echoed parameters.
    pub fn with_params(mut self, params: ReportParams) -> Self {
        self.admissible_pair = admissible_pair(&params);
        self.params = params;
        self
    }

    /// Changes the threshold and re-evaluates the pass rule. Failures
    /// recorded through [`fail`](Self::fail) stick.
    pub fn set_tolerance(&mut self, tolerance: f64) {
        self.tolerance = tolerance;
        self.pass = !self.forced_failure && self.max_relative_residual() <= tolerance;
    }

    pub fn times(&self) -> Vec<f64> {
        self.series.iter().map(|r| r.t).collect()
    }

    pub fn residuals(&self) -> Vec<f64> {
        self.series.iter().map(|r| r.residual).collect()
    }

    /// Rows belonging to one term of a multi-part check.
    pub fn term<'a>(&'a self, term: &'a str) -> impl Iterator<Item = &'a SeriesRow> + 'a {
        self.series.iter().filter(move |r| r.term.as_deref() == Some(term))
    }

    pub fn max_residual(&self) -> f64 {
        self.series.iter().map(|r| r.residual).fold(0.0, f64::max)
    }

    /// `max residual / scale`; NaN residuals count as infinite.
    pub fn max_relative_residual(&self) -> f64 {
        self.series
            .iter()
            .map(|r| if r.residual.is_nan() { f64::INFINITY } else { r.residual / self.scale })
            .fold(0.0, f64::max)
    }

    pub fn warn(&mut self, warning: impl Into<String>) {
        self.warnings.push(warning.into());
    }

    /// Marks the report failed with an explanation.
    pub fn fail(&mut self, warning: impl Into<String>) {
        self.pass = false;
        self.forced_failure = true;
        self.warn(warning);
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }
}
