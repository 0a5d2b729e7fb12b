use std::str::FromStr;

use super::registry::Check;
use super::report::{IdentityReport, ReportParams, SeriesRow};
use crate::dynamics::Trajectory;
use crate::error::{Error, Result};
use crate::nonlinearity::PowerNonlinearity;
use crate::observables::{accumulate, accumulate_series, Kernel};
use crate::spectral::BOUNDARY_MASS_TOLERANCE;

/// Relative size allowed for the defect of the virial chain composition.
pub const CHAIN_TOLERANCE: f64 = 1e-11;

/// Energy entering the cross-term and virial right-hand sides.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum EnergyMode {
    /// `E(φ)`, as when energy conservation is substituted.
    #[default]
    Initial,
    /// `E(u(s))` integrated in time, which keeps the solver's energy drift out
    /// of the residual.
    Instantaneous,
}

impl FromStr for EnergyMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "initial" => Ok(EnergyMode::Initial),
            "instantaneous" => Ok(EnergyMode::Instantaneous),
            other => Err(Error::InvalidConfig(format!("unknown energy mode {other:?}"))),
        }
    }
}

/// Warning text when some stored state carries mass near the box boundary.
pub(crate) fn boundary_warning(traj: &Trajectory) -> Option<String> {
    let worst = traj.observables().iter().map(|r| r.boundary_mass).fold(0.0, f64::max);
    (worst > BOUNDARY_MASS_TOLERANCE).then(|| {
        format!("boundary shell holds up to {worst:.3e} of the mass; weighted quantities feel the periodic wrap")
    })
}

fn report(check: Check, traj: &Trajectory, nl: &PowerNonlinearity, lhs: &[f64], rhs: &[f64]) -> IdentityReport {
    let series = traj.times().iter().zip(lhs.iter().zip(rhs)).map(|(&t, (&l, &r))| SeriesRow::real(t, l, r)).collect();
    let mut report =
        IdentityReport::new(check.name(), ReportParams::for_trajectory(traj, nl), series, check.default_tolerance());
    if let Some(w) = boundary_warning(traj) {
        report.warn(w);
    }
    report
}

fn column(traj: &Trajectory, f: impl Fn(&crate::observables::ObservableRecord) -> f64) -> Vec<f64> {
    traj.observables().iter().map(f).collect()
}

fn running(traj: &Trajectory, values: &[f64], kernel: Kernel) -> Result<Vec<f64>> {
    accumulate_series(values, traj.sample_spacing(), kernel, traj.solver().quad_order)
}

fn require_samples(traj: &Trajectory) -> Result<()> {
    if traj.len() < 3 {
        return Err(Error::Identity(format!("need at least three stored samples, got {}", traj.len())));
    }
    Ok(())
}

/// `‖J(t)u‖² + 2t²𝒱(u(t)) = ‖xφ‖² + 2∫₀ᵗ s 𝒲(u(s)) ds`
pub fn pc_residual(traj: &Trajectory, nl: &PowerNonlinearity) -> Result<IdentityReport> {
    require_samples(traj)?;
    let log = traj.observables();
    let lhs: Vec<f64> = log.iter().map(|r| r.j_norm_sq + 2.0 * r.t * r.t * r.potential).collect();
    let sw = accumulate(traj, Kernel::S)?;
    let rhs: Vec<f64> = sw.iter().map(|a| log[0].x_norm_sq + 2.0 * a).collect();
    Ok(report(Check::PseudoConformal, traj, nl, &lhs, &rhs))
}

fn virial1_parts(traj: &Trajectory) -> Result<(Vec<f64>, Vec<f64>)> {
    let lhs = column(traj, |r| r.x_norm_sq);
    let cross = running(traj, &column(traj, |r| r.cross_term), Kernel::One)?;
    let rhs = cross.iter().map(|c| lhs[0] + 2.0 * c).collect();
    Ok((lhs, rhs))
}

fn cross_parts(traj: &Trajectory, mode: EnergyMode) -> Result<(Vec<f64>, Vec<f64>)> {
    let log = traj.observables();
    let lhs = column(traj, |r| r.cross_term);
    let w = accumulate(traj, Kernel::One)?;
    let energy: Vec<f64> = match mode {
        EnergyMode::Initial => log.iter().map(|r| 2.0 * r.t * log[0].energy).collect(),
        EnergyMode::Instantaneous => running(traj, &column(traj, |r| 2.0 * r.energy), Kernel::One)?,
    };
    let rhs = energy.iter().zip(&w).map(|(e, w)| lhs[0] + e - w).collect();
    Ok((lhs, rhs))
}

fn virial_parts(traj: &Trajectory, mode: EnergyMode) -> Result<(Vec<f64>, Vec<f64>)> {
    let log = traj.observables();
    let lhs = column(traj, |r| r.x_norm_sq);
    let ww = accumulate(traj, Kernel::Double)?;
    let energy: Vec<f64> = match mode {
        EnergyMode::Initial => log.iter().map(|r| 2.0 * r.t * r.t * log[0].energy).collect(),
        EnergyMode::Instantaneous => {
            running(traj, &column(traj, |r| 2.0 * r.energy), Kernel::Double)?.iter().map(|v| 2.0 * v).collect()
        }
    };
    let (x0, c0) = (log[0].x_norm_sq, log[0].cross_term);
    let rhs = log.iter().zip(energy.iter().zip(&ww)).map(|(r, (e, w))| x0 + 2.0 * r.t * c0 + e - 2.0 * w).collect();
    Ok((lhs, rhs))
}

/// `‖xu(t)‖² = ‖xφ‖² + 2∫₀ᵗ cross_term(u(s)) ds`
pub fn virial1_residual(traj: &Trajectory, nl: &PowerNonlinearity) -> Result<IdentityReport> {
    require_samples(traj)?;
    let (lhs, rhs) = virial1_parts(traj)?;
    Ok(report(Check::Virial1, traj, nl, &lhs, &rhs))
}

/// `cross_term(u(t)) = cross_term(φ) + 2tE(φ) − ∫₀ᵗ 𝒲(u(s)) ds`
pub fn cross_term_residual(traj: &Trajectory, nl: &PowerNonlinearity, mode: EnergyMode) -> Result<IdentityReport> {
    require_samples(traj)?;
    let (lhs, rhs) = cross_parts(traj, mode)?;
    Ok(report(Check::CrossTerm, traj, nl, &lhs, &rhs))
}

/// The three virial-family reports and how well they compose.
#[derive(Clone, Debug)]
pub struct VirialChain {
    pub virial1: IdentityReport,
    pub cross_term: IdentityReport,
    pub virial: IdentityReport,
    /// `max |r_V − r_1 − 2∫r_c| / scale` over signed residuals.
    pub composition_defect: f64,
    /// Largest `|r_V| − (|r_1| + 2|∫r_c|)` relative to scale; non-positive
    /// up to roundoff.
    pub bound_excess: f64,
}

/// Evaluates first-order virial, cross-term and virial identities together and
/// checks that the virial residual is the first-order residual plus twice the
/// running integral of the cross-term residual.
pub fn virial_chain(traj: &Trajectory, nl: &PowerNonlinearity, mode: EnergyMode) -> Result<VirialChain> {
    require_samples(traj)?;
    let (l1, r1) = virial1_parts(traj)?;
    let (lc, rc) = cross_parts(traj, mode)?;
    let (lv, rv) = virial_parts(traj, mode)?;
    let signed = |l: &[f64], r: &[f64]| l.iter().zip(r).map(|(a, b)| a - b).collect::<Vec<f64>>();
    let (d1, dc, dv) = (signed(&l1, &r1), signed(&lc, &rc), signed(&lv, &rv));
    let integrated = running(traj, &dc, Kernel::One)?;

    let mut virial = report(Check::Virial, traj, nl, &lv, &rv);
    let scale = virial.scale;
    let mut defect: f64 = 0.0;
    let mut excess = f64::NEG_INFINITY;
    for m in 0..dv.len() {
        defect = defect.max((dv[m] - d1[m] - 2.0 * integrated[m]).abs() / scale);
        excess = excess.max((dv[m].abs() - d1[m].abs() - 2.0 * integrated[m].abs()) / scale);
    }
    if defect > CHAIN_TOLERANCE || excess > CHAIN_TOLERANCE {
        virial.fail(format!("virial chain broken: composition defect {defect:.3e}, bound excess {excess:.3e}"));
    }
    Ok(VirialChain {
        virial1: report(Check::Virial1, traj, nl, &l1, &r1),
        cross_term: report(Check::CrossTerm, traj, nl, &lc, &rc),
        virial,
        composition_defect: defect,
        bound_excess: excess,
    })
}

/// `‖xu(t)‖² = ‖xφ‖² + 2t cross_term(φ) + 2t²E(φ) − 2∫₀ᵗ∫₀ˢ 𝒲 dτ ds`, with
/// the chain consistency check folded into the pass flag.
pub fn virial_residual(traj: &Trajectory, nl: &PowerNonlinearity, mode: EnergyMode) -> Result<IdentityReport> {
    Ok(virial_chain(traj, nl, mode)?.virial)
}
