//! Identity engine: every conservation law, virial-type identity and
//! supporting lemma as a residual series with a pass/fail verdict.
//!
//! Pairing conventions. The article writes `(f, g) = ∫ f ḡ` and a bilinear
//! `⟨a, b⟩ = ∫ a b`. In code:
//!
//! | article       | code                 |
//! |---------------|----------------------|
//! | `(a, b)`      | `inner_product(a, b)` |
//! | `⟨a, b̄⟩`      | `inner_product(a, b)` |
//! | `⟨ā, b⟩`      | `inner_product(b, a)` |
//! | `⟨a, b⟩`      | `pairing(a, b)`       |

mod conservation;
mod lemmas;
mod master;
pub mod refine;
mod registry;
mod report;
mod virial;

use std::collections::BTreeMap;

pub use conservation::{charge_residual, conservation_residuals, energy_residual, momentum_residual};
pub use lemmas::{
    algebra_along, algebra_residuals, im_grad_residual, im_grad_static, integrated_j_residuals, potential_calculus,
    potential_calculus_residual,
};
pub use master::{master_along, master_residual, MasterPairing};
pub use refine::{fit_order, measured_order};
pub use registry::Check;
pub use report::{IdentityReport, MeasuredOrder, ReportParams, SeriesRow};
pub use virial::{
    cross_term_residual, pc_residual, virial1_residual, virial_chain, virial_residual, EnergyMode, VirialChain,
};

use crate::dynamics::Trajectory;
use crate::error::Result;
use crate::nonlinearity::PowerNonlinearity;

/// Knobs shared by all checks run along a trajectory.
#[derive(Clone, Debug, Default)]
pub struct VerifyOptions {
    pub energy_mode: EnergyMode,
    pub master_pairing: MasterPairing,
    /// Per-check tolerance overrides.
    pub tolerances: BTreeMap<Check, f64>,
}

impl VerifyOptions {
    pub fn tolerance(&self, check: Check) -> f64 {
        self.tolerances.get(&check).copied().unwrap_or_else(|| check.default_tolerance())
    }
}

/// Runs one registered check along a trajectory.
pub fn run_check(
    check: Check,
    traj: &Trajectory,
    nl: &PowerNonlinearity,
    opts: &VerifyOptions,
) -> Result<IdentityReport> {
    let mut report = match check {
        Check::Master => master_along(traj, nl, opts.master_pairing)?,
        Check::Charge => charge_residual(traj, nl),
        Check::Energy => energy_residual(traj, nl),
        Check::Momentum => momentum_residual(traj, nl),
        Check::PseudoConformal => pc_residual(traj, nl)?,
        Check::Virial1 => virial1_residual(traj, nl)?,
        Check::CrossTerm => cross_term_residual(traj, nl, opts.energy_mode)?,
        Check::Virial => virial_residual(traj, nl, opts.energy_mode)?,
        Check::Algebra => algebra_along(traj, nl),
        Check::PotentialCalculus => potential_calculus(traj, nl)?,
        Check::IntegratedJ => integrated_j_residuals(traj, nl)?,
        Check::ImGrad => im_grad_residual(traj, nl),
    };
    report.set_tolerance(opts.tolerance(check));
    for w in traj.warnings() {
        if !report.warnings.contains(w) {
            report.warn(w.clone());
        }
    }
    Ok(report)
}

/// Runs several checks; they only read the trajectory.
pub fn run_checks(
    checks: &[Check],
    traj: &Trajectory,
    nl: &PowerNonlinearity,
    opts: &VerifyOptions,
) -> Result<Vec<IdentityReport>> {
    checks.iter().map(|&c| run_check(c, traj, nl, opts)).collect()
}
