use super::registry::Check;
use super::report::{IdentityReport, ReportParams, SeriesRow};
use crate::dynamics::Trajectory;
use crate::nonlinearity::PowerNonlinearity;

fn scalar_law(
    check: Check,
    traj: &Trajectory,
    nl: &PowerNonlinearity,
    value: impl Fn(&crate::observables::ObservableRecord) -> f64,
) -> IdentityReport {
    let log = traj.observables();
    let initial = value(&log[0]);
    let series = log.iter().map(|r| SeriesRow::real(r.t, value(r), initial)).collect();
    IdentityReport::new(check.name(), ReportParams::for_trajectory(traj, nl), series, check.default_tolerance())
}

/// `I(u(t)) = I(φ)`
pub fn charge_residual(traj: &Trajectory, nl: &PowerNonlinearity) -> IdentityReport {
    scalar_law(Check::Charge, traj, nl, |r| r.charge)
}

/// `E(u(t)) = E(φ)`
pub fn energy_residual(traj: &Trajectory, nl: &PowerNonlinearity) -> IdentityReport {
    scalar_law(Check::Energy, traj, nl, |r| r.energy)
}

/// `P(u(t)) = P(φ)`, one labeled row per component and time.
pub fn momentum_residual(traj: &Trajectory, nl: &PowerNonlinearity) -> IdentityReport {
    let log = traj.observables();
    let labels = ["px", "py", "pz"];
    let mut series = Vec::new();
    for r in log {
        for (j, (&p, &p0)) in r.momentum.iter().zip(&log[0].momentum).enumerate() {
            series.push(SeriesRow::labeled(r.t, labels[j], p, p0));
        }
    }
    let check = Check::Momentum;
    IdentityReport::new(check.name(), ReportParams::for_trajectory(traj, nl), series, check.default_tolerance())
}

/// Charge, energy and momentum reports, in that order.
pub fn conservation_residuals(traj: &Trajectory, nl: &PowerNonlinearity) -> [IdentityReport; 3] {
    [charge_residual(traj, nl), energy_residual(traj, nl), momentum_residual(traj, nl)]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{evolve, SolverConfig};
    use crate::field::ComplexField;
    use crate::grid::make_grid;
    use num_complex::Complex64;

    #[test]
    fn zero_trajectory() {
        let g = make_grid(2, 16, 10.0).unwrap();
        let nl = PowerNonlinearity::new(1.0, 3.0).unwrap();
        let traj = evolve(&ComplexField::zeros(&g), &nl, &SolverConfig::new(0.1, 0.3)).unwrap();
        for r in conservation_residuals(&traj, &nl) {
            assert_eq!(r.max_residual(), 0.0);
            assert!(r.pass);
        }
    }

    #[test]
    fn moving_packet_conserves() {
        let g = make_grid(1, 256, 40.0).unwrap();
        let nl = PowerNonlinearity::new(-1.0, 3.0).unwrap();
        let k = 2.0 * std::f64::consts::PI * 3.0 / 40.0;
        let u0 = ComplexField::from_fn(&g, |x| Complex64::from_polar(1.0 / x[0].cosh(), k * x[0]));
        let traj = evolve(&u0, &nl, &SolverConfig::new(1e-3, 0.5)).unwrap();
        let [charge, energy, momentum] = conservation_residuals(&traj, &nl);
        assert!(charge.pass, "{}", charge.max_relative_residual());
        assert!(momentum.pass, "{}", momentum.max_relative_residual());
        assert!(energy.pass, "{}", energy.max_relative_residual());
        assert_eq!(momentum.term("px").count(), traj.len());
    }
}
