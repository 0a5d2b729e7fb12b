//! Convergence-order fits over refinement sequences.

use super::report::MeasuredOrder;

/// Relative residual below which a refinement level counts as roundoff.
pub const SATURATION_LEVEL: f64 = 1e-10;

/// Least-squares slope of `log(error)` against `log(step)`.
pub fn fit_order(steps: &[f64], errors: &[f64]) -> Option<f64> {
    if steps.len() != errors.len() || steps.len() < 2 {
        return None;
    }
    if errors.iter().chain(steps).any(|v| !(v.is_finite() && *v > 0.0)) {
        return None;
    }
    let xs: Vec<f64> = steps.iter().map(|s| s.ln()).collect();
    let ys: Vec<f64> = errors.iter().map(|e| e.ln()).collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

/// Fitted order of relative residuals, or `Saturated` when every level is at
/// roundoff.
pub fn measured_order(steps: &[f64], relative_errors: &[f64]) -> MeasuredOrder {
    if !relative_errors.is_empty() && relative_errors.iter().all(|e| *e <= SATURATION_LEVEL) {
        return MeasuredOrder::Saturated;
    }
    match fit_order(steps, relative_errors) {
        Some(p) => MeasuredOrder::Order(p),
        None => MeasuredOrder::NotMeasured,
    }
}
