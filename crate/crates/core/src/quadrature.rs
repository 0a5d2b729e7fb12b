//! Composite quadrature in time: closed rules on uniform samples, a
//! 4-point Gauss–Legendre rule for reference values, and running integrals.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::Linear;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
#[derive(Default)]
pub enum Quadrature {
    Trapezoid,
    #[default]
    Simpson,
    Gauss4,
}

impl std::fmt::Display for Quadrature {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Quadrature::Trapezoid => "trapezoid",
            Quadrature::Simpson => "simpson",
            Quadrature::Gauss4 => "gauss4",
        })
    }
}

impl std::str::FromStr for Quadrature {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "trapezoid" => Ok(Quadrature::Trapezoid),
            "simpson" => Ok(Quadrature::Simpson),
            "gauss4" => Ok(Quadrature::Gauss4),
            other => Err(Error::Quadrature(format!("unknown rule {other:?}"))),
        }
    }
}

// Gauss–Legendre, 4 points on [-1, 1].
const GL4_NODES: [f64; 4] =
    [-0.861_136_311_594_052_6, -0.339_981_043_584_856_3, 0.339_981_043_584_856_3, 0.861_136_311_594_052_6];
const GL4_WEIGHTS: [f64; 4] =
    [0.347_854_845_137_453_9, 0.652_145_154_862_546_1, 0.652_145_154_862_546_1, 0.347_854_845_137_453_9];

impl Quadrature {
    /// Algebraic order of the composite rule on smooth integrands.
    pub fn order(self) -> u32 {
        match self {
            Quadrature::Trapezoid => 2,
            Quadrature::Simpson => 4,
            Quadrature::Gauss4 => 8,
        }
    }

    /// Nodes and weights of the composite rule with `panels` panels on `[a, b]`.
    /// Simpson needs an even panel count.
    pub fn nodes_weights(self, a: f64, b: f64, panels: usize) -> Result<(Vec<f64>, Vec<f64>)> {
        if panels == 0 {
            return Err(Error::Quadrature("need at least one panel".into()));
        }
        let h = (b - a) / panels as f64;
        match self {
            Quadrature::Trapezoid => {
                let nodes = uniform(a, b, panels);
                let mut w = vec![h; panels + 1];
                w[0] = 0.5 * h;
                w[panels] = 0.5 * h;
                Ok((nodes, w))
            }
            Quadrature::Simpson => {
                if !panels.is_multiple_of(2) {
                    return Err(Error::Quadrature(format!(
                        "simpson needs an even panel count (odd sample count), got {panels} panels"
                    )));
                }
                let nodes = uniform(a, b, panels);
                let w = (0..=panels)
                    .map(|m| {
                        let c = if m == 0 || m == panels {
                            1.0
                        } else if m % 2 == 1 {
                            4.0
                        } else {
                            2.0
                        };
                        c * h / 3.0
                    })
                    .collect();
                Ok((nodes, w))
            }
            Quadrature::Gauss4 => {
                let mut nodes = Vec::with_capacity(4 * panels);
                let mut w = Vec::with_capacity(4 * panels);
                for p in 0..panels {
                    let mid = a + (p as f64 + 0.5) * h;
                    for (x, wt) in GL4_NODES.iter().zip(GL4_WEIGHTS) {
                        nodes.push(mid + 0.5 * h * x);
                        w.push(0.5 * h * wt);
                    }
                }
                Ok((nodes, w))
            }
        }
    }

    /// Recovers the panel count of a sample set and checks its nodes.
    pub fn panels_for(self, a: f64, b: f64, times: &[f64]) -> Result<usize> {
        let panels = match self {
            Quadrature::Gauss4 => {
                if times.is_empty() || !times.len().is_multiple_of(4) {
                    return Err(Error::Quadrature(format!(
                        "gauss4 needs a multiple of 4 samples, got {}",
                        times.len()
                    )));
                }
                times.len() / 4
            }
            _ => {
                if times.len() < 2 {
                    return Err(Error::Quadrature("need at least two samples".into()));
                }
                times.len() - 1
            }
        };
        let (nodes, _) = self.nodes_weights(a, b, panels)?;
        let tol = 1e-12 * (b - a).abs().max(1.0);
        if nodes.iter().zip(times).any(|(x, y)| (x - y).abs() > tol) {
            return Err(Error::Quadrature(format!("sample times do not match {self} nodes on [{a}, {b}]")));
        }
        Ok(panels)
    }

    /// Rule used for running integrals over uniform samples. Gauss nodes are
    /// not uniform, so that rule falls back to Simpson.
    pub fn running_rule(self) -> Quadrature {
        match self {
            Quadrature::Trapezoid => Quadrature::Trapezoid,
            _ => Quadrature::Simpson,
        }
    }
}

fn uniform(a: f64, b: f64, panels: usize) -> Vec<f64> {
    let h = (b - a) / panels as f64;
    (0..=panels).map(|m| if m == panels { b } else { a + m as f64 * h }).collect()
}

/// `Σ w_m f_m`
pub fn integrate<T: Linear>(values: &[T], weights: &[f64]) -> T {
    assert_eq!(values.len(), weights.len());
    let mut acc = values[0].zero_like();
    for (v, w) in values.iter().zip(weights) {
        acc.add_scaled(*w, v);
    }
    acc
}

/// Running integral `C_m ≈ ∫_{t_0}^{t_m} f` on uniform samples with spacing
/// `h`, returned for every sample (`C_0 = 0`).
///
/// Simpson: even nodes use the composite rule; odd nodes add the last panel
/// integrated with the quadratic through the three latest samples
/// (`h/12 (-f_{m-2} + 8 f_{m-1} + 5 f_m)`, or the forward variant for `m = 1`),
/// so every node carries a fourth-order error. Needs at least three samples.
pub fn cumulative<T: Linear>(values: &[T], h: f64, rule: Quadrature) -> Result<Vec<T>> {
    match rule {
        Quadrature::Trapezoid => {
            if values.len() < 2 {
                return Err(Error::Quadrature("running integral needs at least two samples".into()));
            }
            let mut out = Vec::with_capacity(values.len());
            out.push(values[0].zero_like());
            for m in 1..values.len() {
                let mut c = out[m - 1].clone();
                c.add_scaled(0.5 * h, &values[m - 1]);
                c.add_scaled(0.5 * h, &values[m]);
                out.push(c);
            }
            Ok(out)
        }
        Quadrature::Simpson => {
            if values.len() < 3 {
                return Err(Error::Quadrature(format!(
                    "running integral needs at least three samples, got {}",
                    values.len()
                )));
            }
            let mut out: Vec<T> = Vec::with_capacity(values.len());
            out.push(values[0].zero_like());
            let mut first = values[0].zero_like();
            first.add_scaled(5.0 * h / 12.0, &values[0]);
            first.add_scaled(8.0 * h / 12.0, &values[1]);
            first.add_scaled(-h / 12.0, &values[2]);
            out.push(first);
            for m in 2..values.len() {
                let c = if m % 2 == 0 {
                    let mut c = out[m - 2].clone();
                    c.add_scaled(h / 3.0, &values[m - 2]);
                    c.add_scaled(4.0 * h / 3.0, &values[m - 1]);
                    c.add_scaled(h / 3.0, &values[m]);
                    c
                } else {
                    let mut c = out[m - 1].clone();
                    c.add_scaled(-h / 12.0, &values[m - 2]);
                    c.add_scaled(8.0 * h / 12.0, &values[m - 1]);
                    c.add_scaled(5.0 * h / 12.0, &values[m]);
                    c
                };
                out.push(c);
            }
            Ok(out)
        }
        Quadrature::Gauss4 => Err(Error::Quadrature("gauss4 has no running form on uniform samples".into())),
    }
}
