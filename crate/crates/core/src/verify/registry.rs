use std::fmt;
use std::str::FromStr;

use crate::error::Error;

/// Every identity the engine can check.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Check {
    Master,
    Charge,
    Energy,
    Momentum,
    PseudoConformal,
    Virial1,
    CrossTerm,
    Virial,
    Algebra,
    PotentialCalculus,
    IntegratedJ,
    ImGrad,
}

impl Check {
    pub const ALL: [Check; 12] = [
        Check::Master,
        Check::Charge,
        Check::Energy,
        Check::Momentum,
        Check::PseudoConformal,
        Check::Virial1,
        Check::CrossTerm,
        Check::Virial,
        Check::Algebra,
        Check::PotentialCalculus,
        Check::IntegratedJ,
        Check::ImGrad,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Check::Master => "master",
            Check::Charge => "charge",
            Check::Energy => "energy",
            Check::Momentum => "momentum",
            Check::PseudoConformal => "pseudo_conformal",
            Check::Virial1 => "virial1",
            Check::CrossTerm => "cross_term",
            Check::Virial => "virial",
            Check::Algebra => "algebra",
            Check::PotentialCalculus => "potential_calculus",
            Check::IntegratedJ => "integrated_j",
            Check::ImGrad => "im_grad",
        }
    }

    /// Where the identity is stated in the source article.
    pub fn anchor(self) -> &'static str {
        match self {
            Check::Master => "Prop. prop:main",
            Check::Charge => "Prop. Charge conservation",
            Check::Energy => "Prop. Energy conservation",
            Check::Momentum => "Prop. Momentum conservation",
            Check::PseudoConformal => "pc-law",
            Check::Virial1 => "eq:vi_1st",
            Check::CrossTerm => "eq:cross_term_identity",
            Check::Virial => "Prop. Virial identity",
            Check::Algebra => "eq:J_pseudo_algebra, eq:J_cross_algebra, eq:density_cancel",
            Check::PotentialCalculus => "Lemma Potential-energy calculus",
            Check::IntegratedJ => "Lemma lem:integrated_J_terms",
            Check::ImGrad => "Lemma lem:im_grad",
        }
    }

    /// Default pass threshold on `residual / scale`.
    pub fn default_tolerance(self) -> f64 {
        match self {
            Check::Charge => 1e-12,
            Check::Momentum => 1e-10,
            Check::Master => 1e-9,
            Check::Algebra | Check::ImGrad => 1e-8,
            Check::Energy
            | Check::PseudoConformal
            | Check::Virial1
            | Check::CrossTerm
            | Check::Virial
            | Check::PotentialCalculus
            | Check::IntegratedJ => 1e-6,
        }
    }

    /// Argument order of every pairing entering the report, with
    /// `inner(a, b) = h^d Σ a·conj(b)`.
    pub fn pairing(self) -> Option<&'static str> {
        Some(match self {
            Check::Master => "lhs = inner(v1, v2), integrand inner(v1, g2) - inner(g1, v2)",
            Check::Momentum => "P_j = Im inner(d_j u, u)",
            Check::Virial1 | Check::CrossTerm | Check::Virial => "cross_term = sum_j Im inner(d_j u, x_j u)",
            Check::Algebra => {
                "J_pseudo = sum_j Im inner(J_j v, J_j f(v)); J_cross = sum_j Re inner(d_j v, J_j f(v)) - Re inner(J_j v, d_j f(v)); \
                 im_grad = sum_j Im inner(d_j v, d_j f(v)); density_cancel = Re inner(d_j v, f(v))"
            }
            Check::PotentialCalculus => "rate = 2 Re inner(d_t u, f(u))",
            Check::IntegratedJ => {
                "pseudo: sum_j Im inner(J_j u, J_j f(u)); cross: sum_j Re inner(d_j u, J_j f(u)) - Re inner(J_j u, d_j f(u))"
            }
            Check::ImGrad => "lhs = sum_j Im inner(d_j u, d_j f(u)), rhs = 2 Re inner(d_t u, f(u))",
            Check::Charge | Check::Energy | Check::PseudoConformal => return None,
        })
    }

    /// `name (anchor)`, the line printed by the registry listing.
    pub fn listing(self) -> String {
        format!("{} ({})", self.name(), self.anchor())
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Check {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        let s = s.trim();
        Check::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::InvalidConfig(format!("unknown identity {s:?}")))
    }
}
