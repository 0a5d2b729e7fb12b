//! Pseudo-spectral solver for `i∂ₜu + ½Δu = f(u)` on a periodic box, with
//! numerical checks of its conservation laws and virial-type identities.

pub mod dynamics;
pub mod error;
pub mod field;
pub mod grid;
pub mod io;
pub mod nonlinearity;
pub mod observables;
#[cfg(any(test, feature = "oracle"))]
pub mod oracle;
pub mod quadrature;
pub mod spectral;
pub mod verify;

pub use dynamics::{evolve, picard_solve, strang_step, Scheme, SolverConfig, Trajectory};
pub use error::{Error, Result};
pub use field::{inner_product, pairing, ComplexField, VectorField};
pub use grid::{make_grid, Grid};
pub use nonlinearity::PowerNonlinearity;
pub use quadrature::Quadrature;
pub use verify::{Check, IdentityReport, VerifyOptions};
