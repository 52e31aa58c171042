//! Fisher information of classical discrete orthogonal polynomials.
//!
//! The crate evaluates the Meixner, Krawtchouk, Charlier and
//! Meixner-Pollaczek families, their orthogonality weights and norms, and the
//! Fisher information of the normalized densities
//! `rho_n(x) = P_n(x)^2 rho(x) / h_n` with respect to one distinguished
//! parameter of each family. Every quantity is available two ways: an exact
//! closed form and a brute-force numeric sum (or quadrature), so that the two
//! can be checked against each other by the [`verify`] module.
//!
//! Module map:
//!
//! * [`hypergeom`]: Pochhammer symbols, terminating `2F1`/`2F0` series,
//!   three-term recurrences and the parameter derivative of `P_n`.
//! * [`gamma`]: `|Gamma(lambda + i x)|^2` through a complex Lanczos log-gamma.
//! * [`families`]: parameter records, weights, norms and normalized densities.
//! * [`fisher`]: closed forms, the cancellation-free summand and the numeric
//!   Fisher information.
//! * [`quadrature`] / [`summation`]: error-controlled integration on the real
//!   line and truncated summation over the non-negative integers.
//! * [`verify`]: oracle checks producing JSON-lines reports.
//! * [`cli`]: the `polyfisher` command-line front end.

pub mod cli;
mod ddouble;
pub mod error;
pub mod families;
pub mod fisher;
pub mod gamma;
pub mod hypergeom;
pub mod quadrature;
pub mod summation;
pub mod verify;

pub use error::{Error, Result};
pub use families::{DensityPoint, FamilySpec};
pub use fisher::{Distribution, FisherReport};
pub use hypergeom::{PochhammerValue, PolyEval, ZMap};
pub use quadrature::QuadratureConfig;
pub use summation::TruncationPolicy;
