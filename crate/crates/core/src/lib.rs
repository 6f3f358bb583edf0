//! Exact R-Bonacci polynomials and the geometry of their zeros.
//!
//! * [`exactpoly`]: dense `Z[x]` arithmetic, formal derivatives, gcd and
//!   square-free decomposition, decimation `P(x) = x^s Q(x^r)`, exact
//!   evaluation at complex points.
//! * [`rbonacci`]: the polynomials themselves, by recurrence and by r-nomial
//!   closed form, plus closed-form derivatives and the Lucas identity.
//! * [`vieta`]: symmetric functions of the r-th powers of the zeros,
//!   compared exactly against their closed-form predictions.
//! * [`roots`]: numeric zeros with exact multiplicities, rotation orbits,
//!   closed-form zeros of the two-orbit derivatives, and the r-star probe.
//! * [`cli`]: the `rbonacci` command-line front end.

// `!(x <= tol)` is deliberate throughout: NaN must fail a tolerance check.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod exactpoly;
pub mod plot;
pub mod rbonacci;
pub mod report;
pub mod roots;
pub mod vieta;

pub use exactpoly::{DecimatedForm, IntPolynomial, Rational};
pub use rbonacci::{build_closed_form, build_derivative_closed_form, build_recurrence, rnomial, RBonacciParams};
pub use report::VerificationReport;
pub use roots::{find_roots, ComplexRootSet};
pub use vieta::{derivative_spec, DerivativeSpec};
