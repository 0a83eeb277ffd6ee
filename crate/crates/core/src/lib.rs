//! Exact umbral calculus over the rationals, with poly-Bernoulli polynomials
//! and a verifier for their recurrences and connection formulas.
//!
//! The crate is organised bottom-up:
//!
//! - [`series`]: truncated exponential-generating-function series, the
//!   umbral algebra of linear functionals on polynomials.
//! - [`umbral`]: polynomials, the pairing `<f(t) | p(x)>`, the operator
//!   action of a series on a polynomial, Appell sequences and connection
//!   coefficients between two Appell families.
//! - [`families`]: Stirling numbers, Bernoulli numbers and the concrete
//!   Appell families (poly-Bernoulli, higher-order Bernoulli, Euler and
//!   Frobenius-Euler).
//! - [`identities`]: exact checks of the poly-Bernoulli recurrences and
//!   connection formulas over parameter grids.
//!
//! Every scalar is a [`Rational`]; nothing is ever rounded.

pub mod error;
pub mod families;
pub mod identities;
pub mod rational;
pub mod series;
pub mod umbral;

pub use error::{Error, Result};
pub use families::{FamilyTag, Stirling2Table};
pub use identities::{CheckReport, GridSpec, IdentityId, Mutation, ParamValue, Value};
pub use rational::Rational;
pub use series::{Series, SeriesOrder};
pub use umbral::{AppellFamily, ConnectionMatrix, Polynomial};
