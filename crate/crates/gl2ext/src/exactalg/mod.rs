//! Exact arithmetic: rationals, sparse multivariate polynomials, rational
//! functions with factored denominators, resultants and p-adic valuations.

mod mpoly;
mod padic;
mod ratfunc;
mod resultant;
mod serial;

pub use mpoly::{univariate_div_rem, univariate_gcd, MPoly, Mono};
pub use padic::{show_vp, vp_int, vp_rat, PadicRat};
pub use ratfunc::{substitute, DenFactor, RatFunc};
pub use resultant::{determinant, resultant, resultant_univariate, sylvester_matrix};
pub use serial::{from_sexpr, parse_infix, to_sexpr};

use num_bigint::BigInt;

pub type Rat = num_rational::BigRational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AlgError {
    #[error("polynomial is not divisible")]
    NotDivisible,
    #[error("division by the zero polynomial")]
    DivisionByZeroPoly,
    #[error("inputs are not univariate in `{0}`")]
    NotUnivariateInVar(String),
    #[error("divisor is not a product of admissible denominator factors")]
    NotFactorable,
    #[error("no value supplied for variable `{0}`")]
    MissingValue(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Shorthand for `MPoly::var`.
pub fn x(name: &str) -> MPoly {
    MPoly::var(name)
}
