//! Exact rational arithmetic and sparse multivariate polynomials.

mod division;
pub mod eval;
mod monomial;
mod polynomial;
pub mod rational;
mod vartable;

pub use eval::{Horner, QuadraticSurd, Scalar};
pub use monomial::Monomial;
pub use polynomial::{Normalized, Polynomial};
pub use rational::{int, rat, Rational};
pub use vartable::VarTable;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PolyError {
    #[error("variable tables differ: {left:?} vs {right:?}")]
    TableMismatch { left: Vec<String>, right: Vec<String> },
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("duplicate variable `{0}`")]
    DuplicateVariable(String),
    #[error("invalid variable name `{0:?}`")]
    InvalidVariableName(String),
    #[error("negative exponent {0}")]
    NegativeExponent(i64),
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("{0} of the zero polynomial is undefined")]
    ZeroPolynomial(&'static str),
    #[error("no value supplied for variable `{0}`")]
    MissingValue(String),
    #[error("variable `{var}` has no image in the target table")]
    NoImage { var: String },
}
