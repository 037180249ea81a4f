//! Exact polynomial and rational-function arithmetic over ℚ and ℚ(i).

mod field;
mod gaussian;
pub mod linalg;
mod parse;
mod poly;
mod ratfn;
mod rational;
mod vars;

use thiserror::Error;

pub use field::{Coeff, Field};
pub use gaussian::GaussianRational;
pub use parse::parse_expression;
pub use poly::{conjugate_name, Monomial, Polynomial};
pub use ratfn::RationalFunction;
pub use rational::{common_denominator, int, is_negative, parse_rational, rat, Rational};
pub use vars::VarTable;

pub type Poly = Polynomial<Rational>;
pub type CPoly = Polynomial<GaussianRational>;
pub type RatFn = RationalFunction<Rational>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExprError {
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("exponent at byte {offset} is not a non-negative integer")]
    NegativeOrNonIntegerExponent { offset: usize },
    #[error("malformed expression at byte {offset}: {message}")]
    MalformedSyntax { offset: usize, message: String },
    #[error("the imaginary unit is not allowed in real mode")]
    ImaginaryInRealMode,
    #[error("expected {expected} coordinates, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("division by the zero rational function")]
    DivisionByZeroFunction,
    #[error("denominator vanishes at the evaluation point")]
    PoleAtPoint,
    #[error("polynomial is not over complexified variables")]
    NotComplexifiedMode,
}
