pub mod expr_core;

pub use expr_core::{
    parse_expression, CPoly, Coeff, ExprError, Field, GaussianRational, Poly, Polynomial, RatFn,
    Rational, RationalFunction, VarTable,
};
pub mod pfaff_geometry;
pub mod involutivity;
pub mod torsion;
pub mod integral_element;
pub mod jet_prolongation;
