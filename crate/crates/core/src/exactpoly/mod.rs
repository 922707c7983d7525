//! Exact arithmetic kernel: rationals, monomials and monomial orders,
//! sparse multivariate polynomials over ℚ and polynomial matrices.

mod matrix;
mod monomial;
mod poly;
mod rational;

pub use matrix::PolyMatrix;
pub use monomial::{Monomial, MonomialOrder, OrderKind};
pub use poly::{default_names, ArithOp, MultiPoly};
pub use rational::{common_denominator, parse_rational, rational_from_f64, to_f64, Integer, Rational};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("variable count mismatch: {left} vs {right}")]
    VariableCountMismatch { left: usize, right: usize },
    #[error("variable index {var} out of range for {nvars} variables")]
    VariableOutOfRange { var: usize, nvars: usize },
    #[error("point has {got} coordinates, expected {expected}")]
    PointLength { expected: usize, got: usize },
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("shape error: {0}")]
    Shape(String),
    #[error("cannot parse {0:?}")]
    Parse(String),
}

/// Binary ring operation with an arity check.
pub fn poly_arith(a: &MultiPoly, b: &MultiPoly, op: ArithOp) -> Result<MultiPoly, PolyError> {
    a.try_arith(b, op)
}

/// Determinant of a square polynomial matrix.
pub fn poly_det(m: &PolyMatrix) -> Result<MultiPoly, PolyError> {
    m.det()
}
