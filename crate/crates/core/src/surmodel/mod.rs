//! The SUR model: sparsity patterns with equality restrictions, exact
//! data, and construction of the determinant objective `G(β)`.

mod dataset;
mod objective;
mod pattern;

pub use dataset::Dataset;
pub use objective::{apply_scaling, build_objective, build_objective_unchecked, residual_matrix, ObjectiveSystem};
pub use pattern::SparsityPattern;

use thiserror::Error;

use crate::exactpoly::PolyError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SurError {
    #[error("invalid pattern: {0}")]
    InvalidPattern(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("N = {subjects} subjects but at least R + C = {needed} are required")]
    TooFewSubjects { subjects: usize, needed: usize },
    #[error("stacked data matrix [Y; X] has rank {rank}, expected {needed}")]
    RankDeficient { rank: usize, needed: usize },
    #[error("scale factor must be positive")]
    NonPositiveScale,
    #[error("no full-rank random dataset after 100 draws")]
    RandomDataExhausted,
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// Real parameter vector, one coordinate per restriction class in
/// canonical order.
#[derive(Clone, Debug, PartialEq)]
pub struct ParamVector(pub Vec<f64>);

impl ParamVector {
    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl From<Vec<f64>> for ParamVector {
    fn from(v: Vec<f64>) -> Self {
        ParamVector(v)
    }
}
