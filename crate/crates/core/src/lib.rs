//! Exact computation of every stationary point of the likelihood of a
//! seemingly unrelated regressions (SUR) model.
//!
//! The profile likelihood of a SUR model is a strictly decreasing function
//! of the Gram determinant `G(β) = det((Y − B(β)X)(Y − B(β)X)')`, a
//! polynomial in the free regression coefficients. The pipeline builds
//! `G` exactly, computes a Gröbner basis of the ideal generated by its
//! partial derivatives, reads off dimension and degree, and, when the
//! ideal is zero-dimensional, enumerates all complex solutions and
//! classifies the real ones.

pub mod exactpoly;
pub mod fixtures;
pub mod groebner;
pub mod likelihood;
pub mod pipeline;
pub mod surmodel;
pub mod zerosolve;

pub use exactpoly::{
    parse_rational, poly_arith, poly_det, ArithOp, Integer, Monomial, MonomialOrder, MultiPoly,
    OrderKind, PolyError, PolyMatrix, Rational,
};
pub use groebner::{
    buchberger, hilbert_dim_degree, normal_form, standard_monomials, GroebnerError, GroebnerResult, Ideal,
};
pub use likelihood::{
    classify, igls, log_likelihood, profile_loglik, sigma_hat, Classification, CovarianceEstimate, IglsResult,
    LikelihoodError, LikelihoodEvaluation, StationaryPoint, VectorizationMap,
};
pub use pipeline::{Analysis, AnalysisOptions, LexStrategy, PipelineError};
pub use surmodel::{apply_scaling, build_objective, Dataset, ObjectiveSystem, ParamVector, SparsityPattern, SurError};
pub use zerosolve::{
    filter_real, solve_zero_dim, univariate_roots, ComplexPoint, SolutionSet, SolveError, SolveOptions,
};
