//! The statistical layer: covariance estimates at a fixed β, full and
//! profile log-likelihood, Hessian-based classification of stationary
//! points and the IGLS alternating baseline.

mod igls;

use std::f64::consts::PI;

use nalgebra::{DMatrix, SymmetricEigen};
use rug::Rational;
use thiserror::Error;

use crate::exactpoly::rational_from_f64;
use crate::surmodel::{Dataset, ObjectiveSystem, ParamVector, SparsityPattern};

pub use igls::{igls, ols_start, IglsResult, VectorizationMap};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LikelihoodError {
    #[error("parameter vector has {got} entries, expected {expected}")]
    Length { expected: usize, got: usize },
    #[error("non-finite parameter value")]
    NonFinite,
    #[error("objective G = {0} is not positive; the residual covariance is singular")]
    NonPositiveObjective(f64),
    #[error("singular system: {0}")]
    Singular(String),
}

/// `Σ̂` at some β together with its definiteness.
#[derive(Clone, Debug, PartialEq)]
pub struct CovarianceEstimate {
    pub sigma: DMatrix<f64>,
    pub positive_definite: bool,
}

impl CovarianceEstimate {
    fn new(sigma: DMatrix<f64>) -> Self {
        // Eigenvalues within rounding of zero count as singular.
        let eig = SymmetricEigen::new(sigma.clone()).eigenvalues;
        let scale = eig.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let floor = 64.0 * f64::EPSILON * scale;
        let positive_definite = scale > 0.0 && eig.iter().all(|&v| v > floor) && sigma.clone().cholesky().is_some();
        CovarianceEstimate { sigma, positive_definite }
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.sigma.row_iter().map(|r| r.iter().copied().collect()).collect()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LikelihoodEvaluation {
    /// `ℓ(β, Σ̂(β))` with all constants.
    pub log_likelihood: f64,
    /// `−(N/2) log(G/N^R) − RN/2 − (RN/2) log 2π`.
    pub profile_value: f64,
    pub objective_g: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Classification {
    LocalMax,
    LocalMin,
    Saddle,
    Degenerate,
}

impl Classification {
    pub fn as_str(self) -> &'static str {
        match self {
            Classification::LocalMax => "local-max",
            Classification::LocalMin => "local-min",
            Classification::Saddle => "saddle",
            Classification::Degenerate => "degenerate",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct StationaryPoint {
    pub beta: ParamVector,
    pub sigma: CovarianceEstimate,
    pub eval: LikelihoodEvaluation,
    pub classification: Classification,
    pub is_global_max: bool,
}

fn check_beta(pattern: &SparsityPattern, beta: &ParamVector) -> Result<(), LikelihoodError> {
    if beta.len() != pattern.num_params() {
        return Err(LikelihoodError::Length { expected: pattern.num_params(), got: beta.len() });
    }
    if beta.0.iter().any(|v| !v.is_finite()) {
        return Err(LikelihoodError::NonFinite);
    }
    Ok(())
}

/// `B(β)` as a float matrix.
pub fn coefficient_matrix(pattern: &SparsityPattern, beta: &ParamVector) -> DMatrix<f64> {
    DMatrix::from_fn(pattern.responses(), pattern.covariates(), |r, c| {
        pattern.param_of(r, c).map_or(0.0, |k| beta.0[k])
    })
}

pub(crate) fn data_matrices(data: &Dataset) -> (DMatrix<f64>, DMatrix<f64>) {
    let (x, y) = data.to_f64();
    let to = |rows: Vec<Vec<f64>>, n: usize| DMatrix::from_fn(rows.len(), n, |i, j| rows[i][j]);
    (to(x, data.subjects()), to(y, data.subjects()))
}

/// `Σ̂ = (1/N)(Y − BX)(Y − BX)'` in floating point.
pub fn sigma_hat(pattern: &SparsityPattern, data: &Dataset, beta: &ParamVector) -> Result<CovarianceEstimate, LikelihoodError> {
    check_beta(pattern, beta)?;
    let (x, y) = data_matrices(data);
    let e = y - coefficient_matrix(pattern, beta) * x;
    let s = (&e * e.transpose()) / data.subjects() as f64;
    // Symmetrize away rounding.
    let s = (&s + s.transpose()) * 0.5;
    Ok(CovarianceEstimate::new(s))
}

/// `G(β) = det((Y − BX)(Y − BX)')` computed exactly at the rational value
/// of the float point, then rounded.
pub fn objective_value(pattern: &SparsityPattern, data: &Dataset, beta: &ParamVector) -> Result<f64, LikelihoodError> {
    check_beta(pattern, beta)?;
    let b: Vec<Rational> = beta.0.iter().map(|&v| rational_from_f64(v).expect("finite")).collect();
    let (r, c, n) = (pattern.responses(), pattern.covariates(), data.subjects());
    let mut e = data.y().to_vec();
    for (ri, row) in e.iter_mut().enumerate() {
        for ci in 0..c {
            if let Some(k) = pattern.param_of(ri, ci) {
                for (v, xv) in row.iter_mut().zip(&data.x()[ci]) {
                    *v -= Rational::from(&b[k] * xv);
                }
            }
        }
    }
    let mut gram: Vec<Vec<Rational>> = (0..r)
        .map(|i| {
            (0..r)
                .map(|j| (0..n).fold(Rational::new(), |acc, t| acc + Rational::from(&e[i][t] * &e[j][t])))
                .collect()
        })
        .collect();
    Ok(rational_det(&mut gram).to_f64())
}

/// Determinant by Gaussian elimination over ℚ; destroys `m`.
fn rational_det(m: &mut [Vec<Rational>]) -> Rational {
    let n = m.len();
    let mut det = Rational::from(1);
    for col in 0..n {
        let Some(p) = (col..n).find(|&i| m[i][col] != 0) else {
            return Rational::new();
        };
        if p != col {
            m.swap(p, col);
            det = -det;
        }
        det *= &m[col][col];
        for row in col + 1..n {
            let f = Rational::from(&m[row][col] / &m[col][col]);
            for k in col..n {
                let t = Rational::from(&f * &m[col][k]);
                m[row][k] -= t;
            }
        }
    }
    det
}

/// Full Gaussian log-likelihood `ℓ(β, Σ)` with all constants.
pub fn log_likelihood(
    pattern: &SparsityPattern,
    data: &Dataset,
    beta: &ParamVector,
    sigma: &DMatrix<f64>,
) -> Result<f64, LikelihoodError> {
    check_beta(pattern, beta)?;
    let chol = sigma.clone().cholesky().ok_or_else(|| LikelihoodError::Singular("Σ is not positive definite".into()))?;
    let (x, y) = data_matrices(data);
    let e = y - coefficient_matrix(pattern, beta) * x;
    let (r, n) = (pattern.responses() as f64, data.subjects() as f64);
    let log_det: f64 = chol.l().diagonal().iter().map(|d| 2.0 * d.ln()).sum();
    let quad = chol.solve(&e).component_mul(&e).sum();
    Ok(-0.5 * r * n * (2.0 * PI).ln() - 0.5 * n * log_det - 0.5 * quad)
}

/// Profile log-likelihood at β, with `ℓ(β, Σ̂(β))` evaluated independently.
pub fn profile_loglik(pattern: &SparsityPattern, data: &Dataset, beta: &ParamVector) -> Result<LikelihoodEvaluation, LikelihoodError> {
    let g = objective_value(pattern, data, beta)?;
    if g.is_nan() || g <= 0.0 {
        return Err(LikelihoodError::NonPositiveObjective(g));
    }
    let (r, n) = (pattern.responses() as f64, data.subjects() as f64);
    let profile_value = -0.5 * n * (g.ln() - r * n.ln()) - 0.5 * r * n - 0.5 * r * n * (2.0 * PI).ln();
    let sigma = sigma_hat(pattern, data, beta)?;
    let log_likelihood = log_likelihood(pattern, data, beta, &sigma.sigma)?;
    Ok(LikelihoodEvaluation { log_likelihood, profile_value, objective_g: g })
}

/// Hessian of `G` at β, from the exact second derivatives evaluated at the
/// rational value of β.
pub fn objective_hessian(system: &ObjectiveSystem, beta: &ParamVector) -> DMatrix<f64> {
    let point: Vec<Rational> = beta.0.iter().map(|&v| rational_from_f64(v).expect("finite")).collect();
    let h = system.hessian();
    let k = system.num_params();
    DMatrix::from_fn(k, k, |i, j| h[i][j].evaluate_rational(&point).expect("point length").to_f64())
}

/// Classifies β by the eigenvalue signs of the Hessian of `G`. Since the
/// profile log-likelihood decreases in `G`, a minimum of `G` is a local
/// maximum of the likelihood.
pub fn classify(system: &ObjectiveSystem, beta: &ParamVector) -> Result<Classification, LikelihoodError> {
    check_beta(&system.pattern, beta)?;
    Ok(classify_matrix(objective_hessian(system, beta)))
}

fn classify_matrix(h: DMatrix<f64>) -> Classification {
    let h = (&h + h.transpose()) * 0.5;
    let eig = SymmetricEigen::new(h).eigenvalues;
    let scale = eig.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if scale == 0.0 || eig.iter().any(|v| v.abs() < 1e-6 * scale) {
        return Classification::Degenerate;
    }
    if eig.iter().all(|&v| v > 0.0) {
        Classification::LocalMax
    } else if eig.iter().all(|&v| v < 0.0) {
        Classification::LocalMin
    } else {
        Classification::Saddle
    }
}

/// Builds stationary-point records for real roots of the gradient, sorted
/// by decreasing log-likelihood. The point of minimal `G` is flagged as the
/// global maximum. Points where `G ≤ 0` are returned separately.
pub fn stationary_points(
    system: &ObjectiveSystem,
    real_roots: &[Vec<f64>],
) -> (Vec<StationaryPoint>, Vec<(Vec<f64>, LikelihoodError)>) {
    let mut points = Vec::new();
    let mut rejected = Vec::new();
    for root in real_roots {
        let beta = ParamVector(root.clone());
        let record = (|| -> Result<StationaryPoint, LikelihoodError> {
            let eval = profile_loglik(&system.pattern, &system.data, &beta)?;
            let sigma = sigma_hat(&system.pattern, &system.data, &beta)?;
            let classification = classify(system, &beta)?;
            Ok(StationaryPoint { beta: beta.clone(), sigma, eval, classification, is_global_max: false })
        })();
        match record {
            Ok(p) => points.push(p),
            Err(e) => rejected.push((root.clone(), e)),
        }
    }
    points.sort_by(|a, b| {
        a.eval.objective_g.total_cmp(&b.eval.objective_g).then_with(|| a.beta.0.partial_cmp(&b.beta.0).expect("finite"))
    });
    if let Some(best) = points.first_mut() {
        best.is_global_max = true;
    }
    (points, rejected)
}
