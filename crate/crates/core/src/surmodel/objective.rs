use rug::Rational;

use super::{Dataset, SparsityPattern, SurError};
use crate::exactpoly::{MultiPoly, PolyMatrix};

/// The determinant objective `G(β)` and its gradient generators.
#[derive(Clone, Debug)]
pub struct ObjectiveSystem {
    pub objective: MultiPoly,
    pub gradient: Vec<MultiPoly>,
    pub pattern: SparsityPattern,
    pub data: Dataset,
}

impl ObjectiveSystem {
    pub fn num_params(&self) -> usize {
        self.pattern.num_params()
    }

    pub fn param_names(&self) -> Vec<String> {
        self.pattern.param_names()
    }

    /// Second partial derivatives of `G`, row-major `k×k`.
    pub fn hessian(&self) -> Vec<Vec<MultiPoly>> {
        self.gradient
            .iter()
            .map(|g| (0..self.num_params()).map(|j| g.differentiate(j).expect("index in range")).collect())
            .collect()
    }
}

/// Residual matrix `Y − B(β)X` as an R×N matrix of affine polynomials.
pub fn residual_matrix(pattern: &SparsityPattern, data: &Dataset) -> PolyMatrix {
    let n = pattern.num_params();
    let b = pattern.build_b();
    let x = PolyMatrix::from_rationals(n, data.x());
    let y = PolyMatrix::from_rationals(n, data.y());
    let bx = b.try_mul(&x).expect("B is R×C and X is C×N");
    y.try_sub(&bx).expect("Y and BX are both R×N")
}

/// Builds `G(β) = det((Y − BX)(Y − BX)')` and its partial derivatives,
/// after checking the data against the pattern and the stacked rank
/// condition.
pub fn build_objective(pattern: &SparsityPattern, data: &Dataset) -> Result<ObjectiveSystem, SurError> {
    data.check_against(pattern)?;
    data.validate()?;
    Ok(build_objective_unchecked(pattern, data))
}

/// As [`build_objective`] but without the rank and subject-count checks.
/// Dimensions must still agree.
pub fn build_objective_unchecked(pattern: &SparsityPattern, data: &Dataset) -> ObjectiveSystem {
    data.check_against(pattern).expect("pattern and data dimensions agree");
    let resid = residual_matrix(pattern, data);
    let gram = resid.try_mul(&resid.transpose()).expect("square Gram matrix");
    let objective = gram.det().expect("Gram matrix is square");
    let gradient = (0..pattern.num_params())
        .map(|k| objective.differentiate(k).expect("index in range"))
        .collect();
    ObjectiveSystem { objective, gradient, pattern: pattern.clone(), data: data.clone() }
}

/// Scales the data by `lambda > 0`.
pub fn apply_scaling(data: &Dataset, lambda: &Rational) -> Result<Dataset, SurError> {
    data.scaled(lambda)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scalar_regression_objective() {
        let pattern = SparsityPattern::new(1, 1, &[(1, 1)]).unwrap();
        let data = Dataset::from_integers(&[&[1, 2]], &[&[1, 2]]).unwrap();
        // Perfect fit data fails the rank condition but the polynomial is
        // still well defined.
        assert!(matches!(build_objective(&pattern, &data), Err(SurError::RankDeficient { .. })));
        let sys = build_objective_unchecked(&pattern, &data);
        let b = &["b"];
        assert_eq!(sys.objective, MultiPoly::parse("5*(1 - b)^2", b).unwrap());
        assert_eq!(sys.gradient, vec![MultiPoly::parse("-10*(1 - b)", b).unwrap()]);
    }

    #[test]
    fn dimension_mismatch() {
        let pattern = SparsityPattern::new(2, 2, &[(1, 1), (2, 2)]).unwrap();
        let data = Dataset::from_integers(&[&[1, 2, 3]], &[&[1, 2, 5]]).unwrap();
        assert!(matches!(build_objective(&pattern, &data), Err(SurError::Dimension(_))));
    }

    #[test]
    fn degree_bound_and_parameter_count() {
        let pattern = SparsityPattern::new(2, 3, &[(1, 1), (1, 2), (2, 3)]).unwrap();
        let data = Dataset::random(&pattern, 7, 5, 20).unwrap();
        let sys = build_objective(&pattern, &data).unwrap();
        assert_eq!(sys.objective.total_degree(), Some(4));
        assert_eq!(sys.gradient.len(), 3);
    }
}
