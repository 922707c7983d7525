use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rug::{Integer, Rational};

use super::{SparsityPattern, SurError};
use crate::exactpoly::{common_denominator, parse_rational};

/// Observed covariates `X` (C×N) and responses `Y` (R×N), exact.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dataset {
    x: Vec<Vec<Rational>>,
    y: Vec<Vec<Rational>>,
}

impl Dataset {
    /// Checks only that both matrices are nonempty, rectangular and share
    /// the subject count; see [`Dataset::validate`] for the rank condition.
    pub fn new(x: Vec<Vec<Rational>>, y: Vec<Vec<Rational>>) -> Result<Self, SurError> {
        let n = x.first().map_or(0, Vec::len);
        if x.is_empty() || y.is_empty() || n == 0 {
            return Err(SurError::Dimension("X and Y must be nonempty".into()));
        }
        if x.iter().chain(&y).any(|row| row.len() != n) {
            return Err(SurError::Dimension("all rows of X and Y must have the same length N".into()));
        }
        Ok(Dataset { x, y })
    }

    pub fn from_strings(x: &[Vec<String>], y: &[Vec<String>]) -> Result<Self, SurError> {
        let conv = |rows: &[Vec<String>]| -> Result<Vec<Vec<Rational>>, SurError> {
            rows.iter()
                .map(|row| row.iter().map(|s| parse_rational(s).map_err(SurError::from)).collect())
                .collect()
        };
        Self::new(conv(x)?, conv(y)?)
    }

    pub fn from_integers(x: &[&[i64]], y: &[&[i64]]) -> Result<Self, SurError> {
        let conv = |rows: &[&[i64]]| -> Vec<Vec<Rational>> {
            rows.iter().map(|row| row.iter().map(|&v| Rational::from(v)).collect()).collect()
        };
        Self::new(conv(x), conv(y))
    }

    pub fn x(&self) -> &[Vec<Rational>] {
        &self.x
    }

    pub fn y(&self) -> &[Vec<Rational>] {
        &self.y
    }

    pub fn covariates(&self) -> usize {
        self.x.len()
    }

    pub fn responses(&self) -> usize {
        self.y.len()
    }

    pub fn subjects(&self) -> usize {
        self.x[0].len()
    }

    /// Rank of the stacked matrix `[Y; X]`, by fraction-free elimination.
    pub fn stacked_rank(&self) -> usize {
        let rows: Vec<&Vec<Rational>> = self.y.iter().chain(&self.x).collect();
        integer_rank(&rows)
    }

    pub fn has_full_rank(&self) -> bool {
        self.stacked_rank() == self.responses() + self.covariates()
    }

    /// Requires `N ≥ R + C` and the stacked matrix `[Y; X]` to have full
    /// row rank.
    pub fn validate(&self) -> Result<(), SurError> {
        let need = self.responses() + self.covariates();
        if self.subjects() < need {
            return Err(SurError::TooFewSubjects { subjects: self.subjects(), needed: need });
        }
        let rank = self.stacked_rank();
        if rank != need {
            return Err(SurError::RankDeficient { rank, needed: need });
        }
        Ok(())
    }

    pub fn check_against(&self, pattern: &SparsityPattern) -> Result<(), SurError> {
        if self.responses() != pattern.responses() || self.covariates() != pattern.covariates() {
            return Err(SurError::Dimension(format!(
                "model is {}x{} but data has R={} responses and C={} covariates",
                pattern.responses(),
                pattern.covariates(),
                self.responses(),
                self.covariates()
            )));
        }
        Ok(())
    }

    /// Multiplies every entry of X and Y by `lambda > 0`.
    pub fn scaled(&self, lambda: &Rational) -> Result<Dataset, SurError> {
        if *lambda <= 0 {
            return Err(SurError::NonPositiveScale);
        }
        let scale = |rows: &[Vec<Rational>]| -> Vec<Vec<Rational>> {
            rows.iter().map(|r| r.iter().map(|v| Rational::from(v * lambda)).collect()).collect()
        };
        Ok(Dataset { x: scale(&self.x), y: scale(&self.y) })
    }

    /// Replaces response row `target` by `Y_target + factor · Y_source`
    /// (0-based rows).
    pub fn with_response_combination(&self, target: usize, source: usize, factor: &Rational) -> Dataset {
        let mut y = self.y.clone();
        for (t, s) in y[target].iter_mut().zip(&self.y[source]) {
            *t += Rational::from(s * factor);
        }
        Dataset { x: self.x.clone(), y }
    }

    /// Seeded integer data, uniform in `[-range, range]`, redrawn until the
    /// stacked rank condition holds.
    pub fn random(pattern: &SparsityPattern, subjects: usize, seed: u64, range: i64) -> Result<Dataset, SurError> {
        let (r, c) = (pattern.responses(), pattern.covariates());
        if subjects < r + c {
            return Err(SurError::TooFewSubjects { subjects, needed: r + c });
        }
        if range <= 0 {
            return Err(SurError::Dimension("random data range must be positive".into()));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut draw = |rows: usize| -> Vec<Vec<Rational>> {
            (0..rows)
                .map(|_| (0..subjects).map(|_| Rational::from(rng.random_range(-range..=range))).collect())
                .collect()
        };
        for _ in 0..100 {
            let x = draw(c);
            let y = draw(r);
            let data = Dataset { x, y };
            if data.has_full_rank() {
                return Ok(data);
            }
        }
        Err(SurError::RandomDataExhausted)
    }

    /// Entries of the data as `f64`, X and Y.
    pub fn to_f64(&self) -> (Vec<Vec<f64>>, Vec<Vec<f64>>) {
        let conv = |rows: &[Vec<Rational>]| rows.iter().map(|r| r.iter().map(Rational::to_f64).collect()).collect();
        (conv(&self.x), conv(&self.y))
    }
}

/// Bareiss fraction-free elimination after clearing row denominators.
fn integer_rank(rows: &[&Vec<Rational>]) -> usize {
    let mut m: Vec<Vec<Integer>> = rows
        .iter()
        .map(|row| {
            let d = common_denominator(row.iter());
            row.iter().map(|v| Rational::from(v * &d).into_numer_denom().0).collect()
        })
        .collect();
    let nrows = m.len();
    let ncols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    let mut prev = Integer::from(1);
    for col in 0..ncols {
        if rank == nrows {
            break;
        }
        let Some(pivot) = (rank..nrows).find(|&i| m[i][col] != 0) else { continue };
        m.swap(rank, pivot);
        for i in rank + 1..nrows {
            for j in col + 1..ncols {
                let v = Integer::from(&m[rank][col] * &m[i][j]) - Integer::from(&m[i][col] * &m[rank][j]);
                m[i][j] = v.div_exact(&prev);
            }
            m[i][col] = Integer::new();
        }
        prev = m[rank][col].clone();
        rank += 1;
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diag2() -> SparsityPattern {
        SparsityPattern::new(2, 2, &[(1, 1), (2, 2)]).unwrap()
    }

    #[test]
    fn rank_of_small_matrices() {
        let d = Dataset::from_integers(&[&[1, 2]], &[&[1, 2]]).unwrap();
        assert_eq!(d.stacked_rank(), 1);
        assert!(d.validate().is_err());
        let d = Dataset::from_integers(&[&[1, 2, 0]], &[&[1, 3, 1]]).unwrap();
        assert_eq!(d.stacked_rank(), 2);
        d.validate().unwrap();
        let zero = Dataset::from_integers(&[&[0, 0]], &[&[0, 0]]).unwrap();
        assert_eq!(zero.stacked_rank(), 0);
    }

    #[test]
    fn rank_with_fractions() {
        let x = vec![vec![Rational::from((1, 2)), Rational::from((1, 3))]];
        let y = vec![vec![Rational::from((3, 2)), Rational::from(1)]];
        // Y = 3 X.
        assert_eq!(Dataset::new(x, y).unwrap().stacked_rank(), 1);
    }

    #[test]
    fn random_data_is_deterministic_and_full_rank() {
        let a = Dataset::random(&diag2(), 8, 1, 300).unwrap();
        let b = Dataset::random(&diag2(), 8, 1, 300).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.stacked_rank(), 4);
        assert!(a.x().iter().chain(a.y()).flatten().all(|v| *v >= -300 && *v <= 300 && *v.denom() == 1));
        assert_ne!(a, Dataset::random(&diag2(), 8, 2, 300).unwrap());
    }

    #[test]
    fn random_data_needs_enough_subjects() {
        assert!(matches!(
            Dataset::random(&diag2(), 3, 1, 300),
            Err(SurError::TooFewSubjects { subjects: 3, needed: 4 })
        ));
    }

    #[test]
    fn scaling() {
        let d = Dataset::random(&diag2(), 6, 3, 10).unwrap();
        assert_eq!(d.scaled(&Rational::from(1)).unwrap(), d);
        assert!(matches!(d.scaled(&Rational::new()), Err(SurError::NonPositiveScale)));
        assert!(d.scaled(&Rational::from((1, 3))).unwrap().has_full_rank());
    }

    #[test]
    fn ragged_input_is_rejected() {
        let r = Dataset::from_integers(&[&[1, 2]], &[&[1]]);
        assert!(matches!(r, Err(SurError::Dimension(_))));
    }
}
