use std::fmt;

use super::SurError;
use crate::exactpoly::{MultiPoly, PolyMatrix};

/// The set of free regression coefficients `(r, c)` of a SUR model,
/// optionally partitioned into equality classes that share one parameter.
///
/// Indices are stored 0-based; constructors and [`fmt::Display`] use the
/// 1-based convention of model files.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparsityPattern {
    responses: usize,
    covariates: usize,
    entries: Vec<(usize, usize)>,
    classes: Vec<Vec<usize>>,
    class_of: Vec<usize>,
}

impl SparsityPattern {
    /// Unrestricted pattern from 1-based `(r, c)` pairs.
    pub fn new(responses: usize, covariates: usize, entries: &[(usize, usize)]) -> Result<Self, SurError> {
        if responses == 0 || covariates == 0 {
            return Err(SurError::InvalidPattern("R and C must be positive".into()));
        }
        if entries.is_empty() {
            return Err(SurError::InvalidPattern("pattern has no entries".into()));
        }
        let mut zero_based = Vec::with_capacity(entries.len());
        for &(r, c) in entries {
            if r == 0 || c == 0 || r > responses || c > covariates {
                return Err(SurError::InvalidPattern(format!(
                    "entry ({r},{c}) outside {responses}x{covariates}"
                )));
            }
            zero_based.push((r - 1, c - 1));
        }
        zero_based.sort_unstable();
        if zero_based.windows(2).any(|w| w[0] == w[1]) {
            return Err(SurError::InvalidPattern("duplicate pattern entry".into()));
        }
        let n = zero_based.len();
        Ok(SparsityPattern {
            responses,
            covariates,
            entries: zero_based,
            classes: (0..n).map(|i| vec![i]).collect(),
            class_of: (0..n).collect(),
        })
    }

    /// Imposes equality restrictions. Each group lists 1-based entries that
    /// share a single parameter; entries not mentioned stay free.
    pub fn with_restrictions(mut self, groups: &[Vec<(usize, usize)>]) -> Result<Self, SurError> {
        let mut assigned = vec![usize::MAX; self.entries.len()];
        let mut classes: Vec<Vec<usize>> = Vec::new();
        for group in groups {
            if group.is_empty() {
                continue;
            }
            let mut members = Vec::with_capacity(group.len());
            for &(r, c) in group {
                let key = (r.wrapping_sub(1), c.wrapping_sub(1));
                let idx = self.entries.binary_search(&key).map_err(|_| {
                    SurError::InvalidPattern(format!("restriction names ({r},{c}), which is not a pattern entry"))
                })?;
                if assigned[idx] != usize::MAX {
                    return Err(SurError::InvalidPattern(format!("entry ({r},{c}) appears in two restrictions")));
                }
                assigned[idx] = classes.len();
                members.push(idx);
            }
            members.sort_unstable();
            classes.push(members);
        }
        for (idx, a) in assigned.iter().enumerate() {
            if *a == usize::MAX {
                classes.push(vec![idx]);
            }
        }
        // Canonical order: row-major over each class's representative.
        classes.sort_by_key(|members| members[0]);
        let mut class_of = vec![0; self.entries.len()];
        for (k, members) in classes.iter().enumerate() {
            for &i in members {
                class_of[i] = k;
            }
        }
        self.classes = classes;
        self.class_of = class_of;
        Ok(self)
    }

    pub fn responses(&self) -> usize {
        self.responses
    }

    pub fn covariates(&self) -> usize {
        self.covariates
    }

    /// 0-based entries in row-major order.
    pub fn entries(&self) -> &[(usize, usize)] {
        &self.entries
    }

    /// Number of free parameters (restriction classes).
    pub fn num_params(&self) -> usize {
        self.classes.len()
    }

    /// Entry indices of each class, in canonical parameter order.
    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    /// Parameter index of the 0-based entry `(r, c)`, if it is free.
    pub fn param_of(&self, r: usize, c: usize) -> Option<usize> {
        self.entries.binary_search(&(r, c)).ok().map(|i| self.class_of[i])
    }

    /// 0-based representative entry of parameter `k`.
    pub fn representative(&self, k: usize) -> (usize, usize) {
        self.entries[self.classes[k][0]]
    }

    pub fn is_restricted(&self) -> bool {
        self.classes.iter().any(|c| c.len() > 1)
    }

    /// Restriction groups with more than one member, 1-based.
    pub fn restriction_groups(&self) -> Vec<Vec<(usize, usize)>> {
        self.classes
            .iter()
            .filter(|c| c.len() > 1)
            .map(|c| c.iter().map(|&i| (self.entries[i].0 + 1, self.entries[i].1 + 1)).collect())
            .collect()
    }

    /// Names `b11, b22, ...` taken from each class representative.
    pub fn param_names(&self) -> Vec<String> {
        (0..self.num_params())
            .map(|k| {
                let (r, c) = self.representative(k);
                if r < 9 && c < 9 {
                    format!("b{}{}", r + 1, c + 1)
                } else {
                    format!("b{}_{}", r + 1, c + 1)
                }
            })
            .collect()
    }

    /// True when the covariate sets are totally ordered by inclusion.
    pub fn is_monotone(&self) -> bool {
        let sets: Vec<Vec<usize>> = (0..self.responses)
            .map(|r| self.entries.iter().filter(|e| e.0 == r).map(|e| e.1).collect())
            .collect();
        sets.iter().all(|a| {
            sets.iter().all(|b| a.iter().all(|x| b.contains(x)) || b.iter().all(|x| a.contains(x)))
        })
    }

    /// The R×C coefficient matrix `B(β)` whose free entries are the
    /// parameter variables; restricted entries share a variable.
    pub fn build_b(&self) -> PolyMatrix {
        let n = self.num_params();
        PolyMatrix::from_fn(self.responses, self.covariates, n, |r, c| match self.param_of(r, c) {
            Some(k) => MultiPoly::var(n, k),
            None => MultiPoly::zero(n),
        })
    }
}

impl fmt::Display for SparsityPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, (r, c)) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "({},{})", r + 1, c + 1)?;
        }
        write!(f, "}}")?;
        for group in self.restriction_groups() {
            let parts: Vec<String> = group.iter().map(|(r, c)| format!("b{r}{c}")).collect();
            write!(f, " {}", parts.join("="))?;
        }
        Ok(())
    }
}
