//! End-to-end analysis: objective, Gröbner basis, dimension and degree,
//! lex basis, complex solutions and stationary-point records.

use std::time::{Duration, Instant};

use thiserror::Error;

use crate::exactpoly::{MonomialOrder, OrderKind};
use crate::groebner::{buchberger_with_deadline, fglm, GroebnerError, GroebnerResult, Ideal};
use crate::likelihood::{stationary_points, LikelihoodError, StationaryPoint};
use crate::surmodel::{build_objective, Dataset, ObjectiveSystem, SparsityPattern, SurError};
use crate::zerosolve::{filter_real, solve_with_system, SolutionSet, SolveError, SolveOptions};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PipelineError {
    #[error(transparent)]
    Model(#[from] SurError),
    #[error(transparent)]
    Groebner(#[from] GroebnerError),
    #[error(transparent)]
    Solve(#[from] SolveError),
}

impl PipelineError {
    pub fn is_timeout(&self) -> bool {
        matches!(self, PipelineError::Groebner(GroebnerError::Timeout))
    }
}

/// How the lex basis used for solving is obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LexStrategy {
    /// Convert the graded basis with FGLM.
    Convert,
    /// Run Buchberger under lex directly.
    Direct,
}

#[derive(Clone, Debug)]
pub struct AnalysisOptions {
    /// Order of the basis used for dimension and degree.
    pub order: OrderKind,
    pub lex: LexStrategy,
    pub solve: SolveOptions,
    pub deadline: Option<Instant>,
}

impl Default for AnalysisOptions {
    fn default() -> Self {
        AnalysisOptions { order: OrderKind::GrevLex, lex: LexStrategy::Convert, solve: SolveOptions::default(), deadline: None }
    }
}

impl AnalysisOptions {
    pub fn with_budget(mut self, budget: Duration) -> Self {
        self.deadline = Some(Instant::now() + budget);
        self
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct StageTimings {
    pub objective: Duration,
    pub groebner: Duration,
    pub lex: Duration,
    pub solve: Duration,
    pub likelihood: Duration,
}

#[derive(Clone, Debug)]
pub struct Analysis {
    pub system: ObjectiveSystem,
    /// Basis under the requested order.
    pub basis: GroebnerResult,
    pub lex_basis: Option<GroebnerResult>,
    pub solutions: Option<SolutionSet>,
    /// Real stationary points, by decreasing log-likelihood.
    pub stationary: Vec<StationaryPoint>,
    /// Real roots rejected by the likelihood layer.
    pub rejected: Vec<(Vec<f64>, LikelihoodError)>,
    pub timings: StageTimings,
    real_tol: f64,
}

impl Analysis {
    pub fn dimension(&self) -> i64 {
        self.basis.dimension()
    }

    pub fn degree(&self) -> u64 {
        self.basis.degree()
    }

    /// Objective and Gröbner basis only.
    pub fn ideal(pattern: &SparsityPattern, data: &Dataset, opts: &AnalysisOptions) -> Result<Self, PipelineError> {
        let t = Instant::now();
        let system = build_objective(pattern, data)?;
        let objective = t.elapsed();
        let t = Instant::now();
        let n = system.num_params();
        let ideal = Ideal::new(n, system.gradient.clone())?;
        let basis = buchberger_with_deadline(&ideal, &MonomialOrder::new(opts.order, n), opts.deadline)?;
        let timings = StageTimings { objective, groebner: t.elapsed(), ..Default::default() };
        Ok(Analysis {
            system,
            basis,
            lex_basis: None,
            solutions: None,
            stationary: Vec::new(),
            rejected: Vec::new(),
            timings,
            real_tol: opts.solve.real_tol,
        })
    }

    /// The full pipeline. For positive-dimensional ideals the result
    /// carries dimension and degree but no solutions.
    pub fn run(pattern: &SparsityPattern, data: &Dataset, opts: &AnalysisOptions) -> Result<Self, PipelineError> {
        let mut a = Self::ideal(pattern, data, opts)?;
        if !a.basis.is_zero_dimensional() {
            return Ok(a);
        }
        let t = Instant::now();
        let n = a.system.num_params();
        let lex_order = MonomialOrder::lex(n);
        let lex = if a.basis.order().kind() == OrderKind::Lex {
            a.basis.clone()
        } else {
            match opts.lex {
                LexStrategy::Convert => fglm(&a.basis, &lex_order)?,
                LexStrategy::Direct => {
                    let ideal = Ideal::new(n, a.system.gradient.clone())?;
                    buchberger_with_deadline(&ideal, &lex_order, opts.deadline)?
                }
            }
        };
        a.timings.lex = t.elapsed();

        let t = Instant::now();
        let solutions = solve_with_system(&lex, Some(&a.system.gradient), &opts.solve)?;
        a.timings.solve = t.elapsed();

        let t = Instant::now();
        let real = filter_real(&solutions, opts.solve.real_tol);
        let (stationary, rejected) = stationary_points(&a.system, &real);
        a.timings.likelihood = t.elapsed();

        a.lex_basis = Some(lex);
        a.solutions = Some(solutions);
        a.stationary = stationary;
        a.rejected = rejected;
        Ok(a)
    }

    /// Number of solutions passing the realness test.
    pub fn real_count(&self) -> usize {
        self.solutions.as_ref().map_or(0, |s| s.real_points(self.real_tol).count())
    }
}
