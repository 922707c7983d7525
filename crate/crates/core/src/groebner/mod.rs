//! Gröbner bases over ℚ, dimension and degree via Hilbert series, and
//! order conversion for zero-dimensional ideals.

mod buchberger;
mod fglm;
mod hilbert;
mod ipoly;

use std::collections::HashSet;
use std::time::Instant;

use rug::Rational;
use thiserror::Error;

pub use buchberger::EngineStats;
pub use fglm::fglm;
pub use hilbert::{dim_degree as monomial_dim_degree, hilbert_numerator};

use crate::exactpoly::{Monomial, MonomialOrder, MultiPoly, OrderKind, PolyError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroebnerError {
    #[error("computation exceeded its time budget")]
    Timeout,
    #[error("ideal is not zero-dimensional (dimension {0})")]
    PositiveDimensional(i64),
    #[error("internal error: {0}")]
    Internal(String),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// Ideal of ℚ[x_1..x_n] given by generators. Zero generators are dropped.
#[derive(Clone, Debug)]
pub struct Ideal {
    generators: Vec<MultiPoly>,
    nvars: usize,
}

impl Ideal {
    pub fn new(nvars: usize, generators: Vec<MultiPoly>) -> Result<Self, GroebnerError> {
        if let Some(g) = generators.iter().find(|g| g.nvars() != nvars) {
            return Err(PolyError::VariableCountMismatch { left: nvars, right: g.nvars() }.into());
        }
        Ok(Ideal { generators: generators.into_iter().filter(|g| !g.is_zero()).collect(), nvars })
    }

    pub fn generators(&self) -> &[MultiPoly] {
        &self.generators
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }
}

/// A reduced monic Gröbner basis with the dimension and degree of the
/// ideal it generates.
#[derive(Clone, Debug)]
pub struct GroebnerResult {
    basis: Vec<MultiPoly>,
    order: MonomialOrder,
    dimension: i64,
    degree: u64,
    pub stats: EngineStats,
    pub(crate) deadline: Option<Instant>,
}

impl GroebnerResult {
    pub(crate) fn from_parts(basis: Vec<MultiPoly>, order: MonomialOrder, deadline: Option<Instant>) -> Self {
        let lts: Vec<Monomial> =
            basis.iter().map(|g| g.leading_term(&order).expect("nonzero basis element").0.clone()).collect();
        let (dimension, degree) = hilbert::dim_degree(&lts, order.nvars());
        GroebnerResult { basis, order, dimension, degree, stats: EngineStats::default(), deadline }
    }

    /// Basis elements sorted by increasing leading monomial.
    pub fn basis(&self) -> &[MultiPoly] {
        &self.basis
    }

    pub fn order(&self) -> &MonomialOrder {
        &self.order
    }

    pub fn nvars(&self) -> usize {
        self.order.nvars()
    }

    /// Krull dimension of the quotient; −1 for the unit ideal.
    pub fn dimension(&self) -> i64 {
        self.dimension
    }

    pub fn degree(&self) -> u64 {
        self.degree
    }

    pub fn is_zero_dimensional(&self) -> bool {
        self.dimension == 0
    }

    pub fn leading_monomials(&self) -> Vec<Monomial> {
        self.basis.iter().map(|g| g.leading_term(&self.order).expect("nonzero").0.clone()).collect()
    }
}

/// Reduced Gröbner basis of `ideal` under `order`.
pub fn buchberger(ideal: &Ideal, order: &MonomialOrder) -> GroebnerResult {
    buchberger_with_deadline(ideal, order, None).expect("no deadline was set")
}

/// As [`buchberger`], aborting with [`GroebnerError::Timeout`] once the
/// deadline passes.
pub fn buchberger_with_deadline(
    ideal: &Ideal,
    order: &MonomialOrder,
    deadline: Option<Instant>,
) -> Result<GroebnerResult, GroebnerError> {
    if order.nvars() != ideal.nvars() {
        return Err(PolyError::VariableCountMismatch { left: order.nvars(), right: ideal.nvars() }.into());
    }
    let nvars = ideal.nvars();
    // Grevlex: homogenize, compute degree by degree, dehomogenize.
    let (basis, stats) = if order.kind() == OrderKind::GrevLex {
        let mut priority = order.priority().to_vec();
        priority.push(nvars);
        let hom_order = MonomialOrder::with_priority(order.kind(), priority).expect("permutation");
        let gens: Vec<MultiPoly> = ideal.generators().iter().map(homogenize).collect();
        let (hb, stats) = buchberger::Engine::new(&hom_order, deadline).run(&gens)?;
        let affine: Vec<MultiPoly> = hb.iter().map(|g| dehomogenize(&g.to_monic(nvars + 1))).collect();
        (buchberger::Engine::new(order, deadline).interreduce_generators(&affine)?, stats)
    } else {
        buchberger::Engine::new(order, deadline).run(ideal.generators())?
    };
    let basis: Vec<MultiPoly> = basis.iter().map(|g| g.to_monic(nvars)).collect();
    let mut result = GroebnerResult::from_parts(basis, order.clone(), deadline);
    result.stats = stats;
    Ok(result)
}

/// Homogenizes with a new last variable.
fn homogenize(p: &MultiPoly) -> MultiPoly {
    let n = p.nvars();
    let d = p.total_degree().unwrap_or(0);
    MultiPoly::from_terms(
        n + 1,
        p.terms().map(|(m, c)| {
            let mut e = m.exponents().to_vec();
            e.push((d - m.degree()) as u16);
            (Monomial::from_exponents(&e), c.clone())
        }),
    )
}

/// Sets the last variable to 1.
fn dehomogenize(p: &MultiPoly) -> MultiPoly {
    let n = p.nvars() - 1;
    MultiPoly::from_terms(n, p.terms().map(|(m, c)| (Monomial::from_exponents(&m.exponents()[..n]), c.clone())))
}

/// Dimension and degree from the leading-monomial ideal.
pub fn hilbert_dim_degree(gb: &GroebnerResult) -> (i64, u64) {
    hilbert::dim_degree(&gb.leading_monomials(), gb.nvars())
}

/// Remainder of multivariate division of `p` by `basis` over ℚ: no term of
/// the result is divisible by a leading monomial of the basis.
pub fn normal_form(p: &MultiPoly, basis: &[MultiPoly], order: &MonomialOrder) -> MultiPoly {
    let heads: Vec<(Monomial, Rational, &MultiPoly)> = basis
        .iter()
        .filter_map(|g| g.leading_term(order).map(|(m, c)| (m.clone(), c.clone(), g)))
        .collect();
    let mut work = p.clone();
    let mut rem = MultiPoly::zero(p.nvars());
    while let Some((m, c)) = work.leading_term(order).map(|(m, c)| (m.clone(), c.clone())) {
        match heads.iter().find(|(h, _, _)| h.divides(&m)) {
            Some((h, hc, g)) => {
                let q = m.div(h).expect("divisible");
                let factor = Rational::from(&c / hc);
                work = &work - &g.mul_monomial(&q, &factor);
            }
            None => {
                work.add_term(m.clone(), Rational::from(-&c));
                rem.add_term(m, c);
            }
        }
    }
    rem
}

/// S-polynomial of two nonzero polynomials over ℚ.
pub fn s_polynomial(f: &MultiPoly, g: &MultiPoly, order: &MonomialOrder) -> MultiPoly {
    let (fm, fc) = f.leading_term(order).expect("nonzero");
    let (gm, gc) = g.leading_term(order).expect("nonzero");
    let lcm = fm.lcm(gm);
    let a = f.mul_monomial(&lcm.div(fm).expect("divisible"), &Rational::from(fc.recip_ref()));
    let b = g.mul_monomial(&lcm.div(gm).expect("divisible"), &Rational::from(gc.recip_ref()));
    &a - &b
}

/// Monomials outside the leading-term ideal, sorted increasingly under the
/// basis order. Requires a zero-dimensional ideal.
pub fn standard_monomials(gb: &GroebnerResult) -> Result<Vec<Monomial>, GroebnerError> {
    if gb.dimension() != 0 {
        return Err(GroebnerError::PositiveDimensional(gb.dimension()));
    }
    let lts = gb.leading_monomials();
    let n = gb.nvars();
    let mut out = vec![Monomial::one(n)];
    let mut seen: HashSet<Monomial> = out.iter().cloned().collect();
    let mut frontier = out.clone();
    while let Some(m) = frontier.pop() {
        for v in 0..n {
            let next = m.mul(&Monomial::var_power(n, v, 1));
            if lts.iter().any(|l| l.divides(&next)) || !seen.insert(next.clone()) {
                continue;
            }
            out.push(next.clone());
            frontier.push(next);
        }
    }
    out.sort_by(|a, b| gb.order().cmp(a, b));
    Ok(out)
}
