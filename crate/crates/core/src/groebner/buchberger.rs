//! Buchberger's algorithm with the Gebauer–Möller pair update (product
//! and chain criteria) and the normal selection strategy.

use std::cmp::Ordering;
use std::time::Instant;

use super::ipoly::{spoly, IPoly, Reducer};
use super::GroebnerError;
use crate::exactpoly::{Monomial, MonomialOrder, MultiPoly};

#[derive(Clone, Debug)]
struct Pair {
    i: usize,
    j: usize,
    lcm: Monomial,
}

/// Counters for one engine run.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct EngineStats {
    pub pairs_reduced: usize,
    pub zero_reductions: usize,
    pub pairs_skipped: usize,
}

pub(crate) struct Engine<'a> {
    order: &'a MonomialOrder,
    reducer: Reducer<'a>,
    polys: Vec<IPoly>,
    active: Vec<bool>,
    pairs: Vec<Pair>,
    pub stats: EngineStats,
}

impl<'a> Engine<'a> {
    pub fn new(order: &'a MonomialOrder, deadline: Option<Instant>) -> Self {
        Engine {
            order,
            reducer: Reducer { order, deadline },
            polys: Vec::new(),
            active: Vec::new(),
            pairs: Vec::new(),
            stats: EngineStats::default(),
        }
    }

    fn active_basis(&self) -> Vec<&IPoly> {
        self.polys.iter().zip(&self.active).filter(|(_, a)| **a).map(|(p, _)| p).collect()
    }

    /// Runs the algorithm and returns the reduced basis, primitive with
    /// positive leading coefficients, sorted by increasing leading monomial.
    pub fn run(mut self, generators: &[MultiPoly]) -> Result<(Vec<IPoly>, EngineStats), GroebnerError> {
        self.reducer_deadline_check()?;
        let mut input: Vec<IPoly> = generators
            .iter()
            .filter(|g| !g.is_zero())
            .map(|g| IPoly::from_multipoly(g, self.order))
            .collect();
        input.sort_by(|a, b| self.order.cmp(a.lm(), b.lm()));
        for f in input {
            let reduced = {
                let basis = self.active_basis();
                self.reducer.reduce(f, &basis, false)?.remainder
            };
            if !reduced.is_zero() {
                self.insert(reduced);
            }
        }

        while let Some(pair) = self.select() {
            self.reducer_deadline_check()?;
            let s = spoly(&self.polys[pair.i], &self.polys[pair.j], self.order);
            self.stats.pairs_reduced += 1;
            let h = {
                let basis = self.active_basis();
                self.reducer.reduce(s, &basis, false)?.remainder
            };
            if h.is_zero() {
                self.stats.zero_reductions += 1;
                continue;
            }
            if h.lm().is_one() {
                // Unit ideal.
                return Ok((vec![h], self.stats));
            }
            self.insert(h);
        }
        let stats = self.stats;
        Ok((self.interreduce()?, stats))
    }

    fn reducer_deadline_check(&self) -> Result<(), GroebnerError> {
        match self.reducer.deadline {
            Some(d) if Instant::now() >= d => Err(GroebnerError::Timeout),
            _ => Ok(()),
        }
    }

    /// Normal strategy: smallest lcm degree, ties broken by the order.
    fn select(&mut self) -> Option<Pair> {
        if self.pairs.is_empty() {
            return None;
        }
        let order = self.order;
        let best = (0..self.pairs.len())
            .min_by(|&a, &b| {
                let (pa, pb) = (&self.pairs[a], &self.pairs[b]);
                pa.lcm
                    .degree()
                    .cmp(&pb.lcm.degree())
                    .then_with(|| order.cmp(&pa.lcm, &pb.lcm))
                    .then_with(|| (pa.j, pa.i).cmp(&(pb.j, pb.i)))
            })
            .expect("nonempty");
        Some(self.pairs.swap_remove(best))
    }

    /// Gebauer–Möller update for a new element `h`.
    fn insert(&mut self, h: IPoly) {
        let hidx = self.polys.len();
        let hlm = h.lm().clone();
        self.polys.push(h);
        self.active.push(true);

        // Candidate pairs (g, h) for active g.
        let mut cands: Vec<(usize, Monomial, bool)> = (0..hidx)
            .filter(|&g| self.active[g])
            .map(|g| {
                let glm = self.polys[g].lm();
                (g, glm.lcm(&hlm), glm.is_coprime(&hlm))
            })
            .collect();

        // Chain criterion among new pairs: drop (g1,h) if some other new
        // pair's lcm properly divides it; among equal lcms keep one,
        // preferring a coprime one (which is then dropped by the product
        // criterion).
        let mut keep = vec![true; cands.len()];
        for a in 0..cands.len() {
            for b in 0..cands.len() {
                if a == b || !keep[b] {
                    continue;
                }
                if cands[b].1.divides(&cands[a].1) {
                    let equal = cands[b].1 == cands[a].1;
                    if !equal || cands[b].2 || (!cands[a].2 && b < a) {
                        keep[a] = false;
                        break;
                    }
                }
            }
        }
        let mut new_pairs = Vec::new();
        for (k, (g, lcm, coprime)) in cands.drain(..).enumerate() {
            if !keep[k] {
                self.stats.pairs_skipped += 1;
                continue;
            }
            if coprime {
                self.stats.pairs_skipped += 1;
                continue;
            }
            new_pairs.push(Pair { i: g, j: hidx, lcm });
        }

        // Chain criterion on old pairs.
        let polys = &self.polys;
        let before = self.pairs.len();
        self.pairs.retain(|p| {
            if !hlm.divides(&p.lcm) {
                return true;
            }
            let l1 = polys[p.i].lm().lcm(&hlm);
            let l2 = polys[p.j].lm().lcm(&hlm);
            l1 == p.lcm || l2 == p.lcm
        });
        self.stats.pairs_skipped += before - self.pairs.len();
        self.pairs.extend(new_pairs);

        // Elements whose leading monomial is a multiple of LM(h) are no
        // longer needed as reducers.
        for g in 0..hidx {
            if self.active[g] && hlm.divides(self.polys[g].lm()) {
                self.active[g] = false;
            }
        }
    }

    /// Reduced basis from generators that already form a Gröbner basis.
    pub fn interreduce_generators(mut self, generators: &[MultiPoly]) -> Result<Vec<IPoly>, GroebnerError> {
        for g in generators.iter().filter(|g| !g.is_zero()) {
            self.polys.push(IPoly::from_multipoly(g, self.order));
            self.active.push(true);
        }
        self.interreduce()
    }

    fn interreduce(&self) -> Result<Vec<IPoly>, GroebnerError> {
        let mut basis: Vec<&IPoly> = self.active_basis();
        basis.sort_by(|a, b| self.order.cmp(a.lm(), b.lm()));
        // Minimality: drop elements whose leading monomial is divisible by
        // another kept one.
        let mut minimal: Vec<&IPoly> = Vec::new();
        for g in basis {
            if !minimal.iter().any(|k| k.lm().divides(g.lm())) {
                minimal.push(g);
            }
        }
        let mut out = Vec::with_capacity(minimal.len());
        for (k, g) in minimal.iter().enumerate() {
            let others: Vec<&IPoly> =
                minimal.iter().enumerate().filter(|(j, _)| *j != k).map(|(_, p)| *p).collect();
            let r = self.reducer.reduce((*g).clone(), &others, true)?.remainder;
            debug_assert_eq!(r.lm(), g.lm());
            out.push(r);
        }
        out.sort_by(|a, b| match self.order.cmp(a.lm(), b.lm()) {
            Ordering::Equal => Ordering::Equal,
            o => o,
        });
        Ok(out)
    }
}
