//! Change of order for zero-dimensional ideals (Faugère–Gianni–Lazard–Mora).
//!
//! Monomials are visited in increasing target order; each one's normal
//! form with respect to the source basis is tested for linear dependence
//! on the normal forms of the target staircase found so far.

use std::collections::HashMap;

use rug::Rational;

use super::ipoly::{IPoly, Reducer};
use super::{standard_monomials, GroebnerError, GroebnerResult};
use crate::exactpoly::{Monomial, MonomialOrder, MultiPoly};

struct Row {
    pivot: usize,
    vec: Vec<Rational>,
    /// Coefficients over the target staircase.
    comb: Vec<Rational>,
}

struct Candidate {
    mon: Monomial,
    parent: usize,
    var: usize,
}

pub fn fglm(gb: &GroebnerResult, target: &MonomialOrder) -> Result<GroebnerResult, GroebnerError> {
    let nvars = gb.nvars();
    let source_std = standard_monomials(gb)?;
    let dim = source_std.len();
    let index: HashMap<Monomial, usize> = source_std.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
    let source_order = gb.order();
    let basis: Vec<IPoly> = gb.basis().iter().map(|g| IPoly::from_multipoly(g, source_order)).collect();
    let basis_refs: Vec<&IPoly> = basis.iter().collect();
    let reducer = Reducer { order: source_order, deadline: gb.deadline };

    let nf_vector = |m: &Monomial| -> Result<Vec<Rational>, GroebnerError> {
        let mut v = vec![Rational::new(); dim];
        if let Some(&i) = index.get(m) {
            v[i] = Rational::from(1);
            return Ok(v);
        }
        let p = IPoly { terms: vec![(m.clone(), rug::Integer::from(1))] };
        let red = reducer.reduce(p, &basis_refs, true)?;
        for (mon, c) in &red.remainder.terms {
            let i = *index.get(mon).expect("normal form is supported on standard monomials");
            v[i] = Rational::from(c) * &red.scale;
        }
        Ok(v)
    };

    // Columns of the multiplication matrices, computed on demand.
    let mut mult: Vec<Vec<Option<Vec<Rational>>>> = vec![vec![None; dim]; nvars];

    let mut staircase: Vec<(Monomial, Vec<Rational>)> = Vec::new();
    let mut rows: Vec<Row> = Vec::new();
    let mut lead: Vec<Monomial> = Vec::new();
    let mut new_basis: Vec<MultiPoly> = Vec::new();
    let mut candidates: Vec<Candidate> = Vec::new();
    let mut seen: std::collections::HashSet<Monomial> = std::collections::HashSet::new();

    let one = Monomial::one(nvars);
    let mut next: Option<(Monomial, Vec<Rational>)> = Some((one.clone(), nf_vector(&one)?));

    while let Some((mon, vector)) = next.take() {
        // Reduce against the echelon rows.
        let raw = vector.clone();
        let mut r = vector;
        let mut comb = vec![Rational::new(); staircase.len() + 1];
        for row in &rows {
            if r[row.pivot] == 0 {
                continue;
            }
            let f = r[row.pivot].clone();
            for (x, y) in r.iter_mut().zip(&row.vec) {
                if *y != 0 {
                    *x -= Rational::from(&f * y);
                }
            }
            for (x, y) in comb.iter_mut().zip(&row.comb) {
                if *y != 0 {
                    *x -= Rational::from(&f * y);
                }
            }
        }
        match r.iter().position(|x| *x != 0) {
            None => {
                let mut poly = MultiPoly::monomial(mon.clone(), Rational::from(1));
                for (t, c) in comb.iter().enumerate().take(staircase.len()) {
                    if *c != 0 {
                        poly.add_term(staircase[t].0.clone(), c.clone());
                    }
                }
                lead.push(mon);
                new_basis.push(poly);
            }
            Some(pivot) => {
                let inv = Rational::from(r[pivot].recip_ref());
                let t = staircase.len();
                comb[t] = Rational::from(1);
                for x in r.iter_mut().chain(comb.iter_mut()) {
                    if *x != 0 {
                        *x *= &inv;
                    }
                }
                staircase.push((mon.clone(), raw));
                rows.push(Row { pivot, vec: r, comb });
                for v in 0..nvars {
                    let m = mon.mul(&Monomial::var_power(nvars, v, 1));
                    if seen.insert(m.clone()) {
                        candidates.push(Candidate { mon: m, parent: t, var: v });
                    }
                }
            }
        }
        if staircase.len() > dim {
            return Err(GroebnerError::Internal("target staircase exceeds the ideal degree".into()));
        }

        candidates.retain(|c| !lead.iter().any(|l| l.divides(&c.mon)));
        let Some(best) = (0..candidates.len()).min_by(|&a, &b| target.cmp(&candidates[a].mon, &candidates[b].mon))
        else {
            break;
        };
        let cand = candidates.swap_remove(best);
        // NF(x_v · s) = M_v · NF(s).
        let parent_vec = staircase[cand.parent].1.clone();
        let mut out = vec![Rational::new(); dim];
        for (k, coef) in parent_vec.iter().enumerate() {
            if *coef == 0 {
                continue;
            }
            if mult[cand.var][k].is_none() {
                let m = source_std[k].mul(&Monomial::var_power(nvars, cand.var, 1));
                mult[cand.var][k] = Some(nf_vector(&m)?);
            }
            let col = mult[cand.var][k].as_ref().expect("computed above");
            for (o, c) in out.iter_mut().zip(col) {
                if *c != 0 {
                    *o += Rational::from(coef * c);
                }
            }
        }
        next = Some((cand.mon, out));
    }

    if staircase.len() != dim {
        return Err(GroebnerError::Internal(format!(
            "target staircase has {} monomials, expected {dim}",
            staircase.len()
        )));
    }
    let mut pairs: Vec<(Monomial, MultiPoly)> = lead.into_iter().zip(new_basis).collect();
    pairs.sort_by(|a, b| target.cmp(&a.0, &b.0));
    Ok(GroebnerResult::from_parts(
        pairs.into_iter().map(|(_, p)| p).collect(),
        target.clone(),
        gb.deadline,
    ))
}
