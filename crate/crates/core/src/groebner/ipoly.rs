//! Integer-coefficient polynomials with terms kept sorted under a fixed
//! monomial order. This is the working representation of the Buchberger
//! engine: reductions are fraction-free and the integer content is
//! stripped as coefficients grow.

use std::cmp::Ordering;
use std::time::Instant;

use rug::{Integer, Rational};

use super::GroebnerError;
use crate::exactpoly::{common_denominator, Monomial, MonomialOrder, MultiPoly};

#[derive(Clone, Debug)]
pub(crate) struct IPoly {
    /// Nonzero terms, strictly decreasing under the order.
    pub terms: Vec<(Monomial, Integer)>,
}

impl IPoly {
    /// Clears denominators and removes the content; the leading coefficient
    /// becomes positive.
    pub fn from_multipoly(p: &MultiPoly, order: &MonomialOrder) -> IPoly {
        let den = common_denominator(p.terms().map(|(_, c)| c));
        let mut terms: Vec<(Monomial, Integer)> = p
            .terms()
            .map(|(m, c)| (m.clone(), Rational::from(c * &den).into_numer_denom().0))
            .collect();
        terms.sort_by(|a, b| order.cmp(&b.0, &a.0));
        let mut out = IPoly { terms };
        out.normalize();
        out
    }

    #[cfg(test)]
    pub fn to_multipoly(&self, nvars: usize) -> MultiPoly {
        MultiPoly::from_terms(nvars, self.terms.iter().map(|(m, c)| (m.clone(), Rational::from(c))))
    }

    /// Monic rational version.
    pub fn to_monic(&self, nvars: usize) -> MultiPoly {
        let lc = self.lc().clone();
        MultiPoly::from_terms(
            nvars,
            self.terms.iter().map(|(m, c)| (m.clone(), Rational::from((c.clone(), lc.clone())))),
        )
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    #[inline]
    pub fn lm(&self) -> &Monomial {
        &self.terms[0].0
    }

    #[inline]
    pub fn lc(&self) -> &Integer {
        &self.terms[0].1
    }

    /// Divides by the content and makes the leading coefficient positive.
    /// Returns the content removed (signed).
    pub fn normalize(&mut self) -> Integer {
        if self.terms.is_empty() {
            return Integer::from(1);
        }
        let mut g = content(self.terms.iter().map(|t| &t.1));
        if self.terms[0].1 < 0 {
            g = -g;
        }
        if g != 1 {
            for (_, c) in &mut self.terms {
                c.div_exact_mut(&g);
            }
        }
        g
    }
}

/// Gcd of the given integers, stopping early at 1.
pub(crate) fn content<'a>(coeffs: impl Iterator<Item = &'a Integer>) -> Integer {
    let mut g = Integer::new();
    for c in coeffs {
        g.gcd_mut(c);
        if g == 1 {
            break;
        }
    }
    if g == 0 {
        Integer::from(1)
    } else {
        g
    }
}

/// `a·f[skip_f..] − b·q·g[skip_g..]`, merged in order.
fn lincomb(
    a: &Integer,
    f: &[(Monomial, Integer)],
    b: &Integer,
    q: &Monomial,
    g: &[(Monomial, Integer)],
    order: &MonomialOrder,
) -> Vec<(Monomial, Integer)> {
    let mut out = Vec::with_capacity(f.len() + g.len());
    let a_is_one = *a == 1;
    let (mut i, mut j) = (0, 0);
    let mut gm = g.first().map(|t| t.0.mul(q));
    while i < f.len() || j < g.len() {
        let ord = match (&gm, f.get(i)) {
            (None, _) => Ordering::Greater,
            (Some(_), None) => Ordering::Less,
            (Some(m), Some(ft)) => order.cmp(&ft.0, m),
        };
        match ord {
            Ordering::Greater => {
                let c = if a_is_one { f[i].1.clone() } else { Integer::from(&f[i].1 * a) };
                out.push((f[i].0.clone(), c));
                i += 1;
            }
            Ordering::Less => {
                let c = -Integer::from(&g[j].1 * b);
                out.push((gm.take().expect("pending term"), c));
                j += 1;
                gm = g.get(j).map(|t| t.0.mul(q));
            }
            Ordering::Equal => {
                let mut c = if a_is_one { f[i].1.clone() } else { Integer::from(&f[i].1 * a) };
                c -= Integer::from(&g[j].1 * b);
                if c != 0 {
                    out.push((f[i].0.clone(), c));
                }
                i += 1;
                j += 1;
                gm = g.get(j).map(|t| t.0.mul(q));
            }
        }
    }
    out
}

/// Primitive S-polynomial of `f` and `g`.
pub(crate) fn spoly(f: &IPoly, g: &IPoly, order: &MonomialOrder) -> IPoly {
    let lcm = f.lm().lcm(g.lm());
    let mf = lcm.div(f.lm()).expect("lcm divisible");
    let mg = lcm.div(g.lm()).expect("lcm divisible");
    let gcd = Integer::from(f.lc().gcd_ref(g.lc()));
    let af = Integer::from(g.lc().div_exact_ref(&gcd));
    let ag = Integer::from(f.lc().div_exact_ref(&gcd));
    // af·mf·f − ag·mg·g; leading terms cancel.
    let fm: Vec<(Monomial, Integer)> = f.terms[1..].iter().map(|(m, c)| (m.mul(&mf), c.clone())).collect();
    let terms = lincomb(&af, &fm, &ag, &mg, &g.terms[1..], order);
    let mut out = IPoly { terms };
    out.normalize();
    out
}

/// Outcome of a fraction-free reduction: `scale · remainder` is the
/// rational normal form of the input.
pub(crate) struct Reduced {
    pub remainder: IPoly,
    pub scale: Rational,
}

pub(crate) struct Reducer<'a> {
    pub order: &'a MonomialOrder,
    pub deadline: Option<Instant>,
}

impl Reducer<'_> {
    fn pick<'b>(&self, m: &Monomial, basis: &[&'b IPoly]) -> Option<&'b IPoly> {
        let mut best: Option<&IPoly> = None;
        for g in basis {
            if g.lm().divides(m) && best.is_none_or(|b| g.terms.len() < b.terms.len()) {
                best = Some(g);
            }
        }
        best
    }

    fn check_deadline(&self) -> Result<(), GroebnerError> {
        match self.deadline {
            Some(d) if Instant::now() >= d => Err(GroebnerError::Timeout),
            _ => Ok(()),
        }
    }

    /// Reduces `f` by `basis`. With `full` every term is reduced, otherwise
    /// only the head. The remainder is primitive with positive leading
    /// coefficient.
    pub fn reduce(&self, f: IPoly, basis: &[&IPoly], full: bool) -> Result<Reduced, GroebnerError> {
        let mut scale = Rational::from(1);
        let mut done: Vec<(Monomial, Integer)> = Vec::new();
        let mut work = f.terms;
        let mut steps = 0usize;
        let mut start = 0usize;
        while start < work.len() {
            let head = &work[start].0;
            let Some(g) = self.pick(head, basis) else {
                if !full {
                    break;
                }
                // Head is irreducible: move it to the remainder.
                start += 1;
                continue;
            };
            steps += 1;
            if steps % 64 == 0 {
                self.check_deadline()?;
            }
            let (hm, hc) = &work[start];
            let q = hm.div(g.lm()).expect("divisible");
            let gcd = Integer::from(hc.gcd_ref(g.lc()));
            let a = Integer::from(g.lc().div_exact_ref(&gcd));
            let b = Integer::from(hc.div_exact_ref(&gcd));
            if a != 1 {
                for (_, c) in done.iter_mut().chain(work[..start].iter_mut()) {
                    *c *= &a;
                }
                scale /= &a;
            }
            let tail = lincomb(&a, &work[start + 1..], &b, &q, &g.terms[1..], self.order);
            // Irreducible prefix work[..start] stays; the reduced tail replaces the rest.
            if start > 0 {
                done.extend(work.drain(..start));
            }
            work = tail;
            start = 0;
            if steps % 4 == 0 {
                let c = content(done.iter().chain(work.iter()).map(|t| &t.1));
                if c != 1 {
                    for (_, x) in done.iter_mut().chain(work.iter_mut()) {
                        x.div_exact_mut(&c);
                    }
                    scale *= &c;
                }
            }
        }
        done.extend(work);
        let mut remainder = IPoly { terms: done };
        let c = remainder.normalize();
        scale *= c;
        Ok(Reduced { remainder, scale })
    }
}
