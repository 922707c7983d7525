//! Hilbert series of monomial ideals.
//!
//! For a monomial ideal `I ⊂ k[x_1..x_n]` the Hilbert series of `k[x]/I`
//! is `N(t) / (1 − t)^n`. The numerator is computed by pivoting on a
//! variable power `p`: `N(I) = N(I + ⟨p⟩) + t^deg(p) · N(I : p)`.

use crate::exactpoly::Monomial;

/// Dense integer polynomial in `t`, constant term first.
pub type TPoly = Vec<i128>;

fn trim(mut p: TPoly) -> TPoly {
    while p.len() > 1 && *p.last().unwrap() == 0 {
        p.pop();
    }
    p
}

fn tmul(a: &TPoly, b: &TPoly) -> TPoly {
    let mut out = vec![0i128; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if *x == 0 {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(out)
}

fn tadd(a: &TPoly, b: &TPoly) -> TPoly {
    let mut out = vec![0i128; a.len().max(b.len())];
    for (i, x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, y) in b.iter().enumerate() {
        out[i] += y;
    }
    trim(out)
}

/// `1 − t^d`
fn one_minus_t_pow(d: u32) -> TPoly {
    let mut p = vec![0i128; d as usize + 1];
    p[0] = 1;
    p[d as usize] -= 1;
    trim(p)
}

fn shift(p: &TPoly, d: u32) -> TPoly {
    let mut out = vec![0i128; d as usize];
    out.extend_from_slice(p);
    trim(out)
}

/// Removes generators divisible by another one (and duplicates).
pub(crate) fn minimalize(mut gens: Vec<Monomial>) -> Vec<Monomial> {
    gens.sort_by_key(Monomial::degree);
    let mut out: Vec<Monomial> = Vec::with_capacity(gens.len());
    for g in gens {
        if !out.iter().any(|k| k.divides(&g)) {
            out.push(g);
        }
    }
    out
}

/// Numerator `N(t)` of the Hilbert series of `k[x]/⟨gens⟩`.
pub fn hilbert_numerator(gens: &[Monomial]) -> TPoly {
    numerator(minimalize(gens.to_vec()))
}

fn numerator(gens: Vec<Monomial>) -> TPoly {
    if gens.is_empty() {
        return vec![1];
    }
    if gens.iter().any(Monomial::is_one) {
        return vec![0];
    }
    // Split off generators coprime to all others: each contributes a
    // factor (1 − t^deg).
    let mut factor: TPoly = vec![1];
    let mut rest: Vec<Monomial> = Vec::with_capacity(gens.len());
    for (i, g) in gens.iter().enumerate() {
        let isolated = gens.iter().enumerate().all(|(j, h)| i == j || g.is_coprime(h));
        if isolated {
            factor = tmul(&factor, &one_minus_t_pow(g.degree()));
        } else {
            rest.push(g.clone());
        }
    }
    if rest.is_empty() {
        return factor;
    }

    // Pivot on the variable shared by most generators, at the smallest
    // positive exponent it carries.
    let nvars = rest[0].nvars();
    let var = (0..nvars)
        .max_by_key(|&v| (rest.iter().filter(|m| m.exponent(v) > 0).count(), std::cmp::Reverse(v)))
        .expect("at least one variable");
    let e = rest.iter().map(|m| m.exponent(var)).filter(|&e| e > 0).min().expect("shared variable");
    let pivot = Monomial::var_power(nvars, var, e);

    let mut sum_gens: Vec<Monomial> = rest.iter().filter(|m| !pivot.divides(m)).cloned().collect();
    sum_gens.push(pivot.clone());
    let colon_gens: Vec<Monomial> = rest.iter().map(|m| m.quotient_by_gcd(&pivot)).collect();

    let a = numerator(minimalize(sum_gens));
    let b = numerator(minimalize(colon_gens));
    tmul(&factor, &tadd(&a, &shift(&b, u32::from(e))))
}

/// Krull dimension and degree of `k[x]/⟨gens⟩` in `nvars` variables.
///
/// The unit ideal reports dimension −1 and degree 0.
pub fn dim_degree(gens: &[Monomial], nvars: usize) -> (i64, u64) {
    let mut num = hilbert_numerator(gens);
    if num.iter().all(|&c| c == 0) {
        return (-1, 0);
    }
    let mut cancelled = 0usize;
    while cancelled < nvars && num.iter().sum::<i128>() == 0 {
        // Synthetic division by (1 − t).
        let mut q = vec![0i128; num.len() - 1];
        let mut acc = 0i128;
        for (i, c) in num.iter().enumerate().take(num.len() - 1) {
            acc += c;
            q[i] = acc;
        }
        num = trim(q);
        cancelled += 1;
    }
    let degree = num.iter().sum::<i128>();
    ((nvars - cancelled) as i64, degree.max(0) as u64)
}
