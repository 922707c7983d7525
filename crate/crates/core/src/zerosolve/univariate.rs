//! All complex roots of a univariate polynomial by Aberth–Ehrlich
//! simultaneous iteration in multi-precision arithmetic, followed by
//! Newton polishing and clustering of multiple roots.

use std::f64::consts::PI;

use rug::{Complex, Float, Rational};

use super::mp::{abs, eps, to_c64};
use super::SolveError;

/// A root (or cluster of coincident roots) at working precision.
#[derive(Clone, Debug)]
pub struct RootCluster {
    pub value: Complex,
    pub multiplicity: usize,
    /// Size of the last Newton correction relative to `1 + |root|`, for
    /// simple roots.
    pub last_correction: Option<f64>,
}

const MAX_SWEEPS: usize = 2000;

fn horner(coeffs: &[Complex], z: &Complex) -> (Complex, Complex) {
    let prec = z.prec().0;
    let n = coeffs.len() - 1;
    let mut p = coeffs[n].clone();
    let mut dp = Complex::new(prec);
    for c in coeffs[..n].iter().rev() {
        dp *= z;
        dp += &p;
        p *= z;
        p += c;
    }
    (p, dp)
}

/// Positive root of `|a_n| x^n − Σ_{i<n} |a_i| x^i`, which bounds all root
/// moduli (Cauchy). Computed on logarithms to survive huge coefficients.
fn cauchy_bound(coeffs: &[Complex]) -> f64 {
    let n = coeffs.len() - 1;
    let logs: Vec<Option<f64>> = coeffs
        .iter()
        .map(|c| {
            let a = abs(c);
            if a.is_zero() {
                None
            } else {
                Some(a.ln().to_f64())
            }
        })
        .collect();
    let lead = logs[n].expect("nonzero leading coefficient");
    let spread = logs.iter().flatten().map(|l| (l - lead).abs()).fold(0.0, f64::max) + 10.0;
    let excess = |x: f64| -> f64 {
        // log(|a_n| x^n) − log Σ |a_i| x^i, increasing in log x.
        let terms: Vec<f64> = logs[..n].iter().enumerate().filter_map(|(i, l)| l.map(|l| l + i as f64 * x)).collect();
        if terms.is_empty() {
            return f64::INFINITY;
        }
        let m = terms.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let lse = m + terms.iter().map(|t| (t - m).exp()).sum::<f64>().ln();
        lead + n as f64 * x - lse
    };
    let (mut lo, mut hi) = (-spread, spread);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if excess(mid) > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi.exp()
}

/// Aberth–Ehrlich iteration at `prec` bits. Returns the approximations and
/// whether every one met the convergence test.
fn aberth(coeffs: &[Complex], prec: u32) -> (Vec<Complex>, bool) {
    let n = coeffs.len() - 1;
    let radius = cauchy_bound(coeffs);
    let mut z: Vec<Complex> = (0..n)
        .map(|k| {
            let angle = 2.0 * PI * k as f64 / n as f64 + 0.4;
            // Slightly perturbed circle so no two starts share a modulus pattern.
            let r = radius * (1.0 - 0.01 * (k % 3) as f64 / 3.0);
            Complex::with_val(prec, (r * angle.cos(), r * angle.sin()))
        })
        .collect();
    let tol = eps(prec, prec.saturating_sub(24));
    let mut done = vec![false; n];
    for _ in 0..MAX_SWEEPS {
        let mut all_done = true;
        for k in 0..n {
            if done[k] {
                continue;
            }
            let (p, dp) = horner(coeffs, &z[k]);
            if p.is_zero() {
                done[k] = true;
                continue;
            }
            let w = if dp.is_zero() { Complex::with_val(prec, 1e-3) } else { Complex::with_val(prec, &p / &dp) };
            let mut s = Complex::new(prec);
            for j in 0..n {
                if j != k {
                    let d = Complex::with_val(prec, &z[k] - &z[j]);
                    if !d.is_zero() {
                        s += d.recip();
                    }
                }
            }
            let denom = Complex::with_val(prec, 1) - Complex::with_val(prec, &w * &s);
            let corr = if denom.is_zero() { w } else { w / denom };
            z[k] -= &corr;
            let scale = Float::with_val(prec, 1) + abs(&z[k]);
            if abs(&corr) <= Float::with_val(prec, &tol * &scale) {
                done[k] = true;
            } else {
                all_done = false;
            }
        }
        if all_done {
            return (z, true);
        }
    }
    let converged = done.iter().all(|&d| d);
    (z, converged)
}

/// Newton steps on a simple root; returns the last relative correction.
fn newton_polish(coeffs: &[Complex], z: &mut Complex, prec: u32) -> f64 {
    let mut last = f64::INFINITY;
    let tiny = eps(prec, prec.saturating_sub(8));
    for _ in 0..50 {
        let (p, dp) = horner(coeffs, z);
        if dp.is_zero() {
            break;
        }
        let corr = Complex::with_val(prec, &p / &dp);
        let scale = Float::with_val(prec, 1) + abs(z);
        let rel = Float::with_val(prec, abs(&corr) / &scale);
        let rel_f = rel.to_f64();
        if rel_f > last * 0.5 && rel_f > 0.0 && last.is_finite() && rel > tiny {
            // Stagnated at the precision floor.
            break;
        }
        *z -= corr;
        last = rel_f;
        if rel <= tiny {
            break;
        }
    }
    last
}

fn cluster(roots: Vec<Complex>, radius: f64) -> Vec<RootCluster> {
    let n = roots.len();
    let approx: Vec<_> = roots.iter().map(to_c64).collect();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut Vec<usize>, i: usize) -> usize {
        if p[i] != i {
            let r = find(p, p[i]);
            p[i] = r;
        }
        p[i]
    }
    for i in 0..n {
        for j in i + 1..n {
            let scale = 1.0 + approx[i].norm().max(approx[j].norm());
            if (approx[i] - approx[j]).norm() <= radius * scale {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                parent[a] = b;
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut slot = vec![usize::MAX; n];
    for i in 0..n {
        let r = find(&mut parent, i);
        if slot[r] == usize::MAX {
            slot[r] = groups.len();
            groups.push(Vec::new());
        }
        groups[slot[r]].push(i);
    }
    groups
        .into_iter()
        .map(|g| {
            let prec = roots[g[0]].prec().0;
            let mut mean = Complex::new(prec);
            for &i in &g {
                mean += &roots[i];
            }
            mean /= g.len() as u32;
            RootCluster { value: mean, multiplicity: g.len(), last_correction: None }
        })
        .collect()
}

/// Roots of `Σ coeffs[i] x^i` (complex coefficients at some precision).
/// Tries increasing precision until iteration and polishing converge.
pub(crate) fn roots_complex(coeffs: &[Complex], cluster_radius: f64) -> Result<Vec<RootCluster>, SolveError> {
    let mut trimmed: Vec<Complex> = coeffs.to_vec();
    while trimmed.len() > 1 && trimmed.last().is_some_and(|c| c.is_zero()) {
        trimmed.pop();
    }
    if trimmed.iter().all(|c| c.is_zero()) {
        return Err(SolveError::ZeroPolynomial);
    }
    let prec = coeffs.iter().map(|c| c.prec().0).max().unwrap_or(128);
    let zero_mult = trimmed.iter().take_while(|c| c.is_zero()).count();
    let body = &trimmed[zero_mult..];
    let mut out = Vec::new();
    if zero_mult > 0 {
        out.push(RootCluster { value: Complex::new(prec), multiplicity: zero_mult, last_correction: Some(0.0) });
    }
    if body.len() > 1 {
        let (approx, _) = aberth(body, prec);
        let mut clusters = cluster(approx, cluster_radius);
        for c in &mut clusters {
            if c.multiplicity == 1 {
                c.last_correction = Some(newton_polish(body, &mut c.value, prec));
            }
        }
        out.extend(clusters);
    }
    Ok(out)
}

/// Roots of a polynomial with exact rational coefficients (constant term
/// first), at no less than `min_prec` bits.
pub(crate) fn roots_rational(
    coeffs: &[Rational],
    cluster_radius: f64,
    min_prec: u32,
) -> Result<(Vec<RootCluster>, u32), SolveError> {
    if coeffs.iter().all(|c| *c == 0) {
        return Err(SolveError::ZeroPolynomial);
    }
    let degree = coeffs.iter().rposition(|c| *c != 0).unwrap_or(0);
    let mut prec = min_prec.max(128);
    loop {
        let mp: Vec<Complex> = coeffs[..=degree].iter().map(|c| Complex::with_val(prec, c)).collect();
        let clusters = roots_complex(&mp, cluster_radius)?;
        let polished = clusters
            .iter()
            .filter(|c| c.multiplicity == 1)
            .all(|c| c.last_correction.is_some_and(|e| e <= 1e-20));
        if polished || prec >= 8192 {
            return Ok((clusters, prec));
        }
        prec *= 2;
    }
}
