//! All complex solutions of a zero-dimensional system from its lex
//! Gröbner basis: eliminant roots, back-substitution level by level,
//! Newton polishing and realness classification.

mod mp;
mod univariate;

use std::cmp::Ordering;

use num_complex::Complex64;
use rug::ops::Pow;
use rug::{Complex, Float};
use thiserror::Error;

use crate::exactpoly::{MultiPoly, OrderKind, PolyError};
use crate::groebner::GroebnerResult;
use mp::{abs, solve_linear, to_c64};
use univariate::{roots_complex, roots_rational, RootCluster};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolveError {
    #[error("cannot find the roots of the zero polynomial")]
    ZeroPolynomial,
    #[error("polynomial involves more than one variable")]
    NotUnivariate,
    #[error("ideal is not zero-dimensional (dimension {0})")]
    NotZeroDimensional(i64),
    #[error("basis is not in lexicographic order")]
    NotLex,
    #[error("lex basis is not triangular: {0}")]
    NonTriangular(String),
    #[error("system has {equations} equations in {unknowns} unknowns")]
    NotSquare { equations: usize, unknowns: usize },
    #[error(transparent)]
    Poly(#[from] PolyError),
}

#[derive(Clone, Debug)]
pub struct SolveOptions {
    /// Residual tolerance, relative to `1 + max |coefficient|` per generator.
    pub tol: f64,
    /// Realness tolerance on `|Im| / (1 + |Re|)`.
    pub real_tol: f64,
    /// Roots closer than this (relative) are merged into one cluster.
    pub cluster_radius: f64,
    /// Starting working precision in bits.
    pub min_precision: u32,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions { tol: 1e-8, real_tol: 1e-8, cluster_radius: 1e-8, min_precision: 128 }
    }
}

const MAX_PRECISION: u32 = 4096;

/// One complex solution.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexPoint {
    pub coordinates: Vec<Complex64>,
    /// `|g(point)|` for each residual generator.
    pub residuals: Vec<f64>,
    pub multiplicity_hint: usize,
    /// All residuals are within tolerance.
    pub verified: bool,
    /// Last Newton step relative to `1 + |point|`; `None` when the point was
    /// not polished (clustered roots).
    pub newton_correction: Option<f64>,
}

impl ComplexPoint {
    pub fn is_real(&self, real_tol: f64) -> bool {
        self.coordinates.iter().all(|z| z.im.abs() <= real_tol * (1.0 + z.re.abs()))
    }

    pub fn real_part(&self) -> Vec<f64> {
        self.coordinates.iter().map(|z| z.re).collect()
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct SolutionSet {
    /// Sorted lexicographically by `(Re, Im)` of each coordinate.
    pub points: Vec<ComplexPoint>,
    pub degree: u64,
    pub all_real: bool,
    /// The basis was one eliminant plus one linear element per other variable.
    pub shape_position: bool,
    pub precision_bits: u32,
    pub warnings: Vec<String>,
}

impl SolutionSet {
    pub fn real_points(&self, real_tol: f64) -> impl Iterator<Item = &ComplexPoint> {
        self.points.iter().filter(move |p| p.is_real(real_tol))
    }

    pub fn total_multiplicity(&self) -> usize {
        self.points.iter().map(|p| p.multiplicity_hint).sum()
    }
}

/// Complex roots of a polynomial in a single variable, with multiplicities.
/// Roots within `tol` (relative) of each other are merged.
pub fn univariate_roots(p: &MultiPoly, tol: f64) -> Result<Vec<(Complex64, usize)>, SolveError> {
    if p.is_zero() {
        return Err(SolveError::ZeroPolynomial);
    }
    let support = p.support();
    if support.len() > 1 {
        return Err(SolveError::NotUnivariate);
    }
    let Some(&var) = support.first() else {
        return Ok(Vec::new());
    };
    let coeffs = p.univariate_coeffs(var).ok_or(SolveError::NotUnivariate)?;
    let (clusters, _) = roots_rational(&coeffs, tol, 128)?;
    let mut out: Vec<(Complex64, usize)> = clusters.iter().map(|c| (to_c64(&c.value), c.multiplicity)).collect();
    out.sort_by(|a, b| cmp_complex(&a.0, &b.0));
    Ok(out)
}

/// Solves a zero-dimensional lex basis; residuals are taken against the
/// basis itself.
pub fn solve_zero_dim(gb: &GroebnerResult, opts: &SolveOptions) -> Result<SolutionSet, SolveError> {
    solve_with_system(gb, None, opts)
}

/// As [`solve_zero_dim`], but polishes every point with Newton's method on
/// the square `system` (whose ideal the basis generates) and reports
/// residuals against it.
pub fn solve_with_system(
    gb: &GroebnerResult,
    system: Option<&[MultiPoly]>,
    opts: &SolveOptions,
) -> Result<SolutionSet, SolveError> {
    if gb.order().kind() != OrderKind::Lex {
        return Err(SolveError::NotLex);
    }
    if gb.dimension() != 0 {
        return Err(SolveError::NotZeroDimensional(gb.dimension()));
    }
    let n = gb.nvars();
    if let Some(sys) = system {
        if sys.len() != n {
            return Err(SolveError::NotSquare { equations: sys.len(), unknowns: n });
        }
    }
    let mut prec = opts.min_precision.max(64);
    loop {
        let set = solve_at(gb, system, opts, prec)?;
        let all_ok = set.points.iter().filter(|p| p.multiplicity_hint == 1).all(|p| p.verified);
        if all_ok || set.precision_bits >= MAX_PRECISION {
            return Ok(set);
        }
        prec = set.precision_bits * 2;
    }
}

/// Real coordinates of the points that pass the realness test, with
/// imaginary parts dropped.
pub fn filter_real(set: &SolutionSet, real_tol: f64) -> Vec<Vec<f64>> {
    set.real_points(real_tol).map(ComplexPoint::real_part).collect()
}

fn cmp_complex(a: &Complex64, b: &Complex64) -> Ordering {
    a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im))
}

fn cmp_points(a: &[Complex64], b: &[Complex64]) -> Ordering {
    a.iter().zip(b).map(|(x, y)| cmp_complex(x, y)).find(|o| o.is_ne()).unwrap_or(Ordering::Equal)
}

struct Partial {
    vals: Vec<Option<Complex>>,
    mult: usize,
    /// Basis index used to solve each variable.
    chosen: Vec<usize>,
}

/// Substitutes the assigned coordinates, leaving a univariate polynomial in
/// `var` (constant term first) with vanishing leading coefficients removed.
/// A coefficient counts as zero when it is below the cancellation floor of
/// the terms summed into it. `None` if some other variable is unassigned.
fn specialize(p: &MultiPoly, var: usize, vals: &[Option<Complex>], prec: u32) -> Option<Vec<Complex>> {
    let deg = p.degree_in(var).unwrap_or(0) as usize;
    let mut out = vec![Complex::new(prec); deg + 1];
    let mut mags = vec![Float::new(prec); deg + 1];
    for (m, c) in p.terms() {
        let mut t = Complex::with_val(prec, c);
        for (v, &e) in m.exponents().iter().enumerate() {
            if v == var || e == 0 {
                continue;
            }
            let x = vals[v].as_ref()?;
            t *= x.clone().pow(e as u32);
        }
        let k = m.exponent(var) as usize;
        mags[k] += abs(&t);
        out[k] += t;
    }
    for (c, m) in out.iter_mut().zip(&mags) {
        if abs(c) <= Float::with_val(prec, m >> (prec / 2)) {
            *c = Complex::new(prec);
        }
    }
    while out.len() > 1 && out.last().expect("nonempty").is_zero() {
        out.pop();
    }
    Some(out)
}

fn horner(coeffs: &[Complex], z: &Complex, prec: u32) -> Complex {
    let mut acc = Complex::new(prec);
    for c in coeffs.iter().rev() {
        acc *= z;
        acc += c;
    }
    acc
}

/// `Σ |c_i| |z|^i`, the natural scale for the value of the polynomial at z.
fn magnitude(coeffs: &[Complex], z: &Complex, prec: u32) -> Float {
    let r = abs(z);
    let mut acc = Float::new(prec);
    for c in coeffs.iter().rev() {
        acc *= &r;
        acc += abs(c);
    }
    acc
}

fn is_shape_position(gb: &GroebnerResult) -> bool {
    let order = gb.order();
    let last = order.last_var();
    let lms = gb.leading_monomials();
    if lms.len() != gb.nvars() {
        return false;
    }
    lms.iter().zip(gb.basis()).all(|(m, g)| match m.pure_power_var() {
        Some(v) if v == last => g.support() == [last],
        Some(v) => m.exponent(v) == 1 && g.support().iter().all(|&u| u == v || u == last),
        None => false,
    })
}

fn solve_at(
    gb: &GroebnerResult,
    system: Option<&[MultiPoly]>,
    opts: &SolveOptions,
    min_prec: u32,
) -> Result<SolutionSet, SolveError> {
    let n = gb.nvars();
    let order = gb.order();
    let levels: Vec<usize> = order.priority().iter().rev().copied().collect();
    let last = levels[0];
    let basis = gb.basis();

    let elim_idx = basis
        .iter()
        .position(|g| g.support() == [last])
        .ok_or_else(|| SolveError::NonTriangular("no eliminant in the last variable".into()))?;
    let elim = basis[elim_idx].univariate_coeffs(last).expect("univariate");
    let (clusters, prec) = roots_rational(&elim, opts.cluster_radius, min_prec)?;

    let mut partials: Vec<Partial> = clusters
        .into_iter()
        .map(|RootCluster { value, multiplicity, .. }| {
            let mut vals = vec![None; n];
            vals[last] = Some(value);
            Partial { vals, mult: multiplicity, chosen: vec![elim_idx] }
        })
        .collect();

    let mut warnings = Vec::new();
    for &var in &levels[1..] {
        let mut next = Vec::new();
        for part in partials {
            let mut cands: Vec<(usize, Vec<Complex>)> = basis
                .iter()
                .enumerate()
                .filter(|(_, g)| g.degree_in(var).unwrap_or(0) > 0)
                .filter_map(|(i, g)| specialize(g, var, &part.vals, prec).map(|c| (i, c)))
                .collect();
            if cands.is_empty() {
                return Err(SolveError::NonTriangular(format!("no basis element determines variable {var}")));
            }
            // Elements vanishing identically at this partial point say nothing.
            cands.retain(|(_, c)| !(c.len() == 1 && c[0].is_zero()));
            if cands.is_empty() {
                return Err(SolveError::NonTriangular(format!("variable {var} is free over a partial solution")));
            }
            cands.sort_by_key(|(i, c)| (c.len() == 1, c.len(), *i));
            let (pick, ref pivot) = cands[0];
            if pivot.len() == 1 {
                // Only nonzero constants remain: no point extends this one.
                continue;
            }
            let roots = roots_complex(pivot, opts.cluster_radius)?;
            for root in roots {
                let consistent = cands[1..].iter().all(|(_, c)| {
                    let v = abs(&horner(c, &root.value, prec));
                    let m = magnitude(c, &root.value, prec);
                    v <= Float::with_val(prec, &m * 1e-12_f64)
                });
                if !consistent {
                    continue;
                }
                let mut vals = part.vals.clone();
                vals[var] = Some(root.value);
                let mut chosen = part.chosen.clone();
                chosen.push(pick);
                next.push(Partial { vals, mult: part.mult * root.multiplicity, chosen });
            }
        }
        partials = next;
    }

    let residual_system: Vec<MultiPoly> = match system {
        Some(s) => s.to_vec(),
        None => basis.to_vec(),
    };
    let scales: Vec<Float> = residual_system
        .iter()
        .map(|g| Float::with_val(prec, g.max_abs_coeff()) + 1u32)
        .collect();

    let mut points = Vec::with_capacity(partials.len());
    for part in partials {
        let mut x: Vec<Complex> = part.vals.into_iter().map(|v| v.expect("all variables assigned")).collect();
        let square: Vec<MultiPoly> = match system {
            Some(s) => s.to_vec(),
            None => part.chosen.iter().map(|&i| basis[i].clone()).collect(),
        };
        let correction = if part.mult == 1 { newton(&square, &mut x, prec)? } else { None };
        let mut residuals = Vec::with_capacity(residual_system.len());
        let mut verified = true;
        for (g, s) in residual_system.iter().zip(&scales) {
            let r = abs(&g.evaluate_mp(&x, prec)?);
            if r > Float::with_val(prec, s * opts.tol) {
                verified = false;
            }
            residuals.push(r.to_f64());
        }
        points.push(ComplexPoint {
            coordinates: x.iter().map(to_c64).collect(),
            residuals,
            multiplicity_hint: part.mult,
            verified,
            newton_correction: correction,
        });
    }
    points.sort_by(|a, b| cmp_points(&a.coordinates, &b.coordinates));

    let degree = gb.degree();
    let total: usize = points.iter().map(|p| p.multiplicity_hint).sum();
    if points.len() as u64 != degree {
        warnings.push(format!(
            "non-radical or clustered: {} distinct points for degree {degree} (total multiplicity {total})",
            points.len()
        ));
    }
    let unverified = points.iter().filter(|p| !p.verified).count();
    if unverified > 0 {
        warnings.push(format!("{unverified} point(s) failed the residual check"));
    }
    let all_real = !points.is_empty() && points.iter().all(|p| p.is_real(opts.real_tol));
    Ok(SolutionSet { points, degree, all_real, shape_position: is_shape_position(gb), precision_bits: prec, warnings })
}

/// Newton's method on a square system at `prec` bits, starting at `x`.
/// Returns the last relative correction, or `None` if the Jacobian is
/// singular or the iteration wandered off (then `x` is left unchanged).
fn newton(system: &[MultiPoly], x: &mut Vec<Complex>, prec: u32) -> Result<Option<f64>, SolveError> {
    let n = x.len();
    let jac: Vec<Vec<MultiPoly>> = system
        .iter()
        .map(|f| (0..n).map(|v| f.differentiate(v)).collect::<Result<Vec<_>, _>>())
        .collect::<Result<_, _>>()?;
    let start: Vec<Complex> = x.clone();
    let norm = |v: &[Complex]| v.iter().map(abs).fold(Float::with_val(prec, 0), |a, b| if b > a { b } else { a });
    let floor = Float::with_val(prec, Float::with_val(prec, 1) >> (prec - prec / 8));
    let mut current = x.clone();
    let mut last: Option<Float> = None;
    for _ in 0..60 {
        let f: Vec<Complex> = system.iter().map(|g| g.evaluate_mp(&current, prec)).collect::<Result<_, _>>()?;
        let j: Vec<Vec<Complex>> = jac
            .iter()
            .map(|row| row.iter().map(|d| d.evaluate_mp(&current, prec)).collect::<Result<Vec<_>, _>>())
            .collect::<Result<_, _>>()?;
        let Some(delta) = solve_linear(j, f) else {
            return Ok(None);
        };
        let rel = Float::with_val(prec, norm(&delta) / (norm(&current) + 1u32));
        let stalled = last.as_ref().is_some_and(|l| rel > Float::with_val(prec, l * 0.5f64) && *l < 1e-20f64);
        if stalled {
            break;
        }
        for (c, d) in current.iter_mut().zip(&delta) {
            *c -= d;
        }
        let done = rel <= floor;
        last = Some(rel);
        if done {
            break;
        }
    }
    let moved = {
        let diff: Vec<Complex> = current.iter().zip(&start).map(|(a, b)| Complex::with_val(prec, a - b)).collect();
        Float::with_val(prec, norm(&diff) / (norm(&start) + 1u32))
    };
    if moved > 1e-6f64 {
        return Ok(None);
    }
    *x = current;
    Ok(last.map(|l| l.to_f64()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactpoly::MonomialOrder;
    use crate::groebner::{buchberger, Ideal};

    const XY: &[&str] = &["x", "y"];

    fn lex_gb(gens: &[&str]) -> GroebnerResult {
        let gens = gens.iter().map(|s| MultiPoly::parse(s, XY).unwrap()).collect();
        buchberger(&Ideal::new(2, gens).unwrap(), &MonomialOrder::lex(2))
    }

    #[test]
    fn univariate_examples() {
        let p = MultiPoly::parse("y^2 + 1", XY).unwrap();
        let r = univariate_roots(&p, 1e-8).unwrap();
        assert_eq!(r.len(), 2);
        assert!((r[0].0 - Complex64::new(0.0, -1.0)).norm() < 1e-15);
        let q = MultiPoly::parse("(x - 1)^2", XY).unwrap();
        let r = univariate_roots(&q, 1e-8).unwrap();
        assert_eq!(r.len(), 1);
        assert_eq!(r[0].1, 2);
        assert!(matches!(univariate_roots(&MultiPoly::zero(2), 1e-8), Err(SolveError::ZeroPolynomial)));
        let xy = MultiPoly::parse("x*y - 1", XY).unwrap();
        assert!(matches!(univariate_roots(&xy, 1e-8), Err(SolveError::NotUnivariate)));
    }

    #[test]
    fn single_point() {
        let set = solve_zero_dim(&lex_gb(&["x - 1", "y - 2"]), &SolveOptions::default()).unwrap();
        assert_eq!(set.points.len(), 1);
        assert!(set.shape_position);
        let p = &set.points[0];
        assert!((p.coordinates[0] - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        assert!((p.coordinates[1] - Complex64::new(2.0, 0.0)).norm() < 1e-15);
        assert!(p.verified);
    }

    #[test]
    fn circle_and_hyperbola() {
        // x^2 + y^2 = 5, xy = 2: (±1, ±2), (±2, ±1) with matching signs.
        let set = solve_zero_dim(&lex_gb(&["x^2 + y^2 - 5", "x*y - 2"]), &SolveOptions::default()).unwrap();
        assert_eq!(set.points.len(), 4);
        assert!(set.all_real);
        let got: Vec<Vec<f64>> = filter_real(&set, 1e-8);
        let want = [[-2.0, -1.0], [-1.0, -2.0], [1.0, 2.0], [2.0, 1.0]];
        for (g, w) in got.iter().zip(want) {
            assert!((g[0] - w[0]).abs() < 1e-14 && (g[1] - w[1]).abs() < 1e-14, "{g:?}");
        }
    }

    #[test]
    fn non_shape_triangular() {
        // Lex basis {y^2 - 1, x^2 - y}: no linear element in x.
        let gb = lex_gb(&["x^2 - y", "y^2 - 1"]);
        let set = solve_zero_dim(&gb, &SolveOptions::default()).unwrap();
        assert!(!set.shape_position);
        assert_eq!(set.points.len(), 4);
        assert_eq!(filter_real(&set, 1e-8).len(), 2);
        assert!(set.points.iter().all(|p| p.verified));
    }

    #[test]
    fn element_vanishing_over_some_roots() {
        // Points (1,0), (2,0), (0,1); x*y says nothing over y = 0.
        let gb = lex_gb(&["x^2 - 3*x + 2 - 2*y", "x*y", "y^2 - y"]);
        assert_eq!(gb.degree(), 3);
        let set = solve_zero_dim(&gb, &SolveOptions::default()).unwrap();
        assert_eq!(filter_real(&set, 1e-8), vec![vec![0.0, 1.0], vec![1.0, 0.0], vec![2.0, 0.0]]);
    }

    #[test]
    fn multiplicity_is_reported() {
        let gb = lex_gb(&["x - y", "y^2"]);
        let set = solve_zero_dim(&gb, &SolveOptions::default()).unwrap();
        assert_eq!(set.points.len(), 1);
        assert_eq!(set.points[0].multiplicity_hint, 2);
        assert_eq!(set.total_multiplicity(), 2);
        assert!(set.warnings.iter().any(|w| w.contains("non-radical")));
    }

    #[test]
    fn near_real_noise_is_real() {
        let p = ComplexPoint {
            coordinates: vec![Complex64::new(1.0, 1e-15), Complex64::new(2.0, 0.0)],
            residuals: vec![],
            multiplicity_hint: 1,
            verified: true,
            newton_correction: None,
        };
        assert!(p.is_real(1e-8));
        let set = SolutionSet { points: vec![p], degree: 1, ..Default::default() };
        assert_eq!(filter_real(&set, 1e-8), vec![vec![1.0, 2.0]]);
    }

    #[test]
    fn rejects_grevlex_and_positive_dimension() {
        let gens = vec![MultiPoly::parse("x - 1", XY).unwrap(), MultiPoly::parse("y - 1", XY).unwrap()];
        let gb = buchberger(&Ideal::new(2, gens).unwrap(), &MonomialOrder::grevlex(2));
        assert!(matches!(solve_zero_dim(&gb, &SolveOptions::default()), Err(SolveError::NotLex)));
        let gb = lex_gb(&["x*y"]);
        assert!(matches!(solve_zero_dim(&gb, &SolveOptions::default()), Err(SolveError::NotZeroDimensional(1))));
    }
}
