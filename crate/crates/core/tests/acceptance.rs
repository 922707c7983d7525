//! Acceptance criteria, one PASS/FAIL line each.
//!
//! The slowest table rows run only when `SURROOTS_ACCEPTANCE_LONG=1` is
//! set.

use std::io::Write;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use surroots::exactpoly::{rational_from_f64, to_f64};
use surroots::fixtures::{
    bivariate_all_real, bivariate_eight_subjects, diagonal_2x2, general_sur_table, monotone_2x2, submodel_table,
    table_subjects, TableRow, BIVARIATE_EIGHT_ROOTS, LONG, TABLE_DATA_RANGE,
};
use surroots::groebner::s_polynomial;
use surroots::{
    apply_scaling, build_objective, igls, log_likelihood, normal_form, profile_loglik, sigma_hat, Analysis,
    AnalysisOptions, Classification, Dataset, GroebnerResult, Ideal, MonomialOrder, MultiPoly, ParamVector, Rational,
    SparsityPattern,
};

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn long_rows_enabled() -> bool {
    std::env::var("SURROOTS_ACCEPTANCE_LONG").is_ok_and(|v| v == "1")
}

fn analyse(pattern: &SparsityPattern, data: &Dataset) -> Result<Analysis, String> {
    Analysis::run(pattern, data, &AnalysisOptions::default()).map_err(|e| e.to_string())
}

fn table_data(pattern: &SparsityPattern, seed: u64) -> Dataset {
    Dataset::random(pattern, table_subjects(pattern), seed, TABLE_DATA_RANGE).expect("random data")
}

fn eight_roots() -> Vec<[Complex64; 2]> {
    BIVARIATE_EIGHT_ROOTS
        .iter()
        .map(|&((a, ai), (b, bi))| [Complex64::new(a, ai), Complex64::new(b, bi)])
        .collect()
}

fn criterion_1() -> Check {
    let t = Instant::now();
    let a = analyse(&diagonal_2x2(), &bivariate_eight_subjects())?;
    let elapsed = t.elapsed();
    ensure((a.dimension(), a.degree()) == (0, 5), || format!("dim {} degree {}", a.dimension(), a.degree()))?;
    let set = a.solutions.as_ref().expect("zero-dimensional");
    ensure(set.points.len() == 5, || format!("{} solutions", set.points.len()))?;
    for want in eight_roots() {
        let hit = set.points.iter().any(|p| p.coordinates.iter().zip(&want).all(|(x, y)| (x - y).norm() <= 1e-5));
        ensure(hit, || format!("no solution within 1e-5 of {want:?}"))?;
    }
    ensure(a.real_count() == 3, || format!("{} real", a.real_count()))?;
    ensure(elapsed <= Duration::from_secs(10), || format!("took {elapsed:?}"))?;
    Ok(format!("5 solutions match, 3 real, {:.2}s", elapsed.as_secs_f64()))
}

fn criterion_2() -> Check {
    let a = analyse(&diagonal_2x2(), &bivariate_eight_subjects())?;
    let lex = a.lex_basis.as_ref().expect("lex basis");
    let basis = lex.basis();
    ensure(basis.len() == 2, || format!("{} elements", basis.len()))?;
    let univariate = basis.iter().find(|g| g.degree_in(0) == Some(0));
    let linear = basis.iter().find(|g| g.degree_in(0) == Some(1));
    let (u, l) = match (univariate, linear) {
        (Some(u), Some(l)) => (u, l),
        _ => return Err("basis is not {f(b22), b11 - h(b22)}".into()),
    };
    ensure(u.degree_in(1) == Some(5), || format!("eliminant degree {:?}", u.degree_in(1)))?;
    ensure(l.degree_in(1).is_some_and(|d| d <= 4), || format!("b22 degree {:?} in the linear element", l.degree_in(1)))?;
    Ok("degree-5 eliminant in b22 and b11 linear with b22 degree <= 4".into())
}

fn criterion_3() -> Check {
    let t = Instant::now();
    let a = analyse(&diagonal_2x2(), &bivariate_all_real())?;
    let elapsed = t.elapsed();
    let set = a.solutions.as_ref().expect("zero-dimensional");
    ensure(set.points.len() == 5 && set.all_real, || format!("{} solutions, all_real {}", set.points.len(), set.all_real))?;
    ensure(a.real_count() == 5, || format!("{} real", a.real_count()))?;
    let maxima = a.stationary.iter().filter(|p| p.classification == Classification::LocalMax).count();
    ensure(maxima >= 2, || format!("{maxima} local maxima"))?;
    ensure(elapsed <= Duration::from_secs(10), || format!("took {elapsed:?}"))?;
    Ok(format!("5 of 5 real, {maxima} local maxima, {:.2}s", elapsed.as_secs_f64()))
}

/// Table rows by 1-based number: `long` rows get the 30-minute budget,
/// `gated` rows run only when enabled and `stretch` rows report but never
/// fail. Rows on the default budget run on several seeds.
struct TableSpec<'a> {
    long: &'a [usize],
    gated: &'a [usize],
    stretch: &'a [usize],
}

fn table_check(rows: &[TableRow], spec: TableSpec) -> Check {
    let enabled = long_rows_enabled();
    let mut notes = Vec::new();
    let mut failures = Vec::new();
    for (i, row) in rows.iter().enumerate() {
        let (number, label) = (i + 1, format!("row {}", i + 1));
        if spec.gated.contains(&number) && !enabled {
            notes.push(format!("{label} skipped"));
            continue;
        }
        let long = spec.long.contains(&number);
        let budget = Duration::from_secs(if long { LONG } else { row.budget_secs });
        let seeds: &[u64] = if long { &[1] } else { &[1, 2, 3] };
        for &seed in seeds {
            let data = table_data(&row.pattern, seed);
            let t = Instant::now();
            let got = Analysis::ideal(&row.pattern, &data, &AnalysisOptions::default().with_budget(budget))
                .map(|a| (a.dimension(), a.degree()));
            let secs = t.elapsed().as_secs_f64();
            let problem = match got {
                Ok(g) if g == (row.expected_dim, row.expected_degree) => None,
                Ok((d, g)) => Some(format!("{label} seed {seed}: got ({d},{g})")),
                Err(e) => Some(format!("{label} seed {seed}: {e} after {secs:.0}s")),
            };
            match problem {
                Some(p) if spec.stretch.contains(&number) => notes.push(format!("{p} (stretch)")),
                Some(p) => failures.push(p),
                None if seed == 1 => notes.push(format!("{label} {secs:.1}s")),
                None => {}
            }
        }
    }
    if failures.is_empty() {
        Ok(notes.join(", "))
    } else {
        Err(failures.join("; "))
    }
}

fn criterion_4() -> Check {
    table_check(&general_sur_table(), TableSpec { long: &[3, 6, 7], gated: &[6, 7], stretch: &[7] })
}

fn criterion_5() -> Check {
    table_check(&submodel_table(), TableSpec { long: &[6], gated: &[], stretch: &[] })
}

fn criterion_6() -> Check {
    let t2 = general_sur_table();
    let t3 = submodel_table();
    let mut rows: Vec<&TableRow> = t2[..3].iter().collect();
    rows.extend(&t3[..4]);
    let mut degrees = Vec::new();
    for row in rows {
        let a = analyse(&row.pattern, &table_data(&row.pattern, 1))?;
        let set = a.solutions.as_ref().ok_or_else(|| format!("{}: not zero-dimensional", row.label))?;
        ensure(set.total_multiplicity() as u64 == a.degree(), || {
            format!("{}: {} roots for degree {}", row.label, set.total_multiplicity(), a.degree())
        })?;
        for (k, g) in a.system.gradient.iter().enumerate() {
            let scale = 1.0 + to_f64(&g.max_abs_coeff());
            for p in &set.points {
                ensure(p.residuals[k] <= 1e-8 * scale, || {
                    format!("{}: generator {k} residual {:e} at scale {scale:e}", row.label, p.residuals[k])
                })?;
            }
        }
        degrees.push(a.degree().to_string());
    }
    Ok(format!("root counts equal degrees {}", degrees.join(", ")))
}

fn criterion_7() -> Check {
    let pattern = monotone_2x2();
    for seed in 1..=20 {
        let data = table_data(&pattern, seed);
        let a = analyse(&pattern, &data)?;
        ensure(a.real_count() == 1 && a.stationary.len() == 1, || {
            format!("seed {seed}: {} real roots, {} stationary points", a.real_count(), a.stationary.len())
        })?;
        let fit = igls(&pattern, &data, None, 10_000, 1e-12).map_err(|e| e.to_string())?;
        ensure(fit.converged, || format!("seed {seed}: IGLS did not converge"))?;
        let beta = &a.stationary[0].beta.0;
        let gap = beta.iter().zip(&fit.beta.0).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
        ensure(gap <= 1e-6, || format!("seed {seed}: IGLS is {gap:e} away"))?;
    }
    Ok("20 seeds, one real stationary point each, IGLS agrees".into())
}

fn criterion_8() -> Check {
    let base = analyse(&diagonal_2x2(), &bivariate_eight_subjects())?;
    let restricted = monotone_2x2().with_restrictions(&[vec![(1, 1), (2, 1)]]).map_err(|e| e.to_string())?;
    // The restricted model maps onto the diagonal one under Y2 -> Y2 - Y1,
    // so the fixture is carried over by the inverse map.
    let carried = bivariate_eight_subjects().with_response_combination(1, 0, &Rational::from(1));
    let sub = analyse(&restricted, &carried)?;
    ensure(sub.real_count() == 3 && sub.stationary.len() == 3, || format!("{} real points", sub.real_count()))?;
    for (p, q) in base.stationary.iter().zip(&sub.stationary) {
        let gap = p.beta.0.iter().zip(&q.beta.0).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
        ensure(gap <= 1e-8, || format!("stationary points differ by {gap:e}"))?;
        ensure((p.eval.log_likelihood - q.eval.log_likelihood).abs() <= 1e-8 * p.eval.log_likelihood.abs(), || {
            "log-likelihoods differ".into()
        })?;
        ensure(p.classification == q.classification, || "classifications differ".into())?;
    }
    let literal = bivariate_eight_subjects().with_response_combination(1, 0, &Rational::from(-1));
    let lit = analyse(&restricted, &literal)?;
    Ok(format!(
        "3 real points with equal values and types; Y2 - Y1 applied to the fixture itself gives {} real",
        lit.real_count()
    ))
}

fn fixture_cases() -> Vec<(SparsityPattern, Dataset)> {
    let mut out = vec![(diagonal_2x2(), bivariate_eight_subjects()), (diagonal_2x2(), bivariate_all_real())];
    let t2 = general_sur_table();
    let t3 = submodel_table();
    for row in [&t2[0], &t2[1], &t3[0], &t3[1], &t3[2], &t3[3]] {
        out.push((row.pattern.clone(), table_data(&row.pattern, 1)));
    }
    out
}

fn exact(v: &[f64]) -> Vec<Rational> {
    v.iter().map(|&x| rational_from_f64(x).expect("finite")).collect()
}

fn random_beta(rng: &mut ChaCha8Rng, k: usize) -> Vec<f64> {
    (0..k).map(|_| rng.random_range(-3.0..3.0)).collect()
}

fn certify(ideal: &Ideal, gb: &GroebnerResult) -> Result<(), String> {
    let (basis, order) = (gb.basis(), gb.order());
    for (i, f) in basis.iter().enumerate() {
        for g in &basis[i + 1..] {
            ensure(normal_form(&s_polynomial(f, g, order), basis, order).is_zero(), || "S-polynomial remainder".into())?;
        }
    }
    for g in ideal.generators() {
        ensure(normal_form(g, basis, order).is_zero(), || "generator not reduced to 0".into())?;
    }
    Ok(())
}

/// `(X X')⁻¹ X y'` by Gauss–Jordan elimination over ℚ.
fn ols_exact(x: &[Vec<Rational>], y: &[Rational]) -> Vec<Rational> {
    let c = x.len();
    let dot = |a: &[Rational], b: &[Rational]| a.iter().zip(b).fold(Rational::new(), |s, (u, v)| s + Rational::from(u * v));
    let mut m: Vec<Vec<Rational>> = (0..c)
        .map(|i| {
            let mut row: Vec<Rational> = (0..c).map(|j| dot(&x[i], &x[j])).collect();
            row.push(dot(&x[i], y));
            row
        })
        .collect();
    for col in 0..c {
        let p = (col..c).find(|&i| m[i][col] != 0).expect("nonsingular");
        m.swap(p, col);
        let pivot = m[col][col].clone();
        for v in m[col].iter_mut() {
            *v /= &pivot;
        }
        for i in (0..c).filter(|&i| i != col) {
            let f = m[i][col].clone();
            for j in 0..=c {
                let t = Rational::from(&f * &m[col][j]);
                m[i][j] -= t;
            }
        }
    }
    m.into_iter().map(|row| row[c].clone()).collect()
}

fn criterion_9() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut bases = 0;
    for (pattern, data) in fixture_cases() {
        let sys = build_objective(&pattern, &data).map_err(|e| e.to_string())?;
        for _ in 0..20 {
            let p = random_beta(&mut rng, sys.num_params());
            for k in 0..sys.num_params() {
                let h = 1e-4 * (1.0 + p[k].abs());
                let (mut lo, mut hi) = (p.clone(), p.clone());
                lo[k] -= h;
                hi[k] += h;
                let (lo, hi) = (exact(&lo), exact(&hi));
                let dg = sys.objective.evaluate_rational(&hi).unwrap() - sys.objective.evaluate_rational(&lo).unwrap();
                let fd = to_f64(&Rational::from(Rational::from(dg) / Rational::from(&hi[k] - &lo[k])));
                let grad = to_f64(&sys.gradient[k].evaluate_rational(&exact(&p)).unwrap());
                ensure((fd - grad).abs() <= 1e-5 * grad.abs(), || format!("finite difference {fd} vs gradient {grad}"))?;
            }
        }
        let a = analyse(&pattern, &data)?;
        let ideal = Ideal::new(sys.num_params(), sys.gradient.clone()).map_err(|e| e.to_string())?;
        certify(&ideal, &a.basis)?;
        certify(&ideal, a.lex_basis.as_ref().expect("lex basis"))?;
        bases += 2;
        let set = a.solutions.as_ref().expect("zero-dimensional");
        for p in &set.points {
            let conj: Vec<Complex64> = p.coordinates.iter().map(|z| z.conj()).collect();
            let paired = set.points.iter().any(|q| {
                q.coordinates.iter().zip(&conj).all(|(x, y)| (x - y).norm() <= 1e-8 * (1.0 + y.norm()))
            });
            ensure(paired, || format!("no conjugate for {:?}", p.coordinates))?;
        }
    }

    let base = analyse(&diagonal_2x2(), &bivariate_eight_subjects())?;
    for lambda in [Rational::from(2), Rational::from((1, 3)), Rational::from(10)] {
        let scaled = apply_scaling(&bivariate_eight_subjects(), &lambda).map_err(|e| e.to_string())?;
        let other = analyse(&diagonal_2x2(), &scaled)?;
        let (p, q) = (base.solutions.as_ref().unwrap(), other.solutions.as_ref().unwrap());
        ensure(p.points.len() == q.points.len(), || format!("lambda {lambda}: root count changed"))?;
        for (x, y) in p.points.iter().zip(&q.points) {
            let gap = x.coordinates.iter().zip(&y.coordinates).map(|(u, v)| (u - v).norm()).fold(0.0, f64::max);
            ensure(gap <= 1e-8, || format!("lambda {lambda}: roots moved by {gap:e}"))?;
        }
    }

    for cov in 1..=3usize {
        let entries: Vec<(usize, usize)> = (1..=cov).map(|c| (1, c)).collect();
        let pattern = SparsityPattern::new(1, cov, &entries).unwrap();
        let data = Dataset::random(&pattern, cov + 4, cov as u64, 50).unwrap();
        let beta = ols_exact(data.x(), &data.y()[0]);
        let a = analyse(&pattern, &data)?;
        let order = MonomialOrder::grevlex(cov);
        for (k, b) in beta.iter().enumerate() {
            let lin = &MultiPoly::var(cov, k) - &MultiPoly::constant(cov, b.clone());
            ensure(normal_form(&lin, a.basis.basis(), &order).is_zero(), || format!("R=1, C={cov}: b{k} is not {b}"))?;
        }
    }
    Ok(format!("gradients, {bases} certified bases, conjugates, scaling and OLS oracle"))
}

fn criterion_10() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut cases = fixture_cases();
    cases.push((monotone_2x2(), table_data(&monotone_2x2(), 3)));
    for (pattern, data) in cases {
        for _ in 0..10 {
            let beta = ParamVector(random_beta(&mut rng, pattern.num_params()));
            let eval = profile_loglik(&pattern, &data, &beta).map_err(|e| e.to_string())?;
            let sigma = sigma_hat(&pattern, &data, &beta).map_err(|e| e.to_string())?;
            let direct = log_likelihood(&pattern, &data, &beta, &sigma.sigma).map_err(|e| e.to_string())?;
            let gap = (direct - eval.profile_value).abs();
            ensure(gap <= 1e-10 * eval.profile_value.abs(), || format!("profile identity off by {gap:e}"))?;
        }
        let a = analyse(&pattern, &data)?;
        let mut by_g: Vec<usize> = (0..a.stationary.len()).collect();
        let mut by_profile = by_g.clone();
        by_g.sort_by(|&i, &j| a.stationary[i].eval.objective_g.total_cmp(&a.stationary[j].eval.objective_g));
        by_profile.sort_by(|&i, &j| a.stationary[j].eval.profile_value.total_cmp(&a.stationary[i].eval.profile_value));
        ensure(by_g == by_profile, || "profile ranking is not the reverse of the G ranking".into())?;
    }
    Ok("identity holds to 1e-10 and rankings are reversed".into())
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Check); 10] = [
        ("2x8 fixture solutions", criterion_1),
        ("lex basis shape", criterion_2),
        ("all-real instance", criterion_3),
        ("general SUR table", criterion_4),
        ("submodel table", criterion_5),
        ("zero-dimensional solving", criterion_6),
        ("monotone uniqueness", criterion_7),
        ("submodel transfer", criterion_8),
        ("property suites", criterion_9),
        ("profiling identity", criterion_10),
    ];
    let mut failed = 0;
    let mut err = std::io::stderr().lock();
    for (i, (name, check)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let (tag, detail) = match check() {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failed += 1;
                ("FAIL", d)
            }
        };
        let _ = writeln!(err, "criterion {:>2} {tag} {name} [{:.1}s]: {detail}", i + 1, t.elapsed().as_secs_f64());
    }
    let _ = writeln!(err, "acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
