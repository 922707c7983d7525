use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use surroots::exactpoly::{rational_from_f64, to_f64};
use surroots::fixtures::{
    bivariate_all_real, bivariate_eight_subjects, diagonal_2x2, general_sur_table, monotone_2x2, submodel_table,
    table_subjects, TABLE_DATA_RANGE,
};
use surroots::likelihood::objective_value;
use surroots::{
    apply_scaling, build_objective, igls, log_likelihood, normal_form, profile_loglik, sigma_hat, Analysis,
    AnalysisOptions, Dataset, MonomialOrder, MultiPoly, ParamVector, Rational, SolutionSet, SparsityPattern,
};

fn cases() -> Vec<(SparsityPattern, Dataset)> {
    let mut out = vec![
        (diagonal_2x2(), bivariate_eight_subjects()),
        (diagonal_2x2(), bivariate_all_real()),
    ];
    let monotone = monotone_2x2();
    out.push((monotone.clone(), Dataset::random(&monotone, 6, 3, TABLE_DATA_RANGE).unwrap()));
    let t2 = general_sur_table();
    let t3 = submodel_table();
    for row in [&t2[0], &t2[1], &t3[0], &t3[1], &t3[2]] {
        let data = Dataset::random(&row.pattern, table_subjects(&row.pattern), 1, TABLE_DATA_RANGE).unwrap();
        out.push((row.pattern.clone(), data));
    }
    out
}

fn random_beta(rng: &mut ChaCha8Rng, k: usize) -> Vec<f64> {
    (0..k).map(|_| rng.random_range(-3.0..3.0)).collect()
}

fn exact(v: &[f64]) -> Vec<Rational> {
    v.iter().map(|&x| rational_from_f64(x).unwrap()).collect()
}

#[test]
fn gradient_matches_central_differences() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for (pattern, data) in cases() {
        let sys = build_objective(&pattern, &data).unwrap();
        for _ in 0..20 {
            let p = random_beta(&mut rng, sys.num_params());
            for k in 0..sys.num_params() {
                let h = 1e-4 * (1.0 + p[k].abs());
                let (mut lo, mut hi) = (p.clone(), p.clone());
                lo[k] -= h;
                hi[k] += h;
                let g_hi = sys.objective.evaluate_rational(&exact(&hi)).unwrap();
                let g_lo = sys.objective.evaluate_rational(&exact(&lo)).unwrap();
                let step = Rational::from(&exact(&hi)[k] - &exact(&lo)[k]);
                let fd = to_f64(&Rational::from(Rational::from(g_hi - g_lo) / step));
                let grad = to_f64(&sys.gradient[k].evaluate_rational(&exact(&p)).unwrap());
                assert!((fd - grad).abs() <= 1e-5 * grad.abs(), "{pattern:?} at {p:?}: {fd} vs {grad}");
            }
        }
    }
}

#[test]
fn objective_shape_and_sign() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for (pattern, data) in cases() {
        let sys = build_objective(&pattern, &data).unwrap();
        assert_eq!(sys.gradient.len(), pattern.classes().len());
        let deg = sys.objective.total_degree().unwrap();
        assert!(deg <= 2 * pattern.responses() as u32 && deg % 2 == 0);
        for _ in 0..20 {
            let p = exact(&random_beta(&mut rng, sys.num_params()));
            assert!(sys.objective.evaluate_rational(&p).unwrap() >= 0);
        }
    }
}

/// Exact `(X X')⁻¹ X y'` by Gauss–Jordan elimination over ℚ.
fn ols_exact(x: &[Vec<Rational>], y: &[Rational]) -> Vec<Rational> {
    let c = x.len();
    let mut m: Vec<Vec<Rational>> = (0..c)
        .map(|i| {
            let mut row: Vec<Rational> = (0..c)
                .map(|j| x[i].iter().zip(&x[j]).fold(Rational::new(), |acc, (a, b)| acc + Rational::from(a * b)))
                .collect();
            row.push(x[i].iter().zip(y).fold(Rational::new(), |acc, (a, b)| acc + Rational::from(a * b)));
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
        for i in 0..c {
            if i != col {
                let f = m[i][col].clone();
                for j in 0..=c {
                    let t = Rational::from(&f * &m[col][j]);
                    m[i][j] -= t;
                }
            }
        }
    }
    m.into_iter().map(|row| row[c].clone()).collect()
}

#[test]
fn single_response_stationary_point_is_exact_ols() {
    for (cov, seed) in [(1usize, 1u64), (2, 2), (3, 3)] {
        let entries: Vec<(usize, usize)> = (1..=cov).map(|c| (1, c)).collect();
        let pattern = SparsityPattern::new(1, cov, &entries).unwrap();
        let data = Dataset::random(&pattern, cov + 4, seed, 50).unwrap();
        let beta = ols_exact(data.x(), &data.y()[0]);
        let a = Analysis::run(&pattern, &data, &AnalysisOptions::default()).unwrap();
        assert_eq!((a.dimension(), a.degree()), (0, 1));
        let order = MonomialOrder::grevlex(cov);
        for (k, b) in beta.iter().enumerate() {
            let lin = &MultiPoly::var(cov, k) - &MultiPoly::constant(cov, b.clone());
            assert!(normal_form(&lin, a.basis.basis(), &order).is_zero(), "β_{k} ≠ {b}");
        }
        let st = &a.stationary[0];
        for (got, want) in st.beta.0.iter().zip(&beta) {
            assert!((got - to_f64(want)).abs() <= 1e-12 * (1.0 + got.abs()));
        }
    }
}

fn solve(pattern: &SparsityPattern, data: &Dataset) -> SolutionSet {
    Analysis::run(pattern, data, &AnalysisOptions::default()).unwrap().solutions.unwrap()
}

fn same_points(a: &SolutionSet, b: &SolutionSet, tol: f64) -> bool {
    a.points.len() == b.points.len()
        && a.points.iter().zip(&b.points).all(|(p, q)| {
            p.coordinates.iter().zip(&q.coordinates).all(|(x, y)| (x - y).norm() <= tol * (1.0 + x.norm()))
        })
}

#[test]
fn roots_are_invariant_under_rescaling() {
    let base = solve(&diagonal_2x2(), &bivariate_eight_subjects());
    for lambda in [Rational::from(2), Rational::from((1, 3)), Rational::from(10)] {
        let scaled = apply_scaling(&bivariate_eight_subjects(), &lambda).unwrap();
        assert!(same_points(&base, &solve(&diagonal_2x2(), &scaled), 1e-8), "λ = {lambda}");
    }
}

#[test]
fn solution_sets_are_certified() {
    for (pattern, data) in cases() {
        let a = Analysis::run(&pattern, &data, &AnalysisOptions::default()).unwrap();
        let set = a.solutions.as_ref().unwrap();
        assert_eq!(set.total_multiplicity() as u64, a.degree(), "{pattern:?}");
        for p in &set.points {
            assert!(p.verified);
            let scale = 1.0 + p.coordinates.iter().map(|z| z.norm()).fold(0.0, f64::max);
            assert!(p.newton_correction.unwrap() <= 1e-12 * scale, "{:?}", p.newton_correction);
            let conj: Vec<_> = p.coordinates.iter().map(|z| z.conj()).collect();
            let paired = set.points.iter().any(|q| {
                q.coordinates.iter().zip(&conj).all(|(x, y)| (x - y).norm() <= 1e-8 * (1.0 + y.norm()))
            });
            assert!(paired, "no conjugate for {:?}", p.coordinates);
        }
        for (k, g) in a.system.gradient.iter().enumerate() {
            let coeff_scale = to_f64(&g.max_abs_coeff());
            for p in &set.points {
                let r = g.evaluate_complex(&p.coordinates).unwrap().norm();
                assert!(r <= 1e-8 * (1.0 + coeff_scale), "generator {k}: residual {r}");
            }
        }
    }
}

#[test]
fn profile_identity_and_determinant_scaling() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for (pattern, data) in cases() {
        let (r, n) = (pattern.responses() as i32, data.subjects() as f64);
        for _ in 0..10 {
            let beta = ParamVector(random_beta(&mut rng, pattern.num_params()));
            let eval = profile_loglik(&pattern, &data, &beta).unwrap();
            assert!((eval.log_likelihood - eval.profile_value).abs() <= 1e-10 * eval.profile_value.abs());
            let sigma = sigma_hat(&pattern, &data, &beta).unwrap();
            let g = objective_value(&pattern, &data, &beta).unwrap();
            assert!((n.powi(r) * sigma.sigma.determinant() - g).abs() <= 1e-6 * g);
            let direct = log_likelihood(&pattern, &data, &beta, &sigma.sigma).unwrap();
            assert_eq!(direct, eval.log_likelihood);
        }
    }
}

#[test]
fn stationary_points_are_ranked_and_flat() {
    for (pattern, data) in cases() {
        let a = Analysis::run(&pattern, &data, &AnalysisOptions::default()).unwrap();
        let pts = &a.stationary;
        assert_eq!(pts.iter().filter(|p| p.is_global_max).count(), 1);
        for w in pts.windows(2) {
            assert!(w[0].eval.objective_g <= w[1].eval.objective_g);
            assert!(w[0].eval.profile_value >= w[1].eval.profile_value);
        }
        for p in pts {
            assert!(p.eval.objective_g > 0.0 && p.sigma.positive_definite);
            for k in 0..p.beta.len() {
                let h = 1e-6 * (1.0 + p.beta.0[k].abs());
                let (mut lo, mut hi) = (p.beta.clone(), p.beta.clone());
                lo.0[k] -= h;
                hi.0[k] += h;
                let d = (profile_loglik(&pattern, &data, &hi).unwrap().profile_value
                    - profile_loglik(&pattern, &data, &lo).unwrap().profile_value)
                    / (2.0 * h);
                assert!(d.abs() <= 1e-4 * (1.0 + p.eval.profile_value.abs()), "slope {d} at {:?}", p.beta);
            }
        }
    }
}

#[test]
fn igls_fixed_points_are_stationary_points() {
    for (pattern, data) in cases() {
        let a = Analysis::run(&pattern, &data, &AnalysisOptions::default()).unwrap();
        let fit = igls(&pattern, &data, None, 10_000, 1e-12).unwrap();
        if !fit.converged {
            continue;
        }
        let close = a.stationary.iter().any(|p| p.beta.0.iter().zip(&fit.beta.0).all(|(x, y)| (x - y).abs() <= 1e-6));
        assert!(close, "{pattern:?}: IGLS limit {:?} is not a stationary point", fit.beta);
    }
}
