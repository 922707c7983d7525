use proptest::prelude::*;
use surroots::{poly_det, Integer, Monomial, MultiPoly, PolyMatrix, Rational};

const NVARS: usize = 3;

fn rational() -> impl Strategy<Value = Rational> {
    (-20i64..=20, 1i64..=6).prop_map(|(n, d)| Rational::from((n, d)))
}

fn poly() -> impl Strategy<Value = MultiPoly> {
    prop::collection::vec((prop::collection::vec(0u16..=3, NVARS), rational()), 0..6).prop_map(|terms| {
        MultiPoly::from_terms(NVARS, terms.into_iter().map(|(e, c)| (Monomial::from_exponents(&e), c)))
    })
}

fn point() -> impl Strategy<Value = Vec<Rational>> {
    prop::collection::vec(rational(), NVARS)
}

fn in_lowest_terms(q: &Rational) -> bool {
    let (n, d) = (q.numer(), q.denom());
    *d > 0 && Integer::from(n.gcd_ref(d)) == 1 && (*n != 0 || *d == 1)
}

/// Laplace expansion along `row`, recursing along the first row.
fn cofactor_det(m: &[Vec<MultiPoly>], row: usize) -> MultiPoly {
    let n = m.len();
    if n == 1 {
        return m[0][0].clone();
    }
    let mut acc = MultiPoly::zero(NVARS);
    for j in 0..n {
        let minor: Vec<Vec<MultiPoly>> = (0..n)
            .filter(|&i| i != row)
            .map(|i| (0..n).filter(|&k| k != j).map(|k| m[i][k].clone()).collect())
            .collect();
        let term = &m[row][j] * &cofactor_det(&minor, 0);
        acc = if (row + j) % 2 == 0 { &acc + &term } else { &acc - &term };
    }
    acc
}

fn square(n: usize) -> impl Strategy<Value = Vec<Vec<MultiPoly>>> {
    prop::collection::vec(prop::collection::vec(poly(), n), n)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn addition_is_associative(a in poly(), b in poly(), c in poly()) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
    }

    #[test]
    fn multiplication_distributes(a in poly(), b in poly(), c in poly()) {
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
    }

    #[test]
    fn multiplication_commutes(a in poly(), b in poly()) {
        prop_assert_eq!(&a * &b, &b * &a);
    }

    #[test]
    fn product_rule(a in poly(), b in poly(), v in 0..NVARS) {
        let lhs = (&a * &b).differentiate(v).unwrap();
        let rhs = &(&a.differentiate(v).unwrap() * &b) + &(&a * &b.differentiate(v).unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn evaluation_is_multiplicative(a in poly(), b in poly(), p in point()) {
        let lhs = (&a * &b).evaluate_rational(&p).unwrap();
        let rhs = a.evaluate_rational(&p).unwrap() * b.evaluate_rational(&p).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn determinant_matches_cofactor_expansion(
        (m, row) in (1usize..=4).prop_flat_map(|n| (square(n), 0..n))
    ) {
        let pm = PolyMatrix::from_rows(NVARS, m.clone()).unwrap();
        prop_assert_eq!(poly_det(&pm).unwrap(), cofactor_det(&m, row));
    }

    #[test]
    fn coefficients_and_values_are_reduced(a in poly(), b in poly(), p in point()) {
        let prod = &a * &b;
        for (_, c) in prod.terms() {
            prop_assert!(in_lowest_terms(c));
            prop_assert!(*c != 0);
        }
        prop_assert!(in_lowest_terms(&prod.evaluate_rational(&p).unwrap()));
    }
}

