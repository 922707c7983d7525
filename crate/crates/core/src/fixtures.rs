//! Reference datasets and the model lists of the dimension/degree tables.

use crate::surmodel::{Dataset, SparsityPattern};

/// Bivariate model with `C_1 = {1}`, `C_2 = {2}`.
pub fn diagonal_2x2() -> SparsityPattern {
    SparsityPattern::new(2, 2, &[(1, 1), (2, 2)]).expect("valid pattern")
}

/// The 2×8 dataset whose likelihood has five complex stationary points,
/// three of them real.
pub fn bivariate_eight_subjects() -> Dataset {
    Dataset::from_integers(
        &[&[188, 22, -46, 77, -103, 74, 83, 101], &[55, -216, 116, -30, 131, 195, -311, -239]],
        &[&[234, -5, 6, 182, -193, 278, 62, -68], &[497, -326, 266, -3, 93, 558, -584, -224]],
    )
    .expect("well-formed fixture")
}

/// Real parts of the five stationary points of [`bivariate_eight_subjects`],
/// as `(β11, β22)` with imaginary parts, to six digits.
pub const BIVARIATE_EIGHT_ROOTS: [((f64, f64), (f64, f64)); 5] = [
    ((0.778796, 0.0), (1.538029, 0.0)),
    ((1.622609, 0.0), (2.034745, 0.0)),
    ((1.480687, -1.547274), (2.16845, 0.765283)),
    ((1.480687, 1.547274), (2.16845, -0.765283)),
    ((2.764418, 0.0), (2.504006, 0.0)),
];

/// A 2×5 dataset for the diagonal bivariate model whose five stationary
/// points are all real.
pub fn bivariate_all_real() -> Dataset {
    let s = |rows: &[&[&str]]| -> Vec<Vec<String>> {
        rows.iter().map(|r| r.iter().map(|v| v.to_string()).collect()).collect()
    };
    Dataset::from_strings(
        &s(&[&["-0.65", "-0.80", "1.34", "-1.03", "-1.08"], &["-0.04", "-1.18", "1.98", "-2.42", "-3.75"]]),
        &s(&[&["0.14", "-0.73", "1.40", "-2.29", "-3.30"], &["0.52", "-1.93", "3.02", "-6.67", "-9.94"]]),
    )
    .expect("well-formed fixture")
}

/// Bivariate model whose covariate sets are nested: `C_1 = {1} ⊂ C_2 = {1, 2}`.
pub fn monotone_2x2() -> SparsityPattern {
    SparsityPattern::new(2, 2, &[(1, 1), (2, 1), (2, 2)]).expect("valid pattern")
}

/// One row of a dimension/degree table.
#[derive(Clone, Debug)]
pub struct TableRow {
    pub label: &'static str,
    pub pattern: SparsityPattern,
    pub expected_dim: i64,
    pub expected_degree: u64,
    /// Default time budget in seconds.
    pub budget_secs: u64,
}

/// Default per-row budget in seconds.
pub const SHORT: u64 = 60;
/// Budget of the largest rows.
pub const LONG: u64 = 30 * 60;

fn row(
    label: &'static str,
    r: usize,
    c: usize,
    entries: &[(usize, usize)],
    restrictions: &[Vec<(usize, usize)>],
    expected: (i64, u64),
    budget_secs: u64,
) -> TableRow {
    let pattern = SparsityPattern::new(r, c, entries)
        .and_then(|p| p.with_restrictions(restrictions))
        .expect("valid table pattern");
    TableRow { label, pattern, expected_dim: expected.0, expected_degree: expected.1, budget_secs }
}

/// Block-diagonal SUR models.
pub fn general_sur_table() -> Vec<TableRow> {
    vec![
        row("{(1,1),(2,2)}", 2, 2, &[(1, 1), (2, 2)], &[], (0, 5), SHORT),
        row("{(1,1),(1,2),(2,3)}", 2, 3, &[(1, 1), (1, 2), (2, 3)], &[], (0, 9), SHORT),
        row("{(1,1),(2,2),(3,3)}", 3, 3, &[(1, 1), (2, 2), (3, 3)], &[], (0, 29), SHORT),
        row("{(1,1),(1,2),(1,3),(2,4)}", 2, 4, &[(1, 1), (1, 2), (1, 3), (2, 4)], &[], (1, 4), SHORT),
        row("{(1,1),(1,2),(2,3),(2,4)}", 2, 4, &[(1, 1), (1, 2), (2, 3), (2, 4)], &[], (1, 8), SHORT),
        row("{(1,1),(2,2),(3,3),(4,4)}", 4, 4, &[(1, 1), (2, 2), (3, 3), (4, 4)], &[], (1, 32), SHORT),
        row(
            "{(1,1),(2,2),(3,3),(4,4),(5,5)}",
            5,
            5,
            &[(1, 1), (2, 2), (3, 3), (4, 4), (5, 5)],
            &[],
            (2, 80),
            LONG,
        ),
    ]
}

/// Submodels with one equality restriction.
pub fn submodel_table() -> Vec<TableRow> {
    vec![
        row("{(1,1),(2,2)} b11=b22", 2, 2, &[(1, 1), (2, 2)], &[vec![(1, 1), (2, 2)]], (0, 3), SHORT),
        row(
            "{(1,1),(1,2),(2,3)} b12=b23",
            2,
            3,
            &[(1, 1), (1, 2), (2, 3)],
            &[vec![(1, 2), (2, 3)]],
            (0, 7),
            SHORT,
        ),
        row(
            "{(1,1),(2,2),(3,3)} b11=b22",
            3,
            3,
            &[(1, 1), (2, 2), (3, 3)],
            &[vec![(1, 1), (2, 2)]],
            (0, 11),
            SHORT,
        ),
        row(
            "{(1,1),(1,2),(1,3),(2,4)} b13=b24",
            2,
            4,
            &[(1, 1), (1, 2), (1, 3), (2, 4)],
            &[vec![(1, 3), (2, 4)]],
            (0, 11),
            SHORT,
        ),
        row(
            "{(1,1),(1,2),(2,3),(2,4)} b12=b23",
            2,
            4,
            &[(1, 1), (1, 2), (2, 3), (2, 4)],
            &[vec![(1, 2), (2, 3)]],
            (0, 23),
            SHORT,
        ),
        row(
            "{(1,1),(2,2),(3,3),(4,4)} b11=b22",
            4,
            4,
            &[(1, 1), (2, 2), (3, 3), (4, 4)],
            &[vec![(1, 1), (2, 2)]],
            (0, 63),
            LONG,
        ),
    ]
}

/// Subject count used for generic table data: `N = R + C + 2`.
pub fn table_subjects(pattern: &SparsityPattern) -> usize {
    pattern.responses() + pattern.covariates() + 2
}

/// Integer range used for generic table data.
pub const TABLE_DATA_RANGE: i64 = 300;
