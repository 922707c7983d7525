//! Benchmark workloads: fixture and table-row ideals on seeded data.

use surroots::fixtures::{
    bivariate_eight_subjects, diagonal_2x2, general_sur_table, submodel_table, table_subjects, TABLE_DATA_RANGE,
};
use surroots::{build_objective, Dataset, Ideal, SparsityPattern};

/// A named model with data.
pub struct Workload {
    pub name: String,
    pub pattern: SparsityPattern,
    pub data: Dataset,
}

impl Workload {
    pub fn ideal(&self) -> Ideal {
        let sys = build_objective(&self.pattern, &self.data).expect("valid workload");
        Ideal::new(sys.num_params(), sys.gradient).expect("nonzero gradient")
    }
}

fn table_workload(name: &str, pattern: &SparsityPattern) -> Workload {
    let data = Dataset::random(pattern, table_subjects(pattern), 1, TABLE_DATA_RANGE).expect("random data");
    Workload { name: name.to_string(), pattern: pattern.clone(), data }
}

/// The 2×8 fixture followed by the zero-dimensional rows that finish in
/// about a second or less.
pub fn zero_dimensional() -> Vec<Workload> {
    let t2 = general_sur_table();
    let t3 = submodel_table();
    let mut out = vec![Workload {
        name: "fixture-2x8".into(),
        pattern: diagonal_2x2(),
        data: bivariate_eight_subjects(),
    }];
    for (k, row) in t2[..3].iter().enumerate() {
        out.push(table_workload(&format!("gensur-{}-deg{}", k + 1, row.expected_degree), &row.pattern));
    }
    for (k, row) in t3[..5].iter().enumerate() {
        out.push(table_workload(&format!("submodel-{}-deg{}", k + 1, row.expected_degree), &row.pattern));
    }
    out
}

/// The two small positive-dimensional rows.
pub fn positive_dimensional() -> Vec<Workload> {
    let t2 = general_sur_table();
    t2[3..5]
        .iter()
        .enumerate()
        .map(|(k, row)| table_workload(&format!("gensur-{}-dim{}", k + 4, row.expected_dim), &row.pattern))
        .collect()
}
