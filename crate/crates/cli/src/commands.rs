//! Subcommand implementations. Each returns the text to print and the
//! process exit code.

use std::collections::BTreeMap;
use std::path::Path;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use surroots::fixtures::{general_sur_table, submodel_table, table_subjects, TableRow, TABLE_DATA_RANGE};
use surroots::likelihood::{igls, profile_loglik};
use surroots::pipeline::{Analysis, AnalysisOptions, LexStrategy, PipelineError};
use surroots::{build_objective, Dataset, OrderKind, ParamVector, Rational, SparsityPattern};

use crate::format::format_g;
use crate::io::{read_data, read_model, DataFile, ModelFile};
use crate::report::{to_sorted_json, AnalysisReport, IglsSummary};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_TIMEOUT: i32 = 3;
pub const EXIT_POSITIVE_DIMENSIONAL: i32 = 4;
pub const EXIT_NONCONVERGENCE: i32 = 5;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OutputFormat {
    Report,
    Tsv,
}

/// What a command produced.
#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome { code: EXIT_OK, stdout, stderr: String::new() }
    }

    fn fail(code: i32, msg: impl std::fmt::Display) -> Self {
        Outcome { code, stdout: String::new(), stderr: format!("error: {msg}\n") }
    }
}

/// Options shared by `ideal` and `solve`.
#[derive(Clone, Debug)]
pub struct SolveSettings {
    pub order: OrderKind,
    pub lex: LexStrategy,
    pub tol: f64,
    pub real_tol: f64,
    pub budget: Option<Duration>,
    pub format: OutputFormat,
    pub full_basis: bool,
    pub timings: bool,
}

impl Default for SolveSettings {
    fn default() -> Self {
        SolveSettings {
            order: OrderKind::GrevLex,
            lex: LexStrategy::Convert,
            tol: 1e-8,
            real_tol: 1e-8,
            budget: None,
            format: OutputFormat::Report,
            full_basis: false,
            timings: false,
        }
    }
}

impl SolveSettings {
    fn analysis_options(&self) -> AnalysisOptions {
        let mut opts = AnalysisOptions { order: self.order, lex: self.lex, ..Default::default() };
        opts.solve.tol = self.tol;
        opts.solve.real_tol = self.real_tol;
        opts.solve.cluster_radius = self.tol;
        match self.budget {
            Some(b) => opts.with_budget(b),
            None => opts,
        }
    }
}

fn load(model: &Path, data: &Path) -> Result<(SparsityPattern, Dataset), Outcome> {
    let pattern = read_model(model).map_err(|e| Outcome::fail(EXIT_VALIDATION, format!("{e:#}")))?;
    let dataset = read_data(data).map_err(|e| Outcome::fail(EXIT_VALIDATION, format!("{e:#}")))?;
    Ok((pattern, dataset))
}

fn pipeline_failure(e: &PipelineError) -> i32 {
    match e {
        PipelineError::Model(_) => EXIT_VALIDATION,
        e if e.is_timeout() => EXIT_TIMEOUT,
        _ => 1,
    }
}

fn render(report: &AnalysisReport, format: OutputFormat) -> String {
    match format {
        OutputFormat::Report => report.to_json(),
        OutputFormat::Tsv => report_tsv(report),
    }
}

fn report_tsv(r: &AnalysisReport) -> String {
    let mut out = String::new();
    out.push_str("key\tvalue\n");
    out.push_str(&format!("status\t{}\n", r.status));
    if let (Some(d), Some(g)) = (r.dimension, r.degree) {
        out.push_str(&format!("dimension\t{d}\ndegree\t{g}\n"));
    }
    if let Some(s) = &r.solutions {
        out.push_str(&format!("solutions\t{}\nreal\t{}\n", s.count, s.real_count));
        for (i, p) in s.points.iter().enumerate() {
            let coords: Vec<String> =
                p.coordinates.iter().map(|z| format!("{}{}{}i", format_g(z.re, 10), if z.im < 0.0 { "" } else { "+" }, format_g(z.im, 10))).collect();
            out.push_str(&format!("solution{}\t{}\n", i + 1, coords.join("\t")));
        }
    }
    if let Some(points) = &r.stationary_points {
        for (i, p) in points.iter().enumerate() {
            let beta: Vec<String> = r.parameters.iter().map(|n| format_g(p.beta[n], 10)).collect();
            out.push_str(&format!(
                "stationary{}\t{}\t{}\t{}{}\n",
                i + 1,
                beta.join("\t"),
                format_g(p.log_likelihood, 10),
                p.classification,
                if p.is_global_max { "\tglobal-max" } else { "" }
            ));
        }
    }
    out
}

fn analysis_command(
    command: &str,
    model: &Path,
    data: &Path,
    s: &SolveSettings,
    full: bool,
) -> Outcome {
    let (pattern, dataset) = match load(model, data) {
        Ok(v) => v,
        Err(o) => return o,
    };
    let mut report = AnalysisReport::new(command, &pattern, &dataset);
    let opts = s.analysis_options();
    let result = if full { Analysis::run(&pattern, &dataset, &opts) } else { Analysis::ideal(&pattern, &dataset, &opts) };
    let analysis = match result {
        Ok(a) => a,
        Err(e) => {
            let code = pipeline_failure(&e);
            if code == EXIT_TIMEOUT {
                report.status = "timeout".into();
                report.warnings.push(e.to_string());
                return Outcome { code, stdout: render(&report, s.format), stderr: format!("error: {e}\n") };
            }
            return Outcome::fail(code, e);
        }
    };
    report.fill(&analysis, s.real_tol, s.full_basis, s.timings);
    let mut code = EXIT_OK;
    if full && !analysis.basis.is_zero_dimensional() {
        report.status = "positive-dimensional".into();
        code = EXIT_POSITIVE_DIMENSIONAL;
    }
    Outcome { code, stdout: render(&report, s.format), stderr: String::new() }
}

/// Dimension and degree of the maximum likelihood ideal.
pub fn cmd_ideal(model: &Path, data: &Path, s: &SolveSettings) -> Outcome {
    analysis_command("ideal", model, data, s, false)
}

/// The full pipeline: all complex solutions and real stationary points.
pub fn cmd_solve(model: &Path, data: &Path, s: &SolveSettings) -> Outcome {
    analysis_command("solve", model, data, s, true)
}

#[derive(Clone, Debug)]
pub struct IglsSettings {
    pub max_iter: usize,
    pub tol: f64,
    pub format: OutputFormat,
}

impl Default for IglsSettings {
    fn default() -> Self {
        IglsSettings { max_iter: 1000, tol: 1e-12, format: OutputFormat::Report }
    }
}

/// `max_k |∂G/∂β_k| · (1 + |β_k|) / G`, evaluated exactly at the float point.
fn relative_gradient(pattern: &SparsityPattern, data: &Dataset, beta: &ParamVector) -> Option<f64> {
    let sys = build_objective(pattern, data).ok()?;
    let point: Vec<Rational> = beta.0.iter().map(|&v| Rational::from_f64(v)).collect::<Option<_>>()?;
    let g = sys.objective.evaluate_rational(&point).ok()?.to_f64();
    if g <= 0.0 {
        return None;
    }
    let worst = sys
        .gradient
        .iter()
        .zip(&beta.0)
        .map(|(d, b)| d.evaluate_rational(&point).map(|v| v.to_f64().abs() * (1.0 + b.abs())))
        .collect::<Result<Vec<f64>, _>>()
        .ok()?
        .into_iter()
        .fold(0.0, f64::max);
    Some(worst / g)
}

/// The IGLS alternating iteration from the OLS start.
pub fn cmd_igls(model: &Path, data: &Path, s: &IglsSettings) -> Outcome {
    let (pattern, dataset) = match load(model, data) {
        Ok(v) => v,
        Err(o) => return o,
    };
    if let Err(e) = dataset.check_against(&pattern).and_then(|_| dataset.validate()) {
        return Outcome::fail(EXIT_VALIDATION, e);
    }
    let mut report = AnalysisReport::new("igls", &pattern, &dataset);
    let res = match igls(&pattern, &dataset, None, s.max_iter, s.tol) {
        Ok(r) => r,
        Err(e) => {
            report.status = "nonconvergence".into();
            report.warnings.push(e.to_string());
            return Outcome { code: EXIT_NONCONVERGENCE, stdout: render(&report, s.format), stderr: format!("error: {e}\n") };
        }
    };
    let names = pattern.param_names();
    let ll = profile_loglik(&pattern, &dataset, &res.beta).ok().map(|e| e.log_likelihood);
    report.igls = Some(IglsSummary {
        beta: names.iter().cloned().zip(res.beta.0.iter().copied()).collect(),
        sigma: res.sigma.rows(),
        iterations: res.iterations,
        converged: res.converged,
        log_likelihood: ll,
        relative_gradient: relative_gradient(&pattern, &dataset, &res.beta),
    });
    let code = if res.converged {
        EXIT_OK
    } else {
        report.status = "nonconvergence".into();
        report.warnings.push(format!("no convergence within {} iterations", s.max_iter));
        EXIT_NONCONVERGENCE
    };
    Outcome { code, stdout: render(&report, s.format), stderr: String::new() }
}

#[derive(Clone, Debug)]
pub struct SearchSettings {
    pub subjects: usize,
    pub trials: usize,
    pub seed: u64,
    pub range: i64,
    pub solve: SolveSettings,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct TrialEntry {
    pub seed: u64,
    pub degree: Option<u64>,
    pub real_count: Option<usize>,
    pub status: String,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct SearchBest {
    pub seed: u64,
    pub real_count: usize,
    pub degree: u64,
    pub data: DataFile,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct SearchReport {
    pub command: String,
    pub model: ModelFile,
    pub subjects: usize,
    pub trials: usize,
    pub seed: u64,
    pub range: i64,
    /// Number of trials per real-point count.
    pub histogram: BTreeMap<String, usize>,
    pub results: Vec<TrialEntry>,
    pub best: Option<SearchBest>,
}

/// Solves `trials` seeded random datasets and keeps the one with the most
/// real stationary points (first seed wins ties).
pub fn search(pattern: &SparsityPattern, s: &SearchSettings) -> Result<SearchReport, String> {
    let needed = pattern.responses() + pattern.covariates();
    if s.subjects < needed {
        return Err(format!("N = {} subjects but at least R + C = {needed} are required", s.subjects));
    }
    let opts = s.solve.analysis_options();
    let runs: Vec<(TrialEntry, Option<Dataset>)> = (0..s.trials as u64)
        .into_par_iter()
        .map(|i| {
            let seed = s.seed.wrapping_add(i);
            let data = match Dataset::random(pattern, s.subjects, seed, s.range) {
                Ok(d) => d,
                Err(e) => return (TrialEntry { seed, degree: None, real_count: None, status: e.to_string() }, None),
            };
            match Analysis::run(pattern, &data, &opts) {
                Ok(a) if a.solutions.is_some() => {
                    let entry =
                        TrialEntry { seed, degree: Some(a.degree()), real_count: Some(a.real_count()), status: "ok".into() };
                    (entry, Some(data))
                }
                Ok(a) => (
                    TrialEntry { seed, degree: Some(a.degree()), real_count: None, status: "positive-dimensional".into() },
                    None,
                ),
                Err(e) => {
                    let status = if e.is_timeout() { "timeout".to_string() } else { e.to_string() };
                    (TrialEntry { seed, degree: None, real_count: None, status }, None)
                }
            }
        })
        .collect();
    let mut histogram = BTreeMap::new();
    let mut best: Option<SearchBest> = None;
    for (entry, data) in &runs {
        if let (Some(count), Some(data)) = (entry.real_count, data) {
            *histogram.entry(count.to_string()).or_insert(0) += 1;
            if best.as_ref().is_none_or(|b| count > b.real_count) {
                best = Some(SearchBest {
                    seed: entry.seed,
                    real_count: count,
                    degree: entry.degree.unwrap_or(0),
                    data: DataFile::from_dataset(data),
                });
            }
        }
    }
    Ok(SearchReport {
        command: "search".into(),
        model: ModelFile::from_pattern(pattern),
        subjects: s.subjects,
        trials: s.trials,
        seed: s.seed,
        range: s.range,
        histogram,
        results: runs.into_iter().map(|(e, _)| e).collect(),
        best,
    })
}

pub fn cmd_search(model: &Path, s: &SearchSettings) -> Outcome {
    let pattern = match read_model(model) {
        Ok(p) => p,
        Err(e) => return Outcome::fail(EXIT_VALIDATION, format!("{e:#}")),
    };
    match search(&pattern, s) {
        Ok(r) => Outcome::ok(match s.solve.format {
            OutputFormat::Report => to_sorted_json(&r),
            OutputFormat::Tsv => {
                let mut out = String::from("seed\tdegree\treal_count\tstatus\n");
                for t in &r.results {
                    let opt = |v: Option<String>| v.unwrap_or_else(|| "NA".into());
                    out.push_str(&format!(
                        "{}\t{}\t{}\t{}\n",
                        t.seed,
                        opt(t.degree.map(|d| d.to_string())),
                        opt(t.real_count.map(|d| d.to_string())),
                        t.status
                    ));
                }
                out
            }
        }),
        Err(e) => Outcome::fail(EXIT_VALIDATION, e),
    }
}

#[derive(Clone, Debug)]
pub struct GridSettings {
    pub range1: (f64, f64),
    pub range2: (f64, f64),
    pub steps: usize,
    pub format: OutputFormat,
}

/// One grid cell: coordinates and the profile log-likelihood, `None` where
/// `G ≤ 0`.
pub type GridRow = (f64, f64, Option<f64>);

/// Profile log-likelihood on a `(steps+1)²` grid over two free parameters.
pub fn grid(pattern: &SparsityPattern, data: &Dataset, s: &GridSettings) -> Result<Vec<GridRow>, String> {
    if pattern.num_params() != 2 {
        return Err(format!("grid needs exactly 2 free parameters, the model has {}", pattern.num_params()));
    }
    if s.steps == 0 {
        return Err("steps must be positive".into());
    }
    let at = |(lo, hi): (f64, f64), i: usize| lo + (hi - lo) * i as f64 / s.steps as f64;
    let mut rows = Vec::with_capacity((s.steps + 1) * (s.steps + 1));
    for i in 0..=s.steps {
        for j in 0..=s.steps {
            let (b1, b2) = (at(s.range1, i), at(s.range2, j));
            let v = profile_loglik(pattern, data, &ParamVector(vec![b1, b2])).ok().map(|e| e.profile_value);
            rows.push((b1, b2, v));
        }
    }
    Ok(rows)
}

pub fn cmd_grid(model: &Path, data: &Path, s: &GridSettings) -> Outcome {
    let (pattern, dataset) = match load(model, data) {
        Ok(v) => v,
        Err(o) => return o,
    };
    if let Err(e) = dataset.check_against(&pattern) {
        return Outcome::fail(EXIT_VALIDATION, e);
    }
    let rows = match grid(&pattern, &dataset, s) {
        Ok(r) => r,
        Err(e) => return Outcome::fail(EXIT_VALIDATION, e),
    };
    let names = pattern.param_names();
    let out = match s.format {
        OutputFormat::Tsv => {
            let mut out = format!("{}\t{}\tprofile_loglik\n", names[0], names[1]);
            for (a, b, v) in rows {
                let v = v.map_or_else(|| "NA".to_string(), |v| format_g(v, 10));
                out.push_str(&format!("{}\t{}\t{}\n", format_g(a, 10), format_g(b, 10), v));
            }
            out
        }
        OutputFormat::Report => {
            let cells: Vec<(f64, f64, Option<f64>)> = rows;
            to_sorted_json(&serde_json::json!({
                "command": "grid",
                "parameters": names,
                "steps": s.steps,
                "rows": cells,
            }))
        }
    };
    Outcome::ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TableKind {
    GeneralSur,
    Submodels,
}

#[derive(Clone, Debug)]
pub struct TableSettings {
    pub kind: TableKind,
    pub seed: u64,
    /// Overrides the per-row default budgets.
    pub budget: Option<Duration>,
    /// 1-based rows to run; all when empty.
    pub rows: Vec<usize>,
    pub order: OrderKind,
    pub jobs: Option<usize>,
    pub format: OutputFormat,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct TableEntry {
    pub row: usize,
    pub pattern: String,
    pub dimension: Option<i64>,
    pub degree: Option<u64>,
    pub expected_dimension: i64,
    pub expected_degree: u64,
    pub matches: Option<bool>,
    pub runtime_secs: f64,
    pub budget_secs: f64,
    pub status: String,
}

pub fn table_rows(kind: TableKind) -> Vec<TableRow> {
    match kind {
        TableKind::GeneralSur => general_sur_table(),
        TableKind::Submodels => submodel_table(),
    }
}

/// Dimension and degree of one table row on seeded generic data.
pub fn run_table_row(index: usize, row: &TableRow, seed: u64, budget: Duration, order: OrderKind) -> TableEntry {
    let mut entry = TableEntry {
        row: index,
        pattern: row.label.to_string(),
        dimension: None,
        degree: None,
        expected_dimension: row.expected_dim,
        expected_degree: row.expected_degree,
        matches: None,
        runtime_secs: 0.0,
        budget_secs: budget.as_secs_f64(),
        status: "ok".into(),
    };
    let start = Instant::now();
    let data = match Dataset::random(&row.pattern, table_subjects(&row.pattern), seed, TABLE_DATA_RANGE) {
        Ok(d) => d,
        Err(e) => {
            entry.status = e.to_string();
            return entry;
        }
    };
    let opts = AnalysisOptions { order, ..Default::default() }.with_budget(budget);
    match Analysis::ideal(&row.pattern, &data, &opts) {
        Ok(a) => {
            entry.dimension = Some(a.dimension());
            entry.degree = Some(a.degree());
            entry.matches = Some(a.dimension() == row.expected_dim && a.degree() == row.expected_degree);
        }
        Err(e) if e.is_timeout() => entry.status = "timeout".into(),
        Err(e) => entry.status = e.to_string(),
    }
    entry.runtime_secs = start.elapsed().as_secs_f64();
    entry
}

pub fn tables(s: &TableSettings) -> Vec<TableEntry> {
    let rows = table_rows(s.kind);
    let selected: Vec<(usize, TableRow)> = rows
        .into_iter()
        .enumerate()
        .map(|(i, r)| (i + 1, r))
        .filter(|(i, _)| s.rows.is_empty() || s.rows.contains(i))
        .collect();
    let run = || -> Vec<TableEntry> {
        selected
            .par_iter()
            .map(|(i, row)| {
                let budget = s.budget.unwrap_or(Duration::from_secs(row.budget_secs));
                run_table_row(*i, row, s.seed, budget, s.order)
            })
            .collect()
    };
    match s.jobs {
        Some(n) => rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build().expect("thread pool").install(run),
        None => run(),
    }
}

pub fn cmd_tables(s: &TableSettings) -> Outcome {
    let entries = tables(s);
    let out = match s.format {
        OutputFormat::Report => to_sorted_json(&serde_json::json!({
            "command": "tables",
            "table": match s.kind { TableKind::GeneralSur => "gensur", TableKind::Submodels => "submodels" },
            "seed": s.seed,
            "rows": entries,
        })),
        OutputFormat::Tsv => {
            let mut out =
                String::from("row\tpattern\tdim\tdegree\texpected_dim\texpected_degree\tmatch\truntime_secs\tstatus\n");
            for e in &entries {
                let opt = |v: Option<String>| v.unwrap_or_else(|| "NA".into());
                out.push_str(&format!(
                    "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\n",
                    e.row,
                    e.pattern,
                    opt(e.dimension.map(|d| d.to_string())),
                    opt(e.degree.map(|d| d.to_string())),
                    e.expected_dimension,
                    e.expected_degree,
                    opt(e.matches.map(|m| m.to_string())),
                    format_g(e.runtime_secs, 10),
                    e.status
                ));
            }
            out
        }
    };
    Outcome::ok(out)
}
