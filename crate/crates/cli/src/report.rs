//! The analysis report and its deterministic JSON rendering.

use std::collections::BTreeMap;
use std::time::Duration;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use surroots::likelihood::StationaryPoint;
use surroots::pipeline::{Analysis, StageTimings};
use surroots::zerosolve::{ComplexPoint, SolutionSet};
use surroots::{Dataset, GroebnerResult, SparsityPattern};

use crate::io::ModelFile;

pub const REPORT_VERSION: u32 = 1;

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct DataDigest {
    pub responses: usize,
    pub covariates: usize,
    pub subjects: usize,
    /// SHA-256 of the canonical text of X and Y (reduced fractions).
    pub sha256: String,
}

impl DataDigest {
    pub fn of(d: &Dataset) -> Self {
        let mut h = Sha256::new();
        for (tag, rows) in [("X", d.x()), ("Y", d.y())] {
            h.update(tag.as_bytes());
            for row in rows {
                let line: Vec<String> = row.iter().map(|v| v.to_string()).collect();
                h.update(line.join(",").as_bytes());
                h.update(b"\n");
            }
        }
        let hex: String = h.finalize().iter().map(|b| format!("{b:02x}")).collect();
        DataDigest { responses: d.responses(), covariates: d.covariates(), subjects: d.subjects(), sha256: hex }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct BasisSummary {
    pub order: String,
    pub elements: usize,
    pub leading_terms: Vec<String>,
    /// Full basis, only when requested.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub polynomials: Option<Vec<String>>,
}

impl BasisSummary {
    pub fn of(gb: &GroebnerResult, names: &[String], full: bool) -> Self {
        let order = match gb.order().kind() {
            surroots::OrderKind::Lex => "lex",
            surroots::OrderKind::GrevLex => "grevlex",
        };
        BasisSummary {
            order: order.into(),
            elements: gb.basis().len(),
            leading_terms: gb.leading_monomials().iter().map(|m| m.display_with(names).to_string()).collect(),
            polynomials: full
                .then(|| gb.basis().iter().map(|p| p.display_ordered(names, gb.order()).to_string()).collect()),
        }
    }
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize, PartialEq)]
pub struct ComplexValue {
    pub re: f64,
    pub im: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct SolutionEntry {
    pub coordinates: Vec<ComplexValue>,
    pub real: bool,
    pub multiplicity: usize,
    pub residuals: Vec<f64>,
    pub verified: bool,
    pub newton_correction: Option<f64>,
}

impl SolutionEntry {
    fn of(p: &ComplexPoint, real_tol: f64) -> Self {
        SolutionEntry {
            coordinates: p.coordinates.iter().map(|z| ComplexValue { re: z.re, im: z.im }).collect(),
            real: p.is_real(real_tol),
            multiplicity: p.multiplicity_hint,
            residuals: p.residuals.clone(),
            verified: p.verified,
            newton_correction: p.newton_correction,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct SolutionSummary {
    pub count: usize,
    pub real_count: usize,
    pub all_real: bool,
    pub shape_position: bool,
    pub precision_bits: u32,
    pub points: Vec<SolutionEntry>,
}

impl SolutionSummary {
    pub fn of(s: &SolutionSet, real_tol: f64) -> Self {
        let points: Vec<SolutionEntry> = s.points.iter().map(|p| SolutionEntry::of(p, real_tol)).collect();
        SolutionSummary {
            count: points.len(),
            real_count: points.iter().filter(|p| p.real).count(),
            all_real: s.all_real,
            shape_position: s.shape_position,
            precision_bits: s.precision_bits,
            points,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct StationaryEntry {
    pub beta: BTreeMap<String, f64>,
    pub sigma: Vec<Vec<f64>>,
    pub sigma_positive_definite: bool,
    pub log_likelihood: f64,
    pub profile_value: f64,
    pub objective_g: f64,
    pub classification: String,
    pub is_global_max: bool,
}

impl StationaryEntry {
    pub fn of(p: &StationaryPoint, names: &[String]) -> Self {
        StationaryEntry {
            beta: names.iter().cloned().zip(p.beta.0.iter().copied()).collect(),
            sigma: p.sigma.rows(),
            sigma_positive_definite: p.sigma.positive_definite,
            log_likelihood: p.eval.log_likelihood,
            profile_value: p.eval.profile_value,
            objective_g: p.eval.objective_g,
            classification: p.classification.as_str().into(),
            is_global_max: p.is_global_max,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct Timings {
    pub objective_secs: f64,
    pub groebner_secs: f64,
    pub lex_secs: f64,
    pub solve_secs: f64,
    pub likelihood_secs: f64,
}

impl From<&StageTimings> for Timings {
    fn from(t: &StageTimings) -> Self {
        let s = |d: Duration| d.as_secs_f64();
        Timings {
            objective_secs: s(t.objective),
            groebner_secs: s(t.groebner),
            lex_secs: s(t.lex),
            solve_secs: s(t.solve),
            likelihood_secs: s(t.likelihood),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct IglsSummary {
    pub beta: BTreeMap<String, f64>,
    pub sigma: Vec<Vec<f64>>,
    pub iterations: usize,
    pub converged: bool,
    pub log_likelihood: Option<f64>,
    /// `max_k |∂G/∂β_k| · (1 + |β_k|) / G` at the estimate.
    pub relative_gradient: Option<f64>,
}

/// Everything a subcommand reports. Optional sections are omitted when
/// the command does not compute them.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct AnalysisReport {
    pub version: u32,
    pub command: String,
    pub status: String,
    pub model: ModelFile,
    pub parameters: Vec<String>,
    pub data: DataDigest,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dimension: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degree: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub basis: Option<BasisSummary>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lex_basis: Option<BasisSummary>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub solutions: Option<SolutionSummary>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stationary_points: Option<Vec<StationaryEntry>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub igls: Option<IglsSummary>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timings: Option<Timings>,
    pub warnings: Vec<String>,
}

impl AnalysisReport {
    pub fn new(command: &str, pattern: &SparsityPattern, data: &Dataset) -> Self {
        AnalysisReport {
            version: REPORT_VERSION,
            command: command.into(),
            status: "ok".into(),
            model: ModelFile::from_pattern(pattern),
            parameters: pattern.param_names(),
            data: DataDigest::of(data),
            dimension: None,
            degree: None,
            basis: None,
            lex_basis: None,
            solutions: None,
            stationary_points: None,
            igls: None,
            timings: None,
            warnings: Vec::new(),
        }
    }

    pub fn fill(&mut self, a: &Analysis, real_tol: f64, full_basis: bool, timings: bool) {
        let names = self.parameters.clone();
        self.dimension = Some(a.dimension());
        self.degree = Some(a.degree());
        self.basis = Some(BasisSummary::of(&a.basis, &names, full_basis));
        if let Some(lex) = &a.lex_basis {
            self.lex_basis = Some(BasisSummary::of(lex, &names, full_basis));
        }
        if let Some(s) = &a.solutions {
            self.solutions = Some(SolutionSummary::of(s, real_tol));
            self.stationary_points = Some(a.stationary.iter().map(|p| StationaryEntry::of(p, &names)).collect());
            self.warnings.extend(s.warnings.iter().cloned());
        }
        for (root, err) in &a.rejected {
            self.warnings.push(format!("real root {root:?} rejected: {err}"));
        }
        if timings {
            self.timings = Some(Timings::from(&a.timings));
        }
    }

    /// Pretty JSON with object keys sorted.
    pub fn to_json(&self) -> String {
        to_sorted_json(self)
    }
}

/// Pretty JSON with object keys sorted, ending in a newline.
pub fn to_sorted_json<T: Serialize>(value: &T) -> String {
    // serde_json's Map is ordered by key unless `preserve_order` is enabled.
    let v = serde_json::to_value(value).expect("report is serializable");
    let mut s = serde_json::to_string_pretty(&v).expect("value is serializable");
    s.push('\n');
    s
}
