//! Model and data file formats.
//!
//! Model: `{"R": 2, "C": 2, "pattern": [[1,1],[2,2]], "restrictions": [[[1,1],[2,2]]]}`
//! with 1-based pairs. Data: `{"X": [[...], ...], "Y": [[...], ...]}` with
//! entries as decimal strings (or JSON numbers), parsed exactly.

use std::path::Path;

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};
use serde_json::Value;
use surroots::{parse_rational, Dataset, Rational, SparsityPattern};

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct ModelFile {
    #[serde(rename = "R")]
    pub responses: usize,
    #[serde(rename = "C")]
    pub covariates: usize,
    pub pattern: Vec<[usize; 2]>,
    #[serde(default)]
    pub restrictions: Vec<Vec<[usize; 2]>>,
}

impl ModelFile {
    pub fn from_pattern(p: &SparsityPattern) -> Self {
        ModelFile {
            responses: p.responses(),
            covariates: p.covariates(),
            pattern: p.entries().iter().map(|&(r, c)| [r + 1, c + 1]).collect(),
            restrictions: p.restriction_groups().into_iter().map(|g| g.into_iter().map(|(r, c)| [r, c]).collect()).collect(),
        }
    }

    pub fn to_pattern(&self) -> Result<SparsityPattern> {
        let entries: Vec<(usize, usize)> = self.pattern.iter().map(|p| (p[0], p[1])).collect();
        let groups: Vec<Vec<(usize, usize)>> =
            self.restrictions.iter().map(|g| g.iter().map(|p| (p[0], p[1])).collect()).collect();
        let pattern = SparsityPattern::new(self.responses, self.covariates, &entries)?.with_restrictions(&groups)?;
        Ok(pattern)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct DataFile {
    #[serde(rename = "X")]
    pub x: Vec<Vec<Value>>,
    #[serde(rename = "Y")]
    pub y: Vec<Vec<Value>>,
}

fn entry(v: &Value) -> Result<Rational> {
    let text = match v {
        Value::String(s) => s.clone(),
        Value::Number(n) => n.to_string(),
        other => bail!("data entries must be strings or numbers, got {other}"),
    };
    Ok(parse_rational(&text)?)
}

fn render(q: &Rational) -> Value {
    Value::String(q.to_string())
}

impl DataFile {
    pub fn from_dataset(d: &Dataset) -> Self {
        let conv = |rows: &[Vec<Rational>]| rows.iter().map(|r| r.iter().map(render).collect()).collect();
        DataFile { x: conv(d.x()), y: conv(d.y()) }
    }

    pub fn to_dataset(&self) -> Result<Dataset> {
        let conv = |rows: &[Vec<Value>]| -> Result<Vec<Vec<Rational>>> {
            rows.iter().map(|r| r.iter().map(entry).collect()).collect()
        };
        Ok(Dataset::new(conv(&self.x)?, conv(&self.y)?)?)
    }
}

pub fn read_model(path: &Path) -> Result<SparsityPattern> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading model file {}", path.display()))?;
    let model: ModelFile =
        serde_json::from_str(&text).with_context(|| format!("parsing model file {}", path.display()))?;
    model.to_pattern()
}

pub fn read_data(path: &Path) -> Result<Dataset> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading data file {}", path.display()))?;
    let data: DataFile = serde_json::from_str(&text).with_context(|| format!("parsing data file {}", path.display()))?;
    data.to_dataset()
}
