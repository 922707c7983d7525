#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::Command;

use serde_json::Value;
use surroots::{Dataset, SparsityPattern};
use surroots_cli::io::{DataFile, ModelFile};

pub fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

pub struct Run {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn surroots(args: &[&str]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_surroots")).args(args).output().expect("binary runs");
    Run {
        code: out.status.code().expect("exit code"),
        stdout: String::from_utf8(out.stdout).expect("utf-8 stdout"),
        stderr: String::from_utf8(out.stderr).expect("utf-8 stderr"),
    }
}

pub fn validator() -> jsonschema::Validator {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("schema/report.schema.json");
    let schema: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    jsonschema::validator_for(&schema).expect("schema compiles")
}

pub fn assert_valid(text: &str) -> Value {
    let v: Value = serde_json::from_str(text).expect("output is JSON");
    let validator = validator();
    let errors: Vec<String> = validator.iter_errors(&v).map(|e| e.to_string()).collect();
    assert!(errors.is_empty(), "schema violations: {errors:#?}");
    v
}

pub fn write_model(dir: &Path, name: &str, pattern: &SparsityPattern) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, serde_json::to_string(&ModelFile::from_pattern(pattern)).unwrap()).unwrap();
    path
}

pub fn write_data(dir: &Path, name: &str, data: &Dataset) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, serde_json::to_string(&DataFile::from_dataset(data)).unwrap()).unwrap();
    path
}

pub fn s(p: &Path) -> &str {
    p.to_str().expect("utf-8 path")
}
