//! Report assembly: deterministic JSON (timestamp isolated in one field),
//! CSV rung tables, and assertion checking against configured bounds.

use crate::config::{Bound, Config};
use holderlab_core::scaling::Rung;
use serde::Serialize;
use std::collections::BTreeMap;
use std::path::Path;

#[derive(Debug, Clone, Serialize)]
pub struct AssertOutcome {
    pub name: String,
    pub value: f64,
    pub min: Option<f64>,
    pub max: Option<f64>,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub experiment: String,
    pub tool_version: String,
    pub seed: u64,
    /// Wall-clock stamp; the only field excluded from byte comparisons.
    pub timestamp: String,
    pub params: toml::Value,
    pub metrics: BTreeMap<String, f64>,
    pub rungs: Vec<RungRow>,
    pub skipped_rungs: Vec<SkippedRung>,
    pub notes: Vec<String>,
    pub asserts: Vec<AssertOutcome>,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct RungRow {
    pub x: f64,
    pub values: BTreeMap<String, f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SkippedRung {
    pub x: f64,
    pub reason: String,
}

impl Report {
    pub fn new(cfg: &Config, seed: u64) -> Self {
        let params = toml::Value::try_from(cfg).unwrap_or(toml::Value::String("unserializable".into()));
        Self {
            experiment: cfg.experiment.kind.clone(),
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            seed,
            timestamp: now_iso8601(),
            params,
            metrics: BTreeMap::new(),
            rungs: Vec::new(),
            skipped_rungs: Vec::new(),
            notes: Vec::new(),
            asserts: Vec::new(),
            pass: true,
        }
    }

    pub fn metric(&mut self, name: &str, value: f64) {
        self.metrics.insert(name.to_string(), value);
    }

    pub fn note(&mut self, text: impl Into<String>) {
        self.notes.push(text.into());
    }

    pub fn add_rungs(&mut self, name: &str, rungs: &[Rung]) {
        for r in rungs {
            if let Some(row) = self.rungs.iter_mut().find(|row| (row.x - r.x).abs() < 1e-14) {
                row.values.insert(name.to_string(), r.value);
            } else {
                let mut values = BTreeMap::new();
                values.insert(name.to_string(), r.value);
                self.rungs.push(RungRow { x: r.x, values });
            }
        }
        self.rungs.sort_by(|a, b| b.x.partial_cmp(&a.x).unwrap());
    }

    pub fn check_asserts(&mut self, bounds: &BTreeMap<String, Bound>) {
        for (name, bound) in bounds {
            let value = self.metrics.get(name).copied().unwrap_or(f64::NAN);
            let mut pass = value.is_finite();
            if let Some(lo) = bound.min {
                pass &= value >= lo;
            }
            if let Some(hi) = bound.max {
                pass &= value <= hi;
            }
            self.asserts.push(AssertOutcome {
                name: name.clone(),
                value,
                min: bound.min,
                max: bound.max,
                pass,
            });
            self.pass &= pass;
        }
    }

    pub fn write_json(&self, path: &Path) -> std::io::Result<()> {
        let text = serde_json::to_string_pretty(self).expect("report serialization");
        std::fs::write(path, text + "\n")
    }

    pub fn write_csv(&self, path: &Path) -> std::io::Result<()> {
        use std::io::Write;
        let mut cols: Vec<String> = Vec::new();
        for row in &self.rungs {
            for k in row.values.keys() {
                if !cols.contains(k) {
                    cols.push(k.clone());
                }
            }
        }
        cols.sort();
        let mut w = std::io::BufWriter::new(std::fs::File::create(path)?);
        write!(w, "x")?;
        for c in &cols {
            write!(w, ",{c}")?;
        }
        writeln!(w)?;
        for row in &self.rungs {
            write!(w, "{:.17e}", row.x)?;
            for c in &cols {
                match row.values.get(c) {
                    Some(v) => write!(w, ",{v:.17e}")?,
                    None => write!(w, ",")?,
                }
            }
            writeln!(w)?;
        }
        Ok(())
    }
}

fn now_iso8601() -> String {
    let now = std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .unwrap_or_default();
    format!("unix:{}.{:09}", now.as_secs(), now.subsec_nanos())
}
