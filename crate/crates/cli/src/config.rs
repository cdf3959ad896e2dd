//! TOML experiment configuration: a small typed schema with per-experiment
//! sections. Every field has a default, so configs only name what they
//! change; unknown keys are rejected so typos surface as config errors.

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::path::Path;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub experiment: ExperimentSection,
    #[serde(default)]
    pub grid: GridSection,
    #[serde(default)]
    pub field: FieldSection,
    #[serde(default)]
    pub mollifier: MollifierSection,
    #[serde(default)]
    pub fraclap: FraclapSection,
    #[serde(default)]
    pub simulate: SimulateSection,
    #[serde(default)]
    pub ladder: LadderSection,
    #[serde(default)]
    pub scan: ScanSection,
    #[serde(default)]
    pub output: OutputSection,
    /// Named bounds checked against report metrics; any violation exits 1.
    #[serde(default)]
    pub assert: BTreeMap<String, Bound>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSection {
    pub kind: String,
    #[serde(default = "d_seed")]
    pub seed: u64,
}

fn d_seed() -> u64 {
    1
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GridSection {
    pub n: usize,
}

impl Default for GridSection {
    fn default() -> Self {
        Self { n: 32 }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct FieldSection {
    pub theta: f64,
    pub octaves: usize,
    pub modes_per_octave: usize,
    pub amplitude: f64,
    pub rank: String,
}

impl Default for FieldSection {
    fn default() -> Self {
        Self { theta: 0.4, octaves: 3, modes_per_octave: 8, amplitude: 1.0, rank: "scalar".into() }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct MollifierSection {
    pub quadrature_points: usize,
    /// delta = pi * 2^e for each exponent e.
    pub delta_ladder_exponents: Vec<i32>,
}

impl Default for MollifierSection {
    fn default() -> Self {
        Self { quadrature_points: 16, delta_ladder_exponents: vec![-3, -4, -5, -6, -7, -8] }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct FraclapSection {
    pub alpha: f64,
    pub image_shells: usize,
    /// Band limit of the synthetic comparison field.
    pub band: i64,
    pub modes: usize,
}

impl Default for FraclapSection {
    fn default() -> Self {
        Self { alpha: 0.25, image_shells: 3, band: 8, modes: 60 }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SimulateSection {
    pub nu: f64,
    pub alpha: f64,
    pub dt: f64,
    pub t_end: f64,
    pub snapshot_stride: usize,
    /// "abc", "beltrami" (helical k=(1,1,0)), or "rough".
    pub initial: String,
    pub abc: [f64; 3],
    pub beltrami_amplitude: f64,
    pub save_trajectory: bool,
}

impl Default for SimulateSection {
    fn default() -> Self {
        Self {
            nu: 0.1,
            alpha: 0.2,
            dt: 1e-3,
            t_end: 1.0,
            snapshot_stride: 10,
            initial: "abc".into(),
            abc: [1.0, 0.7, 0.4],
            beltrami_amplitude: 1.0,
            save_trajectory: false,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct LadderSection {
    pub pairs: usize,
    pub directions: usize,
    /// Largest separation as a multiple of the grid spacing h (dyadic rungs
    /// 2h, 4h, ... up to this cap).
    pub max_separation_over_h: f64,
}

impl Default for LadderSection {
    fn default() -> Self {
        Self { pairs: 4096, directions: 48, max_separation_over_h: 16.0 }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ScanSection {
    pub theta: f64,
    pub seeds: usize,
    /// Mollifier scale for identity/decomposition checks, in units of h.
    pub delta_over_h: f64,
    /// Decomposition: snapshot span and quadrature stride.
    pub span_snapshots: usize,
    pub stride: usize,
    /// Energy scan: check the total energy (nu > 0) instead of kinetic only.
    pub total_energy: bool,
}

impl Default for ScanSection {
    fn default() -> Self {
        Self { theta: 0.4, seeds: 5, delta_over_h: 8.0, span_snapshots: 4, stride: 1, total_energy: false }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputSection {
    pub json: String,
    pub csv: Option<String>,
    pub svg: Option<String>,
    pub field: Option<String>,
}

impl Default for OutputSection {
    fn default() -> Self {
        Self { json: "report.json".into(), csv: None, svg: None, field: None }
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Bound {
    pub min: Option<f64>,
    pub max: Option<f64>,
}

pub const EXPERIMENTS: &[&str] = &[
    "gen-field",
    "mollify-scan",
    "fraclap-check",
    "commutator-check",
    "pressure-scan",
    "extend-check",
    "simulate",
    "energy-scan",
    "identity-check",
    "decomposition-check",
];

impl Config {
    pub fn load(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
        let cfg: Config = toml::from_str(&text).map_err(|e| format!("config parse error: {e}"))?;
        if !EXPERIMENTS.contains(&cfg.experiment.kind.as_str()) {
            return Err(format!(
                "unknown experiment kind '{}'; expected one of {:?}",
                cfg.experiment.kind, EXPERIMENTS
            ));
        }
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<(), String> {
        if self.grid.n < 8 || self.grid.n % 2 != 0 {
            return Err(format!("grid.n must be even and >= 8, got {}", self.grid.n));
        }
        if !(self.field.theta > 0.0 && self.field.theta < 1.0) {
            return Err(format!("field.theta must be in (0,1), got {}", self.field.theta));
        }
        if !["scalar", "vector"].contains(&self.field.rank.as_str()) {
            return Err(format!("field.rank must be scalar or vector, got {}", self.field.rank));
        }
        if self.simulate.dt <= 0.0 || self.simulate.t_end <= 0.0 {
            return Err("simulate.dt and simulate.t_end must be positive".into());
        }
        if !(self.simulate.alpha > 0.0 && self.simulate.alpha < 0.5) {
            return Err(format!("simulate.alpha must be in (0, 1/2), got {}", self.simulate.alpha));
        }
        if self.simulate.nu < 0.0 {
            return Err("simulate.nu must be nonnegative".into());
        }
        if !["abc", "beltrami", "rough"].contains(&self.simulate.initial.as_str()) {
            return Err(format!(
                "simulate.initial must be abc|beltrami|rough, got {}",
                self.simulate.initial
            ));
        }
        if !(self.fraclap.alpha > 0.0 && self.fraclap.alpha < 0.5) {
            return Err(format!("fraclap.alpha must be in (0, 1/2), got {}", self.fraclap.alpha));
        }
        if self.ladder.pairs == 0 || self.ladder.directions == 0 {
            return Err("ladder.pairs and ladder.directions must be positive".into());
        }
        Ok(())
    }
}
