//! Log-log regression over scale ladders and the report type every scan emits.

use crate::error::{LabError, Result};
use serde::{Deserialize, Serialize};

/// One rung of a scan: abscissa (delta, separation, or |t-s|) and measured value.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct Rung {
    pub x: f64,
    pub value: f64,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct LogLogFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub points_used: usize,
}

/// Ordinary least squares on (ln x, ln y); rungs with nonpositive values are dropped.
pub fn fit_loglog(rungs: &[Rung]) -> Result<LogLogFit> {
    let pts: Vec<(f64, f64)> = rungs
        .iter()
        .filter(|r| r.x > 0.0 && r.value > 0.0 && r.value.is_finite())
        .map(|r| (r.x.ln(), r.value.ln()))
        .collect();
    if pts.len() < 2 {
        return Err(LabError::TooFewRungs { need: 2, got: pts.len() });
    }
    let n = pts.len() as f64;
    let sx: f64 = pts.iter().map(|p| p.0).sum();
    let sy: f64 = pts.iter().map(|p| p.1).sum();
    let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
    let denom = n * sxx - sx * sx;
    if denom.abs() < 1e-300 {
        return Err(LabError::DegenerateField);
    }
    let slope = (n * sxy - sx * sy) / denom;
    let intercept = (sy - slope * sx) / n;
    let mean_y = sy / n;
    let mut ss_res = 0.0;
    let mut ss_tot = 0.0;
    for (x, y) in &pts {
        let yhat = intercept + slope * x;
        ss_res += (y - yhat) * (y - yhat);
        ss_tot += (y - mean_y) * (y - mean_y);
    }
    let r_squared = if ss_tot > 0.0 { (1.0 - ss_res / ss_tot).clamp(0.0, 1.0) } else { 1.0 };
    Ok(LogLogFit { slope, intercept, r_squared, points_used: pts.len() })
}

/// Summary of one scaling experiment; serialized as JSON by the CLI and the
/// pressure-gain scan.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ScalingReport {
    pub experiment: String,
    pub theta_target: Option<f64>,
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub n_seeds: usize,
    pub seed: u64,
    pub rungs: Vec<Rung>,
    /// Rungs requested but refused by resolution floors, with the reason.
    #[serde(default)]
    pub skipped_rungs: Vec<(f64, String)>,
    #[serde(default)]
    pub notes: Vec<String>,
}

impl ScalingReport {
    pub fn from_rungs(experiment: &str, rungs: Vec<Rung>, seed: u64) -> Result<Self> {
        let fit = fit_loglog(&rungs)?;
        Ok(Self {
            experiment: experiment.to_string(),
            theta_target: None,
            slope: fit.slope,
            intercept: fit.intercept,
            r_squared: fit.r_squared,
            n_seeds: 1,
            seed,
            rungs,
            skipped_rungs: Vec::new(),
            notes: Vec::new(),
        })
    }
}
