//! Discrete estimators for C^0, Hoelder, Besov and Sobolev-Slobodeckij
//! seminorms, and ladder-regression exponent estimates.
//!
//! The sup over point pairs is approximated by a seeded sample of grid-aligned
//! pairs at dyadic separations; displacement vectors are drawn by rejection
//! from the integer shell of each rung, so every pair's separation is exact.

use crate::error::{LabError, Result};
use crate::field::{SampleField, SpectralField};
use crate::grid::GridSpec;
use crate::prng::SplitMix64;
use crate::scaling::{fit_loglog, LogLogFit, Rung};
use serde::{Deserialize, Serialize};

/// Seeded sample of point pairs at dyadic separations.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SamplePairLadder {
    /// Target separations, every one in [2h, pi].
    pub separations: Vec<f64>,
    pub pairs_per_separation: usize,
    pub directions_per_separation: usize,
    pub seed: u64,
}

impl SamplePairLadder {
    /// Dyadic rungs 2h, 4h, ... capped at `max_sep` (and the half period).
    pub fn dyadic(grid: GridSpec, max_sep: f64, seed: u64) -> Self {
        let h = grid.spacing();
        let cap = max_sep.min(std::f64::consts::PI);
        let mut separations = Vec::new();
        let mut r = 2.0 * h;
        while r <= cap + 1e-12 {
            separations.push(r);
            r *= 2.0;
        }
        Self { separations, pairs_per_separation: 4096, directions_per_separation: 48, seed }
    }

    pub fn validate(&self, grid: GridSpec) -> Result<()> {
        let h = grid.spacing();
        for &s in &self.separations {
            if s < 2.0 * h - 1e-12 {
                return Err(LabError::SeparationBelowFloor(s, 2.0 * h));
            }
            if s > std::f64::consts::PI + 1e-12 {
                return Err(LabError::InvalidParameter(format!(
                    "separation {s} beyond the half period"
                )));
            }
        }
        Ok(())
    }
}

/// Per-rung increment statistics produced by one ladder pass.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RungStats {
    /// Mean realized separation of the sampled pairs.
    pub separation: f64,
    pub median_increment: f64,
    pub max_increment: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HolderEstimate {
    pub theta: f64,
    pub seminorm: f64,
    pub rungs: Vec<RungStats>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExponentFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub separations_used: Vec<f64>,
}

/// Integer displacement with |m| within +-1/2 of `target_len`, by rejection.
fn draw_shell_vector(rng: &mut SplitMix64, target_len: usize) -> ([i64; 3], f64) {
    let tl = target_len as i64;
    let lo2 = (target_len as f64 - 0.5) * (target_len as f64 - 0.5);
    let hi2 = (target_len as f64 + 0.5) * (target_len as f64 + 0.5);
    loop {
        let m = [
            rng.next_range_i64(-tl - 1, tl + 1),
            rng.next_range_i64(-tl - 1, tl + 1),
            rng.next_range_i64(-tl - 1, tl + 1),
        ];
        let m2 = (m[0] * m[0] + m[1] * m[1] + m[2] * m[2]) as f64;
        if m2 >= lo2 && m2 <= hi2 {
            return (m, m2.sqrt());
        }
    }
}

/// Collect increment magnitudes per rung. Shared engine for the estimators.
pub fn ladder_increments(f: &SampleField, ladder: &SamplePairLadder) -> Result<Vec<RungStats>> {
    ladder.validate(f.grid())?;
    let grid = f.grid();
    let n = grid.n();
    let h = grid.spacing();
    let mut rng = SplitMix64::new(ladder.seed);
    let mut out = Vec::with_capacity(ladder.separations.len());
    for &sep in &ladder.separations {
        let target = (sep / h).round() as usize;
        let dirs = ladder.directions_per_separation.max(1);
        let per_dir = (ladder.pairs_per_separation / dirs).max(1);
        let mut incs: Vec<f64> = Vec::with_capacity(dirs * per_dir);
        let mut sep_sum = 0.0;
        for _ in 0..dirs {
            let (m, len) = draw_shell_vector(&mut rng, target);
            sep_sum += len * h;
            let wrapped = [
                (m[0].rem_euclid(n as i64)) as usize,
                (m[1].rem_euclid(n as i64)) as usize,
                (m[2].rem_euclid(n as i64)) as usize,
            ];
            for _ in 0..per_dir {
                let ix = rng.next_below(n as u64) as usize;
                let iy = rng.next_below(n as u64) as usize;
                let iz = rng.next_below(n as u64) as usize;
                let a = grid.flat(ix, iy, iz);
                let b = grid.flat(
                    (ix + wrapped[0]) % n,
                    (iy + wrapped[1]) % n,
                    (iz + wrapped[2]) % n,
                );
                let mut d2 = 0.0;
                for c in f.components() {
                    let d = c[a] - c[b];
                    d2 += d * d;
                }
                incs.push(d2.sqrt());
            }
        }
        incs.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let median = incs[incs.len() / 2];
        let max = *incs.last().unwrap();
        out.push(RungStats {
            separation: sep_sum / dirs as f64,
            median_increment: median,
            max_increment: max,
        });
    }
    Ok(out)
}

/// sup over grid samples of the pointwise magnitude.
pub fn c0_norm(f: &SampleField) -> f64 {
    f.max_abs()
}

/// C^1 seminorm: max over the three spectral partials' sample sup norms.
pub fn c1_seminorm(f: &SpectralField) -> Result<f64> {
    let grid = f.grid();
    let n = grid.n();
    let mut best = 0.0f64;
    for axis in 0..3 {
        let mut df = f.clone();
        for ci in 0..f.rank().components() {
            let c = df.comp_mut(ci);
            for (flat, kx, ky, kz) in grid.iter_wavevectors() {
                let (ix, iy, iz) = (flat / (n * n), (flat / n) % n, flat % n);
                if grid.touches_nyquist(ix, iy, iz) {
                    c[flat] = num_complex::Complex64::default();
                    continue;
                }
                let k = [kx, ky, kz][axis] as f64;
                c[flat] *= num_complex::Complex64::new(0.0, k);
            }
        }
        best = best.max(df.to_samples()?.max_abs());
    }
    Ok(best)
}

/// Sampled Hoelder seminorm sup |f(x)-f(y)| / |x-y|^theta.
pub fn holder_seminorm(f: &SampleField, theta: f64, ladder: &SamplePairLadder) -> Result<HolderEstimate> {
    let rungs = ladder_increments(f, ladder)?;
    let seminorm = rungs
        .iter()
        .map(|r| r.max_increment / r.separation.powf(theta))
        .fold(0.0, f64::max);
    Ok(HolderEstimate { theta, seminorm, rungs })
}

/// Ladder regression of log median increment against log separation.
pub fn holder_exponent_estimate(f: &SampleField, ladder: &SamplePairLadder) -> Result<ExponentFit> {
    if ladder.separations.len() < 4 {
        return Err(LabError::TooFewRungs { need: 4, got: ladder.separations.len() });
    }
    let rungs = ladder_increments(f, ladder)?;
    let scale = c0_norm(f);
    if rungs.iter().any(|r| r.median_increment <= 1e-14 * scale.max(1e-300)) || scale == 0.0 {
        return Err(LabError::DegenerateField);
    }
    let pts: Vec<Rung> = rungs
        .iter()
        .map(|r| Rung { x: r.separation, value: r.median_increment })
        .collect();
    let LogLogFit { slope, intercept, r_squared, .. } = fit_loglog(&pts)?;
    Ok(ExponentFit {
        slope,
        intercept,
        r_squared,
        separations_used: rungs.iter().map(|r| r.separation).collect(),
    })
}

/// Canonical unsigned lattice directions: axes, face diagonals, space diagonals.
pub const SHIFT_DIRECTIONS: [[i64; 3]; 13] = [
    [1, 0, 0],
    [0, 1, 0],
    [0, 0, 1],
    [1, 1, 0],
    [1, -1, 0],
    [1, 0, 1],
    [1, 0, -1],
    [0, 1, 1],
    [0, 1, -1],
    [1, 1, 1],
    [1, 1, -1],
    [1, -1, 1],
    [-1, 1, 1],
];

/// Besov seminorm sup_y ||f(.+y) - f||_{L^p} / |y|^theta over a dyadic shift set,
/// with exact spectral shifts.
pub fn besov_seminorm(f: &SpectralField, theta: f64, p: f64) -> Result<f64> {
    if ![1.5, 2.0, 3.0].contains(&p) {
        return Err(LabError::InvalidParameter(format!(
            "besov estimator supports p in {{3/2, 2, 3}}, got {p}"
        )));
    }
    let grid = f.grid();
    let h = grid.spacing();
    let base = f.to_samples()?;
    let mut best = 0.0f64;
    let mut r = 2.0 * h;
    while r <= std::f64::consts::FRAC_PI_2 + 1e-12 {
        for dir in SHIFT_DIRECTIONS {
            let norm = ((dir[0] * dir[0] + dir[1] * dir[1] + dir[2] * dir[2]) as f64).sqrt();
            let y = [
                r * dir[0] as f64 / norm,
                r * dir[1] as f64 / norm,
                r * dir[2] as f64 / norm,
            ];
            let shifted = f.shift(y).to_samples()?;
            let mut acc = 0.0f64;
            let len = grid.len() as f64;
            for idx in 0..grid.len() {
                let mut d2 = 0.0;
                for (cs, cb) in shifted.components().iter().zip(base.components().iter()) {
                    let d = cs[idx] - cb[idx];
                    d2 += d * d;
                }
                acc += d2.sqrt().powf(p);
            }
            let lp = (crate::grid::TWO_PI.powi(3) * acc / len).powf(1.0 / p);
            best = best.max(lp / r.powf(theta));
        }
        r *= 2.0;
    }
    Ok(best)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SlobodeckijEstimate {
    pub value: f64,
    pub std_error: f64,
    pub samples: usize,
}

/// Monte-Carlo Sobolev-Slobodeckij seminorm [f]_{W^{theta,p}} with stratified
/// dyadic separations; p = 3 (the estimator the energy experiments use).
pub fn sobolev_slobodeckij(
    f: &SampleField,
    theta: f64,
    p: f64,
    samples_per_stratum: usize,
    seed: u64,
) -> Result<SlobodeckijEstimate> {
    if p != 3.0 {
        return Err(LabError::InvalidParameter(format!("estimator pins p = 3, got {p}")));
    }
    if samples_per_stratum < 64 {
        return Err(LabError::SampleBudget(samples_per_stratum));
    }
    let grid = f.grid();
    let n = grid.n() as i64;
    let h = grid.spacing();
    let vol = crate::grid::TWO_PI.powi(3);
    let mut rng = SplitMix64::new(seed);
    let mut total = 0.0f64;
    let mut var_total = 0.0f64;
    let mut used = 0usize;

    // dyadic strata in lattice length: [L, 2L), L = 2, 4, ...
    let mut stratum_lo = 2i64;
    while stratum_lo < n / 2 {
        let stratum_hi = (2 * stratum_lo).min(n / 2);
        let cube = 2 * stratum_hi + 1;
        let lattice_count = (cube * cube * cube) as f64;
        let mut vals = Vec::with_capacity(samples_per_stratum);
        for _ in 0..samples_per_stratum {
            let m = [
                rng.next_range_i64(-stratum_hi, stratum_hi),
                rng.next_range_i64(-stratum_hi, stratum_hi),
                rng.next_range_i64(-stratum_hi, stratum_hi),
            ];
            let m2 = m[0] * m[0] + m[1] * m[1] + m[2] * m[2];
            let lo2 = stratum_lo * stratum_lo;
            let hi2 = stratum_hi * stratum_hi;
            if m2 < lo2 || m2 >= hi2 {
                vals.push(0.0);
                continue;
            }
            let ix = rng.next_below(grid.n() as u64) as usize;
            let iy = rng.next_below(grid.n() as u64) as usize;
            let iz = rng.next_below(grid.n() as u64) as usize;
            let a = grid.flat(ix, iy, iz);
            let b = grid.flat(
                (ix + m[0].rem_euclid(n) as usize) % grid.n(),
                (iy + m[1].rem_euclid(n) as usize) % grid.n(),
                (iz + m[2].rem_euclid(n) as usize) % grid.n(),
            );
            let mut d2 = 0.0;
            for c in f.components() {
                let d = c[a] - c[b];
                d2 += d * d;
            }
            let z = (m2 as f64).sqrt() * h;
            vals.push(d2.sqrt().powf(p) / z.powf(theta * p + 3.0));
        }
        let mean = vals.iter().sum::<f64>() / vals.len() as f64;
        let var = vals.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>()
            / (vals.len().max(2) - 1) as f64;
        let weight = vol * h.powi(3) * lattice_count;
        total += weight * mean;
        var_total += (weight * weight) * var / vals.len() as f64;
        used += vals.len();
        stratum_lo = stratum_hi;
        if stratum_hi >= n / 2 {
            break;
        }
    }
    let value = total.max(0.0).powf(1.0 / p);
    // delta-method propagation to the p-th root
    let std_error = if value > 0.0 {
        var_total.sqrt() / (p * total.max(1e-300).powf(1.0 - 1.0 / p))
    } else {
        0.0
    };
    Ok(SlobodeckijEstimate { value, std_error, samples: used })
}
