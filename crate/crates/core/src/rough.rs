//! Synthetic rough fields: lacunary cosine series over dyadic frequency shells.
//!
//! f(x) = amplitude * sum_{j=0..J} 2^{-j theta} sum_{m=1..M} cos(k_{j,m}.x + phi_{j,m})
//! with integer wavevectors drawn uniformly from the shell 2^j <= |k| < 2^{j+1}
//! by rejection sampling. The draw protocol is documented bit-exactly in the
//! README; realizations are a pure function of the seed.

use crate::calculus::leray_project;
use crate::error::{LabError, Result};
use crate::field::{Rank, SpectralField};
use crate::grid::GridSpec;
use crate::prng::SplitMix64;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct RandomFieldSpec {
    /// Target Hoelder exponent in (0, 1).
    pub theta: f64,
    /// Highest dyadic shell index J; shells are [2^j, 2^{j+1}) for j = 0..=J.
    pub octaves: usize,
    /// Modes drawn per shell.
    pub modes_per_octave: usize,
    pub seed: u64,
    pub amplitude: f64,
}

impl RandomFieldSpec {
    pub fn validate(&self, grid: GridSpec) -> Result<()> {
        if !(0.0 < self.theta && self.theta < 1.0) {
            return Err(LabError::InvalidParameter(format!(
                "theta must lie in (0,1), got {}",
                self.theta
            )));
        }
        if self.modes_per_octave == 0 {
            return Err(LabError::InvalidParameter("modes_per_octave must be positive".into()));
        }
        let top = 1usize << self.octaves;
        let limit = grid.n() / 3;
        if top > limit {
            return Err(LabError::BandLimit { top, limit, n: grid.n() });
        }
        Ok(())
    }
}

fn scalar_realization(spec: &RandomFieldSpec, grid: GridSpec, comp_seed: u64) -> Vec<Complex64> {
    let mut rng = SplitMix64::new(comp_seed);
    let mut coeffs = vec![Complex64::default(); grid.len()];
    let kcap = (grid.n() / 2 - 1) as i64;
    for j in 0..=spec.octaves {
        let lo2 = (1i64 << j) * (1i64 << j);
        let hi = 1i64 << (j + 1);
        let hi2 = hi * hi;
        let amp = spec.amplitude * 2f64.powf(-(j as f64) * spec.theta);
        for _ in 0..spec.modes_per_octave {
            let k = loop {
                let kx = rng.next_range_i64(-hi, hi);
                let ky = rng.next_range_i64(-hi, hi);
                let kz = rng.next_range_i64(-hi, hi);
                let k2 = kx * kx + ky * ky + kz * kz;
                if k2 >= lo2 && k2 < hi2 && kx.abs() <= kcap && ky.abs() <= kcap && kz.abs() <= kcap
                {
                    break [kx, ky, kz];
                }
            };
            let phi = 2.0 * std::f64::consts::PI * rng.next_f64();
            let half = Complex64::from_polar(amp / 2.0, phi);
            let ip = grid.flat(grid.index_of(k[0]), grid.index_of(k[1]), grid.index_of(k[2]));
            let im = grid.flat(grid.index_of(-k[0]), grid.index_of(-k[1]), grid.index_of(-k[2]));
            coeffs[ip] += half;
            coeffs[im] += half.conj();
        }
    }
    coeffs
}

/// Deterministic lacunary field; vector output is Leray-projected.
pub fn make_rough_field(spec: &RandomFieldSpec, grid: GridSpec, rank: Rank) -> Result<SpectralField> {
    spec.validate(grid)?;
    let mut master = SplitMix64::new(spec.seed);
    match rank {
        Rank::Scalar => {
            let seed = master.next_u64();
            let comps = vec![scalar_realization(spec, grid, seed)];
            SpectralField::from_components(grid, Rank::Scalar, comps, true)
        }
        Rank::Vector => {
            let comps: Vec<_> = (0..3)
                .map(|_| {
                    let seed = master.next_u64();
                    scalar_realization(spec, grid, seed)
                })
                .collect();
            let raw = SpectralField::from_components(grid, Rank::Vector, comps, true)?;
            leray_project(&raw)
        }
        other => Err(LabError::RankMismatch { expected: "scalar or vector", got: other.name() }),
    }
}
