//! Cross-realization check of the fractional Laplacian: Fourier multiplier
//! against the truncated singular integral, plus the image-doubling
//! convergence probe.

use super::util;
use crate::config::Config;
use crate::report::Report;
use holderlab_core::fraclap::{apply_power, frac_laplacian, FracLaplacianSpec};
use holderlab_core::prng::SplitMix64;
use holderlab_core::{Rank, Result, SpectralField};
use holderlab_core::Complex64;

pub fn band_limited_field(
    grid: holderlab_core::GridSpec,
    band: i64,
    modes: usize,
    seed: u64,
) -> SpectralField {
    let mut f = SpectralField::zeros(grid, Rank::Scalar);
    let mut rng = SplitMix64::new(seed);
    let mut placed = 0;
    while placed < modes {
        let k = [
            rng.next_range_i64(-band, band),
            rng.next_range_i64(-band, band),
            rng.next_range_i64(-band, band),
        ];
        let k2 = k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
        if k2 == 0 || k2 > band * band {
            continue;
        }
        let a = Complex64::new(rng.next_f64() - 0.5, rng.next_f64() - 0.5);
        let ip = grid.flat(grid.index_of(k[0]), grid.index_of(k[1]), grid.index_of(k[2]));
        let im = grid.flat(grid.index_of(-k[0]), grid.index_of(-k[1]), grid.index_of(-k[2]));
        f.comp_mut(0)[ip] += a;
        f.comp_mut(0)[im] += a.conj();
        placed += 1;
    }
    f
}

fn relative_c0_error(a: &SpectralField, b: &SpectralField) -> Result<f64> {
    let d = a.sub(b)?.to_samples()?.max_abs();
    let scale = b.to_samples()?.max_abs();
    Ok(d / scale.max(1e-300))
}

pub fn run(cfg: &Config, seed: u64, report: &mut Report) -> Result<()> {
    let grid = util::grid(cfg)?;
    let f = band_limited_field(grid, cfg.fraclap.band, cfg.fraclap.modes, seed);
    let alpha = cfg.fraclap.alpha;
    let shells = cfg.fraclap.image_shells;

    let reference = apply_power(&f, alpha);
    let si = frac_laplacian(&f, &FracLaplacianSpec::singular(alpha, shells))?;
    let si2 = frac_laplacian(&f, &FracLaplacianSpec::singular(alpha, 2 * shells))?;

    let err = relative_c0_error(&si, &reference)?;
    let err2 = relative_c0_error(&si2, &reference)?;
    report.metric("rel_error", err);
    report.metric("rel_error_doubled_shells", err2);
    report.metric("shell_doubling_ratio", err2 / err.max(1e-300));
    report.note(format!(
        "image shells {shells} -> {}: error {err:.3e} -> {err2:.3e}",
        2 * shells
    ));
    Ok(())
}
