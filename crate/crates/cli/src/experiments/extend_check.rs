//! Compact divergence-free extension checks: identity on the inner ball,
//! divergence quality, support confinement, and seminorm control.

use super::util;
use crate::config::Config;
use crate::report::Report;
use holderlab_core::extension::{
    box_divergence_quality, box_pair_seminorm, extend_divfree, CUTOFF_INNER, CUTOFF_OUTER,
};
use holderlab_core::norms::{holder_seminorm, SamplePairLadder};
use holderlab_core::{Rank, Result};

pub fn run(cfg: &Config, seed: u64, report: &mut Report) -> Result<()> {
    let grid = util::grid(cfg)?;
    let mut worst_identity = 0.0f64;
    let mut worst_div = 0.0f64;
    let mut worst_outside = 0.0f64;
    let mut worst_ratio = 0.0f64;
    for i in 0..cfg.scan.seeds as u64 {
        let u = util::rough(cfg, seed.wrapping_add(i), Rank::Vector)?;
        let ext = extend_divfree(&u)?;
        let f = &ext.extended_field;
        let nb = f.nb();
        let scale = f.max_abs().max(1e-300);

        // identity on B6 against the periodic tiling, confinement outside B12
        let us = u.to_samples()?;
        let n = grid.n();
        for ix in 0..nb {
            for iy in 0..nb {
                for iz in 0..nb {
                    let (x, y, z) = (f.coord(ix), f.coord(iy), f.coord(iz));
                    let r = (x * x + y * y + z * z).sqrt();
                    let idx = f.flat(ix, iy, iz);
                    if r <= CUTOFF_INNER {
                        for c in 0..3 {
                            let torus = us.comp(c)[grid.flat(ix % n, iy % n, iz % n)];
                            worst_identity =
                                worst_identity.max((f.comps[c][idx] - torus).abs() / scale);
                        }
                    } else if r >= CUTOFF_OUTER {
                        for c in 0..3 {
                            worst_outside = worst_outside.max(f.comps[c][idx].abs() / scale);
                        }
                    }
                }
            }
        }

        let (dmax, gmax) = box_divergence_quality(f);
        worst_div = worst_div.max(dmax / gmax.max(1e-300));

        let theta = cfg.field.theta;
        let torus_ladder = SamplePairLadder::dyadic(grid, std::f64::consts::FRAC_PI_2, seed ^ 0x99);
        let sem_torus =
            holder_seminorm(&us, theta, &torus_ladder)?.seminorm;
        let sem_box = box_pair_seminorm(f, theta, grid.n() / 4, 4096, seed ^ 0x77);
        worst_ratio = worst_ratio.max(sem_box / sem_torus.max(1e-300));
    }
    report.metric("max_identity_error_b6", worst_identity);
    report.metric("max_divergence_ratio", worst_div);
    report.metric("max_outside_b12", worst_outside);
    report.metric("max_seminorm_ratio", worst_ratio);
    report.metric("n_seeds", cfg.scan.seeds as f64);
    Ok(())
}
