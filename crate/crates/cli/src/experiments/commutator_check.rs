//! Exact two-mode oracle for the bilinear fractional commutator.

use super::util;
use crate::config::Config;
use crate::report::Report;
use holderlab_core::field::t2;
use holderlab_core::fraclap::commutator_t;
use holderlab_core::prng::SplitMix64;
use holderlab_core::{Rank, Result, SpectralField};
use holderlab_core::Complex64;

pub fn run(cfg: &Config, seed: u64, report: &mut Report) -> Result<()> {
    let grid = util::grid(cfg)?;
    let alpha = cfg.fraclap.alpha;
    let mut rng = SplitMix64::new(seed);
    let band = (grid.n() as i64 / 6).max(2);
    let mut worst = 0.0f64;
    let pairs = 50;
    for _ in 0..pairs {
        let draw = |rng: &mut SplitMix64| loop {
            let k = [
                rng.next_range_i64(-band, band),
                rng.next_range_i64(-band, band),
                rng.next_range_i64(-band, band),
            ];
            if k != [0, 0, 0] {
                return k;
            }
        };
        let k = draw(&mut rng);
        let l = draw(&mut rng);
        let a = Complex64::new(rng.next_f64() - 0.5, rng.next_f64() - 0.5);
        let b = Complex64::new(rng.next_f64() - 0.5, rng.next_f64() - 0.5);
        let ci = (rng.next_below(3)) as usize;
        let cj = (rng.next_below(3)) as usize;

        let mut f = SpectralField::zeros(grid, Rank::Vector);
        let mut g = SpectralField::zeros(grid, Rank::Vector);
        f.set_hermitian(false);
        g.set_hermitian(false);
        f.comp_mut(ci)[grid.flat(grid.index_of(k[0]), grid.index_of(k[1]), grid.index_of(k[2]))] = a;
        g.comp_mut(cj)[grid.flat(grid.index_of(l[0]), grid.index_of(l[1]), grid.index_of(l[2]))] = b;
        let t = commutator_t(&f, &g, alpha)?;

        let k2 = (k[0] * k[0] + k[1] * k[1] + k[2] * k[2]) as f64;
        let l2 = (l[0] * l[0] + l[1] * l[1] + l[2] * l[2]) as f64;
        let kl = [k[0] + l[0], k[1] + l[1], k[2] + l[2]];
        let kl2 = (kl[0] * kl[0] + kl[1] * kl[1] + kl[2] * kl[2]) as f64;
        let factor = kl2.powf(alpha) - k2.powf(alpha) - l2.powf(alpha);
        let expect = a * b * factor;
        let at = grid.flat(grid.index_of(kl[0]), grid.index_of(kl[1]), grid.index_of(kl[2]));
        let got = t.comp(t2(ci, cj))[at];
        let scale = (a * b).norm().max(1e-300);
        worst = worst.max((got - expect).norm() / scale);
        // every other coefficient of that component must vanish
        for (i, v) in t.comp(t2(ci, cj)).iter().enumerate() {
            if i != at {
                worst = worst.max(v.norm() / scale);
            }
        }
    }
    report.metric("max_error", worst);
    report.metric("pairs", pairs as f64);
    Ok(())
}
