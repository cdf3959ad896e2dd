use super::util;
use crate::config::Config;
use crate::report::Report;
use holderlab_core::norms::{c0_norm, holder_exponent_estimate};
use holderlab_core::{Rank, Result};
use std::path::Path;

pub fn run(cfg: &Config, seed: u64, out_dir: &Path, report: &mut Report) -> Result<()> {
    let rank = if cfg.field.rank == "vector" { Rank::Vector } else { Rank::Scalar };
    let f = util::rough(cfg, seed, rank)?;
    let samples = f.to_samples()?;
    report.metric("c0_norm", c0_norm(&samples));
    report.metric("round_trip_error", f.round_trip_error()?);
    if rank == Rank::Vector {
        report.metric("relative_divergence", holderlab_core::calculus::relative_divergence(&f)?);
    }
    let ladder = util::ladder(cfg, f.grid(), seed ^ 0xA5A5_5A5A_0F0F_F0F0);
    if ladder.separations.len() >= 4 {
        let fit = holder_exponent_estimate(&samples, &ladder)?;
        report.metric("theta_hat", fit.slope);
        report.metric("theta_hat_r2", fit.r_squared);
    }
    if let Some(name) = &cfg.output.field {
        holderlab_core::snapshot::write_field(&f, &out_dir.join(name))?;
        report.note(format!("field written to {name}"));
    }
    if let Some(name) = &cfg.output.csv {
        holderlab_core::snapshot::export_plane_csv(&f, &out_dir.join(name))?;
    }
    Ok(())
}
