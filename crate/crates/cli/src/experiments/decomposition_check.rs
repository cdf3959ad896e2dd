//! Five-piece closure of mollified pressure increments, with a quadrature
//! refinement probe.

use super::util;
use crate::config::Config;
use crate::report::Report;
use holderlab_core::identities::pressure_decomposition_check;
use holderlab_core::mollify::MollifierSpec;
use holderlab_core::Result;

pub fn run(cfg: &Config, seed: u64, report: &mut Report) -> Result<()> {
    let grid = util::grid(cfg)?;
    let delta = cfg.scan.delta_over_h * grid.spacing();
    let spec = MollifierSpec { delta, quadrature_points_per_axis: cfg.mollifier.quadrature_points };

    let traj = util::simulate(cfg, seed)?;
    let span = cfg.scan.span_snapshots.min(traj.snapshots.len() - 1);
    let fine = pressure_decomposition_check(&traj, spec, 0, span, cfg.scan.stride)?;
    report.metric("relative_residual", fine.relative);
    report.metric("lhs_c0", fine.lhs_norm);
    for (i, t) in fine.term_norms.iter().enumerate() {
        report.metric(&format!("term{}_c0", i + 1), *t);
    }
    // coarsened time quadrature: double the stride
    let coarse = pressure_decomposition_check(&traj, spec, 0, span, cfg.scan.stride * 2)?;
    report.metric("relative_residual_coarse", coarse.relative);
    report.metric(
        "refinement_gain",
        coarse.relative / fine.relative.max(1e-300),
    );
    Ok(())
}
