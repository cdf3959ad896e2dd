//! Resolved-scale energy identity: per-step residual and its order in dt.

use super::util;
use crate::config::Config;
use crate::report::Report;
use holderlab_core::identities::mollified_energy_identity;
use holderlab_core::mollify::MollifierSpec;
use holderlab_core::scaling::{fit_loglog, Rung};
use holderlab_core::Result;

pub fn run(cfg: &Config, seed: u64, report: &mut Report) -> Result<()> {
    let grid = util::grid(cfg)?;
    let delta = cfg.scan.delta_over_h * grid.spacing();
    let spec = MollifierSpec { delta, quadrature_points_per_axis: cfg.mollifier.quadrature_points };

    let traj = util::simulate(cfg, seed)?;
    let residuals = mollified_energy_identity(&traj, spec)?;
    let max_rel = residuals.iter().map(|r| r.relative).fold(0.0f64, f64::max);
    report.metric("max_relative_residual", max_rel);
    report.metric("steps_checked", residuals.len() as f64);

    // order in dt: rerun on a short horizon at dt, 2dt, 4dt
    let horizon = (16.0 * cfg.simulate.dt * 4.0).min(cfg.simulate.t_end);
    let mut rungs = Vec::new();
    for mult in [1.0, 2.0, 4.0] {
        let mut c2 = cfg.clone();
        c2.simulate.dt = cfg.simulate.dt * mult;
        c2.simulate.t_end = horizon;
        c2.simulate.snapshot_stride = 1;
        let t = util::simulate(&c2, seed)?;
        let res = mollified_energy_identity(&t, spec)?;
        let m = res.iter().map(|r| r.relative).fold(0.0f64, f64::max);
        rungs.push(Rung { x: c2.simulate.dt, value: m });
    }
    if let Ok(fit) = fit_loglog(&rungs) {
        report.metric("dt_order", fit.slope);
    }
    report.add_rungs("identity_residual_vs_dt", &rungs);
    Ok(())
}
