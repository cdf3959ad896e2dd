//! Time integration with energy ledger output and decay/conservation probes.

use super::util;
use crate::config::Config;
use crate::report::Report;
use holderlab_core::calculus::relative_divergence;
use holderlab_core::dynamics::energy_ledger;
use holderlab_core::Result;
use std::path::Path;

pub fn run(cfg: &Config, seed: u64, out_dir: &Path, report: &mut Report) -> Result<()> {
    let traj = util::simulate(cfg, seed)?;
    let ledger = energy_ledger(&traj);
    let e0 = ledger.kinetic[0];
    let e_end = *ledger.kinetic.last().unwrap();
    let t_end = *ledger.times.last().unwrap();
    report.metric("e_initial", e0);
    report.metric("e_final", e_end);
    report.metric("e_ratio", e_end / e0.max(1e-300));
    report.metric("snapshots", traj.snapshots.len() as f64);

    // analytic decay oracle for curl-eigen initial data
    match cfg.simulate.initial.as_str() {
        "abc" => {
            // |k| = 1: e(t) = e0 exp(-2 nu t)
            let expect = (-2.0 * cfg.simulate.nu * t_end).exp();
            report.metric("expected_e_ratio", expect);
            report.metric("decay_error", (e_end / e0 - expect).abs());
        }
        "beltrami" => {
            let lam = 2f64.powf(cfg.simulate.alpha);
            let expect = (-2.0 * cfg.simulate.nu * lam * t_end).exp();
            report.metric("expected_e_ratio", expect);
            report.metric("decay_error", (e_end / e0 - expect).abs());
        }
        _ => {}
    }
    if cfg.simulate.nu == 0.0 {
        let drift = ledger
            .kinetic
            .iter()
            .map(|e| (e - e0).abs())
            .fold(0.0f64, f64::max);
        report.metric("conservation_drift", drift / e0.max(1e-300));
    } else {
        let etot0 = ledger.total[0];
        let drift = ledger
            .total
            .iter()
            .map(|e| (e - etot0).abs())
            .fold(0.0f64, f64::max);
        report.metric("total_energy_drift", drift / etot0.max(1e-300));
    }
    let mut div_max = 0.0f64;
    for s in &traj.snapshots {
        div_max = div_max.max(relative_divergence(s)?);
    }
    report.metric("max_relative_divergence", div_max);

    if let Some(name) = &cfg.output.csv {
        holderlab_core::snapshot::export_energy_csv(&ledger, &out_dir.join(name))?;
    }
    if cfg.simulate.save_trajectory {
        holderlab_core::snapshot::write_trajectory(&traj, out_dir, "trajectory")?;
        report.note("trajectory snapshots written alongside the report");
    }
    Ok(())
}
