//! Rate scan for smoothing at scale delta: sup- and L^p-norm ladders of the
//! smoothing error, the smoothed gradient, and the product commutator.

use super::util;
use crate::config::Config;
use crate::report::Report;
use holderlab_core::calculus::grad;
use holderlab_core::mollify::{scalar_commutator, Mollifier, MollifierSpec};
use holderlab_core::norms::c1_seminorm;
use holderlab_core::scaling::{fit_loglog, Rung};
use holderlab_core::{LabError, Rank, Result};

pub fn run(cfg: &Config, seed: u64, report: &mut Report) -> Result<()> {
    let f = util::rough(cfg, seed, Rank::Scalar)?;
    let samples = f.to_samples()?;
    let grid = f.grid();

    let mut series: Vec<(&str, Vec<Rung>, f64)> = vec![
        ("c0_diff", Vec::new(), cfg.field.theta),
        ("c1", Vec::new(), cfg.field.theta - 1.0),
        ("r_c0", Vec::new(), 2.0 * cfg.field.theta),
        ("grad_l32", Vec::new(), cfg.field.theta - 1.0),
        ("grad_l3", Vec::new(), cfg.field.theta - 1.0),
        ("r_l32", Vec::new(), 2.0 * cfg.field.theta),
        ("r_l3", Vec::new(), 2.0 * cfg.field.theta),
    ];

    for &e in &cfg.mollifier.delta_ladder_exponents {
        let delta = std::f64::consts::PI * 2f64.powi(e);
        let spec = MollifierSpec {
            delta,
            quadrature_points_per_axis: cfg.mollifier.quadrature_points,
        };
        let moll = match Mollifier::new(spec, grid) {
            Ok(m) => m,
            Err(err @ LabError::UnderResolved { .. }) => {
                report.skipped_rungs.push(crate::report::SkippedRung {
                    x: delta,
                    reason: err.to_string(),
                });
                continue;
            }
            Err(other) => return Err(other),
        };
        let fd = moll.apply(&f)?;
        let fd_samples = fd.to_samples()?;
        let diff = fd.sub(&f)?.to_samples()?;
        let gradient = grad(&fd)?.to_samples()?;
        let comm = scalar_commutator(&f, &moll)?.to_samples()?;

        let values = [
            diff.max_abs(),
            c1_seminorm(&fd)?,
            comm.max_abs(),
            gradient.lp_norm(1.5),
            gradient.lp_norm(3.0),
            comm.lp_norm(1.5),
            comm.lp_norm(3.0),
        ];
        for (slot, v) in series.iter_mut().zip(values.iter()) {
            slot.1.push(Rung { x: delta, value: *v });
        }
        let _ = fd_samples;
    }

    for (name, rungs, target) in &series {
        report.add_rungs(name, rungs);
        match fit_loglog(rungs) {
            Ok(fit) => {
                report.metric(&format!("slope_{name}"), fit.slope);
                report.metric(&format!("r2_{name}"), fit.r_squared);
                report.metric(&format!("target_{name}"), *target);
                report.metric(&format!("abs_err_{name}"), (fit.slope - target).abs());
            }
            Err(e) => report.note(format!("{name}: fit unavailable ({e})")),
        }
    }
    report.metric("skipped_rung_count", report.skipped_rungs.len() as f64);
    let _ = samples;
    Ok(())
}
