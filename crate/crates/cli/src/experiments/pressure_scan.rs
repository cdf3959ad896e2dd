//! Pressure regularity-gain scan over seeded rough divergence-free fields.

use super::util;
use crate::config::Config;
use crate::report::Report;
use holderlab_core::pressure::schauder_gain_experiment;
use holderlab_core::Result;

pub fn run(cfg: &Config, seed: u64, report: &mut Report) -> Result<()> {
    let grid = util::grid(cfg)?;
    let seeds: Vec<u64> = (0..cfg.scan.seeds as u64).map(|i| seed.wrapping_add(i)).collect();
    let out = schauder_gain_experiment(
        cfg.scan.theta,
        &seeds,
        grid,
        cfg.field.octaves,
        cfg.field.modes_per_octave,
        cfg.ladder.max_separation_over_h * grid.spacing(),
    )?;
    report.metric("median_theta_hat_u", out.median_theta_hat_u);
    report.metric("median_theta_hat_p", out.median_theta_hat_p);
    if let Some(gp) = out.median_theta_hat_grad_p {
        report.metric("median_theta_hat_grad_p", gp);
    }
    report.metric("n_seeds", out.outcomes.len() as f64);
    for o in &out.outcomes {
        report.note(format!(
            "seed {}: theta_hat(u) = {:.4}, theta_hat(p) = {:.4}{}",
            o.seed,
            o.theta_hat_u,
            o.theta_hat_p,
            o.theta_hat_grad_p
                .map(|g| format!(", theta_hat(grad p) = {g:.4}"))
                .unwrap_or_default()
        ));
    }
    Ok(())
}
