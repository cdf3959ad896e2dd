//! Energy-modulus inequality scan over seeded trajectories: the smallest
//! admissible constant and its stability across seeds.

use super::util;
use crate::config::Config;
use crate::report::Report;
use holderlab_core::identities::energy_modulus_scan;
use holderlab_core::Result;

pub fn run(cfg: &Config, seed: u64, report: &mut Report) -> Result<()> {
    let theta = cfg.scan.theta;
    let mut constants = Vec::new();
    let mut exponent = f64::NAN;
    let mut threshold = false;
    for i in 0..cfg.scan.seeds as u64 {
        let traj = util::simulate(cfg, seed.wrapping_add(i))?;
        let scan = energy_modulus_scan(&traj, theta, cfg.scan.total_energy)?;
        exponent = scan.exponent;
        threshold = scan.conservation_threshold;
        constants.push(scan.fitted_constant);
        report.note(format!(
            "seed {}: fitted C = {:.6e}, besov = {:.4}",
            seed.wrapping_add(i),
            scan.fitted_constant,
            scan.besov_seminorm
        ));
    }
    let cmin = constants.iter().cloned().fold(f64::MAX, f64::min);
    let cmax = constants.iter().cloned().fold(f64::MIN, f64::max);
    report.metric("exponent", exponent);
    report.metric("conservation_threshold", if threshold { 1.0 } else { 0.0 });
    report.metric("c_min", cmin);
    report.metric("c_max", cmax);
    report.metric("c_spread", cmax / cmin.max(1e-300));
    report.metric("n_seeds", constants.len() as f64);
    Ok(())
}
