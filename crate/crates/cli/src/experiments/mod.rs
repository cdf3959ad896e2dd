//! One module per experiment; each fills the shared report from the config.

mod commutator_check;
mod decomposition_check;
mod energy_scan;
mod extend_check;
mod fraclap_check;
mod gen_field;
mod identity_check;
mod mollify_scan;
mod pressure_scan;
mod simulate;

use crate::config::Config;
use crate::report::Report;
use holderlab_core::Result;
use std::path::Path;

pub fn run(cfg: &Config, seed: u64, out_dir: &Path, report: &mut Report) -> Result<()> {
    match cfg.experiment.kind.as_str() {
        "gen-field" => gen_field::run(cfg, seed, out_dir, report),
        "mollify-scan" => mollify_scan::run(cfg, seed, report),
        "fraclap-check" => fraclap_check::run(cfg, seed, report),
        "commutator-check" => commutator_check::run(cfg, seed, report),
        "pressure-scan" => pressure_scan::run(cfg, seed, report),
        "extend-check" => extend_check::run(cfg, seed, report),
        "simulate" => simulate::run(cfg, seed, out_dir, report),
        "energy-scan" => energy_scan::run(cfg, seed, report),
        "identity-check" => identity_check::run(cfg, seed, report),
        "decomposition-check" => decomposition_check::run(cfg, seed, report),
        other => unreachable!("config validation admitted unknown experiment {other}"),
    }
}

/// Shared helpers for the experiment modules.
pub(crate) mod util {
    use crate::config::Config;
    use holderlab_core::dynamics::{abc_flow, beltrami_mode, integrate, DealiasRule, SolverConfig, Trajectory};
    use holderlab_core::norms::SamplePairLadder;
    use holderlab_core::rough::{make_rough_field, RandomFieldSpec};
    use holderlab_core::{GridSpec, Rank, Result, SpectralField};

    pub fn grid(cfg: &Config) -> Result<GridSpec> {
        GridSpec::new(cfg.grid.n)
    }

    pub fn field_spec(cfg: &Config, seed: u64) -> RandomFieldSpec {
        RandomFieldSpec {
            theta: cfg.field.theta,
            octaves: cfg.field.octaves,
            modes_per_octave: cfg.field.modes_per_octave,
            seed,
            amplitude: cfg.field.amplitude,
        }
    }

    pub fn rough(cfg: &Config, seed: u64, rank: Rank) -> Result<SpectralField> {
        make_rough_field(&field_spec(cfg, seed), grid(cfg)?, rank)
    }

    pub fn ladder(cfg: &Config, g: GridSpec, seed: u64) -> SamplePairLadder {
        let mut l = SamplePairLadder::dyadic(
            g,
            cfg.ladder.max_separation_over_h * g.spacing(),
            seed,
        );
        l.pairs_per_separation = cfg.ladder.pairs;
        l.directions_per_separation = cfg.ladder.directions;
        l
    }

    pub fn solver_config(cfg: &Config) -> SolverConfig {
        SolverConfig {
            n: cfg.grid.n,
            dt: cfg.simulate.dt,
            nu: cfg.simulate.nu,
            alpha: cfg.simulate.alpha,
            t_end: cfg.simulate.t_end,
            dealias: DealiasRule::TwoThirds,
            snapshot_stride: cfg.simulate.snapshot_stride,
        }
    }

    pub fn initial_state(cfg: &Config, seed: u64) -> Result<SpectralField> {
        let g = grid(cfg)?;
        Ok(match cfg.simulate.initial.as_str() {
            "abc" => abc_flow(g, cfg.simulate.abc[0], cfg.simulate.abc[1], cfg.simulate.abc[2]),
            "beltrami" => beltrami_mode(g, [1, 1, 0], cfg.simulate.beltrami_amplitude),
            _ => rough(cfg, seed, Rank::Vector)?,
        })
    }

    pub fn simulate(cfg: &Config, seed: u64) -> Result<Trajectory> {
        let u0 = initial_state(cfg, seed)?;
        integrate(&u0, &solver_config(cfg))
    }
}
