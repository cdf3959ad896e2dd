//! holderlab: spectral-laboratory experiments on the periodic box.
//!
//! Usage: holderlab <experiment> --config <path> [--out <dir>] [--seed <u64>]
//! Exit codes: 0 success, 1 acceptance assertion failed, 2 invalid config,
//! 3 numerical failure.

mod config;
mod experiments;
mod report;
mod svg;

use clap::Parser;
use config::Config;
use report::Report;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser, Debug)]
#[command(name = "holderlab", version, about = "Scaling experiments for rough fields and hypodissipative flow on the 3-torus")]
struct Args {
    /// Experiment kind; must match the config's experiment.kind.
    experiment: String,
    /// Path to the TOML experiment configuration.
    #[arg(long)]
    config: PathBuf,
    /// Output directory (default: HOLDERLAB_OUT or the current directory).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Seed override for the experiment.
    #[arg(long)]
    seed: Option<u64>,
}

fn main() -> ExitCode {
    let args = Args::parse();
    let cfg = match Config::load(&args.config) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("config error: {e}");
            return ExitCode::from(2);
        }
    };
    if cfg.experiment.kind != args.experiment {
        eprintln!(
            "config error: experiment argument '{}' does not match config kind '{}'",
            args.experiment, cfg.experiment.kind
        );
        return ExitCode::from(2);
    }
    let out_dir = args
        .out
        .or_else(|| std::env::var_os("HOLDERLAB_OUT").map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("."));
    if let Err(e) = std::fs::create_dir_all(&out_dir) {
        eprintln!("config error: cannot create output directory: {e}");
        return ExitCode::from(2);
    }
    let seed = args.seed.unwrap_or(cfg.experiment.seed);

    let mut rep = Report::new(&cfg, seed);
    if let Ok(threads) = std::env::var("HOLDERLAB_THREADS") {
        rep.note(format!("HOLDERLAB_THREADS={threads} (single-threaded build; accepted for compatibility)"));
    }
    if let Err(e) = experiments::run(&cfg, seed, &out_dir, &mut rep) {
        eprintln!("numerical failure: {e}");
        return ExitCode::from(3);
    }
    rep.check_asserts(&cfg.assert);

    println!("experiment: {} (seed {seed})", rep.experiment);
    for (k, v) in &rep.metrics {
        println!("  {k} = {v:.6e}");
    }
    for a in &rep.asserts {
        println!(
            "  assert {}: value {:.6e} in [{}, {}] -> {}",
            a.name,
            a.value,
            a.min.map(|v| format!("{v:.3e}")).unwrap_or_else(|| "-inf".into()),
            a.max.map(|v| format!("{v:.3e}")).unwrap_or_else(|| "+inf".into()),
            if a.pass { "PASS" } else { "FAIL" }
        );
    }

    if let Err(e) = rep.write_json(&out_dir.join(&cfg.output.json)) {
        eprintln!("numerical failure: cannot write report: {e}");
        return ExitCode::from(3);
    }
    if let Some(csv) = &cfg.output.csv {
        // experiments that already wrote a csv (energy ledger) keep theirs;
        // rung tables come from the report
        if !rep.rungs.is_empty() {
            if let Err(e) = rep.write_csv(&out_dir.join(csv)) {
                eprintln!("numerical failure: cannot write csv: {e}");
                return ExitCode::from(3);
            }
        }
    }
    if let Some(svg_name) = &cfg.output.svg {
        if !rep.rungs.is_empty() {
            if let Err(e) =
                svg::write_loglog_svg(&rep.rungs, &rep.experiment, &out_dir.join(svg_name))
            {
                eprintln!("numerical failure: cannot write svg: {e}");
                return ExitCode::from(3);
            }
        }
    }
    if rep.pass {
        ExitCode::SUCCESS
    } else {
        println!("one or more acceptance assertions failed");
        ExitCode::from(1)
    }
}
