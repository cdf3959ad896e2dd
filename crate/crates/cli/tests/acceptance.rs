//! Acceptance suite: one test per criterion, each printing a single
//! `ACCEPTANCE <n> <label>: PASS|FAIL` line (visible with --nocapture) and
//! panicking on failure with the full sub-check table.

use holderlab_core::calculus::relative_divergence;
use holderlab_core::dynamics::{
    abc_flow, beltrami_mode, energy_ledger, integrate, DealiasRule, SolverConfig,
};
use holderlab_core::extension::BoxField;
use holderlab_core::field::{t2, Rank};
use holderlab_core::fraclap::apply_power;
use holderlab_core::identities::flux_ladder;
use holderlab_core::norms::{holder_exponent_estimate, SamplePairLadder};
use holderlab_core::potential::{potential_oracle_p, PotentialOracleConfig};
use holderlab_core::pressure::solve_q;
use holderlab_core::prng::SplitMix64;
use holderlab_core::rough::{make_rough_field, RandomFieldSpec};
use holderlab_core::scaling::fit_loglog;
use holderlab_core::{GridSpec, SpectralField};

use std::path::{Path, PathBuf};
use std::process::Command;

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_holderlab")
}

struct Checks {
    id: u32,
    label: &'static str,
    rows: Vec<(String, bool)>,
}

impl Checks {
    fn new(id: u32, label: &'static str) -> Self {
        Self { id, label, rows: Vec::new() }
    }

    fn push(&mut self, desc: impl Into<String>, ok: bool) {
        self.rows.push((desc.into(), ok));
    }

    fn conclude(self) {
        let pass = self.rows.iter().all(|r| r.1);
        println!(
            "ACCEPTANCE {} ({}): {}",
            self.id,
            self.label,
            if pass { "PASS" } else { "FAIL" }
        );
        for (desc, ok) in &self.rows {
            println!("    [{}] {}", if *ok { "ok" } else { "FAIL" }, desc);
        }
        assert!(pass, "acceptance criterion {} failed", self.id);
    }
}

fn tmpdir(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("holderlab-acceptance-{tag}-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn run_cli(kind: &str, config_text: &str, dir: &Path, seed: Option<u64>) -> (i32, serde_json::Value) {
    let cfg_path = dir.join(format!("{kind}.toml"));
    std::fs::write(&cfg_path, config_text).unwrap();
    let mut cmd = Command::new(bin());
    cmd.arg(kind).arg("--config").arg(&cfg_path).arg("--out").arg(dir);
    if let Some(s) = seed {
        cmd.arg("--seed").arg(s.to_string());
    }
    let out = cmd.output().expect("launch holderlab");
    let code = out.status.code().unwrap_or(-1);
    let json_name: String = config_text
        .lines()
        .find_map(|l| l.trim().strip_prefix("json = ").map(|v| v.trim_matches('"').to_string()))
        .unwrap_or_else(|| "report.json".into());
    let report = std::fs::read_to_string(dir.join(&json_name))
        .map(|t| serde_json::from_str(&t).unwrap_or(serde_json::Value::Null))
        .unwrap_or(serde_json::Value::Null);
    if code != 0 && code != 1 {
        panic!(
            "holderlab {kind} exited {code}: {}\n{}",
            String::from_utf8_lossy(&out.stderr),
            String::from_utf8_lossy(&out.stdout)
        );
    }
    (code, report)
}

fn metric(report: &serde_json::Value, name: &str) -> f64 {
    report["metrics"][name].as_f64().unwrap_or(f64::NAN)
}

// ---------------------------------------------------------------------------

#[test]
fn criterion_01_single_mode_eigenrelation() {
    let mut c = Checks::new(1, "single-mode fractional eigenrelation");
    let grid = GridSpec::new(16).unwrap();
    let mut rng = SplitMix64::new(11);
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let k = loop {
            let k = [
                rng.next_range_i64(-7, 7),
                rng.next_range_i64(-7, 7),
                rng.next_range_i64(-7, 7),
            ];
            if k != [0, 0, 0] {
                break k;
            }
        };
        for alpha in [0.1, 0.25, 0.4] {
            let mut f = SpectralField::zeros(grid, Rank::Scalar);
            f.set_hermitian(false);
            let flat = grid.flat(grid.index_of(k[0]), grid.index_of(k[1]), grid.index_of(k[2]));
            f.comp_mut(0)[flat] = holderlab_core::Complex64::new(0.8, -0.4);
            let g = apply_power(&f, alpha);
            let k2 = (k[0] * k[0] + k[1] * k[1] + k[2] * k[2]) as f64;
            let expect = holderlab_core::Complex64::new(0.8, -0.4) * k2.powf(alpha);
            worst = worst.max((g.comp(0)[flat] - expect).norm() / expect.norm());
        }
    }
    c.push(format!("20 wavevectors x 3 alphas: max rel error {worst:.3e} <= 1e-12"), worst <= 1e-12);
    c.conclude();
}

#[test]
fn criterion_02_fractional_laplacian_cross_realization() {
    let mut c = Checks::new(2, "multiplier vs singular integral");
    let dir = tmpdir("c2");
    let cfg = r#"
[experiment]
kind = "fraclap-check"
seed = 5

[grid]
n = 32

[fraclap]
alpha = 0.25
image_shells = 3
band = 8
modes = 60

[output]
json = "c2.json"
"#;
    let (_, rep) = run_cli("fraclap-check", cfg, &dir, None);
    let err = metric(&rep, "rel_error");
    let err2 = metric(&rep, "rel_error_doubled_shells");
    c.push(format!("relative error {err:.3e} <= 1e-3 at image_shells = 3"), err <= 1e-3);
    c.push(
        format!("doubling shells: error {err2:.3e} <= 0.65 x {err:.3e} (at least halves within 30%)"),
        err2 <= 0.65 * err,
    );
    c.conclude();
}

#[test]
fn criterion_03_commutator_two_mode_oracle() {
    let mut c = Checks::new(3, "two-mode commutator formula");
    let dir = tmpdir("c3");
    let cfg = r#"
[experiment]
kind = "commutator-check"
seed = 7

[grid]
n = 24

[fraclap]
alpha = 0.25

[output]
json = "c3.json"
"#;
    let (_, rep) = run_cli("commutator-check", cfg, &dir, None);
    let err = metric(&rep, "max_error");
    c.push(format!("50 random mode pairs: max error {err:.3e} <= 1e-10"), err <= 1e-10);
    c.conclude();
}

#[test]
fn criterion_04_mollification_rates() {
    let mut c = Checks::new(4, "mollification rate ladder at n = 128");
    let dir = tmpdir("c4");
    for (ti, theta) in [0.3f64, 0.4, 0.6].into_iter().enumerate() {
        let cfg = format!(
            r#"
[experiment]
kind = "mollify-scan"
seed = 23

[grid]
n = 128

[field]
theta = {theta}
octaves = 5
modes_per_octave = 32
amplitude = 1.0
rank = "scalar"

[mollifier]
quadrature_points = 16
delta_ladder_exponents = [-3, -4, -5, -6, -7, -8]

[output]
json = "c4_{ti}.json"
csv = "c4_{ti}.csv"
"#
        );
        let (_, rep) = run_cli("mollify-scan", &cfg, &dir, None);
        for (name, target) in [
            ("c0_diff", theta),
            ("c1", theta - 1.0),
            ("r_c0", 2.0 * theta),
            ("grad_l32", theta - 1.0),
            ("grad_l3", theta - 1.0),
            ("r_l32", 2.0 * theta),
            ("r_l3", 2.0 * theta),
        ] {
            let slope = metric(&rep, &format!("slope_{name}"));
            let err = (slope - target).abs();
            c.push(
                format!("theta {theta}: {name} slope {slope:+.3} vs {target:+.2} (|err| {err:.3} <= 0.15)"),
                err <= 0.15,
            );
        }
        let skipped = metric(&rep, "skipped_rung_count");
        c.push(
            format!("theta {theta}: rungs below the 2h resolution floor refused ({skipped})"),
            (skipped - 3.0).abs() < 0.5,
        );
    }
    c.conclude();
}

#[test]
fn criterion_05_pressure_holder_gain() {
    let mut c = Checks::new(5, "pressure regularity gain");
    let dir = tmpdir("c5");
    let cfg_low = r#"
[experiment]
kind = "pressure-scan"
seed = 101

[grid]
n = 128

[field]
octaves = 5
modes_per_octave = 24

[ladder]
max_separation_over_h = 16.0

[scan]
theta = 0.35
seeds = 10

[output]
json = "c5_low.json"
"#;
    let (_, rep) = run_cli("pressure-scan", cfg_low, &dir, None);
    let mu = metric(&rep, "median_theta_hat_u");
    let mp = metric(&rep, "median_theta_hat_p");
    c.push(
        format!("theta = 0.35: median theta_hat(u) {mu:.3} in [0.30, 0.40]"),
        (0.30..=0.40).contains(&mu),
    );
    c.push(format!("theta = 0.35: median theta_hat(p) {mp:.3} >= 0.6"), mp >= 0.6);

    let cfg_high = r#"
[experiment]
kind = "pressure-scan"
seed = 201

[grid]
n = 128

[field]
octaves = 5
modes_per_octave = 24

[ladder]
max_separation_over_h = 16.0

[scan]
theta = 0.7
seeds = 10

[output]
json = "c5_high.json"
"#;
    let (_, rep2) = run_cli("pressure-scan", cfg_high, &dir, None);
    let mgp = metric(&rep2, "median_theta_hat_grad_p");
    c.push(format!("theta = 0.70: median theta_hat(grad p) {mgp:.3} >= 0.3"), mgp >= 0.3);
    c.conclude();
}

#[test]
fn criterion_06_triple_divergence_exponent() {
    let mut c = Checks::new(6, "triple-divergence potential exponent");
    let grid = GridSpec::new(64).unwrap();
    let mut estimates = Vec::new();
    for seed in 0..10u64 {
        let spec = RandomFieldSpec {
            theta: 0.6,
            octaves: 4,
            modes_per_octave: 16,
            seed: 300 + seed,
            amplitude: 1.0,
        };
        let u = make_rough_field(&spec, grid, Rank::Vector).unwrap();
        let q = solve_q(&u, &u, &u).unwrap();
        let ladder = SamplePairLadder::dyadic(grid, 16.0 * grid.spacing(), 900 + seed);
        let fit = holder_exponent_estimate(&q.to_samples().unwrap(), &ladder).unwrap();
        estimates.push(fit.slope);
    }
    estimates.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let median = estimates[estimates.len() / 2];
    c.push(
        format!("theta = 0.6: median theta_hat(q) {median:.3} >= 0.1 over 10 seeds ({estimates:.3?})"),
        median >= 0.1,
    );
    c.conclude();
}

#[test]
fn criterion_07_extension_lemma() {
    let mut c = Checks::new(7, "compact divergence-free extension");
    let dir = tmpdir("c7");
    let cfg = r#"
[experiment]
kind = "extend-check"
seed = 41

[grid]
n = 48

[field]
theta = 0.4
octaves = 2
modes_per_octave = 8
rank = "vector"

[scan]
seeds = 5

[output]
json = "c7.json"
"#;
    let (_, rep) = run_cli("extend-check", cfg, &dir, None);
    let ident = metric(&rep, "max_identity_error_b6");
    let div = metric(&rep, "max_divergence_ratio");
    let outside = metric(&rep, "max_outside_b12");
    let ratio = metric(&rep, "max_seminorm_ratio");
    c.push(format!("u~ = u on B6 samples: max rel error {ident:.3e} <= 1e-6"), ident <= 1e-6);
    c.push(format!("divergence quality {div:.3e} <= 1e-6"), div <= 1e-6);
    c.push(format!("support confined to B12: outside max {outside:.3e} <= 1e-12"), outside <= 1e-12);
    c.push(format!("seminorm ratio {ratio:.3} <= 10 across 5 seeds"), ratio <= 10.0);
    c.conclude();
}

#[test]
fn criterion_08_potential_oracle_consistency() {
    let mut c = Checks::new(8, "potential-theory oracle vs div div R");
    let grid = GridSpec::new(32).unwrap();
    let u = abc_flow(grid, 1.0, 0.7, 0.4);
    let ext = holderlab_core::extension::extend_divfree(&u).unwrap();
    let f = &ext.extended_field;
    let nb = f.nb();

    // stress R = u~ (x) u~ on the box
    let mut comps = vec![vec![0.0; nb * nb * nb]; 9];
    for i in 0..3 {
        for j in 0..3 {
            for (idx, slot) in comps[t2(i, j)].iter_mut().enumerate() {
                *slot = f.comps[i][idx] * f.comps[j][idx];
            }
        }
    }
    let stress = BoxField { torus_n: grid.n(), comps, rank: Rank::Tensor2 };
    let grad = holderlab_core::potential::box_gradient(&stress);

    // -div div R, spectrally on the box
    let divdiv = holderlab_core::potential::box_div_div(&stress);

    // 100 seeded grid-aligned interior points
    let mut rng = SplitMix64::new(77);
    let h = f.spacing();
    let mut centers = Vec::new();
    while centers.len() < 100 {
        let p = [
            (rng.next_f64() - 0.5) * 6.0,
            (rng.next_f64() - 0.5) * 6.0,
            (rng.next_f64() - 0.5) * 6.0,
        ];
        if (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt() <= 3.0 {
            let snapped = [
                f.coord(f.index_near(p[0])),
                f.coord(f.index_near(p[1])),
                f.coord(f.index_near(p[2])),
            ];
            centers.push(snapped);
        }
    }
    // stencil evaluation points for the 7-point Laplacian with step 2h
    let eta = 2.0 * h;
    let mut points = Vec::new();
    for &p in &centers {
        points.push(p);
        for axis in 0..3 {
            for sgn in [-1.0, 1.0] {
                let mut q = p;
                q[axis] += sgn * eta;
                points.push(q);
            }
        }
    }
    let cfg = PotentialOracleConfig::default();
    let vals = potential_oracle_p(&stress, &grad, &cfg, &points).unwrap();

    let mut worst = 0.0f64;
    let mut scale = 0.0f64;
    for (ci, &p) in centers.iter().enumerate() {
        let base = ci * 7;
        let pc = vals[base];
        let mut lap = -6.0 * pc;
        for s in 1..7 {
            lap += vals[base + s];
        }
        lap /= eta * eta;
        let idx = f.flat(f.index_near(p[0]), f.index_near(p[1]), f.index_near(p[2]));
        let target = -divdiv[idx];
        worst = worst.max((lap - target).abs());
        scale = scale.max(target.abs());
    }
    let rel = worst / scale;
    c.push(
        format!("discrete Laplacian of oracle vs -div div R at 100 interior points: {rel:.4} <= 0.05"),
        rel <= 0.05,
    );
    c.conclude();
}

#[test]
fn criterion_09_beltrami_decay_and_euler_conservation() {
    let mut c = Checks::new(9, "curl-eigen decay oracle and Euler conservation");
    let grid = GridSpec::new(32).unwrap();
    let nu = 0.1;
    for alpha in [0.2, 0.4] {
        let u0 = beltrami_mode(grid, [1, 1, 0], 1.0);
        let cfg = SolverConfig {
            n: 32,
            dt: 1e-3,
            nu,
            alpha,
            t_end: 1.0,
            dealias: DealiasRule::TwoThirds,
            snapshot_stride: 1000,
        };
        let traj = integrate(&u0, &cfg).unwrap();
        let decay = (-nu * 2f64.powf(alpha) * 1.0).exp();
        let diff = traj.snapshots.last().unwrap().sub(&u0.scaled(decay)).unwrap();
        let rel = diff.max_coeff() / u0.max_coeff();
        c.push(
            format!("alpha = {alpha}: ||u(1) - e^(-nu |k|^2a) u0|| rel {rel:.3e} <= 1e-8"),
            rel <= 1e-8,
        );
    }
    // smooth Euler run conserves kinetic energy over unit time
    let mut u0 = abc_flow(grid, 0.4, 0.3, 0.25);
    u0.add_assign_scaled(&beltrami_mode(grid, [1, 1, 0], 0.2), 1.0);
    let cfg = SolverConfig {
        n: 32,
        dt: 2e-3,
        nu: 0.0,
        alpha: 0.25,
        t_end: 1.0,
        dealias: DealiasRule::TwoThirds,
        snapshot_stride: 50,
    };
    let traj = integrate(&u0, &cfg).unwrap();
    let ledger = energy_ledger(&traj);
    let e0 = ledger.kinetic[0];
    let drift = ledger.kinetic.iter().map(|e| (e - e0).abs()).fold(0.0f64, f64::max) / e0;
    c.push(format!("Euler unit-time energy drift {drift:.3e} <= 1e-8"), drift <= 1e-8);
    for s in &traj.snapshots {
        assert!(relative_divergence(s).unwrap() < 1e-10);
    }
    c.conclude();
}

#[test]
fn criterion_10_mollified_energy_identity() {
    let mut c = Checks::new(10, "resolved-scale energy identity");
    let dir = tmpdir("c10");
    let cfg = r#"
[experiment]
kind = "identity-check"
seed = 3

[grid]
n = 32

[field]
theta = 0.8
octaves = 2
modes_per_octave = 6
amplitude = 0.4
rank = "vector"

[simulate]
nu = 0.05
alpha = 0.3
dt = 0.001
t_end = 0.05
snapshot_stride = 1
initial = "rough"

[scan]
delta_over_h = 8.0

[output]
json = "c10.json"
"#;
    let (_, rep) = run_cli("identity-check", cfg, &dir, None);
    let max_rel = metric(&rep, "max_relative_residual");
    let order = metric(&rep, "dt_order");
    c.push(
        format!("per-step residual {max_rel:.3e} <= 1e-5 at delta = 8h"),
        max_rel <= 1e-5,
    );
    c.push(format!("residual order in dt {order:.2} >= 1.7 (target 2)"), order >= 1.7);
    c.conclude();
}

#[test]
fn criterion_11_flux_rate_on_frozen_snapshot() {
    let mut c = Checks::new(11, "energy-flux rate over the smoothing scale");
    let grid = GridSpec::new(128).unwrap();
    let spec = RandomFieldSpec {
        theta: 0.4,
        octaves: 5,
        modes_per_octave: 32,
        seed: 13,
        amplitude: 1.0,
    };
    let u = make_rough_field(&spec, grid, Rank::Vector).unwrap();
    let deltas: Vec<f64> = (2..=5).map(|e| std::f64::consts::PI * 2f64.powi(-e)).collect();
    let rungs = flux_ladder(&u, &deltas, 16).unwrap();
    let fit = fit_loglog(&rungs).unwrap();
    c.push(
        format!("flux slope {:.3} >= 0.05 (3 theta - 1 - 0.15) over {} rungs", fit.slope, rungs.len()),
        fit.slope >= 0.05,
    );
    c.conclude();
}

#[test]
fn criterion_12_pressure_decomposition() {
    let mut c = Checks::new(12, "five-piece pressure increment closure");
    let dir = tmpdir("c12");
    let euler = r#"
[experiment]
kind = "decomposition-check"
seed = 9

[grid]
n = 32

[field]
theta = 0.8
octaves = 2
modes_per_octave = 6
amplitude = 0.4
rank = "vector"

[simulate]
nu = 0.0
alpha = 0.25
dt = 0.001
t_end = 0.008
snapshot_stride = 1
initial = "rough"

[scan]
delta_over_h = 4.0
span_snapshots = 4
stride = 1

[output]
json = "c12a.json"
"#;
    let (_, rep) = run_cli("decomposition-check", euler, &dir, None);
    let rel = metric(&rep, "relative_residual");
    let gain = metric(&rep, "refinement_gain");
    c.push(format!("Euler closure residual {rel:.3e} <= 1e-3"), rel <= 1e-3);
    c.push(format!("refinement gain {gain:.2} >= 3 (second order)"), gain >= 3.0);

    let nsalpha = r#"
[experiment]
kind = "decomposition-check"
seed = 9

[grid]
n = 32

[field]
theta = 0.8
octaves = 2
modes_per_octave = 6
amplitude = 0.4
rank = "vector"

[simulate]
nu = 0.01
alpha = 0.2
dt = 0.001
t_end = 0.008
snapshot_stride = 1
initial = "rough"

[scan]
delta_over_h = 4.0
span_snapshots = 4
stride = 1

[output]
json = "c12b.json"
"#;
    let (_, rep2) = run_cli("decomposition-check", nsalpha, &dir, None);
    let rel2 = metric(&rep2, "relative_residual");
    let t4 = metric(&rep2, "term4_c0");
    let t5 = metric(&rep2, "term5_c0");
    c.push(format!("dissipative closure residual {rel2:.3e} <= 5e-3"), rel2 <= 5e-3);
    c.push(format!("commutator and fractional pieces active ({t4:.2e}, {t5:.2e})"), t4 > 0.0 && t5 > 0.0);
    c.conclude();
}

#[test]
fn criterion_13_energy_modulus_inequality() {
    let mut c = Checks::new(13, "kinetic-energy modulus inequality");
    let dir = tmpdir("c13");
    let cfg = r#"
[experiment]
kind = "energy-scan"
seed = 31

[grid]
n = 32

[field]
theta = 0.4
octaves = 3
modes_per_octave = 6
amplitude = 0.3
rank = "vector"

[simulate]
nu = 0.0
alpha = 0.25
dt = 0.005
t_end = 1.0
snapshot_stride = 20
initial = "rough"

[scan]
theta = 0.4
seeds = 5

[output]
json = "c13.json"
"#;
    let (_, rep) = run_cli("energy-scan", cfg, &dir, None);
    let exponent = metric(&rep, "exponent");
    let spread = metric(&rep, "c_spread");
    let cmax = metric(&rep, "c_max");
    c.push(
        format!("exponent 2 theta/(1-theta) = {exponent:.4} (4/3 for theta = 0.4)"),
        (exponent - 4.0 / 3.0).abs() < 1e-12,
    );
    c.push(
        format!("fitted constant finite ({cmax:.3e}) and stable within factor 3 across seeds (spread {spread:.2})"),
        cmax.is_finite() && spread <= 3.0,
    );

    let threshold = r#"
[experiment]
kind = "energy-scan"
seed = 32

[grid]
n = 16

[field]
theta = 0.4
octaves = 2
modes_per_octave = 4
amplitude = 0.3
rank = "vector"

[simulate]
nu = 0.0
alpha = 0.25
dt = 0.005
t_end = 0.2
snapshot_stride = 10
initial = "rough"

[scan]
theta = 0.33333333333333333
seeds = 1

[output]
json = "c13b.json"
"#;
    let (_, rep2) = run_cli("energy-scan", threshold, &dir, None);
    let exp2 = metric(&rep2, "exponent");
    let flag = metric(&rep2, "conservation_threshold");
    c.push(
        format!("theta = 1/3 scan flags the conservation threshold (exponent {exp2:.6}, flag {flag})"),
        (exp2 - 1.0).abs() < 1e-8 && flag == 1.0,
    );
    c.conclude();
}

#[test]
fn criterion_14_deterministic_reports() {
    let mut c = Checks::new(14, "byte-identical reruns");
    let dir_a = tmpdir("c14a");
    let dir_b = tmpdir("c14b");
    let cfg = r#"
[experiment]
kind = "gen-field"
seed = 7

[grid]
n = 32

[field]
theta = 0.45
octaves = 3
modes_per_octave = 8
rank = "vector"

[ladder]
max_separation_over_h = 16.0

[output]
json = "gen.json"
field = "field.hld1"
"#;
    let (_, _) = run_cli("gen-field", cfg, &dir_a, None);
    let (_, _) = run_cli("gen-field", cfg, &dir_b, None);
    let strip = |p: &Path| -> String {
        let text = std::fs::read_to_string(p).unwrap();
        text.lines().filter(|l| !l.contains("\"timestamp\"")).collect::<Vec<_>>().join("\n")
    };
    let ja = strip(&dir_a.join("gen.json"));
    let jb = strip(&dir_b.join("gen.json"));
    c.push("gen-field JSON identical modulo the timestamp field".to_string(), ja == jb);
    let fa = std::fs::read(dir_a.join("field.hld1")).unwrap();
    let fb = std::fs::read(dir_b.join("field.hld1")).unwrap();
    c.push(format!("HLD1 snapshots byte-identical ({} bytes)", fa.len()), fa == fb);

    let comm = r#"
[experiment]
kind = "commutator-check"
seed = 3

[grid]
n = 16

[output]
json = "comm.json"
"#;
    let (_, ra) = run_cli("commutator-check", comm, &dir_a, None);
    let (_, rb) = run_cli("commutator-check", comm, &dir_b, None);
    c.push(
        "commutator-check metrics identical across reruns".to_string(),
        ra["metrics"] == rb["metrics"],
    );
    c.conclude();
}
