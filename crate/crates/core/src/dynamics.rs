//! Pseudo-spectral integrator for incompressible flow with fractional
//! dissipation nu (-Delta)^alpha on the torus, and its energy ledger.
//!
//! Time stepping is classical RK4 on the projected nonlinear term with the
//! exact integrating factor e^{-nu |k|^{2 alpha} dt} for the dissipative part.
//! The state is kept band-limited under the 2/3 rule (|k_i| <= n/3), which
//! makes the on-grid products alias-free on the retained band; pressure is
//! eliminated by Leray projection each evaluation and can be reconstructed
//! on demand with `pressure::solve_pressure`.

use crate::calculus::leray_project;
use crate::error::{LabError, Result};
use crate::fft;
use crate::field::{Rank, SpectralField};
use crate::grid::GridSpec;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DealiasRule {
    TwoThirds,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct SolverConfig {
    pub n: usize,
    pub dt: f64,
    pub nu: f64,
    pub alpha: f64,
    pub t_end: f64,
    pub dealias: DealiasRule,
    pub snapshot_stride: usize,
}

impl SolverConfig {
    pub fn validate(&self) -> Result<GridSpec> {
        let grid = GridSpec::new(self.n)?;
        if self.dt <= 0.0 || self.t_end <= 0.0 {
            return Err(LabError::InvalidParameter("dt and t_end must be positive".into()));
        }
        if self.nu < 0.0 {
            return Err(LabError::InvalidParameter("nu must be nonnegative".into()));
        }
        if !(self.alpha > 0.0 && self.alpha < 0.5) {
            return Err(LabError::BadAlpha(self.alpha));
        }
        if self.snapshot_stride == 0 {
            return Err(LabError::InvalidParameter("snapshot_stride must be positive".into()));
        }
        Ok(grid)
    }
}

#[derive(Debug, Clone)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub snapshots: Vec<SpectralField>,
    pub config: SolverConfig,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EnergyReport {
    pub times: Vec<f64>,
    /// Kinetic energy e(t) = 1/2 int |u|^2.
    pub kinetic: Vec<f64>,
    /// Instantaneous dissipation rate ||(-Delta)^{alpha/2} u||_{L^2}^2.
    pub dissipation_rate: Vec<f64>,
    /// nu * int_0^t dissipation rate dr (trapezoidal).
    pub dissipation_integral: Vec<f64>,
    /// Total energy E(t) = e(t) + dissipation integral.
    pub total: Vec<f64>,
}

struct StepTables {
    /// e^{-nu |k|^{2a} dt} and e^{-nu |k|^{2a} dt/2} by flat index.
    full: Vec<f64>,
    half: Vec<f64>,
    /// 2/3-rule band mask (1 inside, 0 outside), Nyquist always 0.
    mask: Vec<f64>,
}

fn build_tables(grid: GridSpec, cfg: &SolverConfig) -> StepTables {
    let n = grid.n();
    let cut = (n / 3) as i64;
    let mut full = vec![0.0; grid.len()];
    let mut half = vec![0.0; grid.len()];
    let mut mask = vec![0.0; grid.len()];
    for (flat, kx, ky, kz) in grid.iter_wavevectors() {
        let k2 = (kx * kx + ky * ky + kz * kz) as f64;
        let s = if k2 == 0.0 { 0.0 } else { k2.powf(cfg.alpha) };
        let lam = cfg.nu * s;
        full[flat] = (-lam * cfg.dt).exp();
        half[flat] = (-lam * cfg.dt * 0.5).exp();
        let inside = kx.abs() <= cut && ky.abs() <= cut && kz.abs() <= cut;
        let (ix, iy, iz) = (flat / (n * n), (flat / n) % n, flat % n);
        mask[flat] = if inside && !grid.touches_nyquist(ix, iy, iz) { 1.0 } else { 0.0 };
    }
    StepTables { full, half, mask }
}

fn apply_mask(u: &mut SpectralField, mask: &[f64]) {
    for c in 0..3 {
        for (v, &m) in u.comp_mut(c).iter_mut().zip(mask.iter()) {
            *v *= m;
        }
    }
}

fn apply_factor(u: &SpectralField, fac: &[f64]) -> SpectralField {
    let mut out = u.clone();
    for c in 0..3 {
        for (v, &m) in out.comp_mut(c).iter_mut().zip(fac.iter()) {
            *v *= m;
        }
    }
    out
}

/// Projected nonlinear term N(u) = -P div(u (x) u), computed on the state grid
/// (alias-free on the retained 2/3 band).
fn nonlinear(u: &SpectralField, grid: GridSpec, mask: &[f64]) -> Result<SpectralField> {
    let n = grid.n();
    // samples of the three components
    let s: Vec<Vec<f64>> = (0..3)
        .map(|c| fft::inverse(u.comp(c), n).iter().map(|v| v.re).collect())
        .collect();
    // six distinct products, forward transformed
    let mut prod_hat: Vec<Vec<Complex64>> = Vec::with_capacity(6);
    for (i, j) in [(0, 0), (0, 1), (0, 2), (1, 1), (1, 2), (2, 2)] {
        let buf: Vec<Complex64> = s[i]
            .iter()
            .zip(s[j].iter())
            .map(|(&a, &b)| Complex64::new(a * b, 0.0))
            .collect();
        prod_hat.push(fft::forward(&buf, n));
    }
    let idx = |i: usize, j: usize| -> usize {
        match (i.min(j), i.max(j)) {
            (0, 0) => 0,
            (0, 1) => 1,
            (0, 2) => 2,
            (1, 1) => 3,
            (1, 2) => 4,
            (2, 2) => 5,
            _ => unreachable!(),
        }
    };
    let mut out = SpectralField::zeros(grid, Rank::Vector);
    for (flat, kx, ky, kz) in grid.iter_wavevectors() {
        if mask[flat] == 0.0 {
            continue;
        }
        let kv = [kx as f64, ky as f64, kz as f64];
        for i in 0..3 {
            let mut acc = Complex64::default();
            for (j, kj) in kv.iter().enumerate() {
                acc += Complex64::new(0.0, -kj) * prod_hat[idx(i, j)][flat];
            }
            out.comp_mut(i)[flat] = acc;
        }
    }
    leray_project(&out)
}

/// March the flow to t_end, storing every `snapshot_stride`-th state.
pub fn integrate(u0: &SpectralField, cfg: &SolverConfig) -> Result<Trajectory> {
    let grid = cfg.validate()?;
    if u0.grid() != grid {
        return Err(LabError::GridMismatch(u0.grid().n(), grid.n()));
    }
    if u0.rank() != Rank::Vector {
        return Err(LabError::RankMismatch { expected: "vector", got: u0.rank().name() });
    }
    let div_rel = crate::calculus::relative_divergence(u0)?;
    if div_rel > 1e-10 {
        return Err(LabError::NotSolenoidal(div_rel, 1e-10));
    }
    let tables = build_tables(grid, cfg);
    let mut u = u0.clone();
    apply_mask(&mut u, &tables.mask);

    let cfl_check = |u: &SpectralField| -> Result<()> {
        let umax = u.to_samples()?.max_abs();
        if umax > 0.0 {
            let bound = 0.5 * grid.spacing() / umax;
            if cfg.dt > bound {
                return Err(LabError::CflViolation { dt: cfg.dt, bound });
            }
        }
        Ok(())
    };
    cfl_check(&u)?;

    let steps = (cfg.t_end / cfg.dt).round() as usize;
    let steps = steps.max(1);
    let mut times = vec![0.0];
    let mut snapshots = vec![u.clone()];
    for step in 1..=steps {
        let n1 = nonlinear(&u, grid, &tables.mask)?;
        let mut a1 = u.clone();
        a1.add_assign_scaled(&n1, cfg.dt / 2.0);
        let n2 = nonlinear(&apply_factor(&a1, &tables.half), grid, &tables.mask)?;
        let mut a2 = apply_factor(&u, &tables.half);
        a2.add_assign_scaled(&n2, cfg.dt / 2.0);
        let n3 = nonlinear(&a2, grid, &tables.mask)?;
        let mut a3 = apply_factor(&u, &tables.full);
        a3.add_assign_scaled(&apply_factor(&n3, &tables.half), cfg.dt);
        let n4 = nonlinear(&a3, grid, &tables.mask)?;

        let mut next = apply_factor(&u, &tables.full);
        next.add_assign_scaled(&apply_factor(&n1, &tables.full), cfg.dt / 6.0);
        next.add_assign_scaled(&apply_factor(&n2, &tables.half), cfg.dt / 3.0);
        next.add_assign_scaled(&apply_factor(&n3, &tables.half), cfg.dt / 3.0);
        next.add_assign_scaled(&n4, cfg.dt / 6.0);
        u = next;
        // keep the invariants tight along the march
        u = leray_project(&u)?;
        apply_mask(&mut u, &tables.mask);

        if step % 16 == 0 {
            cfl_check(&u)?;
        }
        if step % cfg.snapshot_stride == 0 || step == steps {
            times.push(step as f64 * cfg.dt);
            snapshots.push(u.clone());
        }
    }
    Ok(Trajectory { times, snapshots, config: *cfg })
}

/// Kinetic energy 1/2 int |u|^2 via Parseval.
pub fn kinetic_energy(u: &SpectralField) -> f64 {
    0.5 * crate::grid::TWO_PI.powi(3) * u.spectral_l2_sq()
}

/// ||(-Delta)^{alpha/2} u||_{L^2}^2 via the |k|^{2 alpha} symbol.
pub fn dissipation_rate(u: &SpectralField, alpha: f64) -> f64 {
    let grid = u.grid();
    let mut acc = 0.0;
    for (flat, kx, ky, kz) in grid.iter_wavevectors() {
        let k2 = (kx * kx + ky * ky + kz * kz) as f64;
        if k2 == 0.0 {
            continue;
        }
        let s = k2.powf(alpha);
        for c in 0..3 {
            acc += s * u.comp(c)[flat].norm_sqr();
        }
    }
    crate::grid::TWO_PI.powi(3) * acc
}

/// Energy ledger along a trajectory: kinetic, dissipation, and total energy.
pub fn energy_ledger(traj: &Trajectory) -> EnergyReport {
    let alpha = traj.config.alpha;
    let nu = traj.config.nu;
    let kinetic: Vec<f64> = traj.snapshots.iter().map(kinetic_energy).collect();
    let rate: Vec<f64> = traj.snapshots.iter().map(|u| dissipation_rate(u, alpha)).collect();
    let mut integral = vec![0.0];
    for i in 1..rate.len() {
        let dt = traj.times[i] - traj.times[i - 1];
        let inc = 0.5 * (rate[i] + rate[i - 1]) * dt;
        integral.push(integral[i - 1] + nu * inc);
    }
    let total: Vec<f64> = kinetic.iter().zip(integral.iter()).map(|(e, d)| e + d).collect();
    EnergyReport {
        times: traj.times.clone(),
        kinetic,
        dissipation_rate: rate,
        dissipation_integral: integral,
        total,
    }
}

/// The classic triply periodic curl-eigenfield with |k| = 1 modes.
pub fn abc_flow(grid: GridSpec, a: f64, b: f64, c: f64) -> SpectralField {
    let mut u = SpectralField::zeros(grid, Rank::Vector);
    // u1 = A sin z + C cos y
    set_mode(&mut u, grid, 0, [0, 0, 1], a * 0.5, true);
    set_mode(&mut u, grid, 0, [0, 1, 0], c * 0.5, false);
    // u2 = B sin x + A cos z
    set_mode(&mut u, grid, 1, [1, 0, 0], b * 0.5, true);
    set_mode(&mut u, grid, 1, [0, 0, 1], a * 0.5, false);
    // u3 = C sin y + B cos x
    set_mode(&mut u, grid, 2, [0, 1, 0], c * 0.5, true);
    set_mode(&mut u, grid, 2, [1, 0, 0], b * 0.5, false);
    u
}

/// Single helical curl-eigenfield: u = Re[(e1 + i e2) amp e^{ik.x}] with
/// {e1, e2, k/|k|} right-handed orthonormal, so curl u = |k| u and the
/// nonlinear term is a pure gradient.
pub fn beltrami_mode(grid: GridSpec, k: [i64; 3], amp: f64) -> SpectralField {
    let kf = [k[0] as f64, k[1] as f64, k[2] as f64];
    let kn = (kf[0] * kf[0] + kf[1] * kf[1] + kf[2] * kf[2]).sqrt();
    let probe = if k[0] == 0 && k[1] == 0 { [1.0, 0.0, 0.0] } else { [0.0, 0.0, 1.0] };
    let mut e1 = [
        kf[1] * probe[2] - kf[2] * probe[1],
        kf[2] * probe[0] - kf[0] * probe[2],
        kf[0] * probe[1] - kf[1] * probe[0],
    ];
    let n1 = (e1[0] * e1[0] + e1[1] * e1[1] + e1[2] * e1[2]).sqrt();
    for v in &mut e1 {
        *v /= n1;
    }
    let e2 = [
        (kf[1] * e1[2] - kf[2] * e1[1]) / kn,
        (kf[2] * e1[0] - kf[0] * e1[2]) / kn,
        (kf[0] * e1[1] - kf[1] * e1[0]) / kn,
    ];
    let mut u = SpectralField::zeros(grid, Rank::Vector);
    let ip = grid.flat(grid.index_of(k[0]), grid.index_of(k[1]), grid.index_of(k[2]));
    let im = grid.flat(grid.index_of(-k[0]), grid.index_of(-k[1]), grid.index_of(-k[2]));
    for c in 0..3 {
        let coef = Complex64::new(e1[c], e2[c]) * (amp / 2.0);
        u.comp_mut(c)[ip] += coef;
        u.comp_mut(c)[im] += coef.conj();
    }
    u
}

fn set_mode(u: &mut SpectralField, grid: GridSpec, comp: usize, k: [i64; 3], half_amp: f64, sine: bool) {
    let ip = grid.flat(grid.index_of(k[0]), grid.index_of(k[1]), grid.index_of(k[2]));
    let im = grid.flat(grid.index_of(-k[0]), grid.index_of(-k[1]), grid.index_of(-k[2]));
    if sine {
        // A sin(k.x) = (A/2i) e^{ikx} - (A/2i) e^{-ikx}
        u.comp_mut(comp)[ip] += Complex64::new(0.0, -half_amp);
        u.comp_mut(comp)[im] += Complex64::new(0.0, half_amp);
    } else {
        u.comp_mut(comp)[ip] += Complex64::new(half_amp, 0.0);
        u.comp_mut(comp)[im] += Complex64::new(half_amp, 0.0);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn base_cfg(n: usize, nu: f64, alpha: f64, dt: f64, t_end: f64) -> SolverConfig {
        SolverConfig {
            n,
            dt,
            nu,
            alpha,
            t_end,
            dealias: DealiasRule::TwoThirds,
            snapshot_stride: 8,
        }
    }

    #[test]
    fn abc_flow_is_curl_eigenfield() {
        let grid = GridSpec::new(16).unwrap();
        let u = abc_flow(grid, 1.0, 0.7, 0.3);
        let c = crate::calculus::curl(&u).unwrap();
        let d = c.sub(&u).unwrap();
        assert!(d.max_coeff() < 1e-13);
        assert!(crate::calculus::relative_divergence(&u).unwrap() < 1e-13);
    }

    #[test]
    fn zero_initial_state_stays_zero() {
        let grid = GridSpec::new(8).unwrap();
        let u0 = SpectralField::zeros(grid, Rank::Vector);
        let traj = integrate(&u0, &base_cfg(8, 0.1, 0.25, 1e-2, 0.1)).unwrap();
        for s in &traj.snapshots {
            assert_eq!(s.max_coeff(), 0.0);
        }
    }

    #[test]
    fn beltrami_decays_exactly() {
        // |k| = 1 modes: u(t) = e^{-nu t} u0; nonlinear term projects away.
        let grid = GridSpec::new(16).unwrap();
        let u0 = abc_flow(grid, 0.4, 0.3, 0.5);
        let nu = 0.3;
        let cfg = base_cfg(16, nu, 0.25, 1e-2, 0.5);
        let traj = integrate(&u0, &cfg).unwrap();
        let t = *traj.times.last().unwrap();
        let decay = (-nu * t).exp();
        let last = traj.snapshots.last().unwrap();
        let expect = u0.scaled(decay);
        let d = last.sub(&expect).unwrap();
        assert!(
            d.max_coeff() < 1e-10 * u0.max_coeff(),
            "decay mismatch {:.3e}",
            d.max_coeff() / u0.max_coeff()
        );
    }

    #[test]
    fn helical_mode_distinguishes_alpha() {
        let grid = GridSpec::new(16).unwrap();
        let u0 = beltrami_mode(grid, [1, 1, 0], 0.6);
        let nu = 0.2;
        let alpha = 0.4;
        let cfg = base_cfg(16, nu, alpha, 1e-2, 0.5);
        let traj = integrate(&u0, &cfg).unwrap();
        let t = *traj.times.last().unwrap();
        let decay = (-nu * 2f64.powf(alpha) * t).exp();
        let d = traj.snapshots.last().unwrap().sub(&u0.scaled(decay)).unwrap();
        assert!(d.max_coeff() < 1e-10 * u0.max_coeff());
    }

    #[test]
    fn cfl_violation_detected() {
        let grid = GridSpec::new(16).unwrap();
        let u0 = abc_flow(grid, 2.0, 1.5, 1.0);
        let cfg = base_cfg(16, 0.0, 0.25, 0.5, 1.0); // dt far beyond 0.5 h / |u|
        assert!(matches!(integrate(&u0, &cfg), Err(LabError::CflViolation { .. })));
    }

    #[test]
    fn snapshots_stay_divergence_free() {
        let grid = GridSpec::new(16).unwrap();
        let spec = crate::rough::RandomFieldSpec {
            theta: 0.6,
            octaves: 2,
            modes_per_octave: 4,
            seed: 21,
            amplitude: 0.3,
        };
        let u0 = crate::rough::make_rough_field(&spec, grid, Rank::Vector).unwrap();
        let traj = integrate(&u0, &base_cfg(16, 0.01, 0.2, 5e-3, 0.25)).unwrap();
        for s in &traj.snapshots {
            assert!(crate::calculus::relative_divergence(s).unwrap() < 1e-10);
        }
    }

    #[test]
    fn euler_conserves_energy_at_integrator_order() {
        let grid = GridSpec::new(16).unwrap();
        let u0 = abc_flow(grid, 0.5, 0.4, 0.3);
        let cfg = base_cfg(16, 0.0, 0.25, 2e-3, 0.5);
        let traj = integrate(&u0, &cfg).unwrap();
        let report = energy_ledger(&traj);
        let e0 = report.kinetic[0];
        for e in &report.kinetic {
            assert!((e - e0).abs() < 1e-9 * e0, "drift {:.3e}", (e - e0).abs() / e0);
        }
    }

    #[test]
    fn ledger_matches_exact_beltrami_decay() {
        let grid = GridSpec::new(16).unwrap();
        let u0 = abc_flow(grid, 0.4, 0.2, 0.1);
        let nu = 0.25;
        let cfg = base_cfg(16, nu, 0.3, 5e-3, 1.0);
        let traj = integrate(&u0, &cfg).unwrap();
        let report = energy_ledger(&traj);
        let e0 = report.kinetic[0];
        for (t, e) in report.times.iter().zip(report.kinetic.iter()) {
            let expect = e0 * (-2.0 * nu * t).exp();
            assert!((e - expect).abs() < 1e-7 * e0);
        }
        // total energy is conserved up to the trapezoidal ledger error
        let t_last = *report.times.last().unwrap();
        let e_total0 = report.total[0];
        let drift = (report.total.last().unwrap() - e_total0).abs() / e_total0;
        assert!(drift < 1e-4 * t_last.max(1.0), "total-energy drift {drift:.3e}");
    }
}
