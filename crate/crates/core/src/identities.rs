//! Trajectory-level verification machinery: the resolved-scale energy
//! identity, time- and energy-modulus inequality scans, and the five-term
//! decomposition of mollified pressure increments.

use crate::calculus::{band_truncate, dealiased_outer, div_div, div_tensor2, grad, pairing_integral};
use crate::dynamics::{kinetic_energy, Trajectory};
use crate::error::{LabError, Result};
use crate::field::{t2, Rank, SpectralField};
use crate::fraclap::{apply_power, commutator_t};
use crate::mollify::{reynolds_stress, Mollifier, MollifierSpec};
use crate::norms::besov_seminorm;
use crate::pressure::{solve_poisson_neg, solve_pressure};
use crate::scaling::{fit_loglog, Rung};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Gradient tensor (grad u)_ij = d_i u_j as a rank-2 field.
fn gradient_tensor(u: &SpectralField) -> Result<SpectralField> {
    if u.rank() != Rank::Vector {
        return Err(LabError::RankMismatch { expected: "vector", got: u.rank().name() });
    }
    let grid = u.grid();
    let n = grid.n();
    let mut out = SpectralField::zeros(grid, Rank::Tensor2);
    for (flat, kx, ky, kz) in grid.iter_wavevectors() {
        let (ix, iy, iz) = (flat / (n * n), (flat / n) % n, flat % n);
        if grid.touches_nyquist(ix, iy, iz) {
            continue;
        }
        let kv = [kx as f64, ky as f64, kz as f64];
        for i in 0..3 {
            for j in 0..3 {
                out.comp_mut(t2(i, j))[flat] = Complex64::new(0.0, kv[i]) * u.comp(j)[flat];
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct IdentityResidual {
    pub time: f64,
    /// d/dt (1/2 ||u_d||^2) + nu ||(-D)^{a/2} u_d||^2, centered differencing.
    pub lhs: f64,
    /// -int R_d : grad u_d.
    pub rhs: f64,
    pub residual: f64,
    pub relative: f64,
}

/// Per-step check of the resolved-scale energy identity along a trajectory.
pub fn mollified_energy_identity(
    traj: &Trajectory,
    spec: MollifierSpec,
) -> Result<Vec<IdentityResidual>> {
    if traj.snapshots.len() < 3 {
        return Err(LabError::TooFewSnapshots { need: 3, got: traj.snapshots.len() });
    }
    let grid = traj.snapshots[0].grid();
    let moll = Mollifier::new(spec, grid)?;
    let nu = traj.config.nu;
    let alpha = traj.config.alpha;

    // mollified kinetic energies and flux at every snapshot
    let mut e_moll = Vec::with_capacity(traj.snapshots.len());
    let mut flux = Vec::with_capacity(traj.snapshots.len());
    let mut diss = Vec::with_capacity(traj.snapshots.len());
    for u in &traj.snapshots {
        let ud = moll.apply(u)?;
        e_moll.push(kinetic_energy(&ud));
        let r = reynolds_stress(u, &moll)?;
        let gu = gradient_tensor(&ud)?;
        flux.push(-pairing_integral(&r, &gu)?);
        diss.push(nu * crate::dynamics::dissipation_rate(&ud, alpha));
    }

    let scale = e_moll.iter().fold(0.0f64, |m, &e| m.max(e));
    let floor = 1e-12 * scale.max(1e-300);
    let mut out = Vec::new();
    for i in 1..traj.snapshots.len() - 1 {
        let dt2 = traj.times[i + 1] - traj.times[i - 1];
        let lhs = (e_moll[i + 1] - e_moll[i - 1]) / dt2 + diss[i];
        let rhs = flux[i];
        let residual = (lhs - rhs).abs();
        let relative = residual / lhs.abs().max(rhs.abs()).max(floor);
        out.push(IdentityResidual { time: traj.times[i], lhs, rhs, residual, relative });
    }
    Ok(out)
}

/// Flux magnitude |int R_d : grad u_d| for a frozen field over a delta ladder.
pub fn flux_ladder(u: &SpectralField, deltas: &[f64], quad_points: usize) -> Result<Vec<Rung>> {
    let grid = u.grid();
    let mut rungs = Vec::new();
    for &d in deltas {
        let moll = Mollifier::new(
            MollifierSpec { delta: d, quadrature_points_per_axis: quad_points },
            grid,
        )?;
        let ud = moll.apply(u)?;
        let r = reynolds_stress(u, &moll)?;
        let gu = gradient_tensor(&ud)?;
        rungs.push(Rung { x: d, value: pairing_integral(&r, &gu)?.abs() });
    }
    Ok(rungs)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ModulusPair {
    pub s: f64,
    pub t: f64,
    pub gap: f64,
    /// sup_x |u(t,x) - u(s,x)|.
    pub modulus: f64,
    /// 2 sup ||u - u_d||_C0 + gap * sup ||d_t u_d||_C0 with d = gap.
    pub majorant: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TimeModulusReport {
    pub pairs: Vec<ModulusPair>,
    /// Fitted slope of modulus against |t - s|.
    pub fitted_exponent: f64,
    pub r_squared: f64,
    /// min over pairs of (majorant - modulus); nonnegative when the bound holds.
    pub min_margin: f64,
}

/// d_t u_d from the resolved-scale momentum balance:
/// d_t u_d = -div(u_d (x) u_d) - grad p_d - nu (-D)^a u_d + div R_d.
fn mollified_time_derivative(
    u: &SpectralField,
    moll: &Mollifier,
    nu: f64,
    alpha: f64,
) -> Result<SpectralField> {
    let ud = moll.apply(u)?;
    let udud = dealiased_outer(&ud, &ud)?;
    let mut rhs = div_tensor2(&udud)?.scaled(-1.0);
    let p = solve_pressure(u)?;
    let pd = moll.apply(&p)?;
    rhs.add_assign_scaled(&grad(&pd)?, -1.0);
    if nu > 0.0 {
        rhs.add_assign_scaled(&apply_power(&ud, alpha), -nu);
    }
    let r = reynolds_stress(u, moll)?;
    rhs.add_assign_scaled(&div_tensor2(&r)?, 1.0);
    Ok(rhs)
}

/// Compare the measured time modulus of a trajectory against the mollified
/// majorant with the scale tied to the time gap (delta = |t - s|).
pub fn time_modulus_scan(traj: &Trajectory) -> Result<TimeModulusReport> {
    if traj.snapshots.len() < 8 {
        return Err(LabError::TooFewSnapshots { need: 8, got: traj.snapshots.len() });
    }
    let grid = traj.snapshots[0].grid();
    let h = grid.spacing();
    let nu = traj.config.nu;
    let alpha = traj.config.alpha;
    let count = traj.snapshots.len();

    let mut pairs = Vec::new();
    // dyadic index strides from the first snapshot plus mid-trajectory pairs
    let mut index_pairs: Vec<(usize, usize)> = Vec::new();
    let mut stride = 1usize;
    while stride < count {
        index_pairs.push((0, stride));
        index_pairs.push((count / 2, (count / 2 + stride).min(count - 1)));
        stride *= 2;
    }
    index_pairs.sort();
    index_pairs.dedup();

    for (i, j) in index_pairs {
        if i >= j {
            continue;
        }
        let gap = traj.times[j] - traj.times[i];
        if gap < 2.0 * h || gap >= std::f64::consts::PI {
            continue; // the paper's scale choice delta = |t-s| must be an admissible mollifier scale
        }
        let moll = Mollifier::new(MollifierSpec::new(gap), grid)?;
        let diff = traj.snapshots[j].sub(&traj.snapshots[i])?;
        let modulus = diff.to_samples()?.max_abs();

        let mut moll_err = 0.0f64;
        let mut dt_bound = 0.0f64;
        for idx in [i, j] {
            let u = &traj.snapshots[idx];
            let ud = moll.apply(u)?;
            moll_err = moll_err.max(ud.sub(u)?.to_samples()?.max_abs());
            let dtu = mollified_time_derivative(u, &moll, nu, alpha)?;
            dt_bound = dt_bound.max(dtu.to_samples()?.max_abs());
        }
        let majorant = 2.0 * moll_err + gap * dt_bound;
        pairs.push(ModulusPair { s: traj.times[i], t: traj.times[j], gap, modulus, majorant });
    }
    if pairs.len() < 3 {
        return Err(LabError::TooFewSnapshots { need: 8, got: pairs.len() });
    }
    let rungs: Vec<Rung> = pairs.iter().map(|p| Rung { x: p.gap, value: p.modulus }).collect();
    let fit = fit_loglog(&rungs)?;
    let min_margin = pairs
        .iter()
        .map(|p| p.majorant - p.modulus)
        .fold(f64::INFINITY, f64::min);
    Ok(TimeModulusReport {
        pairs,
        fitted_exponent: fit.slope,
        r_squared: fit.r_squared,
        min_margin,
    })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EnergyModulusReport {
    pub theta: f64,
    pub exponent: f64,
    /// Smallest constant C with |e(t) - e(s)| <= C ([u]^2 + [u]^3) |t-s|^exponent
    /// over all snapshot pairs.
    pub fitted_constant: f64,
    /// max over snapshots of the Besov B^theta_{3,inf} seminorm.
    pub besov_seminorm: f64,
    /// Exponent >= 1 means the pair scan sits at or past the conservation
    /// threshold (the modulus bound forces constancy).
    pub conservation_threshold: bool,
    pub pairs: Vec<(f64, f64)>,
}

/// Kinetic-energy modulus scan: fit the smallest admissible constant in the
/// two-exponent bound; refuses theta <= alpha when nu > 0 and nonpositive
/// exponent denominators.
pub fn energy_modulus_scan(traj: &Trajectory, theta: f64, total_energy: bool) -> Result<EnergyModulusReport> {
    if traj.snapshots.len() < 4 {
        return Err(LabError::TooFewSnapshots { need: 4, got: traj.snapshots.len() });
    }
    if !(0.0 < theta && theta < 1.0) {
        return Err(LabError::InvalidParameter(format!("theta must be in (0,1), got {theta}")));
    }
    let nu = traj.config.nu;
    let alpha = traj.config.alpha;
    if nu > 0.0 && alpha >= theta {
        return Err(LabError::AlphaAboveTheta { alpha, theta });
    }
    let exponent = if total_energy && nu > 0.0 {
        let denom = 1.0 - 3.0 * theta + 2.0 * (theta - alpha);
        if denom <= 0.0 {
            return Err(LabError::NonpositiveExponentDenominator { theta, alpha });
        }
        2.0 * (theta - alpha) / denom
    } else {
        2.0 * theta / (1.0 - theta)
    };

    let report = crate::dynamics::energy_ledger(traj);
    let energy: &[f64] = if total_energy { &report.total } else { &report.kinetic };

    let mut besov = 0.0f64;
    for u in &traj.snapshots {
        besov = besov.max(besov_seminorm(u, theta, 3.0)?);
    }
    let strength = besov * besov + besov * besov * besov;

    let mut fitted = 0.0f64;
    let mut pairs = Vec::new();
    for i in 0..traj.times.len() {
        for j in i + 1..traj.times.len() {
            let gap = traj.times[j] - traj.times[i];
            if gap <= 0.0 {
                continue;
            }
            let lhs = (energy[j] - energy[i]).abs();
            pairs.push((gap, lhs));
            let c = lhs / (gap.powf(exponent) * strength.max(1e-300));
            fitted = fitted.max(c);
        }
    }
    Ok(EnergyModulusReport {
        theta,
        exponent,
        fitted_constant: fitted,
        besov_seminorm: besov,
        conservation_threshold: exponent >= 1.0 - 1e-12,
        pairs,
    })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DecompositionResult {
    pub s: f64,
    pub t: f64,
    /// C0 norms of the five assembled pieces.
    pub term_norms: [f64; 5],
    pub lhs_norm: f64,
    pub residual_norm: f64,
    pub relative: f64,
}

/// Assemble the five-piece decomposition of p_d(t) - p_d(s) from snapshots
/// s..t (inclusive) and report the closure residual. `stride` subsamples the
/// intermediate snapshots for the time quadrature.
pub fn pressure_decomposition_check(
    traj: &Trajectory,
    spec: MollifierSpec,
    s_idx: usize,
    t_idx: usize,
    stride: usize,
) -> Result<DecompositionResult> {
    if t_idx <= s_idx || t_idx >= traj.snapshots.len() {
        return Err(LabError::InvalidParameter("bad snapshot indices".into()));
    }
    let mut idxs: Vec<usize> = (s_idx..=t_idx).step_by(stride.max(1)).collect();
    if *idxs.last().unwrap() != t_idx {
        idxs.push(t_idx);
    }
    if idxs.len() < 2 {
        return Err(LabError::TooFewSnapshots { need: 3, got: idxs.len() });
    }
    let grid = traj.snapshots[0].grid();
    let moll = Mollifier::new(spec, grid)?;
    let nu = traj.config.nu;
    let alpha = traj.config.alpha;
    // all bilinear products are truncated to the integrator's 2/3 band so the
    // assembled pieces obey the same discrete momentum balance the trajectory
    // was marched with; the closure residual then measures the time
    // quadrature alone
    let cut = (grid.n() / 3) as i64;
    let outer = |a: &SpectralField, b: &SpectralField| -> Result<SpectralField> {
        Ok(band_truncate(&dealiased_outer(a, b)?, cut))
    };
    let pressure_cut = |u: &SpectralField| -> Result<SpectralField> {
        solve_poisson_neg(&div_div(&outer(u, u)?)?)
    };
    let reynolds_cut = |u: &SpectralField, ud: &SpectralField| -> Result<SpectralField> {
        let mut r = outer(ud, ud)?;
        let uu_d = moll.apply(&outer(u, u)?)?;
        r.add_assign_scaled(&uu_d, -1.0);
        Ok(r)
    };

    // integrand fields at the quadrature snapshots
    struct Node {
        time: f64,
        g2: SpectralField,
        g3: SpectralField,
        g4: Option<SpectralField>,
        g5: Option<SpectralField>,
    }
    let mut nodes: Vec<Node> = Vec::with_capacity(idxs.len());
    for &i in &idxs {
        let u = &traj.snapshots[i];
        let ud = moll.apply(u)?;
        let r = reynolds_cut(u, &ud)?;
        let p = pressure_cut(u)?;
        let pd = moll.apply(&p)?;
        // transport integrand: divdiv((div R - grad p_d) (x) u_d + sym)
        let mut w = div_tensor2(&r)?;
        w.add_assign_scaled(&grad(&pd)?, -1.0);
        let mut t_a = outer(&w, &ud)?;
        let t_b = outer(&ud, &w)?;
        t_a.add_assign_scaled(&t_b, 1.0);
        let g2 = div_div(&t_a)?;
        // cubic integrand: divdiv(div(u_d (x) u_d) (x) u_d + sym)
        let udud = outer(&ud, &ud)?;
        let dudud = div_tensor2(&udud)?;
        let mut c_a = outer(&dudud, &ud)?;
        let c_b = outer(&ud, &dudud)?;
        c_a.add_assign_scaled(&c_b, 1.0);
        let g3 = div_div(&c_a)?;
        let (g4, g5) = if nu > 0.0 {
            let tcomm = band_truncate(&commutator_t(&ud, &ud, alpha)?, cut);
            let g4 = div_div(&tcomm)?;
            let g5 = div_div(&apply_power(&udud, alpha))?;
            (Some(g4), Some(g5))
        } else {
            (None, None)
        };
        nodes.push(Node { time: traj.times[i], g2, g3, g4, g5 });
    }

    // trapezoidal time integrals of the integrand fields
    let trapz = |pick: &dyn Fn(&Node) -> Option<&SpectralField>| -> Result<SpectralField> {
        let mut acc = SpectralField::zeros(grid, Rank::Scalar);
        for w in nodes.windows(2) {
            let dt = w[1].time - w[0].time;
            if let (Some(a), Some(b)) = (pick(&w[0]), pick(&w[1])) {
                acc.add_assign_scaled(a, 0.5 * dt);
                acc.add_assign_scaled(b, 0.5 * dt);
            }
        }
        Ok(acc)
    };

    let int_g2 = trapz(&|n| Some(&n.g2))?;
    let int_g3 = trapz(&|n| Some(&n.g3))?;
    let int_g4 = trapz(&|n| n.g4.as_ref())?;
    let int_g5 = trapz(&|n| n.g5.as_ref())?;

    let us = &traj.snapshots[s_idx];
    let ut = &traj.snapshots[t_idx];
    let r_s = reynolds_cut(us, &moll.apply(us)?)?;
    let r_t = reynolds_cut(ut, &moll.apply(ut)?)?;
    let mut r_diff = r_s.clone();
    r_diff.add_assign_scaled(&r_t, -1.0);

    // the five zero-average pieces
    let p1 = solve_poisson_neg(&div_div(&r_diff)?)?;
    let p2 = solve_poisson_neg(&int_g2)?;
    let p3 = solve_poisson_neg(&int_g3)?.scaled(-1.0);
    let p4 = solve_poisson_neg(&int_g4)?.scaled(nu);
    let p5 = solve_poisson_neg(&int_g5)?.scaled(-nu);

    // LHS: p_d(t) - p_d(s)
    let p_s = moll.apply(&pressure_cut(us)?)?;
    let p_t = moll.apply(&pressure_cut(ut)?)?;
    let mut lhs = p_t.clone();
    lhs.add_assign_scaled(&p_s, -1.0);

    let mut total = p1.clone();
    total.add_assign_scaled(&p2, 1.0);
    total.add_assign_scaled(&p3, 1.0);
    total.add_assign_scaled(&p4, 1.0);
    total.add_assign_scaled(&p5, 1.0);

    let mut resid = lhs.clone();
    resid.add_assign_scaled(&total, -1.0);

    let lhs_norm = lhs.to_samples()?.max_abs();
    let residual_norm = resid.to_samples()?.max_abs();
    let floor = 1e-12
        * traj
            .snapshots
            .iter()
            .map(|u| u.max_coeff())
            .fold(0.0f64, f64::max)
            .max(1e-300);
    let term_norms = [
        p1.to_samples()?.max_abs(),
        p2.to_samples()?.max_abs(),
        p3.to_samples()?.max_abs(),
        p4.to_samples()?.max_abs(),
        p5.to_samples()?.max_abs(),
    ];
    Ok(DecompositionResult {
        s: traj.times[s_idx],
        t: traj.times[t_idx],
        term_norms,
        lhs_norm,
        residual_norm,
        relative: residual_norm / (lhs_norm + floor),
    })
}
