//! Poisson solvers for the double- and triple-divergence pressure problems
//! and the Hoelder-gain scan built on them.

use crate::calculus::{
    dealiased_outer, dealiased_triple_outer, div_div, div_div_div, grad, relative_divergence,
};
use crate::error::{LabError, Result};
use crate::field::{Rank, SpectralField};
use crate::grid::GridSpec;
use crate::norms::{holder_exponent_estimate, ExponentFit, SamplePairLadder};
use crate::rough::{make_rough_field, RandomFieldSpec};
use crate::scaling::ScalingReport;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Zero-average solution of -Laplace p = rhs for a scalar rhs, i.e.
/// p_hat(k) = rhs_hat(k)/|k|^2 with p_hat(0) = 0.
pub fn solve_poisson_neg(rhs: &SpectralField) -> Result<SpectralField> {
    if rhs.rank() != Rank::Scalar {
        return Err(LabError::RankMismatch { expected: "scalar", got: rhs.rank().name() });
    }
    let grid = rhs.grid();
    let mut out = rhs.clone();
    let c = out.comp_mut(0);
    for (flat, kx, ky, kz) in grid.iter_wavevectors() {
        let k2 = (kx * kx + ky * ky + kz * kz) as f64;
        c[flat] = if k2 == 0.0 { Complex64::default() } else { c[flat] / k2 };
    }
    Ok(out)
}

/// Hydrodynamic pressure of a solenoidal velocity: -Laplace p = div div (u (x) u),
/// normalized to zero mean.
pub fn solve_pressure(u: &SpectralField) -> Result<SpectralField> {
    if u.rank() != Rank::Vector {
        return Err(LabError::RankMismatch { expected: "vector", got: u.rank().name() });
    }
    let div_rel = relative_divergence(u)?;
    if div_rel > 1e-8 {
        return Err(LabError::NotSolenoidal(div_rel, 1e-8));
    }
    let uu = dealiased_outer(u, u)?;
    solve_poisson_neg(&div_div(&uu)?)
}

/// Zero-average solution of -Laplace q = div div div (v (x) w (x) z).
pub fn solve_q(v: &SpectralField, w: &SpectralField, z: &SpectralField) -> Result<SpectralField> {
    let t = dealiased_triple_outer(v, w, z)?;
    solve_poisson_neg(&div_div_div(&t)?)
}

/// Residual || Laplace p + div div (u (x) u) ||_C0 relative to the source scale.
pub fn pressure_residual(u: &SpectralField, p: &SpectralField) -> Result<f64> {
    let uu = dealiased_outer(u, u)?;
    let src = div_div(&uu)?;
    let grid = p.grid();
    let mut lap = p.clone();
    {
        let c = lap.comp_mut(0);
        for (flat, kx, ky, kz) in grid.iter_wavevectors() {
            let k2 = (kx * kx + ky * ky + kz * kz) as f64;
            c[flat] *= -k2;
        }
    }
    // residual = lap(p) + divdiv(uu) should vanish
    let mut r = lap;
    r.add_assign_scaled(&src, 1.0);
    let num = r.to_samples()?.max_abs();
    let den = src.to_samples()?.max_abs();
    Ok(num / den.max(1e-300))
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GainSeedOutcome {
    pub seed: u64,
    pub theta_hat_u: f64,
    pub theta_hat_p: f64,
    pub theta_hat_grad_p: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GainExperimentReport {
    pub theta_target: f64,
    pub grid_n: usize,
    pub octaves: usize,
    pub modes_per_octave: usize,
    pub outcomes: Vec<GainSeedOutcome>,
    pub median_theta_hat_u: f64,
    pub median_theta_hat_p: f64,
    pub median_theta_hat_grad_p: Option<f64>,
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    v[v.len() / 2]
}

/// Samples the pressure regularity gain over rough divergence-free fields.
/// Refuses the theta = 1/2 borderline.
pub fn schauder_gain_experiment(
    theta: f64,
    seeds: &[u64],
    grid: GridSpec,
    octaves: usize,
    modes_per_octave: usize,
    ladder_max_sep: f64,
) -> Result<GainExperimentReport> {
    if (theta - 0.5).abs() < 1e-9 {
        return Err(LabError::ThetaBorderline);
    }
    if seeds.is_empty() {
        return Err(LabError::InvalidParameter("need at least one seed".into()));
    }
    let mut outcomes = Vec::with_capacity(seeds.len());
    for &seed in seeds {
        let spec = RandomFieldSpec {
            theta,
            octaves,
            modes_per_octave,
            seed,
            amplitude: 1.0,
        };
        let u = make_rough_field(&spec, grid, Rank::Vector)?;
        let p = solve_pressure(&u)?;
        let ladder = SamplePairLadder::dyadic(grid, ladder_max_sep, seed ^ 0x517c_c1b7_2722_0a95);
        let fit_u: ExponentFit = holder_exponent_estimate(&u.to_samples()?, &ladder)?;
        let fit_p = holder_exponent_estimate(&p.to_samples()?, &ladder)?;
        let grad_fit = if theta > 0.5 {
            let gp = grad(&p)?;
            Some(holder_exponent_estimate(&gp.to_samples()?, &ladder)?.slope)
        } else {
            None
        };
        outcomes.push(GainSeedOutcome {
            seed,
            theta_hat_u: fit_u.slope,
            theta_hat_p: fit_p.slope,
            theta_hat_grad_p: grad_fit,
        });
    }
    let med_u = median(outcomes.iter().map(|o| o.theta_hat_u).collect());
    let med_p = median(outcomes.iter().map(|o| o.theta_hat_p).collect());
    let med_gp = if theta > 0.5 {
        Some(median(outcomes.iter().filter_map(|o| o.theta_hat_grad_p).collect()))
    } else {
        None
    };
    Ok(GainExperimentReport {
        theta_target: theta,
        grid_n: grid.n(),
        octaves,
        modes_per_octave,
        outcomes,
        median_theta_hat_u: med_u,
        median_theta_hat_p: med_p,
        median_theta_hat_grad_p: med_gp,
    })
}

impl GainExperimentReport {
    /// Condensed scaling summary: slope is the median pressure exponent.
    pub fn to_scaling_report(&self, seed: u64) -> ScalingReport {
        ScalingReport {
            experiment: "pressure-gain".to_string(),
            theta_target: Some(self.theta_target),
            slope: self.median_theta_hat_p,
            intercept: 0.0,
            r_squared: f64::NAN,
            n_seeds: self.outcomes.len(),
            seed,
            rungs: Vec::new(),
            skipped_rungs: Vec::new(),
            notes: vec![format!(
                "median theta_hat(u) = {:.4}, median theta_hat(p) = {:.4}",
                self.median_theta_hat_u, self.median_theta_hat_p
            )],
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::beltrami_mode;
    use crate::prng::SplitMix64;

    #[test]
    fn zero_velocity_gives_zero_pressure() {
        let grid = GridSpec::new(16).unwrap();
        let u = SpectralField::zeros(grid, Rank::Vector);
        let p = solve_pressure(&u).unwrap();
        assert_eq!(p.max_coeff(), 0.0);
    }

    #[test]
    fn beltrami_pressure_satisfies_poisson_residual() {
        let grid = GridSpec::new(32).unwrap();
        let u = beltrami_mode(grid, [1, 1, 0], 1.0);
        assert!(relative_divergence(&u).unwrap() < 1e-13);
        let p = solve_pressure(&u).unwrap();
        assert!((p.mean()[0]).norm() < 1e-14);
        let res = pressure_residual(&u, &p).unwrap();
        assert!(res < 1e-10, "residual {res}");
    }

    #[test]
    fn non_solenoidal_input_refused() {
        let grid = GridSpec::new(16).unwrap();
        let mut u = SpectralField::zeros(grid, Rank::Vector);
        // pure gradient mode: certainly not divergence-free
        u.comp_mut(0)[grid.flat(1, 0, 0)] = Complex64::new(0.5, 0.0);
        u.comp_mut(0)[grid.flat(15, 0, 0)] = Complex64::new(0.5, 0.0);
        assert!(matches!(solve_pressure(&u), Err(LabError::NotSolenoidal(..))));
    }

    #[test]
    fn solve_q_vanishes_when_any_argument_is_zero() {
        let grid = GridSpec::new(16).unwrap();
        let z = SpectralField::zeros(grid, Rank::Vector);
        let u = beltrami_mode(grid, [1, 0, 0], 1.0);
        let q = solve_q(&u, &z, &u).unwrap();
        assert_eq!(q.max_coeff(), 0.0);
    }

    #[test]
    fn solve_q_single_mode_closed_form() {
        // v = w = z = a e cos(k.x): the cubic tensor carries cos^3 = (3 cos + cos 3)/4.
        // q_hat at k and 3k follows from -i k_i k_j k_l T_ijl / |k|^2 with
        // T = a^3 e(x)e(x)e [(3/4) cos(k.x)-half-weights + (1/4) cos(3k.x)-half-weights].
        let grid = GridSpec::new(32).unwrap();
        let k = [1i64, 2, 0];
        let e = [0.6, -0.3, 0.9];
        let a = 1.1;
        let mut v = SpectralField::zeros(grid, Rank::Vector);
        let ip = grid.flat(grid.index_of(k[0]), grid.index_of(k[1]), grid.index_of(k[2]));
        let im = grid.flat(grid.index_of(-k[0]), grid.index_of(-k[1]), grid.index_of(-k[2]));
        for c in 0..3 {
            v.comp_mut(c)[ip] = Complex64::new(a * e[c] / 2.0, 0.0);
            v.comp_mut(c)[im] = Complex64::new(a * e[c] / 2.0, 0.0);
        }
        let q = solve_q(&v, &v, &v).unwrap();
        let kf = [k[0] as f64, k[1] as f64, k[2] as f64];
        let ek = e[0] * kf[0] + e[1] * kf[1] + e[2] * kf[2];
        let k2 = kf[0] * kf[0] + kf[1] * kf[1] + kf[2] * kf[2];
        // coefficient of e^{i k.x} in q: -i (ek)^3 a^3 (3/8) / k2 ;
        // coefficient of e^{i 3k.x}: -i (3 ek)^3 (a^3/8) / (9 k2)
        let expect_k = Complex64::new(0.0, -1.0) * ek.powi(3) * a.powi(3) * 3.0 / 8.0 / k2;
        let expect_3k =
            Complex64::new(0.0, -1.0) * (3.0 * ek).powi(3) * a.powi(3) / 8.0 / (9.0 * k2);
        let got_k = q.comp(0)[ip];
        let i3 =
            grid.flat(grid.index_of(3 * k[0]), grid.index_of(3 * k[1]), grid.index_of(3 * k[2]));
        let got_3k = q.comp(0)[i3];
        assert!((got_k - expect_k).norm() < 1e-10 * expect_k.norm().max(1e-10), "{got_k} vs {expect_k}");
        assert!((got_3k - expect_3k).norm() < 1e-10 * expect_3k.norm().max(1e-10), "{got_3k} vs {expect_3k}");
    }

    #[test]
    fn solve_q_is_multilinear() {
        let grid = GridSpec::new(16).unwrap();
        let mut rng = SplitMix64::new(10);
        let mut mk = |salt: u64| {
            let mut f = SpectralField::zeros(grid, Rank::Vector);
            let mut r = rng.fork(salt);
            for _ in 0..8 {
                let k = [
                    r.next_range_i64(-3, 3),
                    r.next_range_i64(-3, 3),
                    r.next_range_i64(-3, 3),
                ];
                let ip = grid.flat(grid.index_of(k[0]), grid.index_of(k[1]), grid.index_of(k[2]));
                let im = grid.flat(grid.index_of(-k[0]), grid.index_of(-k[1]), grid.index_of(-k[2]));
                for c in 0..3 {
                    let a = Complex64::new(r.next_f64() - 0.5, r.next_f64() - 0.5);
                    f.comp_mut(c)[ip] += a;
                    f.comp_mut(c)[im] += a.conj();
                }
            }
            f
        };
        let v = mk(1);
        let v2 = mk(2);
        let w = mk(3);
        let z = mk(4);
        // q(v + 2 v2, w, z) = q(v, w, z) + 2 q(v2, w, z)
        let mut lhs_arg = v.clone();
        lhs_arg.add_assign_scaled(&v2, 2.0);
        let lhs = solve_q(&lhs_arg, &w, &z).unwrap();
        let qa = solve_q(&v, &w, &z).unwrap();
        let qb = solve_q(&v2, &w, &z).unwrap();
        let mut rhs = qa.clone();
        rhs.add_assign_scaled(&qb, 2.0);
        let d = lhs.sub(&rhs).unwrap();
        assert!(d.max_coeff() < 1e-12 * lhs.max_coeff().max(1.0));
    }

    #[test]
    fn borderline_theta_refused() {
        let grid = GridSpec::new(32).unwrap();
        assert!(matches!(
            schauder_gain_experiment(0.5, &[1], grid, 3, 4, 1.0),
            Err(LabError::ThetaBorderline)
        ));
    }
}
