//! Real-space potential-theory solution of -Laplace p = div div R for a
//! compactly supported stress, used as an independent cross-check of the
//! spectral pressure solver.
//!
//! p(x) = int_{B_R0(x0)} d2_ij Phi(x-y) (R_ij(y) - R_ij(x)) dy
//!        - R_ij(x) int_{dB_R0(x0)} d_i Phi(x-y) nu_j(y) dS(y),
//! Phi(z) = 1/(4 pi |z|).
//!
//! The volume term is quadratured on the box grid carrying the stress with
//! the local linear part subtracted: writing R(y) - R(x) = G(y) + dR(x).(y-x),
//! the remainder G is O(|y-x|^2) near x, so the cell rule stays accurate and,
//! crucially, smooth in x (a discrete Laplacian of the output is meaningful).
//! The linear part integrates in closed boundary form,
//!   int_B z_k d2_ij Phi(z) dz
//!     = oint z_k d_j Phi(z) nu_i dS - delta_ik oint Phi(z) nu_j dS,
//! evaluated with the same spherical rule as the boundary term.

use crate::error::{LabError, Result};
use crate::extension::BoxField;
use crate::field::{t2, t3, Rank};
use crate::mollify::gauss_legendre;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct PotentialOracleConfig {
    /// Ball radius R0; the stress support must lie inside.
    pub support_radius: f64,
    pub center: [f64; 3],
    /// Refuse evaluation points with |x - x0| beyond this fraction of R0.
    pub boundary_margin: f64,
    /// Boundary quadrature: Gauss-Legendre nodes in cos(theta).
    pub polar_nodes: usize,
    /// Boundary quadrature: uniform azimuthal nodes.
    pub azimuthal_nodes: usize,
}

impl Default for PotentialOracleConfig {
    fn default() -> Self {
        Self {
            support_radius: 12.2,
            center: [0.0; 3],
            boundary_margin: 0.9,
            polar_nodes: 48,
            azimuthal_nodes: 96,
        }
    }
}

#[inline]
fn hessian_phi(z: [f64; 3]) -> [[f64; 3]; 3] {
    let r2 = z[0] * z[0] + z[1] * z[1] + z[2] * z[2];
    let r = r2.sqrt();
    let r5 = r2 * r2 * r;
    let c = 1.0 / (4.0 * std::f64::consts::PI * r5);
    let mut h = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            h[i][j] = c * (3.0 * z[i] * z[j] - if i == j { r2 } else { 0.0 });
        }
    }
    h
}

#[inline]
fn grad_phi(z: [f64; 3]) -> [f64; 3] {
    let r2 = z[0] * z[0] + z[1] * z[1] + z[2] * z[2];
    let r3 = r2 * r2.sqrt();
    let c = -1.0 / (4.0 * std::f64::consts::PI * r3);
    [c * z[0], c * z[1], c * z[2]]
}

#[inline]
fn phi(z: [f64; 3]) -> f64 {
    let r = (z[0] * z[0] + z[1] * z[1] + z[2] * z[2]).sqrt();
    1.0 / (4.0 * std::f64::consts::PI * r)
}

/// Gradient of a box field by spectral differentiation on the box (valid for
/// fields supported away from the box boundary). Returns d_k R_c as rank
/// components [k * ncomp + c].
pub fn box_gradient(f: &BoxField) -> Vec<Vec<f64>> {
    let nb = f.nb();
    let freq = |i: usize| -> f64 {
        let m = if i <= nb / 2 { i as i64 } else { i as i64 - nb as i64 };
        m as f64 / crate::extension::PERIODS as f64
    };
    let mut out = Vec::with_capacity(3 * f.comps.len());
    for _ in 0..3 * f.comps.len() {
        out.push(Vec::new());
    }
    for (c, comp) in f.comps.iter().enumerate() {
        let buf: Vec<num_complex::Complex64> =
            comp.iter().map(|&x| num_complex::Complex64::new(x, 0.0)).collect();
        let hat = crate::fft::forward(&buf, nb);
        for axis in 0..3 {
            let mut d = hat.clone();
            for ix in 0..nb {
                for iy in 0..nb {
                    for iz in 0..nb {
                        let idx = (ix * nb + iy) * nb + iz;
                        let k = match axis {
                            0 => freq(ix),
                            1 => freq(iy),
                            _ => freq(iz),
                        };
                        d[idx] *= num_complex::Complex64::new(0.0, k);
                    }
                }
            }
            out[axis * f.comps.len() + c] =
                crate::fft::inverse(&d, nb).iter().map(|v| v.re).collect();
        }
    }
    out
}

/// div div R of a rank-2 box field by spectral differentiation on the box.
pub fn box_div_div(stress: &BoxField) -> Vec<f64> {
    assert_eq!(stress.rank, Rank::Tensor2);
    let nb = stress.nb();
    let freq = |i: usize| -> f64 {
        let m = if i <= nb / 2 { i as i64 } else { i as i64 - nb as i64 };
        m as f64 / crate::extension::PERIODS as f64
    };
    let mut acc = vec![num_complex::Complex64::default(); nb * nb * nb];
    for i in 0..3 {
        for j in i..3 {
            let c = t2(i, j);
            let buf: Vec<num_complex::Complex64> = stress.comps[c]
                .iter()
                .map(|&x| num_complex::Complex64::new(x, 0.0))
                .collect();
            let hat = crate::fft::forward(&buf, nb);
            let fac = if j > i { 2.0 } else { 1.0 };
            for ix in 0..nb {
                let ki = freq(ix);
                for iy in 0..nb {
                    let kj = freq(iy);
                    for iz in 0..nb {
                        let kz = freq(iz);
                        let idx = (ix * nb + iy) * nb + iz;
                        let k = [ki, kj, kz];
                        acc[idx] += -fac * k[i] * k[j] * hat[idx];
                    }
                }
            }
        }
    }
    crate::fft::inverse(&acc, nb).iter().map(|v| v.re).collect()
}

/// Evaluate the potential solution at grid-aligned points of the stress box.
///
/// `stress_grad` holds d_k R_ij indexed [k * 9 + t2(i,j)] (from `box_gradient`).
pub fn potential_oracle_p(
    stress: &BoxField,
    stress_grad: &[Vec<f64>],
    cfg: &PotentialOracleConfig,
    points: &[[f64; 3]],
) -> Result<Vec<f64>> {
    if stress.rank != Rank::Tensor2 {
        return Err(LabError::RankMismatch { expected: "tensor2", got: stress.rank.name() });
    }
    if stress_grad.len() != 27 {
        return Err(LabError::InvalidParameter(format!(
            "stress gradient needs 27 components, got {}",
            stress_grad.len()
        )));
    }
    let nb = stress.nb();
    let h = stress.spacing();
    let cell = h * h * h;
    let r0 = cfg.support_radius;

    for p in points {
        let d = dist(*p, cfg.center);
        if d > cfg.boundary_margin * r0 {
            return Err(LabError::BoundaryLayer { dist: d, radius: r0 });
        }
    }

    // quadrature nodes inside the ball (skip far-outside-support zeros cheaply
    // by testing the stress magnitude)
    let mut nodes: Vec<(u32, [f32; 3])> = Vec::new();
    for ix in 0..nb {
        let x = stress.coord(ix);
        for iy in 0..nb {
            let y = stress.coord(iy);
            for iz in 0..nb {
                let z = stress.coord(iz);
                if dist([x, y, z], cfg.center) <= r0 {
                    let idx = stress.flat(ix, iy, iz);
                    nodes.push((idx as u32, [x as f32, y as f32, z as f32]));
                }
            }
        }
    }

    // spherical rule shared by the boundary terms
    let (glx, glw) = gauss_legendre(cfg.polar_nodes);
    let mut sphere: Vec<([f64; 3], f64)> = Vec::new();
    for (a, &mu) in glx.iter().enumerate() {
        let st = (1.0 - mu * mu).sqrt();
        for b in 0..cfg.azimuthal_nodes {
            let ang = 2.0 * std::f64::consts::PI * b as f64 / cfg.azimuthal_nodes as f64;
            let nu = [st * ang.cos(), st * ang.sin(), mu];
            let w = glw[a] * (2.0 * std::f64::consts::PI / cfg.azimuthal_nodes as f64) * r0 * r0;
            sphere.push((nu, w));
        }
    }

    let mut out = Vec::with_capacity(points.len());
    for p in points {
        let ix = stress.index_near(p[0]);
        let iy = stress.index_near(p[1]);
        let iz = stress.index_near(p[2]);
        let xp = [stress.coord(ix), stress.coord(iy), stress.coord(iz)];
        let xidx = stress.flat(ix, iy, iz);
        let rx: Vec<f64> = (0..9).map(|c| stress.comps[c][xidx]).collect();
        let gx: Vec<f64> = (0..27).map(|c| stress_grad[c][xidx]).collect();

        // volume term with the linear part removed
        let mut vol_acc = 0.0;
        for (nidx, ncoord) in &nodes {
            let z = [
                xp[0] - ncoord[0] as f64,
                xp[1] - ncoord[1] as f64,
                xp[2] - ncoord[2] as f64,
            ];
            let r2 = z[0] * z[0] + z[1] * z[1] + z[2] * z[2];
            if r2 < 0.25 * h * h {
                continue; // remainder is O(|z|^2): the center cell contributes O(h^2) smoothly
            }
            let hphi = hessian_phi(z);
            let mut acc = 0.0;
            let idx = *nidx as usize;
            for i in 0..3 {
                for j in 0..3 {
                    let c = t2(i, j);
                    // G = R(y) - R(x) - dR(x).(y - x); note y - x = -z
                    let lin = -(gx[t3(0, i, j)] * z[0] + gx[t3(1, i, j)] * z[1] + gx[t3(2, i, j)] * z[2]);
                    let g = stress.comps[c][idx] - rx[c] - lin;
                    acc += hphi[i][j] * g;
                }
            }
            vol_acc += acc;
        }
        let volume_term = vol_acc * cell;

        // linear-part boundary integrals:
        // A_kij = oint z_k d_j Phi(z) nu_i dS - delta_ik oint Phi(z) nu_j dS
        let mut lin_term = 0.0;
        let mut bnd = 0.0;
        // precompute per sphere node: z, Phi, gradPhi
        let mut oint_zk_djphi_nui = [[[0.0f64; 3]; 3]; 3]; // [k][i][j]
        let mut oint_phi_nuj = [0.0f64; 3];
        for (nu, w) in &sphere {
            let ys = [
                cfg.center[0] + r0 * nu[0],
                cfg.center[1] + r0 * nu[1],
                cfg.center[2] + r0 * nu[2],
            ];
            let z = [ys[0] - xp[0], ys[1] - xp[1], ys[2] - xp[2]];
            let gp = grad_phi(z);
            let ph = phi(z);
            for k in 0..3 {
                for i in 0..3 {
                    for j in 0..3 {
                        oint_zk_djphi_nui[k][i][j] += w * z[k] * gp[j] * nu[i];
                    }
                }
            }
            for j in 0..3 {
                oint_phi_nuj[j] += w * ph * nu[j];
            }
            // original boundary term: - R_ij(x) oint d_i Phi(x - y) nu_j dS;
            // d_i Phi(x - y) = -gp_i evaluated at z = y - x
            let mut acc = 0.0;
            for i in 0..3 {
                for j in 0..3 {
                    acc += rx[t2(i, j)] * (-gp[i]) * nu[j];
                }
            }
            bnd += w * acc;
        }
        for k in 0..3 {
            for i in 0..3 {
                for j in 0..3 {
                    let a_kij = oint_zk_djphi_nui[k][i][j]
                        - if i == k { oint_phi_nuj[j] } else { 0.0 };
                    lin_term += gx[t3(k, i, j)] * a_kij;
                }
            }
        }
        out.push(volume_term + lin_term - bnd);
    }
    Ok(out)
}

#[inline]
fn dist(a: [f64; 3], b: [f64; 3]) -> f64 {
    let d = [a[0] - b[0], a[1] - b[1], a[2] - b[2]];
    (d[0] * d[0] + d[1] * d[1] + d[2] * d[2]).sqrt()
}

/// Least-squares fit of samples by a harmonic polynomial of degree <= 2
/// (basis 1, x, y, z, xy, xz, yz, x^2 - y^2, y^2 - z^2); returns the fitted
/// values at the sample points. Used to mod out the harmonic ambiguity when
/// comparing the box oracle against the periodic spectral solution.
pub fn harmonic_quadratic_fit(points: &[[f64; 3]], values: &[f64]) -> Vec<f64> {
    let basis = |p: [f64; 3]| -> [f64; 9] {
        let [x, y, z] = p;
        [1.0, x, y, z, x * y, x * z, y * z, x * x - y * y, y * y - z * z]
    };
    let mut ata = [[0.0f64; 9]; 9];
    let mut atb = [0.0f64; 9];
    for (p, &v) in points.iter().zip(values.iter()) {
        let row = basis(*p);
        for i in 0..9 {
            atb[i] += row[i] * v;
            for j in 0..9 {
                ata[i][j] += row[i] * row[j];
            }
        }
    }
    let mut aug = [[0.0f64; 10]; 9];
    for i in 0..9 {
        for j in 0..9 {
            aug[i][j] = ata[i][j];
        }
        aug[i][9] = atb[i];
    }
    for col in 0..9 {
        let mut piv = col;
        for r in col + 1..9 {
            if aug[r][col].abs() > aug[piv][col].abs() {
                piv = r;
            }
        }
        aug.swap(col, piv);
        let d = aug[col][col];
        if d.abs() < 1e-12 {
            continue;
        }
        for r in 0..9 {
            if r == col {
                continue;
            }
            let f = aug[r][col] / d;
            for j in col..10 {
                aug[r][j] -= f * aug[col][j];
            }
        }
    }
    let mut coef = [0.0f64; 9];
    for i in 0..9 {
        coef[i] = if aug[i][i].abs() > 1e-12 { aug[i][9] / aug[i][i] } else { 0.0 };
    }
    points
        .iter()
        .map(|p| {
            let row = basis(*p);
            row.iter().zip(coef.iter()).map(|(a, b)| a * b).sum()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extension::PERIODS;

    fn zero_grad(nb: usize) -> Vec<Vec<f64>> {
        (0..27).map(|_| vec![0.0; nb * nb * nb]).collect()
    }

    #[test]
    fn zero_stress_gives_zero_potential() {
        let n = 8;
        let nb = PERIODS * n;
        let stress = BoxField {
            torus_n: n,
            comps: vec![vec![0.0; nb * nb * nb]; 9],
            rank: Rank::Tensor2,
        };
        let cfg = PotentialOracleConfig::default();
        let pts = vec![[0.0, 0.0, 0.0], [1.0, -2.0, 0.5]];
        let vals = potential_oracle_p(&stress, &zero_grad(nb), &cfg, &pts).unwrap();
        for v in vals {
            assert_eq!(v, 0.0);
        }
    }

    #[test]
    fn boundary_layer_points_refused() {
        let n = 8;
        let nb = PERIODS * n;
        let stress = BoxField {
            torus_n: n,
            comps: vec![vec![0.0; nb * nb * nb]; 9],
            rank: Rank::Tensor2,
        };
        let cfg = PotentialOracleConfig::default();
        let pts = vec![[11.8, 0.0, 0.0]];
        assert!(matches!(
            potential_oracle_p(&stress, &zero_grad(nb), &cfg, &pts),
            Err(LabError::BoundaryLayer { .. })
        ));
    }

    #[test]
    fn harmonic_fit_reproduces_harmonic_samples() {
        let pts: Vec<[f64; 3]> = (0..60)
            .map(|i| {
                let t = i as f64;
                [(t * 0.37).sin() * 2.0, (t * 0.61).cos() * 2.0, (t * 0.17).sin() * 1.5]
            })
            .collect();
        let vals: Vec<f64> = pts
            .iter()
            .map(|p| 1.3 - 0.2 * p[0] + 0.7 * p[1] * p[2] + 0.4 * (p[0] * p[0] - p[1] * p[1]))
            .collect();
        let fit = harmonic_quadratic_fit(&pts, &vals);
        for (a, b) in fit.iter().zip(vals.iter()) {
            assert!((a - b).abs() < 1e-8);
        }
    }
}
