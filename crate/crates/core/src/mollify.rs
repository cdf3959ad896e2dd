//! Mollification at scale delta with the standard compactly supported bump,
//! and the resolved-scale Reynolds stress it induces.
//!
//! The kernel is rho_delta(y) = delta^{-3} rho(y/delta), rho(z) = c exp(-1/(1-|z|^2))
//! on |z| < 1. Convolution is evaluated through the kernel's transform under
//! tensor-product Gauss-Legendre quadrature on the support cube [-delta, delta]^3:
//! for band-limited fields this equals the real-space quadrature
//!   f_delta(x) = sum_w W_w rho_delta(y_w) f(x - y_w)
//! point for point, because the spectral evaluation of f at the (off-grid)
//! quadrature nodes is exact and the sums commute. The kernel is normalized
//! against its own quadrature mass, so the multiplier at k = 0 is exactly 1
//! and mollification preserves means to rounding.

use crate::calculus::{dealiased_outer, dealiased_scalar_product};
use crate::error::{LabError, Result};
use crate::field::{Rank, SpectralField};
use crate::grid::GridSpec;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct MollifierSpec {
    /// Scale delta; the rescaled kernel is supported in the ball of this radius.
    pub delta: f64,
    /// Gauss-Legendre points per axis on the support cube.
    pub quadrature_points_per_axis: usize,
}

impl MollifierSpec {
    pub fn new(delta: f64) -> Self {
        Self { delta, quadrature_points_per_axis: 16 }
    }
}

/// Unnormalized bump profile on the unit ball.
#[inline]
fn bump(r2: f64) -> f64 {
    if r2 < 1.0 {
        (-1.0 / (1.0 - r2)).exp()
    } else {
        0.0
    }
}

/// Gauss-Legendre nodes/weights on [-1, 1] by Newton iteration on P_n.
pub(crate) fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n {
        // Chebyshev-like initial guess
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            // evaluate P_n(x) and P_n'(x) by recurrence
            let mut p0 = 1.0;
            let mut p1 = x;
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let mut p0 = 1.0;
        let mut p1 = x;
        for k in 2..=n {
            let kf = k as f64;
            let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
            p0 = p1;
            p1 = p2;
        }
        let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
        nodes[n - 1 - i] = x;
        weights[n - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    (nodes, weights)
}

/// A mollifier bound to a grid: the precomputed quadrature multiplier.
#[derive(Debug, Clone)]
pub struct Mollifier {
    spec: MollifierSpec,
    grid: GridSpec,
    /// Real multiplier values by flat wavevector index; value 1 at k = 0.
    multiplier: Vec<f64>,
}

impl Mollifier {
    pub fn new(spec: MollifierSpec, grid: GridSpec) -> Result<Self> {
        if !(spec.delta > 0.0 && spec.delta < std::f64::consts::PI) {
            return Err(LabError::BadMollifierScale(spec.delta));
        }
        let floor = 2.0 * grid.spacing();
        if spec.delta < floor * (1.0 - 1e-12) {
            return Err(LabError::UnderResolved { delta: spec.delta, floor });
        }
        let q = spec.quadrature_points_per_axis.max(4);
        let (x, w) = gauss_legendre(q);
        let d = spec.delta;
        // nodes/weights on [-delta, delta]
        let y: Vec<f64> = x.iter().map(|&t| t * d).collect();
        let wy: Vec<f64> = w.iter().map(|&t| t * d).collect();

        // kernel values at the tensor nodes (unnormalized; delta^-3 cancels in the
        // normalization against the quadrature mass)
        let mut rho = vec![0.0; q * q * q];
        let mut mass = 0.0;
        for a in 0..q {
            for b in 0..q {
                for c in 0..q {
                    let r2 = (y[a] * y[a] + y[b] * y[b] + y[c] * y[c]) / (d * d);
                    let v = bump(r2) * wy[a] * wy[b] * wy[c];
                    rho[(a * q + b) * q + c] = v;
                    mass += v;
                }
            }
        }

        let n = grid.n();
        // phase tables: e^{-i k y_a} per axis index and node
        let mut phase = vec![Complex64::default(); n * q];
        for i in 0..n {
            let k = grid.wavenumber(i) as f64;
            for a in 0..q {
                phase[i * q + a] = Complex64::from_polar(1.0, -k * y[a]);
            }
        }

        // stage 1: T1[kx][b][c] = sum_a rho[a,b,c] e^{-i kx y_a}
        let mut t1 = vec![Complex64::default(); n * q * q];
        for ix in 0..n {
            for b in 0..q {
                for c in 0..q {
                    let mut acc = Complex64::default();
                    for a in 0..q {
                        acc += rho[(a * q + b) * q + c] * phase[ix * q + a];
                    }
                    t1[(ix * q + b) * q + c] = acc;
                }
            }
        }
        // stage 2: T2[kx][ky][c] = sum_b T1[kx][b][c] e^{-i ky y_b}
        let mut t2 = vec![Complex64::default(); n * n * q];
        for ix in 0..n {
            for iy in 0..n {
                for c in 0..q {
                    let mut acc = Complex64::default();
                    for b in 0..q {
                        acc += t1[(ix * q + b) * q + c] * phase[iy * q + b];
                    }
                    t2[(ix * n + iy) * q + c] = acc;
                }
            }
        }
        // stage 3: M[kx][ky][kz] = sum_c T2 e^{-i kz y_c}, normalized by the mass
        let mut multiplier = vec![0.0; grid.len()];
        for ix in 0..n {
            for iy in 0..n {
                for iz in 0..n {
                    let mut acc = Complex64::default();
                    for c in 0..q {
                        acc += t2[(ix * n + iy) * q + c] * phase[iz * q + c];
                    }
                    multiplier[grid.flat(ix, iy, iz)] = acc.re / mass;
                }
            }
        }
        Ok(Self { spec, grid, multiplier })
    }

    #[inline]
    pub fn spec(&self) -> MollifierSpec {
        self.spec
    }

    #[inline]
    pub fn grid(&self) -> GridSpec {
        self.grid
    }

    #[inline]
    pub fn delta(&self) -> f64 {
        self.spec.delta
    }

    /// Multiplier value at a flat wavevector index.
    #[inline]
    pub fn multiplier_at(&self, flat: usize) -> f64 {
        self.multiplier[flat]
    }

    /// Multiplier value for a signed wavevector.
    pub fn multiplier_for(&self, k: [i64; 3]) -> f64 {
        let g = self.grid;
        self.multiplier[g.flat(g.index_of(k[0]), g.index_of(k[1]), g.index_of(k[2]))]
    }

    /// Smooth a field: every component's coefficients are scaled by the multiplier.
    pub fn apply(&self, f: &SpectralField) -> Result<SpectralField> {
        if f.grid() != self.grid {
            return Err(LabError::GridMismatch(f.grid().n(), self.grid.n()));
        }
        let mut out = f.clone();
        for ci in 0..f.rank().components() {
            let c = out.comp_mut(ci);
            for (v, &m) in c.iter_mut().zip(self.multiplier.iter()) {
                *v *= m;
            }
        }
        Ok(out)
    }
}

/// f_delta = f * rho_delta.
pub fn mollify(f: &SpectralField, m: &Mollifier) -> Result<SpectralField> {
    m.apply(f)
}

/// Resolved-scale Reynolds stress R_delta = u_delta (x) u_delta - (u (x) u)_delta.
pub fn reynolds_stress(u: &SpectralField, m: &Mollifier) -> Result<SpectralField> {
    if u.rank() != Rank::Vector {
        return Err(LabError::RankMismatch { expected: "vector", got: u.rank().name() });
    }
    let ud = m.apply(u)?;
    let udud = dealiased_outer(&ud, &ud)?;
    let uu_d = m.apply(&dealiased_outer(u, u)?)?;
    udud.sub(&uu_d)
}

/// Scalar analogue f_delta*f_delta - (f*f)_delta used by the rate scans.
pub fn scalar_commutator(f: &SpectralField, m: &Mollifier) -> Result<SpectralField> {
    let fd = m.apply(f)?;
    let fdfd = dealiased_scalar_product(&fd, &fd)?;
    let ff_d = m.apply(&dealiased_scalar_product(f, f)?)?;
    fdfd.sub(&ff_d)
}
