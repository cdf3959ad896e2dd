//! Spectral representation of periodic scalar/vector/tensor fields.

use crate::error::{LabError, Result};
use crate::fft;
use crate::grid::{GridSpec, TWO_PI};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Rank {
    Scalar,
    Vector,
    Tensor2,
    Tensor3,
}

impl Rank {
    #[inline]
    pub fn components(self) -> usize {
        match self {
            Rank::Scalar => 1,
            Rank::Vector => 3,
            Rank::Tensor2 => 9,
            Rank::Tensor3 => 27,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Rank::Scalar => "scalar",
            Rank::Vector => "vector",
            Rank::Tensor2 => "tensor2",
            Rank::Tensor3 => "tensor3",
        }
    }
}

/// Fourier coefficients c_k of a periodic field, f(x) = sum_k c_k e^{i k.x}.
///
/// Components are stored flat in row-major k order; the matching sample-space
/// view is [`SampleField`]. `hermitian` marks fields that represent real data.
#[derive(Debug, Clone)]
pub struct SpectralField {
    grid: GridSpec,
    rank: Rank,
    hermitian: bool,
    comps: Vec<Vec<Complex64>>,
}

#[inline]
pub fn t2(i: usize, j: usize) -> usize {
    3 * i + j
}

#[inline]
pub fn t3(i: usize, j: usize, k: usize) -> usize {
    9 * i + 3 * j + k
}

impl SpectralField {
    pub fn zeros(grid: GridSpec, rank: Rank) -> Self {
        let comps = (0..rank.components())
            .map(|_| vec![Complex64::default(); grid.len()])
            .collect();
        Self { grid, rank, hermitian: true, comps }
    }

    pub fn from_components(grid: GridSpec, rank: Rank, comps: Vec<Vec<Complex64>>, hermitian: bool) -> Result<Self> {
        if comps.len() != rank.components() {
            return Err(LabError::InvalidParameter(format!(
                "rank {} wants {} components, got {}",
                rank.name(),
                rank.components(),
                comps.len()
            )));
        }
        for c in &comps {
            if c.len() != grid.len() {
                return Err(LabError::ShapeMismatch { got: c.len(), want: grid.len() });
            }
        }
        Ok(Self { grid, rank, hermitian, comps })
    }

    #[inline]
    pub fn grid(&self) -> GridSpec {
        self.grid
    }

    #[inline]
    pub fn rank(&self) -> Rank {
        self.rank
    }

    #[inline]
    pub fn is_hermitian(&self) -> bool {
        self.hermitian
    }

    pub fn set_hermitian(&mut self, flag: bool) {
        self.hermitian = flag;
    }

    #[inline]
    pub fn comp(&self, i: usize) -> &[Complex64] {
        &self.comps[i]
    }

    #[inline]
    pub fn comp_mut(&mut self, i: usize) -> &mut Vec<Complex64> {
        &mut self.comps[i]
    }

    pub fn components(&self) -> &[Vec<Complex64>] {
        &self.comps
    }

    /// Mean value (the k = 0 coefficient) of each component.
    pub fn mean(&self) -> Vec<Complex64> {
        self.comps.iter().map(|c| c[0]).collect()
    }

    pub fn remove_mean(&mut self) {
        for c in &mut self.comps {
            c[0] = Complex64::default();
        }
    }

    /// Largest violation of c(-k) = conj(c(k)) over all components.
    pub fn hermitian_asymmetry(&self) -> f64 {
        let n = self.grid.n();
        let mut worst = 0.0f64;
        for c in &self.comps {
            for ix in 0..n {
                let jx = (n - ix) % n;
                for iy in 0..n {
                    let jy = (n - iy) % n;
                    for iz in 0..n {
                        let jz = (n - iz) % n;
                        let a = c[self.grid.flat(ix, iy, iz)];
                        let b = c[self.grid.flat(jx, jy, jz)];
                        let d = (a - b.conj()).norm();
                        if d > worst {
                            worst = d;
                        }
                    }
                }
            }
        }
        worst
    }

    /// Inverse transform to real samples. Requires the hermitian flag and
    /// checks the reconstruction is actually real.
    pub fn to_samples(&self) -> Result<SampleField> {
        if !self.hermitian {
            return Err(LabError::NotHermitian(f64::NAN));
        }
        let n = self.grid.n();
        let mut comps = Vec::with_capacity(self.comps.len());
        let mut scale = 0.0f64;
        let mut imag = 0.0f64;
        for c in &self.comps {
            let s = fft::inverse(c, n);
            let mut out = Vec::with_capacity(s.len());
            for v in &s {
                imag = imag.max(v.im.abs());
                scale = scale.max(v.re.abs());
                out.push(v.re);
            }
            comps.push(out);
        }
        if imag > 1e-8 * scale.max(1e-300) && imag > 1e-12 {
            return Err(LabError::NotHermitian(imag));
        }
        Ok(SampleField { grid: self.grid, rank: self.rank, comps })
    }

    /// Forward transform of real samples.
    pub fn from_samples(samples: &SampleField) -> Self {
        let n = samples.grid.n();
        let comps = samples
            .comps
            .iter()
            .map(|s| {
                let buf: Vec<Complex64> = s.iter().map(|&x| Complex64::new(x, 0.0)).collect();
                fft::forward(&buf, n)
            })
            .collect();
        Self { grid: samples.grid, rank: samples.rank, hermitian: true, comps }
    }

    /// Exact spectral translation: returns f(. + y).
    pub fn shift(&self, y: [f64; 3]) -> SpectralField {
        let mut out = self.clone();
        let n = self.grid.n();
        let phase_axis = |len: usize, dy: f64| -> Vec<Complex64> {
            (0..len)
                .map(|i| {
                    let k = self.grid.wavenumber(i) as f64;
                    Complex64::from_polar(1.0, k * dy)
                })
                .collect()
        };
        let px = phase_axis(n, y[0]);
        let py = phase_axis(n, y[1]);
        let pz = phase_axis(n, y[2]);
        for c in &mut out.comps {
            for ix in 0..n {
                for iy in 0..n {
                    let pxy = px[ix] * py[iy];
                    let base = (ix * n + iy) * n;
                    for iz in 0..n {
                        c[base + iz] *= pxy * pz[iz];
                    }
                }
            }
        }
        out
    }

    pub fn scaled(&self, factor: f64) -> SpectralField {
        let mut out = self.clone();
        for c in &mut out.comps {
            for v in c.iter_mut() {
                *v *= factor;
            }
        }
        out
    }

    pub fn add_assign_scaled(&mut self, other: &SpectralField, factor: f64) {
        debug_assert_eq!(self.grid, other.grid);
        for (a, b) in self.comps.iter_mut().zip(other.comps.iter()) {
            for (x, y) in a.iter_mut().zip(b.iter()) {
                *x += factor * y;
            }
        }
    }

    pub fn sub(&self, other: &SpectralField) -> Result<SpectralField> {
        if self.grid != other.grid {
            return Err(LabError::GridMismatch(self.grid.n(), other.grid.n()));
        }
        let mut out = self.clone();
        out.add_assign_scaled(other, -1.0);
        Ok(out)
    }

    /// Energy-type quadratic sum: sum_k |c_k|^2 over all components
    /// (equals the grid mean of |f|^2 by Parseval).
    pub fn spectral_l2_sq(&self) -> f64 {
        self.comps
            .iter()
            .map(|c| c.iter().map(|v| v.norm_sqr()).sum::<f64>())
            .sum()
    }

    /// Max coefficient magnitude (cheap size proxy).
    pub fn max_coeff(&self) -> f64 {
        self.comps
            .iter()
            .flat_map(|c| c.iter())
            .map(|v| v.norm())
            .fold(0.0, f64::max)
    }

    /// Relative round-trip error through sample space; diagnostic.
    pub fn round_trip_error(&self) -> Result<f64> {
        let back = SpectralField::from_samples(&self.to_samples()?);
        let mut num = 0.0f64;
        let mut den = 0.0f64;
        for (a, b) in self.comps.iter().zip(back.comps.iter()) {
            for (x, y) in a.iter().zip(b.iter()) {
                num = num.max((x - y).norm());
                den = den.max(x.norm());
            }
        }
        Ok(num / den.max(1e-300))
    }
}

/// Real sample values on the uniform grid, one flat array per component.
#[derive(Debug, Clone)]
pub struct SampleField {
    grid: GridSpec,
    rank: Rank,
    comps: Vec<Vec<f64>>,
}

impl SampleField {
    pub fn new(grid: GridSpec, rank: Rank, comps: Vec<Vec<f64>>) -> Result<Self> {
        if comps.len() != rank.components() {
            return Err(LabError::InvalidParameter(format!(
                "rank {} wants {} components, got {}",
                rank.name(),
                rank.components(),
                comps.len()
            )));
        }
        for c in &comps {
            if c.len() != grid.len() {
                return Err(LabError::ShapeMismatch { got: c.len(), want: grid.len() });
            }
        }
        Ok(Self { grid, rank, comps })
    }

    #[inline]
    pub fn grid(&self) -> GridSpec {
        self.grid
    }

    #[inline]
    pub fn rank(&self) -> Rank {
        self.rank
    }

    #[inline]
    pub fn comp(&self, i: usize) -> &[f64] {
        &self.comps[i]
    }

    pub fn comp_mut(&mut self, i: usize) -> &mut Vec<f64> {
        &mut self.comps[i]
    }

    pub fn components(&self) -> &[Vec<f64>] {
        &self.comps
    }

    /// Pointwise Euclidean magnitude across components at a flat index.
    #[inline]
    pub fn magnitude_at(&self, idx: usize) -> f64 {
        self.comps.iter().map(|c| c[idx] * c[idx]).sum::<f64>().sqrt()
    }

    /// sup over grid samples of the pointwise magnitude.
    pub fn max_abs(&self) -> f64 {
        let mut best = 0.0f64;
        for idx in 0..self.grid.len() {
            let m = self.magnitude_at(idx);
            if m > best {
                best = m;
            }
        }
        best
    }

    /// Discrete L^p norm including the cell volume: ((2pi)^3 mean |f|^p)^{1/p}.
    pub fn lp_norm(&self, p: f64) -> f64 {
        let len = self.grid.len() as f64;
        let mut acc = 0.0f64;
        for idx in 0..self.grid.len() {
            acc += self.magnitude_at(idx).powf(p);
        }
        (TWO_PI.powi(3) * acc / len).powf(1.0 / p)
    }

    pub fn mean(&self) -> Vec<f64> {
        self.comps
            .iter()
            .map(|c| c.iter().sum::<f64>() / c.len() as f64)
            .collect()
    }
}
