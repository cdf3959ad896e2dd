//! Uniform periodic grid on the torus [0, 2pi)^3.

use crate::error::{LabError, Result};
use serde::{Deserialize, Serialize};

pub const TWO_PI: f64 = 2.0 * std::f64::consts::PI;

/// Discretization of the periodic box: `n` samples per axis, side length 2pi.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridSpec {
    n: usize,
}

impl GridSpec {
    pub fn new(n: usize) -> Result<Self> {
        if n < 8 || n % 2 != 0 {
            return Err(LabError::BadGridSize(n));
        }
        Ok(Self { n })
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    /// Physical grid spacing h = 2pi / n.
    #[inline]
    pub fn spacing(&self) -> f64 {
        TWO_PI / self.n as f64
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.n * self.n * self.n
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        false
    }

    /// Signed integer wavenumber for a storage index along one axis.
    /// Index n/2 maps to +n/2 (the Nyquist mode; derivative-type multipliers zero it).
    #[inline]
    pub fn wavenumber(&self, idx: usize) -> i64 {
        let n = self.n as i64;
        let i = idx as i64;
        if i <= n / 2 {
            i
        } else {
            i - n
        }
    }

    /// Storage index for a signed wavenumber (wraps mod n).
    #[inline]
    pub fn index_of(&self, k: i64) -> usize {
        let n = self.n as i64;
        (k.rem_euclid(n)) as usize
    }

    #[inline]
    pub fn flat(&self, ix: usize, iy: usize, iz: usize) -> usize {
        (ix * self.n + iy) * self.n + iz
    }

    /// Is any component of the wavevector at this lattice site the Nyquist mode?
    #[inline]
    pub fn touches_nyquist(&self, ix: usize, iy: usize, iz: usize) -> bool {
        let ny = self.n / 2;
        ix == ny || iy == ny || iz == ny
    }

    /// Iterate (flat index, kx, ky, kz) over the whole lattice.
    pub fn iter_wavevectors(&self) -> impl Iterator<Item = (usize, i64, i64, i64)> + '_ {
        let n = self.n;
        (0..n).flat_map(move |ix| {
            let kx = self.wavenumber(ix);
            (0..n).flat_map(move |iy| {
                let ky = self.wavenumber(iy);
                (0..n).map(move |iz| {
                    let kz = self.wavenumber(iz);
                    (self.flat(ix, iy, iz), kx, ky, kz)
                })
            })
        })
    }

    /// Physical coordinate of a sample index along one axis.
    #[inline]
    pub fn coord(&self, idx: usize) -> f64 {
        idx as f64 * self.spacing()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_odd_and_tiny() {
        assert!(GridSpec::new(7).is_err());
        assert!(GridSpec::new(6).is_err());
        assert!(GridSpec::new(9).is_err());
        assert!(GridSpec::new(8).is_ok());
    }

    #[test]
    fn wavenumber_layout_matches_fft_convention() {
        let g = GridSpec::new(8).unwrap();
        let ks: Vec<i64> = (0..8).map(|i| g.wavenumber(i)).collect();
        assert_eq!(ks, vec![0, 1, 2, 3, 4, -3, -2, -1]);
        assert_eq!(g.index_of(-1), 7);
        assert_eq!(g.index_of(4), 4);
    }

    #[test]
    fn spacing_is_two_pi_over_n() {
        let g = GridSpec::new(16).unwrap();
        assert!((g.spacing() - TWO_PI / 16.0).abs() < 1e-15);
    }
}
