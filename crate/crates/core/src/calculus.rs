//! Exact spectral differential operators and dealiased pointwise products.
//!
//! All derivative-type multipliers send k = 0 to 0 and zero the Nyquist
//! planes (k_i = n/2), keeping real fields real and symmetric.

use crate::error::{LabError, Result};
use crate::fft;
use crate::field::{t2, t3, Rank, SpectralField};
use crate::grid::GridSpec;
use num_complex::Complex64;

#[inline]
fn ik(k: i64) -> Complex64 {
    Complex64::new(0.0, k as f64)
}

fn expect_rank(f: &SpectralField, want: Rank, what: &'static str) -> Result<()> {
    if f.rank() != want {
        return Err(LabError::RankMismatch { expected: what, got: f.rank().name() });
    }
    Ok(())
}

/// grad f: scalar -> vector, (grad f)_i = ik_i f.
pub fn grad(f: &SpectralField) -> Result<SpectralField> {
    expect_rank(f, Rank::Scalar, "scalar")?;
    let grid = f.grid();
    let mut out = SpectralField::zeros(grid, Rank::Vector);
    for (flat, kx, ky, kz) in grid.iter_wavevectors() {
        let (ix, iy, iz) = unflatten(grid, flat);
        if grid.touches_nyquist(ix, iy, iz) {
            continue;
        }
        let v = f.comp(0)[flat];
        out.comp_mut(0)[flat] = ik(kx) * v;
        out.comp_mut(1)[flat] = ik(ky) * v;
        out.comp_mut(2)[flat] = ik(kz) * v;
    }
    Ok(out)
}

#[inline]
fn unflatten(grid: GridSpec, flat: usize) -> (usize, usize, usize) {
    let n = grid.n();
    (flat / (n * n), (flat / n) % n, flat % n)
}

/// div u: vector -> scalar.
pub fn divergence(u: &SpectralField) -> Result<SpectralField> {
    expect_rank(u, Rank::Vector, "vector")?;
    let grid = u.grid();
    let mut out = SpectralField::zeros(grid, Rank::Scalar);
    for (flat, kx, ky, kz) in grid.iter_wavevectors() {
        let (ix, iy, iz) = unflatten(grid, flat);
        if grid.touches_nyquist(ix, iy, iz) {
            continue;
        }
        out.comp_mut(0)[flat] =
            ik(kx) * u.comp(0)[flat] + ik(ky) * u.comp(1)[flat] + ik(kz) * u.comp(2)[flat];
    }
    Ok(out)
}

/// Row divergence of a rank-2 tensor: (div T)_i = ik_j T_ij.
pub fn div_tensor2(t: &SpectralField) -> Result<SpectralField> {
    expect_rank(t, Rank::Tensor2, "tensor2")?;
    let grid = t.grid();
    let mut out = SpectralField::zeros(grid, Rank::Vector);
    for (flat, kx, ky, kz) in grid.iter_wavevectors() {
        let (ix, iy, iz) = unflatten(grid, flat);
        if grid.touches_nyquist(ix, iy, iz) {
            continue;
        }
        let kv = [kx, ky, kz];
        for i in 0..3 {
            let mut acc = Complex64::default();
            for j in 0..3 {
                acc += ik(kv[j]) * t.comp(t2(i, j))[flat];
            }
            out.comp_mut(i)[flat] = acc;
        }
    }
    Ok(out)
}

/// div div T: tensor2 -> scalar, = (ik_i)(ik_j) T_ij.
pub fn div_div(t: &SpectralField) -> Result<SpectralField> {
    expect_rank(t, Rank::Tensor2, "tensor2")?;
    let grid = t.grid();
    let mut out = SpectralField::zeros(grid, Rank::Scalar);
    for (flat, kx, ky, kz) in grid.iter_wavevectors() {
        let (ix, iy, iz) = unflatten(grid, flat);
        if grid.touches_nyquist(ix, iy, iz) {
            continue;
        }
        let kv = [kx as f64, ky as f64, kz as f64];
        let mut acc = Complex64::default();
        for i in 0..3 {
            for j in 0..3 {
                acc -= kv[i] * kv[j] * t.comp(t2(i, j))[flat];
            }
        }
        out.comp_mut(0)[flat] = acc;
    }
    Ok(out)
}

/// div div div T: tensor3 -> scalar, = (ik_i)(ik_j)(ik_l) T_ijl = -i k_i k_j k_l T_ijl.
pub fn div_div_div(t: &SpectralField) -> Result<SpectralField> {
    expect_rank(t, Rank::Tensor3, "tensor3")?;
    let grid = t.grid();
    let mut out = SpectralField::zeros(grid, Rank::Scalar);
    for (flat, kx, ky, kz) in grid.iter_wavevectors() {
        let (ix, iy, iz) = unflatten(grid, flat);
        if grid.touches_nyquist(ix, iy, iz) {
            continue;
        }
        let kv = [kx as f64, ky as f64, kz as f64];
        let mut acc = Complex64::default();
        for i in 0..3 {
            for j in 0..3 {
                for l in 0..3 {
                    acc += Complex64::new(0.0, -kv[i] * kv[j] * kv[l]) * t.comp(t3(i, j, l))[flat];
                }
            }
        }
        out.comp_mut(0)[flat] = acc;
    }
    Ok(out)
}

/// curl u: vector -> vector.
pub fn curl(u: &SpectralField) -> Result<SpectralField> {
    expect_rank(u, Rank::Vector, "vector")?;
    let grid = u.grid();
    let mut out = SpectralField::zeros(grid, Rank::Vector);
    for (flat, kx, ky, kz) in grid.iter_wavevectors() {
        let (ix, iy, iz) = unflatten(grid, flat);
        if grid.touches_nyquist(ix, iy, iz) {
            continue;
        }
        let (ux, uy, uz) = (u.comp(0)[flat], u.comp(1)[flat], u.comp(2)[flat]);
        out.comp_mut(0)[flat] = ik(ky) * uz - ik(kz) * uy;
        out.comp_mut(1)[flat] = ik(kz) * ux - ik(kx) * uz;
        out.comp_mut(2)[flat] = ik(kx) * uy - ik(ky) * ux;
    }
    Ok(out)
}

/// Leray projection onto divergence-free fields: u - k (k.u)/|k|^2, k != 0.
/// The k = 0 mode passes through; Nyquist planes are zeroed.
pub fn leray_project(u: &SpectralField) -> Result<SpectralField> {
    expect_rank(u, Rank::Vector, "vector")?;
    let grid = u.grid();
    let mut out = u.clone();
    for (flat, kx, ky, kz) in grid.iter_wavevectors() {
        let (ix, iy, iz) = unflatten(grid, flat);
        if grid.touches_nyquist(ix, iy, iz) {
            for i in 0..3 {
                out.comp_mut(i)[flat] = Complex64::default();
            }
            continue;
        }
        let k2 = (kx * kx + ky * ky + kz * kz) as f64;
        if k2 == 0.0 {
            continue;
        }
        let kv = [kx as f64, ky as f64, kz as f64];
        let dot = kv[0] * u.comp(0)[flat] + kv[1] * u.comp(1)[flat] + kv[2] * u.comp(2)[flat];
        for i in 0..3 {
            out.comp_mut(i)[flat] = u.comp(i)[flat] - kv[i] * dot / k2;
        }
    }
    Ok(out)
}

/// Max spectral divergence magnitude relative to the gradient scale of u.
pub fn relative_divergence(u: &SpectralField) -> Result<f64> {
    let d = divergence(u)?;
    let mut dmax = 0.0f64;
    for v in d.comp(0) {
        dmax = dmax.max(v.norm());
    }
    let grid = u.grid();
    let mut gscale = 0.0f64;
    for (flat, kx, ky, kz) in grid.iter_wavevectors() {
        let kn = ((kx * kx + ky * ky + kz * kz) as f64).sqrt();
        for i in 0..3 {
            gscale = gscale.max(kn * u.comp(i)[flat].norm());
        }
    }
    Ok(dmax / gscale.max(1e-300))
}

// ---------------------------------------------------------------------------
// Dealiased products (zero padding)
// ---------------------------------------------------------------------------

/// Padded grid size for alias-free quadratic products (3/2 rule).
pub fn quadratic_pad(n: usize) -> usize {
    let m = (3 * n).div_ceil(2);
    m + m % 2
}

/// Embed coefficients of an n-grid into an m-grid (m >= n), zero elsewhere.
/// Nyquist planes of the source are dropped.
fn embed(c: &[Complex64], from: GridSpec, to: GridSpec) -> Vec<Complex64> {
    let n = from.n();
    let mut out = vec![Complex64::default(); to.len()];
    for ix in 0..n {
        let kx = from.wavenumber(ix);
        if kx.unsigned_abs() as usize == n / 2 {
            continue;
        }
        let ox = to.index_of(kx);
        for iy in 0..n {
            let ky = from.wavenumber(iy);
            if ky.unsigned_abs() as usize == n / 2 {
                continue;
            }
            let oy = to.index_of(ky);
            for iz in 0..n {
                let kz = from.wavenumber(iz);
                if kz.unsigned_abs() as usize == n / 2 {
                    continue;
                }
                let oz = to.index_of(kz);
                out[to.flat(ox, oy, oz)] = c[from.flat(ix, iy, iz)];
            }
        }
    }
    out
}

/// Restrict coefficients of an m-grid back to an n-grid (keeps |k_i| < n/2).
fn restrict(c: &[Complex64], from: GridSpec, to: GridSpec) -> Vec<Complex64> {
    let n = to.n();
    let mut out = vec![Complex64::default(); to.len()];
    for ix in 0..n {
        let kx = to.wavenumber(ix);
        if kx.unsigned_abs() as usize == n / 2 {
            continue;
        }
        for iy in 0..n {
            let ky = to.wavenumber(iy);
            if ky.unsigned_abs() as usize == n / 2 {
                continue;
            }
            for iz in 0..n {
                let kz = to.wavenumber(iz);
                if kz.unsigned_abs() as usize == n / 2 {
                    continue;
                }
                out[to.flat(ix, iy, iz)] =
                    c[from.flat(from.index_of(kx), from.index_of(ky), from.index_of(kz))];
            }
        }
    }
    out
}

/// Sample each listed component on the padded grid (complex samples, so
/// non-hermitian inputs multiply correctly too).
fn padded_samples(f: &SpectralField, pad: GridSpec) -> Vec<Vec<Complex64>> {
    let m = pad.n();
    f.components()
        .iter()
        .map(|c| {
            let big = embed(c, f.grid(), pad);
            fft::inverse(&big, m)
        })
        .collect()
}

fn product_to_coeffs(a: &[Complex64], b: &[Complex64], pad: GridSpec, out_grid: GridSpec) -> Vec<Complex64> {
    let buf: Vec<Complex64> = a.iter().zip(b.iter()).map(|(&x, &y)| x * y).collect();
    let coeffs = fft::forward(&buf, pad.n());
    restrict(&coeffs, pad, out_grid)
}

/// Alias-free pointwise product of two scalar fields.
pub fn dealiased_scalar_product(f: &SpectralField, g: &SpectralField) -> Result<SpectralField> {
    expect_rank(f, Rank::Scalar, "scalar")?;
    expect_rank(g, Rank::Scalar, "scalar")?;
    if f.grid() != g.grid() {
        return Err(LabError::GridMismatch(f.grid().n(), g.grid().n()));
    }
    let grid = f.grid();
    let pad = GridSpec::new(quadratic_pad(grid.n()))?;
    let fs = padded_samples(f, pad);
    let gs = padded_samples(g, pad);
    let c = product_to_coeffs(&fs[0], &gs[0], pad, grid);
    SpectralField::from_components(grid, Rank::Scalar, vec![c], f.is_hermitian() && g.is_hermitian())
}

/// Alias-free outer product of two vector fields: (u (x) v)_ij = u_i v_j.
pub fn dealiased_outer(u: &SpectralField, v: &SpectralField) -> Result<SpectralField> {
    expect_rank(u, Rank::Vector, "vector")?;
    expect_rank(v, Rank::Vector, "vector")?;
    if u.grid() != v.grid() {
        return Err(LabError::GridMismatch(u.grid().n(), v.grid().n()));
    }
    let grid = u.grid();
    let pad = GridSpec::new(quadratic_pad(grid.n()))?;
    let us = padded_samples(u, pad);
    let vs = padded_samples(v, pad);
    let mut comps = vec![Vec::new(); 9];
    for i in 0..3 {
        for j in 0..3 {
            comps[t2(i, j)] = product_to_coeffs(&us[i], &vs[j], pad, grid);
        }
    }
    SpectralField::from_components(grid, Rank::Tensor2, comps, u.is_hermitian() && v.is_hermitian())
}

/// Alias-free triple outer product (v (x) w (x) z)_ijl, padded by 2x for cubic terms.
pub fn dealiased_triple_outer(
    v: &SpectralField,
    w: &SpectralField,
    z: &SpectralField,
) -> Result<SpectralField> {
    expect_rank(v, Rank::Vector, "vector")?;
    expect_rank(w, Rank::Vector, "vector")?;
    expect_rank(z, Rank::Vector, "vector")?;
    if v.grid() != w.grid() || v.grid() != z.grid() {
        return Err(LabError::GridMismatch(v.grid().n(), w.grid().n()));
    }
    let grid = v.grid();
    let pad = GridSpec::new(2 * grid.n())?;
    let vs = padded_samples(v, pad);
    let ws = padded_samples(w, pad);
    let zs = padded_samples(z, pad);
    let mut comps = vec![Vec::new(); 27];
    for i in 0..3 {
        for j in 0..3 {
            // share the v_i w_j product across the l loop
            let vw: Vec<Complex64> = vs[i].iter().zip(ws[j].iter()).map(|(&a, &b)| a * b).collect();
            for l in 0..3 {
                comps[t3(i, j, l)] = product_to_coeffs(&vw, &zs[l], pad, grid);
            }
        }
    }
    SpectralField::from_components(
        grid,
        Rank::Tensor3,
        comps,
        v.is_hermitian() && w.is_hermitian() && z.is_hermitian(),
    )
}

/// Zero every mode with any |k_i| above the cut (plus the Nyquist planes).
/// Matches the integrator's 2/3-rule state band.
pub fn band_truncate(f: &SpectralField, cut: i64) -> SpectralField {
    let grid = f.grid();
    let n = grid.n();
    let mut out = f.clone();
    for ci in 0..f.rank().components() {
        let c = out.comp_mut(ci);
        for (flat, kx, ky, kz) in grid.iter_wavevectors() {
            let (ix, iy, iz) = (flat / (n * n), (flat / n) % n, flat % n);
            if kx.abs() > cut || ky.abs() > cut || kz.abs() > cut || grid.touches_nyquist(ix, iy, iz)
            {
                c[flat] = Complex64::default();
            }
        }
    }
    out
}

/// Frobenius pairing integral over the box: int sum_c f_c g_c dx, via Parseval.
pub fn pairing_integral(f: &SpectralField, g: &SpectralField) -> Result<f64> {
    if f.grid() != g.grid() {
        return Err(LabError::GridMismatch(f.grid().n(), g.grid().n()));
    }
    if f.rank() != g.rank() {
        return Err(LabError::RankMismatch { expected: f.rank().name(), got: g.rank().name() });
    }
    let vol = crate::grid::TWO_PI.powi(3);
    let mut acc = 0.0;
    for (a, b) in f.components().iter().zip(g.components().iter()) {
        for (x, y) in a.iter().zip(b.iter()) {
            acc += (x * y.conj()).re;
        }
    }
    Ok(vol * acc)
}
