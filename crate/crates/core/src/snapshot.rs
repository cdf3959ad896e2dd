//! HLD1 binary snapshot format, trajectory manifests, and CSV export.
//!
//! Layout (all integers 64-bit little-endian):
//!   bytes 0..4   magic "HLD1"
//!   u64 n        grid points per axis
//!   u64 rank     0 scalar, 1 vector, 2 tensor2, 3 tensor3
//!   u64 herm     hermitian flag (0/1)
//!   then rank-components * n^3 coefficients as (re f64, im f64) LE pairs,
//!   components in order, row-major k order within each component.

use crate::dynamics::{EnergyReport, SolverConfig, Trajectory};
use crate::error::{LabError, Result};
use crate::field::{Rank, SpectralField};
use crate::grid::GridSpec;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::io::{Read, Write};
use std::path::Path;

const MAGIC: &[u8; 4] = b"HLD1";

pub fn write_field(field: &SpectralField, path: &Path) -> Result<()> {
    let mut w = std::io::BufWriter::new(std::fs::File::create(path)?);
    w.write_all(MAGIC)?;
    w.write_all(&(field.grid().n() as u64).to_le_bytes())?;
    let rank_code: u64 = match field.rank() {
        Rank::Scalar => 0,
        Rank::Vector => 1,
        Rank::Tensor2 => 2,
        Rank::Tensor3 => 3,
    };
    w.write_all(&rank_code.to_le_bytes())?;
    w.write_all(&(field.is_hermitian() as u64).to_le_bytes())?;
    for c in field.components() {
        for v in c {
            w.write_all(&v.re.to_le_bytes())?;
            w.write_all(&v.im.to_le_bytes())?;
        }
    }
    Ok(())
}

pub fn read_field(path: &Path) -> Result<SpectralField> {
    let mut r = std::io::BufReader::new(std::fs::File::open(path)?);
    let mut magic = [0u8; 4];
    r.read_exact(&mut magic)?;
    if &magic != MAGIC {
        return Err(LabError::BadSnapshot("bad magic".into()));
    }
    let mut u64buf = [0u8; 8];
    r.read_exact(&mut u64buf)?;
    let n = u64::from_le_bytes(u64buf) as usize;
    r.read_exact(&mut u64buf)?;
    let rank = match u64::from_le_bytes(u64buf) {
        0 => Rank::Scalar,
        1 => Rank::Vector,
        2 => Rank::Tensor2,
        3 => Rank::Tensor3,
        other => return Err(LabError::BadSnapshot(format!("unknown rank code {other}"))),
    };
    r.read_exact(&mut u64buf)?;
    let herm = u64::from_le_bytes(u64buf) != 0;
    let grid = GridSpec::new(n)?;
    let mut comps = Vec::with_capacity(rank.components());
    let mut f64buf = [0u8; 8];
    for _ in 0..rank.components() {
        let mut c = Vec::with_capacity(grid.len());
        for _ in 0..grid.len() {
            r.read_exact(&mut f64buf)?;
            let re = f64::from_le_bytes(f64buf);
            r.read_exact(&mut f64buf)?;
            let im = f64::from_le_bytes(f64buf);
            c.push(Complex64::new(re, im));
        }
        comps.push(c);
    }
    SpectralField::from_components(grid, rank, comps, herm)
}

/// Sidecar JSON describing a stored trajectory.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TrajectoryManifest {
    pub times: Vec<f64>,
    pub config: SolverConfig,
    pub snapshot_files: Vec<String>,
}

pub fn write_trajectory(traj: &Trajectory, dir: &Path, stem: &str) -> Result<TrajectoryManifest> {
    std::fs::create_dir_all(dir)?;
    let mut files = Vec::new();
    for (i, snap) in traj.snapshots.iter().enumerate() {
        let name = format!("{stem}_{i:05}.hld1");
        write_field(snap, &dir.join(&name))?;
        files.push(name);
    }
    let manifest = TrajectoryManifest {
        times: traj.times.clone(),
        config: traj.config,
        snapshot_files: files,
    };
    let json = serde_json::to_string_pretty(&manifest)
        .map_err(|e| LabError::InvalidParameter(e.to_string()))?;
    std::fs::write(dir.join(format!("{stem}_manifest.json")), json)?;
    Ok(manifest)
}

pub fn read_trajectory(dir: &Path, stem: &str) -> Result<Trajectory> {
    let text = std::fs::read_to_string(dir.join(format!("{stem}_manifest.json")))?;
    let manifest: TrajectoryManifest =
        serde_json::from_str(&text).map_err(|e| LabError::BadSnapshot(e.to_string()))?;
    let mut snapshots = Vec::with_capacity(manifest.snapshot_files.len());
    for f in &manifest.snapshot_files {
        snapshots.push(read_field(&dir.join(f))?);
    }
    Ok(Trajectory { times: manifest.times, snapshots, config: manifest.config })
}

/// CSV of the z = 0 sample plane (for plotting): x,y,comp0,comp1,...
pub fn export_plane_csv(field: &SpectralField, path: &Path) -> Result<()> {
    let samples = field.to_samples()?;
    let grid = field.grid();
    let n = grid.n();
    let mut w = std::io::BufWriter::new(std::fs::File::create(path)?);
    write!(w, "x,y")?;
    for c in 0..field.rank().components() {
        write!(w, ",c{c}")?;
    }
    writeln!(w)?;
    for ix in 0..n {
        for iy in 0..n {
            write!(w, "{},{}", grid.coord(ix), grid.coord(iy))?;
            for c in 0..field.rank().components() {
                write!(w, ",{:.17e}", samples.comp(c)[grid.flat(ix, iy, 0)])?;
            }
            writeln!(w)?;
        }
    }
    Ok(())
}

/// Energy ledger as CSV: t,kinetic,dissipation_rate,dissipation_integral,total.
pub fn export_energy_csv(report: &EnergyReport, path: &Path) -> Result<()> {
    let mut w = std::io::BufWriter::new(std::fs::File::create(path)?);
    writeln!(w, "t,kinetic,dissipation_rate,dissipation_integral,total")?;
    for i in 0..report.times.len() {
        writeln!(
            w,
            "{:.17e},{:.17e},{:.17e},{:.17e},{:.17e}",
            report.times[i],
            report.kinetic[i],
            report.dissipation_rate[i],
            report.dissipation_integral[i],
            report.total[i]
        )?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rough::{make_rough_field, RandomFieldSpec};

    #[test]
    fn field_round_trip_is_bit_exact() {
        let dir = tempfile::tempdir().unwrap();
        let grid = GridSpec::new(16).unwrap();
        let spec = RandomFieldSpec { theta: 0.4, octaves: 2, modes_per_octave: 5, seed: 3, amplitude: 1.0 };
        let f = make_rough_field(&spec, grid, Rank::Vector).unwrap();
        let path = dir.path().join("f.hld1");
        write_field(&f, &path).unwrap();
        let g = read_field(&path).unwrap();
        assert_eq!(f.rank(), g.rank());
        assert_eq!(f.is_hermitian(), g.is_hermitian());
        for c in 0..3 {
            for (a, b) in f.comp(c).iter().zip(g.comp(c).iter()) {
                assert_eq!(a, b);
            }
        }
    }

    #[test]
    fn bad_magic_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("junk.hld1");
        std::fs::write(&path, b"NOPE____").unwrap();
        assert!(matches!(read_field(&path), Err(LabError::BadSnapshot(_))));
    }
}
