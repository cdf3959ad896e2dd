//! Periodic-box numerical laboratory for spectral fields on the 3-torus:
//! mollification and its commutators, fractional Laplacians, pressure
//! solvers with a potential-theory cross-check, Hoelder/Besov seminorm
//! estimation, and a pseudo-spectral integrator for incompressible flow
//! with fractional dissipation, plus the scaling scans built on top.

pub mod calculus;
pub mod dynamics;
pub mod error;
pub mod extension;
pub mod fft;
pub mod field;
pub mod fraclap;
pub mod grid;
pub mod identities;
pub mod mollify;
pub mod norms;
pub mod potential;
pub mod pressure;
pub mod prng;
pub mod rough;
pub mod scaling;
pub mod snapshot;

pub use error::{LabError, Result};
pub use num_complex::Complex64;
pub use field::{Rank, SampleField, SpectralField};
pub use grid::GridSpec;
