use thiserror::Error;

/// Errors shared by all torus-lab operations.
#[derive(Debug, Error)]
pub enum LabError {
    #[error("grid size must be even and at least 8, got {0}")]
    BadGridSize(usize),

    #[error("fields live on different grids ({0} vs {1})")]
    GridMismatch(usize, usize),

    #[error("operation requires rank {expected:?}, got {got:?}")]
    RankMismatch { expected: &'static str, got: &'static str },

    #[error("sample array has {got} entries, grid wants {want}")]
    ShapeMismatch { got: usize, want: usize },

    #[error("real-valued output requested for non-hermitian coefficients (asymmetry {0:.3e})")]
    NotHermitian(f64),

    #[error("mollifier scale {delta:.4e} is below the resolution floor 2h = {floor:.4e}")]
    UnderResolved { delta: f64, floor: f64 },

    #[error("mollifier scale {0:.4e} must be positive and below pi")]
    BadMollifierScale(f64),

    #[error("band limit violated: octave top {top} exceeds the representable band {limit} (n = {n})")]
    BandLimit { top: usize, limit: usize, n: usize },

    #[error("fractional order alpha = {0} outside (0, 1/2)")]
    BadAlpha(f64),

    #[error("singular-integral realization needs image_shells >= 1, got {0}")]
    BadImageShells(usize),

    #[error("input is not divergence-free: max spectral divergence {0:.3e} exceeds tolerance {1:.3e}")]
    NotSolenoidal(f64, f64),

    #[error("input must have zero mean, got |mean| = {0:.3e}")]
    NonzeroMean(f64),

    #[error("theta = 1/2 is the excluded borderline for the pressure gain; Schauder control degenerates there")]
    ThetaBorderline,

    #[error("ladder separation {0:.4e} below the resolution floor {1:.4e}")]
    SeparationBelowFloor(f64, f64),

    #[error("exponent fit needs at least {need} usable rungs, got {got}")]
    TooFewRungs { need: usize, got: usize },

    #[error("degenerate (constant) field: exponent is undefined")]
    DegenerateField,

    #[error("time step {dt:.3e} violates the CFL bound {bound:.3e}")]
    CflViolation { dt: f64, bound: f64 },

    #[error("trajectory needs at least {need} snapshots, got {got}")]
    TooFewSnapshots { need: usize, got: usize },

    #[error("scan requires alpha < theta when nu > 0 (alpha = {alpha}, theta = {theta})")]
    AlphaAboveTheta { alpha: f64, theta: f64 },

    #[error("total-energy modulus exponent has nonpositive denominator for theta = {theta}, alpha = {alpha}")]
    NonpositiveExponentDenominator { theta: f64, alpha: f64 },

    #[error("evaluation point at distance {dist:.3} lies in the boundary layer of the potential ball (radius {radius:.3})")]
    BoundaryLayer { dist: f64, radius: f64 },

    #[error("Monte-Carlo sample budget {0} is too small")]
    SampleBudget(usize),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("i/o failure: {0}")]
    Io(#[from] std::io::Error),

    #[error("snapshot file is not in HLD1 format: {0}")]
    BadSnapshot(String),
}

pub type Result<T> = std::result::Result<T, LabError>;
