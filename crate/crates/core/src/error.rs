//! Shared error type for the whole laboratory.

use thiserror::Error;

/// Errors surfaced by basis construction, operator algebra, solvers,
/// correlators and the cone solver.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("mode index {mode} out of range for {modes} modes")]
    ModeOutOfRange { mode: usize, modes: usize },

    #[error("basis dimension {dim} exceeds the configured cap {cap}")]
    DimensionOverflow { dim: usize, cap: usize },

    #[error("amplitude vector has length {got}, basis has {expected} states")]
    DimensionMismatch { got: usize, expected: usize },

    #[error("operator leaves sector: term does not conserve particle number")]
    OperatorLeavesSector,

    #[error("expectation value requires a normalized vector (|norm - 1| = {deviation:.3e})")]
    NotNormalized { deviation: f64 },

    #[error("operator flagged hermitian but matrix deviates from its adjoint by {deviation:.3e}")]
    NotHermitian { deviation: f64 },

    #[error("degenerate ground state: {count} levels within {tol:.3e}")]
    DegenerateGroundState { count: usize, tol: f64 },

    #[error("no convergence after {iterations} iterations (residual {residual:.3e})")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("ambiguous mode selection: modes {first} and {second} both within {tol:.3e} of {target}")]
    AmbiguousModeSelection {
        first: usize,
        second: usize,
        target: f64,
        tol: f64,
    },

    #[error("no mode at energy {target} (nearest is {nearest} at distance {distance:.3e}, tol {tol:.3e})")]
    NoModeAtEnergy {
        target: f64,
        nearest: usize,
        distance: f64,
        tol: f64,
    },

    #[error("probe current vanishes, alpha undefined (mean = {mean:.3e})")]
    VanishingProbeCurrent { mean: f64 },

    #[error("insufficient spectrum: filter window reaches {needed:.6} but spectrum ends at {available:.6}")]
    InsufficientSpectrum { needed: f64, available: f64 },

    #[error("state undefined: probe operator annihilates the state (norm {norm:.3e})")]
    StateUndefined { norm: f64 },

    #[error("empty mode, alpha undefined (occupation {occupation:.3e})")]
    EmptyMode { occupation: f64 },

    #[error("degenerate excitation: vanishing energy denominator for excited configuration {word:#b}")]
    DegenerateExcitation { word: u64 },

    #[error("alpha {alpha} outside closed-form domain (requires alpha >= 0)")]
    OutsideClosedFormDomain { alpha: f64 },

    #[error("unnormalizable decomposition: target functional has non-positive A1 component {value:.3e}")]
    UnnormalizableDecomposition { value: f64 },

    #[error("cone contract violated: reference functional must vanish on A1, got {value:.3e}")]
    ConeContractViolation { value: f64 },

    #[error("weights invalid: {reason}")]
    InvalidWeights { reason: String },

    #[error("spectrum table invalid: {reason}")]
    SpectrumTable { reason: String },

    #[error("spectrum grid too coarse: estimated quadrature error {estimate:.3e} exceeds tolerance {tol:.3e}; {hint}")]
    GridTooCoarse {
        estimate: f64,
        tol: f64,
        hint: String,
    },

    #[error("imaginary residue {residue:.3e} exceeds bound {bound:.3e}; spectrum is not a symmetrized correlator")]
    ImaginaryResidue { residue: f64, bound: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("config error: {0}")]
    Config(String),

    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
