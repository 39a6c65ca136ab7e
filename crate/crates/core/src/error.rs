//! Error type shared by all library modules.

use crate::optimizer::OptimumRecord;

/// Library-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    #[error("matrix is not Hermitian: max asymmetry {asymmetry:.3e} exceeds tolerance {tolerance:.1e}")]
    NotHermitian { asymmetry: f64, tolerance: f64 },

    #[error("operator is not positive semidefinite: min eigenvalue {min_eigenvalue:.3e}")]
    NotPositiveSemidefinite { min_eigenvalue: f64 },

    #[error("photon energy must be positive, got {value}")]
    NonPositiveEnergy { value: f64 },

    #[error("polar angle {value} rad outside [0, pi]")]
    PolarAngleOutOfRange { value: f64 },

    #[error("azimuthal angle {value} rad outside [0, 2*pi)")]
    AzimuthOutOfRange { value: f64 },

    #[error("Stokes vector is not a normalized physical state: {reason}")]
    UnnormalizedState { reason: String },

    #[error("invalid scattering chain: {reason}")]
    InvalidChain { reason: String },

    #[error("operation is defined only for co-planar chains")]
    NotCoplanar,

    #[error("operation requires a normalized (filtered) POVM element, got a density-scaled one")]
    UnnormalizedPovm,

    #[error("bipartite state must have unit trace, got {trace}")]
    NotUnitTrace { trace: f64 },

    #[error("scatter count must be at least 1")]
    InvalidScatterCount,

    #[error("analyzing power must lie in [0, 1], got {value}")]
    AnalyzingPowerOutOfRange { value: f64 },

    #[error("parameter {name} = {value} outside {expected}")]
    ParameterOutOfRange {
        name: &'static str,
        value: f64,
        expected: &'static str,
    },

    #[error("no outcomes recorded: total count is zero")]
    EmptyCounts,

    #[error(
        "rejection envelope violated: density {density:.6e} exceeds envelope {envelope:.6e}"
    )]
    EnvelopeViolation { density: f64, envelope: f64 },

    #[error(
        "optimizer did not converge after {evals} evaluations (best beta so far {:.6})",
        best.beta_opt
    )]
    OptimizerDidNotConverge { evals: u64, best: Box<OptimumRecord> },

    #[error("probe system is singular and cannot be solved")]
    SingularProbeSystem,
}
