use thiserror::Error;

/// Errors surfaced by the numerical kernels.
#[derive(Debug, Error)]
pub enum Error {
    #[error("parameter out of range: {0}")]
    OutOfRange(String),
    #[error("reflection axis is lightlike (|<d,d>| <= {eps})")]
    NullAxis { eps: f64 },
    #[error("reflection plane normal is lightlike (|<n,n>| <= {eps})")]
    NullNormal { eps: f64 },
    #[error("input maps to the pole of the chart at z = {z}")]
    PoleInput { z: num_complex::Complex64 },
    #[error("path comes within {dist:.3e} of a branch point (margin {margin:.3e})")]
    BranchPointProximity { dist: f64, margin: f64 },
    #[error("quadrature failed to reach tolerance {tol:.3e} (error estimate {err:.3e}, {panels} panels)")]
    QuadratureFailure { tol: f64, err: f64, panels: usize },
    #[error("cross-check failed for {what}: relative difference {rel:.3e} exceeds {tol:.3e}")]
    CrossCheckFailure { what: String, rel: f64, tol: f64 },
    #[error("lattice generators are numerically degenerate (det = {det:.3e})")]
    DegenerateLattice { det: f64 },
    #[error("basis columns are degenerate")]
    DegenerateBasis,
    #[error("seam vertex pair {index} mismatch: distance {dist:.3e} exceeds {tol:.3e}")]
    SeamMismatch { index: usize, dist: f64, tol: f64 },
    #[error("weld produced a mismatch: {0}")]
    WeldMismatch(String),
    #[error("quotient surface is not closed: {unpaired} unpaired boundary edges")]
    NotClosed { unpaired: usize },
    #[error("root finding failed: {0}")]
    RootFindFailure(String),
    #[error("no root found in the search range")]
    NoRootFound,
    #[error("singularity classification contradicts the criterion: {0}")]
    CriterionViolation(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
