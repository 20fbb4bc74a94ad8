use thiserror::Error;

use crate::halfint::SelectionOutcome;

/// Errors from geometry construction and semiclassical evaluation.
///
/// Exact evaluators never fail: invalid configurations produce exact zeros
/// with a reason. Everything downstream of the stationary-phase geometry can
/// fail, and the variants say why.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum Error {
    #[error("selection rules violated ({0})")]
    InvalidConfig(SelectionOutcome),
    #[error("degenerate (collinear) triangle")]
    DegenerateTriangle,
    #[error("|m| exceeds the vector length")]
    OutOfRange,
    #[error("classically forbidden configuration")]
    ClassicallyForbidden,
    #[error("polar singularity: triangle axis pinned to the z-axis")]
    PolarSingularity,
    #[error("polar-degenerate under every even column permutation")]
    PolarDegenerate,
    #[error("caustic: projected area vanishes")]
    Caustic,
    #[error("logarithm singularity: vanishing spinor component or determinant")]
    LogSingularity,
    #[error("coordinate singularity: vanishing z_s2 component")]
    CoordinateSingularity,
}

pub type Result<T> = core::result::Result<T, Error>;
