//! Error type shared by all solver modules.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum ShellError {
    /// The chart tangents are (numerically) linearly dependent at a point.
    #[error("degenerate chart: |a1 x a2| = {norm:.3e} at y = ({y1:.6}, {y2:.6})")]
    DegenerateChart { y1: f64, y2: f64, norm: f64 },

    /// `det(g1, g2, g3) <= 0`: the normal fibers of the shell cross at this
    /// half-thickness, so the 3D chart is no longer a diffeomorphism.
    #[error(
        "thickness too large: det(g1,g2,g3) = {det:.3e} at y = ({y1:.6}, {y2:.6}), x3 = {x3}, eps = {eps}"
    )]
    ThicknessTooLarge { y1: f64, y2: f64, x3: f64, eps: f64, det: f64 },

    /// Memory-model quantities need `theta > 0` and `theta + rho > 0`.
    #[error("zero viscosity: operation requires theta > 0 and theta + rho > 0")]
    ZeroViscosity,

    /// The constrained function space is empty.
    #[error("singular space: constrained function space has dimension 0")]
    SingularSpace,

    /// A factorization or linear solve failed.
    #[error("linear solve failure: {0}")]
    SolveFailure(String),

    #[error("unknown case `{0}`")]
    UnknownCase(String),

    #[error("unknown verification suite `{0}`")]
    UnknownSuite(String),

    /// No closed-form kernel integral is registered for this time profile.
    #[error("unsupported time profile: {0}")]
    UnsupportedProfile(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, ShellError>;
