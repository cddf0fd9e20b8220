//! Differential geometry of the middle surface and of the thin 3D body
//! built on its normal fibers.

mod chart;
mod expansions;
mod frame;
mod metrics;

pub use chart::{Chart, Edge, EdgeSet, Rect};
pub use expansions::{loglog_slope, verify_expansions, ExpansionEntry, ExpansionReport};
pub use frame::{curvature_covariant_derivative, eval_frame, CurvatureGradient, SurfaceFrame};
pub use metrics::{epsilon0, eval_metrics3d, Metrics3d};

/// Tangents shorter than this (in chart length units) signal a genuinely
/// degenerate parametrization rather than roundoff.
pub const DEGENERACY_THRESHOLD: f64 = 1e-10;
