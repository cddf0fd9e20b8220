//! Viscoelastic shell models derived from thin three-dimensional bodies.
//!
//! The crate assembles and integrates two families of two-dimensional models
//! posed on the middle surface of a thin shell of half-thickness `eps`:
//!
//! * a *membrane* model, first order in the surface strain `gamma` and scaled
//!   by `eps`, and
//! * a *flexural* model, second order in the bending strain `rho` and scaled
//!   by `eps^3 / 3`,
//!
//! both for a Kelvin-Voigt material whose dimension reduction produces an
//! exponential long-term memory term `int_0^t exp(-k (t-s)) ... ds`.  A
//! desk-scale three-dimensional solver on the scaled slab `omega x (-1, 1)`
//! is included so the two-dimensional limits can be checked against the
//! parent model as the thickness goes to zero.

pub mod cases;
pub mod eigen;
pub mod error;
pub mod geometry;
pub mod material;
pub mod memory;
pub mod quadrature;
pub mod shell2d;
pub mod solver3d;
pub mod spline;
pub mod sym;
pub mod verify;

pub use error::{Result, ShellError};
