//! Desk-scale reference solver for the scaled three-dimensional problem on
//! `omega x (-1, 1)`, used to validate the two-dimensional limits.

mod assembly;
mod mesh;

pub use assembly::{
    assemble_3d, eval_average, l2_error_split, scaled_strain, thickness_average, System3d,
};
pub use mesh::{Lagrange1d, Mesh3d};
