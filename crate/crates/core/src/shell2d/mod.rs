//! Discretization and assembly of the two-dimensional viscoelastic
//! membrane and flexural shell problems.

mod assembly;
mod space;
mod strain;

pub use assembly::{
    assemble, assemble_load, export_triplets, gamma_gram, gram_matrix, load_resultant,
    thickness_resultant, NormKind, ShellSystem,
};
pub use space::{ComponentSpace, FunctionSpace2d, ShellModel};
pub use strain::{gamma, gamma_row, rho, rho_row};
