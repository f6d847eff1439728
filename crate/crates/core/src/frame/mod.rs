//! Sum spaces of basis families, their operator images, collocation grids
//! and the truncated-SVD least-squares solve.

mod family;
mod grid;
mod space;
mod system;

pub use family::{BasisFamily, FamilyKind, Geometry, Point};
pub use grid::{collocation_grid_1d, collocation_grid_2d};
pub use space::{operator_image, OperatorImage, OperatorSpec, SumSpace};
pub use system::{
    assemble, expand, tsvd_solve, Cutoff, LsSystem, TsvdSolution, DEFAULT_RELATIVE_CUTOFF, MIN_OVERSAMPLING,
};
