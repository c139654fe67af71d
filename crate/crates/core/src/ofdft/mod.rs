//! Real-space solver for the orbital-free density equation and its
//! bivector-coupled extension.

pub mod coupled;
pub mod eigen;
pub mod functionals;
pub mod grid;
pub mod poisson;
pub mod problem;
pub mod scf;

pub use coupled::{chemical_potential, coupled_residual, manufacture_potentials, GridField, PotentialSet};
pub use functionals::kinetic_functionals;
pub use grid::{laplacian, Boundary, Geometry, Grid};
pub use problem::{Problem, ProblemFile};
pub use scf::{lps_solve, scf_solve, Interaction, LpsSolution, Normalization, ScfConfig, ScfResult};
