//! Nodal discontinuous Galerkin time-domain Maxwell solver on tetrahedral
//! meshes with a stretched-coordinate PML whose coefficients may vary inside
//! elements, stored either as dense per-element operators or through the
//! weight-adjusted approximation of the element mass matrices.

pub mod error;
pub mod harness;
pub mod mesh;
pub mod pml;
pub mod reference_element;
pub mod solver;

pub use error::{Error, Result};
