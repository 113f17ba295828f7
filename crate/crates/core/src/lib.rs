//! Exact construction and certification of Hadamard-diagonalizable graphs with perfect and
//! pretty good state transfer under Laplacian dynamics.

pub mod analysis;
pub mod cubelike;
pub mod error;
pub mod families;
pub mod fixtures;
pub mod graphs;
pub mod hadamard;
pub mod matrix;
pub mod pst;
pub mod spectral;
pub mod time;

pub use error::{Error, Result};
pub use graphs::{DegreeProfile, MergeWeights, WeightedGraph};
pub use hadamard::HadamardMatrix;
pub use matrix::{QMatrix, Rational};
pub use time::PiMultiple;
