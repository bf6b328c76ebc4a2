//! Simulation and exact computation for the t-deformed polynuclear growth model.

pub mod detform;
pub mod error;
pub mod lattice;
pub mod linalg;
pub mod patience;
pub mod png;
pub mod qmath;
pub mod rng;
pub mod stats;
pub mod symfun;
pub mod weights;

pub use error::{Error, Result};
