//! Trapped-ion style state-vector simulation of Grover's search built from
//! native `R(θ, φ)` and `XX(χ)` gates.

pub mod decompose;
pub mod error;
pub mod experiments;
pub mod gates;
pub mod grover;
pub mod metrics;
pub mod noise;
pub mod state;
pub mod tomography;

pub use error::{Error, Result};
