//! Verified numerics for positive solutions of `-Δu = λu + u³` on the unit square.

pub mod branch;
pub mod defect;
pub mod eigen;
pub mod endgame;
pub mod interval;
pub mod pipeline;
pub mod scalar;
pub mod solver;
pub mod spectral;

pub use interval::{Interval, IntervalError, IntervalMatrix};
pub use scalar::Scalar;
pub use spectral::SineExpansion;
