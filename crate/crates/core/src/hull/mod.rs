//! Monte Carlo laboratory: random Gaussian models and random projections,
//! exact face enumeration, empirical expected face numbers.

pub mod convex;
pub mod sample;
pub mod simulate;
pub mod zonotope;

pub use convex::{hull_f_vector, FVectorSample};
pub use sample::{random_orthonormal_frame, sample_gaussian, symmetrize, PointCloud};
pub use zonotope::zonotope_f_vector;
pub use simulate::{simulate_expected_f, SimConfig, SimModel, SimResult};
