//! Expected face numbers of random projections of regular polytopes, solid
//! angles of their cones, and an empirical convex hull laboratory for random
//! Gaussian polytope models.

pub mod angle;
pub mod error;
pub mod expected;
pub mod hull;
pub mod linalg;
pub mod nnls;
pub mod polytope;
pub mod rng;
pub mod special;

pub use angle::{AngleEngine, AngleEstimate, MCConfig, Method};
pub use error::{Error, Result};
pub use expected::{ExpectedFVector, FaceEstimate, GaussianModel, Subject};
pub use hull::{FVectorSample, PointCloud, SimConfig, SimModel, SimResult};
pub use polytope::{FaceScope, Family, RegularPolytope};
