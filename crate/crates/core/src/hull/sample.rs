//! Random point clouds and random projections.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::linalg::{coordinates, orthonormalize};

/// Points in `R^d`.
#[derive(Clone, Debug, PartialEq)]
pub struct PointCloud {
    pub d: usize,
    pub points: Vec<Vec<f64>>,
}

impl PointCloud {
    pub fn new(d: usize, points: Vec<Vec<f64>>) -> Self {
        debug_assert!(points.iter().all(|p| p.len() == d));
        Self { d, points }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

fn gaussian_vector<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Vec<f64> {
    (0..dim).map(|_| rng.sample(StandardNormal)).collect()
}

/// `n` independent standard Gaussian points of `R^d`.
pub fn sample_gaussian<R: Rng + ?Sized>(n: usize, d: usize, rng: &mut R) -> PointCloud {
    PointCloud::new(d, (0..n).map(|_| gaussian_vector(d, rng)).collect())
}

/// The cloud together with the antipode of every point.
pub fn symmetrize(cloud: &PointCloud) -> PointCloud {
    let mut points = cloud.points.clone();
    points.extend(cloud.points.iter().map(|p| p.iter().map(|x| -x).collect::<Vec<_>>()));
    PointCloud::new(cloud.d, points)
}

/// `d` orthonormal vectors of `R^big_n` spanning a uniform random subspace
/// (`d <= big_n`).
pub fn random_orthonormal_frame<R: Rng + ?Sized>(big_n: usize, d: usize, rng: &mut R) -> Vec<Vec<f64>> {
    assert!(d <= big_n, "frame of {d} vectors in dimension {big_n}");
    loop {
        let raw: Vec<Vec<f64>> = (0..d).map(|_| gaussian_vector(big_n, rng)).collect();
        let frame = orthonormalize(&raw, 1e-9);
        if frame.len() == d {
            return frame;
        }
    }
}

/// Coordinates of `points` projected onto the span of `frame`.
pub fn project(points: &[Vec<f64>], frame: &[Vec<f64>]) -> PointCloud {
    PointCloud::new(frame.len(), points.iter().map(|p| coordinates(p, frame)).collect())
}
