//! Fixed inputs shared by the benchmarks.

use polyshadow::hull::{sample_gaussian, PointCloud};
use polyshadow::rng::stream_rng;

/// Gaussian cloud that is identical on every call with the same arguments.
pub fn gaussian_cloud(n: usize, d: usize, seed: u64) -> PointCloud {
    sample_gaussian(n, d, &mut stream_rng(seed, 0))
}

/// Generators of a zonotope in general position.
pub fn zonotope_generators(n: usize, d: usize, seed: u64) -> Vec<Vec<f64>> {
    gaussian_cloud(n, d, seed).points
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_are_stable() {
        assert_eq!(gaussian_cloud(20, 3, 1).points, gaussian_cloud(20, 3, 1).points);
        assert_eq!(zonotope_generators(6, 3, 2).len(), 6);
    }
}
