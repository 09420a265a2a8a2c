//! Normal cones, internal cones, and their solid angles.
//!
//! The angle of a cone `C` is the probability that a standard Gaussian
//! vector of `lin(C)` falls in `C`. Cube angles are exact powers of two and a
//! few codimension-0/1 cases are exact for every family; everything else is
//! estimated by sampling Gaussian vectors in the cone's linear hull and
//! asking a membership oracle.

use std::collections::HashMap;
use std::fmt;
use std::fs::OpenOptions;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use parking_lot::Mutex;
use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::{barycenter, coordinates, dot, norm, orthogonal_complement, orthonormalize, sub};
use crate::nnls::nnls;
use crate::polytope::{canonical_face, vertices, Family};
use crate::rng::{derive_seed, stream_rng};

/// Samples drawn from one random stream inside [`cone_angle`].
pub const BATCH_SIZE: u64 = 8192;

const FRAME_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Method {
    Exact,
    MonteCarlo,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Exact => "exact",
            Method::MonteCarlo => "monte_carlo",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct AngleEstimate {
    pub value: f64,
    pub std_error: f64,
    pub method: Method,
    pub samples: u64,
    /// Exact rational value, when `method` is exact.
    pub exact: Option<BigRational>,
}

impl AngleEstimate {
    pub fn exact(value: BigRational) -> Self {
        Self {
            value: ratio_to_f64(&value),
            std_error: 0.0,
            method: Method::Exact,
            samples: 0,
            exact: Some(value),
        }
    }

    /// `2^-e` as an exact angle.
    pub fn exact_pow2(e: usize) -> Self {
        Self::exact(BigRational::new(BigInt::one(), BigInt::one() << e))
    }

    pub fn from_hits(hits: u64, samples: u64) -> Self {
        let p = hits as f64 / samples as f64;
        Self {
            value: p,
            std_error: (p * (1.0 - p) / samples as f64).sqrt(),
            method: Method::MonteCarlo,
            samples,
            exact: None,
        }
    }
}

pub(crate) fn ratio_to_f64(r: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MCConfig {
    pub samples: u64,
    pub seed: u64,
}

impl Default for MCConfig {
    fn default() -> Self {
        Self {
            samples: 1_000_000,
            seed: 0,
        }
    }
}

/// How Gaussian vectors of the cone's linear hull are generated.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpanSampler {
    /// Standard normal coordinates in the orthonormal frame.
    Frame,
    /// Orthogonal projection of an ambient standard normal vector onto
    /// `{u : u_0 = ... = u_{block-1}}`, intersected with `{sum u = 0}` when
    /// `centered`. Same distribution as `Frame` when the frame spans this
    /// subspace, at linear instead of quadratic cost per sample.
    EqualBlock { block: usize, centered: bool },
}

/// Membership oracle of a cone.
#[derive(Clone, Debug)]
pub enum Membership {
    /// `u` is normal to `P` at `apex` iff `<u, v - apex> <= 0` for every vertex `v`.
    NormalCone {
        apex: Vec<f64>,
        /// Nonzero entries of every vertex of `P`.
        vertices: Vec<Vec<(usize, f64)>>,
    },
    /// `u` lies in `pos(generators)`, decided by nonnegative least squares.
    PositiveHull { generators: Vec<Vec<f64>> },
}

#[derive(Clone, Debug)]
pub struct Cone {
    frame: Vec<Vec<f64>>,
    ambient_dim: usize,
    membership: Membership,
    sampler: SpanSampler,
    /// Generators in frame coordinates (positive hulls only).
    generator_coords: Vec<Vec<f64>>,
}

impl Cone {
    pub fn frame(&self) -> &[Vec<f64>] {
        &self.frame
    }

    /// Dimension of the linear hull.
    pub fn dim(&self) -> usize {
        self.frame.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn membership(&self) -> &Membership {
        &self.membership
    }

    pub fn sampler(&self) -> SpanSampler {
        self.sampler
    }

    /// Membership of an ambient vector assumed to lie in the linear hull.
    pub fn contains(&self, u: &[f64]) -> Option<bool> {
        match &self.membership {
            Membership::NormalCone { apex, vertices } => Some(normal_cone_contains(apex, vertices, u)),
            Membership::PositiveHull { .. } => {
                self.positive_hull_contains_coords(&coordinates(u, &self.frame))
            }
        }
    }

    fn positive_hull_contains_coords(&self, z: &[f64]) -> Option<bool> {
        let sol = nnls(&self.generator_coords, z)?;
        Some(sol.residual <= 1e-8 * (1.0 + norm(z)))
    }

    /// Orthogonal projection of an ambient vector onto the linear hull,
    /// using the frame.
    pub fn project(&self, v: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.ambient_dim];
        for f in &self.frame {
            let c = dot(v, f);
            for (o, fi) in out.iter_mut().zip(f) {
                *o += c * fi;
            }
        }
        out
    }
}

fn normal_cone_contains(apex: &[f64], vertices: &[Vec<(usize, f64)>], u: &[f64]) -> bool {
    let level = dot(u, apex);
    let tol = 1e-12 * (1.0 + norm(u));
    vertices
        .iter()
        .all(|v| v.iter().map(|&(i, x)| u[i] * x).sum::<f64>() - level <= tol)
}

fn sparse(v: &[f64]) -> Vec<(usize, f64)> {
    v.iter()
        .enumerate()
        .filter(|(_, x)| **x != 0.0)
        .map(|(i, &x)| (i, x))
        .collect()
}

/// The normal cone `Nor(P_n, Q_{g,n})`, taken inside the affine hull of `P_n`.
pub fn normal_cone(family: Family, n: usize, g: usize) -> Result<Cone> {
    if n >= 1 && g >= n {
        return Err(Error::InvalidFace(format!(
            "normal cone needs g < n, got g = {g}, n = {n}"
        )));
    }
    let face = canonical_face(family, n, g)?;
    let verts = vertices(family, n)?;
    let apex = barycenter(&face.vertices);
    let space: Vec<Vec<f64>> = verts.iter().map(|v| sub(v, &verts[0])).collect();
    let face_span: Vec<Vec<f64>> = face.vertices.iter().map(|v| sub(v, &apex)).collect();
    let frame = orthogonal_complement(&space, &face_span, FRAME_TOL);
    debug_assert_eq!(frame.len(), n - g);
    let sampler = match family {
        Family::Simplex => SpanSampler::EqualBlock {
            block: g + 1,
            centered: true,
        },
        Family::Crosspolytope => SpanSampler::EqualBlock {
            block: g + 1,
            centered: false,
        },
        Family::Cube => SpanSampler::Frame,
    };
    Ok(Cone {
        ambient_dim: family.ambient_dim(n),
        frame,
        membership: Membership::NormalCone {
            apex,
            vertices: verts.iter().map(|v| sparse(v)).collect(),
        },
        sampler,
        generator_coords: Vec::new(),
    })
}

/// The internal cone `A(Q_{k,n}, Q_{g,n}) = pos(Q_{g,n} - x)` with `x` the
/// barycenter of `Q_{k,n}`.
pub fn internal_cone(family: Family, n: usize, k: usize, g: usize) -> Result<Cone> {
    if k > g {
        return Err(Error::InvalidPair { k, g });
    }
    let outer = canonical_face(family, n, g)?;
    let inner = canonical_face(family, n, k)?;
    let apex = barycenter(&inner.vertices);
    let generators: Vec<Vec<f64>> = outer
        .vertices
        .iter()
        .map(|v| sub(v, &apex))
        .filter(|v| norm(v) > 0.0)
        .collect();
    let frame = orthonormalize(&generators, FRAME_TOL);
    debug_assert_eq!(frame.len(), g);
    let generator_coords = generators.iter().map(|v| coordinates(v, &frame)).collect();
    Ok(Cone {
        ambient_dim: family.ambient_dim(n),
        frame,
        membership: Membership::PositiveHull { generators },
        sampler: SpanSampler::Frame,
        generator_coords,
    })
}

fn sample_ambient<R: Rng>(cone: &Cone, rng: &mut R, z: &mut [f64], u: &mut [f64]) {
    match cone.sampler {
        SpanSampler::Frame => {
            for zi in z.iter_mut() {
                *zi = rng.sample(StandardNormal);
            }
            u.iter_mut().for_each(|x| *x = 0.0);
            for (zi, f) in z.iter().zip(&cone.frame) {
                for (ui, fi) in u.iter_mut().zip(f) {
                    *ui += zi * fi;
                }
            }
        }
        SpanSampler::EqualBlock { block, centered } => {
            for ui in u.iter_mut() {
                *ui = rng.sample(StandardNormal);
            }
            let mean = u[..block].iter().sum::<f64>() / block as f64;
            u[..block].iter_mut().for_each(|x| *x = mean);
            if centered {
                let total = u.iter().sum::<f64>() / u.len() as f64;
                u.iter_mut().for_each(|x| *x -= total);
            }
        }
    }
}

/// Monte Carlo estimate of the angle of `cone`.
///
/// `cfg.seed` keys the random streams directly; batch `b` of
/// [`BATCH_SIZE`] samples always uses stream `b`, so the estimate does not
/// depend on the number of worker threads.
pub fn cone_angle(cone: &Cone, cfg: &MCConfig) -> Result<AngleEstimate> {
    if cone.dim() == 0 {
        return Ok(AngleEstimate::exact(BigRational::one()));
    }
    if cfg.samples == 0 {
        return Err(Error::InvalidArgument("angle estimate needs samples >= 1".into()));
    }
    let batches = cfg.samples.div_ceil(BATCH_SIZE);
    let hits = (0..batches)
        .into_par_iter()
        .map(|b| {
            let mut rng = stream_rng(cfg.seed, b);
            let count = BATCH_SIZE.min(cfg.samples - b * BATCH_SIZE);
            let mut z = vec![0.0; cone.dim()];
            let mut u = vec![0.0; cone.ambient_dim];
            let mut hits = 0u64;
            for i in 0..count {
                let inside = match &cone.membership {
                    Membership::NormalCone { apex, vertices } => {
                        sample_ambient(cone, &mut rng, &mut z, &mut u);
                        normal_cone_contains(apex, vertices, &u)
                    }
                    Membership::PositiveHull { .. } => {
                        for zi in z.iter_mut() {
                            *zi = rng.sample(StandardNormal);
                        }
                        cone.positive_hull_contains_coords(&z).ok_or_else(|| Error::Numeric {
                            sample: b * BATCH_SIZE + i,
                            message: "nonnegative least squares did not converge".into(),
                        })?
                    }
                };
                hits += u64::from(inside);
            }
            Ok(hits)
        })
        .collect::<Result<Vec<u64>>>()?
        .into_iter()
        .sum();
    Ok(AngleEstimate::from_hits(hits, cfg.samples))
}

const EXTERNAL_TAG: u64 = 0xE7;
const INTERNAL_TAG: u64 = 0x17;

fn half() -> BigRational {
    BigRational::new(BigInt::one(), BigInt::from(2))
}

/// The external angle `gamma(Q_{g,n}, P_n)`.
pub fn external_angle(family: Family, n: usize, g: usize, cfg: &MCConfig) -> Result<AngleEstimate> {
    if n == 0 || g > n || (family == Family::Crosspolytope && g == n) {
        // The crosspolytope itself is not a canonical face, but its external
        // angle is still 1.
        if !(family == Family::Crosspolytope && g == n && n >= 1) {
            return Err(Error::InvalidFace(format!("no {g}-face in the {n}-dimensional {family}")));
        }
    }
    if family == Family::Cube {
        return Ok(AngleEstimate::exact_pow2(n - g));
    }
    if g == n {
        return Ok(AngleEstimate::exact(BigRational::one()));
    }
    if g + 1 == n {
        return Ok(AngleEstimate::exact(half()));
    }
    let seed = derive_seed(cfg.seed, &[EXTERNAL_TAG, family.tag(), n as u64, g as u64]);
    conditional_external_angle(family, n, g, &MCConfig { seed, ..*cfg })
}

fn std_normal_cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x / std::f64::consts::SQRT_2)
}

/// Conditional Monte Carlo estimate of `gamma(Q_{g,n}, P_n)` for simplices
/// and crosspolytopes.
///
/// A Gaussian vector of the normal cone's linear hull is an ambient standard
/// normal vector with its first `g + 1` coordinates replaced by their mean
/// `m ~ N(0, 1/(g+1))` (and, for the simplex, centered). Membership only
/// compares the remaining coordinates with `m`, so they integrate out in
/// closed form: the hit probability given `m` is `Phi(m)^(n-g)` for the
/// simplex and `(2 Phi(m) - 1)^(n-g-1)` on `m >= 0` for the crosspolytope.
/// Averaging it over draws of `m` is unbiased and costs O(1) per sample.
pub fn conditional_external_angle(
    family: Family,
    n: usize,
    g: usize,
    cfg: &MCConfig,
) -> Result<AngleEstimate> {
    if g >= n || family == Family::Cube {
        return Err(Error::InvalidFace(format!(
            "conditional estimator needs a simplex or crosspolytope face with g < n, got {family} n = {n}, g = {g}"
        )));
    }
    if cfg.samples == 0 {
        return Err(Error::InvalidArgument("angle estimate needs samples >= 1".into()));
    }
    let scale = (1.0 / (g + 1) as f64).sqrt();
    let (power, symmetric) = match family {
        Family::Simplex => ((n - g) as i32, false),
        _ => ((n - g - 1) as i32, true),
    };
    let batches = cfg.samples.div_ceil(BATCH_SIZE);
    let sums = (0..batches)
        .into_par_iter()
        .map(|b| {
            let mut rng = stream_rng(cfg.seed, b);
            let count = BATCH_SIZE.min(cfg.samples - b * BATCH_SIZE);
            let (mut s1, mut s2) = (0.0, 0.0);
            for _ in 0..count {
                let z: f64 = rng.sample(StandardNormal);
                let m = z * scale;
                let h = if symmetric {
                    if m < 0.0 {
                        0.0
                    } else {
                        (2.0 * std_normal_cdf(m) - 1.0).powi(power)
                    }
                } else {
                    std_normal_cdf(m).powi(power)
                };
                s1 += h;
                s2 += h * h;
            }
            (s1, s2)
        })
        .collect::<Vec<_>>();
    let (s1, s2) = sums.iter().fold((0.0, 0.0), |acc, x| (acc.0 + x.0, acc.1 + x.1));
    let count = cfg.samples as f64;
    let mean = s1 / count;
    let var = if cfg.samples > 1 {
        ((s2 - count * mean * mean) / (count - 1.0)).max(0.0)
    } else {
        0.0
    };
    Ok(AngleEstimate {
        value: mean.clamp(0.0, 1.0),
        std_error: (var / count).sqrt(),
        method: Method::MonteCarlo,
        samples: cfg.samples,
        exact: None,
    })
}

/// The internal angle `beta(Q_{k,n}, Q_{g,n})`; zero when `k > g`.
///
/// The angle does not depend on `n`, and neither does the random stream used
/// to estimate it.
pub fn internal_angle(
    family: Family,
    n: usize,
    k: usize,
    g: usize,
    cfg: &MCConfig,
) -> Result<AngleEstimate> {
    let top = k.max(g);
    if n == 0 || top > family.max_canonical_dim(n) {
        return Err(Error::InvalidFace(format!(
            "faces of dimension {k} and {g} are not both canonical faces of the {n}-dimensional {family}"
        )));
    }
    if k > g {
        return Ok(AngleEstimate::exact(BigRational::zero()));
    }
    if family == Family::Cube {
        return Ok(AngleEstimate::exact_pow2(g - k));
    }
    if k == g {
        return Ok(AngleEstimate::exact(BigRational::one()));
    }
    if g == k + 1 {
        return Ok(AngleEstimate::exact(half()));
    }
    let cone = internal_cone(family, n, k, g)?;
    let seed = derive_seed(cfg.seed, &[INTERNAL_TAG, family.tag(), k as u64, g as u64]);
    cone_angle(&cone, &MCConfig { seed, ..*cfg })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AngleKind {
    Internal,
    External,
}

impl fmt::Display for AngleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AngleKind::Internal => "int",
            AngleKind::External => "ext",
        })
    }
}

/// Key of a memoized Monte Carlo angle.
///
/// External angles store `k = g`. Internal angles do not depend on the
/// polytope dimension and are stored under `n = g + 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AngleKey {
    pub family: Family,
    pub n: usize,
    pub k: usize,
    pub g: usize,
    pub kind: AngleKind,
    pub samples: u64,
    pub seed: u64,
}

/// Angle estimation with an in-process memo and an optional append-only
/// cache file.
#[derive(Debug, Default)]
pub struct AngleEngine {
    cfg: MCConfig,
    memo: Mutex<HashMap<AngleKey, AngleEstimate>>,
    fresh: Mutex<Vec<AngleKey>>,
}

impl AngleEngine {
    pub fn new(cfg: MCConfig) -> Self {
        Self {
            cfg,
            ..Default::default()
        }
    }

    pub fn config(&self) -> &MCConfig {
        &self.cfg
    }

    fn memoized(
        &self,
        key: AngleKey,
        compute: impl FnOnce() -> Result<AngleEstimate>,
    ) -> Result<AngleEstimate> {
        if let Some(hit) = self.memo.lock().get(&key) {
            return Ok(hit.clone());
        }
        let est = compute()?;
        if est.method == Method::MonteCarlo {
            let mut memo = self.memo.lock();
            if memo.insert(key, est.clone()).is_none() {
                self.fresh.lock().push(key);
            }
        }
        Ok(est)
    }

    pub fn external(&self, family: Family, n: usize, g: usize) -> Result<AngleEstimate> {
        let key = AngleKey {
            family,
            n,
            k: g,
            g,
            kind: AngleKind::External,
            samples: self.cfg.samples,
            seed: self.cfg.seed,
        };
        self.memoized(key, || external_angle(family, n, g, &self.cfg))
    }

    pub fn internal(&self, family: Family, n: usize, k: usize, g: usize) -> Result<AngleEstimate> {
        if k > g || n == 0 || g > family.max_canonical_dim(n) {
            return internal_angle(family, n, k, g, &self.cfg);
        }
        let key = AngleKey {
            family,
            n: g + 1,
            k,
            g,
            kind: AngleKind::Internal,
            samples: self.cfg.samples,
            seed: self.cfg.seed,
        };
        self.memoized(key, || internal_angle(family, g + 1, k, g, &self.cfg))
    }

    /// Number of memoized Monte Carlo angles.
    pub fn cached(&self) -> usize {
        self.memo.lock().len()
    }

    /// Loads cache records; returns how many were read.
    pub fn load_cache(&self, path: &Path) -> Result<usize> {
        if !path.exists() {
            return Ok(0);
        }
        let reader = BufReader::new(std::fs::File::open(path)?);
        let mut memo = self.memo.lock();
        let mut count = 0;
        for (i, line) in reader.lines().enumerate() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let (key, est) = parse_cache_line(&line).map_err(|message| Error::CacheFormat {
                line: i + 1,
                message,
            })?;
            memo.insert(key, est);
            count += 1;
        }
        Ok(count)
    }

    /// Appends the angles computed since construction (or the last call), in
    /// key order.
    pub fn append_cache(&self, path: &Path) -> Result<usize> {
        let mut fresh = std::mem::take(&mut *self.fresh.lock());
        fresh.sort();
        let memo = self.memo.lock();
        let mut file = OpenOptions::new().create(true).append(true).open(path)?;
        for key in &fresh {
            let est = &memo[key];
            writeln!(file, "{}", format_cache_line(key, est))?;
        }
        Ok(fresh.len())
    }
}

pub fn format_cache_line(key: &AngleKey, est: &AngleEstimate) -> String {
    format!(
        "{},{},{},{},{},{},{},{:?},{:?}",
        key.family, key.n, key.k, key.g, key.kind, key.samples, key.seed, est.value, est.std_error
    )
}

pub fn parse_cache_line(line: &str) -> std::result::Result<(AngleKey, AngleEstimate), String> {
    let fields: Vec<&str> = line.trim().split(',').collect();
    if fields.len() != 9 {
        return Err(format!("expected 9 fields, found {}", fields.len()));
    }
    let int = |s: &str| s.parse::<u64>().map_err(|e| format!("`{s}`: {e}"));
    let float = |s: &str| s.parse::<f64>().map_err(|e| format!("`{s}`: {e}"));
    let family: Family = fields[0].parse().map_err(|e: Error| e.to_string())?;
    let kind = match fields[4] {
        "int" => AngleKind::Internal,
        "ext" => AngleKind::External,
        other => return Err(format!("unknown angle kind `{other}`")),
    };
    let key = AngleKey {
        family,
        n: int(fields[1])? as usize,
        k: int(fields[2])? as usize,
        g: int(fields[3])? as usize,
        kind,
        samples: int(fields[5])?,
        seed: int(fields[6])?,
    };
    let est = AngleEstimate {
        value: float(fields[7])?,
        std_error: float(fields[8])?,
        method: Method::MonteCarlo,
        samples: key.samples,
        exact: None,
    };
    Ok((key, est))
}

/// Exact integer as a rational.
pub fn int_ratio(v: &BigUint) -> BigRational {
    BigRational::from_integer(BigInt::from(v.clone()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn cfg(samples: u64) -> MCConfig {
        MCConfig { samples, seed: 42 }
    }

    fn within(est: &AngleEstimate, truth: f64, sigmas: f64) {
        assert!(
            (est.value - truth).abs() <= sigmas * est.std_error.max(1e-12),
            "estimate {} ± {} vs {}",
            est.value,
            est.std_error,
            truth
        );
    }

    fn assert_frame_invariants(cone: &Cone) {
        for (i, a) in cone.frame().iter().enumerate() {
            for (j, b) in cone.frame().iter().enumerate() {
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((dot(a, b) - expect).abs() < 1e-12);
            }
        }
        if let Membership::PositiveHull { generators } = cone.membership() {
            for g in generators {
                let back = cone.project(g);
                assert!(norm(&sub(&back, g)) < 1e-10);
            }
        }
    }

    #[test]
    fn normal_cone_dimensions() {
        let c = normal_cone(Family::Cube, 2, 0).unwrap();
        assert_eq!(c.dim(), 2);
        assert_frame_invariants(&c);
        let c = normal_cone(Family::Simplex, 2, 1).unwrap();
        assert_eq!(c.dim(), 1);
        let c = normal_cone(Family::Crosspolytope, 3, 0).unwrap();
        assert_eq!(c.dim(), 3);
        assert_frame_invariants(&c);
        assert!(matches!(normal_cone(Family::Simplex, 3, 3), Err(Error::InvalidFace(_))));
    }

    #[test]
    fn internal_cone_dimensions() {
        let c = internal_cone(Family::Simplex, 2, 0, 1).unwrap();
        assert_eq!(c.dim(), 1);
        let c = internal_cone(Family::Cube, 3, 1, 2).unwrap();
        assert_eq!(c.dim(), 2);
        assert_frame_invariants(&c);
        let c = internal_cone(Family::Simplex, 3, 0, 3).unwrap();
        assert_eq!(c.dim(), 3);
        assert_frame_invariants(&c);
        assert!(matches!(
            internal_cone(Family::Simplex, 3, 2, 1),
            Err(Error::InvalidPair { k: 2, g: 1 })
        ));
    }

    #[test]
    fn structured_sampler_matches_the_frame_projector() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for family in [Family::Simplex, Family::Crosspolytope] {
            for n in 2..7 {
                for g in 0..n - 1 {
                    let cone = normal_cone(family, n, g).unwrap();
                    let SpanSampler::EqualBlock { block, centered } = cone.sampler() else {
                        panic!("expected structured sampler");
                    };
                    let v: Vec<f64> =
                        (0..cone.ambient_dim()).map(|_| rng.sample(StandardNormal)).collect();
                    let mut w = v.clone();
                    let mean = w[..block].iter().sum::<f64>() / block as f64;
                    w[..block].iter_mut().for_each(|x| *x = mean);
                    if centered {
                        let m = w.iter().sum::<f64>() / w.len() as f64;
                        w.iter_mut().for_each(|x| *x -= m);
                    }
                    assert!(norm(&sub(&w, &cone.project(&v))) < 1e-12, "{family} {n} {g}");
                }
            }
        }
    }

    #[test]
    fn quadrant_and_half_plane() {
        let c = normal_cone(Family::Cube, 2, 0).unwrap();
        within(&cone_angle(&c, &cfg(1_000_000)).unwrap(), 0.25, 3.0);
        let c = internal_cone(Family::Cube, 3, 1, 2).unwrap();
        within(&cone_angle(&c, &cfg(1_000_000)).unwrap(), 0.5, 3.0);
    }

    #[test]
    fn tetrahedron_vertex_solid_angle() {
        let truth = (3.0 * (1.0f64 / 3.0).acos() - PI) / (4.0 * PI);
        assert!((truth - 0.043869).abs() < 1e-6);
        let est = internal_angle(Family::Simplex, 3, 0, 3, &cfg(1_000_000)).unwrap();
        assert_eq!(est.method, Method::MonteCarlo);
        within(&est, truth, 3.0);
    }

    #[test]
    fn tetrahedron_edge_external_angle() {
        let truth = (PI - (1.0f64 / 3.0).acos()) / (2.0 * PI);
        let est = external_angle(Family::Simplex, 3, 1, &cfg(1_000_000)).unwrap();
        within(&est, truth, 3.0);
    }

    #[test]
    fn conditional_estimator_matches_direct_sampling() {
        for (family, n, g) in [
            (Family::Simplex, 3, 0),
            (Family::Simplex, 5, 2),
            (Family::Crosspolytope, 3, 0),
            (Family::Crosspolytope, 5, 1),
        ] {
            let cond = conditional_external_angle(family, n, g, &cfg(200_000)).unwrap();
            let direct = cone_angle(&normal_cone(family, n, g).unwrap(), &cfg(400_000)).unwrap();
            let tol = 3.0 * (cond.std_error + direct.std_error);
            assert!((cond.value - direct.value).abs() <= tol, "{family} {n} {g}: {cond:?} vs {direct:?}");
        }
    }

    #[test]
    fn vertex_angles_partition_space() {
        for family in [Family::Simplex, Family::Crosspolytope] {
            for n in 2..=6 {
                let est = external_angle(family, n, 0, &cfg(1_000_000)).unwrap();
                let f0 = match family {
                    Family::Simplex => n + 1,
                    _ => 2 * n,
                } as f64;
                assert!((f0 * est.value - 1.0).abs() <= 3.0 * f0 * est.std_error, "{family} {n}");
            }
        }
        let cube = external_angle(Family::Cube, 6, 0, &cfg(1)).unwrap();
        assert_eq!(cube.exact, Some(BigRational::new(BigInt::one(), BigInt::from(64))));
    }

    #[test]
    fn exact_branches() {
        let c = cfg(10);
        assert_eq!(external_angle(Family::Cube, 5, 2, &c).unwrap().value, 0.125);
        assert_eq!(internal_angle(Family::Cube, 5, 1, 4, &c).unwrap().value, 0.125);
        assert_eq!(external_angle(Family::Simplex, 2, 1, &c).unwrap().value, 0.5);
        assert_eq!(external_angle(Family::Crosspolytope, 4, 3, &c).unwrap().value, 0.5);
        assert_eq!(external_angle(Family::Simplex, 4, 4, &c).unwrap().value, 1.0);
        assert_eq!(internal_angle(Family::Simplex, 6, 2, 3, &c).unwrap().value, 0.5);
        assert_eq!(internal_angle(Family::Crosspolytope, 6, 3, 3, &c).unwrap().value, 1.0);
        assert_eq!(internal_angle(Family::Simplex, 6, 4, 3, &c).unwrap().value, 0.0);
        for est in [
            external_angle(Family::Cube, 3, 0, &c).unwrap(),
            internal_angle(Family::Simplex, 6, 4, 3, &c).unwrap(),
        ] {
            assert_eq!(est.method, Method::Exact);
            assert_eq!(est.std_error, 0.0);
        }
        assert!(external_angle(Family::Simplex, 3, 4, &c).is_err());
    }

    #[test]
    fn triangle_angles_close_up() {
        let est = internal_angle(Family::Simplex, 2, 0, 2, &cfg(1_000_000)).unwrap();
        within(&est, 1.0 / 6.0, 3.0);
        assert!((3.0 * est.value - 0.5).abs() <= 3.0 * 3.0 * est.std_error);
    }

    #[test]
    fn estimates_are_deterministic() {
        let a = external_angle(Family::Crosspolytope, 4, 1, &cfg(50_000)).unwrap();
        let b = external_angle(Family::Crosspolytope, 4, 1, &cfg(50_000)).unwrap();
        assert_eq!(a, b);
        let pool = rayon::ThreadPoolBuilder::new().num_threads(3).build().unwrap();
        let c = pool.install(|| external_angle(Family::Crosspolytope, 4, 1, &cfg(50_000)).unwrap());
        assert_eq!(a, c);
    }

    /// H-representation oracles for the 3-cube and the tetrahedron cones.
    #[test]
    fn membership_agrees_with_facet_inequalities() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let mut draw = |cone: &Cone| -> Vec<f64> {
            let z: Vec<f64> = (0..cone.dim()).map(|_| rng.sample(StandardNormal)).collect();
            let mut u = vec![0.0; cone.ambient_dim()];
            for (zi, f) in z.iter().zip(cone.frame()) {
                for (ui, fi) in u.iter_mut().zip(f) {
                    *ui += zi * fi;
                }
            }
            u
        };
        // cube normal cone at Q_1: u_1 = 0, u_2 <= 0, u_3 <= 0
        let cone = normal_cone(Family::Cube, 3, 1).unwrap();
        for _ in 0..10_000 {
            let u = draw(&cone);
            assert_eq!(cone.contains(&u).unwrap(), u[1] <= 0.0 && u[2] <= 0.0);
        }
        // cube internal cone of Q_1 in Q_3: u_2 >= 0, u_3 >= 0
        let cone = internal_cone(Family::Cube, 3, 1, 3).unwrap();
        for _ in 0..10_000 {
            let u = draw(&cone);
            assert_eq!(cone.contains(&u).unwrap(), u[1] >= 0.0 && u[2] >= 0.0);
        }
        // tetrahedron conv(e_1..e_4) normal cone at the vertex e_1: u_j <= u_1
        let cone = normal_cone(Family::Simplex, 3, 0).unwrap();
        for _ in 0..10_000 {
            let u = draw(&cone);
            assert_eq!(cone.contains(&u).unwrap(), (1..4).all(|j| u[j] <= u[0]));
        }
        // tetrahedron internal cone at the edge Q_1: u_3 >= 0, u_4 >= 0
        let cone = internal_cone(Family::Simplex, 3, 1, 3).unwrap();
        for _ in 0..10_000 {
            let u = draw(&cone);
            assert_eq!(cone.contains(&u).unwrap(), u[2] >= 0.0 && u[3] >= 0.0);
        }
        // tetrahedron internal cone at the vertex e_1: u_2, u_3, u_4 >= 0
        let cone = internal_cone(Family::Simplex, 3, 0, 3).unwrap();
        for _ in 0..10_000 {
            let u = draw(&cone);
            assert_eq!(cone.contains(&u).unwrap(), (1..4).all(|j| u[j] >= 0.0));
        }
    }

    #[test]
    fn engine_memoizes_and_round_trips_the_cache_file() {
        let dir = std::env::temp_dir().join(format!("polyshadow-cache-{}", std::process::id()));
        let _ = std::fs::remove_file(&dir);
        let engine = AngleEngine::new(cfg(20_000));
        let a = engine.external(Family::Simplex, 4, 1).unwrap();
        let b = engine.internal(Family::Simplex, 4, 0, 2).unwrap();
        let b7 = engine.internal(Family::Simplex, 7, 0, 2).unwrap();
        assert_eq!(b, b7);
        assert_eq!(engine.cached(), 2);
        assert_eq!(engine.append_cache(&dir).unwrap(), 2);
        let fresh = AngleEngine::new(cfg(20_000));
        assert_eq!(fresh.load_cache(&dir).unwrap(), 2);
        assert_eq!(fresh.external(Family::Simplex, 4, 1).unwrap().value, a.value);
        assert_eq!(fresh.internal(Family::Simplex, 4, 0, 2).unwrap().std_error, b.std_error);
        std::fs::remove_file(&dir).unwrap();
    }

    #[test]
    fn malformed_cache_lines_are_rejected() {
        assert!(parse_cache_line("simplex,4,1,1,ext,10,0,0.5").is_err());
        assert!(parse_cache_line("hexagon,4,1,1,ext,10,0,0.5,0.1").is_err());
        assert!(parse_cache_line("simplex,4,1,1,mid,10,0,0.5,0.1").is_err());
        assert!(parse_cache_line("simplex,4,1,1,int,10,0,0.5,0.1").is_ok());
    }
}
