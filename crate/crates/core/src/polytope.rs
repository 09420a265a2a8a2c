//! The three infinite series of regular polytopes: vertex coordinates, face
//! counts and the canonical flag faces used by the angle sums.
//!
//! Representatives live in the smallest ambient space of their standard
//! description: the simplex `conv(e_1, ..., e_{n+1})` in dimension `n + 1`,
//! the crosspolytope `conv(±e_1, ..., ±e_n)` and the cube `[0, 1]^n` in
//! dimension `n`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::One;

use crate::error::{Error, Result};
use crate::special::{binomial, ln_factorial};

/// Largest cube dimension for which an explicit vertex list is built.
pub const MAX_CUBE_VERTEX_DIM: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    Simplex,
    Crosspolytope,
    Cube,
}

impl Family {
    pub const ALL: [Family; 3] = [Family::Simplex, Family::Crosspolytope, Family::Cube];

    pub fn name(self) -> &'static str {
        match self {
            Family::Simplex => "simplex",
            Family::Crosspolytope => "crosspolytope",
            Family::Cube => "cube",
        }
    }

    /// Dimension of the ambient space holding the `n`-dimensional representative.
    pub fn ambient_dim(self, n: usize) -> usize {
        match self {
            Family::Simplex => n + 1,
            Family::Crosspolytope | Family::Cube => n,
        }
    }

    /// Numeric tag used when deriving random seeds.
    pub(crate) fn tag(self) -> u64 {
        match self {
            Family::Simplex => 1,
            Family::Crosspolytope => 2,
            Family::Cube => 3,
        }
    }

    /// Largest admissible canonical face dimension in `P_n`.
    pub fn max_canonical_dim(self, n: usize) -> usize {
        match self {
            Family::Crosspolytope => n - 1,
            Family::Simplex | Family::Cube => n,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "simplex" => Ok(Family::Simplex),
            "crosspolytope" | "cross" | "cross-polytope" => Ok(Family::Crosspolytope),
            "cube" => Ok(Family::Cube),
            other => Err(Error::InvalidArgument(format!("unknown family `{other}`"))),
        }
    }
}

/// Whether a face count refers to `P_n` itself or to one of its proper faces.
///
/// Only matters for the crosspolytope, whose proper faces are simplices.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FaceScope {
    Polytope,
    ProperFace,
}

fn check_dim(n: usize) -> Result<()> {
    if n < 1 {
        return Err(Error::InvalidDimension(format!("n = {n}, need n >= 1")));
    }
    Ok(())
}

fn unit(dim: usize, i: usize, value: f64) -> Vec<f64> {
    let mut v = vec![0.0; dim];
    v[i] = value;
    v
}

fn cube_vertices(free: usize, ambient: usize) -> Result<Vec<Vec<f64>>> {
    if free > MAX_CUBE_VERTEX_DIM {
        return Err(Error::InvalidDimension(format!(
            "cube vertex list of dimension {free} exceeds the limit {MAX_CUBE_VERTEX_DIM}"
        )));
    }
    Ok((0..1usize << free)
        .map(|mask| {
            (0..ambient)
                .map(|i| if i < free && mask >> i & 1 == 1 { 1.0 } else { 0.0 })
                .collect()
        })
        .collect())
}

/// Vertices of the representative `n`-dimensional polytope of `family`.
pub fn vertices(family: Family, n: usize) -> Result<Vec<Vec<f64>>> {
    check_dim(n)?;
    let dim = family.ambient_dim(n);
    match family {
        Family::Simplex => Ok((0..=n).map(|i| unit(dim, i, 1.0)).collect()),
        Family::Crosspolytope => Ok((0..n)
            .map(|i| unit(dim, i, 1.0))
            .chain((0..n).map(|i| unit(dim, i, -1.0)))
            .collect()),
        Family::Cube => cube_vertices(n, n),
    }
}

/// A regular polytope together with its explicit vertex list.
#[derive(Clone, Debug)]
pub struct RegularPolytope {
    pub family: Family,
    pub n: usize,
    pub vertices: Vec<Vec<f64>>,
}

impl RegularPolytope {
    pub fn new(family: Family, n: usize) -> Result<Self> {
        Ok(Self {
            family,
            n,
            vertices: vertices(family, n)?,
        })
    }

    pub fn ambient_dim(&self) -> usize {
        self.family.ambient_dim(self.n)
    }
}

/// Number of `l`-faces of an `m`-dimensional face of `P_n` (`c_{m,l}`).
///
/// With [`FaceScope::Polytope`], `m` is the dimension of `P_n` itself.
pub fn face_count(family: Family, scope: FaceScope, m: usize, l: usize) -> BigUint {
    if l > m {
        return BigUint::ZERO;
    }
    if l == m {
        return BigUint::one();
    }
    match (family, scope) {
        (Family::Simplex, _) | (Family::Crosspolytope, FaceScope::ProperFace) => {
            binomial(m + 1, l + 1)
        }
        (Family::Cube, _) => binomial(m, l) << (m - l),
        (Family::Crosspolytope, FaceScope::Polytope) => binomial(m, l + 1) << (l + 1),
    }
}

/// `f_l(P_n)`, the number of `l`-faces of the whole polytope.
pub fn f_vector_entry(family: Family, n: usize, l: usize) -> BigUint {
    face_count(family, FaceScope::Polytope, n, l)
}

/// The canonical `i`-face `Q_{i,n}` of `P_n`.
#[derive(Clone, Debug)]
pub struct CanonicalFace {
    pub family: Family,
    pub n: usize,
    pub dim: usize,
    pub vertices: Vec<Vec<f64>>,
}

impl CanonicalFace {
    /// Whether `self` is a face of `other` (same polytope, nested canonical faces).
    pub fn is_face_of(&self, other: &CanonicalFace) -> bool {
        self.family == other.family && self.n == other.n && self.dim <= other.dim
    }

    pub fn barycenter(&self) -> Vec<f64> {
        crate::linalg::barycenter(&self.vertices)
    }
}

/// Builds `Q_{i,n}`: `conv(e_1, ..., e_{i+1})` for simplices and
/// crosspolytopes, the coordinate subcube on the first `i` axes for cubes.
pub fn canonical_face(family: Family, n: usize, i: usize) -> Result<CanonicalFace> {
    check_dim(n)?;
    if i > family.max_canonical_dim(n) {
        return Err(Error::InvalidFace(format!(
            "no canonical {i}-face in the {n}-dimensional {family}"
        )));
    }
    let dim = family.ambient_dim(n);
    let vertices = match family {
        Family::Simplex | Family::Crosspolytope => (0..=i).map(|j| unit(dim, j, 1.0)).collect(),
        Family::Cube => cube_vertices(i, dim)?,
    };
    Ok(CanonicalFace {
        family,
        n,
        dim: i,
        vertices,
    })
}

/// Volume of the regular `i`-simplex with edge length `sqrt(2)`: `sqrt(i+1)/i!`.
pub fn simplex_volume(i: usize) -> f64 {
    (0.5 * ((i + 1) as f64).ln() - ln_factorial(i)).exp()
}

/// `i`-dimensional volume of a canonical face.
pub fn face_volume(face: &CanonicalFace) -> f64 {
    match face.family {
        Family::Simplex | Family::Crosspolytope => simplex_volume(face.dim),
        Family::Cube => 1.0,
    }
}

/// `n`-dimensional volume of `P_n`.
pub fn polytope_volume(family: Family, n: usize) -> f64 {
    match family {
        Family::Simplex => simplex_volume(n),
        Family::Crosspolytope => (n as f64 * std::f64::consts::LN_2 - ln_factorial(n)).exp(),
        Family::Cube => 1.0,
    }
}
