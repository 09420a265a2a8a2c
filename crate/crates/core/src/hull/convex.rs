//! Exact face numbers of the convex hull of a point cloud in dimension at
//! most 6: beneath-beyond facet enumeration, then the face lattice as the
//! closure of facet vertex sets under intersection.

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};

use super::sample::PointCloud;
use crate::error::{Error, Result};
use crate::linalg::{affine_rank, coordinates, determinant, dot, norm, orthonormalize, sub};

/// Largest dimension handled by [`hull_f_vector`].
pub const MAX_HULL_DIM: usize = 6;

/// Relative tolerance of orientation and rank tests.
pub const GEOMETRY_TOL: f64 = 1e-9;

/// Face numbers of one polytope.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FVectorSample {
    /// `f_0, ..., f_{d-1}` for a polytope in `R^d`; a lower-dimensional
    /// polytope counts itself once at its own dimension.
    pub counts: Vec<u64>,
    /// Dimension of the polytope.
    pub dim: usize,
    /// Whether the polytope is not full-dimensional.
    pub degenerate: bool,
}

impl FVectorSample {
    /// `sum_{i < dim} (-1)^i f_i`.
    pub fn euler_sum(&self) -> i64 {
        self.counts
            .iter()
            .take(self.dim)
            .enumerate()
            .map(|(i, &f)| if i % 2 == 0 { f as i64 } else { -(f as i64) })
            .sum()
    }

    /// The Euler relation for the boundary complex of a `dim`-polytope.
    pub fn satisfies_euler(&self) -> bool {
        let expected = if self.dim.is_multiple_of(2) { 0 } else { 2 };
        self.euler_sum() == expected
    }
}

/// Exact face numbers of `conv(cloud)`.
///
/// Clouds that do not span `R^d` are reduced to their affine hull and
/// flagged as degenerate. Fails when an orientation predicate is too close
/// to zero to decide.
pub fn hull_f_vector(cloud: &PointCloud) -> Result<FVectorSample> {
    let d = cloud.d;
    if d == 0 || d > MAX_HULL_DIM {
        return Err(Error::InvalidDimension(format!(
            "hull dimension must be in 1..={MAX_HULL_DIM}, got {d}"
        )));
    }
    if cloud.is_empty() {
        return Err(Error::Degenerate("empty point cloud".into()));
    }
    let refs: Vec<&[f64]> = cloud.points.iter().map(Vec::as_slice).collect();
    let rank = affine_rank(&refs, GEOMETRY_TOL);
    if rank < d {
        return lower_dimensional(cloud, rank);
    }
    if d == 1 {
        return Ok(FVectorSample {
            counts: vec![2],
            dim: 1,
            degenerate: false,
        });
    }
    let facets = facet_vertex_sets(&cloud.points)?;
    Ok(FVectorSample {
        counts: face_numbers(&cloud.points, &facets, d),
        dim: d,
        degenerate: false,
    })
}

fn lower_dimensional(cloud: &PointCloud, rank: usize) -> Result<FVectorSample> {
    let d = cloud.d;
    let mut counts = vec![0; d];
    match rank {
        0 => counts[0] = 1,
        1 => {
            counts[0] = 2;
            counts[1] = 1;
        }
        _ => {
            let origin = &cloud.points[0];
            let diffs: Vec<Vec<f64>> = cloud.points.iter().map(|p| sub(p, origin)).collect();
            let basis = orthonormalize(&diffs, GEOMETRY_TOL);
            let reduced = PointCloud::new(
                basis.len(),
                diffs.iter().map(|p| coordinates(p, &basis)).collect(),
            );
            let inner = hull_f_vector(&reduced)?;
            counts[..inner.counts.len()].copy_from_slice(&inner.counts);
            counts[inner.dim] = 1;
            return Ok(FVectorSample {
                counts,
                dim: inner.dim,
                degenerate: true,
            });
        }
    }
    Ok(FVectorSample {
        counts,
        dim: rank,
        degenerate: true,
    })
}

struct Facet {
    vertices: Vec<usize>,
    normal: Vec<f64>,
    offset: f64,
}

/// Hyperplane through `d` points of `R^d`, oriented so that `interior` lies
/// strictly below it.
fn facet_through(points: &[Vec<f64>], mut vertices: Vec<usize>, interior: &[f64]) -> Result<Facet> {
    vertices.sort_unstable();
    let d = interior.len();
    let base = &points[vertices[0]];
    let rows: Vec<Vec<f64>> = vertices[1..].iter().map(|&v| sub(&points[v], base)).collect();
    let mut normal: Vec<f64> = (0..d)
        .map(|col| {
            let minor: Vec<Vec<f64>> = rows
                .iter()
                .map(|r| r.iter().enumerate().filter(|&(c, _)| c != col).map(|(_, &x)| x).collect())
                .collect();
            let det = if minor.is_empty() { 1.0 } else { determinant(minor) };
            if col % 2 == 0 {
                det
            } else {
                -det
            }
        })
        .collect();
    let len = norm(&normal);
    let scale: f64 = rows.iter().map(|r| norm(r)).product::<f64>().max(f64::MIN_POSITIVE);
    if !(len > GEOMETRY_TOL * scale) {
        return Err(Error::Degenerate("affinely dependent facet candidate".into()));
    }
    normal.iter_mut().for_each(|x| *x /= len);
    let mut offset = dot(&normal, base);
    if dot(&normal, interior) > offset {
        normal.iter_mut().for_each(|x| *x = -*x);
        offset = -offset;
    }
    Ok(Facet {
        vertices,
        normal,
        offset,
    })
}

/// Indices of `d + 1` affinely independent points, chosen greedily.
fn initial_simplex(points: &[Vec<f64>], d: usize) -> Vec<usize> {
    let mut chosen = vec![0];
    let mut basis: Vec<Vec<f64>> = Vec::new();
    while chosen.len() <= d {
        let mut best = (0, -1.0);
        for (i, p) in points.iter().enumerate() {
            let mut w = sub(p, &points[0]);
            for _ in 0..2 {
                for b in &basis {
                    let c = dot(&w, b);
                    w.iter_mut().zip(b).for_each(|(x, y)| *x -= c * y);
                }
            }
            let r = norm(&w);
            if r > best.1 {
                best = (i, r);
            }
        }
        let mut w = sub(&points[best.0], &points[0]);
        for b in &basis {
            let c = dot(&w, b);
            w.iter_mut().zip(b).for_each(|(x, y)| *x -= c * y);
        }
        let r = norm(&w);
        w.iter_mut().for_each(|x| *x /= r);
        basis.push(w);
        chosen.push(best.0);
    }
    chosen
}

/// Vertex sets of the facets of a full-dimensional cloud: for every facet
/// hyperplane, all input points lying on it.
fn facet_vertex_sets(points: &[Vec<f64>]) -> Result<Vec<Vec<usize>>> {
    let d = points[0].len();
    let start = initial_simplex(points, d);
    let start_points: Vec<Vec<f64>> = start.iter().map(|&i| points[i].clone()).collect();
    let interior = crate::linalg::barycenter(&start_points);
    let scale = points
        .iter()
        .map(|p| norm(&sub(p, &interior)))
        .fold(0.0, f64::max);
    let eps = GEOMETRY_TOL * scale;

    let mut facets: Vec<Option<Facet>> = Vec::new();
    for skip in 0..=d {
        let verts = start.iter().enumerate().filter(|&(i, _)| i != skip).map(|(_, &v)| v).collect();
        facets.push(Some(facet_through(points, verts, &interior)?));
    }
    let in_start: HashSet<usize> = start.iter().copied().collect();
    for (p, point) in points.iter().enumerate() {
        if in_start.contains(&p) {
            continue;
        }
        let visible: Vec<usize> = facets
            .iter()
            .enumerate()
            .filter_map(|(i, f)| {
                let f = f.as_ref()?;
                (dot(&f.normal, point) - f.offset > eps).then_some(i)
            })
            .collect();
        if visible.is_empty() {
            continue;
        }
        let mut ridges: HashMap<Vec<usize>, u32> = HashMap::new();
        for &i in &visible {
            let f = facets[i].take().expect("visible facets are alive");
            for skip in 0..f.vertices.len() {
                let mut ridge = f.vertices.clone();
                ridge.remove(skip);
                *ridges.entry(ridge).or_default() += 1;
            }
        }
        let mut horizon: Vec<Vec<usize>> = ridges.into_iter().filter(|(_, c)| *c == 1).map(|(r, _)| r).collect();
        horizon.sort_unstable();
        for mut ridge in horizon {
            ridge.push(p);
            facets.push(Some(facet_through(points, ridge, &interior)?));
        }
    }

    let mut sets = BTreeSet::new();
    for f in facets.iter().flatten() {
        let on: Vec<usize> = points
            .iter()
            .enumerate()
            .filter(|(_, q)| (dot(&f.normal, q) - f.offset).abs() <= eps)
            .map(|(i, _)| i)
            .collect();
        sets.insert(on);
    }
    Ok(sets.into_iter().collect())
}

#[derive(Clone, PartialEq, Eq, Hash)]
struct Bits(Vec<u64>);

impl Bits {
    fn from_indices(indices: &[usize], words: usize) -> Self {
        let mut b = vec![0u64; words];
        for &i in indices {
            b[i / 64] |= 1 << (i % 64);
        }
        Bits(b)
    }

    fn and(&self, other: &Bits) -> Bits {
        Bits(self.0.iter().zip(&other.0).map(|(a, b)| a & b).collect())
    }

    fn is_empty(&self) -> bool {
        self.0.iter().all(|&w| w == 0)
    }

    fn indices(&self) -> Vec<usize> {
        let mut out = Vec::new();
        for (w, &word) in self.0.iter().enumerate() {
            let mut x = word;
            while x != 0 {
                out.push(w * 64 + x.trailing_zeros() as usize);
                x &= x - 1;
            }
        }
        out
    }
}

/// `f_0, ..., f_{d-1}` from facet vertex sets: every nonempty proper face
/// is an intersection of facets.
fn face_numbers(points: &[Vec<f64>], facets: &[Vec<usize>], d: usize) -> Vec<u64> {
    let words = points.len().div_ceil(64);
    let facet_bits: Vec<Bits> = facets.iter().map(|f| Bits::from_indices(f, words)).collect();
    let mut seen: HashSet<Bits> = facet_bits.iter().cloned().collect();
    let mut queue: VecDeque<Bits> = facet_bits.iter().cloned().collect();
    while let Some(face) = queue.pop_front() {
        for f in &facet_bits {
            let meet = face.and(f);
            if !meet.is_empty() && meet != face && seen.insert(meet.clone()) {
                queue.push_back(meet);
            }
        }
    }
    let mut counts = vec![0u64; d];
    for face in &seen {
        let members: Vec<&[f64]> = face.indices().into_iter().map(|i| points[i].as_slice()).collect();
        let dim = affine_rank(&members, GEOMETRY_TOL);
        if dim < d {
            counts[dim] += 1;
        }
    }
    counts
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hull::sample::{sample_gaussian, symmetrize};
    use crate::polytope::{vertices, Family};
    use crate::rng::stream_rng;

    fn cloud(points: Vec<Vec<f64>>) -> PointCloud {
        PointCloud::new(points[0].len(), points)
    }

    #[test]
    fn triangle_and_square() {
        let tri = cloud(vec![vec![0.0, 0.0], vec![1.0, 0.2], vec![0.3, 1.0]]);
        assert_eq!(hull_f_vector(&tri).unwrap().counts, vec![3, 3]);
        let sq = cloud(vec![
            vec![0.0, 0.0],
            vec![1.0, 0.0],
            vec![0.0, 1.0],
            vec![1.0, 1.0],
            vec![0.5, 0.5],
            vec![0.5, 0.0],
        ]);
        assert_eq!(hull_f_vector(&sq).unwrap().counts, vec![4, 4]);
    }

    #[test]
    fn regular_polytopes() {
        let expect = [
            (Family::Cube, 3, vec![8, 12, 6]),
            (Family::Cube, 4, vec![16, 32, 24, 8]),
            (Family::Crosspolytope, 3, vec![6, 12, 8]),
            (Family::Crosspolytope, 4, vec![8, 24, 32, 16]),
        ];
        for (family, n, counts) in expect {
            let f = hull_f_vector(&cloud(vertices(family, n).unwrap())).unwrap();
            assert_eq!(f.counts, counts, "{family} {n}");
            assert!(f.satisfies_euler());
        }
        // the simplex lives in a hyperplane of its ambient space
        let f = hull_f_vector(&cloud(vertices(Family::Simplex, 3).unwrap())).unwrap();
        assert_eq!(f.counts, vec![4, 6, 4, 1]);
        assert_eq!(f.dim, 3);
        assert!(f.degenerate);
    }

    #[test]
    fn gaussian_hulls_satisfy_euler() {
        let mut rng = stream_rng(17, 0);
        for d in 2..=6 {
            for n in [d + 1, d + 4, 3 * d + 5] {
                for _ in 0..5 {
                    let c = sample_gaussian(n, d, &mut rng);
                    let f = hull_f_vector(&c).unwrap();
                    assert!(!f.degenerate);
                    assert!(f.satisfies_euler(), "d={d} n={n} {:?}", f.counts);
                    assert!(f.counts[0] <= n as u64);
                    // simplicial: every facet has d vertices
                    assert_eq!(f.counts[d - 1] as usize * d, f.counts[d - 2] as usize * 2);
                }
            }
        }
        let c = sample_gaussian(100, 2, &mut rng);
        let f = hull_f_vector(&c).unwrap();
        assert_eq!(f.counts[0], f.counts[1]);
    }

    #[test]
    fn symmetric_hulls() {
        let mut rng = stream_rng(3, 1);
        for d in 2..=4 {
            let c = symmetrize(&sample_gaussian(d + 3, d, &mut rng));
            let f = hull_f_vector(&c).unwrap();
            assert_eq!(f.counts[0] % 2, 0);
            let flipped = PointCloud::new(d, c.points.iter().map(|p| p.iter().map(|x| -x).collect()).collect());
            assert_eq!(hull_f_vector(&flipped).unwrap(), f);
        }
    }

    #[test]
    fn flat_clouds_are_degenerate() {
        let pts = vec![vec![0.0, 0.0, 1.0], vec![1.0, 0.0, 1.0], vec![0.0, 1.0, 1.0], vec![1.0, 1.0, 1.0]];
        let f = hull_f_vector(&cloud(pts)).unwrap();
        assert_eq!((f.counts.clone(), f.dim, f.degenerate), (vec![4, 4, 1], 2, true));
        let seg = hull_f_vector(&cloud(vec![vec![0.0, 0.0], vec![1.0, 1.0], vec![2.0, 2.0]])).unwrap();
        assert_eq!((seg.counts, seg.dim), (vec![2, 1], 1));
        let pt = hull_f_vector(&cloud(vec![vec![1.0, 2.0], vec![1.0, 2.0]])).unwrap();
        assert_eq!((pt.counts, pt.dim), (vec![1, 0], 0));
        assert!(hull_f_vector(&PointCloud::new(2, vec![])).is_err());
        assert!(hull_f_vector(&PointCloud::new(7, vec![vec![0.0; 7]])).is_err());
    }
}
