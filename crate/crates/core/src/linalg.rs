//! Small dense vector helpers on `Vec<f64>`.

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

pub fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn barycenter(points: &[Vec<f64>]) -> Vec<f64> {
    let dim = points.first().map_or(0, Vec::len);
    let mut c = vec![0.0; dim];
    for p in points {
        for (ci, pi) in c.iter_mut().zip(p) {
            *ci += pi;
        }
    }
    let m = points.len() as f64;
    c.iter_mut().for_each(|ci| *ci /= m);
    c
}

/// Removes from `v` its components along the orthonormal vectors `basis`.
/// Two passes of modified Gram-Schmidt.
fn project_out(v: &mut [f64], basis: &[Vec<f64>]) {
    for _ in 0..2 {
        for b in basis {
            let c = dot(v, b);
            for (vi, bi) in v.iter_mut().zip(b) {
                *vi -= c * bi;
            }
        }
    }
}

/// Extends the orthonormal set `basis` by the directions of `candidates`
/// that are not already spanned (relative tolerance `tol`).
pub fn extend_orthonormal(basis: &mut Vec<Vec<f64>>, candidates: &[Vec<f64>], tol: f64) {
    for c in candidates {
        let scale = norm(c);
        if scale == 0.0 {
            continue;
        }
        let mut w = c.clone();
        project_out(&mut w, basis);
        let r = norm(&w);
        if r > tol * scale {
            w.iter_mut().for_each(|x| *x /= r);
            basis.push(w);
        }
    }
}

/// Orthonormal basis of the span of `vectors`.
pub fn orthonormalize(vectors: &[Vec<f64>], tol: f64) -> Vec<Vec<f64>> {
    let mut basis = Vec::new();
    extend_orthonormal(&mut basis, vectors, tol);
    basis
}

/// Orthonormal basis of the part of `span(space)` orthogonal to `span(sub)`.
pub fn orthogonal_complement(space: &[Vec<f64>], sub: &[Vec<f64>], tol: f64) -> Vec<Vec<f64>> {
    let mut basis = orthonormalize(sub, tol);
    let k = basis.len();
    extend_orthonormal(&mut basis, space, tol);
    basis.split_off(k)
}

/// Dimension of the affine hull of `points`.
pub fn affine_rank(points: &[&[f64]], tol: f64) -> usize {
    let Some((first, rest)) = points.split_first() else {
        return 0;
    };
    let diffs: Vec<Vec<f64>> = rest.iter().map(|p| sub(p, first)).collect();
    orthonormalize(&diffs, tol).len()
}

/// Coordinates of `v` in the orthonormal `frame`.
pub fn coordinates(v: &[f64], frame: &[Vec<f64>]) -> Vec<f64> {
    frame.iter().map(|f| dot(v, f)).collect()
}

/// Determinant by Gaussian elimination with partial pivoting (row-major, square).
pub fn determinant(mut m: Vec<Vec<f64>>) -> f64 {
    let n = m.len();
    let mut det = 1.0;
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&a, &b| m[a][col].abs().total_cmp(&m[b][col].abs()))
            .unwrap();
        if m[pivot][col] == 0.0 {
            return 0.0;
        }
        if pivot != col {
            m.swap(pivot, col);
            det = -det;
        }
        det *= m[col][col];
        for row in col + 1..n {
            let f = m[row][col] / m[col][col];
            if f != 0.0 {
                for c in col..n {
                    m[row][c] -= f * m[col][c];
                }
            }
        }
    }
    det
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gram_schmidt_is_orthonormal() {
        let v = vec![vec![1.0, 1.0, 0.0], vec![1.0, 0.0, 1.0], vec![2.0, 1.0, 1.0]];
        let b = orthonormalize(&v, 1e-10);
        assert_eq!(b.len(), 2);
        assert!((dot(&b[0], &b[1])).abs() < 1e-14);
        assert!((norm(&b[1]) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn complement_of_a_line_in_the_plane() {
        let space = vec![vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0]];
        let sub = vec![vec![1.0, 1.0, 0.0]];
        let c = orthogonal_complement(&space, &sub, 1e-10);
        assert_eq!(c.len(), 1);
        assert!(dot(&c[0], &sub[0]).abs() < 1e-14);
        assert!(c[0][2].abs() < 1e-14);
    }

    #[test]
    fn ranks_and_determinants() {
        let pts = [[0.0, 0.0], [1.0, 1.0], [2.0, 2.0]];
        let refs: Vec<&[f64]> = pts.iter().map(|p| p.as_slice()).collect();
        assert_eq!(affine_rank(&refs, 1e-9), 1);
        let m = vec![vec![2.0, 0.0, 1.0], vec![1.0, 3.0, 0.0], vec![0.0, 1.0, 1.0]];
        assert!((determinant(m) - 7.0).abs() < 1e-12);
    }
}
