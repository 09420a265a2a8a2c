//! Lawson-Hanson active-set nonnegative least squares for small dense
//! problems, used as the membership oracle of positive hulls.

use crate::linalg::dot;

#[derive(Clone, Debug)]
pub struct NnlsSolution {
    pub x: Vec<f64>,
    pub residual: f64,
}

/// Least squares over the columns listed in `active`; dependent columns get
/// coefficient zero.
fn restricted_least_squares(columns: &[Vec<f64>], active: &[usize], b: &[f64]) -> Vec<f64> {
    let q_len = active.len();
    let mut q: Vec<Vec<f64>> = Vec::with_capacity(q_len);
    let mut r = vec![vec![0.0; q_len]; q_len];
    let mut independent = vec![true; q_len];
    for (c, &col) in active.iter().enumerate() {
        let mut v = columns[col].clone();
        let scale = dot(&v, &v).sqrt();
        for _ in 0..2 {
            for (i, qi) in q.iter().enumerate() {
                if !independent[i] {
                    continue;
                }
                let proj = dot(qi, &v);
                r[i][c] += proj;
                for (vj, qj) in v.iter_mut().zip(qi) {
                    *vj -= proj * qj;
                }
            }
        }
        let nv = dot(&v, &v).sqrt();
        if nv <= 1e-12 * scale.max(f64::MIN_POSITIVE) {
            independent[c] = false;
            q.push(vec![0.0; v.len()]);
        } else {
            r[c][c] = nv;
            v.iter_mut().for_each(|x| *x /= nv);
            q.push(v);
        }
    }
    let qtb: Vec<f64> = q.iter().map(|qi| dot(qi, b)).collect();
    let mut z = vec![0.0; q_len];
    for c in (0..q_len).rev() {
        if !independent[c] {
            continue;
        }
        let mut acc = qtb[c];
        for j in c + 1..q_len {
            acc -= r[c][j] * z[j];
        }
        z[c] = acc / r[c][c];
    }
    z
}

fn residual_vector(columns: &[Vec<f64>], x: &[f64], b: &[f64]) -> Vec<f64> {
    let mut res = b.to_vec();
    for (col, &xi) in columns.iter().zip(x) {
        if xi != 0.0 {
            for (ri, ci) in res.iter_mut().zip(col) {
                *ri -= xi * ci;
            }
        }
    }
    res
}

/// Solves `min ||A x - b||` subject to `x >= 0`, with `A` given by columns.
/// Returns `None` if the active-set iteration does not terminate.
pub fn nnls(columns: &[Vec<f64>], b: &[f64]) -> Option<NnlsSolution> {
    let p = columns.len();
    let mut x = vec![0.0; p];
    let mut passive = vec![false; p];
    let bnorm = dot(b, b).sqrt();
    let tol = 1e-12 * (1.0 + bnorm);
    let max_outer = 3 * p + 10;

    for _ in 0..max_outer {
        let res = residual_vector(columns, &x, b);
        let w: Vec<f64> = columns.iter().map(|c| dot(c, &res)).collect();
        let entering = (0..p)
            .filter(|&j| !passive[j] && w[j] > tol)
            .max_by(|&a, &b| w[a].total_cmp(&w[b]));
        let Some(t) = entering else {
            let residual = dot(&res, &res).sqrt();
            return Some(NnlsSolution { x, residual });
        };
        passive[t] = true;

        let mut inner = 0;
        loop {
            inner += 1;
            if inner > max_outer {
                return None;
            }
            let active: Vec<usize> = (0..p).filter(|&j| passive[j]).collect();
            let z_active = restricted_least_squares(columns, &active, b);
            if z_active.iter().all(|&z| z > 0.0) {
                for (&j, &z) in active.iter().zip(&z_active) {
                    x[j] = z;
                }
                break;
            }
            let mut alpha = f64::INFINITY;
            for (&j, &z) in active.iter().zip(&z_active) {
                if z <= 0.0 {
                    alpha = alpha.min(x[j] / (x[j] - z));
                }
            }
            let mut z_full = vec![0.0; p];
            for (&j, &z) in active.iter().zip(&z_active) {
                z_full[j] = z;
            }
            for j in 0..p {
                if passive[j] {
                    x[j] += alpha * (z_full[j] - x[j]);
                    if x[j] <= 1e-15 {
                        x[j] = 0.0;
                        passive[j] = false;
                    }
                }
            }
            if !passive.iter().any(|&q| q) {
                break;
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inside_the_quadrant() {
        let cols = vec![vec![1.0, 0.0], vec![0.0, 1.0]];
        let s = nnls(&cols, &[2.0, 3.0]).unwrap();
        assert!(s.residual < 1e-12);
        assert!((s.x[0] - 2.0).abs() < 1e-12 && (s.x[1] - 3.0).abs() < 1e-12);
    }

    #[test]
    fn outside_the_quadrant_projects_to_the_boundary() {
        let cols = vec![vec![1.0, 0.0], vec![0.0, 1.0]];
        let s = nnls(&cols, &[2.0, -3.0]).unwrap();
        assert!((s.residual - 3.0).abs() < 1e-12);
        assert_eq!(s.x[1], 0.0);
    }

    #[test]
    fn dependent_generators_spanning_a_line() {
        // pos{(1,0), (-1,0), (0,1)} is the upper half-plane
        let cols = vec![vec![1.0, 0.0], vec![-1.0, 0.0], vec![0.0, 1.0]];
        assert!(nnls(&cols, &[-5.0, 0.5]).unwrap().residual < 1e-10);
        assert!((nnls(&cols, &[-5.0, -0.5]).unwrap().residual - 0.5).abs() < 1e-10);
    }
}
