//! Face numbers of a zonotope `[0, X_1] + ... + [0, X_n]` from the cells of
//! its normal hyperplane arrangements.
//!
//! For generators in general position, the `k`-faces are in bijection with
//! pairs `(S, sigma)`: a `k`-subset `S` of the generators and a sign vector
//! on the others that some functional orthogonal to `span(S)` realizes with
//! no zero entry. Sign vectors are enumerated depth first; each branch is
//! checked with a small linear program that maximizes a common margin.

use minilp::{ComparisonOp, OptimizationDirection, Problem};

use super::convex::{FVectorSample, GEOMETRY_TOL, MAX_HULL_DIM};
use crate::error::{Error, Result};
use crate::linalg::{coordinates, dot, norm, orthogonal_complement, orthonormalize};

/// Most generators accepted by [`zonotope_f_vector`].
pub const MAX_ZONOTOPE_GENERATORS: usize = 15;

const MARGIN_TOL: f64 = 1e-9;

/// Exact face numbers of the zonotope spanned by `generators` in `R^d`.
pub fn zonotope_f_vector(generators: &[Vec<f64>], d: usize) -> Result<FVectorSample> {
    let n = generators.len();
    if d == 0 || d > MAX_HULL_DIM {
        return Err(Error::InvalidDimension(format!(
            "zonotope dimension must be in 1..={MAX_HULL_DIM}, got {d}"
        )));
    }
    if n > MAX_ZONOTOPE_GENERATORS {
        return Err(Error::InvalidArgument(format!(
            "at most {MAX_ZONOTOPE_GENERATORS} zonotope generators are supported, got {n}"
        )));
    }
    if generators.iter().any(|g| g.len() != d) {
        return Err(Error::InvalidArgument(format!("generators must have {d} coordinates")));
    }
    let scale = generators.iter().map(|g| norm(g)).fold(0.0, f64::max);
    if generators.iter().any(|g| !(norm(g) > GEOMETRY_TOL * scale)) {
        return Err(Error::Degenerate("zero zonotope generator".into()));
    }
    let basis = orthonormalize(generators, GEOMETRY_TOL);
    let r = basis.len();
    let gens: Vec<Vec<f64>> = generators.iter().map(|g| coordinates(g, &basis)).collect();
    let unit: Vec<Vec<f64>> = (0..r)
        .map(|i| (0..r).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
        .collect();

    let mut counts = vec![0u64; d];
    if r < d {
        counts[r] = 1;
    }
    for k in 0..r {
        let mut total = 0;
        for subset in combinations(n, k) {
            let chosen: Vec<Vec<f64>> = subset.iter().map(|&i| gens[i].clone()).collect();
            if orthonormalize(&chosen, GEOMETRY_TOL).len() < k {
                return Err(Error::Degenerate(format!("generators {subset:?} are linearly dependent")));
            }
            let complement = orthogonal_complement(&unit, &chosen, GEOMETRY_TOL);
            let mut normals = Vec::with_capacity(n - k);
            for (i, g) in gens.iter().enumerate() {
                if subset.contains(&i) {
                    continue;
                }
                let mut a = coordinates(g, &complement);
                let len = norm(&a);
                if !(len > GEOMETRY_TOL * norm(g)) {
                    return Err(Error::Degenerate(format!(
                        "generator {i} lies in the span of generators {subset:?}"
                    )));
                }
                a.iter_mut().for_each(|x| *x /= len);
                normals.push(a);
            }
            total += count_cells(&normals, r - k)?;
        }
        counts[k] = total;
    }
    Ok(FVectorSample {
        counts,
        dim: r,
        degenerate: r < d,
    })
}

/// All `k`-subsets of `0..n` in lexicographic order.
pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..=n - (k - cur.len()) {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if k <= n {
        rec(0, n, k, &mut Vec::with_capacity(k), &mut out);
    }
    out
}

/// A point `y` with `sign_i <a_i, y> > 0` for every constraint, if one exists.
fn strictly_feasible(constraints: &[(&[f64], f64)], dim: usize) -> Result<Option<Vec<f64>>> {
    let mut lp = Problem::new(OptimizationDirection::Maximize);
    let y: Vec<_> = (0..dim).map(|_| lp.add_var(0.0, (-1.0, 1.0))).collect();
    let s = lp.add_var(1.0, (-(dim as f64).sqrt() - 1.0, 1.0));
    for (a, sign) in constraints {
        let mut expr: Vec<_> = y.iter().zip(a.iter()).map(|(&v, &c)| (v, sign * c)).collect();
        expr.push((s, -1.0));
        lp.add_constraint(expr.as_slice(), ComparisonOp::Ge, 0.0);
    }
    let sol = lp.solve().map_err(|e| Error::Lp(e.to_string()))?;
    if *sol.var_value(s) > MARGIN_TOL {
        Ok(Some(y.iter().map(|&v| *sol.var_value(v)).collect()))
    } else {
        Ok(None)
    }
}

/// Number of full-dimensional cells of the central arrangement with unit
/// normals `normals` in `R^dim`.
fn count_cells(normals: &[Vec<f64>], dim: usize) -> Result<u64> {
    if normals.is_empty() {
        return Ok(1);
    }
    if dim == 1 {
        return Ok(2);
    }
    let mut cells = 0;
    // (depth, signs so far, strictly feasible witness)
    let mut stack: Vec<(usize, Vec<f64>, Vec<f64>)> = vec![(0, Vec::new(), normals[0].clone())];
    while let Some((depth, signs, witness)) = stack.pop() {
        if depth == normals.len() {
            cells += 1;
            continue;
        }
        let a = &normals[depth];
        let v = dot(a, &witness);
        let free_sign = if v.abs() > MARGIN_TOL { Some(v.signum()) } else { None };
        for sign in [1.0, -1.0] {
            let mut next = signs.clone();
            next.push(sign);
            if free_sign == Some(sign) {
                stack.push((depth + 1, next, witness.clone()));
                continue;
            }
            let constraints: Vec<(&[f64], f64)> = normals[..=depth]
                .iter()
                .zip(&next)
                .map(|(a, &s)| (a.as_slice(), s))
                .collect();
            if let Some(y) = strictly_feasible(&constraints, dim)? {
                stack.push((depth + 1, next, y));
            }
        }
    }
    Ok(cells)
}

/// `f_k` of a zonotope with `n` generators in general position in `R^d`
/// (`k < d <= n`): `C(n, k) * 2 sum_{i < d-k} C(n-k-1, i)`.
pub fn generic_zonotope_face_count(n: usize, d: usize, k: usize) -> u64 {
    use crate::special::binomial;
    use num_traits::ToPrimitive;
    let cells: num_bigint::BigUint = (0..d - k).map(|i| binomial(n - k - 1, i)).sum();
    (binomial(n, k) * cells * 2u32).to_u64().expect("face count fits in u64")
}
