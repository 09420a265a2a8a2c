//! Expected face numbers of random projections, their Gaussian-model
//! counterparts, intrinsic volumes, Poissonization and the T-functional.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::angle::{int_ratio, ratio_to_f64, AngleEngine, AngleEstimate, Method};
use crate::error::{Error, Result};
use crate::polytope::{f_vector_entry, face_count, polytope_volume, simplex_volume, FaceScope, Family};
use crate::special::{binomial, binomial_f64, ln_gamma};

pub use crate::special::unit_ball_volume;

/// An expected face number (or other expectation) with its standard error.
#[derive(Clone, Debug, PartialEq)]
pub struct FaceEstimate {
    pub value: f64,
    pub std_error: f64,
    pub method: Method,
    /// Exact value, when it is rational and known exactly.
    pub rational: Option<BigRational>,
}

impl FaceEstimate {
    pub fn exact(r: BigRational) -> Self {
        Self {
            value: ratio_to_f64(&r),
            std_error: 0.0,
            method: Method::Exact,
            rational: Some(r),
        }
    }

    pub fn exact_int(v: &BigUint) -> Self {
        Self::exact(int_ratio(v))
    }

    pub fn from_u64(v: u64) -> Self {
        Self::exact_int(&BigUint::from(v))
    }

    /// Exact but irrational, known only in floating point.
    pub fn exact_real(value: f64) -> Self {
        Self {
            value,
            std_error: 0.0,
            method: Method::Exact,
            rational: None,
        }
    }

    pub fn is_exact(&self) -> bool {
        self.method == Method::Exact
    }
}

/// A Gaussian random polytope model.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GaussianModel {
    /// `conv(X_1, ..., X_n)`.
    Gaussian,
    /// `conv(±X_1, ..., ±X_n)`.
    Symmetric,
    /// `[0, X_1] + ... + [0, X_n]`.
    Zonotope,
}

impl GaussianModel {
    pub const ALL: [GaussianModel; 3] = [
        GaussianModel::Gaussian,
        GaussianModel::Symmetric,
        GaussianModel::Zonotope,
    ];

    pub fn name(self) -> &'static str {
        match self {
            GaussianModel::Gaussian => "gaussian",
            GaussianModel::Symmetric => "symmetric",
            GaussianModel::Zonotope => "zonotope",
        }
    }

    /// The regular polytope whose random projection has the same expected
    /// f-vector.
    pub fn family(self) -> Family {
        match self {
            GaussianModel::Gaussian => Family::Simplex,
            GaussianModel::Symmetric => Family::Crosspolytope,
            GaussianModel::Zonotope => Family::Cube,
        }
    }
}

impl fmt::Display for GaussianModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for GaussianModel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "gaussian" => Ok(GaussianModel::Gaussian),
            "symmetric" => Ok(GaussianModel::Symmetric),
            "zonotope" => Ok(GaussianModel::Zonotope),
            other => Err(Error::InvalidArgument(format!("unknown model `{other}`"))),
        }
    }
}

/// What a face-number table is computed for.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Subject {
    /// Random projections of a regular polytope.
    Family(Family),
    Model(GaussianModel),
}

impl Subject {
    pub fn name(self) -> &'static str {
        match self {
            Subject::Family(f) => f.name(),
            Subject::Model(m) => m.name(),
        }
    }
}

impl fmt::Display for Subject {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Expected f-vector of one subject at fixed `(n, d)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ExpectedFVector {
    pub model: String,
    pub n: usize,
    pub d: usize,
    pub entries: BTreeMap<usize, FaceEstimate>,
}

/// One summand `c_{n,j-1} c_{j-1,k} beta(Q_k, Q_{j-1}) gamma(Q_{j-1}, P_n)`
/// of the projection formula.
#[derive(Clone, Debug, PartialEq)]
pub struct SnTerm {
    pub j: usize,
    pub c_outer: BigUint,
    pub c_inner: BigUint,
    pub beta: AngleEstimate,
    pub gamma: AngleEstimate,
    pub value: f64,
    /// First-order error from the two angle estimates.
    pub std_error: f64,
}

impl SnTerm {
    /// Exact value when both angles are exact.
    pub fn rational(&self) -> Option<BigRational> {
        let (b, g) = (self.beta.exact.as_ref()?, self.gamma.exact.as_ref()?);
        Some(int_ratio(&self.c_outer) * int_ratio(&self.c_inner) * b * g)
    }
}

fn big_to_f64(v: &BigUint) -> f64 {
    v.to_f64().unwrap_or(f64::INFINITY)
}

fn check_nd(n: usize, d: usize) -> Result<()> {
    if n < 1 || d < 1 {
        return Err(Error::InvalidDimension(format!("need n >= 1 and d >= 1, got n = {n}, d = {d}")));
    }
    Ok(())
}

/// The summand for index `j` (so `g = j - 1`), or `None` when `c_{j-1,k} = 0`.
pub fn sn_term(engine: &AngleEngine, family: Family, n: usize, k: usize, j: usize) -> Result<Option<SnTerm>> {
    let g = j - 1;
    if g < k {
        return Ok(None);
    }
    let wrap = |e: Error| Error::Term { j, source: Box::new(e) };
    let beta = engine.internal(family, n, k, g).map_err(wrap)?;
    let gamma = engine.external(family, n, g).map_err(wrap)?;
    let c_outer = face_count(family, FaceScope::Polytope, n, g);
    let c_inner = face_count(family, FaceScope::ProperFace, g, k);
    let coeff = big_to_f64(&c_outer) * big_to_f64(&c_inner);
    let value = coeff * beta.value * gamma.value;
    let std_error = coeff * (beta.value * gamma.std_error).hypot(gamma.value * beta.std_error);
    Ok(Some(SnTerm {
        j,
        c_outer,
        c_inner,
        beta,
        gamma,
        value,
        std_error,
    }))
}

/// All nonzero summands of `E f_k(Pi_d P_n)` for `d < n`: indices
/// `j = d, d - 2, ...` down to 1.
pub fn projection_terms(
    engine: &AngleEngine,
    family: Family,
    n: usize,
    d: usize,
    k: usize,
) -> Result<Vec<SnTerm>> {
    check_nd(n, d)?;
    if d > n {
        return Err(Error::InvalidDimension(format!("projection sum needs d <= n, got d = {d}, n = {n}")));
    }
    let mut terms = Vec::new();
    for j in (1..=d).rev().step_by(2) {
        if let Some(term) = sn_term(engine, family, n, k, j)? {
            terms.push(term);
        }
    }
    Ok(terms)
}

/// Sums projection-formula terms into `2 * sum`, exact when every term is.
pub fn sum_terms(terms: &[SnTerm]) -> FaceEstimate {
    let exact: Option<Vec<BigRational>> = terms.iter().map(SnTerm::rational).collect();
    match exact {
        Some(parts) => {
            let total = parts.into_iter().fold(BigRational::zero(), |a, b| a + b);
            FaceEstimate::exact(total * BigRational::from_integer(BigInt::from(2)))
        }
        None => FaceEstimate {
            value: 2.0 * terms.iter().map(|t| t.value).sum::<f64>(),
            std_error: 2.0 * terms.iter().map(|t| t.std_error).sum::<f64>(),
            method: Method::MonteCarlo,
            rational: None,
        },
    }
}

/// `E f_k(Pi_d P_n)`, the expected number of `k`-faces of the projection of
/// `P_n` onto a uniform random `d`-dimensional subspace.
///
/// For `d >= n` the projection is almost surely injective and the face
/// numbers of `P_n` are returned. For `d < n` the `d`-face count is 1, higher
/// counts vanish, and `d = 1` gives a segment.
pub fn expected_f_projection(
    engine: &AngleEngine,
    family: Family,
    n: usize,
    d: usize,
    k: usize,
) -> Result<FaceEstimate> {
    check_nd(n, d)?;
    if d >= n {
        return Ok(FaceEstimate::exact_int(&f_vector_entry(family, n, k)));
    }
    if k > d {
        return Ok(FaceEstimate::from_u64(0));
    }
    if k == d {
        return Ok(FaceEstimate::from_u64(1));
    }
    if d == 1 {
        return Ok(FaceEstimate::from_u64(2));
    }
    Ok(sum_terms(&projection_terms(engine, family, n, d, k)?))
}

/// `2 sum_{j = d, d-2, ... >= 1} C(n, j-1) C(j-1, k)`, the expected number of
/// `k`-faces of a projected `n`-cube (`1 <= d <= n`, `k < d`).
pub fn expected_f_cube_closed_form(n: usize, d: usize, k: usize) -> Result<BigRational> {
    check_nd(n, d)?;
    if d > n || k >= d {
        return Err(Error::InvalidArgument(format!(
            "cube closed form needs 1 <= d <= n and k < d, got n = {n}, d = {d}, k = {k}"
        )));
    }
    let total: BigUint = (1..=d)
        .rev()
        .step_by(2)
        .map(|j| binomial(n, j - 1) * binomial(j - 1, k))
        .sum();
    Ok(int_ratio(&(total * 2u32)))
}

/// Expected `k`-face number of the Gaussian polytope on `n` points in
/// dimension `d`.
pub fn expected_f_gaussian(engine: &AngleEngine, n: usize, d: usize, k: usize) -> Result<FaceEstimate> {
    match n {
        0 => Err(Error::InvalidDimension("the Gaussian polytope needs n >= 1".into())),
        1 => Ok(FaceEstimate::from_u64(u64::from(k == 0))),
        _ => expected_f_projection(engine, Family::Simplex, n - 1, d, k),
    }
}

/// Expected `k`-face number of the symmetric Gaussian polytope on `±X_1..±X_n`.
pub fn expected_f_symmetric(engine: &AngleEngine, n: usize, d: usize, k: usize) -> Result<FaceEstimate> {
    expected_f_projection(engine, Family::Crosspolytope, n, d, k)
}

/// Expected `k`-face number of the Gaussian zonotope with `n` segments,
/// which is deterministic.
pub fn expected_f_zonotope(n: usize, d: usize, k: usize) -> Result<BigRational> {
    check_nd(n, d)?;
    if d >= n {
        return Ok(int_ratio(&f_vector_entry(Family::Cube, n, k)));
    }
    match k.cmp(&d) {
        std::cmp::Ordering::Greater => Ok(BigRational::zero()),
        std::cmp::Ordering::Equal => Ok(BigRational::one()),
        std::cmp::Ordering::Less => expected_f_cube_closed_form(n, d, k),
    }
}

/// Expected `k`-face number of a Gaussian model with `n` points (`n = 0`
/// allowed: empty set, or the origin for the zonotope).
pub fn expected_f_model(
    engine: &AngleEngine,
    model: GaussianModel,
    n: usize,
    d: usize,
    k: usize,
) -> Result<FaceEstimate> {
    if d < 1 {
        return Err(Error::InvalidDimension("need d >= 1".into()));
    }
    match (model, n) {
        (GaussianModel::Gaussian | GaussianModel::Symmetric, 0) => Ok(FaceEstimate::from_u64(0)),
        (GaussianModel::Zonotope, 0) => Ok(FaceEstimate::from_u64(u64::from(k == 0))),
        (GaussianModel::Gaussian, _) => expected_f_gaussian(engine, n, d, k),
        (GaussianModel::Symmetric, _) => expected_f_symmetric(engine, n, d, k),
        (GaussianModel::Zonotope, _) => Ok(FaceEstimate::exact(expected_f_zonotope(n, d, k)?)),
    }
}

/// Expected `k`-face number for any subject.
pub fn expected_f(engine: &AngleEngine, subject: Subject, n: usize, d: usize, k: usize) -> Result<FaceEstimate> {
    match subject {
        Subject::Family(family) => expected_f_projection(engine, family, n, d, k),
        Subject::Model(model) => expected_f_model(engine, model, n, d, k),
    }
}

/// Expected f-vector `k = 0..=min(n, d)` (entries beyond vanish).
pub fn expected_f_vector(engine: &AngleEngine, subject: Subject, n: usize, d: usize) -> Result<ExpectedFVector> {
    let mut entries = BTreeMap::new();
    for k in 0..=n.min(d) {
        entries.insert(k, expected_f(engine, subject, n, d, k)?);
    }
    Ok(ExpectedFVector {
        model: subject.name().to_string(),
        n,
        d,
        entries,
    })
}

/// `V_k(P_n) = c_{n,k} gamma(Q_{k,n}, P_n) Vol_k(Q_{k,n})`.
pub fn intrinsic_volume(engine: &AngleEngine, family: Family, n: usize, k: usize) -> Result<FaceEstimate> {
    if n < 1 {
        return Err(Error::InvalidDimension("need n >= 1".into()));
    }
    if k > n {
        return Ok(FaceEstimate::from_u64(0));
    }
    if k == 0 {
        return Ok(FaceEstimate::from_u64(1));
    }
    if k == n {
        return Ok(match family {
            Family::Cube => FaceEstimate::from_u64(1),
            Family::Crosspolytope => FaceEstimate::exact(BigRational::new(
                BigInt::one() << n,
                BigInt::from((1..=n).map(BigUint::from).product::<BigUint>()),
            )),
            Family::Simplex => FaceEstimate::exact_real(polytope_volume(family, n)),
        });
    }
    let count = face_count(family, FaceScope::Polytope, n, k);
    let gamma = engine.external(family, n, k)?;
    if family == Family::Cube {
        let exact = gamma.exact.expect("cube angles are exact");
        return Ok(FaceEstimate::exact(int_ratio(&count) * exact));
    }
    let scale = big_to_f64(&count) * simplex_volume(k);
    Ok(FaceEstimate {
        value: scale * gamma.value,
        std_error: scale * gamma.std_error,
        method: gamma.method,
        rational: None,
    })
}

fn check_b(b: f64) -> Result<()> {
    if !(b >= 0.0 && b.is_finite()) {
        return Err(Error::InvalidArgument(format!("need a finite b >= 0, got {b}")));
    }
    Ok(())
}

/// `(sqrt(k+1)/k!)^b prod_{j=1}^{k} Gamma((d+b+1-j)/2) / Gamma((d+1-j)/2)`,
/// evaluated in log space.
pub fn t_functional_factor(d: usize, k: usize, b: f64) -> Result<f64> {
    check_b(b)?;
    if k > d {
        return Err(Error::InvalidArgument(format!("need k <= d, got k = {k}, d = {d}")));
    }
    if b == 0.0 || k == 0 {
        return Ok(1.0);
    }
    let kf = k as f64;
    let mut log = b * (0.5 * (kf + 1.0).ln() - ln_gamma(kf + 1.0));
    for j in 1..=k {
        let base = (d + 1 - j) as f64;
        log += ln_gamma((base + b) / 2.0) - ln_gamma(base / 2.0);
    }
    Ok(log.exp())
}

/// `E T^{d,k}_{0,b}` of the Gaussian polytope from its expected `k`-face number.
pub fn t_functional_expected(d: usize, k: usize, b: f64, ef_k: f64) -> Result<f64> {
    Ok(ef_k * t_functional_factor(d, k, b)?)
}

/// Poisson probability `e^-t t^l / l!`.
pub fn poisson_weight(t: f64, l: usize) -> f64 {
    if l == 0 {
        return (-t).exp();
    }
    (-t + l as f64 * t.ln() - ln_gamma(l as f64 + 1.0)).exp()
}

/// Upper bound on `f_k` of the model with `l` points, as a positive
/// combination of `C(l, i)`, and the largest such `i`.
///
/// The Gaussian polytope is simplicial with at most `l` vertices; faces of
/// the symmetric polytope and of the zonotope are images of faces of the
/// crosspolytope and cube, plus the polytope itself.
pub fn poisson_face_bound(model: GaussianModel, l: usize, d: usize, k: usize) -> (f64, usize) {
    match model {
        GaussianModel::Gaussian => (binomial_f64(l, k + 1), k + 1),
        GaussianModel::Symmetric => (2f64.powi(k as i32 + 1) * binomial_f64(l, k + 1) + 1.0, k + 1),
        GaussianModel::Zonotope => {
            let sum: f64 = (k..d).map(|i| binomial_f64(i, k) * binomial_f64(l, i)).sum();
            (2.0 * sum + 1.0, d.saturating_sub(1))
        }
    }
}

/// Bound on `sum_{l > level} e^-t t^l / l! f_k(l)`, or `None` when the
/// geometric ratio argument does not apply yet.
pub fn poisson_tail_bound(model: GaussianModel, t: f64, d: usize, k: usize, level: usize) -> Option<f64> {
    let (bound, degree) = poisson_face_bound(model, level + 1, d, k);
    let denom = (level + 2) as f64 - degree as f64;
    if level + 1 < degree || denom <= t {
        return None;
    }
    Some(poisson_weight(t, level + 1) * bound / (1.0 - t / denom))
}

/// Largest number of points considered before the truncation gives up.
pub const MAX_POISSON_LEVEL: usize = 100_000;

fn check_t(t: f64) -> Result<()> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::InvalidArgument(format!("need a finite t > 0, got {t}")));
    }
    Ok(())
}

/// Smallest level `L` whose tail bound is below `eps`.
pub fn poisson_truncation_level(model: GaussianModel, t: f64, d: usize, k: usize, eps: f64) -> Result<(usize, f64)> {
    check_t(t)?;
    if !(eps > 0.0) {
        return Err(Error::InvalidArgument(format!("need eps > 0, got {eps}")));
    }
    let mut last = f64::INFINITY;
    for level in 0..=MAX_POISSON_LEVEL {
        if let Some(bound) = poisson_tail_bound(model, t, d, k, level) {
            if bound < eps {
                return Ok((level, bound));
            }
            last = bound;
        }
    }
    Err(Error::Truncation {
        eps,
        bound: last,
        level: MAX_POISSON_LEVEL,
    })
}

/// A Poisson mixture of expected face numbers.
#[derive(Clone, Debug, PartialEq)]
pub struct PoissonEstimate {
    pub value: f64,
    pub std_error: f64,
    pub method: Method,
    /// Largest number of points included in the sum.
    pub level: usize,
    /// Bound on the neglected tail.
    pub tail_bound: f64,
}

/// `sum_{l=0}^{level} e^-t t^l / l! E f_k(model with l points)`.
pub fn poisson_partial_sum(
    engine: &AngleEngine,
    model: GaussianModel,
    t: f64,
    d: usize,
    k: usize,
    level: usize,
) -> Result<PoissonEstimate> {
    check_t(t)?;
    let terms = (0..=level)
        .into_par_iter()
        .map(|l| expected_f_model(engine, model, l, d, k).map(|e| (poisson_weight(t, l), e)))
        .collect::<Result<Vec<_>>>()?;
    let mut value = 0.0;
    let mut std_error = 0.0;
    let mut method = Method::Exact;
    for (w, e) in &terms {
        value += w * e.value;
        std_error += w * e.std_error;
        if !e.is_exact() {
            method = Method::MonteCarlo;
        }
    }
    Ok(PoissonEstimate {
        value,
        std_error,
        method,
        level,
        tail_bound: 0.0,
    })
}

/// Expected `k`-face number of the model with a Poisson(`t`) number of
/// points, truncated once the tail bound drops below `eps`.
pub fn poissonized_expected(
    engine: &AngleEngine,
    model: GaussianModel,
    t: f64,
    d: usize,
    k: usize,
    eps: f64,
) -> Result<PoissonEstimate> {
    let (level, tail_bound) = poisson_truncation_level(model, t, d, k, eps)?;
    let mut est = poisson_partial_sum(engine, model, t, d, k, level)?;
    est.tail_bound = tail_bound;
    Ok(est)
}

/// Whether `next` exceeds `prev` strictly: exactly for two rational values,
/// otherwise by more than three times the summed standard errors.
pub fn strictly_increases(prev: &FaceEstimate, next: &FaceEstimate) -> bool {
    if let (Some(a), Some(b)) = (&prev.rational, &next.rational) {
        return b > a;
    }
    next.value - prev.value > 3.0 * (prev.std_error + next.std_error)
}

#[derive(Clone, Debug, PartialEq)]
pub struct MonotonicityRow {
    pub n: usize,
    pub estimate: FaceEstimate,
    /// Strict increase over the previous row; false on the first row.
    pub strict_increase: bool,
}

/// Expected `k`-face numbers over `ns` (ascending), flagging each strict
/// increase over the previous `n`.
pub fn monotonicity_table(
    engine: &AngleEngine,
    subject: Subject,
    d: usize,
    k: usize,
    ns: &[usize],
) -> Result<Vec<MonotonicityRow>> {
    if d < 2 || k > d {
        return Err(Error::InvalidArgument(format!("need d >= 2 and k <= d, got d = {d}, k = {k}")));
    }
    let estimates = ns
        .par_iter()
        .map(|&n| expected_f(engine, subject, n, d, k))
        .collect::<Result<Vec<_>>>()?;
    let mut rows: Vec<MonotonicityRow> = Vec::with_capacity(ns.len());
    for (&n, estimate) in ns.iter().zip(estimates) {
        let strict_increase = rows
            .last()
            .is_some_and(|prev| strictly_increases(&prev.estimate, &estimate));
        rows.push(MonotonicityRow {
            n,
            estimate,
            strict_increase,
        });
    }
    Ok(rows)
}
