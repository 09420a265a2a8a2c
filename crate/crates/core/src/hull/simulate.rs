//! Replicated simulation of the random polytope models.

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::convex::{hull_f_vector, FVectorSample, MAX_HULL_DIM};
use super::sample::{project, random_orthonormal_frame, sample_gaussian, symmetrize};
use super::zonotope::{zonotope_f_vector, MAX_ZONOTOPE_GENERATORS};
use crate::angle::Method;
use crate::error::{Error, Result};
use crate::expected::{ExpectedFVector, FaceEstimate};
use crate::polytope::{vertices, Family};
use crate::rng::{derive_seed, stream_rng};

/// Redraws allowed for one replication before giving up.
pub const MAX_ATTEMPTS: u32 = 1000;

const SIM_TAG: u64 = 0x51;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SimModel {
    /// Hull of `n` Gaussian points.
    Gaussian,
    /// Hull of `±X_1, ..., ±X_n`.
    Symmetric,
    /// Sum of the segments `[0, X_i]`, `i <= n`.
    Zonotope,
    /// The regular `n`-polytope projected onto a uniform random `d`-subspace.
    Projected(Family),
}

impl SimModel {
    pub const ALL: [SimModel; 6] = [
        SimModel::Gaussian,
        SimModel::Symmetric,
        SimModel::Zonotope,
        SimModel::Projected(Family::Simplex),
        SimModel::Projected(Family::Crosspolytope),
        SimModel::Projected(Family::Cube),
    ];

    pub fn name(self) -> &'static str {
        match self {
            SimModel::Gaussian => "gaussian",
            SimModel::Symmetric => "symmetric",
            SimModel::Zonotope => "zonotope",
            SimModel::Projected(Family::Simplex) => "projected_simplex",
            SimModel::Projected(Family::Crosspolytope) => "projected_crosspolytope",
            SimModel::Projected(Family::Cube) => "projected_cube",
        }
    }

    fn tag(self) -> u64 {
        match self {
            SimModel::Gaussian => 1,
            SimModel::Symmetric => 2,
            SimModel::Zonotope => 3,
            SimModel::Projected(f) => 3 + f.tag(),
        }
    }

    /// Dimension of a draw in general position.
    pub fn generic_dim(self, n: usize, d: usize) -> usize {
        match self {
            SimModel::Gaussian => n.saturating_sub(1).min(d),
            _ => n.min(d),
        }
    }
}

impl fmt::Display for SimModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SimModel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let lower = s.to_ascii_lowercase();
        SimModel::ALL
            .into_iter()
            .find(|m| m.name() == lower)
            .or(match lower.as_str() {
                "projected_cross" => Some(SimModel::Projected(Family::Crosspolytope)),
                _ => None,
            })
            .ok_or_else(|| Error::InvalidArgument(format!("unknown simulation model `{s}`")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SimConfig {
    pub model: SimModel,
    pub n: usize,
    pub d: usize,
    pub replications: u64,
    pub seed: u64,
    /// Worker threads; 0 uses the global pool.
    pub workers: usize,
}

impl SimConfig {
    fn validate(&self) -> Result<()> {
        let SimConfig { model, n, d, .. } = *self;
        if !(2..=MAX_HULL_DIM).contains(&d) {
            return Err(Error::InvalidDimension(format!("simulation needs 2 <= d <= {MAX_HULL_DIM}, got {d}")));
        }
        if n < 1 {
            return Err(Error::InvalidDimension("simulation needs n >= 1".into()));
        }
        if self.replications < 1 {
            return Err(Error::InvalidArgument("simulation needs at least one replication".into()));
        }
        if matches!(model, SimModel::Zonotope | SimModel::Projected(Family::Cube)) && n > MAX_ZONOTOPE_GENERATORS {
            return Err(Error::InvalidArgument(format!(
                "zonotope simulations support n <= {MAX_ZONOTOPE_GENERATORS}, got {n}"
            )));
        }
        if let SimModel::Projected(family) = model {
            if d > family.ambient_dim(n) {
                return Err(Error::InvalidArgument(format!(
                    "cannot project the {n}-dimensional {family} onto {d} dimensions"
                )));
            }
        }
        Ok(())
    }
}

/// One draw of the model and its face numbers.
pub fn draw(model: SimModel, n: usize, d: usize, rng: &mut ChaCha8Rng) -> Result<FVectorSample> {
    match model {
        SimModel::Gaussian => hull_f_vector(&sample_gaussian(n, d, rng)),
        SimModel::Symmetric => hull_f_vector(&symmetrize(&sample_gaussian(n, d, rng))),
        SimModel::Zonotope => zonotope_f_vector(&sample_gaussian(n, d, rng).points, d),
        SimModel::Projected(family) => {
            let frame = random_orthonormal_frame(family.ambient_dim(n), d, rng);
            match family {
                // the cube is the sum of its edges e_i, projecting to the frame rows
                Family::Cube => {
                    let rows: Vec<Vec<f64>> = (0..n).map(|i| frame.iter().map(|f| f[i]).collect()).collect();
                    zonotope_f_vector(&rows, d)
                }
                _ => hull_f_vector(&project(&vertices(family, n)?, &frame)),
            }
        }
    }
}

/// Per-replication face numbers and their summary.
#[derive(Clone, Debug, PartialEq)]
pub struct SimResult {
    pub config: SimConfig,
    /// `f_0..f_{d-1}` of every replication, in replication order.
    pub samples: Vec<Vec<u64>>,
    /// Draws discarded as degenerate and redrawn.
    pub degenerate_draws: u64,
    pub mean: Vec<f64>,
    pub std_error: Vec<f64>,
}

impl SimResult {
    pub fn expected(&self) -> ExpectedFVector {
        let entries = self
            .mean
            .iter()
            .zip(&self.std_error)
            .enumerate()
            .map(|(k, (&value, &std_error))| {
                (
                    k,
                    FaceEstimate {
                        value,
                        std_error,
                        method: Method::MonteCarlo,
                        rational: None,
                    },
                )
            })
            .collect();
        ExpectedFVector {
            model: self.config.model.name().to_string(),
            n: self.config.n,
            d: self.config.d,
            entries,
        }
    }

    /// One line per replication: index, model, n, d, f_0, ..., f_{d-1}.
    pub fn write_dump<W: Write>(&self, mut out: W) -> Result<()> {
        let c = &self.config;
        for (rep, counts) in self.samples.iter().enumerate() {
            let fs: Vec<String> = counts.iter().map(u64::to_string).collect();
            writeln!(out, "{rep},{},{},{},{}", c.model, c.n, c.d, fs.join(","))?;
        }
        Ok(())
    }
}

/// Runs one replication, redrawing degenerate configurations on the same
/// stream. Returns the face numbers and the number of redraws.
fn replicate(cfg: &SimConfig, seed: u64, rep: u64) -> Result<(Vec<u64>, u64)> {
    let mut rng = stream_rng(seed, rep);
    let generic = cfg.model.generic_dim(cfg.n, cfg.d);
    let mut redraws = 0;
    for _ in 0..MAX_ATTEMPTS {
        match draw(cfg.model, cfg.n, cfg.d, &mut rng) {
            Ok(f) if f.dim == generic => return Ok((f.counts, redraws)),
            Ok(_) | Err(Error::Degenerate(_)) => redraws += 1,
            Err(e) => return Err(e),
        }
    }
    Err(Error::Degenerate(format!(
        "replication {rep} stayed degenerate after {MAX_ATTEMPTS} draws"
    )))
}

/// Empirical mean and standard error of every `f_k` over `cfg.replications`
/// independent draws. Replication `r` always uses random stream `r`, so the
/// result does not depend on the number of workers.
pub fn simulate_expected_f(cfg: &SimConfig) -> Result<SimResult> {
    cfg.validate()?;
    let seed = derive_seed(cfg.seed, &[SIM_TAG, cfg.model.tag(), cfg.n as u64, cfg.d as u64]);
    let run = || {
        (0..cfg.replications)
            .into_par_iter()
            .map(|rep| replicate(cfg, seed, rep))
            .collect::<Result<Vec<_>>>()
    };
    let results = if cfg.workers == 0 {
        run()?
    } else {
        rayon::ThreadPoolBuilder::new()
            .num_threads(cfg.workers)
            .build()
            .map_err(|e| Error::InvalidArgument(format!("cannot start {} workers: {e}", cfg.workers)))?
            .install(run)?
    };
    let degenerate_draws: u64 = results.iter().map(|r| r.1).sum();
    if degenerate_draws.saturating_mul(1000) > cfg.replications {
        return Err(Error::ExcessiveDegeneracy {
            degenerate: degenerate_draws,
            replications: cfg.replications,
        });
    }
    let samples: Vec<Vec<u64>> = results.into_iter().map(|r| r.0).collect();
    let (mean, std_error) = summarize(&samples, cfg.d);
    Ok(SimResult {
        config: *cfg,
        samples,
        degenerate_draws,
        mean,
        std_error,
    })
}

/// Mean and standard error of the mean per column, from exact integer sums.
fn summarize(samples: &[Vec<u64>], width: usize) -> (Vec<f64>, Vec<f64>) {
    let r = samples.len() as u128;
    let mut mean = Vec::with_capacity(width);
    let mut se = Vec::with_capacity(width);
    for k in 0..width {
        let (s1, s2) = samples.iter().fold((0u128, 0u128), |(a, b), row| {
            let x = row[k] as u128;
            (a + x, b + x * x)
        });
        mean.push(s1 as f64 / r as f64);
        if r < 2 {
            se.push(0.0);
        } else {
            let numer = (r * s2 - s1 * s1) as f64;
            se.push((numer / (r * (r - 1)) as f64 / r as f64).sqrt());
        }
    }
    (mean, se)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hull::zonotope::generic_zonotope_face_count;

    fn cfg(model: SimModel, n: usize, d: usize, replications: u64) -> SimConfig {
        SimConfig {
            model,
            n,
            d,
            replications,
            seed: 99,
            workers: 0,
        }
    }

    #[test]
    fn model_names_round_trip() {
        for m in SimModel::ALL {
            assert_eq!(m.name().parse::<SimModel>().unwrap(), m);
        }
        assert!("hexagon".parse::<SimModel>().is_err());
    }

    #[test]
    fn summary_statistics() {
        let (m, s) = summarize(&[vec![1], vec![3]], 1);
        assert_eq!(m, vec![2.0]);
        assert!((s[0] - 1.0).abs() < 1e-15);
        let (_, s) = summarize(&[vec![5]], 1);
        assert_eq!(s, vec![0.0]);
    }

    #[test]
    fn triangles_have_three_vertices() {
        let res = simulate_expected_f(&cfg(SimModel::Gaussian, 3, 2, 500)).unwrap();
        assert_eq!(res.mean, vec![3.0, 3.0]);
        assert_eq!(res.std_error, vec![0.0, 0.0]);
    }

    #[test]
    fn zonotopes_are_deterministic() {
        for model in [SimModel::Zonotope, SimModel::Projected(Family::Cube)] {
            let res = simulate_expected_f(&cfg(model, 5, 3, 20)).unwrap();
            for k in 0..3 {
                assert_eq!(res.mean[k], generic_zonotope_face_count(5, 3, k) as f64);
                assert_eq!(res.std_error[k], 0.0);
            }
        }
    }

    #[test]
    fn symmetric_vertex_numbers_are_even() {
        let res = simulate_expected_f(&cfg(SimModel::Symmetric, 3, 2, 2000)).unwrap();
        assert!(res.samples.iter().all(|s| s[0] % 2 == 0));
        let mut dump = Vec::new();
        res.write_dump(&mut dump).unwrap();
        let text = String::from_utf8(dump).unwrap();
        assert_eq!(text.lines().count(), 2000);
        assert!(text.lines().all(|l| l.split(',').nth(4).unwrap().parse::<u64>().unwrap() % 2 == 0));
        assert!(text.starts_with("0,symmetric,3,2,"));
    }

    #[test]
    fn every_draw_satisfies_euler() {
        for model in SimModel::ALL {
            for d in 2..=4 {
                let n = d + 2;
                let res = simulate_expected_f(&cfg(model, n, d, 30)).unwrap();
                for s in &res.samples {
                    let f = FVectorSample {
                        counts: s.clone(),
                        dim: d,
                        degenerate: false,
                    };
                    assert!(f.satisfies_euler(), "{model} n={n} d={d} {s:?}");
                }
            }
        }
    }

    #[test]
    fn worker_count_does_not_matter() {
        let mut a = cfg(SimModel::Projected(Family::Crosspolytope), 4, 3, 300);
        a.workers = 1;
        let mut b = a;
        b.workers = 3;
        let (ra, rb) = (simulate_expected_f(&a).unwrap(), simulate_expected_f(&b).unwrap());
        assert_eq!(ra.samples, rb.samples);
        assert_eq!(ra.mean, rb.mean);
    }

    #[test]
    fn configurations_are_validated() {
        assert!(simulate_expected_f(&cfg(SimModel::Gaussian, 4, 7, 1)).is_err());
        assert!(simulate_expected_f(&cfg(SimModel::Gaussian, 4, 2, 0)).is_err());
        assert!(simulate_expected_f(&cfg(SimModel::Zonotope, 16, 2, 1)).is_err());
        assert!(simulate_expected_f(&cfg(SimModel::Projected(Family::Cube), 2, 3, 1)).is_err());
    }
}
