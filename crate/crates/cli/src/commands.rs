//! Subcommand implementations: each turns parsed arguments into report rows.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::time::Instant;

use polyshadow::expected::{
    expected_f, monotonicity_table, poissonized_expected, t_functional_expected, PoissonEstimate,
};
use polyshadow::hull::{simulate_expected_f, SimConfig, SimModel};
use polyshadow::{AngleEngine, Error, FaceEstimate, Family, GaussianModel, MCConfig, Subject};

use crate::args::{Command, Common, ExpectedArgs, Faces, MonotonicityArgs, PoissonArgs, SimulateArgs};
use crate::report::{write_report, ReportRow};

#[derive(Debug)]
pub enum CliError {
    /// Invalid arguments; exit code 2.
    Usage(String),
    /// Numeric, simulation or I/O failure; exit code 1.
    Failure(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Failure(_) => 1,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Failure(m) => write!(f, "error: {m}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidDimension(_) | Error::InvalidArgument(_) | Error::InvalidFace(_) | Error::InvalidPair { .. } => {
                CliError::Usage(e.to_string())
            }
            _ => CliError::Failure(e.to_string()),
        }
    }
}

fn usage(message: impl Into<String>) -> CliError {
    CliError::Usage(message.into())
}

fn failure(e: impl std::fmt::Display) -> CliError {
    CliError::Failure(e.to_string())
}

/// Rows of a report plus an optional verdict for standard error.
#[derive(Debug, Default)]
pub struct Outcome {
    pub rows: Vec<ReportRow>,
    pub summary: Vec<String>,
}

/// Runs a subcommand, writes its report and prints its summary to stderr.
pub fn run(command: Command) -> Result<(), CliError> {
    let common = match &command {
        Command::Expected(a) => a.common.clone(),
        Command::Simulate(a) => a.common.clone(),
        Command::Monotonicity(a) => a.common.clone(),
        Command::Poisson(a) => a.common.clone(),
    };
    if common.workers > 0 {
        // Fails only if the global pool already exists, which is harmless.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(common.workers).build_global();
    }
    if common.samples == 0 {
        return Err(usage("--samples must be at least 1"));
    }
    let engine = AngleEngine::new(MCConfig {
        samples: common.samples,
        seed: common.seed,
    });
    if let Some(path) = &common.angle_cache {
        engine.load_cache(path)?;
    }
    let outcome = match command {
        Command::Expected(a) => expected(&engine, &a)?,
        Command::Simulate(a) => simulate(&engine, &a)?,
        Command::Monotonicity(a) => monotonicity(&engine, &a)?,
        Command::Poisson(a) => poisson(&engine, &a)?,
    };
    if let Some(path) = &common.angle_cache {
        engine.append_cache(path)?;
    }
    emit(&outcome, &common)?;
    for line in &outcome.summary {
        eprintln!("{line}");
    }
    Ok(())
}

fn emit(outcome: &Outcome, common: &Common) -> Result<(), CliError> {
    match &common.output {
        Some(path) => {
            let file = File::create(path).map_err(|e| failure(format!("{}: {e}", path.display())))?;
            let mut out = BufWriter::new(file);
            write_report(&outcome.rows, common.format, &mut out).map_err(failure)?;
            out.flush().map_err(failure)
        }
        None => {
            let stdout = std::io::stdout();
            write_report(&outcome.rows, common.format, stdout.lock()).map_err(failure)
        }
    }
}

/// Face dimensions requested, `--all-k` meaning `0..=top`.
fn face_dims(faces: &Faces, top: usize) -> Result<Vec<usize>, CliError> {
    if faces.all_k {
        return Ok((0..=top).collect());
    }
    if faces.k.is_empty() {
        return Err(usage("pass --k or --all-k"));
    }
    Ok(faces.k.clone())
}

fn parse_subject(family: Option<&str>, model: Option<&str>) -> Result<Subject, CliError> {
    match (family, model) {
        (Some(f), None) => Ok(Subject::Family(f.parse()?)),
        (None, Some(m)) => Ok(Subject::Model(m.parse()?)),
        _ => Err(usage("pass exactly one of --family and --model")),
    }
}

fn subject_columns(subject: Subject) -> (String, String) {
    match subject {
        Subject::Family(f) => ("projection".into(), f.name().into()),
        Subject::Model(m) => (m.name().into(), m.family().name().into()),
    }
}

fn timed<T>(timing: bool, f: impl FnOnce() -> T) -> (T, Option<f64>) {
    let start = Instant::now();
    let out = f();
    (out, timing.then(|| start.elapsed().as_secs_f64() * 1e3))
}

fn estimate_row(subject: Subject, n: Option<usize>, d: usize, k: usize, est: &FaceEstimate) -> ReportRow {
    let (model, family) = subject_columns(subject);
    ReportRow {
        model,
        family,
        n,
        d,
        k,
        t: None,
        b: None,
        value: est.value,
        stderr: est.std_error,
        method: est.method.name().into(),
        reference: None,
        z_score: None,
        strict_increase: None,
        wall_time_ms: None,
        t_functional: None,
    }
}

pub fn expected(engine: &AngleEngine, a: &ExpectedArgs) -> Result<Outcome, CliError> {
    let subject = parse_subject(a.family.as_deref(), a.model.as_deref())?;
    if a.n < 1 || a.d < 1 {
        return Err(usage("--n and --d must be at least 1"));
    }
    let mut rows = Vec::new();
    for k in face_dims(&a.faces, a.n.min(a.d))? {
        let (est, ms) = timed(a.common.timing, || expected_f(engine, subject, a.n, a.d, k));
        let mut row = estimate_row(subject, Some(a.n), a.d, k, &est?);
        row.wall_time_ms = ms;
        rows.push(row);
    }
    Ok(Outcome { rows, summary: Vec::new() })
}

/// Formula value matching a simulated model.
fn reference(engine: &AngleEngine, model: SimModel, n: usize, d: usize, k: usize) -> Result<FaceEstimate, CliError> {
    let subject = match model {
        SimModel::Gaussian => Subject::Model(GaussianModel::Gaussian),
        SimModel::Symmetric => Subject::Model(GaussianModel::Symmetric),
        SimModel::Zonotope => Subject::Model(GaussianModel::Zonotope),
        SimModel::Projected(f) => Subject::Family(f),
    };
    Ok(expected_f(engine, subject, n, d, k)?)
}

fn sim_family(model: SimModel) -> Family {
    match model {
        SimModel::Gaussian => Family::Simplex,
        SimModel::Symmetric => Family::Crosspolytope,
        SimModel::Zonotope => Family::Cube,
        SimModel::Projected(f) => f,
    }
}

/// Standardized difference, zero for two equal exact values and absent when
/// two different values both have zero error.
pub fn z_score(value: f64, se: f64, reference: f64, reference_se: f64) -> Option<f64> {
    let denom = se.hypot(reference_se);
    if denom > 0.0 {
        Some((value - reference) / denom)
    } else if value == reference {
        Some(0.0)
    } else {
        None
    }
}

pub fn simulate(engine: &AngleEngine, a: &SimulateArgs) -> Result<Outcome, CliError> {
    let model: SimModel = a.model.parse()?;
    let cfg = SimConfig {
        model,
        n: a.n,
        d: a.d,
        replications: a.reps,
        seed: a.common.seed,
        workers: a.common.workers,
    };
    let dims = face_dims(&a.faces, a.d.saturating_sub(1))?;
    if let Some(&k) = dims.iter().find(|&&k| k >= a.d) {
        return Err(usage(format!("simulations report k < d, got k = {k}")));
    }
    let (result, ms) = timed(a.common.timing, || simulate_expected_f(&cfg));
    let result = result?;
    if let Some(path) = &a.dump {
        let file = File::create(path).map_err(|e| failure(format!("{}: {e}", path.display())))?;
        let mut out = BufWriter::new(file);
        result.write_dump(&mut out)?;
        out.flush().map_err(failure)?;
    }
    let mut rows = Vec::new();
    for k in dims {
        let reference = reference(engine, model, a.n, a.d, k)?;
        let (value, se) = (result.mean[k], result.std_error[k]);
        rows.push(ReportRow {
            model: model.name().into(),
            family: sim_family(model).name().into(),
            n: Some(a.n),
            d: a.d,
            k,
            t: None,
            b: None,
            value,
            stderr: se,
            method: "monte_carlo".into(),
            reference: Some(reference.value),
            z_score: z_score(value, se, reference.value, reference.std_error),
            strict_increase: None,
            wall_time_ms: ms,
            t_functional: None,
        });
    }
    let summary = vec![format!(
        "simulate: {} replications, {} degenerate draws redrawn",
        a.reps, result.degenerate_draws
    )];
    Ok(Outcome { rows, summary })
}

pub fn monotonicity(engine: &AngleEngine, a: &MonotonicityArgs) -> Result<Outcome, CliError> {
    let mut subjects = Vec::new();
    for f in &a.family {
        subjects.push(Subject::Family(f.parse()?));
    }
    for m in &a.model {
        subjects.push(Subject::Model(m.parse()?));
    }
    if a.d < 2 {
        return Err(usage("--d must be at least 2"));
    }
    if a.n_min < 1 || a.n_max < a.n_min {
        return Err(usage("need 1 <= --n-min <= --n-max"));
    }
    let ns: Vec<usize> = (a.n_min..=a.n_max).collect();
    let dims = face_dims(&a.faces, a.d)?;
    let mut rows = Vec::new();
    let mut summary = Vec::new();
    let (mut strict_total, mut pairs_total) = (0, 0);
    for &subject in &subjects {
        for &k in &dims {
            let (table, ms) = timed(a.common.timing, || monotonicity_table(engine, subject, a.d, k, &ns));
            let table = table?;
            let strict = table.iter().filter(|r| r.strict_increase).count();
            let pairs = table.len() - 1;
            strict_total += strict;
            pairs_total += pairs;
            summary.push(format!("{subject} d={} k={k}: {strict}/{pairs} consecutive pairs strictly increasing", a.d));
            for (i, r) in table.iter().enumerate() {
                let mut row = estimate_row(subject, Some(r.n), a.d, k, &r.estimate);
                row.strict_increase = (i > 0).then_some(r.strict_increase);
                row.wall_time_ms = ms;
                rows.push(row);
            }
        }
    }
    let verdict = if strict_total == pairs_total { "all strict" } else { "not all strict" };
    summary.push(format!(
        "monotonicity: {strict_total}/{pairs_total} consecutive pairs strictly increasing ({verdict})"
    ));
    Ok(Outcome { rows, summary })
}

/// Parses `start:stop:step` into an inclusive grid.
pub fn parse_t_range(range: &str) -> Result<Vec<f64>, CliError> {
    let parts: Vec<&str> = range.split(':').collect();
    let nums: Vec<f64> = parts
        .iter()
        .map(|p| p.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|e| usage(format!("--t-range `{range}`: {e}")))?;
    let [start, stop, step] = nums[..] else {
        return Err(usage(format!("--t-range `{range}` must be start:stop:step")));
    };
    if !(step > 0.0) || !(stop >= start) || !start.is_finite() || !stop.is_finite() {
        return Err(usage(format!("--t-range `{range}` needs step > 0 and start <= stop")));
    }
    let count = ((stop - start) / step + 1e-9).floor() as usize;
    Ok((0..=count).map(|i| start + i as f64 * step).collect())
}

/// Whether `next` is at least `prev` up to the truncation tails and three
/// standard errors.
pub fn non_decreasing(prev: &PoissonEstimate, next: &PoissonEstimate) -> bool {
    let slack = prev.tail_bound + next.tail_bound + 3.0 * (prev.std_error + next.std_error);
    next.value >= prev.value - slack
}

pub fn poisson(engine: &AngleEngine, a: &PoissonArgs) -> Result<Outcome, CliError> {
    let model: GaussianModel = a.model.parse()?;
    let grid = match &a.t_range {
        Some(spec) => parse_t_range(spec)?,
        None => a.t.clone(),
    };
    if a.d < 1 {
        return Err(usage("--d must be at least 1"));
    }
    let dims = face_dims(&a.faces, a.d)?;
    let mut rows = Vec::new();
    let mut summary = Vec::new();
    for k in dims {
        let mut prev: Option<PoissonEstimate> = None;
        let mut monotone = true;
        for &t in &grid {
            let (est, ms) = timed(a.common.timing, || poissonized_expected(engine, model, t, a.d, k, a.eps));
            let est = est?;
            if let Some(p) = &prev {
                monotone &= non_decreasing(p, &est);
            }
            let t_functional = a.b.map(|b| t_functional_expected(a.d, k, b, est.value)).transpose()?;
            rows.push(ReportRow {
                model: model.name().into(),
                family: model.family().name().into(),
                n: None,
                d: a.d,
                k,
                t: Some(t),
                b: a.b,
                value: est.value,
                stderr: est.std_error,
                method: est.method.name().into(),
                reference: None,
                z_score: None,
                strict_increase: None,
                wall_time_ms: ms,
                t_functional,
            });
            prev = Some(est);
        }
        let verdict = if monotone { "non-decreasing" } else { "NOT non-decreasing" };
        summary.push(format!("poisson {model} d={} k={k}: {verdict} over {} intensities", a.d, grid.len()));
    }
    Ok(Outcome { rows, summary })
}
