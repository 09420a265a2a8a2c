use std::path::Path;
use std::process::{Command, Output};

use polyshadow_cli::args::Format;
use polyshadow_cli::report::{read_report, ReportRow};

fn polyshadow(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_polyshadow"))
        .args(args)
        .env_remove("POLYSHADOW_WORKERS")
        .output()
        .expect("binary runs")
}

fn rows(format: Format, bytes: &[u8]) -> Vec<ReportRow> {
    read_report(format, bytes).expect("report parses")
}

#[test]
fn cube_shadow_is_a_hexagon() {
    let out = polyshadow(&["expected", "--family", "cube", "--n", "3", "--d", "2", "--k", "0,1"]);
    assert!(out.status.success());
    let r = rows(Format::Csv, &out.stdout);
    assert_eq!(r.len(), 2);
    assert!(r.iter().all(|row| row.value == 6.0 && row.stderr == 0.0 && row.method == "exact"));
}

#[test]
fn json_and_csv_carry_the_same_rows() {
    let base = ["expected", "--model", "symmetric", "--n", "4", "--d", "2", "--all-k", "--samples", "20000"];
    let csv = polyshadow(&base);
    let json = polyshadow(&[&base[..], &["--format", "json"]].concat());
    assert!(csv.status.success() && json.status.success());
    let (a, b) = (rows(Format::Csv, &csv.stdout), rows(Format::Json, &json.stdout));
    assert_eq!(a.len(), 3);
    assert_eq!(a.len(), b.len());
    for (x, y) in a.iter().zip(&b) {
        assert_eq!((x.k, &x.method, x.value.to_bits()), (y.k, &y.method, y.value.to_bits()));
    }
}

#[test]
fn simulation_reports_a_reference() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("sim.csv");
    let dump = dir.path().join("raw.txt");
    let out = polyshadow(&[
        "simulate",
        "--model",
        "zonotope",
        "--n",
        "4",
        "--d",
        "3",
        "--reps",
        "25",
        "--k",
        "0",
        "--output",
        report.to_str().unwrap(),
        "--dump",
        dump.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let r = rows(Format::Csv, &std::fs::read(&report).unwrap());
    assert_eq!(r[0].value, 14.0);
    assert_eq!(r[0].reference, Some(14.0));
    assert_eq!(r[0].z_score, Some(0.0));
    let raw = std::fs::read_to_string(&dump).unwrap();
    assert_eq!(raw.lines().count(), 25);
    assert!(raw.lines().all(|l| l.contains(",zonotope,4,3,14,")));
}

#[test]
fn monotonicity_flags_follow_the_first_row() {
    let out = polyshadow(&["monotonicity", "--family", "cube", "--d", "2", "--n-min", "2", "--n-max", "5", "--k", "0"]);
    assert!(out.status.success());
    let r = rows(Format::Csv, &out.stdout);
    let flags: Vec<Option<bool>> = r.iter().map(|row| row.strict_increase).collect();
    assert_eq!(flags, vec![None, Some(true), Some(true), Some(true)]);
    assert_eq!(r.iter().map(|row| row.value).collect::<Vec<_>>(), vec![4.0, 6.0, 8.0, 10.0]);
}

#[test]
fn poisson_grid_with_t_functional() {
    let out = polyshadow(&[
        "poisson", "--model", "zonotope", "--d", "2", "--k", "0", "--t", "1,2,4", "--b", "1",
    ]);
    assert!(out.status.success());
    let r = rows(Format::Csv, &out.stdout);
    assert_eq!(r.iter().map(|row| row.t).collect::<Vec<_>>(), vec![Some(1.0), Some(2.0), Some(4.0)]);
    assert!(r.windows(2).all(|w| w[1].value >= w[0].value));
    assert!(r.iter().all(|row| row.t_functional == Some(row.value)));
}

#[test]
fn angle_cache_is_reused() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("angles.txt");
    let cache = cache.to_str().unwrap();
    let args = ["expected", "--family", "simplex", "--n", "4", "--d", "2", "--k", "0", "--samples", "20000"];
    let first = polyshadow(&[&args[..], &["--angle-cache", cache]].concat());
    let lines = std::fs::read_to_string(cache).unwrap().lines().count();
    assert!(lines > 0);
    let second = polyshadow(&[&args[..], &["--angle-cache", cache]].concat());
    assert_eq!(first.stdout, second.stdout);
    assert_eq!(std::fs::read_to_string(cache).unwrap().lines().count(), lines);
}

#[test]
fn bad_input_is_a_usage_error() {
    let cases: [&[&str]; 5] = [
        &["expected", "--family", "cube", "--n", "0", "--d", "2", "--k", "0"],
        &["expected", "--family", "blob", "--n", "3", "--d", "2", "--k", "0"],
        &["expected", "--family", "cube", "--model", "gaussian", "--n", "3", "--d", "2", "--k", "0"],
        &["simulate", "--model", "gaussian", "--n", "5", "--d", "9", "--k", "0"],
        &["poisson", "--model", "gaussian", "--d", "2", "--k", "0", "--t-range", "3:1:1"],
    ];
    for args in cases {
        let out = polyshadow(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn report_file_matches_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.csv");
    let args = ["expected", "--family", "crosspolytope", "--n", "3", "--d", "2", "--all-k", "--samples", "20000"];
    let stdout = polyshadow(&args).stdout;
    assert!(polyshadow(&[&args[..], &["--output", path.to_str().unwrap()]].concat()).status.success());
    assert_eq!(std::fs::read(Path::new(&path)).unwrap(), stdout);
}
