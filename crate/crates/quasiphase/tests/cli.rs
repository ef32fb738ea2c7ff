use std::fs::File;
use std::path::Path;
use std::process::{Command, Output};

use num_complex::Complex64 as C64;
use quasiphase::analytic::{interference_term, regularized_delta, spats_p, KernelSpec};
use quasiphase::io::{
    payload_checksum, read_grid_csv, read_grid_json, GridData, RunManifest, TableDocument,
};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_quasiphase"))
        .args(args)
        .output()
        .unwrap()
}

fn real(data: GridData) -> quasiphase::grid::Grid2D<f64> {
    match data {
        GridData::Real(g) => g,
        GridData::Complex(_) => panic!("expected a real grid"),
    }
}

#[test]
fn spats_csv_round_trip_with_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("spats.csv");
    let status = run(&[
        "spats",
        "--nbar",
        "1",
        "--grid",
        "-2:2:21,-2:2:17",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(status.status.code(), Some(0));
    let grid = real(read_grid_csv(File::open(&out).unwrap()).unwrap());
    assert_eq!(grid.axes().re.count(), 21);
    assert_eq!(grid.axes().im.count(), 17);
    for (a, v) in grid.iter() {
        assert_eq!(v, spats_p(1.0, a).unwrap());
    }
    let manifest: RunManifest = serde_json::from_reader(
        File::open(Path::new(&format!("{}.manifest.json", out.display()))).unwrap(),
    )
    .unwrap();
    assert_eq!(manifest.subcommand, "spats");
    assert_eq!(manifest.checksum, payload_checksum(grid.values()));
}

#[test]
fn complex_json_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("term.json");
    let status = run(&[
        "cat-p",
        "--beta",
        "1",
        "--grid",
        "-1:1:5,-1:1:5",
        "--format",
        "json",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(status.status.code(), Some(0));
    let GridData::Complex(grid) = read_grid_json(File::open(&out).unwrap()).unwrap() else {
        panic!("interference view is complex");
    };
    let kernel = KernelSpec::sinc2(3.0).unwrap();
    let term = interference_term(C64::new(-1.0, 0.0), C64::new(1.0, 0.0));
    for (a, v) in grid.iter() {
        assert!((v - regularized_delta(&term, &kernel, a)).norm() < 1e-15);
    }
}

#[test]
fn grid_outputs_are_byte_identical_across_runs() {
    let args = ["hybrid", "--grid", "-2:2:31,-2:2:31"];
    let (a, b) = (run(&args), run(&args));
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn singlet_table_has_six_negative_cells() {
    let out = run(&["ent-bell", "--state", "singlet", "--format", "json"]);
    assert!(out.status.success());
    let doc: TableDocument = serde_json::from_slice(&out.stdout).unwrap();
    let negatives = doc
        .table
        .values
        .iter()
        .flatten()
        .filter(|&&v| v < 0.0)
        .count();
    assert_eq!(negatives, 6);
    assert!((doc.total_negativity.unwrap() - 4.0 / 3.0).abs() < 1e-10);
}

#[test]
fn separable_werner_table_is_nonnegative() {
    let out = run(&["ent-bell", "--state", "werner:0.2"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let values: Vec<f64> = text
        .lines()
        .skip(1)
        .map(|l| l.rsplit(',').next().unwrap().parse().unwrap())
        .collect();
    assert_eq!(values.len(), 36);
    assert!(values.iter().all(|&v| v >= 0.0));
}

#[test]
fn even_cat_cut_goes_negative() {
    let out = run(&[
        "clicks", "--state", "even", "--cut", "re=0", "--range", "-3:3:61",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let min = text
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(2).unwrap().parse::<f64>().unwrap())
        .fold(f64::INFINITY, f64::min);
    assert!(min < 0.0);
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(run(&["spats", "--nbar", "-1"]).status.code(), Some(1));
    assert_eq!(
        run(&["spats", "--nbar", "1", "--grid", "1:-1:5,0:1:3"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(run(&["cat-p", "--kernel", "bogus"]).status.code(), Some(1));
    assert_eq!(run(&["clicks", "--N", "3"]).status.code(), Some(1));
    assert_eq!(
        run(&["clicks", "--state", "even", "--mc"]).status.code(),
        Some(1)
    );
    assert_eq!(run(&["no-such-command"]).status.code(), Some(1));
}

#[test]
fn monte_carlo_disagreement_exits_two() {
    // three shots that all land on the same outcome: zero spread, wrong mean
    let out = run(&[
        "clicks", "--state", "thermal", "--cut", "im=0", "--range", "0:1:2", "--mc", "--shots",
        "3", "--seed", "0",
    ]);
    assert_eq!(out.status.code(), Some(2));
    let ok = run(&[
        "clicks", "--state", "thermal", "--cut", "im=0", "--range", "0:1:2", "--mc", "--shots",
        "50000", "--seed", "0",
    ]);
    assert_eq!(ok.status.code(), Some(0));
}

#[test]
fn tripartite_reports_limits() {
    let out = run(&["tripartite", "--grid", "-1:1:5,-1:1:5"]);
    assert!(out.status.success());
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("W fidelity 0.99985"));
}
