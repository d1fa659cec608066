use std::fs;
use std::process::Command;

use lattice_sight::cli::run;
use lattice_sight::render::parse_pbm;
use lattice_sight_core::{sieve_grid, Exponent, SieveConfig};
use serde_json::Value;

fn invoke(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("lattice-sight").chain(args.iter().copied());
    let status = run(argv, &mut out, &mut err);
    (
        status,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

fn json(args: &[&str]) -> Value {
    let (status, out, err) = invoke(args);
    assert_eq!(status, 0, "{err}");
    serde_json::from_str(&out).unwrap()
}

#[test]
fn ggcd_prints_the_value() {
    assert_eq!(
        invoke(&["ggcd", "--b", "2", "7", "49"]),
        (0, "7\n".into(), String::new())
    );
    assert_eq!(invoke(&["ggcd", "--b", "3", "7", "49"]).1, "1\n");
    assert_eq!(invoke(&["ggcd", "--b", "2", "27819", "602202600"]).1, "9\n");
    // ordinate far beyond 64 bits
    let s = format!("{}", lattice_sight_core::BigUint::from(10u32).pow(40));
    assert_eq!(invoke(&["ggcd", "--b", "2", "20", &s]).1, "20\n");
}

#[test]
fn usage_errors_exit_2() {
    let (status, out, err) = invoke(&["ggcd", "--b", "0", "7", "49"]);
    assert_eq!(status, 2);
    assert!(out.is_empty());
    assert!(err.contains("Usage"), "{err}");
    assert_eq!(invoke(&["ggcd", "--b", "1", "0", "3"]).0, 2);
    assert_eq!(
        invoke(&["density", "--b", "1", "--n", "50", "--method", "fast"]).0,
        2
    );
    assert_eq!(
        invoke(&["density", "--b", "1", "--n", "5", "--csv", "--plain"]).0,
        2
    );
    assert_eq!(invoke(&["frobnicate"]).0, 2);
    assert_eq!(invoke(&["--help"]).0, 0);
}

#[test]
fn domain_errors_exit_1() {
    let (status, _, err) = invoke(&["zeta", "1"]);
    assert_eq!(status, 1);
    assert_eq!(err, "zeta(1) diverges; s must be at least 2\n");
    let (status, _, err) = invoke(&[
        "forest", "verify", "--b", "2", "--cols", "1", "--rows", "1", "1", "1",
    ]);
    assert_eq!(status, 1);
    assert!(err.starts_with("not a forest"), "{err}");
    let (status, _, err) = invoke(&[
        "forest", "search", "--b", "1", "--cols", "2", "--rows", "2", "--rmax", "10", "--smax",
        "10",
    ]);
    assert_eq!(status, 1);
    assert!(err.contains("no forest found"));
    let (status, _, err) = invoke(&[
        "density",
        "--b",
        "1",
        "--n",
        "100",
        "--method",
        "sieve",
        "--max-cells",
        "50",
    ]);
    assert_eq!(status, 1);
    assert!(err.contains("exceeds the configured cap"));
}

#[test]
fn point_queries() {
    assert_eq!(invoke(&["visible", "--b", "1", "1", "10"]).1, "true\n");
    assert_eq!(invoke(&["visible", "--b", "1", "2", "20"]).1, "false\n");
    assert_eq!(invoke(&["coeff", "--b", "3", "7", "49"]).1, "1/7\n");
    assert_eq!(invoke(&["coeff", "--b", "2", "2", "8"]).1, "2/1\n");
}

#[test]
fn density_json() {
    let v = json(&["density", "--b", "1", "--n", "50", "--method", "brute"]);
    assert_eq!(v["invisible_count"], 953);
    assert_eq!(v["N"], 50);
    assert_eq!(v["total"], 2500);
    for method in ["sieve", "moebius"] {
        let v = json(&[
            "density",
            "--b",
            "2",
            "--n",
            "50",
            "--method",
            method,
            "--threads",
            "3",
        ]);
        assert_eq!(v["invisible_count"], 399);
        assert_eq!(v["method"], method);
    }
}

#[test]
fn table_outputs() {
    let v = json(&["table"]);
    let counts: Vec<u64> = v
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["invisible_count"].as_u64().unwrap())
        .collect();
    assert_eq!(counts, [953, 399, 166, 75]);
    let (_, csv, _) = invoke(&["table", "--b", "1,2", "--n", "50", "--csv"]);
    assert_eq!(csv.lines().count(), 3);
    assert!(csv
        .lines()
        .nth(2)
        .unwrap()
        .starts_with("2,50,399,2101,2500,0.1596,"));
    let (_, plain, _) = invoke(&["table", "--plain"]);
    assert!(plain.contains("953/2500 ≈ 0.381"));
}

#[test]
fn zeta_json() {
    let v = json(&["zeta", "2"]);
    let value = v["value"].as_f64().unwrap();
    assert!((value - std::f64::consts::PI.powi(2) / 6.0).abs() < 1e-12);
    assert!(v["abs_error_bound"].as_f64().unwrap() <= 1e-12);
}

#[test]
fn forest_construct_default_and_file() {
    let v = json(&[
        "forest",
        "construct",
        "--b",
        "2",
        "--cols",
        "3",
        "--rows",
        "2",
    ]);
    assert_eq!(v["forest"]["anchor"]["r"], "27818");
    assert_eq!(v["forest"]["anchor"]["s"], "602202600");
    assert_eq!(v["forest"]["r_modulus"], "30030");
    assert_eq!(
        v["prime_matrix"],
        serde_json::json!([[7, 11, 13], [2, 3, 5]])
    );
    assert_eq!(v["witnesses"]["cells"][0][2]["value"], "10");

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("p.txt");
    fs::write(&path, "5 7\n2 3\n").unwrap();
    let path = path.to_str().unwrap();
    let v = json(&["forest", "construct", "--b", "1", "--primes", path]);
    assert_eq!(v["forest"]["anchor"]["r"], "20");
    assert_eq!(v["forest"]["anchor"]["s"], "174");
    let (status, _, err) = invoke(&[
        "forest",
        "construct",
        "--b",
        "1",
        "--primes",
        path,
        "--cols",
        "3",
    ]);
    assert_eq!(status, 1);
    assert!(err.contains("dimension mismatch"));
    fs::write(dir.path().join("bad.txt"), "4 7\n2 3\n").unwrap();
    let bad = dir.path().join("bad.txt");
    assert_eq!(
        invoke(&[
            "forest",
            "construct",
            "--b",
            "1",
            "--primes",
            bad.to_str().unwrap()
        ])
        .0,
        1
    );
}

#[test]
fn forest_verify_and_search() {
    let v = json(&[
        "forest", "verify", "--b", "2", "--n", "3", "--m", "2", "440", "38024",
    ]);
    let values: Vec<&str> = v["witnesses"]["cells"]
        .as_array()
        .unwrap()
        .iter()
        .flat_map(|row| {
            row.as_array()
                .unwrap()
                .iter()
                .map(|c| c["value"].as_str().unwrap())
        })
        .collect();
    assert_eq!(values.len(), 6);
    let v = json(&[
        "forest", "search", "--b", "1", "--cols", "2", "--rows", "2", "--rmax", "100", "--smax",
        "100",
    ]);
    assert_eq!(v["best"]["anchor"]["r"], "20");
    assert_eq!(v["best"]["anchor"]["s"], "14");
    assert_eq!(v["distance_squared"], "596");
    assert_eq!(v["anchors"].as_array().unwrap().len(), 2);
    let (_, csv, _) = invoke(&[
        "forest", "search", "--b", "1", "--cols", "2", "--rows", "2", "--rmax", "100", "--smax",
        "100", "--csv",
    ]);
    assert_eq!(csv, "r,s,distance_squared\n20,14,596\n14,20,596\n");
    let (_, plain, _) = invoke(&[
        "forest", "search", "--b", "1", "--cols", "1", "--rows", "1", "--rmax", "10", "--smax",
        "10", "--plain",
    ]);
    assert_eq!(plain, "(2, 2)\n");
}

#[test]
fn render_round_trip_through_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("grid.pbm");
    let (status, out, _) = invoke(&[
        "render",
        "--b",
        "2",
        "--n",
        "50",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!((status, out.as_str()), (0, ""));
    let text = fs::read_to_string(&path).unwrap();
    let ones: usize = text.lines().skip(2).map(|l| l.matches('1').count()).sum();
    assert_eq!(ones, 399);
    let b = Exponent::new(2).unwrap();
    let expected = sieve_grid(b, 50, 50, &SieveConfig::default()).unwrap();
    assert_eq!(parse_pbm(&text, b, false).unwrap(), expected);
    let (_, svg, _) = invoke(&["render", "--b", "1", "--n", "2", "--format", "svg"]);
    assert!(svg.starts_with("<svg"));
    assert_eq!(
        invoke(&["render", "--b", "1", "--n", "1"]).1,
        "P1\n1 1\n0\n"
    );
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_lattice-sight");
    let ok = Command::new(bin)
        .args(["ggcd", "--b", "2", "7", "49"])
        .output()
        .unwrap();
    assert_eq!(ok.status.code(), Some(0));
    assert_eq!(ok.stdout, b"7\n");
    let usage = Command::new(bin)
        .args(["ggcd", "--b", "0", "7", "49"])
        .output()
        .unwrap();
    assert_eq!(usage.status.code(), Some(2));
    let domain = Command::new(bin).args(["zeta", "0"]).output().unwrap();
    assert_eq!(domain.status.code(), Some(1));
}
