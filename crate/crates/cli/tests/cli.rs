//! End-to-end runs of the `pt2` binary.

use std::path::PathBuf;
use std::process::{Command, Output};

fn pt2(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pt2"))
        .args(args)
        .env_remove("PT2_OUTPUT_DIR")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn parse_csv(text: &str) -> (Vec<String>, Vec<Vec<String>>) {
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let header = reader
        .headers()
        .unwrap()
        .iter()
        .map(str::to_owned)
        .collect();
    let rows = reader
        .records()
        .map(|r| r.unwrap().iter().map(str::to_owned).collect())
        .collect();
    (header, rows)
}

fn num(s: &str) -> f64 {
    s.parse().unwrap_or_else(|_| panic!("not a number: {s:?}"))
}

fn scratch_dir(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("pt2-cli-{name}-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn probs_first_row_is_pure_transfer() {
    let out = pt2(&[
        "probs",
        "--rho",
        "2",
        "--sigma",
        "1",
        "--varphi",
        "1.5707963",
        "--t-max",
        "2",
        "--n",
        "5",
    ]);
    assert!(out.status.success());
    let (header, rows) = parse_csv(&stdout(&out));
    assert_eq!(header, ["t", "p_aa", "p_ab", "p_ba", "p_bb"]);
    assert_eq!(rows.len(), 5);
    assert_eq!(num(&rows[0][0]), 0.0);
    assert_eq!(num(&rows[0][1]), 0.0);
    assert!((num(&rows[0][2]) - 1.0).abs() < 1e-15);
    assert_eq!(num(&rows[4][0]), 2.0);
}

#[test]
fn fig1_marks_the_exceptional_point() {
    let out = pt2(&["fig1", "--xi", "2"]);
    assert!(out.status.success());
    let (header, rows) = parse_csv(&stdout(&out));
    assert_eq!(rows.len(), 401);
    let col = |name: &str| header.iter().position(|h| h == name).unwrap();
    let ep = rows
        .iter()
        .find(|r| num(&r[col("sin_varphi")]) == 0.5)
        .unwrap();
    assert_eq!(num(&ep[col("im_lambda_plus")]), 0.0);
    assert_eq!(num(&ep[col("im_lambda_minus")]), 0.0);
    assert_eq!(ep[col("re_lambda_plus")], ep[col("re_lambda_minus")]);
    assert_eq!(ep[col("phase")], "ep");
    assert!((num(&ep[col("ep_locus")]) - 3f64.sqrt()).abs() < 1e-15);
}

#[test]
fn fig1_defaults_to_three_curves() {
    let out = pt2(&["fig1"]);
    let (_, rows) = parse_csv(&stdout(&out));
    assert_eq!(rows.len(), 3 * 401);
}

#[test]
fn oracle_check_passes_with_default_seed() {
    let out = pt2(&["oracle-check", "--seed", "42", "--n-params", "200"]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let (header, rows) = parse_csv(&stdout(&out));
    assert_eq!(rows.len(), 200);
    let rel = header.iter().position(|h| h == "max_rel_dev").unwrap();
    assert!(rows.iter().all(|r| num(&r[rel]) < 1e-10));
}

#[test]
fn output_is_deterministic() {
    let args = ["oracle-check", "--seed", "7", "--n-params", "20"];
    assert_eq!(pt2(&args).stdout, pt2(&args).stdout);
}

#[test]
fn csv_round_trips_every_digit() {
    let out = pt2(&[
        "probs", "--rho", "1.3", "--sigma", "0.4", "--varphi", "1.1", "--t-max", "3", "--n", "7",
    ]);
    let (_, rows) = parse_csv(&stdout(&out));
    let json = pt2(&[
        "probs", "--rho", "1.3", "--sigma", "0.4", "--varphi", "1.1", "--t-max", "3", "--n", "7",
        "--format", "json",
    ]);
    let values: serde_json::Value = serde_json::from_slice(&json.stdout).unwrap();
    for (row, obj) in rows.iter().zip(values.as_array().unwrap()) {
        assert_eq!(num(&row[2]), obj["p_ab"].as_f64().unwrap());
        assert_eq!(num(&row[3]), obj["p_ba"].as_f64().unwrap());
        // re-printing the parsed value reproduces the field exactly
        assert_eq!(format!("{:.16e}", num(&row[2])), row[2]);
    }
}

#[test]
fn json_rows_keep_column_order() {
    let out = pt2(&[
        "decayed",
        "--rho",
        "2",
        "--sigma",
        "1",
        "--varphi",
        "1.5707963267948966",
        "--chi",
        "3",
        "--n",
        "2",
        "--format",
        "json",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    let t = text.find("\"t\"").unwrap();
    let paa = text.find("\"p_aa\"").unwrap();
    assert!(t < paa);
}

#[test]
fn degrees_flag_converts_angles() {
    let rad = pt2(&[
        "classify",
        "--rho",
        "2",
        "--sigma",
        "1",
        "--varphi",
        "1.5707963267948966",
    ]);
    let deg = pt2(&[
        "classify",
        "--rho",
        "2",
        "--sigma",
        "1",
        "--varphi",
        "90",
        "--degrees",
    ]);
    let (_, a) = parse_csv(&stdout(&rad));
    let (_, b) = parse_csv(&stdout(&deg));
    assert_eq!(a[0][4], "broken");
    assert_eq!(a, b);
}

#[test]
fn validation_failures_exit_with_one() {
    let out = pt2(&[
        "probs", "--rho", "2", "--sigma", "1", "--varphi", "1.5", "--t-min", "3", "--t-max", "1",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(!out.stderr.is_empty());

    let symmetric = pt2(&["probs", "--rho", "0.5", "--sigma", "1", "--varphi", "0.3"]);
    assert_eq!(symmetric.status.code(), Some(1));

    let slow_decay = pt2(&[
        "decayed",
        "--rho",
        "2",
        "--sigma",
        "1",
        "--varphi",
        "1.5707963267948966",
        "--chi",
        "1",
    ]);
    assert_eq!(slow_decay.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&slow_decay.stderr).contains("WidthNotPositive"));
}

#[test]
fn numerical_failures_exit_with_two() {
    // σ = 0 leaves the phase undefined
    let ep = pt2(&["evolve", "--rho", "1", "--sigma", "0", "--varphi", "0.2"]);
    assert_eq!(ep.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&ep.stderr).contains("NonDiagonalizablePath"));
}

#[test]
fn closed_forms_reject_nonzero_off_diagonal_phase() {
    let out = pt2(&[
        "eigen",
        "--rho",
        "1",
        "--sigma",
        "1",
        "--varphi",
        "1.5707963267948966",
        "--phi",
        "0.1",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("NonzeroPhi"));
}

#[test]
fn meson_reads_flat_json_params() {
    let dir = scratch_dir("meson");
    let path = dir.join("params.json");
    std::fs::write(
        &path,
        r#"{"m11": 0.0, "m22": 0.0, "m12_re": 1.0, "m12_im": 0.0, "g11": 2.0, "g22": 10.0, "g12_re": 0.0, "g12_im": 0.0}"#,
    )
    .unwrap();
    let meson = pt2(&["meson", "--params", path.to_str().unwrap(), "--n", "4"]);
    assert!(meson.status.success());
    // the same system written as a passive PT Hamiltonian: ρ = 2, φ = π/2, σ = 1, χ = 3
    let decayed = pt2(&[
        "decayed",
        "--rho",
        "2",
        "--sigma",
        "1",
        "--varphi",
        "1.5707963267948966",
        "--chi",
        "3",
        "--n",
        "4",
    ]);
    let (_, a) = parse_csv(&stdout(&meson));
    let (_, b) = parse_csv(&stdout(&decayed));
    for (x, y) in a.iter().zip(&b) {
        for k in 1..3 {
            assert!((num(&x[k]) - num(&y[k])).abs() < 1e-12);
        }
    }

    std::fs::write(&path, r#"{"m11": 0.0, "mass": 1.0}"#).unwrap();
    let bad = pt2(&["meson", "--params", path.to_str().unwrap()]);
    assert_eq!(bad.status.code(), Some(1));
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn output_dir_env_sets_default_destination() {
    let dir = scratch_dir("outdir");
    let status = Command::new(env!("CARGO_BIN_EXE_pt2"))
        .args(["fig1", "--xi", "3", "--n", "5", "--format", "json"])
        .env("PT2_OUTPUT_DIR", &dir)
        .status()
        .unwrap();
    assert!(status.success());
    let text = std::fs::read_to_string(dir.join("fig1.json")).unwrap();
    let rows: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(rows.as_array().unwrap().len(), 5);
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn ep_scan_flags_the_critical_coupling() {
    let out = pt2(&[
        "ep-scan",
        "--case",
        "iii",
        "--gamma",
        "0.5",
        "--kappa-min",
        "0.4",
        "--kappa-max",
        "0.6",
        "--n",
        "3",
    ]);
    assert!(out.status.success());
    let (_, rows) = parse_csv(&stdout(&out));
    let status: Vec<&str> = rows.iter().map(|r| r[7].as_str()).collect();
    assert_eq!(status, ["regular", "exceptional", "regular"]);
}
