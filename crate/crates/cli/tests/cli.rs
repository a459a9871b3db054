use std::path::PathBuf;
use std::process::{Command, Output};

fn cdpw(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cdpw"))
        .args(args)
        .env_remove("CDPW_CONFIG")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    dir.join(name)
}

fn field(csv: &str, row: usize, col: &str) -> String {
    let mut lines = csv.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let i = header.iter().position(|h| *h == col).unwrap();
    lines
        .nth(row)
        .unwrap()
        .split(',')
        .nth(i)
        .unwrap()
        .to_string()
}

#[test]
fn eval_chargeless_example() {
    let o = cdpw(&["eval", "--gamma", "0", "--l", "1", "--kr", "1"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let s = stdout(&o);
    let im: f64 = field(&s, 0, "value_im").parse().unwrap();
    let re: f64 = field(&s, 0, "value_re").parse().unwrap();
    assert!((im - 0.301_168_678_939_756_8).abs() < 1e-15);
    assert!(re.abs() < 1e-15);
}

#[test]
fn eval_methods_agree() {
    let mut vals = Vec::new();
    for m in ["hyp2f2", "incgamma", "sum1f1", "kappa", "quadrature"] {
        let o = cdpw(&[
            "eval", "--gamma", "1.5", "--l", "3", "--kr", "4", "--method", m,
        ]);
        assert!(o.status.success(), "{m}: {}", stderr(&o));
        let s = stdout(&o);
        let re: f64 = field(&s, 0, "value_re").parse().unwrap();
        let im: f64 = field(&s, 0, "value_im").parse().unwrap();
        vals.push((re, im));
    }
    for v in &vals[1..] {
        assert!((v.0 - vals[0].0).hypot(v.1 - vals[0].1) < 1e-12, "{vals:?}");
    }
}

#[test]
fn domain_errors_exit_2() {
    let o = cdpw(&["eval", "--gamma", "1", "--l", "1", "--kr", "0"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("kr"));
    let o = cdpw(&["reconstruct", "--gamma", "1", "--kr", "2", "--cos", "1"]);
    assert_eq!(o.status.code(), Some(2));
    let o = cdpw(&["validate", "--a", "2"]);
    assert_eq!(o.status.code(), Some(2));
    let o = cdpw(&["eval", "--l", "1"]);
    assert_eq!(o.status.code(), Some(2));
    let o = cdpw(&["eval", "--gamma", "1", "--l", "1", "--kr", "1", "--n", "3"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn validate_subset_passes() {
    let o = cdpw(&["validate", "--only", "symmetry,coeffs"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stderr(&o).contains("0 failed"));
    let s = stdout(&o);
    assert!(s.lines().skip(1).all(|l| l.contains(",pass,")), "{s}");
}

#[test]
fn validate_fixed_a_passes() {
    let o = cdpw(&["validate", "--a", "1,0.7", "--only", "f22"]);
    assert!(o.status.success(), "{}", stderr(&o));
}

#[test]
fn validate_tight_tolerance_exits_1() {
    let cfg = scratch("tight.cfg");
    std::fs::write(&cfg, "# far below rounding\nrel_tol = 1e-30\n").unwrap();
    let o = cdpw(&[
        "--config",
        cfg.to_str().unwrap(),
        "validate",
        "--only",
        "tau",
    ]);
    assert_eq!(o.status.code(), Some(1), "{}", stderr(&o));
    assert!(stdout(&o).contains(",fail,"));
}

#[test]
fn config_unknown_key_exits_2() {
    let cfg = scratch("bad.cfg");
    std::fs::write(&cfg, "no_such_key = 1\n").unwrap();
    let o = cdpw(&[
        "--config",
        cfg.to_str().unwrap(),
        "coeffs",
        "--gamma",
        "1",
        "--l",
        "1",
    ]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn config_from_environment() {
    let cfg = scratch("env.cfg");
    std::fs::write(&cfg, "csv_precision = 4\n").unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_cdpw"))
        .args(["coeffs", "--gamma", "1", "--l", "2", "--n", "2"])
        .env("CDPW_CONFIG", &cfg)
        .output()
        .unwrap();
    assert!(o.status.success());
    assert_eq!(field(&stdout(&o), 1, "recursive_re"), "-3.000e0");
}

#[test]
fn coeffs_rows() {
    let o = cdpw(&["coeffs", "--gamma", "1", "--l", "2", "--n", "3"]);
    assert!(o.status.success());
    let s = stdout(&o);
    assert_eq!(s.lines().count(), 5);
    assert_eq!(field(&s, 1, "recursive_im"), "-5.0000000000000000e-1");
    assert_eq!(field(&s, 3, "closed_re"), "1.8750000000000000e0");
}

#[test]
fn json_rows_parse() {
    let o = cdpw(&[
        "--format", "json", "coeffs", "--gamma", "0.5", "--l", "3", "--n", "5",
    ]);
    assert!(o.status.success());
    let rows: Vec<serde_json::Value> = stdout(&o)
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(rows.len(), 6);
    assert_eq!(rows[0]["n"], 0);
    assert!(rows[5]["rel_diff"].as_f64().unwrap() < 1e-12);
}

#[test]
fn asymp_compare_flags_divergence() {
    let o = cdpw(&[
        "asymp-compare",
        "--gamma",
        "1",
        "--l",
        "2",
        "--kr",
        "5,50",
        "--n",
        "30",
    ]);
    assert!(o.status.success());
    let s = stdout(&o);
    assert_eq!(field(&s, 0, "flag"), "beyond_divergence_onset");
    assert_eq!(field(&s, 1, "flag"), "");
    assert!(stderr(&o).contains("divergence onset"));
    let diff: f64 = field(&s, 1, "abs_diff").parse().unwrap();
    assert!(diff < 1e-15);
}

#[test]
fn reconstruct_reports_difference() {
    let o = cdpw(&["reconstruct", "--gamma", "0", "--kr", "1", "--lmax", "40"]);
    assert!(o.status.success());
    let s = stdout(&o);
    assert_eq!(s.lines().count(), 6);
    for row in 0..5 {
        let d: f64 = field(&s, row, "abs_diff").parse().unwrap();
        assert!(d < 1e-13, "row {row}: {d}");
    }
    assert!(stderr(&o).contains("max |diff|"));
    let o = cdpw(&["reconstruct", "--gamma", "1", "--kr", "1", "--lmax", "513"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn asy3d_includes_chargeless_rows() {
    let o = cdpw(&["asy3d", "--gamma", "1", "--kr", "50,100"]);
    assert!(o.status.success());
    let s = stdout(&o);
    assert_eq!(s.lines().count(), 5);
    assert!(field(&s, 2, "gamma").starts_with("0.0"));
    assert!(stderr(&o).contains("gamma = 1"));
}

#[test]
fn output_file_and_reruns_are_identical() {
    let path = scratch("rand.csv");
    let args = [
        "--seed",
        "11",
        "--out",
        path.to_str().unwrap(),
        "validate",
        "--random",
        "4",
    ];
    let o = cdpw(&args);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(o.stdout.is_empty());
    let first = std::fs::read(&path).unwrap();
    cdpw(&args);
    assert_eq!(first, std::fs::read(&path).unwrap());
    let other = cdpw(&["--seed", "12", "validate", "--random", "4"]);
    assert_ne!(first, other.stdout);
}
