use std::path::Path;
use std::process::{Command, Output};

use ferrojet_cli::csvio::read_table;

fn ferrojet(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ferrojet")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("valid JSON on stdout")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

#[test]
fn region2_linear_coefficient() {
    let out = ferrojet(&["coeffs", "--region", "ii", "--law", "linear"]);
    assert_eq!(code(&out), 0);
    let c1 = json(&out)["coefficients"]["c1"].as_f64().unwrap();
    let want = -240.0 * 6f64.sqrt();
    assert!(((c1 - want) / want).abs() < 1e-12);
}

#[test]
fn region1_degenerate_at_alpha_six() {
    let out = ferrojet(&["coeffs", "--region", "i", "--beta0", "4"]);
    let v = json(&out);
    assert_eq!(v["coefficients"]["c_check"].as_f64().unwrap(), 0.0);
    assert_eq!(v["coefficients"]["wave_type"], "degenerate");
}

#[test]
fn region3_exists_flag() {
    let v = json(&ferrojet(&["coeffs", "--region", "iii", "--s", "1"]));
    let c = &v["coefficients"];
    let exists = c["c2_1"].as_f64().unwrap() < 0.0 && c["d4"].as_f64().unwrap() > 0.0;
    assert_eq!(c["exists"].as_bool().unwrap(), exists);
}

#[test]
fn classify_multiplicities() {
    for (b, g, m) in [("0.5", "2", 4), ("0.25", "2", 6), ("0.5", "1", 2)] {
        let v = json(&ferrojet(&["classify", "--beta0", b, "--gamma0", g]));
        assert_eq!(v["zero_multiplicity"].as_u64().unwrap(), m, "({b}, {g})");
    }
    assert_eq!(code(&ferrojet(&["classify", "--beta0", "-1", "--gamma0", "2"])), 1);
}

#[test]
fn curves_csv_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c1.csv");
    let out = ferrojet(&["curves", "c1", "--samples", "100", "--out", path.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let text = std::fs::read(&path).unwrap();
    let table = read_table(text.as_slice()).unwrap();
    assert_eq!(table.headers, ["param", "beta0", "gamma0"]);
    assert_eq!(table.rows.len(), 100);
    assert!(table.comments.iter().any(|c| c.starts_with("ferrojet ")));
    let first = &table.rows[0];
    assert!((first[1] - 0.25).abs() < 1e-2 && (first[2] - 2.0).abs() < 1e-2, "{first:?}");

    // Re-serialising what was read reproduces the file byte for byte.
    let mut again = Vec::new();
    ferrojet_cli::csvio::write_table(&mut again, &table).unwrap();
    assert_eq!(again, text);
}

#[test]
fn curve_c4_has_constant_gamma() {
    let out = ferrojet(&["curves", "c4", "--samples", "20"]);
    let table = read_table(out.stdout.as_slice()).unwrap();
    assert!(table.column("gamma0").unwrap().iter().all(|&g| g == 2.0));
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(code(&ferrojet(&["curves", "c2", "--samples", "1"])), 1);
    assert_eq!(code(&ferrojet(&["bogus"])), 1);
    assert_eq!(code(&ferrojet(&["coeffs", "--region", "i"])), 1);
    assert_eq!(code(&ferrojet(&["coeffs", "--region", "ii", "--law", "langevin"])), 1);
    assert_eq!(code(&ferrojet(&["solve", "--region", "i", "--beta0", "0.5", "--mu", "-1"])), 1);
}

#[test]
fn threshold_command() {
    let v = json(&ferrojet(&["langevin-threshold", "--alpha0", "8"]));
    assert!(v["lambda_star"].as_f64().unwrap() > 0.0);
    assert_eq!(code(&ferrojet(&["langevin-threshold", "--alpha0", "5"])), 1);
}

fn solve_profile(args: &[&str], dir: &Path) -> (i32, Option<ferrojet_cli::csvio::Table>) {
    let path = dir.join("profile.csv");
    let mut full = vec!["solve"];
    full.extend_from_slice(args);
    full.extend(["--out", path.to_str().unwrap()]);
    let out = ferrojet(&full);
    let table = std::fs::read(&path).ok().map(|t| read_table(t.as_slice()).unwrap());
    (code(&out), table)
}

fn min_max(t: &ferrojet_cli::csvio::Table) -> (f64, f64) {
    let eta = t.column("eta").unwrap();
    eta.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)))
}

#[test]
fn solve_region1_depression() {
    let dir = tempfile::tempdir().unwrap();
    let (c, t) = solve_profile(&["--region", "i", "--beta0", "0.5", "--mu", "0.01"], dir.path());
    assert_eq!(c, 0);
    let t = t.unwrap();
    let (lo, hi) = min_max(&t);
    assert!(lo < 0.0 && lo.abs() > hi.abs());
    assert!(t.comments.iter().any(|c| c.contains("leading order")));
    assert!(t.comments.iter().any(|c| c.contains("depression")));
}

#[test]
fn solve_region2_depression_with_svg() {
    let dir = tempfile::tempdir().unwrap();
    let svg = dir.path().join("p.svg");
    let orbit = dir.path().join("orbit.csv");
    let (c, t) = solve_profile(
        &[
            "--region",
            "ii",
            "--mu",
            "0.1",
            "--delta",
            "0.05",
            "--svg",
            svg.to_str().unwrap(),
            "--orbit",
            orbit.to_str().unwrap(),
        ],
        dir.path(),
    );
    assert_eq!(c, 0);
    let (lo, hi) = min_max(&t.unwrap());
    assert!(lo < 0.0 && lo.abs() > hi.abs());
    assert!(std::fs::read_to_string(&svg).unwrap().contains("<polyline"));
    let orbit = read_table(std::fs::read(&orbit).unwrap().as_slice()).unwrap();
    assert_eq!(orbit.headers, ["Z", "u", "u'", "u''", "u'''"]);
}

#[test]
fn solve_region3_sign_failure_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let (c, _) = solve_profile(
        &["--region", "iii", "--s", "1", "--mu", "0.04", "--law", "custom", "--m1p", "1", "--m1pp", "1e8"],
        dir.path(),
    );
    assert_eq!(c, 2);
    let (c, t) = solve_profile(&["--region", "iii", "--s", "1", "--mu", "0.04", "--theta", "pi"], dir.path());
    assert_eq!(c, 0);
    let (lo, hi) = min_max(&t.unwrap());
    assert!(lo.abs() > hi.abs());
}

#[test]
fn config_file_drives_solve() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(&cfg, "[law]\nkind = \"langevin\"\nlambda = 1.0\n[run]\nregion = \"i\"\nbeta0 = 0.5\nmu = 0.01\n").unwrap();
    let (c, t) = solve_profile(&["--config", cfg.to_str().unwrap()], dir.path());
    assert_eq!(c, 0);
    assert!(t.unwrap().comments.iter().any(|c| c.contains("langevin")));

    std::fs::write(&cfg, "[run]\nregoin = \"i\"\n").unwrap();
    let (c, _) = solve_profile(&["--config", cfg.to_str().unwrap()], dir.path());
    assert_eq!(c, 1);
}

#[test]
fn verify_suites_pass() {
    for suite in ["omega", "chains", "taylor", "reversibility", "all"] {
        let out = ferrojet(&["verify", "--suite", suite]);
        assert_eq!(code(&out), 0, "{suite}");
        let v = json(&out);
        assert!(v["all_pass"].as_bool().unwrap());
        assert!(v["total"].as_u64().unwrap() > 0);
    }
}

#[test]
fn outputs_are_deterministic() {
    let a = ferrojet(&["solve", "--region", "ii-cubic", "--mu", "0.1", "--delta", "0.1", "--kappa", "0"]);
    let b = ferrojet(&["solve", "--region", "ii-cubic", "--mu", "0.1", "--delta", "0.1", "--kappa", "0"]);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
}
