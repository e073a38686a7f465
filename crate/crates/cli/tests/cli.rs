use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn mwstab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mwstab"))
        .args(args)
        .env_remove("MWSTAB_THREADS")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json(out: &Output) -> Value {
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn csv_rows(text: &str) -> Vec<Vec<String>> {
    text.lines().skip(1).map(|l| l.split(',').map(str::to_string).collect()).collect()
}

#[test]
fn wave_speed_includes_the_amplitude_correction() {
    let v = json(&mwstab(&["wave", "--model", "A", "--k", "1", "--a", "0.05", "--format", "json"]));
    let c = v["c"].as_f64().unwrap();
    let want = 1.0 / 3f64.sqrt() + 0.05f64.powi(2) / (4.0 * 3f64.sqrt());
    assert!((c - want).abs() < 1e-5, "{c}");
    assert_eq!(v["model"], "A");
    assert_eq!(v["cos_coeffs"].as_array().unwrap().len(), 65);
    assert!(v["residual_norm"].as_f64().unwrap() < 1e-10);
}

#[test]
fn flat_wave_has_the_linear_speed() {
    let v = json(&mwstab(&["wave", "--model", "A", "--a", "0", "--format", "json"]));
    assert_eq!(v["c"].as_f64().unwrap(), 0.5773502691896258);
    assert!(v["cos_coeffs"].as_array().unwrap().iter().all(|c| c.as_f64() == Some(0.0)));
    let text = stdout(&mwstab(&["wave", "--model", "A", "--a", "0", "--format", "json"]));
    assert!(text.contains("\"c\": 0.5773502691896258"), "{text}");
}

#[test]
fn model_b_speed_is_flat_at_gamma_one() {
    let v = json(&mwstab(&["wave", "--model", "B", "--gamma", "1", "--k", "1", "--a", "0.05", "--format", "json"]));
    assert!((v["c"].as_f64().unwrap() - 1.0).abs() < 1e-6);
}

#[test]
fn wave_csv_lists_cosine_coefficients() {
    let out = mwstab(&["wave", "--a", "0.02", "--modes", "8"]);
    let text = stdout(&out);
    assert!(text.starts_with("harmonic,cos_coeff\n"));
    let rows = csv_rows(&text);
    assert_eq!(rows.len(), 9);
    assert_eq!(rows[1][1].parse::<f64>().unwrap(), 0.02);
}

#[test]
fn flat_spectrum_is_imaginary_and_complete() {
    let out = mwstab(&["spectrum", "--a", "0", "--modes", "16", "--mu-grid", "0:0.5:6"]);
    let text = stdout(&out);
    assert!(text.starts_with("mu,re_lambda,im_lambda,branch_id\n"));
    let rows = csv_rows(&text);
    // 33 eigenvalues per slice, one of them infinite at mu = 0
    assert_eq!(rows.len(), 6 * 33 - 1);
    for r in &rows {
        assert!(r[1].parse::<f64>().unwrap().abs() <= 1e-10, "{r:?}");
    }
    let keys: Vec<(f64, i64)> = rows.iter().map(|r| (r[0].parse().unwrap(), r[3].parse().unwrap())).collect();
    let mut sorted = keys.clone();
    sorted.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.cmp(&y.1)));
    assert_eq!(keys, sorted);
}

#[test]
fn unstable_model_b_spectrum_has_growing_modes() {
    let out = mwstab(&[
        "spectrum", "--model", "B", "--gamma", "3", "--a", "0.02", "--modes", "32", "--mu-grid", "0.001:0.02:5",
    ]);
    let rows = csv_rows(&stdout(&out));
    assert!(rows.iter().any(|r| r[1].parse::<f64>().unwrap() > 1e-6));
}

#[test]
fn output_files_are_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let paths = [dir.path().join("one.csv"), dir.path().join("two.csv")];
    for p in &paths {
        let out = mwstab(&["spectrum", "--a", "0.03", "--modes", "12", "--mu-grid", "0:0.5:9", "--out", p.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0));
        assert!(out.stdout.is_empty());
    }
    let (x, y) = (std::fs::read(&paths[0]).unwrap(), std::fs::read(&paths[1]).unwrap());
    assert!(!x.is_empty());
    assert_eq!(x, y);
}

#[test]
fn index_verdicts() {
    let v = json(&mwstab(&["index", "--format", "json"]));
    assert_eq!(v["verdict"], "stable");
    assert!(v["threshold_estimate"].is_null());
    assert_eq!(v["disc_samples"].as_array().unwrap().len(), 50);

    let v = json(&mwstab(&["index", "--model", "B", "--gamma", "2", "--format", "json"]));
    assert_eq!(v["verdict"], "unstable");
}

#[test]
fn index_bisects_the_model_b_threshold() {
    let v = json(&mwstab(&[
        "index", "--model", "B", "--gamma", "2", "--gamma-lo", "0", "--gamma-hi", "2", "--format", "json",
    ]));
    let g = v["threshold_estimate"].as_f64().unwrap();
    assert!((g - 1.0).abs() <= 0.05, "{g}");
}

#[test]
fn indeterminate_verdict_has_its_own_exit_code() {
    let out = mwstab(&["index", "--model", "B", "--gamma", "1.001", "--a", "0.05", "--format", "json"]);
    assert_eq!(out.status.code(), Some(2));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["verdict"], "indeterminate");
}

#[test]
fn collision_table() {
    let rows = csv_rows(&stdout(&mwstab(&["collisions", "--n-min", "-3"])));
    assert_eq!(rows.len(), 2);
    assert_eq!(rows[0], ["-1", "1", "0.0", "0.0"]);
    assert_eq!(&rows[1][..2], ["0", "-3"]);
    assert!((rows[1][2].parse::<f64>().unwrap() - 0.381966).abs() < 1e-6);
    assert!((rows[1][3].parse::<f64>().unwrap() + 1.936492).abs() < 1e-6);

    let rows = csv_rows(&stdout(&mwstab(&["collisions", "--n-min", "-2", "--k", "2"])));
    assert_eq!(rows.len(), 1);
    let rows = csv_rows(&stdout(&mwstab(&["collisions", "--n-min", "-3", "--k", "2"])));
    assert!((rows[1][3].parse::<f64>().unwrap() + 2.0 * 1.936492).abs() < 1e-5);
}

#[test]
fn expand_checks_against_the_golden_files() {
    let out = mwstab(&["expand", "--model", "A", "--check-paper"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains(" 0 diffs"), "{text}");
    assert!(text.contains("disc_leading: 16/3*k^-2*mu^2 + 16/3*k^2*a^2"));

    let out = mwstab(&["expand", "--model", "B", "--check-paper"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("4*mu^2 + (1-gamma)*k^4*a^2"));
}

#[test]
fn expand_dumps_canonical_forms() {
    let v = json(&mwstab(&["expand", "--model", "B", "--format", "json"]));
    assert_eq!(v["disc_leading"], "4*mu^2 + (1-gamma)*k^4*a^2");
    assert_eq!(v["objects"]["disc_leading"]["a0 mu2 lam0 i0"], "4");

    let text = stdout(&mwstab(&["expand", "--model", "A"]));
    assert!(text.starts_with("object,key,coefficient\n"));
    assert!(text.contains("\nT0,a0 mu0 lam1 i0 d1,2/3*sqrt3*k^-1\n"), "{}", &text[..400]);
}

#[test]
fn flags_override_the_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "# run\nmodel = B\ngamma = 1\nk = 1\na = 0.05\nformat = json\n").unwrap();
    let path = cfg.to_str().unwrap();
    let v = json(&mwstab(&["wave", "--config", path]));
    assert_eq!(v["model"], "B");
    assert!((v["c"].as_f64().unwrap() - 1.0).abs() < 1e-6);
    let v = json(&mwstab(&["wave", "--config", path, "--model", "A"]));
    assert_eq!(v["model"], "A");
    assert_eq!(v["a"].as_f64(), Some(0.05));
}

fn assert_config_error(out: &Output) {
    assert_eq!(out.status.code(), Some(4), "stderr: {}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn configuration_errors_exit_with_code_four() {
    assert_config_error(&mwstab(&["spectrum", "--mu-grid", "0:0.5:1"]));
    assert_config_error(&mwstab(&["spectrum", "--mu-grid", "0.5:0:10"]));
    assert_config_error(&mwstab(&["wave", "--model", "C"]));
    assert_config_error(&mwstab(&["wave", "--format", "xml"]));
    assert_config_error(&mwstab(&["wave", "--config", "/nonexistent/run.cfg"]));
    assert_config_error(&mwstab(&["wave", "--frobnicate"]));
    assert_config_error(&mwstab(&["index", "--gamma-lo", "0", "--gamma-hi", "2"]));

    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.cfg");
    std::fs::write(&cfg, "speed = 3\n").unwrap();
    let out = mwstab(&["wave", "--config", cfg.to_str().unwrap()]);
    assert_config_error(&out);
    let reason: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(reason["error"], "config");
}

#[test]
fn solver_failures_report_json_reasons() {
    let out = mwstab(&["wave", "--a", "0.5"]);
    assert_eq!(out.status.code(), Some(3));
    let reason: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(reason["error"], "validity");
    assert!(reason["message"].as_str().unwrap().contains("0.5"));

    let out = mwstab(&["spectrum", "--a", "0", "--modes", "8", "--mu-grid", "0:0.9:3"]);
    assert_eq!(out.status.code(), Some(3));
    let reason: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(reason["error"], "domain");
}

#[test]
fn thread_cap_is_honoured_and_validated() {
    let run = |threads: &str| {
        Command::new(env!("CARGO_BIN_EXE_mwstab"))
            .args(["spectrum", "--a", "0.02", "--modes", "8", "--mu-grid", "0:0.5:5"])
            .env("MWSTAB_THREADS", threads)
            .output()
            .unwrap()
    };
    let (one, two) = (run("1"), run("2"));
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(one.stdout, two.stdout);
    assert_config_error(&run("0"));
    assert_config_error(&run("many"));
}

#[test]
fn help_exits_cleanly() {
    let out = mwstab(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
    for sub in ["wave", "spectrum", "index", "collisions", "expand"] {
        assert!(stdout(&out).contains(sub));
    }
    assert!(Path::new(env!("CARGO_BIN_EXE_mwstab")).exists());
}
