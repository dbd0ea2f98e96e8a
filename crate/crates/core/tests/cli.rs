//! End-to-end runs of the `symplab` binary.

use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn symplab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_symplab"))
        .args(args)
        .env_remove("SYMPLAB_OUT_DIR")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write_config(dir: &Path, body: &str) -> String {
    let path = dir.join("config.toml");
    std::fs::write(&path, body).unwrap();
    path.to_str().unwrap().to_string()
}

fn csv_files(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut files: Vec<_> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "csv"))
        .map(|p| (p.file_name().unwrap().to_str().unwrap().to_string(), std::fs::read(&p).unwrap()))
        .collect();
    files.sort();
    files
}

#[test]
fn bad_configs_exit_2_without_output() {
    let tmp = TempDir::new().unwrap();
    let out = tmp.path().join("out");
    let out_s = out.to_str().unwrap();
    for body in ["[growth\nn_max = 3", "[growth]\nno_such_key = 1", "[flux]\ntolerance = 0.0"] {
        let cfg = write_config(tmp.path(), body);
        let o = symplab(&["--config", &cfg, "--out-dir", out_s, "run", "--experiment", "appendix"]);
        assert_eq!(o.status.code(), Some(2), "config {body:?}");
        assert!(!o.stderr.is_empty());
        assert!(!out.exists(), "no artifacts after a config error");
    }
    let missing = symplab(&["--config", "/nonexistent/config.toml", "zoo", "list"]);
    assert_eq!(missing.status.code(), Some(2));
}

#[test]
fn unknown_arguments_exit_2() {
    assert_eq!(symplab(&["growth", "--bogus"]).status.code(), Some(2));
    assert_eq!(symplab(&["growth", "--map", "no_such_map"]).status.code(), Some(2));
    assert_eq!(symplab(&["--jobs", "0", "zoo", "list"]).status.code(), Some(2));
}

#[test]
fn growth_csv_shape() {
    let o = symplab(&["growth", "--map", "skew", "--nmax", "64", "--grid", "16"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    assert_eq!(reader.headers().unwrap().iter().collect::<Vec<_>>(), ["n", "gamma_n", "error_bar"]);
    let rows: Vec<csv::StringRecord> = reader.records().map(|r| r.unwrap()).collect();
    assert_eq!(rows.len(), 64);
    let gamma1: f64 = rows[0][1].parse().unwrap();
    assert!(gamma1 >= 1.0);
    for (i, row) in rows.iter().enumerate() {
        assert_eq!(row[0].parse::<usize>().unwrap(), i + 1);
    }
}

#[test]
fn growth_with_propagation_column() {
    let o = symplab(&["growth", "--map", "cat", "--nmax", "8", "--grid", "8", "--propagation"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("n,gamma_n,error_bar,dn\n"));
    assert_eq!(text.lines().count(), 9);
}

#[test]
fn csv_artifacts_are_deterministic_across_runs_and_jobs() {
    let tmp = TempDir::new().unwrap();
    let cfg = write_config(tmp.path(), "[growth]\nn_max = 16\ngrid = 16\nmaps = [\"skew\", \"cat\", \"twist\"]\n");
    let mut outputs = Vec::new();
    for (k, jobs) in [None, None, Some("1"), Some("2")].into_iter().enumerate() {
        let dir = tmp.path().join(format!("run{k}"));
        let dir_s = dir.to_str().unwrap();
        let mut args = vec!["--config", cfg.as_str(), "--out-dir", dir_s];
        if let Some(j) = jobs {
            args.extend(["--jobs", j]);
        }
        args.extend(["run", "--experiment", "growth"]);
        let o = symplab(&args);
        assert!(o.status.code() == Some(0) || o.status.code() == Some(1), "{}", String::from_utf8_lossy(&o.stderr));
        assert!(dir.join("report.json").exists());
        let files = csv_files(&dir);
        assert!(files.iter().any(|(n, _)| n == "growth_skew.csv"));
        outputs.push(files);
    }
    for other in &outputs[1..] {
        assert_eq!(&outputs[0], other);
    }
}

#[test]
fn impossible_tolerance_exits_1() {
    let tmp = TempDir::new().unwrap();
    let cfg = write_config(tmp.path(), "[growth]\ntwist_tolerance = 1e-12\n");
    let out = tmp.path().join("out");
    let o = symplab(&["--config", &cfg, "--out-dir", out.to_str().unwrap(), "run", "--experiment", "growth"]);
    assert_eq!(o.status.code(), Some(1));
    let text = stdout(&o);
    assert!(text.contains("FAIL growth_laws"), "{text}");
    // The report is still written so the failure can be inspected.
    let report: serde_json::Value = serde_json::from_slice(&std::fs::read(out.join("report.json")).unwrap()).unwrap();
    let laws = report["records"].as_array().unwrap().iter().find(|r| r["check_id"] == "growth_laws").unwrap();
    assert_eq!(laws["passed"], false);
}

#[test]
fn out_dir_from_environment() {
    let tmp = TempDir::new().unwrap();
    let dir = tmp.path().join("from_env");
    let o = Command::new(env!("CARGO_BIN_EXE_symplab"))
        .args(["filling", "--model", "hyperbolic", "--resolution", "8", "--smin", "1", "--smax", "2"])
        .env("SYMPLAB_OUT_DIR", &dir)
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(dir.join("filling_hyperbolic.csv").exists());
}

#[test]
fn record_tags_are_registered() {
    let tmp = TempDir::new().unwrap();
    let out = tmp.path().join("out");
    let cfg = write_config(tmp.path(), "[growth]\nn_max = 8\ngrid = 8\nmaps = [\"translation\", \"cat\"]\n");
    let registered = symplab::report::registered_tags();
    for kind in ["appendix", "growth", "isoperimetric", "flux", "delta"] {
        let o = symplab(&["--config", &cfg, "--out-dir", out.to_str().unwrap(), "run", "--experiment", kind]);
        assert_eq!(o.status.code(), Some(0), "{kind}: {}", stdout(&o));
        let report: serde_json::Value = serde_json::from_slice(&std::fs::read(out.join("report.json")).unwrap()).unwrap();
        assert_eq!(report["experiment"], kind);
        let records = report["records"].as_array().unwrap();
        assert!(!records.is_empty());
        for r in records {
            let tag = r["tag"].as_str().unwrap();
            assert!(registered.contains(&tag), "unregistered tag {tag}");
            assert!(r["runtime_ms"].as_f64().unwrap() >= 0.0);
        }
    }
}

#[test]
fn plot_data_has_comment_headers() {
    let tmp = TempDir::new().unwrap();
    let out = tmp.path().join("out");
    let cfg = write_config(tmp.path(), "[growth]\nn_max = 4\ngrid = 4\nmaps = [\"shear\"]\n");
    let o = symplab(&["--config", &cfg, "--out-dir", out.to_str().unwrap(), "run", "--experiment", "growth"]);
    assert_eq!(o.status.code(), Some(0));
    let dat = std::fs::read_to_string(out.join("growth_shear.dat")).unwrap();
    assert!(dat.starts_with("# "));
    assert_eq!(dat.lines().filter(|l| !l.starts_with('#')).count(), 4);
}

#[test]
fn zoo_and_groups_commands() {
    let list = stdout(&symplab(&["zoo", "list"]));
    for name in ["translation", "skew", "cat", "twist", "quotient"] {
        assert!(list.contains(name));
    }
    let show = symplab(&["zoo", "show", "cat"]);
    assert_eq!(show.status.code(), Some(0));
    assert_eq!(symplab(&["zoo", "show", "nothing"]).status.code(), Some(2));

    let len = symplab(&["groups", "bs", "--q", "2", "--p", "1", "length", "--power", "16", "--radius", "10"]);
    assert_eq!(len.status.code(), Some(0));
    let body: serde_json::Value = serde_json::from_slice(&len.stdout).unwrap();
    // b^2 a^4 b^-2 = a^16, and nothing shorter is.
    assert_eq!(body["result"]["kind"], "exact");
    assert_eq!(body["result"]["length"], 8);
}

#[test]
fn action_delta_reports_the_pair_action() {
    let o = symplab(&["action", "delta", "--map", "skew", "--x", "0,0.3", "--y", "0.5,0.3"]);
    assert_eq!(o.status.code(), Some(0));
    let body: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let record = &body["records"][0];
    assert_eq!(record["tag"], "action.well-defined");
    let value = record["values"]["value"].as_f64().unwrap();
    assert!((value + 1.0 / (2.0 * std::f64::consts::PI.powi(2))).abs() < 1e-10, "{value}");
}
