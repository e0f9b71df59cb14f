use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn gaussmod(args: &[&str]) -> Output {
    gaussmod_env(args, &[])
}

fn gaussmod_env(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_gaussmod"));
    cmd.args(args).env_remove("GAUSSMOD_THREADS");
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is a JSON report")
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn scalar(report: &Value, name: &str) -> f64 {
    report["scalars"][name].as_f64().unwrap_or_else(|| panic!("scalar {name} missing"))
}

#[test]
fn thermal_default_circle_passes() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let out = gaussmod(&[
        "thermal", "--geometry", "circle", "--length", "6.2831853", "--mass", "1", "--beta", "1", "--cutoff", "32",
        "--out", path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let report: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(report["status"], "pass");
    let keys: Vec<&str> = report.as_object().unwrap().keys().map(String::as_str).collect();
    assert_eq!(keys, ["meta", "results", "scalars", "status"]);
    for key in ["version", "seed", "rng", "config"] {
        assert!(!report["meta"][key].is_null(), "meta.{key}");
    }
    let names: Vec<&str> = report["results"].as_array().unwrap().iter().map(|r| r["name"].as_str().unwrap()).collect();
    for want in [
        "thermal.trace_identity",
        "thermal.sqrt_gap_identity",
        "thermal.inverse_sqrt_gap_identity",
        "thermal.k_spectrum",
        "minkowski.coth_half",
        "minkowski.sech_half",
        "minkowski.csch_half",
        "energy.closed_form",
        "tomita.residual",
    ] {
        assert!(names.contains(&want), "missing {want}");
    }
    for r in report["results"].as_array().unwrap() {
        for key in ["name", "lhs", "rhs", "holds", "margin"] {
            assert!(r.get(key).is_some(), "result without {key}");
        }
    }
    assert!(scalar(&report, "trace_delta.cutoff_8") < scalar(&report, "trace_delta.cutoff_16"));
    assert!(scalar(&report, "trace_delta.tail") > 0.0);
}

#[test]
fn zero_mass_is_a_config_error() {
    let out = gaussmod(&["thermal", "--mass", "0", "--beta", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("mass must be positive"));
    assert!(out.stdout.is_empty());
    let out = gaussmod(&["thermal", "--mass", "-1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn huge_beta_suppresses_everything() {
    let out = gaussmod(&["thermal", "--beta", "1e9", "--cutoff", "4"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let report = json(&out);
    assert_eq!(report["status"], "pass");
    assert!(scalar(&report, "trace_delta") < 1e-12);
}

#[test]
fn perturb_argument_errors() {
    for args in [
        &["perturb", "--trials", "0"][..],
        &["perturb", "--dim", "257"],
        &["perturb", "--scale", "-1"],
        &["perturb", "--bogus"],
        &["inequalities", "--trials", "0"],
        &["thermal", "--geometry", "sphere"],
        &["thermal", "--geometry", "torus"],
    ] {
        let out = gaussmod(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}: {}", stderr(&out));
    }
    let out = gaussmod_env(&["perturb", "--trials", "1", "--dim", "2"], &[("GAUSSMOD_THREADS", "zero")]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn small_perturb_run_echoes_instances() {
    let out = gaussmod(&["perturb", "--dim", "2", "--trials", "1", "--seed", "7"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let report = json(&out);
    assert_eq!(report["meta"]["seed"], 7);
    let instance = &report["instances"][0];
    for key in ["sigma", "mu", "delta"] {
        assert_eq!(instance[key].as_array().unwrap().len(), 2, "{key}");
    }
    assert!(report["scalars"]["longo.0.inverse"].is_number());
    assert_eq!(report["scalars"]["r_estimate.p1.violations"], 0);
}

#[test]
fn echoed_instance_reproduces_the_run() {
    let dir = tempfile::tempdir().unwrap();
    let dump = dir.path().join("dump");
    let out = gaussmod(&["perturb", "--dim", "4", "--trials", "2", "--seed", "3", "--dump-dir", dump.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let first = json(&out);
    let file = |what: &str| dump.join(format!("trial_000001_{what}.txt"));
    assert!(file("sigma").exists() && file("mu").exists() && file("delta").exists());

    let replay = gaussmod(&[
        "perturb",
        "--trials",
        "1",
        "--sigma",
        file("sigma").to_str().unwrap(),
        "--mu",
        file("mu").to_str().unwrap(),
        "--delta",
        file("delta").to_str().unwrap(),
    ]);
    assert_eq!(replay.status.code(), Some(0), "{}", stderr(&replay));
    let replay = json(&replay);
    let lhs = |r: &Value, name: &str| {
        r["results"].as_array().unwrap().iter().find(|x| x["name"] == name).unwrap()["lhs"].as_f64().unwrap()
    };
    // trial 1 of the first run is the only trial of the replay
    assert_eq!(
        scalar(&first, "longo.1.inverse"),
        scalar(&replay, "longo.0.inverse"),
        "replayed instance differs"
    );
    assert!(lhs(&replay, "r_estimate.p2") > 0.0);
}

#[test]
fn config_file_merges_under_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "# thermal run\nmass = 2\nbeta = 0.5\ncutoff = 6\nseed = 9\n").unwrap();
    let out = gaussmod(&["thermal", "--config", cfg.to_str().unwrap(), "--beta", "3"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let config = &json(&out)["meta"]["config"];
    assert_eq!(config["mass"].as_f64(), Some(2.0));
    assert_eq!(config["beta"].as_f64(), Some(3.0));
    assert_eq!(config["cutoff"], 6);
    assert_eq!(config["seed"], 9);

    std::fs::write(&cfg, "colour = red\n").unwrap();
    let out = gaussmod(&["thermal", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let missing = dir.path().join("absent.cfg");
    let out = gaussmod(&["--config", missing.to_str().unwrap(), "thermal"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn csv_output_has_one_row_per_result() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("ineq.csv");
    let out = gaussmod(&["inequalities", "--dim", "3", "--trials", "5", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = std::fs::read_to_string(&path).unwrap();
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    assert_eq!(reader.headers().unwrap(), vec!["name", "lhs", "rhs", "holds", "margin"]);
    let rows: Vec<csv::StringRecord> = reader.records().map(Result::unwrap).collect();
    assert!(rows.iter().all(|r| &r[3] == "true"));
    let witness = rows.iter().find(|r| &r[0] == "van_hemmen_ando.p2.witness").unwrap();
    assert_eq!(witness[4].parse::<f64>().unwrap(), 0.0);
    assert!(rows.iter().any(|r| &r[0] == "lipschitz.sin"));
}

#[test]
fn scalar_inequalities_pass() {
    let out = gaussmod(&["inequalities", "--dim", "1", "--trials", "10"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert_eq!(json(&out)["status"], "pass");
}

#[test]
fn reports_are_byte_stable() {
    let run = |threads: &str| gaussmod_env(&["inequalities", "--dim", "5", "--trials", "12", "--seed", "4"], &[("GAUSSMOD_THREADS", threads)]);
    let a = run("1");
    let b = run("3");
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn help_exits_cleanly() {
    let out = gaussmod(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("perturb"));
    assert!(Path::new(env!("CARGO_BIN_EXE_gaussmod")).exists());
}
