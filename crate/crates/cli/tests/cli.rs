use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::{json, Value};
use tempfile::TempDir;

fn zeroset(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_zeroset")).args(args).output().unwrap()
}

fn write_config(dir: &Path, value: &Value) -> String {
    let p = dir.join("config.json");
    fs::write(&p, serde_json::to_string_pretty(value).unwrap()).unwrap();
    p.display().to_string()
}

fn last_error(out: &Output) -> Value {
    let stderr = String::from_utf8_lossy(&out.stderr);
    let line = stderr.lines().last().expect("a diagnostic line");
    serde_json::from_str(line).expect("diagnostics are JSON")
}

fn files(dir: &Path) -> Vec<String> {
    let mut v: Vec<String> = fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .collect();
    v.sort();
    v
}

fn small_sweep() -> Value {
    json!({
        "model": "powerlaw4_segment",
        "ns": [100, 1000],
        "M_r_values": [0.05, 0.2, 0.4],
        "M_eps_values": [0.1, 0.4],
        "eta": 0.21,
        "psi": 0.01,
        "replications": 3,
        "base_seed": 5
    })
}

#[test]
fn rates_check_reports_both_conditions() {
    let tmp = TempDir::new().unwrap();
    let out_dir = tmp.path().join("out");
    let out = zeroset(&["rates", "check", "--output-dir", out_dir.to_str().unwrap()]);
    assert!(out.status.success());
    let report: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["condition_A_holds"], true);
    assert_eq!(report["condition_B_holds"], true);
    assert!((report["condition_A_value"].as_f64().unwrap() - 0.08).abs() < 1e-12);
    assert!((report["condition_B_value"].as_f64().unwrap() + 0.05).abs() < 1e-12);
    assert_eq!(files(&out_dir), ["rates_check.json"]);
}

#[test]
fn failing_conditions_still_exit_zero() {
    let tmp = TempDir::new().unwrap();
    let cfg = write_config(
        tmp.path(),
        &json!({ "rates_check": { "d": 2, "eta": 0.24, "psi": 0.2, "components": [{ "d0": 1, "upper": 4, "lower": 1 }] } }),
    );
    let out = zeroset(&[
        "rates",
        "check",
        "--config",
        &cfg,
        "--output-dir",
        tmp.path().join("o").to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let report: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["condition_A_holds"], false);
    assert_eq!(report["condition_B_holds"], false);
}

#[test]
fn sweep_writes_csv_and_svg_and_is_idempotent() {
    let tmp = TempDir::new().unwrap();
    let cfg = write_config(
        tmp.path(),
        &json!({ "output_dir": tmp.path().join("a"), "sweep": small_sweep() }),
    );
    let first = zeroset(&["sweep", "--config", &cfg, "--threads", "1"]);
    assert!(first.status.success(), "{}", String::from_utf8_lossy(&first.stderr));
    let a = tmp.path().join("a");
    assert_eq!(
        files(&a),
        ["sweep.csv", "sweep.svg", "sweep_skipped.json", "sweep_summary.csv"]
    );
    let snapshot: Vec<Vec<u8>> = files(&a).iter().map(|f| fs::read(a.join(f)).unwrap()).collect();

    let again = zeroset(&["sweep", "--config", &cfg, "--threads", "4"]);
    assert!(again.status.success());
    let rerun: Vec<Vec<u8>> = files(&a).iter().map(|f| fs::read(a.join(f)).unwrap()).collect();
    assert_eq!(snapshot, rerun);

    let csv = String::from_utf8(snapshot[0].clone()).unwrap();
    assert!(
        csv.starts_with("model,n,M_r,M_eps,eta,psi,replication,class,n_balls,n_nonempty,fraction,event_A,event_B\n")
    );
    let skipped: Vec<Value> = serde_json::from_slice(&snapshot[2]).unwrap();
    // 12 cells, 3 replications, 3 classes per trial
    assert_eq!(csv.lines().count() - 1 + skipped.len() * 3 * 3, 12 * 3 * 3);
    assert!(String::from_utf8(snapshot[1].clone()).unwrap().contains("<polyline"));
}

#[test]
fn seed_flag_overrides_config() {
    let tmp = TempDir::new().unwrap();
    let cfg = write_config(
        tmp.path(),
        &json!({ "sample": { "model": "example2", "n": 50, "seed": 1 } }),
    );
    let run = |dir: &str, extra: &[&str]| {
        let d = tmp.path().join(dir);
        let mut args = vec!["sample", "--config", &cfg, "--output-dir", d.to_str().unwrap()];
        args.extend_from_slice(extra);
        assert!(zeroset(&args).status.success());
        fs::read(d.join("samples.csv")).unwrap()
    };
    let base = run("a", &[]);
    assert_eq!(base, run("b", &["--seed", "1"]));
    assert_ne!(base, run("c", &["--seed", "2"]));
    assert!(String::from_utf8(base).unwrap().starts_with("x1,x2\n"));
}

#[test]
fn malformed_configs_exit_2_without_outputs() {
    let tmp = TempDir::new().unwrap();
    let out_dir = tmp.path().join("never");
    let cases = [
        json!({ "sweep": small_sweep(), "colour": "red" }),
        json!({ "sweep": { "model": "powerlaw4_segment" } }),
        json!({ "sample": { "model": "not_a_model", "n": 10 } }),
        json!({ "format": "png" }),
    ];
    for (k, case) in cases.iter().enumerate() {
        let cfg = write_config(tmp.path(), case);
        let out = zeroset(&["sweep", "--config", &cfg, "--output-dir", out_dir.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(2), "case {k}");
        assert_eq!(last_error(&out)["kind"], "validation");
        assert!(!out_dir.exists(), "case {k} wrote output");
    }
    fs::write(tmp.path().join("broken.json"), "{ not json").unwrap();
    let out = zeroset(&[
        "sweep",
        "--config",
        tmp.path().join("broken.json").to_str().unwrap(),
        "--output-dir",
        out_dir.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!out_dir.exists());
    let out = zeroset(&["sweep", "--bogus-flag"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(String::from_utf8_lossy(&out.stderr).lines().count(), 1);
}

#[test]
fn semantic_validation_exits_2() {
    let tmp = TempDir::new().unwrap();
    let out_dir = tmp.path().join("never");
    let mut sweep = small_sweep();
    sweep["eta"] = json!(0.6);
    let cfg = write_config(tmp.path(), &json!({ "sweep": sweep }));
    let out = zeroset(&["sweep", "--config", &cfg, "--output-dir", out_dir.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let out = zeroset(&["sample", "--format", "svg", "--output-dir", out_dir.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!out_dir.exists());
}

#[test]
fn infeasible_runs_exit_3_without_outputs() {
    let tmp = TempDir::new().unwrap();
    let out_dir = tmp.path().join("never");
    let cfg = write_config(
        tmp.path(),
        &json!({ "detect": { "model": "powerlaw4_segment", "n": 100, "M_r": 0.4, "M_eps": 0.1 } }),
    );
    let out = zeroset(&["detect", "--config", &cfg, "--output-dir", out_dir.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    let err = last_error(&out);
    assert_eq!(err["kind"], "infeasible");
    assert!(err["message"].as_str().unwrap().contains("2 r(n) <= eps(n)"));

    let cfg = write_config(
        tmp.path(),
        &json!({ "cover": { "model": "powerlaw4_segment", "r": 0.1, "eps": 0.15 } }),
    );
    let out = zeroset(&["cover", "--config", &cfg, "--output-dir", out_dir.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    assert!(!out_dir.exists());
}

#[test]
fn every_subcommand_writes_only_into_output_dir() {
    let tmp = TempDir::new().unwrap();
    let cfg = write_config(
        tmp.path(),
        &json!({
            "sample": { "model": "f_quadratic", "n": 100 },
            "cover": { "zero_set": { "components": [{ "type": "point", "at": [0.5, 0.5] }] },
                       "region": { "lower": [0, 0], "upper": [1, 1] }, "r": 0.1, "eps": 0.3 },
            "detect": { "model": "example2", "n": 2000 },
            "heatmap": { "n": 1000, "bins": 20 },
            "tail_support": { "model": "exptail_1_3", "ns": [1000, 10000] },
            "boxdim": { "zero_set": { "components": [{ "type": "segment", "a": [0, 0], "b": [1, 0] }] },
                        "deltas": [0.05, 0.025, 0.0125, 0.00625] }
        }),
    );
    let expected: [(&[&str], &[&str]); 6] = [
        (&["sample"], &["samples.csv"]),
        (&["cover"], &["covering.csv"]),
        (&["detect"], &["detect.json", "detect_covering.csv"]),
        (&["heatmap"], &["heatmap.csv", "heatmap.svg"]),
        (&["tail-support"], &["tail_support.csv"]),
        (&["boxdim"], &["boxdim.json"]),
    ];
    for (k, (cmd, produced)) in expected.iter().enumerate() {
        let dir = tmp.path().join(format!("o{k}"));
        let mut args = cmd.to_vec();
        args.extend(["--config", &cfg, "--output-dir", dir.to_str().unwrap()]);
        let out = zeroset(&args);
        assert!(
            out.status.success(),
            "{cmd:?}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
        assert_eq!(files(&dir), *produced, "{cmd:?}");
        for line in String::from_utf8_lossy(&out.stderr).lines() {
            let _: Value = serde_json::from_str(line).unwrap();
        }
    }
    let mut top = files(tmp.path());
    top.retain(|f| !f.starts_with('o'));
    assert_eq!(top, ["config.json"]);

    let boxdim: Value = serde_json::from_slice(&fs::read(tmp.path().join("o5/boxdim.json")).unwrap()).unwrap();
    assert!((boxdim["upper_estimate"].as_f64().unwrap() - 1.0).abs() < 0.15);
    let tail = fs::read_to_string(tmp.path().join("o4/tail_support.csv")).unwrap();
    assert!(tail.starts_with("n,delta,B,eps,m\n"));
}
