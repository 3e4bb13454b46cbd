use hrcone_cli::run;
use std::process::Command;

fn argv(cmd: &str) -> Vec<String> {
    std::iter::once("hrcone".to_string()).chain(cmd.split_whitespace().map(str::to_string)).collect()
}

#[test]
fn exit_codes() {
    assert_eq!(run(argv("gamma --dim 4 --alpha 0")).code, 0);
    // an epsilon far from the limit fails the closeness check
    assert_eq!(run(argv("sweep hardy1d --eps-grid 0.5")).code, 1);
    for bad in [
        "gamma --dim 4",
        "gamma --dim 4 --alpha x",
        "constants hardy-rellich --dim 4 --alpha 0 --domain cap:4",
        "constants hardy-rellich --dim 4 --alpha 0 --lambda tail:0",
        "constants hardy-rellich --dim 3 --alpha 0 --lambda only:5",
        "coeffs punctured-ball --dim 4 --alpha 0 --domain hemisphere",
        "verify inequality --id XX --dim 3 --alpha 0",
        "verify inequality --id DIR --dim 3 --alpha 0 --domain sphere",
        "table weight-free --dims 5..3",
        "nonsense",
    ] {
        let out = run(argv(bad));
        assert_eq!(out.code, 2, "{bad}: {}", out.stderr);
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn binary_matches_library() {
    let exe = env!("CARGO_BIN_EXE_hrcone");
    let out = Command::new(exe)
        .args(["constants", "hardy-rellich", "--dim", "4", "--alpha", "0", "--domain", "sphere", "--lambda", "all", "--format", "json"])
        .env_remove("HRCONE_FORMAT")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["results"]["constant"]["exact"], "3/1");
    assert_eq!(v["results"]["constant"]["value"], 3.0);

    let out = Command::new(exe).args(["spectrum", "sphere", "--dim", "3"]).env("HRCONE_FORMAT", "csv").output().unwrap();
    assert!(String::from_utf8(out.stdout).unwrap().starts_with("label,lambda,exact,multiplicity\n"));

    let out = Command::new(exe).args(["verify", "inequality", "--id", "ND", "--dim", "3"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn config_presets_and_overrides() {
    let dir = std::env::temp_dir().join(format!("hrcone-cfg-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("presets.conf");
    std::fs::write(&path, "# presets\nformat = csv\ntrials = 3\nseed = 11\n").unwrap();
    let cfg = path.display().to_string();

    let out = run(argv(&format!("verify inequality --id HR --dim 4 --alpha 0 --config {cfg}")));
    assert_eq!(out.code, 0);
    // header plus three trials
    assert_eq!(out.stdout.lines().count(), 4);
    let r = out.report.unwrap();
    assert_eq!(r.inputs["seed"], 11);

    let out = run(argv(&format!("verify inequality --id HR --dim 4 --alpha 0 --config {cfg} --trials 5 --seed 2 --format json")));
    let r = out.report.unwrap();
    assert_eq!(r.inputs["trials"], 5);
    assert_eq!(r.inputs["seed"], 2);
    assert!(out.stdout.starts_with('{'));

    std::fs::write(&path, "colour = blue\n").unwrap();
    assert_eq!(run(argv(&format!("gamma --dim 3 --alpha 0 --config {cfg}"))).code, 2);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn report_shape() {
    let out = run(argv("coeffs nd --dim 3 --alpha 0 --domain hemisphere --format json"));
    let v: serde_json::Value = serde_json::from_str(&out.stdout).unwrap();
    for key in ["schema_version", "command", "inputs", "results", "checks", "timing_ms"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    let c = &v["checks"][0];
    for key in ["name", "pass", "margin", "tolerance"] {
        assert!(c.get(key).is_some(), "check missing {key}");
    }
    // empty check lists are still present
    let out = run(argv("gamma --dim 3 --alpha 0 --format json"));
    let v: serde_json::Value = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(v["checks"], serde_json::json!([]));
}

#[test]
fn tolerance_flags_reach_quadrature() {
    let loose = run(argv("verify emden-fowler --dim 3 --alpha 0 --tol-abs 1e-3 --tol-rel 1e-2")).report.unwrap();
    let tight = run(argv("verify emden-fowler --dim 3 --alpha 0")).report.unwrap();
    assert_eq!(loose.checks.len(), tight.checks.len());
    assert_eq!(run(argv("gamma --dim 3 --alpha 0 --tol-abs -1")).code, 2);
}
