use std::fs;
use std::process::{Command, Output};

fn boolswarm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_boolswarm"))
        .args(args)
        .output()
        .expect("binary runs")
}

#[test]
fn single_prints_metric_report() {
    let out = boolswarm(&[
        "single",
        "--algorithm",
        "mbonvpso",
        "--problem",
        "zdt1",
        "--particles",
        "10",
        "--iterations",
        "5",
        "--seed",
        "4",
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(report["hv"].as_f64().unwrap() >= 0.0);
    assert!(report["gd"].as_f64().unwrap() >= 0.0);
    assert!(report["nop"].as_u64().unwrap() >= 1);

    let again = boolswarm(&[
        "single",
        "--algorithm",
        "mbonvpso",
        "--problem",
        "zdt1",
        "--particles",
        "10",
        "--iterations",
        "5",
        "--seed",
        "4",
    ]);
    assert_eq!(out.stdout, again.stdout);
}

#[test]
fn run_then_stats_from_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().join("results");
    let config = dir.path().join("experiment.toml");
    fs::write(
        &config,
        r#"
        algorithms = ["mbonvpso", "mbpso"]
        problems = ["schaffer"]
        swarm_size = 10
        iterations = 5
        runs = 2

        [params.mbonvpso]
        beta = 0.3
        "#,
    )
    .unwrap();
    let out = boolswarm(&[
        "run",
        "--config",
        config.to_str().unwrap(),
        "--problems",
        "schaffer,zdt2",
        "--out",
        out_dir.to_str().unwrap(),
        "--workers",
        "2",
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let runs = fs::read_to_string(out_dir.join("runs.csv")).unwrap();
    assert_eq!(runs.lines().count(), 1 + 2 * 2 * 2);
    assert_eq!(fs::read_dir(out_dir.join("fronts")).unwrap().count(), 8);
    assert_eq!(
        fs::read_dir(out_dir.join("median_fronts")).unwrap().count(),
        4
    );
    let meta: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out_dir.join("meta.json")).unwrap()).unwrap();
    assert_eq!(meta["seeds"], serde_json::json!([0, 1]));
    assert_eq!(
        meta["config"]["params"]["mbonvpso"]["beta"],
        serde_json::json!(0.3)
    );

    let aggregate = fs::read_to_string(out_dir.join("aggregate.csv")).unwrap();
    fs::remove_file(out_dir.join("aggregate.csv")).unwrap();
    let stats = boolswarm(&["stats", "--out", out_dir.to_str().unwrap()]);
    assert!(
        stats.status.success(),
        "{}",
        String::from_utf8_lossy(&stats.stderr)
    );
    assert_eq!(
        fs::read_to_string(out_dir.join("aggregate.csv")).unwrap(),
        aggregate
    );

    let json = boolswarm(&[
        "stats",
        "--out",
        out_dir.to_str().unwrap(),
        "--format",
        "json",
    ]);
    assert!(json.status.success());
    assert!(out_dir.join("aggregate.json").exists());
}

#[test]
fn rejects_bad_input() {
    let unknown = boolswarm(&["single", "--algorithm", "pso", "--problem", "zdt1"]);
    assert!(!unknown.status.success());
    let zero = boolswarm(&["run", "--runs", "0", "--out", "/nonexistent/never"]);
    assert!(!zero.status.success());
    assert!(String::from_utf8_lossy(&zero.stderr).contains("runs"));
    let missing = boolswarm(&["stats", "--out", "/nonexistent/never"]);
    assert!(!missing.status.success());
}
