use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use netcorr::simbench::{generate, SyntheticSpec};

fn netcorr(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_netcorr"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write_data(dir: &Path, spec: &SyntheticSpec) -> PathBuf {
    let synth = generate(spec).unwrap();
    let x = synth.data.values();
    let mut text = synth.data.column_names().join(",");
    text.push('\n');
    for i in 0..x.nrows() {
        let row: Vec<String> = (0..x.ncols()).map(|j| x[(i, j)].to_string()).collect();
        text.push_str(&row.join(","));
        text.push('\n');
    }
    let path = dir.join("data.csv");
    fs::write(&path, text).unwrap();
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

const FAST: &[&str] = &["--perm-iters", "200", "--kmeans-restarts", "5"];

#[test]
fn missing_input_exits_2_and_names_path() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let o = netcorr(&[
        "estimate",
        "--input-path",
        "/no/such/file.csv",
        "--output-dir",
        s(&out),
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("/no/such/file.csv"));
}

#[test]
fn malformed_csv_reports_coordinates() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.csv");
    fs::write(&path, "a,b\n1,2\n3,x\n5,6\n7,8\n").unwrap();
    let o = netcorr(&[
        "detect",
        "--input",
        s(&path),
        "--out",
        s(&dir.path().join("o")),
    ]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("row 2, column 2"), "{err}");
}

#[test]
fn estimate_writes_all_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let spec = SyntheticSpec {
        n: 100,
        rho: 0.7,
        seed: 3,
        ..SyntheticSpec::default()
    };
    let data = write_data(dir.path(), &spec);
    let out = dir.path().join("out");
    let mut args = vec![
        "estimate",
        "--input-path",
        s(&data),
        "--output-dir",
        s(&out),
    ];
    args.extend_from_slice(FAST);
    let o = netcorr(&args);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    for f in [
        "r_hat.csv",
        "edges.csv",
        "partition.json",
        "mixture.json",
        "summary.json",
    ] {
        assert!(out.join(f).exists(), "{f}");
    }
    let summary: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out.join("summary.json")).unwrap()).unwrap();
    let kept = summary["kept_edges"].as_u64().unwrap();
    assert!((120..=300).contains(&kept), "kept {kept}");
    let edges = fs::read_to_string(out.join("edges.csv")).unwrap();
    assert_eq!(edges.lines().count(), 1 + 100 * 99 / 2);
    assert!(edges.starts_with("i,j,r,z,bf,stratum,kept"));
    // every stage logs one JSON line
    let log = String::from_utf8_lossy(&o.stderr);
    for line in log.lines() {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        assert!(v["stage"].is_string() && v["ms"].is_number());
    }
}

#[test]
fn huge_t_keeps_nothing() {
    let dir = tempfile::tempdir().unwrap();
    let data = write_data(
        dir.path(),
        &SyntheticSpec {
            n: 50,
            seed: 1,
            ..SyntheticSpec::default()
        },
    );
    let out = dir.path().join("out");
    let mut args = vec![
        "estimate",
        "--input-path",
        s(&data),
        "--output-dir",
        s(&out),
        "--T",
        "1e9",
    ];
    args.extend_from_slice(FAST);
    assert!(netcorr(&args).status.success());
    let edges = fs::read_to_string(out.join("edges.csv")).unwrap();
    assert!(edges.lines().skip(1).all(|l| l.ends_with(",0")));
}

#[test]
fn detect_is_deterministic_and_finds_planted_cliques() {
    let dir = tempfile::tempdir().unwrap();
    let spec = SyntheticSpec {
        n: 100,
        rho: 0.8,
        seed: 5,
        ..SyntheticSpec::default()
    };
    let data = write_data(dir.path(), &spec);
    let run = |name: &str| {
        let out = dir.path().join(name);
        let mut args = vec![
            "detect",
            "--input-path",
            s(&data),
            "--output-dir",
            s(&out),
            "--seed",
            "11",
        ];
        args.extend_from_slice(FAST);
        let o = netcorr(&args);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        assert!(out.join("w_heatmap.csv").exists() && out.join("r_heatmap.csv").exists());
        assert!(!out.join("r_hat.csv").exists());
        fs::read(out.join("partition.json")).unwrap()
    };
    let a = run("a");
    assert_eq!(a, run("b"));
    let part: serde_json::Value = serde_json::from_slice(&a).unwrap();
    assert_eq!(part["significant"].as_array().unwrap().len(), 2, "{part}");
    assert_eq!(part["nodes"].as_array().unwrap().len(), 100);
}

#[test]
fn simulate_row_count_and_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str| {
        let out = dir.path().join(name);
        let mut args = vec![
            "simulate",
            "--replicates",
            "1",
            "--seed",
            "7",
            "--output-dir",
            s(&out),
        ];
        args.extend_from_slice(FAST);
        let o = netcorr(&args);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        (
            fs::read_to_string(out.join("bench.csv")).unwrap(),
            fs::read_to_string(out.join("bench_summary.csv")).unwrap(),
        )
    };
    let (bench, summary) = run("a");
    // NICE (1 tuning) + universal (4) + magnitude (5)
    assert_eq!(bench.lines().count(), 1 + 10);
    assert_eq!(summary.lines().count(), 1 + 10);
    assert!(summary.lines().any(|l| l.starts_with("NICE,None,")));
    assert_eq!(bench, run("b").0);
}

#[test]
fn simulate_rejects_invalid_spec() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("o");
    let o = netcorr(&[
        "simulate",
        "--rho",
        "0",
        "--replicates",
        "1",
        "--output-dir",
        s(&out),
    ]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn config_file_and_flag_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let data = write_data(
        dir.path(),
        &SyntheticSpec {
            n: 50,
            seed: 2,
            ..SyntheticSpec::default()
        },
    );
    let cfg = dir.path().join("cfg.json");
    fs::write(
        &cfg,
        r#"{"lambda0": 0.3, "perm_iters": 150, "kmeans_restarts": 4}"#,
    )
    .unwrap();
    let read = |extra: &[&str]| {
        let out = dir.path().join("out");
        let mut args = vec![
            "detect",
            "--config",
            s(&cfg),
            "--input-path",
            s(&data),
            "--output-dir",
            s(&out),
        ];
        args.extend_from_slice(extra);
        assert!(netcorr(&args).status.success());
        let v: serde_json::Value =
            serde_json::from_str(&fs::read_to_string(out.join("partition.json")).unwrap()).unwrap();
        v
    };
    let from_file = read(&[]);
    assert_eq!(from_file["lambda0"], 0.3);
    assert_eq!(from_file["perm"]["M"], 150);
    let flagged = read(&["--lambda0", "0.6", "--perm-iters", "120"]);
    assert_eq!(flagged["lambda0"], 0.6);
    assert_eq!(flagged["perm"]["M"], 120);
}

#[test]
fn bad_config_file_is_input_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    fs::write(&cfg, r#"{"lambda0": "high"}"#).unwrap();
    let o = netcorr(&["simulate", "--config", s(&cfg)]);
    assert_eq!(o.status.code(), Some(2));
}
