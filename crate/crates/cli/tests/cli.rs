//! End-to-end tests of the `csgeom` binary: output, exit codes, determinism.

use std::io::Write;
use std::process::{Command, Output};

use tempfile::NamedTempFile;

const DOUBLE_CONE: &str = r#"{"domains": [
    {"name": "plane", "dimensions": ["d1", "d2"]},
    {"name": "axis", "dimensions": ["d3"]}
]}"#;

const THREE_SINGLETONS: &str = r#"{"domains": [
    {"name": "a", "dimensions": ["x"]},
    {"name": "b", "dimensions": ["y"]},
    {"name": "c", "dimensions": ["z"]}
]}"#;

const BAD_WEIGHTS: &str = r#"{"domains": [
    {"name": "color", "dimensions": ["hue", "sat", "bri"]}
], "weights": {
    "domains": {"color": 1.0},
    "dimensions": {"hue": 0.5, "sat": 0.6, "bri": 0.2}
}}"#;

fn space_file(contents: &str) -> NamedTempFile {
    let mut f = NamedTempFile::new().unwrap();
    f.write_all(contents.as_bytes()).unwrap();
    f
}

fn csgeom(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_csgeom"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn volume_double_cone() {
    let f = space_file(DOUBLE_CONE);
    let out = csgeom(&["volume", "--space", f.path().to_str().unwrap(), "--r", "1"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("volume: 2.09439510239e0"), "{text}");
    assert!(text.contains("n: 3"));
    assert!(text.contains("k: 2"));
}

#[test]
fn volume_cross_polytope_json() {
    let f = space_file(THREE_SINGLETONS);
    let out = csgeom(&[
        "volume",
        "--space",
        f.path().to_str().unwrap(),
        "--r",
        "1",
        "--json",
    ]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["n"], 3);
    let vol = v["volume"].as_f64().unwrap();
    assert!((vol - 4.0 / 3.0).abs() < 1e-12);
}

#[test]
fn volume_overflow_is_flagged() {
    let dims: Vec<String> = (0..200).map(|i| format!("\"d{i}\"")).collect();
    let doc = format!(
        r#"{{"domains": [{{"name": "big", "dimensions": [{}]}}]}}"#,
        dims.join(",")
    );
    let f = space_file(&doc);
    let out = csgeom(&["volume", "--space", f.path().to_str().unwrap(), "--r", "1000"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("log-volume:"));
    assert!(text.contains("overflow: log-volume only"), "{text}");
}

#[test]
fn radius_modes_and_usage_errors() {
    let f = space_file(THREE_SINGLETONS);
    let path = f.path().to_str().unwrap();
    let out = csgeom(&["radius", "--space", path, "--alpha", "0.36787944117144233", "--c", "1"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("radius: 1.00000000000e0"));

    let out = csgeom(&["radius", "--space", path, "--volume", "1.3333333333333333"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("radius: 1.00000000000e0"));

    // both modes at once, neither mode, and a nonpositive volume: exit 4
    for args in [
        vec!["radius", "--space", path, "--volume", "1", "--alpha", "0.5", "--c", "1"],
        vec!["radius", "--space", path],
        vec!["radius", "--space", path, "--volume", "-1"],
    ] {
        let out = csgeom(&args);
        assert_eq!(out.status.code(), Some(4), "{args:?}");
    }
}

#[test]
fn distance_and_similarity() {
    let f = space_file(DOUBLE_CONE);
    let path = f.path().to_str().unwrap();
    let out = csgeom(&["distance", "--space", path, "--x", "0,0,0", "--y", "3,4,2"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("distance: 5.53553390593e0"));

    let out = csgeom(&[
        "similarity", "--space", path, "--x", "0,0,0", "--y", "0,0,1", "--c", "1",
    ]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("similarity: 3.67879441171e-1"));

    // wrong arity
    let out = csgeom(&["distance", "--space", path, "--x", "0,0", "--y", "1,1,1"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn estimate_is_deterministic_across_parallelism() {
    let f = space_file(DOUBLE_CONE);
    let path = f.path().to_str().unwrap();
    let args = [
        "estimate", "--space", path, "--r", "1", "--trials", "200000", "--seed", "17",
        "--chunk", "4096",
    ];
    let run = |threads: &str| {
        Command::new(env!("CARGO_BIN_EXE_csgeom"))
            .args(args)
            .env("RAYON_NUM_THREADS", threads)
            .output()
            .unwrap()
    };
    let a = run("1");
    let b = run("4");
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn estimate_validates_trials() {
    let f = space_file(DOUBLE_CONE);
    let out = csgeom(&[
        "estimate", "--space", f.path().to_str().unwrap(), "--r", "1", "--trials", "0",
    ]);
    assert_eq!(out.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&out.stderr).contains("trials"));
}

#[test]
fn sample_csv_shape() {
    let f = space_file(DOUBLE_CONE);
    let out = csgeom(&[
        "sample", "--space", f.path().to_str().unwrap(), "--r", "1", "--count", "5",
        "--seed", "2",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "d1,d2,d3");
    assert_eq!(lines.len(), 6);
    for line in &lines[1..] {
        assert_eq!(line.split(',').count(), 3);
        for field in line.split(',') {
            field.parse::<f64>().unwrap();
        }
    }
}

#[test]
fn check_reports_constraints() {
    let f = space_file(DOUBLE_CONE);
    let out = csgeom(&["check", "--space", f.path().to_str().unwrap()]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("PASS structure"));

    let f = space_file(BAD_WEIGHTS);
    let out = csgeom(&["check", "--space", f.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    let text = stdout(&out);
    assert!(text.contains("FAIL weights"), "{text}");
    assert!(text.contains("color"), "{text}");
}

#[test]
fn parse_errors_exit_2() {
    let out = csgeom(&["volume", "--space", "/nonexistent/space.json", "--r", "1"]);
    assert_eq!(out.status.code(), Some(2));

    let f = space_file("{not json");
    let out = csgeom(&["volume", "--space", f.path().to_str().unwrap(), "--r", "1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn duplicate_dimension_exits_3() {
    let f = space_file(
        r#"{"domains": [
            {"name": "a", "dimensions": ["x"]},
            {"name": "b", "dimensions": ["x"]}
        ]}"#,
    );
    let out = csgeom(&["check", "--space", f.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stdout(&out).contains("duplicate dimension name `x`"));
}

#[test]
fn weighted_volume_uses_file_weights() {
    let f = space_file(
        r#"{"domains": [
            {"name": "p", "dimensions": ["u"]},
            {"name": "q", "dimensions": ["v"]}
        ], "weights": {
            "domains": {"p": 1.5, "q": 0.5},
            "dimensions": {"u": 1.0, "v": 1.0}
        }}"#,
    );
    let out = csgeom(&[
        "volume", "--space", f.path().to_str().unwrap(), "--r", "1", "--weighted", "--json",
    ]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert!((v["volume"].as_f64().unwrap() - 8.0 / 3.0).abs() < 1e-12);
}
