use std::path::Path;
use std::process::{Command, Output};

fn horolab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_horolab")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn write_config(dir: &Path, body: &str) -> String {
    let path = dir.join("run.json");
    std::fs::write(&path, body).unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn dist_prints_artanh_half_doubled() {
    let o = horolab(&["dist"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.lines().any(|l| l.starts_with('#') && l.contains("seed")));
    let row = text.lines().find(|l| !l.starts_with('#') && l.starts_with('0')).expect("data row");
    let value: f64 = row.split(',').nth(2).unwrap().parse().unwrap();
    assert!((value - 0.5f64.atanh()).abs() < 1e-12);
}

#[test]
fn single_suite_passes() {
    let o = horolab(&["verify", "quasigeodesic"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let json = stdout(&o);
    let body: String = json.lines().filter(|l| !l.starts_with('#')).collect::<Vec<_>>().join("\n");
    let v: serde_json::Value = serde_json::from_str(&body).unwrap();
    assert_eq!(v["passed"], true);
}

#[test]
fn unknown_suite_is_a_config_error() {
    assert_eq!(horolab(&["verify", "nosuch"]).status.code(), Some(2));
}

#[test]
fn malformed_domain_exits_with_config_code() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), r#"{"domain": {"kind": "torus"}}"#);
    assert_eq!(horolab(&["--config", &cfg, "dist"]).status.code(), Some(2));
    let cfg = write_config(dir.path(), r#"{"points": [[[2, 0]], [[0, 0]]]}"#);
    assert_eq!(horolab(&["--config", &cfg, "dist"]).status.code(), Some(2));
}

#[test]
fn out_directory_receives_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_string_lossy().into_owned();
    for cmd in ["dist", "geodesic", "horofun", "orbit", "denjoy-wolff", "ends"] {
        let o = horolab(&["--out", &out, cmd]);
        assert!(o.status.success(), "{cmd}: {}", String::from_utf8_lossy(&o.stderr));
    }
    for file in ["dist.csv", "geodesic.csv", "horofun.csv", "orbit.csv", "denjoy_wolff.json", "ends.json"] {
        let text = std::fs::read_to_string(dir.path().join(file)).unwrap();
        assert!(text.starts_with("# horolab"), "{file}");
    }
}

#[test]
fn worked_examples_run() {
    let o = horolab(&["--worked-examples"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn csv_output_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), r#"{"domain": {"kind": "polydisc", "dim": 2}, "points": [[[0,0],[0,0]], [[0.3,0.1],[-0.2,0.5]]], "target": {"point": [[1,0],[1,0]]}}"#);
    let a = horolab(&["--config", &cfg, "--seed", "9", "horofun"]);
    let b = horolab(&["--config", &cfg, "--seed", "9", "horofun"]);
    assert!(a.status.success(), "{}", String::from_utf8_lossy(&a.stderr));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn strip_orbit_uses_the_right_end() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        r#"{"domain": {"kind": "strip", "im_min": 0, "im_max": 1},
            "map": {"kind": "strip_conjugate", "inner": {"kind": "affine", "a": [2, 0], "b": [0, 1]}},
            "seeds": [[[0, 0.5]]]}"#,
    );
    let o = horolab(&["--config", &cfg, "denjoy-wolff"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let body: String = stdout(&o).lines().filter(|l| !l.starts_with('#')).collect::<Vec<_>>().join("\n");
    let v: serde_json::Value = serde_json::from_str(&body).unwrap();
    assert_eq!(v["verdict"], "boundary_limit");
    assert!(v["limit"]["end"]["direction"][0].as_f64().unwrap() > 0.9);
}
