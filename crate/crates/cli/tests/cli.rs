use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

const BIN: &str = env!("CARGO_BIN_EXE_polyassoc");

fn write(dir: &TempDir, name: &str, body: &str) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, body).unwrap();
    path
}

fn polyassoc(args: &[&str], input: &Path) -> Output {
    Command::new(BIN).args(args).arg("--in").arg(input).env_remove("POLYASSOC_CAP").output().unwrap()
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

const PENTAGON: &str = r#"{"vertices": [[0,0],[2,0],[3,1],[1,3],[-1,1]]}"#;
const HEX_H: &str = r#"{"vertices": [[0,0],[2,1],[4,0],[4,4],[2,3],[0,4]]}"#;

#[test]
fn realize_with_root_edge() {
    let dir = TempDir::new().unwrap();
    let v = json(&polyassoc(&["realize", "--root", "4,5"], &write(&dir, "p.json", PENTAGON)));
    let points = v["points"].as_array().unwrap();
    assert_eq!(points.len(), 5);
    for p in points {
        assert_eq!(p["coords"].as_array().unwrap().iter().map(|c| c.as_i64().unwrap()).sum::<i64>(), 9);
    }
    assert_eq!(v["rootEdge"], serde_json::json!([4, 5]));
}

#[test]
fn analyze_visibility_and_rank() {
    let dir = TempDir::new().unwrap();
    let v = json(&polyassoc(
        &["analyze", "--products", "visibility,rank", "--deterministic"],
        &write(&dir, "h.json", HEX_H),
    ));
    assert_eq!(v["rank"], 13);
    assert_eq!(v["visibility"]["edges"].as_array().unwrap().len(), 13);
    assert!(v.get("timing").is_none());
    assert!(v.get("complex").is_none());
}

#[test]
fn output_file_and_dot() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "h.json", HEX_H);
    let out = dir.path().join("flips.dot");
    let o = Command::new(BIN)
        .args(["flipgraph", "--format", "dot", "--out"])
        .arg(&out)
        .arg("--in")
        .arg(&input)
        .output()
        .unwrap();
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    assert!(std::fs::read_to_string(&out).unwrap().starts_with("graph"));
    let o = polyassoc(&["analyze", "--products", "visibility,rank", "--format", "dot"], &input);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn bowtie_is_rejected() {
    let dir = TempDir::new().unwrap();
    let o = polyassoc(&["analyze"], &write(&dir, "b.json", r#"{"vertices": [[0,0],[4,4],[4,0],[0,4]]}"#));
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("NotSimple"), "{}", stderr(&o));
    assert!(o.stdout.is_empty());
}

#[test]
fn cap_exceeded_exits_three() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "p.json", PENTAGON);
    let o = polyassoc(&["triangulations", "--cap", "2"], &input);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("RegionTooLarge"));
    let o = Command::new(BIN).args(["complex", "--in"]).arg(&input).env("POLYASSOC_CAP", "3").output().unwrap();
    assert_eq!(o.status.code(), Some(3));
    let o = Command::new(BIN)
        .args(["complex", "--cap", "100", "--in"])
        .arg(&input)
        .env("POLYASSOC_CAP", "3")
        .output()
        .unwrap();
    assert!(o.status.success());
}

#[test]
fn usage_errors_exit_one() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "p.json", PENTAGON);
    let o = polyassoc(&["analyze", "--products", "visibility,bogus"], &input);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("UnknownProduct"));
    assert_eq!(Command::new(BIN).arg("frobnicate").output().unwrap().status.code(), Some(1));
    assert_eq!(Command::new(BIN).arg("--help").output().unwrap().status.code(), Some(0));
    let o = Command::new(BIN).args(["analyze", "--in"]).arg(dir.path().join("missing.json")).output().unwrap();
    assert_eq!(o.status.code(), Some(1));
    let o = polyassoc(&["analyze"], &write(&dir, "bad.json", "{\"vertices\": [[0,0],"));
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("ParseError"), "{}", stderr(&o));
}

#[test]
fn move_chain_reports_events() {
    let dir = TempDir::new().unwrap();
    let v = json(&polyassoc(&["move", "--move", "2:2,-1", "--move", "5:2,5"], &write(&dir, "h.json", HEX_H)));
    assert_eq!(v["monotone"], true);
    assert_eq!((v["rankStart"].as_u64(), v["rankEnd"].as_u64()), (Some(13), Some(15)));
    let first = &v["moves"][0]["events"][0];
    assert_eq!(first["kind"], "gain");
    assert_eq!(first["t"], "1/2");
}

#[test]
fn deform_star_reaches_convex() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "h.json", HEX_H);
    for path in ["reciprocal", "linear"] {
        let v = json(&polyassoc(&["deform-star", "--center", "2,2", "--path", path], &input));
        let frames = v["frames"].as_array().unwrap();
        assert_eq!(frames.first().unwrap()["rank"], 13);
        assert_eq!(frames.last().unwrap()["rank"], 15);
        assert_eq!(v["path"], path);
    }
    let o = polyassoc(&["deform-star", "--center", "-3,9"], &input);
    assert_eq!(o.status.code(), Some(2), "{}", stderr(&o));
}

#[test]
fn deterministic_runs_are_identical() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "h.json", HEX_H);
    let args =
        ["analyze", "--products", "visibility,complex,flipgraph,realize,secondary,theta,rank", "--deterministic"];
    let a = polyassoc(&args, &input);
    let b = polyassoc(&args, &input);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}
