use std::io::Write;
use std::path::Path;
use std::process::{Command, Output, Stdio};

use serde_json::{json, Value};
use spheremap::cli::{AnalyzeDoc, NotInftyFoldDoc, RunManifest};
use spheremap::json::{from_json, map_from_json, map_to_json, to_json, CertificateDoc, NormalFormDoc, TraceDoc};
use spheremap::verify::{ComplementReport, SampleReport};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_spheremap"))
}

fn run(dir: &Path, args: &[&str]) -> Output {
    bin().current_dir(dir).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn construct(dir: &Path, name: &str, args: &[&str]) {
    let mut all = vec!["construct"];
    all.extend_from_slice(args);
    all.extend_from_slice(&["--out", name]);
    let o = run(dir, &all);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
}

const SQUARE_MAP: &str = r#"{"n":2,"N":2,"kind":"poly","components":[
  {"terms":[{"alpha":[2,0],"re":"1","im":"0"}]},
  {"terms":[{"alpha":[0,1],"re":"1","im":"0"}]}]}"#;

#[test]
fn homogeneous_square_has_binomial_weights() {
    let dir = tempfile::tempdir().unwrap();
    construct(dir.path(), "h2.json", &["homogeneous", "-n", "2", "-d", "2"]);
    let text = std::fs::read_to_string(dir.path().join("h2.json")).unwrap();
    let v: Value = serde_json::from_str(&text).unwrap();
    let weights: Vec<&Value> = v["components"].as_array().unwrap().iter().map(|c| &c["weight"]).collect();
    assert_eq!(weights, [&json!("1"), &json!("2"), &json!("1")]);
    assert_eq!(map_to_json(&map_from_json(&text).unwrap()), text);

    let manifest: RunManifest =
        from_json(&std::fs::read_to_string(dir.path().join("h2.json.manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest.command, "construct homogeneous -n 2 -d 2 --out h2.json");
    assert_eq!(manifest.tool_version, env!("CARGO_PKG_VERSION"));
}

#[test]
fn analyze_examples() {
    let dir = tempfile::tempdir().unwrap();
    construct(dir.path(), "h2.json", &["homogeneous", "-n", "2", "-d", "2"]);
    let o = run(dir.path(), &["analyze", "h2.json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v, json!({"kind": "infinite", "C": ["0", "0", "1"]}));
    // The manifest goes to stderr when no --out is given.
    let m: RunManifest = serde_json::from_slice(&o.stderr).unwrap();
    assert_eq!(m.input_paths, vec!["h2.json".to_string()]);

    construct(dir.path(), "p.json", &["poly-k-fold", "-n", "2", "-k", "1", "-m", "2", "--radii-sq", "1", "--trace", "t.json"]);
    let o = run(dir.path(), &["analyze", "p.json", "--folds", "1:4"]);
    assert_eq!(o.status.code(), Some(0));
    let doc: AnalyzeDoc = from_json(&stdout(&o)).unwrap();
    assert_eq!(to_json(&doc), stdout(&o));
    let entries = doc.profile.entries.as_ref().unwrap();
    assert_eq!(entries.len(), 1);
    assert_eq!(serde_json::to_value(&entries[0]).unwrap(), json!({"t": "1", "T": "4"}));
    assert!(doc.newton.is_some());

    let trace: TraceDoc = from_json(&std::fs::read_to_string(dir.path().join("t.json")).unwrap()).unwrap();
    assert!(trace.parse().is_ok());

    let o = run(dir.path(), &["analyze", "p.json", "--folds", "2:4"]);
    assert_eq!(o.status.code(), Some(1));
    let doc: AnalyzeDoc = from_json(&stdout(&o)).unwrap();
    assert_eq!(doc.not_a_fold.unwrap().step, 1);
}

#[test]
fn malformed_input_is_a_parse_error() {
    let mut child = bin()
        .args(["analyze", "-"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(b"{\"n\": 2,\n").unwrap();
    let o = child.wait_with_output().unwrap();
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("line"), "{err}");
}

#[test]
fn usage_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(run(dir.path(), &["report"]).status.code(), Some(2));
    assert_eq!(run(dir.path(), &["report", "missing.json"]).status.code(), Some(2));
    assert_eq!(run(dir.path(), &["frobnicate"]).status.code(), Some(2));
}

#[test]
fn rational_slack_too_large() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(
        dir.path(),
        &["construct", "rational-k-fold", "-n", "2", "-k", "1", "-m", "2", "--radii-sq", "1", "--a", "10,0"],
    );
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("shrink |a|"));

    construct(dir.path(), "r.json", &["rational-k-fold", "-n", "2", "-k", "1", "-m", "2", "--radii-sq", "1", "--a", "1/8:0,0"]);
    let o = run(dir.path(), &["analyze", "r.json"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["entries"], json!([{"t": "1", "T": "1"}]));
}

#[test]
fn decompose_examples() {
    let dir = tempfile::tempdir().unwrap();
    construct(dir.path(), "h2.json", &["homogeneous", "-n", "2", "-d", "2"]);
    construct(dir.path(), "id.json", &["homogeneous", "-n", "2", "-d", "1"]);
    std::fs::write(dir.path().join("sq.json"), SQUARE_MAP).unwrap();

    let o = run(dir.path(), &["decompose", "h2.json"]);
    assert_eq!(o.status.code(), Some(0));
    let doc: NormalFormDoc = from_json(&stdout(&o)).unwrap();
    assert_eq!(doc.c, ["0", "0", "1"]);
    assert!(doc.residual < 1e-9 && doc.gram_certificate);

    let o = run(dir.path(), &["decompose", "id.json"]);
    let doc: NormalFormDoc = from_json(&stdout(&o)).unwrap();
    assert_eq!(doc.c, ["0", "1"]);
    assert_eq!(doc.u, vec![vec![(1.0, 0.0), (0.0, 0.0)], vec![(0.0, 0.0), (1.0, 0.0)]]);

    let o = run(dir.path(), &["decompose", "sq.json"]);
    assert_eq!(o.status.code(), Some(1));
    let doc: NotInftyFoldDoc = from_json(&stdout(&o)).unwrap();
    assert_eq!(doc.profile.kind, "finite");
    assert_eq!(doc.profile.entries, Some(vec![]));
}

#[test]
fn verify_examples() {
    let dir = tempfile::tempdir().unwrap();
    construct(dir.path(), "h2.json", &["homogeneous", "-n", "2", "-d", "2"]);
    construct(dir.path(), "id.json", &["homogeneous", "-n", "2", "-d", "1"]);

    let o = run(dir.path(), &["verify", "sphere", "id.json", "--t", "1", "--T", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let c: CertificateDoc = from_json(&stdout(&o)).unwrap();
    assert!(c.verdict && c.witness.is_none());

    let o = run(dir.path(), &["verify", "outside", "h2.json", "--samples", "1000", "--seed", "42"]);
    assert_eq!(o.status.code(), Some(0));
    let r: SampleReport = from_json(&stdout(&o)).unwrap();
    assert!(r.violations.is_empty());
    assert_eq!((r.samples, r.seed), (1000, 42));
    assert_eq!(to_json(&r), stdout(&o));

    let o = run(
        dir.path(),
        &["verify", "ball-difference", "id.json", "--source-radius-sq", "1", "--target-radius-sq", "2"],
    );
    assert_eq!(o.status.code(), Some(1));
    let c: CertificateDoc = from_json(&stdout(&o)).unwrap();
    assert!(!c.verdict);
    assert!(c.witness.unwrap().parse().is_ok());

    let o = run(dir.path(), &["verify", "reflection", "h2.json"]);
    let r: SampleReport = from_json(&stdout(&o)).unwrap();
    assert!(r.max_residual < 1e-10);

    let o = run(dir.path(), &["verify", "complement", "h2.json"]);
    assert_eq!(o.status.code(), Some(0));
    let r: ComplementReport = from_json(&stdout(&o)).unwrap();
    assert_eq!(to_json(&r), stdout(&o));
}

#[test]
fn seeded_runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    construct(dir.path(), "h3.json", &["homogeneous", "-n", "3", "-d", "3"]);
    let args = ["verify", "outside", "h3.json", "--samples", "300", "--seed", "7"];
    assert_eq!(run(dir.path(), &args).stdout, run(dir.path(), &args).stdout);
    let args = ["construct", "poly-k-fold", "-n", "3", "-k", "2", "-m", "3", "--radii-sq", "1,2"];
    assert_eq!(run(dir.path(), &args).stdout, run(dir.path(), &args).stdout);
    let other = run(dir.path(), &["verify", "outside", "h3.json", "--samples", "300", "--seed", "8"]);
    assert_ne!(run(dir.path(), &["verify", "outside", "h3.json", "--samples", "300", "--seed", "7"]).stdout, other.stdout);
}

#[test]
fn report_with_provenance() {
    let dir = tempfile::tempdir().unwrap();
    construct(dir.path(), "h2.json", &["homogeneous", "-n", "2", "-d", "2"]);
    assert_eq!(run(dir.path(), &["analyze", "h2.json", "--out", "a.json"]).status.code(), Some(0));
    let o = run(dir.path(), &["report", "a.json"]);
    assert_eq!(o.status.code(), Some(0));
    let md = stdout(&o);
    assert_eq!(md.matches("\n## ").count(), 1);
    assert!(md.contains("C = [0, 0, 1]"));
    assert!(md.contains("Produced by `spheremap analyze h2.json --out a.json`"));
}
