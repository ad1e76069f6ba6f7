use std::path::{Path, PathBuf};
use std::process::Command;

use serde_json::Value;
use tempfile::TempDir;

const BRIDGE: &str = r#"{
  "vertices": [
    {"id": "w", "p_lo": "0", "p_hi": "0"},
    {"id": "v", "p_lo": "0", "p_hi": "0"},
    {"id": "s"},
    {"id": "t"}
  ],
  "edges": [
    {"id": "wv", "tail": "w", "head": "v", "b": "1", "f_lo": "0", "f_hi": "0"},
    {"id": "ws", "tail": "w", "head": "s", "b": "1"},
    {"id": "vs", "tail": "v", "head": "s", "b": "1"},
    {"id": "wt", "tail": "w", "head": "t", "b": "1"},
    {"id": "vt", "tail": "v", "head": "t", "b": "1"}
  ]
}"#;

const ZERO_FLOW: &str = r#"{"wv": "0", "ws": "0", "vs": "0", "wt": "0", "vt": "0"}"#;

const PATH: &str = r#"
[[vertices]]
id = "a"

[[vertices]]
id = "b"

[[vertices]]
id = "c"

[[edges]]
id = "ab"
tail = "a"
head = "b"
b = "1"
f_lo = "-1"
f_hi = "1"

[[edges]]
id = "bc"
tail = "b"
head = "c"
b = "1/2"
f_lo = "-2"
f_hi = "2"
"#;

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

impl Run {
    fn json(&self) -> Value {
        serde_json::from_str(&self.stdout).unwrap_or_else(|e| panic!("{e}: {}", self.stdout))
    }
}

fn diffflow(args: &[&str]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_diffflow")).args(args).output().unwrap();
    Run {
        code: out.status.code().unwrap(),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn feasible_and_extremal_verdicts() {
    let dir = TempDir::new().unwrap();
    let net = write(&dir, "bridge.json", BRIDGE);
    let flow = write(&dir, "zero.json", ZERO_FLOW);

    let r = diffflow(&["check-feasible", s(&net), s(&flow)]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert_eq!(r.json()["feasible"], true);

    let r = diffflow(&["check-extremal", s(&net), s(&flow)]);
    assert_eq!(r.code, 1);
    let doc = r.json();
    assert_eq!(doc["verdict"], "not-extremal");
    assert_eq!(doc["rank_active"], 2);
    assert_eq!(doc["direction"]["s"], "1");
    assert_eq!(doc["direction"]["t"], "-1");
}

#[test]
fn infeasible_flow_reports_violation() {
    let dir = TempDir::new().unwrap();
    let net = write(&dir, "bridge.json", BRIDGE);
    let flow = write(&dir, "bad.json", r#"{"wv": "1", "ws": "0", "vs": "0", "wt": "0", "vt": "0"}"#);
    let r = diffflow(&["check-feasible", s(&net), s(&flow)]);
    assert_eq!(r.code, 1);
    assert_eq!(r.json()["feasible"], false);
    assert!(r.json()["violation"].is_string());

    let r = diffflow(&["check-extremal", s(&net), s(&flow)]);
    assert_eq!(r.code, 2);
}

#[test]
fn toml_input_and_output() {
    let dir = TempDir::new().unwrap();
    let net = write(&dir, "path.toml", PATH);
    let r = diffflow(&["enumerate-vertices", s(&net)]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert_eq!(r.json()["count"], 4);

    let r = diffflow(&["--format", "toml", "cactus", "check", s(&net)]);
    assert_eq!(r.code, 0);
    assert!(r.stdout.contains("is_cactus = true"));
}

#[test]
fn alpha_extract_then_validate() {
    let dir = TempDir::new().unwrap();
    let net = write(&dir, "path.toml", PATH);
    let flow = write(&dir, "f.json", r#"{"ab": "1", "bc": "-2"}"#);
    let r = diffflow(&["alpha", "extract", s(&net), s(&flow)]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let alpha = write(&dir, "alpha.json", &r.stdout);
    let r = diffflow(&["alpha", "validate", s(&net), s(&alpha)]);
    assert_eq!(r.code, 0);
    assert_eq!(r.json()["is_alpha_tree"], true);

    let mid = write(&dir, "mid.json", r#"{"ab": "0", "bc": "0"}"#);
    assert_eq!(diffflow(&["alpha", "extract", s(&net), s(&mid)]).code, 1);
}

#[test]
fn witness_files_revalidate() {
    let dir = TempDir::new().unwrap();
    let net = write(&dir, "bridge.json", BRIDGE);
    let [wn, wf, wa] = ["n.json", "f.json", "a.json"].map(|n| dir.path().join(n));
    let r = diffflow(&[
        "degeneracy",
        "witness",
        s(&net),
        "--write-network",
        s(&wn),
        "--write-flow",
        s(&wf),
        "--write-alpha",
        s(&wa),
    ]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let doc = r.json();
    assert_eq!(doc["degenerate"], true);
    assert_eq!(doc["diamond"]["paths"].as_array().unwrap().len(), 3);

    assert_eq!(diffflow(&["check-feasible", s(&wn), s(&wf)]).code, 0);
    assert_eq!(diffflow(&["check-extremal", s(&wn), s(&wf)]).code, 1);
    assert_eq!(diffflow(&["alpha", "validate", s(&wn), s(&wa)]).code, 0);
    let r = diffflow(&["suffcond", "check", s(&wn), s(&wf), s(&wa)]);
    assert_eq!(r.code, 1);
    assert_eq!(r.json()["extremal"], false);
}

#[test]
fn cactus_has_no_witness() {
    let dir = TempDir::new().unwrap();
    let net = write(&dir, "path.toml", PATH);
    let r = diffflow(&["degeneracy", "witness", s(&net)]);
    assert_eq!(r.code, 1);
    assert_eq!(r.json()["degenerate"], false);
}

#[test]
fn degeneracy_test_modes() {
    let dir = TempDir::new().unwrap();
    let net = write(&dir, "bridge.json", BRIDGE);
    let cert_net = dir.path().join("cert.json");
    let cert_flow = dir.path().join("flow.json");
    let r = diffflow(&[
        "degeneracy",
        "test",
        s(&net),
        "--mode",
        "fixed",
        "--write-network",
        s(&cert_net),
        "--write-flow",
        s(&cert_flow),
    ]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert_eq!(r.json()["verdict"], "certified-degenerate");
    assert_eq!(diffflow(&["check-extremal", s(&cert_net), s(&cert_flow)]).code, 1);

    let path = write(&dir, "path.toml", PATH);
    let r = diffflow(&["degeneracy", "test", s(&path)]);
    assert_eq!(r.code, 1);
    assert_eq!(r.json()["verdict"], "no-counterexample-found");

    let r = diffflow(&["degeneracy", "test", s(&net), "--max-vertices", "3"]);
    assert_eq!(r.code, 2);
}

#[test]
fn gadget_commands() {
    let r = diffflow(&["gadget", "build", "--sizes", "1,2", "--target", "3"]);
    assert_eq!(r.code, 0);
    assert_eq!(r.json()["vertices"].as_array().unwrap().len(), 6);

    let r = diffflow(&["gadget", "decide", "--sizes", "1,2,4", "--target", "6"]);
    assert_eq!(r.code, 0);
    let doc = r.json();
    assert_eq!(doc["degenerate"], true);
    assert_eq!(doc["agree"], true);
    assert_eq!(doc["subset"], serde_json::json!([2, 3]));

    let r = diffflow(&["gadget", "decide", "--sizes", "2,4", "--target", "5"]);
    assert_eq!(r.code, 1);
    assert_eq!(r.json()["degenerate"], false);

    let r = diffflow(&["gadget", "decide", "--sizes", "1,1,1,1,1,1,1,1,1", "--target", "3"]);
    assert_eq!(r.code, 2);
}

#[test]
fn generate_is_reproducible() {
    let args = ["generate", "--seed", "5", "--topology", "cactus", "--bounds", "mixed", "--vertices", "6"];
    let a = diffflow(&args);
    let b = diffflow(&args);
    assert_eq!(a.code, 0);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.json()["vertices"].as_array().unwrap().len(), 6);

    let dir = TempDir::new().unwrap();
    let net = write(&dir, "gen.json", &a.stdout);
    assert_eq!(diffflow(&["cactus", "check", s(&net)]).code, 0);

    assert_eq!(diffflow(&["generate", "--topology", "wheel"]).code, 2);
}

#[test]
fn input_errors_name_the_file() {
    let dir = TempDir::new().unwrap();
    let bad = write(&dir, "broken.json", "{\"vertices\": [");
    let r = diffflow(&["cactus", "check", s(&bad)]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("broken.json"), "{}", r.stderr);
    assert!(r.stderr.contains("line"), "{}", r.stderr);

    let unknown = write(&dir, "unknown.json", r#"{"vertices": [{"id": "a", "colour": "red"}], "edges": []}"#);
    let r = diffflow(&["cactus", "check", s(&unknown)]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("unknown.json"));

    let net = write(&dir, "bridge.json", BRIDGE);
    let flow = write(&dir, "short.json", r#"{"wv": "0"}"#);
    let r = diffflow(&["check-feasible", s(&net), s(&flow)]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("short.json"));

    assert_eq!(diffflow(&["check-feasible", "missing.json", "missing.json"]).code, 2);
    assert_eq!(diffflow(&["no-such-command"]).code, 2);
}
