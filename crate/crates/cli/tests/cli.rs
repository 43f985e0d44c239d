use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn strimm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_strimm"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

/// Runs `args` with `-o` pointing into `dir` and returns the written path.
fn to_file(dir: &TempDir, name: &str, args: &[&str]) -> (PathBuf, i32) {
    let path = dir.path().join(name);
    let mut all = args.to_vec();
    all.extend(["-o", path.to_str().unwrap()]);
    let out = strimm(&all);
    (path, out.status.code().unwrap())
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn analyze_reports_pivots_and_verdict() {
    let dir = TempDir::new().unwrap();
    let (z, code) = to_file(&dir, "z.json", &["generate", "zigzag", "--i", "1"]);
    assert_eq!(code, 0);
    let out = strimm(&["analyze", "-i", s(&z), "--k", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["max_pivots"], 1);
    assert_eq!(v["verdict"], "no 2-alternating path: true");
    let out = strimm(&["analyze", "-i", s(&z), "--k", "1"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["no_k_alternating_path"], false);
}

#[test]
fn antichain_members_do_not_embed() {
    let dir = TempDir::new().unwrap();
    let (a, _) = to_file(&dir, "a.json", &["generate", "labelled-antichain", "--i", "2"]);
    let (b, _) = to_file(&dir, "b.json", &["generate", "labelled-antichain", "--i", "3"]);
    for (g, h) in [(&a, &b), (&b, &a)] {
        let out = strimm(&["embed", "--guest", s(g), "--host", s(h)]);
        assert_eq!(out.status.code(), Some(1));
    }
    let out = strimm(&["embed", "--guest", s(&a), "--host", s(&a)]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn embedding_certificate_verifies_in_a_fresh_process() {
    let dir = TempDir::new().unwrap();
    let (g, _) = to_file(&dir, "g.json", &["generate", "zigzag", "--i", "1"]);
    let (h, _) = to_file(&dir, "h.json", &["generate", "zigzag", "--i", "3"]);
    let (cert, code) = to_file(&dir, "cert.json", &["embed", "--guest", s(&g), "--host", s(&h)]);
    assert_eq!(code, 0);
    let out = strimm(&["check", "embedding", "--guest", s(&g), "--host", s(&h), "--certificate", s(&cert)]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    // the same vertex names without the routed edges
    let bare = dir.path().join("bare.json");
    std::fs::write(
        &bare,
        r#"{"vertices": [{"id": "v0"}, {"id": "v1"}, {"id": "v2"}, {"id": "v3"}, {"id": "v4"}],
            "edges": [{"id": "e0", "tail": "v0", "head": "v1"}, {"id": "e1", "tail": "v1", "head": "v2"},
                      {"id": "e2", "tail": "v3", "head": "v2"}, {"id": "e3", "tail": "v3", "head": "v4"}]}"#,
    )
    .unwrap();
    let out = strimm(&["check", "embedding", "--guest", s(&g), "--host", s(&bare), "--certificate", s(&cert)]);
    assert_eq!(out.status.code(), Some(1), "{}", String::from_utf8_lossy(&out.stdout));
}

#[test]
fn scan_finds_a_duplicate_and_its_certificate_verifies() {
    let dir = TempDir::new().unwrap();
    let (a, _) = to_file(&dir, "a.json", &["generate", "labelled-antichain", "--i", "1"]);
    let (b, _) = to_file(&dir, "b.json", &["generate", "labelled-antichain", "--i", "2"]);
    let read = |p: &Path| -> Value { serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap() };
    let seq = Value::Array(vec![read(&a), read(&b), read(&a)]);
    let seq_path = dir.path().join("seq.json");
    std::fs::write(&seq_path, seq.to_string()).unwrap();
    let (report, code) = to_file(&dir, "report.json", &["scan", "-i", s(&seq_path), "--k", "4"]);
    assert_eq!(code, 0);
    let r = read(&report);
    assert_eq!(r["pair"], serde_json::json!([1, 3]));
    let cert = dir.path().join("cert.json");
    std::fs::write(&cert, r["certificate"].to_string()).unwrap();
    let out = strimm(&["check", "embedding", "--guest", s(&a), "--host", s(&a), "--certificate", s(&cert)]);
    assert_eq!(out.status.code(), Some(0));
    // the antichain prefix alone has no pair
    let seq_path = dir.path().join("pair.json");
    std::fs::write(&seq_path, Value::Array(vec![read(&a), read(&b)]).to_string()).unwrap();
    assert_eq!(strimm(&["scan", "-i", s(&seq_path), "--k", "4"]).status.code(), Some(1));
}

/// First seed whose ear sample has at least one series-parallel separation.
fn separable_sample(dir: &TempDir) -> (PathBuf, Vec<Value>) {
    for seed in 0..50 {
        let seed = seed.to_string();
        let (g, _) = to_file(
            dir,
            "ear.json",
            &["generate", "random-ear", "--vertices", "6", "--k", "3", "--seed", &seed],
        );
        let out = strimm(&["separations", "-i", s(&g), "--mode", "all"]);
        assert_eq!(out.status.code(), Some(0));
        let list = json(&out).as_array().unwrap().clone();
        if !list.is_empty() {
            return (g, list);
        }
    }
    panic!("no separable sample in 50 seeds");
}

#[test]
fn separation_certificates_verify_in_a_fresh_process() {
    let dir = TempDir::new().unwrap();
    let (g, list) = separable_sample(&dir);
    for (i, sep) in list.iter().enumerate() {
        let cert = dir.path().join(format!("sep{i}.json"));
        std::fs::write(&cert, sep.to_string()).unwrap();
        let out = strimm(&["check", "separation", "-i", s(&g), "--certificate", s(&cert)]);
        assert_eq!(out.status.code(), Some(0), "{sep}");
    }
    // the whole edge set is not a separation
    let all: Vec<Value> = list[0]["a_edges"]
        .as_array()
        .unwrap()
        .iter()
        .chain(list[0]["b_edges"].as_array().unwrap())
        .cloned()
        .collect();
    let cert = dir.path().join("bad.json");
    std::fs::write(&cert, serde_json::json!({ "a_edges": all }).to_string()).unwrap();
    assert_eq!(strimm(&["check", "separation", "-i", s(&g), "--certificate", s(&cert)]).status.code(), Some(1));
}

#[test]
fn hitting_set_verifies_in_a_fresh_process() {
    let dir = TempDir::new().unwrap();
    let (g, _) = to_file(
        &dir,
        "g.json",
        &["generate", "random-ear", "--vertices", "7", "--k", "3", "--seed", "4"],
    );
    let (z, code) = to_file(&dir, "z.json", &["hitting-set", "-i", s(&g), "--t", "2"]);
    assert_eq!(code, 0);
    let out = strimm(&["check", "hitting-set", "-i", s(&g), "--t", "2", "--certificate", s(&z)]);
    assert_eq!(out.status.code(), Some(0));
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(&z).unwrap()).unwrap();
    assert!(doc["paths"].as_u64().unwrap() > 0);
    let empty = dir.path().join("empty.json");
    std::fs::write(&empty, r#"{"vertices": []}"#).unwrap();
    let out = strimm(&["check", "hitting-set", "-i", s(&g), "--t", "2", "--certificate", s(&empty)]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn random_generation_is_certified_and_deterministic() {
    let first = strimm(&["generate", "random-no-k-alt", "--vertices", "5", "--k", "2", "--seed", "9"]);
    let second = strimm(&["generate", "random-no-k-alt", "--vertices", "5", "--k", "2", "--seed", "9"]);
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(first.stdout, second.stdout);
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("g.json");
    std::fs::write(&path, &first.stdout).unwrap();
    // the generator record rides along in the document
    let mut doc = json(&first);
    assert_eq!(doc["generator"]["seed"], 9);
    doc.as_object_mut().unwrap().remove("generator");
    let bare = dir.path().join("bare.json");
    std::fs::write(&bare, doc.to_string()).unwrap();
    assert_eq!(strimm(&["analyze", "-i", s(&bare)]).stdout, strimm(&["analyze", "-i", s(&path)]).stdout);
    let out = strimm(&["analyze", "-i", s(&path), "--k", "2"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(json(&out)["max_pivots"].as_u64().unwrap() < 2);
}

#[test]
fn malformed_input_exits_two_with_position() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, "{\"vertices\": [{\"id\": \"a\"}],\n \"edges\": [{\"tail\": \"a\", \"head\": }]}").unwrap();
    let out = strimm(&["analyze", "-i", s(&path)]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 2 column"), "{err}");
    std::fs::write(&path, r#"{"vertices": [{"id": "a"}], "edges": [{"tail": "a", "head": "b"}]}"#).unwrap();
    assert_eq!(strimm(&["analyze", "-i", s(&path)]).status.code(), Some(2));
}

#[test]
fn size_guard_exits_three() {
    let dir = TempDir::new().unwrap();
    let (g, _) = to_file(&dir, "g.json", &["generate", "zigzag", "--i", "3"]);
    let out = strimm(&["embed", "--guest", s(&g), "--host", s(&g), "--guard", "2"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn structural_commands_produce_json() {
    let dir = TempDir::new().unwrap();
    let diamond = dir.path().join("diamond.json");
    std::fs::write(
        &diamond,
        r#"{"vertices": [{"id": "s"}, {"id": "a"}, {"id": "b"}, {"id": "t"}],
            "edges": [{"tail": "s", "head": "a"}, {"tail": "a", "head": "t"},
                      {"tail": "s", "head": "b"}, {"tail": "b", "head": "t"}]}"#,
    )
    .unwrap();
    let out = strimm(&["decompose", "-i", s(&diamond), "--source", "s", "--sink", "t"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["direction"], "forward");
    assert_eq!(v["separator"]["size"], 2);
    assert_eq!(v["tree"]["op"], "parallel");
    let out = strimm(&["decompose", "-i", s(&diamond), "--source", "a", "--sink", "b"]);
    assert_eq!(out.status.code(), Some(1));

    let out = strimm(&["portrait", "-i", s(&diamond), "--root", "s"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["root"], "s");

    let out = strimm(&["contract", "-i", s(&diamond), "--mode", "maximal"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(json(&out)["digraph"]["vertices"].is_array());
}
