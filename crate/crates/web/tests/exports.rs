use serde_json::{json, Value};

use lambdamu_web::{check, graph_stats, normalize};

fn parse(s: String) -> Value {
    serde_json::from_str(&s).unwrap()
}

#[test]
fn check_reports_type() {
    let v = parse(check("\\z:bot. mu a:P. z", "bot -> P", "", ""));
    assert_eq!(v, json!({"status": "ok", "term": "\\z:bot. mu a:P. z", "type": "bot -> P", "matches": true}));
    let v = parse(check("f y", "Q", "f:P->P, y:P", ""));
    assert_eq!(v["type"], "P");
    assert_eq!(v["matches"], false);
}

#[test]
fn check_reports_errors() {
    assert_eq!(parse(check("\\x:P. (x", "", "", ""))["status"], "error");
    assert_eq!(parse(check("x", "", "", ""))["status"], "error");
    let v = parse(check("x", "", "x P", ""));
    assert!(v["message"].as_str().unwrap().starts_with("gamma:"));
}

#[test]
fn normalize_gives_trace() {
    let v = parse(normalize("(mu a:P->P. [a] f) y", "leftmost", 0, 100));
    assert_eq!(v["normal_form"], "mu a:P. [a] (f y)");
    assert_eq!(v["steps"], json!([{"path": "root", "kind": "classical", "result": "mu a:P. [a] (f y)"}]));
    let v = parse(normalize("(\\x:P. x) y", "random", 3, 100));
    assert_eq!(v["normal_form"], "y");
    assert_eq!(parse(normalize("y", "sideways", 0, 100))["status"], "error");
}

#[test]
fn normalize_respects_fuel() {
    let v = parse(normalize("(\\x:P. x) ((\\x:P. x) y)", "leftmost", 0, 1));
    assert_eq!(v["status"], "error");
}

#[test]
fn graph_stats_counts() {
    let v = parse(graph_stats("(\\x:P. x) ((\\x:P. x) y)", 100));
    assert_eq!(v, json!({"status": "ok", "eta": 2, "nodes": 3, "edges": 3, "normal_forms": ["y"], "schemata": [3, 0, 0, 0, 0]}));
}
