//! wasm-bindgen exports for the static demo page in `www/`. Every export
//! takes strings and returns a JSON string, so the page needs no glue
//! beyond `JSON.parse`.

use serde::Serialize;
use wasm_bindgen::prelude::wasm_bindgen;

use lambdamu_core::reduction::{build_graph, normalize as reduce, Strategy};
use lambdamu_core::syntax::{parse_decls, parse_term, parse_type};
use lambdamu_core::typing::{infer, Contexts};

/// Keeps a runaway term from freezing the tab.
const MAX_FUEL: usize = 20_000;

#[derive(Serialize)]
#[serde(tag = "status", rename_all = "lowercase")]
enum Reply<T> {
    Ok(T),
    Error { message: String },
}

fn reply<T: Serialize>(r: Result<T, String>) -> String {
    let r = match r {
        Ok(v) => Reply::Ok(v),
        Err(message) => Reply::Error { message },
    };
    serde_json::to_string(&r).expect("replies serialize")
}

fn contexts(gamma: &str, delta: &str) -> Result<Contexts, String> {
    let g = parse_decls(gamma).map_err(|e| format!("gamma: {e}"))?;
    let d = parse_decls(delta).map_err(|e| format!("delta: {e}"))?;
    Ok(Contexts { gamma: g.into_iter().collect(), delta: d.into_iter().collect() })
}

#[derive(Serialize)]
struct Checked {
    term: String,
    #[serde(rename = "type")]
    ty: String,
    matches: bool,
}

/// Infers the type of `term`; `expected` may be empty.
#[wasm_bindgen]
pub fn check(term: &str, expected: &str, gamma: &str, delta: &str) -> String {
    reply((|| {
        let t = parse_term(term).map_err(|e| format!("term: {e}"))?;
        let ctx = contexts(gamma, delta)?;
        let ty = infer(&ctx, &t).map_err(|e| e.to_string())?;
        let matches = if expected.trim().is_empty() {
            true
        } else {
            parse_type(expected).map_err(|e| format!("type: {e}"))? == ty
        };
        Ok(Checked { term: t.to_string(), ty: ty.to_string(), matches })
    })())
}

#[derive(Serialize)]
struct Step {
    path: String,
    kind: String,
    result: String,
}

#[derive(Serialize)]
struct Normal {
    normal_form: String,
    steps: Vec<Step>,
}

/// Normal form plus trace. `strategy` is `leftmost`, `random` or
/// `exhaustive`.
#[wasm_bindgen]
pub fn normalize(term: &str, strategy: &str, seed: u32, fuel: u32) -> String {
    reply((|| {
        let t = parse_term(term).map_err(|e| format!("term: {e}"))?;
        let strategy = match strategy {
            "leftmost" => Strategy::LeftmostOutermost,
            "random" => Strategy::Random(seed as u64),
            "exhaustive" => Strategy::Exhaustive,
            other => return Err(format!("unknown strategy `{other}`")),
        };
        let n = reduce(&t, strategy, (fuel as usize).min(MAX_FUEL)).map_err(|e| e.to_string())?;
        let steps = n
            .trace
            .iter()
            .map(|s| {
                let shown = s.step.to_string();
                let (path, kind) = shown.split_once(' ').unwrap_or((&shown, ""));
                Step { path: path.to_string(), kind: kind.to_string(), result: s.result.to_string() }
            })
            .collect();
        Ok(Normal { normal_form: n.term.to_string(), steps })
    })())
}

#[derive(Serialize)]
struct Graph {
    eta: usize,
    nodes: usize,
    edges: usize,
    normal_forms: Vec<String>,
    /// Edges per rule schema: beta, projection, case, permutative, classical.
    schemata: [usize; 5],
}

/// Explores every reduction of `term`.
#[wasm_bindgen]
pub fn graph_stats(term: &str, fuel: u32) -> String {
    reply((|| {
        let t = parse_term(term).map_err(|e| format!("term: {e}"))?;
        let g = build_graph(&t, (fuel as usize).min(MAX_FUEL)).map_err(|e| e.to_string())?;
        Ok(Graph {
            eta: g.eta(),
            nodes: g.node_count(),
            edges: g.edge_count(),
            normal_forms: g.normal_forms().iter().map(|t| t.to_string()).collect(),
            schemata: g.schema_counts(),
        })
    })())
}
