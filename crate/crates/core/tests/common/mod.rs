#![allow(dead_code)]

pub mod oracle;
pub mod synthetic;

use std::path::PathBuf;
use std::sync::OnceLock;

use wordgraph::WordGraph;

pub fn data_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data/wordnet-3.1")
}

pub fn fixture_dir(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

/// The vendored WordNet 3.1 graph, loaded once per test binary.
pub fn graph() -> &'static WordGraph {
    static GRAPH: OnceLock<WordGraph> = OnceLock::new();
    GRAPH.get_or_init(|| WordGraph::load(data_dir()).expect("vendored WordNet 3.1 loads"))
}

pub fn fig1() -> WordGraph {
    WordGraph::load(fixture_dir("fig1")).expect("fixture loads")
}

pub fn words(ws: &[&str]) -> Vec<String> {
    ws.iter().map(|w| w.to_string()).collect()
}

/// `|a − b| ≤ tol · max(|a|, |b|)`, with a tiny absolute floor near zero.
pub fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    if a == b {
        return true;
    }
    (a - b).abs() <= tol * a.abs().max(b.abs()) || (a - b).abs() < 1e-15
}
