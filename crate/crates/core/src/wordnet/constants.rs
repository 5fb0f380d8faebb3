use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{Database, WordId};
use crate::taxonomy::{Scratch, TaxonomyStats, WordStats};

/// Database-wide constants, computed from the loaded graph.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DbConstants {
    pub max_vertices: u32,
    pub max_leaves: u32,
    pub max_depth: u32,
    pub min_commonness: f64,
    /// First word (in lexicon order) attaining `min_commonness`.
    pub min_commonness_word: String,
    pub max_commonness: f64,
    pub word_count: u32,
    pub m_edges: u32,
    pub w_edges: u32,
}

pub fn compute_constants(db: &Database, stats: &TaxonomyStats) -> DbConstants {
    let tax = &db.taxonomy;
    let lex = &db.lexicon;
    let n = tax.len();
    let max_leaves = (0..n as u32).filter(|&v| tax.is_leaf(v)).count() as u32;

    let ids: Vec<WordId> = lex.ids().collect();
    let (min_commonness, min_word) = ids
        .par_iter()
        .map_init(
            || Scratch::new(n),
            |scratch, &w| {
                let c = WordStats::compute(tax, stats, lex.senses(w), scratch).commonness;
                (c, w.0)
            },
        )
        .reduce(
            || (f64::INFINITY, u32::MAX),
            |a, b| if b.0 < a.0 || (b.0 == a.0 && b.1 < a.1) { b } else { a },
        );

    DbConstants {
        max_vertices: n as u32,
        max_leaves,
        max_depth: stats.max_depth(),
        min_commonness,
        min_commonness_word: if min_word == u32::MAX { String::new() } else { lex.word(WordId(min_word)).to_string() },
        max_commonness: stats.commonness(tax.root()),
        word_count: lex.len() as u32,
        m_edges: tax.edge_count() as u32,
        w_edges: lex.edge_count() as u32,
    }
}

/// Published WordNet 3.1 values the computed constants are checked against.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReferenceConstants {
    pub max_vertices: u32,
    pub max_leaves: u32,
    pub max_depth: u32,
    pub min_commonness: f64,
    pub max_commonness: f64,
    /// The reference prints max commonness to one decimal.
    pub max_commonness_tolerance: f64,
    pub word_count: u32,
    pub m_edges: u32,
    pub w_edges: u32,
}

impl ReferenceConstants {
    pub const WORDNET_3_1: ReferenceConstants = ReferenceConstants {
        max_vertices: 82192,
        max_leaves: 65031,
        max_depth: 19,
        min_commonness: 1.0 / 35.0,
        max_commonness: 6863.6,
        max_commonness_tolerance: 0.1,
        word_count: 158441,
        m_edges: 84505,
        w_edges: 189555,
    };

    pub fn check(&self, c: &DbConstants) -> Vec<ConstantCheck> {
        let int = |name: &str, expected: u32, actual: u32| ConstantCheck {
            name: name.to_string(),
            expected: expected.to_string(),
            actual: actual.to_string(),
            ok: expected == actual,
        };
        vec![
            int("max_vertices", self.max_vertices, c.max_vertices),
            int("max_leaves", self.max_leaves, c.max_leaves),
            int("max_depth", self.max_depth, c.max_depth),
            ConstantCheck {
                name: "min_commonness".into(),
                expected: format!("{:.12}", self.min_commonness),
                actual: format!("{:.12} ({})", c.min_commonness, c.min_commonness_word),
                ok: (c.min_commonness - self.min_commonness).abs() <= 1e-12,
            },
            ConstantCheck {
                name: "max_commonness".into(),
                expected: format!("{:.1}", self.max_commonness),
                actual: format!("{:.4}", c.max_commonness),
                ok: (c.max_commonness - self.max_commonness).abs() <= self.max_commonness_tolerance,
            },
            int("word_count", self.word_count, c.word_count),
            int("m_edges", self.m_edges, c.m_edges),
            int("w_edges", self.w_edges, c.w_edges),
        ]
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConstantCheck {
    pub name: String,
    pub expected: String,
    pub actual: String,
    pub ok: bool,
}
