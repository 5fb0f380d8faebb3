use serde::Serialize;

use super::IcFormula;
use crate::taxonomy::{TaxonomyStats, WordStats};
use crate::wordnet::DbConstants;

/// Database constants the IC formulas are normalized by.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct IcContext {
    pub max_vertices: f64,
    pub max_leaves: f64,
    pub max_depth: f64,
    pub min_commonness: f64,
    pub max_commonness: f64,
    /// Every formula is a ratio of logarithms, so the base cancels; it is
    /// configurable only so that this can be checked.
    pub log_base: f64,
}

impl IcContext {
    pub fn new(c: &DbConstants) -> Self {
        IcContext {
            max_vertices: f64::from(c.max_vertices),
            max_leaves: f64::from(c.max_leaves),
            max_depth: f64::from(c.max_depth),
            min_commonness: c.min_commonness,
            max_commonness: c.max_commonness,
            log_base: std::f64::consts::E,
        }
    }

    pub fn with_log_base(mut self, base: f64) -> Self {
        self.log_base = base;
        self
    }

    #[inline]
    pub fn log(&self, x: f64) -> f64 {
        if self.log_base == std::f64::consts::E {
            x.ln()
        } else {
            x.log(self.log_base)
        }
    }
}

/// The graph quantities an IC formula reads, for a word or a meaning vertex.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct IcInputs {
    pub depth: f64,
    pub subsumers: f64,
    pub subvertices: f64,
    pub leaves: f64,
    pub commonness: f64,
    /// Σ over subvertices of 1/Depth.
    pub inverse_depth_sum: f64,
}

impl IcInputs {
    pub fn of_word(w: &WordStats) -> Self {
        IcInputs {
            depth: f64::from(w.depth),
            subsumers: f64::from(w.subsumers),
            subvertices: f64::from(w.subvertices),
            leaves: f64::from(w.leaves),
            commonness: w.commonness,
            inverse_depth_sum: w.inverse_depth_sum,
        }
    }

    pub fn of_synset(stats: &TaxonomyStats, v: u32) -> Self {
        IcInputs {
            depth: f64::from(stats.depth(v)),
            subsumers: f64::from(stats.subsumer_count(v)),
            subvertices: f64::from(stats.subvertex_count(v)),
            leaves: f64::from(stats.leaf_count(v)),
            commonness: stats.commonness(v),
            inverse_depth_sum: stats.inverse_depth_sum(v),
        }
    }
}

pub fn ic_value(x: &IcInputs, formula: IcFormula, ctx: &IcContext) -> f64 {
    let log = |v: f64| ctx.log(v);
    let depth_ratio = || log(x.depth) / log(ctx.max_depth);
    match formula {
        IcFormula::Blanchard => 1.0 - log(x.leaves) / log(ctx.max_leaves),
        IcFormula::Meng => {
            depth_ratio() * (1.0 - log(1.0 + x.inverse_depth_sum) / log(ctx.max_vertices))
        }
        IcFormula::Sanchez => {
            log(x.leaves / (ctx.max_leaves * x.subsumers)) / log(ctx.min_commonness / ctx.max_leaves)
        }
        IcFormula::SanchezBatet => {
            log(x.commonness / ctx.max_commonness) / log(ctx.min_commonness / ctx.max_commonness)
        }
        IcFormula::Seco => 1.0 - log(x.subvertices) / log(ctx.max_vertices),
        IcFormula::Yuan => {
            depth_ratio() * (1.0 - log(x.leaves) / log(ctx.max_leaves)) + log(x.subsumers) / log(ctx.max_vertices)
        }
        IcFormula::Zhou => 0.5 * (1.0 - log(x.subvertices) / log(ctx.max_vertices) + depth_ratio()),
    }
}
