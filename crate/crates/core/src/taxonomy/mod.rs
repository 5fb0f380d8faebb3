//! Graph functions over the is-a DAG: depth, subsumers, subvertices,
//! leaves and commonness of meaning vertices and of words.
//!
//! Subsumer and subvertex sets are computed as sets. The taxonomy has
//! multiple inheritance, so adding up counts over parents would double
//! count shared ancestors.

mod query;

use rayon::prelude::*;
use serde::Serialize;

pub use query::{lcs_from_up, undirected_distance, up_distances, UpDistances};

use crate::wordnet::{Csr, Taxonomy};

/// Per-synset values precomputed once after loading.
#[derive(Clone, Debug, PartialEq)]
pub struct TaxonomyStats {
    depth: Vec<u32>,
    ancestors: Csr,
    subvertex_count: Vec<u32>,
    leaf_count: Vec<u32>,
    commonness: Vec<f64>,
    inverse_depth_sum: Vec<f64>,
}

/// Aggregates over a set of meaning vertices.
#[derive(Clone, Copy, Debug, PartialEq)]
pub(crate) struct SetSummary {
    pub count: u32,
    pub leaves: u32,
    pub commonness: f64,
    pub inverse_depth_sum: f64,
}

/// Reusable visited-marks for traversals over the whole taxonomy.
pub(crate) struct Scratch {
    mark: Vec<u32>,
    epoch: u32,
    pub(crate) queue: Vec<u32>,
}

impl Scratch {
    pub(crate) fn new(n: usize) -> Self {
        Scratch { mark: vec![0; n], epoch: 0, queue: Vec::new() }
    }

    fn reset(&mut self) {
        self.epoch = self.epoch.wrapping_add(1);
        if self.epoch == 0 {
            self.mark.fill(0);
            self.epoch = 1;
        }
        self.queue.clear();
    }

    #[inline]
    fn visit(&mut self, v: u32) -> bool {
        let slot = &mut self.mark[v as usize];
        if *slot == self.epoch {
            false
        } else {
            *slot = self.epoch;
            true
        }
    }
}

thread_local! {
    static SCRATCH: std::cell::RefCell<Option<Scratch>> = const { std::cell::RefCell::new(None) };
}

/// Runs `f` with this thread's scratch buffer sized for `n` vertices.
pub(crate) fn with_scratch<R>(n: usize, f: impl FnOnce(&mut Scratch) -> R) -> R {
    SCRATCH.with(|cell| {
        let mut slot = cell.borrow_mut();
        if slot.as_ref().is_none_or(|s| s.mark.len() != n) {
            *slot = Some(Scratch::new(n));
        }
        f(slot.as_mut().unwrap())
    })
}

/// All vertices reachable downwards from `sources` (each source included),
/// sorted by dense index.
pub(crate) fn descendants(tax: &Taxonomy, sources: &[u32], scratch: &mut Scratch) -> Vec<u32> {
    scratch.reset();
    for &s in sources {
        if scratch.visit(s) {
            scratch.queue.push(s);
        }
    }
    let mut head = 0;
    while head < scratch.queue.len() {
        let u = scratch.queue[head];
        head += 1;
        for &c in tax.children(u) {
            if scratch.visit(c) {
                scratch.queue.push(c);
            }
        }
    }
    let mut out = std::mem::take(&mut scratch.queue);
    out.sort_unstable();
    scratch.queue = Vec::new();
    out
}

fn bfs_depths(tax: &Taxonomy) -> Vec<u32> {
    let mut depth = vec![0u32; tax.len()];
    let mut queue = std::collections::VecDeque::new();
    depth[tax.root() as usize] = 1;
    queue.push_back(tax.root());
    while let Some(u) = queue.pop_front() {
        for &c in tax.children(u) {
            if depth[c as usize] == 0 {
                depth[c as usize] = depth[u as usize] + 1;
                queue.push_back(c);
            }
        }
    }
    depth
}

impl TaxonomyStats {
    pub fn precompute(tax: &Taxonomy) -> Self {
        let n = tax.len();
        let depth = bfs_depths(tax);

        let mut anc_rows: Vec<Vec<u32>> = vec![Vec::new(); n];
        for &v in tax.topological_order() {
            let mut row = vec![v];
            for &p in tax.parents(v) {
                row.extend_from_slice(&anc_rows[p as usize]);
            }
            row.sort_unstable();
            row.dedup();
            anc_rows[v as usize] = row;
        }
        let ancestors = Csr::from_rows(anc_rows);
        let subsumer_count: Vec<u32> = (0..n as u32).map(|v| ancestors.row(v).len() as u32).collect();

        let summaries: Vec<SetSummary> = (0..n as u32)
            .into_par_iter()
            .map_init(
                || Scratch::new(n),
                |scratch, v| {
                    let set = descendants(tax, &[v], scratch);
                    summarize_with(tax, &depth, &subsumer_count, &set)
                },
            )
            .collect();

        TaxonomyStats {
            depth,
            ancestors,
            subvertex_count: summaries.iter().map(|s| s.count).collect(),
            leaf_count: summaries.iter().map(|s| s.leaves).collect(),
            commonness: summaries.iter().map(|s| s.commonness).collect(),
            inverse_depth_sum: summaries.iter().map(|s| s.inverse_depth_sum).collect(),
        }
    }

    pub(crate) fn from_parts(
        depth: Vec<u32>,
        ancestors: Csr,
        subvertex_count: Vec<u32>,
        leaf_count: Vec<u32>,
        commonness: Vec<f64>,
        inverse_depth_sum: Vec<f64>,
    ) -> Self {
        TaxonomyStats { depth, ancestors, subvertex_count, leaf_count, commonness, inverse_depth_sum }
    }

    pub(crate) fn ancestor_csr(&self) -> &Csr {
        &self.ancestors
    }

    pub fn len(&self) -> usize {
        self.depth.len()
    }

    pub fn is_empty(&self) -> bool {
        self.depth.is_empty()
    }

    /// Vertex count on the shortest path from the root; the root has depth 1.
    pub fn depth(&self, v: u32) -> u32 {
        self.depth[v as usize]
    }

    /// Ancestors including the vertex itself, sorted by dense index.
    pub fn ancestors(&self, v: u32) -> &[u32] {
        self.ancestors.row(v)
    }

    pub fn subsumer_count(&self, v: u32) -> u32 {
        self.ancestors.row(v).len() as u32
    }

    pub fn subvertex_count(&self, v: u32) -> u32 {
        self.subvertex_count[v as usize]
    }

    pub fn leaf_count(&self, v: u32) -> u32 {
        self.leaf_count[v as usize]
    }

    /// Σ over leaf subvertices `i` of `1 / |Subsumers(i)|`.
    pub fn commonness(&self, v: u32) -> f64 {
        self.commonness[v as usize]
    }

    /// Σ over subvertices `i` of `1 / Depth(i)`.
    pub fn inverse_depth_sum(&self, v: u32) -> f64 {
        self.inverse_depth_sum[v as usize]
    }

    pub fn max_depth(&self) -> u32 {
        self.depth.iter().copied().max().unwrap_or(0)
    }

    #[allow(clippy::type_complexity)]
    pub(crate) fn raw(&self) -> (&[u32], &[u32], &[u32], &[f64], &[f64]) {
        (&self.depth, &self.subvertex_count, &self.leaf_count, &self.commonness, &self.inverse_depth_sum)
    }

    pub(crate) fn summarize(&self, tax: &Taxonomy, sorted_set: &[u32]) -> SetSummary {
        let mut count = 0;
        let mut leaves = 0;
        let mut commonness = 0.0;
        let mut inverse_depth_sum = 0.0;
        for &i in sorted_set {
            count += 1;
            inverse_depth_sum += 1.0 / f64::from(self.depth(i));
            if tax.is_leaf(i) {
                leaves += 1;
                commonness += 1.0 / f64::from(self.subsumer_count(i));
            }
        }
        SetSummary { count, leaves, commonness, inverse_depth_sum }
    }
}

fn summarize_with(tax: &Taxonomy, depth: &[u32], subsumers: &[u32], sorted_set: &[u32]) -> SetSummary {
    let mut s = SetSummary { count: 0, leaves: 0, commonness: 0.0, inverse_depth_sum: 0.0 };
    for &i in sorted_set {
        s.count += 1;
        s.inverse_depth_sum += 1.0 / f64::from(depth[i as usize]);
        if tax.is_leaf(i) {
            s.leaves += 1;
            s.commonness += 1.0 / f64::from(subsumers[i as usize]);
        }
    }
    s
}

/// Graph functions of a word: its senses joined to the meaning subgraph.
/// Set sizes count meaning vertices only, never the word vertex itself.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WordStats {
    pub polysemy: u32,
    pub depth: u32,
    pub subsumers: u32,
    pub subvertices: u32,
    pub leaves: u32,
    pub commonness: f64,
    #[serde(skip)]
    pub inverse_depth_sum: f64,
}

impl WordStats {
    pub(crate) fn compute(tax: &Taxonomy, stats: &TaxonomyStats, senses: &[u32], scratch: &mut Scratch) -> Self {
        assert!(!senses.is_empty(), "word without senses");
        let depth = senses.iter().map(|&s| stats.depth(s)).min().unwrap_or(0);
        if let [s] = *senses {
            return WordStats {
                polysemy: 1,
                depth,
                subsumers: stats.subsumer_count(s),
                subvertices: stats.subvertex_count(s),
                leaves: stats.leaf_count(s),
                commonness: stats.commonness(s),
                inverse_depth_sum: stats.inverse_depth_sum(s),
            };
        }
        let mut anc: Vec<u32> = senses.iter().flat_map(|&s| stats.ancestors(s).iter().copied()).collect();
        anc.sort_unstable();
        anc.dedup();
        let desc = descendants(tax, senses, scratch);
        let sum = stats.summarize(tax, &desc);
        WordStats {
            polysemy: senses.len() as u32,
            depth,
            subsumers: anc.len() as u32,
            subvertices: sum.count,
            leaves: sum.leaves,
            commonness: sum.commonness,
            inverse_depth_sum: sum.inverse_depth_sum,
        }
    }
}
