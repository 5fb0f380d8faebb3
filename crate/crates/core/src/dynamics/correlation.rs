use std::fmt::Write as _;

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::measures::{IcContext, MeasureId};
use crate::{WordGraph, WordId};

/// Smallest sample a correlation study accepts.
pub const MIN_SAMPLE: usize = 100;

/// Pearson product-moment correlation; `None` if either column is constant.
pub fn pearson(x: &[f64], y: &[f64]) -> Option<f64> {
    assert_eq!(x.len(), y.len());
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        let (dx, dy) = (a - mx, b - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return None;
    }
    Some((sxy / (sxx.sqrt() * syy.sqrt())).clamp(-1.0, 1.0))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CorrelationMatrix {
    pub measures: Vec<MeasureId>,
    pub samples: usize,
    /// `None` where a column has zero variance.
    pub r: Vec<Vec<Option<f64>>>,
    /// Zero-variance columns.
    pub degenerate: Vec<MeasureId>,
}

impl CorrelationMatrix {
    pub fn from_columns(measures: Vec<MeasureId>, columns: &[Vec<f64>]) -> Self {
        let k = columns.len();
        let samples = columns.first().map_or(0, Vec::len);
        let mut r = vec![vec![None; k]; k];
        for i in 0..k {
            for j in i..k {
                let v = pearson(&columns[i], &columns[j]);
                // self-correlation is 1 by definition, not by rounding luck
                let v = if i == j { v.map(|_| 1.0) } else { v };
                r[i][j] = v;
                r[j][i] = v;
            }
        }
        let degenerate = (0..k).filter(|&i| r[i][i].is_none()).map(|i| measures[i]).collect();
        CorrelationMatrix { measures, samples, r, degenerate }
    }

    pub fn get(&self, a: MeasureId, b: MeasureId) -> Option<f64> {
        let i = self.measures.iter().position(|&m| m == a)?;
        let j = self.measures.iter().position(|&m| m == b)?;
        self.r[i][j]
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let header = std::iter::once(String::new()).chain(self.measures.iter().map(|m| m.to_string()));
        w.write_record(header).map_err(|e| Error::Input(e.to_string()))?;
        for (m, row) in self.measures.iter().zip(&self.r) {
            let cells = std::iter::once(m.to_string())
                .chain(row.iter().map(|v| v.map_or_else(|| "NA".to_string(), |v| v.to_string())));
            w.write_record(cells).map_err(|e| Error::Input(e.to_string()))?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Input(e.to_string()))?;
        Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
    }

    /// Average-linkage clustering on the distance `1 − r`. Degenerate
    /// columns are treated as uncorrelated with everything.
    pub fn cluster(&self) -> Dendrogram {
        let k = self.measures.len();
        let leaf = |i: usize| DendroNode::Leaf { measure: self.measures[i] };
        if k < 2 {
            return Dendrogram { root: (k == 1).then(|| leaf(0)) };
        }
        let mut condensed = Vec::with_capacity(k * (k - 1) / 2);
        for i in 0..k {
            for j in i + 1..k {
                condensed.push(1.0 - self.r[i][j].unwrap_or(0.0));
            }
        }
        let steps = kodama::linkage(&mut condensed, k, kodama::Method::Average);
        let mut nodes: Vec<Option<DendroNode>> = (0..k).map(|i| Some(leaf(i))).collect();
        for s in steps.steps() {
            let a = nodes[s.cluster1].take().expect("each cluster merges once");
            let b = nodes[s.cluster2].take().expect("each cluster merges once");
            nodes.push(Some(DendroNode::Merge { distance: s.dissimilarity, size: s.size, children: vec![a, b] }));
        }
        Dendrogram { root: nodes.pop().flatten() }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(untagged)]
pub enum DendroNode {
    Leaf { measure: MeasureId },
    Merge { distance: f64, size: usize, children: Vec<DendroNode> },
}

impl DendroNode {
    pub fn leaves(&self) -> Vec<MeasureId> {
        match self {
            DendroNode::Leaf { measure } => vec![*measure],
            DendroNode::Merge { children, .. } => children.iter().flat_map(DendroNode::leaves).collect(),
        }
    }

    fn render(&self, depth: usize, out: &mut String) {
        let pad = "  ".repeat(depth);
        match self {
            DendroNode::Leaf { measure } => {
                let _ = writeln!(out, "{pad}- {measure}");
            }
            DendroNode::Merge { distance, size, children } => {
                let _ = writeln!(out, "{pad}+ {distance:.4} ({size})");
                for c in children {
                    c.render(depth + 1, out);
                }
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Dendrogram {
    pub root: Option<DendroNode>,
}

impl Dendrogram {
    /// Leaf sets of the two clusters joined last.
    pub fn top_split(&self) -> Option<(Vec<MeasureId>, Vec<MeasureId>)> {
        match &self.root {
            Some(DendroNode::Merge { children, .. }) => Some((children[0].leaves(), children[1].leaves())),
            _ => None,
        }
    }

    /// Indented tree: `+ distance (size)` for merges, `- measure` for leaves.
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        if let Some(r) = &self.root {
            r.render(0, &mut out);
        }
        out
    }
}

/// `n` distinct lexicon words drawn uniformly with a seeded generator.
pub fn sample_words(graph: &WordGraph, n: usize, seed: u64) -> Result<Vec<WordId>> {
    let len = graph.lexicon().len();
    if n > len {
        return Err(Error::Input(format!("sample of {n} exceeds the {len} lexicon words")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(index::sample(&mut rng, len, n).into_iter().map(|i| WordId(i as u32)).collect())
}

/// `n` pairs of distinct words, each drawn uniformly with replacement
/// across pairs.
pub fn sample_pairs(graph: &WordGraph, n: usize, seed: u64) -> Vec<(WordId, WordId)> {
    let len = graph.lexicon().len() as u32;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| loop {
            let (a, b) = (rng.random_range(0..len), rng.random_range(0..len));
            if a != b {
                break (WordId(a), WordId(b));
            }
        })
        .collect()
}

/// Single-word measure values over a word sample, one column per measure.
pub fn word_measure_columns(
    graph: &WordGraph,
    words: &[WordId],
    measures: &[MeasureId],
    ctx: &IcContext,
) -> Result<Vec<Vec<f64>>> {
    measures
        .par_iter()
        .map(|&m| words.iter().map(|&w| graph.word_measure(w, m, ctx)).collect())
        .collect()
}

/// Similarity values over a pair sample, one column per measure.
pub fn pair_measure_columns(
    graph: &WordGraph,
    pairs: &[(WordId, WordId)],
    measures: &[MeasureId],
    ctx: &IcContext,
) -> Result<Vec<Vec<f64>>> {
    let rows: Vec<Vec<f64>> = pairs
        .par_iter()
        .map(|&(a, b)| measures.iter().map(|&m| graph.similarity(a, b, m, ctx)).collect::<Result<Vec<_>>>())
        .collect::<Result<_>>()?;
    Ok((0..measures.len()).map(|j| rows.iter().map(|r| r[j]).collect()).collect())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CorrelationStudy {
    pub seed: u64,
    pub matrix: CorrelationMatrix,
    pub dendrogram: Dendrogram,
}

/// Correlates single-word measures over `n` sampled words, or similarity
/// measures over `n` sampled pairs. Mixing the two kinds is an error.
pub fn measure_correlation(
    graph: &WordGraph,
    measures: &[MeasureId],
    n: usize,
    seed: u64,
    ctx: &IcContext,
) -> Result<CorrelationStudy> {
    if n < MIN_SAMPLE {
        return Err(Error::Input(format!("correlation sample must be at least {MIN_SAMPLE}, got {n}")));
    }
    let sims = measures.iter().filter(|m| m.is_similarity()).count();
    let columns = if sims == measures.len() {
        pair_measure_columns(graph, &sample_pairs(graph, n, seed), measures, ctx)?
    } else if sims == 0 {
        word_measure_columns(graph, &sample_words(graph, n, seed)?, measures, ctx)?
    } else {
        return Err(Error::Input("correlate single-word and similarity measures separately".into()));
    };
    let matrix = CorrelationMatrix::from_columns(measures.to_vec(), &columns);
    let dendrogram = matrix.cluster();
    Ok(CorrelationStudy { seed, matrix, dendrogram })
}
