use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::measures::{ic_similarity, path_similarity, IcContext, IcFormula, MeasureId};
use crate::{WordGraph, WordId};

/// A reported value column: a measure, or the log2 view of polysemy.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Column {
    Measure(MeasureId),
    PolysemyLog2,
}

impl Column {
    /// Columns for a measure list; polysemy is followed by its log2 column.
    pub fn for_measures(measures: &[MeasureId]) -> Vec<Column> {
        let mut out = Vec::with_capacity(measures.len() + 1);
        for &m in measures {
            out.push(Column::Measure(m));
            if m == MeasureId::Polysemy {
                out.push(Column::PolysemyLog2);
            }
        }
        out
    }
}

impl fmt::Display for Column {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Column::Measure(m) => m.fmt(f),
            Column::PolysemyLog2 => f.write_str("polysemy-log2"),
        }
    }
}

impl Serialize for Column {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// How nouns repeated within a time point count towards its averages.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Weighting {
    /// Each distinct noun (network vertex) once.
    #[default]
    Unique,
    /// Weighted by occurrence counts; for sensitivity analysis.
    Tokens,
}

impl std::str::FromStr for Weighting {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "unique" => Ok(Weighting::Unique),
            "tokens" => Ok(Weighting::Tokens),
            other => Err(Error::Input(format!("unknown weighting `{other}` (unique or tokens)"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SeriesPoint {
    pub t: usize,
    pub unique_nouns: Vec<String>,
    pub noun_tokens: usize,
    pub words: usize,
    /// One value per column of the owning series.
    pub values: Vec<f64>,
}

/// Per-time-point averages for one group.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SegmentSeries {
    pub group: String,
    pub columns: Vec<Column>,
    pub points: Vec<SeriesPoint>,
}

impl SegmentSeries {
    pub fn column(&self, c: Column) -> Option<Vec<f64>> {
        let i = self.columns.iter().position(|&x| x == c)?;
        Some(self.points.iter().map(|p| p.values[i]).collect())
    }
}

/// Averages of every column over one bag of nouns.
///
/// Similarities average over unordered pairs of distinct nouns in canonical
/// (lexicographic) order and the sum runs serially, so with unique weighting
/// each value equals [`WordGraph::average_pairwise_similarity`] bit for bit.
pub fn segment_values(
    graph: &WordGraph,
    nouns: &[WordId],
    columns: &[Column],
    ctx: &IcContext,
    weighting: Weighting,
) -> Result<Vec<f64>> {
    let mut counts: BTreeMap<&str, (WordId, usize)> = BTreeMap::new();
    for &w in nouns {
        counts.entry(graph.word(w)).or_insert((w, 0)).1 += 1;
    }
    let set: Vec<(WordId, f64)> = counts
        .values()
        .map(|&(w, c)| (w, if weighting == Weighting::Tokens { c as f64 } else { 1.0 }))
        .collect();
    let n = set.len();
    let needs_pairs = columns.iter().any(|c| matches!(c, Column::Measure(m) if m.is_similarity()));
    if n == 0 || (needs_pairs && n < 2) {
        return Err(Error::TooFewNouns { needed: if needs_pairs { 2 } else { 1 }, got: n });
    }

    // IC of every noun under each formula that some column uses
    let ics: Vec<IcFormula> = {
        let mut v: Vec<IcFormula> = columns
            .iter()
            .filter_map(|c| match c {
                Column::Measure(m) => m.ic_formula(),
                Column::PolysemyLog2 => None,
            })
            .collect();
        v.sort();
        v.dedup();
        v
    };
    let ic_of = |w: WordId| -> Vec<f64> { ics.iter().map(|&f| graph.word_ic(w, f, ctx)).collect() };
    let word_ic: Vec<Vec<f64>> = set.iter().map(|&(w, _)| ic_of(w)).collect();
    let ic_index = |f: IcFormula| ics.binary_search(&f).expect("formula collected above");

    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let pair_values: Vec<Vec<f64>> = if needs_pairs {
        pairs
            .par_iter()
            .map(|&(i, j)| -> Result<Vec<f64>> {
                let p = graph.pair(set[i].0, set[j].0)?;
                let d = f64::from(p.distance);
                let lcs_ic: Vec<f64> = ics.iter().map(|&f| graph.synset_ic(p.lcs, f, ctx)).collect();
                Ok(columns
                    .iter()
                    .filter_map(|c| match *c {
                        Column::Measure(MeasureId::Path(f)) => Some(path_similarity(f, d, f64::from(p.lcs_depth), ctx)),
                        Column::Measure(MeasureId::IcSim(f, ic)) => {
                            let k = ic_index(ic);
                            Some(ic_similarity(f, word_ic[i][k], word_ic[j][k], lcs_ic[k], d, ctx).0)
                        }
                        _ => None,
                    })
                    .collect())
            })
            .collect::<Result<_>>()?
    } else {
        Vec::new()
    };

    let weight_sum: f64 = set.iter().map(|s| s.1).sum();
    let mut out = Vec::with_capacity(columns.len());
    let mut sim_col = 0;
    for &c in columns {
        let v = match c {
            Column::Measure(m) if m.is_similarity() => {
                let k = sim_col;
                sim_col += 1;
                match weighting {
                    Weighting::Unique => pair_values.iter().map(|v| v[k]).sum::<f64>() / pairs.len() as f64,
                    Weighting::Tokens => {
                        let (mut num, mut den) = (0.0, 0.0);
                        for (&(i, j), v) in pairs.iter().zip(&pair_values) {
                            let w = set[i].1 * set[j].1;
                            num += w * v[k];
                            den += w;
                        }
                        num / den
                    }
                }
            }
            Column::Measure(m) => {
                let vals = set.iter().map(|&(w, _)| graph.word_measure(w, m, ctx)).collect::<Result<Vec<_>>>()?;
                weighted_mean(&vals, &set, weighting, weight_sum)
            }
            Column::PolysemyLog2 => {
                let vals: Vec<f64> = set.iter().map(|&(w, _)| f64::from(graph.polysemy(w)).log2()).collect();
                weighted_mean(&vals, &set, weighting, weight_sum)
            }
        };
        out.push(v);
    }
    Ok(out)
}

fn weighted_mean(vals: &[f64], set: &[(WordId, f64)], weighting: Weighting, weight_sum: f64) -> f64 {
    match weighting {
        Weighting::Unique => vals.iter().sum::<f64>() / vals.len() as f64,
        Weighting::Tokens => vals.iter().zip(set).map(|(v, s)| v * s.1).sum::<f64>() / weight_sum,
    }
}

/// Builds the series for one group from its time points' noun lists.
pub fn series(
    graph: &WordGraph,
    group: &str,
    segments: &[(Vec<WordId>, usize)],
    measures: &[MeasureId],
    ctx: &IcContext,
    weighting: Weighting,
) -> Result<SegmentSeries> {
    let columns = Column::for_measures(measures);
    let points = segments
        .iter()
        .enumerate()
        .map(|(i, (nouns, words))| {
            let values = segment_values(graph, nouns, &columns, ctx, weighting)?;
            let unique: Vec<String> = graph.canonical_set(nouns).iter().map(|&w| graph.word(w).to_string()).collect();
            Ok(SeriesPoint { t: i + 1, unique_nouns: unique, noun_tokens: nouns.len(), words: *words, values })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SegmentSeries { group: group.to_string(), columns, points })
}
