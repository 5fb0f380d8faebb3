use rayon::prelude::*;
use serde::Serialize;

use super::{ic_value, IcContext, IcFormula, IcInputs, IcSimFormula, MeasureId, PathFormula};
use crate::error::{Error, Result};
use crate::graph::WordGraph;
use crate::wordnet::{SynsetId, WordId};

pub fn path_similarity(f: PathFormula, distance: f64, lcs_depth: f64, ctx: &IcContext) -> f64 {
    let md = ctx.max_depth;
    let log = |v: f64| ctx.log(v);
    match f {
        PathFormula::AlMubaidNguyen => {
            1.0 - log(1.0 + distance * (md - lcs_depth)) / log(1.0 + 2.0 * (md - 1.0).powi(2))
        }
        PathFormula::LeacockChodorow => 1.0 - log(distance + 1.0) / log(2.0 * md - 1.0),
        PathFormula::Li => {
            let e = (1.2 * lcs_depth).exp();
            (-0.2 * distance).exp() * (e - 1.0) / (e + 1.0)
        }
        PathFormula::Rada => 1.0 - distance / (2.0 * (md - 1.0)),
        PathFormula::WuPalmer => {
            let num = 2.0 * (lcs_depth - 1.0);
            if num + distance == 0.0 {
                1.0
            } else {
                num / (num + distance)
            }
        }
    }
}

/// Returns the similarity and whether the `IC(x) + IC(y)` denominator
/// vanished (the value is then 0).
pub fn ic_similarity(f: IcSimFormula, ic_x: f64, ic_y: f64, ic_lcs: f64, distance: f64, ctx: &IcContext) -> (f64, bool) {
    let lin = || {
        let denom = ic_x + ic_y;
        if denom == 0.0 {
            None
        } else {
            Some(2.0 * ic_lcs / denom)
        }
    };
    match f {
        IcSimFormula::JiangConrath => (1.0 - (ic_x + ic_y - 2.0 * ic_lcs) / 2.0, false),
        IcSimFormula::Lin => lin().map_or((0.0, true), |v| (v, false)),
        IcSimFormula::Meng => match lin() {
            None => (0.0, true),
            Some(ratio) => {
                let decay = (-0.08 * distance).exp();
                (ratio.powf((1.0 - decay) / decay), false)
            }
        },
        IcSimFormula::Resnik => (ic_lcs, false),
        IcSimFormula::Zhou => {
            let path = 1.0 - ctx.log(distance + 1.0) / ctx.log(2.0 * ctx.max_depth - 1.0);
            (1.0 - 0.5 * path - 0.25 * (ic_x + ic_y - 2.0 * ic_lcs), false)
        }
    }
}

/// A similarity value together with the quantities it was computed from.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SimilarityDetail {
    pub measure: MeasureId,
    pub x: String,
    pub y: String,
    pub value: f64,
    pub distance: u32,
    pub lcs: SynsetId,
    pub lcs_depth: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ic_x: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ic_y: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ic_lcs: Option<f64>,
    /// `IC(x) + IC(y) = 0`; the value was set to 0.
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    pub zero_denominator: bool,
}

impl WordGraph {
    pub fn ic_context(&self) -> IcContext {
        IcContext::new(self.constants())
    }

    pub fn word_ic(&self, w: WordId, f: IcFormula, ctx: &IcContext) -> f64 {
        ic_value(&IcInputs::of_word(&self.word_stats(w)), f, ctx)
    }

    /// IC of a meaning vertex given by dense index.
    pub fn synset_ic(&self, v: u32, f: IcFormula, ctx: &IcContext) -> f64 {
        ic_value(&IcInputs::of_synset(self.stats(), v), f, ctx)
    }

    pub fn abstraction_level(&self, w: WordId, ctx: &IcContext) -> f64 {
        let depth = f64::from(self.word_stats(w).depth);
        1.0 - (depth - 1.0) / (ctx.max_depth - 1.0)
    }

    pub fn polysemy(&self, w: WordId) -> u32 {
        self.senses(w).len() as u32
    }

    /// Value of a single-word measure.
    pub fn word_measure(&self, w: WordId, m: MeasureId, ctx: &IcContext) -> Result<f64> {
        match m {
            MeasureId::Abstraction => Ok(self.abstraction_level(w, ctx)),
            MeasureId::Polysemy => Ok(f64::from(self.polysemy(w))),
            MeasureId::Ic(f) => Ok(self.word_ic(w, f, ctx)),
            other => Err(Error::Input(format!("{other} takes two words"))),
        }
    }

    pub fn similarity_detail(&self, x: WordId, y: WordId, m: MeasureId, ctx: &IcContext) -> Result<SimilarityDetail> {
        let pair = self.pair(x, y)?;
        let distance = f64::from(pair.distance);
        let mut detail = SimilarityDetail {
            measure: m,
            x: self.word(x).to_string(),
            y: self.word(y).to_string(),
            value: 0.0,
            distance: pair.distance,
            lcs: pair.lcs_id,
            lcs_depth: pair.lcs_depth,
            ic_x: None,
            ic_y: None,
            ic_lcs: None,
            zero_denominator: false,
        };
        match m {
            MeasureId::Path(f) => detail.value = path_similarity(f, distance, f64::from(pair.lcs_depth), ctx),
            MeasureId::IcSim(f, ic) => {
                let (ix, iy, il) = (self.word_ic(x, ic, ctx), self.word_ic(y, ic, ctx), self.synset_ic(pair.lcs, ic, ctx));
                let (value, degenerate) = ic_similarity(f, ix, iy, il, distance, ctx);
                detail.value = value;
                detail.zero_denominator = degenerate;
                detail.ic_x = Some(ix);
                detail.ic_y = Some(iy);
                detail.ic_lcs = Some(il);
            }
            other => return Err(Error::Input(format!("{other} is not a similarity measure"))),
        }
        Ok(detail)
    }

    pub fn similarity(&self, x: WordId, y: WordId, m: MeasureId, ctx: &IcContext) -> Result<f64> {
        self.similarity_detail(x, y, m, ctx).map(|d| d.value)
    }

    /// Distinct words in lexicographic order, the canonical pair order for
    /// averaging.
    pub fn canonical_set(&self, words: &[WordId]) -> Vec<WordId> {
        let mut set = words.to_vec();
        set.sort_by(|a, b| self.word(*a).cmp(self.word(*b)));
        set.dedup();
        set
    }

    /// Similarities of all unordered pairs of distinct words, in the
    /// canonical order `(w0,w1), (w0,w2), …, (w1,w2), …`.
    pub fn pairwise_similarities(&self, words: &[WordId], m: MeasureId, ctx: &IcContext) -> Result<Vec<f64>> {
        let set = self.canonical_set(words);
        let pairs: Vec<(WordId, WordId)> = set
            .iter()
            .enumerate()
            .flat_map(|(i, &a)| set[i + 1..].iter().map(move |&b| (a, b)))
            .collect();
        pairs.par_iter().map(|&(a, b)| self.similarity(a, b, m, ctx)).collect()
    }

    /// Mean similarity over the `(n² − n)/2` unordered pairs of distinct
    /// words. Summation runs serially in canonical order, so the result does
    /// not depend on the thread count.
    pub fn average_pairwise_similarity(&self, words: &[WordId], m: MeasureId, ctx: &IcContext) -> Result<f64> {
        if !m.is_similarity() {
            return Err(Error::Input(format!("{m} is not a similarity measure")));
        }
        let n = self.canonical_set(words).len();
        if n < 2 {
            return Err(Error::TooFewNouns { needed: 2, got: n });
        }
        let values = self.pairwise_similarities(words, m, ctx)?;
        Ok(values.iter().sum::<f64>() / values.len() as f64)
    }

    /// Mean of a single-word measure over distinct words.
    pub fn average_word_measure(&self, words: &[WordId], m: MeasureId, ctx: &IcContext) -> Result<f64> {
        let set = self.canonical_set(words);
        if set.is_empty() {
            return Err(Error::TooFewNouns { needed: 1, got: 0 });
        }
        let values = set.iter().map(|&w| self.word_measure(w, m, ctx)).collect::<Result<Vec<_>>>()?;
        Ok(values.iter().sum::<f64>() / values.len() as f64)
    }
}
