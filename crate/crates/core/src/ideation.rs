//! Divergence-ranked suggestions: each candidate noun is scored by the
//! average pairwise similarity of the base set with the candidate added,
//! and the most divergent (lowest average) comes first.

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measures::{IcContext, IcFormula, IcSimFormula, MeasureId};
use crate::{WordGraph, WordId};

/// Lin similarity with Sánchez–Batet IC.
pub const DEFAULT_MEASURE: MeasureId = MeasureId::IcSim(IcSimFormula::Lin, IcFormula::SanchezBatet);

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Proposal {
    pub candidate: String,
    /// Average similarity of the base set with the candidate added.
    pub average: f64,
    /// Change from the base average.
    pub delta: f64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RejectedCandidate {
    pub candidate: String,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Suggestions {
    pub measure: MeasureId,
    pub base: Vec<String>,
    pub base_average: f64,
    pub proposals: Vec<Proposal>,
    pub rejected: Vec<RejectedCandidate>,
}

/// Resolves every word or fails listing all that cannot be resolved.
pub fn resolve_all(graph: &WordGraph, words: &[String]) -> Result<Vec<WordId>> {
    let mut ids = Vec::with_capacity(words.len());
    let mut missing = Vec::new();
    for w in words {
        match graph.resolve(w) {
            Ok(id) => ids.push(id),
            Err(_) => missing.push(w.clone()),
        }
    }
    if missing.is_empty() {
        Ok(ids)
    } else {
        Err(Error::UnresolvedWords(missing))
    }
}

fn check_base(graph: &WordGraph, base: &[WordId], measure: MeasureId) -> Result<()> {
    if !measure.is_similarity() {
        return Err(Error::Input(format!("{measure} is not a similarity measure")));
    }
    let n = graph.canonical_set(base).len();
    if n < 2 {
        return Err(Error::TooFewNouns { needed: 2, got: n });
    }
    Ok(())
}

/// Screens candidates: unknown words, base members and repeats are set
/// aside with a reason; the rest come back resolved, in input order.
fn screen(graph: &WordGraph, base: &[WordId], candidates: &[String]) -> (Vec<WordId>, Vec<RejectedCandidate>) {
    let mut seen: BTreeSet<WordId> = base.iter().copied().collect();
    let mut kept = Vec::new();
    let mut rejected = Vec::new();
    for c in candidates {
        let reason = match graph.resolve(c) {
            Err(_) => {
                let near = graph.lexicon().nearest(c, 3);
                if near.is_empty() {
                    "unknown word".to_string()
                } else {
                    format!("unknown word; nearest: {}", near.join(", "))
                }
            }
            Ok(id) if base.contains(&id) => "already in the base set".to_string(),
            Ok(id) if !seen.insert(id) => "duplicate candidate".to_string(),
            Ok(id) => {
                kept.push(id);
                continue;
            }
        };
        rejected.push(RejectedCandidate { candidate: c.clone(), reason });
    }
    (kept, rejected)
}

/// Candidates ranked ascending by projected average, ties by name.
fn rank(graph: &WordGraph, base: &[WordId], candidates: &[WordId], measure: MeasureId, ctx: &IcContext) -> Result<(f64, Vec<Proposal>)> {
    let base_average = graph.average_pairwise_similarity(base, measure, ctx)?;
    let mut proposals = candidates
        .par_iter()
        .map(|&c| {
            let mut set = base.to_vec();
            set.push(c);
            let average = graph.average_pairwise_similarity(&set, measure, ctx)?;
            Ok(Proposal { candidate: graph.word(c).to_string(), average, delta: average - base_average })
        })
        .collect::<Result<Vec<_>>>()?;
    proposals.sort_by(|a, b| a.average.total_cmp(&b.average).then_with(|| a.candidate.cmp(&b.candidate)));
    Ok((base_average, proposals))
}

/// Ranks candidates by how far each would lower the base set's average
/// similarity. `k` limits the number of proposals returned.
pub fn suggest(
    graph: &WordGraph,
    base: &[String],
    candidates: &[String],
    measure: MeasureId,
    k: Option<usize>,
    ctx: &IcContext,
) -> Result<Suggestions> {
    let base_ids = resolve_all(graph, base)?;
    check_base(graph, &base_ids, measure)?;
    let (kept, rejected) = screen(graph, &base_ids, candidates);
    let (base_average, mut proposals) = rank(graph, &base_ids, &kept, measure, ctx)?;
    if let Some(k) = k {
        proposals.truncate(k);
    }
    Ok(Suggestions {
        measure,
        base: base_ids.iter().map(|&w| graph.word(w).to_string()).collect(),
        base_average,
        proposals,
        rejected,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Decision {
    Accepted,
    Rejected,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HistoryEntry {
    pub candidate: String,
    pub decision: Decision,
    /// Base average after the decision.
    pub average: f64,
    pub base_size: usize,
}

/// Replayable record of one session operation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "event", rename_all = "snake_case")]
pub enum SessionEvent {
    Started { id: String, base: Vec<String>, candidates: Vec<String>, measure: MeasureId },
    Proposed { k: Option<usize> },
    Decided { candidate: String, decision: Decision },
}

/// The human-in-the-loop cycle: propose the most divergent candidates,
/// then accept (the candidate joins the base set) or reject (it is never
/// proposed again). The history is append-only.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IdeationSession {
    pub id: String,
    pub measure: MeasureId,
    pub base: Vec<String>,
    /// Undecided candidates, in submission order.
    pub pool: Vec<String>,
    /// Submitted candidates that could not enter the pool.
    pub rejected_input: Vec<RejectedCandidate>,
    pub history: Vec<HistoryEntry>,
    pub average: f64,
    /// Base average at the start and after each accepted candidate.
    pub trajectory: Vec<f64>,
    #[serde(skip)]
    proposed: BTreeSet<String>,
    #[serde(skip)]
    base_ids: Vec<WordId>,
}

impl IdeationSession {
    pub fn start(
        graph: &WordGraph,
        id: impl Into<String>,
        base: &[String],
        candidates: &[String],
        measure: MeasureId,
        ctx: &IcContext,
    ) -> Result<Self> {
        let base_ids = resolve_all(graph, base)?;
        check_base(graph, &base_ids, measure)?;
        let base_ids = graph.canonical_set(&base_ids);
        let (kept, rejected_input) = screen(graph, &base_ids, candidates);
        let average = graph.average_pairwise_similarity(&base_ids, measure, ctx)?;
        Ok(IdeationSession {
            id: id.into(),
            measure,
            base: base_ids.iter().map(|&w| graph.word(w).to_string()).collect(),
            pool: kept.iter().map(|&w| graph.word(w).to_string()).collect(),
            rejected_input,
            history: Vec::new(),
            average,
            trajectory: vec![average],
            proposed: BTreeSet::new(),
            base_ids,
        })
    }

    /// The top `k` undecided candidates (all if `None`), most divergent
    /// first. Ranking matches [`suggest`] on the current base and pool.
    pub fn propose(&mut self, graph: &WordGraph, k: Option<usize>, ctx: &IcContext) -> Result<Vec<Proposal>> {
        let pool = resolve_all(graph, &self.pool)?;
        let (_, mut proposals) = rank(graph, &self.base_ids, &pool, self.measure, ctx)?;
        if let Some(k) = k {
            proposals.truncate(k);
        }
        self.proposed.extend(proposals.iter().map(|p| p.candidate.clone()));
        Ok(proposals)
    }

    /// Records a decision on a proposed, undecided candidate.
    pub fn decide(&mut self, graph: &WordGraph, candidate: &str, decision: Decision, ctx: &IcContext) -> Result<&HistoryEntry> {
        let id = graph.resolve(candidate).map_err(|_| Error::Session(format!("`{candidate}` is not a candidate")))?;
        let name = graph.word(id).to_string();
        if self.history.iter().any(|h| h.candidate == name) {
            return Err(Error::Session(format!("`{name}` was already decided")));
        }
        let Some(pos) = self.pool.iter().position(|p| *p == name) else {
            return Err(Error::Session(format!("`{name}` is not a candidate")));
        };
        if !self.proposed.contains(&name) {
            return Err(Error::Session(format!("`{name}` has not been proposed yet")));
        }
        self.pool.remove(pos);
        if decision == Decision::Accepted {
            self.base_ids.push(id);
            self.base_ids = graph.canonical_set(&self.base_ids);
            self.base = self.base_ids.iter().map(|&w| graph.word(w).to_string()).collect();
            self.average = graph.average_pairwise_similarity(&self.base_ids, self.measure, ctx)?;
            self.trajectory.push(self.average);
        }
        self.history.push(HistoryEntry { candidate: name, decision, average: self.average, base_size: self.base.len() });
        Ok(self.history.last().expect("just pushed"))
    }

    /// Rebuilds a session from its event log.
    pub fn replay(graph: &WordGraph, events: &[SessionEvent], ctx: &IcContext) -> Result<Self> {
        let mut it = events.iter();
        let Some(SessionEvent::Started { id, base, candidates, measure }) = it.next() else {
            return Err(Error::Session("event log must begin with `started`".into()));
        };
        let mut s = IdeationSession::start(graph, id.clone(), base, candidates, *measure, ctx)?;
        for e in it {
            match e {
                SessionEvent::Started { .. } => return Err(Error::Session("duplicate `started` event".into())),
                SessionEvent::Proposed { k } => {
                    s.propose(graph, *k, ctx)?;
                }
                SessionEvent::Decided { candidate, decision } => {
                    s.decide(graph, candidate, *decision, ctx)?;
                }
            }
        }
        Ok(s)
    }
}
