//! Run configuration, report envelopes and the end-to-end conversation
//! analysis shared by the command line and the HTTP service.

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dynamics::{
    compare_groups, CompareConfig, Comparison, Conversation, CorrelationStudy, GroupingFile, Labels, Scheme,
    Weighting, DEFAULT_EPSILON, MIN_CONVERSATION_NOUNS,
};
use crate::error::{Error, Result};
use crate::measures::{MeasureId, SimilarityDetail};
use crate::taxonomy::WordStats;
use crate::text::{clean_source, extract_nouns, extract_pretagged, ExtractOptions, ExtractionMode, Morphology};
use crate::wordnet::DbConstants;
use crate::{SynsetId, WordGraph, WordId};

pub const TOOLKIT: &str = "wordgraph";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Text,
    Json,
    Csv,
}

impl FromStr for Format {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "text" => Ok(Format::Text),
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            other => Err(Error::Input(format!("unknown output format `{other}`"))),
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Text => "text",
            Format::Json => "json",
            Format::Csv => "csv",
        })
    }
}

/// Everything that determines a run's output. Recorded verbatim in every
/// report.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub db: Option<PathBuf>,
    pub cache: Option<PathBuf>,
    pub measures: Vec<MeasureId>,
    pub t: usize,
    pub mode: ExtractionMode,
    pub collocations: bool,
    pub strict: bool,
    pub format: Format,
    pub seed: u64,
    pub scheme: Scheme,
    pub weighting: Weighting,
    pub epsilon: f64,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            db: None,
            cache: None,
            measures: MeasureId::all(),
            t: 3,
            mode: ExtractionMode::Dictionary,
            collocations: false,
            strict: false,
            format: Format::Text,
            seed: 0,
            scheme: Scheme::Conversation,
            weighting: Weighting::Unique,
            epsilon: DEFAULT_EPSILON,
        }
    }
}

impl RunConfig {
    pub fn compare_config(&self) -> CompareConfig {
        CompareConfig { t: self.t, measures: self.measures.clone(), weighting: self.weighting, epsilon: self.epsilon }
    }

    pub fn extract_options(&self) -> ExtractOptions {
        ExtractOptions { collocations: self.collocations, ..ExtractOptions::default() }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReportHeader {
    pub toolkit: &'static str,
    pub version: &'static str,
    pub config: RunConfig,
    pub constants: DbConstants,
}

impl ReportHeader {
    pub fn new(graph: &WordGraph, config: &RunConfig) -> Self {
        ReportHeader { toolkit: TOOLKIT, version: VERSION, config: config.clone(), constants: graph.constants().clone() }
    }
}

/// A transcript (or pretagged file, depending on the mode) to analyse.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Document {
    pub id: String,
    pub text: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConversationSummary {
    pub id: String,
    pub subject: String,
    pub extraction_mode: ExtractionMode,
    pub word_count: usize,
    pub noun_tokens: usize,
    pub noun_ratio: f64,
    pub dropped: usize,
    pub stopped: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Failure {
    pub id: String,
    pub code: &'static str,
    pub reason: String,
}

impl Failure {
    fn new(id: &str, e: &Error) -> Self {
        Failure { id: id.to_string(), code: e.code(), reason: e.to_string() }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AnalysisReport {
    #[serde(flatten)]
    pub header: ReportHeader,
    pub conversations: Vec<ConversationSummary>,
    pub failures: Vec<Failure>,
    pub comparison: Comparison,
}

impl AnalysisReport {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)? + "\n")
    }

    pub fn to_csv(&self) -> Result<String> {
        self.comparison.to_csv()
    }

    /// True when no conversation made it through extraction.
    pub fn all_failed(&self) -> bool {
        self.conversations.is_empty()
    }

    /// Per-group slope table with verdicts.
    pub fn render_summary(&self) -> String {
        let mut out = format!("scheme {}  T={}\n", self.comparison.scheme, self.comparison.t);
        for s in &self.comparison.summaries {
            out.push_str(&format!(
                "{:<32} {:<28} k={:+.6} {} (n={})\n",
                s.group,
                s.column.to_string(),
                s.mean_slope,
                s.classification.as_str(),
                s.subjects
            ));
        }
        for f in &self.failures {
            out.push_str(&format!("failed  {}: {}\n", f.id, f.reason));
        }
        for s in &self.comparison.skipped {
            out.push_str(&format!("skipped {} / {}: {}\n", s.subject, s.group, s.reason));
        }
        out
    }
}

/// Cleans or parses one document, extracts its nouns and attaches grouping
/// labels. Conversations under the noun minimum are rejected.
pub fn prepare(
    graph: &WordGraph,
    doc: &Document,
    grouping: Option<&GroupingFile>,
    cfg: &RunConfig,
) -> Result<Conversation> {
    let morph = Morphology::new(graph.lexicon(), graph.exceptions());
    let (sequence, speakers) = match cfg.mode {
        ExtractionMode::Dictionary => {
            let t = clean_source(&doc.id, &doc.text);
            let speakers: Vec<Option<String>> = t.utterances.iter().map(|u| u.speaker.clone()).collect();
            (extract_nouns(&t, &morph, &cfg.extract_options()), speakers)
        }
        ExtractionMode::Pretagged => {
            let seq = extract_pretagged(&doc.id, &doc.text, &morph)?;
            let n = seq.sentences.len();
            (seq, vec![None; n])
        }
    };
    if sequence.nouns.len() < MIN_CONVERSATION_NOUNS {
        return Err(Error::TooFewNouns { needed: MIN_CONVERSATION_NOUNS, got: sequence.nouns.len() });
    }
    let (subject, session, labels) = match grouping {
        None => (doc.id.clone(), None, Labels::default()),
        Some(g) => {
            let tags = g.get(&doc.id).ok_or_else(|| Error::Input(format!("{}: no entry in grouping file", doc.id)))?;
            (tags.subject.clone(), tags.session.clone(), tags.resolve(&speakers)?)
        }
    };
    let conv = Conversation { id: doc.id.clone(), subject, session, sequence, labels };
    conv.check_scheme(cfg.scheme)?;
    Ok(conv)
}

/// Runs clean → extract → segment → series → trend → compare over a batch.
/// Conversations that fail are reported and left out; the error is fatal
/// only for problems with the run itself (bad scheme, bad T).
pub fn analyze(
    graph: &WordGraph,
    docs: &[Document],
    grouping: Option<&GroupingFile>,
    cfg: &RunConfig,
) -> Result<AnalysisReport> {
    if cfg.scheme != Scheme::Conversation && grouping.is_none() {
        return Err(Error::Input(format!("scheme `{}` needs a grouping file", cfg.scheme)));
    }
    let prepared: Vec<(String, Result<Conversation>)> =
        docs.par_iter().map(|d| (d.id.clone(), prepare(graph, d, grouping, cfg))).collect();
    let mut conversations = Vec::new();
    let mut failures = Vec::new();
    for (id, r) in prepared {
        match r {
            Ok(c) => conversations.push(c),
            Err(e) => failures.push(Failure::new(&id, &e)),
        }
    }
    conversations.sort_by(|a, b| a.id.cmp(&b.id));
    failures.sort_by(|a, b| a.id.cmp(&b.id));
    let comparison = compare_groups(graph, &conversations, cfg.scheme, &cfg.compare_config(), &graph.ic_context())?;
    let summaries = conversations
        .iter()
        .map(|c| ConversationSummary {
            id: c.id.clone(),
            subject: c.subject.clone(),
            extraction_mode: c.sequence.mode,
            word_count: c.sequence.word_count,
            noun_tokens: c.sequence.nouns.len(),
            noun_ratio: c.sequence.noun_ratio(),
            dropped: c.sequence.dropped.len(),
            stopped: c.sequence.stopped,
        })
        .collect();
    Ok(AnalysisReport { header: ReportHeader::new(graph, cfg), conversations: summaries, failures, comparison })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CorrelationReport {
    #[serde(flatten)]
    pub header: ReportHeader,
    pub sample: usize,
    #[serde(flatten)]
    pub study: CorrelationStudy,
}

/// Resolves words, failing with every unresolvable one listed.
pub fn resolve_words(graph: &WordGraph, words: &[&str]) -> Result<Vec<WordId>> {
    crate::ideation::resolve_all(graph, &words.iter().map(|w| w.to_string()).collect::<Vec<_>>())
}

/// Up to five nearest lexicon entries for each word.
pub fn nearest_entries(graph: &WordGraph, words: &[String]) -> BTreeMap<String, Vec<String>> {
    words
        .iter()
        .map(|w| (w.clone(), graph.lexicon().nearest(w, 5).into_iter().map(String::from).collect()))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SimilarityReport {
    pub x: String,
    pub y: String,
    pub results: Vec<SimilarityDetail>,
}

impl SimilarityReport {
    pub fn render_text(&self) -> String {
        let mut out = format!("{} / {}\n", self.x, self.y);
        out.push_str(&format!("{:<22} {:>10} {:>5} {:>9} {:>6} {:>9} {:>9} {:>9}\n", "measure", "value", "dist", "lcs", "depth", "ic_x", "ic_y", "ic_lcs"));
        let opt = |v: Option<f64>| v.map_or_else(|| "-".to_string(), |v| format!("{v:.6}"));
        for r in &self.results {
            out.push_str(&format!(
                "{:<22} {:>10.6} {:>5} {:>9} {:>6} {:>9} {:>9} {:>9}\n",
                r.measure.to_string(),
                r.value,
                r.distance,
                r.lcs.to_string(),
                r.lcs_depth,
                opt(r.ic_x),
                opt(r.ic_y),
                opt(r.ic_lcs)
            ));
        }
        out
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let csv_err = |e: csv::Error| Error::Input(e.to_string());
        w.write_record(["x", "y", "measure", "value", "distance", "lcs", "lcs_depth", "ic_x", "ic_y", "ic_lcs"]).map_err(csv_err)?;
        let opt = |v: Option<f64>| v.map(|v| v.to_string()).unwrap_or_default();
        for r in &self.results {
            w.write_record([
                r.x.clone(),
                r.y.clone(),
                r.measure.to_string(),
                r.value.to_string(),
                r.distance.to_string(),
                r.lcs.to_string(),
                r.lcs_depth.to_string(),
                opt(r.ic_x),
                opt(r.ic_y),
                opt(r.ic_lcs),
            ])
            .map_err(csv_err)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Input(e.to_string()))?;
        Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
    }
}

/// Similarity of two words under each measure, with the intermediate
/// quantities. An empty measure list means all 40 similarities.
pub fn similarity_report(graph: &WordGraph, x: &str, y: &str, measures: &[MeasureId]) -> Result<SimilarityReport> {
    let ids = resolve_words(graph, &[x, y])?;
    let measures = if measures.is_empty() { MeasureId::similarities() } else { measures.to_vec() };
    if let Some(m) = measures.iter().find(|m| !m.is_similarity()) {
        return Err(Error::Input(format!("{m} is not a similarity measure")));
    }
    let ctx = graph.ic_context();
    let results =
        measures.iter().map(|&m| graph.similarity_detail(ids[0], ids[1], m, &ctx)).collect::<Result<Vec<_>>>()?;
    Ok(SimilarityReport { x: graph.word(ids[0]).to_string(), y: graph.word(ids[1]).to_string(), results })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MeasureValue {
    pub measure: MeasureId,
    pub value: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WordReport {
    pub word: String,
    pub senses: Vec<SynsetId>,
    pub stats: WordStats,
    pub values: Vec<MeasureValue>,
}

impl WordReport {
    pub fn render_text(&self) -> String {
        let s = &self.stats;
        let senses: Vec<String> = self.senses.iter().map(|s| s.to_string()).collect();
        let mut out = format!(
            "{}\n  senses       {}\n  polysemy     {}\n  depth        {}\n  subsumers    {}\n  subvertices  {}\n  leaves       {}\n  commonness   {}\n",
            self.word,
            senses.join(" "),
            s.polysemy,
            s.depth,
            s.subsumers,
            s.subvertices,
            s.leaves,
            s.commonness
        );
        for v in &self.values {
            out.push_str(&format!("  {:<20} {:.6}\n", v.measure.to_string(), v.value));
        }
        out
    }
}

/// Graph functions of a word plus the requested single-word measures.
pub fn word_report(graph: &WordGraph, word: &str, measures: &[MeasureId]) -> Result<WordReport> {
    let w = resolve_words(graph, &[word])?[0];
    if let Some(m) = measures.iter().find(|m| m.is_similarity()) {
        return Err(Error::Input(format!("{m} takes two words")));
    }
    let ctx = graph.ic_context();
    let values = measures
        .iter()
        .map(|&m| Ok(MeasureValue { measure: m, value: graph.word_measure(w, m, &ctx)? }))
        .collect::<Result<Vec<_>>>()?;
    Ok(WordReport {
        word: graph.word(w).to_string(),
        senses: graph.senses(w).iter().map(|&s| graph.taxonomy().id(s)).collect(),
        stats: (*graph.word_stats(w)).clone(),
        values,
    })
}
