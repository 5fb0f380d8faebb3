use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use regex::Regex;
use serde::{Deserialize, Serialize};

use super::segment::{segment, Segment, SentenceCounts};
use super::series::{series, Column, SegmentSeries, Weighting};
use super::trend::{fit_trend, Classification, TrendReport};
use crate::error::{Error, Result};
use crate::measures::{IcContext, MeasureId};
use crate::text::NounSequence;
use crate::{WordGraph, WordId};

/// How sentences of a conversation are assigned to comparison groups.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scheme {
    /// Whole conversation as a single group.
    Conversation,
    /// By speaker role.
    Role,
    /// Successful versus unsuccessful ideas.
    Success,
    /// Before versus after the feedback marker.
    Feedback,
    /// Before versus after the evaluation marker.
    Evaluation,
    FeedbackSuccess,
    EvaluationSuccess,
}

impl Scheme {
    pub const ALL: [Scheme; 7] = [
        Scheme::Conversation,
        Scheme::Role,
        Scheme::Success,
        Scheme::Feedback,
        Scheme::Evaluation,
        Scheme::FeedbackSuccess,
        Scheme::EvaluationSuccess,
    ];

    pub fn slug(self) -> &'static str {
        match self {
            Scheme::Conversation => "conversation",
            Scheme::Role => "role",
            Scheme::Success => "success",
            Scheme::Feedback => "feedback",
            Scheme::Evaluation => "evaluation",
            Scheme::FeedbackSuccess => "feedback-success",
            Scheme::EvaluationSuccess => "evaluation-success",
        }
    }

    /// Marker schemes split each group in two phases of `T/2` points.
    pub fn is_marker(self) -> bool {
        !matches!(self, Scheme::Conversation | Scheme::Role | Scheme::Success)
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.slug())
    }
}

impl FromStr for Scheme {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Scheme::ALL
            .into_iter()
            .find(|x| x.slug() == s)
            .ok_or_else(|| Error::Input(format!("unknown grouping scheme `{s}`")))
    }
}

/// Utterance range `[start, end)` carrying a label.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Span {
    pub label: String,
    pub start: usize,
    pub end: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdeaSpan {
    pub idea: String,
    pub successful: bool,
    pub start: usize,
    pub end: usize,
}

/// Position of a phase change: an utterance index, or the first utterance
/// whose speaker label matches a regex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Marker {
    Utterance(usize),
    Speaker { speaker: String },
}

/// Grouping tags of one conversation. Utterance indices count the lines
/// left after cleaning (in pretagged input, the sentences).
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConversationTags {
    /// Matches the transcript file stem.
    pub id: String,
    pub subject: String,
    /// Orders conversations of one subject when they are conjoined.
    #[serde(default)]
    pub session: Option<String>,
    #[serde(default)]
    pub roles: Vec<Span>,
    /// Speaker label → role, applied where `roles` gives none.
    #[serde(default)]
    pub speaker_roles: BTreeMap<String, String>,
    #[serde(default)]
    pub ideas: Vec<IdeaSpan>,
    #[serde(default)]
    pub feedback_marker: Option<Marker>,
    #[serde(default)]
    pub evaluation_marker: Option<Marker>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupingFile {
    pub conversations: Vec<ConversationTags>,
}

impl GroupingFile {
    pub fn get(&self, id: &str) -> Option<&ConversationTags> {
        self.conversations.iter().find(|c| c.id == id)
    }
}

/// Per-utterance labels after resolving spans, speakers and markers.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Labels {
    pub roles: Vec<Option<String>>,
    pub ideas: Vec<Option<(String, bool)>>,
    pub feedback: Option<usize>,
    pub evaluation: Option<usize>,
}

impl ConversationTags {
    /// Resolves the tags against the conversation's utterance speakers.
    pub fn resolve(&self, speakers: &[Option<String>]) -> Result<Labels> {
        let n = speakers.len();
        let check = |start: usize, end: usize, what: &str| {
            if start >= end || end > n {
                Err(Error::Input(format!("{}: {what} span {start}..{end} outside 0..{n}", self.id)))
            } else {
                Ok(())
            }
        };
        let mut roles: Vec<Option<String>> = speakers
            .iter()
            .map(|s| s.as_ref().and_then(|s| self.speaker_roles.get(s)).cloned())
            .collect();
        for span in &self.roles {
            check(span.start, span.end, "role")?;
            roles[span.start..span.end].fill(Some(span.label.clone()));
        }
        let mut ideas = vec![None; n];
        for span in &self.ideas {
            check(span.start, span.end, "idea")?;
            ideas[span.start..span.end].fill(Some((span.idea.clone(), span.successful)));
        }
        let marker = |m: &Option<Marker>, what: &str| -> Result<Option<usize>> {
            match m {
                None => Ok(None),
                Some(Marker::Utterance(u)) if *u <= n => Ok(Some(*u)),
                Some(Marker::Utterance(u)) => {
                    Err(Error::Input(format!("{}: {what} marker {u} beyond {n} utterances", self.id)))
                }
                Some(Marker::Speaker { speaker }) => {
                    let re = Regex::new(speaker)
                        .map_err(|e| Error::Input(format!("{}: {what} marker regex: {e}", self.id)))?;
                    speakers
                        .iter()
                        .position(|s| s.as_deref().is_some_and(|s| re.is_match(s)))
                        .map(Some)
                        .ok_or_else(|| Error::Input(format!("{}: no speaker matches {what} marker `{speaker}`", self.id)))
                }
            }
        };
        Ok(Labels {
            roles,
            ideas,
            feedback: marker(&self.feedback_marker, "feedback")?,
            evaluation: marker(&self.evaluation_marker, "evaluation")?,
        })
    }
}

/// A conversation ready for comparison.
#[derive(Clone, Debug)]
pub struct Conversation {
    pub id: String,
    pub subject: String,
    pub session: Option<String>,
    pub sequence: NounSequence,
    pub labels: Labels,
}

impl Conversation {
    /// Fails if the conversation lacks the tags `scheme` groups by.
    pub fn check_scheme(&self, scheme: Scheme) -> Result<()> {
        let missing = |what: &str| Err(Error::Input(format!("{}: no {what} tags for scheme `{scheme}`", self.id)));
        match scheme {
            Scheme::Role if self.labels.roles.iter().all(Option::is_none) => missing("role"),
            Scheme::Success | Scheme::FeedbackSuccess | Scheme::EvaluationSuccess
                if self.labels.ideas.iter().all(Option::is_none) =>
            {
                missing("idea")
            }
            Scheme::Feedback | Scheme::FeedbackSuccess if self.labels.feedback.is_none() => missing("feedback marker"),
            Scheme::Evaluation | Scheme::EvaluationSuccess if self.labels.evaluation.is_none() => {
                missing("evaluation marker")
            }
            _ => Ok(()),
        }
    }
}

#[derive(Clone, Debug)]
pub struct CompareConfig {
    /// Time points per group; for marker schemes the total over both phases.
    pub t: usize,
    pub measures: Vec<MeasureId>,
    pub weighting: Weighting,
    pub epsilon: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Row {
    pub subject: String,
    pub scheme: Scheme,
    pub group: String,
    pub t: usize,
    pub measure_id: String,
    pub value: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct UnitResult {
    pub subject: String,
    pub group: String,
    /// Conversations conjoined into this unit, in order.
    pub conversations: Vec<String>,
    pub segments: Vec<Segment>,
    pub series: SegmentSeries,
    pub trend: TrendReport,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GroupSummary {
    pub group: String,
    pub column: Column,
    pub subjects: usize,
    pub mean_slope: f64,
    pub classification: Classification,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Skipped {
    pub subject: String,
    pub group: String,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Comparison {
    pub scheme: Scheme,
    pub t: usize,
    pub units: Vec<UnitResult>,
    pub summaries: Vec<GroupSummary>,
    pub skipped: Vec<Skipped>,
}

impl Comparison {
    /// Long format: one row per subject, group, time point and column.
    pub fn rows(&self) -> Vec<Row> {
        let mut rows = Vec::new();
        for u in &self.units {
            for p in &u.series.points {
                for (c, v) in u.series.columns.iter().zip(&p.values) {
                    rows.push(Row {
                        subject: u.subject.clone(),
                        scheme: self.scheme,
                        group: u.group.clone(),
                        t: p.t,
                        measure_id: c.to_string(),
                        value: *v,
                    });
                }
            }
        }
        rows
    }

    pub fn to_csv(&self) -> Result<String> {
        rows_to_csv(&self.rows())
    }
}

pub fn rows_to_csv(rows: &[Row]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    if rows.is_empty() {
        w.write_record(["subject", "scheme", "group", "t", "measure_id", "value"])
            .map_err(|e| Error::Input(e.to_string()))?;
    }
    for r in rows {
        w.serialize(r).map_err(|e| Error::Input(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Input(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
}

/// Group label of each sentence under a scheme, with the phase (0 before
/// the marker, 1 after) for marker schemes.
fn sentence_label(scheme: Scheme, labels: &Labels, utterance: usize) -> Option<(String, usize)> {
    let success = || {
        labels.ideas.get(utterance)?.as_ref().map(|(_, ok)| if *ok { "successful" } else { "unsuccessful" })
    };
    let phase = |marker: Option<usize>| usize::from(utterance >= marker.expect("checked before labelling"));
    match scheme {
        Scheme::Conversation => Some(("all".into(), 0)),
        Scheme::Role => labels.roles.get(utterance)?.clone().map(|r| (r, 0)),
        Scheme::Success => success().map(|s| (s.to_string(), 0)),
        Scheme::Feedback => Some(("all".into(), phase(labels.feedback))),
        Scheme::Evaluation => Some(("all".into(), phase(labels.evaluation))),
        Scheme::FeedbackSuccess => success().map(|s| (s.to_string(), phase(labels.feedback))),
        Scheme::EvaluationSuccess => success().map(|s| (s.to_string(), phase(labels.evaluation))),
    }
}

fn phase_group(scheme: Scheme, group: &str, phase: usize) -> String {
    let marker = match scheme {
        Scheme::Feedback | Scheme::FeedbackSuccess => "feedback",
        Scheme::Evaluation | Scheme::EvaluationSuccess => "evaluation",
        _ => return group.to_string(),
    };
    let side = if phase == 0 { "before" } else { "after" };
    if group == "all" {
        format!("{side}-{marker}")
    } else {
        format!("{group}:{side}-{marker}")
    }
}

#[derive(Default)]
struct UnitInput {
    conversations: Vec<String>,
    sentences: Vec<SentenceCounts>,
    nouns: Vec<Vec<WordId>>,
}


/// Conjoins each subject's conversations per group, segments every group
/// into time points, averages the measures and fits trends.
///
/// Conversations are ordered by subject, session and id first, so the
/// result does not depend on input order. Groups failing the noun minimums
/// are reported in `skipped`.
pub fn compare_groups(
    graph: &WordGraph,
    conversations: &[Conversation],
    scheme: Scheme,
    cfg: &CompareConfig,
    ctx: &IcContext,
) -> Result<Comparison> {
    if scheme.is_marker() && (cfg.t < 4 || !cfg.t.is_multiple_of(2)) {
        return Err(Error::Input(format!(
            "scheme `{scheme}` splits T over two phases; T must be even and at least 4, got {}",
            cfg.t
        )));
    }
    let phase_t = if scheme.is_marker() { cfg.t / 2 } else { cfg.t };

    let mut ordered: Vec<&Conversation> = conversations.iter().collect();
    ordered.sort_by(|a, b| (&a.subject, &a.session, &a.id).cmp(&(&b.subject, &b.session, &b.id)));

    // (subject, group label, phase) → conjoined sentences
    let mut units: BTreeMap<(String, String, usize), UnitInput> = BTreeMap::new();
    for c in &ordered {
        c.check_scheme(scheme)?;
        let seq = &c.sequence;
        let mut per_sentence: Vec<Vec<WordId>> = vec![Vec::new(); seq.sentences.len()];
        for n in &seq.nouns {
            per_sentence[n.sentence].push(graph.resolve(&n.noun)?);
        }
        for (i, span) in seq.sentences.iter().enumerate() {
            let Some((group, phase)) = sentence_label(scheme, &c.labels, span.utterance) else { continue };
            let unit = units.entry((c.subject.clone(), group, phase)).or_default();
            if unit.conversations.last() != Some(&c.id) {
                unit.conversations.push(c.id.clone());
            }
            unit.sentences.push(SentenceCounts { words: span.tokens.len(), nouns: per_sentence[i].len() });
            unit.nouns.push(std::mem::take(&mut per_sentence[i]));
        }
    }

    let results: Vec<std::result::Result<UnitResult, Skipped>> = units
        .into_par_iter()
        .map(|((subject, group, phase), unit)| {
            let label = phase_group(scheme, &group, phase);
            let skip = |e: Error| Skipped { subject: subject.clone(), group: label.clone(), reason: e.to_string() };
            let segments = segment(&unit.sentences, phase_t).map_err(skip)?;
            let offset = phase * phase_t;
            let bags: Vec<(Vec<WordId>, usize)> = segments
                .iter()
                .map(|s| (unit.nouns[s.sentences.clone()].concat(), s.words))
                .collect();
            let mut ser = series(graph, &label, &bags, &cfg.measures, ctx, cfg.weighting).map_err(skip)?;
            let segments: Vec<Segment> = segments.into_iter().map(|s| Segment { t: s.t + offset, ..s }).collect();
            for p in &mut ser.points {
                p.t += offset;
            }
            let trend = fit_trend(&ser, cfg.epsilon);
            Ok(UnitResult { subject, group: label, conversations: unit.conversations, segments, series: ser, trend })
        })
        .collect();

    let mut done = Vec::new();
    let mut skipped = Vec::new();
    for r in results {
        match r {
            Ok(u) => done.push(u),
            Err(s) => skipped.push(s),
        }
    }
    let summaries = summarize(&done, cfg.epsilon);
    Ok(Comparison { scheme, t: cfg.t, units: done, summaries, skipped })
}

/// Mean slope per group and column over subjects.
fn summarize(units: &[UnitResult], eps: f64) -> Vec<GroupSummary> {
    let mut by_group: BTreeMap<&str, Vec<&UnitResult>> = BTreeMap::new();
    for u in units {
        by_group.entry(u.group.as_str()).or_default().push(u);
    }
    let mut out = Vec::new();
    for (group, us) in by_group {
        for (i, tr) in us[0].trend.trends.iter().enumerate() {
            let mean = us.iter().map(|u| u.trend.trends[i].trend.slope).sum::<f64>() / us.len() as f64;
            out.push(GroupSummary {
                group: group.to_string(),
                column: tr.column,
                subjects: us.len(),
                mean_slope: mean,
                classification: Classification::of_slope(mean, eps),
            });
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tags() -> ConversationTags {
        serde_json::from_str(
            r#"{"id":"c1","subject":"S1",
                "roles":[{"label":"student","start":0,"end":2}],
                "speaker_roles":{"Instructor":"instructor"},
                "ideas":[{"idea":"lamp","successful":true,"start":1,"end":3}],
                "feedback_marker":{"speaker":"^Instr"},
                "evaluation_marker":3}"#,
        )
        .unwrap()
    }

    #[test]
    fn resolves_spans_speakers_and_markers() {
        let speakers = [Some("J3".to_string()), None, Some("Instructor".to_string()), Some("J3".to_string())];
        let l = tags().resolve(&speakers).unwrap();
        assert_eq!(l.roles, [Some("student".into()), Some("student".into()), Some("instructor".into()), None]);
        assert_eq!(l.ideas[0], None);
        assert_eq!(l.ideas[1], Some(("lamp".into(), true)));
        assert_eq!(l.feedback, Some(2));
        assert_eq!(l.evaluation, Some(3));
    }

    #[test]
    fn bad_spans_and_unknown_fields() {
        assert!(tags().resolve(&[None, None]).is_err());
        assert!(serde_json::from_str::<ConversationTags>(r#"{"id":"a","subject":"b","colour":1}"#).is_err());
    }

    #[test]
    fn labels_and_phases() {
        let l = tags().resolve(&[None, None, Some("Instructor".into()), None]).unwrap();
        assert_eq!(sentence_label(Scheme::FeedbackSuccess, &l, 1), Some(("successful".into(), 0)));
        assert_eq!(sentence_label(Scheme::FeedbackSuccess, &l, 2), Some(("successful".into(), 1)));
        assert_eq!(sentence_label(Scheme::Success, &l, 0), None);
        assert_eq!(phase_group(Scheme::FeedbackSuccess, "successful", 1), "successful:after-feedback");
        assert_eq!(phase_group(Scheme::Evaluation, "all", 0), "before-evaluation");
    }

    #[test]
    fn scheme_slugs_round_trip() {
        for s in Scheme::ALL {
            assert_eq!(s.slug().parse::<Scheme>().unwrap(), s);
        }
    }
}
