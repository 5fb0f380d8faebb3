use std::collections::HashSet;
use std::ops::Range;

use serde::{Deserialize, Serialize};

use super::{tokenize, Morphology, Token, Transcript};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ExtractionMode {
    /// A token is a noun iff its singular form is in the noun lexicon.
    #[default]
    Dictionary,
    /// Nouns are taken from an external tagger's `token<TAB>tag` output.
    Pretagged,
}

impl std::str::FromStr for ExtractionMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "dictionary" => Ok(ExtractionMode::Dictionary),
            "pretagged" => Ok(ExtractionMode::Pretagged),
            other => Err(Error::Input(format!("unknown extraction mode `{other}`"))),
        }
    }
}

/// High-frequency function words, auxiliaries, fillers and number words
/// that also happen to be noun lemmas ("I" iodine, "as" arsenic, "will").
pub const DEFAULT_STOPLIST: &[&str] = &[
    "a", "an", "am", "are", "as", "at", "be", "been", "being", "by", "can", "could", "did", "do", "does", "done", "go",
    "had", "has", "have", "he", "i", "in", "is", "it", "may", "me", "might", "must", "my", "no", "of", "oh", "ok",
    "okay", "on", "or", "shall", "should", "so", "to", "uh", "um", "up", "us", "was", "we", "well", "were", "will",
    "would", "yeah", "yes", "like", "just", "one", "two", "three", "four", "five", "six", "seven", "eight", "nine",
    "ten",
];

#[derive(Clone, Debug)]
pub struct ExtractOptions {
    pub collocations: bool,
    /// Lowercase words never taken as nouns in dictionary mode.
    pub stoplist: HashSet<String>,
}

impl Default for ExtractOptions {
    fn default() -> Self {
        ExtractOptions {
            collocations: false,
            stoplist: DEFAULT_STOPLIST.iter().map(|s| s.to_string()).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NounOccurrence {
    pub token: String,
    pub token_index: usize,
    #[serde(rename = "sentence_idx")]
    pub sentence: usize,
    #[serde(skip)]
    pub utterance: usize,
    pub noun: String,
    pub synsets: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DroppedToken {
    pub token: String,
    pub token_index: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SentenceSpan {
    pub utterance: usize,
    pub tokens: Range<usize>,
}

/// Nouns of one document in order of occurrence.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NounSequence {
    pub source: String,
    pub mode: ExtractionMode,
    pub nouns: Vec<NounOccurrence>,
    pub sentences: Vec<SentenceSpan>,
    /// Total word tokens in the cleaned text.
    pub word_count: usize,
    /// Candidate nouns that the lexicon could not resolve.
    pub dropped: Vec<DroppedToken>,
    pub stopped: usize,
}

impl NounSequence {
    pub fn noun_ratio(&self) -> f64 {
        if self.word_count == 0 {
            0.0
        } else {
            self.nouns.len() as f64 / self.word_count as f64
        }
    }

    /// One JSON object per noun: token, sentence index, noun, synset count.
    pub fn to_json_lines(&self) -> String {
        self.nouns
            .iter()
            .map(|n| serde_json::to_string(n).expect("plain struct serializes"))
            .map(|l| l + "\n")
            .collect()
    }

    fn sentence_spans(tokens: &[Token], sentence_count: usize) -> Vec<SentenceSpan> {
        let mut spans: Vec<SentenceSpan> = Vec::with_capacity(sentence_count);
        for (i, t) in tokens.iter().enumerate() {
            match spans.get_mut(t.sentence) {
                Some(span) => span.tokens.end = i + 1,
                None => spans.push(SentenceSpan { utterance: t.utterance, tokens: i..i + 1 }),
            }
        }
        spans
    }
}

/// Dictionary-mode extraction from a cleaned transcript.
pub fn extract_nouns(t: &Transcript, morph: &Morphology, opts: &ExtractOptions) -> NounSequence {
    let (tokens, sentence_count) = tokenize(t);
    let lex = morph.lexicon();
    let mut nouns = Vec::new();
    let mut dropped = Vec::new();
    let mut stopped = 0;
    let mut i = 0;
    while i < tokens.len() {
        let tok = &tokens[i];
        let initial = i == 0 || tokens[i - 1].sentence != tok.sentence;
        let stop = |s: &str| opts.stoplist.contains(&s.to_lowercase());

        if opts.collocations {
            if let Some(next) = tokens.get(i + 1).filter(|n| n.sentence == tok.sentence) {
                if !stop(&tok.text) && !stop(&next.text) {
                    let joined = format!("{}_{}", tok.text, next.text);
                    if let Some(noun) = morph.singularize_with(&joined, initial) {
                        let synsets = lex.lookup(&noun).map_or(0, |w| lex.senses(w).len() as u32);
                        nouns.push(NounOccurrence {
                            token: format!("{} {}", tok.text, next.text),
                            token_index: i,
                            sentence: tok.sentence,
                            utterance: tok.utterance,
                            noun,
                            synsets,
                        });
                        i += 2;
                        continue;
                    }
                }
            }
        }

        if stop(&tok.text) {
            stopped += 1;
        } else if let Some(noun) = morph.singularize_with(&tok.text, initial) {
            let synsets = lex.lookup(&noun).map_or(0, |w| lex.senses(w).len() as u32);
            nouns.push(NounOccurrence {
                token: tok.text.clone(),
                token_index: i,
                sentence: tok.sentence,
                utterance: tok.utterance,
                noun,
                synsets,
            });
        } else {
            dropped.push(DroppedToken { token: tok.text.clone(), token_index: i });
        }
        i += 1;
    }
    NounSequence {
        source: t.source.clone(),
        mode: ExtractionMode::Dictionary,
        sentences: NounSequence::sentence_spans(&tokens, sentence_count),
        word_count: tokens.len(),
        nouns,
        dropped,
        stopped,
    }
}

/// Parses `token<TAB>tag` lines; a blank line ends a sentence.
pub fn parse_pretagged(text: &str) -> Result<Vec<(Token, String)>> {
    let mut out = Vec::new();
    let mut sentence = 0;
    let mut in_sentence = false;
    for (n, line) in text.lines().enumerate() {
        let line = line.trim_end_matches('\r');
        if line.trim().is_empty() {
            if in_sentence {
                sentence += 1;
                in_sentence = false;
            }
            continue;
        }
        let mut fields = line.split('\t');
        let (Some(token), Some(tag), None) = (fields.next(), fields.next(), fields.next()) else {
            return Err(Error::Input(format!("pretagged line {}: expected `token<TAB>tag`", n + 1)));
        };
        if token.is_empty() || tag.is_empty() {
            return Err(Error::Input(format!("pretagged line {}: empty token or tag", n + 1)));
        }
        out.push((Token { text: token.to_string(), sentence, utterance: sentence }, tag.to_string()));
        in_sentence = true;
    }
    Ok(out)
}

/// Keeps tokens tagged `NN*`, singularizes them and drops the ones absent
/// from the lexicon. Punctuation tokens do not count as words.
pub fn extract_pretagged(source: &str, text: &str, morph: &Morphology) -> Result<NounSequence> {
    let tagged = parse_pretagged(text)?;
    let lex = morph.lexicon();
    let words: Vec<(Token, String)> =
        tagged.into_iter().filter(|(t, _)| t.text.chars().any(char::is_alphanumeric)).collect();
    let sentence_count = words.last().map_or(0, |(t, _)| t.sentence + 1);
    let tokens: Vec<Token> = words.iter().map(|(t, _)| t.clone()).collect();
    let mut nouns = Vec::new();
    let mut dropped = Vec::new();
    for (i, (tok, tag)) in words.iter().enumerate() {
        if !tag.starts_with("NN") {
            continue;
        }
        let initial = i == 0 || words[i - 1].0.sentence != tok.sentence;
        let lowercase_first = initial && !tag.starts_with("NNP");
        match morph.singularize_with(&tok.text, lowercase_first) {
            Some(noun) => {
                let synsets = lex.lookup(&noun).map_or(0, |w| lex.senses(w).len() as u32);
                nouns.push(NounOccurrence {
                    token: tok.text.clone(),
                    token_index: i,
                    sentence: tok.sentence,
                    utterance: tok.utterance,
                    noun,
                    synsets,
                });
            }
            None => dropped.push(DroppedToken { token: tok.text.clone(), token_index: i }),
        }
    }
    // a sentence of punctuation only leaves a gap in the indices
    let renumbered = renumber(&tokens);
    let spans = NounSequence::sentence_spans(&renumbered, sentence_count);
    for n in &mut nouns {
        n.sentence = renumbered[n.token_index].sentence;
        n.utterance = n.sentence;
    }
    Ok(NounSequence {
        source: source.to_string(),
        mode: ExtractionMode::Pretagged,
        sentences: spans,
        word_count: tokens.len(),
        nouns,
        dropped,
        stopped: 0,
    })
}

fn renumber(tokens: &[Token]) -> Vec<Token> {
    let mut out = Vec::with_capacity(tokens.len());
    let mut current = None;
    let mut idx = 0;
    for t in tokens {
        match current {
            Some(s) if s == t.sentence => {}
            Some(_) => {
                idx += 1;
                current = Some(t.sentence);
            }
            None => current = Some(t.sentence),
        }
        out.push(Token { text: t.text.clone(), sentence: idx, utterance: idx });
    }
    out
}
