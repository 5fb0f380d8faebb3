use std::sync::LazyLock;

use regex::Regex;
use serde::Serialize;

static BRACKETED: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"\[[^\[\]]*\]").unwrap());
static TIMESTAMP: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"\b\d{1,2}:\d{2}(?::\d{2})?(?:[.,]\d+)?\b").unwrap());
static SPEAKER: LazyLock<Regex> = LazyLock::new(|| {
    Regex::new(r"^([A-Z][\w.'-]{0,24}(?: [A-Z0-9][\w.'-]{0,24})?)\s*:(?:\s+|$)").unwrap()
});

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Utterance {
    pub speaker: Option<String>,
    pub text: String,
    /// The line as it appeared before cleaning.
    pub original: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Transcript {
    pub source: String,
    pub utterances: Vec<Utterance>,
}

impl Transcript {
    /// Cleaned text, one utterance per line.
    pub fn text(&self) -> String {
        self.utterances.iter().map(|u| u.text.as_str()).collect::<Vec<_>>().join("\n")
    }

    pub fn is_empty(&self) -> bool {
        self.utterances.is_empty()
    }
}

/// Cleans one line, returning the first speaker label found and the text.
fn clean_line(line: &str) -> (Option<String>, String) {
    let mut text = line.to_string();
    while BRACKETED.is_match(&text) {
        text = BRACKETED.replace_all(&text, " ").into_owned();
    }
    text = TIMESTAMP.replace_all(&text, " ").into_owned();
    text = text.split_whitespace().collect::<Vec<_>>().join(" ");
    let mut speaker = None;
    while let Some(caps) = SPEAKER.captures(&text) {
        speaker.get_or_insert_with(|| caps[1].to_string());
        text = text[caps[0].len()..].trim_start().to_string();
    }
    (speaker, text)
}

/// Strips bracketed annotations such as `[Laughter]`, clock timestamps and
/// leading `Name:` speaker labels, and collapses whitespace. Lines that end
/// up empty are dropped. Cleaning is idempotent on the cleaned text.
pub fn clean(raw: &str) -> Transcript {
    clean_source("", raw)
}

pub fn clean_source(source: &str, raw: &str) -> Transcript {
    let utterances = raw
        .lines()
        .filter_map(|line| {
            let (speaker, text) = clean_line(line);
            (!text.is_empty()).then(|| Utterance { speaker, text, original: line.to_string() })
        })
        .collect();
    Transcript { source: source.to_string(), utterances }
}
