use std::sync::LazyLock;

use regex::Regex;

use super::Transcript;

static WORD: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"[A-Za-z]+(?:['’-][A-Za-z]+)*").unwrap());

const ABBREVIATIONS: &[&str] = &[
    "mr", "mrs", "ms", "dr", "prof", "st", "vs", "etc", "e.g", "i.e", "approx", "no", "fig", "jr", "sr", "inc", "ltd",
    "co", "dept",
];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Token {
    pub text: String,
    pub sentence: usize,
    pub utterance: usize,
}

/// Splits text into sentences at `.`, `?` or `!` followed by whitespace and
/// a capital letter, unless the period closes a known abbreviation.
pub fn split_sentences(text: &str) -> Vec<&str> {
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut out = Vec::new();
    let mut start = 0;
    let mut i = 0;
    while i < chars.len() {
        let (pos, c) = chars[i];
        if matches!(c, '.' | '?' | '!') {
            let mut j = i;
            while j + 1 < chars.len() && matches!(chars[j + 1].1, '.' | '?' | '!' | '"' | '\'' | ')') {
                j += 1;
            }
            let mut k = j + 1;
            let mut saw_space = false;
            while k < chars.len() && chars[k].1.is_whitespace() {
                saw_space = true;
                k += 1;
            }
            let capital_next = k < chars.len() && chars[k].1.is_uppercase();
            let abbreviation = c == '.' && {
                let before = &text[start..pos];
                let last = before.rsplit(|ch: char| ch.is_whitespace()).next().unwrap_or("");
                ABBREVIATIONS.contains(&last.to_lowercase().as_str())
            };
            if saw_space && capital_next && !abbreviation {
                let end = if j + 1 < chars.len() { chars[j + 1].0 } else { text.len() };
                out.push(text[start..end].trim());
                start = chars[k].0;
                i = k;
                continue;
            }
        }
        i += 1;
    }
    let rest = text[start..].trim();
    if !rest.is_empty() {
        out.push(rest);
    }
    out.retain(|s| !s.is_empty());
    out
}

/// Word tokens of a sentence; possessive `'s` is dropped.
pub fn words(sentence: &str) -> Vec<String> {
    WORD.find_iter(sentence)
        .map(|m| {
            let w = m.as_str();
            w.strip_suffix("'s").or_else(|| w.strip_suffix("’s")).unwrap_or(w).to_string()
        })
        .collect()
}

/// Tokens with sentence and utterance indices. Every utterance boundary is
/// also a sentence boundary.
pub fn tokenize(t: &Transcript) -> (Vec<Token>, usize) {
    let mut tokens = Vec::new();
    let mut sentence = 0;
    for (u, utt) in t.utterances.iter().enumerate() {
        for s in split_sentences(&utt.text) {
            let ws = words(s);
            if ws.is_empty() {
                continue;
            }
            tokens.extend(ws.into_iter().map(|text| Token { text, sentence, utterance: u }));
            sentence += 1;
        }
    }
    (tokens, sentence)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sentence_breaks_need_capital_after_space() {
        assert_eq!(
            split_sentences("We drew a bird. Then a desk? yes. Okay!"),
            vec!["We drew a bird.", "Then a desk? yes.", "Okay!"]
        );
    }

    #[test]
    fn abbreviations_do_not_split() {
        assert_eq!(split_sentences("Ask Dr. Smith about it. Fine."), vec!["Ask Dr. Smith about it.", "Fine."]);
    }

    #[test]
    fn word_tokens() {
        assert_eq!(words("The client's T-shirt, 3 crayons."), vec!["The", "client", "T-shirt", "crayons"]);
    }
}
