use crate::wordnet::{Exceptions, Lexicon};

/// Noun detachment rules, tried in order.
const RULES: &[(&str, &str)] = &[
    ("s", ""),
    ("ses", "s"),
    ("xes", "x"),
    ("zes", "z"),
    ("ches", "ch"),
    ("shes", "sh"),
    ("men", "man"),
    ("ies", "y"),
];

/// Plural → singular normalization against the noun lexicon: the
/// exception list first, then the detachment rules, then the form itself.
pub struct Morphology<'a> {
    lexicon: &'a Lexicon,
    exceptions: &'a Exceptions,
}

impl<'a> Morphology<'a> {
    pub fn new(lexicon: &'a Lexicon, exceptions: &'a Exceptions) -> Self {
        Morphology { lexicon, exceptions }
    }

    pub fn lexicon(&self) -> &'a Lexicon {
        self.lexicon
    }

    /// Base form of `token` present in the lexicon, trying the exact case
    /// before the lowercase form.
    pub fn singularize(&self, token: &str) -> Option<String> {
        self.singularize_with(token, false)
    }

    /// As [`singularize`](Self::singularize); `lowercase_first` suits
    /// sentence-initial tokens whose capital is positional.
    pub fn singularize_with(&self, token: &str, lowercase_first: bool) -> Option<String> {
        let lower = token.to_lowercase();
        let variants: Vec<&str> = match (lower == token, lowercase_first) {
            (true, _) => vec![token],
            (false, false) => vec![token, &lower],
            (false, true) => vec![&lower, token],
        };
        variants.into_iter().find_map(|v| self.base_form(v))
    }

    fn base_form(&self, form: &str) -> Option<String> {
        if let Some(base) = self.exceptions.bases(form).iter().find(|b| self.lexicon.contains(b)) {
            return Some(base.clone());
        }
        for &(suffix, replacement) in RULES {
            let Some(stem) = form.strip_suffix(suffix) else { continue };
            if suffix == "s" && (stem.len() < 3 || ["s", "u", "i"].iter().any(|e| stem.ends_with(e))) {
                // "glass", "bus", "analysis" and two-letter stems are not plurals
                continue;
            }
            let candidate = format!("{stem}{replacement}");
            if self.lexicon.contains(&candidate) {
                return Some(candidate);
            }
        }
        self.lexicon.contains(form).then(|| form.to_string())
    }
}
