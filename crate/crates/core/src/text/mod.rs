//! Transcript cleaning, tokenization and noun extraction.

mod clean;
mod extract;
mod morph;
mod tokenize;

pub use clean::{clean, clean_source, Transcript, Utterance};
pub use extract::{
    extract_nouns, extract_pretagged, parse_pretagged, DroppedToken, ExtractOptions, ExtractionMode, NounOccurrence,
    NounSequence, SentenceSpan, DEFAULT_STOPLIST,
};
pub use morph::Morphology;
pub use tokenize::{split_sentences, tokenize, words, Token};
