//! Synthetic pretagged corpus with injected trends. Each idea occupies
//! 15 sentences of three nouns and five filler tokens; its three time
//! points move between an unrelated noun mix and a tight cluster of
//! mammals, so similarity rises (converging idea) or falls (diverging).

use wordgraph::dynamics::{ConversationTags, IdeaSpan};
use wordgraph::text::{extract_pretagged, Morphology};
use wordgraph::dynamics::Conversation;
use wordgraph::WordGraph;

pub const SCATTERED: [&str; 15] = [
    "galaxy", "sandwich", "democracy", "violin", "tornado", "algebra", "penguin", "mortgage", "volcano", "sonnet",
    "carburetor", "friendship", "glacier", "toothbrush", "referendum",
];
pub const MAMMALS: [&str; 15] = [
    "horse", "cow", "sheep", "goat", "pig", "wolf", "tiger", "rabbit", "deer", "giraffe", "zebra", "camel", "donkey",
    "leopard", "hyena",
];

/// Noun lists for the three time points of a converging idea.
pub fn converging_points() -> [Vec<&'static str>; 3] {
    let mixed: Vec<&str> = SCATTERED[..8].iter().chain(&MAMMALS[..7]).copied().collect();
    [SCATTERED.to_vec(), mixed, MAMMALS.to_vec()]
}

/// `token\ttag` lines, one sentence per three nouns.
pub fn pretagged(points: &[Vec<&str>]) -> String {
    let mut out = String::new();
    for nouns in points {
        for chunk in nouns.chunks(3) {
            out.push_str("we\tPRP\nsaw\tVBD\n");
            for (i, n) in chunk.iter().enumerate() {
                if i > 0 {
                    out.push_str("and\tCC\n");
                }
                out.push_str(&format!("{n}\tNNS\n"));
            }
            out.push_str(".\t.\n\n");
        }
    }
    out
}

/// One conversation per subject: a converging successful idea followed by
/// a diverging unsuccessful one (sentences 0..15 and 15..30).
pub fn conversation(g: &WordGraph, subject: &str, id: &str) -> Conversation {
    let up = converging_points();
    let mut down = up.clone();
    down.reverse();
    let points: Vec<Vec<&str>> = up.into_iter().chain(down).collect();
    let text = pretagged(&points);
    let morph = Morphology::new(g.lexicon(), g.exceptions());
    let sequence = extract_pretagged(id, &text, &morph).expect("synthetic corpus parses");
    let tags = ConversationTags {
        id: id.into(),
        subject: subject.into(),
        ideas: vec![
            IdeaSpan { idea: "up".into(), successful: true, start: 0, end: 15 },
            IdeaSpan { idea: "down".into(), successful: false, start: 15, end: 30 },
        ],
        feedback_marker: Some(wordgraph::dynamics::Marker::Utterance(12)),
        ..Default::default()
    };
    let labels = tags.resolve(&vec![None; sequence.sentences.len()]).expect("tags fit");
    Conversation { id: id.into(), subject: subject.into(), session: None, sequence, labels }
}
