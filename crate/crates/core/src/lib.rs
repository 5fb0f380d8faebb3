//! Semantic measures over the WordNet 3.1 noun taxonomy and the
//! conversation-analysis pipeline built on them.
//!
//! ```no_run
//! use wordgraph::{measures::MeasureId, WordGraph};
//!
//! let graph = WordGraph::load("data/wordnet-3.1")?;
//! let ctx = graph.ic_context();
//! let lin: MeasureId = "lin:sanchez-batet".parse()?;
//! let words: Vec<_> = ["bird", "crayon", "desk", "hand", "paper"]
//!     .iter()
//!     .map(|w| graph.resolve(w))
//!     .collect::<Result<_, _>>()?;
//! println!("{:.2}", graph.average_pairwise_similarity(&words, lin, &ctx)?);
//! # Ok::<(), wordgraph::Error>(())
//! ```

pub mod dynamics;
pub mod error;
pub mod graph;
pub mod ideation;
pub mod measures;
pub mod report;
pub mod taxonomy;
pub mod text;
pub mod wordnet;

pub use error::{CacheError, Error, ErrorKind, Result};
pub use graph::{PairStats, WordGraph};
pub use wordnet::{SynsetId, WordId};
