use std::path::Path;
use std::sync::Arc;

use dashmap::DashMap;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::taxonomy::{descendants, lcs_from_up, undirected_distance, up_distances, with_scratch, TaxonomyStats, UpDistances, WordStats};
use crate::wordnet::{self, compute_constants, Database, DbConstants, Exceptions, Lexicon, SynsetId, Taxonomy, WordId};

/// Pairwise graph quantities shared by all similarity measures.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct PairStats {
    /// Dense index of the lowest common subsumer.
    #[serde(skip)]
    pub lcs: u32,
    #[serde(rename = "lcs")]
    pub lcs_id: SynsetId,
    pub lcs_depth: u32,
    pub distance: u32,
}

/// The loaded noun graph with its precomputed statistics and per-process
/// query caches. Immutable after construction; queries take `&self` and
/// may run concurrently.
pub struct WordGraph {
    db: Database,
    stats: TaxonomyStats,
    constants: DbConstants,
    word_stats: DashMap<WordId, Arc<WordStats>>,
    up: DashMap<WordId, Arc<UpDistances>>,
    pairs: DashMap<(WordId, WordId), PairStats>,
}

impl WordGraph {
    pub fn new(db: Database) -> Self {
        let stats = TaxonomyStats::precompute(&db.taxonomy);
        let constants = compute_constants(&db, &stats);
        Self::from_parts(db, stats, constants)
    }

    pub fn from_parts(db: Database, stats: TaxonomyStats, constants: DbConstants) -> Self {
        WordGraph {
            db,
            stats,
            constants,
            word_stats: DashMap::new(),
            up: DashMap::new(),
            pairs: DashMap::new(),
        }
    }

    /// Loads the noun files from a WordNet `dict` directory.
    pub fn load(dir: impl AsRef<Path>) -> Result<Self> {
        Ok(Self::new(wordnet::load_database(dir)?))
    }

    pub fn load_cache(path: impl AsRef<Path>) -> Result<Self> {
        let (db, stats, constants) = wordnet::load_cache(path)?;
        Ok(Self::from_parts(db, stats, constants))
    }

    pub fn save_cache(&self, path: impl AsRef<Path>) -> Result<()> {
        wordnet::save_cache(&self.db, &self.stats, &self.constants, path)
    }

    pub fn database(&self) -> &Database {
        &self.db
    }

    pub fn taxonomy(&self) -> &Taxonomy {
        &self.db.taxonomy
    }

    pub fn lexicon(&self) -> &Lexicon {
        &self.db.lexicon
    }

    pub fn exceptions(&self) -> &Exceptions {
        &self.db.exceptions
    }

    pub fn stats(&self) -> &TaxonomyStats {
        &self.stats
    }

    pub fn constants(&self) -> &DbConstants {
        &self.constants
    }

    pub fn resolve(&self, word: &str) -> Result<WordId> {
        self.db.lexicon.lookup(word).ok_or_else(|| Error::UnknownWord(word.to_string()))
    }

    pub fn word(&self, id: WordId) -> &str {
        self.db.lexicon.word(id)
    }

    pub fn senses(&self, id: WordId) -> &[u32] {
        self.db.lexicon.senses(id)
    }

    pub fn word_stats(&self, id: WordId) -> Arc<WordStats> {
        if let Some(s) = self.word_stats.get(&id) {
            return Arc::clone(&s);
        }
        let computed = Arc::new(with_scratch(self.taxonomy().len(), |scratch| {
            WordStats::compute(self.taxonomy(), &self.stats, self.senses(id), scratch)
        }));
        Arc::clone(self.word_stats.entry(id).or_insert(computed).value())
    }

    fn up(&self, id: WordId) -> Arc<UpDistances> {
        if let Some(u) = self.up.get(&id) {
            return Arc::clone(&u);
        }
        let computed = Arc::new(up_distances(self.taxonomy(), self.senses(id)));
        Arc::clone(self.up.entry(id).or_insert(computed).value())
    }

    /// LCS and distance of two distinct words, cached under the unordered pair.
    pub fn pair(&self, x: WordId, y: WordId) -> Result<PairStats> {
        if x == y {
            return Err(Error::IdenticalWords(self.word(x).to_string()));
        }
        let key = if x < y { (x, y) } else { (y, x) };
        if let Some(p) = self.pairs.get(&key) {
            return Ok(*p);
        }
        let tax = self.taxonomy();
        let (lcs, _) = lcs_from_up(tax, &self.stats, &self.up(key.0), &self.up(key.1))
            .expect("every pair of words shares the root subsumer");
        let distance = undirected_distance(tax, self.senses(key.0), self.senses(key.1))
            .expect("the taxonomy is connected");
        let p = PairStats { lcs, lcs_id: tax.id(lcs), lcs_depth: self.stats.depth(lcs), distance };
        self.pairs.insert(key, p);
        Ok(p)
    }

    pub fn lcs(&self, x: WordId, y: WordId) -> Result<(SynsetId, u32)> {
        self.pair(x, y).map(|p| (p.lcs_id, p.lcs_depth))
    }

    pub fn distance(&self, x: WordId, y: WordId) -> Result<u32> {
        self.pair(x, y).map(|p| p.distance)
    }

    /// Meaning subsumers of a word (union over its senses).
    pub fn word_subsumers(&self, id: WordId) -> Vec<SynsetId> {
        let mut set: Vec<u32> = self.senses(id).iter().flat_map(|&s| self.stats.ancestors(s).iter().copied()).collect();
        set.sort_unstable();
        set.dedup();
        set.into_iter().map(|v| self.taxonomy().id(v)).collect()
    }

    /// Meaning subvertices of a word (union over its senses).
    pub fn word_subvertices(&self, id: WordId) -> Vec<SynsetId> {
        with_scratch(self.taxonomy().len(), |scratch| descendants(self.taxonomy(), self.senses(id), scratch))
            .into_iter()
            .map(|v| self.taxonomy().id(v))
            .collect()
    }

    pub fn word_leaves(&self, id: WordId) -> Vec<SynsetId> {
        with_scratch(self.taxonomy().len(), |scratch| descendants(self.taxonomy(), self.senses(id), scratch))
            .into_iter()
            .filter(|&v| self.taxonomy().is_leaf(v))
            .map(|v| self.taxonomy().id(v))
            .collect()
    }
}

impl std::fmt::Debug for WordGraph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("WordGraph")
            .field("synsets", &self.taxonomy().len())
            .field("words", &self.lexicon().len())
            .finish_non_exhaustive()
    }
}
