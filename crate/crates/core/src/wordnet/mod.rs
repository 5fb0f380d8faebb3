//! In-memory form of the WordNet noun database: the is-a taxonomy over
//! meaning vertices (synsets) and the case-sensitive word lexicon.

mod cache;
mod constants;
mod parse;

use std::collections::HashMap;
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

pub use cache::{load_cache, save_cache, CACHE_MAGIC, CACHE_VERSION};
pub use constants::{compute_constants, ConstantCheck, DbConstants, ReferenceConstants};
pub use parse::{parse_data_noun, parse_index_noun, parse_noun_exc, DataRecord};

use crate::error::{Error, Result};

/// Byte offset of a synset record in `data.noun`. Doubles as the
/// "entry number" used to break LCS ties.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SynsetId(pub u32);

impl fmt::Display for SynsetId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:08}", self.0)
    }
}

/// Dense word identifier, an index into [`Lexicon`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct WordId(pub u32);

/// Compressed sparse rows: `targets[starts[i]..starts[i + 1]]` are the
/// neighbours of row `i`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Csr {
    starts: Vec<u32>,
    targets: Vec<u32>,
}

impl Csr {
    pub fn from_rows<I, R>(rows: I) -> Self
    where
        I: IntoIterator<Item = R>,
        R: IntoIterator<Item = u32>,
    {
        let mut starts = vec![0];
        let mut targets = Vec::new();
        for row in rows {
            targets.extend(row);
            starts.push(targets.len() as u32);
        }
        Csr { starts, targets }
    }

    pub(crate) fn from_parts(starts: Vec<u32>, targets: Vec<u32>) -> Self {
        Csr { starts, targets }
    }

    pub(crate) fn parts(&self) -> (&[u32], &[u32]) {
        (&self.starts, &self.targets)
    }

    #[inline]
    pub fn row(&self, i: u32) -> &[u32] {
        let i = i as usize;
        &self.targets[self.starts[i] as usize..self.starts[i + 1] as usize]
    }

    pub fn rows(&self) -> usize {
        self.starts.len().saturating_sub(1)
    }

    pub fn nnz(&self) -> usize {
        self.targets.len()
    }

    /// Transpose over `n` columns. Rows of the result are sorted ascending.
    pub fn transpose(&self, n: usize) -> Csr {
        let mut rows = vec![Vec::new(); n];
        for i in 0..self.rows() as u32 {
            for &j in self.row(i) {
                rows[j as usize].push(i);
            }
        }
        Csr::from_rows(rows)
    }
}

/// Immutable is-a DAG over the noun synsets, indexed densely in file
/// (ascending offset) order.
#[derive(Clone, Debug)]
pub struct Taxonomy {
    offsets: Vec<u32>,
    dense: HashMap<u32, u32>,
    lemmas: Vec<Vec<String>>,
    parents: Csr,
    children: Csr,
    root: u32,
    topo: Vec<u32>,
}

impl Taxonomy {
    /// Builds the DAG from parsed records, checking that hypernym targets
    /// exist, that there is exactly one root and no cycle.
    pub fn from_records(records: Vec<DataRecord>) -> Result<Self> {
        let mut records = records;
        records.sort_by_key(|r| r.offset);
        let mut dense = HashMap::with_capacity(records.len());
        for (i, r) in records.iter().enumerate() {
            if dense.insert(r.offset, i as u32).is_some() {
                return Err(Error::Malformed {
                    file: "data.noun".into(),
                    line: r.line,
                    message: format!("duplicate synset offset {:08}", r.offset),
                });
            }
        }
        let mut parent_rows = Vec::with_capacity(records.len());
        for r in &records {
            let mut row = Vec::with_capacity(r.hypernyms.len());
            for h in &r.hypernyms {
                let Some(&p) = dense.get(h) else {
                    return Err(Error::Malformed {
                        file: "data.noun".into(),
                        line: r.line,
                        message: format!("hypernym pointer to unknown synset {h:08}"),
                    });
                };
                if !row.contains(&p) {
                    row.push(p);
                }
            }
            row.sort_unstable();
            parent_rows.push(row);
        }
        let offsets = records.iter().map(|r| r.offset).collect();
        let lemmas = records.into_iter().map(|r| r.lemmas).collect();
        Self::from_parts(offsets, lemmas, Csr::from_rows(parent_rows))
    }

    pub(crate) fn from_parts(offsets: Vec<u32>, lemmas: Vec<Vec<String>>, parents: Csr) -> Result<Self> {
        let n = offsets.len();
        let dense = offsets.iter().enumerate().map(|(i, &o)| (o, i as u32)).collect();
        let children = parents.transpose(n);

        let roots: Vec<u32> = (0..n as u32).filter(|&i| parents.row(i).is_empty()).collect();
        let root = match roots.as_slice() {
            [] => return Err(Error::NoRoot),
            [r] => *r,
            many => return Err(Error::MultipleRoots(many.iter().map(|&i| offsets[i as usize]).collect())),
        };

        // Kahn's algorithm from the root; anything left over sits on a cycle.
        let mut indegree: Vec<u32> = (0..n as u32).map(|i| parents.row(i).len() as u32).collect();
        let mut topo = Vec::with_capacity(n);
        topo.push(root);
        let mut head = 0;
        while head < topo.len() {
            let u = topo[head];
            head += 1;
            for &c in children.row(u) {
                indegree[c as usize] -= 1;
                if indegree[c as usize] == 0 {
                    topo.push(c);
                }
            }
        }
        if topo.len() != n {
            let stuck = (0..n).find(|&i| indegree[i] > 0).unwrap_or(0);
            return Err(Error::Cycle(offsets[stuck]));
        }

        Ok(Taxonomy { offsets, dense, lemmas, parents, children, root, topo })
    }

    pub fn len(&self) -> usize {
        self.offsets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.offsets.is_empty()
    }

    pub fn root(&self) -> u32 {
        self.root
    }

    pub fn id(&self, idx: u32) -> SynsetId {
        SynsetId(self.offsets[idx as usize])
    }

    pub fn index_of(&self, id: SynsetId) -> Option<u32> {
        self.dense.get(&id.0).copied()
    }

    pub fn lemmas(&self, idx: u32) -> &[String] {
        &self.lemmas[idx as usize]
    }

    /// Hypernyms (generic and instance), sorted by dense index.
    pub fn parents(&self, idx: u32) -> &[u32] {
        self.parents.row(idx)
    }

    pub fn children(&self, idx: u32) -> &[u32] {
        self.children.row(idx)
    }

    pub fn is_leaf(&self, idx: u32) -> bool {
        self.children.row(idx).is_empty()
    }

    /// Vertices ordered so that every hypernym precedes its hyponyms.
    pub fn topological_order(&self) -> &[u32] {
        &self.topo
    }

    pub fn edge_count(&self) -> usize {
        self.parents.nnz()
    }

    pub(crate) fn parent_csr(&self) -> &Csr {
        &self.parents
    }

    pub(crate) fn offsets(&self) -> &[u32] {
        &self.offsets
    }

    pub(crate) fn all_lemmas(&self) -> &[Vec<String>] {
        &self.lemmas
    }
}

/// Case-sensitive word vertices and their word → meaning edges.
#[derive(Clone, Debug)]
pub struct Lexicon {
    words: Vec<String>,
    lookup: HashMap<String, u32>,
    senses: Csr,
}

impl Lexicon {
    /// Builds the word set from the cased lemma fields of the synset records
    /// plus the lowercased lemmas of `index.noun`. A lowercased index lemma
    /// covers every case variant, so its senses are the union of theirs.
    pub fn build(taxonomy: &Taxonomy, index: &[(String, Vec<u32>)]) -> Result<Self> {
        let mut map: HashMap<String, Vec<u32>> = HashMap::new();
        for idx in 0..taxonomy.len() as u32 {
            for lemma in taxonomy.lemmas(idx) {
                map.entry(lemma.clone()).or_default().push(idx);
            }
        }
        for (lemma, offsets) in index {
            let entry = map.entry(lemma.clone()).or_default();
            for &o in offsets {
                let idx = taxonomy.index_of(SynsetId(o)).ok_or(Error::UnknownSynset(o))?;
                entry.push(idx);
            }
        }
        let mut entries: Vec<(String, Vec<u32>)> = map.into_iter().collect();
        entries.sort_by(|a, b| a.0.cmp(&b.0));
        Ok(Self::from_entries(entries))
    }

    pub(crate) fn from_entries(entries: Vec<(String, Vec<u32>)>) -> Self {
        let mut words = Vec::with_capacity(entries.len());
        let mut rows = Vec::with_capacity(entries.len());
        for (word, mut senses) in entries {
            senses.sort_unstable();
            senses.dedup();
            words.push(word);
            rows.push(senses);
        }
        let lookup = words.iter().enumerate().map(|(i, w)| (w.clone(), i as u32)).collect();
        Lexicon { words, lookup, senses: Csr::from_rows(rows) }
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    /// Exact, case-sensitive lookup after replacing spaces with underscores.
    pub fn lookup(&self, word: &str) -> Option<WordId> {
        let normalized = normalize_word(word);
        self.lookup.get(normalized.as_str()).map(|&i| WordId(i))
    }

    pub fn contains(&self, word: &str) -> bool {
        self.lookup(word).is_some()
    }

    pub fn word(&self, id: WordId) -> &str {
        &self.words[id.0 as usize]
    }

    /// Dense synset indices of the word's senses, ascending.
    pub fn senses(&self, id: WordId) -> &[u32] {
        self.senses.row(id.0)
    }

    pub fn edge_count(&self) -> usize {
        self.senses.nnz()
    }

    pub fn ids(&self) -> impl ExactSizeIterator<Item = WordId> {
        (0..self.words.len() as u32).map(WordId)
    }

    pub(crate) fn words(&self) -> &[String] {
        &self.words
    }

    pub(crate) fn sense_csr(&self) -> &Csr {
        &self.senses
    }

    /// Lexicon entries closest to `word` by case-insensitive edit distance.
    pub fn nearest(&self, word: &str, limit: usize) -> Vec<&str> {
        let target: Vec<char> = normalize_word(word).to_lowercase().chars().collect();
        let max_dist = (target.len() / 3).clamp(1, 3);
        let mut scored: Vec<(usize, &str)> = self
            .words
            .iter()
            .filter(|w| w.len().abs_diff(target.len()) <= max_dist)
            .filter_map(|w| {
                let cand: Vec<char> = w.to_lowercase().chars().collect();
                let d = levenshtein(&target, &cand);
                (d <= max_dist).then_some((d, w.as_str()))
            })
            .collect();
        scored.sort();
        scored.into_iter().take(limit).map(|(_, w)| w).collect()
    }
}

fn levenshtein(a: &[char], b: &[char]) -> usize {
    let mut prev: Vec<usize> = (0..=b.len()).collect();
    let mut cur = vec![0; b.len() + 1];
    for (i, ca) in a.iter().enumerate() {
        cur[0] = i + 1;
        for (j, cb) in b.iter().enumerate() {
            let sub = prev[j] + usize::from(ca != cb);
            cur[j + 1] = sub.min(prev[j + 1] + 1).min(cur[j] + 1);
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[b.len()]
}

/// Spaces become underscores, the lemma convention of the database files.
pub fn normalize_word(word: &str) -> String {
    word.split_whitespace().collect::<Vec<_>>().join("_")
}

/// Irregular plural → base forms from `noun.exc`.
#[derive(Clone, Debug, Default)]
pub struct Exceptions {
    map: HashMap<String, Vec<String>>,
}

impl Exceptions {
    pub fn new(pairs: impl IntoIterator<Item = (String, Vec<String>)>) -> Self {
        Exceptions { map: pairs.into_iter().collect() }
    }

    pub fn bases(&self, inflected: &str) -> &[String] {
        self.map.get(inflected).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub(crate) fn sorted_entries(&self) -> Vec<(&String, &Vec<String>)> {
        let mut v: Vec<_> = self.map.iter().collect();
        v.sort();
        v
    }
}

/// Everything read from the noun files.
#[derive(Clone, Debug)]
pub struct Database {
    pub taxonomy: Taxonomy,
    pub lexicon: Lexicon,
    pub exceptions: Exceptions,
}

pub const DATA_FILE: &str = "data.noun";
pub const INDEX_FILE: &str = "index.noun";
pub const EXC_FILE: &str = "noun.exc";

/// Loads `data.noun`, `index.noun` and `noun.exc` from `dir`.
pub fn load_database(dir: impl AsRef<Path>) -> Result<Database> {
    let dir = dir.as_ref();
    let read = |name: &str| -> Result<String> {
        let path = dir.join(name);
        if !path.is_file() {
            return Err(Error::MissingFile(path));
        }
        let bytes = std::fs::read(&path)?;
        // The distribution is ASCII; Latin-1 keeps stray bytes lossless.
        Ok(match String::from_utf8(bytes) {
            Ok(s) => s,
            Err(e) => e.into_bytes().iter().map(|&b| b as char).collect(),
        })
    };
    let data = read(DATA_FILE)?;
    let index = read(INDEX_FILE)?;
    let exc = read(EXC_FILE)?;

    let taxonomy = Taxonomy::from_records(parse_data_noun(&data)?)?;
    let lexicon = Lexicon::build(&taxonomy, &parse_index_noun(&index)?)?;
    let exceptions = Exceptions::new(parse_noun_exc(&exc)?);
    tracing::debug!(
        synsets = taxonomy.len(),
        words = lexicon.len(),
        "loaded noun database from {}",
        dir.display()
    );
    Ok(Database { taxonomy, lexicon, exceptions })
}
