//! Binary cache of the loaded database and its precomputed statistics.
//!
//! Layout (little-endian): magic `WGPH`, one version byte, the payload,
//! then a SHA-256 trailer over everything before it.

use std::path::Path;

use sha2::{Digest, Sha256};

use super::{Csr, Database, DbConstants, Exceptions, Lexicon, Taxonomy};
use crate::error::{CacheError, Error, Result};
use crate::taxonomy::TaxonomyStats;

pub const CACHE_MAGIC: &[u8; 4] = b"WGPH";
pub const CACHE_VERSION: u8 = 1;
const DIGEST_LEN: usize = 32;

#[derive(Default)]
struct Writer {
    buf: Vec<u8>,
}

impl Writer {
    fn u32(&mut self, v: u32) {
        self.buf.extend_from_slice(&v.to_le_bytes());
    }
    fn u32s(&mut self, vs: &[u32]) {
        self.u32(vs.len() as u32);
        for &v in vs {
            self.u32(v);
        }
    }
    fn f64s(&mut self, vs: &[f64]) {
        self.u32(vs.len() as u32);
        for &v in vs {
            self.buf.extend_from_slice(&v.to_bits().to_le_bytes());
        }
    }
    fn str(&mut self, s: &str) {
        self.u32(s.len() as u32);
        self.buf.extend_from_slice(s.as_bytes());
    }
    fn strs(&mut self, ss: &[String]) {
        self.u32(ss.len() as u32);
        for s in ss {
            self.str(s);
        }
    }
    fn csr(&mut self, c: &Csr) {
        let (starts, targets) = c.parts();
        self.u32s(starts);
        self.u32s(targets);
    }
}

struct Reader<'a> {
    buf: &'a [u8],
    pos: usize,
}

impl Reader<'_> {
    fn take(&mut self, n: usize) -> Result<&[u8], CacheError> {
        let end = self.pos.checked_add(n).ok_or(CacheError::Truncated)?;
        let slice = self.buf.get(self.pos..end).ok_or(CacheError::Truncated)?;
        self.pos = end;
        Ok(slice)
    }
    fn u32(&mut self) -> Result<u32, CacheError> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }
    fn len(&mut self) -> Result<usize, CacheError> {
        let n = self.u32()? as usize;
        if n > self.buf.len() {
            return Err(CacheError::Truncated);
        }
        Ok(n)
    }
    fn u32s(&mut self) -> Result<Vec<u32>, CacheError> {
        let n = self.len()?;
        (0..n).map(|_| self.u32()).collect()
    }
    fn f64s(&mut self) -> Result<Vec<f64>, CacheError> {
        let n = self.len()?;
        (0..n)
            .map(|_| Ok(f64::from_bits(u64::from_le_bytes(self.take(8)?.try_into().unwrap()))))
            .collect()
    }
    fn str(&mut self) -> Result<String, CacheError> {
        let n = self.len()?;
        String::from_utf8(self.take(n)?.to_vec()).map_err(|_| CacheError::Corrupt("invalid UTF-8".into()))
    }
    fn strs(&mut self) -> Result<Vec<String>, CacheError> {
        let n = self.len()?;
        (0..n).map(|_| self.str()).collect()
    }
    fn csr(&mut self, rows: usize) -> Result<Csr, CacheError> {
        let starts = self.u32s()?;
        let targets = self.u32s()?;
        if starts.len() != rows + 1
            || starts.windows(2).any(|w| w[0] > w[1])
            || starts.last().copied() != Some(targets.len() as u32)
        {
            return Err(CacheError::Corrupt("adjacency offsets".into()));
        }
        Ok(Csr::from_parts(starts, targets))
    }
}

fn encode(db: &Database, stats: &TaxonomyStats, constants: &DbConstants) -> Result<Vec<u8>> {
    let mut w = Writer::default();
    w.buf.extend_from_slice(CACHE_MAGIC);
    w.buf.push(CACHE_VERSION);

    let tax = &db.taxonomy;
    w.u32s(tax.offsets());
    for lemmas in tax.all_lemmas() {
        w.strs(lemmas);
    }
    w.csr(tax.parent_csr());

    w.strs(db.lexicon.words());
    w.csr(db.lexicon.sense_csr());

    let exc = db.exceptions.sorted_entries();
    w.u32(exc.len() as u32);
    for (k, v) in exc {
        w.str(k);
        w.strs(v);
    }

    let (depth, subvertex, leaves, commonness, inv_depth) = stats.raw();
    w.u32s(depth);
    w.csr(stats.ancestor_csr());
    w.u32s(subvertex);
    w.u32s(leaves);
    w.f64s(commonness);
    w.f64s(inv_depth);

    w.str(&serde_json::to_string(constants)?);

    let digest = Sha256::digest(&w.buf);
    w.buf.extend_from_slice(&digest);
    Ok(w.buf)
}

fn decode(bytes: &[u8]) -> Result<(Database, TaxonomyStats, DbConstants)> {
    if bytes.len() < CACHE_MAGIC.len() + 1 {
        return Err(if bytes.starts_with(&CACHE_MAGIC[..bytes.len().min(4)]) {
            CacheError::Truncated
        } else {
            CacheError::BadMagic
        }
        .into());
    }
    if &bytes[..4] != CACHE_MAGIC {
        return Err(CacheError::BadMagic.into());
    }
    if bytes[4] != CACHE_VERSION {
        return Err(CacheError::Version { found: bytes[4], expected: CACHE_VERSION }.into());
    }
    if bytes.len() < 5 + DIGEST_LEN {
        return Err(CacheError::Truncated.into());
    }
    let (body, trailer) = bytes.split_at(bytes.len() - DIGEST_LEN);
    if Sha256::digest(body).as_slice() != trailer {
        return Err(CacheError::Checksum.into());
    }

    let mut r = Reader { buf: body, pos: 5 };
    let offsets = r.u32s()?;
    let n = offsets.len();
    let lemmas = (0..n).map(|_| r.strs()).collect::<Result<Vec<_>, _>>()?;
    let parents = r.csr(n)?;
    if parents.parts().1.iter().any(|&p| p as usize >= n) {
        return Err(CacheError::Corrupt("parent index out of range".into()).into());
    }
    let taxonomy = Taxonomy::from_parts(offsets, lemmas, parents)?;

    let words = r.strs()?;
    let senses = r.csr(words.len())?;
    let entries = words
        .into_iter()
        .enumerate()
        .map(|(i, w)| (w, senses.row(i as u32).to_vec()))
        .collect();
    let lexicon = Lexicon::from_entries(entries);

    let n_exc = r.len()?;
    let mut exc = Vec::with_capacity(n_exc);
    for _ in 0..n_exc {
        exc.push((r.str()?, r.strs()?));
    }

    let depth = r.u32s()?;
    let ancestors = r.csr(n)?;
    let subvertex = r.u32s()?;
    let leaves = r.u32s()?;
    let commonness = r.f64s()?;
    let inv_depth = r.f64s()?;
    if [depth.len(), subvertex.len(), leaves.len(), commonness.len(), inv_depth.len()]
        .iter()
        .any(|&l| l != n)
    {
        return Err(CacheError::Corrupt("statistics length".into()).into());
    }
    let stats = TaxonomyStats::from_parts(depth, ancestors, subvertex, leaves, commonness, inv_depth);
    let constants: DbConstants = serde_json::from_str(&r.str()?)?;
    if r.pos != body.len() {
        return Err(CacheError::Corrupt("trailing bytes".into()).into());
    }

    Ok((Database { taxonomy, lexicon, exceptions: Exceptions::new(exc) }, stats, constants))
}

pub fn save_cache(db: &Database, stats: &TaxonomyStats, constants: &DbConstants, path: impl AsRef<Path>) -> Result<()> {
    let bytes = encode(db, stats, constants)?;
    std::fs::write(path, bytes)?;
    Ok(())
}

pub fn load_cache(path: impl AsRef<Path>) -> Result<(Database, TaxonomyStats, DbConstants)> {
    let path = path.as_ref();
    if !path.is_file() {
        return Err(Error::MissingFile(path.to_path_buf()));
    }
    decode(&std::fs::read(path)?)
}
