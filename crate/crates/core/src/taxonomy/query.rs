use std::cmp::Reverse;
use std::collections::HashMap;

use super::TaxonomyStats;
use crate::wordnet::Taxonomy;

/// Shortest directed distance from each subsumer down to a word, counting
/// the final meaning → word edge. Sorted by dense vertex index.
pub type UpDistances = Vec<(u32, u32)>;

/// Walks upwards from every sense of a word. Each entry is
/// `ShortestPathDistance(z, word)` in `M ∪ R(W)` for a subsumer `z`.
pub fn up_distances(tax: &Taxonomy, senses: &[u32]) -> UpDistances {
    let mut best: HashMap<u32, u32> = HashMap::new();
    let mut frontier: Vec<u32> = Vec::new();
    for &s in senses {
        best.insert(s, 1);
        frontier.push(s);
    }
    let mut dist = 1;
    while !frontier.is_empty() {
        dist += 1;
        let mut next = Vec::new();
        for &u in &frontier {
            for &p in tax.parents(u) {
                if let std::collections::hash_map::Entry::Vacant(e) = best.entry(p) {
                    e.insert(dist);
                    next.push(p);
                }
            }
        }
        frontier = next;
    }
    let mut out: UpDistances = best.into_iter().collect();
    out.sort_unstable();
    out
}

/// Lowest common subsumer from two up-distance tables: minimal summed
/// distance, then maximal depth, then smallest synset offset.
/// Returns the dense index and the summed distance.
pub fn lcs_from_up(tax: &Taxonomy, stats: &TaxonomyStats, x: &UpDistances, y: &UpDistances) -> Option<(u32, u32)> {
    let mut best: Option<(u32, Reverse<u32>, u32, u32)> = None;
    let (mut i, mut j) = (0, 0);
    while i < x.len() && j < y.len() {
        let (vx, dx) = x[i];
        let (vy, dy) = y[j];
        match vx.cmp(&vy) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                let key = (dx + dy, Reverse(stats.depth(vx)), tax.id(vx).0, vx);
                if best.is_none_or(|b| key < b) {
                    best = Some(key);
                }
                i += 1;
                j += 1;
            }
        }
    }
    best.map(|(sum, _, _, v)| (v, sum))
}

/// Shortest path between any sense in `a` and any sense in `b` with every
/// is-a edge taken as undirected. Level-synchronous bidirectional search,
/// expanding the smaller frontier first.
pub fn undirected_distance(tax: &Taxonomy, a: &[u32], b: &[u32]) -> Option<u32> {
    let mut seen_a: HashMap<u32, u32> = a.iter().map(|&v| (v, 0)).collect();
    let mut seen_b: HashMap<u32, u32> = b.iter().map(|&v| (v, 0)).collect();
    if a.iter().any(|v| seen_b.contains_key(v)) {
        return Some(0);
    }
    let mut front_a: Vec<u32> = seen_a.keys().copied().collect();
    let mut front_b: Vec<u32> = seen_b.keys().copied().collect();
    front_a.sort_unstable();
    front_b.sort_unstable();
    let (mut level_a, mut level_b) = (0u32, 0u32);

    while !front_a.is_empty() && !front_b.is_empty() {
        let expand_a = front_a.len() <= front_b.len();
        let (front, seen, other, level) = if expand_a {
            (&mut front_a, &mut seen_a, &seen_b, &mut level_a)
        } else {
            (&mut front_b, &mut seen_b, &seen_a, &mut level_b)
        };
        *level += 1;
        let mut next = Vec::new();
        let mut met: Option<u32> = None;
        for &u in front.iter() {
            for &v in tax.parents(u).iter().chain(tax.children(u)) {
                if seen.contains_key(&v) {
                    continue;
                }
                seen.insert(v, *level);
                if let Some(&d) = other.get(&v) {
                    let total = *level + d;
                    met = Some(met.map_or(total, |m| m.min(total)));
                }
                next.push(v);
            }
        }
        if met.is_some() {
            return met;
        }
        *front = next;
    }
    None
}
