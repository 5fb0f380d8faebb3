//! Brute-force reference implementation. Everything is recomputed from the
//! raw parent/child lists with hash sets and plain BFS, and the formulas
//! are written out term by term, sharing no code with the library.

use std::cell::RefCell;
use std::collections::{HashMap, HashSet, VecDeque};

use wordgraph::measures::{IcFormula, IcSimFormula, MeasureId, PathFormula};
use wordgraph::{WordGraph, WordId};

pub struct Oracle<'g> {
    pub g: &'g WordGraph,
    depth: Vec<u32>,
    pub mv: f64,
    pub ml: f64,
    pub md: f64,
    pub min_c: f64,
    pub max_c: f64,
    /// 1/|ancestors| per leaf, filled lazily.
    leaf_weight: RefCell<HashMap<u32, f64>>,
    memo: RefCell<HashMap<Vec<u32>, Stats>>,
    /// (lcs, summed up-distance, distance) per ordered pair.
    pair_memo: RefCell<HashMap<(WordId, WordId), PairFacts>>,
}

type PairFacts = (u32, u32, u32);

#[derive(Clone, Debug)]
pub struct Stats {
    pub depth: u32,
    pub subsumers: HashSet<u32>,
    pub subvertices: HashSet<u32>,
    pub leaves: usize,
    pub commonness: f64,
    pub inverse_depth_sum: f64,
}

impl<'g> Oracle<'g> {
    /// `min_c` is taken as given: recomputing it means a full sweep over
    /// every word, which the constants test does separately.
    pub fn new(g: &'g WordGraph, min_c: f64) -> Self {
        let tax = g.taxonomy();
        let n = tax.len() as u32;
        let mut depth = vec![0u32; n as usize];
        fn d(v: u32, g: &WordGraph, memo: &mut [u32]) -> u32 {
            if memo[v as usize] == 0 {
                let ps = g.taxonomy().parents(v);
                memo[v as usize] = if ps.is_empty() { 1 } else { 1 + ps.iter().map(|&p| d(p, g, memo)).min().unwrap() };
            }
            memo[v as usize]
        }
        for v in 0..n {
            d(v, g, &mut depth);
        }
        let mut o = Oracle {
            g,
            mv: f64::from(n),
            ml: (0..n).filter(|&v| tax.children(v).is_empty()).count() as f64,
            md: f64::from(*depth.iter().max().unwrap()),
            depth,
            min_c,
            max_c: 0.0,
            leaf_weight: RefCell::default(),
            memo: RefCell::default(),
            pair_memo: RefCell::default(),
        };
        o.max_c = o.commonness(&o.descendants(&[tax.root()]));
        o
    }

    pub fn depth(&self, v: u32) -> u32 {
        self.depth[v as usize]
    }

    pub fn ancestors(&self, from: &[u32]) -> HashSet<u32> {
        let mut seen: HashSet<u32> = from.iter().copied().collect();
        let mut stack: Vec<u32> = from.to_vec();
        while let Some(v) = stack.pop() {
            for &p in self.g.taxonomy().parents(v) {
                if seen.insert(p) {
                    stack.push(p);
                }
            }
        }
        seen
    }

    pub fn descendants(&self, from: &[u32]) -> HashSet<u32> {
        let mut seen: HashSet<u32> = from.iter().copied().collect();
        let mut stack: Vec<u32> = from.to_vec();
        while let Some(v) = stack.pop() {
            for &c in self.g.taxonomy().children(v) {
                if seen.insert(c) {
                    stack.push(c);
                }
            }
        }
        seen
    }

    /// Σ over the leaves of `set` of 1/|ancestors(leaf)|, in ascending
    /// vertex order.
    pub fn commonness(&self, set: &HashSet<u32>) -> f64 {
        let mut leaves: Vec<u32> =
            set.iter().copied().filter(|&v| self.g.taxonomy().children(v).is_empty()).collect();
        leaves.sort_unstable();
        leaves
            .iter()
            .map(|&l| *self.leaf_weight.borrow_mut().entry(l).or_insert_with(|| 1.0 / self.ancestors(&[l]).len() as f64))
            .sum()
    }

    pub fn stats_of(&self, senses: &[u32]) -> Stats {
        if let Some(s) = self.memo.borrow().get(senses) {
            return s.clone();
        }
        let s = self.compute_stats(senses);
        self.memo.borrow_mut().insert(senses.to_vec(), s.clone());
        s
    }

    fn compute_stats(&self, senses: &[u32]) -> Stats {
        let subvertices = self.descendants(senses);
        let mut sorted: Vec<u32> = subvertices.iter().copied().collect();
        sorted.sort_unstable();
        Stats {
            depth: senses.iter().map(|&s| self.depth(s)).min().unwrap(),
            subsumers: self.ancestors(senses),
            leaves: sorted.iter().filter(|&&v| self.g.taxonomy().children(v).is_empty()).count(),
            commonness: self.commonness(&subvertices),
            inverse_depth_sum: sorted.iter().map(|&v| 1.0 / f64::from(self.depth(v))).sum(),
            subvertices,
        }
    }

    pub fn word_stats(&self, w: WordId) -> Stats {
        self.stats_of(self.g.senses(w))
    }

    fn down_distances(&self, c: u32) -> HashMap<u32, u32> {
        let mut dist = HashMap::from([(c, 0)]);
        let mut q = VecDeque::from([c]);
        while let Some(v) = q.pop_front() {
            let d = dist[&v];
            for &ch in self.g.taxonomy().children(v) {
                dist.entry(ch).or_insert_with(|| {
                    q.push_back(ch);
                    d + 1
                });
            }
        }
        dist
    }

    /// Common ancestor with the shortest combined path (word vertex to
    /// sense counts as one step), then the deepest, then the lowest offset.
    pub fn lcs(&self, x: WordId, y: WordId) -> (u32, u32) {
        let (l, sum, _) = self.pair(x, y);
        (l, sum)
    }

    /// Edges between the closest senses in the undirected is-a graph.
    pub fn distance(&self, x: WordId, y: WordId) -> u32 {
        self.pair(x, y).2
    }

    fn pair(&self, x: WordId, y: WordId) -> (u32, u32, u32) {
        if let Some(&p) = self.pair_memo.borrow().get(&(x, y)) {
            return p;
        }
        let (l, sum) = self.compute_lcs(x, y);
        let p = (l, sum, self.compute_distance(x, y));
        self.pair_memo.borrow_mut().insert((x, y), p);
        p
    }

    fn compute_lcs(&self, x: WordId, y: WordId) -> (u32, u32) {
        let (sx, sy) = (self.g.senses(x), self.g.senses(y));
        let common: Vec<u32> = self.ancestors(sx).intersection(&self.ancestors(sy)).copied().collect();
        let mut best: Option<(u32, std::cmp::Reverse<u32>, u32, u32)> = None;
        for c in common {
            let down = self.down_distances(c);
            let dx = sx.iter().filter_map(|s| down.get(s)).min().unwrap() + 1;
            let dy = sy.iter().filter_map(|s| down.get(s)).min().unwrap() + 1;
            let key = (dx + dy, std::cmp::Reverse(self.depth(c)), self.g.taxonomy().id(c).0, c);
            if best.is_none_or(|b| key < b) {
                best = Some(key);
            }
        }
        let b = best.expect("single-rooted taxonomy always has a common ancestor");
        (b.3, b.0)
    }

    fn compute_distance(&self, x: WordId, y: WordId) -> u32 {
        let targets: HashSet<u32> = self.g.senses(y).iter().copied().collect();
        let mut dist: HashMap<u32, u32> = self.g.senses(x).iter().map(|&s| (s, 0)).collect();
        let mut q: VecDeque<u32> = self.g.senses(x).iter().copied().collect();
        while let Some(v) = q.pop_front() {
            if targets.contains(&v) {
                return dist[&v];
            }
            let d = dist[&v];
            let tax = self.g.taxonomy();
            for &u in tax.parents(v).iter().chain(tax.children(v)) {
                dist.entry(u).or_insert_with(|| {
                    q.push_back(u);
                    d + 1
                });
            }
        }
        unreachable!("taxonomy is connected")
    }

    pub fn ic(&self, s: &Stats, f: IcFormula) -> f64 {
        let ln = f64::ln;
        let (d, sub, desc, l, c) =
            (f64::from(s.depth), s.subsumers.len() as f64, s.subvertices.len() as f64, s.leaves as f64, s.commonness);
        match f {
            IcFormula::Blanchard => 1.0 - ln(l) / ln(self.ml),
            IcFormula::Meng => ln(d) / ln(self.md) * (1.0 - ln(1.0 + s.inverse_depth_sum) / ln(self.mv)),
            IcFormula::Sanchez => ln(l / (self.ml * sub)) / ln(self.min_c / self.ml),
            IcFormula::SanchezBatet => ln(c / self.max_c) / ln(self.min_c / self.max_c),
            IcFormula::Seco => 1.0 - ln(desc) / ln(self.mv),
            IcFormula::Yuan => ln(d) / ln(self.md) * (1.0 - ln(l) / ln(self.ml)) + ln(sub) / ln(self.mv),
            IcFormula::Zhou => 0.5 * (1.0 - ln(desc) / ln(self.mv) + ln(d) / ln(self.md)),
        }
    }

    pub fn measure(&self, x: WordId, y: Option<WordId>, m: MeasureId) -> f64 {
        let ln = f64::ln;
        let sx = self.word_stats(x);
        match m {
            MeasureId::Abstraction => 1.0 - (f64::from(sx.depth) - 1.0) / (self.md - 1.0),
            MeasureId::Polysemy => self.g.senses(x).len() as f64,
            MeasureId::Ic(f) => self.ic(&sx, f),
            MeasureId::Path(f) => {
                let y = y.unwrap();
                let (l, _) = self.lcs(x, y);
                let (dist, h, md) = (f64::from(self.distance(x, y)), f64::from(self.depth(l)), self.md);
                match f {
                    PathFormula::AlMubaidNguyen => 1.0 - ln(1.0 + dist * (md - h)) / ln(1.0 + 2.0 * (md - 1.0) * (md - 1.0)),
                    PathFormula::LeacockChodorow => 1.0 - ln(dist + 1.0) / ln(2.0 * md - 1.0),
                    PathFormula::Li => {
                        (-0.2 * dist).exp() * ((1.2 * h).exp() - 1.0) / ((1.2 * h).exp() + 1.0)
                    }
                    PathFormula::Rada => 1.0 - dist / (2.0 * (md - 1.0)),
                    PathFormula::WuPalmer => {
                        if 2.0 * (h - 1.0) + dist == 0.0 {
                            1.0
                        } else {
                            2.0 * (h - 1.0) / (2.0 * (h - 1.0) + dist)
                        }
                    }
                }
            }
            MeasureId::IcSim(f, ic) => {
                let y = y.unwrap();
                let (l, _) = self.lcs(x, y);
                let ix = self.ic(&sx, ic);
                let iy = self.ic(&self.word_stats(y), ic);
                let il = self.ic(&self.stats_of(&[l]), ic);
                let dist = f64::from(self.distance(x, y));
                let lin = if ix + iy == 0.0 { 0.0 } else { 2.0 * il / (ix + iy) };
                match f {
                    IcSimFormula::JiangConrath => 1.0 - (ix + iy - 2.0 * il) / 2.0,
                    IcSimFormula::Lin => lin,
                    IcSimFormula::Meng => {
                        if ix + iy == 0.0 {
                            0.0
                        } else {
                            lin.powf((0.08 * dist).exp() - 1.0)
                        }
                    }
                    IcSimFormula::Resnik => il,
                    IcSimFormula::Zhou => {
                        1.0 - 0.5 * (1.0 - ln(dist + 1.0) / ln(2.0 * self.md - 1.0)) - 0.25 * (ix + iy - 2.0 * il)
                    }
                }
            }
        }
    }
}
