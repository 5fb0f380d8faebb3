use std::ops::Range;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::text::NounSequence;

/// Fewest nouns a time point may hold.
pub const MIN_SEGMENT_NOUNS: usize = 5;
/// Fewest nouns a conversation must hold to be analysed at all.
pub const MIN_CONVERSATION_NOUNS: usize = 15;

/// Word and noun counts of one sentence, the unit segmentation works in.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SentenceCounts {
    pub words: usize,
    pub nouns: usize,
}

/// One time point: a run of whole sentences.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Segment {
    /// 1-based time point.
    pub t: usize,
    pub sentences: Range<usize>,
    /// Indices into the concatenated noun list.
    pub nouns: Range<usize>,
    pub words: usize,
}

/// Per-sentence counts of a noun sequence.
pub fn sentence_counts(seq: &NounSequence) -> Vec<SentenceCounts> {
    let mut out: Vec<SentenceCounts> =
        seq.sentences.iter().map(|s| SentenceCounts { words: s.tokens.len(), nouns: 0 }).collect();
    for n in &seq.nouns {
        out[n.sentence].nouns += 1;
    }
    out
}

/// Splits sentences into `t` consecutive segments whose boundaries lie as
/// close as possible to the equal word-count cut points `k·W/t`, subject to
/// every segment holding at least [`MIN_SEGMENT_NOUNS`] nouns.
///
/// Minimizes the total distance (in words) of the boundaries from their cut
/// points; without the noun constraint this is each cut's nearest sentence
/// break. Ties go to the earlier break.
pub fn segment(sentences: &[SentenceCounts], t: usize) -> Result<Vec<Segment>> {
    if t < 2 {
        return Err(Error::Input(format!("need at least 2 time points, got {t}")));
    }
    let total_nouns: usize = sentences.iter().map(|s| s.nouns).sum();
    let needed = MIN_CONVERSATION_NOUNS.max(MIN_SEGMENT_NOUNS * t);
    if total_nouns < needed {
        return Err(Error::TooFewNouns { needed, got: total_nouns });
    }

    let s = sentences.len();
    let mut words = vec![0usize; s + 1];
    let mut nouns = vec![0usize; s + 1];
    for (i, c) in sentences.iter().enumerate() {
        words[i + 1] = words[i] + c.words;
        nouns[i + 1] = nouns[i] + c.nouns;
    }
    let total_words = words[s] as i128;
    // distance of break b from cut k, scaled by t to stay integral
    let cost = |k: usize, b: usize| (t as i128 * words[b] as i128 - k as i128 * total_words).unsigned_abs();
    // latest break a with nouns[b] - nouns[a] >= MIN for each b (monotone in b)
    let mut limit = vec![None; s + 1];
    let mut a = 0;
    for b in 0..=s {
        while a < b && nouns[b] - nouns[a + 1] >= MIN_SEGMENT_NOUNS {
            a += 1;
        }
        if nouns[b] - nouns[a] >= MIN_SEGMENT_NOUNS && a < b {
            limit[b] = Some(a);
        }
    }

    const INF: u128 = u128::MAX;
    // best[k][b]: least cost with the k-th boundary at b; from[k][b]: its predecessor
    let mut best = vec![vec![INF; s + 1]; t + 1];
    let mut from = vec![vec![0usize; s + 1]; t + 1];
    best[0][0] = 0;
    for k in 1..=t {
        // running argmin of best[k-1][0..=a]
        let mut run_min = INF;
        let mut run_arg = 0;
        let mut scanned = 0;
        for b in 1..=s {
            let Some(lim) = limit[b] else { continue };
            while scanned <= lim {
                if best[k - 1][scanned] < run_min {
                    run_min = best[k - 1][scanned];
                    run_arg = scanned;
                }
                scanned += 1;
            }
            if run_min == INF || (k == t && b != s) {
                continue;
            }
            let c = if k == t { 0 } else { cost(k, b) };
            best[k][b] = run_min + c;
            from[k][b] = run_arg;
        }
    }
    if best[t][s] == INF {
        return Err(Error::Segmentation(format!(
            "cannot split {total_nouns} nouns in {s} sentences into {t} time points of at least {MIN_SEGMENT_NOUNS} nouns"
        )));
    }

    let mut bounds = vec![s; t + 1];
    for k in (1..=t).rev() {
        bounds[k - 1] = from[k][bounds[k]];
    }
    Ok((0..t)
        .map(|k| {
            let (lo, hi) = (bounds[k], bounds[k + 1]);
            Segment { t: k + 1, sentences: lo..hi, nouns: nouns[lo]..nouns[hi], words: words[hi] - words[lo] }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn counts(spec: &[(usize, usize)]) -> Vec<SentenceCounts> {
        spec.iter().map(|&(words, nouns)| SentenceCounts { words, nouns }).collect()
    }

    /// All boundary vectors, scored the same way; for checking the DP.
    fn brute(sentences: &[SentenceCounts], t: usize) -> Option<(u128, Vec<usize>)> {
        let s = sentences.len();
        let w: Vec<usize> = (0..=s).map(|i| sentences[..i].iter().map(|c| c.words).sum()).collect();
        let n: Vec<usize> = (0..=s).map(|i| sentences[..i].iter().map(|c| c.nouns).sum()).collect();
        let mut best: Option<(u128, Vec<usize>)> = None;
        let mut bounds = vec![0; t + 1];
        bounds[t] = s;
        fn rec(
            k: usize,
            t: usize,
            bounds: &mut Vec<usize>,
            w: &[usize],
            n: &[usize],
            best: &mut Option<(u128, Vec<usize>)>,
        ) {
            if k == t {
                if n[bounds[t]] - n[bounds[t - 1]] < MIN_SEGMENT_NOUNS {
                    return;
                }
                let total = w[w.len() - 1] as i128;
                let c: u128 =
                    (1..t).map(|j| (t as i128 * w[bounds[j]] as i128 - j as i128 * total).unsigned_abs()).sum();
                if best.as_ref().is_none_or(|(bc, _)| c < *bc) {
                    *best = Some((c, bounds.clone()));
                }
                return;
            }
            for b in bounds[k - 1] + 1..bounds[t] {
                if n[b] - n[bounds[k - 1]] >= MIN_SEGMENT_NOUNS {
                    bounds[k] = b;
                    rec(k + 1, t, bounds, w, n, best);
                }
            }
        }
        rec(1, t, &mut bounds, &w, &n, &mut best);
        best
    }

    #[test]
    fn cuts_near_equal_word_counts() {
        // 30 sentences of 10 words and 1 noun each: cuts at words 100 and 200
        let segs = segment(&counts(&[(10, 1); 30]), 3).unwrap();
        assert_eq!(segs.iter().map(|s| s.sentences.clone()).collect::<Vec<_>>(), [0..10, 10..20, 20..30]);
        assert_eq!(segs.iter().map(|s| s.words).collect::<Vec<_>>(), [100, 100, 100]);
    }

    #[test]
    fn fifteen_nouns_give_five_per_segment() {
        let segs = segment(&counts(&[(4, 1); 15]), 3).unwrap();
        assert!(segs.iter().all(|s| s.nouns.len() == 5));
    }

    #[test]
    fn boundary_shifts_to_keep_five_nouns() {
        // equal cuts at words 40 and 80 fall after sentences 4 and 8, which
        // would leave segment 2 with 4 nouns; the second cut moves one
        // sentence later
        let c = counts(&[(10, 2), (10, 1), (10, 1), (10, 2), (10, 1), (10, 1), (10, 1), (10, 1), (10, 2), (10, 2), (10, 2), (10, 1)]);
        let naive = [4usize, 8];
        assert_eq!(c[naive[0]..naive[1]].iter().map(|s| s.nouns).sum::<usize>(), 4);
        let segs = segment(&c, 3).unwrap();
        assert_eq!(segs[0].sentences, 0..4);
        assert_eq!(segs[1].sentences, 4..9);
        assert!(segs.iter().all(|s| s.nouns.len() >= MIN_SEGMENT_NOUNS));
    }

    #[test]
    fn too_few_nouns_and_unsatisfiable() {
        assert!(matches!(segment(&counts(&[(5, 1); 14]), 3), Err(Error::TooFewNouns { needed: 15, got: 14 })));
        assert!(matches!(segment(&counts(&[(5, 1); 20]), 6), Err(Error::TooFewNouns { needed: 30, .. })));
        // all nouns in one sentence: no valid break
        assert!(matches!(segment(&counts(&[(5, 0), (20, 20), (5, 0)]), 3), Err(Error::Segmentation(_))));
        assert!(segment(&counts(&[(5, 5); 4]), 1).is_err());
    }

    proptest! {
        #[test]
        fn partition_and_optimality(spec in prop::collection::vec((1usize..20, 0usize..5), 1..18), t in 2usize..5) {
            let c = counts(&spec);
            if c.iter().map(|s| s.nouns).sum::<usize>() < MIN_CONVERSATION_NOUNS {
                let too_few = matches!(segment(&c, t), Err(Error::TooFewNouns { .. }));
                prop_assert!(too_few);
                return Ok(());
            }
            match (segment(&c, t), brute(&c, t)) {
                (Ok(segs), Some((cost, bounds))) => {
                    prop_assert_eq!(segs.len(), t);
                    prop_assert_eq!(segs[0].sentences.start, 0);
                    prop_assert_eq!(segs[t - 1].sentences.end, c.len());
                    prop_assert_eq!(segs[0].nouns.start, 0);
                    for w in segs.windows(2) {
                        prop_assert_eq!(w[0].sentences.end, w[1].sentences.start);
                        prop_assert_eq!(w[0].nouns.end, w[1].nouns.start);
                    }
                    prop_assert!(segs.iter().all(|s| s.nouns.len() >= MIN_SEGMENT_NOUNS));
                    let total: usize = c.iter().map(|s| s.words).sum();
                    let got: u128 = segs[..t - 1]
                        .iter()
                        .enumerate()
                        .map(|(j, s)| {
                            let w: usize = c[..s.sentences.end].iter().map(|x| x.words).sum();
                            (t as i128 * w as i128 - (j as i128 + 1) * total as i128).unsigned_abs()
                        })
                        .sum();
                    prop_assert_eq!(got, cost, "brute bounds {:?}", bounds);
                }
                (Err(_), None) => {}
                (got, want) => prop_assert!(false, "segment {:?} vs brute {:?}", got, want),
            }
        }
    }
}
