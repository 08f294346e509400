//! Exhaustive enumeration of finite binary Rote words under an exponent
//! bound.
//!
//! Words are grown one letter at a time. When a letter is appended, the only
//! new factors are suffixes of the new word, so both the complexity bound and
//! the exponent bound are re-checked on suffixes alone.

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::word::{stats, Alphabet, ExactRational, FiniteWord};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchConfig {
    pub threshold: ExactRational,
    /// Prune factors of exponent `>= threshold` when set, `> threshold` otherwise.
    pub strict: bool,
    pub max_length: Option<usize>,
    pub first_letter_fixed: bool,
}

impl SearchConfig {
    pub fn new(threshold: ExactRational, strict: bool) -> Result<Self> {
        if threshold <= ExactRational::one() {
            return Err(Error::Domain(format!(
                "threshold {threshold} must exceed 1"
            )));
        }
        threshold
            .to_u64_pair()
            .ok_or_else(|| Error::Domain("threshold too large".into()))?;
        Ok(SearchConfig {
            threshold,
            strict,
            max_length: None,
            first_letter_fixed: false,
        })
    }

    pub fn with_max_length(mut self, cap: usize) -> Self {
        self.max_length = Some(cap);
        self
    }

    pub fn with_first_letter_fixed(mut self, fixed: bool) -> Self {
        self.first_letter_fixed = fixed;
        self
    }

    /// Length of the shortest repetition of period `p` that the exponent
    /// predicate forbids.
    fn forbidden_len(&self, p: usize) -> usize {
        let (num, den) = self.threshold.to_u64_pair().expect("checked in new");
        let np = num * p as u64;
        let len = if self.strict {
            np.div_ceil(den)
        } else {
            np / den + 1
        };
        len as usize
    }

    /// Does the word (symbols in `{0,1}`) satisfy the exponent predicate on
    /// every factor? Checked from scratch with the word-core oracle.
    pub fn admits(&self, w: &FiniteWord) -> bool {
        let violations = stats::repetitions_at_least(w, &self.threshold, !self.strict);
        violations.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchResult {
    pub max_depth: usize,
    /// Words with no valid one-letter extension.
    pub maximal_words: BTreeSet<FiniteWord>,
    /// `level_counts[n]` is the number of valid words of length `n`.
    pub level_counts: Vec<u64>,
    pub truncated: bool,
}

impl SearchResult {
    pub fn maximal_of_length(&self, len: usize) -> BTreeSet<FiniteWord> {
        self.maximal_words
            .iter()
            .filter(|w| w.len() == len)
            .cloned()
            .collect()
    }
}

/// A word together with its per-length distinct factor counts.
#[derive(Clone, Debug)]
struct Node {
    word: Vec<u8>,
    /// `counts[i]` = distinct factors of length `i`; index 0 unused.
    counts: Vec<u32>,
}

impl Node {
    fn root(letter: u8) -> Node {
        Node {
            word: vec![letter],
            counts: vec![1, 1],
        }
    }

    /// The child obtained by appending `letter`, if it stays valid.
    fn child(&self, letter: u8, cfg: &SearchConfig) -> Option<Node> {
        let mut word = Vec::with_capacity(self.word.len() + 1);
        word.extend_from_slice(&self.word);
        word.push(letter);
        let m = word.len();

        // the only new factors are suffixes longer than the longest suffix
        // that already occurred
        let seen = longest_repeated_suffix(&word);
        let mut counts = self.counts.clone();
        counts.push(0);
        for (i, c) in counts.iter_mut().enumerate().skip(seen + 1) {
            *c += 1;
            if *c as usize > 2 * i {
                return None;
            }
        }

        for p in 1..m {
            let len = cfg.forbidden_len(p);
            if len > m {
                break;
            }
            let start = m - len;
            if (start..m - p).all(|j| word[j] == word[j + p]) {
                return None;
            }
        }
        Some(Node { word, counts })
    }

    fn children(&self, cfg: &SearchConfig) -> Vec<Node> {
        b"01"
            .iter()
            .filter_map(|&l| self.child(l, cfg))
            .collect()
    }

    fn to_word(&self) -> FiniteWord {
        FiniteWord::new(Alphabet::binary(), self.word.clone()).expect("binary symbols")
    }
}

/// Length of the longest proper suffix of `w` that also occurs ending
/// earlier in `w`, via the Z-function of the reversal.
fn longest_repeated_suffix(w: &[u8]) -> usize {
    let r: Vec<u8> = w.iter().rev().copied().collect();
    let n = r.len();
    let mut z = vec![0usize; n];
    let (mut l, mut rr) = (0usize, 0usize);
    let mut best = 0;
    for i in 1..n {
        if i < rr {
            z[i] = (rr - i).min(z[i - l]);
        }
        while i + z[i] < n && r[z[i]] == r[i + z[i]] {
            z[i] += 1;
        }
        if i + z[i] > rr {
            l = i;
            rr = i + z[i];
        }
        best = best.max(z[i]);
    }
    best
}

fn roots(cfg: &SearchConfig) -> Vec<Node> {
    if cfg.first_letter_fixed {
        vec![Node::root(b'0')]
    } else {
        vec![Node::root(b'0'), Node::root(b'1')]
    }
}

/// Explores the whole tree of valid words breadth-first.
pub fn grow_tree(cfg: &SearchConfig) -> Result<SearchResult> {
    let mut frontier = roots(cfg);
    let mut level_counts = vec![1u64, frontier.len() as u64];
    let mut maximal_words = BTreeSet::new();
    let mut truncated = false;
    let mut max_depth = 1;

    while !frontier.is_empty() {
        let depth = frontier[0].word.len();
        if cfg.max_length.is_some_and(|cap| depth >= cap) {
            // words at the cap are reported as maximal only if they truly are
            for node in &frontier {
                if node.children(cfg).is_empty() {
                    maximal_words.insert(node.to_word());
                } else {
                    truncated = true;
                }
            }
            break;
        }
        let expanded: Vec<(usize, Vec<Node>)> = frontier
            .par_iter()
            .enumerate()
            .map(|(i, n)| (i, n.children(cfg)))
            .collect();
        let mut next = Vec::new();
        for (i, kids) in expanded {
            if kids.is_empty() {
                maximal_words.insert(frontier[i].to_word());
            }
            next.extend(kids);
        }
        if !next.is_empty() {
            max_depth = depth + 1;
            level_counts.push(next.len() as u64);
        }
        frontier = next;
    }

    Ok(SearchResult {
        max_depth,
        maximal_words,
        level_counts,
        truncated,
    })
}

/// Per-length counts of valid words.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelCounts {
    /// `counts[n]` for `n` in `0..=reached`.
    pub counts: Vec<u64>,
    /// False when the node budget ran out before `n_max`.
    pub complete: bool,
}

/// Number of valid words of each length up to `n_max`. The frontier is
/// kept in memory, so `node_budget` bounds its size; running out returns
/// the counts computed so far with `complete = false`.
pub fn level_counts(cfg: &SearchConfig, n_max: usize, node_budget: usize) -> LevelCounts {
    let mut frontier = roots(cfg);
    let mut counts = vec![1u64];
    if n_max == 0 {
        return LevelCounts {
            counts,
            complete: true,
        };
    }
    counts.push(frontier.len() as u64);
    for _ in 2..=n_max {
        let next: Vec<Node> = frontier
            .par_iter()
            .flat_map_iter(|n| n.children(cfg))
            .collect();
        if next.len() > node_budget {
            return LevelCounts {
                counts,
                complete: false,
            };
        }
        counts.push(next.len() as u64);
        frontier = next;
    }
    LevelCounts {
        counts,
        complete: true,
    }
}

/// Closes a set of binary words under reversal and letter exchange.
pub fn symmetry_closure(words: &BTreeSet<FiniteWord>) -> Result<BTreeSet<FiniteWord>> {
    let mut out = BTreeSet::new();
    for w in words {
        let c = w.complemented()?;
        out.insert(w.reversed());
        out.insert(c.reversed());
        out.insert(c);
        out.insert(w.clone());
    }
    Ok(out)
}

/// One row of the per-level count report.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelRow {
    pub n: usize,
    pub count: u64,
    pub bound: u64,
    pub ok: bool,
}

/// Compares counts against `factor * n` for `n` in `from..=to`.
pub fn bound_rows(counts: &[u64], factor: u64, from: usize, to: usize) -> Vec<LevelRow> {
    (from..=to.min(counts.len().saturating_sub(1)))
        .map(|n| {
            let bound = factor * n as u64;
            LevelRow {
                n,
                count: counts[n],
                bound,
                ok: counts[n] <= bound,
            }
        })
        .collect()
}

/// CSV with header `n,count,bound_16n,ok`.
pub fn rows_to_csv(rows: &[LevelRow]) -> String {
    let mut out = String::from("n,count,bound_16n,ok\n");
    for r in rows {
        out.push_str(&format!("{},{},{},{}\n", r.n, r.count, r.bound, r.ok));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn five_halves(strict: bool) -> SearchConfig {
        SearchConfig::new(ExactRational::ratio(5, 2), strict).unwrap()
    }

    #[test]
    fn repeated_suffix() {
        assert_eq!(longest_repeated_suffix(b"0"), 0);
        assert_eq!(longest_repeated_suffix(b"0101"), 2);
        assert_eq!(longest_repeated_suffix(b"0011"), 1);
        assert_eq!(longest_repeated_suffix(b"000"), 2);
    }

    #[test]
    fn square_free_binary_words_stop_at_three() {
        let cfg = SearchConfig::new(ExactRational::integer(2), true)
            .unwrap()
            .with_max_length(10)
            .with_first_letter_fixed(true);
        let res = grow_tree(&cfg).unwrap();
        assert_eq!(res.max_depth, 3);
        assert!(!res.truncated);
        let longest: Vec<String> = res.maximal_of_length(3).iter().map(|w| w.to_string()).collect();
        assert_eq!(longest, vec!["010"]);
    }

    #[test]
    fn cap_sets_truncated() {
        let cfg = five_halves(true).with_max_length(10);
        let res = grow_tree(&cfg).unwrap();
        assert!(res.truncated);
        assert_eq!(res.max_depth, 10);
    }

    #[test]
    fn threshold_must_exceed_one() {
        assert!(SearchConfig::new(ExactRational::one(), true).is_err());
    }

    #[test]
    fn closure_examples() {
        let one: BTreeSet<_> = [FiniteWord::binary("0").unwrap()].into();
        let c: Vec<String> = symmetry_closure(&one).unwrap().iter().map(|w| w.to_string()).collect();
        assert_eq!(c, vec!["0", "1"]);
        let zo: BTreeSet<_> = [FiniteWord::binary("01").unwrap()].into();
        let c: Vec<String> = symmetry_closure(&zo).unwrap().iter().map(|w| w.to_string()).collect();
        assert_eq!(c, vec!["01", "10"]);
    }

    /// Incremental pruning agrees with filtering all words by the oracles.
    #[test]
    fn counts_match_naive_enumeration() {
        for strict in [true, false] {
            let cfg = five_halves(strict);
            let lc = level_counts(&cfg, 14, 1 << 20);
            for n in 1..=14usize {
                let naive = (0u32..1 << n)
                    .filter(|bits| {
                        let s: Vec<u8> =
                            (0..n).map(|i| b'0' + ((bits >> (n - 1 - i)) & 1) as u8).collect();
                        let w = FiniteWord::new(Alphabet::binary(), s).unwrap();
                        stats::is_rote(&w).unwrap() && cfg.admits(&w)
                    })
                    .count() as u64;
                assert_eq!(lc.counts[n], naive, "strict={strict} n={n}");
            }
        }
    }

    #[test]
    fn fixed_first_letter_halves_counts() {
        let cfg = five_halves(false);
        let all = level_counts(&cfg, 40, 1 << 20);
        let half = level_counts(&cfg.clone().with_first_letter_fixed(true), 40, 1 << 20);
        for n in 1..=40 {
            assert_eq!(all.counts[n], 2 * half.counts[n]);
        }
    }

    #[test]
    fn budget_marks_partial() {
        let lc = level_counts(&five_halves(false), 60, 50);
        assert!(!lc.complete);
        assert!(lc.counts.len() < 61);
    }

    #[test]
    fn csv_rows() {
        let rows = bound_rows(&[1, 2, 4, 6], 16, 1, 3);
        assert_eq!(
            rows_to_csv(&rows),
            "n,count,bound_16n,ok\n1,2,16,true\n2,4,32,true\n3,6,48,true\n"
        );
    }
}
