//! Brute-force combinatorics on finite words.
//!
//! Everything here works directly on symbol slices and serves as the
//! independent oracle for claims that the automata pipeline proves.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use super::finite::{Alphabet, FiniteWord};
use super::morphism::standard;
use super::rational::ExactRational;
use crate::error::{Error, Result};

/// The first `len` letters of **p** over `{0,1,2}`.
pub fn p_prefix(len: usize) -> FiniteWord {
    if len == 0 {
        return FiniteWord::from_parts_unchecked(Alphabet::ternary_digits(), Vec::new());
    }
    standard::h()
        .fixed_point_prefix(b'0', len)
        .expect("h is prolongable on 0")
}

/// The first `len` letters of **q** = g(**p**).
pub fn q_prefix(len: usize) -> FiniteWord {
    // every g-image is nonempty, so len letters of p are enough
    let p = p_prefix(len);
    let mut q = standard::g().apply_symbols(p.symbols()).expect("p is over {0,1,2}");
    q.truncate(len);
    FiniteWord::from_parts_unchecked(Alphabet::binary(), q)
}

/// The first `len` letters of **q** built the other way round: inflate
/// **p** over `{a,b,c}` with g' and code the result with g''.
pub fn q_prefix_via_inflation(len: usize) -> FiniteWord {
    let p = standard::h_letters()
        .fixed_point_prefix(b'a', len.max(2))
        .expect("h is prolongable on a");
    let inflated = standard::g_prime()
        .apply_symbols(p.symbols())
        .expect("p is over {a,b,c}");
    let mut q = standard::g_second()
        .apply_symbols(&inflated)
        .expect("inflated p is over {a,b,c,1,2,3}");
    q.truncate(len);
    FiniteWord::from_parts_unchecked(Alphabet::binary(), q)
}

/// Length of the longest proper border of each prefix (KMP failure function).
fn failure(s: &[u8]) -> Vec<usize> {
    let mut fail = vec![0; s.len()];
    let mut k = 0;
    for i in 1..s.len() {
        while k > 0 && s[i] != s[k] {
            k = fail[k - 1];
        }
        if s[i] == s[k] {
            k += 1;
        }
        fail[i] = k;
    }
    fail
}

/// Shortest period of a nonempty symbol slice.
pub fn shortest_period(s: &[u8]) -> usize {
    debug_assert!(!s.is_empty());
    s.len() - failure(s)[s.len() - 1]
}

/// Shortest period and exponent `|w| / period`.
pub fn exponent_stats(w: &FiniteWord) -> Result<(usize, ExactRational)> {
    if w.is_empty() {
        return Err(Error::Domain("exponent of the empty word".into()));
    }
    let p = shortest_period(w.symbols());
    Ok((p, ExactRational::ratio(w.len(), p)))
}

/// A factor realizing a repetition: `w[start..start+len]` has period `period`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Repetition {
    pub start: usize,
    pub len: usize,
    pub period: usize,
}

impl Repetition {
    pub fn exponent(&self) -> ExactRational {
        ExactRational::ratio(self.len, self.period)
    }
}

/// Calls `visit` with every maximal repetition: for each period `p`, each
/// maximal stretch where `s[i] = s[i+p]` holds.
fn for_each_maximal_repetition(s: &[u8], mut visit: impl FnMut(Repetition)) {
    let n = s.len();
    for p in 1..n {
        let mut run = 0usize;
        for i in 0..n - p {
            if s[i] == s[i + p] {
                run += 1;
            } else {
                if run > 0 {
                    visit(Repetition {
                        start: i - run,
                        len: run + p,
                        period: p,
                    });
                }
                run = 0;
            }
        }
        if run > 0 {
            visit(Repetition {
                start: n - p - run,
                len: run + p,
                period: p,
            });
        }
    }
}

/// Critical exponent of a nonempty finite word: the largest exponent of any
/// of its factors.
pub fn critical_exponent(w: &FiniteWord) -> Result<ExactRational> {
    if w.is_empty() {
        return Err(Error::Domain("critical exponent of the empty word".into()));
    }
    let (len, period) = critical_pair(w.symbols());
    Ok(ExactRational::ratio(len, period))
}

/// `(len, period)` maximizing `len / period` over all factors; a single letter
/// gives `(1, 1)`.
pub(crate) fn critical_pair(s: &[u8]) -> (usize, usize) {
    let mut best = (1usize, 1usize);
    for_each_maximal_repetition(s, |r| {
        if r.len * best.1 > best.0 * r.period {
            best = (r.len, r.period);
        }
    });
    best
}

/// Every maximal repetition whose exponent is at least `threshold`
/// (`strict` asks for strictly greater).
pub fn repetitions_at_least(
    w: &FiniteWord,
    threshold: &ExactRational,
    strict: bool,
) -> Vec<Repetition> {
    let (num, den) = threshold
        .to_u64_pair()
        .expect("threshold is a small nonnegative rational");
    let mut out = Vec::new();
    for_each_maximal_repetition(w.symbols(), |r| {
        let lhs = r.len as u64 * den;
        let rhs = num * r.period as u64;
        if lhs > rhs || (!strict && lhs == rhs) {
            out.push(r);
        }
    });
    out
}

/// The distinct factors whose exponent equals `threshold` exactly.
pub fn factors_with_exponent(w: &FiniteWord, threshold: &ExactRational) -> BTreeSet<String> {
    let (num, den) = threshold
        .to_u64_pair()
        .expect("threshold is a small nonnegative rational");
    let s = w.symbols();
    let mut out = BTreeSet::new();
    for r in repetitions_at_least(w, threshold, false) {
        // factors of exponent num/den with period r.period have this length
        if !(r.period as u64 * num).is_multiple_of(den) {
            continue;
        }
        let flen = (r.period as u64 * num / den) as usize;
        for start in r.start..=r.start + r.len - flen {
            let f = &s[start..start + flen];
            if shortest_period(f) == r.period {
                out.insert(String::from_utf8_lossy(f).into_owned());
            }
        }
    }
    out
}

/// True when the binary word has at most `2i` distinct factors of every
/// length `i` from 1 to its length.
pub fn is_rote(w: &FiniteWord) -> Result<bool> {
    if !w.alphabet().is_binary() {
        return Err(Error::Domain("Rote words are binary".into()));
    }
    let s = w.symbols();
    for i in 1..=s.len() {
        if distinct_windows(s, i) > 2 * i {
            return Ok(false);
        }
    }
    Ok(true)
}

fn distinct_windows(s: &[u8], n: usize) -> usize {
    if n == 0 {
        return 1;
    }
    s.windows(n).collect::<HashSet<_>>().len()
}

/// Number of distinct length-`n` factors.
pub fn factor_complexity(prefix: &FiniteWord, n: usize) -> Result<usize> {
    check_len(prefix, n)?;
    Ok(distinct_windows(prefix.symbols(), n))
}

/// The distinct length-`n` factors in sorted order.
pub fn factors(prefix: &FiniteWord, n: usize) -> Result<BTreeSet<Vec<u8>>> {
    check_len(prefix, n)?;
    if n == 0 {
        return Ok(BTreeSet::from([Vec::new()]));
    }
    Ok(prefix.symbols().windows(n).map(<[u8]>::to_vec).collect())
}

fn check_len(prefix: &FiniteWord, n: usize) -> Result<()> {
    if n > prefix.len() {
        Err(Error::Range {
            index: n,
            limit: prefix.len(),
        })
    } else {
        Ok(())
    }
}

/// Number of length-`n` factors that are distinct up to rearrangement.
pub fn abelian_complexity(prefix: &FiniteWord, n: usize) -> Result<usize> {
    check_len(prefix, n)?;
    let s = prefix.symbols();
    let letters = prefix.alphabet().letters();
    if n == 0 {
        return Ok(1);
    }
    if letters.len() == 2 {
        // a window is determined up to rearrangement by its count of one letter
        let mut seen = vec![false; n + 1];
        let mut ones = s[..n].iter().filter(|&&c| c == letters[1]).count();
        seen[ones] = true;
        for i in n..s.len() {
            ones += usize::from(s[i] == letters[1]);
            ones -= usize::from(s[i - n] == letters[1]);
            seen[ones] = true;
        }
        return Ok(seen.iter().filter(|&&b| b).count());
    }
    let index: HashMap<u8, usize> = letters.iter().enumerate().map(|(i, &l)| (l, i)).collect();
    let mut counts = vec![0u32; letters.len()];
    for &c in &s[..n] {
        counts[index[&c]] += 1;
    }
    let mut seen = HashSet::new();
    seen.insert(counts.clone());
    for i in n..s.len() {
        counts[index[&s[i]]] += 1;
        counts[index[&s[i - n]]] -= 1;
        seen.insert(counts.clone());
    }
    Ok(seen.len())
}

/// Length-`n` factors whose reversal is also a factor of the prefix.
pub fn reversible_factors(prefix: &FiniteWord, n: usize) -> Result<BTreeSet<FiniteWord>> {
    let all = factors(prefix, n)?;
    Ok(all
        .iter()
        .filter(|f| {
            let mut r = (*f).clone();
            r.reverse();
            all.contains(&r)
        })
        .map(|f| FiniteWord::from_parts_unchecked(prefix.alphabet().clone(), f.clone()))
        .collect())
}

/// Outcome of a recurrence-gap measurement on a finite prefix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RecurrenceGap {
    /// Largest distance between consecutive starts of the same factor.
    Gap(usize),
    /// Some factor occurs only once, so the prefix cannot bound its gap.
    Inconclusive { factor: String },
}

/// Largest gap between consecutive occurrences of each length-`n` factor.
/// Factors occurring once map to `None`.
pub fn recurrence_gaps(prefix: &FiniteWord, n: usize) -> Result<BTreeMap<String, Option<usize>>> {
    if n == 0 {
        return Err(Error::Domain("factor length must be at least 1".into()));
    }
    check_len(prefix, n)?;
    let mut last: HashMap<&[u8], usize> = HashMap::new();
    let mut gap: HashMap<&[u8], Option<usize>> = HashMap::new();
    for (i, f) in prefix.symbols().windows(n).enumerate() {
        let g = gap.entry(f).or_insert(None);
        if let Some(prev) = last.insert(f, i) {
            *g = Some(g.map_or(i - prev, |m| m.max(i - prev)));
        }
    }
    Ok(gap
        .into_iter()
        .map(|(f, g)| (String::from_utf8_lossy(f).into_owned(), g))
        .collect())
}

pub fn max_recurrence_gap(prefix: &FiniteWord, n: usize) -> Result<RecurrenceGap> {
    let gaps = recurrence_gaps(prefix, n)?;
    let mut best = 0;
    for (f, g) in gaps {
        match g {
            Some(g) => best = best.max(g),
            None => return Ok(RecurrenceGap::Inconclusive { factor: f }),
        }
    }
    Ok(RecurrenceGap::Gap(best))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> FiniteWord {
        FiniteWord::parse(s).unwrap()
    }

    #[test]
    fn q_prefix_examples() {
        assert_eq!(q_prefix(12).as_str(), "011001001101");
        assert_eq!(q_prefix(0).as_str(), "");
        assert_eq!(&q_prefix(21).as_str()[11..21], "1001100110");
    }

    #[test]
    fn q_prefix_matches_g_of_printed_p() {
        let p = w("012102101021");
        let q = standard::g().apply(&p).unwrap();
        assert_eq!(&q.as_str()[..12], q_prefix(12).as_str());
    }

    #[test]
    fn two_constructions_of_q_agree() {
        for len in [0, 1, 2, 3, 17, 1000, 20000] {
            assert_eq!(q_prefix(len), q_prefix_via_inflation(len), "len {len}");
        }
    }

    #[test]
    fn exponent_examples() {
        let (p, e) = exponent_stats(&w("entente")).unwrap();
        assert_eq!((p, e.to_string()), (3, "7/3".into()));
        let (p, e) = exponent_stats(&w("aaaa")).unwrap();
        assert_eq!((p, e.to_string()), (1, "4/1".into()));
        let (p, e) = exponent_stats(&w("1001100110")).unwrap();
        assert_eq!((p, e.to_string()), (4, "5/2".into()));
        assert!(exponent_stats(&w("")).is_err());
    }

    #[test]
    fn critical_exponent_examples() {
        assert_eq!(critical_exponent(&w("01")).unwrap(), ExactRational::one());
        assert_eq!(
            critical_exponent(&w("entente")).unwrap(),
            ExactRational::ratio(7, 3)
        );
        assert_eq!(critical_exponent(&w("0")).unwrap(), ExactRational::one());
    }

    #[test]
    fn rote_examples() {
        assert!(is_rote(&w("00110011010011001001101001100100110010")).unwrap());
        assert!(is_rote(&w("0")).unwrap());
        // four length-2 factors meets the bound 4 <= 4
        assert!(is_rote(&w("00110")).unwrap());
        // eight length-3 factors exceed 6
        assert!(!is_rote(&w("0001011100")).unwrap());
        assert!(matches!(is_rote(&w("012")), Err(Error::Domain(_))));
    }

    #[test]
    fn complexity_examples() {
        let q = q_prefix(5000);
        assert_eq!(factor_complexity(&q, 1).unwrap(), 2);
        assert_eq!(factor_complexity(&q, 10).unwrap(), 20);
        assert_eq!(factor_complexity(&q, 16).unwrap(), 32);
        assert_eq!(factor_complexity(&q, 0).unwrap(), 1);
        assert!(matches!(
            factor_complexity(&q_prefix(5), 6),
            Err(Error::Range { .. })
        ));
    }

    #[test]
    fn abelian_examples() {
        let q = q_prefix(5000);
        assert_eq!(abelian_complexity(&q, 0).unwrap(), 1);
        assert_eq!(abelian_complexity(&q, 1).unwrap(), 2);
        assert_eq!(abelian_complexity(&w("0101"), 2).unwrap(), 1);
        assert_eq!(abelian_complexity(&w("0011"), 2).unwrap(), 3);
        // sorted windows as the oracle
        let p = q.prefix(300).unwrap();
        for n in 1..=60 {
            let sorted: HashSet<Vec<u8>> = p
                .symbols()
                .windows(n)
                .map(|f| {
                    let mut f = f.to_vec();
                    f.sort();
                    f
                })
                .collect();
            assert_eq!(abelian_complexity(&p, n).unwrap(), sorted.len(), "n = {n}");
        }
        let t = FiniteWord::parse("abcab").unwrap();
        assert_eq!(abelian_complexity(&t, 2).unwrap(), 3);
    }

    #[test]
    fn reversible_examples() {
        let q = q_prefix(5000);
        assert!(reversible_factors(&q, 16).unwrap().is_empty());
        assert!(!reversible_factors(&q, 15).unwrap().is_empty());
        let letters: Vec<String> = reversible_factors(&w("0010"), 1)
            .unwrap()
            .iter()
            .map(|f| f.to_string())
            .collect();
        assert_eq!(letters, vec!["0", "1"]);
    }

    #[test]
    fn recurrence_gap_examples() {
        let gaps = recurrence_gaps(&w("0101"), 2).unwrap();
        assert_eq!(gaps["01"], Some(2));
        assert_eq!(gaps["10"], None);
        assert!(matches!(
            max_recurrence_gap(&w("0101"), 2).unwrap(),
            RecurrenceGap::Inconclusive { .. }
        ));
        let q = q_prefix(5000);
        for n in [1usize, 10] {
            match max_recurrence_gap(&q, n).unwrap() {
                RecurrenceGap::Gap(g) => assert!(g <= 7 * n, "n={n} gap={g}"),
                other => panic!("{other:?}"),
            }
        }
    }

    #[test]
    fn unique_five_halves_factor() {
        let q = q_prefix(5000);
        let found = factors_with_exponent(&q, &ExactRational::ratio(5, 2));
        assert_eq!(found.into_iter().collect::<Vec<_>>(), vec!["1001100110"]);
        assert!(repetitions_at_least(&q, &ExactRational::ratio(5, 2), true).is_empty());
    }
}
