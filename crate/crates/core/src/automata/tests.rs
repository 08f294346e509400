use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use super::*;

fn random_dfa(seed: u64, radices: Vec<u32>, max_states: usize) -> MultiTrackDfa {
    let mut rng = StdRng::seed_from_u64(seed);
    let alphabet = TrackAlphabet::new(radices).unwrap();
    let n = rng.random_range(1..=max_states);
    let trans = (0..n * alphabet.size())
        .map(|_| {
            if rng.random_bool(0.15) {
                DEAD
            } else {
                rng.random_range(0..n as u32)
            }
        })
        .collect();
    let accepting = (0..n).map(|_| rng.random_bool(0.4)).collect();
    MultiTrackDfa::from_parts(alphabet, 0, accepting, trans).unwrap()
}

/// All letter strings of length at most `max_len`.
fn strings(size: u32, max_len: usize) -> Vec<Vec<u32>> {
    let mut out = vec![vec![]];
    let mut layer = vec![vec![]];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &layer {
            for l in 0..size {
                let mut v: Vec<u32> = w.clone();
                v.push(l);
                next.push(v);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

/// Number of Myhill-Nerode classes among live states, by comparing the
/// accepted suffixes of each state up to a length bound (enough for
/// automata with fewer states than the bound).
fn naive_class_count(a: &MultiTrackDfa, bound: usize) -> usize {
    let size = a.alphabet().size() as u32;
    let words = strings(size, bound);
    let from = |s: u32, w: &[u32]| {
        let t = w.iter().fold(s, |s, &l| a.step(s, l));
        a.is_accepting(t)
    };
    let reach = a.reachable();
    let mut sigs: Vec<Vec<bool>> = (0..a.num_states() as u32)
        .filter(|&s| reach[s as usize])
        .map(|s| words.iter().map(|w| from(s, w)).collect::<Vec<_>>())
        .filter(|sig| sig.iter().any(|&b| b))
        .collect();
    sigs.sort();
    sigs.dedup();
    sigs.len().max(1)
}

fn same_language_upto(a: &MultiTrackDfa, b: &MultiTrackDfa, len: usize) -> bool {
    strings(a.alphabet().size() as u32, len)
        .iter()
        .all(|w| a.accepts_letters(w) == b.accepts_letters(w))
}

#[test]
fn empty_and_full() {
    let al = TrackAlphabet::uniform(2, 2).unwrap();
    let e = MultiTrackDfa::empty(al.clone());
    let f = MultiTrackDfa::full(al.clone());
    assert!(e.is_empty());
    assert!(!f.is_empty());
    assert!(f.accepts_letters(&[]));
    assert_eq!(f.complement(&f).unwrap(), e);
    assert_eq!(e.complement(&f).unwrap(), f);
    assert!(f.accepts_all(&f).unwrap());
    assert!(!e.accepts_all(&f).unwrap());
}

#[test]
fn equality_relation_is_padding_invariant() {
    let al = TrackAlphabet::uniform(2, 3).unwrap();
    let edges: Vec<_> = (0..3).map(|d| (0, al.encode(&[d, d]).unwrap(), 0)).collect();
    let eq = MultiTrackDfa::from_transitions(al, 1, 0, &[0], edges).unwrap();
    assert!(eq.accepts_tracks(&[vec![2, 1], vec![0, 0, 2, 1]]).unwrap());
    assert!(!eq.accepts_tracks(&[vec![2, 1], vec![1, 2, 1]]).unwrap());
    let swapped = eq.permute_tracks(&[1, 0]).unwrap();
    assert_eq!(swapped, eq);
    let diag = eq.identify_tracks(0, 1).unwrap();
    assert_eq!(diag, MultiTrackDfa::full(TrackAlphabet::uniform(1, 3).unwrap()));
}

#[test]
fn projection_absorbs_leading_zero_columns() {
    // y = 2x in binary: state s means the next digit of x must be s
    let al = TrackAlphabet::uniform(2, 2).unwrap();
    let mut edges = Vec::new();
    for s in 0..2u32 {
        for y in 0..2u32 {
            edges.push((s, al.encode(&[s, y]).unwrap(), y));
        }
    }
    let double = MultiTrackDfa::from_transitions(al, 2, 0, &[0], edges).unwrap();
    assert!(double.accepts_tracks(&[vec![0, 1, 1], vec![1, 1, 0]]).unwrap());
    assert!(!double.accepts_tracks(&[vec![1, 0], vec![1, 1, 0]]).unwrap());
    // every y ending in 0 is a double; the witness x may need no more digits
    let evens = double.project(0).unwrap();
    assert!(evens.accepts_tracks(&[vec![1, 1, 0]]).unwrap());
    assert!(!evens.accepts_tracks(&[vec![1, 1, 1]]).unwrap());
    // every x has a double, which needs one more digit than x
    let all_x = double.project(1).unwrap();
    assert!(all_x.accepts_tracks(&[vec![1, 1, 1]]).unwrap());
    assert_eq!(all_x, MultiTrackDfa::full(TrackAlphabet::uniform(1, 2).unwrap()));
}

#[test]
fn text_round_trip() {
    let a = random_dfa(7, vec![2, 3], 5).minimize();
    let text = a.to_text();
    let b = MultiTrackDfa::from_text(&text).unwrap();
    assert_eq!(a, b);
    assert_eq!(b.to_text(), text);
    assert_eq!(a.fingerprint(), b.fingerprint());
    assert!(text.starts_with("tracks 2\nalphabet 0 1\nalphabet 0 1 2\ninitial 0\n"));

    let nullary = MultiTrackDfa::full(TrackAlphabet::new(vec![]).unwrap());
    let t = nullary.to_text();
    assert!(t.contains("0 () 0"));
    assert_eq!(MultiTrackDfa::from_text(&t).unwrap(), nullary);

    let d = random_dfa(3, vec![3], 4);
    let outputs = (0..d.num_states() as u32).map(|s| s % 3).collect();
    let o = Dfao::new(d, outputs).unwrap().minimize();
    let t = o.to_text();
    assert!(t.contains("output 0 "));
    assert_eq!(Dfao::from_text(&t).unwrap(), o);
    assert_eq!(Dfao::from_text(&t).unwrap().to_text(), t);
    assert!(MultiTrackDfa::from_text("tracks 1\nalphabet 0 2\ninitial 0\naccepting 0\n").is_err());
    assert!(MultiTrackDfa::from_text("tracks 1\nalphabet 0 1\ninitial 0\naccepting\nfoo\n").is_err());
}

#[test]
fn dfao_minimize_and_relation() {
    // parity of the number of ones; state 2 is unreachable
    let al = TrackAlphabet::uniform(1, 2).unwrap();
    let edges = [(0, 0, 0), (0, 1, 1), (1, 0, 1), (1, 1, 0), (2, 0, 2)];
    let dfa = MultiTrackDfa::from_transitions(al, 3, 0, &[], edges).unwrap();
    let o = Dfao::new(dfa, vec![0, 1, 0]).unwrap();
    let m = o.minimize();
    assert_eq!(m.num_states(), 2);
    assert_eq!(m.run(&[1, 0, 1, 1]), Some(1));
    let same = o.relation(2, |v| v[0] == v[1]).unwrap();
    assert!(same.accepts_tracks(&[vec![1, 1], vec![1, 0, 1, 0]]).unwrap());
    assert!(!same.accepts_tracks(&[vec![1], vec![1, 1]]).unwrap());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn minimize_matches_naive_quotient(seed in any::<u64>(), binary in any::<bool>()) {
        let radices = if binary { vec![2] } else { vec![2, 2] };
        let a = random_dfa(seed, radices, 6);
        let m = a.minimize();
        prop_assert_eq!(m.num_states(), naive_class_count(&a, 7));
        prop_assert!(same_language_upto(&a, &m, 5));
        prop_assert_eq!(m.minimize(), m.clone());
        prop_assert_eq!(MultiTrackDfa::from_text(&m.to_text()).unwrap(), m);
    }

    #[test]
    fn minimize_is_canonical_under_renumbering(seed in any::<u64>(), shift in 1u32..6) {
        let a = random_dfa(seed, vec![3], 6);
        let n = a.num_states() as u32;
        let perm = |s: u32| if s == DEAD { DEAD } else { (s + shift) % n };
        let size = a.alphabet().size();
        let mut trans = vec![DEAD; a.trans.len()];
        let mut acc = vec![false; n as usize];
        for s in 0..n {
            acc[perm(s) as usize] = a.is_accepting(s);
            for l in 0..size {
                trans[perm(s) as usize * size + l] = perm(a.step(s, l as u32));
            }
        }
        let b = MultiTrackDfa::from_parts(a.alphabet().clone(), perm(0), acc, trans).unwrap();
        prop_assert_eq!(a.minimize(), b.minimize());
    }

    #[test]
    fn boolean_products_agree_pointwise(s1 in any::<u64>(), s2 in any::<u64>()) {
        let a = random_dfa(s1, vec![2, 2], 4);
        let b = random_dfa(s2, vec![2, 2], 4);
        let full = MultiTrackDfa::full(a.alphabet().clone());
        let words = strings(4, 4);
        for op in [BoolOp::And, BoolOp::Or, BoolOp::AndNot, BoolOp::Xor] {
            let p = a.product(&b, op).unwrap();
            for w in &words {
                prop_assert_eq!(p.accepts_letters(w), op.eval(a.accepts_letters(w), b.accepts_letters(w)));
            }
        }
        for op in [BoolOp::Implies, BoolOp::Iff] {
            prop_assert!(a.product(&b, op).is_err());
            let p = a.product_within(&b, op, &full).unwrap();
            for w in &words {
                prop_assert_eq!(p.accepts_letters(w), op.eval(a.accepts_letters(w), b.accepts_letters(w)));
            }
        }
        // De Morgan and double complement
        let lhs = a.product(&b, BoolOp::And).unwrap().complement(&full).unwrap();
        let rhs = a.complement(&full).unwrap().product(&b.complement(&full).unwrap(), BoolOp::Or).unwrap();
        prop_assert_eq!(lhs, rhs);
        prop_assert_eq!(a.complement(&full).unwrap().complement(&full).unwrap(), a.minimize());
        prop_assert!(a.equivalent(&a.minimize()).unwrap());
    }

    #[test]
    fn projection_matches_witness_search(seed in any::<u64>()) {
        let a = random_dfa(seed, vec![2, 2], 4);
        let p = a.project(1).unwrap();
        let al = a.alphabet().clone();
        // states reachable from the initial state through k leading zero
        // columns on track 0, any digit on track 1
        let mut layers: Vec<Vec<u32>> = vec![vec![a.initial()]];
        for _ in 0..20 {
            let mut next: Vec<u32> = layers.last().unwrap().iter()
                .flat_map(|&s| (0..2).map(move |x| (s, x)))
                .map(|(s, x)| a.step(s, al.encode(&[0, x]).unwrap()))
                .filter(|&t| t != DEAD)
                .collect();
            next.sort_unstable();
            next.dedup();
            layers.push(next);
        }
        for w in strings(2, 5) {
            let witness = layers.iter().any(|start| {
                let mut cur = start.clone();
                for &d in &w {
                    let mut next: Vec<u32> = cur.iter()
                        .flat_map(|&s| (0..2).map(move |x| (s, x)))
                        .map(|(s, x)| a.step(s, al.encode(&[d, x]).unwrap()))
                        .filter(|&t| t != DEAD)
                        .collect();
                    next.sort_unstable();
                    next.dedup();
                    cur = next;
                }
                cur.iter().any(|&s| a.is_accepting(s))
            });
            prop_assert_eq!(p.accepts_letters(&w), witness);
        }
    }

    #[test]
    fn track_rearrangements(seed in any::<u64>()) {
        let a = random_dfa(seed, vec![2, 3], 4);
        let sw = a.permute_tracks(&[1, 0]).unwrap();
        let target = TrackAlphabet::new(vec![3, 2, 2]).unwrap();
        let cyl = a.cylindrify(&[2, 0], &target).unwrap();
        for x in strings(2, 3) {
            for y in strings(3, 3) {
                let inside = a.accepts_tracks(&[x.clone(), y.clone()]).unwrap();
                prop_assert_eq!(sw.accepts_tracks(&[y.clone(), x.clone()]).unwrap(), inside);
                let len = x.len().max(y.len());
                for z in [vec![0; len], vec![1; len]] {
                    prop_assert_eq!(
                        cyl.accepts_tracks(&[y.clone(), z.clone(), x.clone()]).unwrap(),
                        inside
                    );
                }
            }
        }
    }
}
