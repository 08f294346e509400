use std::rc::Rc;

use rustc_hash::FxHashMap;

use super::alphabet::TrackAlphabet;
use super::dfa::{MultiTrackDfa, DEAD};
use super::minimize::minimize_edges;
use crate::error::{Error, Result};

/// Nondeterministic automaton over a tuple alphabet; the intermediate form
/// of projection.
#[derive(Clone, Debug)]
pub struct Nfa {
    alphabet: TrackAlphabet,
    initial: Vec<u32>,
    accepting: Vec<bool>,
    /// Outgoing `(letter, target)` pairs per state, sorted.
    edges: Vec<Vec<(u32, u32)>>,
}

impl Nfa {
    pub fn new(
        alphabet: TrackAlphabet,
        initial: Vec<u32>,
        accepting: Vec<bool>,
        edges: Vec<Vec<(u32, u32)>>,
    ) -> Result<Self> {
        let n = accepting.len();
        if edges.len() != n {
            return Err(Error::Construction("edge lists do not match states".into()));
        }
        let bad_state = |s: u32| s as usize >= n;
        if initial.iter().any(|&s| bad_state(s))
            || edges
                .iter()
                .flatten()
                .any(|&(l, t)| bad_state(t) || l as usize >= alphabet.size())
        {
            return Err(Error::Construction("NFA refers to missing states or letters".into()));
        }
        let mut edges = edges;
        for e in &mut edges {
            e.sort_unstable();
            e.dedup();
        }
        let mut initial = initial;
        initial.sort_unstable();
        initial.dedup();
        Ok(Nfa {
            alphabet,
            initial,
            accepting,
            edges,
        })
    }

    pub fn from_dfa(dfa: &MultiTrackDfa) -> Self {
        let n = dfa.num_states();
        let mut edges = vec![Vec::new(); n];
        for (s, l, t) in dfa.transitions() {
            edges[s as usize].push((l, t));
        }
        Nfa {
            alphabet: dfa.alphabet().clone(),
            initial: vec![dfa.initial()],
            accepting: dfa.accepting.clone(),
            edges,
        }
    }

    /// Forgets `track`, then closes the initial set under the all-zero
    /// column of the remaining tracks.
    pub fn projection(dfa: &MultiTrackDfa, track: usize) -> Result<Self> {
        Self::projection_many(dfa, &[track])
    }

    /// Forgets several tracks at once.
    pub fn projection_many(dfa: &MultiTrackDfa, tracks: &[usize]) -> Result<Self> {
        let full = dfa.alphabet();
        if let Some(t) = tracks.iter().find(|&&t| t >= full.tracks()) {
            return Err(Error::Interface(format!("no track {t} to project")));
        }
        let kept: Vec<usize> = (0..full.tracks()).filter(|t| !tracks.contains(t)).collect();
        let target = TrackAlphabet::new(kept.iter().map(|&t| full.radices()[t]).collect())?;
        let table = full.restriction_table(&target, &kept)?;
        let mut edges = vec![Vec::new(); dfa.num_states()];
        for (s, l, t) in dfa.transitions() {
            edges[s as usize].push((table[l as usize], t));
        }
        let mut nfa = Nfa::new(target, vec![dfa.initial()], dfa.accepting.clone(), edges)?;
        nfa.close_initial_under_zero();
        Ok(nfa)
    }

    fn close_initial_under_zero(&mut self) {
        let mut seen = vec![false; self.accepting.len()];
        let mut stack = self.initial.clone();
        for &s in &stack {
            seen[s as usize] = true;
        }
        while let Some(s) = stack.pop() {
            for &(l, t) in &self.edges[s as usize] {
                if l != 0 {
                    break;
                }
                if !seen[t as usize] {
                    seen[t as usize] = true;
                    stack.push(t);
                }
            }
        }
        self.initial = (0..seen.len() as u32).filter(|&s| seen[s as usize]).collect();
    }

    pub fn alphabet(&self) -> &TrackAlphabet {
        &self.alphabet
    }

    pub fn accepts_letters(&self, letters: &[u32]) -> bool {
        let mut cur = self.initial.clone();
        for &l in letters {
            let mut next: Vec<u32> = cur
                .iter()
                .flat_map(|&s| {
                    self.edges[s as usize]
                        .iter()
                        .filter(move |&&(el, _)| el == l)
                        .map(|&(_, t)| t)
                })
                .collect();
            next.sort_unstable();
            next.dedup();
            cur = next;
        }
        cur.iter().any(|&s| self.accepting[s as usize])
    }

    /// Reachable subsets: acceptance, row offsets and `(letter, target)`
    /// transitions, rows in subset order.
    fn subsets(&self) -> (Vec<bool>, Vec<usize>, Vec<(u32, u32)>) {
        let size = self.alphabet.size();
        let mut index: FxHashMap<Rc<[u32]>, u32> = FxHashMap::default();
        let mut subsets: Vec<Rc<[u32]>> = Vec::new();
        let mut rows = vec![0];
        let mut out: Vec<(u32, u32)> = Vec::new();
        let start: Rc<[u32]> = self.initial.as_slice().into();
        index.insert(start.clone(), 0);
        subsets.push(start);
        let mut buckets: Vec<Vec<u32>> = vec![Vec::new(); size];
        let mut touched: Vec<u32> = Vec::new();
        let mut next = 0;
        while next < subsets.len() {
            for &s in subsets[next].iter() {
                for &(l, t) in &self.edges[s as usize] {
                    let b = &mut buckets[l as usize];
                    if b.is_empty() {
                        touched.push(l);
                    }
                    b.push(t);
                }
            }
            next += 1;
            touched.sort_unstable();
            for &l in &touched {
                let set = &mut buckets[l as usize];
                set.sort_unstable();
                set.dedup();
                let id = match index.get(set.as_slice()) {
                    Some(&id) => id,
                    None => {
                        let id = subsets.len() as u32;
                        let key: Rc<[u32]> = set.as_slice().into();
                        index.insert(key.clone(), id);
                        subsets.push(key);
                        id
                    }
                };
                set.clear();
                out.push((l, id));
            }
            rows.push(out.len());
            touched.clear();
        }
        let accepting = subsets
            .iter()
            .map(|set| set.iter().any(|&s| self.accepting[s as usize]))
            .collect();
        (accepting, rows, out)
    }

    /// Subset construction over reachable subsets. The result is complete
    /// only up to the dead state and is not minimized.
    pub fn determinize(&self) -> MultiTrackDfa {
        let size = self.alphabet.size();
        let (accepting, rows, out) = self.subsets();
        let mut trans = vec![DEAD; accepting.len() * size];
        for s in 0..accepting.len() {
            for &(l, t) in &out[rows[s]..rows[s + 1]] {
                trans[s * size + l as usize] = t;
            }
        }
        MultiTrackDfa {
            alphabet: self.alphabet.clone(),
            initial: 0,
            accepting,
            trans,
        }
    }

    /// The minimal automaton of the language, without materializing the
    /// dense subset automaton.
    pub fn determinize_minimal(&self) -> MultiTrackDfa {
        let (accepting, rows, out) = self.subsets();
        let n = accepting.len();
        let mut rev_start = vec![0usize; n + 1];
        for &(_, t) in &out {
            rev_start[t as usize + 1] += 1;
        }
        for s in 0..n {
            rev_start[s + 1] += rev_start[s];
        }
        let mut rev = vec![0u32; out.len()];
        let mut fill = rev_start.clone();
        for s in 0..n {
            for &(_, t) in &out[rows[s]..rows[s + 1]] {
                rev[fill[t as usize]] = s as u32;
                fill[t as usize] += 1;
            }
        }
        let mut live = accepting.clone();
        let mut stack: Vec<u32> = (0..n as u32).filter(|&s| accepting[s as usize]).collect();
        while let Some(s) = stack.pop() {
            for &p in &rev[rev_start[s as usize]..rev_start[s as usize + 1]] {
                if !live[p as usize] {
                    live[p as usize] = true;
                    stack.push(p);
                }
            }
        }
        let labels: Vec<u32> = accepting.iter().map(|&a| u32::from(a)).collect();
        let edges = (0..n).flat_map(|s| out[rows[s]..rows[s + 1]].iter().map(move |&(l, t)| (s as u32, l, t)));
        match minimize_edges(self.alphabet.size(), 0, &labels, &live, edges) {
            None => MultiTrackDfa::empty(self.alphabet.clone()),
            Some(q) => MultiTrackDfa {
                alphabet: self.alphabet.clone(),
                initial: q.initial,
                accepting: q.labels.iter().map(|&l| l == 1).collect(),
                trans: q.trans,
            },
        }
    }
}
