use std::collections::VecDeque;

use rustc_hash::FxHashMap;

use super::alphabet::TrackAlphabet;
use super::nfa::Nfa;
use crate::error::{Error, Result};

/// Marker for the implicit dead state.
pub const DEAD: u32 = u32::MAX;

/// Boolean connective applied to the acceptance of two automata.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BoolOp {
    And,
    Or,
    /// `a ∧ ¬b`
    AndNot,
    Xor,
    Implies,
    Iff,
}

impl BoolOp {
    pub fn eval(self, a: bool, b: bool) -> bool {
        match self {
            BoolOp::And => a && b,
            BoolOp::Or => a || b,
            BoolOp::AndNot => a && !b,
            BoolOp::Xor => a != b,
            BoolOp::Implies => !a || b,
            BoolOp::Iff => a == b,
        }
    }
}

/// A deterministic automaton over tuples of digits, read most significant
/// digit first with all tracks left-padded by zeros to a common length.
///
/// Transitions are stored densely; [`DEAD`] stands for the implicit
/// rejecting sink.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MultiTrackDfa {
    pub(crate) alphabet: TrackAlphabet,
    pub(crate) initial: u32,
    pub(crate) accepting: Vec<bool>,
    pub(crate) trans: Vec<u32>,
}

/// One operand of [`product_of`]: an automaton whose track `j` reads track
/// `map[j]` of the product.
pub struct Part<'a> {
    pub dfa: &'a MultiTrackDfa,
    pub map: Vec<usize>,
}

impl<'a> Part<'a> {
    pub fn new(dfa: &'a MultiTrackDfa, map: Vec<usize>) -> Self {
        Part { dfa, map }
    }

    /// Track `j` reads track `j`.
    pub fn aligned(dfa: &'a MultiTrackDfa) -> Self {
        Part {
            dfa,
            map: (0..dfa.tracks()).collect(),
        }
    }
}

impl MultiTrackDfa {
    pub fn from_parts(
        alphabet: TrackAlphabet,
        initial: u32,
        accepting: Vec<bool>,
        trans: Vec<u32>,
    ) -> Result<Self> {
        let n = accepting.len();
        if n == 0 {
            return Err(Error::Construction("automaton needs a state".into()));
        }
        if initial as usize >= n {
            return Err(Error::Construction("initial state out of range".into()));
        }
        if trans.len() != n * alphabet.size() {
            return Err(Error::Construction(format!(
                "expected {} transitions, got {}",
                n * alphabet.size(),
                trans.len()
            )));
        }
        if let Some(&t) = trans.iter().find(|&&t| t != DEAD && t as usize >= n) {
            return Err(Error::Construction(format!("transition to missing state {t}")));
        }
        Ok(MultiTrackDfa {
            alphabet,
            initial,
            accepting,
            trans,
        })
    }

    /// Builds an automaton from `(state, letter) -> state` triples; missing
    /// transitions go to the dead state.
    pub fn from_transitions(
        alphabet: TrackAlphabet,
        states: usize,
        initial: u32,
        accepting: &[u32],
        edges: impl IntoIterator<Item = (u32, u32, u32)>,
    ) -> Result<Self> {
        let mut trans = vec![DEAD; states * alphabet.size()];
        for (s, l, t) in edges {
            if s as usize >= states || l as usize >= alphabet.size() {
                return Err(Error::Construction(format!("bad transition ({s}, {l})")));
            }
            let slot = &mut trans[s as usize * alphabet.size() + l as usize];
            if *slot != DEAD && *slot != t {
                return Err(Error::Construction(format!(
                    "nondeterministic transition from {s} on letter {l}"
                )));
            }
            *slot = t;
        }
        let mut acc = vec![false; states];
        for &a in accepting {
            *acc.get_mut(a as usize)
                .ok_or_else(|| Error::Construction(format!("accepting state {a} missing")))? = true;
        }
        Self::from_parts(alphabet, initial, acc, trans)
    }

    /// The automaton accepting nothing.
    pub fn empty(alphabet: TrackAlphabet) -> Self {
        let size = alphabet.size();
        MultiTrackDfa {
            alphabet,
            initial: 0,
            accepting: vec![false],
            trans: vec![DEAD; size],
        }
    }

    /// The automaton accepting every tuple string.
    pub fn full(alphabet: TrackAlphabet) -> Self {
        let size = alphabet.size();
        MultiTrackDfa {
            alphabet,
            initial: 0,
            accepting: vec![true],
            trans: vec![0; size],
        }
    }

    pub fn alphabet(&self) -> &TrackAlphabet {
        &self.alphabet
    }

    pub fn tracks(&self) -> usize {
        self.alphabet.tracks()
    }

    pub fn num_states(&self) -> usize {
        self.accepting.len()
    }

    pub fn initial(&self) -> u32 {
        self.initial
    }

    pub fn is_accepting(&self, state: u32) -> bool {
        state != DEAD && self.accepting[state as usize]
    }

    pub fn accepting_states(&self) -> impl Iterator<Item = u32> + '_ {
        self.accepting
            .iter()
            .enumerate()
            .filter(|(_, &a)| a)
            .map(|(s, _)| s as u32)
    }

    #[inline]
    pub fn step(&self, state: u32, letter: u32) -> u32 {
        if state == DEAD {
            return DEAD;
        }
        self.trans[state as usize * self.alphabet.size() + letter as usize]
    }

    /// Live transitions in state-then-letter order.
    pub fn transitions(&self) -> impl Iterator<Item = (u32, u32, u32)> + '_ {
        let size = self.alphabet.size();
        self.trans
            .iter()
            .enumerate()
            .filter(|(_, &t)| t != DEAD)
            .map(move |(i, &t)| ((i / size) as u32, (i % size) as u32, t))
    }

    pub fn run(&self, letters: &[u32]) -> u32 {
        letters.iter().fold(self.initial, |s, &l| self.step(s, l))
    }

    pub fn accepts_letters(&self, letters: &[u32]) -> bool {
        self.is_accepting(self.run(letters))
    }

    /// Membership of a tuple given as one digit string per track; shorter
    /// tracks are left-padded with zeros.
    pub fn accepts_tracks(&self, tracks: &[Vec<u32>]) -> Result<bool> {
        Ok(self.accepts_letters(&self.letters_of(tracks)?))
    }

    /// Zips per-track digit strings into letters, left-padding with zeros.
    pub fn letters_of(&self, tracks: &[Vec<u32>]) -> Result<Vec<u32>> {
        zip_tracks(&self.alphabet, tracks)
    }

    pub fn is_empty(&self) -> bool {
        let mut seen = vec![false; self.num_states()];
        let mut queue = VecDeque::from([self.initial]);
        seen[self.initial as usize] = true;
        while let Some(s) = queue.pop_front() {
            if self.accepting[s as usize] {
                return false;
            }
            for l in 0..self.alphabet.size() as u32 {
                let t = self.step(s, l);
                if t != DEAD && !seen[t as usize] {
                    seen[t as usize] = true;
                    queue.push_back(t);
                }
            }
        }
        true
    }

    /// True when every string of `universe` is accepted.
    pub fn accepts_all(&self, universe: &MultiTrackDfa) -> Result<bool> {
        Ok(universe.product(self, BoolOp::AndNot)?.is_empty())
    }

    /// Same language test on canonical forms.
    pub fn equivalent(&self, other: &MultiTrackDfa) -> Result<bool> {
        Ok(self.product(other, BoolOp::Xor)?.is_empty())
    }

    /// Product over the same tracks. Connectives that hold when both sides
    /// reject (`Implies`, `Iff`) need [`Self::product_within`].
    pub fn product(&self, other: &MultiTrackDfa, op: BoolOp) -> Result<MultiTrackDfa> {
        if self.alphabet != other.alphabet {
            return Err(Error::Interface("product of automata over different tracks".into()));
        }
        if op.eval(false, false) {
            return Err(Error::Interface(format!(
                "{op:?} accepts where both operands reject; supply a universe"
            )));
        }
        product_of(
            &self.alphabet,
            &[Part::aligned(self), Part::aligned(other)],
            |acc| op.eval(acc[0], acc[1]),
        )
    }

    /// Product restricted to the strings of `universe`.
    pub fn product_within(
        &self,
        other: &MultiTrackDfa,
        op: BoolOp,
        universe: &MultiTrackDfa,
    ) -> Result<MultiTrackDfa> {
        if self.alphabet != other.alphabet || self.alphabet != universe.alphabet {
            return Err(Error::Interface("product of automata over different tracks".into()));
        }
        product_of(
            &self.alphabet,
            &[Part::aligned(universe), Part::aligned(self), Part::aligned(other)],
            |acc| acc[0] && op.eval(acc[1], acc[2]),
        )
    }

    /// Strings of `universe` that `self` rejects.
    pub fn complement(&self, universe: &MultiTrackDfa) -> Result<MultiTrackDfa> {
        universe.product(self, BoolOp::AndNot)
    }

    /// Existential quantification of `track`. A witness may need a longer
    /// representation than the remaining tracks; leading all-zero columns
    /// on the remaining tracks are absorbed so the result accepts every
    /// padding of each projected tuple.
    pub fn project(&self, track: usize) -> Result<MultiTrackDfa> {
        self.project_many(&[track])
    }

    /// Existential quantification of several tracks in one subset
    /// construction, which can be far smaller than projecting one by one.
    pub fn project_many(&self, tracks: &[usize]) -> Result<MultiTrackDfa> {
        Ok(Nfa::projection_many(self, tracks)?.determinize_minimal())
    }

    /// Re-expresses this automaton over `target`, reading its track `j` from
    /// track `map[j]`. Tracks of `target` not in `map` are unconstrained.
    pub fn cylindrify(&self, map: &[usize], target: &TrackAlphabet) -> Result<MultiTrackDfa> {
        let mut seen = vec![false; target.tracks()];
        for &t in map {
            if t >= target.tracks() || std::mem::replace(&mut seen[t], true) {
                return Err(Error::Interface("track map must be injective".into()));
            }
        }
        product_of(target, &[Part::new(self, map.to_vec())], |acc| acc[0])
    }

    /// Keeps only the strings where tracks `keep` and `drop` agree, then
    /// removes track `drop`.
    pub fn identify_tracks(&self, keep: usize, drop: usize) -> Result<MultiTrackDfa> {
        let k = self.tracks();
        if keep == drop || keep >= k || drop >= k {
            return Err(Error::Interface("bad tracks to identify".into()));
        }
        let radices = self.alphabet.radices();
        if radices[keep] != radices[drop] {
            return Err(Error::Interface("identified tracks differ in digits".into()));
        }
        let reduced: Vec<u32> = radices
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != drop)
            .map(|(_, &r)| r)
            .collect();
        let target = TrackAlphabet::new(reduced)?;
        // each reduced letter maps to the full letter repeating `keep`
        let keep_in_target = if keep > drop { keep - 1 } else { keep };
        let full_of: Vec<u32> = (0..target.size() as u32)
            .map(|l| {
                let mut digits = target.decode(l);
                digits.insert(drop, digits[keep_in_target]);
                self.alphabet.encode(&digits).expect("digits in range")
            })
            .collect();
        let size = target.size();
        let mut trans = vec![DEAD; self.num_states() * size];
        for s in 0..self.num_states() {
            for (l, &full) in full_of.iter().enumerate() {
                trans[s * size + l] = self.step(s as u32, full);
            }
        }
        Ok(MultiTrackDfa {
            alphabet: target,
            initial: self.initial,
            accepting: self.accepting.clone(),
            trans,
        }
        .minimize())
    }

    /// Reorders tracks: track `j` of the result is track `order[j]` of `self`.
    pub fn permute_tracks(&self, order: &[usize]) -> Result<MultiTrackDfa> {
        if order.len() != self.tracks() {
            return Err(Error::Interface("permutation has the wrong length".into()));
        }
        let radices: Vec<u32> = order.iter().map(|&t| self.alphabet.radices()[t]).collect();
        let target = TrackAlphabet::new(radices)?;
        // self's track order[j] is the result's track j
        let mut map = vec![0; order.len()];
        for (j, &t) in order.iter().enumerate() {
            map[t] = j;
        }
        self.cylindrify(&map, &target)
    }

    /// States reachable from the initial state.
    pub(crate) fn reachable(&self) -> Vec<bool> {
        let mut seen = vec![false; self.num_states()];
        seen[self.initial as usize] = true;
        let mut stack = vec![self.initial];
        while let Some(s) = stack.pop() {
            for l in 0..self.alphabet.size() as u32 {
                let t = self.step(s, l);
                if t != DEAD && !seen[t as usize] {
                    seen[t as usize] = true;
                    stack.push(t);
                }
            }
        }
        seen
    }

    /// States from which an accepting state is reachable.
    pub(crate) fn coreachable(&self) -> Vec<bool> {
        let n = self.num_states();
        let size = self.alphabet.size();
        let mut rev: Vec<Vec<u32>> = vec![Vec::new(); n];
        for (i, &t) in self.trans.iter().enumerate() {
            if t != DEAD {
                rev[t as usize].push((i / size) as u32);
            }
        }
        let mut live = self.accepting.clone();
        let mut stack: Vec<u32> = self.accepting_states().collect();
        while let Some(s) = stack.pop() {
            for &p in &rev[s as usize] {
                if !live[p as usize] {
                    live[p as usize] = true;
                    stack.push(p);
                }
            }
        }
        live
    }
}

/// Zips per-track digit strings into letters, left-padding with zeros.
pub fn zip_tracks(alphabet: &TrackAlphabet, tracks: &[Vec<u32>]) -> Result<Vec<u32>> {
    if tracks.len() != alphabet.tracks() {
        return Err(Error::Interface(format!(
            "{} tracks given, automaton has {}",
            tracks.len(),
            alphabet.tracks()
        )));
    }
    let len = tracks.iter().map(Vec::len).max().unwrap_or(0);
    let mut column = vec![0u32; tracks.len()];
    (0..len)
        .map(|i| {
            for (c, t) in column.iter_mut().zip(tracks) {
                let pad = len - t.len();
                *c = if i < pad { 0 } else { t[i - pad] };
            }
            alphabet.encode(&column)
        })
        .collect()
}

/// Synchronous product of several automata over a common tuple alphabet.
///
/// A product state is dead as soon as some operand whose rejection forces
/// rejection is dead, or when all operands are dead. The result is
/// minimized.
pub fn product_of(
    alphabet: &TrackAlphabet,
    parts: &[Part<'_>],
    accept: impl Fn(&[bool]) -> bool,
) -> Result<MultiTrackDfa> {
    let k = parts.len();
    if k == 0 || k > 8 {
        return Err(Error::Interface("product needs 1 to 8 operands".into()));
    }
    if accept(&vec![false; k]) {
        return Err(Error::Interface(
            "product accepts when every operand rejects; include a universe operand".into(),
        ));
    }
    let tables: Vec<Vec<u32>> = parts
        .iter()
        .map(|p| alphabet.restriction_table(&p.dfa.alphabet, &p.map))
        .collect::<Result<_>>()?;

    // operand i is essential when its rejection alone forces rejection
    let essential: Vec<bool> = (0..k)
        .map(|i| {
            (0u32..1 << k).filter(|m| m & (1 << i) == 0).all(|m| {
                let acc: Vec<bool> = (0..k).map(|j| m & (1 << j) != 0).collect();
                !accept(&acc)
            })
        })
        .collect();

    let size = alphabet.size();
    let mut index: FxHashMap<Box<[u32]>, u32> = FxHashMap::default();
    let mut states: Vec<Box<[u32]>> = Vec::new();
    let mut trans: Vec<u32> = Vec::new();
    let start: Box<[u32]> = parts.iter().map(|p| p.dfa.initial).collect();
    index.insert(start.clone(), 0);
    states.push(start);
    let mut buf = vec![0u32; k];
    let mut next = 0usize;
    while next < states.len() {
        let cur = states[next].clone();
        next += 1;
        for l in 0..size {
            let mut dead = true;
            let mut killed = false;
            for i in 0..k {
                let t = parts[i].dfa.step(cur[i], tables[i][l]);
                buf[i] = t;
                if t != DEAD {
                    dead = false;
                } else if essential[i] {
                    killed = true;
                }
            }
            if dead || killed {
                trans.push(DEAD);
                continue;
            }
            let id = match index.get(&buf[..]) {
                Some(&id) => id,
                None => {
                    let id = states.len() as u32;
                    if id == DEAD {
                        return Err(Error::Resource("product state space overflow".into()));
                    }
                    let key: Box<[u32]> = buf.clone().into_boxed_slice();
                    index.insert(key.clone(), id);
                    states.push(key);
                    id
                }
            };
            trans.push(id);
        }
    }
    let mut acc_buf = vec![false; k];
    let accepting = states
        .iter()
        .map(|st| {
            for i in 0..k {
                acc_buf[i] = parts[i].dfa.is_accepting(st[i]);
            }
            accept(&acc_buf)
        })
        .collect();
    Ok(MultiTrackDfa {
        alphabet: alphabet.clone(),
        initial: 0,
        accepting,
        trans,
    }
    .minimize())
}
