use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::recurrence::{IncidenceMatrix, Recurrence};
use crate::automata::{product_of, Dfao, MultiTrackDfa, Part, TrackAlphabet};
use crate::error::{Error, Result};
use crate::word::Morphism;

/// Terms kept per sequence; values beyond this many digits are out of range.
const TABLE_LEN: usize = 192;
/// Tables stop early once a term would exceed this.
const VALUE_CAP: i128 = 1 << 120;

/// A transition of the addressing automaton with its sequence, given by
/// initial values under the system recurrence.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeqTransition {
    pub from: u32,
    pub digit: u32,
    pub to: u32,
    pub initial: Vec<i128>,
}

/// An abstract numeration system whose representations are the paths from
/// the initial state of an addressing automaton, read most significant digit
/// first. Each transition carries a sequence; a digit read with `e` digits
/// still to come contributes the `e`-th term of its sequence.
#[derive(Clone, Debug)]
pub struct NumerationSystem {
    name: String,
    states: Vec<String>,
    radix: u32,
    transitions: Vec<SeqTransition>,
    recurrence: Recurrence,
    outputs: Vec<u32>,
    output_letters: Vec<u8>,
    /// Letter of each state, for systems built directly from a morphism.
    letters: Option<Vec<u8>>,
    morphism: Option<Morphism>,
    tables: Tables,
}

#[derive(Clone, Debug, Default)]
struct Tables {
    /// `index[state][digit]` into `transitions`.
    index: Vec<Vec<Option<usize>>>,
    values: Vec<Vec<i128>>,
    /// `paths[state][e]`: number of paths of length `e` from the state.
    paths: Vec<Vec<i128>>,
}

impl PartialEq for NumerationSystem {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name
            && self.states == other.states
            && self.radix == other.radix
            && self.transitions == other.transitions
            && self.recurrence == other.recurrence
            && self.outputs == other.outputs
            && self.output_letters == other.output_letters
    }
}

impl NumerationSystem {
    /// Assembles a system; state 0 is initial and must loop on digit 0.
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        name: impl Into<String>,
        states: Vec<String>,
        transitions: Vec<SeqTransition>,
        recurrence: Recurrence,
        outputs: Vec<u32>,
        output_letters: Vec<u8>,
    ) -> Result<Self> {
        let mut sys = NumerationSystem {
            name: name.into(),
            radix: transitions.iter().map(|t| t.digit + 1).max().unwrap_or(1),
            states,
            transitions,
            recurrence,
            outputs,
            output_letters,
            letters: None,
            morphism: None,
            tables: Tables::default(),
        };
        sys.validate()?;
        sys.build_tables()?;
        Ok(sys)
    }

    fn validate(&mut self) -> Result<()> {
        let n = self.states.len();
        if n == 0 {
            return Err(Error::Construction("a numeration system needs a state".into()));
        }
        if self.outputs.len() != n {
            return Err(Error::Construction("one output per state is required".into()));
        }
        if let Some(&o) = self.outputs.iter().find(|&&o| o as usize >= self.output_letters.len()) {
            return Err(Error::Construction(format!("output {o} has no letter")));
        }
        self.transitions.sort_by_key(|t| (t.from, t.digit));
        for w in self.transitions.windows(2) {
            if (w[0].from, w[0].digit) == (w[1].from, w[1].digit) {
                return Err(Error::Construction("two transitions share a state and digit".into()));
            }
        }
        for t in &self.transitions {
            if t.from as usize >= n || t.to as usize >= n {
                return Err(Error::Construction("transition to a missing state".into()));
            }
            if t.initial.len() != self.recurrence.order() {
                return Err(Error::Construction(format!(
                    "sequence needs {} initial values",
                    self.recurrence.order()
                )));
            }
            if t.digit == 0 && t.initial.iter().any(|&v| v != 0) {
                return Err(Error::Construction("digit 0 must carry the null sequence".into()));
            }
        }
        if !self.transitions.iter().any(|t| t.from == 0 && t.digit == 0 && t.to == 0) {
            return Err(Error::Construction(
                "the initial state must loop on 0 so that leading zeros are neutral".into(),
            ));
        }
        Ok(())
    }

    fn build_tables(&mut self) -> Result<()> {
        let n = self.states.len();
        let mut index = vec![vec![None; self.radix as usize]; n];
        for (i, t) in self.transitions.iter().enumerate() {
            index[t.from as usize][t.digit as usize] = Some(i);
        }
        let mut values = Vec::with_capacity(self.transitions.len());
        for t in &self.transitions {
            let mut v = t.initial.clone();
            while v.len() < TABLE_LEN {
                match self.recurrence.next_term(&v) {
                    Some(x) if x.abs() < VALUE_CAP => v.push(x),
                    _ => break,
                }
            }
            values.push(v);
        }
        let mut paths = vec![vec![1i128]; n];
        'grow: for e in 1..TABLE_LEN {
            let mut next = Vec::with_capacity(n);
            for s in 0..n {
                let mut total = 0i128;
                for t in index[s].iter().flatten() {
                    total += paths[self.transitions[*t].to as usize][e - 1];
                }
                if total > VALUE_CAP {
                    break 'grow;
                }
                next.push(total);
            }
            for (p, x) in paths.iter_mut().zip(next) {
                p.push(x);
            }
        }
        self.tables = Tables {
            index,
            values,
            paths,
        };
        Ok(())
    }

    /// The Dumont-Thomas system of a morphism prolongable on `seed`: state
    /// `x` has one transition per letter of its image, digit `d` leading to
    /// the `d`-th letter and carrying `|h^n(prefix of length d)|`.
    pub fn dt_from_morphism(m: &Morphism, seed: u8) -> Result<Self> {
        m.fixed_point_prefix(seed, 2)
            .map_err(|e| Error::Construction(format!("not a fixed-point morphism: {e}")))?;
        let mut letters = vec![seed];
        let mut i = 0;
        while i < letters.len() {
            for &y in m.image(letters[i]).unwrap_or_default() {
                if !letters.contains(&y) {
                    letters.push(y);
                }
            }
            i += 1;
        }
        let inc = IncidenceMatrix::of_morphism(m, &letters)?;
        let recurrence = inc.char_recurrence()?;
        let order = recurrence.order();
        let powers: Vec<Vec<i128>> = (0..order)
            .map(|k| inc.image_lengths(k))
            .collect::<Result<_>>()?;
        let pos = |y: u8| letters.iter().position(|&l| l == y).unwrap();
        let mut transitions = Vec::new();
        for (s, &x) in letters.iter().enumerate() {
            let img = m.image(x).unwrap_or_default();
            for (d, &y) in img.iter().enumerate() {
                let initial = (0..order)
                    .map(|k| img[..d].iter().map(|&z| powers[k][pos(z)]).sum())
                    .collect();
                transitions.push(SeqTransition {
                    from: s as u32,
                    digit: d as u32,
                    to: pos(y) as u32,
                    initial,
                });
            }
        }
        let output_letters: Vec<u8> = letters.iter().copied().collect::<BTreeSet<_>>().into_iter().collect();
        let outputs = letters
            .iter()
            .map(|l| output_letters.iter().position(|o| o == l).unwrap() as u32)
            .collect();
        let states = letters.iter().map(|&l| (l as char).to_string()).collect();
        let mut sys = Self::new("dt", states, transitions, recurrence, outputs, output_letters)?;
        sys.letters = Some(letters);
        sys.morphism = Some(m.clone());
        Ok(sys)
    }

    /// The system for the image `g(w)` of the fixed point `w` of this
    /// system's morphism, where `g = gsecond ∘ gprime` and `gprime` keeps
    /// each letter `x` first and appends markers for the extra letters of
    /// `g(x)`.
    ///
    /// Original digit `d` becomes `d·(E+1)`, `E` being the most extras of
    /// any letter. Every transition into `x` on digit `d` is replicated on
    /// digits `d·(E+1)+i`, `1 <= i <= E_x`, into a sink state labelled with
    /// the output of the `i`-th extra; those transitions carry the sequence
    /// that is `i` plus the first term of the original, then zero.
    pub fn inflate_for_image(&self, g: &Morphism, gprime: &Morphism, gsecond: &Morphism) -> Result<Self> {
        let (letters, m) = match (&self.letters, &self.morphism) {
            (Some(l), Some(m)) => (l, m),
            _ => return Err(Error::Construction("inflation needs a system built from a morphism".into())),
        };
        let mut extras: Vec<Vec<u8>> = Vec::new();
        for &x in letters {
            let gx = g.image(x).ok_or_else(|| Error::Construction(format!("g has no image for {:?}", x as char)))?;
            let gp = gprime
                .image(x)
                .ok_or_else(|| Error::Construction(format!("g' has no image for {:?}", x as char)))?;
            if gp.first() != Some(&x) {
                return Err(Error::Construction(format!("g'({}) must start with {}", x as char, x as char)));
            }
            let coded = gsecond.apply_symbols(gp)?;
            if coded != gx {
                return Err(Error::Construction(format!("g''(g'({})) differs from g({})", x as char, x as char)));
            }
            extras.push(gp[1..].to_vec());
        }
        let e_max = extras.iter().map(Vec::len).max().unwrap_or(0) as u32;
        let k = e_max + 1;

        let inc = IncidenceMatrix::of_morphism(m, letters)?;
        let recurrence = self.recurrence.times_x();
        let order = recurrence.order();
        let glen: Vec<i128> = letters.iter().map(|&x| g.image(x).unwrap().len() as i128).collect();
        // |g(h^n(y))| per letter y
        let glen_pow: Vec<Vec<i128>> = (0..order)
            .map(|n| {
                Ok(inc
                    .power(n)?
                    .iter()
                    .map(|row| row.iter().zip(&glen).map(|(a, b)| a * b).sum())
                    .collect())
            })
            .collect::<Result<_>>()?;
        let pos = |y: u8| letters.iter().position(|&l| l == y).unwrap();

        let code = |l: u8| -> Result<u8> {
            let c = gsecond.apply_symbols(&[l])?;
            match c.as_slice() {
                [o] => Ok(*o),
                _ => Err(Error::Construction("g'' must map letters to letters".into())),
            }
        };
        let mut output_letters: BTreeSet<u8> = BTreeSet::new();
        let mut sink_letters: BTreeSet<u8> = BTreeSet::new();
        for (&x, ex) in letters.iter().zip(&extras) {
            output_letters.insert(code(x)?);
            for &l in ex {
                sink_letters.insert(code(l)?);
            }
        }
        output_letters.extend(&sink_letters);
        let output_letters: Vec<u8> = output_letters.into_iter().collect();
        let sink_letters: Vec<u8> = sink_letters.into_iter().collect();
        let out_index = |o: u8| output_letters.iter().position(|&l| l == o).unwrap() as u32;
        let sink_state = |o: u8| (letters.len() + sink_letters.iter().position(|&l| l == o).unwrap()) as u32;

        let mut transitions = Vec::new();
        for (s, &x) in letters.iter().enumerate() {
            let img = m.image(x).unwrap();
            for (d, &y) in img.iter().enumerate() {
                let initial: Vec<i128> = (0..order)
                    .map(|n| img[..d].iter().map(|&z| glen_pow[n][pos(z)]).sum())
                    .collect();
                let digit = d as u32 * k;
                for (i, &extra) in extras[pos(y)].iter().enumerate() {
                    let mut alpha = vec![0; order];
                    alpha[0] = initial[0] + i as i128 + 1;
                    transitions.push(SeqTransition {
                        from: s as u32,
                        digit: digit + i as u32 + 1,
                        to: sink_state(code(extra)?),
                        initial: alpha,
                    });
                }
                transitions.push(SeqTransition {
                    from: s as u32,
                    digit,
                    to: pos(y) as u32,
                    initial,
                });
            }
        }
        let mut outputs: Vec<u32> = letters.iter().map(|&x| Ok(out_index(code(x)?))).collect::<Result<_>>()?;
        outputs.extend(sink_letters.iter().map(|&o| out_index(o)));
        let mut states: Vec<String> = letters.iter().map(|&l| (l as char).to_string()).collect();
        states.extend(sink_letters.iter().map(|&l| (l as char).to_string()));
        Self::new(format!("{}_image", self.name), states, transitions, recurrence, outputs, output_letters)
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    /// Digits are `0..radix`.
    pub fn radix(&self) -> u32 {
        self.radix
    }

    pub fn transitions(&self) -> &[SeqTransition] {
        &self.transitions
    }

    pub fn transition(&self, state: u32, digit: u32) -> Option<&SeqTransition> {
        let i = (*self.tables.index.get(state as usize)?.get(digit as usize)?)?;
        Some(&self.transitions[i])
    }

    pub fn recurrence(&self) -> &Recurrence {
        &self.recurrence
    }

    pub fn outputs(&self) -> &[u32] {
        &self.outputs
    }

    /// The letter each output index stands for.
    pub fn output_letters(&self) -> &[u8] {
        &self.output_letters
    }

    pub fn morphism(&self) -> Option<&Morphism> {
        self.morphism.as_ref()
    }

    /// Term `k` of the sequence on the transition from `state` on `digit`.
    pub fn sequence_value(&self, state: u32, digit: u32, k: usize) -> Result<i128> {
        let i = self
            .tables
            .index
            .get(state as usize)
            .and_then(|row| row.get(digit as usize).copied().flatten())
            .ok_or_else(|| Error::InvalidRepresentation(format!("no transition from {state} on {digit}")))?;
        self.value_at(i, k)
    }

    fn value_at(&self, transition: usize, k: usize) -> Result<i128> {
        let v = &self.tables.values[transition];
        v.get(k).copied().ok_or(Error::Range { index: k, limit: v.len() })
    }

    /// Number of paths of length `e` from `state`.
    pub fn path_count(&self, state: u32, e: usize) -> Result<i128> {
        let p = &self.tables.paths[state as usize];
        p.get(e).copied().ok_or(Error::Range { index: e, limit: p.len() })
    }

    /// State reached on `digits`, or an error when they are not a path.
    pub fn run(&self, digits: &[u32]) -> Result<u32> {
        let mut s = 0u32;
        for (pos, &d) in digits.iter().enumerate() {
            s = self
                .transition(s, d)
                .ok_or_else(|| {
                    Error::InvalidRepresentation(format!("digit {d} at position {pos} leaves the automaton"))
                })?
                .to;
        }
        Ok(s)
    }

    pub fn evaluate(&self, digits: &[u32]) -> Result<u64> {
        let mut s = 0u32;
        let mut total = 0i128;
        for (pos, &d) in digits.iter().enumerate() {
            let i = self
                .tables
                .index
                .get(s as usize)
                .and_then(|row| row.get(d as usize).copied().flatten())
                .ok_or_else(|| {
                    Error::InvalidRepresentation(format!("digit {d} at position {pos} leaves the automaton"))
                })?;
            total += self.value_at(i, digits.len() - 1 - pos)?;
            s = self.transitions[i].to;
        }
        u64::try_from(total).map_err(|_| Error::Range { index: digits.len(), limit: 64 })
    }

    /// The representation of `n`: the `n`-th path in radix order, without
    /// leading zeros.
    pub fn represent(&self, n: u64) -> Result<Vec<u32>> {
        let n = n as i128;
        let mut len = 0;
        while self.path_count(0, len)? <= n {
            len += 1;
        }
        let mut rest = n;
        let mut s = 0u32;
        let mut out = Vec::with_capacity(len);
        for pos in 0..len {
            let e = len - 1 - pos;
            let mut chosen = None;
            for (d, i) in self.tables.index[s as usize].iter().enumerate() {
                let Some(i) = *i else { continue };
                let t = &self.transitions[i];
                if self.path_count(t.to, e)? == 0 {
                    continue;
                }
                if self.value_at(i, e)? <= rest {
                    chosen = Some((d as u32, i));
                }
            }
            let (d, i) = chosen.ok_or_else(|| Error::Construction("greedy representation got stuck".into()))?;
            rest -= self.value_at(i, e)?;
            s = self.transitions[i].to;
            out.push(d);
        }
        if rest != 0 {
            return Err(Error::Construction(format!("greedy representation of {n} left {rest}")));
        }
        Ok(out)
    }

    /// Single-track automaton of all representations, with any number of
    /// leading zeros.
    pub fn addressing_dfa(&self) -> MultiTrackDfa {
        let alphabet = TrackAlphabet::uniform(1, self.radix).expect("small alphabet");
        let n = self.states.len();
        let all: Vec<u32> = (0..n as u32).collect();
        MultiTrackDfa::from_transitions(
            alphabet,
            n,
            0,
            &all,
            self.transitions.iter().map(|t| (t.from, t.digit, t.to)),
        )
        .expect("validated transitions")
    }

    /// Tuples of `tracks` representations, padded to a common length.
    pub fn universe(&self, tracks: usize) -> Result<MultiTrackDfa> {
        let target = TrackAlphabet::uniform(tracks, self.radix)?;
        if tracks == 0 {
            return Ok(MultiTrackDfa::full(target));
        }
        let single = self.addressing_dfa().minimize();
        if tracks == 1 {
            return Ok(single);
        }
        let parts: Vec<Part<'_>> = (0..tracks).map(|t| Part::new(&single, vec![t])).collect();
        product_of(&target, &parts, |acc| acc.iter().all(|&a| a))
    }

    /// The padded representations of `c`.
    pub fn constant_recognizer(&self, c: u64) -> Result<MultiTrackDfa> {
        let rep = self.represent(c)?;
        let alphabet = TrackAlphabet::uniform(1, self.radix)?;
        let mut edges = vec![(0, 0, 0)];
        for (i, &d) in rep.iter().enumerate() {
            edges.push((i as u32, d, i as u32 + 1));
        }
        let dfa = MultiTrackDfa::from_transitions(alphabet, rep.len() + 1, 0, &[rep.len() as u32], edges)?;
        Ok(dfa.minimize())
    }

    /// Automaton with output computing the sequence coded by `outputs`,
    /// one value per state.
    pub fn dfao_of(&self, outputs: &[u32]) -> Result<Dfao> {
        if outputs.len() != self.states.len() {
            return Err(Error::Construction(format!(
                "{} outputs for {} states",
                outputs.len(),
                self.states.len()
            )));
        }
        Dfao::new(self.addressing_dfa(), outputs.to_vec())
    }

    /// The DFAO with this system's own outputs.
    pub fn dfao(&self) -> Dfao {
        self.dfao_of(&self.outputs).expect("one output per state")
    }
}

/// Renders digits below ten as a string, others in brackets.
pub fn digits_to_string(digits: &[u32]) -> String {
    digits
        .iter()
        .map(|&d| if d < 10 { char::from(b'0' + d as u8).to_string() } else { format!("[{d}]") })
        .collect()
}

pub fn digits_from_str(s: &str) -> Result<Vec<u32>> {
    s.chars()
        .map(|c| {
            c.to_digit(10)
                .ok_or_else(|| Error::InvalidRepresentation(format!("{c:?} is not a digit")))
        })
        .collect()
}
