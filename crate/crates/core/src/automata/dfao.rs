use super::alphabet::TrackAlphabet;
use super::dfa::{MultiTrackDfa, Part, DEAD};
use super::minimize::minimize_partial;
use crate::error::{Error, Result};

/// Deterministic automaton with output: the output of the last state
/// reached is the value of the sequence at the number read.
///
/// Undefined transitions reject, which is how invalid representations are
/// excluded.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Dfao {
    dfa: MultiTrackDfa,
    outputs: Vec<u32>,
}

impl Dfao {
    pub fn new(dfa: MultiTrackDfa, outputs: Vec<u32>) -> Result<Self> {
        if outputs.len() != dfa.num_states() {
            return Err(Error::Construction(format!(
                "{} outputs for {} states",
                outputs.len(),
                dfa.num_states()
            )));
        }
        let mut dfa = dfa;
        dfa.accepting = vec![true; outputs.len()];
        Ok(Dfao { dfa, outputs })
    }

    pub fn dfa(&self) -> &MultiTrackDfa {
        &self.dfa
    }

    pub fn alphabet(&self) -> &TrackAlphabet {
        self.dfa.alphabet()
    }

    pub fn num_states(&self) -> usize {
        self.dfa.num_states()
    }

    pub fn output(&self, state: u32) -> u32 {
        self.outputs[state as usize]
    }

    pub fn outputs(&self) -> &[u32] {
        &self.outputs
    }

    /// Output after reading `digits`; `None` when they do not form a path.
    pub fn run(&self, digits: &[u32]) -> Option<u32> {
        let mut s = self.dfa.initial();
        for &d in digits {
            if d as usize >= self.dfa.alphabet().size() {
                return None;
            }
            s = self.dfa.step(s, d);
            if s == DEAD {
                return None;
            }
        }
        Some(self.outputs[s as usize])
    }

    /// Merges states with equal future outputs; canonical numbering.
    pub fn minimize(&self) -> Dfao {
        let live = self.dfa.reachable();
        let q = minimize_partial(
            self.dfa.alphabet().size(),
            self.dfa.initial(),
            &self.dfa.trans,
            &self.outputs,
            &live,
        )
        .expect("initial state is reachable");
        let n = q.labels.len();
        Dfao {
            dfa: MultiTrackDfa {
                alphabet: self.dfa.alphabet().clone(),
                initial: q.initial,
                accepting: vec![true; n],
                trans: q.trans,
            },
            outputs: q.labels,
        }
    }

    /// Tuples of valid representations on which `pred` holds of the outputs
    /// read on each track: a DFAO run independently on `tracks` tracks.
    pub fn relation(&self, tracks: usize, pred: impl Fn(&[u32]) -> bool) -> Result<MultiTrackDfa> {
        let radix = self.dfa.alphabet().radices();
        if radix.len() != 1 {
            return Err(Error::Interface("sequence automata read one track".into()));
        }
        let target = TrackAlphabet::uniform(tracks, radix[0])?;
        let parts: Vec<Part<'_>> = (0..tracks).map(|t| Part::new(&self.dfa, vec![t])).collect();
        relation_product(&target, &parts, &self.outputs, pred)
    }
}

/// Product of DFAO copies where acceptance depends on the tuple of outputs.
fn relation_product(
    target: &TrackAlphabet,
    parts: &[Part<'_>],
    outputs: &[u32],
    pred: impl Fn(&[u32]) -> bool,
) -> Result<MultiTrackDfa> {
    let k = parts.len();
    let tables: Vec<Vec<u32>> = parts
        .iter()
        .map(|p| target.restriction_table(p.dfa.alphabet(), &p.map))
        .collect::<Result<_>>()?;
    let size = target.size();
    let mut index: rustc_hash::FxHashMap<Vec<u32>, u32> = Default::default();
    let mut states: Vec<Vec<u32>> = Vec::new();
    let start: Vec<u32> = parts.iter().map(|p| p.dfa.initial()).collect();
    index.insert(start.clone(), 0);
    states.push(start);
    let mut trans = Vec::new();
    let mut next = 0;
    while next < states.len() {
        let cur = states[next].clone();
        next += 1;
        'letters: for l in 0..size {
            let mut to = Vec::with_capacity(k);
            for i in 0..k {
                let t = parts[i].dfa.step(cur[i], tables[i][l]);
                if t == DEAD {
                    trans.push(DEAD);
                    continue 'letters;
                }
                to.push(t);
            }
            let id = *index.entry(to.clone()).or_insert_with(|| {
                states.push(to);
                (states.len() - 1) as u32
            });
            trans.push(id);
        }
    }
    let accepting = states
        .iter()
        .map(|st| {
            let outs: Vec<u32> = st.iter().map(|&s| outputs[s as usize]).collect();
            pred(&outs)
        })
        .collect();
    Ok(MultiTrackDfa {
        alphabet: target.clone(),
        initial: 0,
        accepting,
        trans,
    }
    .minimize())
}
