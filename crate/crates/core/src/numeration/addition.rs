//! Synthesis of the addition relation `x + y = z`.
//!
//! The automaton reads the three representations in parallel, most
//! significant digit first. After a prefix, the contribution of the digits
//! read so far to `x + y - z` is a function `D(k)` of the number `k` of
//! digits still to come, and it satisfies the system recurrence, so it is
//! determined by `D(0), ..., D(d-1)`. A state holds these values and the
//! three addressing states; reading a column shifts `D` by one and adds the
//! column's terms. The input is accepted when `D(0) = 0`.
//!
//! Every accepted triple is a correct sum by construction. States from
//! which no completion of length at most `window` can bring `D` back to
//! zero are pruned, which keeps the state space finite; whether the window
//! was wide enough is checked afterwards by proving that every pair `(x, y)`
//! has a sum.

use std::collections::{HashMap, HashSet};

use rayon::prelude::*;

use super::system::NumerationSystem;
use crate::automata::{MultiTrackDfa, TrackAlphabet, DEAD};
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct AdditionConfig {
    /// Completion lengths examined when pruning, at first.
    pub window: usize,
    /// Largest window tried before giving up.
    pub max_window: usize,
    /// Hard cap on explored states.
    pub max_states: usize,
}

impl Default for AdditionConfig {
    fn default() -> Self {
        AdditionConfig {
            window: 24,
            max_window: 96,
            max_states: 1 << 20,
        }
    }
}

/// Key of an exploration state: the `D` window and the three addressing
/// states.
type Key = (Box<[i128]>, [u32; 3]);

impl NumerationSystem {
    pub fn synthesize_addition(&self) -> Result<MultiTrackDfa> {
        self.synthesize_addition_with(&AdditionConfig::default())
    }

    pub fn synthesize_addition_with(&self, cfg: &AdditionConfig) -> Result<MultiTrackDfa> {
        let mut window = cfg.window.max(1);
        loop {
            let add = self.carry_automaton(window, cfg.max_states)?;
            if self.addition_is_total(&add)? {
                return Ok(add);
            }
            if window >= cfg.max_window {
                return Err(Error::Synthesis(format!(
                    "addition automaton still partial with a window of {window}"
                )));
            }
            window = (window * 2).min(cfg.max_window);
        }
    }

    /// True when every pair of representations has a sum accepted by `add`.
    pub fn addition_is_total(&self, add: &MultiTrackDfa) -> Result<bool> {
        add.project(2)?.accepts_all(&self.universe(2)?)
    }

    fn carry_automaton(&self, window: usize, max_states: usize) -> Result<MultiTrackDfa> {
        let order = self.recurrence().order();
        let n = self.num_states();
        let radix = self.radix();
        let trans = self.transitions();
        let out: Vec<Vec<usize>> = (0..n as u32)
            .map(|s| (0..trans.len()).filter(|&i| trans[i].from == s).collect())
            .collect();
        let term = |i: usize, k: usize| self.sequence_value(trans[i].from, trans[i].digit, k);

        // least and greatest value of a path of length k from each state
        let mut lo = vec![vec![None::<i128>; window + 1]; n];
        let mut hi = vec![vec![None::<i128>; window + 1]; n];
        for s in 0..n {
            lo[s][0] = Some(0);
            hi[s][0] = Some(0);
        }
        for k in 1..=window {
            for s in 0..n {
                for &i in &out[s] {
                    let t = trans[i].to as usize;
                    if let (Some(a), Some(b)) = (lo[t][k - 1], hi[t][k - 1]) {
                        let v = term(i, k - 1)?;
                        lo[s][k] = Some(lo[s][k].map_or(v + a, |m: i128| m.min(v + a)));
                        hi[s][k] = Some(hi[s][k].map_or(v + b, |m: i128| m.max(v + b)));
                    }
                }
            }
        }

        let rec = self.recurrence();
        let viable = |key: &Key| -> bool {
            let [x, y, z] = key.1.map(|s| s as usize);
            let mut d: Vec<i128> = key.0.to_vec();
            for k in 0..=window {
                if k >= d.len() {
                    match rec.next_term(&d) {
                        Some(v) => d.push(v),
                        None => return false,
                    }
                }
                let (Some(lx), Some(ly), Some(hz), Some(hx), Some(hy), Some(lz)) =
                    (lo[x][k], lo[y][k], hi[z][k], hi[x][k], hi[y][k], lo[z][k])
                else {
                    continue;
                };
                // the completion must contribute -D(k)
                if lz - hx - hy <= d[k] && d[k] <= hz - lx - ly {
                    return true;
                }
            }
            false
        };

        let alphabet = TrackAlphabet::uniform(3, radix)?;
        let size = alphabet.size();
        let start: Key = (vec![0; order].into_boxed_slice(), [0, 0, 0]);
        let mut index: HashMap<Key, u32> = HashMap::from([(start.clone(), 0)]);
        let mut rejected: HashSet<Key> = HashSet::new();
        let mut states = vec![start];
        let mut table: Vec<u32> = Vec::new();
        let mut next = 0;
        // column terms for k < order, per transition
        let col: Vec<Vec<i128>> = (0..trans.len())
            .map(|i| (0..order).map(|k| term(i, k)).collect())
            .collect::<Result<_>>()?;
        while next < states.len() {
            let (f, [sx, sy, sz]) = states[next].clone();
            next += 1;
            let mut ext = f.to_vec();
            let fr = rec
                .next_term(&ext)
                .ok_or_else(|| Error::Synthesis("carry values overflow".into()))?;
            ext.push(fr);
            let row = table.len();
            table.resize(row + size, DEAD);
            for &ix in &out[sx as usize] {
                for &iy in &out[sy as usize] {
                    for &iz in &out[sz as usize] {
                        let g: Box<[i128]> = (0..order)
                            .map(|j| ext[j + 1] + col[ix][j] + col[iy][j] - col[iz][j])
                            .collect();
                        let key: Key = (g, [trans[ix].to, trans[iy].to, trans[iz].to]);
                        let id = match index.get(&key) {
                            Some(&id) => id,
                            None => {
                                if rejected.contains(&key) {
                                    continue;
                                }
                                if !viable(&key) {
                                    rejected.insert(key);
                                    continue;
                                }
                                let id = states.len() as u32;
                                if states.len() >= max_states {
                                    return Err(Error::Synthesis(format!(
                                        "more than {max_states} carry states"
                                    )));
                                }
                                index.insert(key.clone(), id);
                                states.push(key);
                                id
                            }
                        };
                        let letter = alphabet
                            .encode(&[trans[ix].digit, trans[iy].digit, trans[iz].digit])?;
                        table[row + letter as usize] = id;
                    }
                }
            }
        }
        let accepting = states.iter().map(|(f, _)| f[0] == 0).collect();
        Ok(MultiTrackDfa::from_parts(alphabet, 0, accepting, table)?.minimize())
    }

    /// Checks `add` against integer addition for all `x, y <= bound`: with
    /// the representations of `x` and `y` padded to the length of the
    /// longest of `x`, `y`, `x + y` or one more, exactly one `z` is accepted
    /// and the representation of `x + y` is. Returns the first
    /// counterexample.
    pub fn check_addition_box(&self, add: &MultiTrackDfa, bound: u64) -> Result<Option<(u64, u64, String)>> {
        let reps: Vec<Vec<u32>> = (0..=2 * bound).map(|v| self.represent(v)).collect::<Result<_>>()?;
        if *add.alphabet() != TrackAlphabet::uniform(3, self.radix())? {
            return Err(Error::Interface("addition automaton has the wrong tracks".into()));
        }
        let radix = self.radix();
        let failures: Vec<(u64, u64, String)> = (0..=bound)
            .into_par_iter()
            .filter_map(|x| {
                let mut layer: Vec<(u32, u64)> = Vec::new();
                let mut next: Vec<(u32, u64)> = Vec::new();
                for y in 0..=bound {
                    let z = x + y;
                    let base = reps[x as usize].len().max(reps[y as usize].len()).max(reps[z as usize].len());
                    for len in [base, base + 1] {
                        let pad = |r: &Vec<u32>| {
                            let mut v = vec![0; len - r.len()];
                            v.extend(r);
                            v
                        };
                        let (px, py, pz) = (pad(&reps[x as usize]), pad(&reps[y as usize]), pad(&reps[z as usize]));
                        // number of accepted z per state, column by column
                        layer.clear();
                        layer.push((add.initial(), 1));
                        for i in 0..len {
                            next.clear();
                            for &(s, c) in &layer {
                                let base = (px[i] * radix + py[i]) * radix;
                                for dz in 0..radix {
                                    let t = add.step(s, base + dz);
                                    if t != DEAD {
                                        next.push((t, c));
                                    }
                                }
                            }
                            next.sort_unstable_by_key(|e| e.0);
                            next.dedup_by(|a, b| {
                                let same = a.0 == b.0;
                                if same {
                                    b.1 += a.1;
                                }
                                same
                            });
                            std::mem::swap(&mut layer, &mut next);
                        }
                        let accepted: u64 = layer.iter().filter(|e| add.is_accepting(e.0)).map(|e| e.1).sum();
                        let right = add.accepts_tracks(&[px, py, pz.clone()]).unwrap_or(false);
                        let ok = accepted == 1 && right;
                        if !ok {
                            let msg = format!("length {len}: {accepted} z accepted, sum accepted: {right}");
                            return Some((x, y, msg));
                        }
                    }
                }
                None
            })
            .collect();
        Ok(failures.into_iter().min_by_key(|f| (f.0, f.1)))
    }
}
