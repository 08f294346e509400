//! Linear representations of counting functions.
//!
//! For a relation `R(x, p1, .., pm)` the number of `x` with `R(x, p)` is
//! `u · μ(w1) ⋯ μ(wl) · v` where `w` is the padded representation of the
//! parameter tuple and `μ(d)[s][t]` counts the digits of `x` taking state
//! `s` to `t` next to parameter column `d`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::compile::Relation;
use crate::automata::{zip_tracks, TrackAlphabet, DEAD};
use crate::error::{Error, Result};
use crate::numeration::NumerationSystem;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearRepresentation {
    params: Vec<String>,
    alphabet: TrackAlphabet,
    u: Vec<BigInt>,
    /// One matrix per parameter column, row-major.
    mu: Vec<Vec<Vec<BigInt>>>,
    v: Vec<BigInt>,
}

fn times(row: &[BigInt], m: &[Vec<BigInt>]) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); m.first().map_or(0, Vec::len)];
    for (x, r) in row.iter().zip(m) {
        if x.is_zero() {
            continue;
        }
        for (o, y) in out.iter_mut().zip(r) {
            if !y.is_zero() {
                *o += x * y;
            }
        }
    }
    out
}

fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

impl LinearRepresentation {
    pub fn params(&self) -> &[String] {
        &self.params
    }

    pub fn dim(&self) -> usize {
        self.u.len()
    }

    pub fn u(&self) -> &[BigInt] {
        &self.u
    }

    pub fn mu(&self, column: u32) -> &[Vec<BigInt>] {
        &self.mu[column as usize]
    }

    pub fn v(&self) -> &[BigInt] {
        &self.v
    }

    /// Value on a string of parameter columns.
    pub fn value_columns(&self, columns: &[u32]) -> BigInt {
        let mut row = self.u.clone();
        for &c in columns {
            row = times(&row, &self.mu[c as usize]);
        }
        dot(&row, &self.v)
    }

    /// Value at a parameter tuple, in parameter order.
    pub fn value(&self, system: &NumerationSystem, args: &[u64]) -> Result<BigInt> {
        if args.len() != self.params.len() {
            return Err(Error::Interface(format!(
                "{} arguments for {} parameters",
                args.len(),
                self.params.len()
            )));
        }
        let reps: Vec<Vec<u32>> = args.iter().map(|&a| system.represent(a)).collect::<Result<_>>()?;
        Ok(self.value_columns(&zip_tracks(&self.alphabet, &reps)?))
    }
}

/// Counts the values of `counted` satisfying `rel`, as a function of the
/// remaining variables. Fails with [`Error::DivergingCount`] when some
/// parameter value has infinitely many solutions.
pub fn count_representation(rel: &Relation, counted: &str) -> Result<LinearRepresentation> {
    let vars = rel.vars();
    let c = vars
        .iter()
        .position(|v| v == counted)
        .ok_or_else(|| Error::Usage(format!("{counted} is not a free variable")))?;
    let dfa = rel.dfa();
    let full = dfa.alphabet();
    let param_tracks: Vec<usize> = (0..vars.len()).filter(|&t| t != c).collect();
    let alphabet = TrackAlphabet::new(param_tracks.iter().map(|&t| full.radices()[t]).collect())?;
    let column_of = full.restriction_table(&alphabet, &param_tracks)?;

    let reach = dfa.reachable();
    let live = dfa.coreachable();
    let mut index = vec![usize::MAX; dfa.num_states()];
    let mut n = 0;
    for s in 0..dfa.num_states() {
        if reach[s] && live[s] {
            index[s] = n;
            n += 1;
        }
    }
    let mut mu = vec![vec![vec![BigInt::zero(); n]; n]; alphabet.size()];
    for (s, l, t) in dfa.transitions() {
        if t == DEAD {
            continue;
        }
        let (si, ti) = (index[s as usize], index[t as usize]);
        if si != usize::MAX && ti != usize::MAX {
            mu[column_of[l as usize] as usize][si][ti] += 1;
        }
    }
    let mut u = vec![BigInt::zero(); n];
    let v: Vec<BigInt> = (0..dfa.num_states())
        .filter(|&s| index[s] != usize::MAX)
        .map(|s| if dfa.is_accepting(s as u32) { BigInt::one() } else { BigInt::zero() })
        .collect();
    let params: Vec<String> = param_tracks.iter().map(|&t| vars[t].clone()).collect();
    let init = index[dfa.initial() as usize];
    if init == usize::MAX {
        return Ok(LinearRepresentation { params, alphabet, u, mu, v });
    }
    u[init] = BigInt::one();
    // leading parameter zeros while the counted variable is longer; the
    // count is finite exactly when this settles within n steps
    for _ in 0..n {
        u = times(&u, &mu[0]);
    }
    if times(&u, &mu[0]) != u {
        return Err(Error::DivergingCount(format!(
            "infinitely many {counted} for some {}",
            if params.is_empty() { "formula".to_string() } else { params.join(",") }
        )));
    }
    Ok(LinearRepresentation { params, alphabet, u, mu, v })
}

/// Reduces `row` against an echelon basis of integer rows, keeping it
/// primitive. Returns the pivot column when something is left.
fn reduce(basis: &[(usize, Vec<BigInt>)], row: &mut [BigInt]) -> Option<usize> {
    for (p, b) in basis {
        if row[*p].is_zero() {
            continue;
        }
        let (x, y) = (b[*p].clone(), row[*p].clone());
        for (r, bb) in row.iter_mut().zip(b) {
            *r = &*r * &x - bb * &y;
        }
        let g = row.iter().fold(BigInt::zero(), |g, r| g.gcd(r));
        if !g.is_zero() && !g.is_one() {
            for r in row.iter_mut() {
                *r = &*r / &g;
            }
        }
    }
    let p = row.iter().position(|r| !r.is_zero())?;
    if row[p].is_negative() {
        for r in row.iter_mut() {
            *r = -&*r;
        }
    }
    Some(p)
}

/// Whether two representations compute the same function. Explores the
/// reachable row space of the difference representation and checks that it
/// annihilates the final vector.
pub fn linrep_equal(a: &LinearRepresentation, b: &LinearRepresentation) -> Result<bool> {
    if a.alphabet != b.alphabet {
        return Err(Error::Interface("representations read different parameter columns".into()));
    }
    let na = a.dim();
    let start: Vec<BigInt> = a.u.iter().cloned().chain(b.u.iter().map(|x| -x)).collect();
    let v: Vec<BigInt> = a.v.iter().chain(&b.v).cloned().collect();
    let step = |row: &[BigInt], col: usize| -> Vec<BigInt> {
        let mut out = times(&row[..na], &a.mu[col]);
        out.extend(times(&row[na..], &b.mu[col]));
        out
    };
    let mut basis: Vec<(usize, Vec<BigInt>)> = Vec::new();
    let mut queue = Vec::new();
    let mut first = start;
    if let Some(p) = reduce(&basis, &mut first) {
        basis.push((p, first.clone()));
        queue.push(first);
    }
    while let Some(row) = queue.pop() {
        if !dot(&row, &v).is_zero() {
            return Ok(false);
        }
        for col in 0..a.alphabet.size() {
            let mut next = step(&row, col);
            if let Some(p) = reduce(&basis, &mut next) {
                basis.push((p, next.clone()));
                queue.push(next);
            }
        }
    }
    Ok(true)
}
