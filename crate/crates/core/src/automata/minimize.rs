//! Minimization of partial DFAs by partition refinement over states and
//! transitions, followed by canonical renumbering.
//!
//! Works in time `O(m log n)` in the number `m` of live transitions, so a
//! large tuple alphabet with mostly dead transitions stays cheap.

use std::collections::VecDeque;

use super::dfa::{MultiTrackDfa, DEAD};

/// A refinable partition of `0..n`.
struct Partition {
    elems: Vec<u32>,
    loc: Vec<u32>,
    set_of: Vec<u32>,
    first: Vec<u32>,
    past: Vec<u32>,
    marked: Vec<u32>,
    touched: Vec<u32>,
    sets: u32,
}

impl Partition {
    fn new(n: usize) -> Self {
        Partition {
            elems: (0..n as u32).collect(),
            loc: (0..n as u32).collect(),
            set_of: vec![0; n],
            first: {
                let mut f = vec![0; n + 1];
                f[0] = 0;
                f
            },
            past: {
                let mut p = vec![0; n + 1];
                p[0] = n as u32;
                p
            },
            marked: vec![0; n + 1],
            touched: Vec::new(),
            sets: u32::from(n > 0),
        }
    }

    fn mark(&mut self, e: u32) {
        let s = self.set_of[e as usize] as usize;
        let i = self.loc[e as usize] as usize;
        let j = (self.first[s] + self.marked[s]) as usize;
        self.elems.swap(i, j);
        self.loc[self.elems[i] as usize] = i as u32;
        self.loc[e as usize] = j as u32;
        if self.marked[s] == 0 {
            self.touched.push(s as u32);
        }
        self.marked[s] += 1;
    }

    /// Splits every touched set into its marked and unmarked parts; the
    /// smaller part becomes a new set.
    fn split(&mut self) {
        while let Some(s) = self.touched.pop() {
            let s = s as usize;
            let j = self.first[s] + self.marked[s];
            if j == self.past[s] {
                self.marked[s] = 0;
                continue;
            }
            let z = self.sets as usize;
            if self.marked[s] <= self.past[s] - j {
                self.first[z] = self.first[s];
                self.past[z] = j;
                self.first[s] = j;
            } else {
                self.past[z] = self.past[s];
                self.first[z] = j;
                self.past[s] = j;
            }
            for i in self.first[z]..self.past[z] {
                self.set_of[self.elems[i as usize] as usize] = z as u32;
            }
            self.marked[s] = 0;
            self.marked[z] = 0;
            self.sets += 1;
        }
    }
}

/// Result of minimization before it is wrapped into an automaton type.
pub(crate) struct Quotient {
    pub initial: u32,
    pub labels: Vec<u32>,
    pub trans: Vec<u32>,
}

/// Minimizes a partial DFA whose states carry `labels`; states with
/// different labels are never merged. When `live` is given, states outside
/// it are treated as the dead state. States are renumbered breadth-first
/// from the initial state in letter order.
pub(crate) fn minimize_partial(
    size: usize,
    initial: u32,
    trans: &[u32],
    labels: &[u32],
    live: &[bool],
) -> Option<Quotient> {
    let edges = (0..labels.len()).flat_map(|s| {
        let row = &trans[s * size..(s + 1) * size];
        row.iter()
            .enumerate()
            .filter(|&(_, &t)| t != DEAD)
            .map(move |(l, &t)| (s as u32, l as u32, t))
    });
    minimize_edges(size, initial, labels, live, edges)
}

/// Same as [`minimize_partial`] for transitions given as
/// `(from, letter, to)` triples sorted by `from`.
pub(crate) fn minimize_edges(
    size: usize,
    initial: u32,
    labels: &[u32],
    live: &[bool],
    all_edges: impl Iterator<Item = (u32, u32, u32)>,
) -> Option<Quotient> {
    let n = labels.len();
    if !live[initial as usize] {
        return None;
    }
    // compact live states
    let mut id = vec![DEAD; n];
    let mut states = Vec::new();
    for s in 0..n {
        if live[s] {
            id[s] = states.len() as u32;
            states.push(s as u32);
        }
    }
    let m = states.len();
    let mut tails = Vec::new();
    let mut letters = Vec::new();
    let mut heads = Vec::new();
    for (s, l, t) in all_edges {
        if live[s as usize] && live[t as usize] {
            tails.push(id[s as usize]);
            letters.push(l);
            heads.push(id[t as usize]);
        }
    }
    let edges = tails.len();

    // initial partition by label
    let mut blocks = Partition::new(m);
    let mut by_label: Vec<(u32, u32)> = states
        .iter()
        .enumerate()
        .map(|(ns, &s)| (labels[s as usize], ns as u32))
        .collect();
    by_label.sort_unstable();
    let mut i = 0;
    let mut first_group = true;
    while i < by_label.len() {
        let mut j = i;
        while j < by_label.len() && by_label[j].0 == by_label[i].0 {
            j += 1;
        }
        if !first_group {
            for &(_, s) in &by_label[i..j] {
                blocks.mark(s);
            }
            blocks.split();
        }
        first_group = false;
        i = j;
    }

    // incoming edges per state
    let mut in_start = vec![0u32; m + 1];
    for &h in &heads {
        in_start[h as usize + 1] += 1;
    }
    for s in 0..m {
        in_start[s + 1] += in_start[s];
    }
    let mut incoming = vec![0u32; edges];
    let mut fill = in_start.clone();
    for (e, &h) in heads.iter().enumerate() {
        incoming[fill[h as usize] as usize] = e as u32;
        fill[h as usize] += 1;
    }

    // transitions partitioned by letter
    let mut cords = Partition::new(edges);
    if edges > 0 {
        let mut order: Vec<u32> = (0..edges as u32).collect();
        order.sort_unstable_by_key(|&e| letters[e as usize]);
        cords.sets = 0;
        let mut start = 0usize;
        for (pos, &e) in order.iter().enumerate() {
            if pos > 0 && letters[e as usize] != letters[order[pos - 1] as usize] {
                let c = cords.sets as usize;
                cords.first[c] = start as u32;
                cords.past[c] = pos as u32;
                cords.sets += 1;
                start = pos;
            }
            cords.set_of[e as usize] = cords.sets;
            cords.loc[e as usize] = pos as u32;
        }
        let c = cords.sets as usize;
        cords.first[c] = start as u32;
        cords.past[c] = edges as u32;
        cords.sets += 1;
        cords.elems = order;
    }

    let mut b = 1u32;
    let mut c = 0u32;
    while c < cords.sets {
        let (lo, hi) = (cords.first[c as usize], cords.past[c as usize]);
        for i in lo..hi {
            let e = cords.elems[i as usize];
            blocks.mark(tails[e as usize]);
        }
        blocks.split();
        c += 1;
        while b < blocks.sets {
            let (lo, hi) = (blocks.first[b as usize], blocks.past[b as usize]);
            for i in lo..hi {
                let s = blocks.elems[i as usize] as usize;
                for k in in_start[s]..in_start[s + 1] {
                    cords.mark(incoming[k as usize]);
                }
            }
            cords.split();
            b += 1;
        }
    }

    // quotient with breadth-first numbering
    let block_of = |ns: u32| blocks.set_of[ns as usize];
    let nb = blocks.sets as usize;
    let mut rep = vec![u32::MAX; nb];
    for ns in 0..m as u32 {
        let bl = block_of(ns) as usize;
        if rep[bl] == u32::MAX {
            rep[bl] = ns;
        }
    }
    let mut out_row: Vec<Vec<u32>> = vec![Vec::new(); nb];
    {
        // per block, its representative's live transitions
        let mut row = vec![DEAD; size];
        let mut e = 0usize;
        for ns in 0..m as u32 {
            let start = e;
            while e < edges && tails[e] == ns {
                e += 1;
            }
            let bl = block_of(ns) as usize;
            if rep[bl] != ns {
                continue;
            }
            row.fill(DEAD);
            for k in start..e {
                row[letters[k] as usize] = block_of(heads[k]);
            }
            out_row[bl] = row.clone();
        }
    }
    let mut order = vec![DEAD; nb];
    let mut seq = Vec::with_capacity(nb);
    let init_block = block_of(id[initial as usize]);
    order[init_block as usize] = 0;
    seq.push(init_block);
    let mut queue = VecDeque::from([init_block]);
    while let Some(bl) = queue.pop_front() {
        for &t in &out_row[bl as usize] {
            if t != DEAD && order[t as usize] == DEAD {
                order[t as usize] = seq.len() as u32;
                seq.push(t);
                queue.push_back(t);
            }
        }
    }
    let mut new_trans = Vec::with_capacity(seq.len() * size);
    let mut new_labels = Vec::with_capacity(seq.len());
    for &bl in &seq {
        new_labels.push(labels[states[rep[bl as usize] as usize] as usize]);
        new_trans.extend(
            out_row[bl as usize]
                .iter()
                .map(|&t| if t == DEAD { DEAD } else { order[t as usize] }),
        );
    }
    Some(Quotient {
        initial: 0,
        labels: new_labels,
        trans: new_trans,
    })
}

impl MultiTrackDfa {
    /// The canonical minimal automaton for the same language: unreachable
    /// and dead states removed, equivalent states merged, states numbered
    /// breadth-first from the initial state in letter order. Equal
    /// languages give equal values.
    pub fn minimize(&self) -> MultiTrackDfa {
        let reach = self.reachable();
        let co = self.coreachable();
        let live: Vec<bool> = reach.iter().zip(&co).map(|(&a, &b)| a && b).collect();
        let labels: Vec<u32> = self.accepting.iter().map(|&a| u32::from(a)).collect();
        match minimize_partial(self.alphabet.size(), self.initial, &self.trans, &labels, &live) {
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
