//! Text formats for numeration systems.
//!
//! A system description names a morphism and, optionally, the three maps of
//! an inflation:
//!
//! ```text
//! name dt_q
//! seed a
//! [morphism]
//! a -> ab
//! b -> cb
//! c -> a
//! [image]
//! a -> 011
//! b -> 0
//! c -> 01
//! [inflation]
//! a -> a12
//! b -> b
//! c -> c3
//! [projection]
//! a -> 0
//! ...
//! ```
//!
//! `[image]` is the coding `g`, `[inflation]` is `g'` and `[projection]` is
//! `g''`. Without `seed` the first letter of `[morphism]` is used.
//!
//! A built system exports as its DFAO in the automaton text format followed
//! by `name`, `state <id> <label>`, `symbol <output> <letter>`,
//! `recurrence c1 .. cd` and one `seq <state> <digit> v0 .. v(d-1)` line
//! per transition.

use std::fmt::Write as _;

use super::recurrence::Recurrence;
use super::system::{NumerationSystem, SeqTransition};
use crate::automata::{dfao_from_parsed, parse_text};
use crate::error::{Error, Result};
use crate::word::Morphism;

pub const DT_H_SPEC: &str = "\
name dt_h
seed a
[morphism]
a -> ab
b -> cb
c -> a
";

pub const DT_Q_SPEC: &str = "\
name dt_q
seed a
[morphism]
a -> ab
b -> cb
c -> a
[image]
a -> 011
b -> 0
c -> 01
[inflation]
a -> a12
b -> b
c -> c3
[projection]
a -> 0
b -> 0
c -> 0
1 -> 1
2 -> 1
3 -> 1
";

fn perr(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        what: "numeration system",
        message: format!("line {line}: {}", message.into()),
    }
}

impl NumerationSystem {
    /// Builds a system from its description.
    pub fn from_spec(text: &str) -> Result<Self> {
        let mut name = None;
        let mut seed = None;
        let mut sections: Vec<(&str, String)> = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            if let Some(sec) = line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
                if !matches!(sec, "morphism" | "image" | "inflation" | "projection") {
                    return Err(perr(i + 1, format!("unknown section [{sec}]")));
                }
                if sections.iter().any(|(s, _)| *s == sec) {
                    return Err(perr(i + 1, format!("section [{sec}] repeated")));
                }
                sections.push((sec, String::new()));
                continue;
            }
            match sections.last_mut() {
                Some((_, body)) => {
                    body.push_str(line);
                    body.push('\n');
                }
                None => {
                    let (key, value) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
                    match key {
                        "name" => name = Some(value.trim().to_string()),
                        "seed" => {
                            let v = value.trim();
                            if v.len() != 1 {
                                return Err(perr(i + 1, "seed must be one letter"));
                            }
                            seed = Some(v.as_bytes()[0]);
                        }
                        _ => return Err(perr(i + 1, format!("unknown setting {key:?}"))),
                    }
                }
            }
        }
        let get = |sec: &str| sections.iter().find(|(s, _)| *s == sec).map(|(_, b)| b.as_str());
        let morphism_text = get("morphism").ok_or_else(|| perr(0, "missing [morphism]"))?;
        let morphism: Morphism = morphism_text.parse()?;
        let seed = match seed {
            Some(s) => s,
            None => morphism_text.trim_start().as_bytes()[0],
        };
        let base = NumerationSystem::dt_from_morphism(&morphism, seed)?;
        let sys = match (get("image"), get("inflation"), get("projection")) {
            (None, None, None) => base,
            (Some(g), Some(gp), Some(gs)) => base.inflate_for_image(&g.parse()?, &gp.parse()?, &gs.parse()?)?,
            _ => return Err(perr(0, "[image], [inflation] and [projection] go together")),
        };
        Ok(match name {
            Some(n) => sys.with_name(n),
            None => sys,
        })
    }

    /// The DT system of `a -> ab, b -> cb, c -> a`.
    pub fn dt_h() -> Self {
        Self::from_spec(DT_H_SPEC).expect("built-in description")
    }

    /// The inflated system whose DFAO computes the image of the fixed point
    /// under `a -> 011, b -> 0, c -> 01`.
    pub fn dt_q() -> Self {
        Self::from_spec(DT_Q_SPEC).expect("built-in description")
    }

    /// A built-in system by name.
    pub fn builtin(name: &str) -> Result<Self> {
        match name {
            "dt_h" => Ok(Self::dt_h()),
            "dt_q" => Ok(Self::dt_q()),
            _ => Err(Error::Usage(format!("unknown numeration system {name:?} (expected dt_h or dt_q)"))),
        }
    }

    /// Sequence automaton in the automaton text format plus sequence lines.
    pub fn to_text(&self) -> String {
        let mut out = self.dfao().to_text();
        let _ = writeln!(out, "name {}", self.name());
        for (i, s) in self.states().iter().enumerate() {
            let _ = writeln!(out, "state {i} {s}");
        }
        for (i, &l) in self.output_letters().iter().enumerate() {
            let _ = writeln!(out, "symbol {i} {}", l as char);
        }
        let coeffs: Vec<String> = self.recurrence().coeffs().iter().map(|c| c.to_string()).collect();
        let _ = writeln!(out, "recurrence {}", coeffs.join(" "));
        for t in self.transitions() {
            let vals: Vec<String> = t.initial.iter().map(|v| v.to_string()).collect();
            let _ = writeln!(out, "seq {} {} {}", t.from, t.digit, vals.join(" "));
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut parsed = parse_text(text)?;
        let extra = std::mem::take(&mut parsed.extra);
        let dfao = dfao_from_parsed(parsed)?;
        let mut name = String::new();
        let mut states = vec![String::new(); dfao.num_states()];
        let mut letters: Vec<(u32, u8)> = Vec::new();
        let mut recurrence = None;
        let mut seqs: Vec<(u32, u32, Vec<i128>)> = Vec::new();
        for (line, l) in extra {
            let mut w = l.split_whitespace();
            let key = w.next().unwrap_or_default();
            let nums = |w: std::str::SplitWhitespace<'_>| -> Result<Vec<i128>> {
                w.map(|x| x.parse::<i128>().map_err(|_| perr(line, format!("bad number {x:?}"))))
                    .collect()
            };
            match key {
                "name" => name = w.next().unwrap_or_default().to_string(),
                "state" => {
                    let i: usize = w.next().and_then(|x| x.parse().ok()).ok_or_else(|| perr(line, "bad state"))?;
                    let label = w.next().ok_or_else(|| perr(line, "missing label"))?;
                    *states.get_mut(i).ok_or_else(|| perr(line, "no such state"))? = label.to_string();
                }
                "symbol" => {
                    let i: u32 = w.next().and_then(|x| x.parse().ok()).ok_or_else(|| perr(line, "bad output"))?;
                    let l = w.next().filter(|l| l.len() == 1).ok_or_else(|| perr(line, "bad letter"))?;
                    letters.push((i, l.as_bytes()[0]));
                }
                "recurrence" => {
                    let c = nums(w)?
                        .into_iter()
                        .map(|c| i64::try_from(c).map_err(|_| perr(line, "coefficient out of range")))
                        .collect::<Result<Vec<_>>>()?;
                    recurrence = Some(Recurrence::new(c)?);
                }
                "seq" => {
                    let v = nums(w)?;
                    if v.len() < 2 || v[0] < 0 || v[1] < 0 {
                        return Err(perr(line, "expected `seq <state> <digit> <values>`"));
                    }
                    seqs.push((v[0] as u32, v[1] as u32, v[2..].to_vec()));
                }
                _ => return Err(perr(line, "unknown line")),
            }
        }
        letters.sort_unstable();
        if letters.iter().enumerate().any(|(i, &(o, _))| o as usize != i) {
            return Err(perr(0, "symbol lines must number outputs 0, 1, .."));
        }
        let recurrence = recurrence.ok_or_else(|| perr(0, "missing recurrence"))?;
        let dfa = dfao.dfa();
        let mut transitions = Vec::new();
        for (s, d, t) in dfa.transitions() {
            let initial = seqs
                .iter()
                .find(|&&(fs, fd, _)| (fs, fd) == (s, d))
                .map(|(_, _, v)| v.clone())
                .ok_or_else(|| perr(0, format!("no sequence for transition {s} on {d}")))?;
            transitions.push(SeqTransition { from: s, digit: d, to: t, initial });
        }
        if seqs.len() != transitions.len() {
            return Err(perr(0, "sequence for a missing transition"));
        }
        if dfa.initial() != 0 {
            return Err(perr(0, "the initial state must be 0"));
        }
        NumerationSystem::new(
            name,
            states,
            transitions,
            recurrence,
            dfao.outputs().to_vec(),
            letters.into_iter().map(|(_, l)| l).collect(),
        )
    }
}
