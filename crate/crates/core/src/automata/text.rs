//! Line-oriented text format for automata.
//!
//! ```text
//! tracks 2
//! alphabet 0 1
//! alphabet 0 1
//! initial 0
//! accepting 0
//! 0 (0,0) 0
//! 0 (1,1) 0
//! ```
//!
//! A DFAO adds one `output <state> <symbol>` line per state. Transitions to
//! the dead state are omitted. Exporting a parsed text reproduces it exactly
//! when the text was itself produced by export.

use std::fmt::Write as _;

use sha2::{Digest, Sha256};

use super::alphabet::TrackAlphabet;
use super::dfa::MultiTrackDfa;
use super::dfao::Dfao;
use crate::error::{Error, Result};

fn write_header(out: &mut String, dfa: &MultiTrackDfa) {
    let _ = writeln!(out, "tracks {}", dfa.tracks());
    for &r in dfa.alphabet().radices() {
        let digits: Vec<String> = (0..r).map(|d| d.to_string()).collect();
        let _ = writeln!(out, "alphabet {}", digits.join(" "));
    }
    let _ = writeln!(out, "initial {}", dfa.initial());
    let acc: Vec<String> = dfa.accepting_states().map(|s| s.to_string()).collect();
    if acc.is_empty() {
        out.push_str("accepting\n");
    } else {
        let _ = writeln!(out, "accepting {}", acc.join(" "));
    }
    for (s, l, t) in dfa.transitions() {
        let digits: Vec<String> = dfa
            .alphabet()
            .decode(l)
            .iter()
            .map(|d| d.to_string())
            .collect();
        let _ = writeln!(out, "{s} ({}) {t}", digits.join(","));
    }
}

impl MultiTrackDfa {
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        write_header(&mut out, self);
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let parsed = parse(text)?;
        if !parsed.outputs.is_empty() {
            return Err(perr(0, "output lines belong to a DFAO"));
        }
        if let Some((line, _)) = parsed.extra.first() {
            return Err(perr(*line, "unknown line"));
        }
        parsed.dfa
    }

    /// SHA-256 of the text export, in hex.
    pub fn fingerprint(&self) -> String {
        hex_digest(self.to_text().as_bytes())
    }
}

impl Dfao {
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        write_header(&mut out, self.dfa());
        for (s, o) in self.outputs().iter().enumerate() {
            let _ = writeln!(out, "output {s} {o}");
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let parsed = parse(text)?;
        if let Some((line, _)) = parsed.extra.first() {
            return Err(perr(*line, "unknown line"));
        }
        dfao_from_parsed(parsed)
    }

    pub fn fingerprint(&self) -> String {
        hex_digest(self.to_text().as_bytes())
    }
}

pub(crate) fn dfao_from_parsed(parsed: Parsed) -> Result<Dfao> {
    let dfa = parsed.dfa?;
    let mut outputs = vec![None; dfa.num_states()];
    for (s, o) in parsed.outputs {
        let slot = outputs
            .get_mut(s as usize)
            .ok_or_else(|| perr(0, "output for a missing state"))?;
        *slot = Some(o);
    }
    let outputs = outputs
        .into_iter()
        .enumerate()
        .map(|(s, o)| o.ok_or_else(|| Error::Construction(format!("state {s} has no output"))))
        .collect::<Result<Vec<_>>>()?;
    Dfao::new(dfa, outputs)
}

pub(crate) fn hex_digest(bytes: &[u8]) -> String {
    Sha256::digest(bytes)
        .iter()
        .fold(String::new(), |mut s, b| {
            let _ = write!(s, "{b:02x}");
            s
        })
}

fn perr(line: usize, message: &str) -> Error {
    Error::Parse {
        what: "automaton",
        message: format!("line {line}: {message}"),
    }
}

pub(crate) struct Parsed {
    pub dfa: Result<MultiTrackDfa>,
    pub outputs: Vec<(u32, u32)>,
    /// Lines with an unrecognized keyword, for formats layered on this one.
    pub extra: Vec<(usize, String)>,
}

pub(crate) fn parse(text: &str) -> Result<Parsed> {
    let mut tracks: Option<usize> = None;
    let mut radices = Vec::new();
    let mut initial: Option<u32> = None;
    let mut accepting: Option<Vec<u32>> = None;
    let mut edges: Vec<(u32, Vec<u32>, u32)> = Vec::new();
    let mut outputs = Vec::new();
    let mut extra = Vec::new();

    let num = |line: usize, s: &str| -> Result<u32> {
        s.parse::<u32>().map_err(|_| perr(line, &format!("bad number {s:?}")))
    };

    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let l = raw.trim();
        if l.is_empty() || l.starts_with('#') {
            continue;
        }
        let mut words = l.split_whitespace();
        let head = words.next().unwrap_or_default();
        match head {
            "tracks" => {
                let k = words.next().ok_or_else(|| perr(line, "missing track count"))?;
                tracks = Some(num(line, k)? as usize);
            }
            "alphabet" => {
                let digits: Vec<u32> = words.map(|w| num(line, w)).collect::<Result<_>>()?;
                if digits.is_empty() || digits.iter().enumerate().any(|(j, &d)| d != j as u32) {
                    return Err(perr(line, "alphabet must list 0 1 .. d without gaps"));
                }
                radices.push(digits.len() as u32);
            }
            "initial" => {
                let s = words.next().ok_or_else(|| perr(line, "missing initial state"))?;
                initial = Some(num(line, s)?);
            }
            "accepting" => {
                accepting = Some(words.map(|w| num(line, w)).collect::<Result<_>>()?);
            }
            "output" => {
                let s = words.next().ok_or_else(|| perr(line, "missing state"))?;
                let o = words.next().ok_or_else(|| perr(line, "missing symbol"))?;
                outputs.push((num(line, s)?, num(line, o)?));
            }
            _ if head.bytes().all(|b| b.is_ascii_digit()) => {
                let open = l.find('(').ok_or_else(|| perr(line, "expected `(`"))?;
                let close = l.find(')').ok_or_else(|| perr(line, "expected `)`"))?;
                let from = num(line, l[..open].trim())?;
                let inner = l[open + 1..close].trim();
                let digits: Vec<u32> = if inner.is_empty() {
                    Vec::new()
                } else {
                    inner
                        .split(',')
                        .map(|d| num(line, d.trim()))
                        .collect::<Result<_>>()?
                };
                let to = num(line, l[close + 1..].trim())?;
                edges.push((from, digits, to));
            }
            _ => extra.push((line, l.to_string())),
        }
    }

    let tracks = tracks.ok_or_else(|| perr(0, "missing `tracks` header"))?;
    if radices.len() != tracks {
        return Err(perr(0, "need one `alphabet` line per track"));
    }
    let alphabet = TrackAlphabet::new(radices)?;
    let initial = initial.ok_or_else(|| perr(0, "missing `initial`"))?;
    let accepting = accepting.ok_or_else(|| perr(0, "missing `accepting`"))?;
    let states = edges
        .iter()
        .flat_map(|(s, _, t)| [*s, *t])
        .chain(accepting.iter().copied())
        .chain(outputs.iter().map(|&(s, _)| s))
        .chain([initial])
        .max()
        .unwrap_or(0) as usize
        + 1;
    let letters = edges
        .into_iter()
        .map(|(s, d, t)| Ok((s, alphabet.encode(&d)?, t)))
        .collect::<Result<Vec<_>>>();
    let dfa = letters.and_then(|e| {
        MultiTrackDfa::from_transitions(alphabet, states, initial, &accepting, e)
    });
    Ok(Parsed {
        dfa,
        outputs,
        extra,
    })
}
