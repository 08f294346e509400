//! Batch scripts.
//!
//! ```text
//! # comment
//! def factoreq "Au,v (u>=i & u<i+n & u+j=v+i) => Q[u]=Q[v]"
//! def novel count i "n>=1 & Aj (j<i) => ~$factoreq(i,j,n)"
//! eval check "Ai,n $factoreq(i,i,n)"
//! linrep-eq novel twon
//! ```
//!
//! `def` may list parameters explicitly, as in `def per(i,n,p) "..."`.
//! With `count x` it also builds the linear representation counting `x`.

use std::time::Instant;

use super::compile::{instantiate, Engine};
use super::linrep::{count_representation, linrep_equal};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Command {
    Def {
        name: String,
        params: Option<Vec<String>>,
        count: Option<String>,
        formula: String,
    },
    Eval {
        name: String,
        formula: String,
    },
    LinrepEq(String, String),
}

/// One executed command.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub line: usize,
    pub command: Command,
    /// Truth value for `eval` and `linrep-eq`.
    pub truth: Option<bool>,
    pub states: Option<usize>,
    pub dimension: Option<usize>,
    pub millis: u128,
}

impl std::fmt::Display for Outcome {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let verdict = |b: bool| if b { "TRUE" } else { "FALSE" };
        match &self.command {
            Command::Def { name, count, .. } => {
                write!(f, "def {name}: {} states", self.states.unwrap_or(0))?;
                if let (Some(c), Some(d)) = (count, self.dimension) {
                    write!(f, ", counting {c} with dimension {d}")?;
                }
            }
            Command::Eval { name, .. } => write!(f, "eval {name}: {}", verdict(self.truth == Some(true)))?,
            Command::LinrepEq(a, b) => write!(f, "linrep-eq {a} {b}: {}", verdict(self.truth == Some(true)))?,
        }
        write!(f, " ({} ms)", self.millis)
    }
}

fn err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        what: "script",
        message: format!("line {line}: {}", message.into()),
    }
}

fn is_name(s: &str) -> bool {
    s.chars().next().is_some_and(|c| c.is_ascii_alphabetic())
        && s.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
}

pub fn parse_script(text: &str) -> Result<Vec<(usize, Command)>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let (head, formula) = match trimmed.find('"') {
            Some(q) => {
                let rest = &trimmed[q + 1..];
                let end = rest.rfind('"').ok_or_else(|| err(line, "unterminated formula"))?;
                if !rest[end + 1..].trim().is_empty() {
                    return Err(err(line, "text after the formula"));
                }
                (&trimmed[..q], Some(rest[..end].to_string()))
            }
            None => (trimmed, None),
        };
        let words: Vec<&str> = head.split_whitespace().collect();
        let command = match (words.as_slice(), formula) {
            (["def", decl, rest @ ..], Some(formula)) => {
                let (name, params) = match decl.split_once('(') {
                    Some((n, p)) => {
                        let p = p.strip_suffix(')').ok_or_else(|| err(line, "expected `)`"))?;
                        let params: Vec<String> = p.split(',').map(|s| s.trim().to_string()).collect();
                        if params.iter().any(|p| !is_name(p)) {
                            return Err(err(line, "bad parameter list"));
                        }
                        (n.to_string(), Some(params))
                    }
                    None => (decl.to_string(), None),
                };
                if !is_name(&name) {
                    return Err(err(line, format!("bad name {name:?}")));
                }
                let count = match rest {
                    [] => None,
                    ["count", v] if is_name(v) => Some(v.to_string()),
                    _ => return Err(err(line, "expected `count <var>` or the formula")),
                };
                Command::Def {
                    name,
                    params,
                    count,
                    formula,
                }
            }
            (["eval", name], Some(formula)) if is_name(name) => Command::Eval {
                name: name.to_string(),
                formula,
            },
            (["linrep-eq", a, b], None) if is_name(a) && is_name(b) => Command::LinrepEq(a.to_string(), b.to_string()),
            _ => return Err(err(line, "expected `def`, `eval` or `linrep-eq`")),
        };
        out.push((line, command));
    }
    Ok(out)
}

impl Engine {
    /// Runs a script, stopping at the first failing command.
    pub fn run_script(&mut self, text: &str) -> Result<Vec<Outcome>> {
        let mut out = Vec::new();
        for (line, command) in parse_script(text)? {
            let start = Instant::now();
            let at = |e: Error| err(line, e.to_string());
            let mut outcome = Outcome {
                line,
                command: command.clone(),
                truth: None,
                states: None,
                dimension: None,
                millis: 0,
            };
            match &command {
                Command::Def {
                    name,
                    params,
                    count,
                    formula,
                } => {
                    let pred = self.define(name, formula, params.as_deref()).map_err(at)?;
                    outcome.states = Some(pred.dfa.num_states());
                    if let Some(c) = count {
                        let rel = instantiate(&pred.dfa, &pred.params).map_err(at)?;
                        let lr = count_representation(&rel, c).map_err(at)?;
                        outcome.dimension = Some(lr.dim());
                        self.store_count(name, lr);
                    }
                }
                Command::Eval { formula, .. } => {
                    outcome.truth = Some(self.eval_closed(formula).map_err(at)?);
                }
                Command::LinrepEq(a, b) => {
                    let get = |n: &str| {
                        self.count(n)
                            .ok_or_else(|| err(line, format!("{n} has no counting representation")))
                    };
                    outcome.truth = Some(linrep_equal(get(a)?, get(b)?).map_err(at)?);
                }
            }
            outcome.millis = start.elapsed().as_millis();
            out.push(outcome);
        }
        Ok(out)
    }
}
