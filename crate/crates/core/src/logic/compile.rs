//! Compilation of formulas to automata.
//!
//! A compiled formula is a [`Relation`]: an automaton whose tracks are the
//! formula's free variables in sorted order, accepting exactly the padded
//! representations of satisfying assignments. Every relation built here is
//! contained in the universe of its tracks, so complements are taken
//! relative to that universe and quantifiers range over natural numbers.
//!
//! Terms are compiled through fresh variables (named `#k`, which user
//! formulas cannot spell) that are quantified away as soon as the enclosing
//! operation has used them.

use std::collections::{BTreeMap, HashMap};
use std::rc::Rc;

use super::linrep::LinearRepresentation;
use super::syntax::{parse, CmpOp, Formula, SeqOperand, Term};
use crate::automata::{product_of, BoolOp, Dfao, MultiTrackDfa, Part, TrackAlphabet};
use crate::error::{Error, Result};
use crate::numeration::NumerationSystem;

/// Automaton over named variables; track `j` reads `vars[j]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relation {
    vars: Vec<String>,
    dfa: MultiTrackDfa,
}

impl Relation {
    /// `vars` must be sorted and distinct.
    pub fn new(vars: Vec<String>, dfa: MultiTrackDfa) -> Result<Self> {
        if vars.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Interface("relation variables must be sorted and distinct".into()));
        }
        if vars.len() != dfa.tracks() {
            return Err(Error::Interface(format!(
                "{} variables for {} tracks",
                vars.len(),
                dfa.tracks()
            )));
        }
        Ok(Relation { vars, dfa })
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn dfa(&self) -> &MultiTrackDfa {
        &self.dfa
    }

    pub fn num_states(&self) -> usize {
        self.dfa.num_states()
    }

    /// Truth value of a relation without free variables.
    pub fn truth(&self) -> Result<bool> {
        if !self.vars.is_empty() {
            return Err(Error::Usage(format!("free variables remain: {}", self.vars.join(", "))));
        }
        Ok(self.dfa.accepts_letters(&[]))
    }

    /// Membership of an assignment given in variable order.
    pub fn contains(&self, system: &NumerationSystem, values: &[u64]) -> Result<bool> {
        if values.len() != self.vars.len() {
            return Err(Error::Interface(format!(
                "{} values for {} variables",
                values.len(),
                self.vars.len()
            )));
        }
        let reps: Vec<Vec<u32>> = values.iter().map(|&v| system.represent(v)).collect::<Result<_>>()?;
        self.dfa.accepts_tracks(&reps)
    }
}

/// A named formula with its parameters in call order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Predicate {
    pub params: Vec<String>,
    pub formula: String,
    /// Track `j` reads `params[j]`.
    pub dfa: MultiTrackDfa,
}

struct Sequence {
    dfao: Rc<Dfao>,
    /// Letter value of each output.
    values: Vec<u64>,
}

/// Compiles formulas over one numeration system.
pub struct Engine {
    system: NumerationSystem,
    addition: Rc<MultiTrackDfa>,
    sequences: BTreeMap<String, Sequence>,
    predicates: BTreeMap<String, Predicate>,
    counts: BTreeMap<String, LinearRepresentation>,
    universes: HashMap<usize, Rc<MultiTrackDfa>>,
    equal: Rc<MultiTrackDfa>,
    less: Rc<MultiTrackDfa>,
    fresh: usize,
}

fn is_fresh(v: &str) -> bool {
    v.starts_with('#')
}

/// Binds the tracks of `dfa` to `args`, merging repeated arguments.
pub fn instantiate(dfa: &MultiTrackDfa, args: &[String]) -> Result<Relation> {
    if dfa.tracks() != args.len() {
        return Err(Error::Interface(format!(
            "{} arguments for {} tracks",
            args.len(),
            dfa.tracks()
        )));
    }
    let mut dfa = dfa.clone();
    let mut args = args.to_vec();
    'merge: loop {
        for j in 0..args.len() {
            for k in j + 1..args.len() {
                if args[j] == args[k] {
                    dfa = dfa.identify_tracks(j, k)?;
                    args.remove(k);
                    continue 'merge;
                }
            }
        }
        break;
    }
    let mut order: Vec<usize> = (0..args.len()).collect();
    order.sort_by(|&a, &b| args[a].cmp(&args[b]));
    if order.iter().enumerate().any(|(i, &o)| i != o) {
        dfa = dfa.permute_tracks(&order)?;
    }
    let vars = order.iter().map(|&o| args[o].clone()).collect();
    Relation::new(vars, dfa)
}

/// Letter value of an output: the digit it prints, or its index.
fn letter_value(index: usize, letter: u8) -> u64 {
    (letter as char).to_digit(10).map_or(index as u64, u64::from)
}

impl Engine {
    /// Synthesizes the addition automaton of `system` first.
    pub fn new(system: NumerationSystem) -> Result<Self> {
        let add = system.synthesize_addition()?;
        Self::with_addition(system, add)
    }

    /// Uses a given addition automaton, checked to be total.
    pub fn with_addition(system: NumerationSystem, addition: MultiTrackDfa) -> Result<Self> {
        if *addition.alphabet() != TrackAlphabet::uniform(3, system.radix())? {
            return Err(Error::Interface("addition automaton has the wrong tracks".into()));
        }
        if !system.addition_is_total(&addition)? {
            return Err(Error::Synthesis("addition automaton is not total".into()));
        }
        let u2 = system.universe(2)?;
        let a2 = TrackAlphabet::uniform(2, system.radix())?;
        // lexicographic comparison of equal-length strings is numeric order
        let mut edges = Vec::new();
        for l in 0..a2.size() as u32 {
            let d = a2.decode(l);
            let from_equal = match d[0].cmp(&d[1]) {
                std::cmp::Ordering::Equal => 0,
                std::cmp::Ordering::Less => 1,
                std::cmp::Ordering::Greater => 2,
            };
            edges.push((0, l, from_equal));
            edges.push((1, l, 1));
            edges.push((2, l, 2));
        }
        let order = |acc: u32| -> Result<MultiTrackDfa> {
            let dfa = MultiTrackDfa::from_transitions(a2.clone(), 3, 0, &[acc], edges.iter().copied())?;
            dfa.product(&u2, BoolOp::And)
        };
        let equal = Rc::new(order(0)?);
        let less = Rc::new(order(1)?);
        let mut engine = Engine {
            addition: Rc::new(addition),
            sequences: BTreeMap::new(),
            predicates: BTreeMap::new(),
            counts: BTreeMap::new(),
            universes: HashMap::new(),
            equal,
            less,
            fresh: 0,
            system,
        };
        let own = Rc::new(engine.system.dfao().minimize());
        let values: Vec<u64> = engine
            .system
            .output_letters()
            .iter()
            .enumerate()
            .map(|(i, &l)| letter_value(i, l))
            .collect();
        engine.sequences.insert(
            "Mor".into(),
            Sequence {
                dfao: own.clone(),
                values: values.clone(),
            },
        );
        if let Some(tail) = engine.system.name().rsplit('_').next() {
            if tail.len() == 1 && tail.as_bytes()[0].is_ascii_lowercase() {
                engine
                    .sequences
                    .insert(tail.to_ascii_uppercase(), Sequence { dfao: own, values });
            }
        }
        Ok(engine)
    }

    pub fn system(&self) -> &NumerationSystem {
        &self.system
    }

    pub fn addition(&self) -> &MultiTrackDfa {
        &self.addition
    }

    /// Makes `dfao` available as `name[t]`. Output `o` has letter value
    /// `values[o]`.
    pub fn add_sequence(&mut self, name: &str, dfao: Dfao, values: Vec<u64>) -> Result<()> {
        if !name.starts_with(|c: char| c.is_ascii_uppercase()) {
            return Err(Error::Usage(format!("sequence names start with an uppercase letter: {name:?}")));
        }
        if dfao.alphabet() != self.system.addressing_dfa().alphabet() {
            return Err(Error::Interface("sequence automaton reads other digits".into()));
        }
        if dfao.outputs().iter().any(|&o| o as usize >= values.len()) {
            return Err(Error::Interface("missing letter value for an output".into()));
        }
        self.sequences.insert(
            name.to_string(),
            Sequence {
                dfao: Rc::new(dfao),
                values,
            },
        );
        Ok(())
    }

    pub fn sequence_names(&self) -> impl Iterator<Item = &str> {
        self.sequences.keys().map(String::as_str)
    }

    pub fn predicate(&self, name: &str) -> Option<&Predicate> {
        self.predicates.get(name)
    }

    pub fn predicates(&self) -> impl Iterator<Item = (&str, &Predicate)> {
        self.predicates.iter().map(|(k, v)| (k.as_str(), v))
    }

    pub fn count(&self, name: &str) -> Option<&LinearRepresentation> {
        self.counts.get(name)
    }

    pub(crate) fn store_count(&mut self, name: &str, lr: LinearRepresentation) {
        self.counts.insert(name.to_string(), lr);
    }

    /// Parses and compiles a formula.
    pub fn relation(&mut self, text: &str) -> Result<Relation> {
        let f = parse(text)?;
        self.compile(&f)
    }

    /// Truth value of a closed formula.
    pub fn eval_closed(&mut self, text: &str) -> Result<bool> {
        let f = parse(text)?;
        let free = f.free_vars();
        if !free.is_empty() {
            let names: Vec<&str> = free.iter().map(String::as_str).collect();
            return Err(Error::Usage(format!("formula has free variables: {}", names.join(", "))));
        }
        self.compile(&f)?.truth()
    }

    /// Compiles `text` and stores it as `$name`. Parameters default to the
    /// free variables in alphabetical order; an explicit list must name
    /// each free variable once.
    pub fn define(&mut self, name: &str, text: &str, params: Option<&[String]>) -> Result<&Predicate> {
        let f = parse(text)?;
        let rel = self.compile(&f)?;
        let params: Vec<String> = match params {
            None => rel.vars.clone(),
            Some(p) => {
                let mut sorted = p.to_vec();
                sorted.sort();
                if sorted != rel.vars {
                    return Err(Error::Usage(format!(
                        "parameters ({}) must be the free variables ({})",
                        p.join(","),
                        rel.vars.join(",")
                    )));
                }
                p.to_vec()
            }
        };
        // track j of the stored automaton reads params[j]
        let order: Vec<usize> = params
            .iter()
            .map(|p| rel.vars.iter().position(|v| v == p).expect("checked above"))
            .collect();
        let dfa = if order.iter().enumerate().all(|(i, &o)| i == o) {
            rel.dfa
        } else {
            rel.dfa.permute_tracks(&order)?
        };
        self.predicates.insert(
            name.to_string(),
            Predicate {
                params,
                formula: text.to_string(),
                dfa,
            },
        );
        Ok(&self.predicates[name])
    }

    fn fresh(&mut self) -> String {
        self.fresh += 1;
        format!("#{}", self.fresh)
    }

    pub fn universe(&mut self, tracks: usize) -> Result<Rc<MultiTrackDfa>> {
        if let Some(u) = self.universes.get(&tracks) {
            return Ok(u.clone());
        }
        let u = Rc::new(self.system.universe(tracks)?);
        self.universes.insert(tracks, u.clone());
        Ok(u)
    }

    fn combine(&mut self, a: &Relation, b: &Relation, op: BoolOp) -> Result<Relation> {
        let mut vars: Vec<String> = a.vars.iter().chain(&b.vars).cloned().collect();
        vars.sort();
        vars.dedup();
        let alphabet = TrackAlphabet::uniform(vars.len(), self.system.radix())?;
        let map = |r: &Relation| -> Vec<usize> {
            r.vars.iter().map(|v| vars.binary_search(v).expect("in union")).collect()
        };
        let (ma, mb) = (map(a), map(b));
        let subset = |x: &Relation, y: &Relation| x.vars.iter().all(|v| y.vars.contains(v));
        // a universe operand is needed only where the result could accept
        // invalid digits on a track one side leaves unconstrained
        let bounded = match op {
            BoolOp::And => true,
            BoolOp::AndNot => subset(b, a),
            BoolOp::Or | BoolOp::Xor => a.vars == b.vars,
            BoolOp::Implies | BoolOp::Iff => false,
        };
        let dfa = if bounded {
            product_of(&alphabet, &[Part::new(&a.dfa, ma), Part::new(&b.dfa, mb)], |x| {
                op.eval(x[0], x[1])
            })?
        } else if op == BoolOp::And {
            product_of(&alphabet, &[Part::new(&a.dfa, ma), Part::new(&b.dfa, mb)], |x| x[0] && x[1])?
        } else {
            let u = self.universe(vars.len())?;
            let id = (0..vars.len()).collect();
            product_of(
                &alphabet,
                &[Part::new(&u, id), Part::new(&a.dfa, ma), Part::new(&b.dfa, mb)],
                |x| x[0] && op.eval(x[1], x[2]),
            )?
        };
        Relation::new(vars, dfa)
    }

    fn negate(&mut self, a: &Relation) -> Result<Relation> {
        let u = self.universe(a.vars.len())?;
        Relation::new(a.vars.clone(), a.dfa.complement(&u)?)
    }

    fn exists(&self, a: Relation, var: &str) -> Result<Relation> {
        self.exists_all(a, std::slice::from_ref(&var.to_string()))
    }

    /// Projects several variables in one subset construction.
    fn exists_all(&self, a: Relation, vars: &[String]) -> Result<Relation> {
        let tracks: Vec<usize> = (0..a.vars.len()).filter(|&t| vars.contains(&a.vars[t])).collect();
        if tracks.is_empty() {
            return Ok(a);
        }
        let dfa = a.dfa.project_many(&tracks)?;
        let kept = a.vars.into_iter().filter(|v| !vars.contains(v)).collect();
        Relation::new(kept, dfa)
    }

    /// Conjoins the operand relations, quantifying each fresh operand away
    /// as soon as no later operand mentions it.
    fn attach(&mut self, mut rel: Relation, operands: Vec<(String, Option<Relation>)>) -> Result<Relation> {
        for (j, (v, r)) in operands.iter().enumerate() {
            if let Some(r) = r {
                rel = self.combine(&rel, r, BoolOp::And)?;
            }
            let later = operands[j + 1..]
                .iter()
                .any(|(w, r)| w == v || r.as_ref().is_some_and(|r| r.vars.contains(v)));
            if is_fresh(v) && !later {
                rel = self.exists(rel, v)?;
            }
        }
        Ok(rel)
    }

    /// A variable holding the term's value, with the relation defining it
    /// when the term is not a plain variable.
    fn term(&mut self, t: &Term) -> Result<(String, Option<Relation>)> {
        match t {
            Term::Var(v) => Ok((v.clone(), None)),
            Term::Const(c) => {
                let r = self.fresh();
                let dfa = self.system.constant_recognizer(*c)?;
                let rel = instantiate(&dfa, std::slice::from_ref(&r))?;
                Ok((r, Some(rel)))
            }
            Term::Add(a, b) => {
                let x = self.term(a)?;
                let y = self.term(b)?;
                let r = self.fresh();
                let rel = self.add_relation(&x.0, &y.0, &r)?;
                Ok((r, Some(self.attach(rel, vec![x, y])?)))
            }
            Term::Sub(a, b) => {
                let x = self.term(a)?;
                let y = self.term(b)?;
                let r = self.fresh();
                // r + b = a
                let rel = self.add_relation(&r, &y.0, &x.0)?;
                Ok((r, Some(self.attach(rel, vec![x, y])?)))
            }
            Term::Mul(0, _) => self.term(&Term::Const(0)),
            Term::Mul(k, a) => {
                let x = self.term(a)?;
                self.multiply(*k, x)
            }
        }
    }

    /// `k * x` by doubling and adding.
    fn multiply(&mut self, k: u64, x: (String, Option<Relation>)) -> Result<(String, Option<Relation>)> {
        if k == 1 {
            return Ok(x);
        }
        let half = self.multiply(k / 2, x.clone())?;
        let r = self.fresh();
        let rel = self.add_relation(&half.0, &half.0, &r)?;
        let doubled = (r, Some(self.attach(rel, vec![half])?));
        if k.is_multiple_of(2) {
            return Ok(doubled);
        }
        let s = self.fresh();
        let rel = self.add_relation(&doubled.0, &x.0, &s)?;
        Ok((s, Some(self.attach(rel, vec![doubled, x])?)))
    }

    fn add_relation(&self, x: &str, y: &str, z: &str) -> Result<Relation> {
        instantiate(&self.addition, &[x.to_string(), y.to_string(), z.to_string()])
    }

    fn compare(&mut self, a: &Term, op: CmpOp, b: &Term) -> Result<Relation> {
        if op == CmpOp::Eq {
            // x = p + q and x = c directly, without a variable for the sum
            for (lhs, rhs) in [(a, b), (b, a)] {
                if let Term::Add(p, q) = rhs {
                    let x = self.term(lhs)?;
                    let p = self.term(p)?;
                    let q = self.term(q)?;
                    let rel = self.add_relation(&p.0, &q.0, &x.0)?;
                    return self.attach(rel, vec![x, p, q]);
                }
            }
            for (lhs, rhs) in [(a, b), (b, a)] {
                if let Term::Const(c) = rhs {
                    let x = self.term(lhs)?;
                    let dfa = self.system.constant_recognizer(*c)?;
                    let rel = instantiate(&dfa, std::slice::from_ref(&x.0))?;
                    return self.attach(rel, vec![x]);
                }
            }
        }
        let x = self.term(a)?;
        let y = self.term(b)?;
        let (xv, yv) = (x.0.clone(), y.0.clone());
        let rel = match op {
            CmpOp::Eq => instantiate(&self.equal, &[xv, yv])?,
            CmpOp::Lt => instantiate(&self.less, &[xv, yv])?,
            CmpOp::Gt => instantiate(&self.less, &[yv, xv])?,
            CmpOp::Ne => {
                let e = instantiate(&self.equal, &[xv, yv])?;
                self.negate(&e)?
            }
            CmpOp::Le => {
                let g = instantiate(&self.less, &[yv, xv])?;
                self.negate(&g)?
            }
            CmpOp::Ge => {
                let l = instantiate(&self.less, &[xv, yv])?;
                self.negate(&l)?
            }
        };
        self.attach(rel, vec![x, y])
    }

    fn sequence(&self, name: &str) -> Result<(Rc<Dfao>, Vec<u64>)> {
        self.sequences
            .get(name)
            .map(|s| (s.dfao.clone(), s.values.clone()))
            .ok_or_else(|| Error::Unbound(format!("sequence {name}")))
    }

    fn compare_sequences(&mut self, a: &SeqOperand, op: CmpOp, b: &SeqOperand) -> Result<Relation> {
        let equal = match op {
            CmpOp::Eq => true,
            CmpOp::Ne => false,
            _ => return Err(Error::Usage(format!("sequence values compare with = or !=, not {op}"))),
        };
        match (a, b) {
            (SeqOperand::Letter(x), SeqOperand::Letter(y)) => {
                let alphabet = TrackAlphabet::uniform(0, self.system.radix())?;
                let dfa = if (x == y) == equal {
                    MultiTrackDfa::full(alphabet)
                } else {
                    MultiTrackDfa::empty(alphabet)
                };
                Relation::new(Vec::new(), dfa)
            }
            (SeqOperand::Index(s, t), SeqOperand::Letter(c)) | (SeqOperand::Letter(c), SeqOperand::Index(s, t)) => {
                let (dfao, values) = self.sequence(s)?;
                let x = self.term(t)?;
                let dfa = dfao.relation(1, |o| (values[o[0] as usize] == *c) == equal)?;
                let rel = instantiate(&dfa, std::slice::from_ref(&x.0))?;
                self.attach(rel, vec![x])
            }
            (SeqOperand::Index(s1, t1), SeqOperand::Index(s2, t2)) => {
                let (d1, v1) = self.sequence(s1)?;
                let (d2, v2) = self.sequence(s2)?;
                if !Rc::ptr_eq(&d1, &d2) || v1 != v2 {
                    return Err(Error::Usage(format!("cannot compare values of {s1} and {s2}")));
                }
                let x = self.term(t1)?;
                let y = self.term(t2)?;
                let dfa = d1.relation(2, |o| (v1[o[0] as usize] == v1[o[1] as usize]) == equal)?;
                let rel = instantiate(&dfa, &[x.0.clone(), y.0.clone()])?;
                self.attach(rel, vec![x, y])
            }
        }
    }

    fn call(&mut self, name: &str, args: &[Term]) -> Result<Relation> {
        let pred = self
            .predicates
            .get(name)
            .ok_or_else(|| Error::Unbound(format!("predicate ${name}")))?;
        if pred.params.len() != args.len() {
            return Err(Error::Usage(format!(
                "${name} takes {} arguments, got {}",
                pred.params.len(),
                args.len()
            )));
        }
        let dfa = pred.dfa.clone();
        let xs: Vec<(String, Option<Relation>)> = args.iter().map(|t| self.term(t)).collect::<Result<_>>()?;
        let names: Vec<String> = xs.iter().map(|x| x.0.clone()).collect();
        let rel = instantiate(&dfa, &names)?;
        self.attach(rel, xs)
    }

    pub fn compile(&mut self, f: &Formula) -> Result<Relation> {
        match f {
            Formula::Not(a) => {
                let a = self.compile(a)?;
                self.negate(&a)
            }
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Iff(a, b) => {
                let op = match f {
                    Formula::And(..) => BoolOp::And,
                    Formula::Or(..) => BoolOp::Or,
                    Formula::Implies(..) => BoolOp::Implies,
                    _ => BoolOp::Iff,
                };
                let a = self.compile(a)?;
                let b = self.compile(b)?;
                self.combine(&a, &b, op)
            }
            Formula::Exists(vars, body) => {
                let rel = self.compile(body)?;
                self.exists_all(rel, vars)
            }
            Formula::Forall(vars, body) => {
                let rel = match body.as_ref() {
                    // the counterexamples directly, without two complements
                    Formula::Implies(a, b) => {
                        let a = self.compile(a)?;
                        let b = self.compile(b)?;
                        self.combine(&a, &b, BoolOp::AndNot)?
                    }
                    _ => {
                        let rel = self.compile(body)?;
                        self.negate(&rel)?
                    }
                };
                let rel = self.exists_all(rel, vars)?;
                self.negate(&rel)
            }
            Formula::Cmp(a, op, b) => self.compare(a, *op, b),
            Formula::SeqCmp(a, op, b) => self.compare_sequences(a, *op, b),
            Formula::Call(name, args) => self.call(name, args),
        }
    }
}
