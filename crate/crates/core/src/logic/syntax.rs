//! Formula syntax.
//!
//! ```text
//! formula := implies ("<=>" implies)*
//! implies := or ("=>" implies)?
//! or      := and ("|" and)*
//! and     := unary ("&" unary)*
//! unary   := "~" unary | ("A" | "E") var ("," var)* formula | primary
//! primary := "(" formula ")" | "$" name "(" term ("," term)* ")" | atom
//! atom    := operand ("=" | "!=" | "<" | "<=" | ">" | ">=") operand
//! operand := Name "[" term "]" | term
//! term    := summand (("+" | "-") summand)*
//! summand := number "*" factor | factor
//! factor  := number | var | "(" term ")"
//! ```
//!
//! A quantifier's scope extends as far right as possible. Variables start
//! with a lowercase letter; sequence names start with an uppercase letter.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Term {
    Var(String),
    Const(u64),
    Add(Box<Term>, Box<Term>),
    Sub(Box<Term>, Box<Term>),
    Mul(u64, Box<Term>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CmpOp {
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
}

/// One side of a comparison between sequence values.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SeqOperand {
    Index(String, Term),
    Letter(u64),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Formula {
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
    Exists(Vec<String>, Box<Formula>),
    Forall(Vec<String>, Box<Formula>),
    Cmp(Term, CmpOp, Term),
    SeqCmp(SeqOperand, CmpOp, SeqOperand),
    Call(String, Vec<Term>),
}

impl Term {
    fn collect_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Term::Var(v) => {
                out.insert(v.clone());
            }
            Term::Const(_) => {}
            Term::Add(a, b) | Term::Sub(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
            Term::Mul(_, t) => t.collect_vars(out),
        }
    }
}

impl Formula {
    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut out);
        out
    }

    fn collect_free(&self, out: &mut BTreeSet<String>) {
        match self {
            Formula::Not(f) => f.collect_free(out),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Iff(a, b) => {
                a.collect_free(out);
                b.collect_free(out);
            }
            Formula::Exists(vs, f) | Formula::Forall(vs, f) => {
                let mut inner = BTreeSet::new();
                f.collect_free(&mut inner);
                for v in vs {
                    inner.remove(v);
                }
                out.extend(inner);
            }
            Formula::Cmp(a, _, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
            Formula::SeqCmp(a, _, b) => {
                for s in [a, b] {
                    if let SeqOperand::Index(_, t) = s {
                        t.collect_vars(out);
                    }
                }
            }
            Formula::Call(_, args) => args.iter().for_each(|t| t.collect_vars(out)),
        }
    }
}

impl fmt::Display for CmpOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CmpOp::Eq => "=",
            CmpOp::Ne => "!=",
            CmpOp::Lt => "<",
            CmpOp::Le => "<=",
            CmpOp::Gt => ">",
            CmpOp::Ge => ">=",
        })
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => f.write_str(v),
            Term::Const(c) => write!(f, "{c}"),
            Term::Add(a, b) => write!(f, "({a}+{b})"),
            Term::Sub(a, b) => write!(f, "({a}-{b})"),
            Term::Mul(k, t) => write!(f, "{k}*{t}"),
        }
    }
}

impl fmt::Display for SeqOperand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SeqOperand::Index(s, t) => write!(f, "{s}[{t}]"),
            SeqOperand::Letter(c) => write!(f, "{c}"),
        }
    }
}

impl fmt::Display for Formula {
    /// Fully parenthesized; parses back to the same tree.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Not(a) => write!(f, "~{a}"),
            Formula::And(a, b) => write!(f, "({a} & {b})"),
            Formula::Or(a, b) => write!(f, "({a} | {b})"),
            Formula::Implies(a, b) => write!(f, "({a} => {b})"),
            Formula::Iff(a, b) => write!(f, "({a} <=> {b})"),
            Formula::Exists(vs, a) => write!(f, "(E{} {a})", vs.join(",")),
            Formula::Forall(vs, a) => write!(f, "(A{} {a})", vs.join(",")),
            Formula::Cmp(a, op, b) => write!(f, "{a}{op}{b}"),
            Formula::SeqCmp(a, op, b) => write!(f, "{a}{op}{b}"),
            Formula::Call(name, args) => {
                let a: Vec<String> = args.iter().map(|t| t.to_string()).collect();
                write!(f, "${name}({})", a.join(","))
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Num(u64),
    Var(String),
    Name(String),
    Pred(String),
    Forall,
    Exists,
    Sym(&'static str),
}

const SYMBOLS: [&str; 17] = [
    "<=>", "=>", "<=", ">=", "!=", "~=", "(", ")", "[", "]", ",", "+", "-", "*", "=", "<", ">",
];

fn tokenize(text: &str) -> Result<Vec<(Tok, usize)>> {
    let b = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    let err = |pos: usize, m: &str| Error::Syntax {
        position: pos,
        message: m.to_string(),
    };
    while i < b.len() {
        let c = b[i];
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        if c.is_ascii_digit() {
            while i < b.len() && b[i].is_ascii_digit() {
                i += 1;
            }
            let n = text[start..i].parse().map_err(|_| err(start, "number too large"))?;
            out.push((Tok::Num(n), start));
            continue;
        }
        if (c == b'A' || c == b'E')
            && b.get(i + 1).is_some_and(|&n| n.is_ascii_lowercase() || n.is_ascii_whitespace())
        {
            out.push((if c == b'A' { Tok::Forall } else { Tok::Exists }, start));
            i += 1;
            continue;
        }
        let ident = |i: &mut usize| {
            let s = *i;
            while *i < b.len() && (b[*i].is_ascii_alphanumeric() || b[*i] == b'_') {
                *i += 1;
            }
            text[s..*i].to_string()
        };
        if c.is_ascii_lowercase() {
            out.push((Tok::Var(ident(&mut i)), start));
            continue;
        }
        if c.is_ascii_uppercase() {
            out.push((Tok::Name(ident(&mut i)), start));
            continue;
        }
        if c == b'$' {
            i += 1;
            let name = ident(&mut i);
            if name.is_empty() {
                return Err(err(start, "expected a predicate name after `$`"));
            }
            out.push((Tok::Pred(name), start));
            continue;
        }
        match c {
            b'~' if b.get(i + 1) != Some(&b'=') => {
                out.push((Tok::Sym("~"), start));
                i += 1;
                continue;
            }
            b'&' => {
                out.push((Tok::Sym("&"), start));
                i += 1;
                continue;
            }
            b'|' => {
                out.push((Tok::Sym("|"), start));
                i += 1;
                continue;
            }
            _ => {}
        }
        match SYMBOLS.iter().find(|s| text[i..].starts_with(**s)) {
            Some(&s) => {
                out.push((Tok::Sym(if s == "~=" { "!=" } else { s }), start));
                i += s.len();
            }
            None => return Err(err(start, &format!("unexpected character {:?}", c as char))),
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.0)
    }

    fn here(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |t| t.1)
    }

    fn err<T>(&self, m: impl Into<String>) -> Result<T> {
        Err(Error::Syntax {
            position: self.here(),
            message: m.into(),
        })
    }

    fn eat(&mut self, s: &str) -> bool {
        if matches!(self.peek(), Some(Tok::Sym(x)) if *x == s) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, s: &str) -> Result<()> {
        if self.eat(s) {
            Ok(())
        } else {
            self.err(format!("expected `{s}`"))
        }
    }

    fn formula(&mut self) -> Result<Formula> {
        let mut f = self.implies()?;
        while self.eat("<=>") {
            let r = self.implies()?;
            f = Formula::Iff(Box::new(f), Box::new(r));
        }
        Ok(f)
    }

    fn implies(&mut self) -> Result<Formula> {
        let f = self.or()?;
        if self.eat("=>") {
            let r = self.implies()?;
            return Ok(Formula::Implies(Box::new(f), Box::new(r)));
        }
        Ok(f)
    }

    fn or(&mut self) -> Result<Formula> {
        let mut f = self.and()?;
        while self.eat("|") {
            let r = self.and()?;
            f = Formula::Or(Box::new(f), Box::new(r));
        }
        Ok(f)
    }

    fn and(&mut self) -> Result<Formula> {
        let mut f = self.unary()?;
        while self.eat("&") {
            let r = self.unary()?;
            f = Formula::And(Box::new(f), Box::new(r));
        }
        Ok(f)
    }

    fn unary(&mut self) -> Result<Formula> {
        if self.eat("~") {
            return Ok(Formula::Not(Box::new(self.unary()?)));
        }
        let quant = match self.peek() {
            Some(Tok::Forall) => Some(true),
            Some(Tok::Exists) => Some(false),
            _ => None,
        };
        if let Some(all) = quant {
            self.pos += 1;
            let mut vars = Vec::new();
            loop {
                match self.peek() {
                    Some(Tok::Var(v)) => {
                        vars.push(v.clone());
                        self.pos += 1;
                    }
                    _ => return self.err("expected a variable after the quantifier"),
                }
                if !self.eat(",") {
                    break;
                }
            }
            let body = Box::new(self.formula()?);
            return Ok(if all { Formula::Forall(vars, body) } else { Formula::Exists(vars, body) });
        }
        self.primary()
    }

    fn primary(&mut self) -> Result<Formula> {
        if matches!(self.peek(), Some(Tok::Sym("("))) {
            // either a parenthesized formula or a parenthesized term
            let save = self.pos;
            self.pos += 1;
            if let Ok(f) = self.formula() {
                if self.eat(")") && !self.at_term_continuation() {
                    return Ok(f);
                }
            }
            self.pos = save;
            return self.atom();
        }
        if let Some(Tok::Pred(name)) = self.peek() {
            let name = name.clone();
            self.pos += 1;
            self.expect("(")?;
            let mut args = vec![self.term()?];
            while self.eat(",") {
                args.push(self.term()?);
            }
            self.expect(")")?;
            return Ok(Formula::Call(name, args));
        }
        self.atom()
    }

    fn at_term_continuation(&self) -> bool {
        matches!(
            self.peek(),
            Some(Tok::Sym("+" | "-" | "*" | "=" | "!=" | "<" | "<=" | ">" | ">="))
        )
    }

    fn operand(&mut self) -> Result<Result<SeqOperand, Term>> {
        if let Some(Tok::Name(name)) = self.peek() {
            let name = name.clone();
            self.pos += 1;
            self.expect("[")?;
            let t = self.term()?;
            self.expect("]")?;
            return Ok(Ok(SeqOperand::Index(name, t)));
        }
        Ok(Err(self.term()?))
    }

    fn atom(&mut self) -> Result<Formula> {
        let lhs = self.operand()?;
        let op = match self.peek() {
            Some(Tok::Sym("=")) => CmpOp::Eq,
            Some(Tok::Sym("!=")) => CmpOp::Ne,
            Some(Tok::Sym("<")) => CmpOp::Lt,
            Some(Tok::Sym("<=")) => CmpOp::Le,
            Some(Tok::Sym(">")) => CmpOp::Gt,
            Some(Tok::Sym(">=")) => CmpOp::Ge,
            _ => return self.err("expected a comparison"),
        };
        self.pos += 1;
        let rhs = self.operand()?;
        let letter = |t: Term, p: &Self| match t {
            Term::Const(c) => Ok(SeqOperand::Letter(c)),
            _ => p.err("a sequence value compares with a sequence value or a letter"),
        };
        match (lhs, rhs) {
            (Err(a), Err(b)) => Ok(Formula::Cmp(a, op, b)),
            (Ok(a), Ok(b)) => Ok(Formula::SeqCmp(a, op, b)),
            (Ok(a), Err(b)) => Ok(Formula::SeqCmp(a, op, letter(b, self)?)),
            (Err(a), Ok(b)) => Ok(Formula::SeqCmp(letter(a, self)?, op, b)),
        }
    }

    fn term(&mut self) -> Result<Term> {
        let mut t = self.summand()?;
        loop {
            if self.eat("+") {
                t = Term::Add(Box::new(t), Box::new(self.summand()?));
            } else if self.eat("-") {
                t = Term::Sub(Box::new(t), Box::new(self.summand()?));
            } else {
                return Ok(t);
            }
        }
    }

    fn summand(&mut self) -> Result<Term> {
        if let Some(&Tok::Num(k)) = self.peek() {
            if matches!(self.toks.get(self.pos + 1), Some((Tok::Sym("*"), _))) {
                self.pos += 2;
                return Ok(Term::Mul(k, Box::new(self.factor()?)));
            }
        }
        self.factor()
    }

    fn factor(&mut self) -> Result<Term> {
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                Ok(Term::Const(n))
            }
            Some(Tok::Var(v)) => {
                self.pos += 1;
                Ok(Term::Var(v))
            }
            Some(Tok::Sym("(")) => {
                self.pos += 1;
                let t = self.term()?;
                self.expect(")")?;
                Ok(t)
            }
            _ => self.err("expected a term"),
        }
    }
}

/// Parses a formula. A leading `?name` selector, as in other tools' scripts,
/// is ignored.
pub fn parse(text: &str) -> Result<Formula> {
    let body = match text.trim_start().strip_prefix('?') {
        Some(rest) => {
            let skip = text.len() - rest.len();
            let word = rest.find(char::is_whitespace).unwrap_or(rest.len());
            // blanked rather than cut so error positions stay valid
            let blank = " ".repeat(skip + word);
            format!("{blank}{}", &rest[word..])
        }
        None => text.to_string(),
    };
    let toks = tokenize(&body)?;
    let mut p = Parser {
        toks,
        pos: 0,
        end: body.len(),
    };
    let f = p.formula()?;
    if p.pos != p.toks.len() {
        return p.err("unexpected input after the formula");
    }
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vars(f: &Formula) -> Vec<String> {
        f.free_vars().into_iter().collect()
    }

    #[test]
    fn published_scripts_parse() {
        let f = parse("At,u (t>=i & 2*t<=2*i+3*n & u=t+n) => Q[t]=Q[u]").unwrap();
        assert_eq!(vars(&f), ["i", "n"]);
        assert!(matches!(f, Formula::Forall(_, _)));
        let g = parse("~Ei,n n>=1 & At,u (t>=i & 2*t<=2*i+3*n & u=t+n) => Mor[t]=Mor[u]").unwrap();
        assert!(g.free_vars().is_empty());
        let Formula::Not(inner) = &g else { panic!() };
        let Formula::Exists(vs, body) = inner.as_ref() else { panic!() };
        assert_eq!(vs, &["i", "n"]);
        assert!(matches!(body.as_ref(), Formula::And(_, _)));
        assert!(parse("Ax x=x").unwrap().free_vars().is_empty());
        let c = parse("$factoreq(i,i+p,n-p)").unwrap();
        assert_eq!(vars(&c), ["i", "n", "p"]);
        assert!(matches!(&c, Formula::Call(n, a) if n == "factoreq" && a.len() == 3));
        let ng = parse("Ej i<j & $factoreq(i,j,n) & i+g=j & At (i<t & t<j) => ~$factoreq(i,t,n)").unwrap();
        assert_eq!(vars(&ng), ["g", "i", "n"]);
        let mg = parse("Ei $nextgap(g,i,n) & Ah (h>g) => ~Ei $nextgap(h,i,n)").unwrap();
        assert_eq!(vars(&mg), ["g", "n"]);
        let novel = parse("?msd_mor n>=1 & Aj (j<n) => ~$factoreq(i,j,n)").unwrap();
        assert_eq!(vars(&novel), ["i", "n"]);
    }

    #[test]
    fn precedence() {
        let f = parse("x=0 | y=0 & z=0").unwrap();
        assert!(matches!(f, Formula::Or(_, _)));
        let f = parse("x=0 => y=0 => z=0").unwrap();
        let Formula::Implies(_, r) = f else { panic!() };
        assert!(matches!(*r, Formula::Implies(_, _)));
        let f = parse("~x=0 & y=0").unwrap();
        assert!(matches!(f, Formula::And(_, _)));
        let f = parse("x=0 <=> y=0 => z=0").unwrap();
        assert!(matches!(f, Formula::Iff(_, _)));
        let f = parse("(x+y)=z").unwrap();
        assert!(matches!(f, Formula::Cmp(Term::Add(_, _), CmpOp::Eq, _)));
        let f = parse("(x<y)").unwrap();
        assert!(matches!(f, Formula::Cmp(_, CmpOp::Lt, _)));
        let f = parse("Q[n]=1 & Q[n+1]!=Q[n]").unwrap();
        assert!(matches!(f, Formula::And(_, _)));
    }

    #[test]
    fn display_round_trip() {
        for s in [
            "At,u (t>=i & 2*t<=2*i+3*n & u=t+n) => Q[t]=Q[u]",
            "Ei $nextgap(g,i,n) & Ah (h>g) => ~Ei $nextgap(h,i,n)",
            "x-y<=3 <=> Q[x]=0 | ~(y=x)",
        ] {
            let f = parse(s).unwrap();
            assert_eq!(parse(&f.to_string()).unwrap(), f);
        }
    }

    #[test]
    fn errors_carry_positions() {
        match parse("x = = y") {
            Err(Error::Syntax { position, .. }) => assert_eq!(position, 4),
            other => panic!("{other:?}"),
        }
        assert!(parse("E x=1").is_err());
        assert!(parse("Q[x]=y").is_err());
        assert!(parse("x=1 y=2").is_err());
        assert!(parse("$(x)").is_err());
        assert!(parse("x # y").is_err());
    }
}
