//! The twelve acceptance criteria, one PASS/FAIL line each.
//!
//! Criterion 12 is conjectural and never gates. Criterion 10 cannot hold as
//! stated (see `KNOWN_UNATTAINABLE`); its line still prints FAIL, and the
//! test pins down that nothing else about it fails.

use std::collections::BTreeSet;

use rote::checks::{all_gating_pass, CheckOptions, Session};
use rote::logic::{linrep_equal, Command};
use rote::numeration::NumerationSystem;
use rote::search::{bound_rows, grow_tree, level_counts, SearchConfig};
use rote::word::stats::{factors, factors_with_exponent, repetitions_at_least};
use rote::word::{
    abelian_complexity, factor_complexity, max_recurrence_gap, q_prefix, reversible_factors, standard,
    ExactRational, FiniteWord, RecurrenceGap,
};

/// Criteria whose literal statement is false; value is the one failing
/// part that is expected.
const KNOWN_UNATTAINABLE: &[(usize, &str)] = &[(10, "value 1 attained for some 1 <= n <= 5000")];

struct Criterion {
    number: usize,
    title: &'static str,
    conjectural: bool,
    /// Failing parts, empty on success.
    failures: Vec<String>,
    notes: Vec<String>,
}

impl Criterion {
    fn new(number: usize, title: &'static str) -> Criterion {
        Criterion {
            number,
            title,
            conjectural: false,
            failures: Vec::new(),
            notes: Vec::new(),
        }
    }

    fn require(&mut self, ok: bool, what: impl Into<String>) {
        if !ok {
            self.failures.push(what.into());
        }
    }

    fn note(&mut self, what: impl Into<String>) {
        self.notes.push(what.into());
    }

    fn line(&self) -> String {
        let verdict = match (self.failures.is_empty(), self.conjectural) {
            (true, false) => "PASS",
            (false, false) => "FAIL",
            (true, true) => "CONJECTURAL-PASS",
            (false, true) => "CONJECTURAL-FAIL",
        };
        let mut s = format!("criterion {:>2} {verdict}: {}", self.number, self.title);
        for f in &self.failures {
            s.push_str(&format!("\n    failed: {f}"));
        }
        for n in &self.notes {
            s.push_str(&format!("\n    note: {n}"));
        }
        s
    }
}

fn five_halves() -> ExactRational {
    ExactRational::ratio(5, 2)
}

fn lower_bound() -> Criterion {
    let mut c = Criterion::new(1, "strict 5/2 Rote tree has depth 38 and 8 longest words");
    let result = grow_tree(&SearchConfig::new(five_halves(), true).unwrap()).unwrap();
    c.require(!result.truncated, "search completed");
    c.require(result.max_depth == 38, format!("max depth 38, got {}", result.max_depth));
    let longest = result.maximal_of_length(38);
    c.require(longest.len() == 8, format!("8 longest words, got {}", longest.len()));
    for w in [
        "00110011010011001001101001100100110010",
        "00110011010011001001101001100100110011",
    ] {
        c.require(longest.contains(&FiniteWord::binary(w).unwrap()), format!("{w} is maximal"));
    }
    c
}

fn seq(sys: &NumerationSystem, state: u32, digit: u32) -> Vec<i128> {
    (0..6).map(|k| sys.sequence_value(state, digit, k).unwrap()).collect()
}

fn tables() -> Criterion {
    let mut c = Criterion::new(2, "sequence tables and recurrences");
    let (h, q) = (NumerationSystem::dt_h(), NumerationSystem::dt_q());
    let lengths = |x: u8, g: bool| -> Vec<i128> {
        let hm = standard::h_letters();
        let gm = standard::g_letters();
        let mut w = FiniteWord::parse(std::str::from_utf8(&[x]).unwrap()).unwrap();
        let mut out = Vec::new();
        for _ in 0..6 {
            let l = if g { gm.apply(&w).unwrap().len() } else { w.len() };
            out.push(l as i128);
            w = hm.apply(&w).unwrap();
        }
        out
    };
    // transition sequences and image lengths must both match the tables
    let rows: [(&str, Vec<i128>, Vec<i128>, [i128; 6]); 6] = [
        ("a_n", seq(&h, 0, 1), lengths(b'a', false), [1, 2, 4, 7, 12, 21]),
        ("b_n", lengths(b'b', false), lengths(b'b', false), [1, 2, 3, 5, 9, 16]),
        ("c_n", seq(&h, 1, 1), lengths(b'c', false), [1, 1, 2, 4, 7, 12]),
        ("a'_n", seq(&q, 0, 3), lengths(b'a', true), [3, 4, 7, 13, 23, 40]),
        ("b'_n", lengths(b'b', true), lengths(b'b', true), [1, 3, 6, 10, 17, 30]),
        ("c'_n", seq(&q, 1, 3), lengths(b'c', true), [2, 3, 4, 7, 13, 23]),
    ];
    for (name, automaton, images, want) in rows {
        c.require(automaton == want && images == want, format!("{name} = {want:?}, got {automaton:?} / {images:?}"));
    }
    c.require(h.recurrence().to_string() == "X^3-2X^2+X-1", "dt_h polynomial X^3-2X^2+X-1");
    c.require(q.recurrence().to_string() == "X^4-2X^3+X^2-X", "dt_q recurrence X^4-2X^3+X^2-X");
    c
}

/// Radix order: shorter first, then lexicographic.
fn radix_less(a: &[u32], b: &[u32]) -> bool {
    (a.len(), a) < (b.len(), b)
}

fn numeration() -> Criterion {
    let mut c = Criterion::new(3, "rank/value consistency for n < 10^5 in dt_h and dt_q");
    for sys in [NumerationSystem::dt_h(), NumerationSystem::dt_q()] {
        let limit = 100_000u64;
        let addressing = sys.addressing_dfa();
        let mut prev: Option<Vec<u32>> = None;
        let mut ok = true;
        for n in 0..limit {
            let r = sys.represent(n).unwrap();
            ok &= r.first() != Some(&0);
            ok &= sys.evaluate(&r).unwrap() == n;
            ok &= addressing.accepts_letters(&r);
            if let Some(p) = &prev {
                ok &= radix_less(p, &r);
            }
            prev = Some(r);
        }
        // an increasing injection onto all valid words up to each length is
        // the rank map
        let mut len = 0;
        while sys.path_count(0, len + 1).unwrap() <= limit as i128 {
            len += 1;
            let count = sys.path_count(0, len).unwrap() as u64;
            ok &= sys.represent(count - 1).unwrap().len() == len;
            ok &= sys.represent(count).unwrap().len() == len + 1;
        }
        c.require(ok, format!("{} ranks", sys.name()));
    }
    c
}

fn dfao() -> Criterion {
    let mut c = Criterion::new(4, "q DFAO equals q on n < 10^5");
    let sys = NumerationSystem::dt_q();
    let dfao = sys.dfao().minimize();
    let q = q_prefix(100_000);
    let bad = q
        .symbols()
        .iter()
        .enumerate()
        .find(|&(n, &ch)| {
            let out = dfao.run(&sys.represent(n as u64).unwrap());
            out.map(|o| sys.output_letters()[o as usize]) != Some(ch)
        })
        .map(|(n, _)| n);
    c.require(bad.is_none(), format!("first disagreement at {bad:?}"));
    c.note(format!("minimal DFAO has {} states (4 expected)", dfao.num_states()));
    c
}

fn addition(s: &mut Session) -> Criterion {
    let mut c = Criterion::new(5, "addition automaton");
    let engine = s.engine().unwrap();
    let sys = engine.system().clone();
    let add = engine.addition().clone();
    c.require(sys.check_addition_box(&add, 1500).unwrap().is_none(), "x+y=z on the 1500 box");
    for law in [
        "Ax x+0=x",
        "Ax,y,z x+y=z => y+x=z",
        "Ax,y,z,w (x+y=z & x+y=w) => z=w",
        "Ax,y Ez x+y=z",
    ] {
        c.require(engine.eval_closed(law).unwrap(), law);
    }
    c.note(format!("{} states (143 expected)", add.num_states()));
    c
}

fn truth(s: &mut Session, key: &str) -> Option<bool> {
    s.script()
        .unwrap()
        .iter()
        .find(|o| match &o.command {
            Command::Eval { name, .. } => name == key,
            _ => false,
        })
        .and_then(|o| o.truth)
}

fn power_free(s: &mut Session) -> Criterion {
    let mut c = Criterion::new(6, "q has no factor of exponent > 5/2");
    c.require(truth(s, "check52plus") == Some(true), "check52plus TRUE");
    let q = q_prefix(20_000);
    c.require(
        repetitions_at_least(&q, &five_halves(), true).is_empty(),
        "no exponent above 5/2 in q[0..20000]",
    );
    c
}

fn complexity(s: &mut Session) -> Criterion {
    let mut c = Criterion::new(7, "novel and twon agree, complexity 2n");
    s.script().unwrap();
    let engine = s.engine().unwrap();
    let sys = engine.system().clone();
    let novel = engine.count("novel").unwrap().clone();
    let twon = engine.count("twon").unwrap().clone();
    c.require(linrep_equal(&novel, &twon).unwrap(), "linrep_equal(novel, twon)");
    let (short, long) = (q_prefix(2500), q_prefix(5000));
    for n in 1..=200u64 {
        let value = novel.value(&sys, &[n]).unwrap();
        let rho = factor_complexity(&long, n as usize).unwrap();
        // doubling the prefix finds nothing new
        let saturated = factor_complexity(&short, n as usize).unwrap() == rho;
        if value != (2 * n).into() || rho as u64 != 2 * n || !saturated {
            c.require(false, format!("n = {n}: novel {value}, complexity {rho}, saturated {saturated}"));
        }
    }
    c
}

fn recurrence(s: &mut Session) -> Criterion {
    let mut c = Criterion::new(8, "gaps between occurrences at most 7n");
    c.require(truth(s, "uc") == Some(true), "uc TRUE");
    let q = q_prefix(5000);
    for n in 1..=50 {
        match max_recurrence_gap(&q, n).unwrap() {
            RecurrenceGap::Gap(g) => c.require(g <= 7 * n, format!("n = {n}: gap {g}")),
            RecurrenceGap::Inconclusive { factor } => c.require(false, format!("{factor} occurs once")),
        }
    }
    c
}

fn unique(s: &mut Session) -> Criterion {
    let mut c = Criterion::new(9, "1001100110 is the only 5/2-power");
    c.require(truth(s, "testlength") == Some(true), "testlength TRUE");
    let q = q_prefix(20_000);
    let found: Vec<String> = factors_with_exponent(&q, &five_halves()).into_iter().collect();
    c.require(found == ["1001100110"], format!("5/2-powers in q[0..20000]: {found:?}"));
    c.require(&q.as_str()[11..21] == "1001100110", "occurrence at 11");
    c
}

fn abelian() -> Criterion {
    let mut c = Criterion::new(10, "abelian complexity takes exactly the values 1..4 for 1 <= n <= 5000");
    let q = q_prefix(100_000);
    let values: BTreeSet<usize> = (1..=5000).map(|n| abelian_complexity(&q, n).unwrap()).collect();
    c.require(values.iter().all(|v| (1..=4).contains(v)), format!("values within 1..4: {values:?}"));
    c.require(!values.contains(&5), "value 5 absent");
    for v in 1..=4 {
        if !values.contains(&v) {
            c.require(false, format!("value {v} attained for some 1 <= n <= 5000"));
        }
    }
    c.require(abelian_complexity(&q, 0).unwrap() == 1, "value 1 at n = 0");
    c
}

fn reversible() -> Criterion {
    let mut c = Criterion::new(11, "32 factors of length 16, none reversible");
    let q = q_prefix(5000);
    c.require(factors(&q, 16).unwrap().len() == 32, "32 factors of length 16");
    c.require(reversible_factors(&q, 16).unwrap().is_empty(), "none reversible");
    c.require(!reversible_factors(&q, 15).unwrap().is_empty(), "a reversible factor of length 15");
    c
}

fn rigidity() -> Criterion {
    let mut c = Criterion::new(12, "at most 16n valid non-strict words for 58 <= n <= 150");
    c.conjectural = true;
    let lc = level_counts(&SearchConfig::new(five_halves(), false).unwrap(), 150, 1 << 24);
    c.require(lc.complete, "level counts complete");
    for row in bound_rows(&lc.counts, 16, 58, 150) {
        c.require(row.ok, format!("n = {}: {} > {}", row.n, row.count, row.bound));
    }
    c
}

fn main() {
    let mut session = Session::new(CheckOptions::default());
    let criteria = vec![
        lower_bound(),
        tables(),
        numeration(),
        dfao(),
        addition(&mut session),
        power_free(&mut session),
        complexity(&mut session),
        recurrence(&mut session),
        unique(&mut session),
        abelian(),
        reversible(),
        rigidity(),
    ];
    for c in &criteria {
        println!("{}", c.line());
    }

    let reports = session.run_all().unwrap();
    for r in &reports {
        println!("check {} {}", r.verdict, r.name);
    }

    let mut ok = all_gating_pass(&reports);
    for c in criteria.iter().filter(|c| !c.conjectural) {
        let expected: Vec<String> = KNOWN_UNATTAINABLE
            .iter()
            .filter(|(n, _)| *n == c.number)
            .map(|(_, part)| part.to_string())
            .collect();
        if c.failures != expected {
            eprintln!("criterion {} failed unexpectedly: {:?}", c.number, c.failures);
            ok = false;
        }
    }
    if !ok {
        std::process::exit(1);
    }
    println!("acceptance: all gating criteria behave as recorded");
}
