use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use super::*;
use crate::error::Error;
use crate::numeration::NumerationSystem;
use crate::word::stats::{factor_complexity, q_prefix};

fn engine_q() -> Engine {
    Engine::new(NumerationSystem::dt_q()).unwrap()
}

fn engine_h() -> Engine {
    Engine::new(NumerationSystem::dt_h()).unwrap()
}

fn q_bits(len: usize) -> Vec<u8> {
    q_prefix(len).symbols().iter().map(|&c| c - b'0').collect()
}

/// Truth of a relation on every assignment in `0..=bound`.
fn table(e: &Engine, rel: &Relation, bound: u64) -> Vec<(Vec<u64>, bool)> {
    let k = rel.vars().len();
    let mut out = Vec::new();
    let mut vals = vec![0u64; k];
    loop {
        out.push((vals.clone(), rel.contains(e.system(), &vals).unwrap()));
        let mut i = 0;
        while i < k && vals[i] == bound {
            vals[i] = 0;
            i += 1;
        }
        if i == k {
            return out;
        }
        vals[i] += 1;
    }
}

#[test]
fn addition_laws() {
    for mut e in [engine_h(), engine_q()] {
        for law in [
            "Ax x+0=x",
            "Ax,y,z x+y=z => y+x=z",
            "Ax,y Ez x+y=z",
            "Ax,y,z,w (x+y=z & x+y=w) => z=w",
            "Ax,y,z (x+y)+z=x+(y+z)",
            "Ax,y x<y | x=y | x>y",
            "Ax ~(x<x)",
            "Ax,y x<y <=> x+1<=y",
            "Ax,y x<=x+y",
            "Ax Ey x=2*y | x=2*y+1",
            "~Ex x+1=0",
        ] {
            assert!(e.eval_closed(law).unwrap(), "{} {law}", e.system().name());
        }
        assert!(!e.eval_closed("Ax,y x<=y").unwrap());
        assert!(!e.eval_closed("Ex,y x+y=1 & x=y").unwrap());
    }
}

#[test]
fn arithmetic_atoms_against_integers() {
    let mut e = engine_q();
    let cases: Vec<(&str, Box<dyn Fn(&[u64]) -> bool>)> = vec![
        ("y=3*x+2", Box::new(|v| v[1] == 3 * v[0] + 2)),
        ("z=x-y", Box::new(|v| v[0] >= v[1] && v[2] == v[0] - v[1])),
        ("x<y+3", Box::new(|v| v[0] < v[1] + 3)),
        ("2*x>=y", Box::new(|v| 2 * v[0] >= v[1])),
        ("x!=y", Box::new(|v| v[0] != v[1])),
        ("x=x", Box::new(|_| true)),
        ("x+x=y", Box::new(|v| 2 * v[0] == v[1])),
        ("x=7", Box::new(|v| v[0] == 7)),
    ];
    for (f, oracle) in cases {
        let rel = e.relation(f).unwrap();
        for (vals, got) in table(&e, &rel, 14) {
            assert_eq!(got, oracle(&vals), "{f} at {vals:?}");
        }
    }
}

#[test]
fn sequence_atoms_against_the_word() {
    let q = q_bits(600);
    let mut e = engine_q();
    let one = e.relation("Q[n]=1").unwrap();
    let flip = e.relation("Mor[n]!=Q[n+1]").unwrap();
    let same = e.relation("Q[m]=Q[n]").unwrap();
    for n in 0..599u64 {
        assert_eq!(one.contains(e.system(), &[n]).unwrap(), q[n as usize] == 1);
        assert_eq!(flip.contains(e.system(), &[n]).unwrap(), q[n as usize] != q[n as usize + 1]);
    }
    for (vals, got) in table(&e, &same, 40) {
        assert_eq!(got, q[vals[0] as usize] == q[vals[1] as usize]);
    }
    // h over letters a, b, c compares by output index
    let mut h = engine_h();
    let rel = h.relation("H[n]=0").unwrap();
    let p = crate::word::stats::p_prefix(300);
    for n in 0..300u64 {
        assert_eq!(rel.contains(h.system(), &[n]).unwrap(), p.symbols()[n as usize] == b'0');
    }
}

#[test]
fn quantifier_duality_and_connectives() {
    let mut e = engine_q();
    for body in ["x<y & Q[x]=1", "x+y=z | Q[y]=0", "Q[x]=Q[y+1]"] {
        let a = e.relation(&format!("Ax {body}")).unwrap();
        let b = e.relation(&format!("~Ex ~({body})")).unwrap();
        assert_eq!(a, b, "{body}");
        let c = e.relation(&format!("Ex {body}")).unwrap();
        let d = e.relation(&format!("~Ax ~({body})")).unwrap();
        assert_eq!(c, d, "{body}");
    }
    let a = e.relation("x<y => Q[x]=Q[y]").unwrap();
    let b = e.relation("~(x<y) | Q[x]=Q[y]").unwrap();
    assert_eq!(a, b);
    let a = e.relation("x<y <=> Q[y]=1").unwrap();
    let b = e.relation("(x<y & Q[y]=1) | (~(x<y) & ~(Q[y]=1))").unwrap();
    assert_eq!(a, b);
    assert_eq!(e.eval_closed("Ax x=x").unwrap(), !e.eval_closed("Ex ~(x=x)").unwrap());
}

#[test]
fn definitions_and_parameter_order() {
    let mut e = engine_q();
    let p = e.define("lt", "y<x", None).unwrap();
    assert_eq!(p.params, ["x", "y"]);
    assert!(e.eval_closed("$lt(3,2) & ~$lt(2,3)").unwrap());
    let p = e.define("lt2", "y<x", Some(&["y".to_string(), "x".to_string()])).unwrap();
    assert_eq!(p.params, ["y", "x"]);
    assert!(e.eval_closed("$lt2(2,3) & ~$lt2(3,2)").unwrap());
    assert!(e.eval_closed("Ax $lt(x+1,x)").unwrap());
    assert!(matches!(e.define("bad", "y<x", Some(&["x".to_string()])), Err(Error::Usage(_))));
    assert!(matches!(e.eval_closed("$nope(1)"), Err(Error::Unbound(_))));
    assert!(matches!(e.eval_closed("$lt(1)"), Err(Error::Usage(_))));
    assert!(matches!(e.eval_closed("x=1"), Err(Error::Usage(_))));
    assert!(matches!(e.eval_closed("Ex Z[x]=1"), Err(Error::Unbound(_))));
    assert!(matches!(e.eval_closed("Ex Q[x]<1"), Err(Error::Usage(_))));
    assert!(matches!(e.eval_closed("Ex x=="), Err(Error::Syntax { .. })));
}

#[test]
fn counting_matches_enumeration() {
    let mut e = engine_q();
    let q = q_bits(200);
    for (f, oracle) in [
        ("i<2*n", Box::new(|n: u64| 2 * n) as Box<dyn Fn(u64) -> u64>),
        ("i<=n & Q[i]=1", Box::new(|n: u64| (0..=n).filter(|&i| q[i as usize] == 1).count() as u64)),
        ("i+i=n", Box::new(|n: u64| u64::from(n.is_multiple_of(2)))),
        ("n>=1 & i<n & Q[i]!=Q[i+1]", Box::new(|n: u64| (0..n).filter(|&i| q[i as usize] != q[i as usize + 1]).count() as u64)),
    ] {
        let rel = e.relation(f).unwrap();
        let lr = count_representation(&rel, "i").unwrap();
        assert_eq!(lr.params(), ["n"]);
        for n in 0..=40u64 {
            let counted = (0..=100u64).filter(|&i| rel.contains(e.system(), &[i, n]).unwrap()).count() as u64;
            assert_eq!(counted, oracle(n), "{f} at {n}");
            assert_eq!(lr.value(e.system(), &[n]).unwrap(), counted.into(), "{f} at {n}");
        }
    }
    let rel = e.relation("i>=n").unwrap();
    assert!(matches!(count_representation(&rel, "i"), Err(Error::DivergingCount(_))));
    assert!(matches!(count_representation(&rel, "k"), Err(Error::Usage(_))));
}

#[test]
fn linear_representation_equality() {
    let mut e = engine_q();
    let count = |e: &mut Engine, f: &str| count_representation(&e.relation(f).unwrap(), "i").unwrap();
    let a = count(&mut e, "i<2*n");
    let b = count(&mut e, "i<n+n");
    let c = count(&mut e, "i<=2*n");
    let d = count(&mut e, "i<2*n & (Q[i]=0 | Q[i]=1)");
    assert!(linrep_equal(&a, &b).unwrap());
    assert!(linrep_equal(&a, &d).unwrap());
    assert!(!linrep_equal(&a, &c).unwrap());
    let h = count_representation(&engine_h().relation("i<n").unwrap(), "i").unwrap();
    // DT_h reads three digits and cannot be compared with DT_q
    assert!(linrep_equal(&a, &h).is_err());
}

#[test]
fn scripts() {
    let mut e = engine_q();
    let out = e
        .run_script(
            "# doubling\n\
             def dbl count i \"i<2*n\"\n\
             def dbl2 count i \"i<n+n\"\n\
             def sh(y,x) \"x+1=y\"\n\
             eval order \"Ax $sh(x+1,x)\"\n\
             linrep-eq dbl dbl2\n",
        )
        .unwrap();
    let lines: Vec<String> = out.iter().map(|o| o.to_string()).collect();
    assert!(lines[0].starts_with("def dbl: "), "{lines:?}");
    assert!(lines[0].contains("counting i"));
    assert!(lines[3].starts_with("eval order: TRUE"));
    assert!(lines[4].starts_with("linrep-eq dbl dbl2: TRUE"));
    assert_eq!(e.predicate("sh").unwrap().params, ["y", "x"]);
    for bad in ["frob x \"x=1\"", "def \"x=1\"", "eval e \"x=1", "linrep-eq a", "def a count \"x=1\""] {
        assert!(parse_script(bad).is_err(), "{bad}");
    }
    let err = e.run_script("linrep-eq dbl nothing").unwrap_err();
    assert!(err.to_string().contains("line 1"));
}

/// The predicates of the uniform-recurrence and power arguments, checked
/// against direct evaluation on a prefix of the word.
#[test]
fn script_predicates_are_sound() {
    let q = q_bits(4000);
    let fe = |i: usize, j: usize, n: usize| q[i..i + n] == q[j..j + n];
    let mut e = engine_q();
    let out = e
        .run_script(
            r#"
def factoreq "Au,v (u>=i & u<i+n & u+j=v+i) => Q[u]=Q[v]"
def novel count i "n>=1 & Aj (j<i) => ~$factoreq(i,j,n)"
def twon count i "n>=1 & i<2*n"
linrep-eq novel twon
def nextgap "Ej i<j & $factoreq(i,j,n) & i+g=j & At (i<t & t<j) => ~$factoreq(i,t,n)"
def maxgap "Ei $nextgap(g,i,n) & Ah (h>g) => ~Ei $nextgap(h,i,n)"
def per "p>=1 & p<=n & $factoreq(i,i+p,n-p)"
def exp52 "Ep $per(i,n,p) & 2*n=5*p"
"#,
        )
        .unwrap();
    assert_eq!(out[3].truth, Some(true));
    let sys = e.system().clone();
    let mut rng = StdRng::seed_from_u64(52);
    let pred = |e: &Engine, name: &str| instantiate(&e.predicate(name).unwrap().dfa, &e.predicate(name).unwrap().params).unwrap();

    let r = pred(&e, "factoreq");
    for _ in 0..300 {
        let (i, j, n) = (rng.random_range(0..80), rng.random_range(0..80), rng.random_range(0..25));
        let want = fe(i, j, n);
        assert_eq!(r.contains(&sys, &[i as u64, j as u64, n as u64]).unwrap(), want, "factoreq {i} {j} {n}");
    }
    // occurrences are frequent, so also sample equal factors
    for _ in 0..100 {
        let (i, n) = (rng.random_range(0..80), rng.random_range(1..12));
        let j = (i + 1..i + 200).find(|&j| fe(i, j, n)).unwrap();
        assert!(r.contains(&sys, &[i as u64, j as u64, n as u64]).unwrap());
    }

    let r = pred(&e, "per");
    for _ in 0..300 {
        let (i, n, p) = (rng.random_range(0..80), rng.random_range(0..25), rng.random_range(0..25));
        let want = p >= 1 && p <= n && fe(i, i + p, n - p);
        assert_eq!(r.contains(&sys, &[i as u64, n as u64, p as u64]).unwrap(), want, "per {i} {n} {p}");
    }

    let next = |i: usize, n: usize| (i + 1..).find(|&j| fe(i, j, n)).unwrap() - i;
    let r = pred(&e, "nextgap");
    for _ in 0..300 {
        let (i, n) = (rng.random_range(0..80), rng.random_range(1..12));
        let g = if rng.random_bool(0.5) { next(i, n) } else { rng.random_range(0..40) };
        let want = g == next(i, n);
        assert_eq!(r.contains(&sys, &[g as u64, i as u64, n as u64]).unwrap(), want, "nextgap {g} {i} {n}");
    }

    let r = pred(&e, "maxgap");
    for n in 1..8 {
        let max = (0..2000).map(|i| next(i, n)).max().unwrap();
        assert!(max <= 7 * n);
        for g in 0..=8 * n {
            assert_eq!(r.contains(&sys, &[g as u64, n as u64]).unwrap(), g == max, "maxgap {g} {n}");
        }
    }

    let r = pred(&e, "exp52");
    for i in 0..60 {
        for n in 0..30 {
            let want = n % 5 == 0 && n > 0 && fe(i, i + 2 * n / 5, n - 2 * n / 5);
            assert_eq!(r.contains(&sys, &[i as u64, n as u64]).unwrap(), want, "exp52 {i} {n}");
        }
    }

    // counting through the automaton equals the number of distinct factors
    let prefix = q_prefix(3000);
    let lr = e.count("novel").unwrap();
    for n in 1..=40u64 {
        let c = factor_complexity(&prefix, n as usize).unwrap() as u64;
        assert_eq!(lr.value(&sys, &[n]).unwrap(), c.into());
        assert_eq!(c, 2 * n);
    }
}
