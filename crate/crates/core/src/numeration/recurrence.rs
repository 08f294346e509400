use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::word::Morphism;

/// A homogeneous linear recurrence `u(n+d) = c1 u(n+d-1) + ... + cd u(n)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Recurrence {
    coeffs: Vec<i64>,
}

impl Recurrence {
    pub fn new(coeffs: Vec<i64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::Domain("a recurrence needs at least one coefficient".into()));
        }
        Ok(Recurrence { coeffs })
    }

    /// From a monic polynomial given highest degree first.
    pub fn from_char_poly(poly: &[i64]) -> Result<Self> {
        match poly.split_first() {
            Some((1, rest)) if !rest.is_empty() => Self::new(rest.iter().map(|c| -c).collect()),
            _ => Err(Error::Domain("characteristic polynomial must be monic of degree >= 1".into())),
        }
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    /// Monic characteristic polynomial, highest degree first.
    pub fn char_poly(&self) -> Vec<i64> {
        std::iter::once(1).chain(self.coeffs.iter().map(|c| -c)).collect()
    }

    /// The recurrence with characteristic polynomial `X·P(X)`: the same
    /// sequences, plus those that differ from them at index 0 only.
    pub fn times_x(&self) -> Recurrence {
        let mut coeffs = self.coeffs.clone();
        coeffs.push(0);
        Recurrence { coeffs }
    }

    /// Next term from the last `order` terms, or `None` on overflow.
    pub fn next_term(&self, window: &[i128]) -> Option<i128> {
        let d = self.order();
        debug_assert!(window.len() >= d);
        let tail = &window[window.len() - d..];
        self.coeffs
            .iter()
            .zip(tail.iter().rev())
            .try_fold(0i128, |acc, (&c, &u)| acc.checked_add((c as i128).checked_mul(u)?))
    }

    /// The first `len` terms from the given initial values.
    pub fn extend(&self, initial: &[i128], len: usize) -> Result<Vec<i128>> {
        if initial.len() != self.order() {
            return Err(Error::Domain(format!(
                "{} initial values for a recurrence of order {}",
                initial.len(),
                self.order()
            )));
        }
        let mut v = initial.to_vec();
        while v.len() < len {
            let t = self
                .next_term(&v)
                .ok_or(Error::Range { index: v.len(), limit: v.len() })?;
            v.push(t);
        }
        v.truncate(len);
        Ok(v)
    }

    pub fn is_satisfied_by(&self, values: &[i128]) -> bool {
        let d = self.order();
        (d..values.len()).all(|n| self.next_term(&values[n - d..n]) == Some(values[n]))
    }

    /// A rational interval `(lo, hi]` of width at most `width` holding the
    /// largest real root of the characteristic polynomial, found by
    /// bisection with a Sturm sequence.
    pub fn dominant_root(&self, width: &BigRational) -> Option<(BigRational, BigRational)> {
        let p: Vec<BigRational> = self
            .char_poly()
            .iter()
            .map(|&c| BigRational::from_integer(c.into()))
            .collect();
        let sturm = sturm_sequence(&p);
        let bound = BigRational::from_integer(
            (1 + self.coeffs.iter().map(|c| c.unsigned_abs()).max().unwrap_or(0)).into(),
        );
        let roots_above = |x: &BigRational| sign_changes(&sturm, x) - sign_changes(&sturm, &bound);
        let mut lo = -bound.clone();
        if roots_above(&lo) == 0 {
            return None;
        }
        let mut hi = bound.clone();
        while &hi - &lo > *width {
            let mid = (&lo + &hi) / BigRational::from_integer(2.into());
            if roots_above(&mid) > 0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Some((lo, hi))
    }
}

impl fmt::Display for Recurrence {
    /// The characteristic polynomial in `X`, e.g. `X^3-2X^2+X-1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let poly = self.char_poly();
        let deg = poly.len() - 1;
        let mut first = true;
        for (i, &c) in poly.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let e = deg - i;
            let sign = if c < 0 { "-" } else if first { "" } else { "+" };
            let mag = c.unsigned_abs();
            let coef = if mag == 1 && e > 0 { String::new() } else { mag.to_string() };
            let var = match e {
                0 => String::new(),
                1 => "X".to_string(),
                _ => format!("X^{e}"),
            };
            write!(f, "{sign}{coef}{var}")?;
            first = false;
        }
        Ok(())
    }
}

fn poly_rem(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    // highest degree first; b has a nonzero leading coefficient
    let mut r = a.to_vec();
    while r.len() >= b.len() {
        let q = &r[0] / &b[0];
        for (i, bi) in b.iter().enumerate() {
            r[i] = &r[i] - &q * bi;
        }
        r.remove(0);
    }
    while r.first().is_some_and(Zero::is_zero) {
        r.remove(0);
    }
    r
}

fn derivative(p: &[BigRational]) -> Vec<BigRational> {
    let deg = p.len() - 1;
    p[..deg]
        .iter()
        .enumerate()
        .map(|(i, c)| c * BigRational::from_integer(BigInt::from(deg - i)))
        .collect()
}

fn sturm_sequence(p: &[BigRational]) -> Vec<Vec<BigRational>> {
    let mut seq = vec![p.to_vec(), derivative(p)];
    loop {
        let n = seq.len();
        if seq[n - 1].is_empty() {
            seq.pop();
            break;
        }
        let r: Vec<BigRational> = poly_rem(&seq[n - 2], &seq[n - 1]).into_iter().map(|c| -c).collect();
        if r.is_empty() {
            break;
        }
        seq.push(r);
    }
    seq
}

fn eval(p: &[BigRational], x: &BigRational) -> BigRational {
    p.iter().fold(BigRational::zero(), |acc, c| acc * x + c)
}

fn sign_changes(seq: &[Vec<BigRational>], x: &BigRational) -> usize {
    let signs: Vec<bool> = seq
        .iter()
        .map(|p| eval(p, x))
        .filter(|v| !v.is_zero())
        .map(|v| v.is_positive())
        .collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

/// Square matrix of a morphism: entry `(x, y)` counts the occurrences of
/// letter `y` in the image of letter `x`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IncidenceMatrix {
    letters: Vec<u8>,
    entries: Vec<Vec<i64>>,
}

impl IncidenceMatrix {
    pub fn new(letters: Vec<u8>, entries: Vec<Vec<i64>>) -> Result<Self> {
        let n = letters.len();
        if entries.len() != n || entries.iter().any(|r| r.len() != n) {
            return Err(Error::Domain("incidence matrix must be square".into()));
        }
        if entries.iter().flatten().any(|&e| e < 0) {
            return Err(Error::Domain("incidence entries are counts".into()));
        }
        Ok(IncidenceMatrix { letters, entries })
    }

    /// Restricted to `letters`, which must be closed under the morphism.
    pub fn of_morphism(m: &Morphism, letters: &[u8]) -> Result<Self> {
        let mut entries = vec![vec![0i64; letters.len()]; letters.len()];
        for (i, &x) in letters.iter().enumerate() {
            let img = m
                .image(x)
                .ok_or_else(|| Error::Construction(format!("no image for {:?}", x as char)))?;
            for y in img {
                let j = letters.iter().position(|l| l == y).ok_or_else(|| {
                    Error::Construction(format!("letter {:?} outside the alphabet", *y as char))
                })?;
                entries[i][j] += 1;
            }
        }
        Self::new(letters.to_vec(), entries)
    }

    pub fn letters(&self) -> &[u8] {
        &self.letters
    }

    pub fn entries(&self) -> &[Vec<i64>] {
        &self.entries
    }

    pub fn dim(&self) -> usize {
        self.letters.len()
    }

    /// Rows of `M^n`: row `x` counts each letter in `h^n(x)`.
    pub fn power(&self, n: usize) -> Result<Vec<Vec<i128>>> {
        let d = self.dim();
        let mut acc: Vec<Vec<i128>> = (0..d)
            .map(|i| (0..d).map(|j| i128::from(i == j)).collect())
            .collect();
        for _ in 0..n {
            let mut next = vec![vec![0i128; d]; d];
            for i in 0..d {
                for k in 0..d {
                    if acc[i][k] == 0 {
                        continue;
                    }
                    for j in 0..d {
                        let t = acc[i][k]
                            .checked_mul(self.entries[k][j] as i128)
                            .and_then(|t| t.checked_add(next[i][j]))
                            .ok_or(Error::Range { index: n, limit: n })?;
                        next[i][j] = t;
                    }
                }
            }
            acc = next;
        }
        Ok(acc)
    }

    /// `|h^n(x)|` for each letter `x`.
    pub fn image_lengths(&self, n: usize) -> Result<Vec<i128>> {
        Ok(self.power(n)?.iter().map(|r| r.iter().sum()).collect())
    }

    /// Recurrence read off the characteristic polynomial
    /// (Faddeev-LeVerrier).
    pub fn char_recurrence(&self) -> Result<Recurrence> {
        let n = self.dim();
        if n == 0 {
            return Err(Error::Domain("empty matrix".into()));
        }
        let a: Vec<Vec<BigInt>> = self
            .entries
            .iter()
            .map(|r| r.iter().map(|&e| BigInt::from(e)).collect())
            .collect();
        let mul = |x: &Vec<Vec<BigInt>>, y: &Vec<Vec<BigInt>>| -> Vec<Vec<BigInt>> {
            (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| (0..n).map(|k| &x[i][k] * &y[k][j]).sum())
                        .collect()
                })
                .collect()
        };
        // coefficient of X^(n-k), k = 0..n
        let mut c = vec![BigInt::one()];
        let mut m = vec![vec![BigInt::zero(); n]; n];
        for k in 1..=n {
            let mut mk = mul(&a, &m);
            for (i, row) in mk.iter_mut().enumerate() {
                row[i] += &c[k - 1];
            }
            let am = mul(&a, &mk);
            let tr: BigInt = (0..n).map(|i| am[i][i].clone()).sum();
            c.push(-tr / BigInt::from(k));
            m = mk;
        }
        let poly = c
            .iter()
            .map(|x| x.to_i64().ok_or(Error::Range { index: 0, limit: 0 }))
            .collect::<Result<Vec<_>>>()?;
        Recurrence::from_char_poly(&poly)
    }
}
