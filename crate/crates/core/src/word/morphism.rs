use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::finite::{Alphabet, FiniteWord};
use crate::error::{Error, Result};

/// A letter-to-word substitution.
///
/// Images may be empty only when the morphism was built with
/// [`Morphism::new_erasing`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Morphism {
    source: Alphabet,
    target: Alphabet,
    images: BTreeMap<u8, Vec<u8>>,
}

impl Morphism {
    pub fn new(rules: impl IntoIterator<Item = (u8, Vec<u8>)>) -> Result<Self> {
        let m = Self::new_erasing(rules)?;
        if let Some((&letter, _)) = m.images.iter().find(|(_, img)| img.is_empty()) {
            return Err(Error::Construction(format!(
                "image of {:?} is empty",
                letter as char
            )));
        }
        Ok(m)
    }

    pub fn new_erasing(rules: impl IntoIterator<Item = (u8, Vec<u8>)>) -> Result<Self> {
        let mut images = BTreeMap::new();
        for (letter, image) in rules {
            if images.insert(letter, image).is_some() {
                return Err(Error::Construction(format!(
                    "letter {:?} has two rules",
                    letter as char
                )));
            }
        }
        if images.is_empty() {
            return Err(Error::Construction("morphism has no rules".into()));
        }
        let source = Alphabet::new(images.keys().copied());
        let target = Alphabet::new(images.values().flatten().copied());
        Ok(Morphism {
            source,
            target,
            images,
        })
    }

    pub fn from_strs(rules: &[(char, &str)]) -> Result<Self> {
        Self::new(rules.iter().map(|&(c, s)| (c as u8, s.as_bytes().to_vec())))
    }

    pub fn source(&self) -> &Alphabet {
        &self.source
    }

    pub fn target(&self) -> &Alphabet {
        &self.target
    }

    pub fn image(&self, letter: u8) -> Option<&[u8]> {
        self.images.get(&letter).map(Vec::as_slice)
    }

    pub fn rules(&self) -> impl Iterator<Item = (u8, &[u8])> {
        self.images.iter().map(|(&k, v)| (k, v.as_slice()))
    }

    /// Alphabet of the result of applying this morphism. A word over binary
    /// digits keeps the full `{0,1}` alphabet even when one letter is unused.
    fn output_alphabet(&self) -> Alphabet {
        if self.target.letters().iter().all(|&b| b == b'0' || b == b'1') {
            Alphabet::binary()
        } else {
            self.target.clone()
        }
    }

    pub fn apply(&self, w: &FiniteWord) -> Result<FiniteWord> {
        let out = self.apply_symbols(w.symbols())?;
        Ok(FiniteWord::from_parts_unchecked(self.output_alphabet(), out))
    }

    pub(crate) fn apply_symbols(&self, symbols: &[u8]) -> Result<Vec<u8>> {
        let mut out = Vec::with_capacity(symbols.len() * 2);
        for &s in symbols {
            let img = self.images.get(&s).ok_or_else(|| {
                Error::Domain(format!("symbol {:?} outside source alphabet", s as char))
            })?;
            out.extend_from_slice(img);
        }
        Ok(out)
    }

    /// The first `len` letters of the fixed point of this morphism starting
    /// with `seed`.
    pub fn fixed_point_prefix(&self, seed: u8, len: usize) -> Result<FiniteWord> {
        let img = self.image(seed).ok_or_else(|| {
            Error::Construction(format!("seed {:?} has no image", seed as char))
        })?;
        if img.len() < 2 || img[0] != seed {
            return Err(Error::Construction(format!(
                "morphism is not prolongable on {:?}",
                seed as char
            )));
        }
        if !self.target.letters().iter().all(|&t| self.source.contains(t)) {
            return Err(Error::Construction(
                "morphism is not an endomorphism".into(),
            ));
        }
        // w[i] generates w[j..] for j from the image of w[i]; extend lazily
        let mut word = img.to_vec();
        let mut next = 1;
        while word.len() < len {
            if next >= word.len() {
                return Err(Error::Construction("fixed point is finite".into()));
            }
            let letter = word[next];
            let image = &self.images[&letter];
            word.extend_from_slice(image);
            next += 1;
        }
        word.truncate(len);
        Ok(FiniteWord::from_parts_unchecked(self.source.clone(), word))
    }

    /// Letter-count matrix: entry `(x, y)` counts occurrences of letter `y`
    /// in the image of letter `x`, both indexed in alphabet order.
    pub fn incidence(&self) -> Vec<Vec<i64>> {
        let letters = self.source.letters();
        letters
            .iter()
            .map(|x| {
                letters
                    .iter()
                    .map(|y| self.images[x].iter().filter(|&&c| c == *y).count() as i64)
                    .collect()
            })
            .collect()
    }
}

impl FromStr for Morphism {
    type Err = Error;

    /// Parses one `letter -> image` rule per line; `#` starts a comment.
    /// An image written as `""` or left empty is the empty word.
    fn from_str(text: &str) -> Result<Self> {
        let mut rules = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let bad = |m: &str| Error::Parse {
                what: "morphism",
                message: format!("line {}: {m}", lineno + 1),
            };
            let (lhs, rhs) = line.split_once("->").ok_or_else(|| bad("expected `->`"))?;
            let lhs = lhs.trim();
            if lhs.len() != 1 {
                return Err(bad("left side must be a single letter"));
            }
            let rhs = rhs.trim();
            let rhs = if rhs == "\"\"" { "" } else { rhs };
            if rhs.bytes().any(|b| b.is_ascii_whitespace() || !b.is_ascii_graphic()) {
                return Err(bad("image must be a plain symbol string"));
            }
            rules.push((lhs.as_bytes()[0], rhs.as_bytes().to_vec()));
        }
        Morphism::new_erasing(rules)
    }
}

impl fmt::Display for Morphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, v) in &self.images {
            writeln!(f, "{} -> {}", *k as char, String::from_utf8_lossy(v))?;
        }
        Ok(())
    }
}

/// The morphisms that generate **p** and **q**.
pub mod standard {
    use super::Morphism;

    /// `0 -> 01, 1 -> 21, 2 -> 0`; its fixed point is **p**.
    pub fn h() -> Morphism {
        Morphism::from_strs(&[('0', "01"), ('1', "21"), ('2', "0")]).unwrap()
    }

    /// `h` written over `{a, b, c}`.
    pub fn h_letters() -> Morphism {
        Morphism::from_strs(&[('a', "ab"), ('b', "cb"), ('c', "a")]).unwrap()
    }

    /// `0 -> 011, 1 -> 0, 2 -> 01`; **q** is the image of **p**.
    pub fn g() -> Morphism {
        Morphism::from_strs(&[('0', "011"), ('1', "0"), ('2', "01")]).unwrap()
    }

    /// `g` over `{a, b, c}`.
    pub fn g_letters() -> Morphism {
        Morphism::from_strs(&[('a', "011"), ('b', "0"), ('c', "01")]).unwrap()
    }

    /// Inflation of **p**: every letter followed by markers for the extra
    /// letters its `g`-image contributes.
    pub fn g_prime() -> Morphism {
        Morphism::from_strs(&[('a', "a12"), ('b', "b"), ('c', "c3")]).unwrap()
    }

    /// Coding of the inflated word onto **q**.
    pub fn g_second() -> Morphism {
        Morphism::from_strs(&[
            ('a', "0"),
            ('b', "0"),
            ('c', "0"),
            ('1', "1"),
            ('2', "1"),
            ('3', "1"),
        ])
        .unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::standard::*;
    use super::*;

    #[test]
    fn apply_examples() {
        let w = FiniteWord::parse("012").unwrap();
        assert_eq!(g().apply(&w).unwrap().as_str(), "011001");
        assert_eq!(h().apply(&w).unwrap().as_str(), "01210");
        let empty = FiniteWord::parse("").unwrap();
        assert_eq!(g().apply(&empty).unwrap().as_str(), "");
    }

    #[test]
    fn apply_rejects_unknown_letter() {
        let w = FiniteWord::parse("013").unwrap();
        assert!(matches!(g().apply(&w), Err(Error::Domain(_))));
    }

    #[test]
    fn fixed_point_of_h() {
        assert_eq!(
            h().fixed_point_prefix(b'0', 21).unwrap().as_str(),
            "012102101021012101021"
        );
        assert_eq!(h().fixed_point_prefix(b'0', 1).unwrap().as_str(), "0");
        let abc = h_letters().fixed_point_prefix(b'a', 70).unwrap();
        assert!(abc.as_str().starts_with("abcbacbabacbabcbabacb"));
        assert_eq!(
            abc.as_str(),
            "abcbacbabacbabcbabacbabcbacbabcbabacbabcbacbabacbabcbacbabcbabacbabcba"
        );
    }

    #[test]
    fn fixed_point_extends_consistently() {
        let short = h().fixed_point_prefix(b'0', 50).unwrap();
        let long = h().fixed_point_prefix(b'0', 500).unwrap();
        assert_eq!(short.symbols(), &long.symbols()[..50]);
    }

    #[test]
    fn non_prolongable_seed() {
        assert!(matches!(
            h().fixed_point_prefix(b'1', 10),
            Err(Error::Construction(_))
        ));
        assert!(matches!(
            h().fixed_point_prefix(b'2', 10),
            Err(Error::Construction(_))
        ));
    }

    #[test]
    fn incidence_matches_letter_counts() {
        assert_eq!(
            h_letters().incidence(),
            vec![vec![1, 1, 0], vec![0, 1, 1], vec![1, 0, 0]]
        );
    }

    #[test]
    fn parse_text_format() {
        let m: Morphism = "# g\n0 -> 011\n1 -> 0   # short\n\n2 -> 01\n".parse().unwrap();
        assert_eq!(m, g());
        assert_eq!(m.to_string().parse::<Morphism>().unwrap(), m);
        assert!("0 => 1".parse::<Morphism>().is_err());
        assert!("0 -> 1\n0 -> 2".parse::<Morphism>().is_err());
        let erasing: Morphism = "t -> \"\"\na -> a11b".parse().unwrap();
        assert_eq!(erasing.image(b't'), Some(&b""[..]));
    }
}
