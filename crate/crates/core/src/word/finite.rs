use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A finite alphabet of ASCII letters, kept sorted and duplicate-free.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Alphabet(Vec<u8>);

impl Alphabet {
    pub fn new(letters: impl IntoIterator<Item = u8>) -> Self {
        let mut v: Vec<u8> = letters.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        Alphabet(v)
    }

    pub fn binary() -> Self {
        Alphabet(b"01".to_vec())
    }

    pub fn ternary_digits() -> Self {
        Alphabet(b"012".to_vec())
    }

    pub fn ternary_letters() -> Self {
        Alphabet(b"abc".to_vec())
    }

    pub fn letters(&self) -> &[u8] {
        &self.0
    }

    pub fn contains(&self, letter: u8) -> bool {
        self.0.binary_search(&letter).is_ok()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_binary(&self) -> bool {
        self.0.len() <= 2
    }
}

/// A finite word over a declared alphabet.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FiniteWord {
    alphabet: Alphabet,
    symbols: Vec<u8>,
}

impl FiniteWord {
    pub fn new(alphabet: Alphabet, symbols: Vec<u8>) -> Result<Self> {
        if let Some(&bad) = symbols.iter().find(|&&s| !alphabet.contains(s)) {
            return Err(Error::Domain(format!(
                "symbol {:?} not in alphabet {:?}",
                bad as char,
                String::from_utf8_lossy(alphabet.letters())
            )));
        }
        Ok(FiniteWord { alphabet, symbols })
    }

    /// Builds a word whose alphabet is exactly the set of letters it uses,
    /// widened to `{0,1}` for words over binary digits.
    pub fn parse(text: &str) -> Result<Self> {
        let symbols: Vec<u8> = text.bytes().filter(|b| !b.is_ascii_whitespace()).collect();
        if symbols.iter().any(|b| !b.is_ascii_graphic()) {
            return Err(Error::Domain(format!("non-ASCII symbol in {text:?}")));
        }
        let alphabet = if symbols.iter().all(|&b| b == b'0' || b == b'1') {
            Alphabet::binary()
        } else {
            Alphabet::new(symbols.iter().copied())
        };
        Ok(FiniteWord { alphabet, symbols })
    }

    pub fn binary(text: &str) -> Result<Self> {
        FiniteWord::new(Alphabet::binary(), text.bytes().collect())
    }

    pub(crate) fn from_parts_unchecked(alphabet: Alphabet, symbols: Vec<u8>) -> Self {
        debug_assert!(symbols.iter().all(|&s| alphabet.contains(s)));
        FiniteWord { alphabet, symbols }
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn symbols(&self) -> &[u8] {
        &self.symbols
    }

    pub fn into_symbols(self) -> Vec<u8> {
        self.symbols
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    /// The factor `w[start..end]`, over the same alphabet.
    pub fn factor(&self, start: usize, end: usize) -> Result<FiniteWord> {
        if start > end || end > self.len() {
            return Err(Error::Range {
                index: end.max(start),
                limit: self.len(),
            });
        }
        Ok(FiniteWord {
            alphabet: self.alphabet.clone(),
            symbols: self.symbols[start..end].to_vec(),
        })
    }

    pub fn prefix(&self, len: usize) -> Result<FiniteWord> {
        self.factor(0, len)
    }

    pub fn reversed(&self) -> FiniteWord {
        let mut symbols = self.symbols.clone();
        symbols.reverse();
        FiniteWord {
            alphabet: self.alphabet.clone(),
            symbols,
        }
    }

    /// Exchanges the two letters of a binary word.
    pub fn complemented(&self) -> Result<FiniteWord> {
        let letters = self.alphabet.letters();
        if letters.len() != 2 {
            return Err(Error::Domain("complement needs a two-letter alphabet".into()));
        }
        let (x, y) = (letters[0], letters[1]);
        let symbols = self
            .symbols
            .iter()
            .map(|&s| if s == x { y } else { x })
            .collect();
        Ok(FiniteWord {
            alphabet: self.alphabet.clone(),
            symbols,
        })
    }

    pub fn as_str(&self) -> &str {
        // symbols are ASCII by construction
        std::str::from_utf8(&self.symbols).unwrap_or("")
    }
}

impl fmt::Display for FiniteWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_foreign_symbols() {
        assert!(FiniteWord::new(Alphabet::binary(), b"0120".to_vec()).is_err());
        assert!(FiniteWord::binary("0110").is_ok());
    }

    #[test]
    fn reverse_and_complement() {
        let w = FiniteWord::binary("0011010").unwrap();
        assert_eq!(w.reversed().as_str(), "0101100");
        assert_eq!(w.complemented().unwrap().as_str(), "1100101");
    }

    #[test]
    fn factor_bounds() {
        let w = FiniteWord::parse("entente").unwrap();
        assert_eq!(w.factor(1, 4).unwrap().as_str(), "nte");
        assert!(w.factor(3, 9).is_err());
    }
}
