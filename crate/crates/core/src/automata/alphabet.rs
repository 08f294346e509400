use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The tuple alphabet of a multi-track automaton.
///
/// Track `i` carries digits `0..radices[i]`. A tuple is encoded as a single
/// letter index in mixed radix with track 0 most significant, so letter 0 is
/// always the all-zero column and letters are ordered lexicographically by
/// tuple.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TrackAlphabet {
    radices: Vec<u32>,
    size: u32,
}

impl TrackAlphabet {
    pub fn new(radices: Vec<u32>) -> Result<Self> {
        if radices.contains(&0) {
            return Err(Error::Interface("a track needs at least one digit".into()));
        }
        let size = radices
            .iter()
            .try_fold(1u64, |acc, &r| {
                let next = acc * r as u64;
                (next <= (1 << 24)).then_some(next)
            })
            .ok_or_else(|| Error::Resource("tuple alphabet too large".into()))?;
        Ok(TrackAlphabet {
            radices,
            size: size as u32,
        })
    }

    pub fn uniform(tracks: usize, radix: u32) -> Result<Self> {
        Self::new(vec![radix; tracks])
    }

    pub fn radices(&self) -> &[u32] {
        &self.radices
    }

    pub fn tracks(&self) -> usize {
        self.radices.len()
    }

    pub fn size(&self) -> usize {
        self.size as usize
    }

    pub fn encode(&self, digits: &[u32]) -> Result<u32> {
        if digits.len() != self.radices.len() {
            return Err(Error::Interface(format!(
                "tuple has {} digits, alphabet has {} tracks",
                digits.len(),
                self.radices.len()
            )));
        }
        let mut letter = 0u32;
        for (&d, &r) in digits.iter().zip(&self.radices) {
            if d >= r {
                return Err(Error::Interface(format!("digit {d} outside 0..{r}")));
            }
            letter = letter * r + d;
        }
        Ok(letter)
    }

    pub fn decode(&self, mut letter: u32) -> Vec<u32> {
        let mut digits = vec![0; self.radices.len()];
        for (slot, &r) in digits.iter_mut().zip(&self.radices).rev() {
            *slot = letter % r;
            letter /= r;
        }
        digits
    }

    /// For every letter of `self`, the letter of `part` obtained by reading
    /// track `map[j]` of `self` as track `j` of `part`.
    pub fn restriction_table(&self, part: &TrackAlphabet, map: &[usize]) -> Result<Vec<u32>> {
        if map.len() != part.tracks() {
            return Err(Error::Interface("track map has the wrong length".into()));
        }
        for (j, &t) in map.iter().enumerate() {
            if t >= self.tracks() {
                return Err(Error::Interface(format!("track {t} does not exist")));
            }
            if self.radices[t] != part.radices[j] {
                return Err(Error::Interface(format!(
                    "track {t} has {} digits but the automaton expects {}",
                    self.radices[t], part.radices[j]
                )));
            }
        }
        Ok((0..self.size)
            .map(|l| {
                let digits = self.decode(l);
                map.iter()
                    .fold(0u32, |acc, &t| acc * self.radices[t] + digits[t])
            })
            .collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn encode_decode() {
        let a = TrackAlphabet::new(vec![4, 2, 3]).unwrap();
        assert_eq!(a.size(), 24);
        for l in 0..24 {
            assert_eq!(a.encode(&a.decode(l)).unwrap(), l);
        }
        assert_eq!(a.encode(&[0, 0, 0]).unwrap(), 0);
        assert!(a.encode(&[4, 0, 0]).is_err());
    }

    #[test]
    fn restriction() {
        let a = TrackAlphabet::new(vec![2, 3]).unwrap();
        let b = TrackAlphabet::new(vec![3]).unwrap();
        let t = a.restriction_table(&b, &[1]).unwrap();
        for l in 0..6 {
            assert_eq!(t[l as usize], a.decode(l)[1]);
        }
        assert!(a.restriction_table(&b, &[0]).is_err());
    }

    #[test]
    fn empty_tuple_alphabet() {
        let a = TrackAlphabet::new(vec![]).unwrap();
        assert_eq!(a.size(), 1);
        assert_eq!(a.decode(0), Vec::<u32>::new());
    }
}
