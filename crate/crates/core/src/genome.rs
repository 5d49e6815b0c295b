//! Genotype representations.

use std::fmt;

use crate::error::{invalid, Result};
use crate::rng::RandomSource;

/// Fixed-length bit string.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct BitString(Vec<bool>);

impl BitString {
    pub fn new(bits: Vec<bool>) -> Self {
        Self(bits)
    }

    pub fn zeros(n: usize) -> Self {
        Self(vec![false; n])
    }

    pub fn ones(n: usize) -> Self {
        Self(vec![true; n])
    }

    pub fn random(n: usize, rng: &mut RandomSource) -> Self {
        Self((0..n).map(|_| rng.coin(0.5)).collect())
    }

    /// Parses a string of `0`/`1` characters.
    pub fn parse(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => invalid(format!("not a bit: {other:?}")),
            })
            .collect::<Result<Vec<_>>>()
            .map(Self)
    }

    /// Bits of the integer `code`, least significant bit first.
    pub fn from_index(code: usize, n: usize) -> Self {
        Self((0..n).map(|i| (code >> i) & 1 == 1).collect())
    }

    pub fn to_index(&self) -> usize {
        self.0
            .iter()
            .enumerate()
            .fold(0, |acc, (i, &b)| acc | ((b as usize) << i))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, i: usize) -> bool {
        self.0[i]
    }

    pub fn set(&mut self, i: usize, value: bool) {
        self.0[i] = value;
    }

    pub fn flip(&mut self, i: usize) {
        self.0[i] = !self.0[i];
    }

    pub fn flip_all(&mut self, positions: &[usize]) {
        for &i in positions {
            self.flip(i);
        }
    }

    pub fn bits(&self) -> &[bool] {
        &self.0
    }

    pub fn count_ones(&self) -> usize {
        self.0.iter().filter(|&&b| b).count()
    }

    pub fn complement(&self) -> Self {
        Self(self.0.iter().map(|b| !b).collect())
    }

    /// Hamming distance; panics on length mismatch.
    pub fn hamming(&self, other: &Self) -> usize {
        assert_eq!(self.len(), other.len(), "hamming distance of unequal lengths");
        self.0.iter().zip(&other.0).filter(|(a, b)| a != b).count()
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.0 {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// String over the alphabet `[0..r-1]`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct IntString {
    values: Vec<u32>,
    alphabet: u32,
}

impl IntString {
    pub fn new(values: Vec<u32>, alphabet: u32) -> Result<Self> {
        if alphabet < 2 {
            return invalid(format!("alphabet size must be at least 2, got {alphabet}"));
        }
        if let Some(v) = values.iter().find(|&&v| v >= alphabet) {
            return invalid(format!("entry {v} outside [0..{}]", alphabet - 1));
        }
        Ok(Self { values, alphabet })
    }

    pub fn random(n: usize, alphabet: u32, rng: &mut RandomSource) -> Self {
        assert!(alphabet >= 2);
        Self {
            values: (0..n).map(|_| rng.below(alphabet as usize) as u32).collect(),
            alphabet,
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn alphabet(&self) -> u32 {
        self.alphabet
    }

    pub fn values(&self) -> &[u32] {
        &self.values
    }

    pub fn get(&self, i: usize) -> u32 {
        self.values[i]
    }

    pub(crate) fn set(&mut self, i: usize, v: u32) {
        debug_assert!(v < self.alphabet);
        self.values[i] = v;
    }
}

/// A genotype extended by the parameter value it carries (a mutation-rate
/// numerator, a real rate, or a velocity).
#[derive(Clone, Debug, PartialEq)]
pub struct TaggedIndividual<G> {
    pub genotype: G,
    pub tag: f64,
}

impl<G> TaggedIndividual<G> {
    pub fn new(genotype: G, tag: f64) -> Self {
        Self { genotype, tag }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_display() {
        let x = BitString::parse("0110").unwrap();
        assert_eq!(x.to_string(), "0110");
        assert_eq!(x.count_ones(), 2);
        assert!(BitString::parse("01a").is_err());
    }

    #[test]
    fn index_round_trip() {
        for code in 0..64 {
            assert_eq!(BitString::from_index(code, 6).to_index(), code);
        }
    }

    #[test]
    fn hamming_bounds() {
        let x = BitString::parse("0000").unwrap();
        assert_eq!(x.hamming(&x.complement()), 4);
        assert_eq!(x.hamming(&x), 0);
    }

    #[test]
    fn int_string_rejects_out_of_alphabet() {
        assert!(IntString::new(vec![0, 3], 3).is_err());
        assert!(IntString::new(vec![0, 1], 1).is_err());
        assert!(IntString::new(vec![0, 2], 3).is_ok());
    }
}
