//! Fixed-length bit strings and the boolean algebra the swarm updates are
//! written in.
//!
//! A [`BitString`] is packed into `u64` words. Bit `i` of the string lives in
//! word `i / 64` at bit offset `i % 64`; the unused high bits of the last word
//! are always zero so that word-level comparisons and popcounts stay exact.

use std::fmt;
use std::str::FromStr;

use rand::distributions::{Bernoulli, Distribution};
use rand::seq::index;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const WORD_BITS: usize = 64;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitString {
    words: Vec<u64>,
    len: usize,
}

fn word_count(len: usize) -> usize {
    len.div_ceil(WORD_BITS)
}

impl BitString {
    pub fn zeros(len: usize) -> Self {
        BitString {
            words: vec![0; word_count(len)],
            len,
        }
    }

    pub fn ones(len: usize) -> Self {
        let mut out = BitString {
            words: vec![u64::MAX; word_count(len)],
            len,
        };
        out.mask_tail();
        out
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        let mut out = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            out.set(i, b);
        }
        out
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// # Panics
    /// Panics if `i >= self.len()`.
    #[inline]
    pub fn get(&self, i: usize) -> bool {
        assert!(
            i < self.len,
            "bit index {i} out of range for length {}",
            self.len
        );
        (self.words[i / WORD_BITS] >> (i % WORD_BITS)) & 1 == 1
    }

    /// # Panics
    /// Panics if `i >= self.len()`.
    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        assert!(
            i < self.len,
            "bit index {i} out of range for length {}",
            self.len
        );
        let mask = 1u64 << (i % WORD_BITS);
        if value {
            self.words[i / WORD_BITS] |= mask;
        } else {
            self.words[i / WORD_BITS] &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        let v = self.get(i);
        self.set(i, !v);
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }

    pub fn and(&self, other: &BitString) -> Result<BitString> {
        self.zip_words(other, |a, b| a & b)
    }

    pub fn or(&self, other: &BitString) -> Result<BitString> {
        self.zip_words(other, |a, b| a | b)
    }

    pub fn xor(&self, other: &BitString) -> Result<BitString> {
        self.zip_words(other, |a, b| a ^ b)
    }

    pub fn not(&self) -> BitString {
        let mut out = BitString {
            words: self.words.iter().map(|w| !w).collect(),
            len: self.len,
        };
        out.mask_tail();
        out
    }

    /// Hex rendering, most significant nibble = bits 0..4 of the string.
    /// The last nibble is zero-padded on the right when the length is not a
    /// multiple of four.
    pub fn to_hex(&self) -> String {
        let mut out = String::with_capacity(self.len.div_ceil(4));
        for chunk in 0..self.len.div_ceil(4) {
            let mut nibble = 0u8;
            for k in 0..4 {
                let i = chunk * 4 + k;
                if i < self.len && self.get(i) {
                    nibble |= 8 >> k;
                }
            }
            out.push(char::from_digit(u32::from(nibble), 16).unwrap());
        }
        out
    }

    pub fn from_hex(hex: &str, len: usize) -> Result<BitString> {
        if hex.len() != len.div_ceil(4) {
            return Err(Error::LengthMismatch {
                expected: len.div_ceil(4),
                actual: hex.len(),
            });
        }
        let mut out = Self::zeros(len);
        for (chunk, c) in hex.chars().enumerate() {
            let nibble = c
                .to_digit(16)
                .ok_or_else(|| Error::invalid("hex", format!("invalid digit `{c}`")))?;
            for k in 0..4 {
                let i = chunk * 4 + k;
                let bit = nibble & (8 >> k) != 0;
                if i < len {
                    out.set(i, bit);
                } else if bit {
                    return Err(Error::invalid("hex", "non-zero padding bits"));
                }
            }
        }
        Ok(out)
    }

    /// Unsigned value of bits `start..start + width`, most significant first.
    pub(crate) fn slice_value(&self, start: usize, width: usize) -> u64 {
        debug_assert!(width <= 64);
        (start..start + width).fold(0u64, |acc, i| (acc << 1) | u64::from(self.get(i)))
    }

    fn zip_words(&self, other: &BitString, op: impl Fn(u64, u64) -> u64) -> Result<BitString> {
        if self.len != other.len {
            return Err(Error::LengthMismatch {
                expected: self.len,
                actual: other.len,
            });
        }
        Ok(BitString {
            words: self
                .words
                .iter()
                .zip(&other.words)
                .map(|(&a, &b)| op(a, b))
                .collect(),
            len: self.len,
        })
    }

    fn mask_tail(&mut self) {
        let rem = self.len % WORD_BITS;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.iter() {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitString({self})")
    }
}

impl FromStr for BitString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bits = s
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::invalid(
                    "bits",
                    format!("invalid character `{other}`"),
                )),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(BitString::from_bools(&bits))
    }
}

impl Serialize for BitString {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for BitString {
    fn deserialize<D: serde::Deserializer<'de>>(
        deserializer: D,
    ) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Probability that a generated bit is 1.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct BitProbability(f64);

impl BitProbability {
    pub fn new(p: f64) -> Result<Self> {
        if (0.0..=1.0).contains(&p) {
            Ok(BitProbability(p))
        } else {
            Err(Error::invalid(
                "probability",
                format!("{p} is outside [0, 1]"),
            ))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

impl TryFrom<f64> for BitProbability {
    type Error = Error;

    fn try_from(p: f64) -> Result<Self> {
        BitProbability::new(p)
    }
}

impl From<BitProbability> for f64 {
    fn from(p: BitProbability) -> f64 {
        p.0
    }
}

/// Draws `len` independent bits, each 1 with probability `p`.
pub fn random_bits<R: Rng + ?Sized>(len: usize, p: BitProbability, rng: &mut R) -> BitString {
    let p = p.value();
    if p == 0.0 {
        return BitString::zeros(len);
    }
    if p == 1.0 {
        return BitString::ones(len);
    }
    if p == 0.5 {
        let mut out = BitString {
            words: (0..word_count(len)).map(|_| rng.gen::<u64>()).collect(),
            len,
        };
        out.mask_tail();
        return out;
    }
    let dist = Bernoulli::new(p).expect("probability validated on construction");
    let mut out = BitString::zeros(len);
    for i in 0..len {
        if dist.sample(rng) {
            out.set(i, true);
        }
    }
    out
}

/// Resets randomly chosen 1-bits of `v` until at most `vmax` remain.
pub fn clamp_velocity<R: Rng + ?Sized>(v: &BitString, vmax: usize, rng: &mut R) -> BitString {
    let ones: Vec<usize> = (0..v.len()).filter(|&i| v.get(i)).collect();
    if ones.len() <= vmax {
        return v.clone();
    }
    let mut out = v.clone();
    for k in index::sample(rng, ones.len(), ones.len() - vmax) {
        out.set(ones[k], false);
    }
    out
}

/// How one real decision variable is laid out in a position bit string.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DecodingSpec {
    bits: usize,
    lower: f64,
    upper: f64,
}

impl DecodingSpec {
    pub fn new(bits: usize, lower: f64, upper: f64) -> Result<Self> {
        if bits == 0 || bits > 52 {
            return Err(Error::invalid(
                "bits_per_variable",
                format!("{bits} is outside 1..=52"),
            ));
        }
        if lower.is_nan() || upper.is_nan() || lower >= upper {
            return Err(Error::invalid(
                "bounds",
                format!("lower {lower} must be below upper {upper}"),
            ));
        }
        Ok(DecodingSpec { bits, lower, upper })
    }

    pub fn bits(&self) -> usize {
        self.bits
    }

    pub fn lower(&self) -> f64 {
        self.lower
    }

    pub fn upper(&self) -> f64 {
        self.upper
    }

    fn value_of(&self, u: u64) -> f64 {
        let max = ((1u64 << self.bits) - 1) as f64;
        self.lower + (u as f64 / max) * (self.upper - self.lower)
    }
}

/// Decodes consecutive most-significant-bit-first slices of `position` into
/// real values, one per spec, using plain positional binary.
pub fn decode_real(position: &BitString, specs: &[DecodingSpec]) -> Result<Vec<f64>> {
    let total: usize = specs.iter().map(|s| s.bits).sum();
    if position.len() != total {
        return Err(Error::LengthMismatch {
            expected: total,
            actual: position.len(),
        });
    }
    let mut start = 0;
    Ok(specs
        .iter()
        .map(|spec| {
            let u = position.slice_value(start, spec.bits);
            start += spec.bits;
            spec.value_of(u)
        })
        .collect())
}
