//! Binary linear output codes over attribute strings.
//!
//! An attribute string of length `K` is the message; an output code is an
//! ordered list of `N` parity checks, each a mod-2 sum over a subset of the
//! `K` attribute positions. Encoding evaluates every check, producing an
//! output string of length `N`. The code families used throughout this crate
//! (identity, repetition, pairwise parity, Hamming(7,4)) are constructed
//! here.

use crate::bits::Bits;
use crate::error::{Error, Result};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;
use std::str::FromStr;

/// Hard cap on the number of attributes so that exhaustive codebook
/// enumeration (2^K) stays tractable everywhere in the crate.
pub const MAX_ATTRIBUTES: usize = 24;

/// A length-K string of binary attribute states; the message an instance
/// carries.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct AttributeString(Bits);

impl AttributeString {
    /// Builds a string from 0/1 symbols. Length must be in `1..=24`.
    pub fn from_bits(bits: &[u8]) -> Result<Self> {
        check_message_len(bits.len())?;
        let mut inner = Bits::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            match b {
                0 => {}
                1 => inner.set(i, true),
                other => {
                    return Err(Error::InvalidArgument(format!(
                        "attribute symbol at position {i} is {other}, expected 0 or 1"
                    )))
                }
            }
        }
        Ok(AttributeString(inner))
    }

    /// Builds the all-zero message of length `k`.
    pub fn zeros(k: usize) -> Result<Self> {
        check_message_len(k)?;
        Ok(AttributeString(Bits::zeros(k)))
    }

    /// Builds a message from its big-endian integer value: bit 0 of the
    /// string is the most significant bit of `index`.
    pub fn from_index(k: usize, index: u32) -> Result<Self> {
        check_message_len(k)?;
        if k < 32 && index >> k != 0 {
            return Err(Error::InvalidArgument(format!(
                "index {index} does not fit in {k} bits"
            )));
        }
        let mut inner = Bits::zeros(k);
        for i in 0..k {
            if index >> (k - 1 - i) & 1 == 1 {
                inner.set(i, true);
            }
        }
        Ok(AttributeString(inner))
    }

    /// The big-endian integer value of the string (bit 0 most significant).
    pub fn to_index(&self) -> u32 {
        let k = self.len();
        let mut v = 0u32;
        for i in 0..k {
            if self.0.get(i) {
                v |= 1 << (k - 1 - i);
            }
        }
        v
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.len() == 0
    }

    /// State of attribute `i` (0 or 1).
    pub fn bit(&self, i: usize) -> u8 {
        u8::from(self.0.get(i))
    }

    /// Bitwise XOR; both strings must have the same length.
    pub fn xor(&self, other: &AttributeString) -> Result<AttributeString> {
        if self.len() != other.len() {
            return Err(Error::InvalidArgument(format!(
                "attribute string lengths differ: {} vs {}",
                self.len(),
                other.len()
            )));
        }
        let mut out = self.0.clone();
        out.xor_in_place(&other.0);
        Ok(AttributeString(out))
    }

    pub(crate) fn word0(&self) -> u64 {
        self.0.word0()
    }
}

impl fmt::Display for AttributeString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl FromStr for AttributeString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bits = parse_bit_chars(s)?;
        AttributeString::from_bits(&bits)
    }
}

/// The length-N string produced by evaluating every encoding function, or
/// observed at the output of the classifier ensemble.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct OutputString(Bits);

impl OutputString {
    pub fn from_bits(bits: &[u8]) -> Result<Self> {
        if bits.is_empty() {
            return Err(Error::InvalidArgument(
                "output string must be non-empty".into(),
            ));
        }
        let mut inner = Bits::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            match b {
                0 => {}
                1 => inner.set(i, true),
                other => {
                    return Err(Error::InvalidArgument(format!(
                        "output symbol at position {i} is {other}, expected 0 or 1"
                    )))
                }
            }
        }
        Ok(OutputString(inner))
    }

    pub fn zeros(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument(
                "output string must be non-empty".into(),
            ));
        }
        Ok(OutputString(Bits::zeros(n)))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.len() == 0
    }

    pub fn bit(&self, i: usize) -> u8 {
        u8::from(self.0.get(i))
    }

    /// Hamming weight of the string.
    pub fn weight(&self) -> usize {
        self.0.count_ones()
    }

    pub(crate) fn inner(&self) -> &Bits {
        &self.0
    }

    pub(crate) fn inner_mut(&mut self) -> &mut Bits {
        &mut self.0
    }
}

impl fmt::Display for OutputString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl FromStr for OutputString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bits = parse_bit_chars(s)?;
        OutputString::from_bits(&bits)
    }
}

fn parse_bit_chars(s: &str) -> Result<Vec<u8>> {
    s.chars()
        .map(|c| match c {
            '0' => Ok(0),
            '1' => Ok(1),
            other => Err(Error::InvalidArgument(format!(
                "unexpected character '{other}' in bit string"
            ))),
        })
        .collect()
}

/// One encoding function: a mod-2 sum over a set of attribute positions.
/// A singleton support is a primitive attribute; larger supports are derived
/// (parity) attributes.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct ParityCheck {
    mask: u32,
}

impl ParityCheck {
    /// Builds a check from distinct attribute indices. Must be non-empty and
    /// all indices below [`MAX_ATTRIBUTES`].
    pub fn new(support: &[usize]) -> Result<Self> {
        if support.is_empty() {
            return Err(Error::InvalidArgument(
                "parity check support must be non-empty".into(),
            ));
        }
        let mut mask = 0u32;
        for &i in support {
            if i >= MAX_ATTRIBUTES {
                return Err(Error::InvalidArgument(format!(
                    "attribute index {i} out of range (max {})",
                    MAX_ATTRIBUTES - 1
                )));
            }
            if mask >> i & 1 == 1 {
                return Err(Error::InvalidArgument(format!(
                    "duplicate attribute index {i} in parity check"
                )));
            }
            mask |= 1 << i;
        }
        Ok(ParityCheck { mask })
    }

    /// Sorted attribute indices in the support.
    pub fn support(&self) -> Vec<usize> {
        (0..MAX_ATTRIBUTES)
            .filter(|&i| self.mask >> i & 1 == 1)
            .collect()
    }

    pub fn support_size(&self) -> usize {
        self.mask.count_ones() as usize
    }

    /// True when the check reads a single primitive attribute.
    pub fn is_primitive(&self) -> bool {
        self.support_size() == 1
    }

    pub(crate) fn mask(&self) -> u32 {
        self.mask
    }

    fn max_index(&self) -> usize {
        31 - self.mask.leading_zeros() as usize
    }
}

/// An ordered list of `N` parity checks over `K` attribute positions.
///
/// Construction validates that the induced N x K generator matrix has full
/// rank K over GF(2), so encoding is injective and decoding is well-posed.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct OutputCode {
    name: String,
    k: usize,
    checks: Vec<ParityCheck>,
}

impl OutputCode {
    pub fn new(name: impl Into<String>, k: usize, checks: Vec<ParityCheck>) -> Result<Self> {
        check_message_len(k)?;
        if checks.is_empty() {
            return Err(Error::InvalidArgument(
                "code must have at least one check".into(),
            ));
        }
        for (j, check) in checks.iter().enumerate() {
            if check.max_index() >= k {
                return Err(Error::InvalidArgument(format!(
                    "check {j} references attribute {} but K = {k}",
                    check.max_index()
                )));
            }
        }
        let rank = gf2_rank(checks.iter().map(|c| c.mask()));
        if rank != k {
            return Err(Error::InvalidArgument(format!(
                "checks span rank {rank} < K = {k}; encoding would not be injective"
            )));
        }
        Ok(OutputCode {
            name: name.into(),
            k,
            checks,
        })
    }

    /// The identity code: N = K, check i = {i}.
    pub fn identity(k: usize) -> Result<Self> {
        let checks = (0..k).map(|i| ParityCheck { mask: 1 << i }).collect();
        OutputCode::new(format!("identity-{k}"), k, checks)
    }

    /// The repetition code: `n_r` full copies of the primitive block, so
    /// N = K * n_r. Block-repeated layout, matching an ensemble of `n_r`
    /// separate K-output primitive classifiers.
    pub fn repetition(k: usize, n_r: usize) -> Result<Self> {
        if n_r == 0 {
            return Err(Error::InvalidArgument(
                "repetition count must be >= 1".into(),
            ));
        }
        let mut checks = Vec::with_capacity(k * n_r);
        for _ in 0..n_r {
            for i in 0..k {
                checks.push(ParityCheck { mask: 1 << i });
            }
        }
        OutputCode::new(format!("repetition-{k}x{n_r}"), k, checks)
    }

    /// The pairwise-parity code: the K primitive checks followed by all
    /// two-element parities {i, j}, i < j, in lexicographic order.
    /// N = K + K(K-1)/2.
    pub fn pairwise_parity(k: usize) -> Result<Self> {
        if k < 2 {
            return Err(Error::InvalidArgument(
                "pairwise parity code needs K >= 2".into(),
            ));
        }
        let mut checks: Vec<ParityCheck> = (0..k).map(|i| ParityCheck { mask: 1 << i }).collect();
        for i in 0..k {
            for j in i + 1..k {
                checks.push(ParityCheck {
                    mask: 1 << i | 1 << j,
                });
            }
        }
        OutputCode::new(format!("pairwise-parity-{k}"), k, checks)
    }

    /// The (7,4) Hamming code in systematic form: four primitive checks
    /// followed by the three standard parities.
    pub fn hamming_7_4() -> Self {
        let supports: [&[usize]; 7] = [&[0], &[1], &[2], &[3], &[0, 1, 3], &[0, 2, 3], &[1, 2, 3]];
        let checks = supports
            .iter()
            .map(|s| ParityCheck::new(s).expect("static supports are valid"))
            .collect();
        OutputCode::new("hamming-7-4", 4, checks).expect("hamming generator has full rank")
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.checks.len()
    }

    /// Code rate R = K/N.
    pub fn rate(&self) -> f64 {
        self.k as f64 / self.n() as f64
    }

    pub fn checks(&self) -> &[ParityCheck] {
        &self.checks
    }

    /// Evaluates every check on `x`: output bit i is the mod-2 sum of `x`
    /// over check i's support. Linear over GF(2).
    pub fn encode(&self, x: &AttributeString) -> Result<OutputString> {
        if x.len() != self.k {
            return Err(Error::InvalidArgument(format!(
                "message length {} does not match code K = {}",
                x.len(),
                self.k
            )));
        }
        let word = x.word0() as u32;
        let mut out = Bits::zeros(self.n());
        for (j, check) in self.checks.iter().enumerate() {
            if (word & check.mask()).count_ones() & 1 == 1 {
                out.set(j, true);
            }
        }
        Ok(OutputString(out))
    }

    /// Keeps the first `n` checks. The prefix must still have full rank K
    /// (it always does for the families built here once n >= K, since the
    /// primitive block comes first).
    pub fn truncate(&self, n: usize, name: impl Into<String>) -> Result<Self> {
        if n == 0 || n > self.n() {
            return Err(Error::InvalidArgument(format!(
                "truncation length {n} out of range 1..={}",
                self.n()
            )));
        }
        OutputCode::new(name, self.k, self.checks[..n].to_vec())
    }

    /// Minimum Hamming distance between distinct codewords. By linearity
    /// this is the minimum weight over the 2^K - 1 nonzero messages; the
    /// construction cap K <= 24 keeps the enumeration tractable.
    pub fn min_distance(&self) -> usize {
        let cols = self.column_codewords();
        let words = cols[0].len();
        let mut current = vec![0u64; words];
        let mut best = usize::MAX;
        // Gray-code walk over all nonzero messages: one column XOR per step.
        for step in 1u32..1u32 << self.k {
            let bit = step.trailing_zeros() as usize;
            let pos = self.k - 1 - bit;
            for (c, g) in current.iter_mut().zip(&cols[pos]) {
                *c ^= g;
            }
            let weight: usize = current.iter().map(|w| w.count_ones() as usize).sum();
            best = best.min(weight);
        }
        best
    }

    /// Codewords of the unit messages, one per attribute position; the
    /// generator matrix columns, packed into words.
    pub(crate) fn column_codewords(&self) -> Vec<Vec<u64>> {
        (0..self.k)
            .map(|pos| {
                let mut bits = Bits::zeros(self.n());
                for (j, check) in self.checks.iter().enumerate() {
                    if check.mask() >> pos & 1 == 1 {
                        bits.set(j, true);
                    }
                }
                bits.words().to_vec()
            })
            .collect()
    }
}

fn check_message_len(k: usize) -> Result<()> {
    if k == 0 {
        return Err(Error::InvalidArgument(
            "attribute count K must be >= 1".into(),
        ));
    }
    if k > MAX_ATTRIBUTES {
        return Err(Error::Capacity(format!(
            "K = {k} exceeds the maximum of {MAX_ATTRIBUTES} attributes"
        )));
    }
    Ok(())
}

/// Rank over GF(2) of the row space spanned by `rows`.
fn gf2_rank(rows: impl Iterator<Item = u32>) -> usize {
    let mut basis: Vec<u32> = Vec::new();
    for mut row in rows {
        for &b in &basis {
            row = row.min(row ^ b);
        }
        if row != 0 {
            basis.push(row);
            basis.sort_unstable_by(|a, b| b.cmp(a));
        }
    }
    basis.len()
}

// Serialized form: {"name": ..., "K": ..., "checks": [[indices...], ...]}.
#[derive(Serialize, Deserialize)]
struct CodeDoc {
    name: String,
    #[serde(rename = "K")]
    k: usize,
    checks: Vec<Vec<usize>>,
}

impl Serialize for OutputCode {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        CodeDoc {
            name: self.name.clone(),
            k: self.k,
            checks: self.checks.iter().map(|c| c.support()).collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for OutputCode {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let doc = CodeDoc::deserialize(deserializer)?;
        let checks = doc
            .checks
            .iter()
            .map(|s| ParityCheck::new(s))
            .collect::<Result<Vec<_>>>()
            .map_err(serde::de::Error::custom)?;
        OutputCode::new(doc.name, doc.k, checks).map_err(serde::de::Error::custom)
    }
}
