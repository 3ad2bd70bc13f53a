//! Nearest-codeword decoding of observed output strings.
//!
//! The reference decoder searches all 2^K messages for the one whose
//! ground-truth output string is closest in Hamming distance to the observed
//! string. Ties are broken toward the numerically smallest message (bits
//! read as a big-endian integer) and reported via a flag. A majority-vote
//! fast path is provided for repetition codes.

use crate::codes::{AttributeString, OutputCode, OutputString};
use crate::error::{Error, Result};

/// Outcome of decoding one observed output string.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DecodeResult {
    /// The chosen message.
    pub message: AttributeString,
    /// Hamming distance from the observed string to the chosen codeword.
    pub distance: usize,
    /// True when two or more messages achieved the minimum distance.
    pub tie: bool,
}

/// Reusable exhaustive nearest-codeword decoder for one code.
///
/// Precomputes the packed codebook for small K so that batch decoding (the
/// Monte Carlo harness) pays one XOR/popcount pass per codeword; above the
/// table threshold it walks the codewords in Gray-code order instead.
pub struct NearestDecoder {
    k: usize,
    n: usize,
    words_per_codeword: usize,
    columns: Vec<Vec<u64>>,
    // flattened codebook indexed by big-endian message value, when built
    codebook: Option<Vec<u64>>,
}

/// Largest K for which the full 2^K codebook is materialized.
const CODEBOOK_MAX_K: usize = 20;

impl NearestDecoder {
    pub fn new(code: &OutputCode) -> Self {
        let k = code.k();
        let n = code.n();
        let columns = code.column_codewords();
        let words_per_codeword = columns[0].len();
        let codebook = (k <= CODEBOOK_MAX_K).then(|| {
            let mut table = vec![0u64; (1usize << k) * words_per_codeword];
            let mut current = vec![0u64; words_per_codeword];
            // Gray-code walk: entry for message value i^(i>>1) differs from
            // the previous one by a single generator column.
            for step in 1u32..1u32 << k {
                let bit = step.trailing_zeros() as usize;
                let pos = k - 1 - bit;
                for (c, g) in current.iter_mut().zip(&columns[pos]) {
                    *c ^= g;
                }
                let value = (step ^ (step >> 1)) as usize;
                table[value * words_per_codeword..(value + 1) * words_per_codeword]
                    .copy_from_slice(&current);
            }
            table
        });
        NearestDecoder {
            k,
            n,
            words_per_codeword,
            columns,
            codebook,
        }
    }

    pub fn decode(&self, observed: &OutputString) -> Result<DecodeResult> {
        if observed.len() != self.n {
            return Err(Error::InvalidArgument(format!(
                "observed length {} does not match code N = {}",
                observed.len(),
                self.n
            )));
        }
        let obs = observed.inner().words();
        let (value, distance, tie) = match &self.codebook {
            Some(table) => self.scan_codebook(table, obs),
            None => self.scan_gray(obs),
        };
        Ok(DecodeResult {
            message: AttributeString::from_index(self.k, value)
                .expect("decoder message values are in range"),
            distance,
            tie,
        })
    }

    /// Decodes a packed observed word directly to the message value; the
    /// independent reference for the exact channel enumeration's BFS table.
    #[cfg(test)]
    pub(crate) fn decode_message_value(&self, obs: &[u64]) -> u32 {
        match &self.codebook {
            Some(table) => self.scan_codebook(table, obs).0,
            None => self.scan_gray(obs).0,
        }
    }

    fn scan_codebook(&self, table: &[u64], obs: &[u64]) -> (u32, usize, bool) {
        let mut best = usize::MAX;
        let mut arg = 0u32;
        let mut tie = false;
        if self.words_per_codeword == 1 {
            // single-word codewords dominate in practice; keep this loop tight
            let o = obs[0];
            for (value, &cw) in table.iter().enumerate() {
                let d = (cw ^ o).count_ones() as usize;
                if d < best {
                    best = d;
                    arg = value as u32;
                    tie = false;
                } else if d == best {
                    tie = true;
                }
            }
            return (arg, best, tie);
        }
        let w = self.words_per_codeword;
        for value in 0..1usize << self.k {
            let row = &table[value * w..(value + 1) * w];
            let d: usize = row
                .iter()
                .zip(obs)
                .map(|(c, o)| (c ^ o).count_ones() as usize)
                .sum();
            if d < best {
                best = d;
                arg = value as u32;
                tie = false;
            } else if d == best {
                tie = true;
            }
        }
        (arg, best, tie)
    }

    fn scan_gray(&self, obs: &[u64]) -> (u32, usize, bool) {
        let mut current = vec![0u64; self.words_per_codeword];
        let mut best: usize = current
            .iter()
            .zip(obs)
            .map(|(c, o)| (c ^ o).count_ones() as usize)
            .sum();
        let mut arg = 0u32;
        let mut tie = false;
        for step in 1u32..1u32 << self.k {
            let bit = step.trailing_zeros() as usize;
            let pos = self.k - 1 - bit;
            for (c, g) in current.iter_mut().zip(&self.columns[pos]) {
                *c ^= g;
            }
            let value = step ^ (step >> 1);
            let d: usize = current
                .iter()
                .zip(obs)
                .map(|(c, o)| (c ^ o).count_ones() as usize)
                .sum();
            // Gray order is not value order, so track the smallest value
            // among minimizers explicitly.
            if d < best || (d == best && value < arg) {
                tie = d == best;
                best = d;
                arg = value;
            } else if d == best {
                tie = true;
            }
        }
        (arg, best, tie)
    }
}

/// Decodes `observed` to the message whose codeword is Hamming-nearest.
/// Builds a fresh decoder; use [`NearestDecoder`] directly for batches.
pub fn decode_nearest(code: &OutputCode, observed: &OutputString) -> Result<DecodeResult> {
    NearestDecoder::new(code).decode(observed)
}

/// Per-bit majority vote across the `n_r` copies of a block-repeated
/// repetition code. Split votes (even `n_r`) resolve to 0 and set the tie
/// flag. For odd `n_r` this agrees with [`decode_nearest`] on the
/// corresponding repetition code.
pub fn decode_repetition_majority(
    k: usize,
    n_r: usize,
    observed: &OutputString,
) -> Result<DecodeResult> {
    if k == 0 || n_r == 0 {
        return Err(Error::InvalidArgument("K and n_r must be >= 1".into()));
    }
    if observed.len() != k * n_r {
        return Err(Error::InvalidArgument(format!(
            "observed length {} does not match K*n_r = {}",
            observed.len(),
            k * n_r
        )));
    }
    let mut bits = vec![0u8; k];
    let mut distance = 0usize;
    let mut tie = false;
    for (i, bit) in bits.iter_mut().enumerate() {
        let ones: usize = (0..n_r).map(|r| observed.bit(r * k + i) as usize).sum();
        let zeros = n_r - ones;
        if ones > zeros {
            *bit = 1;
            distance += zeros;
        } else {
            distance += ones;
            if ones == zeros {
                tie = true;
            }
        }
    }
    Ok(DecodeResult {
        message: AttributeString::from_bits(&bits)?,
        distance,
        tie,
    })
}

/// Number of positions at which two output strings differ.
pub fn hamming_distance(a: &OutputString, b: &OutputString) -> Result<usize> {
    if a.len() != b.len() {
        return Err(Error::InvalidArgument(format!(
            "output string lengths differ: {} vs {}",
            a.len(),
            b.len()
        )));
    }
    Ok(a.inner().distance(b.inner()))
}
