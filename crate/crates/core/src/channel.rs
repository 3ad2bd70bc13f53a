//! Classifier ensembles as parallel binary asymmetric channels.
//!
//! One trained binary classifier is modeled as a binary asymmetric channel:
//! an input-0 survives with probability `p`, an input-1 with probability
//! `q`. An ensemble is one independent channel per output bit, with an
//! optional shared-flip mixture knob that correlates the errors. Block and
//! bit error behavior of a coded ensemble can be computed exactly (small N)
//! or estimated by seeded, thread-count-independent Monte Carlo.

use crate::codes::{AttributeString, OutputCode, OutputString};
use crate::decoder::NearestDecoder;
use crate::error::{Error, Result};
use crate::numeric::{binom_tail_upper, linear_fit, KahanSum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rayon::prelude::*;

/// A binary asymmetric channel: `p` is the probability that input 0 comes
/// out as 0, `q` the probability that input 1 comes out as 1. `p = q = 1-e`
/// is the binary symmetric channel with crossover `e`.
#[derive(Clone, Copy, PartialEq, Debug)]
pub struct BinaryAsymmetricChannel {
    p: f64,
    q: f64,
}

impl BinaryAsymmetricChannel {
    pub fn new(p: f64, q: f64) -> Result<Self> {
        for v in [p, q] {
            if !v.is_finite() || !(0.0..=1.0).contains(&v) {
                return Err(Error::InvalidArgument(format!(
                    "channel probability {v} must lie in [0,1]"
                )));
            }
        }
        Ok(BinaryAsymmetricChannel { p, q })
    }

    /// Binary symmetric channel with crossover probability `epsilon`.
    pub fn symmetric(epsilon: f64) -> Result<Self> {
        BinaryAsymmetricChannel::new(1.0 - epsilon, 1.0 - epsilon)
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    /// Probability the channel flips the given input bit.
    pub fn flip_prob(&self, input: bool) -> f64 {
        if input {
            1.0 - self.q
        } else {
            1.0 - self.p
        }
    }
}

/// One channel per output bit. Channels are independent unless the
/// shared-flip mixture probability is raised above 0, in which case a trial
/// is, with that probability, driven by a single uniform draw shared by all
/// channels (maximally correlated errors, same per-bit marginals).
#[derive(Clone, PartialEq, Debug)]
pub struct ChannelEnsemble {
    channels: Vec<BinaryAsymmetricChannel>,
    shared_flip_prob: f64,
}

impl ChannelEnsemble {
    pub fn new(channels: Vec<BinaryAsymmetricChannel>) -> Result<Self> {
        if channels.is_empty() {
            return Err(Error::InvalidArgument(
                "ensemble must have at least one channel".into(),
            ));
        }
        Ok(ChannelEnsemble {
            channels,
            shared_flip_prob: 0.0,
        })
    }

    /// `n` copies of the same channel.
    pub fn uniform(n: usize, channel: BinaryAsymmetricChannel) -> Result<Self> {
        ChannelEnsemble::new(vec![channel; n])
    }

    /// `n` binary symmetric channels with crossover `epsilon`.
    pub fn symmetric(n: usize, epsilon: f64) -> Result<Self> {
        ChannelEnsemble::uniform(n, BinaryAsymmetricChannel::symmetric(epsilon)?)
    }

    /// Sets the shared-flip mixture probability.
    pub fn with_shared_flip(mut self, rho: f64) -> Result<Self> {
        if !rho.is_finite() || !(0.0..=1.0).contains(&rho) {
            return Err(Error::InvalidArgument(format!(
                "shared flip probability {rho} must lie in [0,1]"
            )));
        }
        self.shared_flip_prob = rho;
        Ok(self)
    }

    pub fn len(&self) -> usize {
        self.channels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.channels.is_empty()
    }

    pub fn channels(&self) -> &[BinaryAsymmetricChannel] {
        &self.channels
    }

    pub fn shared_flip_prob(&self) -> f64 {
        self.shared_flip_prob
    }

    /// Passes each bit of `codeword` through its channel.
    pub fn transmit<R: Rng + ?Sized>(
        &self,
        codeword: &OutputString,
        rng: &mut R,
    ) -> Result<OutputString> {
        if codeword.len() != self.channels.len() {
            return Err(Error::InvalidArgument(format!(
                "codeword length {} does not match ensemble size {}",
                codeword.len(),
                self.channels.len()
            )));
        }
        let mut out = codeword.clone();
        if self.shared_flip_prob > 0.0 && rng.random_bool(self.shared_flip_prob) {
            let u: f64 = rng.random();
            for (i, ch) in self.channels.iter().enumerate() {
                if u < ch.flip_prob(codeword.bit(i) == 1) {
                    out.inner_mut().flip(i);
                }
            }
        } else {
            for (i, ch) in self.channels.iter().enumerate() {
                if rng.random_bool(ch.flip_prob(codeword.bit(i) == 1)) {
                    out.inner_mut().flip(i);
                }
            }
        }
        Ok(out)
    }
}

/// Distribution over messages fed into the encoder.
#[derive(Clone, PartialEq, Debug)]
pub enum MessageDistribution {
    /// Each attribute i.i.d. Bernoulli(1/2).
    UniformIndependent,
    /// Explicit (message, probability) pairs; probabilities sum to 1.
    Explicit(Vec<(AttributeString, f64)>),
}

impl MessageDistribution {
    /// Validated explicit distribution.
    pub fn explicit(entries: Vec<(AttributeString, f64)>) -> Result<Self> {
        let dist = MessageDistribution::Explicit(entries);
        dist.validate(None)?;
        Ok(dist)
    }

    fn validate(&self, k: Option<usize>) -> Result<()> {
        match self {
            MessageDistribution::UniformIndependent => Ok(()),
            MessageDistribution::Explicit(entries) => {
                if entries.is_empty() {
                    return Err(Error::InvalidArgument(
                        "explicit message distribution must be non-empty".into(),
                    ));
                }
                let len0 = entries[0].0.len();
                let mut total = 0.0;
                for (m, w) in entries {
                    if m.len() != len0 {
                        return Err(Error::InvalidArgument(
                            "explicit messages must all have the same length".into(),
                        ));
                    }
                    if !w.is_finite() || *w < 0.0 {
                        return Err(Error::InvalidArgument(format!(
                            "message probability {w} is not a probability"
                        )));
                    }
                    total += w;
                }
                if (total - 1.0).abs() > 1e-9 {
                    return Err(Error::InvalidArgument(format!(
                        "message probabilities sum to {total}, expected 1"
                    )));
                }
                if let Some(k) = k {
                    if len0 != k {
                        return Err(Error::InvalidArgument(format!(
                            "explicit messages have length {len0} but code K = {k}"
                        )));
                    }
                }
                Ok(())
            }
        }
    }

    fn sample<R: Rng + ?Sized>(&self, k: usize, rng: &mut R) -> AttributeString {
        match self {
            MessageDistribution::UniformIndependent => {
                let mask = (1u32 << k) - 1;
                AttributeString::from_index(k, rng.random::<u32>() & mask)
                    .expect("masked index is in range")
            }
            MessageDistribution::Explicit(entries) => {
                let u: f64 = rng.random();
                let mut acc = 0.0;
                for (m, w) in entries {
                    acc += w;
                    if u < acc {
                        return m.clone();
                    }
                }
                entries.last().expect("validated non-empty").0.clone()
            }
        }
    }

    /// The (message, weight) support, enumerated for exact computations.
    fn support(&self, k: usize) -> Vec<(AttributeString, f64)> {
        match self {
            MessageDistribution::UniformIndependent => {
                let w = 1.0 / (1u64 << k) as f64;
                (0..1u32 << k)
                    .map(|v| (AttributeString::from_index(k, v).expect("in range"), w))
                    .collect()
            }
            MessageDistribution::Explicit(entries) => entries.clone(),
        }
    }
}

/// Configuration of one seeded simulation.
#[derive(Clone, PartialEq, Debug)]
pub struct SimConfig {
    pub trials: u64,
    pub seed: u64,
    pub message_distribution: MessageDistribution,
}

impl SimConfig {
    /// Uniform-independent message distribution.
    pub fn new(trials: u64, seed: u64) -> Self {
        SimConfig {
            trials,
            seed,
            message_distribution: MessageDistribution::UniformIndependent,
        }
    }

    pub fn with_distribution(mut self, dist: MessageDistribution) -> Self {
        self.message_distribution = dist;
        self
    }
}

/// Monte Carlo block error estimate with its binomial standard error.
#[derive(Clone, Copy, PartialEq, Debug)]
pub struct MonteCarloEstimate {
    pub estimate: f64,
    pub std_error: f64,
    pub trials: u64,
    pub errors: u64,
}

/// Full per-run summary produced by the simulation engine.
#[derive(Clone, PartialEq, Debug)]
pub struct SimSummary {
    pub trials: u64,
    pub block_errors: u64,
    pub block_error: f64,
    pub std_error: f64,
    /// Mean Hamming distance between the decoded and true attribute strings.
    pub mean_hamming_distance: f64,
    /// Per-attribute decoded accuracy.
    pub bit_accuracy: Vec<f64>,
}

#[derive(Clone)]
struct TrialStats {
    block_errors: u64,
    hamming_sum: u64,
    bit_correct: Vec<u64>,
}

impl TrialStats {
    fn new(k: usize) -> Self {
        TrialStats {
            block_errors: 0,
            hamming_sum: 0,
            bit_correct: vec![0; k],
        }
    }

    fn merge(mut self, other: TrialStats) -> TrialStats {
        self.block_errors += other.block_errors;
        self.hamming_sum += other.hamming_sum;
        for (a, b) in self.bit_correct.iter_mut().zip(&other.bit_correct) {
            *a += b;
        }
        self
    }
}

/// Runs the seeded trial loop. Trials take counter-derived RNG substreams
/// from the master seed, so the result is a pure function of the config and
/// independent of how rayon schedules the work.
pub fn simulate_summary(
    code: &OutputCode,
    ensemble: &ChannelEnsemble,
    config: &SimConfig,
) -> Result<SimSummary> {
    if ensemble.len() != code.n() {
        return Err(Error::InvalidArgument(format!(
            "ensemble size {} does not match code N = {}",
            ensemble.len(),
            code.n()
        )));
    }
    if config.trials == 0 {
        return Err(Error::InvalidArgument("trials must be >= 1".into()));
    }
    config.message_distribution.validate(Some(code.k()))?;

    let k = code.k();
    let decoder = NearestDecoder::new(code);
    let base = ChaCha12Rng::seed_from_u64(config.seed);
    let stats = (0..config.trials as usize)
        .into_par_iter()
        .with_min_len(1024)
        .fold(
            || TrialStats::new(k),
            |mut acc, trial| {
                let mut rng = base.clone();
                rng.set_stream(trial as u64);
                let message = config.message_distribution.sample(k, &mut rng);
                let codeword = code.encode(&message).expect("validated lengths");
                let received = ensemble
                    .transmit(&codeword, &mut rng)
                    .expect("validated lengths");
                let decoded = decoder
                    .decode(&received)
                    .expect("validated lengths")
                    .message;
                let wrong_bits = message.word0() ^ decoded.word0();
                if wrong_bits != 0 {
                    acc.block_errors += 1;
                    acc.hamming_sum += u64::from(wrong_bits.count_ones());
                }
                for (i, correct) in acc.bit_correct.iter_mut().enumerate() {
                    *correct += 1 - (wrong_bits >> i & 1);
                }
                acc
            },
        )
        .reduce(|| TrialStats::new(k), TrialStats::merge);

    let trials = config.trials as f64;
    let p = stats.block_errors as f64 / trials;
    Ok(SimSummary {
        trials: config.trials,
        block_errors: stats.block_errors,
        block_error: p,
        std_error: (p * (1.0 - p) / trials).sqrt(),
        mean_hamming_distance: stats.hamming_sum as f64 / trials,
        bit_accuracy: stats
            .bit_correct
            .iter()
            .map(|&c| c as f64 / trials)
            .collect(),
    })
}

/// Unbiased Monte Carlo estimate of the block error probability.
pub fn block_error_monte_carlo(
    code: &OutputCode,
    ensemble: &ChannelEnsemble,
    config: &SimConfig,
) -> Result<MonteCarloEstimate> {
    let summary = simulate_summary(code, ensemble, config)?;
    Ok(MonteCarloEstimate {
        estimate: summary.block_error,
        std_error: summary.std_error,
        trials: summary.trials,
        errors: summary.block_errors,
    })
}

/// Fraction of trials in which each decoded attribute equals the true one.
pub fn per_bit_accuracy(
    code: &OutputCode,
    ensemble: &ChannelEnsemble,
    config: &SimConfig,
) -> Result<Vec<f64>> {
    Ok(simulate_summary(code, ensemble, config)?.bit_accuracy)
}

/// Caps for the exact enumeration: 2^N noise patterns and 2^K messages.
const EXACT_MAX_N: usize = 20;
const EXACT_MAX_K: usize = 12;

/// Exact block error probability P(decoded message != message), averaged
/// over the message distribution, by enumerating all 2^N channel
/// realizations analytically.
pub fn block_error_exact(
    code: &OutputCode,
    ensemble: &ChannelEnsemble,
    distribution: &MessageDistribution,
) -> Result<f64> {
    if ensemble.len() != code.n() {
        return Err(Error::InvalidArgument(format!(
            "ensemble size {} does not match code N = {}",
            ensemble.len(),
            code.n()
        )));
    }
    if code.n() > EXACT_MAX_N {
        return Err(Error::Capacity(format!(
            "exact enumeration supports N <= {EXACT_MAX_N}, code has N = {}; use Monte Carlo",
            code.n()
        )));
    }
    if code.k() > EXACT_MAX_K {
        return Err(Error::Capacity(format!(
            "exact enumeration supports K <= {EXACT_MAX_K}, code has K = {}; use Monte Carlo",
            code.k()
        )));
    }
    distribution.validate(Some(code.k()))?;

    let n = code.n();
    let decode_table = build_decode_table(code);
    let support = distribution.support(code.k());
    let rho = ensemble.shared_flip_prob();

    let uniform_channels = ensemble.channels().windows(2).all(|w| w[0] == w[1]);

    let total: f64 = support
        .par_iter()
        .map_init(
            // per-worker scratch for the 2^N pattern probabilities; the
            // doubling fill overwrites every slot it later reads, so the
            // buffer never needs re-zeroing
            || vec![0.0f64; if uniform_channels { 0 } else { 1 << n }],
            |scratch, (message, weight)| {
                if *weight == 0.0 {
                    return 0.0;
                }
                let value = message.to_index();
                let codeword = code.encode(message).expect("validated lengths");
                let cw = codeword.inner().word0();
                let flip_probs: Vec<f64> = ensemble
                    .channels()
                    .iter()
                    .enumerate()
                    .map(|(i, ch)| ch.flip_prob(codeword.bit(i) == 1))
                    .collect();

                let independent = if uniform_channels {
                    independent_error_uniform(&decode_table, cw, value, &ensemble.channels()[0], n)
                } else {
                    independent_error(&decode_table, cw, value, &flip_probs, scratch)
                };
                let err = if rho > 0.0 {
                    let shared = shared_error(&decode_table, cw, value, &flip_probs);
                    (1.0 - rho) * independent + rho * shared
                } else {
                    independent
                };
                weight * err
            },
        )
        .sum();
    Ok(total)
}

/// Independent-flip error probability when all channels are identical:
/// P(e | cw) factors into (number of flipped zeros, number of flipped ones),
/// so two power tables replace the 2^N probability fill.
fn independent_error_uniform(
    decode_table: &[u32],
    cw: u64,
    message_value: u32,
    channel: &BinaryAsymmetricChannel,
    n: usize,
) -> f64 {
    let ones = cw.count_ones() as usize;
    let zeros = n - ones;
    let f0 = channel.flip_prob(false);
    let f1 = channel.flip_prob(true);
    // prob_zeros[a] = (1-f0)^(zeros-a) * f0^a, similarly for the ones block
    let mut prob_zeros = vec![0.0f64; zeros + 1];
    let mut prob_ones = vec![0.0f64; ones + 1];
    for (a, slot) in prob_zeros.iter_mut().enumerate() {
        *slot = (1.0 - f0).powi((zeros - a) as i32) * f0.powi(a as i32);
    }
    for (b, slot) in prob_ones.iter_mut().enumerate() {
        *slot = (1.0 - f1).powi((ones - b) as i32) * f1.powi(b as i32);
    }
    let mut acc = KahanSum::default();
    for e in 0..(1u64 << n) {
        if decode_table[(cw ^ e) as usize] != message_value {
            let b = (e & cw).count_ones() as usize;
            let a = e.count_ones() as usize - b;
            let prob = prob_zeros[a] * prob_ones[b];
            if prob > 0.0 {
                acc.add(prob);
            }
        }
    }
    acc.value()
}

/// Nearest-message table for every received word, by multi-source BFS over
/// the n-cube from the 2^K codewords: O(2^N * N) rather than one codebook
/// scan per word. Entry y holds the smallest message value attaining the
/// minimum distance, matching the nearest decoder's tie break.
fn build_decode_table(code: &OutputCode) -> Vec<u32> {
    let n = code.n();
    let k = code.k();
    let size = 1usize << n;
    let mut dist = vec![u8::MAX; size];
    let mut best = vec![u32::MAX; size];
    let mut frontier: Vec<usize> = Vec::with_capacity(1 << k);
    for v in 0..1u32 << k {
        let m = AttributeString::from_index(k, v).expect("k within cap");
        let cw = code.encode(&m).expect("lengths match").inner().word0() as usize;
        dist[cw] = 0;
        best[cw] = v;
        frontier.push(cw);
    }
    let mut layer = 0u8;
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for &y in &frontier {
            for bit in 0..n {
                let z = y ^ (1 << bit);
                if dist[z] == u8::MAX {
                    dist[z] = layer + 1;
                    best[z] = best[y];
                    next.push(z);
                } else if dist[z] == layer + 1 && best[y] < best[z] {
                    // another minimum-distance codeword; keep the smaller
                    // message, the same tie break the scan decoder applies
                    best[z] = best[y];
                }
            }
        }
        frontier = next;
        layer += 1;
    }
    best
}

/// Error probability under fully independent per-bit flips: sums the
/// probabilities of all 2^N flip patterns whose received word decodes wrong.
/// `pattern_probs` is scratch of length 2^N.
fn independent_error(
    decode_table: &[u32],
    cw: u64,
    message_value: u32,
    flip_probs: &[f64],
    pattern_probs: &mut [f64],
) -> f64 {
    // pattern_probs[e] = product over bits of flip/stay probabilities
    pattern_probs[0] = 1.0;
    let mut size = 1usize;
    for &f in flip_probs {
        for idx in 0..size {
            let base = pattern_probs[idx];
            pattern_probs[idx] = base * (1.0 - f);
            pattern_probs[idx + size] = base * f;
        }
        size <<= 1;
    }
    let mut acc = KahanSum::default();
    for (e, &prob) in pattern_probs.iter().enumerate() {
        if prob > 0.0 && decode_table[cw as usize ^ e] != message_value {
            acc.add(prob);
        }
    }
    acc.value()
}

/// Error probability in shared-flip mode: one uniform u drives all bits
/// (bit i flips iff u < flip_prob[i]), so the flip set is piecewise
/// constant in u with breakpoints at the distinct flip probabilities.
fn shared_error(decode_table: &[u32], cw: u64, message_value: u32, flip_probs: &[f64]) -> f64 {
    let mut cuts: Vec<f64> = flip_probs.to_vec();
    cuts.push(0.0);
    cuts.push(1.0);
    cuts.sort_by(|a, b| a.partial_cmp(b).expect("finite probabilities"));
    cuts.dedup();
    let mut err = 0.0;
    for w in cuts.windows(2) {
        let (a, b) = (w[0], w[1]);
        if b <= a {
            continue;
        }
        let mid = (a + b) / 2.0;
        let mut pattern = 0usize;
        for (i, &f) in flip_probs.iter().enumerate() {
            if mid < f {
                pattern |= 1 << i;
            }
        }
        if decode_table[cw as usize ^ pattern] != message_value {
            err += b - a;
        }
    }
    err
}

/// Exact block error of the repetition code under per-bit majority vote,
/// valid for any K and odd n_r: each bit fails independently with a
/// binomial-tail probability depending on its value.
pub fn repetition_majority_error(
    k: usize,
    channel: &BinaryAsymmetricChannel,
    n_r: usize,
    distribution: &MessageDistribution,
) -> Result<f64> {
    if k == 0 {
        return Err(Error::InvalidArgument("K must be >= 1".into()));
    }
    if n_r == 0 || n_r.is_multiple_of(2) {
        return Err(Error::InvalidArgument(format!(
            "majority analysis requires odd n_r >= 1, got {n_r}"
        )));
    }
    distribution.validate(Some(k))?;
    let threshold = (n_r as i64 + 1) / 2;
    let err0 = binom_tail_upper(channel.flip_prob(false), n_r as u64, threshold);
    let err1 = binom_tail_upper(channel.flip_prob(true), n_r as u64, threshold);
    match distribution {
        MessageDistribution::UniformIndependent => {
            Ok(1.0 - (1.0 - (err0 + err1) / 2.0).powi(k as i32))
        }
        MessageDistribution::Explicit(entries) => {
            let mut total = 0.0;
            for (m, w) in entries {
                let mut correct = 1.0;
                for i in 0..k {
                    correct *= 1.0 - if m.bit(i) == 1 { err1 } else { err0 };
                }
                total += w * (1.0 - correct);
            }
            Ok(total)
        }
    }
}

/// Least-squares fit of log block error against n_r.
#[derive(Clone, Copy, PartialEq, Debug)]
pub struct DecayFit {
    /// Slope of log(error) per unit n_r (an estimate of the negative decay
    /// constant).
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
}

/// Fits log(block error) vs n_r for a repetition code over identical
/// channels, using the exact majority-vote error probabilities.
pub fn repetition_decay_fit(
    k: usize,
    channel: &BinaryAsymmetricChannel,
    n_r_values: &[usize],
    distribution: &MessageDistribution,
) -> Result<DecayFit> {
    if n_r_values.len() < 2 {
        return Err(Error::InvalidArgument(
            "need at least two n_r values to fit a slope".into(),
        ));
    }
    let mut xs = Vec::with_capacity(n_r_values.len());
    let mut ys = Vec::with_capacity(n_r_values.len());
    for &n_r in n_r_values {
        let err = repetition_majority_error(k, channel, n_r, distribution)?;
        if err <= 0.0 {
            return Err(Error::InsufficientSamples(format!(
                "block error at n_r = {n_r} is zero; nothing to fit"
            )));
        }
        xs.push(n_r as f64);
        ys.push(err.ln());
    }
    if xs.windows(2).all(|w| w[0] == w[1]) {
        return Err(Error::InvalidArgument(
            "n_r values must not all be equal".into(),
        ));
    }
    let (slope, intercept, r_squared) = linear_fit(&xs, &ys);
    Ok(DecayFit {
        slope,
        intercept,
        r_squared,
    })
}
