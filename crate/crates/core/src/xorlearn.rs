//! Quadratic feature transformation and a perceptron separability probe.
//!
//! Augmenting a feature vector with the off-diagonal, upper-triangular
//! entries of its outer product makes XOR-style parity targets linearly
//! separable. A plain perceptron serves as the witness: it converges if and
//! only if the dataset is separable, so convergence within a budget is a
//! crisp, tolerance-free test.

use crate::error::{Error, Result};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

/// A trained linear threshold model; the last weight is the bias.
#[derive(Clone, PartialEq, Debug)]
pub struct LinearModel {
    weights: Vec<f64>,
}

impl LinearModel {
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Signed score w . [x, 1].
    pub fn score(&self, x: &[f64]) -> Result<f64> {
        if x.len() + 1 != self.weights.len() {
            return Err(Error::InvalidArgument(format!(
                "feature dimension {} does not match model dimension {}",
                x.len(),
                self.weights.len() - 1
            )));
        }
        let dot: f64 = self.weights[..x.len()]
            .iter()
            .zip(x)
            .map(|(w, v)| w * v)
            .sum();
        Ok(dot + self.weights[x.len()])
    }

    /// Predicted label: +1 for positive score, -1 otherwise.
    pub fn predict(&self, x: &[f64]) -> Result<i8> {
        Ok(if self.score(x)? > 0.0 { 1 } else { -1 })
    }
}

/// Appends all pairwise products x_i * x_j, i < j, in lexicographic order to
/// the original features. Output length is d + d(d-1)/2.
pub fn quad_transform(x: &[f64]) -> Result<Vec<f64>> {
    let d = x.len();
    if d < 2 {
        return Err(Error::InvalidArgument(format!(
            "quadratic transform needs at least 2 features, got {d}"
        )));
    }
    if x.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidArgument("features must be finite".into()));
    }
    let mut out = Vec::with_capacity(d + d * (d - 1) / 2);
    out.extend_from_slice(x);
    for i in 0..d {
        for j in i + 1..d {
            out.push(x[i] * x[j]);
        }
    }
    Ok(out)
}

/// Result of a perceptron training run.
#[derive(Clone, PartialEq, Debug)]
pub struct TrainOutcome {
    pub model: LinearModel,
    /// True when some epoch finished with zero mistakes.
    pub converged: bool,
    /// Epochs actually executed, including the final clean epoch.
    pub epochs_used: usize,
}

/// Standard perceptron with per-epoch shuffled presentation order.
/// Labels must be +1 or -1. Deterministic given `seed`.
pub fn train_perceptron(
    data: &[(Vec<f64>, i8)],
    max_epochs: usize,
    seed: u64,
) -> Result<TrainOutcome> {
    if data.is_empty() {
        return Err(Error::InvalidArgument(
            "training data must be non-empty".into(),
        ));
    }
    if max_epochs == 0 {
        return Err(Error::InvalidArgument("max_epochs must be >= 1".into()));
    }
    let d = data[0].0.len();
    for (x, y) in data {
        if x.len() != d {
            return Err(Error::InvalidArgument(
                "all feature vectors must have the same dimension".into(),
            ));
        }
        if x.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument("features must be finite".into()));
        }
        if *y != 1 && *y != -1 {
            return Err(Error::InvalidArgument(format!(
                "labels must be +1 or -1, got {y}"
            )));
        }
    }

    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut weights = vec![0.0f64; d + 1];
    let mut order: Vec<usize> = (0..data.len()).collect();
    let mut epochs_used = 0;
    let mut converged = false;
    for _ in 0..max_epochs {
        epochs_used += 1;
        order.shuffle(&mut rng);
        let mut mistakes = 0usize;
        for &idx in &order {
            let (x, y) = &data[idx];
            let score: f64 =
                weights[..d].iter().zip(x).map(|(w, v)| w * v).sum::<f64>() + weights[d];
            if f64::from(*y) * score <= 0.0 {
                mistakes += 1;
                for (w, v) in weights[..d].iter_mut().zip(x) {
                    *w += f64::from(*y) * v;
                }
                weights[d] += f64::from(*y);
            }
        }
        if mistakes == 0 {
            converged = true;
            break;
        }
    }
    Ok(TrainOutcome {
        model: LinearModel { weights },
        converged,
        epochs_used,
    })
}

/// Samples `n_samples` uniform K-bit feature vectors labelled by the parity
/// (XOR) of the attributes in `support`, with each label independently
/// flipped with probability `noise_flip_prob`. Labels are +1 for parity 1.
pub fn parity_dataset(
    k: usize,
    support: &[usize],
    noise_flip_prob: f64,
    n_samples: usize,
    seed: u64,
) -> Result<Vec<(Vec<f64>, i8)>> {
    if k == 0 {
        return Err(Error::InvalidArgument("K must be >= 1".into()));
    }
    if support.is_empty() {
        return Err(Error::InvalidArgument(
            "parity support must be non-empty".into(),
        ));
    }
    let mut seen = vec![false; k];
    for &i in support {
        if i >= k {
            return Err(Error::InvalidArgument(format!(
                "support index {i} out of range for K = {k}"
            )));
        }
        if seen[i] {
            return Err(Error::InvalidArgument(format!(
                "duplicate support index {i}"
            )));
        }
        seen[i] = true;
    }
    if n_samples == 0 {
        return Err(Error::InvalidArgument("n_samples must be >= 1".into()));
    }
    if !noise_flip_prob.is_finite() || !(0.0..=1.0).contains(&noise_flip_prob) {
        return Err(Error::InvalidArgument(format!(
            "noise flip probability {noise_flip_prob} must lie in [0,1]"
        )));
    }

    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut data = Vec::with_capacity(n_samples);
    for _ in 0..n_samples {
        let bits: Vec<bool> = (0..k).map(|_| rng.random_bool(0.5)).collect();
        let mut parity = false;
        for &i in support {
            parity ^= bits[i];
        }
        let mut label: i8 = if parity { 1 } else { -1 };
        if noise_flip_prob > 0.0 && rng.random_bool(noise_flip_prob) {
            label = -label;
        }
        let features: Vec<f64> = bits.iter().map(|&b| f64::from(u8::from(b))).collect();
        data.push((features, label));
    }
    Ok(data)
}

/// The canonical four-point XOR dataset over {0,1}^2 with +1 labels on
/// parity 1.
pub fn xor_dataset() -> Vec<(Vec<f64>, i8)> {
    vec![
        (vec![0.0, 0.0], -1),
        (vec![0.0, 1.0], 1),
        (vec![1.0, 0.0], 1),
        (vec![1.0, 1.0], -1),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quad_transform_example() {
        assert_eq!(
            quad_transform(&[1.0, 2.0, 3.0]).unwrap(),
            vec![1.0, 2.0, 3.0, 2.0, 3.0, 6.0]
        );
        assert_eq!(quad_transform(&[0.0; 4]).unwrap(), vec![0.0; 10]);
        assert!(quad_transform(&[1.0]).is_err());
        assert!(quad_transform(&[1.0, f64::NAN]).is_err());
    }

    #[test]
    fn quad_transform_length() {
        for d in 2..12usize {
            let x: Vec<f64> = (0..d).map(|i| i as f64).collect();
            assert_eq!(quad_transform(&x).unwrap().len(), d + d * (d - 1) / 2);
        }
    }

    #[test]
    fn xor_is_linear_in_transformed_features() {
        // XOR(x1,x2) = x1 + x2 - 2*x1*x2 on {0,1}^2
        for (x, y) in xor_dataset() {
            let t = quad_transform(&x).unwrap();
            let value = t[0] + t[1] - 2.0 * t[2];
            let expected = if y == 1 { 1.0 } else { 0.0 };
            assert_eq!(value, expected);
        }
    }

    #[test]
    fn raw_xor_does_not_converge() {
        let out = train_perceptron(&xor_dataset(), 1000, 0).unwrap();
        assert!(!out.converged);
        assert_eq!(out.epochs_used, 1000);
    }

    #[test]
    fn transformed_xor_converges() {
        let data: Vec<(Vec<f64>, i8)> = xor_dataset()
            .into_iter()
            .map(|(x, y)| (quad_transform(&x).unwrap(), y))
            .collect();
        let out = train_perceptron(&data, 1000, 0).unwrap();
        assert!(out.converged, "took {} epochs", out.epochs_used);
        for (x, y) in &data {
            assert_eq!(out.model.predict(x).unwrap(), *y);
        }
    }

    #[test]
    fn separable_and_dataset_converges_raw() {
        let data = vec![
            (vec![0.0, 0.0], -1),
            (vec![0.0, 1.0], -1),
            (vec![1.0, 0.0], -1),
            (vec![1.0, 1.0], 1),
        ];
        let out = train_perceptron(&data, 1000, 0).unwrap();
        assert!(out.converged);
    }

    #[test]
    fn raw_features_fail_for_wider_parities_too() {
        for (k, support) in [(4usize, vec![0usize, 1, 2]), (5, vec![1, 2, 3, 4])] {
            let data = parity_dataset(k, &support, 0.0, 128, 2).unwrap();
            let out = train_perceptron(&data, 300, 0).unwrap();
            assert!(!out.converged, "k={k} support {support:?}");
        }
    }

    #[test]
    fn primitive_targets_stay_separable_after_transform() {
        // the transform keeps the linear features, so a plain attribute
        // target is still learnable by the same layer
        let data = parity_dataset(5, &[2], 0.0, 128, 6).unwrap();
        let transformed: Vec<(Vec<f64>, i8)> = data
            .iter()
            .map(|(x, y)| (quad_transform(x).unwrap(), *y))
            .collect();
        assert!(train_perceptron(&transformed, 500, 1).unwrap().converged);
        assert!(train_perceptron(&data, 500, 1).unwrap().converged);
    }

    #[test]
    fn perceptron_is_deterministic() {
        let data = parity_dataset(4, &[0, 2], 0.1, 64, 9).unwrap();
        let a = train_perceptron(&data, 50, 7).unwrap();
        let b = train_perceptron(&data, 50, 7).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn parity_dataset_labels_match_xor() {
        let data = parity_dataset(4, &[1, 3], 0.0, 1000, 3).unwrap();
        for (x, y) in &data {
            let parity = (x[1] as u8) ^ (x[3] as u8);
            assert_eq!(*y == 1, parity == 1);
        }
        // K = 2, full support: exactly the XOR truth table distribution
        let data = parity_dataset(2, &[0, 1], 0.0, 500, 4).unwrap();
        for (x, y) in &data {
            assert_eq!(*y == 1, (x[0] as u8) ^ (x[1] as u8) == 1);
        }
    }

    #[test]
    fn full_noise_destroys_correlation() {
        let n = 4000usize;
        let data = parity_dataset(3, &[0, 1], 0.5, n, 12).unwrap();
        let agree = data
            .iter()
            .filter(|(x, y)| (*y == 1) == ((x[0] as u8) ^ (x[1] as u8) == 1))
            .count() as f64;
        let sigma = 0.5 * (n as f64).sqrt();
        assert!((agree - n as f64 / 2.0).abs() <= 3.0 * sigma);
    }

    #[test]
    fn parity_dataset_validation() {
        assert!(parity_dataset(4, &[], 0.0, 10, 0).is_err());
        assert!(parity_dataset(4, &[4], 0.0, 10, 0).is_err());
        assert!(parity_dataset(4, &[1, 1], 0.0, 10, 0).is_err());
        assert!(parity_dataset(4, &[0], 1.5, 10, 0).is_err());
        assert!(parity_dataset(4, &[0], 0.0, 0, 0).is_err());
        assert!(train_perceptron(&[], 10, 0).is_err());
        assert!(train_perceptron(&[(vec![1.0], 2)], 10, 0).is_err());
    }
}
