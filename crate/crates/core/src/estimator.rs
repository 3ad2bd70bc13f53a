//! Fraction-accurate estimation with a binomial-tail confidence bound.
//!
//! The estimator samples N categories (with replacement) from an oracle,
//! runs M classification trials per category, declares categories with
//! empirical accuracy strictly above alpha + eps1 classifiable, and claims
//! that at least a (q_hat - eps2) fraction of all categories is
//! classifiable. The confidence of that claim is lower-bounded by sweeping
//! theta over (0,1) and combining two binomial tails: the chance of
//! oversampling classifiable categories and the chance of mass
//! false-acceptance among the rest.
//!
//! The acceptance threshold is the strict one, successes > (alpha+eps1)*M,
//! used consistently here and in [`false_accept_prob`]; the two readings
//! differ only when (alpha+eps1)*M is an integer.

use crate::error::{Error, Result};
use crate::numeric::{binom_tail_upper, ceil_snapped, derive_seed, floor_snapped};
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Default theta grid step for [`confidence_bound`].
pub const DEFAULT_GRID_STEP: f64 = 1e-4;

/// The change in the swept minimum below which refinement stops.
const REFINEMENT_TOLERANCE: f64 = 1e-6;

/// Maximum number of grid halvings before giving up on refinement.
const MAX_REFINEMENTS: u32 = 6;

/// Parameters of an (alpha, N, M, eps1, eps2) fraction-accurate estimator.
#[derive(Clone, Copy, PartialEq, Debug)]
pub struct EstimatorParams {
    /// Accuracy threshold defining an alpha-accurate category, in (0,1).
    pub alpha: f64,
    /// Number of categories sampled (N).
    pub n_categories: usize,
    /// Number of instances sampled per category (M).
    pub m_instances: usize,
    /// Accuracy deviation threshold (eps1), >= 0. alpha + eps1 may exceed 1;
    /// the acceptance tail is then empty and nothing is ever accepted.
    pub eps1: f64,
    /// Fraction deviation threshold (eps2), in (0,1).
    pub eps2: f64,
}

impl EstimatorParams {
    pub fn new(
        alpha: f64,
        n_categories: usize,
        m_instances: usize,
        eps1: f64,
        eps2: f64,
    ) -> Result<Self> {
        if !alpha.is_finite() || alpha <= 0.0 || alpha >= 1.0 {
            return Err(Error::InvalidArgument(format!(
                "alpha must lie in (0,1), got {alpha}"
            )));
        }
        if !eps1.is_finite() || eps1 < 0.0 {
            return Err(Error::InvalidArgument(format!(
                "eps1 must be >= 0, got {eps1}"
            )));
        }
        if !eps2.is_finite() || eps2 <= 0.0 || eps2 >= 1.0 {
            return Err(Error::InvalidArgument(format!(
                "eps2 must lie in (0,1), got {eps2}"
            )));
        }
        if n_categories == 0 || m_instances == 0 {
            return Err(Error::InvalidArgument("N and M must both be >= 1".into()));
        }
        Ok(EstimatorParams {
            alpha,
            n_categories,
            m_instances,
            eps1,
            eps2,
        })
    }

    /// Minimum success count that classifies a category as accurate:
    /// successes strictly greater than (alpha + eps1) * M. May exceed M,
    /// in which case no category is ever accepted.
    pub(crate) fn accept_threshold(&self) -> i64 {
        floor_snapped((self.alpha + self.eps1) * self.m_instances as f64) + 1
    }
}

/// Weight in the upper tail of a binomial distribution:
/// sum over i = x..=n of C(n,i) p^i (1-p)^(n-i).
/// Returns 1 when x <= 0 and 0 when x > n.
pub fn binomial_tail(p: f64, n: u64, x: i64) -> Result<f64> {
    if !p.is_finite() || !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidArgument(format!(
            "probability must lie in [0,1], got {p}"
        )));
    }
    Ok(binom_tail_upper(p, n, x))
}

/// Probability that a category with accuracy exactly alpha is classified as
/// accurate: the worst case over all categories with accuracy below alpha.
pub fn false_accept_prob(params: &EstimatorParams) -> f64 {
    binom_tail_upper(
        params.alpha,
        params.m_instances as u64,
        params.accept_threshold(),
    )
}

/// Record of the theta sweep that produced a confidence value.
#[derive(Clone, Copy, PartialEq, Debug)]
pub struct ThetaSweep {
    /// The final (possibly refined) grid step.
    pub grid_step: f64,
    /// The grid point attaining the minimum.
    pub minimizing_theta: f64,
    /// True when halving the grid step changed the minimum by less than 1e-6.
    pub refined: bool,
}

/// Lower bound on the confidence of the estimator's claim.
///
/// Evaluates, over a theta grid in (0,1),
/// `1 - c_{pc, N - floor((theta+eps2/2)N)}(ceil(eps2/2 N)) - c_{theta,N}(ceil((theta+eps2/2)N))`
/// where `pc` is [`false_accept_prob`], takes the minimum, and refines the
/// grid until the minimum is stable. When `N - floor((theta+eps2/2)N) <= 0`
/// there are no inaccurate categories left to falsely accept and the first
/// tail is 0. The result is clamped to the unit interval.
pub fn confidence_bound(params: &EstimatorParams, grid_step: f64) -> Result<(f64, ThetaSweep)> {
    if !grid_step.is_finite() || grid_step <= 0.0 || grid_step > 0.01 {
        return Err(Error::InvalidArgument(format!(
            "grid step must lie in (0, 0.01], got {grid_step}"
        )));
    }
    let pc = false_accept_prob(params);
    let n = params.n_categories;
    let x2 = ceil_snapped(params.eps2 / 2.0 * n as f64);

    let sweep_pass = |step: f64| -> (f64, f64) {
        let mut term_b_by_nb: Vec<Option<f64>> = vec![None; n + 1];
        let mut best = f64::INFINITY;
        let mut best_theta = step;
        let mut i = 1u64;
        loop {
            let theta = i as f64 * step;
            if theta >= 1.0 {
                break;
            }
            let shifted = (theta + params.eps2 / 2.0) * n as f64;
            let nb = n as i64 - floor_snapped(shifted);
            let term_b = if nb <= 0 {
                0.0
            } else {
                let nb = nb as usize;
                *term_b_by_nb[nb].get_or_insert_with(|| binom_tail_upper(pc, nb as u64, x2))
            };
            let term_a = binom_tail_upper(theta, n as u64, ceil_snapped(shifted));
            let value = 1.0 - term_b - term_a;
            if value < best {
                best = value;
                best_theta = theta;
            }
            i += 1;
        }
        (best, best_theta)
    };

    let mut step = grid_step;
    let (mut minimum, mut theta) = sweep_pass(step);
    let mut refined = false;
    for _ in 0..MAX_REFINEMENTS {
        let finer = step / 2.0;
        let (m2, t2) = sweep_pass(finer);
        let stable = (m2 - minimum).abs() < REFINEMENT_TOLERANCE;
        step = finer;
        minimum = m2;
        theta = t2;
        if stable {
            refined = true;
            break;
        }
    }
    Ok((
        minimum.clamp(0.0, 1.0),
        ThetaSweep {
            grid_step: step,
            minimizing_theta: theta,
            refined,
        },
    ))
}

/// A source of (category, classification-outcome) samples with hidden
/// per-category true-positive accuracies.
pub trait CategoryOracle {
    /// Draws a category id, with replacement, from the category distribution.
    fn sample_category(&self, rng: &mut dyn RngCore) -> usize;
    /// Runs one classification trial on a fresh instance of `category`;
    /// trials for a fixed category are i.i.d. Bernoulli.
    fn trial(&self, category: usize, rng: &mut dyn RngCore) -> bool;
}

/// Oracle spec document: category draw probabilities and per-category
/// true-positive accuracies.
#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct OracleSpec {
    pub categories: Vec<CategorySpec>,
}

#[derive(Clone, Copy, PartialEq, Debug, Serialize, Deserialize)]
pub struct CategorySpec {
    pub probability: f64,
    pub accuracy: f64,
}

/// A finite-category oracle backed by explicit weights and accuracies.
pub struct TabulatedOracle {
    weights: Vec<f64>,
    cumulative: Vec<f64>,
    accuracies: Vec<f64>,
}

impl TabulatedOracle {
    /// Weights must be non-negative and sum to 1 within 1e-9; accuracies
    /// must lie in `[0,1]`.
    pub fn new(weights: Vec<f64>, accuracies: Vec<f64>) -> Result<Self> {
        if weights.is_empty() || weights.len() != accuracies.len() {
            return Err(Error::InvalidArgument(
                "need equal, non-zero numbers of weights and accuracies".into(),
            ));
        }
        let mut total = 0.0;
        for &w in &weights {
            if !w.is_finite() || w < 0.0 {
                return Err(Error::InvalidArgument(format!(
                    "category weight {w} is not a probability"
                )));
            }
            total += w;
        }
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidArgument(format!(
                "category weights sum to {total}, expected 1"
            )));
        }
        for &a in &accuracies {
            if !a.is_finite() || !(0.0..=1.0).contains(&a) {
                return Err(Error::InvalidArgument(format!(
                    "accuracy {a} must lie in [0,1]"
                )));
            }
        }
        let mut cumulative = Vec::with_capacity(weights.len());
        let mut acc = 0.0;
        for &w in &weights {
            acc += w;
            cumulative.push(acc);
        }
        Ok(TabulatedOracle {
            weights,
            cumulative,
            accuracies,
        })
    }

    /// Uniform category distribution over the given accuracies.
    pub fn uniform(accuracies: Vec<f64>) -> Result<Self> {
        let n = accuracies.len();
        if n == 0 {
            return Err(Error::InvalidArgument("need at least one category".into()));
        }
        TabulatedOracle::new(vec![1.0 / n as f64; n], accuracies)
    }

    pub fn from_spec(spec: &OracleSpec) -> Result<Self> {
        TabulatedOracle::new(
            spec.categories.iter().map(|c| c.probability).collect(),
            spec.categories.iter().map(|c| c.accuracy).collect(),
        )
    }

    pub fn accuracies(&self) -> &[f64] {
        &self.accuracies
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }
}

impl CategoryOracle for TabulatedOracle {
    fn sample_category(&self, rng: &mut dyn RngCore) -> usize {
        let u: f64 = rng.random();
        self.cumulative
            .partition_point(|&c| c <= u)
            .min(self.accuracies.len() - 1)
    }

    fn trial(&self, category: usize, rng: &mut dyn RngCore) -> bool {
        rng.random_bool(self.accuracies[category])
    }
}

/// One full run of the estimator, plus the data-independent confidence.
#[derive(Clone, PartialEq, Debug)]
pub struct EstimatorResult {
    /// Empirical accuracy of each of the N sampled categories.
    pub empirical_accuracies: Vec<f64>,
    /// Fraction of sampled categories classified as accurate.
    pub q_hat: f64,
    /// q_hat - eps2; reported unclamped (a vacuous claim is still correct).
    pub lower_bound: f64,
    /// Confidence bound for these parameters; independent of the data.
    pub confidence: f64,
    /// Theta attaining the confidence minimum.
    pub minimizing_theta: f64,
}

fn run_core(
    oracle: &dyn CategoryOracle,
    params: &EstimatorParams,
    seed: u64,
) -> (Vec<f64>, f64, f64) {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let threshold = params.accept_threshold();
    let m = params.m_instances;
    let mut empirical = Vec::with_capacity(params.n_categories);
    let mut accepted = 0usize;
    for _ in 0..params.n_categories {
        let category = oracle.sample_category(&mut rng);
        let successes = (0..m).filter(|_| oracle.trial(category, &mut rng)).count();
        empirical.push(successes as f64 / m as f64);
        if successes as i64 >= threshold {
            accepted += 1;
        }
    }
    let q_hat = accepted as f64 / params.n_categories as f64;
    let lower = q_hat - params.eps2;
    (empirical, q_hat, lower)
}

/// Draws N categories with replacement and M trials each, classifies them,
/// and attaches the confidence bound. Deterministic given `seed`.
pub fn run_estimation(
    oracle: &dyn CategoryOracle,
    params: &EstimatorParams,
    seed: u64,
) -> Result<EstimatorResult> {
    let (empirical_accuracies, q_hat, lower_bound) = run_core(oracle, params, seed);
    let (confidence, sweep) = confidence_bound(params, DEFAULT_GRID_STEP)?;
    Ok(EstimatorResult {
        empirical_accuracies,
        q_hat,
        lower_bound,
        confidence,
        minimizing_theta: sweep.minimizing_theta,
    })
}

/// Result of a Monte Carlo soundness check of the confidence bound.
#[derive(Clone, Copy, PartialEq, Debug)]
pub struct BoundValidation {
    /// Fraction of runs whose claimed lower bound exceeded the true accurate
    /// fraction (i.e. the claim was wrong).
    pub empirical_error_rate: f64,
    /// 1 - confidence_bound: the error rate the bound permits.
    pub bound_error_rate: f64,
}

/// Runs the estimator `n_runs` times against a category distribution with
/// known accuracies and compares the observed error rate of its claim with
/// what the bound permits. The true accurate fraction is the
/// `category_weights`-mass of categories with accuracy >= alpha (equal to
/// the plain fraction for uniform weights).
pub fn validate_bound(
    true_accuracies: &[f64],
    category_weights: &[f64],
    params: &EstimatorParams,
    n_runs: usize,
    seed: u64,
) -> Result<BoundValidation> {
    if n_runs == 0 {
        return Err(Error::InvalidArgument("n_runs must be >= 1".into()));
    }
    let oracle = TabulatedOracle::new(category_weights.to_vec(), true_accuracies.to_vec())?;
    let theta_true: f64 = category_weights
        .iter()
        .zip(true_accuracies)
        .filter(|(_, &a)| a >= params.alpha)
        .map(|(&w, _)| w)
        .sum();
    let (confidence, _) = confidence_bound(params, DEFAULT_GRID_STEP)?;
    let errors = (0..n_runs as u64)
        .into_par_iter()
        .filter(|&run| {
            let (_, _, lower) = run_core(&oracle, params, derive_seed(seed, run));
            lower > theta_true
        })
        .count();
    Ok(BoundValidation {
        empirical_error_rate: errors as f64 / n_runs as f64,
        bound_error_rate: 1.0 - confidence,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(alpha: f64, n: usize, m: usize, e1: f64, e2: f64) -> EstimatorParams {
        EstimatorParams::new(alpha, n, m, e1, e2).unwrap()
    }

    #[test]
    fn binomial_tail_examples() {
        for (p, n) in [(0.3, 7u64), (0.9, 20), (0.0, 5)] {
            assert_eq!(binomial_tail(p, n, 0).unwrap(), 1.0);
        }
        assert!((binomial_tail(0.5, 2, 1).unwrap() - 0.75).abs() < 1e-15);
        for n in [1u64, 10, 100] {
            assert_eq!(binomial_tail(1.0, n, n as i64).unwrap(), 1.0);
        }
        assert!(binomial_tail(1.5, 10, 2).is_err());
        assert!(binomial_tail(-0.1, 10, 2).is_err());
    }

    #[test]
    fn binomial_tail_frozen_values() {
        // c_{1/2,20}(14) = 60460 / 2^20, exactly representable
        let v = binomial_tail(0.5, 20, 14).unwrap();
        assert!((v - 0.057659149169921875).abs() < 1e-15);
        // c_{1/10,10}(4) = 7996999/625000000
        let v = binomial_tail(0.1, 10, 4).unwrap();
        assert!((v - 0.0127951984).abs() < 1e-12);
        // c_{1/10,10}(3)
        let v = binomial_tail(0.1, 10, 3).unwrap();
        assert!((v - 0.0701908264).abs() < 1e-12);
    }

    #[test]
    fn binomial_tail_monotonicity() {
        // non-increasing in x; non-decreasing in p for fixed x >= 1
        for n in [5u64, 31, 200] {
            for pi in 1..10u32 {
                let p = f64::from(pi) / 10.0;
                let mut last = 1.0;
                for x in 0..=(n as i64 + 1) {
                    let v = binomial_tail(p, n, x).unwrap();
                    assert!(v <= last + 1e-15);
                    last = v;
                }
            }
            for x in [1i64, n as i64 / 2, n as i64] {
                let mut last = 0.0;
                for pi in 0..=10u32 {
                    let v = binomial_tail(f64::from(pi) / 10.0, n, x).unwrap();
                    assert!(v >= last - 1e-15);
                    last = v;
                }
            }
        }
    }

    #[test]
    fn false_accept_examples() {
        // threshold lands strictly above (alpha+eps1)*M
        let v = false_accept_prob(&params(0.5, 10, 2, 0.25, 0.1));
        assert!((v - 0.25).abs() < 1e-15);
        let v = false_accept_prob(&params(0.5, 10, 1, 0.0, 0.1));
        assert!((v - 0.5).abs() < 1e-15);
        // empty tail once (alpha+eps1)*M exceeds M
        let v = false_accept_prob(&params(0.5, 10, 10, 0.6, 0.1));
        assert_eq!(v, 0.0);
        // integer boundary: strictly-greater reading
        let v = false_accept_prob(&params(0.1, 100, 10, 0.2, 0.2));
        assert!((v - 0.0127951984).abs() < 1e-12);
    }

    #[test]
    fn confidence_reproduces_reference_values() {
        let (c, sweep) = confidence_bound(&params(0.5, 100, 20, 0.19, 0.19), 1e-4).unwrap();
        assert!((c - 0.963091).abs() < 1e-4, "got {c}");
        assert!(sweep.refined);
        let (c, sweep) = confidence_bound(&params(0.1, 100, 10, 0.2, 0.2), 1e-4).unwrap();
        assert!((c - 0.971426).abs() < 1e-4, "got {c}");
        assert!(sweep.refined);
        assert!(sweep.minimizing_theta > 0.0 && sweep.minimizing_theta < 1.0);
    }

    #[test]
    fn confidence_is_one_when_both_tails_vanish() {
        let (c, _) = confidence_bound(&params(0.5, 100, 20, 0.5, 0.9), 1e-4).unwrap();
        assert_eq!(c, 1.0);
    }

    #[test]
    fn confidence_grid_refinement_is_stable() {
        for p in [
            params(0.5, 100, 20, 0.19, 0.19),
            params(0.1, 100, 10, 0.2, 0.2),
        ] {
            let (a, _) = confidence_bound(&p, 1e-4).unwrap();
            let (b, _) = confidence_bound(&p, 5e-5).unwrap();
            assert!((a - b).abs() < 1e-6);
        }
    }

    #[test]
    fn confidence_monotone_in_slack() {
        // tighter claims (smaller eps) never increase confidence
        let mut last = 0.0;
        for e1 in [0.0, 0.05, 0.1, 0.2, 0.3] {
            let (c, _) = confidence_bound(&params(0.3, 50, 10, e1, 0.15), 1e-3).unwrap();
            assert!(c >= last - 1e-12, "eps1={e1}: {c} < {last}");
            last = c;
        }
        let mut last = 0.0;
        for e2 in [0.05, 0.1, 0.2, 0.3, 0.4] {
            let (c, _) = confidence_bound(&params(0.3, 50, 10, 0.1, e2), 1e-3).unwrap();
            assert!(c >= last - 1e-12, "eps2={e2}: {c} < {last}");
            last = c;
        }
    }

    #[test]
    fn run_estimation_extreme_oracles() {
        let p = params(0.5, 100, 20, 0.19, 0.19);
        let oracle = TabulatedOracle::uniform(vec![1.0; 4]).unwrap();
        let r = run_estimation(&oracle, &p, 7).unwrap();
        assert_eq!(r.q_hat, 1.0);
        assert!((r.lower_bound - 0.81).abs() < 1e-12);
        assert!(r.empirical_accuracies.iter().all(|&a| a == 1.0));

        let oracle = TabulatedOracle::uniform(vec![0.0; 4]).unwrap();
        let r = run_estimation(&oracle, &p, 7).unwrap();
        assert_eq!(r.q_hat, 0.0);
        assert!((r.lower_bound + 0.19).abs() < 1e-12);
    }

    #[test]
    fn run_estimation_is_deterministic() {
        let p = params(0.4, 50, 10, 0.1, 0.1);
        let oracle = TabulatedOracle::uniform(vec![0.9, 0.5, 0.2, 0.7]).unwrap();
        let a = run_estimation(&oracle, &p, 42).unwrap();
        let b = run_estimation(&oracle, &p, 42).unwrap();
        assert_eq!(a, b);
        let c = run_estimation(&oracle, &p, 43).unwrap();
        assert_ne!(a.empirical_accuracies, c.empirical_accuracies);
    }

    #[test]
    fn mean_q_hat_matches_exact_expectation() {
        // half the categories at 0.9, half at 0.1; expectation of q_hat is
        // the mean acceptance probability, computed here by direct summation
        let p = params(0.5, 100, 20, 0.19, 0.19);
        let expect_accept = |acc: f64| -> f64 {
            let mut total = 0.0;
            for i in 14..=20u32 {
                let mut c = 1.0f64;
                for j in 0..i {
                    c *= f64::from(20 - j) / f64::from(j + 1);
                }
                total += c * acc.powi(i as i32) * (1.0 - acc).powi(20 - i as i32);
            }
            total
        };
        let expected = 0.5 * expect_accept(0.9) + 0.5 * expect_accept(0.1);
        let oracle = TabulatedOracle::uniform(vec![0.9, 0.9, 0.1, 0.1]).unwrap();
        let mean: f64 = (0..1000).map(|s| run_core(&oracle, &p, s).1).sum::<f64>() / 1000.0;
        assert!(
            (mean - expected).abs() < 0.05,
            "mean {mean} vs expected {expected}"
        );
    }

    #[test]
    fn validate_bound_perfect_oracle_never_errs() {
        let p = params(0.5, 100, 20, 0.19, 0.19);
        let v = validate_bound(&[1.0; 4], &[0.25; 4], &p, 500, 1).unwrap();
        assert_eq!(v.empirical_error_rate, 0.0);
        assert!((v.bound_error_rate - (1.0 - 0.963091)).abs() < 1e-4);
    }

    #[test]
    fn validate_bound_boundary_oracle_is_sound() {
        // every category exactly at alpha: all of them count as accurate,
        // yet acceptance is rare, so the claim must stay below theta = 1
        let p = params(0.5, 100, 20, 0.19, 0.19);
        let v = validate_bound(&[0.5; 8], &[0.125; 8], &p, 10_000, 3).unwrap();
        let sigma = (v.bound_error_rate * (1.0 - v.bound_error_rate) / 10_000.0).sqrt();
        assert!(v.empirical_error_rate <= v.bound_error_rate + 3.0 * sigma);
        assert!((v.bound_error_rate - 0.0369).abs() < 1e-3);
    }

    #[test]
    fn validate_bound_sound_at_integer_acceptance_boundary() {
        // (alpha + eps1) * M = 3 exactly here, the case where the strict
        // and non-strict acceptance thresholds differ. Categories sit just
        // below alpha, so every acceptance is a false accept; the strict
        // threshold keeps the observed error inside the bound.
        let p = params(0.1, 100, 10, 0.2, 0.2);
        let v = validate_bound(&[0.0999; 4], &[0.25; 4], &p, 4000, 21).unwrap();
        let sigma = (v.bound_error_rate * (1.0 - v.bound_error_rate) / 4000.0).sqrt();
        assert!(v.empirical_error_rate <= v.bound_error_rate + 3.0 * sigma);
    }

    #[test]
    fn validate_bound_mixture_is_sound() {
        let p = params(0.5, 100, 20, 0.19, 0.19);
        let accs = [0.9, 0.9, 0.1, 0.1];
        let v = validate_bound(&accs, &[0.25; 4], &p, 2000, 9).unwrap();
        let sigma = (v.bound_error_rate * (1.0 - v.bound_error_rate) / 2000.0).sqrt();
        assert!(v.empirical_error_rate <= v.bound_error_rate + 3.0 * sigma);
    }

    #[test]
    fn oracle_spec_validation() {
        let spec = OracleSpec {
            categories: vec![
                CategorySpec {
                    probability: 0.5,
                    accuracy: 0.9,
                },
                CategorySpec {
                    probability: 0.5,
                    accuracy: 0.2,
                },
            ],
        };
        let oracle = TabulatedOracle::from_spec(&spec).unwrap();
        assert_eq!(oracle.accuracies(), &[0.9, 0.2]);

        let bad = OracleSpec {
            categories: vec![CategorySpec {
                probability: 0.7,
                accuracy: 0.9,
            }],
        };
        assert!(TabulatedOracle::from_spec(&bad).is_err());
        assert!(TabulatedOracle::new(vec![1.0], vec![1.5]).is_err());
        assert!(TabulatedOracle::new(vec![], vec![]).is_err());
    }

    #[test]
    fn params_validation() {
        assert!(EstimatorParams::new(0.0, 10, 10, 0.1, 0.1).is_err());
        assert!(EstimatorParams::new(1.0, 10, 10, 0.1, 0.1).is_err());
        assert!(EstimatorParams::new(0.5, 0, 10, 0.1, 0.1).is_err());
        assert!(EstimatorParams::new(0.5, 10, 0, 0.1, 0.1).is_err());
        assert!(EstimatorParams::new(0.5, 10, 10, -0.1, 0.1).is_err());
        assert!(EstimatorParams::new(0.5, 10, 10, 0.1, 1.0).is_err());
        // alpha + eps1 > 1 is legal
        assert!(EstimatorParams::new(0.5, 10, 10, 0.9, 0.1).is_ok());
    }

    #[test]
    fn confidence_rejects_bad_grid_step() {
        let p = params(0.5, 10, 10, 0.1, 0.1);
        assert!(confidence_bound(&p, 0.0).is_err());
        assert!(confidence_bound(&p, 0.02).is_err());
    }
}
