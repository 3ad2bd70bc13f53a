//! Linear output codes over attribute strings, classifier ensembles as
//! binary asymmetric channels, and fraction-accurate estimation with a
//! binomial-tail confidence bound.
//!
//! The pieces fit together like a small channel-coding stack: [`codes`]
//! defines attribute strings and the parity-check code families and encodes
//! messages; [`decoder`] maps noisy output strings back to the
//! Hamming-nearest message; [`channel`] models each binary classifier as an
//! independent binary asymmetric channel and measures block/bit error rates
//! exactly or by seeded Monte Carlo; [`estimator`] implements the
//! fraction-accurate estimator and its confidence bound;
//! [`xorlearn`] demonstrates that the quadratic feature transformation
//! makes parity targets linearly separable.
//!
//! All public types are immutable after construction and operations are
//! pure functions of their inputs (plus an explicit seed where randomness
//! is involved), so everything can be shared freely across threads.
//!
//! # Examples
//!
//! Encode a message, push it through a noisy ensemble, and decode:
//!
//! ```
//! use parity_codes::channel::{ChannelEnsemble, SimConfig, block_error_monte_carlo};
//! use parity_codes::codes::OutputCode;
//! use parity_codes::decoder::decode_nearest;
//!
//! let code = OutputCode::pairwise_parity(10)?;
//! let message = "1011001010".parse()?;
//! let codeword = code.encode(&message)?;
//! assert_eq!(decode_nearest(&code, &codeword)?.message, message);
//!
//! let ensemble = ChannelEnsemble::symmetric(code.n(), 0.05)?;
//! let mc = block_error_monte_carlo(&code, &ensemble, &SimConfig::new(10_000, 1))?;
//! assert!(mc.estimate < 0.01);
//! # Ok::<(), parity_codes::Error>(())
//! ```
//!
//! Compute the confidence of a fraction-accurate estimation run:
//!
//! ```
//! use parity_codes::estimator::{EstimatorParams, confidence_bound};
//!
//! let params = EstimatorParams::new(0.5, 100, 20, 0.19, 0.19)?;
//! let (confidence, sweep) = confidence_bound(&params, 1e-4)?;
//! assert!((confidence - 0.963).abs() < 0.01);
//! assert!(sweep.refined);
//! # Ok::<(), parity_codes::Error>(())
//! ```

mod bits;
pub mod channel;
pub mod codes;
pub mod decoder;
mod error;
pub mod estimator;
mod numeric;
pub mod xorlearn;

pub use error::{Error, Result};
