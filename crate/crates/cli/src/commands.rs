//! Subcommand implementations.

use crate::output::{emit, render_rows, Format};
use anyhow::{bail, Context};
use clap::Args;
use parity_codes::channel::{
    simulate_summary, BinaryAsymmetricChannel, ChannelEnsemble, SimConfig,
};
use parity_codes::codes::OutputCode;
use parity_codes::estimator::{
    confidence_bound, run_estimation, EstimatorParams, OracleSpec, TabulatedOracle,
    DEFAULT_GRID_STEP,
};
use parity_codes::xorlearn::{parity_dataset, quad_transform, train_perceptron};
use serde::{Deserialize, Serialize};
use serde_json::json;
use std::path::PathBuf;

#[derive(Args, Debug)]
pub struct OutputOpts {
    /// Write the result to this file (atomically) instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Output format for tabular results.
    #[arg(long, global = true, value_enum, default_value = "csv")]
    pub format: Format,
}

fn emit_json(out: Option<&PathBuf>, value: &serde_json::Value) -> anyhow::Result<()> {
    let mut doc = serde_json::to_string_pretty(value)?;
    doc.push('\n');
    emit(out, &doc)
}

// ---------------------------------------------------------------- simulate

/// Flags for `simulate`; every field can also come from a --config JSON
/// document with the same (kebab-case) keys, with explicit flags winning.
#[derive(Args, Deserialize, Default, Debug, Clone)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct SimulateOpts {
    /// Code family: identity | repetition | pairwise-parity | hamming74.
    #[arg(long)]
    pub code: Option<String>,
    /// Attribute count K (not needed for hamming74).
    #[arg(long)]
    pub k: Option<usize>,
    /// Repetition count for the repetition code.
    #[arg(long = "n-r")]
    pub n_r: Option<usize>,
    /// Binary symmetric channel crossover probability.
    #[arg(long, conflicts_with_all = ["p", "q"])]
    pub epsilon: Option<f64>,
    /// P(0 -> 0) for an asymmetric channel (use with --q).
    #[arg(long, requires = "q")]
    pub p: Option<f64>,
    /// P(1 -> 1) for an asymmetric channel (use with --p).
    #[arg(long, requires = "p")]
    pub q: Option<f64>,
    /// Shared-flip mixture probability (correlated errors), default 0.
    #[arg(long = "shared-flip")]
    pub shared_flip: Option<f64>,
    /// Monte Carlo trials.
    #[arg(long)]
    pub trials: Option<u64>,
    /// Master seed; trials draw counter-derived substreams.
    #[arg(long)]
    pub seed: Option<u64>,
}

impl SimulateOpts {
    fn merged_with(self, config: Option<SimulateOpts>) -> SimulateOpts {
        let c = config.unwrap_or_default();
        SimulateOpts {
            code: self.code.or(c.code),
            k: self.k.or(c.k),
            n_r: self.n_r.or(c.n_r),
            epsilon: self.epsilon.or(c.epsilon),
            p: self.p.or(c.p),
            q: self.q.or(c.q),
            shared_flip: self.shared_flip.or(c.shared_flip),
            trials: self.trials.or(c.trials),
            seed: self.seed.or(c.seed),
        }
    }
}

/// One `simulate` result row.
#[derive(Serialize)]
struct SimulateRow {
    code_name: String,
    #[serde(rename = "K")]
    k: usize,
    #[serde(rename = "N")]
    n: usize,
    epsilon_or_pq: String,
    trials: u64,
    seed: u64,
    block_error: f64,
    std_error: f64,
}

fn build_code(opts: &SimulateOpts) -> anyhow::Result<OutputCode> {
    let family = opts.code.as_deref().unwrap_or_default();
    let need_k = || {
        opts.k.ok_or_else(|| {
            parity_codes::Error::InvalidArgument(format!("--k is required for {family}"))
        })
    };
    let code = match family {
        "identity" => OutputCode::identity(need_k()?)?,
        "repetition" => {
            let n_r = opts.n_r.ok_or_else(|| {
                parity_codes::Error::InvalidArgument("--n-r is required for repetition".into())
            })?;
            OutputCode::repetition(need_k()?, n_r)?
        }
        "pairwise-parity" => OutputCode::pairwise_parity(need_k()?)?,
        "hamming74" => OutputCode::hamming_7_4(),
        other => {
            return Err(parity_codes::Error::InvalidArgument(format!(
                "unknown code family '{other}' (expected identity, repetition, \
                 pairwise-parity or hamming74)"
            ))
            .into())
        }
    };
    Ok(code)
}

fn build_channel(opts: &SimulateOpts, n: usize) -> anyhow::Result<(ChannelEnsemble, String)> {
    let (ensemble, label) = match (opts.epsilon, opts.p, opts.q) {
        (Some(eps), None, None) => (ChannelEnsemble::symmetric(n, eps)?, format!("eps={eps}")),
        (None, Some(p), Some(q)) => (
            ChannelEnsemble::uniform(n, BinaryAsymmetricChannel::new(p, q)?)?,
            format!("p={p},q={q}"),
        ),
        (None, None, None) => {
            bail!(parity_codes::Error::InvalidArgument(
                "specify a channel with --epsilon or with --p and --q".into()
            ))
        }
        _ => bail!(parity_codes::Error::InvalidArgument(
            "--epsilon conflicts with --p/--q".into()
        )),
    };
    let ensemble = match opts.shared_flip {
        Some(rho) => ensemble.with_shared_flip(rho)?,
        None => ensemble,
    };
    Ok((ensemble, label))
}

fn load_config<T: for<'de> Deserialize<'de>>(path: &PathBuf) -> anyhow::Result<T> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading config {}", path.display()))?;
    serde_json::from_str(&text).map_err(|e| {
        parity_codes::Error::InvalidArgument(format!("config {}: {e}", path.display())).into()
    })
}

pub fn run_simulate(
    flags: SimulateOpts,
    config: Option<PathBuf>,
    output: &OutputOpts,
) -> anyhow::Result<()> {
    let file: Option<SimulateOpts> = config.as_ref().map(load_config).transpose()?;
    let opts = flags.merged_with(file);
    if opts.code.is_none() {
        bail!(parity_codes::Error::InvalidArgument(
            "--code is required (identity, repetition, pairwise-parity, hamming74)".into()
        ));
    }
    let code = build_code(&opts)?;
    let (ensemble, channel_label) = build_channel(&opts, code.n())?;
    let trials = opts.trials.unwrap_or(100_000);
    let seed = opts.seed.unwrap_or(0);
    let summary = simulate_summary(&code, &ensemble, &SimConfig::new(trials, seed))?;
    let rows = vec![SimulateRow {
        code_name: code.name().to_string(),
        k: code.k(),
        n: code.n(),
        epsilon_or_pq: channel_label,
        trials,
        seed,
        block_error: summary.block_error,
        std_error: summary.std_error,
    }];
    emit(output.out.as_ref(), &render_rows(&rows, output.format)?)
}

// ----------------------------------------------------------- compare-codes

#[derive(Args, Deserialize, Default, Debug, Clone)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct CompareOpts {
    /// Attribute count K.
    #[arg(long)]
    pub k: Option<usize>,
    /// Binary symmetric channel crossover probability.
    #[arg(long)]
    pub epsilon: Option<f64>,
    /// Largest model count (one model = K outputs) in the sweep.
    #[arg(long = "max-models")]
    pub max_models: Option<usize>,
    /// Monte Carlo trials per row.
    #[arg(long)]
    pub trials: Option<u64>,
    /// Master seed, shared between the two codes at each model count.
    #[arg(long)]
    pub seed: Option<u64>,
}

impl CompareOpts {
    fn merged_with(self, config: Option<CompareOpts>) -> CompareOpts {
        let c = config.unwrap_or_default();
        CompareOpts {
            k: self.k.or(c.k),
            epsilon: self.epsilon.or(c.epsilon),
            max_models: self.max_models.or(c.max_models),
            trials: self.trials.or(c.trials),
            seed: self.seed.or(c.seed),
        }
    }
}

/// One row of the successive-addition study.
#[derive(Serialize)]
struct CompareRow {
    model_count: usize,
    code_name: String,
    #[serde(rename = "K")]
    k: usize,
    #[serde(rename = "N")]
    n: usize,
    epsilon_or_pq: String,
    trials: u64,
    seed: u64,
    block_error: f64,
    std_error: f64,
    mean_hamming_distance: f64,
    mean_bit_accuracy: f64,
}

/// Successive addition: at model count c the repetition side fields c
/// copies of the primitive block (N = cK) and the parity side the first
/// min(cK, K + K(K-1)/2) checks of the pairwise-parity code.
pub fn run_compare_codes(
    flags: CompareOpts,
    config: Option<PathBuf>,
    output: &OutputOpts,
) -> anyhow::Result<()> {
    let file: Option<CompareOpts> = config.as_ref().map(load_config).transpose()?;
    let opts = flags.merged_with(file);
    let k = opts
        .k
        .ok_or_else(|| parity_codes::Error::InvalidArgument("--k is required".into()))?;
    let epsilon = opts.epsilon.unwrap_or(0.05);
    let max_models = opts.max_models.unwrap_or(6);
    let trials = opts.trials.unwrap_or(100_000);
    let seed = opts.seed.unwrap_or(0);
    if max_models == 0 {
        bail!(parity_codes::Error::InvalidArgument(
            "--max-models must be >= 1".into()
        ));
    }

    let parity_full = OutputCode::pairwise_parity(k)?;
    let mut rows = Vec::with_capacity(2 * max_models);
    for count in 1..=max_models {
        let repetition = OutputCode::repetition(k, count)?;
        let parity_n = (count * k).min(parity_full.n());
        let parity =
            parity_full.truncate(parity_n, format!("pairwise-parity-{k}[..{parity_n}]"))?;
        for code in [repetition, parity] {
            let ensemble = ChannelEnsemble::symmetric(code.n(), epsilon)?;
            let summary = simulate_summary(&code, &ensemble, &SimConfig::new(trials, seed))?;
            let mean_bit_accuracy = summary.bit_accuracy.iter().sum::<f64>() / code.k() as f64;
            rows.push(CompareRow {
                model_count: count,
                code_name: code.name().to_string(),
                k: code.k(),
                n: code.n(),
                epsilon_or_pq: format!("eps={epsilon}"),
                trials,
                seed,
                block_error: summary.block_error,
                std_error: summary.std_error,
                mean_hamming_distance: summary.mean_hamming_distance,
                mean_bit_accuracy,
            });
        }
    }
    emit(output.out.as_ref(), &render_rows(&rows, output.format)?)
}

// -------------------------------------------------- confidence / estimate

#[derive(Args, Debug)]
pub struct EstimatorOpts {
    /// Accuracy threshold alpha in (0,1).
    #[arg(long)]
    pub alpha: f64,
    /// Accuracy deviation threshold eps1 (>= 0).
    #[arg(long)]
    pub eps1: f64,
    /// Fraction deviation threshold eps2 in (0,1).
    #[arg(long)]
    pub eps2: f64,
    /// Number of categories sampled (N).
    #[arg(long)]
    pub n: usize,
    /// Instances sampled per category (M).
    #[arg(long)]
    pub m: usize,
}

impl EstimatorOpts {
    fn params(&self) -> anyhow::Result<EstimatorParams> {
        Ok(EstimatorParams::new(
            self.alpha, self.n, self.m, self.eps1, self.eps2,
        )?)
    }
}

pub fn run_confidence(
    opts: &EstimatorOpts,
    grid_step: f64,
    output: &OutputOpts,
) -> anyhow::Result<()> {
    let (confidence, sweep) = confidence_bound(&opts.params()?, grid_step)?;
    emit_json(
        output.out.as_ref(),
        &json!({
            "confidence": confidence,
            "minimizing_theta": sweep.minimizing_theta,
            "grid_step": sweep.grid_step,
            "refined": sweep.refined,
        }),
    )
}

pub fn run_estimate(
    opts: &EstimatorOpts,
    seed: u64,
    oracle_spec: Option<&PathBuf>,
    output: &OutputOpts,
) -> anyhow::Result<()> {
    let oracle = match oracle_spec {
        Some(path) => {
            let spec: OracleSpec = load_config(path)?;
            TabulatedOracle::from_spec(&spec)?
        }
        // stand-in for a perfect classifier: one category, always correct
        None => TabulatedOracle::uniform(vec![1.0])?,
    };
    let result = run_estimation(&oracle, &opts.params()?, seed)?;
    emit_json(
        output.out.as_ref(),
        &json!({
            "q_hat": result.q_hat,
            "lower_bound": result.lower_bound,
            "confidence": result.confidence,
            "minimizing_theta": result.minimizing_theta,
        }),
    )
}

// ---------------------------------------------------------------- xor-demo

#[derive(Args, Debug)]
pub struct XorDemoOpts {
    /// Number of binary features.
    #[arg(long)]
    pub k: usize,
    /// Comma-separated parity support indices, e.g. "0,1".
    #[arg(long)]
    pub support: String,
    /// Label noise flip probability.
    #[arg(long, default_value_t = 0.0)]
    pub noise: f64,
    /// Number of samples to draw.
    #[arg(long, default_value_t = 256)]
    pub samples: usize,
    /// Perceptron epoch budget.
    #[arg(long = "max-epochs", default_value_t = 1000)]
    pub max_epochs: usize,
    /// Seed for dataset generation and presentation order.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

pub fn run_xor_demo(opts: &XorDemoOpts, output: &OutputOpts) -> anyhow::Result<()> {
    let support: Vec<usize> = opts
        .support
        .split(',')
        .map(|s| {
            s.trim().parse::<usize>().map_err(|_| {
                parity_codes::Error::InvalidArgument(format!(
                    "bad support index '{s}' (expected comma-separated integers)"
                ))
            })
        })
        .collect::<Result<_, _>>()?;
    let data = parity_dataset(opts.k, &support, opts.noise, opts.samples, opts.seed)?;
    let raw = train_perceptron(&data, opts.max_epochs, opts.seed)?;
    let transformed_data: Vec<(Vec<f64>, i8)> = data
        .iter()
        .map(|(x, y)| Ok((quad_transform(x)?, *y)))
        .collect::<parity_codes::Result<_>>()?;
    let transformed = train_perceptron(&transformed_data, opts.max_epochs, opts.seed)?;
    emit_json(
        output.out.as_ref(),
        &json!({
            "raw_converged": raw.converged,
            "transformed_converged": transformed.converged,
            "epochs_raw": raw.epochs_used,
            "epochs_transformed": transformed.epochs_used,
        }),
    )
}

// ---------------------------------------------------------------- bag-plan

pub fn run_bag_plan(n_items: usize, n_targets: usize, output: &OutputOpts) -> anyhow::Result<()> {
    let plan = crate::bagging::plan_targeted_bagging(n_items, n_targets)?;
    emit_json(
        output.out.as_ref(),
        &json!({
            "n_items": plan.n_items,
            "n_targets": plan.assignments.len(),
            "assignments": plan.assignments,
        }),
    )
}

pub const DEFAULT_GRID_STEP_HELP: f64 = DEFAULT_GRID_STEP;
