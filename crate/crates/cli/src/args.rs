use std::path::PathBuf;

use clap::{Args, ValueEnum};
use lyness::flow::Method;
use lyness::{parse_rational, Rat};

use crate::{CliError, CliResult};

/// Default seed when neither `--seed` nor `LYNESS_SEED` is given.
pub const DEFAULT_SEED: u64 = 42;

#[derive(Args)]
pub struct VerifyArgs {
    /// Single dimension to verify.
    #[arg(long, conflicts_with = "k_range")]
    pub k: Option<usize>,
    /// Inclusive range of dimensions, e.g. `3..8`.
    #[arg(long, value_parser = parse_k_range)]
    pub k_range: Option<(usize, usize)>,
    /// Parameter values, as `p/q`, integers or decimals (repeatable).
    #[arg(long = "a", value_parser = parse_rat, default_value = "1")]
    pub a: Vec<Rat>,
    /// Random points per identity.
    #[arg(long, default_value_t = 100)]
    pub trials: usize,
    #[arg(long, env = "LYNESS_SEED", default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Steps of F∘F per semiconjugacy trial.
    #[arg(long, default_value_t = 100)]
    pub reduction_steps: usize,
    /// Print a JSON report on stdout; the text report goes to stderr.
    #[arg(long)]
    pub json: bool,
}

impl VerifyArgs {
    pub fn dimensions(&self) -> Vec<usize> {
        match (self.k, self.k_range) {
            (Some(k), _) => vec![k],
            (None, Some((lo, hi))) => (lo..=hi).collect(),
            (None, None) => (3..=8).collect(),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Jsonl,
}

#[derive(Args)]
pub struct OutputArgs {
    /// Output file; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Args)]
pub struct OrbitArgs {
    #[arg(long)]
    pub k: usize,
    #[arg(long, value_parser = parse_rat)]
    pub a: Rat,
    /// Initial point, comma separated.
    #[arg(long, value_parser = parse_rat, value_delimiter = ',', required = true)]
    pub x0: Vec<Rat>,
    #[arg(long, default_value_t = 1000)]
    pub steps: usize,
    /// Exact rational arithmetic; values are written as `p/q`.
    #[arg(long)]
    pub exact: bool,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args)]
pub struct FlowArgs {
    #[arg(long)]
    pub k: usize,
    #[arg(long, value_parser = parse_rat)]
    pub a: Rat,
    #[arg(long, value_parser = parse_rat, value_delimiter = ',', required = true)]
    pub x0: Vec<Rat>,
    /// Sampling interval (and step of the fixed-step method).
    #[arg(long, default_value_t = 1e-3)]
    pub dt: f64,
    #[arg(long, default_value_t = 10.0)]
    pub t_max: f64,
    /// `rk4` (fixed step) or `rk45` (adaptive).
    #[arg(long, value_parser = parse_method, default_value = "rk4")]
    pub method: Method,
    /// Local error tolerance of the adaptive method.
    #[arg(long, default_value_t = lyness::flow::DEFAULT_TOLERANCE)]
    pub tolerance: f64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args)]
pub struct ReduceArgs {
    /// 3 or 5.
    #[arg(long)]
    pub k: usize,
    #[arg(long, value_parser = parse_rat)]
    pub a: Rat,
    /// Full initial point; kappa is the reciprocal of W there.
    #[arg(long, value_parser = parse_rat, value_delimiter = ',', required = true)]
    pub x0: Vec<Rat>,
    #[arg(long, default_value_t = 20)]
    pub steps: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args)]
pub struct FigureArgs {
    /// Figure preset: 1, 2 or 3.
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=3))]
    pub which: u8,
    /// Output file for the orbit; figure 1 also writes the flow trace next
    /// to it, and every preset writes a `.meta.json` description.
    #[arg(long)]
    pub out: PathBuf,
    /// Coordinates for the 3-d projection, e.g. `1,2,3`.
    #[arg(long, value_parser = parse_projection)]
    pub proj: Option<[usize; 3]>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

pub fn parse_rat(text: &str) -> Result<Rat, String> {
    parse_rational(text.trim()).map_err(|e| e.to_string())
}

fn parse_method(text: &str) -> Result<Method, String> {
    text.parse::<Method>().map_err(|e| e.to_string())
}

fn parse_k_range(text: &str) -> Result<(usize, usize), String> {
    let (lo, hi) = text
        .split_once("..=")
        .or_else(|| text.split_once(".."))
        .ok_or_else(|| format!("expected a range like 3..8, got {text:?}"))?;
    let lo: usize = lo.trim().parse().map_err(|_| format!("bad lower bound in {text:?}"))?;
    let hi: usize = hi.trim().parse().map_err(|_| format!("bad upper bound in {text:?}"))?;
    if lo > hi {
        return Err(format!("empty range {text:?}"));
    }
    Ok((lo, hi))
}

fn parse_projection(text: &str) -> Result<[usize; 3], String> {
    let parts: Vec<usize> = text
        .split(',')
        .map(|t| t.trim().parse::<usize>().map_err(|_| format!("bad coordinate index {t:?}")))
        .collect::<Result<_, _>>()?;
    let [i, j, k] = parts[..] else {
        return Err(format!("expected three indices, got {text:?}"));
    };
    if i == j || j == k || i == k || i == 0 || j == 0 || k == 0 {
        return Err(format!("projection indices must be distinct and >= 1, got {text:?}"));
    }
    Ok([i, j, k])
}

/// Checks `x0` against `k` before any work is done.
pub fn check_dimension(k: usize, x0: &[Rat]) -> CliResult<()> {
    if x0.len() != k {
        return Err(CliError::Usage(format!("--x0 has {} coordinates, expected k = {k}", x0.len())));
    }
    Ok(())
}
