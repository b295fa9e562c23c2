use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "pcube", version, about = "Exact checks for p-biased Fourier analysis on the discrete cube")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// p-biased Fourier coefficients of a function.
    Transform(TransformArgs),
    /// Generalised influences `I_S(f)` for small `S`.
    Influences(InfluencesArgs),
    /// Noise stability curves and the concentration checks.
    Stability(StabilityArgs),
    /// Hypercontractive inequalities.
    CheckHyper(HyperArgs),
    /// Restriction and generalised-influence witnesses.
    Isoperimetry(IsoperimetryArgs),
    /// Measure curves, critical probabilities and sharp thresholds.
    Threshold(ThresholdArgs),
    /// Efron-Stein decomposition on finite product spaces.
    Product(ProductArgs),
    /// Invariance for low-degree multilinear polynomials.
    Invariance(InvarianceArgs),
    /// List the generator families.
    Zoo(ZooArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Args, Debug, Clone)]
pub struct OutputArgs {
    /// Output format; each subcommand has its own default.
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Relative tolerance for every verdict.
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
    /// Record wall-clock time per verdict row.
    #[arg(long)]
    pub timing: bool,
}

/// Exactly one of `--fn` (repeatable), `--sweep` or `--table`.
#[derive(Args, Debug, Clone)]
pub struct SourceArgs {
    /// Generator spec such as `antitribes:s=2,w=3`; repeat to sweep.
    #[arg(long = "fn", value_name = "SPEC")]
    pub fns: Vec<String>,
    /// `zoo:n=N`: every generator family that fits in `N` coordinates.
    #[arg(long, value_name = "SPEC")]
    pub sweep: Option<String>,
    /// Truth-table file: header `n p`, then one value per line.
    #[arg(long, value_name = "PATH")]
    pub table: Option<PathBuf>,
    /// Dimension for generators; defaults to the generator's support.
    #[arg(long)]
    pub n: Option<usize>,
    /// Bias values, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub p: Vec<f64>,
}

#[derive(Args, Debug)]
pub struct TransformArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    /// Omit coefficients with absolute value at most this.
    #[arg(long, default_value_t = 0.0)]
    pub min_abs: f64,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Args, Debug)]
pub struct InfluencesArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    #[arg(long, default_value_t = 4)]
    pub r_max: usize,
    /// Run the globalness equivalences at this `r`.
    #[arg(long)]
    pub equivalence: Option<usize>,
    #[arg(long)]
    pub delta: Option<f64>,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Args, Debug)]
pub struct StabilityArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    /// Noise rates, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub rho: Vec<f64>,
    /// Theorem id; without it the stability curve is printed.
    #[arg(long)]
    pub check: Option<String>,
    #[arg(long, value_delimiter = ',', default_value = "2")]
    pub r: Vec<usize>,
    #[arg(long)]
    pub delta: Option<f64>,
    #[arg(long, default_value_t = 0.1)]
    pub eps: f64,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Args, Debug)]
pub struct HyperArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    #[arg(long)]
    pub theorem: String,
    #[arg(long)]
    pub rho: Option<f64>,
    #[arg(long, value_delimiter = ',', default_value = "2")]
    pub r: Vec<usize>,
    #[arg(long, default_value_t = 4)]
    pub q: u32,
    #[arg(long)]
    pub delta: Option<f64>,
    /// Replacement step index; all steps when omitted.
    #[arg(long)]
    pub t: Option<usize>,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Args, Debug)]
pub struct IsoperimetryArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    #[arg(long)]
    pub theorem: String,
    /// `K`; the Bourgain search defaults to the witnessed `pI/(μ(1−μ))`.
    #[arg(long)]
    pub k: Option<f64>,
    #[arg(long, default_value_t = 10.0)]
    pub c: f64,
    #[arg(long)]
    pub s: Option<usize>,
    #[arg(long)]
    pub w: Option<usize>,
    /// Pinned coordinates for `eg2`.
    #[arg(long)]
    pub t: Option<usize>,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Args, Debug)]
pub struct ThresholdArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    /// Theorem id; without it the measure curve is printed.
    #[arg(long)]
    pub theorem: Option<String>,
    /// Points of the measure curve.
    #[arg(long, default_value_t = 32)]
    pub grid: usize,
    #[arg(long, value_delimiter = ',')]
    pub q: Vec<f64>,
    #[arg(long, default_value_t = 1)]
    pub m: usize,
    #[arg(long, default_value_t = 2.0)]
    pub c: f64,
    #[arg(long, default_value_t = 0.25)]
    pub eps: f64,
    #[arg(long, default_value_t = 1e-4)]
    pub h: f64,
    /// Absolute tolerance for the finite-difference identity.
    #[arg(long, default_value_t = 1e-6)]
    pub atol: f64,
    /// `lo,hi` inside `(0, 1/2]`.
    #[arg(long, value_delimiter = ',')]
    pub interval: Option<Vec<f64>>,
    /// Grid size for the globalness certificate.
    #[arg(long, default_value_t = 32)]
    pub grid_size: usize,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Args, Debug)]
pub struct ProductArgs {
    /// Product-space file.
    #[arg(long, conflicts_with = "random")]
    pub file: Option<PathBuf>,
    /// `n,max_arity,seed` for a random space and function.
    #[arg(long, value_delimiter = ',')]
    pub random: Option<Vec<u64>>,
    #[arg(long)]
    pub theorem: Option<String>,
    #[arg(long, default_value_t = 4)]
    pub q: u32,
    #[arg(long)]
    pub rho: Option<f64>,
    /// Sets for the Hölder term, as masks.
    #[arg(long, value_delimiter = ',')]
    pub sets: Vec<usize>,
    /// Absolute tolerance for the decomposition identities.
    #[arg(long, default_value_t = 1e-10)]
    pub atol: f64,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Args, Debug)]
pub struct InvarianceArgs {
    /// Coefficient file with lines `mask value`.
    #[arg(long)]
    pub poly: PathBuf,
    /// Number of variables; defaults to the highest coordinate used.
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long, default_value = "pbiased:p=0.25")]
    pub x: String,
    #[arg(long, default_value = "uniform")]
    pub y: String,
    #[arg(long, default_value = "sigmoid:a=1")]
    pub phi: String,
    #[arg(long, default_value_t = 100_000)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Args, Debug)]
pub struct ZooArgs {
    #[arg(long, default_value_t = 8)]
    pub n: usize,
    #[command(flatten)]
    pub out: OutputArgs,
}
