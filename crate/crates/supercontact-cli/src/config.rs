//! Flag validation and grid resolution.
//!
//! Every subcommand shares one flag vocabulary ([`CommonOpts`]); a
//! [`RunConfig`] is the validated form. Weight axes may be given either as
//! a single value (`--lambda`) or as an inclusive range
//! (`--lambda-min/--lambda-max/--lambda-step`), never both. A range whose
//! lower end exceeds its upper end is a legal empty axis.

use std::fmt;
use std::path::PathBuf;

use clap::{Args, ValueEnum};
use supercontact::cohomology::default_truncation;
use supercontact::{Scalar, Truncation};

/// A refused run. Both variants map to exit code 2: nothing mathematical
/// was decided.
#[derive(Debug)]
pub enum CliError {
    /// The flags do not describe a runnable job.
    Config(String),
    /// The job was runnable but reading or writing failed.
    Io(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "configuration error: {m}"),
            CliError::Io(m) => write!(f, "i/o error: {m}"),
        }
    }
}

impl std::error::Error for CliError {}

/// Output rendering selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    /// Machine-readable; byte-identical across runs with the same flags.
    Json,
    /// Human-readable tables.
    Text,
}

/// Acting algebra for the invariant-operator classifier.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AlgebraOpt {
    /// The three even generators, acting on the classical coefficient
    /// spaces.
    Sl2,
    /// The five generators free of the second odd variable, acting on the
    /// full coefficient space.
    Osp12,
}

/// Weight-shift family for the classifier. The numeric tokens are opaque
/// names: `11` selects the half-step shift `mu = lambda + k - 1/2`
/// (even operators), `12` the integer shift `mu = lambda + k` (odd
/// operators).
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OpTypeOpt {
    #[value(name = "11")]
    HalfStep,
    #[value(name = "12")]
    IntegerStep,
}

fn parse_scalar(s: &str) -> Result<Scalar, String> {
    s.parse::<Scalar>().map_err(|e| e.to_string())
}

/// Flags accepted by every subcommand. Flags that a subcommand has no use
/// for are accepted and ignored, so one invocation vocabulary covers the
/// whole tool.
#[derive(Debug, Args)]
pub struct CommonOpts {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,

    /// Write the report to this file instead of standard output.
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,

    /// Derivative-order bound for dimension windows (default per cell:
    /// 2|mu - lambda| + 6, rounded up).
    #[arg(long, value_name = "N", value_parser = clap::value_parser!(u32).range(1..))]
    pub order: Option<u32>,

    /// Coefficient x-degree bound for dimension windows (default 4).
    #[arg(long, value_name = "M", value_parser = clap::value_parser!(u32).range(1..))]
    pub degree: Option<u32>,

    /// Take cohomology relative to the five-generator subalgebra.
    #[arg(long)]
    pub relative: bool,

    /// Source weight, as `p` or `p/q`.
    #[arg(long, value_name = "p/q", value_parser = parse_scalar, allow_hyphen_values = true)]
    pub lambda: Option<Scalar>,

    /// Target weight, as `p` or `p/q`.
    #[arg(long, value_name = "p/q", value_parser = parse_scalar, allow_hyphen_values = true)]
    pub mu: Option<Scalar>,

    /// Lower end of the source-weight axis (inclusive).
    #[arg(long, value_name = "p/q", value_parser = parse_scalar, allow_hyphen_values = true)]
    pub lambda_min: Option<Scalar>,

    /// Upper end of the source-weight axis (inclusive).
    #[arg(long, value_name = "p/q", value_parser = parse_scalar, allow_hyphen_values = true)]
    pub lambda_max: Option<Scalar>,

    /// Step of the source-weight axis (default 1/2; must be positive).
    #[arg(long, value_name = "p/q", value_parser = parse_scalar, allow_hyphen_values = true)]
    pub lambda_step: Option<Scalar>,

    /// Lower end of the target-weight axis (inclusive).
    #[arg(long, value_name = "p/q", value_parser = parse_scalar, allow_hyphen_values = true)]
    pub mu_min: Option<Scalar>,

    /// Upper end of the target-weight axis (inclusive).
    #[arg(long, value_name = "p/q", value_parser = parse_scalar, allow_hyphen_values = true)]
    pub mu_max: Option<Scalar>,

    /// Step of the target-weight axis (default 1/2; must be positive).
    #[arg(long, value_name = "p/q", value_parser = parse_scalar, allow_hyphen_values = true)]
    pub mu_step: Option<Scalar>,

    /// Level bound: the operator order for single classifications, the
    /// level cap for variety scans.
    #[arg(long, value_name = "K")]
    pub k: Option<u32>,

    /// Worker-pool size for grid cells and suite cases (default: all
    /// available cores).
    #[arg(long, value_name = "W", value_parser = clap::value_parser!(u32).range(1..))]
    pub jobs: Option<u32>,
}

/// One resolved weight axis.
#[derive(Debug, Clone)]
pub enum AxisSpec {
    /// No flag touched this axis.
    Unset,
    /// `--lambda v` style: exactly one value.
    Single(Scalar),
    /// `--lambda-min/--lambda-max/--lambda-step` style, expanded.
    Range(Vec<Scalar>),
}

impl AxisSpec {
    pub fn is_set(&self) -> bool {
        !matches!(self, AxisSpec::Unset)
    }

    pub fn values(&self) -> Vec<Scalar> {
        match self {
            AxisSpec::Unset => Vec::new(),
            AxisSpec::Single(v) => vec![v.clone()],
            AxisSpec::Range(vs) => vs.clone(),
        }
    }
}

fn resolve_axis(
    name: &str,
    single: Option<Scalar>,
    min: Option<Scalar>,
    max: Option<Scalar>,
    step: Option<Scalar>,
) -> Result<AxisSpec, CliError> {
    let range_touched = min.is_some() || max.is_some() || step.is_some();
    if single.is_some() && range_touched {
        return Err(CliError::Config(format!(
            "--{name} conflicts with --{name}-min/--{name}-max/--{name}-step"
        )));
    }
    if let Some(v) = single {
        return Ok(AxisSpec::Single(v));
    }
    if !range_touched {
        return Ok(AxisSpec::Unset);
    }
    let (lo, hi) = match (min, max) {
        (Some(lo), Some(hi)) => (lo, hi),
        _ => {
            return Err(CliError::Config(format!(
                "--{name}-min and --{name}-max must be given together"
            )))
        }
    };
    let step = step.unwrap_or(Scalar::new(1, 2));
    if step.is_negative() || step.is_zero() {
        return Err(CliError::Config(format!(
            "--{name}-step must be positive, got {step}"
        )));
    }
    let mut values = Vec::new();
    let mut v = lo;
    while v <= hi {
        values.push(v.clone());
        v = &v + &step;
    }
    Ok(AxisSpec::Range(values))
}

/// A validated run plan.
#[derive(Debug)]
pub struct RunConfig {
    pub format: Format,
    pub out: Option<PathBuf>,
    pub order: Option<u32>,
    pub degree: Option<u32>,
    pub relative: bool,
    pub lambda: AxisSpec,
    pub mu: AxisSpec,
    pub k: Option<u32>,
    pub jobs: usize,
}

impl RunConfig {
    pub fn from_opts(opts: CommonOpts) -> Result<Self, CliError> {
        let lambda = resolve_axis(
            "lambda",
            opts.lambda,
            opts.lambda_min,
            opts.lambda_max,
            opts.lambda_step,
        )?;
        let mu = resolve_axis("mu", opts.mu, opts.mu_min, opts.mu_max, opts.mu_step)?;
        let jobs = match opts.jobs {
            Some(w) => w as usize,
            None => std::thread::available_parallelism()
                .map(|n| n.get())
                .unwrap_or(1),
        };
        Ok(RunConfig {
            format: opts.format,
            out: opts.out,
            order: opts.order,
            degree: opts.degree,
            relative: opts.relative,
            lambda,
            mu,
            k: opts.k,
            jobs,
        })
    }

    /// The weight grid `(lambda values, mu values)`.
    ///
    /// With `default_when_unset` false the grid exists only when some
    /// weight flag was given (the verify subcommand adds cells only on
    /// request); with it true, an untouched axis falls back to the
    /// documented default. In both modes an untouched mu axis mirrors the
    /// lambda axis, and an untouched lambda axis (with mu given) falls
    /// back to the default axis.
    pub fn weight_grid(&self, default_when_unset: bool) -> Option<(Vec<Scalar>, Vec<Scalar>)> {
        if !default_when_unset && !self.lambda.is_set() && !self.mu.is_set() {
            return None;
        }
        let lambdas = if self.lambda.is_set() {
            self.lambda.values()
        } else {
            default_axis()
        };
        let mus = if self.mu.is_set() {
            self.mu.values()
        } else {
            lambdas.clone()
        };
        Some((lambdas, mus))
    }

    /// The dimension window for one cell: the per-cell default with any
    /// `--order`/`--degree` override applied.
    pub fn window_for(&self, lambda: &Scalar, mu: &Scalar) -> Truncation {
        let mut t = default_truncation(lambda, mu);
        if let Some(n) = self.order {
            t.order = n;
        }
        if let Some(m) = self.degree {
            t.degree = m;
        }
        t
    }
}

/// The default weight axis: -2 to 2 in half steps.
pub fn default_axis() -> Vec<Scalar> {
    let mut values = Vec::new();
    for twice in -4..=4i64 {
        values.push(Scalar::new(twice, 2));
    }
    values
}
