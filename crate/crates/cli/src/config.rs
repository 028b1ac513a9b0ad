use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Desk-scale ceiling for single-value and per-n commands.
pub const COMPUTE_CEILING: u64 = 5000;
/// Desk-scale ceiling for `verify-all` and exhaustive (n, k) sweeps.
pub const SWEEP_CEILING: u64 = 1000;

pub const CACHE_DIR_ENV: &str = "BINSUM_CACHE_DIR";
pub const CACHE_FILE_NAME: &str = "binsum-cache.json";

#[derive(Debug, Parser)]
#[command(
    name = "binsum",
    version,
    about = "Exact computation and verification of the binomial sums s_n"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Write the report here instead of stdout.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,

    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,

    /// Result cache file. Defaults to $BINSUM_CACHE_DIR/binsum-cache.json when that variable is set.
    #[arg(long, global = true)]
    pub cache: Option<PathBuf>,

    /// Worker threads for parallel sweeps.
    #[arg(long, short = 'j', global = true)]
    pub parallelism: Option<usize>,

    /// Lift the desk-scale ceilings on n.
    #[arg(long, global = true)]
    pub unsafe_large: bool,

    /// Print the big-integer operation count to stderr.
    #[arg(long, global = true)]
    pub stats: bool,

    /// Corrupt one integrality check (test hook).
    #[arg(long, global = true, hide = true)]
    pub inject_fault: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ValueKind {
    /// s_n
    S,
    /// sum_k A(n,k)
    InnerSum,
    /// A(n,k), needs --k
    Summand,
    /// A(n,k) / ((2n-1) C(3n,n)), needs --k
    T,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ClaimArg {
    Mod8,
    Fermat,
    ModP2,
}

/// Either a single `--n` or an inclusive `--n-min..=--n-max` range.
#[derive(Clone, Debug, Default, Args)]
pub struct NRange {
    #[arg(long, conflicts_with_all = ["n_min", "n_max"])]
    pub n: Option<u64>,
    #[arg(long)]
    pub n_min: Option<u64>,
    #[arg(long)]
    pub n_max: Option<u64>,
}

impl NRange {
    /// `(lo, hi, single)`, with `n_min` defaulting to `default_min`.
    pub fn resolve(&self, default_min: u64) -> Result<(u64, u64, bool), String> {
        match (self.n, self.n_min, self.n_max) {
            (Some(n), _, _) => Ok((n, n, true)),
            (None, lo, Some(hi)) => {
                let lo = lo.unwrap_or(default_min);
                if lo > hi {
                    return Err(format!("empty range: n-min {lo} > n-max {hi}"));
                }
                Ok((lo, hi, false))
            }
            (None, _, None) => Err("either --n or --n-max is required".to_string()),
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exact values of s_n, inner sums, summands or quotients.
    Compute {
        #[command(flatten)]
        range: NRange,
        #[arg(long, value_enum, default_value_t = ValueKind::S)]
        kind: ValueKind,
        #[arg(long)]
        k: Option<u64>,
    },
    /// Divisibility certificates for t(n,k); all k unless --k is given.
    Certify {
        #[command(flatten)]
        range: NRange,
        #[arg(long)]
        k: Option<u64>,
    },
    /// Scan the floor inequality over 2 <= m <= m-max, 1 <= n <= n-max.
    ScanFloor {
        #[arg(long, default_value_t = 50)]
        m_max: u64,
        #[arg(long, default_value_t = 200)]
        n_max: u64,
    },
    /// Exact lower and upper bounds on s_n.
    Bounds {
        #[command(flatten)]
        range: NRange,
    },
    /// Growth samples of s_n (CSV columns n, log_s, nth_root, step_ratio, lower_root, upper_root).
    Asymptote {
        #[arg(long, default_value_t = 1000)]
        n_max: u64,
        #[arg(long, default_value_t = 100)]
        stride: u64,
    },
    /// Exact partial sum of the 1/pi series with a certified tail bound.
    PiSeries {
        #[arg(long, default_value_t = 100)]
        terms: u64,
    },
    /// Congruence checks over n (mod8) or primes p (fermat, mod-p2).
    Congruence {
        #[arg(long, value_enum)]
        claim: ClaimArg,
        #[arg(long)]
        max: u64,
        #[arg(long)]
        min: Option<u64>,
    },
    /// Every check at desk scale.
    VerifyAll {
        #[arg(long, default_value_t = 100)]
        n_max: u64,
    },
    /// Factored engine versus naive factorial arithmetic for s_n.
    Bench {
        #[command(flatten)]
        range: NRange,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Compute { .. } => "compute",
            Command::Certify { .. } => "certify",
            Command::ScanFloor { .. } => "scan-floor",
            Command::Bounds { .. } => "bounds",
            Command::Asymptote { .. } => "asymptote",
            Command::PiSeries { .. } => "pi-series",
            Command::Congruence { .. } => "congruence",
            Command::VerifyAll { .. } => "verify-all",
            Command::Bench { .. } => "bench",
        }
    }

    /// Stable key for the result cache.
    pub fn cache_key(&self) -> String {
        format!("{}|{self:?}", self.name())
    }
}

/// Resolved runtime configuration.
#[derive(Debug)]
pub struct RunConfig {
    pub command: Command,
    pub output: Option<PathBuf>,
    pub format: Format,
    pub cache: Option<PathBuf>,
    pub parallelism: usize,
    pub unsafe_large: bool,
    pub stats: bool,
    pub inject_fault: bool,
}

impl RunConfig {
    pub fn from_cli(cli: Cli) -> Result<Self, String> {
        let parallelism = match cli.parallelism {
            Some(0) => return Err("parallelism must be at least 1".to_string()),
            Some(p) => p,
            None => std::thread::available_parallelism().map_or(1, |p| p.get()),
        };
        let cache = cli.cache.or_else(|| {
            std::env::var_os(CACHE_DIR_ENV).map(|dir| PathBuf::from(dir).join(CACHE_FILE_NAME))
        });
        Ok(RunConfig {
            command: cli.command,
            output: cli.output,
            format: cli.format,
            cache,
            parallelism,
            unsafe_large: cli.unsafe_large,
            stats: cli.stats,
            inject_fault: cli.inject_fault,
        })
    }
}
