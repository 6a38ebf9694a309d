use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use exkn::exact_geom::{parse_rational, Rational};
use exkn::paintbox::Support;

fn rational(s: &str) -> Result<Rational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

#[derive(Debug, Parser)]
#[command(name = "exkn", version, about = "Exact laws of the number of distinct values K_n")]
pub struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Csv, global = true)]
    pub format: Format,
    /// Digits after the decimal point in float columns.
    #[arg(long, default_value_t = 12, global = true)]
    pub precision: usize,
    /// Write the record here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Law of K_n under uniform sampling on m values.
    Vnm {
        #[arg(long)]
        n: usize,
        /// Positive integer or `inf`.
        #[arg(long)]
        m: Support,
    },
    /// Law of K_n for a paintbox with the given atoms (remaining mass is dust).
    Law {
        #[arg(long, value_delimiter = ',', value_parser = rational, allow_hyphen_values = true)]
        atoms: Vec<Rational>,
        #[arg(long)]
        n: usize,
    },
    /// Membership of (q1, q3) in the achievable region for K_3.
    RegionCheck(PointArgs),
    /// Certify which v_{n,m} are extreme within the truncated family.
    VerifyExtremes {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m_max: u64,
    },
    /// Evidence that a law lies in the hull of the v_{n,m}.
    HullMember {
        #[arg(long, value_delimiter = ',', value_parser = rational, allow_hyphen_values = true)]
        law: Vec<Rational>,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m_max: u64,
    },
    /// Extreme-point counts of the finite-exchangeable K_3 regions.
    SnTable {
        #[arg(long, default_value_t = 3)]
        m_min: usize,
        #[arg(long)]
        m_max: usize,
    },
    /// Sharp bound on P(K_n = n - 1) for exchangeable partitions of [n + 1].
    SharpBound {
        #[arg(long)]
        n: usize,
    },
    /// K_3 law of the two-parameter model.
    TwoParam(ParamArgs),
    /// Dual parameters swapping P(K_3 = 1) and P(K_3 = 3).
    Dual(ParamArgs),
    /// Parameters with a given (q1, q3).
    Inverse(PointArgs),
    /// Monte Carlo estimate of the law of K_n.
    Sample(SampleArgs),
    /// Data series behind a figure.
    Figure {
        #[arg(long)]
        id: u32,
    },
}

#[derive(Debug, Args)]
pub struct PointArgs {
    #[arg(long, value_parser = rational, allow_hyphen_values = true)]
    pub q1: Rational,
    #[arg(long, value_parser = rational, allow_hyphen_values = true)]
    pub q3: Rational,
}

#[derive(Debug, Args)]
pub struct ParamArgs {
    #[arg(long, value_parser = rational, allow_hyphen_values = true)]
    pub alpha: Rational,
    #[arg(long, value_parser = rational, allow_hyphen_values = true)]
    pub theta: Rational,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Model {
    Crp,
    Paintbox,
    Dirichlet,
}

#[derive(Debug, Args)]
pub struct SampleArgs {
    #[arg(long, value_enum)]
    pub model: Model,
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub reps: u64,
    #[arg(long)]
    pub seed: u64,
    /// crp: discount parameter.
    #[arg(long, value_parser = rational, allow_hyphen_values = true)]
    pub alpha: Option<Rational>,
    /// crp: concentration parameter.
    #[arg(long, value_parser = rational, allow_hyphen_values = true)]
    pub theta: Option<Rational>,
    /// paintbox: atom weights.
    #[arg(long, value_delimiter = ',', value_parser = rational, allow_hyphen_values = true)]
    pub atoms: Vec<Rational>,
    /// dirichlet: number of atoms.
    #[arg(long)]
    pub m: Option<u64>,
    /// dirichlet: common Dirichlet parameter.
    #[arg(long, value_parser = rational)]
    pub neg_alpha: Option<Rational>,
}
