//! Command-line surface and the validated run configuration.

use std::path::PathBuf;
use std::time::Duration;

use clap::{Parser, Subcommand, ValueEnum};
use mzv_core::zeta::{OrderPolicy, RelationSet, Side};
use mzv_core::{Alphabet, BasisId, BasisKind};

use crate::CliError;

/// Weights above this need `--large`.
pub const DESK_LIMIT: usize = 10;

#[derive(Debug, Parser)]
#[command(name = "mzv", version, about = "Polyzeta relations over Lyndon-word bases")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Largest weight to compute (at least 2).
    #[arg(long, global = true, default_value_t = 6)]
    pub max_weight: usize,

    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,

    /// Write the output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Allow weights above 10 (slow, memory hungry).
    #[arg(long, global = true)]
    pub large: bool,

    /// Stop starting new weights after this many seconds; results are then partial.
    #[arg(long, global = true)]
    pub time_limit: Option<u64>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List Lyndon words with their standard factorizations.
    Lyndon {
        #[arg(long, value_enum, default_value_t = AlphabetArg::Y)]
        alphabet: AlphabetArg,
    },
    /// Print basis elements, one word or every word of each weight.
    Basis {
        #[arg(long, value_enum, default_value_t = BasisArg::Sigma)]
        basis: BasisArg,
        /// Defaults to y for Pi and Sigma, x otherwise.
        #[arg(long, value_enum)]
        alphabet: Option<AlphabetArg>,
        /// A single word, e.g. `2,1` over Y or `0011` over X.
        #[arg(long)]
        word: Option<String>,
        /// Only Lyndon-indexed elements.
        #[arg(long)]
        lyndon_only: bool,
    },
    /// Coordinates of a homogeneous polynomial in a basis.
    Decompose {
        #[arg(long, value_enum, default_value_t = BasisArg::Sigma)]
        basis: BasisArg,
        #[arg(long, value_enum)]
        alphabet: Option<AlphabetArg>,
        /// Terms `coeff:word` separated by `;`, e.g. `1:2,1;-1/2:3`.
        #[arg(long)]
        poly: String,
    },
    /// Generated relations, optionally checked numerically.
    Relations {
        #[arg(long, value_enum, default_value_t = RelationsArg::Bridge)]
        relations: RelationsArg,
        #[command(flatten)]
        numeric: NumericArgs,
    },
    /// Rewrite rules paired across both sides, and irreducibles per weight.
    Tables {
        #[arg(long, value_enum, default_value_t = RelationsArg::Bridge)]
        relations: RelationsArg,
        #[arg(long, value_enum, default_value_t = OrderArg::Tabulated)]
        order: OrderArg,
    },
    /// Irreducible coordinates per weight.
    Irreducibles {
        #[arg(long, value_enum, default_value_t = RelationsArg::Bridge)]
        relations: RelationsArg,
        #[arg(long, value_enum, default_value_t = OrderArg::Tabulated)]
        order: OrderArg,
        /// Only this side; both when omitted.
        #[arg(long, value_enum)]
        side: Option<SideArg>,
    },
    /// Run the invariant suites.
    Verify {
        #[command(flatten)]
        numeric: NumericArgs,
    },
}

#[derive(Clone, Copy, Debug, clap::Args)]
pub struct NumericArgs {
    /// Evaluate relations by truncated summation.
    #[arg(long)]
    pub numeric_check: bool,
    #[arg(long, default_value_t = 100_000)]
    pub cutoff: u64,
    /// Relative tolerance.
    #[arg(long, default_value_t = 1e-3)]
    pub tol: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum AlphabetArg {
    X,
    Y,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum BasisArg {
    #[value(name = "P")]
    P,
    #[value(name = "S")]
    S,
    #[value(name = "Pi")]
    Pi,
    #[value(name = "Sigma")]
    Sigma,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SideArg {
    #[value(name = "S")]
    S,
    #[value(name = "Sigma")]
    Sigma,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum RelationsArg {
    Bridge,
    DoubleExpression,
    All,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OrderArg {
    Tabulated,
    GreaterFirst,
    SmallerFirst,
    SingleThenGreatest,
    LongestThenLeast,
}

impl From<AlphabetArg> for Alphabet {
    fn from(a: AlphabetArg) -> Self {
        match a {
            AlphabetArg::X => Alphabet::X,
            AlphabetArg::Y => Alphabet::Y,
        }
    }
}

impl From<SideArg> for Side {
    fn from(s: SideArg) -> Self {
        match s {
            SideArg::S => Side::S,
            SideArg::Sigma => Side::Sigma,
        }
    }
}

impl From<RelationsArg> for RelationSet {
    fn from(r: RelationsArg) -> Self {
        match r {
            RelationsArg::Bridge => RelationSet::Bridge,
            RelationsArg::DoubleExpression => RelationSet::DoubleExpression,
            RelationsArg::All => RelationSet::All,
        }
    }
}

impl From<OrderArg> for OrderPolicy {
    fn from(o: OrderArg) -> Self {
        match o {
            OrderArg::Tabulated => OrderPolicy::Tabulated,
            OrderArg::GreaterFirst => OrderPolicy::GreaterFirst,
            OrderArg::SmallerFirst => OrderPolicy::SmallerFirst,
            OrderArg::SingleThenGreatest => OrderPolicy::SingleThenGreatest,
            OrderArg::LongestThenLeast => OrderPolicy::LongestThenLeast,
        }
    }
}

/// Parsed and validated settings shared by every subcommand.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub max_weight: usize,
    pub format: Format,
    pub out: Option<PathBuf>,
    pub time_limit: Option<Duration>,
    pub task: Task,
}

#[derive(Clone, Debug)]
pub enum Task {
    Lyndon { alphabet: Alphabet },
    Basis { id: BasisId, word: Option<String>, lyndon_only: bool },
    Decompose { id: BasisId, poly: String },
    Relations { set: RelationSet, numeric: Option<Numeric> },
    Tables { set: RelationSet, order: OrderPolicy },
    Irreducibles { set: RelationSet, order: OrderPolicy, side: Option<Side> },
    Verify { numeric: Option<Numeric> },
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Numeric {
    pub cutoff: u64,
    pub tol: f64,
}

fn basis_id(basis: BasisArg, alphabet: Option<AlphabetArg>) -> Result<BasisId, CliError> {
    let kind = match basis {
        BasisArg::P => BasisKind::P,
        BasisArg::S => BasisKind::S,
        BasisArg::Pi => BasisKind::Pi,
        BasisArg::Sigma => BasisKind::Sigma,
    };
    let alphabet = match (alphabet, kind) {
        (Some(a), _) => a.into(),
        (None, BasisKind::Pi | BasisKind::Sigma) => Alphabet::Y,
        (None, _) => Alphabet::X,
    };
    BasisId::new(kind, alphabet).map_err(|e| CliError::Config(e.to_string()))
}

fn numeric(args: NumericArgs) -> Result<Option<Numeric>, CliError> {
    if !args.numeric_check {
        return Ok(None);
    }
    if !(args.tol > 0.0 && args.tol.is_finite()) {
        return Err(CliError::Config(format!("--tol must be positive, got {}", args.tol)));
    }
    if args.cutoff == 0 {
        return Err(CliError::Config("--cutoff must be positive".into()));
    }
    Ok(Some(Numeric { cutoff: args.cutoff, tol: args.tol }))
}

impl RunConfig {
    pub fn from_cli(cli: Cli) -> Result<Self, CliError> {
        if cli.max_weight < 2 {
            return Err(CliError::Config(format!("max_weight >= 2 required, got {}", cli.max_weight)));
        }
        // enumeration and single decompositions stay cheap at any weight
        let heavy = !matches!(cli.command, Command::Lyndon { .. } | Command::Decompose { .. });
        if heavy && cli.max_weight > DESK_LIMIT && !cli.large {
            return Err(CliError::Config(format!(
                "max_weight {} exceeds {DESK_LIMIT}; pass --large to allow it",
                cli.max_weight
            )));
        }
        let task = match cli.command {
            Command::Lyndon { alphabet } => Task::Lyndon { alphabet: alphabet.into() },
            Command::Basis { basis, alphabet, word, lyndon_only } => {
                Task::Basis { id: basis_id(basis, alphabet)?, word, lyndon_only }
            }
            Command::Decompose { basis, alphabet, poly } => Task::Decompose { id: basis_id(basis, alphabet)?, poly },
            Command::Relations { relations, numeric: n } => {
                Task::Relations { set: relations.into(), numeric: numeric(n)? }
            }
            Command::Tables { relations, order } => Task::Tables { set: relations.into(), order: order.into() },
            Command::Irreducibles { relations, order, side } => {
                Task::Irreducibles { set: relations.into(), order: order.into(), side: side.map(Into::into) }
            }
            Command::Verify { numeric: n } => Task::Verify { numeric: numeric(n)? },
        };
        Ok(RunConfig {
            max_weight: cli.max_weight,
            format: cli.format,
            out: cli.out,
            time_limit: cli.time_limit.map(Duration::from_secs),
            task,
        })
    }

    /// Whether the run goes past the desk-scale weight.
    pub fn is_large(&self) -> bool {
        self.max_weight > DESK_LIMIT
    }
}
