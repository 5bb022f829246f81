use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use hopf_chern::connection::Family;
use hopf_chern::paramfield::{parse_rational, BigRational};
use hopf_chern::quantumhopf::SValue;

#[derive(Parser, Debug)]
#[command(
    name = "hopf-chern",
    version,
    about = "Chern numbers of quantum Hopf line bundles"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Pair the Chern–Galois character with the Fredholm trace for each winding number.
    Chern(RunArgs),
    /// Run verification suites and print a pass/fail matrix.
    Verify(VerifyArgs),
    /// Emit (rank, chern) evidence rows.
    Table(RunArgs),
}

/// Inclusive winding-number range `A..B`, or a single integer.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct MuRange {
    pub start: i64,
    pub end: i64,
}

impl MuRange {
    pub fn values(&self) -> Vec<i64> {
        (self.start..=self.end).collect()
    }

    pub fn max_abs(&self) -> i64 {
        self.values().iter().map(|m| m.abs()).max().unwrap_or(0)
    }
}

impl FromStr for MuRange {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parse = |t: &str| {
            t.trim()
                .parse::<i64>()
                .map_err(|_| format!("invalid winding number {t:?}"))
        };
        match s.split_once("..") {
            Some((a, b)) => Ok(MuRange {
                start: parse(a)?,
                end: parse(b)?,
            }),
            None => {
                let m = parse(s)?;
                Ok(MuRange { start: m, end: m })
            }
        }
    }
}

impl fmt::Display for MuRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}..{}", self.start, self.end)
    }
}

/// Exact rational given as `a/b` or an integer.
#[derive(Clone, Debug, PartialEq)]
pub struct Rational(pub BigRational);

impl FromStr for Rational {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        parse_rational(s).map(Rational).map_err(|e| e.to_string())
    }
}

impl Serialize for Rational {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        ser.serialize_str(&self.0.to_string())
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exact,
    Numeric,
    Both,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Connection,
    Idempotent,
    Confluence,
    Representations,
    Quotient,
}

impl Suite {
    pub fn all() -> Vec<Suite> {
        vec![
            Suite::Confluence,
            Suite::Connection,
            Suite::Idempotent,
            Suite::Representations,
            Suite::Quotient,
        ]
    }
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    #[arg(long, default_value = "heegaard", value_parser = parse_family)]
    pub family: Family,
    #[arg(long, default_value = "-2..2", allow_hyphen_values = true)]
    pub mu: MuRange,
    /// Podleś parameter: a rational such as 1/2, or `symbolic`.
    #[arg(long, default_value = "symbolic")]
    pub s: SValue,
    #[arg(long, default_value = "text")]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
}

fn parse_family(s: &str) -> Result<Family, String> {
    s.parse()
}

#[derive(Args, Debug, Clone)]
pub struct RunArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, default_value = "exact")]
    pub mode: Mode,
    #[arg(long)]
    pub p: Option<Rational>,
    #[arg(long)]
    pub q: Option<Rational>,
    #[arg(long, default_value_t = 64)]
    pub truncation: usize,
    /// Per-record checks: `--verify` runs connection and idempotent, or name them.
    #[arg(long, num_args = 0..=1, require_equals = true, default_missing_value = "connection,idempotent", value_delimiter = ',')]
    pub verify: Option<Vec<Suite>>,
    /// Budget for a symbolic-s computation before falling back to sampled values.
    #[arg(long, default_value_t = 300)]
    pub time_budget_secs: u64,
    /// Fill the `elapsed_ms` CSV column; off by default so output is reproducible.
    #[arg(long)]
    pub timings: bool,
}

#[derive(Args, Debug, Clone)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long)]
    pub confluence: bool,
    #[arg(long)]
    pub connection: bool,
    #[arg(long)]
    pub idempotent: bool,
    #[arg(long)]
    pub representations: bool,
    #[arg(long)]
    pub quotient: bool,
    /// Highest quotient degree for `--quotient`.
    #[arg(long, default_value_t = 4)]
    pub degree: usize,
}

impl VerifyArgs {
    pub fn suites(&self) -> Vec<Suite> {
        let picked: Vec<Suite> = [
            (self.confluence, Suite::Confluence),
            (self.connection, Suite::Connection),
            (self.idempotent, Suite::Idempotent),
            (self.representations, Suite::Representations),
            (self.quotient, Suite::Quotient),
        ]
        .into_iter()
        .filter(|(on, _)| *on)
        .map(|(_, s)| s)
        .collect();
        if picked.is_empty() {
            Suite::all()
        } else {
            picked
        }
    }
}

/// Echo of the effective configuration in report metadata.
#[derive(Serialize, Debug, Clone)]
pub struct ConfigEcho {
    pub command: String,
    pub family: Family,
    pub mu: MuRange,
    pub s: String,
    pub mode: Option<Mode>,
    pub p: Option<Rational>,
    pub q: Option<Rational>,
    pub truncation: Option<usize>,
    pub verify: Vec<Suite>,
}

impl RunArgs {
    pub fn echo(&self, command: &str) -> ConfigEcho {
        ConfigEcho {
            command: command.to_string(),
            family: self.common.family,
            mu: self.common.mu,
            s: self.common.s.to_string(),
            mode: Some(self.mode),
            p: self.p.clone(),
            q: self.q.clone(),
            truncation: (self.mode != Mode::Exact).then_some(self.truncation),
            verify: self.verify.clone().unwrap_or_default(),
        }
    }

    /// Numeric mode needs concrete parameters: p and q for family 1, q and a rational s for family 2.
    pub fn validate(&self) -> Result<(), String> {
        if self.mode == Mode::Exact {
            return Ok(());
        }
        if self.q.is_none() {
            return Err("numeric mode requires --q".into());
        }
        match self.common.family {
            Family::Heegaard if self.p.is_none() => Err("numeric mode requires --p".into()),
            Family::Podles if self.common.s == SValue::Symbolic => {
                Err("numeric mode requires a rational --s".into())
            }
            _ => Ok(()),
        }
    }
}
