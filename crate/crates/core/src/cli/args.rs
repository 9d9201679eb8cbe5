use crate::exponents::{fmt_q, parse_rational, Q};
use crate::fit::geometric_ladder;
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_traits::ToPrimitive;
use serde::Serialize;
use std::path::PathBuf;

#[derive(Debug, Parser)]
#[command(name = "torsionlab", version, about = "Class-group torsion, eta invariants and exponent bounds for number fields")]
pub struct Cli {
    /// Worker threads; output does not depend on it.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Field cache directory (default: $TORSIONLAB_CACHE or the user cache dir).
    #[arg(long, global = true)]
    pub cache: Option<PathBuf>,
    /// Compute scans in memory without touching the cache.
    #[arg(long, global = true)]
    pub no_cache: bool,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    /// Class groups of all quadratic fields up to a discriminant bound.
    Scan(ScanArgs),
    /// Moments of l-torsion along a ladder of X.
    Moments(MomentsArgs),
    /// Certified eta_l(K) of a quadratic field.
    Eta(EtaArgs),
    /// Primes up to Y splitting completely in a field.
    Split(SplitArgs),
    /// Fields with few small split primes, and the eta decomposition of a window.
    Badset(BadsetArgs),
    /// Exponent of a moment bound.
    Exponent(ExponentArgs),
    /// Exponents of every family at representative parameters.
    Presets(PresetsArgs),
    /// Counts of polynomials with l-th power end coefficients.
    Polycount(PolycountArgs),
    /// Integer roots of a Galois resolvent.
    Resolvent(ResolventArgs),
    /// Upper-bound sums for dihedral field counts.
    Klueners(KluenersArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Scan(_) => "scan",
            Command::Moments(_) => "moments",
            Command::Eta(_) => "eta",
            Command::Split(_) => "split",
            Command::Badset(_) => "badset",
            Command::Exponent(_) => "exponent",
            Command::Presets(_) => "presets",
            Command::Polycount(_) => "polycount",
            Command::Resolvent(_) => "resolvent",
            Command::Klueners(_) => "klueners",
        }
    }

    pub fn default_format(&self) -> Format {
        match self {
            Command::Scan(_) | Command::Badset(_) | Command::Polycount(_) | Command::Moments(_) => Format::Csv,
            _ => Format::Json,
        }
    }
}

/// A nonnegative integer written as `1000000`, `1e6` or `2.5e3`.
pub fn count(s: &str) -> Result<u64, String> {
    let v = parse_rational(s).map_err(|e| e.to_string())?;
    if !v.is_integer() {
        return Err(format!("{s} is not an integer"));
    }
    v.to_integer().to_u64().ok_or_else(|| format!("{s} is out of range"))
}

pub fn rational(s: &str) -> Result<Q, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

fn ser_q<S: serde::Serializer>(x: &Q, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&fmt_q(x))
}

fn ser_opt_q<S: serde::Serializer>(x: &Option<Q>, s: S) -> Result<S::Ok, S::Error> {
    match x {
        Some(x) => s.serialize_some(&fmt_q(x)),
        None => s.serialize_none(),
    }
}

/// Values of X: `lo:hi:xF` for a geometric ladder or a comma list.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct Ladder(pub Vec<u64>);

pub fn ladder(s: &str) -> Result<Ladder, String> {
    let parts: Vec<&str> = s.split(':').collect();
    let mut v = match parts.as_slice() {
        [lo, hi, step] => {
            let f: f64 = step
                .strip_prefix('x')
                .ok_or_else(|| format!("ladder step {step:?} must look like x2"))?
                .parse()
                .map_err(|_| format!("bad ladder factor in {step:?}"))?;
            geometric_ladder(count(lo)?, count(hi)?, f).map_err(|e| e.to_string())?
        }
        [one] => one.split(',').map(count).collect::<Result<Vec<_>, _>>()?,
        _ => return Err(format!("bad ladder {s:?}")),
    };
    v.sort_unstable();
    v.dedup();
    if v.is_empty() {
        return Err("empty ladder".into());
    }
    Ok(Ladder(v))
}

#[derive(Debug, Args, Serialize)]
pub struct ScanArgs {
    /// imag, real or both.
    #[arg(long, default_value = "imag")]
    pub sign: String,
    #[arg(long, value_parser = count)]
    pub xmax: u64,
    /// Torsion columns to emit.
    #[arg(long, value_delimiter = ',', default_value = "3")]
    pub ell: Vec<u64>,
}

#[derive(Debug, Args, Serialize)]
pub struct MomentsArgs {
    #[arg(long, default_value = "imag")]
    pub sign: String,
    /// l = 0 takes the whole class group.
    #[arg(long)]
    pub ell: u64,
    #[serde(serialize_with = "ser_q")]
    #[arg(long, value_parser = rational, default_value = "1")]
    pub k: Q,
    /// cumulative or dyadic.
    #[arg(long, default_value = "cumulative")]
    pub mode: String,
    #[arg(long, value_parser = ladder)]
    pub ladder: Ladder,
    /// Range `lo:hi` of X for the slope fit (default: the whole ladder).
    #[arg(long)]
    pub fit: Option<String>,
}

#[derive(Debug, Args, Serialize)]
pub struct EtaArgs {
    #[arg(long = "D", allow_hyphen_values = true)]
    pub d: i64,
    #[arg(long)]
    pub ell: u32,
    /// Search only prime pairs of norm at most this bound.
    #[arg(long, value_parser = count)]
    pub bound: Option<u64>,
    /// Largest bound tried when doubling from the default.
    #[arg(long, value_parser = count)]
    pub cap: Option<u64>,
}

#[derive(Debug, Args, Serialize)]
pub struct SplitArgs {
    #[arg(long = "D", allow_hyphen_values = true, conflicts_with = "poly", required_unless_present = "poly")]
    pub d: Option<i64>,
    /// Defining polynomial, e.g. "x^3 - x^2 - 2x + 1".
    #[arg(long)]
    pub poly: Option<String>,
    #[arg(long, value_parser = count)]
    pub y: u64,
    /// List the split primes.
    #[arg(long)]
    pub primes: bool,
}

#[derive(Debug, Args, Serialize)]
pub struct BadsetArgs {
    #[arg(long, default_value = "imag")]
    pub sign: String,
    #[arg(long, value_parser = count)]
    pub x: u64,
    /// Y = X^delta and M = c X^delta / log X.
    #[serde(serialize_with = "ser_q")]
    #[arg(long, value_parser = rational, default_value = "1/12")]
    pub delta: Q,
    #[serde(serialize_with = "ser_q")]
    #[arg(long, value_parser = rational, default_value = "1")]
    pub c: Q,
    /// Split [X, 2X) by the size of eta, taking delta as delta0.
    #[arg(long)]
    pub decompose: bool,
    #[arg(long, default_value_t = 2, requires = "decompose")]
    pub ell: u32,
    /// Y = X^((1 - eps) delta) in the decomposition.
    #[serde(serialize_with = "ser_q")]
    #[arg(long, value_parser = rational, default_value = "1/10", requires = "decompose")]
    pub eps: Q,
}

#[derive(Debug, Args, Serialize)]
pub struct ExponentArgs {
    /// 1.1 to 1.8, or a family name.
    #[arg(long)]
    pub theorem: String,
    #[arg(long)]
    pub ell: u64,
    #[serde(serialize_with = "ser_q")]
    #[arg(long, value_parser = rational)]
    pub k: Q,
    #[arg(long)]
    pub d: Option<u64>,
    #[serde(serialize_with = "ser_opt_q")]
    #[arg(long, value_parser = rational)]
    pub rho: Option<Q>,
    #[serde(serialize_with = "ser_opt_q")]
    #[arg(long, value_parser = rational)]
    pub tau: Option<Q>,
}

#[derive(Debug, Args, Serialize)]
pub struct PresetsArgs {
    /// Primes for the dihedral counting exponents.
    #[arg(long, value_delimiter = ',', default_value = "3,5,7")]
    pub p: Vec<u64>,
}

#[derive(Debug, Args, Serialize)]
pub struct PolycountArgs {
    #[arg(long)]
    pub d: usize,
    #[arg(long, value_delimiter = ',', default_value = "1")]
    pub ell: Vec<u32>,
    #[arg(long, value_parser = ladder, default_value = "50:3200:x2")]
    pub ladder: Ladder,
    /// Count only this Galois group.
    #[arg(long)]
    pub group: Option<String>,
    /// powers or prime-powers.
    #[arg(long, default_value = "powers")]
    pub endpoints: String,
}

#[derive(Debug, Args, Serialize)]
pub struct ResolventArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub poly: String,
    /// D4 or D5.
    #[arg(long)]
    pub group: String,
}

#[derive(Debug, Args, Serialize)]
pub struct KluenersArgs {
    #[arg(long)]
    pub p: u64,
    #[arg(long, value_parser = count, required_unless_present = "ladder", conflicts_with = "ladder")]
    pub x: Option<u64>,
    #[arg(long, value_parser = ladder)]
    pub ladder: Option<Ladder>,
    /// 1 for degree-p fields, 2 for degree-2p fields.
    #[arg(long, default_value_t = 1)]
    pub variant: u32,
    #[arg(long, default_value = "both")]
    pub sign: String,
}
