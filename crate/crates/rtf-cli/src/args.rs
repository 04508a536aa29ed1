//! Command-line grammar and the integer-grid syntax shared by the suites.

use clap::{Args, Parser, Subcommand, ValueEnum};

const LITERALS: &str = "Elements of F = F_q((t)) are written as sums of c*t^k terms, where the \
coefficient c is an integer or a power g^j of the fixed generator g of F_q^x, e.g. \"t^2\", \
\"1 + t\", \"g^1*t^-1 + 2*t^3\". An optional trailing \"O(t^P)\" marks a truncated element.\n\n\
Integer grids are comma-separated values and inclusive ranges: \"-4..4\", \"1,3,5\", \"-6..-2,0,2..6\".";

#[derive(Debug, Parser)]
#[command(name = "rtf-lab", version, about = "Exact local orbital integrals and the identities between them", after_help = LITERALS)]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StrategyArg {
    Fast,
    Brute,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OmegaArg {
    /// omega is the restriction of Omega to F^x.
    Restriction,
    /// omega trivial.
    Trivial,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FlavorArg {
    Unramified,
    Ramified,
    Split,
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    pub format: Format,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    pub output: Option<std::path::PathBuf>,
    /// Seed of the unit-part sampler.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Unit parts sampled per valuation.
    #[arg(long, global = true, default_value_t = 3)]
    pub samples: usize,
    /// Extra enumeration depth on top of the test function's own.
    #[arg(long, global = true, default_value_t = 0)]
    pub depth: i64,
    /// Conductor of the additive character psi.
    #[arg(long, global = true, default_value_t = 0, allow_hyphen_values = true)]
    pub c_psi: i64,
    #[arg(long, global = true, value_enum, default_value_t = StrategyArg::Fast)]
    pub strategy: StrategyArg,
    #[arg(long, global = true, value_enum, default_value_t = OmegaArg::Restriction)]
    pub omega: OmegaArg,
    /// Test fixture: flips the right-hand side of the first case.
    #[arg(long, global = true, hide = true)]
    pub inject_mismatch: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Fundamental lemma for 1_{integral, v(det) = m}, E/F unramified.
    Fl {
        #[arg(long)]
        q: u32,
        /// Even m >= 0.
        #[arg(long, allow_hyphen_values = true)]
        m: String,
        /// Window of v(x).
        #[arg(long, allow_hyphen_values = true)]
        vx: String,
    },
    /// Arithmetic fundamental lemma: 2 i(delta(x), f) (-log q) against O'(0, x, Phi).
    Afl {
        #[arg(long)]
        q: u32,
        #[arg(long, allow_hyphen_values = true)]
        m: String,
        /// Odd valuations of x.
        #[arg(long, allow_hyphen_values = true)]
        vx: String,
    },
    /// Matching of orbital integrals.
    #[command(name = "match", subcommand)]
    Match(MatchKind),
    /// Gauss-sum laws over a family of characters.
    Gauss {
        #[arg(long, default_value = "3")]
        q: String,
        /// Conductors of psi.
        #[arg(long, default_value = "0,1,2", allow_hyphen_values = true)]
        conductors: String,
        /// Shells n of the sums.
        #[arg(long, default_value = "-5..5", allow_hyphen_values = true)]
        n: String,
    },
    /// Single orbital-integral evaluations.
    #[command(subcommand)]
    Orbital(OrbitalCmd),
    /// The metric at the infinite place against |inv'(delta)|.
    Minf {
        #[arg(long, default_value = "2,3")]
        q: String,
        /// Regular delta per q.
        #[arg(long, default_value_t = 100)]
        count: usize,
    },
    /// Axioms of special multiplicity functions for a built-in candidate.
    Axioms {
        #[arg(long)]
        q: u32,
        #[arg(long, value_enum, default_value_t = CandidateArg::Unramified)]
        candidate: CandidateArg,
    },
}

#[derive(Debug, Subcommand)]
pub enum MatchKind {
    /// Split place: S-side and G-side of random box functions.
    Split {
        #[arg(long, default_value = "2,3")]
        q: String,
        /// Pairs (Phi, x) per q.
        #[arg(long, default_value_t = 50)]
        pairs: usize,
    },
    /// The explicit functions matching 1_{K_{eps, m}}.
    Smooth {
        #[arg(long)]
        q: u32,
        #[arg(long, value_enum, default_value_t = FlavorArg::Unramified)]
        flavor: FlavorArg,
        #[arg(long, allow_hyphen_values = true)]
        m: String,
    },
    /// 1_{K n S} purely matches 1_{K_1}.
    Kcap {
        #[arg(long)]
        q: u32,
        #[arg(long, allow_hyphen_values = true)]
        vx: String,
    },
}

#[derive(Debug, Subcommand)]
pub enum OrbitalCmd {
    /// Evaluates O(s, x, Phi) on S or O(delta(x), f) on G_eps.
    Eval {
        #[arg(long)]
        q: u32,
        /// KcapS, IntegralDetM(m), KlxiN(l,tr,n), KlxiNPrime(l,tr,n) on S;
        /// Cm(m), KepsM(m), KepsMZ(m), IntegralDetMG(m) on G_eps.
        #[arg(long)]
        phi: String,
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        #[arg(long, value_enum, default_value_t = FlavorArg::Unramified)]
        flavor: FlavorArg,
        /// eps of G_eps (G-side functions only).
        #[arg(long, default_value = "1")]
        eps: String,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CandidateArg {
    /// The unramified multiplicity function on G_t.
    Unramified,
    /// The zero function.
    Zero,
    /// (v(inv') + 1) / 2 without the condition on v(det).
    NoDetCondition,
}

/// Parses "a..b" (inclusive) and comma-separated items into a sorted,
/// deduplicated list. "3..1" is empty.
pub fn parse_grid(s: &str) -> Result<Vec<i64>, String> {
    let mut out = Vec::new();
    for item in s.split(',').map(str::trim).filter(|i| !i.is_empty()) {
        // the separator is the first ".." after a leading sign
        let body = item.strip_prefix('-').map_or(0, |_| 1);
        match item[body..].find("..") {
            Some(i) => {
                let (a, b) = (&item[..body + i], &item[body + i + 2..]);
                let a: i64 = a
                    .trim()
                    .parse()
                    .map_err(|_| format!("bad range start in {item:?}"))?;
                let b: i64 = b
                    .trim()
                    .parse()
                    .map_err(|_| format!("bad range end in {item:?}"))?;
                out.extend(a..=b);
            }
            None => out.push(item.parse().map_err(|_| format!("bad integer {item:?}"))?),
        }
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

/// A grid of field sizes.
pub fn parse_qs(s: &str) -> Result<Vec<u32>, String> {
    parse_grid(s)?
        .into_iter()
        .map(|q| u32::try_from(q).map_err(|_| format!("q = {q} is not a field size")))
        .collect()
}
