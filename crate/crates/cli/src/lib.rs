//! Argument handling for the `gquot` binary.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::time::Instant;

use clap::{Parser, Subcommand};
use gquot::coset::{CertificateKind, DEFAULT_MAX_COSETS};
use gquot::families::FamilyKind;
use gquot::limits::{st3_rank_bound, LimitSystem};
use gquot::report::{self, Check, Profile, Report, DEFAULT_SEED};
use gquot::stab::{PairFamily, MAX_PAIR_INDEX};
use gquot::{Alphabet, Error, FreeWord};

pub const EXIT_USAGE: i32 = 64;

#[derive(Parser, Debug)]
#[command(name = "gquot", version, about = "Checks on the finite quotients of the first Grigorchuk group")]
struct Cli {
    /// Write the JSON report to this path ("-" for standard output).
    #[arg(long, global = true)]
    json: Option<String>,
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// default or deep
    #[arg(long, global = true, default_value = "default")]
    profile: String,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// |G_n| from the stabilizer chain.
    Order {
        #[arg(long)]
        level: usize,
    },
    /// Evaluates a relator family on a tree level.
    CheckRelators {
        #[arg(long)]
        family: String,
        #[arg(long)]
        level: usize,
        /// Family parameter (level of the presentation, or Lysenok cutoff); defaults to --level.
        #[arg(long)]
        n: Option<usize>,
    },
    /// Todd-Coxeter enumeration of thm1, thm4 or wreath.
    Enumerate {
        #[arg(long)]
        family: String,
        #[arg(long)]
        level: usize,
        #[arg(long, default_value_t = DEFAULT_MAX_COSETS)]
        max_cosets: usize,
    },
    Abelianization {
        #[arg(long)]
        family: String,
        #[arg(long)]
        level: usize,
    },
    /// Mod-2 multiplicator of the three-generator presentation.
    Multiplier {
        #[arg(long)]
        level: usize,
    },
    Qn {
        #[arg(long)]
        level: usize,
    },
    /// psi(x_i) = (1, x_(i-1)); all families unless --family is given.
    PairIdentities {
        #[arg(long)]
        family: Option<String>,
        /// Largest index.
        #[arg(long, default_value_t = MAX_PAIR_INDEX)]
        n: usize,
    },
    Kernels {
        #[arg(long)]
        level: usize,
    },
    BranchWp {
        #[arg(long)]
        word: String,
    },
    InvariantHoms {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        /// Defaults to d(St(3)) in G_6.
        #[arg(long)]
        kernel_bound: Option<u64>,
    },
    LimitBound {
        /// Comma-separated non-decreasing dimensions; defaults to 2n+1 for n = 3..=10000.
        #[arg(long)]
        dims: Option<String>,
        #[arg(long)]
        kernel_bound: Option<u64>,
        /// M
        #[arg(long)]
        target: u64,
    },
    ReportAll,
}

#[derive(Debug)]
pub enum CliError {
    /// Help or version text; not an error.
    Display(String),
    Usage(String),
    /// A computation stopped at a resource cap before producing checks.
    Resource(String),
    Failed(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Display(_) => 0,
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Resource(_) => 2,
            CliError::Failed(_) => 1,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Resource(_) => CliError::Resource(e.to_string()),
            Error::Parse { .. } | Error::Invalid(_) | Error::LevelOutOfRange { .. } | Error::AlphabetMismatch { .. } => {
                CliError::Usage(e.to_string())
            }
            _ => CliError::Failed(e.to_string()),
        }
    }
}

/// Output options that apply after the report is built.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub json: Option<String>,
}

fn family(s: &str) -> Result<FamilyKind, CliError> {
    FamilyKind::from_name(s).ok_or_else(|| CliError::Usage(format!("unknown family {s:?}")))
}

fn parse_dims(s: &str) -> Result<Vec<u64>, CliError> {
    s.split(',')
        .map(|x| x.trim().parse::<u64>().map_err(|e| CliError::Usage(format!("bad dimension {x:?}: {e}"))))
        .collect()
}

fn kernel_bound(given: Option<u64>) -> Result<u64, CliError> {
    match given {
        Some(n) => Ok(n),
        None => Ok(st3_rank_bound(6)?),
    }
}

/// Parses `argv` (including the program name) and runs the command.
pub fn run<I, T>(argv: I) -> Result<(Report, Output), CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = Cli::try_parse_from(argv).map_err(|e| match e.kind() {
        clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => CliError::Display(e.to_string()),
        _ => CliError::Usage(e.to_string()),
    })?;
    let profile = Profile::from_name(&cli.profile).ok_or_else(|| CliError::Usage(format!("unknown profile {:?}", cli.profile)))?;
    let output = Output { json: cli.json.clone() };
    let mut params = BTreeMap::new();
    let mut param = |k: &str, v: String| {
        params.insert(k.to_string(), v);
    };
    let start = Instant::now();
    let (name, checks): (&str, Vec<Check>) = match &cli.command {
        Command::ReportAll => {
            return Ok((report::report_all(profile, cli.seed), output));
        }
        Command::Order { level } => {
            param("level", level.to_string());
            ("order", report::order(*level)?)
        }
        Command::CheckRelators { family: f, level, n } => {
            let kind = family(f)?;
            let n = n.unwrap_or(*level);
            param("family", f.clone());
            param("level", level.to_string());
            param("n", n.to_string());
            ("check-relators", report::check_relators(kind, n, *level)?)
        }
        Command::Enumerate { family: f, level, max_cosets } => {
            let kind = CertificateKind::from_name(f).ok_or_else(|| CliError::Usage(format!("unknown presentation {f:?}")))?;
            param("family", f.clone());
            param("level", level.to_string());
            param("max_cosets", max_cosets.to_string());
            ("enumerate", report::enumerate(kind, *level, *max_cosets)?)
        }
        Command::Abelianization { family: f, level } => {
            param("family", f.clone());
            param("level", level.to_string());
            ("abelianization", report::abelianization(family(f)?, *level)?)
        }
        Command::Multiplier { level } => {
            param("level", level.to_string());
            ("multiplier", report::multiplier(*level)?)
        }
        Command::Qn { level } => {
            param("level", level.to_string());
            ("qn", report::qn(*level)?)
        }
        Command::PairIdentities { family: f, n } => {
            let fams: Vec<PairFamily> = match f {
                None => PairFamily::ALL.to_vec(),
                Some(s) => {
                    let mut cs = s.chars();
                    let fam = match (cs.next(), cs.next()) {
                        (Some(c), None) => PairFamily::from_symbol(c),
                        _ => None,
                    };
                    vec![fam.ok_or_else(|| CliError::Usage(format!("unknown pair family {s:?} (one of uvwtUVWT)")))?]
                }
            };
            param("n", n.to_string());
            if let Some(s) = f {
                param("family", s.clone());
            }
            let mut out = Vec::new();
            for fam in fams {
                out.extend(report::pair_identities(fam, *n)?);
            }
            ("pair-identities", out)
        }
        Command::Kernels { level } => {
            param("level", level.to_string());
            ("kernels", report::kernels(*level)?)
        }
        Command::BranchWp { word } => {
            param("word", word.clone());
            let w = FreeWord::parse(Alphabet::Abcd, word)?;
            ("branch-wp", report::branch_wp(&w)?)
        }
        Command::InvariantHoms { n, k, kernel_bound: kb } => {
            let bound = kernel_bound(*kb)?;
            param("n", n.to_string());
            param("k", k.to_string());
            param("kernel_bound", bound.to_string());
            ("invariant-homs", report::invariant_homs(*n, *k, bound)?)
        }
        Command::LimitBound { dims, kernel_bound: kb, target } => {
            let bound = kernel_bound(*kb)?;
            let sys = match dims {
                Some(s) => LimitSystem::new(parse_dims(s)?, bound, 0)?,
                None => LimitSystem::h2_dims(3, 10_000, bound),
            };
            param("dims", dims.clone().unwrap_or_else(|| "2n+1".into()));
            param("kernel_bound", bound.to_string());
            param("target", target.to_string());
            ("limit-bound", report::limit_bound(&sys, *target))
        }
    };
    params.insert("seed".into(), cli.seed.to_string());
    params.insert("profile".into(), cli.profile.clone());
    let mut r = Report::new(name, params);
    r.push_group(name, start.elapsed(), checks);
    Ok((r, output))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dims_and_families() {
        assert_eq!(parse_dims("3, 5,7").unwrap(), vec![3, 5, 7]);
        assert!(matches!(parse_dims("3,x"), Err(CliError::Usage(_))));
        assert!(family("thm4").is_ok());
        assert_eq!(family("thm9").unwrap_err().exit_code(), EXIT_USAGE);
    }

    #[test]
    fn error_classes() {
        assert_eq!(CliError::from(Error::Resource("cap".into())).exit_code(), 2);
        assert_eq!(CliError::from(Error::Exhausted).exit_code(), 1);
        assert_eq!(CliError::from(Error::Invalid("x".into())).exit_code(), EXIT_USAGE);
    }
}
