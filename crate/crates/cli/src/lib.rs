//! Command-line front end for the `boolebell` library.
//!
//! Exit codes: 0 when the data is consistent or no inequality is violated,
//! 1 when it is inconsistent or violated, 2 on parse and usage errors.

pub mod angles;
pub mod commands;
pub mod constraints;
pub mod render;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use boolebell::montecarlo::DEFAULT_TRIALS;
use boolebell::rational::{parse_rational, Rational};
use clap::{Args, Parser, Subcommand, ValueEnum};

use angles::{parse_angle, AngleLiteral};

/// Seed used by `mc` when `--seed` is omitted.
pub const DEFAULT_SEED: u64 = 20240611;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "boolebell", version, about = "Consistency checks for partial probability data and Bell-type inequalities")]
pub struct Cli {
    /// Output format
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,

    #[command(subcommand)]
    pub command: Command,
}

fn rational_arg(text: &str) -> Result<Rational, String> {
    parse_rational(text).map_err(|e| e.to_string())
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide whether a constraint file is realizable by some distribution
    Check {
        file: PathBuf,
        /// Print a realizing atom distribution when the data is consistent
        #[arg(long)]
        witness: bool,
    },
    /// Best bounds on the union or intersection from single-event marginals
    #[command(group = clap::ArgGroup::new("target").required(true).multiple(true))]
    Bounds {
        #[arg(long, value_delimiter = ',', value_parser = rational_arg, group = "target")]
        union: Option<Vec<Rational>>,
        #[arg(long, value_delimiter = ',', value_parser = rational_arg, group = "target")]
        intersection: Option<Vec<Rational>>,
        /// Also print distributions attaining both ends
        #[arg(long)]
        witnesses: bool,
    },
    /// Mix the four strategy classes of the question game to hit a target
    Game {
        /// same(equal), same(A,B), same(B,C), same(A,C)
        #[arg(long, value_delimiter = ',', value_parser = rational_arg)]
        target: Option<Vec<Rational>>,
    },
    /// Evaluate the CH expression for the singlet
    #[command(group = clap::ArgGroup::new("config").required(true))]
    Bell {
        /// alpha1 = pi/3, alpha2 = pi, beta1 = 0, beta2 = 2pi/3
        #[arg(long, group = "config")]
        paper_angles: bool,
        /// alpha1,alpha2,beta1,beta2 in radians or as multiples of pi
        #[arg(long, value_delimiter = ',', value_parser = parse_angle, group = "config")]
        angles: Option<Vec<AngleLiteral>>,
    },
    /// Evaluate the CH expression on a grid over [0, 2pi]^4 and write CSV
    Scan {
        /// Grid points per angle
        #[arg(long, default_value_t = 13)]
        steps: usize,
        /// CSV destination; standard output when omitted
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Seeded sampling experiments
    Mc {
        #[command(subcommand)]
        model: McModel,
    },
}

#[derive(Debug, Clone, Copy, Args)]
pub struct McArgs {
    /// Trials per setting (or per question pair)
    #[arg(long, default_value_t = DEFAULT_TRIALS)]
    pub trials: u64,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long, default_value_t = 0)]
    pub stream: u64,
}

#[derive(Debug, Subcommand)]
pub enum McModel {
    /// Sample the singlet at the four CH settings
    Singlet {
        #[command(flatten)]
        sampling: McArgs,
        /// alpha1,alpha2,beta1,beta2; pi/3,pi,0,2pi/3 when omitted
        #[arg(long, value_delimiter = ',', value_parser = parse_angle)]
        angles: Option<Vec<AngleLiteral>>,
    },
    /// Sample a mixture of the 16 deterministic local assignments
    Lhv {
        #[command(flatten)]
        sampling: McArgs,
        /// 16 weights ordered (a1,a2,b1,b2) from (+,+,+,+) to (-,-,-,-); uniform when omitted
        #[arg(long, value_delimiter = ',', value_parser = rational_arg)]
        mixing: Option<Vec<Rational>>,
    },
    /// Same-answer frequencies of the entangled question game
    BellEffect {
        #[command(flatten)]
        sampling: McArgs,
    },
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{}", .diagnostics.iter().map(|d| format!("{}:{d}", .path)).collect::<Vec<_>>().join("\n"))]
    Parse {
        path: String,
        diagnostics: Vec<constraints::Diagnostic>,
    },
    #[error(transparent)]
    Library(#[from] boolebell::Error),
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

/// Text and JSON renderings of one command result plus its exit code.
pub struct Report {
    pub text: String,
    pub json: serde_json::Value,
    pub code: u8,
}

/// Parses `args` (program name first), runs the command and writes its output.
/// Returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let rendered = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(rendered.as_bytes())
            } else {
                out.write_all(rendered.as_bytes())
            };
            return code;
        }
    };
    match commands::execute(&cli.command) {
        Ok(report) => {
            let body = match cli.format {
                Format::Text => report.text,
                Format::Json => {
                    let mut s = serde_json::to_string_pretty(&report.json).expect("serializable");
                    s.push('\n');
                    s
                }
            };
            if out.write_all(body.as_bytes()).is_err() {
                return 2;
            }
            report.code
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}
