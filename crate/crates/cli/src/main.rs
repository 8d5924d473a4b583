//! `chabauty`: exact quadratic Chabauty loci of rank-0 elliptic curves.
//!
//! Exit codes: 0 on success (undecided items are reported, not fatal),
//! 2 for unreadable input or bad arguments, 3 for contract violations,
//! 4 when a computation exceeds the supported degree or precision.

mod commands;
mod input;
mod render;

use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use num_bigint::BigInt;
use serde_json::{json, Value};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Parse(String),
    #[error("{0}")]
    Contract(String),
    #[error("{0}")]
    Capability(String),
    #[error("{0}")]
    Other(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Parse(_) => 2,
            CliError::Contract(_) => 3,
            CliError::Capability(_) => 4,
            CliError::Other(_) => 1,
        }
    }
}

impl From<chabauty::Error> for CliError {
    fn from(e: chabauty::Error) -> Self {
        use chabauty::Error as E;
        let msg = e.to_string();
        match e {
            E::Input(_) | E::Domain(_) | E::SingularModel => CliError::Parse(msg),
            E::Contract(_) | E::OutOfScope(_) => CliError::Contract(msg),
            E::Capability(_) | E::Precision(_) => CliError::Capability(msg),
            E::Data(_) | E::Internal(_) => CliError::Other(msg),
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "chabauty", version, about = "Exact quadratic Chabauty loci of once-punctured rank-0 elliptic curves")]
struct Cli {
    /// Curve file (JSON); `-` reads standard input.
    #[arg(long, global = true)]
    input: Option<PathBuf>,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = 12)]
    n_max: u64,
    #[arg(long, global = true, default_value_t = 4)]
    degree_max: usize,
    /// Prime for `qp` (repeatable), `heights` and extra `reduction` rows.
    #[arg(long = "prime", global = true)]
    primes: Vec<BigInt>,
    /// p-adic digits available for root separation in `qp`.
    #[arg(long, global = true, default_value_t = 64)]
    precision: u32,
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
    /// Assert that the curve has Mordell–Weil rank 0.
    #[arg(long, global = true)]
    assert_rank_zero: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Invariants and the global minimal model.
    Invariants,
    /// Kodaira types, Tamagawa numbers and value sets.
    Reduction,
    /// Residues and stable heights of the points killed by `n`.
    Hst {
        #[arg(long)]
        n: u64,
    },
    /// The locus within the order and degree bounds.
    Locus,
    /// Which locus points are defined over ℚ_p.
    Qp,
    /// Local heights of a point with rational `x` at the places over `--prime`.
    Heights {
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        /// Multipliers for the multiplication identity.
        #[arg(long = "n", default_values_t = [2u64, 3, 4])]
        n: Vec<u64>,
    },
    /// Graded dimension bound for surface groups or given dimensions.
    Witt {
        #[arg(long, conflicts_with = "dims")]
        genus: Option<u64>,
        /// `d1,d2,d3`.
        #[arg(long)]
        dims: Option<String>,
    },
    /// `β_m ∘ β_n = β_{mn}` on sampled torsor points.
    BetaCheck {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        m: u64,
        #[arg(long, default_value_t = 20)]
        samples: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

pub struct Config {
    pub n_max: u64,
    pub degree_max: usize,
    pub primes: Vec<BigInt>,
    pub precision: u32,
    pub jobs: usize,
    pub assert_rank_zero: bool,
}

fn read_input(path: &Option<PathBuf>) -> Result<input::CurveInput, CliError> {
    let path = path.as_ref().ok_or_else(|| CliError::Parse("--input is required for this command".into()))?;
    let text = if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(|e| CliError::Parse(format!("stdin: {e}")))?;
        s
    } else {
        std::fs::read_to_string(path).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?
    };
    input::parse_curve(&text)
}

fn curve_json(c: &input::CurveInput) -> Value {
    json!({
        "label": c.label,
        "a_invariants": c.a_invariants.iter().map(render::rational).collect::<Vec<_>>(),
        "rank_zero_asserted": c.rank_zero_asserted,
    })
}

fn run(cli: &Cli) -> Result<String, CliError> {
    let cfg = Config {
        n_max: cli.n_max,
        degree_max: cli.degree_max,
        primes: cli.primes.clone(),
        precision: cli.precision,
        jobs: cli.jobs,
        assert_rank_zero: cli.assert_rank_zero,
    };
    if cfg.n_max < 2 || cfg.degree_max < 1 || cfg.jobs < 1 || cfg.precision < 1 {
        return Err(CliError::Parse("need --n-max ≥ 2, --degree-max ≥ 1, --jobs ≥ 1 and --precision ≥ 1".into()));
    }
    let (name, curve, outcome) = match &cli.command {
        Command::Witt { genus, dims } => ("witt", Value::Null, commands::witt(*genus, dims.as_deref())?),
        cmd => {
            let input = read_input(&cli.input)?;
            let (name, out) = match cmd {
                Command::Invariants => ("invariants", commands::invariants(&input)?),
                Command::Reduction => ("reduction", commands::reduction(&input, &cfg)?),
                Command::Hst { n } => ("hst", commands::hst(&input, &cfg, *n)?),
                Command::Locus => ("locus", commands::locus(&input, &cfg)?),
                Command::Qp => ("qp", commands::qp(&input, &cfg)?),
                Command::Heights { x, n } => ("heights", commands::heights(&input, &cfg, x, n)?),
                Command::BetaCheck { n, m, samples, seed } => ("beta-check", commands::beta_check(&input, *n, *m, *samples, *seed)?),
                Command::Witt { .. } => unreachable!(),
            };
            (name, curve_json(&input), out)
        }
    };
    let report = json!({
        "command": name,
        "curve": curve,
        "config": {
            "version": env!("CARGO_PKG_VERSION"),
            "n_max": cfg.n_max,
            "degree_max": cfg.degree_max,
            "primes": cfg.primes.iter().map(|p| p.to_string()).collect::<Vec<_>>(),
            "precision": cfg.precision,
            "assert_rank_zero": cfg.assert_rank_zero,
        },
        "result": outcome.result,
        "warnings": outcome.warnings,
        "undecided": outcome.undecided,
    });
    let mut text = serde_json::to_string_pretty(&report).map_err(|e| CliError::Other(e.to_string()))?;
    text.push('\n');
    Ok(text)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = run(&cli).and_then(|text| match &cli.output {
        Some(path) => std::fs::write(path, text).map_err(|e| CliError::Other(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
