//! `lorentzian-fans`: reads fans, matroids and divisors as JSON and writes
//! JSON reports.
//!
//! Exit codes: 0 when a result was computed (including a "no" verdict),
//! 2 for input errors, 3 for failed preconditions, 4 for internal errors.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(name = "lorentzian-fans", version, about = "Exact computations on marked simplicial fans")]
struct Cli {
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Cap on worker threads.
    #[arg(long, global = true)]
    jobs: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
pub enum Command {
    /// Check the fan axioms.
    Validate {
        #[arg(long)]
        fan: PathBuf,
    },
    /// Check the balancing condition of the weights (all ones when absent).
    Balance {
        #[arg(long)]
        fan: PathBuf,
    },
    /// Mixed degree of exactly `d` divisors.
    Degree {
        #[arg(long)]
        fan: PathBuf,
        #[arg(long)]
        divisors: PathBuf,
    },
    /// Convexity certificate for each divisor.
    Convexity {
        #[arg(long)]
        fan: PathBuf,
        #[arg(long)]
        divisors: PathBuf,
        /// Only decide weak convexity.
        #[arg(long)]
        weak: bool,
    },
    /// Decide whether the tropical fan is Lorentzian.
    Lorentzian {
        #[arg(long)]
        fan: PathBuf,
        /// Also test the definition on this many random strictly convex samples.
        #[arg(long, requires = "seed")]
        samples: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Alexandrov-Fenchel gap and degree sequence.
    Af {
        #[arg(long)]
        fan: PathBuf,
        /// `D1, D2` followed by `d - 2` auxiliary convex divisors.
        #[arg(long, required_unless_present = "random")]
        divisors: Option<PathBuf>,
        /// Sample this many pairs of strictly convex divisors instead.
        #[arg(long, requires = "seed", conflicts_with = "divisors")]
        random: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Bergman fan of a matroid given by its bases.
    Bergman {
        #[arg(long)]
        matroid: PathBuf,
    },
    /// Product of two tropical fans.
    Product {
        #[arg(long)]
        fan: PathBuf,
        #[arg(long)]
        other: PathBuf,
    },
    /// Star at a cone, given as comma-separated ray indices.
    Star {
        #[arg(long)]
        fan: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        cone: String,
    },
    /// Stellar subdivision at a point of the support, carrying the weights.
    Stellar {
        #[arg(long)]
        fan: PathBuf,
        /// Comma-separated rationals.
        #[arg(long, allow_hyphen_values = true)]
        point: String,
    },
    /// Tropical modification along a strictly convex divisor.
    Modify {
        #[arg(long)]
        fan: PathBuf,
        #[arg(long)]
        divisors: PathBuf,
    },
    /// Fan of dimension `d - 1` obtained by acting with a strictly convex divisor.
    Act {
        #[arg(long)]
        fan: PathBuf,
        #[arg(long)]
        divisors: PathBuf,
    },
    /// Mixed degree and mixed volume of polytopes on a complete fan.
    Mixedvol {
        #[arg(long)]
        polytopes: PathBuf,
    },
    /// Volume polynomial, with its Hessian when the fan is two-dimensional.
    Volpoly {
        #[arg(long)]
        fan: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(4);
        }
    }
    let outcome = commands::run(&cli.command).and_then(|report| {
        let mut text = serde_json::to_string_pretty(&report.value).map_err(commands::Failure::internal)?;
        text.push('\n');
        match &cli.out {
            Some(path) => std::fs::write(path, text).map_err(|e| commands::Failure::input(format!("{}: {e}", path.display())))?,
            None => print!("{text}"),
        }
        Ok(report.code)
    });
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
