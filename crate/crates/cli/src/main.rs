mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use ranksign::CodeParams;

/// RankSign keys, signatures and parameter analysis.
///
/// Exit status: 0 on success or an accepted signature, 1 on a rejected
/// signature, 2 on usage, format or runtime errors.
#[derive(Parser, Debug)]
#[command(name = "ranksign", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Seed for every random choice; falls back to RANKSIGN_RNG_SEED, then to
    /// OS entropy.
    #[arg(long, global = true, env = "RANKSIGN_RNG_SEED")]
    rng_seed: Option<u64>,

    /// Emit stable key=value lines.
    #[arg(long, global = true)]
    machine: bool,
}

#[derive(Args, Debug, Clone)]
struct ParamsArg {
    /// Preset name (row1..row7, toy-q2, toy-q3, toy-q16), optionally followed
    /// by overrides, or a full list such as `a=8,m=18,n=16,k=8,d=2,t=2,r'=4`.
    #[arg(long, default_value = "row2", value_parser = parse_params)]
    params: CodeParams,
}

fn parse_params(s: &str) -> Result<CodeParams, String> {
    s.parse::<CodeParams>().map_err(|e| e.to_string())
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate a key pair and write <out>.rkpk and <out>.rksk.
    Keygen {
        #[command(flatten)]
        params: ParamsArg,
        #[arg(long, default_value = "ranksign")]
        out: PathBuf,
    },
    /// Sign a message file.
    Sign {
        #[arg(long)]
        secret: PathBuf,
        #[arg(long)]
        message: PathBuf,
        /// Defaults to <message>.rksig.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Verify a signature; exits 0 on accept and 1 on reject.
    Verify {
        #[arg(long)]
        public: PathBuf,
        #[arg(long)]
        message: PathBuf,
        #[arg(long)]
        signature: PathBuf,
    },
    /// Sizes, bounds and attack costs for a parameter set.
    Estimate {
        #[command(flatten)]
        params: ParamsArg,
    },
    /// GVR, Singleton and decodable-syndrome bounds, with the exhaustive
    /// count at toy sizes.
    Bounds {
        #[command(flatten)]
        params: ParamsArg,
    },
    /// Empirical decoding success rate on uniform syndromes.
    DensityExperiment {
        #[command(flatten)]
        params: ParamsArg,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
    },
    /// Key generation, signing and verification throughput.
    Bench {
        #[command(flatten)]
        params: ParamsArg,
        #[arg(long, default_value_t = 100)]
        trials: usize,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
