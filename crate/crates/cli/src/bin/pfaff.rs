use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use pfaff_cli::{emit_report, run_command, Command, Format, RunOptions};

/// Pseudoholomorphic curve analyses on real hypersurfaces.
#[derive(Parser, Debug)]
#[command(name = "pfaff", version)]
struct Args {
    #[arg(value_enum)]
    command: Command,
    /// Problem file, or a builtin name (cusp, flat, hyperquadric).
    problem: String,
    #[arg(long)]
    point: Option<String>,
    /// Jet name; for `jets`, a probe name.
    #[arg(long)]
    jet: Option<String>,
    #[arg(long)]
    order: Option<usize>,
    #[arg(long)]
    stratum: Option<String>,
    #[arg(long)]
    rounds: Option<usize>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    #[arg(long, default_value_t = 0x5eed)]
    seed: u64,
    #[arg(long, default_value_t = 16)]
    trials: usize,
    #[arg(long)]
    keep_redundant: bool,
}

fn main() -> ExitCode {
    let args = Args::parse();
    let options = RunOptions {
        point: args.point,
        jet: args.jet,
        order: args.order,
        stratum: args.stratum,
        rounds: args.rounds,
        seed: args.seed,
        keep_redundant: args.keep_redundant,
        trials: args.trials,
    };
    match run_command(args.command, &args.problem, &options) {
        Ok(report) => {
            let bytes = emit_report(&report, args.format);
            if std::io::stdout().write_all(&bytes).is_err() {
                return ExitCode::from(2);
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
