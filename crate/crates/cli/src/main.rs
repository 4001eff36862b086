//! `coherence-lab`: measures, interferometer runs, property suites and the
//! dephasing demo from the command line.
//!
//! Exit codes: 0 ok, 2 parse or validation failure, 3 dimension mismatch,
//! 4 oracle mismatch, 5 property suite failure.

mod commands;
mod format;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use coherence_lab::measures::Measure;

#[derive(Parser)]
#[command(
    name = "coherence-lab",
    version,
    about = "Interferometric fidelity and coherence measures"
)]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, global = true, default_value_t = Format::Text)]
    format: Format,

    /// Seed for random searches and property suites.
    #[arg(long, global = true, env = "COHERENCE_LAB_SEED", default_value_t = 0)]
    seed: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum MeasureArg {
    Lsp,
    Sp,
    Glsp,
    Gsp,
}

impl From<MeasureArg> for Measure {
    fn from(m: MeasureArg) -> Self {
        match m {
            MeasureArg::Lsp => Measure::FidelityLsp,
            MeasureArg::Sp => Measure::FidelitySp,
            MeasureArg::Glsp => Measure::CoherenceLsp,
            MeasureArg::Gsp => Measure::CoherenceSp,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate one of the four measures on two state files.
    Measure {
        #[arg(long)]
        state_a: PathBuf,
        #[arg(long)]
        state_b: PathBuf,
        #[arg(long, value_enum)]
        measure: MeasureArg,
    },
    /// Interference function of a gluing: formula against dilation simulation.
    Interfere {
        #[arg(long)]
        gluing: PathBuf,
        /// State file for the internal input state.
        #[arg(long)]
        input: PathBuf,
        /// Unitary file applied in arm B after the channel.
        #[arg(long)]
        shift: Option<PathBuf>,
        /// Also print this many evenly spaced phase samples.
        #[arg(long)]
        scan: Option<usize>,
    },
    /// Run every property suite on seeded random instances.
    Verify {
        #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u64).range(2..=4))]
        dim: u64,
        #[arg(long, default_value_t = 100)]
        trials: usize,
    },
    /// Two dilations of qubit dephasing: same channel, different visibility.
    DistinguishDemo,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Measure {
            state_a,
            state_b,
            measure,
        } => commands::measure(&state_a, &state_b, measure.into(), cli.seed, cli.format),
        Command::Interfere {
            gluing,
            input,
            shift,
            scan,
        } => commands::interfere(&gluing, &input, shift.as_deref(), scan, cli.format),
        Command::Verify { dim, trials } => {
            commands::verify(dim as usize, trials, cli.seed, cli.format)
        }
        Command::DistinguishDemo => commands::distinguish_demo(cli.format),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(commands::exit_code(&e))
        }
    }
}
