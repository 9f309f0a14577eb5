use std::ffi::OsString;
use std::fs::File;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use acm_explorer::{run_scenario, validate_law, ExploreOptions, Law, LawConfig, Scenario};
use acm_machine::{MachineId, Mutation};
use clap::Parser;

use crate::report::{emit_report, Format, Report};
use crate::stress::{run_stress, Pacing, StressConfig};
use crate::{run_demo, HarnessError};

#[derive(Debug, Parser)]
#[command(name = "acm", version, about = "Four-slot ACM verification workbench")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, clap::Subcommand)]
enum Command {
    /// Explore every interleaving of a machine and check its obligations.
    Explore {
        /// fourslot, intermediate:<n> or oneplace.
        #[arg(long)]
        machine: MachineId,
        #[arg(long)]
        writes: usize,
        #[arg(long)]
        reads: usize,
        /// swap-pair, early-commit or no-indirection (fourslot only).
        #[arg(long)]
        mutation: Option<Mutation>,
        /// Maximum number of states; overrides ACM_STATE_CAP.
        #[arg(long)]
        state_cap: Option<usize>,
        /// Also write the JSON report here.
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Validate a possible-values refinement law by brute force.
    Laws {
        /// 2, 3 or 4.
        #[arg(long)]
        law: Law,
        #[arg(long)]
        values: usize,
        #[arg(long)]
        env_steps: usize,
        /// Drop the law's side condition; expect a counterexample.
        #[arg(long)]
        weakened: bool,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Run one writer and one reader thread against the real library.
    Stress {
        /// Writes performed, and reads performed.
        #[arg(long, default_value_t = 1_000_000)]
        ops: u64,
        #[arg(long, default_value_t = acm::DEFAULT_PAYLOAD_WORDS)]
        payload_words: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Upper bound on random busy-wait spins before each step.
        #[arg(long, default_value_t = Pacing::default().max_spins)]
        max_spins: u32,
        /// Yield before one step in this many on average (0 never).
        #[arg(long, default_value_t = Pacing::default().yield_one_in)]
        yield_one_in: u32,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Narrate a scripted sequence of reads and writes.
    Demo,
}

/// Runs the command line, printing to stdout and stderr.
pub fn cli_main<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    run_cli(args, &mut io::stdout().lock(), &mut io::stderr().lock())
}

/// Runs the command line against the given streams and returns the exit
/// code: 0 when every check passed, 1 on a violation or an incomplete
/// search, 2 on a usage or configuration error or an unwritable report.
pub fn run_cli<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            let _ = if e.use_stderr() { write!(err, "{text}") } else { write!(out, "{text}") };
            return e.exit_code();
        }
    };
    match run(cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}

fn run(command: Command, out: &mut dyn Write) -> Result<i32, HarnessError> {
    let (report, json) = match command {
        Command::Explore {
            machine,
            writes,
            reads,
            mutation,
            state_cap,
            json,
        } => {
            let mut opts = ExploreOptions::from_env()?;
            if let Some(cap) = state_cap {
                opts.state_cap = cap;
            }
            let sc = Scenario {
                machine,
                writes,
                reads,
                mutation,
            };
            (Report::from_exploration(&sc, &run_scenario(&sc, &opts)?), json)
        }
        Command::Laws {
            law,
            values,
            env_steps,
            weakened,
            json,
        } => {
            let cfg = LawConfig {
                values,
                env_steps,
                weakened,
            };
            (Report::from_law(&validate_law(law, cfg)?), json)
        }
        Command::Stress {
            ops,
            payload_words,
            seed,
            max_spins,
            yield_one_in,
            json,
        } => {
            let pacing = Pacing { max_spins, yield_one_in };
            let cfg = StressConfig {
                ops,
                payload_words,
                writer_pacing: pacing,
                reader_pacing: pacing,
                seed,
            };
            (Report::from_stress(&run_stress(cfg)?), json)
        }
        Command::Demo => return Ok(if run_demo(out)? { 0 } else { 1 }),
    };
    emit_report(&report, Format::Text, out)?;
    if let Some(path) = json {
        write_json(&report, &path)?;
    }
    Ok(report.exit_code())
}

fn write_json(report: &Report, path: &Path) -> Result<(), HarnessError> {
    let sink_err = |source| HarnessError::Sink {
        path: path.to_path_buf(),
        source,
    };
    let mut file = File::create(path).map_err(sink_err)?;
    emit_report(report, Format::Json, &mut file).map_err(|e| match e {
        HarnessError::Io(source) => sink_err(source),
        other => other,
    })
}
