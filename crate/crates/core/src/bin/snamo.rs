use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use snamo::cli::{compare, run, RunConfig};
use snamo::Mode;

#[derive(Parser)]
#[command(name = "snamo", version, about = "Run navigation-among-movable-obstacles scenarios")]
struct Args {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate one scenario and write its trace and metrics.
    Run {
        #[arg(long)]
        scenario: PathBuf,
        /// `namo` or `snamo`; defaults to the scenario's mode.
        #[arg(long)]
        mode: Option<Mode>,
        #[arg(long, default_value = "out")]
        out: PathBuf,
        /// Also write SVG frames under `<out>/frames`.
        #[arg(long)]
        frames: bool,
        #[arg(long)]
        budget: Option<usize>,
        #[arg(long)]
        metrics: Option<PathBuf>,
    },
    /// Simulate both modes and write a side-by-side table.
    Compare {
        #[arg(long)]
        scenario: PathBuf,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
}

fn main() -> ExitCode {
    let code = match Args::parse().command {
        Command::Run {
            scenario,
            mode,
            out,
            frames,
            budget,
            metrics,
        } => {
            let config = RunConfig {
                scenario,
                mode_override: mode,
                out_dir: out,
                emit_frames: frames,
                step_budget_override: budget,
                metrics_out: metrics,
            };
            match run(&config) {
                Ok(summary) => {
                    println!("{}", serde_json::to_string(&summary).unwrap_or_default());
                    if !summary.all_reached() {
                        eprintln!("error: {} of {} goals reached", summary.goals_reached, summary.goals);
                    }
                    summary.exit_code()
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    e.exit_code()
                }
            }
        }
        Command::Compare { scenario, out } => match compare(&scenario, &out) {
            Ok(cmp) => {
                print!("{}", cmp.table());
                0
            }
            Err(e) => {
                eprintln!("error: {e}");
                e.exit_code()
            }
        },
    };
    ExitCode::from(code as u8)
}
