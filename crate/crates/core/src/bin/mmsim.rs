use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use mm_coupling::config::{parse_config, render_config, ConfigError, ScenarioConfig};
use mm_coupling::output::{run_scenario, ScenarioError};
use mm_coupling::presets;

#[derive(Parser)]
#[command(name = "mmsim", about = "Coupled market-maker simulator", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario and write its CSV series, flow table and cycle report.
    Run {
        #[arg(long, conflicts_with = "preset", required_unless_present = "preset")]
        config: Option<PathBuf>,
        #[arg(long)]
        preset: Option<String>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        steps: Option<u64>,
        #[arg(long, default_value = "out")]
        out: PathBuf,
        /// Skip per-step invariant checks.
        #[arg(long)]
        no_assert: bool,
        /// Inclusive step range for flow.txt, e.g. 0:12.
        #[arg(long, value_parser = parse_window)]
        flow_window: Option<(u64, u64)>,
    },
    /// Print a preset as a scenario file.
    Preset { name: String },
    /// List preset names.
    Presets,
}

fn parse_window(s: &str) -> Result<(u64, u64), String> {
    let (a, b) = s.split_once(':').ok_or("expected FROM:TO")?;
    let from = a.parse().map_err(|_| format!("bad step `{a}`"))?;
    let to = b.parse().map_err(|_| format!("bad step `{b}`"))?;
    if from > to {
        return Err("FROM must not exceed TO".into());
    }
    Ok((from, to))
}

fn load(config: Option<PathBuf>, preset: Option<String>) -> Result<ScenarioConfig, ScenarioError> {
    match (config, preset) {
        (Some(path), _) => Ok(parse_config(&std::fs::read_to_string(path)?)?),
        (None, Some(name)) => presets::preset(&name).ok_or(ConfigError::UnknownPreset(name).into()),
        (None, None) => unreachable!("clap requires one of --config/--preset"),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Presets => {
            for name in presets::PRESET_NAMES {
                println!("{name}");
            }
            ExitCode::SUCCESS
        }
        Command::Preset { name } => match presets::preset(&name) {
            Some(c) => {
                print!("{}", render_config(&c));
                ExitCode::SUCCESS
            }
            None => {
                eprintln!("error: {}", ConfigError::UnknownPreset(name));
                ExitCode::from(1)
            }
        },
        Command::Run { config, preset, seed, steps, out, no_assert, flow_window } => {
            let result = load(config, preset).and_then(|mut c| {
                if let Some(seed) = seed {
                    c.seed = seed;
                }
                if let Some(steps) = steps {
                    c.steps = steps;
                }
                if no_assert {
                    c.assertions = false;
                }
                run_scenario(&c, &out, flow_window)
            });
            match result {
                Ok(summary) => {
                    println!("{summary}");
                    ExitCode::SUCCESS
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    ExitCode::from(e.exit_code() as u8)
                }
            }
        }
    }
}
