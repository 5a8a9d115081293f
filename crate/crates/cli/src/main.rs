//! Command-line driver: run scenarios from config files or figure presets,
//! list presets, validate configs, emit CSV time series.

use std::fs;
use std::io::Write;
use std::path::PathBuf;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand, ValueEnum};

use dqdsim_core::scenario::{
    figure_preset, run_scenario, write_csv, Picture, ScenarioConfig, PRESET_ALIASES, PRESET_NAMES,
};

#[derive(Parser)]
#[command(
    name = "dqdsim",
    version,
    about = "Coupled charge-qubit Redfield simulator"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum PictureArg {
    Schrodinger,
    Interaction,
}

#[derive(Subcommand)]
enum Command {
    /// Integrate a scenario and write the measure time series as CSV.
    Run {
        /// TOML scenario config.
        #[arg(long, conflicts_with = "preset")]
        config: Option<PathBuf>,
        /// Named figure preset (see list-presets).
        #[arg(long)]
        preset: Option<String>,
        /// CSV destination; stdout when omitted and the config names no path.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Measure every n-th integrator step.
        #[arg(long)]
        stride: Option<usize>,
        /// Compute measures on the Schrödinger- or interaction-picture state.
        #[arg(long)]
        picture: Option<PictureArg>,
        /// Override the integrator step (τ).
        #[arg(long)]
        dt: Option<f64>,
        /// Override the integration horizon (τ).
        #[arg(long, name = "t-final")]
        t_final: Option<f64>,
    },
    /// Print the known preset names with their parameters.
    ListPresets,
    /// Parse and resolve a config, reporting problems without running it.
    Validate {
        #[arg(long)]
        config: PathBuf,
    },
}

fn main() -> anyhow::Result<()> {
    match Cli::parse().command {
        Command::Run {
            config,
            preset,
            out,
            stride,
            picture,
            dt,
            t_final,
        } => {
            let mut cfg = load_config(config.as_deref(), preset.as_deref())?;
            if let Some(s) = stride {
                cfg.output.stride = Some(s);
            }
            if let Some(p) = picture {
                cfg.measures.picture = match p {
                    PictureArg::Schrodinger => Picture::Schrodinger,
                    PictureArg::Interaction => Picture::Interaction,
                };
            }
            if let Some(v) = dt {
                cfg.integrator.dt = v;
            }
            if let Some(v) = t_final {
                cfg.integrator.t_final = v;
            }
            if let Some(path) = out {
                cfg.output.path = Some(path);
            }

            let run = run_scenario(&cfg).context("scenario failed")?;
            match &run.config.output.path {
                Some(path) => {
                    let file = fs::File::create(path)
                        .with_context(|| format!("cannot create {}", path.display()))?;
                    write_csv(std::io::BufWriter::new(file), &run)?;
                    eprintln!("wrote {} rows to {}", run.rows.len(), path.display());
                }
                None => {
                    let stdout = std::io::stdout();
                    write_csv(stdout.lock(), &run)?;
                }
            }
            let s = &run.summary;
            eprintln!(
                "final: eof = {:.6}, discord = {:.6}; first eof peak at t = {}; discord plateau = {:.6}",
                s.final_eof,
                s.final_discord,
                s.first_eof_max_time.map_or("none".to_string(), |t| format!("{t:.4}")),
                s.discord_plateau,
            );
            Ok(())
        }
        Command::ListPresets => {
            let mut out = std::io::stdout().lock();
            for name in PRESET_NAMES.iter().chain(PRESET_ALIASES.iter()) {
                let cfg = figure_preset(name).expect("catalog names resolve");
                let temp = cfg.bath.temperature_kelvin.unwrap_or_default();
                writeln!(
                    out,
                    "{name:18} J/Delta = {:>5.3}, eta = {:.5}, T = {} K, {:?}, initial {:?}, t_final = {}",
                    cfg.model.j / cfg.model.delta,
                    cfg.bath.eta,
                    temp,
                    cfg.topology,
                    cfg.initial_state,
                    cfg.integrator.t_final,
                )?;
            }
            Ok(())
        }
        Command::Validate { config } => {
            let text = fs::read_to_string(&config)
                .with_context(|| format!("cannot read {}", config.display()))?;
            let cfg = ScenarioConfig::from_toml(&text)?;
            cfg.resolve()?;
            println!("ok: {}", config.display());
            print!("{}", cfg.to_toml());
            Ok(())
        }
    }
}

fn load_config(
    config: Option<&std::path::Path>,
    preset: Option<&str>,
) -> anyhow::Result<ScenarioConfig> {
    match (config, preset) {
        (Some(path), None) => {
            let text = fs::read_to_string(path)
                .with_context(|| format!("cannot read {}", path.display()))?;
            Ok(ScenarioConfig::from_toml(&text)?)
        }
        (None, Some(name)) => Ok(figure_preset(name)?),
        (None, None) => bail!("one of --config or --preset is required"),
        (Some(_), Some(_)) => unreachable!("clap rejects the combination"),
    }
}
