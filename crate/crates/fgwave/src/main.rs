use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use fgwave::config::{resolve, ConfigFile, Mode, RunConfig};
use fgwave::error::Result;
use fgwave::experiments::{energy_study, spatial_study, temporal_study, StudyConfig};
use fgwave::output::{energy_study_path, write_energy_csv, write_space_csv, write_time_csv};
use fgwave::sav::run;

/// Solver and experiment runner for the nonlinear space-fractional
/// generalized wave equation on a periodic rectangle.
#[derive(Parser)]
#[command(version, about)]
struct Cli {
    /// JSON configuration file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Output directory for CSV artifacts (overrides the config file).
    #[arg(long, global = true)]
    outdir: Option<PathBuf>,

    /// Suppress progress and warning output.
    #[arg(long, global = true)]
    quiet: bool,

    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Subcommand)]
enum Command {
    /// Single simulation; writes the energy ledger.
    Run,
    /// Temporal refinement study; writes errors_time.csv.
    ConvergeTime,
    /// Spatial refinement study; writes errors_space.csv.
    ConvergeSpace,
    /// Energy evolution per damping setting; writes energy_<g1>_<g2>.csv.
    Energy,
}

impl Command {
    fn mode(&self) -> Mode {
        match self {
            Command::Run => Mode::Run,
            Command::ConvergeTime => Mode::ConvergeTime,
            Command::ConvergeSpace => Mode::ConvergeSpace,
            Command::Energy => Mode::Energy,
        }
    }
}

fn load_config(cli: &Cli) -> Result<RunConfig> {
    let file = match &cli.config {
        Some(path) => ConfigFile::load(path)?,
        None => ConfigFile::default(),
    };
    resolve(
        &file,
        cli.command.as_ref().map(Command::mode),
        cli.outdir.clone(),
    )
}

fn study_config(cfg: &RunConfig) -> StudyConfig {
    StudyConfig {
        problem: cfg.problem.clone(),
        example: cfg.example,
        n_ref: cfg.n_ref,
        k_ref: cfg.k_ref,
        tau_list: cfg.tau_list.clone(),
        n_list: cfg.n_list.clone(),
    }
}

fn execute(cfg: &RunConfig, quiet: bool) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(&cfg.outdir)?;
    let mut written = Vec::new();
    match cfg.mode {
        Mode::Run => {
            let output = run(&cfg.problem, cfg.example, cfg.tau)?;
            let path = cfg.outdir.join("energy.csv");
            write_energy_csv(&path, &output.ledger)?;
            if !quiet {
                let last = output.ledger.last().expect("ledger never empty");
                println!("final time {:.6}, H = {:.12e}", last.t, last.h);
            }
            written.push(path);
        }
        Mode::ConvergeTime => {
            let rows = temporal_study(&study_config(cfg))?;
            let path = cfg.outdir.join("errors_time.csv");
            write_time_csv(&path, &rows)?;
            written.push(path);
        }
        Mode::ConvergeSpace => {
            let rows = spatial_study(&study_config(cfg))?;
            let path = cfg.outdir.join("errors_space.csv");
            write_space_csv(&path, &rows)?;
            written.push(path);
        }
        Mode::Energy => {
            let entries = energy_study(&cfg.problem, cfg.example, cfg.tau, &cfg.gamma_list)?;
            for entry in &entries {
                let path = energy_study_path(&cfg.outdir, entry.gamma1, entry.gamma2);
                write_energy_csv(&path, &entry.ledger)?;
                written.push(path);
            }
        }
    }
    Ok(written)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = match load_config(&cli) {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::FAILURE;
        }
    };
    if !cli.quiet && cfg.custom_domain() {
        eprintln!(
            "warning: domain {:?} differs from the benchmark default",
            cfg.problem.grid.bounds()
        );
    }
    match execute(&cfg, cli.quiet) {
        Ok(written) => {
            if !cli.quiet {
                for path in &written {
                    println!("wrote {}", path.display());
                }
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
