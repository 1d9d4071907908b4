// Copyright 2026 Spinbath Contributors
// SPDX-License-Identifier: Apache-2.0

//! `spinbath` — two-qubit XXZ + Dzyaloshinskii-Moriya pair in Lorentzian
//! bosonic baths: thermal states, non-Markovian dynamics, specific heat and
//! entanglement of formation, and figure-style sweep datasets.
//!
//! Exit codes: 0 success, 1 usage/config error, 2 numerical failure,
//! 3 partial sweep failure.

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};

use spinbath_cli::{
    cmd_evolve, cmd_figure, cmd_observe, cmd_selfcheck, cmd_sweep, parse_evolution_method,
    CmdError, Settings,
};
use spinbath_core::sweep::FigureId;

#[derive(Parser)]
#[command(
    name = "spinbath",
    version,
    about = "Open-system simulator for a two-qubit XXZ + DM spin pair in Lorentzian baths"
)]
struct Cli {
    /// Flat key=value config file with `[model]`/`[sweep]`/`[output]` sections.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,

    /// Inline override, repeatable; takes precedence over the config file.
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    set: Vec<String>,

    /// Output file (default: standard output).
    #[arg(long, short, global = true, value_name = "FILE")]
    output: Option<PathBuf>,

    /// ODE local error tolerance override (1e-12 ..= 1e-4).
    #[arg(long, global = true, value_name = "TOL")]
    tolerance: Option<f64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evolve one thermal trajectory; emits all state components over time.
    Evolve {
        /// Final time of the trajectory.
        #[arg(long, default_value_t = 20.0)]
        t_final: f64,
        /// Number of output samples (including t = 0).
        #[arg(long, default_value_t = 101)]
        points: usize,
        /// Temperature axis value k_B T (shorthand for --set kT=...).
        #[arg(long = "kT", value_name = "KT")]
        k_t: Option<f64>,
        /// Evolution path: ode or closed_form.
        #[arg(long, default_value = "ode")]
        method: String,
    },
    /// All observables at a single (t, kT) point.
    Observe {
        /// Evolution time (shorthand for --set t=...).
        #[arg(long)]
        t: Option<f64>,
        /// Temperature axis value k_B T (shorthand for --set kT=...).
        #[arg(long = "kT", value_name = "KT")]
        k_t: Option<f64>,
    },
    /// Run the sweep defined by the config file and overrides.
    Sweep,
    /// Emit a built-in figure dataset
    /// (fig1a, fig1b, fig2, fig3a, fig3b, fig4a, fig4b).
    Figure {
        /// Dataset id.
        id: String,
    },
    /// Run the embedded cross-validation suite.
    Selfcheck,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("spinbath: {}", e.message());
            ExitCode::from(e.exit_code())
        }
    }
}

fn run(cli: Cli) -> Result<(), CmdError> {
    let config_text = match &cli.config {
        Some(path) => Some(fs::read_to_string(path).map_err(|e| {
            CmdError::Usage(format!("cannot read config {}: {e}", path.display()))
        })?),
        None => None,
    };

    let mut settings = match &cli.command {
        Command::Figure { id } => {
            let fig = FigureId::from_name(id).ok_or_else(|| {
                CmdError::Usage(format!(
                    "unknown figure `{id}`; valid: fig1a, fig1b, fig2, fig3a, fig3b, fig4a, fig4b"
                ))
            })?;
            Settings::for_figure(fig)
        }
        _ => Settings::default(),
    };
    settings.apply_layers(config_text.as_deref(), &cli.set, cli.tolerance)?;

    // Dedicated flags beat --set.
    match &cli.command {
        Command::Evolve { k_t: Some(kt), .. } | Command::Observe { k_t: Some(kt), .. } => {
            apply_flag(&mut settings, "kT", *kt)?;
        }
        _ => {}
    }
    if let Command::Observe { t: Some(t), .. } = &cli.command {
        apply_flag(&mut settings, "t", *t)?;
    }

    // the --output flag beats the config's [output] path
    let mut sink: Box<dyn Write> = match &cli.output {
        Some(path) => Box::new(fs::File::create(path).map_err(|e| {
            CmdError::Usage(format!("cannot create output {}: {e}", path.display()))
        })?),
        None => match &settings.output_path {
            Some(path) => Box::new(fs::File::create(path).map_err(|e| {
                CmdError::Usage(format!("cannot create output {path}: {e}"))
            })?),
            None => Box::new(std::io::stdout()),
        },
    };

    match cli.command {
        Command::Evolve {
            t_final,
            points,
            method,
            ..
        } => {
            let method = parse_evolution_method(&method)?;
            cmd_evolve(&settings, t_final, points, method, &mut sink)
        }
        Command::Observe { .. } => cmd_observe(&settings, &mut sink),
        Command::Sweep => cmd_sweep(&settings, &mut sink),
        Command::Figure { id } => {
            let fig = FigureId::from_name(&id).expect("validated above");
            cmd_figure(&settings, fig, &mut sink)
        }
        Command::Selfcheck => cmd_selfcheck(&mut sink),
    }
}

fn apply_flag(settings: &mut Settings, key: &str, value: f64) -> Result<(), CmdError> {
    let kv = [format!("{key}={value}")];
    settings
        .apply_layers(None, &kv, None)
        .map_err(CmdError::from)
}
