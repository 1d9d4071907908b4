// Copyright 2026 Spinbath Contributors
// SPDX-License-Identifier: Apache-2.0

//! Command-line front end for the simulation core: configuration handling,
//! CSV output with full provenance headers, and the embedded
//! cross-validation suite behind `spinbath selfcheck`.

// Negated comparisons like `!(x >= 0.0)` are deliberate: they also trap NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
// Index loops are the natural register for fixed 4x4 matrix kernels.
#![allow(clippy::needless_range_loop)]

pub mod config;
pub mod output;
pub mod selfcheck;

use std::io::Write;

use spinbath_core::dynamics::{evolve_closed_form, evolve_ode_between, EvolutionMethod};
use spinbath_core::gibbs_state;
use spinbath_core::model::validate_density;
use spinbath_core::sweep::{evaluate_point, run_sweep, FigureId};

pub use config::{ConfigError, Settings};

/// Process-level failure classes, mapped onto exit codes:
/// usage/config = 1, numerical = 2, partial sweep failure = 3.
#[derive(Debug)]
pub enum CmdError {
    Usage(String),
    Numerical(String),
    PartialFailure(String),
}

impl CmdError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CmdError::Usage(_) => 1,
            CmdError::Numerical(_) => 2,
            CmdError::PartialFailure(_) => 3,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CmdError::Usage(m) | CmdError::Numerical(m) | CmdError::PartialFailure(m) => m,
        }
    }
}

impl From<ConfigError> for CmdError {
    fn from(e: ConfigError) -> Self {
        CmdError::Usage(e.to_string())
    }
}

fn io_err(e: std::io::Error) -> CmdError {
    CmdError::Usage(format!("output error: {e}"))
}

/// `observe`: evaluate every observable at the configured single point.
pub fn cmd_observe(settings: &Settings, out: &mut dyn Write) -> Result<(), CmdError> {
    let point = settings.point;
    point
        .model_params()
        .and_then(|_| point.beta())
        .map_err(|e| CmdError::Usage(e.to_string()))?;
    if !(point.t >= 0.0) {
        return Err(CmdError::Usage(format!(
            "domain error: t = {} violates `t >= 0`",
            point.t
        )));
    }
    let record = evaluate_point(Vec::new(), point, settings.method, settings.ode_tol);
    if let spinbath_core::sweep::PointStatus::Failed(e) = &record.status {
        return Err(CmdError::Numerical(e.to_string()));
    }
    output::write_records(out, "observe", settings, &[], &[record]).map_err(io_err)
}

/// `evolve`: one trajectory, emitted as a time series of all sixteen state
/// components plus residuals.
pub fn cmd_evolve(
    settings: &Settings,
    t_final: f64,
    points: usize,
    method: EvolutionMethod,
    out: &mut dyn Write,
) -> Result<(), CmdError> {
    if !(t_final >= 0.0) || !t_final.is_finite() {
        return Err(CmdError::Usage(format!(
            "domain error: t_final = {t_final} violates `t_final >= 0`"
        )));
    }
    if points < 2 {
        return Err(CmdError::Usage(format!(
            "domain error: points = {points} violates `points >= 2`"
        )));
    }
    let params = settings
        .point
        .model_params()
        .map_err(|e| CmdError::Usage(e.to_string()))?;
    let beta = settings
        .point
        .beta()
        .map_err(|e| CmdError::Usage(e.to_string()))?;

    output::write_evolve_header(out, settings, t_final, points, method).map_err(io_err)?;

    let rho0 = gibbs_state(&params, beta);
    let mut rho = rho0;
    let mut t_prev = 0.0_f64;
    for k in 0..points {
        let t = if k == points - 1 {
            t_final
        } else {
            t_final * k as f64 / (points - 1) as f64
        };
        let result = match method {
            // Restart from the previous sample, preserving absolute time.
            EvolutionMethod::Ode => evolve_ode_between(&rho, &params, t_prev, t, settings.ode_tol),
            // The propagator maps the initial state to absolute time t.
            EvolutionMethod::ClosedForm => evolve_closed_form(&rho0, &params, t),
        }
        .map_err(|e| CmdError::Numerical(format!("at t = {t}: {e}")))?;
        rho = result.rho_t;
        t_prev = t;

        let report = validate_density(rho.as_matrix());
        output::write_evolve_row(out, t, rho.as_matrix(), &report).map_err(io_err)?;
    }
    Ok(())
}

/// `sweep`: run the configured grid.
pub fn cmd_sweep(settings: &Settings, out: &mut dyn Write) -> Result<(), CmdError> {
    if settings.axes.is_empty() {
        return Err(CmdError::Usage(
            "sweep requires at least one axis (config `axis = <param> <linear|log> <min> <max> <points>` \
             or `--set axis=...`)"
                .into(),
        ));
    }
    run_configured_sweep(settings, "sweep", out)
}

/// `figure`: run a preset dataset (already merged into `settings`).
pub fn cmd_figure(settings: &Settings, id: FigureId, out: &mut dyn Write) -> Result<(), CmdError> {
    run_configured_sweep(settings, &format!("figure {}", id.name()), out)
}

fn run_configured_sweep(
    settings: &Settings,
    label: &str,
    out: &mut dyn Write,
) -> Result<(), CmdError> {
    let config = settings.to_sweep_config();
    let outcome = run_sweep(&config).map_err(|e| CmdError::Usage(e.to_string()))?;
    output::write_records(out, label, settings, &config.axes, &outcome.records).map_err(io_err)?;
    if outcome.failed_points > 0 {
        return Err(CmdError::PartialFailure(format!(
            "{} of {} grid points failed; see the status column",
            outcome.failed_points,
            outcome.records.len()
        )));
    }
    Ok(())
}

/// `selfcheck`: embedded oracle suite; errors with exit code 2 on any
/// tolerance breach.
pub fn cmd_selfcheck(out: &mut dyn Write) -> Result<(), CmdError> {
    let results = selfcheck::run_all();
    let mut all_ok = true;
    for r in &results {
        writeln!(
            out,
            "check {:<38} {}  ({})",
            r.name,
            if r.passed { "PASS" } else { "FAIL" },
            r.detail
        )
        .map_err(io_err)?;
        all_ok &= r.passed;
    }
    if all_ok {
        writeln!(out, "selfcheck: all {} checks passed", results.len()).map_err(io_err)?;
        Ok(())
    } else {
        Err(CmdError::Numerical("selfcheck failed".into()))
    }
}

/// Shared helper for `method` strings on the CLI (`ode`, `closed_form`).
pub fn parse_evolution_method(s: &str) -> Result<EvolutionMethod, CmdError> {
    match s {
        "ode" => Ok(EvolutionMethod::Ode),
        "closed_form" => Ok(EvolutionMethod::ClosedForm),
        other => Err(CmdError::Usage(format!(
            "unknown method `{other}`; valid: ode, closed_form"
        ))),
    }
}
