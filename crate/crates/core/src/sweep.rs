// Copyright 2026 Spinbath Contributors
// SPDX-License-Identifier: Apache-2.0

//! Deterministic parameter-grid studies.
//!
//! A sweep walks a one- or two-axis grid over the parameter vocabulary
//! `{t, kT, J, Jz, Dz, gamma0, gamma}`, runs the pipeline
//! `thermal state -> evolve -> observables` at every point, and collects one
//! [`ObservableRecord`] per point in row-major axis order. Grid points are
//! independent pure computations, so evaluation order cannot affect values
//! and callers may parallelize freely; this module itself evaluates
//! sequentially and is bit-reproducible run to run.
//!
//! [`figure_config`] returns the built-in dataset presets behind the
//! `figure` CLI subcommand. The preset parameter values are library
//! defaults chosen so the qualitative features of interest are visible;
//! they are echoed into every output header.

use alloc::vec::Vec;

use crate::dynamics::{
    closed_form_thermal_spectrum, evolve_closed_form, evolve_ode, EvolutionResult,
};
use crate::error::{Error, Result};
use crate::linalg;
use crate::model::{gibbs_state, InverseTemperature, ModelParams};
use crate::observables::{concurrence, specific_heat_from_spectrum, specific_heat_normalized};

/// Library default parameter values, used wherever a sweep or the CLI does
/// not override them. These are exploration defaults, not published
/// reference values.
pub mod defaults {
    pub const J: f64 = 1.0;
    pub const JZ: f64 = 0.5;
    pub const DZ: f64 = 0.5;
    pub const GAMMA0: f64 = 0.1;
    pub const GAMMA: f64 = 1.0;
    pub const KT: f64 = 1.0;
    pub const T: f64 = 0.0;
    pub const ODE_TOL: f64 = crate::dynamics::ODE_TOL_DEFAULT;
}

/// The sweepable parameter vocabulary.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepParam {
    T,
    Kt,
    J,
    Jz,
    Dz,
    Gamma0,
    Gamma,
}

impl SweepParam {
    pub const ALL: [SweepParam; 7] = [
        SweepParam::T,
        SweepParam::Kt,
        SweepParam::J,
        SweepParam::Jz,
        SweepParam::Dz,
        SweepParam::Gamma0,
        SweepParam::Gamma,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            SweepParam::T => "t",
            SweepParam::Kt => "kT",
            SweepParam::J => "J",
            SweepParam::Jz => "Jz",
            SweepParam::Dz => "Dz",
            SweepParam::Gamma0 => "gamma0",
            SweepParam::Gamma => "gamma",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.iter().copied().find(|p| p.name() == name)
    }
}

/// One fully specified grid point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepPoint {
    pub t: f64,
    pub k_t: f64,
    pub j: f64,
    pub j_z: f64,
    pub d_z: f64,
    pub gamma0: f64,
    pub gamma: f64,
}

impl Default for SweepPoint {
    fn default() -> Self {
        Self {
            t: defaults::T,
            k_t: defaults::KT,
            j: defaults::J,
            j_z: defaults::JZ,
            d_z: defaults::DZ,
            gamma0: defaults::GAMMA0,
            gamma: defaults::GAMMA,
        }
    }
}

impl SweepPoint {
    pub fn get(&self, p: SweepParam) -> f64 {
        match p {
            SweepParam::T => self.t,
            SweepParam::Kt => self.k_t,
            SweepParam::J => self.j,
            SweepParam::Jz => self.j_z,
            SweepParam::Dz => self.d_z,
            SweepParam::Gamma0 => self.gamma0,
            SweepParam::Gamma => self.gamma,
        }
    }

    pub fn set(&mut self, p: SweepParam, value: f64) {
        match p {
            SweepParam::T => self.t = value,
            SweepParam::Kt => self.k_t = value,
            SweepParam::J => self.j = value,
            SweepParam::Jz => self.j_z = value,
            SweepParam::Dz => self.d_z = value,
            SweepParam::Gamma0 => self.gamma0 = value,
            SweepParam::Gamma => self.gamma = value,
        }
    }

    pub fn model_params(&self) -> Result<ModelParams> {
        ModelParams::new(self.j, self.j_z, self.d_z, self.gamma0, self.gamma)
    }

    pub fn beta(&self) -> Result<InverseTemperature> {
        InverseTemperature::from_temperature(self.k_t)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AxisSpacing {
    Linear,
    Log,
}

impl AxisSpacing {
    pub fn name(&self) -> &'static str {
        match self {
            AxisSpacing::Linear => "linear",
            AxisSpacing::Log => "log",
        }
    }
}

/// One swept axis: either a regularly spaced range or an explicit point
/// list (used by figure presets with irregular time samples).
#[derive(Debug, Clone, PartialEq)]
pub enum Axis {
    Range {
        param: SweepParam,
        min: f64,
        max: f64,
        points: usize,
        spacing: AxisSpacing,
    },
    Values { param: SweepParam, values: Vec<f64> },
}

impl Axis {
    pub fn param(&self) -> SweepParam {
        match self {
            Axis::Range { param, .. } | Axis::Values { param, .. } => *param,
        }
    }

    pub fn len(&self) -> usize {
        match self {
            Axis::Range { points, .. } => *points,
            Axis::Values { values, .. } => values.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Grid coordinates; range endpoints are pinned exactly.
    pub fn points(&self) -> Vec<f64> {
        match self {
            Axis::Values { values, .. } => values.clone(),
            Axis::Range {
                min,
                max,
                points,
                spacing,
                ..
            } => {
                let n = *points;
                let mut out = Vec::with_capacity(n);
                for k in 0..n {
                    let v = if k == 0 {
                        *min
                    } else if k == n - 1 {
                        *max
                    } else {
                        match spacing {
                            AxisSpacing::Linear => {
                                min + (max - min) * (k as f64) / ((n - 1) as f64)
                            }
                            AxisSpacing::Log => {
                                let lm = libm::log(*min);
                                let lx = libm::log(*max);
                                libm::exp(lm + (lx - lm) * (k as f64) / ((n - 1) as f64))
                            }
                        }
                    };
                    out.push(v);
                }
                out
            }
        }
    }

    fn validate(&self) -> Result<()> {
        match self {
            Axis::Range {
                param,
                min,
                max,
                points,
                spacing,
            } => {
                if *points < 2 {
                    return Err(Error::Domain {
                        what: "axis points",
                        invariant: "points >= 2 for a range axis",
                        value: *points as f64,
                    });
                }
                if !(min.is_finite() && max.is_finite()) || min > max {
                    return Err(Error::Domain {
                        what: "axis range",
                        invariant: "finite min <= max",
                        value: *min,
                    });
                }
                if *spacing == AxisSpacing::Log && !(*min > 0.0) {
                    return Err(Error::Domain {
                        what: "axis range",
                        invariant: "min > 0 for log spacing",
                        value: *min,
                    });
                }
                if *param == SweepParam::Kt && !(*min > 0.0) {
                    return Err(Error::Domain {
                        what: "kT axis",
                        invariant: "kT > 0",
                        value: *min,
                    });
                }
                Ok(())
            }
            Axis::Values { param, values } => {
                if values.is_empty() {
                    return Err(Error::Domain {
                        what: "axis values",
                        invariant: "at least one value",
                        value: 0.0,
                    });
                }
                for v in values {
                    if !v.is_finite() {
                        return Err(Error::Domain {
                            what: "axis values",
                            invariant: "finite values",
                            value: *v,
                        });
                    }
                    if *param == SweepParam::Kt && !(*v > 0.0) {
                        return Err(Error::Domain {
                            what: "kT axis",
                            invariant: "kT > 0",
                            value: *v,
                        });
                    }
                }
                Ok(())
            }
        }
    }
}

/// Which observable columns a dataset carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ObservableKind {
    SpecificHeat,
    Concurrence,
    Eof,
    Eigenvalues,
    TraceResidual,
}

impl ObservableKind {
    pub const ALL: [ObservableKind; 5] = [
        ObservableKind::SpecificHeat,
        ObservableKind::Concurrence,
        ObservableKind::Eof,
        ObservableKind::Eigenvalues,
        ObservableKind::TraceResidual,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            ObservableKind::SpecificHeat => "c_n",
            ObservableKind::Concurrence => "concurrence",
            ObservableKind::Eof => "eof",
            ObservableKind::Eigenvalues => "eigenvalues",
            ObservableKind::TraceResidual => "trace_residual",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.iter().copied().find(|o| o.name() == name)
    }
}

/// Evolution path selection for a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepMethod {
    Ode,
    ClosedForm,
    /// Run both paths, keep the closed-form result, and record the maximum
    /// entrywise discrepancy between them per point.
    Both,
}

impl SweepMethod {
    pub fn name(&self) -> &'static str {
        match self {
            SweepMethod::Ode => "ode",
            SweepMethod::ClosedForm => "closed_form",
            SweepMethod::Both => "both",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        match name {
            "ode" => Some(SweepMethod::Ode),
            "closed_form" => Some(SweepMethod::ClosedForm),
            "both" => Some(SweepMethod::Both),
            _ => None,
        }
    }
}

/// Declarative grid description.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    /// One or two swept axes, outer axis first (row-major output order).
    pub axes: Vec<Axis>,
    /// Values of every non-swept parameter.
    pub fixed: SweepPoint,
    /// Observable columns to emit.
    pub observables: Vec<ObservableKind>,
    pub method: SweepMethod,
    /// Local error tolerance for the ODE path.
    pub ode_tol: f64,
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        if self.axes.is_empty() || self.axes.len() > 2 {
            return Err(Error::Domain {
                what: "axes",
                invariant: "1 or 2 swept axes",
                value: self.axes.len() as f64,
            });
        }
        if self.axes.len() == 2 && self.axes[0].param() == self.axes[1].param() {
            return Err(Error::Domain {
                what: "axes",
                invariant: "axes must sweep distinct parameters",
                value: 0.0,
            });
        }
        for axis in &self.axes {
            axis.validate()?;
        }
        // Fixed values must already form a valid point for the non-swept
        // parameters; swept ones get overwritten per grid point.
        self.fixed.model_params()?;
        let swept_kt = self.axes.iter().any(|a| a.param() == SweepParam::Kt);
        if !swept_kt {
            self.fixed.beta()?;
        }
        let swept_t = self.axes.iter().any(|a| a.param() == SweepParam::T);
        if !swept_t && !(self.fixed.t >= 0.0) {
            return Err(Error::Domain {
                what: "t",
                invariant: "t >= 0",
                value: self.fixed.t,
            });
        }
        Ok(())
    }

    /// All grid points in row-major order, paired with their coordinates.
    pub fn grid(&self) -> Vec<(Vec<f64>, SweepPoint)> {
        let mut out = Vec::new();
        match self.axes.len() {
            1 => {
                let p0 = self.axes[0].param();
                for v0 in self.axes[0].points() {
                    let mut point = self.fixed;
                    point.set(p0, v0);
                    out.push((alloc::vec![v0], point));
                }
            }
            2 => {
                let p0 = self.axes[0].param();
                let p1 = self.axes[1].param();
                let inner = self.axes[1].points();
                for v0 in self.axes[0].points() {
                    for &v1 in &inner {
                        let mut point = self.fixed;
                        point.set(p0, v0);
                        point.set(p1, v1);
                        out.push((alloc::vec![v0, v1], point));
                    }
                }
            }
            _ => {}
        }
        out
    }
}

/// Per-point outcome marker.
#[derive(Debug, Clone, PartialEq)]
pub enum PointStatus {
    Ok,
    Failed(Error),
}

impl PointStatus {
    pub fn is_ok(&self) -> bool {
        matches!(self, PointStatus::Ok)
    }
}

/// One evaluated grid point.
#[derive(Debug, Clone, PartialEq)]
pub struct ObservableRecord {
    /// Swept coordinates in axis order.
    pub coords: Vec<f64>,
    /// The full parameter set at this point.
    pub point: SweepPoint,
    pub c_n: f64,
    pub clipped: bool,
    pub concurrence: f64,
    pub eof: f64,
    /// State eigenvalues, descending.
    pub eigenvalues: [f64; 4],
    pub min_eigenvalue: f64,
    pub trace_residual: f64,
    pub method: SweepMethod,
    /// Max entrywise deviation between the two paths (method `both` only).
    pub method_discrepancy: Option<f64>,
    pub status: PointStatus,
}

/// Evaluates one grid point: thermal state, evolution, observables.
pub fn evaluate_point(
    coords: Vec<f64>,
    point: SweepPoint,
    method: SweepMethod,
    ode_tol: f64,
) -> ObservableRecord {
    let mut record = ObservableRecord {
        coords,
        point,
        c_n: f64::NAN,
        clipped: false,
        concurrence: f64::NAN,
        eof: f64::NAN,
        eigenvalues: [f64::NAN; 4],
        min_eigenvalue: f64::NAN,
        trace_residual: f64::NAN,
        method,
        method_discrepancy: None,
        status: PointStatus::Ok,
    };
    match try_evaluate(&mut record, point, method, ode_tol) {
        Ok(()) => record,
        Err(e) => {
            record.status = PointStatus::Failed(e);
            record
        }
    }
}

fn try_evaluate(
    record: &mut ObservableRecord,
    point: SweepPoint,
    method: SweepMethod,
    ode_tol: f64,
) -> Result<()> {
    let params = point.model_params()?;
    let beta = point.beta()?;
    let rho0 = gibbs_state(&params, beta);

    let evolved: EvolutionResult = match method {
        SweepMethod::Ode => evolve_ode(&rho0, &params, point.t, ode_tol)?,
        SweepMethod::ClosedForm => evolve_closed_form(&rho0, &params, point.t)?,
        SweepMethod::Both => {
            let closed = evolve_closed_form(&rho0, &params, point.t)?;
            let ode = evolve_ode(&rho0, &params, point.t, ode_tol)?;
            record.method_discrepancy = Some(linalg::max_abs_diff(
                closed.rho_t.as_matrix(),
                ode.rho_t.as_matrix(),
            ));
            closed
        }
    };

    // On the closed-form path the trajectory spectrum is available exactly,
    // with full relative precision for eigenvalues far below the dense
    // eigensolver's eps * ||rho|| resolution; this keeps the low-temperature
    // specific-heat growth smooth instead of eigensolver-noise-limited.
    let heat = match method {
        SweepMethod::Ode => specific_heat_normalized(&evolved.rho_t, beta)?,
        SweepMethod::ClosedForm | SweepMethod::Both => {
            let spectrum = closed_form_thermal_spectrum(&params, beta, point.t)?;
            specific_heat_from_spectrum(spectrum, beta)?
        }
    };
    let ent = concurrence(&evolved.rho_t)?;

    record.c_n = heat.c_n;
    record.clipped = heat.clipped;
    record.eigenvalues = heat.eigenvalues;
    record.min_eigenvalue = heat.eigenvalues[3];
    record.concurrence = ent.concurrence;
    record.eof = ent.eof;
    record.trace_residual = evolved.residuals.trace;
    Ok(())
}

/// Result of a sweep; `failed_points` counts error-marked records.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepOutcome {
    pub records: Vec<ObservableRecord>,
    pub failed_points: usize,
}

/// Runs the full grid. A failing point is recorded with its error and the
/// sweep continues; the outcome reports how many points failed.
pub fn run_sweep(config: &SweepConfig) -> Result<SweepOutcome> {
    config.validate()?;
    let mut records = Vec::new();
    let mut failed = 0usize;
    for (coords, point) in config.grid() {
        let record = evaluate_point(coords, point, config.method, config.ode_tol);
        if !record.status.is_ok() {
            failed += 1;
        }
        records.push(record);
    }
    Ok(SweepOutcome {
        records,
        failed_points: failed,
    })
}

/// The built-in figure datasets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FigureId {
    Fig1a,
    Fig1b,
    Fig2,
    Fig3a,
    Fig3b,
    Fig4a,
    Fig4b,
}

impl FigureId {
    pub const ALL: [FigureId; 7] = [
        FigureId::Fig1a,
        FigureId::Fig1b,
        FigureId::Fig2,
        FigureId::Fig3a,
        FigureId::Fig3b,
        FigureId::Fig4a,
        FigureId::Fig4b,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            FigureId::Fig1a => "fig1a",
            FigureId::Fig1b => "fig1b",
            FigureId::Fig2 => "fig2",
            FigureId::Fig3a => "fig3a",
            FigureId::Fig3b => "fig3b",
            FigureId::Fig4a => "fig4a",
            FigureId::Fig4b => "fig4b",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.iter().copied().find(|f| f.name() == name)
    }
}

const FIGURE_TIMES: [f64; 5] = [0.0, 1.0, 2.0, 5.0, 10.0];

fn kt_axis() -> Axis {
    Axis::Range {
        param: SweepParam::Kt,
        min: 0.05,
        max: 5.0,
        points: 31,
        spacing: AxisSpacing::Log,
    }
}

fn time_axis() -> Axis {
    Axis::Range {
        param: SweepParam::T,
        min: 0.0,
        max: 20.0,
        points: 41,
        spacing: AxisSpacing::Linear,
    }
}

/// Preset grid behind each figure dataset.
///
/// Specific-heat maps (`fig1*`, `fig2`) sweep temperature and time or the
/// planar coupling; entanglement maps (`fig3*`, `fig4*`) are taken at the
/// fixed inverse temperature `beta = 0.1` (i.e. `kT = 10`) except for
/// `fig4b`, which sweeps temperature itself.
pub fn figure_config(id: FigureId) -> SweepConfig {
    let heat = alloc::vec![ObservableKind::SpecificHeat, ObservableKind::TraceResidual];
    let ent = alloc::vec![
        ObservableKind::Concurrence,
        ObservableKind::Eof,
        ObservableKind::TraceResidual,
    ];
    let mut fixed = SweepPoint::default();
    let (axes, observables) = match id {
        FigureId::Fig1a => (
            alloc::vec![
                Axis::Values {
                    param: SweepParam::T,
                    values: FIGURE_TIMES.to_vec(),
                },
                kt_axis(),
            ],
            heat,
        ),
        FigureId::Fig1b => (alloc::vec![time_axis(), kt_axis()], heat),
        FigureId::Fig2 => {
            fixed.t = 1.0;
            (
                alloc::vec![
                    kt_axis(),
                    Axis::Range {
                        param: SweepParam::J,
                        min: 0.5,
                        max: 10.0,
                        points: 20,
                        spacing: AxisSpacing::Linear,
                    },
                ],
                heat,
            )
        }
        FigureId::Fig3a => {
            fixed.k_t = 10.0;
            (
                alloc::vec![
                    Axis::Range {
                        param: SweepParam::J,
                        min: 0.5,
                        max: 14.0,
                        points: 28,
                        spacing: AxisSpacing::Linear,
                    },
                    time_axis(),
                ],
                ent,
            )
        }
        FigureId::Fig3b => {
            fixed.k_t = 10.0;
            fixed.t = 0.0;
            (
                alloc::vec![
                    Axis::Range {
                        param: SweepParam::J,
                        min: 0.5,
                        max: 14.0,
                        points: 28,
                        spacing: AxisSpacing::Linear,
                    },
                    Axis::Range {
                        param: SweepParam::Jz,
                        min: 0.0,
                        max: 5.0,
                        points: 21,
                        spacing: AxisSpacing::Linear,
                    },
                ],
                ent,
            )
        }
        FigureId::Fig4a => {
            fixed.k_t = 10.0;
            (
                alloc::vec![
                    Axis::Range {
                        param: SweepParam::Dz,
                        min: 0.05,
                        max: 5.0,
                        points: 100,
                        spacing: AxisSpacing::Linear,
                    },
                    time_axis(),
                ],
                ent,
            )
        }
        FigureId::Fig4b => (
            alloc::vec![
                Axis::Values {
                    param: SweepParam::T,
                    values: FIGURE_TIMES.to_vec(),
                },
                kt_axis(),
            ],
            ent,
        ),
    };
    SweepConfig {
        axes,
        fixed,
        observables,
        method: SweepMethod::ClosedForm,
        ode_tol: defaults::ODE_TOL,
    }
}

/// Runs a preset figure grid.
pub fn figure_dataset(id: FigureId) -> Result<SweepOutcome> {
    run_sweep(&figure_config(id))
}
