// Copyright 2026 Spinbath Contributors
// SPDX-License-Identifier: Apache-2.0

//! Flat `key = value` configuration with `#` comments and optional
//! `[model]` / `[sweep]` / `[output]` section headers (the sections are
//! organizational; keys are unique across the whole vocabulary).
//!
//! ```text
//! [model]
//! J = 1.0          # planar exchange
//! Jz = 0.5
//! Dz = 0.5
//! gamma0 = 0.1
//! gamma = 1.0
//!
//! [sweep]
//! t = 0.0          # fixed values for non-swept parameters
//! kT = 1.0
//! axis = kT log 0.05 5 31
//! axis = J linear 0.5 10 20
//! method = closed_form
//! observables = c_n, concurrence, eof, eigenvalues, trace_residual
//! tolerance = 1e-9
//!
//! [output]
//! path = dataset.csv
//! ```
//!
//! Precedence: library defaults (or a figure preset), then the config file,
//! then repeatable `--set key=value` flags, then dedicated flags. The first
//! `--set axis=...` replaces any axes configured so far instead of
//! appending to them.

use std::fmt;

use spinbath_core::sweep::{
    defaults, figure_config, Axis, AxisSpacing, FigureId, ObservableKind, SweepConfig,
    SweepMethod, SweepParam, SweepPoint,
};

/// A configuration failure, pointing at the offending key and, for file
/// input, the line.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError {
    /// 1-based line in the config file; `None` for `--set` input.
    pub line: Option<usize>,
    pub key: String,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(line) => write!(
                f,
                "config line {line}, key `{}`: {}",
                self.key, self.message
            ),
            None => write!(f, "override `{}`: {}", self.key, self.message),
        }
    }
}

impl std::error::Error for ConfigError {}

const VALID_KEYS: &str =
    "t, kT, J, Jz, Dz, gamma0, gamma, axis, method, observables, tolerance, path";

const VALID_SECTIONS: [&str; 3] = ["model", "sweep", "output"];

/// Effective run configuration after all layers are merged.
#[derive(Debug, Clone, PartialEq)]
pub struct Settings {
    /// Fixed values of all seven parameters (swept ones are overwritten per
    /// grid point).
    pub point: SweepPoint,
    pub axes: Vec<Axis>,
    pub observables: Vec<ObservableKind>,
    pub method: SweepMethod,
    pub ode_tol: f64,
    pub output_path: Option<String>,
    /// Set when the settings started from a figure preset.
    pub figure: Option<FigureId>,
    /// True once an override replaced the preset/config axes.
    axes_replaced: bool,
}

impl Default for Settings {
    fn default() -> Self {
        Self {
            point: SweepPoint::default(),
            axes: Vec::new(),
            observables: ObservableKind::ALL.to_vec(),
            method: SweepMethod::ClosedForm,
            ode_tol: defaults::ODE_TOL,
            output_path: None,
            figure: None,
            axes_replaced: false,
        }
    }
}

impl Settings {
    /// Starts from a figure preset instead of the bare defaults.
    pub fn for_figure(id: FigureId) -> Self {
        let preset = figure_config(id);
        Self {
            point: preset.fixed,
            axes: preset.axes,
            observables: preset.observables,
            method: preset.method,
            ode_tol: preset.ode_tol,
            output_path: None,
            figure: Some(id),
            axes_replaced: false,
        }
    }

    /// Applies a config file, then `--set` overrides, then the dedicated
    /// tolerance flag.
    pub fn apply_layers(
        &mut self,
        config_text: Option<&str>,
        sets: &[String],
        tolerance_flag: Option<f64>,
    ) -> Result<(), ConfigError> {
        if let Some(text) = config_text {
            self.apply_config_text(text)?;
        }
        // `--set` axes replace, rather than extend, whatever came before.
        self.axes_replaced = false;
        for kv in sets {
            let (key, value) = kv.split_once('=').ok_or_else(|| ConfigError {
                line: None,
                key: kv.clone(),
                message: "expected KEY=VALUE".into(),
            })?;
            self.apply_key(None, key.trim(), value.trim())?;
        }
        if let Some(tol) = tolerance_flag {
            self.set_tolerance(None, &format!("{tol}"))?;
        }
        self.validate_point()?;
        Ok(())
    }

    pub fn apply_config_text(&mut self, text: &str) -> Result<(), ConfigError> {
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = strip_comment(raw).trim();
            if line.is_empty() {
                continue;
            }
            if let Some(section) = line.strip_prefix('[') {
                let section = section.strip_suffix(']').ok_or_else(|| ConfigError {
                    line: Some(line_no),
                    key: line.to_string(),
                    message: "unterminated section header".into(),
                })?;
                if !VALID_SECTIONS.contains(&section) {
                    return Err(ConfigError {
                        line: Some(line_no),
                        key: section.to_string(),
                        message: format!(
                            "unknown section; valid sections: {}",
                            VALID_SECTIONS.join(", ")
                        ),
                    });
                }
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| ConfigError {
                line: Some(line_no),
                key: line.to_string(),
                message: "expected `key = value`".into(),
            })?;
            self.apply_key(Some(line_no), key.trim(), value.trim())?;
        }
        Ok(())
    }

    fn apply_key(&mut self, line: Option<usize>, key: &str, value: &str) -> Result<(), ConfigError> {
        if let Some(param) = SweepParam::from_name(key) {
            let v = parse_number(line, key, value)?;
            self.check_param(line, key, param, v)?;
            self.point.set(param, v);
            return Ok(());
        }
        match key {
            "axis" => {
                let axis = parse_axis(line, value)?;
                if !self.axes_replaced {
                    self.axes.clear();
                    self.axes_replaced = true;
                }
                self.axes.push(axis);
                Ok(())
            }
            "method" => {
                self.method = SweepMethod::from_name(value).ok_or_else(|| ConfigError {
                    line,
                    key: key.into(),
                    message: format!("unknown method `{value}`; valid: ode, closed_form, both"),
                })?;
                Ok(())
            }
            "observables" => {
                let mut kinds = Vec::new();
                for item in value.split(',') {
                    let item = item.trim();
                    if item.is_empty() {
                        continue;
                    }
                    let kind = ObservableKind::from_name(item).ok_or_else(|| ConfigError {
                        line,
                        key: key.into(),
                        message: format!(
                            "unknown observable `{item}`; valid: c_n, concurrence, eof, \
                             eigenvalues, trace_residual"
                        ),
                    })?;
                    if !kinds.contains(&kind) {
                        kinds.push(kind);
                    }
                }
                if kinds.is_empty() {
                    return Err(ConfigError {
                        line,
                        key: key.into(),
                        message: "at least one observable required".into(),
                    });
                }
                self.observables = kinds;
                Ok(())
            }
            "tolerance" => self.set_tolerance(line, value),
            "path" => {
                self.output_path = Some(value.to_string());
                Ok(())
            }
            unknown => Err(ConfigError {
                line,
                key: unknown.into(),
                message: format!("unknown key; valid keys: {VALID_KEYS}"),
            }),
        }
    }

    fn set_tolerance(&mut self, line: Option<usize>, value: &str) -> Result<(), ConfigError> {
        let v = parse_number(line, "tolerance", value)?;
        if !(spinbath_core::dynamics::ODE_TOL_MIN..=spinbath_core::dynamics::ODE_TOL_MAX)
            .contains(&v)
        {
            return Err(ConfigError {
                line,
                key: "tolerance".into(),
                message: format!("{v} violates `1e-12 <= tolerance <= 1e-4`"),
            });
        }
        self.ode_tol = v;
        Ok(())
    }

    fn check_param(
        &self,
        line: Option<usize>,
        key: &str,
        param: SweepParam,
        v: f64,
    ) -> Result<(), ConfigError> {
        let bad = |message: String| ConfigError {
            line,
            key: key.into(),
            message,
        };
        if !v.is_finite() {
            return Err(bad(format!("{v} is not finite")));
        }
        match param {
            SweepParam::Gamma if !(v > 0.0) => Err(bad(format!("{v} violates `gamma > 0`"))),
            SweepParam::Gamma0 if !(v >= 0.0) => Err(bad(format!("{v} violates `gamma0 >= 0`"))),
            SweepParam::Kt if !(v > 0.0) => Err(bad(format!("{v} violates `kT > 0`"))),
            SweepParam::T if !(v >= 0.0) => Err(bad(format!("{v} violates `t >= 0`"))),
            _ => Ok(()),
        }
    }

    fn validate_point(&self) -> Result<(), ConfigError> {
        self.point.model_params().map_err(|e| ConfigError {
            line: None,
            key: "model".into(),
            message: e.to_string(),
        })?;
        Ok(())
    }

    pub fn to_sweep_config(&self) -> SweepConfig {
        SweepConfig {
            axes: self.axes.clone(),
            fixed: self.point,
            observables: self.observables.clone(),
            method: self.method,
            ode_tol: self.ode_tol,
        }
    }
}

fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(pos) => &line[..pos],
        None => line,
    }
}

fn parse_number(line: Option<usize>, key: &str, value: &str) -> Result<f64, ConfigError> {
    value.parse::<f64>().map_err(|_| ConfigError {
        line,
        key: key.into(),
        message: format!("`{value}` is not a number"),
    })
}

/// `axis = <param> <linear|log> <min> <max> <points>`
/// or an explicit point list `axis = <param> values <v1> <v2> ...`
fn parse_axis(line: Option<usize>, value: &str) -> Result<Axis, ConfigError> {
    let err = |message: String| ConfigError {
        line,
        key: "axis".into(),
        message,
    };
    let tokens: Vec<&str> = value.split_whitespace().collect();
    if tokens.len() < 2 {
        return Err(err(format!(
            "expected `<param> <linear|log> <min> <max> <points>` or `<param> values <v1> ...`, \
             got `{value}`"
        )));
    }
    let param = SweepParam::from_name(tokens[0])
        .ok_or_else(|| err(format!("unknown parameter `{}`", tokens[0])))?;

    if tokens[1] == "values" {
        let mut values = Vec::new();
        for v in &tokens[2..] {
            values.push(parse_number(line, "axis", v)?);
        }
        if values.is_empty() {
            return Err(err("`values` axis needs at least one value".into()));
        }
        return Ok(Axis::Values { param, values });
    }

    if tokens.len() != 5 {
        return Err(err(format!(
            "expected `<param> <linear|log> <min> <max> <points>`, got `{value}`"
        )));
    }
    let spacing = match tokens[1] {
        "linear" => AxisSpacing::Linear,
        "log" => AxisSpacing::Log,
        other => return Err(err(format!("unknown spacing `{other}`; valid: linear, log"))),
    };
    let min = parse_number(line, "axis", tokens[2])?;
    let max = parse_number(line, "axis", tokens[3])?;
    let points: usize = tokens[4]
        .parse()
        .map_err(|_| err(format!("`{}` is not a point count", tokens[4])))?;
    Ok(Axis::Range {
        param,
        min,
        max,
        points,
        spacing,
    })
}
