// Copyright 2026 Spinbath Contributors
// SPDX-License-Identifier: Apache-2.0

//! CSV rendering.
//!
//! Layout contract: UTF-8, `#`-prefixed provenance comment lines carrying
//! every value needed to reproduce the run (fixed parameters, axes, method,
//! tolerance, code version), one header row naming every column, swept
//! coordinates first in axis order. Data cells use 17 significant digits
//! (`{:.16e}`) so doubles round-trip losslessly; header values use the
//! shortest round-trip form.

use std::io::{self, Write};

use spinbath_core::dynamics::EvolutionMethod;
use spinbath_core::linalg::Matrix4;
use spinbath_core::model::ValidationReport;
use spinbath_core::sweep::{
    Axis, ObservableKind, ObservableRecord, PointStatus, SweepMethod, SweepParam,
};

use crate::config::Settings;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Lossless data-cell formatting: 17 significant digits.
pub fn fmt_cell(v: f64) -> String {
    format!("{v:.16e}")
}

fn write_provenance(
    out: &mut dyn Write,
    label: &str,
    settings: &Settings,
    axes: &[Axis],
) -> io::Result<()> {
    writeln!(out, "# spinbath {VERSION}")?;
    writeln!(out, "# dataset: {label}")?;
    writeln!(
        out,
        "# note: parameter defaults are library exploration choices, not published reference values"
    )?;
    let swept: Vec<SweepParam> = axes.iter().map(|a| a.param()).collect();
    let mut fixed = String::new();
    for p in SweepParam::ALL {
        if !swept.contains(&p) {
            if !fixed.is_empty() {
                fixed.push(' ');
            }
            fixed.push_str(&format!("{}={}", p.name(), settings.point.get(p)));
        }
    }
    writeln!(out, "# fixed: {fixed}")?;
    for axis in axes {
        match axis {
            Axis::Range {
                param,
                min,
                max,
                points,
                spacing,
            } => writeln!(
                out,
                "# axis: {} {} min={min} max={max} points={points}",
                param.name(),
                spacing.name()
            )?,
            Axis::Values { param, values } => {
                let list: Vec<String> = values.iter().map(|v| format!("{v}")).collect();
                writeln!(out, "# axis: {} values {}", param.name(), list.join(" "))?
            }
        }
    }
    writeln!(out, "# method: {}", settings.method.name())?;
    let names: Vec<&str> = settings.observables.iter().map(|o| o.name()).collect();
    writeln!(out, "# observables: {}", names.join(","))?;
    writeln!(out, "# ode_tol: {}", settings.ode_tol)?;
    Ok(())
}

fn observable_columns(kinds: &[ObservableKind]) -> Vec<&'static str> {
    let mut cols = Vec::new();
    for kind in kinds {
        match kind {
            ObservableKind::SpecificHeat => {
                cols.push("c_n");
                cols.push("clipped");
            }
            ObservableKind::Concurrence => cols.push("concurrence"),
            ObservableKind::Eof => cols.push("eof"),
            ObservableKind::Eigenvalues => {
                cols.extend(["eig1", "eig2", "eig3", "eig4", "min_eigenvalue"]);
            }
            ObservableKind::TraceResidual => cols.push("trace_residual"),
        }
    }
    cols
}

/// Writes a full dataset: provenance, header row, one row per record.
pub fn write_records(
    out: &mut dyn Write,
    label: &str,
    settings: &Settings,
    axes: &[Axis],
    records: &[ObservableRecord],
) -> io::Result<()> {
    write_provenance(out, label, settings, axes)?;

    let swept: Vec<SweepParam> = axes.iter().map(|a| a.param()).collect();
    let mut header: Vec<String> = swept.iter().map(|p| p.name().to_string()).collect();
    for p in SweepParam::ALL {
        if !swept.contains(&p) {
            header.push(p.name().to_string());
        }
    }
    header.extend(
        observable_columns(&settings.observables)
            .iter()
            .map(|s| s.to_string()),
    );
    header.push("method".into());
    if settings.method == SweepMethod::Both {
        header.push("method_discrepancy".into());
    }
    header.push("status".into());
    writeln!(out, "{}", header.join(","))?;

    for r in records {
        let mut row: Vec<String> = r.coords.iter().map(|v| fmt_cell(*v)).collect();
        for p in SweepParam::ALL {
            if !swept.contains(&p) {
                row.push(fmt_cell(r.point.get(p)));
            }
        }
        for kind in &settings.observables {
            match kind {
                ObservableKind::SpecificHeat => {
                    row.push(fmt_cell(r.c_n));
                    row.push(if r.clipped { "true" } else { "false" }.into());
                }
                ObservableKind::Concurrence => row.push(fmt_cell(r.concurrence)),
                ObservableKind::Eof => row.push(fmt_cell(r.eof)),
                ObservableKind::Eigenvalues => {
                    for ev in r.eigenvalues {
                        row.push(fmt_cell(ev));
                    }
                    row.push(fmt_cell(r.min_eigenvalue));
                }
                ObservableKind::TraceResidual => row.push(fmt_cell(r.trace_residual)),
            }
        }
        row.push(r.method.name().into());
        if settings.method == SweepMethod::Both {
            row.push(match r.method_discrepancy {
                Some(d) => fmt_cell(d),
                None => "nan".into(),
            });
        }
        row.push(match &r.status {
            PointStatus::Ok => "ok".into(),
            PointStatus::Failed(e) => format!("error: {e}").replace(',', ";"),
        });
        writeln!(out, "{}", row.join(","))?;
    }
    Ok(())
}

/// Provenance and header row for the `evolve` time series.
pub fn write_evolve_header(
    out: &mut dyn Write,
    settings: &Settings,
    t_final: f64,
    points: usize,
    method: EvolutionMethod,
) -> io::Result<()> {
    writeln!(out, "# spinbath {VERSION}")?;
    writeln!(out, "# dataset: evolve")?;
    writeln!(
        out,
        "# note: parameter defaults are library exploration choices, not published reference values"
    )?;
    let p = &settings.point;
    writeln!(
        out,
        "# fixed: kT={} J={} Jz={} Dz={} gamma0={} gamma={}",
        p.k_t, p.j, p.j_z, p.d_z, p.gamma0, p.gamma
    )?;
    writeln!(out, "# t_final: {t_final}")?;
    writeln!(out, "# points: {points}")?;
    writeln!(out, "# method: {}", method.name())?;
    writeln!(out, "# ode_tol: {}", settings.ode_tol)?;

    let mut header = vec!["t".to_string()];
    for i in 1..=4 {
        for j in 1..=4 {
            header.push(format!("rho{i}{j}_re"));
            header.push(format!("rho{i}{j}_im"));
        }
    }
    header.push("trace_residual".into());
    header.push("hermiticity_residual".into());
    header.push("min_eigenvalue".into());
    writeln!(out, "{}", header.join(","))?;
    Ok(())
}

pub fn write_evolve_row(
    out: &mut dyn Write,
    t: f64,
    rho: &Matrix4,
    report: &ValidationReport,
) -> io::Result<()> {
    let mut row = vec![fmt_cell(t)];
    for i in 0..4 {
        for j in 0..4 {
            row.push(fmt_cell(rho[i][j].re));
            row.push(fmt_cell(rho[i][j].im));
        }
    }
    row.push(fmt_cell(report.trace_residual));
    row.push(fmt_cell(report.hermiticity_residual));
    row.push(fmt_cell(report.min_eigenvalue));
    writeln!(out, "{}", row.join(","))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use spinbath_core::sweep::{evaluate_point, SweepPoint};

    #[test]
    fn cells_round_trip_doubles() {
        for v in [0.1, 1.0 / 3.0, 6.626e-34, -1.23456789012345e17] {
            let s = fmt_cell(v);
            let back: f64 = s.parse().unwrap();
            assert_eq!(v, back, "{s}");
        }
    }

    #[test]
    fn error_records_render_with_status_column() {
        // Force a failure by constructing the record through a bad point:
        // kT is validated at evaluation time.
        let point = SweepPoint {
            k_t: -1.0,
            ..Default::default()
        };
        let record = evaluate_point(vec![0.0], point, SweepMethod::ClosedForm, 1e-9);
        assert!(!record.status.is_ok());

        let settings = Settings::default();
        let axes = vec![Axis::Values {
            param: SweepParam::T,
            values: vec![0.0],
        }];
        let mut buf = Vec::new();
        write_records(&mut buf, "sweep", &settings, &axes, &[record]).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let last = text.lines().last().unwrap();
        assert!(last.contains("error:"), "{last}");
        assert!(last.contains("kT"), "{last}");
        // the error cell must not break the CSV column count
        let header_cols = text
            .lines()
            .find(|l| !l.starts_with('#'))
            .unwrap()
            .split(',')
            .count();
        assert_eq!(last.split(',').count(), header_cols);
    }
}
