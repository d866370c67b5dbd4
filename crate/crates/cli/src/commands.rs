//! One function per subcommand. Each returns the table it computed and a
//! JSON summary; `lib.rs` writes them out.

use std::collections::BTreeSet;
use std::f64::consts::PI;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};
use vortex_sp::analysis::{
    angular_term, line_metrics, polar_max_numeric, polar_shift_analytic, to_thz, fwhm_row, LineOptions,
};
use vortex_sp::radiation::{spectral_terms, Term, TermSet};
use vortex_sp::regime::{compute_etas, validate_with, EtaLedger, Thresholds, ValidationReport, Verdict};
use vortex_sp::units::omega_g;
use vortex_sp::Observation;

use crate::config::{RunConfig, ScanVariable, Setup};
use crate::error::CliError;
use crate::output::Table;

/// Terms that have a large-N angular form.
pub fn angular_terms() -> TermSet {
    [Term::Ee, Term::EMu, Term::EQ0, Term::EQ1, Term::EQ2, Term::MuMu, Term::MuQ0, Term::Q0Q0].into()
}

pub struct Computed {
    pub table: Table,
    pub summary: Value,
    /// Scan points that failed validation but ran under --force.
    pub overridden: Vec<Overridden>,
    /// Title and x-axis label when the table is worth plotting.
    pub plot: Option<(String, String)>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Overridden {
    pub point: String,
    pub failed: Vec<String>,
}

fn numeric(at: &str, e: vortex_sp::Error) -> CliError {
    CliError::Numeric(format!("at {at}: {e}"))
}

fn describe(var: ScanVariable, v: f64) -> String {
    format!("{} = {v:e}", var.label())
}

pub fn ledger_and_report(s: &Setup, th: &Thresholds) -> Result<(EtaLedger, ValidationReport), CliError> {
    let ledger = compute_etas(&s.packet, &s.geometry, &s.observation).map_err(|e| CliError::Config(e.to_string()))?;
    let report = validate_with(&ledger, &s.packet, &s.geometry, th).map_err(|e| CliError::Config(e.to_string()))?;
    Ok((ledger, report))
}

/// Validate every configuration a command will evaluate. Without `force`
/// a hard failure stops the run before any computation.
pub fn gate(points: &[(String, Setup)], th: &Thresholds, force: bool) -> Result<Vec<Overridden>, CliError> {
    let mut out = Vec::new();
    let mut seen = BTreeSet::new();
    for (label, s) in points {
        let (_, report) = ledger_and_report(s, th)?;
        if report.overall == Verdict::Fail {
            let failed: Vec<String> = report
                .failed()
                .map(|c| match &c.reason {
                    Some(r) => format!("{} ({r})", c.name),
                    None => c.name.clone(),
                })
                .collect();
            seen.extend(failed.iter().cloned());
            out.push(Overridden {
                point: label.clone(),
                failed,
            });
        }
    }
    if !out.is_empty() && !force {
        let first = &out[0];
        return Err(CliError::Validation(format!(
            "{} of {} configurations fail; first at {}: {}",
            out.len(),
            points.len(),
            first.point,
            seen.into_iter().collect::<Vec<_>>().join(", ")
        )));
    }
    Ok(out)
}

fn resonance(s: &Setup) -> Result<f64, vortex_sp::Error> {
    omega_g(s.geometry.d, 1, s.packet.beam.beta, s.observation.theta)
}

fn scan_points(cfg: &RunConfig, base: &Setup) -> Result<(ScanVariable, Vec<f64>, Vec<(String, Setup)>), CliError> {
    let scan = cfg.scan()?;
    let grid = scan.grid();
    let points = grid
        .iter()
        .map(|&v| Ok((describe(scan.variable, v), base.at(scan.variable, v)?)))
        .collect::<Result<Vec<_>, CliError>>()?;
    Ok((scan.variable, grid, points))
}

fn header(var: &str, terms: &TermSet) -> Vec<String> {
    let mut h = vec![var.to_string()];
    h.extend(terms.iter().map(|t| t.label().to_string()));
    h.push("total".into());
    h.push("total_per_strip".into());
    h
}

fn finish_row(x: f64, values: Vec<f64>, n: u32) -> Vec<f64> {
    let total: f64 = values.iter().sum();
    let mut row = vec![x];
    row.extend(values);
    row.push(total);
    row.push(total / n as f64);
    row
}

pub fn spectrum(cfg: &RunConfig, force: bool) -> Result<Computed, CliError> {
    let base = cfg.setup()?;
    let (var, grid, points) = scan_points(cfg, &base)?;
    let overridden = gate(&points, &cfg.thresholds, force)?;
    let terms: TermSet = cfg.terms.clone().map(|v| v.into_iter().collect()).unwrap_or_else(Term::all);
    let rows = points
        .par_iter()
        .zip(grid.par_iter())
        .map(|((label, s), &x)| {
            let w = match s.omega {
                Some(w) => w,
                None => resonance(s).map_err(|e| numeric(label, e))?,
            };
            let d = spectral_terms(&s.packet, &s.geometry, &s.observation, w, &terms).map_err(|e| numeric(label, e))?;
            Ok(finish_row(x, terms.iter().map(|t| d.terms[t]).collect(), s.geometry.n_strips))
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    let table = Table {
        header: header(var.label(), &terms),
        rows,
    };
    let summary = if var == ScanVariable::Omega {
        let total = table.column("total").expect("total column");
        match line_metrics(&grid, &total) {
            Ok(m) => json!({
                "peak": m.peak,
                "peak_value": m.peak_value,
                "fwhm": m.fwhm,
                "fwhm_thz": to_thz(m.fwhm),
                "zero_width": m.zero_width(),
            }),
            Err(e) => json!({ "error": e.to_string() }),
        }
    } else {
        Value::Null
    };
    Ok(Computed {
        table,
        summary,
        overridden,
        plot: Some(("spectral terms".into(), var.label().into())),
    })
}

fn angular_rows(grid: &[f64], points: &[(String, Setup)], terms: &TermSet) -> Result<Vec<Vec<f64>>, CliError> {
    points
        .par_iter()
        .zip(grid.par_iter())
        .map(|((label, s), &x)| {
            let vals = terms
                .iter()
                .map(|t| angular_term(*t, &s.packet, &s.geometry, &s.observation).map_err(|e| numeric(label, e)))
                .collect::<Result<Vec<f64>, CliError>>()?;
            Ok(finish_row(x, vals, s.geometry.n_strips))
        })
        .collect()
}

fn angular_set(cfg: &RunConfig) -> Result<TermSet, CliError> {
    let allowed = angular_terms();
    match &cfg.terms {
        None => Ok(allowed),
        Some(v) => {
            let set: TermSet = v.iter().copied().collect();
            if let Some(t) = set.iter().find(|t| !allowed.contains(t)) {
                return Err(CliError::Config(format!(
                    "term `{t}` has no large-N angular form; allowed: {}",
                    allowed.iter().map(|t| t.label()).collect::<Vec<_>>().join(", ")
                )));
            }
            Ok(set)
        }
    }
}

pub fn angular(cfg: &RunConfig, force: bool) -> Result<Computed, CliError> {
    let base = cfg.setup()?;
    let (var, grid, points) = scan_points(cfg, &base)?;
    if var == ScanVariable::Omega {
        return Err(CliError::Config("angular distributions are integrated over omega; scan theta, phi, N or h".into()));
    }
    let terms = angular_set(cfg)?;
    let overridden = gate(&points, &cfg.thresholds, force)?;
    let rows = angular_rows(&grid, &points, &terms)?;
    let table = Table {
        header: header(var.label(), &terms),
        rows,
    };
    let total = table.column("total").expect("total column");
    let (i, v) = total
        .iter()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |b, (i, v)| if *v > b.1 { (i, *v) } else { b });
    Ok(Computed {
        table,
        summary: json!({ "max_at": grid[i], "max_value": v }),
        overridden,
        plot: Some(("angular distribution".into(), var.label().into())),
    })
}

/// Least-squares slope of ln y against ln x.
pub fn log_slope(x: &[f64], y: &[f64]) -> Option<f64> {
    if x.len() < 2 || y.iter().any(|v| *v <= 0.0) {
        return None;
    }
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    let n = x.len() as f64;
    let (mx, my) = (lx.iter().sum::<f64>() / n, ly.iter().sum::<f64>() / n);
    let sxy: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = lx.iter().map(|a| (a - mx) * (a - mx)).sum();
    Some(sxy / sxx)
}

pub fn nscan(cfg: &RunConfig, force: bool) -> Result<Computed, CliError> {
    let base = cfg.setup()?;
    let (var, grid, points) = scan_points(cfg, &base)?;
    if var != ScanVariable::N {
        return Err(CliError::Config("nscan needs scan.variable = \"N\"".into()));
    }
    let terms = match &cfg.terms {
        None => [Term::Ee, Term::EQ2].into(),
        Some(_) => angular_set(cfg)?,
    };
    let overridden = gate(&points, &cfg.thresholds, force)?;
    let rows = angular_rows(&grid, &points, &terms)?;
    let table = Table {
        header: header("N", &terms),
        rows,
    };
    let slopes: serde_json::Map<String, Value> = terms
        .iter()
        .map(|t| {
            let y = table.column(t.label()).expect("term column");
            (t.label().to_string(), log_slope(&grid, &y).map_or(Value::Null, Value::from))
        })
        .collect();
    Ok(Computed {
        table,
        summary: json!({ "log_log_slope": slopes }),
        overridden,
        plot: Some(("angular terms against N".into(), "N".into())),
    })
}

fn strip_points(base: &Setup, strips: &[u32]) -> Result<Vec<(String, Setup)>, CliError> {
    if strips.is_empty() || strips.contains(&0) {
        return Err(CliError::Config("strip lists need at least one entry, all >= 1".into()));
    }
    strips
        .iter()
        .map(|&n| Ok((format!("N = {n}"), base.at(ScanVariable::N, n as f64)?)))
        .collect()
}

pub fn fwhm(cfg: &RunConfig, force: bool) -> Result<Computed, CliError> {
    let base = cfg.setup()?;
    let points = strip_points(&base, &cfg.fwhm.strips)?;
    let overridden = gate(&points, &cfg.thresholds, force)?;
    let opts = LineOptions {
        half_span: cfg.fwhm.half_span,
        points: cfg.fwhm.points,
    };
    let rows = points
        .par_iter()
        .map(|(label, s)| fwhm_row(&s.packet, &s.geometry, &s.observation, &opts).map_err(|e| numeric(label, e)))
        .collect::<Result<Vec<_>, CliError>>()?;
    let table = Table {
        header: [
            "N",
            "charge",
            "leading",
            "full",
            "charge_thz",
            "leading_thz",
            "full_thz",
            "leading_percent",
            "full_percent",
        ]
        .map(String::from)
        .to_vec(),
        rows: rows
            .iter()
            .map(|r| {
                vec![
                    r.n as f64,
                    r.charge,
                    r.leading,
                    r.full,
                    to_thz(r.charge),
                    to_thz(r.leading),
                    to_thz(r.full),
                    r.leading_percent,
                    r.full_percent,
                ]
            })
            .collect(),
    };
    Ok(Computed {
        table,
        summary: json!({ "rows": rows }),
        overridden,
        plot: None,
    })
}

pub fn polar_shift(cfg: &RunConfig, force: bool) -> Result<Computed, CliError> {
    let mut base = cfg.setup()?;
    // The shift is defined in the vertical plane.
    base.observation = Observation::new(base.observation.theta, PI / 2.0).map_err(|e| CliError::Config(e.to_string()))?;
    let points = strip_points(&base, &cfg.polar.strips)?;
    let overridden = gate(&points, &cfg.thresholds, force)?;
    let rows = points
        .par_iter()
        .map(|(label, s)| {
            let a = polar_shift_analytic(&s.packet, &s.geometry).map_err(|e| numeric(label, e))?;
            let n = polar_max_numeric(&s.packet, &s.geometry).map_err(|e| numeric(label, e))?;
            Ok(vec![
                s.geometry.n_strips as f64,
                a.theta_e,
                a.delta,
                n.theta_e,
                n.delta,
                a.delta.to_degrees(),
                n.delta.to_degrees(),
            ])
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    let last = rows.last().expect("at least one row").clone();
    let ratios: Vec<Value> = rows
        .iter()
        .map(|r| {
            json!({
                "N": r[0],
                "analytic_over_last": r[2] / last[2],
                "numeric_over_last": r[4] / last[4],
                "analytic_vs_numeric": (r[2] - r[4]).abs() / r[4].abs(),
            })
        })
        .collect();
    Ok(Computed {
        table: Table {
            header: [
                "N",
                "theta_e_analytic",
                "delta_analytic",
                "theta_e_numeric",
                "delta_numeric",
                "delta_analytic_deg",
                "delta_numeric_deg",
            ]
            .map(String::from)
            .to_vec(),
            rows,
        },
        summary: json!({ "ratios": ratios }),
        overridden,
        plot: None,
    })
}
