//! Experiment execution: grids, references, measurement, CSV assembly.
//!
//! Grid conventions. The auto grid is 500 log-spaced-plus-linear points
//! from 0 to a crossing of the (deterministic) reference: the linear half
//! covers the atom region, the log half resolves the scale spread of the
//! tail. Two crossing levels are used:
//!
//! * display grids (figure, approx-comparison) stop where the reference
//!   falls to the bound `δ` itself — past that point the certified error
//!   exceeds the value being plotted;
//! * measurement grids (max-error columns) stop at `δ/4`. The spectral
//!   tail underestimates the reference in the far tail, so beyond that
//!   crossing the error is at most `δ/4`, strictly less than the interior
//!   peak (empirically near `δ/2`); the measured grid maximum is therefore
//!   the sup over all of `[0, ∞)`.
//!
//! The deterministic reference is the exact formula for Abate-Whitt claims
//! and the spectral approximation itself otherwise; Monte Carlo values are
//! then evaluated on the finished grid.

use super::spec::{ExperimentKind, ExperimentSpec, GridPolicy, AUTO_GRID_POINTS};
use crate::classic::{extended_bound, heavy_tail, heavy_traffic, matched_phases};
use crate::distributions::{ClaimModel, ModelKind};
use crate::error::{Error, Result};
use crate::oracle::{exact_ruin_abate_whitt, mc_ruin, McConfig};
use crate::pk::{certified_bound, phases_for_bound, RuinSolution};
use crate::roots::{bisect, expand_bracket_up};
use crate::spectral::{fit_hyperexp, HyperExp};
use rayon::prelude::*;

/// Result of running an experiment: the CSV body, a human summary for
/// stdout, and non-fatal notes for stderr.
#[derive(Debug, Clone)]
pub struct ExperimentOutput {
    pub csv: String,
    pub summary: String,
    pub warnings: Vec<String>,
}

/// Format `v` with `digits` significant digits in plain decimal notation.
pub fn fmt_sig(v: f64, digits: usize) -> String {
    if !v.is_finite() {
        return if v.is_nan() {
            "nan".to_string()
        } else if v > 0.0 {
            "inf".to_string()
        } else {
            "-inf".to_string()
        };
    }
    if v == 0.0 {
        return "0".to_string();
    }
    let exp = v.abs().log10().floor() as i32;
    let decimals = (digits as i32 - 1 - exp).clamp(0, 30) as usize;
    format!("{v:.decimals$}")
}

fn fmt_opt(v: Option<f64>, digits: usize) -> String {
    match v {
        Some(v) => fmt_sig(v, digits),
        None => "n/a".to_string(),
    }
}

/// Smallest `u` with `reference(u) <= level` for a decreasing reference.
fn crossing(reference: &(dyn Fn(f64) -> f64 + Sync), level: f64) -> Result<f64> {
    let f = |u: f64| reference(u) - level;
    if f(0.0) <= 0.0 {
        return Err(Error::domain(format!(
            "level {level} is not below the reference at 0 ({}); nothing to display",
            reference(0.0)
        )));
    }
    let (lo, hi) = expand_bracket_up(&f, 0.0, 1.0, 1e30)?;
    bisect(&f, lo, hi, 1e-9)
}

/// Auto grid: `points` log-spaced-plus-linear values from 0 to the
/// `level`-crossing of `reference`.
pub fn auto_grid(
    reference: &(dyn Fn(f64) -> f64 + Sync),
    level: f64,
    points: usize,
) -> Result<Vec<f64>> {
    let u_star = crossing(reference, level)?;
    let n_lin = points / 2;
    let n_log = points - n_lin;
    let mut grid: Vec<f64> = (0..n_lin)
        .map(|i| u_star * i as f64 / (n_lin - 1).max(1) as f64)
        .collect();
    for i in 0..n_log {
        let t = i as f64 / (n_log - 1).max(1) as f64;
        grid.push(u_star * 1e-6f64.powf(1.0 - t));
    }
    grid.sort_by(f64::total_cmp);
    grid.dedup();
    Ok(grid)
}

/// Display grid: up to the crossing of the reference with `delta` itself.
pub fn figure_grid(
    reference: &(dyn Fn(f64) -> f64 + Sync),
    delta: f64,
    points: usize,
) -> Result<Vec<f64>> {
    auto_grid(reference, delta, points)
}

/// Max-error measurement grid: up to the crossing with `delta/4` (clamped
/// below half the atom so that loose bounds still yield a usable range).
/// The interior error peak sits near `delta/2`, so the tail beyond this
/// grid cannot carry the maximum.
pub fn measurement_grid(
    reference: &(dyn Fn(f64) -> f64 + Sync),
    delta: f64,
    points: usize,
) -> Result<Vec<f64>> {
    let atom = reference(0.0);
    auto_grid(reference, (delta / 4.0).min(atom / 2.0), points)
}

/// Reference values on a grid: exact where available, Monte Carlo
/// otherwise (in which case 95% half-widths come along).
fn reference_on_grid(
    spec: &ExperimentSpec,
    rho: f64,
    grid: &[f64],
) -> Result<(Vec<f64>, Option<Vec<f64>>)> {
    match spec.model.kind() {
        ModelKind::AbateWhitt { mu } => {
            let vals = grid
                .iter()
                .map(|&u| exact_ruin_abate_whitt(mu, rho, u))
                .collect::<Result<Vec<_>>>()?;
            Ok((vals, None))
        }
        _ => {
            let cfg = McConfig::new(spec.samples, spec.seed, grid.to_vec())?;
            let est = mc_ruin(&spec.model, rho, &cfg)?;
            Ok((est.estimates, Some(est.half_widths)))
        }
    }
}

/// Deterministic stand-in for the reference when locating grid crossings:
/// the exact formula where it exists, the spectral approximation otherwise.
fn deterministic_reference<'a>(
    model: &ClaimModel,
    rho: f64,
    sol: &'a RuinSolution,
) -> Box<dyn Fn(f64) -> f64 + Sync + 'a> {
    match model.kind() {
        ModelKind::AbateWhitt { mu } => {
            Box::new(move |u| exact_ruin_abate_whitt(mu, rho, u).expect("validated inputs"))
        }
        _ => Box::new(move |u| sol.ruin(u)),
    }
}

fn solve_cell(model: &ClaimModel, rho: f64, k: usize) -> Result<(HyperExp, RuinSolution)> {
    let hx = fit_hyperexp(model, k)?;
    let sol = RuinSolution::solve(&hx, rho)?;
    Ok((hx, sol))
}

fn max_abs_err(reference: &[f64], approx: &[f64]) -> f64 {
    reference
        .iter()
        .zip(approx)
        .map(|(r, a)| (r - a).abs())
        .fold(0.0, f64::max)
}

fn csv(header: &[String], rows: &[Vec<String>]) -> String {
    let mut out = String::new();
    out.push_str(&header.join(","));
    out.push('\n');
    for row in rows {
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

/// Run an experiment; the output is a pure function of the spec.
pub fn run_experiment(spec: &ExperimentSpec) -> Result<ExperimentOutput> {
    spec.validate()?;
    match spec.kind {
        ExperimentKind::PhasesImpact => phases_impact(spec),
        ExperimentKind::BoundQuality => bound_quality(spec),
        ExperimentKind::ApproxComparison => approx_comparison(spec),
        ExperimentKind::BoundMatching => bound_matching(spec),
        ExperimentKind::SingleQuery => single_query(spec),
    }
}

fn phases_impact(spec: &ExperimentSpec) -> Result<ExperimentOutput> {
    let rho = spec.rhos[0];
    let d = spec.digits;
    let cells: Vec<(HyperExp, RuinSolution)> = spec
        .ks
        .par_iter()
        .map(|&k| solve_cell(&spec.model, rho, k))
        .collect::<Result<Vec<_>>>()?;

    // Shared evaluation grid: tightest cell bound gives the longest range,
    // which contains the error peaks of every looser cell as well.
    let min_delta = cells
        .iter()
        .map(|(_, s)| s.delta())
        .fold(f64::INFINITY, f64::min);
    let last = &cells.last().expect("validated nonempty").1;
    let reference = deterministic_reference(&spec.model, rho, last);
    let grid = match &spec.grid {
        GridPolicy::Explicit(g) => g.clone(),
        GridPolicy::Auto => measurement_grid(&*reference, min_delta, AUTO_GRID_POINTS)?,
    };
    let (ref_vals, ci) = reference_on_grid(spec, rho, &grid)?;

    let mut header = vec!["u".to_string(), "psi_ref".to_string()];
    if ci.is_some() {
        header.push("ci_half_width".to_string());
    }
    for &k in &spec.ks {
        header.push(format!("psi_k{k}"));
        header.push(format!("err_k{k}"));
    }
    let mut rows = Vec::with_capacity(grid.len());
    for (i, &u) in grid.iter().enumerate() {
        let mut row = vec![fmt_sig(u, d), fmt_sig(ref_vals[i], d)];
        if let Some(ci) = &ci {
            row.push(fmt_sig(ci[i], d));
        }
        for (_, sol) in &cells {
            let v = sol.ruin(u);
            row.push(fmt_sig(v, d));
            row.push(fmt_sig((ref_vals[i] - v).abs(), d));
        }
        rows.push(row);
    }

    let mut summary = format!(
        "experiment: phases-impact  model: {}  rho: {}\n",
        spec.model, rho
    );
    for (k, (hx, sol)) in spec.ks.iter().zip(&cells) {
        let approx: Vec<f64> = grid.iter().map(|&u| sol.ruin(u)).collect();
        let max_err = max_abs_err(&ref_vals, &approx);
        summary.push_str(&format!(
            "k={k}  epsilon={}  bound={}  max_error={}  ratio={}\n",
            fmt_sig(hx.accuracy(), d),
            fmt_sig(sol.delta(), d),
            fmt_sig(max_err, d),
            fmt_sig(sol.delta() / max_err, 3),
        ));
    }
    Ok(ExperimentOutput {
        csv: csv(&header, &rows),
        summary,
        warnings: reference_warning(spec),
    })
}

fn bound_quality(spec: &ExperimentSpec) -> Result<ExperimentOutput> {
    let d = spec.digits;
    let delta = spec.delta.expect("validated");

    struct Cell {
        rho: f64,
        k: usize,
        bound: f64,
        grid: Vec<f64>,
        ref_vals: Vec<f64>,
        ci: Option<Vec<f64>>,
        approx: Vec<f64>,
    }
    let cells: Vec<Cell> = spec
        .rhos
        .par_iter()
        .map(|&rho| -> Result<Cell> {
            let k = phases_for_bound(delta, rho);
            let (hx, sol) = solve_cell(&spec.model, rho, k)?;
            let bound = certified_bound(hx.accuracy(), rho);
            let reference = deterministic_reference(&spec.model, rho, &sol);
            let grid = match &spec.grid {
                GridPolicy::Explicit(g) => g.clone(),
                GridPolicy::Auto => measurement_grid(&*reference, bound, AUTO_GRID_POINTS)?,
            };
            let (ref_vals, ci) = reference_on_grid(spec, rho, &grid)?;
            let approx = grid.iter().map(|&u| sol.ruin(u)).collect();
            Ok(Cell {
                rho,
                k,
                bound,
                grid,
                ref_vals,
                ci,
                approx,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let with_ci = cells.iter().any(|c| c.ci.is_some());
    let mut header: Vec<String> = ["rho", "k", "u", "psi_ref"].map(String::from).to_vec();
    if with_ci {
        header.push("ci_half_width".to_string());
    }
    header.push("psi_spectral".to_string());
    header.push("abs_err".to_string());

    let mut rows = Vec::new();
    let mut summary = format!(
        "experiment: bound-quality  model: {}  target delta: {}\n",
        spec.model,
        fmt_sig(delta, d)
    );
    for c in &cells {
        for (i, &u) in c.grid.iter().enumerate() {
            let mut row = vec![
                fmt_sig(c.rho, d),
                c.k.to_string(),
                fmt_sig(u, d),
                fmt_sig(c.ref_vals[i], d),
            ];
            if with_ci {
                row.push(fmt_opt(c.ci.as_ref().map(|ci| ci[i]), d));
            }
            row.push(fmt_sig(c.approx[i], d));
            row.push(fmt_sig((c.ref_vals[i] - c.approx[i]).abs(), d));
            rows.push(row);
        }
        let max_err = max_abs_err(&c.ref_vals, &c.approx);
        summary.push_str(&format!(
            "rho={}  k={}  bound={}  max_error={}  ratio={}\n",
            fmt_sig(c.rho, d),
            c.k,
            fmt_sig(c.bound, d),
            fmt_sig(max_err, d),
            fmt_sig(c.bound / max_err, 3),
        ));
    }
    Ok(ExperimentOutput {
        csv: csv(&header, &rows),
        summary,
        warnings: reference_warning(spec),
    })
}

fn approx_comparison(spec: &ExperimentSpec) -> Result<ExperimentOutput> {
    let d = spec.digits;
    let delta = spec.delta.expect("validated");

    struct Cell {
        rho: f64,
        k: usize,
        grid: Vec<f64>,
        ref_vals: Vec<f64>,
        ci: Option<Vec<f64>>,
        spectral: Vec<f64>,
        tail: Vec<f64>,
        traffic: Option<Vec<f64>>,
    }
    let cells: Vec<Cell> = spec
        .rhos
        .par_iter()
        .map(|&rho| -> Result<Cell> {
            let k = phases_for_bound(delta, rho);
            let (_, sol) = solve_cell(&spec.model, rho, k)?;
            let reference = deterministic_reference(&spec.model, rho, &sol);
            let grid = match &spec.grid {
                GridPolicy::Explicit(g) => g.clone(),
                GridPolicy::Auto => figure_grid(&*reference, delta, AUTO_GRID_POINTS)?,
            };
            let (ref_vals, ci) = reference_on_grid(spec, rho, &grid)?;
            let spectral = grid.iter().map(|&u| sol.ruin(u)).collect();
            let tail = grid
                .iter()
                .map(|&u| heavy_tail(&spec.model, rho, u))
                .collect::<Result<Vec<_>>>()?;
            let traffic = match heavy_traffic(&spec.model, rho, 0.0) {
                Ok(_) => Some(
                    grid.iter()
                        .map(|&u| heavy_traffic(&spec.model, rho, u))
                        .collect::<Result<Vec<_>>>()?,
                ),
                Err(Error::Domain(_)) => None,
                Err(e) => return Err(e),
            };
            Ok(Cell {
                rho,
                k,
                grid,
                ref_vals,
                ci,
                spectral,
                tail,
                traffic,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let with_ci = cells.iter().any(|c| c.ci.is_some());
    let mut header: Vec<String> = ["rho", "k", "u", "psi_ref"].map(String::from).to_vec();
    if with_ci {
        header.push("ci_half_width".to_string());
    }
    header.extend(
        [
            "psi_spectral",
            "psi_heavy_tail",
            "psi_heavy_traffic",
            "delta_level",
        ]
        .map(String::from),
    );

    let mut rows = Vec::new();
    let mut summary = format!(
        "experiment: approx-comparison  model: {}  delta: {}\n",
        spec.model,
        fmt_sig(delta, d)
    );
    let mut warnings = reference_warning(spec);
    for c in &cells {
        for (i, &u) in c.grid.iter().enumerate() {
            let mut row = vec![
                fmt_sig(c.rho, d),
                c.k.to_string(),
                fmt_sig(u, d),
                fmt_sig(c.ref_vals[i], d),
            ];
            if with_ci {
                row.push(fmt_opt(c.ci.as_ref().map(|ci| ci[i]), d));
            }
            row.push(fmt_sig(c.spectral[i], d));
            row.push(fmt_sig(c.tail[i], d));
            row.push(fmt_opt(c.traffic.as_ref().map(|t| t[i]), d));
            row.push(fmt_sig(delta, d));
            rows.push(row);
        }
        let max_sp = max_abs_err(&c.ref_vals, &c.spectral);
        let max_ht = max_abs_err(&c.ref_vals, &c.tail);
        let max_tr = c.traffic.as_ref().map(|t| max_abs_err(&c.ref_vals, t));
        summary.push_str(&format!(
            "rho={}  k={}  max_err_spectral={}  max_err_heavy_tail={}  max_err_heavy_traffic={}\n",
            fmt_sig(c.rho, d),
            c.k,
            fmt_sig(max_sp, d),
            fmt_sig(max_ht, d),
            fmt_opt(max_tr, d),
        ));
        if c.traffic.is_none() {
            warnings.push(format!(
                "heavy-traffic column is n/a for {}: no finite second claim moment",
                spec.model
            ));
        }
    }
    Ok(ExperimentOutput {
        csv: csv(&header, &rows),
        summary,
        warnings,
    })
}

fn bound_matching(spec: &ExperimentSpec) -> Result<ExperimentOutput> {
    let d = spec.digits;

    struct Cell {
        rho: f64,
        ht_bound: f64,
        k_star: usize,
        sp_bound: f64,
        max_ht_err: f64,
        max_sp_err: f64,
    }
    let cells: Vec<Cell> = spec
        .rhos
        .par_iter()
        .map(|&rho| -> Result<Cell> {
            let ht_bound = extended_bound(&spec.model, rho)?;
            let k_star = matched_phases(&spec.model, rho)?;
            let sp_bound = certified_bound(1.0 / (k_star as f64 + 1.0), rho);
            let (_, sol) = solve_cell(&spec.model, rho, k_star)?;
            let reference = deterministic_reference(&spec.model, rho, &sol);
            let grid = match &spec.grid {
                GridPolicy::Explicit(g) => g.clone(),
                GridPolicy::Auto => {
                    measurement_grid(&*reference, sp_bound.min(ht_bound), AUTO_GRID_POINTS)?
                }
            };
            let (ref_vals, _) = reference_on_grid(spec, rho, &grid)?;
            let spectral: Vec<f64> = grid.iter().map(|&u| sol.ruin(u)).collect();
            let traffic = grid
                .iter()
                .map(|&u| heavy_traffic(&spec.model, rho, u))
                .collect::<Result<Vec<f64>>>()?;
            Ok(Cell {
                rho,
                ht_bound,
                k_star,
                sp_bound,
                max_ht_err: max_abs_err(&ref_vals, &traffic),
                max_sp_err: max_abs_err(&ref_vals, &spectral),
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let header: Vec<String> = [
        "rho",
        "ht_bound",
        "k_star",
        "sp_bound",
        "max_ht_error",
        "max_sp_error",
    ]
    .map(String::from)
    .to_vec();
    let mut rows = Vec::new();
    let mut summary = format!("experiment: bound-matching  model: {}\n", spec.model);
    for c in &cells {
        rows.push(vec![
            fmt_sig(c.rho, d),
            fmt_sig(c.ht_bound, d),
            c.k_star.to_string(),
            fmt_sig(c.sp_bound, d),
            fmt_sig(c.max_ht_err, d),
            fmt_sig(c.max_sp_err, d),
        ]);
        summary.push_str(&format!(
            "rho={}  ht_bound={}  k_star={}  sp_bound={}  max_ht_error={}  max_sp_error={}\n",
            fmt_sig(c.rho, d),
            fmt_sig(c.ht_bound, 3),
            c.k_star,
            fmt_sig(c.sp_bound, 3),
            fmt_sig(c.max_ht_err, d),
            fmt_sig(c.max_sp_err, d),
        ));
    }
    Ok(ExperimentOutput {
        csv: csv(&header, &rows),
        summary,
        warnings: reference_warning(spec),
    })
}

fn single_query(spec: &ExperimentSpec) -> Result<ExperimentOutput> {
    let d = spec.digits;
    let rho = spec.rhos[0];
    let k = match spec.delta {
        Some(delta) => phases_for_bound(delta, rho),
        None => spec.ks[0],
    };
    let (hx, sol) = solve_cell(&spec.model, rho, k)?;
    let delta = sol.delta();

    let mut warnings = Vec::new();
    let header: Vec<String> = [
        "u",
        "k",
        "epsilon",
        "delta",
        "psi_spectral",
        "psi_heavy_tail",
        "psi_heavy_traffic",
    ]
    .map(String::from)
    .to_vec();
    let mut rows = Vec::new();
    let mut summary = format!(
        "model: {}  rho: {}  k: {k}  epsilon: {}  certified bound: {}\n",
        spec.model,
        rho,
        fmt_sig(hx.accuracy(), d),
        fmt_sig(delta, d),
    );
    let mut traffic_feasible = true;
    for &u in &spec.us {
        let sp = sol.ruin(u);
        let ht = heavy_tail(&spec.model, rho, u)?;
        let tr = match heavy_traffic(&spec.model, rho, u) {
            Ok(v) => Some(v),
            Err(Error::Domain(_)) => {
                traffic_feasible = false;
                None
            }
            Err(e) => return Err(e),
        };
        rows.push(vec![
            fmt_sig(u, d),
            k.to_string(),
            fmt_sig(hx.accuracy(), d),
            fmt_sig(delta, d),
            fmt_sig(sp, d),
            fmt_sig(ht, d),
            fmt_opt(tr, d),
        ]);
        summary.push_str(&format!(
            "u={}  spectral={}  heavy_tail={}  heavy_traffic={}\n",
            fmt_sig(u, d),
            fmt_sig(sp, d),
            fmt_sig(ht, d),
            fmt_opt(tr, d),
        ));
    }
    if !traffic_feasible {
        warnings.push(format!(
            "heavy-traffic column is n/a for {}: no finite second claim moment",
            spec.model
        ));
    }
    Ok(ExperimentOutput {
        csv: csv(&header, &rows),
        summary,
        warnings,
    })
}

/// Figure data: reference, all three approximations and the bound level,
/// over the range where the reference stays above the bound.
pub fn emit_figure_data(spec: &ExperimentSpec) -> Result<ExperimentOutput> {
    spec.validate()?;
    if spec.rhos.len() != 1 {
        return Err(Error::domain("figure data uses a single load"));
    }
    let Some(delta) = spec.delta else {
        return Err(Error::domain("figure data needs a bound target (--delta)"));
    };
    let d = spec.digits;
    let rho = spec.rhos[0];
    let k = phases_for_bound(delta, rho);
    let (_, sol) = solve_cell(&spec.model, rho, k)?;
    let reference = deterministic_reference(&spec.model, rho, &sol);
    let grid = match &spec.grid {
        GridPolicy::Explicit(g) => g.clone(),
        GridPolicy::Auto => figure_grid(&*reference, delta, AUTO_GRID_POINTS)?,
    };
    let (ref_vals, ci) = reference_on_grid(spec, rho, &grid)?;

    let mut header = vec!["u".to_string(), "psi_ref".to_string()];
    if ci.is_some() {
        header.push("ci_half_width".to_string());
    }
    header.extend(
        [
            "psi_spectral",
            "psi_heavy_tail",
            "psi_heavy_traffic",
            "delta_level",
        ]
        .map(String::from),
    );
    let mut warnings = reference_warning(spec);
    let traffic_feasible = heavy_traffic(&spec.model, rho, 0.0).is_ok();
    if !traffic_feasible {
        warnings.push(format!(
            "heavy-traffic column is n/a for {}: no finite second claim moment",
            spec.model
        ));
    }
    let mut rows = Vec::with_capacity(grid.len());
    for (i, &u) in grid.iter().enumerate() {
        let mut row = vec![fmt_sig(u, d), fmt_sig(ref_vals[i], d)];
        if let Some(ci) = &ci {
            row.push(fmt_sig(ci[i], d));
        }
        row.push(fmt_sig(sol.ruin(u), d));
        row.push(fmt_sig(heavy_tail(&spec.model, rho, u)?, d));
        row.push(if traffic_feasible {
            fmt_sig(heavy_traffic(&spec.model, rho, u)?, d)
        } else {
            "n/a".to_string()
        });
        row.push(fmt_sig(delta, d));
        rows.push(row);
    }
    let summary = format!(
        "figure data: model: {}  rho: {rho}  delta: {}  k: {k}  points: {}  u_max: {}\n",
        spec.model,
        fmt_sig(delta, d),
        grid.len(),
        fmt_sig(*grid.last().unwrap_or(&0.0), d),
    );
    Ok(ExperimentOutput {
        csv: csv(&header, &rows),
        summary,
        warnings,
    })
}

fn reference_warning(spec: &ExperimentSpec) -> Vec<String> {
    match spec.model.kind() {
        ModelKind::AbateWhitt { .. } => Vec::new(),
        _ => vec![format!(
            "reference for {} is Monte Carlo ({} samples, seed {})",
            spec.model, spec.samples, spec.seed
        )],
    }
}
