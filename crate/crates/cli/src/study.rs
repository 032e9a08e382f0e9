use std::path::Path;

use fracsource_core::math::fit_slope;
use log::info;

use crate::config::{Refine, RunConfig};
use crate::error::{CliError, CliResult};
use crate::report::{self, RunReport, StudyRow, StudySummary};
use crate::run::{build, solve_and_assess};

/// Grid of refinement level `l` starting from the configured one.
fn level_grid(cfg: &RunConfig, refine: Refine, l: usize) -> (usize, usize, usize) {
    let up = |nodes: usize| (nodes - 1) * (1 << l) + 1;
    match refine {
        Refine::Time => (up(cfg.time_nodes), cfg.space_nodes, cfg.modes),
        Refine::Space => (cfg.time_nodes, up(cfg.space_nodes), cfg.modes),
        Refine::Joint => (up(cfg.time_nodes), up(cfg.space_nodes), cfg.modes),
        Refine::Modes => (cfg.time_nodes, cfg.space_nodes, 1 << l),
    }
}

/// Step that the errors are regressed on: `Δt`, `Δx`, or `1/K`.
fn resolution(refine: Refine, row: &StudyRow) -> f64 {
    match refine {
        Refine::Time | Refine::Joint => row.dt,
        Refine::Space => row.dx,
        Refine::Modes => 1.0 / row.k as f64,
    }
}

fn local_order(e0: f64, e1: f64, s0: f64, s1: f64) -> Option<f64> {
    let p = (e0 / e1).ln() / (s0 / s1).ln();
    p.is_finite().then_some(p)
}

fn fitted(steps: &[f64], errs: &[f64]) -> Option<f64> {
    if errs.iter().any(|e| !(*e > 0.0)) {
        return None;
    }
    let xs: Vec<f64> = steps.iter().map(|s| s.ln()).collect();
    let ys: Vec<f64> = errs.iter().map(|e| e.ln()).collect();
    let p = fit_slope(&xs, &ys);
    p.is_finite().then_some(p)
}

/// Manufactured inverse solves over `levels` refinements, with empirical
/// orders of `u` and `h`.
pub fn run(cfg: &RunConfig, out: &Path, report: &mut RunReport) -> CliResult<()> {
    let spec = cfg
        .study
        .as_ref()
        .ok_or_else(|| CliError::Usage("study mode needs a 'study' section".into()))?;
    if spec.levels < 3 {
        return Err(CliError::Usage(format!(
            "a convergence study needs at least 3 levels, got {}",
            spec.levels
        )));
    }
    let mut rows: Vec<StudyRow> = Vec::with_capacity(spec.levels);
    for l in 0..spec.levels {
        let (n, m, k) = level_grid(cfg, spec.refine, l);
        let (mf, problem) = build(cfg, n, m, k, true)?;
        let (sol, errors) = solve_and_assess(cfg, &mf, &problem, report)?;
        let mut row = StudyRow {
            level: l,
            dt: problem.time.step(),
            dx: problem.space.step(),
            k,
            err_u_l2: errors.u_rel_l2,
            err_h_l2: errors.h_rel_l2.unwrap_or(f64::NAN),
            order_u: None,
            order_h: None,
            iters: sol.diagnostics.iterations,
            kappa: sol.diagnostics.report.kappa,
        };
        if let Some(prev) = rows.last() {
            let (s0, s1) = (resolution(spec.refine, prev), resolution(spec.refine, &row));
            row.order_u = local_order(prev.err_u_l2, row.err_u_l2, s0, s1);
            row.order_h = local_order(prev.err_h_l2, row.err_h_l2, s0, s1);
        }
        info!(
            "level {l}: N = {n}, M = {m}, K = {k}, err_u {:.3e}, err_h {:.3e}",
            row.err_u_l2, row.err_h_l2
        );
        rows.push(row);
    }
    let steps: Vec<f64> = rows.iter().map(|r| resolution(spec.refine, r)).collect();
    let eu: Vec<f64> = rows.iter().map(|r| r.err_u_l2).collect();
    let eh: Vec<f64> = rows.iter().map(|r| r.err_h_l2).collect();
    report::write_study(out, &rows)?;
    report.study = Some(StudySummary {
        refine: spec.refine,
        fitted_order_u: fitted(&steps, &eu),
        fitted_order_h: fitted(&steps, &eh),
        rows,
    });
    report.files = vec!["study.csv".into(), "report.json".into()];
    Ok(())
}
