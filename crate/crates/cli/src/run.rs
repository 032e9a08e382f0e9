use std::path::Path;
use std::time::Instant;

use fracsource_core::estimates::{contraction_monitor, validate_apriori, weak_residual};
use fracsource_core::forward::{forward_solve, SampledProblem, SpectralField, XGrid};
use fracsource_core::fracops::TimeGrid;
use fracsource_core::inverse::{check_conditions, inverse_solve_sampled, InverseSolution};
use fracsource_core::math::trapezoid_weights;
use fracsource_core::spectral::dirichlet_eigenpairs;
use log::{info, warn};

use crate::config::{Mode, RunConfig};
use crate::error::{CliError, CliResult};
use crate::presets::{attach_measurement, mms_generate, Manufactured};
use crate::report::{self, ErrorNorms, IterationReport, RunReport};
use crate::{study, verify};

/// Command-line options that are not part of the configuration file.
#[derive(Debug, Clone, Copy, Default)]
pub struct RunOptions {
    pub seed: u64,
    pub workers: Option<usize>,
}

/// Run `mode`, writing its files into `out`. The report is returned even
/// when the run fails; its status carries the exit code.
pub fn execute(mode: Mode, cfg: &RunConfig, out: &Path, opts: RunOptions) -> (RunReport, CliResult<()>) {
    let start = Instant::now();
    let mut report = RunReport::new(mode, cfg.clone(), opts.seed, opts.workers);
    let result = std::fs::create_dir_all(out)
        .map_err(CliError::from)
        .and_then(|_| dispatch(mode, cfg, out, opts, &mut report));
    report.elapsed_seconds = start.elapsed().as_secs_f64();
    if let Err(e) = &result {
        report.status.exit_code = e.exit_code();
        report.status.message = Some(e.to_string());
    }
    (report, result)
}

fn dispatch(mode: Mode, cfg: &RunConfig, out: &Path, opts: RunOptions, report: &mut RunReport) -> CliResult<()> {
    if let Some(declared) = cfg.mode {
        if declared != mode {
            return Err(CliError::Usage(format!(
                "configuration declares mode {declared:?} but {mode:?} was requested"
            )));
        }
    }
    match mode {
        Mode::Forward => forward(cfg, out, report),
        Mode::Inverse => inverse(cfg, out, report, false),
        Mode::Mms => inverse(cfg, out, report, true),
        Mode::Study => study::run(cfg, out, report),
        Mode::Verify => verify::run(opts.seed, report),
    }
}

/// Preset data on the configured grids, sampled on `modes` eigenmodes.
pub fn build(cfg: &RunConfig, time_nodes: usize, space_nodes: usize, modes: usize, analytic: bool) -> CliResult<(Manufactured, SampledProblem)> {
    let time = TimeGrid::new(cfg.final_time, time_nodes)?;
    let space = XGrid::new(space_nodes)?;
    let mut mf = mms_generate(cfg.problem.preset, cfg.alpha, time, space, analytic)?;
    if let Some(path) = &cfg.problem.psi_file {
        attach_measurement(&mut mf.data, path)?;
    }
    let basis = dirichlet_eigenpairs(&mf.data.domain, modes)?;
    let problem = SampledProblem::new(&mf.data, basis)?;
    Ok((mf, problem))
}

/// Relative `L₂` error over `Q × Ω` (Parseval in `y`, trapezoid in `t`, `x`);
/// absolute when the exact field vanishes.
pub fn field_error(u: &SpectralField, exact: &SpectralField) -> f64 {
    let (time, space) = (u.time(), u.space());
    let m = space.len();
    let tw = trapezoid_weights(time.len(), time.step());
    let xw = space.weights();
    let (mut e, mut s) = (0.0, 0.0);
    for k in 0..u.modes() {
        let (a, b) = (u.mode(k), exact.mode(k));
        for (n, wt) in tw.iter().enumerate() {
            for (j, wx) in xw.iter().enumerate() {
                let i = n * m + j;
                e += wt * wx * (a[i] - b[i]).powi(2);
                s += wt * wx * b[i] * b[i];
            }
        }
    }
    if s > 0.0 {
        (e / s).sqrt()
    } else {
        e.sqrt()
    }
}

/// Relative `L₂(Q)` error of surface samples.
pub fn surface_error(h: &[f64], exact: &[f64], time: TimeGrid, space: XGrid) -> f64 {
    let m = space.len();
    let tw = trapezoid_weights(time.len(), time.step());
    let xw = space.weights();
    let (mut e, mut s) = (0.0, 0.0);
    for (n, wt) in tw.iter().enumerate() {
        for (j, wx) in xw.iter().enumerate() {
            let i = n * m + j;
            e += wt * wx * (h[i] - exact[i]).powi(2);
            s += wt * wx * exact[i] * exact[i];
        }
    }
    if s > 0.0 {
        (e / s).sqrt()
    } else {
        e.sqrt()
    }
}

fn forward(cfg: &RunConfig, out: &Path, report: &mut RunReport) -> CliResult<()> {
    let (mf, problem) = build(cfg, cfg.time_nodes, cfg.space_nodes, cfg.modes, true)?;
    report.conditions = check_conditions(&problem, cfg.epsilon, cfg.denominator_guard).ok();
    let h = mf.exact.h_samples(problem.time, problem.space);
    let u = forward_solve(&h, &problem)?;
    let exact = mf.exact.field(problem.basis.spectrum(), problem.time, problem.space);
    let err = field_error(&u, &exact);
    info!("forward solve: relative L2 error of u {err:.3e}");
    report.errors = Some(ErrorNorms {
        u_rel_l2: err,
        h_rel_l2: None,
        forward_u_rel_l2: Some(err),
    });
    report::write_solution(out, &u)?;
    report::write_h(out, &u, &h)?;
    report.files = vec!["solution_u.csv".into(), "h.csv".into(), "report.json".into()];
    Ok(())
}

/// Solve the inverse problem on `problem` and fill the shared report parts.
pub fn solve_and_assess(cfg: &RunConfig, mf: &Manufactured, problem: &SampledProblem, report: &mut RunReport) -> CliResult<(InverseSolution, ErrorNorms)> {
    report.conditions = check_conditions(problem, cfg.epsilon, cfg.denominator_guard).ok();
    let mut solver = cfg.solver();
    solver.modes = problem.modes();
    let sol = inverse_solve_sampled(problem, &solver)?;
    for w in &sol.diagnostics.warnings {
        warn!("{w}");
    }
    let diag = &sol.diagnostics;
    info!("converged after {} iterations, ratios {:?}", diag.iterations, diag.ratios);
    report.conditions = Some(diag.report.clone());
    report.estimates = validate_apriori(&sol.u, &sol.h, problem, &diag.report)?;
    for c in report.estimates.iter().filter(|c| !c.pass) {
        warn!("a priori bound {} fails: lhs {:e} > rhs {:e}", c.name, c.lhs, c.rhs);
    }
    report.iterations = Some(IterationReport {
        iterations: diag.iterations,
        w_history: diag.w_history.clone(),
        ratios: diag.ratios.clone(),
        warnings: diag.warnings.clone(),
        contraction: contraction_monitor(&diag.w_history, diag.report.kappa).ok(),
        weak_residual: weak_residual(&sol.u, &sol.h, problem).ok(),
    });
    let exact = mf.exact.field(problem.basis.spectrum(), problem.time, problem.space);
    let h_exact = mf.exact.h_samples(problem.time, problem.space);
    let errors = ErrorNorms {
        u_rel_l2: field_error(&sol.u, &exact),
        h_rel_l2: Some(surface_error(&sol.h, &h_exact, problem.time, problem.space)),
        forward_u_rel_l2: None,
    };
    Ok((sol, errors))
}

fn inverse(cfg: &RunConfig, out: &Path, report: &mut RunReport, manufactured: bool) -> CliResult<()> {
    let (mf, problem) = build(cfg, cfg.time_nodes, cfg.space_nodes, cfg.modes, manufactured)?;
    let (sol, mut errors) = solve_and_assess(cfg, &mf, &problem, report)?;
    if manufactured {
        let u = forward_solve(&mf.exact.h_samples(problem.time, problem.space), &problem)?;
        let exact = mf.exact.field(problem.basis.spectrum(), problem.time, problem.space);
        errors.forward_u_rel_l2 = Some(field_error(&u, &exact));
    }
    info!(
        "relative L2 errors: u {:.3e}, h {:.3e}",
        errors.u_rel_l2,
        errors.h_rel_l2.unwrap_or(f64::NAN)
    );
    report.errors = Some(errors);
    report::write_solution(out, &sol.u)?;
    report::write_h(out, &sol.u, &sol.h)?;
    report.files = vec!["solution_u.csv".into(), "h.csv".into(), "report.json".into()];
    Ok(())
}
