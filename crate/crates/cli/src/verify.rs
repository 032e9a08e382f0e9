use std::f64::consts::PI;

use fracsource_core::estimates::{check_alikhanov, check_gronwall, inequality_chain, lemma_j_refinement};
use fracsource_core::fracops::{mittag_leffler, FractionalOrder, SampledSignal, TimeGrid};
use fracsource_core::math::erfc;
use fracsource_core::spectral::{c_epsilon, dirichlet_eigenpairs, project, Spectrum, YDomain};
use fracsource_core::Error as CoreError;
use log::{info, warn};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{CliError, CliResult};
use crate::report::{RunReport, VerifyCheck};

const DRAWS: usize = 32;

fn check(suite: &'static str, name: &str, value: f64, threshold: f64, pass: bool, detail: String) -> VerifyCheck {
    VerifyCheck {
        suite,
        name: name.to_string(),
        value,
        threshold,
        pass,
        detail,
    }
}

/// `value ≤ threshold`.
fn at_most(suite: &'static str, name: &str, value: f64, threshold: f64, detail: String) -> VerifyCheck {
    check(suite, name, value, threshold, value <= threshold, detail)
}

fn order(a: f64) -> CliResult<FractionalOrder> {
    Ok(FractionalOrder::new(a)?)
}

fn trig(rng: &mut ChaCha8Rng, grid: TimeGrid, amplitude: f64) -> CliResult<SampledSignal> {
    let terms: Vec<(f64, f64, f64)> = (0..rng.random_range(1..5))
        .map(|_| {
            (
                rng.random_range(-amplitude..amplitude),
                rng.random_range(0.0..10.0),
                rng.random_range(0.0..2.0 * PI),
            )
        })
        .collect();
    Ok(SampledSignal::from_fn(grid, |t| terms.iter().map(|&(a, f, p)| a * (f * t + p).sin()).sum())?)
}

fn fracops(rng: &mut ChaCha8Rng) -> CliResult<Vec<VerifyCheck>> {
    let mut out = Vec::new();

    let mut worst = 0.0_f64;
    for _ in 0..DRAWS {
        let z: f64 = rng.random_range(-30.0..5.0);
        let e = mittag_leffler(1.0, 1.0, z)?;
        worst = worst.max((e - z.exp()).abs() / z.exp());
        let e2 = mittag_leffler(1.0, 2.0, z)?;
        worst = worst.max((e2 - z.exp_m1() / z).abs() / (z.exp_m1() / z).abs());
    }
    out.push(at_most("fracops", "ml_exponential", worst, 1e-10, format!("{DRAWS} draws of z in [-30, 5)")));

    let mut worst = 0.0_f64;
    for _ in 0..DRAWS {
        let x: f64 = rng.random_range(0.0..5.0);
        let want = (x * x).exp() * erfc(x);
        worst = worst.max((mittag_leffler(0.5, 1.0, -x)? - want).abs() / want);
    }
    out.push(at_most("fracops", "ml_half_erfc", worst, 1e-10, format!("{DRAWS} draws of x in [0, 5)")));

    let alpha: f64 = rng.random_range(0.2..0.9);
    let r = lemma_j_refinement(|t| t, order(alpha)?, 1.0, &[65, 129, 257, 513])?;
    let decreasing = r.residuals.windows(2).all(|w| w[1] < w[0]);
    out.push(check(
        "fracops",
        "lemma_j_refinement_order",
        r.order,
        0.95,
        decreasing && r.order >= 0.95,
        format!("v = t, alpha = {alpha:.4}, residuals {:?}", r.residuals),
    ));

    let mut failures = 0;
    for _ in 0..DRAWS {
        let g = TimeGrid::new(1.0, 129)?;
        let w = trig(rng, g, 2.0)?;
        let a = rng.random_range(0.05..=1.0);
        if !check_alikhanov(&w, order(a)?).pass {
            failures += 1;
        }
    }
    out.push(at_most("fracops", "alikhanov_failures", failures as f64, 0.0, format!("{DRAWS} random signals")));

    let mut failures = 0;
    let g = TimeGrid::new(1.0, 257)?;
    for _ in 0..DRAWS {
        let y0 = rng.random_range(0.0..2.0);
        let c1 = rng.random_range(0.01..2.0);
        let base = rng.random_range(0.0..2.0);
        let wave = rng.random_range(0.0..1.0);
        let alpha = rng.random_range(0.1..=1.0);
        let forcing = SampledSignal::from_fn(g, |t| base + wave * (3.0 * t).sin().powi(2))?;
        if !check_gronwall(y0, c1, &forcing, order(alpha)?, c1 * g.step())?.pass {
            failures += 1;
        }
    }
    out.push(at_most("fracops", "gronwall_failures", failures as f64, 0.0, format!("{DRAWS} random draws")));
    Ok(out)
}

fn spectral(rng: &mut ChaCha8Rng) -> CliResult<Vec<VerifyCheck>> {
    let mut out = Vec::new();
    let domain = YDomain::interval(PI)?;
    let spectrum = Spectrum::new(&domain, 10_000)?;
    let c = c_epsilon(&spectrum, 0.5)?;
    let exact = PI * PI / 6.0;
    out.push(check(
        "spectral",
        "c_epsilon_brackets_zeta2",
        exact,
        c.upper(),
        c.lower() <= exact && exact <= c.upper(),
        format!("[{:.17e}, {:.17e}] at K = 10000", c.lower(), c.upper()),
    ));

    let rejected = matches!(c_epsilon(&spectrum, 0.0), Err(CoreError::SeriesDivergence { .. }));
    out.push(check(
        "spectral",
        "c_epsilon_rejects_zero",
        if rejected { 0.0 } else { 1.0 },
        0.0,
        rejected,
        "epsilon = 0 must be reported as divergent".into(),
    ));

    let basis = dirichlet_eigenpairs(&domain, 16)?;
    let mut worst = 0.0_f64;
    for _ in 0..DRAWS {
        let coeffs: Vec<f64> = (0..8).map(|_| rng.random_range(-1.0..1.0)).collect();
        let samples = basis.sample(|y| coeffs.iter().enumerate().map(|(k, a)| a * basis.eval(k, y)).sum());
        let p = project(&samples, &basis)?;
        let norm: f64 = coeffs.iter().map(|a| a * a).sum();
        let err = p
            .coeffs
            .iter()
            .enumerate()
            .map(|(k, v)| (v - coeffs.get(k).copied().unwrap_or(0.0)).abs())
            .fold(p.parseval_defect.abs() / norm, f64::max);
        worst = worst.max(err);
    }
    out.push(at_most("spectral", "parseval", worst, 1e-10, format!("{DRAWS} combinations of 8 modes")));
    Ok(out)
}

fn estimates(rng: &mut ChaCha8Rng) -> CliResult<Vec<VerifyCheck>> {
    let mut failures = 0;
    for _ in 0..DRAWS {
        let t_final = rng.random_range(0.2..3.0);
        let g = TimeGrid::new(t_final, 129)?;
        let w = trig(rng, g, 1.0)?;
        let shift = 0.1 + w.max_abs();
        let v = SampledSignal::new(g, w.values().iter().map(|x| x + shift).collect())?;
        let alpha = rng.random_range(0.05..=1.0);
        failures += inequality_chain(&v, order(alpha)?)?
            .iter()
            .filter(|c| c.name != "chain_upper" && !c.pass)
            .count();
    }
    Ok(vec![at_most(
        "estimates",
        "inequality_chain_failures",
        failures as f64,
        0.0,
        format!("{DRAWS} positive signals"),
    )])
}

/// Seeded self-checks of the operator, spectral and estimate layers.
pub fn run(seed: u64, report: &mut RunReport) -> CliResult<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut checks = fracops(&mut rng)?;
    checks.extend(spectral(&mut rng)?);
    checks.extend(estimates(&mut rng)?);
    for c in &checks {
        if c.pass {
            info!("{}/{}: {:e} (threshold {:e})", c.suite, c.name, c.value, c.threshold);
        } else {
            warn!("{}/{} failed: {:e} (threshold {:e}); {}", c.suite, c.name, c.value, c.threshold, c.detail);
        }
    }
    let failed: Vec<String> = checks.iter().filter(|c| !c.pass).map(|c| format!("{}/{}", c.suite, c.name)).collect();
    report.checks = checks;
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::Condition(format!("verification failed: {}", failed.join(", "))))
    }
}
