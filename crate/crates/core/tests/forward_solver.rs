use std::f64::consts::PI;

use fracsource_core::forward::{
    evaluate_overdetermination, forward_solve, solve_mode, ProblemData, SampledProblem, XGrid,
};
use fracsource_core::fracops::{mittag_leffler, FractionalOrder, TimeGrid};
use fracsource_core::math::{fit_slope, gamma};
use fracsource_core::spectral::{dirichlet_eigenpairs, YDomain};

fn order(a: f64) -> FractionalOrder {
    FractionalOrder::new(a).unwrap()
}

/// u* = (1+t²) sin(πx) sin y with f = ω = sin y and h* = sin(πx).
fn manufactured(alpha: f64, n: usize, m: usize) -> ProblemData {
    let c = 2.0 / gamma(3.0 - alpha);
    ProblemData {
        alpha: order(alpha),
        time: TimeGrid::new(1.0, n).unwrap(),
        space: XGrid::new(m).unwrap(),
        domain: YDomain::interval(PI).unwrap(),
        f: Box::new(|_, _, y| y[0].sin()),
        g: Box::new(move |t, x, y| {
            (PI * x).sin()
                * y[0].sin()
                * (c * t.powf(2.0 - alpha) + (PI * PI + 1.0) * (1.0 + t * t) - 1.0)
        }),
        phi: Box::new(|x, y| (PI * x).sin() * y[0].sin()),
        omega: Box::new(|y| y[0].sin()),
        psi: Box::new(|t, x| 0.5 * PI * (1.0 + t * t) * (PI * x).sin()),
        psi_caputo: None,
        psi_laplacian: None,
    }
}

fn h_star(time: TimeGrid, space: XGrid) -> Vec<f64> {
    time.nodes()
        .flat_map(|_| space.nodes().map(|x| (PI * x).sin()).collect::<Vec<_>>())
        .collect()
}

/// Max over x at t = T of |u_1 − exact|, on the Mittag-Leffler relaxation.
fn relaxation_error(alpha: f64, n: usize, m: usize) -> f64 {
    let t = TimeGrid::new(1.0, n).unwrap();
    let x = XGrid::new(m).unwrap();
    let phi: Vec<f64> = x.nodes().map(|x| (PI * x).sin()).collect();
    let u = solve_mode(1.0, &vec![0.0; n * m], &phi, order(alpha), t, x).unwrap();
    let e = mittag_leffler(alpha, 1.0, -(PI * PI + 1.0)).unwrap();
    x.nodes()
        .enumerate()
        .map(|(j, xx)| (u[(n - 1) * m + j] - e * (PI * xx).sin()).abs())
        .fold(0.0, f64::max)
}

#[test]
fn relaxation_converges_at_the_final_time() {
    for alpha in [0.3, 0.5, 0.8] {
        let ns = [65usize, 129, 257];
        let errs: Vec<f64> = ns.iter().map(|&n| relaxation_error(alpha, n, 1025)).collect();
        let logs: Vec<f64> = ns.iter().map(|&n| (1.0 / (n - 1) as f64).ln()).collect();
        let p = fit_slope(&logs, &errs.iter().map(|e| e.ln()).collect::<Vec<_>>());
        // uniform-mesh L1 on a t^α-singular solution: first order at t = T
        assert!(p > 0.9, "alpha {alpha}: order {p}, errors {errs:?}");
        assert!(errs[2] < errs[1] && errs[1] < errs[0]);
    }
}

#[test]
fn relaxation_spatial_order_is_two() {
    let ms = [9usize, 17, 33, 65];
    let errs: Vec<f64> = ms.iter().map(|&m| relaxation_error(0.5, 2049, m)).collect();
    let logs: Vec<f64> = ms.iter().map(|&m| (1.0 / (m - 1) as f64).ln()).collect();
    let p = fit_slope(&logs, &errs.iter().map(|e| e.ln()).collect::<Vec<_>>());
    assert!((1.7..=2.3).contains(&p), "spatial order {p}, errors {errs:?}");
}

#[test]
fn manufactured_solution_time_order() {
    for alpha in [0.3, 0.5, 0.8] {
        let ns = [17usize, 33, 65];
        let m = 513;
        let errs: Vec<f64> = ns
            .iter()
            .map(|&n| {
                let data = manufactured(alpha, n, m);
                let basis = dirichlet_eigenpairs(&data.domain, 2).unwrap();
                let p = SampledProblem::new(&data, basis).unwrap();
                let u = forward_solve(&h_star(data.time, data.space), &p).unwrap();
                let mut e: f64 = 0.0;
                for (i, t) in data.time.nodes().enumerate() {
                    for (j, x) in data.space.nodes().enumerate() {
                        let exact = (1.0 + t * t) * (PI * x).sin() * (PI / 2.0).sqrt();
                        e = e.max((u.get(0, i, j) - exact).abs());
                    }
                }
                assert!(u.mode(1).iter().all(|v| v.abs() < 1e-12));
                e
            })
            .collect();
        let logs: Vec<f64> = ns.iter().map(|&n| (1.0 / (n - 1) as f64).ln()).collect();
        let p = fit_slope(&logs, &errs.iter().map(|e| e.ln()).collect::<Vec<_>>());
        assert!((p - (2.0 - alpha)).abs() <= 0.3, "alpha {alpha}: order {p}, {errs:?}");
    }
}

#[test]
fn overdetermination_of_the_manufactured_field() {
    let data = manufactured(0.5, 65, 65);
    let basis = dirichlet_eigenpairs(&data.domain, 4).unwrap();
    let p = SampledProblem::new(&data, basis).unwrap();
    let u = forward_solve(&h_star(data.time, data.space), &p).unwrap();
    let psi = evaluate_overdetermination(&u, &p.omega.omega_coeffs).unwrap();
    let mut e: f64 = 0.0;
    for (a, b) in psi.iter().zip(&p.psi) {
        e = e.max((a - b).abs());
    }
    assert!(e < 5e-3, "{e}");
    let zero = evaluate_overdetermination(
        &fracsource_core::forward::SpectralField::zeros(data.time, data.space, 4),
        &p.omega.omega_coeffs,
    )
    .unwrap();
    assert!(zero.iter().all(|&v| v == 0.0));
    // ω = sin 2y is orthogonal to the only excited mode
    let psi2 = evaluate_overdetermination(&u, &[0.0, 1.0, 0.0, 0.0]).unwrap();
    assert!(psi2.iter().all(|v| v.abs() < 1e-12));
}

#[test]
fn zero_data_gives_zero_field() {
    let mut data = manufactured(0.5, 17, 17);
    data.g = Box::new(|_, _, _| 0.0);
    data.phi = Box::new(|_, _| 0.0);
    let basis = dirichlet_eigenpairs(&data.domain, 5).unwrap();
    let p = SampledProblem::new(&data, basis).unwrap();
    let u = forward_solve(&vec![0.0; 17 * 17], &p).unwrap();
    assert!(u.values().iter().all(|&v| v == 0.0));
}

#[test]
fn reflection_symmetry() {
    let data = ProblemData {
        alpha: order(0.6),
        time: TimeGrid::new(0.8, 33).unwrap(),
        space: XGrid::new(41).unwrap(),
        domain: YDomain::cuboid(vec![1.0, 2.0]).unwrap(),
        f: Box::new(|t, x, y| (1.0 + t) * (x * (1.0 - x)) * (y[0] + y[1])),
        g: Box::new(|t, x, y| t * (PI * x).sin().powi(3) * (y[0] * y[1]).cos()),
        phi: Box::new(|x, y| (x * (1.0 - x)) * (PI * y[0]).sin() * (0.5 * PI * y[1]).sin()),
        omega: Box::new(|y| (PI * y[0]).sin() * (0.5 * PI * y[1]).sin()),
        psi: Box::new(|_, _| 0.0),
        psi_caputo: None,
        psi_laplacian: None,
    };
    let basis = dirichlet_eigenpairs(&data.domain, 6).unwrap();
    let p = SampledProblem::new(&data, basis).unwrap();
    let h: Vec<f64> = data
        .time
        .nodes()
        .flat_map(|t| data.space.nodes().map(move |x| (2.0 * PI * x).cos() * (1.0 + t)).collect::<Vec<_>>())
        .collect();
    let u = forward_solve(&h, &p).unwrap();
    let m = data.space.len();
    let scale = u.max_abs();
    assert!(scale > 0.0);
    for k in 0..u.modes() {
        for n in 0..data.time.len() {
            for j in 0..m {
                let d = (u.get(k, n, j) - u.get(k, n, m - 1 - j)).abs();
                assert!(d <= 1e-12 * scale.max(1.0), "k={k} n={n} j={j}: {d}");
            }
        }
    }
}

#[test]
fn free_decay_is_dissipative() {
    for alpha in [0.2, 0.5, 0.9, 1.0] {
        let mut data = manufactured(alpha, 65, 33);
        data.g = Box::new(|_, _, _| 0.0);
        data.phi = Box::new(|x, y| x * (1.0 - x) * y[0] * (PI - y[0]) * (1.0 + (5.0 * x).cos().abs()));
        let basis = dirichlet_eigenpairs(&data.domain, 8).unwrap();
        let p = SampledProblem::new(&data, basis).unwrap();
        let u = forward_solve(&vec![0.0; 65 * 33], &p).unwrap();
        let energy = u.weighted_norm_sq(&[1.0; 8], 0.0);
        for w in energy.windows(2) {
            assert!(w[1] <= w[0] * (1.0 + 1e-14), "alpha {alpha}: {w:?}");
        }
    }
}

#[test]
fn mode_solves_are_independent_of_order() {
    let data = manufactured(0.4, 33, 17);
    let basis = dirichlet_eigenpairs(&data.domain, 6).unwrap();
    let p = SampledProblem::new(&data, basis).unwrap();
    let h: Vec<f64> = (0..33 * 17).map(|i| ((i % 17) as f64 * 0.3).sin()).collect();
    let u = forward_solve(&h, &p).unwrap();
    for k in (0..6).rev() {
        let rhs: Vec<f64> = p
            .g_mode(k)
            .iter()
            .zip(p.f_mode(k))
            .zip(&h)
            .map(|((g, f), h)| g + f * h)
            .collect();
        let lam = p.basis.eigenvalues()[k];
        let alone = solve_mode(lam, &rhs, p.phi_mode(k), data.alpha, data.time, data.space).unwrap();
        assert!(alone.iter().zip(u.mode(k)).all(|(a, b)| a.to_bits() == b.to_bits()));
    }
}
