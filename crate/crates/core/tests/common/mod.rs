#![allow(dead_code)]

use std::f64::consts::PI;

use fracsource_core::forward::{ProblemData, XGrid};
use fracsource_core::fracops::{FractionalOrder, TimeGrid};
use fracsource_core::math::gamma;
use fracsource_core::spectral::YDomain;

/// u* = (1+t²) sin πx sin y, f = s·sin y, ω = sin y, h* = sin πx on Ω = (0, π).
pub fn mode1(alpha: f64, final_time: f64, n: usize, m: usize, f_scale: f64) -> ProblemData {
    let c = 2.0 / gamma(3.0 - alpha);
    let classical = alpha == 1.0;
    ProblemData {
        alpha: FractionalOrder::new(alpha).unwrap(),
        time: TimeGrid::new(final_time, n).unwrap(),
        space: XGrid::new(m).unwrap(),
        domain: YDomain::interval(PI).unwrap(),
        f: Box::new(move |_, _, y| f_scale * y[0].sin()),
        g: Box::new(move |t, x, y| {
            let dt = if classical { 2.0 * t } else { c * t.powf(2.0 - alpha) };
            (PI * x).sin() * y[0].sin() * (dt + (PI * PI + 1.0) * (1.0 + t * t) - f_scale)
        }),
        phi: Box::new(|x, y| (PI * x).sin() * y[0].sin()),
        omega: Box::new(|y| y[0].sin()),
        psi: Box::new(|t, x| 0.5 * PI * (1.0 + t * t) * (PI * x).sin()),
        psi_caputo: None,
        psi_laplacian: None,
    }
}

pub fn zero(n: usize, m: usize) -> ProblemData {
    let mut d = mode1(0.5, 1.0, n, m, 1.0);
    d.g = Box::new(|_, _, _| 0.0);
    d.phi = Box::new(|_, _| 0.0);
    d.psi = Box::new(|_, _| 0.0);
    d
}

/// Relative L₂(Q_G) error of h against sin πx (trapezoid in t and x).
pub fn h_error(h: &[f64], time: TimeGrid, space: XGrid) -> f64 {
    let m = space.len();
    let tw = fracsource_core::math::trapezoid_weights(time.len(), time.step());
    let xw = space.weights();
    let (mut e, mut s) = (0.0, 0.0);
    for (n, wt) in tw.iter().enumerate() {
        for (j, wx) in xw.iter().enumerate() {
            let exact = (PI * space.node(j)).sin();
            e += wt * wx * (h[n * m + j] - exact).powi(2);
            s += wt * wx * exact * exact;
        }
    }
    (e / s).sqrt()
}
