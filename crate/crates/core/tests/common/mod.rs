#![allow(dead_code)]

use std::sync::Arc;

use eqarea::curve::ParametricCurve;
use eqarea::flux::FluxModel;
use eqarea::interpolate::Polynomial;
use eqarea::profile::{Piece, PieceFunction, PiecewiseProfile};

pub fn poly_piece(a: f64, b: f64, coeffs: &[f64]) -> Piece {
    Piece { x_left: a, x_right: b, func: Arc::new(PieceFunction::Polynomial(Polynomial::new(coeffs.to_vec()))) }
}

/// `u0 = x` on `[0, 1)`, zero elsewhere.
pub fn triangle() -> PiecewiseProfile {
    PiecewiseProfile::new(0.0, 0.0, vec![poly_piece(0.0, 1.0, &[0.0, 1.0])], None).unwrap()
}

pub fn arctan_g(x: f64) -> f64 {
    1.0 - x.atan()
}

pub fn arctan_antiderivative(x: f64) -> f64 {
    x - x * x.atan() + 0.5 * (1.0 + x * x).ln()
}

/// `u0 = 1 - atan(x)` on `[-10, 10]`, zero elsewhere.
pub fn arctan() -> PiecewiseProfile {
    let g = PieceFunction::Closure {
        g: Arc::new(arctan_g),
        dg: Arc::new(|x: f64| -1.0 / (1.0 + x * x)),
        antiderivative: Some(Arc::new(arctan_antiderivative)),
    };
    PiecewiseProfile::new(0.0, 0.0, vec![Piece { x_left: -10.0, x_right: 10.0, func: Arc::new(g) }], None).unwrap()
}

/// `{3 for x < 0, 2 on (0, 1), 0 for x > 1}`
pub fn two_step() -> PiecewiseProfile {
    PiecewiseProfile::new(3.0, 0.0, vec![poly_piece(0.0, 1.0, &[2.0])], None).unwrap()
}

pub fn riemann(ul: f64, ur: f64) -> PiecewiseProfile {
    PiecewiseProfile::new(ul, ur, Vec::new(), Some(0.0)).unwrap()
}

pub fn curve(p: &PiecewiseProfile) -> ParametricCurve {
    ParametricCurve::from_profile(p, &FluxModel::burgers(), 64, 16).unwrap()
}

/// Composite Simpson rule with `n` (even) panels.
pub fn simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, n: usize) -> f64 {
    let h = (b - a) / n as f64;
    let mut sum = f(a) + f(b);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        sum += w * f(a + h * i as f64);
    }
    sum * h / 3.0
}

/// Plain bisection for a sign change of `f` on `[a, b]`.
pub fn bisect<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64) -> f64 {
    let fa = f(a);
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        if (f(m) > 0.0) == (fa > 0.0) {
            a = m;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}
