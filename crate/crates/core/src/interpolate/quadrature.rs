use std::collections::BinaryHeap;

use crate::error::{Error, Result};

// 21-point Kronrod abscissae and weights with the embedded 10-point Gauss rule
// (QUADPACK qk21). Odd indices of XGK are the Gauss nodes.
const XGK: [f64; 11] = [
    0.995657163025808080735527280689003,
    0.973906528517171720077964012084452,
    0.930157491355708226001207180059508,
    0.865063366688984510732096688423493,
    0.780817726586416897063717578345042,
    0.679409568299024406234327365114874,
    0.562757134668604683339000099272694,
    0.433395394129247190799265943165784,
    0.294392862701460198131126603103866,
    0.148874338981631210884826001129720,
    0.000000000000000000000000000000000,
];
const WGK: [f64; 11] = [
    0.011694638867371874278064396062192,
    0.032558162307964727478818972459390,
    0.054755896574351996031381300244580,
    0.075039674810919952767043140916190,
    0.093125454583697605535065465083366,
    0.109387158802297641899210590325805,
    0.123491976262065851077208980929796,
    0.134709217311473325928054001771707,
    0.142775938577060080797094273138717,
    0.147739104901338491374841515972068,
    0.149445554002916905664936468389821,
];
const WG: [f64; 5] = [
    0.066671344308688137593568809893332,
    0.149451349150580593145776339657697,
    0.219086362515982043995534934228163,
    0.269266719309996355091226921569469,
    0.295524224714752870173892994651338,
];

/// Maximum number of subintervals before giving up.
pub const MAX_SUBINTERVALS: usize = 2000;

/// Single Gauss–Kronrod 21-point panel: `(kronrod estimate, error estimate)`.
pub fn gauss_kronrod_21<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> (f64, f64) {
    let (value, err, _) = gk21(f, a, b);
    (value, err)
}

// also returns the integral of |f|, which bounds the rounding in the panel
fn gk21<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> (f64, f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut res_k = fc * WGK[10];
    let mut res_g = 0.0;
    let mut res_abs = res_k.abs();
    let mut fv1 = [0.0; 10];
    let mut fv2 = [0.0; 10];
    for j in 0..10 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        res_k += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            res_g += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * res_k;
    let mut res_asc = WGK[10] * (fc - mean).abs();
    for j in 0..10 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let abs_half = half.abs();
    let result = res_k * half;
    res_abs *= abs_half;
    res_asc *= abs_half;

    let mut err = ((res_k - res_g) * half).abs();
    if res_asc != 0.0 && err != 0.0 {
        err = res_asc * (200.0 * err / res_asc).powf(1.5).min(1.0);
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * res_abs);
    }
    (result, err, res_abs)
}

struct Panel {
    a: f64,
    b: f64,
    value: f64,
    err: f64,
    abs: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.err == other.err
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.err.total_cmp(&other.err)
    }
}

/// Globally adaptive Gauss–Kronrod quadrature with absolute tolerance `tol`.
///
/// The panel with the largest error estimate is bisected until the summed
/// estimate drops below `tol`. Polynomials up to degree 31 are integrated to
/// round-off on the first panel.
pub fn adaptive_quadrature<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, tol: f64) -> Result<f64> {
    if a == b {
        return Ok(0.0);
    }
    if a > b {
        return adaptive_quadrature(f, b, a, tol).map(|v| -v);
    }
    let (value, err, abs) = gk21(&mut f, a, b);
    if !value.is_finite() {
        return Err(Error::NonFiniteError { what: "integrand".into(), x: 0.5 * (a + b) });
    }
    let mut total = value;
    let mut total_err = err;
    // running integral of |f|: cancellation cannot beat its rounding
    let mut magnitude = abs;
    let mut heap = BinaryHeap::new();
    heap.push(Panel { a, b, value, err, abs });
    let round_off_floor = |total: f64, magnitude: f64| 100.0 * f64::EPSILON * total.abs().max(magnitude);

    while total_err > tol && total_err > round_off_floor(total, magnitude) {
        if heap.len() >= MAX_SUBINTERVALS {
            return Err(Error::QuadratureError { a, b, tol, estimate: total_err });
        }
        let panel = heap.pop().expect("heap is never empty");
        let mid = 0.5 * (panel.a + panel.b);
        if mid <= panel.a || mid >= panel.b {
            return Err(Error::QuadratureError { a, b, tol, estimate: total_err });
        }
        let (v1, e1, m1) = gk21(&mut f, panel.a, mid);
        let (v2, e2, m2) = gk21(&mut f, mid, panel.b);
        if !(v1 + v2).is_finite() {
            return Err(Error::NonFiniteError { what: "integrand".into(), x: mid });
        }
        total += v1 + v2 - panel.value;
        magnitude += m1 + m2 - panel.abs;
        total_err += e1 + e2 - panel.err;
        heap.push(Panel { a: panel.a, b: mid, value: v1, err: e1, abs: m1 });
        heap.push(Panel { a: mid, b: panel.b, value: v2, err: e2, abs: m2 });
    }
    // recompute the sum from the panels to shed accumulated update error
    let total: f64 = heap.iter().map(|p| p.value).sum();
    Ok(total)
}
