use crate::error::{Error, Result};

use super::Polynomial;

const MAX_ITER: usize = 400;

/// Safeguarded Newton iteration on a sign-changing bracket.
///
/// `f` returns `(value, derivative)`. Newton steps that leave the current
/// bracket, or fail to halve it, are replaced by bisection, so convergence
/// is unconditional once `f(lo)` and `f(hi)` differ in sign. Iteration stops
/// when the step falls below `tol` or the bracket cannot shrink further.
pub fn bracketed_newton<F>(mut f: F, lo: f64, hi: f64, tol: f64) -> Result<f64>
where
    F: FnMut(f64) -> (f64, f64),
{
    let (mut lo, mut hi) = if lo <= hi { (lo, hi) } else { (hi, lo) };
    let (flo, _) = f(lo);
    let (fhi, _) = f(hi);
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if flo.signum() == fhi.signum() || flo.is_nan() || fhi.is_nan() {
        return Err(Error::NoRoot { lo, hi });
    }
    // orient so that f(lo) < 0 < f(hi)
    let increasing = flo < 0.0;

    let mut x = 0.5 * (lo + hi);
    let mut dx_old = hi - lo;
    let mut dx = dx_old;
    let (mut fx, mut dfx) = f(x);
    for _ in 0..MAX_ITER {
        if fx == 0.0 {
            return Ok(x);
        }
        if (fx < 0.0) == increasing {
            lo = x;
        } else {
            hi = x;
        }
        let newton = x - fx / dfx;
        let newton_ok =
            dfx != 0.0 && newton.is_finite() && newton > lo && newton < hi && (2.0 * fx).abs() <= (dx_old * dfx).abs();
        dx_old = dx;
        let next = if newton_ok {
            dx = fx / dfx;
            newton
        } else {
            let mid = 0.5 * (lo + hi);
            dx = x - mid;
            mid
        };
        if next == x || dx.abs() <= tol || next <= lo || next >= hi {
            // either converged or the bracket is down to adjacent floats
            let (fn_, _) = f(next);
            return Ok(if fn_.abs() <= fx.abs() { next } else { x });
        }
        x = next;
        (fx, dfx) = f(x);
    }
    Ok(x)
}

/// Plain bisection on a boolean predicate that is `false` at `lo` and `true`
/// at `hi`; returns the final `(lo, hi)` bracket of the switch point.
pub fn bisect_predicate<P>(mut pred: P, mut lo: f64, mut hi: f64, tol: f64) -> Result<(f64, f64)>
where
    P: FnMut(f64) -> Result<bool>,
{
    for _ in 0..MAX_ITER {
        if hi - lo <= tol {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if pred(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok((lo, hi))
}

/// Golden-section search for a minimum of a unimodal function on `[a, b]`.
pub fn minimize_golden<F: FnMut(f64) -> f64>(mut f: F, mut a: f64, mut b: f64, tol: f64) -> (f64, f64) {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    for _ in 0..MAX_ITER {
        if (b - a).abs() <= tol {
            break;
        }
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    if fc < fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

/// All real roots of `p` in the open interval `(a, b)`, ascending.
///
/// Roots of the derivative split `(a, b)` into monotone runs; each run with
/// a sign change holds exactly one simple root, which is bracketed and
/// polished to full precision. Critical points where `p` vanishes to within
/// its evaluation error are reported as (multiple) roots.
pub fn poly_roots_in_interval(p: &Polynomial, a: f64, b: f64) -> Vec<f64> {
    if !(a < b) || p.is_zero() || p.degree() == 0 {
        return Vec::new();
    }
    if p.degree() == 1 {
        let c = p.coeffs();
        let r = -c[0] / c[1];
        return if r > a && r < b { vec![r] } else { Vec::new() };
    }
    let critical = poly_roots_in_interval(&p.derivative(), a, b);
    let mut knots = Vec::with_capacity(critical.len() + 2);
    knots.push(a);
    knots.extend(critical.iter().copied());
    knots.push(b);

    let at_root = |x: f64| p.eval_compensated(x).abs() <= p.eval_error_bound(x);
    let mut roots: Vec<f64> = critical.iter().copied().filter(|&c| at_root(c)).collect();
    let value = |x: f64| if roots.contains(&x) { 0.0 } else { p.eval_compensated(x) };
    let mut simple = Vec::new();
    for w in knots.windows(2) {
        let (l, r) = (w[0], w[1]);
        let (pl, pr) = (value(l), value(r));
        if pl == 0.0 || pr == 0.0 || pl.signum() == pr.signum() {
            continue;
        }
        let root = bracketed_newton(
            |x| {
                let (_, d) = p.eval_with_derivative(x);
                (p.eval_compensated(x), d)
            },
            l,
            r,
            0.0,
        );
        if let Ok(root) = root {
            simple.push(root);
        }
    }
    roots.extend(simple);
    roots.sort_by(f64::total_cmp);
    let scale = a.abs().max(b.abs()).max(1.0);
    roots.dedup_by(|x, y| (*x - *y).abs() <= 8.0 * f64::EPSILON * scale);
    roots.retain(|&r| r > a && r < b);
    roots
}

#[cfg(test)]
mod tests {
    use super::*;

    fn from_roots(rs: &[f64]) -> Polynomial {
        rs.iter().fold(Polynomial::constant(1.0), |acc, &r| &acc * &Polynomial::linear(-r, 1.0))
    }

    #[test]
    fn quadratic_shock_equation_at_t3() {
        // X^2 - (1 + t) at t = 3
        let p = Polynomial::new(vec![-4.0, 0.0, 1.0]);
        let roots = poly_roots_in_interval(&p, 0.0, 5.0);
        assert_eq!(roots.len(), 1);
        assert!((roots[0] - 2.0).abs() < 1e-13);
    }

    #[test]
    fn constant_has_no_roots() {
        assert!(poly_roots_in_interval(&Polynomial::constant(1.0), -3.0, 3.0).is_empty());
    }

    #[test]
    fn factored_cubic() {
        let p = from_roots(&[1.0, 2.0, 3.0]);
        let roots = poly_roots_in_interval(&p, 0.0, 4.0);
        assert_eq!(roots.len(), 3);
        for (r, e) in roots.iter().zip([1.0, 2.0, 3.0]) {
            assert!((r - e).abs() < 1e-13, "{r} vs {e}");
        }
    }

    #[test]
    fn double_root_is_reported_once() {
        let p = from_roots(&[0.5, 0.5, 2.0]);
        let roots = poly_roots_in_interval(&p, 0.0, 3.0);
        assert_eq!(roots.len(), 2, "{roots:?}");
        assert!((roots[0] - 0.5).abs() < 1e-7);
    }

    #[test]
    fn endpoints_are_excluded() {
        let p = from_roots(&[0.0, 1.0]);
        assert!(poly_roots_in_interval(&p, 0.0, 1.0).is_empty());
    }

    #[test]
    fn newton_on_transcendental_bracket() {
        let r = bracketed_newton(|u| (u.exp() - 2.0, u.exp()), 0.0, 2.0, 0.0).unwrap();
        assert!((r - 2f64.ln()).abs() < 1e-15);
        assert!(bracketed_newton(|u| (u * u + 1.0, 2.0 * u), -1.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn golden_section_finds_parabola_vertex() {
        let (x, fx) = minimize_golden(|x| (x - 0.3) * (x - 0.3) - 1.0, -1.0, 2.0, 1e-12);
        assert!((x - 0.3).abs() < 1e-7);
        assert!((fx + 1.0).abs() < 1e-14);
    }

    #[test]
    fn predicate_bisection_brackets_switch() {
        let (lo, hi) = bisect_predicate(|t| Ok(t >= 2.0 / 3.0), 0.0, 1.0, 1e-14).unwrap();
        assert!(lo < 2.0 / 3.0 && hi >= 2.0 / 3.0 && hi - lo <= 1e-14);
    }
}
