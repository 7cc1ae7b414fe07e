mod common;

use approx::assert_abs_diff_eq;
use common::*;
use eqarea::curve::{ParametricCurve, Side};
use eqarea::flux::FluxModel;
use eqarea::interpolate::*;
use eqarea::profile::PiecewiseProfile;
use eqarea::Error;
use proptest::prelude::*;

fn coeffs_close(p: &Polynomial, expected: &[f64], tol: f64) -> bool {
    let c = p.coeffs();
    (0..c.len().max(expected.len())).all(|k| (c.get(k).unwrap_or(&0.0) - expected.get(k).unwrap_or(&0.0)).abs() <= tol)
}

#[test]
fn hermite_cubic_examples() {
    for &t in &[0.5, 1.0, 3.0] {
        let h = hermite_cubic(0.0, 0.0, 1.0 / (1.0 + t), 1.0 + t, 1.0, 1.0 / (1.0 + t)).unwrap();
        assert!(coeffs_close(&h, &[0.0, 1.0 / (1.0 + t)], 1e-15));
        let g = hermite_cubic(1.0, 0.0, 1.0 / t, 1.0 + t, 1.0, 1.0 / t).unwrap();
        assert!(coeffs_close(&g, &[-1.0 / t, 1.0 / t], 1e-15));
    }
    let c = hermite_cubic(-2.0, 0.3, 0.0, 5.0, 0.3, 0.0).unwrap();
    assert!(coeffs_close(&c, &[0.3], 1e-15));
    assert!(matches!(hermite_cubic(1.0, 0.0, 0.0, 1.0, 1.0, 0.0), Err(Error::CoincidentAbscissae(_))));
}

#[test]
fn parametric_segment_on_the_flowed_ramp() {
    let c = curve(&triangle());
    let t = 2.0;
    let (a, b) = (0.2, 0.7);
    let (pa, pb) = (c.point(a, t), c.point(b, t));
    let seg = parametric_hermite([pa.x, pa.u], [pb.x, pb.u], [pa.x_s, pa.u_s], [pb.x_s, pb.u_s], c.area_between(a, b, t).unwrap());
    assert!(seg.area_defect <= 1e-14);
    assert!(!seg.multivalued);
    for k in 0..=10 {
        let (x, u) = seg.point(k as f64 / 10.0);
        assert_abs_diff_eq!(u, x / (1.0 + t), epsilon = 1e-14);
    }
    let d = parametric_hermite([1.0, 2.0], [1.0, 2.0], [0.0, 0.0], [0.0, 0.0], 0.0);
    assert_eq!(d.area_defect, 0.0);
    assert!(!d.multivalued);
}

fn arctan_defect(h: f64) -> f64 {
    let c = curve(&arctan());
    let t = 0.5;
    // s of x0 = 0 on the arctan parametrization
    let a = (1.0 + 10f64.atan()) + 10.0;
    let b = a + h;
    let (pa, pb) = (c.point(a, t), c.point(b, t));
    let (xa, ua) = c.flow_velocity_one_sided(a, t, Side::Right);
    let (xb, ub) = c.flow_velocity_one_sided(b, t, Side::Left);
    let exact = simpson(|s| c.point(s, t).u * c.point(s, t).x_s, a, b, 2000);
    parametric_hermite_scaled([pa.x, pa.u], [pb.x, pb.u], [xa * h, ua * h], [xb * h, ub * h], exact, TangentScaling::AsGiven)
        .area_defect
}

#[test]
fn arctan_area_defect_shrinks_at_fifth_order() {
    let (d1, d2, d3) = (arctan_defect(0.5), arctan_defect(0.25), arctan_defect(0.125));
    assert!(d1 > 0.0);
    assert!(d1 / d2 > 20.0 && d2 / d3 > 20.0, "{d1:e} {d2:e} {d3:e}");
}

#[test]
fn burgers_flow_keeps_quadratic_data_polynomial() {
    let p = PiecewiseProfile::new(0.0, 1.0, vec![poly_piece(0.0, 1.0, &[0.0, 0.0, 1.0])], None).unwrap();
    let c = ParametricCurve::from_profile(&p, &FluxModel::burgers(), 8, 2).unwrap();
    for &t in &[0.0, 1.0, 4.0] {
        let nodes = &c.nodes().nodes;
        for w in nodes.windows(2) {
            let (a, b) = (w[0].s, w[1].s);
            let h = b - a;
            let (pa, pb) = (c.point(a, t), c.point(b, t));
            let seg = parametric_hermite_scaled(
                [pa.x, pa.u],
                [pb.x, pb.u],
                [pa.x_s * h, pa.u_s * h],
                [pb.x_s * h, pb.u_s * h],
                c.area_between(a, b, t).unwrap(),
                TangentScaling::AsGiven,
            );
            assert!(seg.area_defect <= 1e-13, "t {t} [{a}, {b}] defect {:e}", seg.area_defect);
        }
    }
}

#[test]
fn root_isolation_examples() {
    let r = poly_roots_in_interval(&Polynomial::new(vec![-4.0, 0.0, 1.0]), 0.0, 5.0);
    assert_eq!(r.len(), 1);
    assert_abs_diff_eq!(r[0], 2.0, epsilon = 1e-13);
    assert!(poly_roots_in_interval(&Polynomial::constant(1.0), -3.0, 3.0).is_empty());
    let cubic = &(&Polynomial::linear(-1.0, 1.0) * &Polynomial::linear(-2.0, 1.0)) * &Polynomial::linear(-3.0, 1.0);
    let r = poly_roots_in_interval(&cubic, 0.0, 4.0);
    assert_eq!(r.len(), 3);
    for (got, want) in r.iter().zip([1.0, 2.0, 3.0]) {
        assert_abs_diff_eq!(*got, want, epsilon = 1e-13);
    }
}

#[test]
fn quadrature_examples() {
    assert_abs_diff_eq!(adaptive_quadrature(|s| s, 0.0, 1.0, 1e-14).unwrap(), 0.5, epsilon = 1e-16);
    let v = adaptive_quadrature(arctan_g, 0.0, 1.0, 1e-13).unwrap();
    assert_abs_diff_eq!(v, 1.0 - (std::f64::consts::FRAC_PI_4 - 0.5 * 2f64.ln()), epsilon = 1e-14);
    assert_abs_diff_eq!(v, arctan_antiderivative(1.0) - arctan_antiderivative(0.0), epsilon = 1e-14);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn hermite_reproduces_cubics(c in prop::array::uniform4(-5.0f64..5.0), x0 in -3.0f64..0.0, w in 0.1f64..4.0) {
        let p = Polynomial::new(c.to_vec());
        let x1 = x0 + w;
        let (y0, m0) = p.eval_with_derivative(x0);
        let (y1, m1) = p.eval_with_derivative(x1);
        let h = hermite_cubic(x0, y0, m0, x1, y1, m1).unwrap();
        for k in 0..=8 {
            let x = x0 + w * (k as f64 - 2.0) / 4.0;
            prop_assert!((h.eval(x) - p.eval(x)).abs() <= 1e-11 * (1.0 + p.eval(x).abs()));
        }
    }

    #[test]
    fn quadrature_is_exact_on_cubics(c in prop::array::uniform4(-5.0f64..5.0), a in -3.0f64..3.0, w in 0.0f64..4.0) {
        let p = Polynomial::new(c.to_vec());
        let b = a + w;
        let exact = p.integrate(a, b);
        let got = adaptive_quadrature(|x| p.eval(x), a, b, 1e-12).unwrap();
        prop_assert!((got - exact).abs() <= 1e-13 * (1.0 + exact.abs()));
    }
}
