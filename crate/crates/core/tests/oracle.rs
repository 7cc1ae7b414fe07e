mod common;

use approx::assert_abs_diff_eq;
use common::*;
use eqarea::flux::FluxModel;
use eqarea::oracle::*;
use eqarea::profile::PiecewiseProfile;
use eqarea::Error;

#[test]
fn triangle_examples() {
    assert_eq!(triangle_exact(0.0).shock, 1.0);
    assert_eq!(triangle_exact(3.0).shock, 2.0);
    assert_eq!(triangle_exact(10.0).shock, 11f64.sqrt());
    let s = triangle_exact(3.0);
    assert_eq!(s.value(1.0), 0.25);
    assert_eq!(s.value(2.5), 0.0);
    assert_eq!(s.value(-0.1), 0.0);
    assert_eq!(s.u_left(), 0.5);
}

#[test]
fn riemann_examples() {
    let b = FluxModel::burgers();
    assert_eq!(riemann_exact(&b, 1.0, 0.0, 2.0, 0.9), 1.0);
    assert_eq!(riemann_exact(&b, 1.0, 0.0, 2.0, 1.1), 0.0);
    assert_eq!(riemann_exact(&b, 0.0, 1.0, 1.0, 0.5), 0.5);
    assert_eq!(riemann_exact(&b, 0.0, 1.0, 1.0, -0.5), 0.0);
    assert_eq!(riemann_exact(&b, 0.0, 1.0, 1.0, 1.5), 1.0);
    assert_eq!(riemann_exact(&b, 0.3, 0.3, 1.0, 0.0), 0.3);
    let q = FluxModel::quadratic_linear(1.0, 1.0).unwrap();
    assert_eq!(riemann_exact(&q, 2.0, 0.0, 1.0, 1.9), 2.0);
    assert_eq!(riemann_exact(&q, 2.0, 0.0, 1.0, 2.1), 0.0);
    // fan of e^u: u = ln(x / t)
    let e = FluxModel::exponential(1.0).unwrap();
    assert_abs_diff_eq!(riemann_exact(&e, 0.0, 1.0, 2.0, 4.0), 2f64.ln(), epsilon = 1e-15);
}

#[test]
fn front_tracking_two_step() {
    let ft = front_tracking_exact(&two_step(), &FluxModel::burgers(), 3.0).unwrap();
    assert_eq!(ft.events.len(), 1);
    let e = &ft.events[0];
    // 2.5 t = 1 + t
    assert_abs_diff_eq!(e.t, 2.0 / 3.0, epsilon = 1e-15);
    assert_abs_diff_eq!(e.x, 5.0 / 3.0, epsilon = 1e-15);
    assert_eq!(e.speed, 1.5);
    assert_eq!(ft.alive(2.0).len(), 1);
    assert_eq!(ft.value(0.5, 1.0), 3.0);
    assert_eq!(ft.value(0.5, 1.3), 2.0);
    assert_eq!(ft.value(0.5, 1.6), 0.0);
}

#[test]
fn front_tracking_single_jump() {
    let ft = front_tracking_exact(&riemann(1.0, 0.0), &FluxModel::burgers(), 100.0).unwrap();
    assert!(ft.events.is_empty());
    for &t in &[0.0, 1.0, 50.0] {
        assert_eq!(ft.alive(t)[0].position(t), 0.5 * t);
    }
}

#[test]
fn front_tracking_three_step_cascade() {
    let p = PiecewiseProfile::new(4.0, 0.0, vec![poly_piece(0.0, 1.0, &[2.0]), poly_piece(1.0, 2.0, &[1.0])], None)
        .unwrap();
    let f = FluxModel::burgers();
    let ft = front_tracking_exact(&p, &f, 10.0).unwrap();
    assert_eq!(ft.events.len(), 2);
    assert_eq!(ft.alive(5.0).len(), 1);
    assert_eq!(ft.alive(5.0)[0].speed, 2.0);
    // d/dt ∫_a^∞ u dx = F(u_L) - F(u_R), exactly, at every event
    let a = -1.0;
    let base = ft.area_from(0.0, a);
    for e in &ft.events {
        for t in [e.t, e.t + 1e-3] {
            let expected = base + t * (f.flux(4.0) - f.flux(0.0));
            assert!((ft.area_from(t, a) - expected).abs() <= 1e-14 * expected.abs().max(1.0));
        }
    }
}

#[test]
fn front_tracking_rejects_rarefactions_and_smooth_data() {
    let f = FluxModel::burgers();
    assert!(matches!(front_tracking_exact(&riemann(0.0, 1.0), &f, 1.0), Err(Error::UnsupportedData(_))));
    assert!(matches!(front_tracking_exact(&triangle(), &f, 1.0), Err(Error::UnsupportedData(_))));
}

#[test]
fn godunov_triangle_shock_within_a_cell() {
    let sol = godunov_reference(&FluxModel::burgers(), &triangle(), 4096, 0.9, 3.0).unwrap();
    let x = sol.shock_position().unwrap();
    assert!((x - 2.0).abs() <= sol.dx, "{x} vs 2 with dx {}", sol.dx);
    assert!(sol.mass_defect() <= 1e-12);
}

#[test]
fn godunov_constant_data_stays_constant() {
    let p = PiecewiseProfile::new(0.7, 0.7, vec![poly_piece(-1.0, 1.0, &[0.7])], None).unwrap();
    let sol = godunov_reference(&FluxModel::burgers(), &p, 64, 0.5, 2.0).unwrap();
    let dev = sol.cells.iter().map(|u| (u - 0.7).abs()).fold(0.0, f64::max);
    assert!(dev < 1e-14, "{dev}");
}

#[test]
fn godunov_riemann_converges_at_first_order() {
    let f = FluxModel::burgers();
    let sol = godunov_reference(&f, &riemann(1.0, 0.0), 1024, 0.9, 1.0).unwrap();
    let err = sol.l1_error(|x| riemann_exact(&f, 1.0, 0.0, 1.0, x));
    assert!(err < 10.0 * sol.dx);
    let rungs = godunov_riemann_rates(&f, 1.0, 0.0, &[256, 512, 1024, 2048, 4096], 0.9, 1.0).unwrap();
    let (first, last) = (rungs[0], rungs[rungs.len() - 1]);
    let rate = (first.error / last.error).ln() / (last.nx as f64 / first.nx as f64).ln();
    assert!(rate >= 0.8, "{rungs:?}");
}

#[test]
fn godunov_preconditions() {
    let f = FluxModel::burgers();
    assert!(matches!(godunov_reference(&f, &triangle(), 8, 0.5, 1.0), Err(Error::CflViolation(_))));
    assert!(matches!(godunov_reference(&f, &triangle(), 64, 0.95, 1.0), Err(Error::CflViolation(_))));
    assert!(matches!(godunov_reference(&f, &triangle(), 64, 0.0, 1.0), Err(Error::CflViolation(_))));
}
