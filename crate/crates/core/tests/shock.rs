mod common;

use approx::assert_abs_diff_eq;
use common::*;
use eqarea::curve::SegmentKind;
use eqarea::flux::FluxModel;
use eqarea::geometry::find_overturned_regions;
use eqarea::shock::*;
use eqarea::Error;

#[test]
fn locate_shock_on_the_triangle() {
    let c = curve(&triangle());
    let region = find_overturned_regions(&c, 3.0)[0];
    let s = locate_shock(&c, 3.0, &region).unwrap();
    assert_abs_diff_eq!(s.x, 2.0, epsilon = 1e-15);
    assert_abs_diff_eq!(s.u_left, 0.5, epsilon = 1e-15);
    assert_eq!(s.u_right, 0.0);
    // d/dt sqrt(1 + t) at t = 3
    let h = 1e-4;
    let fd = ((1.0f64 + 3.0 + h).sqrt() - (1.0f64 + 3.0 - h).sqrt()) / (2.0 * h);
    assert_abs_diff_eq!(s.speed, 0.25, epsilon = 1e-15);
    assert_abs_diff_eq!(s.speed, fd, epsilon = 1e-8);

    let region = find_overturned_regions(&c, 10.0)[0];
    let s = locate_shock(&c, 10.0, &region).unwrap();
    assert!((s.x - 11f64.sqrt()).abs() < 1e-13);
}

#[test]
fn locate_shock_on_a_riemann_problem() {
    let c = curve(&riemann(1.0, 0.0));
    for &t in &[0.5, 1.0, 4.0] {
        let region = find_overturned_regions(&c, t)[0];
        let s = locate_shock(&c, t, &region).unwrap();
        assert_abs_diff_eq!(s.x, 0.5 * t, epsilon = 1e-15);
        assert_eq!(s.speed, 0.5);
    }
}

#[test]
fn locate_shock_rejects_merged_folds() {
    let c = curve(&two_step());
    let regions = find_overturned_regions(&c, 1.0);
    assert!(matches!(locate_shock(&c, 1.0, &regions[0]), Err(Error::NotSCurve { .. })));
}

#[test]
fn projection_of_the_triangle() {
    let c = curve(&triangle());
    let view = project_weak_solution(&c, 1.0).unwrap();
    assert_eq!(view.shocks.len(), 1);
    let x_s = 2f64.sqrt();
    assert_abs_diff_eq!(view.shocks[0].x, x_s, epsilon = 1e-15);
    for i in 0..=40 {
        let x = -1.0 + 4.0 * i as f64 / 40.0;
        let expected = if (0.0..x_s).contains(&x) { x / 2.0 } else { 0.0 };
        assert_abs_diff_eq!(view.value_at(&c, x).unwrap(), expected, epsilon = 1e-15);
    }
    assert_eq!(view.arcs.len(), 2);
    assert_eq!(view.arcs[0].x_end, view.shocks[0].x);
    assert_eq!(view.arcs[1].x_start, view.shocks[0].x);
    assert!((view.area - c.total_area(1.0)).abs() <= 1e-12 * c.area_scale(1.0));
}

#[test]
fn projection_without_folds_is_the_identity() {
    let c = curve(&arctan());
    let t = 0.5;
    let view = project_weak_solution(&c, t).unwrap();
    assert!(view.shocks.is_empty() && view.pairs.is_empty());
    for i in 0..=50 {
        // clear of the fans opening at x = -10 and x = 10
        let x = -8.0 + 16.0 * i as f64 / 50.0;
        // characteristic through x: x0 + g(x0) t = x
        let x0 = bisect(|y| y + arctan_g(y) * t - x, -10.0, 10.0);
        assert_abs_diff_eq!(view.value_at(&c, x).unwrap(), arctan_g(x0), epsilon = 1e-12);
    }
}

#[test]
fn projection_after_the_merge() {
    let c = curve(&two_step());
    let view = project_weak_solution(&c, 1.0).unwrap();
    assert_eq!(view.shocks.len(), 1);
    assert_eq!((view.shocks[0].u_left, view.shocks[0].u_right), (3.0, 0.0));
    assert_abs_diff_eq!(view.shocks[0].x, 5.0 / 3.0 + 0.5, epsilon = 1e-13);
}

#[test]
fn two_step_tracking() {
    let c = curve(&two_step());
    let times: Vec<f64> = (0..=20).map(|i| 0.1 * i as f64).collect();
    let track = track_shocks(&c, &times, &TrackOptions::default()).unwrap();
    assert_eq!(track.collisions.len(), 1);
    let ev = &track.collisions[0];
    assert!((ev.t - 2.0 / 3.0).abs() < 1e-10);
    assert!((ev.x - 5.0 / 3.0).abs() < 1e-10);
    assert_eq!(ev.parents, vec![0, 1]);
    assert_eq!(ev.speed, 1.5);
    for f in &track.frames {
        if f.t < 2.0 / 3.0 {
            let speeds: Vec<f64> = f.shocks.iter().map(|s| s.speed).collect();
            assert_eq!(speeds, vec![2.5, 1.0]);
            assert!(f.shocks.iter().all(|s| s.provenance == Provenance::Isolated));
        } else {
            assert_eq!(f.shocks.len(), 1);
            assert_eq!(f.shocks[0].id, ev.child);
            assert_eq!(f.shocks[0].provenance, Provenance::Merged(vec![0, 1]));
            assert_eq!(f.shocks[0].speed, 1.5);
        }
    }
    // the default cadence reinitialises once, right after the merge
    assert_eq!(track.curves.len(), 2);
}

#[test]
fn three_step_cascade_merges_twice() {
    let p = eqarea::profile::PiecewiseProfile::new(
        4.0,
        0.0,
        vec![poly_piece(0.0, 1.0, &[2.0]), poly_piece(1.0, 2.0, &[1.0])],
        None,
    )
    .unwrap();
    let times: Vec<f64> = (0..=16).map(|i| 0.25 * i as f64).collect();
    let track = track_shocks(&curve(&p), &times, &TrackOptions::default()).unwrap();
    assert_eq!(track.collisions.len(), 2);
    assert!((track.collisions[0].t - 2.0 / 3.0).abs() < 1e-10);
    assert!((track.collisions[1].t - 5.0 / 6.0).abs() < 1e-10);
    let last = track.frames.last().unwrap();
    assert_eq!(last.shocks.len(), 1);
    assert_eq!(last.shocks[0].speed, 2.0);
}

#[test]
fn single_shock_series_has_constant_speed() {
    let c = curve(&riemann(2.0, -1.0));
    let times: Vec<f64> = (1..=10).map(|i| 0.3 * i as f64).collect();
    let track = track_shocks(&c, &times, &TrackOptions::default()).unwrap();
    let series = track.series(0);
    assert_eq!(series.len(), times.len());
    assert!(series.iter().all(|s| s.speed == 0.5 && s.id == 0));
}

#[test]
fn emitted_shocks_are_lax_admissible() {
    let q = FluxModel::quadratic_linear(2.0, -1.0).unwrap();
    let cases = [
        (curve(&triangle()), 10.0),
        (curve(&arctan()), 5.0),
        (curve(&two_step()), 2.0),
        (eqarea::curve::ParametricCurve::from_profile(&riemann(1.0, -2.0), &q, 8, 8).unwrap(), 3.0),
    ];
    for (c, t_end) in cases {
        let times: Vec<f64> = (0..=40).map(|i| t_end * i as f64 / 40.0).collect();
        for opts in [TrackOptions::default(), TrackOptions { reinit: Reinit::EveryOutput, ..TrackOptions::default() }] {
            let track = track_shocks(&c, &times, &opts).unwrap();
            for f in &track.frames {
                for s in &f.shocks {
                    assert!(s.is_lax_admissible(c.flux()), "{s:?}");
                    let rh = c.flux().rh_speed(s.u_left, s.u_right).unwrap();
                    assert!((s.speed - rh).abs() <= 1e-12);
                }
            }
        }
    }
}

#[test]
fn tracking_rejects_unordered_times() {
    let c = curve(&triangle());
    assert!(track_shocks(&c, &[0.0, 1.0, 1.0], &TrackOptions::default()).is_err());
    assert!(track_shocks(&c, &[], &TrackOptions::default()).is_err());
}

#[test]
fn reinitialised_triangle_keeps_the_exact_shock() {
    let c = curve(&triangle());
    let view = project_weak_solution(&c, 1.0).unwrap();
    let r = reinitialize(&c, 1.0, &view).unwrap();
    assert_eq!(r.t_created(), 1.0);
    let plain = project_weak_solution(&c, 3.0).unwrap();
    let fresh = project_weak_solution(&r, 3.0).unwrap();
    assert!((fresh.shocks[0].x - 2.0).abs() < 1e-12);
    assert!((fresh.shocks[0].x - plain.shocks[0].x).abs() < 1e-12);
}

#[test]
fn reinitialising_with_no_shocks_changes_nothing() {
    let c = curve(&arctan());
    let view = project_weak_solution(&c, 0.5).unwrap();
    let r = reinitialize(&c, 0.5, &view).unwrap();
    let (lo, hi) = c.s_range();
    for i in 0..=60 {
        let s = lo + (hi - lo) * i as f64 / 60.0;
        let (a, b) = (c.evaluate(s, 0.8).unwrap(), r.evaluate(s, 0.8).unwrap());
        assert!((a.0 - b.0).abs() <= 1e-13 && (a.1 - b.1).abs() <= 1e-13);
    }
}

#[test]
fn reinitialised_merge_is_one_down_jump() {
    let c = curve(&two_step());
    let view = project_weak_solution(&c, 1.0).unwrap();
    let r = reinitialize(&c, 1.0, &view).unwrap();
    let verticals: Vec<_> = r
        .segments()
        .iter()
        .filter_map(|s| match s.kind {
            SegmentKind::Vertical { x0, u_start, u_end } => Some((s.t_ref, x0, u_start, u_end)),
            _ => None,
        })
        .filter(|v| v.0 == 1.0)
        .collect();
    assert_eq!(verticals.len(), 1);
    let (_, x0, u_start, u_end) = verticals[0];
    assert_eq!((u_start, u_end), (3.0, 0.0));
    assert_abs_diff_eq!(x0, 5.0 / 3.0 + 0.5, epsilon = 1e-13);
    let regions = find_overturned_regions(&r, 1.5);
    assert_eq!(regions.len(), 1);
    let s = locate_shock(&r, 1.5, &regions[0]).unwrap();
    assert_abs_diff_eq!(s.x, 5.0 / 3.0 + 1.5 * (1.5 - 2.0 / 3.0), epsilon = 1e-13);
}

fn triangle_state(t: f64) -> ShockState {
    let x = (1.0 + t).sqrt();
    ShockState { x, u_left: x / (1.0 + t), u_right: 0.0, t }
}

#[test]
fn appendix_step_reproduces_the_triangle() {
    let f = FluxModel::burgers();
    for &(t, dt) in &[(0.0, 0.5), (1.0, 0.01), (3.0, 1.0), (2.0, 7.0)] {
        let t_new = t + dt;
        for order in [3, 5, 7, 9] {
            let (x, diag) = appendix_root_shock(
                &f,
                |x| Ok((x / (1.0 + t_new), 1.0 / (1.0 + t_new))),
                |_| Ok((0.0, 0.0)),
                triangle_state(t),
                dt,
                order,
            )
            .unwrap();
            assert!((x - (1.0 + t_new).sqrt()).abs() < 1e-12, "t {t} dt {dt} order {order}");
            assert!(diag.a1 < x && x < diag.b1);
            assert!(diag.residual < 1e-13);
        }
    }
}

#[test]
fn appendix_step_on_constant_states_moves_at_rh_speed() {
    let q = FluxModel::quadratic_linear(1.0, 1.0).unwrap();
    for &dt in &[0.01, 0.3, 2.0] {
        let state = ShockState { x: 0.4, u_left: 2.0, u_right: -0.5, t: 1.0 };
        let (x, _) = appendix_root_shock(&q, |_| Ok((2.0, 0.0)), |_| Ok((-0.5, 0.0)), state, dt, 3).unwrap();
        let speed = q.rh_speed(2.0, -0.5).unwrap();
        assert_abs_diff_eq!(x, 0.4 + dt * speed, epsilon = 1e-13);
    }
}

#[test]
fn appendix_step_flags_bad_brackets() {
    let f = FluxModel::burgers();
    let state = ShockState { x: 0.0, u_left: 1.0, u_right: 0.0, t: 0.0 };
    // both arcs below the shock line: Q has constant sign
    let none = appendix_root_shock(&f, |_| Ok((0.0, 0.0)), |_| Ok((0.0, 0.0)), state, 1.0, 3);
    assert!(matches!(none, Err(Error::NoRootInBracket { .. })));
    // f1 - f2 = (8/3)(2x - 1) puts roots of Q at 1/4 and 3/4
    let two = appendix_root_shock(
        &f,
        |x| Ok((8.0 / 3.0 * (2.0 * x - 1.0), 16.0 / 3.0)),
        |_| Ok((0.0, 0.0)),
        state,
        1.0,
        3,
    );
    assert!(matches!(two, Err(Error::MultipleRoots { count: 2, .. })));
    let even = appendix_root_shock(&f, |_| Ok((1.0, 0.0)), |_| Ok((0.0, 0.0)), state, 1.0, 4);
    assert!(matches!(even, Err(Error::Config(_))));
    let big = appendix_root_shock(&f, |_| Ok((1.0, 0.0)), |_| Ok((0.0, 0.0)), state, 1.0, 11);
    assert!(matches!(big, Err(Error::DegreeCap { .. })));
}

#[test]
fn appendix_mode_agrees_with_flow_mode() {
    let c = curve(&triangle());
    let times: Vec<f64> = (0..=40).map(|i| 0.25 * i as f64).collect();
    let flow = track_shocks(&c, &times, &TrackOptions::default()).unwrap();
    let app = track_shocks(&c, &times, &TrackOptions { mode: Mode::Appendix, ..TrackOptions::default() }).unwrap();
    for (a, b) in flow.frames.iter().zip(&app.frames) {
        assert_eq!(b.appendix_fallbacks, 0);
        assert!((a.shocks[0].x - b.shocks[0].x).abs() < 1e-10);
    }
}
