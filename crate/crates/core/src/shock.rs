//! Shock lifecycle: location by the equal-area cut, projection onto the
//! weak solution, tracking across output times with collision detection,
//! reinitialisation, and the polynomial shock equation of the direct
//! weak-solution pipeline.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::curve::{Cut, OverturnRegion, ParametricCurve, Side};
use crate::error::{Error, Result};
use crate::flux::{FluxModel, DEGENERATE_JUMP};
use crate::geometry::{branch_crossing, equal_area_pair_for, equal_area_pairs, triple_intersection, EqualAreaPair};
use crate::interpolate::{bisect_predicate, hermite_interpolate, poly_roots_in_interval, HermiteNode, Polynomial};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    Isolated,
    Merged(Vec<u64>),
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Provenance::Isolated => f.write_str("isolated"),
            Provenance::Merged(ids) => {
                let ids: Vec<String> = ids.iter().map(u64::to_string).collect();
                write!(f, "merged({})", ids.join(";"))
            }
        }
    }
}

/// One discontinuity at one time.
#[derive(Clone, Debug, PartialEq)]
pub struct ShockRecord {
    pub id: u64,
    pub t: f64,
    pub x: f64,
    pub u_left: f64,
    pub u_right: f64,
    pub speed: f64,
    pub provenance: Provenance,
    /// Curve parameters of the cut.
    pub s0: f64,
    pub s1: f64,
}

impl ShockRecord {
    fn from_pair(flux: &FluxModel, t: f64, pair: &EqualAreaPair) -> Result<Self> {
        Ok(Self {
            id: 0,
            t,
            x: pair.x,
            u_left: pair.u_left,
            u_right: pair.u_right,
            speed: flux.rh_speed(pair.u_left, pair.u_right)?,
            provenance: Provenance::Isolated,
            s0: pair.s0,
            s1: pair.s1,
        })
    }

    /// `F'(u_R) < speed < F'(u_L)`.
    pub fn is_lax_admissible(&self, flux: &FluxModel) -> bool {
        self.u_left > self.u_right + DEGENERATE_JUMP
            && flux.dflux(self.u_right) < self.speed
            && self.speed < flux.dflux(self.u_left)
    }
}

/// A single-valued stretch of the projected solution, `s ∈ [s_start, s_end]`
/// (infinite at the outer ends).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WeakArc {
    pub s_start: f64,
    pub s_end: f64,
    pub x_start: f64,
    pub x_end: f64,
}

/// The weak solution at one time: arcs of the flowed curve joined by shocks.
#[derive(Clone, Debug)]
pub struct WeakSolutionView {
    pub t: f64,
    pub arcs: Vec<WeakArc>,
    /// Non-degenerate discontinuities, in increasing `x`.
    pub shocks: Vec<ShockRecord>,
    /// All cuts, including degenerate ones.
    pub pairs: Vec<EqualAreaPair>,
    /// Parameter window over which the areas below are measured.
    pub window: (f64, f64),
    pub curve_area: f64,
    /// Area of the projected solution over the same window.
    pub area: f64,
}

impl WeakSolutionView {
    /// `u(x)` of the projected solution (right-continuous at shocks).
    pub fn value_at(&self, curve: &ParametricCurve, x: f64) -> Result<f64> {
        let arc = self
            .arcs
            .iter()
            .find(|a| a.x_start <= x && x < a.x_end)
            .or_else(|| self.arcs.iter().rev().find(|a| a.x_start <= x && x <= a.x_end))
            .ok_or_else(|| Error::ProjectionInconsistent(format!("no arc covers x = {x}")))?;
        let s = branch_crossing(curve, self.t, x, arc.s_start, arc.s_end)?;
        Ok(curve.point(s, self.t).u)
    }
}

/// The shock of one S-shaped fold.
pub fn locate_shock(curve: &ParametricCurve, t: f64, region: &OverturnRegion) -> Result<ShockRecord> {
    if !region.is_static {
        let mid = 0.5 * (region.x_fold_left + region.x_fold_right);
        triple_intersection(curve, t, mid, region)?;
    }
    let pair = equal_area_pair_for(curve, t, region)?;
    if pair.u_left <= pair.u_right {
        return Err(Error::NoRoot { lo: pair.x_range.0, hi: pair.x_range.1 });
    }
    ShockRecord::from_pair(curve.flux(), t, &pair)
}

/// Replaces every fold by its equal-area cut.
pub fn project_weak_solution(curve: &ParametricCurve, t: f64) -> Result<WeakSolutionView> {
    let pairs = equal_area_pairs(curve, t)?;
    let mut arcs = Vec::with_capacity(pairs.len() + 1);
    let mut s_prev = f64::NEG_INFINITY;
    let mut x_prev = f64::NEG_INFINITY;
    let mut shocks = Vec::new();
    for p in &pairs {
        arcs.push(WeakArc { s_start: s_prev, s_end: p.s0, x_start: x_prev, x_end: p.x });
        s_prev = p.s1;
        x_prev = p.x;
        if (p.u_left - p.u_right).abs() > DEGENERATE_JUMP {
            let mut rec = ShockRecord::from_pair(curve.flux(), t, p)?;
            rec.id = shocks.len() as u64;
            shocks.push(rec);
        }
    }
    arcs.push(WeakArc { s_start: s_prev, s_end: f64::INFINITY, x_start: x_prev, x_end: f64::INFINITY });
    let window = area_window(curve, &pairs);
    let curve_area = curve.area_between(window.0, window.1, t)?;
    let area = curve_area - pairs.iter().map(|p| p.residual).sum::<f64>();
    Ok(WeakSolutionView { t, arcs, shocks, pairs, window, curve_area, area })
}

fn area_window(curve: &ParametricCurve, pairs: &[EqualAreaPair]) -> (f64, f64) {
    let (lo, hi) = curve.s_range();
    let lo = pairs.first().map_or(lo, |p| p.s0.min(lo));
    let hi = pairs.last().map_or(hi, |p| p.s1.max(hi));
    (lo, hi)
}

/// A new curve at time `t` with every cut of `view` replaced by a vertical
/// segment. The parametric area over the view's window is preserved.
pub fn reinitialize(curve: &ParametricCurve, t: f64, view: &WeakSolutionView) -> Result<ParametricCurve> {
    let cuts: Vec<Cut> = view
        .pairs
        .iter()
        .map(|p| Cut { s0: p.s0, s1: p.s1, x: p.x, u_left: p.u_left, u_right: p.u_right })
        .collect();
    let fresh = curve.reinitialize(t, &cuts)?;
    let after = fresh.area_between(view.window.0, view.window.1, t)?;
    let scale = curve.area_scale(t);
    if (after - view.area).abs() > 1e-12 * scale {
        return Err(Error::ProjectionInconsistent(format!(
            "reinitialisation changed the area from {} to {after}",
            view.area
        )));
    }
    Ok(fresh)
}

/// Left state, right state, position and time of a shock about to be
/// advanced by the polynomial shock equation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ShockState {
    pub x: f64,
    pub u_left: f64,
    pub u_right: f64,
    pub t: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct AppendixDiagnostics {
    /// Shock polynomial in the local variable `ξ = x - a1`.
    pub polynomial: Polynomial,
    pub residual: f64,
    /// Flowed ends of the previous shock line.
    pub a1: f64,
    pub b1: f64,
}

/// Largest supported Hermite order (the shock polynomial has degree `n + 1`).
pub const MAX_APPENDIX_ORDER: usize = 9;

/// Advances an isolated shock by `dt` using Hermite interpolants of the
/// flowed left arc `f1`, right arc `f2` and flowed shock line
/// `H(x) = F'⁻¹((x - x_prev)/dt)`, all of order `order` (odd), and returns
/// the unique root in `(a1, b1)` of
/// `∫_{a1}^{S} (P(H) - P(f2)) - ∫_{S}^{b1} (P(f1) - P(H)) = 0`.
///
/// The arc closures map `x` to `(u, du/dx)` at time `state.t + dt`.
pub fn appendix_root_shock<F1, F2>(
    flux: &FluxModel,
    mut left_arc: F1,
    mut right_arc: F2,
    state: ShockState,
    dt: f64,
    order: usize,
) -> Result<(f64, AppendixDiagnostics)>
where
    F1: FnMut(f64) -> Result<(f64, f64)>,
    F2: FnMut(f64) -> Result<(f64, f64)>,
{
    if order % 2 == 0 || order < 3 {
        return Err(Error::Config(format!("Hermite order must be odd and at least 3, got {order}")));
    }
    if order > MAX_APPENDIX_ORDER {
        return Err(Error::DegreeCap { degree: order + 1, cap: MAX_APPENDIX_ORDER + 1 });
    }
    if !(dt > 0.0) {
        return Err(Error::Config(format!("appendix step must be positive, got {dt}")));
    }
    let a1 = state.x + flux.dflux(state.u_right) * dt;
    let b1 = state.x + flux.dflux(state.u_left) * dt;
    if !(a1 < b1) {
        return Err(Error::NoRootInBracket { lo: a1, hi: b1 });
    }
    let m = (order + 1) / 2;
    let xs: Vec<f64> = (0..m).map(|i| if i + 1 == m { b1 } else { a1 + (b1 - a1) * i as f64 / (m - 1) as f64 }).collect();
    let mut n1 = Vec::with_capacity(m);
    let mut n2 = Vec::with_capacity(m);
    let mut nh = Vec::with_capacity(m);
    for (i, &x) in xs.iter().enumerate() {
        let (u1, d1) = left_arc(x)?;
        let (u2, d2) = right_arc(x)?;
        let uh = if i == 0 {
            state.u_right
        } else if i + 1 == m {
            state.u_left
        } else {
            flux.inv_dflux((x - state.x) / dt)
        };
        let dh = 1.0 / (flux.d2flux(uh) * dt);
        for (v, what) in [(u1, "left arc"), (d1, "left arc slope"), (u2, "right arc"), (d2, "right arc slope"), (dh, "shock line")] {
            if !v.is_finite() {
                return Err(Error::NonFiniteError { what: what.into(), x });
            }
        }
        n1.push(HermiteNode { x, y: u1, dy: d1 });
        n2.push(HermiteNode { x, y: u2, dy: d2 });
        nh.push(HermiteNode { x, y: uh, dy: dh });
    }
    let cap = Polynomial::DEFAULT_DEGREE_CAP;
    let p1 = hermite_interpolate(&n1, a1, cap)?;
    let p2 = hermite_interpolate(&n2, a1, cap)?;
    let ph = hermite_interpolate(&nh, a1, cap)?;
    let below = (&ph - &p2).antiderivative();
    let above = (&p1 - &ph).antiderivative();
    let len = b1 - a1;
    let q = &(&below + &above) - &Polynomial::constant(above.eval(len));
    let roots = poly_roots_in_interval(&q, 0.0, len);
    match roots.len() {
        0 => Err(Error::NoRootInBracket { lo: a1, hi: b1 }),
        1 => {
            let xi = roots[0];
            let residual = q.eval_compensated(xi).abs();
            Ok((a1 + xi, AppendixDiagnostics { polynomial: q, residual, a1, b1 }))
        }
        count => Err(Error::MultipleRoots { count, lo: a1, hi: b1 }),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    /// Flow the curve exactly and cut folds by the equal-area rule.
    #[default]
    Flow,
    /// Advance isolated shocks with the polynomial shock equation.
    Appendix,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Reinit {
    Never,
    #[default]
    AfterCollision,
    EveryOutput,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TrackOptions {
    pub mode: Mode,
    pub reinit: Reinit,
    /// Largest substep of the appendix pipeline.
    pub appendix_dt: f64,
    pub appendix_order: usize,
    /// Width of the bracket on a collision time.
    pub collision_tol: f64,
}

impl Default for TrackOptions {
    fn default() -> Self {
        Self { mode: Mode::Flow, reinit: Reinit::AfterCollision, appendix_dt: 0.01, appendix_order: 3, collision_tol: 1e-13 }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CollisionEvent {
    pub t: f64,
    pub x: f64,
    pub parents: Vec<u64>,
    pub child: u64,
    pub u_left: f64,
    pub u_right: f64,
    pub speed: f64,
}

/// Everything recorded at one output time.
#[derive(Clone, Debug)]
pub struct Frame {
    pub t: f64,
    pub shocks: Vec<ShockRecord>,
    pub view: WeakSolutionView,
    /// Index into [`Track::curves`] of the curve the view was taken from.
    pub curve_index: usize,
    /// Parametric area of the curve over the view window.
    pub area: f64,
    /// Area predicted from the initial data and the endpoint states.
    pub expected_area: f64,
    pub drift: f64,
    pub view_drift: f64,
    /// Drift of the reinitialised curve, when one was created at this time.
    pub reinit_drift: Option<f64>,
    pub scale: f64,
    /// Appendix substeps that fell back to the flow projection.
    pub appendix_fallbacks: usize,
    pub appendix_max_residual: f64,
}

#[derive(Clone, Debug)]
pub struct Track {
    pub frames: Vec<Frame>,
    pub collisions: Vec<CollisionEvent>,
    pub curves: Vec<ParametricCurve>,
}

impl Track {
    /// Time series of one shock id.
    pub fn series(&self, id: u64) -> Vec<&ShockRecord> {
        self.frames.iter().flat_map(|f| f.shocks.iter().filter(move |s| s.id == id)).collect()
    }

    pub fn max_drift_ratio(&self) -> f64 {
        self.frames
            .iter()
            .map(|f| f.drift.max(f.view_drift).max(f.reinit_drift.unwrap_or(0.0)) / f.scale)
            .fold(0.0, f64::max)
    }
}

#[derive(Clone, Debug)]
struct Active {
    id: u64,
    s0: f64,
    s1: f64,
    provenance: Provenance,
    appendix: Option<AppendixTrack>,
}

#[derive(Clone, Copy, Debug)]
struct AppendixTrack {
    x: f64,
    s0: f64,
    s1: f64,
    u_left: f64,
    u_right: f64,
}

fn overlaps(p: &EqualAreaPair, a: &Active) -> bool {
    p.s0 <= a.s1 && a.s0 <= p.s1
}

fn significant(p: &EqualAreaPair) -> bool {
    (p.u_left - p.u_right).abs() > DEGENERATE_JUMP
}

/// Follows every shock over `times` (strictly increasing, all at or after
/// the curve's creation time), threading identities by overlap of the cut
/// brackets in `s` and resolving collisions in between output times.
pub fn track_shocks(initial: &ParametricCurve, times: &[f64], opts: &TrackOptions) -> Result<Track> {
    if times.is_empty() {
        return Err(Error::Config("no output times".into()));
    }
    if times.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::Config("output times must be strictly increasing".into()));
    }
    if times[0] < initial.t_created() {
        return Err(Error::Config(format!("output times start before the curve's creation time {}", initial.t_created())));
    }
    let flux = initial.flux().clone();
    let d_legendre = flux.legendre(initial.right_state()) - flux.legendre(initial.left_state());
    let mut curves = vec![initial.clone()];
    let mut curve = initial.clone();
    let mut active: Vec<Active> = Vec::new();
    let mut next_id = 0u64;
    let mut frames = Vec::with_capacity(times.len());
    let mut collisions = Vec::new();
    let mut t_prev: Option<f64> = None;

    for &t in times {
        let view = project_weak_solution(&curve, t).map_err(|e| e.at_time(t))?;

        // collisions since the previous output
        let merging = view
            .pairs
            .iter()
            .filter(|p| significant(p))
            .any(|p| active.iter().filter(|a| overlaps(p, a)).count() >= 2);
        let mut collided = false;
        if merging {
            let tp = t_prev.expect("no shocks are active before the first output");
            let events =
                resolve_collisions(&curve, tp, t, &mut active, &mut next_id, opts.collision_tol).map_err(|e| e.at_time(t))?;
            collided = !events.is_empty();
            collisions.extend(events);
        }

        // thread identities
        let mut shocks = Vec::new();
        let mut next_active = Vec::new();
        let mut fallbacks = 0;
        let mut max_residual: f64 = 0.0;
        for (pi, p) in view.pairs.iter().enumerate() {
            if !significant(p) {
                continue;
            }
            let mut rec = ShockRecord::from_pair(&flux, t, p).map_err(|e| e.at_time(t))?;
            let owner = active.iter().find(|a| overlaps(p, a)).cloned();
            let (id, provenance, mut app) = match owner {
                Some(a) => (a.id, a.provenance, a.appendix),
                None => {
                    next_id += 1;
                    (next_id - 1, Provenance::Isolated, None)
                }
            };
            rec.id = id;
            rec.provenance = provenance.clone();
            if opts.mode == Mode::Appendix {
                let seeded = AppendixTrack { x: p.x, s0: p.s0, s1: p.s1, u_left: p.u_left, u_right: p.u_right };
                app = match (app, t_prev) {
                    (Some(state), Some(tp)) => {
                        let left_bound = if pi == 0 { f64::NEG_INFINITY } else { view.pairs[pi - 1].s1 };
                        let right_bound = view.pairs.get(pi + 1).map_or(f64::INFINITY, |q| q.s0);
                        match advance_appendix(&curve, state, tp, t, (left_bound, right_bound), opts) {
                            Ok((next, residual)) => {
                                max_residual = max_residual.max(residual);
                                Some(next)
                            }
                            Err(_) => {
                                fallbacks += 1;
                                Some(seeded)
                            }
                        }
                    }
                    _ => Some(seeded),
                };
                if let Some(a) = app {
                    rec.x = a.x;
                    rec.u_left = a.u_left;
                    rec.u_right = a.u_right;
                    rec.s0 = a.s0;
                    rec.s1 = a.s1;
                    rec.speed = flux.rh_speed(a.u_left, a.u_right).map_err(|e| e.at_time(t))?;
                }
            }
            next_active.push(Active { id, s0: p.s0, s1: p.s1, provenance, appendix: app });
            shocks.push(rec);
        }
        active = next_active;

        let (w_lo, w_hi) = view.window;
        let base = initial.area_between(w_lo, w_hi, initial.t_created())?;
        let expected_area = base + (t - initial.t_created()) * d_legendre;
        let scale = curve.area_scale(t).max(expected_area.abs());
        let drift = (view.curve_area - expected_area).abs();
        let view_drift = (view.area - expected_area).abs();
        let curve_index = curves.len() - 1;

        let reinit_now = match opts.reinit {
            Reinit::Never => false,
            Reinit::AfterCollision => collided,
            Reinit::EveryOutput => !view.pairs.is_empty(),
        };
        let mut reinit_drift = None;
        if reinit_now {
            let fresh = reinitialize(&curve, t, &view).map_err(|e| e.at_time(t))?;
            let after = fresh.area_between(w_lo, w_hi, t)?;
            reinit_drift = Some((after - expected_area).abs());
            curves.push(fresh.clone());
            curve = fresh;
        }
        frames.push(Frame {
            t,
            shocks,
            area: view.curve_area,
            view,
            curve_index,
            expected_area,
            drift,
            view_drift,
            reinit_drift,
            scale,
            appendix_fallbacks: fallbacks,
            appendix_max_residual: max_residual,
        });
        t_prev = Some(t);
    }
    Ok(Track { frames, collisions, curves })
}

/// Finds every collision in `(t_lo, t_hi]` by bisection on the onset of a
/// cut spanning two tracked brackets; merges are applied pairwise in time
/// order and `active` is updated to the merged shocks.
fn resolve_collisions(
    curve: &ParametricCurve,
    t_lo: f64,
    t_hi: f64,
    active: &mut Vec<Active>,
    next_id: &mut u64,
    tol: f64,
) -> Result<Vec<CollisionEvent>> {
    let flux = curve.flux();
    let mut events = Vec::new();
    let mut lo = t_lo;
    loop {
        let merges_at = |t: f64, active: &[Active]| -> Result<bool> {
            let pairs = equal_area_pairs(curve, t)?;
            Ok(pairs.iter().filter(|p| significant(p)).any(|p| active.iter().filter(|a| overlaps(p, a)).count() >= 2))
        };
        if !merges_at(t_hi, active)? {
            return Ok(events);
        }
        let (a, b) = bisect_predicate(|t| merges_at(t, active), lo, t_hi, tol)?;
        let pairs = equal_area_pairs(curve, b)?;
        for p in pairs.iter().filter(|p| significant(p)) {
            let parents: Vec<Active> = active.iter().filter(|a| overlaps(p, a)).cloned().collect();
            if parents.len() < 2 {
                continue;
            }
            let child = *next_id;
            *next_id += 1;
            let parent_ids: Vec<u64> = parents.iter().map(|a| a.id).collect();
            active.retain(|a| !parent_ids.contains(&a.id));
            active.push(Active {
                id: child,
                s0: p.s0,
                s1: p.s1,
                provenance: Provenance::Merged(parent_ids.clone()),
                appendix: None,
            });
            events.push(CollisionEvent {
                t: 0.5 * (a + b),
                x: p.x,
                parents: parent_ids,
                child,
                u_left: p.u_left,
                u_right: p.u_right,
                speed: flux.rh_speed(p.u_left, p.u_right)?,
            });
        }
        active.sort_by(|x, y| x.s0.total_cmp(&y.s0));
        lo = b;
    }
}

/// Substeps of the polynomial shock equation from `t0` to `t1`. Arcs are
/// the exact flowed curve on either side of the shock's current cut,
/// bounded by the neighbouring cuts at `t1`.
fn advance_appendix(
    curve: &ParametricCurve,
    start: AppendixTrack,
    t0: f64,
    t1: f64,
    bounds: (f64, f64),
    opts: &TrackOptions,
) -> Result<(AppendixTrack, f64)> {
    let flux = curve.flux();
    let (left_bound, right_bound) = bounds;
    // the arcs must stay single-valued: no fold may reach them at t1
    // (x_s is affine in t, so this covers every substep)
    for r in curve.overturned_regions(t1) {
        let touches_left = r.s_lo < start.s0 && r.s_hi > left_bound;
        let touches_right = r.s_hi > start.s1 && r.s_lo < right_bound;
        if touches_left || touches_right {
            return Err(Error::ProjectionInconsistent("a fold reaches the shock's arcs".into()));
        }
    }
    let n = ((t1 - t0) / opts.appendix_dt - 1e-9).ceil().max(1.0) as usize;
    let h = (t1 - t0) / n as f64;
    let mut st = start;
    let mut max_residual: f64 = 0.0;
    for i in 0..n {
        let t_from = t0 + h * i as f64;
        let t_new = if i + 1 == n { t1 } else { t0 + h * (i + 1) as f64 };
        let arc = |s_a: f64, s_b: f64, side: Side| {
            move |x: f64| -> Result<(f64, f64)> {
                // the flowed shock-line ends coincide with the arc ends up to rounding
                let s = branch_crossing(curve, t_new, x, s_a, s_b).or_else(|e| {
                    let slack = 1e-12 * (1.0 + x.abs());
                    if s_b.is_finite() && (x - curve.x_at(s_b, t_new)).abs() <= slack {
                        Ok(s_b)
                    } else if s_a.is_finite() && (x - curve.x_at(s_a, t_new)).abs() <= slack {
                        Ok(s_a)
                    } else {
                        Err(e)
                    }
                })?;
                let (x_s, u_s) = curve.flow_velocity_one_sided(s, t_new, side);
                Ok((curve.point(s, t_new).u, u_s / x_s))
            }
        };
        let state = ShockState { x: st.x, u_left: st.u_left, u_right: st.u_right, t: t_from };
        let (x_new, diag) = appendix_root_shock(
            flux,
            arc(left_bound, st.s0, Side::Left),
            arc(st.s1, right_bound, Side::Right),
            state,
            t_new - t_from,
            opts.appendix_order,
        )?;
        max_residual = max_residual.max(diag.residual);
        let s0 = branch_crossing(curve, t_new, x_new, left_bound, st.s0)?;
        let s1 = branch_crossing(curve, t_new, x_new, st.s1, right_bound)?;
        st = AppendixTrack {
            x: x_new,
            s0,
            s1,
            u_left: curve.point(s0, t_new).u,
            u_right: curve.point(s1, t_new).u,
        };
    }
    Ok((st, max_residual))
}
