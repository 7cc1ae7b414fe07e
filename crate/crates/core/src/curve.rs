//! The flowed parametric curve `(x(s, t), u(s))`.
//!
//! Every query takes the time explicitly; nothing is stepped. A curve is a
//! contiguous list of segments over `[s_min, s_max]` with constant tails
//! beyond: the left tail continues with `x_s = 1` and the left state, the
//! right tail likewise with the right state.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::flux::FluxModel;
use crate::interpolate::{bisect_predicate, minimize_golden};
use crate::profile::{Node, NodeKind, NodeSet, PieceFunction, PiecewiseProfile};

/// Samples per smooth segment when locating extrema of `F''(u) u_s`.
pub const BREAKING_SCAN: usize = 10_000;

#[derive(Clone, Debug)]
pub enum SegmentKind {
    /// Smooth data: `x0(s) = x0_start + (s - s_start)`, `u = g(x0)`.
    Smooth { func: Arc<PieceFunction>, x0_start: f64 },
    /// A jump: `x0` fixed, `u` linear in `s` from `u_start` to `u_end`.
    Vertical { x0: f64, u_start: f64, u_end: f64 },
}

/// One segment of the parametrization. Positions flow from `t_ref`:
/// `x(s, t) = x0(s) + F'(u(s)) (t - t_ref)`.
#[derive(Clone, Debug)]
pub struct Segment {
    pub s_start: f64,
    pub s_end: f64,
    pub t_ref: f64,
    pub kind: SegmentKind,
}

impl Segment {
    pub fn is_vertical(&self) -> bool {
        matches!(self.kind, SegmentKind::Vertical { .. })
    }

    /// `Some(true)` for a down-jump vertical, `Some(false)` for an up-jump.
    pub fn is_down_jump(&self) -> Option<bool> {
        match self.kind {
            SegmentKind::Vertical { u_start, u_end, .. } => Some(u_start > u_end),
            SegmentKind::Smooth { .. } => None,
        }
    }

    pub fn x0_at(&self, s: f64) -> f64 {
        match &self.kind {
            SegmentKind::Smooth { x0_start, .. } => x0_start + (s - self.s_start),
            SegmentKind::Vertical { x0, .. } => *x0,
        }
    }

    /// `(u, du/ds)` at `s`.
    pub fn state(&self, s: f64) -> (f64, f64) {
        match &self.kind {
            SegmentKind::Smooth { func, x0_start } => func.value_and_derivative(x0_start + (s - self.s_start)),
            SegmentKind::Vertical { u_start, u_end, .. } => {
                let len = self.s_end - self.s_start;
                let slope = (u_end - u_start) / len;
                let u = if s >= self.s_end { *u_end } else { u_start + slope * (s - self.s_start) };
                (u, slope)
            }
        }
    }

    /// `∫ u x0_s ds` over `[a, b] ⊂ [s_start, s_end]`.
    pub fn base_area(&self, a: f64, b: f64) -> Result<f64> {
        match &self.kind {
            SegmentKind::Smooth { func, .. } => func.integral(self.x0_at(a), self.x0_at(b)),
            SegmentKind::Vertical { .. } => Ok(0.0),
        }
    }

    fn q(&self, flux: &FluxModel, s: f64) -> f64 {
        let (u, du) = self.state(s);
        flux.d2flux(u) * du
    }
}

/// Position, state and their parameter derivatives at one `(s, t)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CurvePoint {
    pub x: f64,
    pub u: f64,
    pub x_s: f64,
    pub u_s: f64,
}

/// A stretch of a smooth segment on which `q = F''(u) u_s` is monotone.
#[derive(Clone, Copy, Debug, PartialEq)]
struct MonotoneRun {
    s_a: f64,
    s_b: f64,
    q_a: f64,
    q_b: f64,
}

/// Maximal parameter interval on which the curve is overturned (`x_s < 0`).
/// A down-jump observed at its own reference time has `x_s = 0` throughout
/// and is reported as a `is_static` region of zero width in `x`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OverturnRegion {
    pub s_lo: f64,
    pub s_hi: f64,
    /// `x(s_hi, t)`
    pub x_fold_left: f64,
    /// `x(s_lo, t)`
    pub x_fold_right: f64,
    pub is_static: bool,
}

/// Side from which a one-sided velocity is taken.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

#[derive(Clone, Debug)]
pub struct ParametricCurve {
    flux: FluxModel,
    segments: Vec<Segment>,
    runs: Vec<Vec<MonotoneRun>>,
    base_areas: Vec<f64>,
    left: f64,
    right: f64,
    /// `x0` of `s = 0` when there are no segments.
    anchor: f64,
    nodes: NodeSet,
    n_per_piece: usize,
    k_per_jump: usize,
    t_created: f64,
}

/// Parametrization of a profile: `s = 0` at the left end of the support,
/// smooth pieces advance `s` by their width, jumps by `|Δu|`.
pub fn segments_from_profile(profile: &PiecewiseProfile) -> Vec<Segment> {
    let mut segments = Vec::new();
    let mut s = 0.0;
    let push_jump = |segments: &mut Vec<Segment>, s: &mut f64, x: f64| {
        if let Some(j) = profile.jump_at(x) {
            let len = (j.u_left - j.u_right).abs();
            segments.push(Segment {
                s_start: *s,
                s_end: *s + len,
                t_ref: 0.0,
                kind: SegmentKind::Vertical { x0: x, u_start: j.u_left, u_end: j.u_right },
            });
            *s += len;
        }
    };
    for p in profile.pieces() {
        push_jump(&mut segments, &mut s, p.x_left);
        let len = p.x_right - p.x_left;
        segments.push(Segment {
            s_start: s,
            s_end: s + len,
            t_ref: 0.0,
            kind: SegmentKind::Smooth { func: p.func.clone(), x0_start: p.x_left },
        });
        s += len;
    }
    push_jump(&mut segments, &mut s, profile.support().1);
    segments
}

/// Node set of a segment list: `n_per_piece` nodes on each smooth segment,
/// `k_per_jump` on each vertical, equispaced in `s`, shared endpoints merged.
pub fn nodes_from_segments(segments: &[Segment], n_per_piece: usize, k_per_jump: usize) -> Result<NodeSet> {
    let mut set = NodeSet::default();
    for seg in segments {
        let count = if seg.is_vertical() { k_per_jump } else { n_per_piece }.max(2);
        let down = seg.is_down_jump();
        for i in 0..count {
            let s = if i + 1 == count {
                seg.s_end
            } else {
                seg.s_start + (seg.s_end - seg.s_start) * i as f64 / (count - 1) as f64
            };
            let (u, du) = seg.state(s);
            let kind = match down {
                None => NodeKind::Interior,
                Some(down) if i == 0 => {
                    if down {
                        NodeKind::JumpTop
                    } else {
                        NodeKind::JumpBottom
                    }
                }
                Some(down) if i + 1 == count => {
                    if down {
                        NodeKind::JumpBottom
                    } else {
                        NodeKind::JumpTop
                    }
                }
                Some(_) => NodeKind::Vertical,
            };
            let node = Node { s, x0: seg.x0_at(s), u, du, kind, t_ref: seg.t_ref };
            match set.nodes.last_mut() {
                Some(last) if last.s == s => {
                    // shared endpoint: a vertical's description wins, the
                    // derivative comes from the segment to the right
                    if seg.is_vertical() {
                        *last = node;
                    } else {
                        last.du = du;
                    }
                }
                _ => {
                    if let Some(prev) = set.nodes.last() {
                        set.areas.push(seg.base_area(prev.s, s)?);
                        set.area_t_ref.push(seg.t_ref);
                    }
                    set.nodes.push(node);
                }
            }
        }
    }
    Ok(set)
}

fn monotone_runs(seg: &Segment, flux: &FluxModel) -> Vec<MonotoneRun> {
    if seg.is_vertical() {
        return Vec::new();
    }
    let (a, b) = (seg.s_start, seg.s_end);
    let n = BREAKING_SCAN;
    let ss: Vec<f64> = (0..=n).map(|i| if i == n { b } else { a + (b - a) * i as f64 / n as f64 }).collect();
    let qs: Vec<f64> = ss.iter().map(|&s| seg.q(flux, s)).collect();

    // interior sample indices where the direction of q flips
    let mut knots = vec![(a, qs[0])];
    let mut dir = 0.0f64;
    for i in 1..=n {
        let d = qs[i] - qs[i - 1];
        if d == 0.0 {
            continue;
        }
        let sign = d.signum();
        if dir != 0.0 && sign != dir {
            let k = i - 1;
            let lo = ss[k.saturating_sub(1)];
            let hi = ss[(k + 1).min(n)];
            let (s_ext, q_ext) = if dir < 0.0 {
                minimize_golden(|s| seg.q(flux, s), lo, hi, 0.0)
            } else {
                let (s, q) = minimize_golden(|s| -seg.q(flux, s), lo, hi, 0.0);
                (s, -q)
            };
            if s_ext > knots.last().unwrap().0 && s_ext < b {
                knots.push((s_ext, q_ext));
            }
        }
        dir = sign;
    }
    knots.push((b, qs[n]));
    knots
        .windows(2)
        .map(|w| MonotoneRun { s_a: w[0].0, s_b: w[1].0, q_a: w[0].1, q_b: w[1].1 })
        .collect()
}

fn clip_runs(runs: &[MonotoneRun], seg: &Segment, flux: &FluxModel) -> Vec<MonotoneRun> {
    runs.iter()
        .filter(|r| r.s_b > seg.s_start && r.s_a < seg.s_end)
        .map(|r| {
            let s_a = r.s_a.max(seg.s_start);
            let s_b = r.s_b.min(seg.s_end);
            MonotoneRun { s_a, s_b, q_a: seg.q(flux, s_a), q_b: seg.q(flux, s_b) }
        })
        .collect()
}

impl ParametricCurve {
    pub fn from_profile(
        profile: &PiecewiseProfile,
        flux: &FluxModel,
        n_per_piece: usize,
        k_per_jump: usize,
    ) -> Result<Self> {
        let nodes = crate::profile::sample_nodes(profile, n_per_piece, k_per_jump)?;
        let segments = segments_from_profile(profile);
        let runs = segments.iter().map(|s| monotone_runs(s, flux)).collect();
        Self::assemble(
            flux.clone(),
            segments,
            runs,
            profile.left_state(),
            profile.right_state(),
            profile.support().0,
            nodes,
            n_per_piece,
            k_per_jump,
            0.0,
        )
    }

    #[allow(clippy::too_many_arguments)]
    fn assemble(
        flux: FluxModel,
        segments: Vec<Segment>,
        runs: Vec<Vec<MonotoneRun>>,
        left: f64,
        right: f64,
        anchor: f64,
        nodes: NodeSet,
        n_per_piece: usize,
        k_per_jump: usize,
        t_created: f64,
    ) -> Result<Self> {
        let base_areas = segments.iter().map(|s| s.base_area(s.s_start, s.s_end)).collect::<Result<_>>()?;
        Ok(Self { flux, segments, runs, base_areas, left, right, anchor, nodes, n_per_piece, k_per_jump, t_created })
    }

    pub fn flux(&self) -> &FluxModel {
        &self.flux
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn nodes(&self) -> &NodeSet {
        &self.nodes
    }

    pub fn left_state(&self) -> f64 {
        self.left
    }

    pub fn right_state(&self) -> f64 {
        self.right
    }

    pub fn t_created(&self) -> f64 {
        self.t_created
    }

    /// Parameter range covered by segments; tails extend beyond it.
    pub fn s_range(&self) -> (f64, f64) {
        match (self.segments.first(), self.segments.last()) {
            (Some(f), Some(l)) => (f.s_start, l.s_end),
            _ => (0.0, 0.0),
        }
    }

    fn segment_index(&self, s: f64) -> Option<usize> {
        let (lo, hi) = self.s_range();
        if self.segments.is_empty() || s < lo || s > hi {
            return None;
        }
        Some(self.segments.partition_point(|seg| seg.s_end < s).min(self.segments.len() - 1))
    }

    fn segment_point(&self, seg: &Segment, s: f64, t: f64) -> CurvePoint {
        let tau = t - seg.t_ref;
        let (u, u_s) = seg.state(s);
        let x = seg.x0_at(s) + self.flux.dflux(u) * tau;
        let stretch = self.flux.d2flux(u) * u_s * tau;
        let x_s = if seg.is_vertical() { stretch } else { 1.0 + stretch };
        CurvePoint { x, u, x_s, u_s }
    }

    /// Exact point of the flowed curve, tails included.
    pub fn point(&self, s: f64, t: f64) -> CurvePoint {
        let (lo, hi) = self.s_range();
        if let Some(i) = self.segment_index(s) {
            return self.segment_point(&self.segments[i], s, t);
        }
        let (end, state) = if self.segments.is_empty() {
            let x = self.anchor + self.flux.dflux(self.left) * t;
            return CurvePoint { x: x + s, u: if s < 0.0 { self.left } else { self.right }, x_s: 1.0, u_s: 0.0 };
        } else if s < lo {
            (self.segment_point(&self.segments[0], lo, t), self.left)
        } else {
            (self.segment_point(self.segments.last().unwrap(), hi, t), self.right)
        };
        let base = if s < lo { lo } else { hi };
        CurvePoint { x: end.x + (s - base), u: state, x_s: 1.0, u_s: 0.0 }
    }

    /// `evaluate_curve`: the exact flowed point for `s` in the parameter range.
    pub fn evaluate(&self, s: f64, t: f64) -> Result<(f64, f64)> {
        let (lo, hi) = self.s_range();
        if !(s >= lo && s <= hi) {
            return Err(Error::OutOfRange { value: s, lo, hi });
        }
        let p = self.point(s, t);
        Ok((p.x, p.u))
    }

    pub fn x_at(&self, s: f64, t: f64) -> f64 {
        self.point(s, t).x
    }

    /// Characteristic flow of one node: `(x0 + F'(u)(t - t_ref), u)`.
    pub fn flow_position(&self, node: &Node, t: f64) -> (f64, f64) {
        flow_position(&self.flux, node, t)
    }

    /// `(x_s, u_s)` at `(s, t)`. Errors on the endpoints of a jump's vertical
    /// segment, where the derivative is one-sided; see
    /// [`flow_velocity_one_sided`](Self::flow_velocity_one_sided).
    pub fn flow_velocity(&self, s: f64, t: f64) -> Result<(f64, f64)> {
        let touches_jump = self
            .segments
            .iter()
            .any(|seg| seg.is_vertical() && (seg.s_start == s || seg.s_end == s));
        if touches_jump {
            return Err(Error::JumpParameterError { s });
        }
        let p = self.point(s, t);
        Ok((p.x_s, p.u_s))
    }

    pub fn flow_velocity_one_sided(&self, s: f64, t: f64, side: Side) -> (f64, f64) {
        let i = self.segments.iter().position(|seg| match side {
            Side::Left => seg.s_start < s && s <= seg.s_end,
            Side::Right => seg.s_start <= s && s < seg.s_end,
        });
        match i {
            Some(i) => {
                let p = self.segment_point(&self.segments[i], s, t);
                (p.x_s, p.u_s)
            }
            None => (1.0, 0.0),
        }
    }

    /// Determinant of the Jacobian of `(x0, u) ↦ (x0 + F'(u) τ, u)`.
    pub fn jacobian_det(&self, s: f64, t: f64) -> f64 {
        let u = self.point(s, t).u;
        let tau = t - self.t_created;
        let (a, b, c, d) = (1.0, self.flux.d2flux(u) * tau, 0.0, 1.0);
        a * d - b * c
    }

    /// Area of node interval `i`: `a_i + (t - t_ref)(legendre(u_{i+1}) - legendre(u_i))`.
    pub fn segment_area(&self, i: usize, t: f64) -> Result<f64> {
        let n = &self.nodes.nodes;
        if i + 1 >= n.len() {
            return Err(Error::OutOfRange { value: i as f64, lo: 0.0, hi: n.len().saturating_sub(2) as f64 });
        }
        let tau = t - self.nodes.area_t_ref[i];
        Ok(self.nodes.areas[i] + tau * (self.flux.legendre(n[i + 1].u) - self.flux.legendre(n[i].u)))
    }

    /// `∫ u x_s ds` over the segment range.
    pub fn total_area(&self, t: f64) -> f64 {
        self.segments
            .iter()
            .zip(&self.base_areas)
            .map(|(seg, base)| {
                let (ua, ub) = (seg.state(seg.s_start).0, seg.state(seg.s_end).0);
                base + (t - seg.t_ref) * (self.flux.legendre(ub) - self.flux.legendre(ua))
            })
            .sum()
    }

    /// Sum of absolute segment contributions; the natural size of
    /// [`total_area`](Self::total_area) for relative tolerances.
    pub fn area_scale(&self, t: f64) -> f64 {
        let s: f64 = self
            .segments
            .iter()
            .zip(&self.base_areas)
            .map(|(seg, base)| {
                let (ua, ub) = (seg.state(seg.s_start).0, seg.state(seg.s_end).0);
                base.abs() + ((t - seg.t_ref) * (self.flux.legendre(ub) - self.flux.legendre(ua))).abs()
            })
            .sum();
        s.max(1.0)
    }

    /// `∫_{sa}^{sb} u x_s ds`, exact wherever the pieces have closed-form
    /// antiderivatives. Tails contribute `state · Δs`.
    pub fn area_between(&self, sa: f64, sb: f64, t: f64) -> Result<f64> {
        if sa > sb {
            return self.area_between(sb, sa, t).map(|v| -v);
        }
        let (lo, hi) = self.s_range();
        if self.segments.is_empty() {
            let left_part = (sb.min(0.0) - sa).max(0.0);
            let right_part = (sb - sa.max(0.0)).max(0.0);
            return Ok(self.left * left_part + self.right * right_part);
        }
        let mut total = 0.0;
        if sa < lo {
            total += self.left * (sb.min(lo) - sa);
        }
        if sb > hi {
            total += self.right * (sb - sa.max(hi));
        }
        for (seg, base) in self.segments.iter().zip(&self.base_areas) {
            let (a, b) = (sa.max(seg.s_start), sb.min(seg.s_end));
            if a >= b {
                continue;
            }
            let area = if a == seg.s_start && b == seg.s_end { *base } else { seg.base_area(a, b)? };
            let (ua, ub) = (seg.state(a).0, seg.state(b).0);
            total += area + (t - seg.t_ref) * (self.flux.legendre(ub) - self.flux.legendre(ua));
        }
        Ok(total)
    }

    /// First time at which `x_s` vanishes somewhere: the reference time of
    /// any down-jump, else `t_ref - 1/min q` over smooth segments.
    pub fn breaking_time(&self) -> f64 {
        let mut tb = f64::INFINITY;
        for (seg, runs) in self.segments.iter().zip(&self.runs) {
            match seg.is_down_jump() {
                Some(true) => tb = tb.min(seg.t_ref),
                Some(false) => {}
                None => {
                    let qmin = runs.iter().flat_map(|r| [r.q_a, r.q_b]).fold(f64::INFINITY, f64::min);
                    if qmin < 0.0 {
                        tb = tb.min(seg.t_ref - 1.0 / qmin);
                    }
                }
            }
        }
        tb
    }

    /// Maximal `s`-intervals with `x_s < 0` at time `t`, in increasing `s`.
    pub fn overturned_regions(&self, t: f64) -> Vec<OverturnRegion> {
        let mut spans: Vec<(f64, f64, bool)> = Vec::new();
        let push = |lo: f64, hi: f64, is_static: bool, spans: &mut Vec<(f64, f64, bool)>| {
            if let Some(last) = spans.last_mut() {
                if lo <= last.1 {
                    last.1 = last.1.max(hi);
                    last.2 &= is_static;
                    return;
                }
            }
            spans.push((lo, hi, is_static));
        };
        for (seg, runs) in self.segments.iter().zip(&self.runs) {
            let tau = t - seg.t_ref;
            match seg.is_down_jump() {
                Some(true) if tau > 0.0 => push(seg.s_start, seg.s_end, false, &mut spans),
                Some(true) if tau == 0.0 => push(seg.s_start, seg.s_end, true, &mut spans),
                Some(_) => {}
                None if tau > 0.0 => {
                    let c = -1.0 / tau;
                    for r in runs {
                        let (in_a, in_b) = (r.q_a < c, r.q_b < c);
                        if in_a && in_b {
                            push(r.s_a, r.s_b, false, &mut spans);
                        } else if in_a || in_b {
                            let (lo, hi) = bisect_predicate(
                                |s| Ok((seg.q(&self.flux, s) < c) == in_b),
                                r.s_a,
                                r.s_b,
                                0.0,
                            )
                            .expect("predicate is infallible");
                            if in_b {
                                push(hi, r.s_b, false, &mut spans);
                            } else {
                                push(r.s_a, lo, false, &mut spans);
                            }
                        }
                    }
                }
                None => {}
            }
        }
        spans
            .into_iter()
            .map(|(s_lo, s_hi, is_static)| OverturnRegion {
                s_lo,
                s_hi,
                x_fold_left: self.x_at(s_hi, t),
                x_fold_right: self.x_at(s_lo, t),
                is_static,
            })
            .collect()
    }

    /// Replaces each spanned arc `[s0, s1]` by a vertical segment at `x`
    /// created at time `t`, keeping the parametrization of everything else.
    pub fn reinitialize(&self, t: f64, cuts: &[Cut]) -> Result<Self> {
        let mut cuts: Vec<Cut> = cuts.to_vec();
        cuts.sort_by(|a, b| a.s0.total_cmp(&b.s0));
        for w in cuts.windows(2) {
            if w[0].s1 > w[1].s0 {
                return Err(Error::ProjectionInconsistent(format!(
                    "overlapping cuts [{}, {}] and [{}, {}]",
                    w[0].s0, w[0].s1, w[1].s0, w[1].s1
                )));
            }
        }
        if cuts.is_empty() {
            let mut c = self.clone();
            c.t_created = t;
            return Ok(c);
        }
        let (lo, _) = self.s_range();
        // materialise the tail stretches a cut reaches into as constant pieces
        let mut segments = self.segments.clone();
        let mut runs = self.runs.clone();
        let first_cut = cuts[0].s0;
        let last_cut = cuts.last().unwrap().s1;
        if segments.is_empty() {
            let (a, b) = (first_cut.min(0.0), last_cut.max(0.0));
            let tail = tail_segment(a, b, self.point(a, 0.0).x, self.left);
            runs.push(monotone_runs(&tail, &self.flux));
            segments.push(tail);
        }
        if first_cut < lo {
            let tail = tail_segment(first_cut, lo, self.point(first_cut, 0.0).x, self.left);
            runs.insert(0, monotone_runs(&tail, &self.flux));
            segments.insert(0, tail);
        }
        let cur_hi = segments.last().unwrap().s_end;
        if last_cut > cur_hi {
            let tail = tail_segment(cur_hi, last_cut, self.point(cur_hi, 0.0).x, self.right);
            runs.push(monotone_runs(&tail, &self.flux));
            segments.push(tail);
        }

        let mut out_segs = Vec::new();
        let mut out_runs = Vec::new();
        for (seg, seg_runs) in segments.iter().zip(&runs) {
            let mut parts = vec![(seg.s_start, seg.s_end)];
            for c in &cuts {
                parts = parts
                    .into_iter()
                    .flat_map(|(a, b)| {
                        let mut kept = Vec::with_capacity(2);
                        if c.s1 <= a || c.s0 >= b {
                            kept.push((a, b));
                        } else {
                            if c.s0 > a {
                                kept.push((a, c.s0));
                            }
                            if c.s1 < b {
                                kept.push((c.s1, b));
                            }
                        }
                        kept
                    })
                    .collect();
            }
            for (a, b) in parts {
                if b > a {
                    let clipped = clip_segment(seg, a, b);
                    out_runs.push(clip_runs(seg_runs, &clipped, &self.flux));
                    out_segs.push(clipped);
                }
            }
        }
        for c in &cuts {
            let idx = out_segs.partition_point(|s| s.s_end <= c.s0);
            out_segs.insert(
                idx,
                Segment {
                    s_start: c.s0,
                    s_end: c.s1,
                    t_ref: t,
                    kind: SegmentKind::Vertical { x0: c.x, u_start: c.u_left, u_end: c.u_right },
                },
            );
            out_runs.insert(idx, Vec::new());
        }
        let nodes = nodes_from_segments(&out_segs, self.n_per_piece, self.k_per_jump)?;
        Self::assemble(
            self.flux.clone(),
            out_segs,
            out_runs,
            self.left,
            self.right,
            self.anchor,
            nodes,
            self.n_per_piece,
            self.k_per_jump,
            t,
        )
    }
}

/// An arc `[s0, s1]` to be replaced by a vertical line at `x` between the
/// states `u_left` and `u_right`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Cut {
    pub s0: f64,
    pub s1: f64,
    pub x: f64,
    pub u_left: f64,
    pub u_right: f64,
}

/// A stretch of constant tail as an explicit smooth piece (`t_ref = 0`).
fn tail_segment(s_start: f64, s_end: f64, x_start_at_0: f64, state: f64) -> Segment {
    Segment {
        s_start,
        s_end,
        t_ref: 0.0,
        kind: SegmentKind::Smooth {
            func: Arc::new(PieceFunction::Polynomial(crate::interpolate::Polynomial::constant(state))),
            x0_start: x_start_at_0,
        },
    }
}

fn clip_segment(seg: &Segment, a: f64, b: f64) -> Segment {
    let kind = match &seg.kind {
        SegmentKind::Smooth { func, .. } => SegmentKind::Smooth { func: func.clone(), x0_start: seg.x0_at(a) },
        SegmentKind::Vertical { x0, .. } => {
            SegmentKind::Vertical { x0: *x0, u_start: seg.state(a).0, u_end: seg.state(b).0 }
        }
    };
    Segment { s_start: a, s_end: b, t_ref: seg.t_ref, kind }
}

/// Characteristic flow of a node.
pub fn flow_position(flux: &FluxModel, node: &Node, t: f64) -> (f64, f64) {
    (node.x0 + flux.dflux(node.u) * (t - node.t_ref), node.u)
}
