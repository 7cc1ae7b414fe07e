//! Areas and intersections on flowed curves: folds, triple intersections,
//! the signed area about a vertical line, and equal-area cuts.

use crate::curve::ParametricCurve;
pub use crate::curve::OverturnRegion;
use crate::error::{Error, Result};
use crate::interpolate::{adaptive_quadrature, bracketed_newton};

/// Absolute tolerance of each quadrature panel group in [`signed_area_adif`].
pub const ADIF_QUADRATURE_TOL: f64 = 1e-12;

/// Three parameters at which the vertical line `x = X` meets an S-curve.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TripleIntersection {
    pub s0: f64,
    pub s_star: f64,
    pub s1: f64,
    pub x: f64,
}

/// A vertical cut `x(s0) = x(s1) = X` with `∫_{s0}^{s1} u x_s ds = 0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EqualAreaPair {
    pub s0: f64,
    pub s1: f64,
    pub x: f64,
    pub u_left: f64,
    pub u_right: f64,
    /// Indices (inclusive) of the overturned regions spanned by the cut.
    pub first_region: usize,
    pub last_region: usize,
    /// Parametric area between the cut parameters at the returned `X`.
    pub residual: f64,
    /// Admissible range of `X` for this cut.
    pub x_range: (f64, f64),
}

impl EqualAreaPair {
    pub fn spans(&self, region: usize) -> bool {
        self.first_region <= region && region <= self.last_region
    }
}

pub fn find_overturned_regions(curve: &ParametricCurve, t: f64) -> Vec<OverturnRegion> {
    curve.overturned_regions(t)
}

/// Solves `x(s, t) = X` for `s` in `[a, b]`, on which `x` is nondecreasing.
/// Infinite bounds reach into the constant tails.
pub fn branch_crossing(curve: &ParametricCurve, t: f64, x: f64, a: f64, b: f64) -> Result<f64> {
    let (lo, hi) = curve.s_range();
    let a_f = if a.is_finite() { a } else { lo.min(b) };
    let b_f = if b.is_finite() { b } else { hi.max(a_f) };
    let xa = curve.x_at(a_f, t);
    let xb = curve.x_at(b_f, t);
    if x < xa {
        if !a.is_finite() && a_f <= lo {
            return Ok(a_f + (x - xa));
        }
        return Err(no_crossing(x, a, b));
    }
    if x > xb {
        if !b.is_finite() && b_f >= hi {
            return Ok(b_f + (x - xb));
        }
        return Err(no_crossing(x, a, b));
    }
    if x == xa {
        return Ok(a_f);
    }
    if x == xb {
        return Ok(b_f);
    }
    bracketed_newton(
        |s| {
            let p = curve.point(s, t);
            (p.x - x, p.x_s)
        },
        a_f,
        b_f,
        0.0,
    )
}

fn no_crossing(x: f64, a: f64, b: f64) -> Error {
    Error::NotSCurve { x, reason: format!("the branch s ∈ [{a}, {b}] does not reach the line") }
}

/// Monotone stretches of the curve at time `t`: `(s_start, s_end, increasing)`.
fn stretches(regions: &[OverturnRegion]) -> Vec<(f64, f64, bool)> {
    let mut out = Vec::with_capacity(2 * regions.len() + 1);
    let mut prev = f64::NEG_INFINITY;
    for r in regions {
        out.push((prev, r.s_lo, true));
        out.push((r.s_lo, r.s_hi, false));
        prev = r.s_hi;
    }
    out.push((prev, f64::INFINITY, true));
    out
}

/// The three crossings of `x = X` through an S-shaped fold. Fails with
/// `NotSCurve` unless the line meets the whole curve exactly three times,
/// once on each side of `region` and once inside it.
pub fn triple_intersection(
    curve: &ParametricCurve,
    t: f64,
    x: f64,
    region: &OverturnRegion,
) -> Result<TripleIntersection> {
    if !(region.x_fold_left < x && x < region.x_fold_right) {
        return Err(Error::NotSCurve {
            x,
            reason: format!("outside the fold extent [{}, {}]", region.x_fold_left, region.x_fold_right),
        });
    }
    let regions = curve.overturned_regions(t);
    let idx = regions
        .iter()
        .position(|r| r.s_lo == region.s_lo && r.s_hi == region.s_hi)
        .ok_or_else(|| Error::NotSCurve { x, reason: "region is not overturned at this time".into() })?;
    let x_of = |s: f64| if s.is_finite() { curve.x_at(s, t) } else { s };
    let mut crossings = Vec::new();
    for (k, (a, b, inc)) in stretches(&regions).into_iter().enumerate() {
        let (xa, xb) = (x_of(a), x_of(b));
        let hit = if inc { xa <= x && x < xb } else { xb < x && x <= xa };
        if hit {
            crossings.push((k, a, b));
        }
    }
    if crossings.len() != 3 {
        return Err(Error::NotSCurve { x, reason: format!("the line meets the curve {} times", crossings.len()) });
    }
    let mid = 2 * idx + 1;
    if crossings.iter().map(|c| c.0).collect::<Vec<_>>() != [mid - 1, mid, mid + 1] {
        return Err(Error::NotSCurve { x, reason: "crossings are not arranged around the region".into() });
    }
    let s0 = branch_crossing(curve, t, x, crossings[0].1, crossings[0].2)?;
    let s1 = branch_crossing(curve, t, x, crossings[2].1, crossings[2].2)?;
    let s_star = bracketed_newton(
        |s| {
            let p = curve.point(s, t);
            (p.x - x, p.x_s)
        },
        region.s_lo,
        region.s_hi,
        0.0,
    )?;
    Ok(TripleIntersection { s0, s_star, s1, x })
}

/// Signed lobe-area difference about a vertical line,
/// `½∫_{s0}^{s1} (x u_s - x_s u) ds + ½(x*(u0 - u1) + u*(x1 - x0))`
/// with `(x*, u*)` the middle crossing. Equals minus the parametric area
/// between `s0` and `s1`, so it increases with `X`.
pub fn signed_area_adif(curve: &ParametricCurve, t: f64, tri: &TripleIntersection) -> Result<f64> {
    if tri.s0 == tri.s1 {
        return Ok(0.0);
    }
    let integral = parametric_quadrature(curve, t, tri.s0, tri.s1, |p| 0.5 * (p.x * p.u_s - p.x_s * p.u))?;
    let (p0, ps, p1) = (curve.point(tri.s0, t), curve.point(tri.s_star, t), curve.point(tri.s1, t));
    Ok(integral + 0.5 * (ps.x * (p0.u - p1.u) + ps.u * (p1.x - p0.x)))
}

/// Quadrature of a pointwise integrand along `s`, split at segment ends.
fn parametric_quadrature<F>(curve: &ParametricCurve, t: f64, sa: f64, sb: f64, f: F) -> Result<f64>
where
    F: Fn(&crate::curve::CurvePoint) -> f64,
{
    let mut knots = vec![sa];
    let (lo, hi) = curve.s_range();
    for seg in curve.segments() {
        for s in [seg.s_start, seg.s_end] {
            if s > sa && s < sb {
                knots.push(s);
            }
        }
    }
    for s in [lo, hi] {
        if s > sa && s < sb {
            knots.push(s);
        }
    }
    knots.push(sb);
    knots.sort_by(f64::total_cmp);
    knots.dedup();
    let mut total = 0.0;
    for w in knots.windows(2) {
        total += adaptive_quadrature(|s| f(&curve.point(s, t)), w[0], w[1], ADIF_QUADRATURE_TOL)?;
    }
    Ok(total)
}

/// `∫_{sa}^{sb} u x_s ds` at time `t`.
pub fn multivalued_area(curve: &ParametricCurve, t: f64, sa: f64, sb: f64) -> Result<f64> {
    curve.area_between(sa, sb, t)
}

enum GroupOutcome {
    Pair(EqualAreaPair),
    MergeLeft,
    MergeRight,
}

struct GroupSolver<'a> {
    curve: &'a ParametricCurve,
    t: f64,
    regions: &'a [OverturnRegion],
}

impl GroupSolver<'_> {
    fn x(&self, s: f64) -> f64 {
        if s.is_finite() {
            self.curve.x_at(s, self.t)
        } else {
            s
        }
    }

    /// `(G(X), dG/dX, s0, s1)` with `G` the parametric area between the branch crossings.
    fn area(&self, x: f64, bounds: (f64, f64, f64, f64)) -> Result<(f64, f64, f64, f64)> {
        let (left_bound, s_lo, s_hi, right_bound) = bounds;
        let s0 = branch_crossing(self.curve, self.t, x, left_bound, s_lo)?;
        let s1 = branch_crossing(self.curve, self.t, x, s_hi, right_bound)?;
        let g = self.curve.area_between(s0, s1, self.t)?;
        let du = self.curve.point(s1, self.t).u - self.curve.point(s0, self.t).u;
        Ok((g, du, s0, s1))
    }

    fn solve(&self, first: usize, last: usize, left_bound: f64, right_bound: f64) -> Result<GroupOutcome> {
        let s_lo = self.regions[first].s_lo;
        let s_hi = self.regions[last].s_hi;
        let bounds = (left_bound, s_lo, s_hi, right_bound);
        let (xl_fold, xr_fold) = (self.x(s_hi), self.x(s_lo));
        let (xl_bound, xr_bound) = (self.x(left_bound), self.x(right_bound));
        let xl = xl_fold.max(xl_bound);
        let xr = xr_fold.min(xr_bound);
        if xl > xr {
            return Ok(if xl_bound > xr { GroupOutcome::MergeLeft } else { GroupOutcome::MergeRight });
        }
        let pair = |x: f64, g: f64, s0: f64, s1: f64| {
            GroupOutcome::Pair(EqualAreaPair {
                s0,
                s1,
                x,
                u_left: self.curve.point(s0, self.t).u,
                u_right: self.curve.point(s1, self.t).u,
                first_region: first,
                last_region: last,
                residual: g,
                x_range: (xl, xr),
            })
        };
        let (gl, _, s0l, s1l) = self.area(xl, bounds)?;
        if xl == xr {
            return Ok(pair(xl, gl, s0l, s1l));
        }
        if gl < 0.0 {
            if xl == xl_bound && left_bound.is_finite() {
                return Ok(GroupOutcome::MergeLeft);
            }
            return Err(Error::ProjectionInconsistent(format!(
                "parametric area is negative ({gl:e}) at the left end of the fold at X = {xl}"
            )));
        }
        let (gr, _, s0r, s1r) = self.area(xr, bounds)?;
        if gr > 0.0 {
            if xr == xr_bound && right_bound.is_finite() {
                return Ok(GroupOutcome::MergeRight);
            }
            return Err(Error::ProjectionInconsistent(format!(
                "parametric area is positive ({gr:e}) at the right end of the fold at X = {xr}"
            )));
        }
        if gl == 0.0 {
            return Ok(pair(xl, gl, s0l, s1l));
        }
        if gr == 0.0 {
            return Ok(pair(xr, gr, s0r, s1r));
        }
        let mut failure = None;
        let x = bracketed_newton(
            |x| match self.area(x, bounds) {
                Ok((g, du, _, _)) => (g, du),
                Err(e) => {
                    failure.get_or_insert(e);
                    (f64::NAN, f64::NAN)
                }
            },
            xl,
            xr,
            0.0,
        )?;
        if let Some(e) = failure {
            return Err(e);
        }
        let (g, _, s0, s1) = self.area(x, bounds)?;
        Ok(pair(x, g, s0, s1))
    }
}

/// Vertical cuts that turn the flowed curve into a single-valued weak
/// solution, one per discontinuity.
///
/// Each overturned region starts in its own group; groups whose cuts would
/// reach into a neighbour, or whose cuts end up out of order, are merged and
/// re-solved. Within a group the parametric area is strictly decreasing in
/// `X` (its derivative is `u_R - u_L`), so the cut is unique.
pub fn equal_area_pairs(curve: &ParametricCurve, t: f64) -> Result<Vec<EqualAreaPair>> {
    let regions = curve.overturned_regions(t);
    if regions.is_empty() {
        return Ok(Vec::new());
    }
    let solver = GroupSolver { curve, t, regions: &regions };
    let mut groups: Vec<(usize, usize)> = (0..regions.len()).map(|i| (i, i)).collect();
    loop {
        let mut pairs = Vec::with_capacity(groups.len());
        let mut merge = None;
        for j in 0..groups.len() {
            let left_bound = if j == 0 { f64::NEG_INFINITY } else { regions[groups[j - 1].1].s_hi };
            let right_bound = if j + 1 == groups.len() { f64::INFINITY } else { regions[groups[j + 1].0].s_lo };
            match solver.solve(groups[j].0, groups[j].1, left_bound, right_bound)? {
                GroupOutcome::Pair(p) => pairs.push(p),
                GroupOutcome::MergeLeft if j > 0 => {
                    merge = Some(j - 1);
                    break;
                }
                GroupOutcome::MergeRight if j + 1 < groups.len() => {
                    merge = Some(j);
                    break;
                }
                _ => {
                    return Err(Error::ProjectionInconsistent(format!(
                        "fold group {j} has no admissible cut and no neighbour to merge with"
                    )))
                }
            }
        }
        if merge.is_none() {
            merge = pairs.windows(2).position(|w| w[0].s1 > w[1].s0 || w[0].x > w[1].x);
        }
        match merge {
            Some(j) => {
                groups[j].1 = groups[j + 1].1;
                groups.remove(j + 1);
            }
            None => {
                verify_single_valued(&regions, &pairs)?;
                return Ok(pairs);
            }
        }
    }
}

fn verify_single_valued(regions: &[OverturnRegion], pairs: &[EqualAreaPair]) -> Result<()> {
    for w in pairs.windows(2) {
        if w[0].s1 > w[1].s0 || w[0].x > w[1].x {
            return Err(Error::ProjectionInconsistent(format!("cuts at X = {} and X = {} overlap", w[0].x, w[1].x)));
        }
    }
    for (i, r) in regions.iter().enumerate() {
        let covered = pairs.iter().any(|p| p.spans(i) && p.s0 <= r.s_lo && r.s_hi <= p.s1);
        if !covered {
            return Err(Error::ProjectionInconsistent(format!(
                "overturned region [{}, {}] is not removed by any cut",
                r.s_lo, r.s_hi
            )));
        }
    }
    Ok(())
}

/// The cut for a single region, with branches bounded by its neighbours.
/// Fails with `NotSCurve` when the region cannot be cut on its own.
pub fn equal_area_pair_for(curve: &ParametricCurve, t: f64, region: &OverturnRegion) -> Result<EqualAreaPair> {
    let regions = curve.overturned_regions(t);
    let idx = regions
        .iter()
        .position(|r| r.s_lo == region.s_lo && r.s_hi == region.s_hi)
        .ok_or_else(|| Error::NotSCurve { x: region.x_fold_left, reason: "region is not overturned at this time".into() })?;
    let left_bound = if idx == 0 { f64::NEG_INFINITY } else { regions[idx - 1].s_hi };
    let right_bound = regions.get(idx + 1).map_or(f64::INFINITY, |r| r.s_lo);
    let solver = GroupSolver { curve, t, regions: &regions };
    match solver.solve(idx, idx, left_bound, right_bound)? {
        GroupOutcome::Pair(p) => Ok(p),
        _ => Err(Error::NotSCurve {
            x: region.x_fold_left,
            reason: "the cut reaches a neighbouring fold".into(),
        }),
    }
}
