//! Independent reference solutions: the closed-form triangle wave, exact
//! Riemann solutions, front tracking for piecewise-constant shock data and
//! a first-order Godunov scheme.

use crate::error::{Error, Result};
use crate::flux::{FluxModel, DEGENERATE_JUMP};
use crate::profile::{JumpKind, PiecewiseProfile};

/// Closed-form solution of Burgers' equation for `u0 = x` on `[0, 1)`,
/// zero elsewhere.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TriangleSolution {
    pub t: f64,
    pub shock: f64,
}

impl TriangleSolution {
    pub fn value(&self, x: f64) -> f64 {
        if (0.0..self.shock).contains(&x) {
            x / (1.0 + self.t)
        } else {
            0.0
        }
    }

    /// State just left of the shock.
    pub fn u_left(&self) -> f64 {
        self.shock / (1.0 + self.t)
    }

    pub fn speed(&self) -> f64 {
        0.5 / self.shock
    }
}

pub fn triangle_exact(t: f64) -> TriangleSolution {
    TriangleSolution { t, shock: (1.0 + t).sqrt() }
}

/// Entropy solution of the Riemann problem `(uL, uR)` at `(x, t)`, jump at
/// the origin. Shocks are right-continuous.
pub fn riemann_exact(flux: &FluxModel, u_left: f64, u_right: f64, t: f64, x: f64) -> f64 {
    if (u_left - u_right).abs() <= DEGENERATE_JUMP {
        return u_left;
    }
    if !(t > 0.0) {
        return if x < 0.0 { u_left } else { u_right };
    }
    let v = x / t;
    if u_left > u_right {
        let speed = (flux.flux(u_left) - flux.flux(u_right)) / (u_left - u_right);
        if v < speed {
            u_left
        } else {
            u_right
        }
    } else if v <= flux.dflux(u_left) {
        u_left
    } else if v >= flux.dflux(u_right) {
        u_right
    } else {
        flux.inv_dflux(v)
    }
}

/// One straight front of a front-tracking solution, alive on `[t_birth, t_death)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Front {
    pub id: u64,
    pub t_birth: f64,
    pub x_birth: f64,
    pub t_death: f64,
    pub u_left: f64,
    pub u_right: f64,
    pub speed: f64,
    pub parents: Vec<u64>,
}

impl Front {
    pub fn position(&self, t: f64) -> f64 {
        self.x_birth + self.speed * (t - self.t_birth)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FrontEvent {
    pub t: f64,
    pub x: f64,
    pub parents: [u64; 2],
    pub child: u64,
    pub speed: f64,
}

/// Exact front-tracking history up to `t_end`.
#[derive(Clone, Debug, PartialEq)]
pub struct FrontTracking {
    pub t_end: f64,
    pub left: f64,
    pub right: f64,
    /// Every front ever created, in creation order.
    pub fronts: Vec<Front>,
    pub events: Vec<FrontEvent>,
}

impl FrontTracking {
    /// Fronts alive at `t`, in increasing `x`.
    pub fn alive(&self, t: f64) -> Vec<&Front> {
        let mut out: Vec<&Front> = self.fronts.iter().filter(|f| f.t_birth <= t && t < f.t_death).collect();
        out.sort_by(|a, b| a.position(t).total_cmp(&b.position(t)));
        out
    }

    pub fn value(&self, t: f64, x: f64) -> f64 {
        let alive = self.alive(t);
        match alive.iter().find(|f| x < f.position(t)) {
            Some(f) => f.u_left,
            None => alive.last().map_or(self.left, |f| f.u_right),
        }
    }

    /// `∫ (u(x, t) - u_R) dx` over `[a, ∞)` for `a` left of every front.
    pub fn area_from(&self, t: f64, a: f64) -> f64 {
        let mut area = 0.0;
        let mut x = a;
        for f in self.alive(t) {
            let xf = f.position(t);
            area += (f.u_left - self.right) * (xf - x);
            x = xf;
        }
        area
    }
}

/// Front tracking for piecewise-constant data whose every jump is a
/// down-jump. Collision times are solved in closed form; simultaneous
/// collisions are resolved pairwise from left to right.
pub fn front_tracking_exact(profile: &PiecewiseProfile, flux: &FluxModel, t_end: f64) -> Result<FrontTracking> {
    if !profile.is_piecewise_constant() {
        return Err(Error::UnsupportedData("front tracking needs piecewise-constant data".into()));
    }
    if profile.jumps().iter().any(|j| j.kind == JumpKind::Up) {
        return Err(Error::UnsupportedData("front tracking handles down-jumps only".into()));
    }
    let mut fronts = Vec::new();
    for (i, j) in profile.jumps().iter().enumerate() {
        fronts.push(Front {
            id: i as u64,
            t_birth: 0.0,
            x_birth: j.x,
            t_death: f64::INFINITY,
            u_left: j.u_left,
            u_right: j.u_right,
            speed: flux.rh_speed(j.u_left, j.u_right)?,
            parents: Vec::new(),
        });
    }
    let mut alive: Vec<usize> = (0..fronts.len()).collect();
    let mut events = Vec::new();
    loop {
        // earliest collision among neighbours
        let mut next: Option<(f64, usize)> = None;
        for k in 0..alive.len().saturating_sub(1) {
            let (a, b) = (&fronts[alive[k]], &fronts[alive[k + 1]]);
            if a.speed <= b.speed {
                continue;
            }
            // a.x_birth + a.speed (t - a.t_birth) = b.x_birth + b.speed (t - b.t_birth)
            let num = (b.x_birth - b.speed * b.t_birth) - (a.x_birth - a.speed * a.t_birth);
            let tc = num / (a.speed - b.speed);
            if next.map_or(true, |(tn, _)| tc < tn) {
                next = Some((tc, k));
            }
        }
        let Some((tc, k)) = next else { break };
        if tc > t_end {
            break;
        }
        let (ia, ib) = (alive[k], alive[k + 1]);
        let (a, b) = (&fronts[ia], &fronts[ib]);
        let x = a.position(tc);
        let (u_left, u_right) = (a.u_left, b.u_right);
        let parents = [a.id, b.id];
        fronts[ia].t_death = tc;
        fronts[ib].t_death = tc;
        let id = fronts.len() as u64;
        alive.remove(k + 1);
        if (u_left - u_right).abs() <= DEGENERATE_JUMP {
            alive.remove(k);
            events.push(FrontEvent { t: tc, x, parents, child: id, speed: f64::NAN });
            continue;
        }
        let speed = flux.rh_speed(u_left, u_right)?;
        fronts.push(Front {
            id,
            t_birth: tc,
            x_birth: x,
            t_death: f64::INFINITY,
            u_left,
            u_right,
            speed,
            parents: parents.to_vec(),
        });
        alive[k] = fronts.len() - 1;
        events.push(FrontEvent { t: tc, x, parents, child: id, speed });
    }
    Ok(FrontTracking { t_end, left: profile.left_state(), right: profile.right_state(), fronts, events })
}

/// Cell averages on a uniform grid.
#[derive(Clone, Debug, PartialEq)]
pub struct GodunovSolution {
    pub t: f64,
    pub x_min: f64,
    pub dx: f64,
    pub cells: Vec<f64>,
    pub steps: usize,
    /// `∫ (F(u_left_boundary) - F(u_right_boundary)) dt`, the net inflow.
    pub boundary_inflow: f64,
    pub initial_mass: f64,
}

impl GodunovSolution {
    pub fn center(&self, i: usize) -> f64 {
        self.x_min + (i as f64 + 0.5) * self.dx
    }

    pub fn mass(&self) -> f64 {
        self.cells.iter().sum::<f64>() * self.dx
    }

    /// `|mass - initial mass - inflow|`.
    pub fn mass_defect(&self) -> f64 {
        (self.mass() - self.initial_mass - self.boundary_inflow).abs()
    }

    pub fn value(&self, x: f64) -> f64 {
        let i = ((x - self.x_min) / self.dx).floor();
        let i = i.clamp(0.0, (self.cells.len() - 1) as f64) as usize;
        self.cells[i]
    }

    /// Edge between the two cells with the largest drop `u_i - u_{i+1}`.
    pub fn shock_position(&self) -> Option<f64> {
        let (i, drop) = self
            .cells
            .windows(2)
            .enumerate()
            .map(|(i, w)| (i, w[0] - w[1]))
            .max_by(|a, b| a.1.total_cmp(&b.1))?;
        (drop > 0.0).then(|| self.x_min + (i + 1) as f64 * self.dx)
    }

    /// Edge of the largest drop inside `[a, b]`.
    pub fn shock_position_in(&self, a: f64, b: f64) -> Option<f64> {
        let (i, drop) = self
            .cells
            .windows(2)
            .enumerate()
            .filter(|(i, _)| {
                let e = self.x_min + (i + 1) as f64 * self.dx;
                a <= e && e <= b
            })
            .map(|(i, w)| (i, w[0] - w[1]))
            .max_by(|a, b| a.1.total_cmp(&b.1))?;
        (drop > 0.0).then(|| self.x_min + (i + 1) as f64 * self.dx)
    }

    /// `∑ |u_i - exact(x_i)| dx` with the exact solution sampled at cell centres.
    pub fn l1_error<F: Fn(f64) -> f64>(&self, exact: F) -> f64 {
        self.cells.iter().enumerate().map(|(i, u)| (u - exact(self.center(i))).abs()).sum::<f64>() * self.dx
    }
}

/// First-order Godunov with exact Riemann fluxes and transmissive
/// boundaries on `support ± (max|F'| t_end + 1)`.
pub fn godunov_reference(
    flux: &FluxModel,
    profile: &PiecewiseProfile,
    nx: usize,
    cfl: f64,
    t_end: f64,
) -> Result<GodunovSolution> {
    if nx < 16 {
        return Err(Error::CflViolation(format!("need at least 16 cells, got {nx}")));
    }
    if !(cfl > 0.0 && cfl <= 0.9) {
        return Err(Error::CflViolation(format!("CFL number {cfl} outside (0, 0.9]")));
    }
    if !(t_end >= 0.0) {
        return Err(Error::Config(format!("negative end time {t_end}")));
    }
    let (lo, hi) = profile.state_bounds();
    let max_speed = flux.dflux(lo).abs().max(flux.dflux(hi).abs());
    let (a, b) = profile.support();
    let pad = max_speed * t_end + 1.0;
    let (x_min, x_max) = (a - pad, b + pad);
    let dx = (x_max - x_min) / nx as f64;
    let mut cells = (0..nx)
        .map(|i| {
            let xl = x_min + i as f64 * dx;
            Ok(profile.integral(xl, xl + dx)? / dx)
        })
        .collect::<Result<Vec<f64>>>()?;
    let initial_mass = cells.iter().sum::<f64>() * dx;
    let godunov_flux = |ul: f64, ur: f64| flux.flux(riemann_exact(flux, ul, ur, 1.0, 0.0));
    let mut fluxes = vec![0.0; nx + 1];
    let mut t = 0.0;
    let mut steps = 0;
    let mut inflow = 0.0;
    while t < t_end {
        let speed = cells.iter().map(|&u| flux.dflux(u).abs()).fold(0.0, f64::max);
        let mut dt = if speed > 0.0 { cfl * dx / speed } else { t_end - t };
        if t + dt >= t_end {
            dt = t_end - t;
        }
        fluxes[0] = godunov_flux(cells[0], cells[0]);
        fluxes[nx] = godunov_flux(cells[nx - 1], cells[nx - 1]);
        for i in 1..nx {
            fluxes[i] = godunov_flux(cells[i - 1], cells[i]);
        }
        let r = dt / dx;
        for (i, u) in cells.iter_mut().enumerate() {
            *u -= r * (fluxes[i + 1] - fluxes[i]);
        }
        inflow += dt * (fluxes[0] - fluxes[nx]);
        t += dt;
        steps += 1;
    }
    Ok(GodunovSolution { t: t_end, x_min, dx, cells, steps, boundary_inflow: inflow, initial_mass })
}

/// One rung of a refinement study.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RateRung {
    pub nx: usize,
    pub error: f64,
    /// Observed order against the previous rung.
    pub rate: Option<f64>,
}

/// L1 error of Godunov against the exact Riemann solution at `t_end` for
/// each grid of `ladder`, with observed orders.
pub fn godunov_riemann_rates(
    flux: &FluxModel,
    u_left: f64,
    u_right: f64,
    ladder: &[usize],
    cfl: f64,
    t_end: f64,
) -> Result<Vec<RateRung>> {
    let profile = PiecewiseProfile::new(u_left, u_right, Vec::new(), Some(0.0))?;
    let mut out: Vec<RateRung> = Vec::with_capacity(ladder.len());
    for &nx in ladder {
        let sol = godunov_reference(flux, &profile, nx, cfl, t_end)?;
        let error = sol.l1_error(|x| riemann_exact(flux, u_left, u_right, t_end, x));
        let rate = out.last().map(|p| (p.error / error).ln() / (nx as f64 / p.nx as f64).ln());
        out.push(RateRung { nx, error, rate });
    }
    Ok(out)
}
