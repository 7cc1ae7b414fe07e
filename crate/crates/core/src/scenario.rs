//! Scenario files, runs, convergence studies and oracle comparisons, plus
//! the CSV/JSON writers behind them.

use std::fs;
use std::path::Path;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::curve::{ParametricCurve, Side};
use crate::error::{Error, Result};
use crate::flux::FluxModel;
use crate::interpolate::{parametric_hermite_scaled, TangentScaling};
use crate::oracle::{front_tracking_exact, godunov_reference, riemann_exact, triangle_exact, FrontTracking};
use crate::profile::{build_profile, JumpKind, PiecewiseProfile, ProfileSpec, DEFAULT_K_PER_JUMP, DEFAULT_N_PER_PIECE};
use crate::shock::{track_shocks, Mode, Reinit, Track, TrackOptions};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FluxSpec {
    pub name: String,
    #[serde(default)]
    pub coefficients: Vec<f64>,
}

/// Either an explicit list or an evenly spaced range (`step` or `count`).
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    #[serde(default)]
    pub times: Option<Vec<f64>>,
    #[serde(default)]
    pub start: Option<f64>,
    #[serde(default)]
    pub end: Option<f64>,
    #[serde(default)]
    pub step: Option<f64>,
    #[serde(default)]
    pub count: Option<usize>,
}

impl OutputSpec {
    pub fn resolve(&self) -> Result<Vec<f64>> {
        let times = match (&self.times, self.start, self.end, self.step, self.count) {
            (Some(times), None, None, None, None) => times.clone(),
            (None, start, Some(end), Some(step), None) => {
                let start = start.unwrap_or(0.0);
                if !(step > 0.0) {
                    return Err(Error::Config(format!("output.step must be positive, got {step}")));
                }
                even_times(start, end, step)
            }
            (None, start, Some(end), None, Some(count)) => {
                let start = start.unwrap_or(0.0);
                if count < 2 {
                    return Err(Error::Config("output.count must be at least 2".into()));
                }
                (0..count)
                    .map(|i| if i + 1 == count { end } else { start + (end - start) * i as f64 / (count - 1) as f64 })
                    .collect()
            }
            _ => {
                return Err(Error::Config(
                    "output needs either `times`, or `end` with exactly one of `step` and `count`".into(),
                ))
            }
        };
        check_times(&times)?;
        Ok(times)
    }
}

/// `start, start + step, …` up to `end`, with `end` itself as the last entry.
pub fn even_times(start: f64, end: f64, step: f64) -> Vec<f64> {
    let n = ((end - start) / step - 1e-9).ceil().max(0.0) as usize;
    let mut out: Vec<f64> = (0..n).map(|i| start + step * i as f64).collect();
    out.push(end);
    out
}

fn check_times(times: &[f64]) -> Result<()> {
    if times.is_empty() {
        return Err(Error::Config("output times are empty".into()));
    }
    if times.iter().any(|t| !(t.is_finite() && *t >= 0.0)) {
        return Err(Error::Config("output times must be finite and nonnegative".into()));
    }
    if times.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::Config("output times must be strictly increasing".into()));
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SolverSpec {
    pub mode: Mode,
    pub reinit: Reinit,
    pub n_per_piece: usize,
    pub k_per_jump: usize,
    pub appendix_dt: f64,
    pub appendix_order: usize,
}

impl Default for SolverSpec {
    fn default() -> Self {
        let opts = TrackOptions::default();
        Self {
            mode: opts.mode,
            reinit: opts.reinit,
            n_per_piece: DEFAULT_N_PER_PIECE,
            k_per_jump: DEFAULT_K_PER_JUMP,
            appendix_dt: opts.appendix_dt,
            appendix_order: opts.appendix_order,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Tolerances {
    /// Largest accepted area drift relative to the area scale.
    pub conservation: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self { conservation: 1e-12 }
    }
}

/// The on-disk form of a scenario.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub name: String,
    pub flux: FluxSpec,
    pub profile: ProfileSpec,
    pub output: OutputSpec,
    #[serde(default)]
    pub solver: SolverSpec,
    #[serde(default)]
    pub tolerances: Tolerances,
}

/// A validated scenario ready to run.
#[derive(Clone, Debug)]
pub struct Scenario {
    pub name: String,
    pub flux: FluxModel,
    pub profile: PiecewiseProfile,
    pub times: Vec<f64>,
    pub solver: SolverSpec,
    pub tolerances: Tolerances,
}

impl Scenario {
    pub fn from_config(config: &ScenarioConfig) -> Result<Self> {
        let flux = FluxModel::by_name(&config.flux.name, &config.flux.coefficients)?;
        let profile = build_profile(&config.profile).map_err(|e| match e {
            Error::SpecError(msg) => Error::Config(format!("profile: {msg}")),
            other => other,
        })?;
        let times = config.output.resolve()?;
        let s = &config.solver;
        if s.n_per_piece < 2 || s.k_per_jump < 2 {
            return Err(Error::Config("solver.n_per_piece and solver.k_per_jump must be at least 2".into()));
        }
        if !(s.appendix_dt > 0.0) {
            return Err(Error::Config("solver.appendix_dt must be positive".into()));
        }
        if !(config.tolerances.conservation > 0.0) {
            return Err(Error::Config("tolerances.conservation must be positive".into()));
        }
        let (lo, hi) = profile.state_bounds();
        let flux = flux.with_state_interval(lo.min(hi - 1.0), hi.max(lo + 1.0));
        Ok(Self {
            name: config.name.clone(),
            flux,
            profile,
            times,
            solver: config.solver.clone(),
            tolerances: config.tolerances.clone(),
        })
    }

    pub fn from_toml_str(text: &str) -> Result<Self> {
        let config: ScenarioConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        Self::from_config(&config)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Self::from_toml_str(&text).map_err(|e| match e {
            Error::Config(msg) => Error::Config(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    pub fn track_options(&self) -> TrackOptions {
        TrackOptions {
            mode: self.solver.mode,
            reinit: self.solver.reinit,
            appendix_dt: self.solver.appendix_dt,
            appendix_order: self.solver.appendix_order,
            ..TrackOptions::default()
        }
    }

    pub fn curve(&self) -> Result<ParametricCurve> {
        ParametricCurve::from_profile(&self.profile, &self.flux, self.solver.n_per_piece, self.solver.k_per_jump)
    }

    pub fn track(&self) -> Result<Track> {
        track_shocks(&self.curve()?, &self.times, &self.track_options())
    }

    pub fn t_end(&self) -> f64 {
        *self.times.last().expect("validated non-empty")
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CurveSample {
    pub t: f64,
    pub s: f64,
    pub x: f64,
    pub u: f64,
    pub branch: &'static str,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ShockRow {
    pub t: f64,
    pub id: u64,
    #[serde(rename = "X")]
    pub x: f64,
    #[serde(rename = "uL")]
    pub u_left: f64,
    #[serde(rename = "uR")]
    pub u_right: f64,
    pub speed: f64,
    pub provenance: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FrameSummary {
    pub t: f64,
    pub total_area: f64,
    pub expected_area: f64,
    pub drift: f64,
    pub projected_drift: f64,
    pub reinit_drift: Option<f64>,
    pub scale: f64,
    pub shocks: usize,
    pub max_cut_residual: f64,
    pub max_area_defect: f64,
    pub appendix_fallbacks: usize,
    pub appendix_max_residual: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CollisionSummary {
    pub t: f64,
    pub x: f64,
    pub parents: Vec<u64>,
    pub child: u64,
    pub speed: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunSummary {
    pub name: String,
    pub flux: String,
    pub mode: Mode,
    pub reinit: Reinit,
    pub breaking_time: f64,
    pub frames: Vec<FrameSummary>,
    pub collisions: Vec<CollisionSummary>,
    pub max_drift_ratio: f64,
    pub conservation_tolerance: f64,
    pub conservation_ok: bool,
    pub wall_time_s: f64,
}

#[derive(Clone, Debug)]
pub struct RunOutput {
    pub track: Track,
    pub samples: Vec<CurveSample>,
    pub shocks: Vec<ShockRow>,
    pub summary: RunSummary,
}

pub fn run(scenario: &Scenario) -> Result<RunOutput> {
    let clock = Instant::now();
    let curve = scenario.curve()?;
    let breaking_time = curve.breaking_time();
    let track = track_shocks(&curve, &scenario.times, &scenario.track_options())?;
    let mut samples = Vec::new();
    let mut frames = Vec::with_capacity(track.frames.len());
    for frame in &track.frames {
        let c = &track.curves[frame.curve_index];
        for node in &c.nodes().nodes {
            let p = c.point(node.s, frame.t);
            let hidden = frame.view.pairs.iter().any(|q| q.s0 < node.s && node.s < q.s1);
            samples.push(CurveSample {
                t: frame.t,
                s: node.s,
                x: p.x,
                u: p.u,
                branch: if hidden { "overturned" } else { "weak" },
            });
        }
        frames.push(FrameSummary {
            t: frame.t,
            total_area: frame.area,
            expected_area: frame.expected_area,
            drift: frame.drift,
            projected_drift: frame.view_drift,
            reinit_drift: frame.reinit_drift,
            scale: frame.scale,
            shocks: frame.shocks.len(),
            max_cut_residual: frame.view.pairs.iter().map(|p| p.residual.abs()).fold(0.0, f64::max),
            max_area_defect: max_area_defect(c, frame.t)?,
            appendix_fallbacks: frame.appendix_fallbacks,
            appendix_max_residual: frame.appendix_max_residual,
        });
    }
    let shocks = track
        .frames
        .iter()
        .flat_map(|f| f.shocks.iter())
        .map(|s| ShockRow {
            t: s.t,
            id: s.id,
            x: s.x,
            u_left: s.u_left,
            u_right: s.u_right,
            speed: s.speed,
            provenance: s.provenance.to_string(),
        })
        .collect();
    let collisions = track
        .collisions
        .iter()
        .map(|c| CollisionSummary { t: c.t, x: c.x, parents: c.parents.clone(), child: c.child, speed: c.speed })
        .collect();
    let max_drift_ratio = track.max_drift_ratio();
    let summary = RunSummary {
        name: scenario.name.clone(),
        flux: scenario.flux.name().to_string(),
        mode: scenario.solver.mode,
        reinit: scenario.solver.reinit,
        breaking_time,
        frames,
        collisions,
        max_drift_ratio,
        conservation_tolerance: scenario.tolerances.conservation,
        conservation_ok: max_drift_ratio <= scenario.tolerances.conservation,
        wall_time_s: clock.elapsed().as_secs_f64(),
    };
    Ok(RunOutput { track, samples, shocks, summary })
}

/// Largest gap between the exact area of a node interval and the area of
/// its cubic Hermite replacement at time `t`.
pub fn max_area_defect(curve: &ParametricCurve, t: f64) -> Result<f64> {
    let nodes = &curve.nodes().nodes;
    let mut worst: f64 = 0.0;
    for w in nodes.windows(2) {
        let (a, b) = (w[0].s, w[1].s);
        if !(b > a) {
            continue;
        }
        let (pa, pb) = (curve.point(a, t), curve.point(b, t));
        let (xa, ua) = curve.flow_velocity_one_sided(a, t, Side::Right);
        let (xb, ub) = curve.flow_velocity_one_sided(b, t, Side::Left);
        let h = b - a;
        let seg = parametric_hermite_scaled(
            [pa.x, pa.u],
            [pb.x, pb.u],
            [xa * h, ua * h],
            [xb * h, ub * h],
            curve.area_between(a, b, t)?,
            TangentScaling::AsGiven,
        );
        worst = worst.max(seg.area_defect);
    }
    Ok(worst)
}

pub fn write_run(out: &RunOutput, dir: &Path) -> Result<()> {
    fs::create_dir_all(dir)?;
    write_csv(&dir.join("curve_samples.csv"), &out.samples)?;
    write_csv(&dir.join("shocks.csv"), &out.shocks)?;
    write_json(&dir.join("summary.json"), &out.summary)
}

pub fn write_csv<T: Serialize>(path: &Path, rows: &[T]) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    for r in rows {
        w.serialize(r).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let text = serde_json::to_string_pretty(value).map_err(|e| Error::Io(e.to_string()))?;
    fs::write(path, text + "\n")?;
    Ok(())
}

/// Reference solutions the scenario can be checked against.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OracleKind {
    Triangle,
    Riemann,
    FrontTracking,
    Godunov,
}

impl std::str::FromStr for OracleKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "triangle" => Ok(Self::Triangle),
            "riemann" => Ok(Self::Riemann),
            "front-tracking" => Ok(Self::FrontTracking),
            "godunov" => Ok(Self::Godunov),
            other => Err(Error::Config(format!(
                "unknown oracle `{other}` (expected triangle, riemann, front-tracking or godunov)"
            ))),
        }
    }
}

fn is_triangle(s: &Scenario) -> bool {
    let p = &s.profile;
    s.flux.name() == "burgers"
        && p.left_state() == 0.0
        && p.right_state() == 0.0
        && p.pieces().len() == 1
        && p.support() == (0.0, 1.0)
        && [0.0, 0.25, 0.5, 0.75, 0.999].iter().all(|&x| (p.value(x) - x).abs() <= 1e-15)
}

fn is_riemann(s: &Scenario) -> bool {
    s.profile.pieces().is_empty()
}

fn is_front_tracking(s: &Scenario) -> bool {
    s.profile.is_piecewise_constant() && s.profile.jumps().iter().all(|j| j.kind == JumpKind::Down)
}

/// The closed-form oracle matching the scenario's data, if any.
pub fn exact_oracle(s: &Scenario) -> Option<OracleKind> {
    if is_triangle(s) {
        Some(OracleKind::Triangle)
    } else if is_riemann(s) {
        Some(OracleKind::Riemann)
    } else if is_front_tracking(s) {
        Some(OracleKind::FrontTracking)
    } else {
        None
    }
}

fn check_applicable(s: &Scenario, oracle: OracleKind) -> Result<()> {
    let ok = match oracle {
        OracleKind::Triangle => is_triangle(s),
        OracleKind::Riemann => is_riemann(s),
        OracleKind::FrontTracking => is_front_tracking(s),
        OracleKind::Godunov => true,
    };
    if ok {
        Ok(())
    } else {
        Err(Error::NoOracle(format!("the {oracle:?} oracle does not apply to scenario `{}`", s.name)))
    }
}

/// Shock positions and speeds of an exact oracle at `t`, in increasing `x`.
fn exact_shocks(s: &Scenario, oracle: OracleKind, ft: Option<&FrontTracking>, t: f64) -> Result<Vec<(f64, f64)>> {
    Ok(match oracle {
        OracleKind::Triangle => {
            let tri = triangle_exact(t);
            vec![(tri.shock, tri.speed())]
        }
        OracleKind::Riemann => {
            let (ul, ur) = (s.profile.left_state(), s.profile.right_state());
            if ul > ur {
                let speed = s.flux.rh_speed(ul, ur)?;
                vec![(s.profile.support().0 + speed * t, speed)]
            } else {
                Vec::new()
            }
        }
        OracleKind::FrontTracking => {
            let ft = ft.expect("front tracking computed");
            ft.alive(t).iter().map(|f| (f.position(t), f.speed)).collect()
        }
        OracleKind::Godunov => return Err(Error::NoOracle("Godunov has no exact shock set".into())),
    })
}

fn exact_value(s: &Scenario, oracle: OracleKind, ft: Option<&FrontTracking>, t: f64, x: f64) -> f64 {
    match oracle {
        OracleKind::Triangle => triangle_exact(t).value(x),
        OracleKind::Riemann => {
            let origin = s.profile.support().0;
            riemann_exact(&s.flux, s.profile.left_state(), s.profile.right_state(), t, x - origin)
        }
        OracleKind::FrontTracking => ft.expect("front tracking computed").value(t, x),
        OracleKind::Godunov => f64::NAN,
    }
}

/// Largest position gap between matched shock lists (infinite if the
/// counts differ).
fn position_gap(num: &[(f64, f64)], exact: &[(f64, f64)]) -> (f64, f64) {
    if num.len() != exact.len() {
        return (f64::INFINITY, f64::INFINITY);
    }
    num.iter().zip(exact).fold((0.0, 0.0), |(dx, ds), (a, b)| (f64::max(dx, (a.0 - b.0).abs()), f64::max(ds, (a.1 - b.1).abs())))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConvergenceRow {
    pub parameter: f64,
    pub t_end: f64,
    /// Final shock positions, `;`-separated.
    pub shocks: String,
    pub exact: String,
    pub error: f64,
}

fn join(values: &[(f64, f64)]) -> String {
    values.iter().map(|v| v.0.to_string()).collect::<Vec<_>>().join(";")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LadderParameter {
    /// Output (and appendix) time step.
    Dt,
    /// Nodes per smooth piece.
    N,
}

/// Godunov grid used when no exact oracle exists.
pub const GODUNOV_FALLBACK_CELLS: usize = 1 << 16;

/// Error in the final shock positions for each rung of `ladder`.
pub fn convergence(
    scenario: &Scenario,
    parameter: LadderParameter,
    ladder: &[f64],
    godunov_fallback: bool,
) -> Result<Vec<ConvergenceRow>> {
    let oracle = match exact_oracle(scenario) {
        Some(o) => o,
        None if godunov_fallback => OracleKind::Godunov,
        None => {
            return Err(Error::NoOracle(format!(
                "scenario `{}` has no exact solution; request the Godunov fallback",
                scenario.name
            )))
        }
    };
    let t_end = scenario.t_end();
    let t_start = scenario.times[0];
    let ft = match oracle {
        OracleKind::FrontTracking => Some(front_tracking_exact(&scenario.profile, &scenario.flux, t_end)?),
        _ => None,
    };
    let godunov = match oracle {
        OracleKind::Godunov => Some(godunov_reference(&scenario.flux, &scenario.profile, GODUNOV_FALLBACK_CELLS, 0.9, t_end)?),
        _ => None,
    };
    let mut rows = Vec::with_capacity(ladder.len());
    for &value in ladder {
        let mut sc = scenario.clone();
        match parameter {
            LadderParameter::Dt => {
                if !(value > 0.0) {
                    return Err(Error::Config(format!("ladder step must be positive, got {value}")));
                }
                sc.times = even_times(t_start, t_end, value);
                sc.solver.appendix_dt = value;
            }
            LadderParameter::N => {
                if !(value >= 2.0 && value.fract() == 0.0) {
                    return Err(Error::Config(format!("ladder node count must be an integer >= 2, got {value}")));
                }
                sc.solver.n_per_piece = value as usize;
            }
        }
        let track = sc.track()?;
        let last = track.frames.last().expect("non-empty times");
        let num: Vec<(f64, f64)> = last.shocks.iter().map(|s| (s.x, s.speed)).collect();
        let exact = match &godunov {
            Some(g) => num
                .iter()
                .map(|&(x, _)| {
                    let reach = 8.0 * g.dx.max(0.05 * (1.0 + x.abs()));
                    (g.shock_position_in(x - reach, x + reach).unwrap_or(f64::NAN), f64::NAN)
                })
                .collect(),
            None => exact_shocks(scenario, oracle, ft.as_ref(), t_end)?,
        };
        let (error, _) = position_gap(&num, &exact);
        rows.push(ConvergenceRow {
            parameter: value,
            t_end,
            shocks: join(&num),
            exact: join(&exact),
            error,
        });
    }
    Ok(rows)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CompareRow {
    pub t: f64,
    pub l1: f64,
    pub shock_position_delta: f64,
    pub shock_speed_delta: f64,
    pub shocks: usize,
    pub reference_shocks: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CompareReport {
    pub scenario: String,
    pub oracle: OracleKind,
    pub rows: Vec<CompareRow>,
    /// Largest gap between matched collision times.
    pub collision_time_delta: Option<f64>,
    pub collision_position_delta: Option<f64>,
    pub max_drift_ratio: f64,
    /// Godunov grid spacing, when that oracle was used.
    pub reference_dx: Option<f64>,
}

impl CompareReport {
    pub fn max_l1(&self) -> f64 {
        self.rows.iter().map(|r| r.l1).fold(0.0, f64::max)
    }

    pub fn max_position_delta(&self) -> f64 {
        self.rows.iter().map(|r| r.shock_position_delta).fold(0.0, f64::max)
    }
}

impl std::fmt::Display for CompareReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "scenario {} vs {:?}", self.scenario, self.oracle)?;
        writeln!(f, "{:>12} {:>12} {:>12} {:>12} {:>7}", "t", "L1", "dX", "dspeed", "shocks")?;
        for r in &self.rows {
            writeln!(
                f,
                "{:>12.6} {:>12.3e} {:>12.3e} {:>12.3e} {:>3}/{:<3}",
                r.t, r.l1, r.shock_position_delta, r.shock_speed_delta, r.shocks, r.reference_shocks
            )?;
        }
        if let (Some(dt), Some(dx)) = (self.collision_time_delta, self.collision_position_delta) {
            writeln!(f, "collisions: dt* {dt:.3e}, dx* {dx:.3e}")?;
        }
        write!(f, "max area drift / scale {:.3e}", self.max_drift_ratio)
    }
}

/// Points of the uniform grid used for L1 profile errors.
pub const COMPARE_SAMPLES: usize = 2001;

/// Profile and shock errors against an oracle, at every output time for
/// the exact oracles and at the final time for Godunov.
pub fn compare(scenario: &Scenario, oracle: OracleKind, godunov_cells: usize) -> Result<CompareReport> {
    check_applicable(scenario, oracle)?;
    let track = scenario.track()?;
    let t_end = scenario.t_end();
    let ft = match oracle {
        OracleKind::FrontTracking => Some(front_tracking_exact(&scenario.profile, &scenario.flux, t_end)?),
        _ => None,
    };
    let (lo, hi) = scenario.profile.state_bounds();
    let reach = scenario.flux.dflux(lo).abs().max(scenario.flux.dflux(hi).abs()) * t_end + 1.0;
    let (a, b) = scenario.profile.support();
    let (xa, xb) = (a - reach, b + reach);
    let h = (xb - xa) / (COMPARE_SAMPLES - 1) as f64;
    let grid: Vec<f64> = (0..COMPARE_SAMPLES).map(|i| xa + h * i as f64).collect();

    let mut rows = Vec::new();
    let mut reference_dx = None;
    if oracle == OracleKind::Godunov {
        let g = godunov_reference(&scenario.flux, &scenario.profile, godunov_cells, 0.9, t_end)?;
        let frame = track.frames.last().expect("non-empty times");
        let curve = &track.curves[frame.curve_index];
        let mut l1 = 0.0;
        for &x in &grid {
            l1 += (frame.view.value_at(curve, x)? - g.value(x)).abs() * h;
        }
        let mut delta: f64 = 0.0;
        for s in &frame.shocks {
            let w = 8.0 * g.dx.max(0.05 * (1.0 + s.x.abs()));
            let xg = g.shock_position_in(s.x - w, s.x + w).unwrap_or(f64::INFINITY);
            delta = delta.max((s.x - xg).abs());
        }
        rows.push(CompareRow {
            t: t_end,
            l1,
            shock_position_delta: delta,
            shock_speed_delta: f64::NAN,
            shocks: frame.shocks.len(),
            reference_shocks: frame.shocks.len(),
        });
        reference_dx = Some(g.dx);
    } else {
        for frame in &track.frames {
            let curve = &track.curves[frame.curve_index];
            let mut l1 = 0.0;
            for &x in &grid {
                l1 += (frame.view.value_at(curve, x)? - exact_value(scenario, oracle, ft.as_ref(), frame.t, x)).abs() * h;
            }
            let exact = exact_shocks(scenario, oracle, ft.as_ref(), frame.t)?;
            let num: Vec<(f64, f64)> = frame.shocks.iter().map(|s| (s.x, s.speed)).collect();
            let (dx, ds) = position_gap(&num, &exact);
            rows.push(CompareRow {
                t: frame.t,
                l1,
                shock_position_delta: dx,
                shock_speed_delta: ds,
                shocks: num.len(),
                reference_shocks: exact.len(),
            });
        }
    }
    let (collision_time_delta, collision_position_delta) = match &ft {
        Some(ft) => {
            let exact: Vec<_> = ft.events.iter().filter(|e| e.t <= t_end).collect();
            if exact.len() == track.collisions.len() && !exact.is_empty() {
                let dt = exact.iter().zip(&track.collisions).map(|(e, c)| (e.t - c.t).abs()).fold(0.0, f64::max);
                let dx = exact.iter().zip(&track.collisions).map(|(e, c)| (e.x - c.x).abs()).fold(0.0, f64::max);
                (Some(dt), Some(dx))
            } else if exact.is_empty() && track.collisions.is_empty() {
                (None, None)
            } else {
                (Some(f64::INFINITY), Some(f64::INFINITY))
            }
        }
        None => (None, None),
    };
    Ok(CompareReport {
        scenario: scenario.name.clone(),
        oracle,
        rows,
        collision_time_delta,
        collision_position_delta,
        max_drift_ratio: track.max_drift_ratio(),
        reference_dx,
    })
}
