//! Flux functions `F(u)` and every `F`-derived quantity the solver needs.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::interpolate::bracketed_newton;

/// Jumps smaller than this are treated as continuous.
pub const DEGENERATE_JUMP: f64 = 1e-12;

pub type ScalarFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// A user-supplied flux. `inv_dflux` and `legendre` are optional; when absent
/// they are derived (numeric inversion of `F'`, and `u F'(u) - F(u)`).
#[derive(Clone)]
pub struct CustomFlux {
    pub flux: ScalarFn,
    pub dflux: ScalarFn,
    pub d2flux: ScalarFn,
    pub inv_dflux: Option<ScalarFn>,
    pub legendre: Option<ScalarFn>,
}

#[derive(Clone)]
enum FluxKind {
    /// `u^2 / 2`
    Burgers,
    /// `a u^2 / 2 + b u`, `a > 0`
    QuadraticLinear { a: f64, b: f64 },
    /// `c e^u`, `c > 0`
    Exponential { c: f64 },
    Custom(CustomFlux),
}

/// Uniformly convex flux with closed-form (or numerically backed) derivative,
/// inverse derivative and Legendre term. Immutable once built.
#[derive(Clone)]
pub struct FluxModel {
    name: String,
    kind: FluxKind,
    /// State interval used to seed numeric inversion of `F'`.
    state_interval: (f64, f64),
}

impl fmt::Debug for FluxModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FluxModel").field("name", &self.name).finish()
    }
}

/// Result of sampling `F''` over a state interval.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConvexityCheck {
    pub alpha_estimate: f64,
    pub ok: bool,
}

impl FluxModel {
    pub fn burgers() -> Self {
        Self::with_kind("burgers", FluxKind::Burgers)
    }

    pub fn quadratic_linear(a: f64, b: f64) -> Result<Self> {
        if !(a > 0.0) || !b.is_finite() {
            return Err(Error::Config(format!("quadratic-linear flux needs a > 0, got a = {a}, b = {b}")));
        }
        Ok(Self::with_kind("quadratic-linear", FluxKind::QuadraticLinear { a, b }))
    }

    pub fn exponential(c: f64) -> Result<Self> {
        if !(c > 0.0) || !c.is_finite() {
            return Err(Error::Config(format!("exponential flux needs c > 0, got {c}")));
        }
        Ok(Self::with_kind("exponential", FluxKind::Exponential { c }))
    }

    pub fn custom(name: impl Into<String>, bundle: CustomFlux, state_interval: (f64, f64)) -> Self {
        Self { name: name.into(), kind: FluxKind::Custom(bundle), state_interval }
    }

    /// Built-in flux by name: `burgers`, `quadratic-linear` (`[a, b]`,
    /// default `[1, 1]`) or `exponential` (`[c]`, default `[1]`).
    pub fn by_name(name: &str, coefficients: &[f64]) -> Result<Self> {
        let arity = |n: usize| {
            if coefficients.len() > n {
                Err(Error::Config(format!("flux `{name}` takes at most {n} coefficients, got {}", coefficients.len())))
            } else {
                Ok(())
            }
        };
        match name {
            "burgers" => {
                arity(0)?;
                Ok(Self::burgers())
            }
            "quadratic-linear" => {
                arity(2)?;
                let a = coefficients.first().copied().unwrap_or(1.0);
                let b = coefficients.get(1).copied().unwrap_or(1.0);
                Self::quadratic_linear(a, b)
            }
            "exponential" => {
                arity(1)?;
                Self::exponential(coefficients.first().copied().unwrap_or(1.0))
            }
            other => Err(Error::Config(format!(
                "unknown flux `{other}` (expected burgers, quadratic-linear or exponential)"
            ))),
        }
    }

    fn with_kind(name: &str, kind: FluxKind) -> Self {
        Self { name: name.to_string(), kind, state_interval: (-1.0, 1.0) }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_state_interval(mut self, lo: f64, hi: f64) -> Self {
        self.state_interval = (lo.min(hi), lo.max(hi));
        self
    }

    pub fn flux(&self, u: f64) -> f64 {
        match &self.kind {
            FluxKind::Burgers => 0.5 * u * u,
            FluxKind::QuadraticLinear { a, b } => 0.5 * a * u * u + b * u,
            FluxKind::Exponential { c } => c * u.exp(),
            FluxKind::Custom(cf) => (cf.flux)(u),
        }
    }

    /// Characteristic speed `F'(u)`.
    pub fn dflux(&self, u: f64) -> f64 {
        match &self.kind {
            FluxKind::Burgers => u,
            FluxKind::QuadraticLinear { a, b } => a * u + b,
            FluxKind::Exponential { c } => c * u.exp(),
            FluxKind::Custom(cf) => (cf.dflux)(u),
        }
    }

    pub fn d2flux(&self, u: f64) -> f64 {
        match &self.kind {
            FluxKind::Burgers => 1.0,
            FluxKind::QuadraticLinear { a, .. } => *a,
            FluxKind::Exponential { c } => c * u.exp(),
            FluxKind::Custom(cf) => (cf.d2flux)(u),
        }
    }

    /// `F'⁻¹(v)`, closed form when available, otherwise by bracketed Newton.
    pub fn inv_dflux(&self, v: f64) -> f64 {
        match &self.kind {
            FluxKind::Burgers => v,
            FluxKind::QuadraticLinear { a, b } => (v - b) / a,
            FluxKind::Exponential { c } => (v / c).ln(),
            FluxKind::Custom(cf) => match &cf.inv_dflux {
                Some(inv) => inv(v),
                None => self.inv_dflux_auto(v),
            },
        }
    }

    /// `u F'(u) - F(u)`, the state-only part of the time-linear area term.
    pub fn legendre(&self, u: f64) -> f64 {
        match &self.kind {
            FluxKind::Burgers => 0.5 * u * u,
            FluxKind::QuadraticLinear { a, .. } => 0.5 * a * u * u,
            FluxKind::Exponential { c } => c * (u - 1.0) * u.exp(),
            FluxKind::Custom(cf) => match &cf.legendre {
                Some(l) => l(u),
                None => u * (cf.dflux)(u) - (cf.flux)(u),
            },
        }
    }

    pub fn has_closed_form_inverse(&self) -> bool {
        !matches!(&self.kind, FluxKind::Custom(CustomFlux { inv_dflux: None, .. }))
    }

    /// Rankine–Hugoniot speed of a jump from `ul` to `ur`.
    pub fn rh_speed(&self, ul: f64, ur: f64) -> Result<f64> {
        let jump = ul - ur;
        if jump.abs() <= DEGENERATE_JUMP {
            return Err(Error::DegenerateJump { jump: jump.abs(), threshold: DEGENERATE_JUMP });
        }
        Ok((self.flux(ul) - self.flux(ur)) / jump)
    }

    fn inv_dflux_auto(&self, v: f64) -> f64 {
        let (mut lo, mut hi) = self.state_interval;
        let mut width = (hi - lo).max(1.0);
        for _ in 0..200 {
            if self.dflux(lo) <= v && v <= self.dflux(hi) {
                break;
            }
            if self.dflux(lo) > v {
                lo -= width;
            }
            if self.dflux(hi) < v {
                hi += width;
            }
            width *= 2.0;
        }
        inv_dflux_numeric(self, v, (lo, hi)).unwrap_or(f64::NAN)
    }
}

/// Solve `F'(u) = v` for `u` within `bracket` (monotone by convexity).
pub fn inv_dflux_numeric(model: &FluxModel, v: f64, bracket: (f64, f64)) -> Result<f64> {
    let (lo, hi) = bracket;
    let (dlo, dhi) = (model.dflux(lo), model.dflux(hi));
    if !(dlo <= v && v <= dhi) {
        return Err(Error::BracketError { target: v, lo: dlo, hi: dhi });
    }
    bracketed_newton(|u| (model.dflux(u) - v, model.d2flux(u)), lo, hi, 0.0)
}

/// Sample `F''` on `n_samples` equispaced states; `ok` iff the minimum is positive.
pub fn verify_uniform_convexity(model: &FluxModel, interval: (f64, f64), n_samples: usize) -> ConvexityCheck {
    let (lo, hi) = interval;
    let n = n_samples.max(2);
    let alpha = (0..n)
        .map(|i| model.d2flux(lo + (hi - lo) * i as f64 / (n - 1) as f64))
        .fold(f64::INFINITY, f64::min);
    ConvexityCheck { alpha_estimate: alpha, ok: alpha > 0.0 }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn quartic() -> FluxModel {
        FluxModel::custom(
            "quartic",
            CustomFlux {
                flux: Arc::new(|u| u.powi(4)),
                dflux: Arc::new(|u| 4.0 * u.powi(3)),
                d2flux: Arc::new(|u| 12.0 * u * u),
                inv_dflux: None,
                legendre: None,
            },
            (-1.0, 1.0),
        )
    }

    fn cubic_plus() -> FluxModel {
        // F = u^2/2 + u^4/12 (uniformly convex, no closed-form F'^-1)
        FluxModel::custom(
            "convex-quartic",
            CustomFlux {
                flux: Arc::new(|u| 0.5 * u * u + u.powi(4) / 12.0),
                dflux: Arc::new(|u| u + u.powi(3) / 3.0),
                d2flux: Arc::new(|u| 1.0 + u * u),
                inv_dflux: None,
                legendre: None,
            },
            (-2.0, 2.0),
        )
    }

    #[test]
    fn rh_speed_examples() {
        let b = FluxModel::burgers();
        assert_eq!(b.rh_speed(1.0, 0.0).unwrap(), 0.5);
        assert_eq!(b.rh_speed(3.0, 0.0).unwrap(), 1.5);
        assert!(matches!(b.rh_speed(1.0, 1.0), Err(Error::DegenerateJump { .. })));
    }

    #[test]
    fn convexity_examples() {
        let c = verify_uniform_convexity(&FluxModel::burgers(), (-1.0, 1.0), 100);
        assert_eq!(c, ConvexityCheck { alpha_estimate: 1.0, ok: true });
        // 100 samples on [-1, 1] miss 0 exactly, so use an odd count that hits it
        assert!(!verify_uniform_convexity(&quartic(), (-1.0, 1.0), 101).ok);
        let e = verify_uniform_convexity(&FluxModel::exponential(1.0).unwrap(), (0.0, 1.0), 100);
        assert!(e.ok);
        assert_eq!(e.alpha_estimate, 1.0);
    }

    #[test]
    fn numeric_inverse_examples() {
        let b = FluxModel::burgers();
        assert!((inv_dflux_numeric(&b, 0.7, (0.0, 1.0)).unwrap() - 0.7).abs() < 1e-15);
        let ql = FluxModel::quadratic_linear(1.0, 1.0).unwrap();
        assert!((inv_dflux_numeric(&ql, 2.0, (0.0, 3.0)).unwrap() - 1.0).abs() < 1e-15);
        let e = FluxModel::exponential(1.0).unwrap();
        // bisection oracle on e^u - 2
        let (mut lo, mut hi) = (0.0f64, 2.0f64);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid.exp() < 2.0 {
                lo = mid
            } else {
                hi = mid
            }
        }
        let u = inv_dflux_numeric(&e, 2.0, (0.0, 2.0)).unwrap();
        assert!((u - lo).abs() < 1e-15 && (u - 2f64.ln()).abs() < 1e-15);
        assert!(matches!(inv_dflux_numeric(&b, 2.0, (0.0, 1.0)), Err(Error::BracketError { .. })));
    }

    #[test]
    fn custom_flux_falls_back_to_numeric_inverse() {
        let f = cubic_plus();
        assert!(!f.has_closed_form_inverse());
        for &u in &[-3.5, -1.0, 0.0, 0.4, 2.0, 7.0] {
            let back = f.inv_dflux(f.dflux(u));
            assert!((back - u).abs() <= 1e-12 * u.abs().max(1.0), "{u} -> {back}");
        }
    }

    #[test]
    fn by_name_rejects_unknown_and_extra_coefficients() {
        assert!(FluxModel::by_name("burgers", &[]).is_ok());
        assert!(FluxModel::by_name("burgers", &[1.0]).is_err());
        assert!(FluxModel::by_name("cubic", &[]).is_err());
        assert!(FluxModel::by_name("quadratic-linear", &[-1.0, 0.0]).is_err());
        assert_eq!(FluxModel::by_name("quadratic-linear", &[]).unwrap().dflux(1.0), 2.0);
    }

    fn builtins() -> Vec<(FluxModel, (f64, f64))> {
        vec![
            (FluxModel::burgers(), (-5.0, 5.0)),
            (FluxModel::quadratic_linear(2.0, -0.5).unwrap(), (-5.0, 5.0)),
            (FluxModel::exponential(1.0).unwrap(), (-3.0, 3.0)),
            (cubic_plus(), (-3.0, 3.0)),
        ]
    }

    #[test]
    fn inverse_round_trip_on_random_states() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand::rngs::StdRng::seed_from_u64(7);
        for (f, (lo, hi)) in builtins() {
            for _ in 0..1000 {
                let u: f64 = rng.gen_range(lo..hi);
                let back = f.inv_dflux(f.dflux(u));
                assert!((back - u).abs() <= 1e-12 * u.abs().max(1.0), "{}: {u} -> {back}", f.name());
            }
        }
    }

    #[test]
    fn legendre_matches_definition_and_derivative() {
        for (f, (lo, hi)) in builtins() {
            for i in 0..=50 {
                let u = lo + (hi - lo) * i as f64 / 50.0;
                let direct = u * f.dflux(u) - f.flux(u);
                assert!((f.legendre(u) - direct).abs() <= 1e-14 * direct.abs().max(1.0));
                let h = 1e-5;
                let fd = (f.legendre(u + h) - f.legendre(u - h)) / (2.0 * h);
                assert!((fd - u * f.d2flux(u)).abs() <= 1e-6 * (u * f.d2flux(u)).abs().max(1.0));
            }
        }
    }

    proptest! {
        #[test]
        fn rh_speed_is_lax_admissible(a in -3.0f64..3.0, b in -3.0f64..3.0) {
            prop_assume!((a - b).abs() > 1e-6);
            let (ul, ur) = if a > b { (a, b) } else { (b, a) };
            for (f, _) in builtins() {
                let s = f.rh_speed(ul, ur).unwrap();
                prop_assert!(f.dflux(ur) < s && s < f.dflux(ul), "{}: {} < {} < {}", f.name(), f.dflux(ur), s, f.dflux(ul));
            }
        }
    }
}
