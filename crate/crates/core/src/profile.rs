//! Piecewise-smooth initial data `g(x)` and its sampled parametric node set.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::flux::DEGENERATE_JUMP;
use crate::interpolate::{adaptive_quadrature, Polynomial};

/// Absolute tolerance for `∫ g` when no antiderivative is available.
pub const AREA_QUADRATURE_TOL: f64 = 1e-12;
pub const DEFAULT_N_PER_PIECE: usize = 64;
pub const DEFAULT_K_PER_JUMP: usize = 16;

const CONSISTENCY_SAMPLES: usize = 17;
const CONSISTENCY_TOL: f64 = 1e-6;

/// A parsed closed-form expression in the single variable `x`. Constants
/// are written `PI` and `E`.
#[derive(Clone, Debug)]
pub struct Expression {
    source: String,
    expr: exmex::FlatEx<f64>,
    uses_x: bool,
}

impl Expression {
    pub fn parse(source: &str) -> Result<Self> {
        use exmex::Express;
        let expr = exmex::parse::<f64>(source)
            .map_err(|e| Error::SpecError(format!("cannot parse expression `{source}`: {}", e.msg())))?;
        let names = expr.var_names();
        if names.iter().any(|n| n != "x") {
            return Err(Error::SpecError(format!(
                "expression `{source}` uses unknown names {names:?}; only `x` is allowed"
            )));
        }
        let uses_x = !names.is_empty();
        Ok(Self { source: source.to_string(), expr, uses_x })
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn eval(&self, x: f64) -> f64 {
        use exmex::Express;
        let r = if self.uses_x { self.expr.eval(&[x]) } else { self.expr.eval(&[]) };
        r.unwrap_or(f64::NAN)
    }
}

/// The function carried by one smooth piece.
#[derive(Clone)]
pub enum PieceFunction {
    Polynomial(Polynomial),
    Expression { g: Expression, dg: Expression, antiderivative: Option<Expression> },
    /// Library-supplied closures.
    Closure {
        g: crate::flux::ScalarFn,
        dg: crate::flux::ScalarFn,
        antiderivative: Option<crate::flux::ScalarFn>,
    },
}

impl fmt::Debug for PieceFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PieceFunction::Polynomial(p) => write!(f, "Polynomial({p})"),
            PieceFunction::Expression { g, .. } => write!(f, "Expression({})", g.source()),
            PieceFunction::Closure { .. } => f.write_str("Closure"),
        }
    }
}

impl PieceFunction {
    pub fn value(&self, x: f64) -> f64 {
        match self {
            PieceFunction::Polynomial(p) => p.eval(x),
            PieceFunction::Expression { g, .. } => g.eval(x),
            PieceFunction::Closure { g, .. } => g(x),
        }
    }

    pub fn derivative(&self, x: f64) -> f64 {
        match self {
            PieceFunction::Polynomial(p) => p.eval_with_derivative(x).1,
            PieceFunction::Expression { dg, .. } => dg.eval(x),
            PieceFunction::Closure { dg, .. } => dg(x),
        }
    }

    pub fn value_and_derivative(&self, x: f64) -> (f64, f64) {
        match self {
            PieceFunction::Polynomial(p) => p.eval_with_derivative(x),
            _ => (self.value(x), self.derivative(x)),
        }
    }

    pub fn has_antiderivative(&self) -> bool {
        match self {
            PieceFunction::Polynomial(_) => true,
            PieceFunction::Expression { antiderivative, .. } => antiderivative.is_some(),
            PieceFunction::Closure { antiderivative, .. } => antiderivative.is_some(),
        }
    }

    fn antiderivative_at(&self, x: f64) -> Option<f64> {
        match self {
            PieceFunction::Polynomial(p) => Some(p.antiderivative().eval(x)),
            PieceFunction::Expression { antiderivative, .. } => antiderivative.as_ref().map(|a| a.eval(x)),
            PieceFunction::Closure { antiderivative, .. } => antiderivative.as_ref().map(|a| a(x)),
        }
    }

    /// `∫_a^b g`, exact when an antiderivative is known.
    pub fn integral(&self, a: f64, b: f64) -> Result<f64> {
        if a == b {
            return Ok(0.0);
        }
        match self {
            PieceFunction::Polynomial(p) => Ok(p.integrate(a, b)),
            _ => match (self.antiderivative_at(a), self.antiderivative_at(b)) {
                (Some(ga), Some(gb)) => Ok(gb - ga),
                _ => adaptive_quadrature(|x| self.value(x), a, b, AREA_QUADRATURE_TOL),
            },
        }
    }
}

/// One smooth piece on `[x_left, x_right]`.
#[derive(Clone, Debug)]
pub struct Piece {
    pub x_left: f64,
    pub x_right: f64,
    pub func: Arc<PieceFunction>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum JumpKind {
    /// `g(x⁻) > g(x⁺)`: seeds a shock.
    Down,
    /// `g(x⁻) < g(x⁺)`: seeds a rarefaction fan.
    Up,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Jump {
    pub x: f64,
    pub u_left: f64,
    pub u_right: f64,
    pub kind: JumpKind,
}

/// Configuration form of one piece.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case", deny_unknown_fields)]
pub enum PieceSpec {
    Constant {
        domain: [f64; 2],
        value: f64,
    },
    /// `c0 + c1 x`
    Linear {
        domain: [f64; 2],
        coefficients: [f64; 2],
    },
    /// Ascending monomial coefficients in `x`.
    Polynomial {
        domain: [f64; 2],
        coefficients: Vec<f64>,
    },
    Expression {
        domain: [f64; 2],
        expression: String,
        derivative: String,
        #[serde(default)]
        antiderivative: Option<String>,
    },
}

impl PieceSpec {
    pub fn domain(&self) -> [f64; 2] {
        match self {
            PieceSpec::Constant { domain, .. }
            | PieceSpec::Linear { domain, .. }
            | PieceSpec::Polynomial { domain, .. }
            | PieceSpec::Expression { domain, .. } => *domain,
        }
    }

    fn function(&self) -> Result<PieceFunction> {
        Ok(match self {
            PieceSpec::Constant { value, .. } => PieceFunction::Polynomial(Polynomial::constant(*value)),
            PieceSpec::Linear { coefficients: [c0, c1], .. } => PieceFunction::Polynomial(Polynomial::linear(*c0, *c1)),
            PieceSpec::Polynomial { coefficients, .. } => PieceFunction::Polynomial(Polynomial::new(coefficients.clone())),
            PieceSpec::Expression { expression, derivative, antiderivative, .. } => PieceFunction::Expression {
                g: Expression::parse(expression)?,
                dg: Expression::parse(derivative)?,
                antiderivative: antiderivative.as_deref().map(Expression::parse).transpose()?,
            },
        })
    }
}

/// Configuration form of a whole profile: constant tails plus smooth pieces.
/// A profile without pieces is a Riemann datum located at `origin`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProfileSpec {
    pub left: f64,
    pub right: f64,
    #[serde(default)]
    pub pieces: Vec<PieceSpec>,
    #[serde(default)]
    pub origin: Option<f64>,
}

/// Initial condition: left state on `(-∞, x_min)`, contiguous smooth pieces
/// tiling `[x_min, x_max]`, right state beyond.
#[derive(Clone, Debug)]
pub struct PiecewiseProfile {
    pieces: Vec<Piece>,
    left: f64,
    right: f64,
    support: (f64, f64),
    jumps: Vec<Jump>,
}

pub fn build_profile(spec: &ProfileSpec) -> Result<PiecewiseProfile> {
    let mut pieces = Vec::with_capacity(spec.pieces.len());
    for p in &spec.pieces {
        let [a, b] = p.domain();
        pieces.push(Piece { x_left: a, x_right: b, func: Arc::new(p.function()?) });
    }
    PiecewiseProfile::new(spec.left, spec.right, pieces, spec.origin)
}

impl PiecewiseProfile {
    /// Validates tiling and finiteness/consistency of every piece, then
    /// detects jumps at the breakpoints.
    pub fn new(left: f64, right: f64, pieces: Vec<Piece>, origin: Option<f64>) -> Result<Self> {
        if !left.is_finite() || !right.is_finite() {
            return Err(Error::SpecError(format!("tail states must be finite, got {left} and {right}")));
        }
        for (i, p) in pieces.iter().enumerate() {
            if !(p.x_left < p.x_right) || !p.x_left.is_finite() || !p.x_right.is_finite() {
                return Err(Error::SpecError(format!(
                    "piece {i} has an empty or invalid domain [{}, {}]",
                    p.x_left, p.x_right
                )));
            }
            if i > 0 {
                let prev = pieces[i - 1].x_right;
                if p.x_left > prev {
                    return Err(Error::SpecError(format!("gap between pieces {} and {i}: ({prev}, {})", i - 1, p.x_left)));
                }
                if p.x_left < prev {
                    return Err(Error::SpecError(format!(
                        "pieces {} and {i} overlap on [{}, {prev}]",
                        i - 1,
                        p.x_left
                    )));
                }
            }
            check_piece(i, p)?;
        }
        let support = match (pieces.first(), pieces.last()) {
            (Some(f), Some(l)) => (f.x_left, l.x_right),
            _ => {
                let o = match origin {
                    Some(o) => o,
                    None if (left - right).abs() <= DEGENERATE_JUMP => 0.0,
                    None => {
                        return Err(Error::SpecError(
                            "a profile with different tail states and no pieces needs an origin".into(),
                        ))
                    }
                };
                (o, o)
            }
        };
        if !pieces.is_empty() && origin.is_some() {
            return Err(Error::SpecError("origin is only meaningful for profiles without pieces".into()));
        }

        let mut breaks = Vec::new();
        let mut prev_value = left;
        for p in &pieces {
            breaks.push((p.x_left, prev_value, p.func.value(p.x_left)));
            prev_value = p.func.value(p.x_right);
        }
        breaks.push((support.1, prev_value, right));
        let jumps = breaks
            .into_iter()
            .filter(|(_, ul, ur)| (ul - ur).abs() > DEGENERATE_JUMP)
            .map(|(x, u_left, u_right)| Jump {
                x,
                u_left,
                u_right,
                kind: if u_left > u_right { JumpKind::Down } else { JumpKind::Up },
            })
            .collect();
        Ok(Self { pieces, left, right, support, jumps })
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    pub fn left_state(&self) -> f64 {
        self.left
    }

    pub fn right_state(&self) -> f64 {
        self.right
    }

    pub fn support(&self) -> (f64, f64) {
        self.support
    }

    pub fn jumps(&self) -> &[Jump] {
        &self.jumps
    }

    /// Jump located at `x`, if any.
    pub fn jump_at(&self, x: f64) -> Option<&Jump> {
        self.jumps.iter().find(|j| j.x == x)
    }

    /// `g(x)`, right-continuous at breakpoints.
    pub fn value(&self, x: f64) -> f64 {
        if x < self.support.0 {
            return self.left;
        }
        if x >= self.support.1 {
            return self.right;
        }
        let i = self.pieces.partition_point(|p| p.x_right <= x);
        self.pieces[i].func.value(x)
    }

    /// `∫_a^b g`, exact across tails and breakpoints.
    pub fn integral(&self, a: f64, b: f64) -> Result<f64> {
        if a > b {
            return self.integral(b, a).map(|v| -v);
        }
        let (lo, hi) = self.support;
        let mut total = 0.0;
        if a < lo {
            total += self.left * (b.min(lo) - a);
        }
        if b > hi {
            total += self.right * (b - a.max(hi));
        }
        for p in &self.pieces {
            let (l, r) = (a.max(p.x_left), b.min(p.x_right));
            if l < r {
                total += p.func.integral(l, r)?;
            }
        }
        Ok(total)
    }

    /// Largest `|g|` over tails and a sample of every piece.
    pub fn state_bounds(&self) -> (f64, f64) {
        let mut lo = self.left.min(self.right);
        let mut hi = self.left.max(self.right);
        for p in &self.pieces {
            for k in 0..=64 {
                let v = p.func.value(p.x_left + (p.x_right - p.x_left) * k as f64 / 64.0);
                lo = lo.min(v);
                hi = hi.max(v);
            }
        }
        (lo, hi)
    }

    pub fn is_piecewise_constant(&self) -> bool {
        self.pieces
            .iter()
            .all(|p| matches!(&*p.func, PieceFunction::Polynomial(q) if q.degree() == 0))
    }
}

fn check_piece(index: usize, piece: &Piece) -> Result<()> {
    let (a, b) = (piece.x_left, piece.x_right);
    let h = 1e-5 * (b - a).min(1.0);
    for k in 0..CONSISTENCY_SAMPLES {
        let x = a + (b - a) * k as f64 / (CONSISTENCY_SAMPLES - 1) as f64;
        let (g, dg) = piece.func.value_and_derivative(x);
        if !g.is_finite() {
            return Err(Error::NonFiniteError { what: format!("g on piece {index}"), x });
        }
        if !dg.is_finite() {
            return Err(Error::NonFiniteError { what: format!("g' on piece {index}"), x });
        }
        // one-sided near the ends so samples stay inside the domain
        let (xl, xr) = ((x - h).max(a), (x + h).min(b));
        let fd = (piece.func.value(xr) - piece.func.value(xl)) / (xr - xl);
        let scale = 1f64.max(g.abs()).max(dg.abs());
        let one_sided = xl == a || xr == b;
        let tol = if one_sided { 1e-3 * scale } else { CONSISTENCY_TOL * scale };
        if (fd - dg).abs() > tol {
            return Err(Error::SpecError(format!(
                "derivative of piece {index} disagrees with finite differences at x = {x}: {dg} vs {fd}"
            )));
        }
        if piece.func.has_antiderivative() && !matches!(&*piece.func, PieceFunction::Polynomial(_)) {
            let dint = piece.func.integral(xl, xr)? / (xr - xl);
            let g_mid = piece.func.value(0.5 * (xl + xr));
            if (dint - g_mid).abs() > tol {
                return Err(Error::SpecError(format!(
                    "antiderivative of piece {index} disagrees with g at x = {x}: {dint} vs {g_mid}"
                )));
            }
        }
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NodeKind {
    Interior,
    JumpTop,
    Vertical,
    JumpBottom,
}

/// One sample of the parametric curve.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Node {
    pub s: f64,
    pub x0: f64,
    pub u: f64,
    /// `du/ds` on the interval to the right (to the left for the last node).
    pub du: f64,
    pub kind: NodeKind,
    /// Time at which `x0` is the node's abscissa.
    pub t_ref: f64,
}

/// Nodes ordered in `s` plus exact areas `∫ u x0_s ds` of every interval at
/// its reference time.
#[derive(Clone, Debug, Default)]
pub struct NodeSet {
    pub nodes: Vec<Node>,
    pub areas: Vec<f64>,
    /// Reference time of each interval's area.
    pub area_t_ref: Vec<f64>,
}

impl NodeSet {
    pub fn total_area(&self) -> f64 {
        self.areas.iter().sum()
    }
}

/// Samples the profile's parametrization: `s` starts at 0 at the left end of
/// the support, advances by `Δx` along smooth pieces and by `|Δu|` along the
/// vertical segment inserted at each jump.
pub fn sample_nodes(profile: &PiecewiseProfile, n_per_piece: usize, k_per_jump: usize) -> Result<NodeSet> {
    if n_per_piece < 2 || k_per_jump < 2 {
        return Err(Error::SpecError(format!(
            "need at least 2 nodes per piece and per jump, got {n_per_piece} and {k_per_jump}"
        )));
    }
    let segments = crate::curve::segments_from_profile(profile);
    crate::curve::nodes_from_segments(&segments, n_per_piece, k_per_jump)
}
