use crate::error::{Error, Result};

use super::Polynomial;

/// Cubic matching values `y0, y1` and slopes `m0, m1` at `x0, x1`.
pub fn hermite_cubic(x0: f64, y0: f64, m0: f64, x1: f64, y1: f64, m1: f64) -> Result<Polynomial> {
    let local = hermite_cubic_local(x0, y0, m0, x1, y1, m1)?;
    Ok(local.shifted(-x0))
}

/// Same cubic, expressed in the local variable `x - x0`.
pub fn hermite_cubic_local(x0: f64, y0: f64, m0: f64, x1: f64, y1: f64, m1: f64) -> Result<Polynomial> {
    let h = x1 - x0;
    if h == 0.0 {
        return Err(Error::CoincidentAbscissae(x0));
    }
    let delta = (y1 - y0) / h;
    let c2 = (3.0 * delta - 2.0 * m0 - m1) / h;
    let c3 = (m0 + m1 - 2.0 * delta) / (h * h);
    Ok(Polynomial::new(vec![y0, m0, c2, c3]))
}

/// Value and slope of an interpolated function at one abscissa.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HermiteNode {
    pub x: f64,
    pub y: f64,
    pub dy: f64,
}

/// Hermite interpolant through value+slope data at `nodes`, returned in the
/// local variable `x - origin`. Degree is `2 * nodes.len() - 1`.
///
/// Built from confluent divided differences, then expanded to monomials.
pub fn hermite_interpolate(nodes: &[HermiteNode], origin: f64, degree_cap: usize) -> Result<Polynomial> {
    let m = nodes.len();
    if m == 0 {
        return Ok(Polynomial::zero());
    }
    if 2 * m - 1 > degree_cap {
        return Err(Error::DegreeCap { degree: 2 * m - 1, cap: degree_cap });
    }
    for (i, a) in nodes.iter().enumerate() {
        for b in &nodes[i + 1..] {
            if a.x == b.x {
                return Err(Error::CoincidentAbscissae(a.x));
            }
        }
    }
    let z: Vec<f64> = nodes.iter().flat_map(|n| [n.x - origin, n.x - origin]).collect();
    let n = z.len();
    // table[k] holds the current column of divided differences
    let mut col: Vec<f64> = nodes.iter().flat_map(|n| [n.y, n.y]).collect();
    let mut coef = vec![col[0]];
    for order in 1..n {
        let mut next = Vec::with_capacity(n - order);
        for i in 0..n - order {
            let dz = z[i + order] - z[i];
            let v = if dz == 0.0 {
                // only possible for order 1 on a doubled node
                nodes[i / 2].dy
            } else {
                (col[i + 1] - col[i]) / dz
            };
            next.push(v);
        }
        coef.push(next[0]);
        col = next;
    }
    // expand Newton form c0 + c1 (x - z0) + c2 (x - z0)(x - z1) + ...
    let mut poly = Polynomial::constant(coef[n - 1]);
    for k in (0..n - 1).rev() {
        poly = &(&poly * &Polynomial::linear(-z[k], 1.0)) + &Polynomial::constant(coef[k]);
    }
    Ok(poly)
}

/// How the tangent vectors handed to [`parametric_hermite_scaled`] are sized.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum TangentScaling {
    /// Keep the directions, rescale both tangents to the chord length.
    #[default]
    ChordLength,
    /// Use the tangents exactly as given (derivatives with respect to the
    /// normalised segment parameter).
    AsGiven,
}

/// Planar cubic segment `(X(s), U(s))`, `s ∈ [0, 1]`, with its parametric
/// area `∫ U X' ds` compared against a recorded target.
#[derive(Clone, Debug, PartialEq)]
pub struct ParametricSegment {
    pub x: Polynomial,
    pub u: Polynomial,
    pub target_area: f64,
    pub area: f64,
    pub area_defect: f64,
    /// `X'(s) <= 0` somewhere on `[0, 1]`.
    pub multivalued: bool,
}

impl ParametricSegment {
    pub fn point(&self, s: f64) -> (f64, f64) {
        (self.x.eval(s), self.u.eval(s))
    }
}

pub fn parametric_hermite(p0: [f64; 2], p1: [f64; 2], v0: [f64; 2], v1: [f64; 2], target_area: f64) -> ParametricSegment {
    parametric_hermite_scaled(p0, p1, v0, v1, target_area, TangentScaling::ChordLength)
}

/// Tangent-matching cubic pair between two points. The segment records its
/// area defect against `target_area` but does not enforce the area.
pub fn parametric_hermite_scaled(
    p0: [f64; 2],
    p1: [f64; 2],
    v0: [f64; 2],
    v1: [f64; 2],
    target_area: f64,
    scaling: TangentScaling,
) -> ParametricSegment {
    let (t0, t1) = match scaling {
        TangentScaling::AsGiven => (v0, v1),
        TangentScaling::ChordLength => {
            let chord = (p1[0] - p0[0]).hypot(p1[1] - p0[1]);
            (rescale(v0, chord), rescale(v1, chord))
        }
    };
    let cubic = |a: f64, b: f64, da: f64, db: f64| {
        hermite_cubic_local(0.0, a, da, 1.0, b, db).expect("unit interval is nondegenerate")
    };
    let x = cubic(p0[0], p1[0], t0[0], t1[0]);
    let u = cubic(p0[1], p1[1], t0[1], t1[1]);
    let area = (&u * &x.derivative()).integrate(0.0, 1.0);

    let dx = x.derivative();
    let mut candidates = vec![0.0, 1.0];
    let c = dx.coeffs();
    if c.len() == 3 && c[2] != 0.0 {
        let vertex = -c[1] / (2.0 * c[2]);
        if vertex > 0.0 && vertex < 1.0 {
            candidates.push(vertex);
        }
    }
    let min_speed = candidates.iter().map(|&s| dx.eval(s)).fold(f64::INFINITY, f64::min);
    let degenerate = p0 == p1 && t0 == [0.0, 0.0] && t1 == [0.0, 0.0];

    ParametricSegment {
        area_defect: (area - target_area).abs(),
        multivalued: !degenerate && min_speed <= 0.0,
        x,
        u,
        target_area,
        area,
    }
}

fn rescale(v: [f64; 2], length: f64) -> [f64; 2] {
    let norm = v[0].hypot(v[1]);
    if norm == 0.0 {
        [0.0, 0.0]
    } else {
        [v[0] / norm * length, v[1] / norm * length]
    }
}
