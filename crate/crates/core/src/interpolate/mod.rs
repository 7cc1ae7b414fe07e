//! Polynomial machinery shared by the solver: monomial polynomials, Hermite
//! interpolation (function form and parametric form), real-root isolation,
//! scalar bracketed root finding and adaptive Gauss–Kronrod quadrature.

mod hermite;
mod polynomial;
mod quadrature;
mod roots;

pub use hermite::{
    hermite_cubic, hermite_cubic_local, hermite_interpolate, parametric_hermite, parametric_hermite_scaled,
    HermiteNode, ParametricSegment, TangentScaling,
};
pub use polynomial::Polynomial;
pub use quadrature::{adaptive_quadrature, gauss_kronrod_21, MAX_SUBINTERVALS};
pub use roots::{bisect_predicate, bracketed_newton, minimize_golden, poly_roots_in_interval};
