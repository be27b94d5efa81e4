//! Exact polynomials, cones, piecewise polynomials and moment expressions.

mod cone;
mod moment;
mod piecewise;
mod polynomial;

pub use cone::{orthant_sign, sign_on_cone, Cone, ParamCone, Sign};
pub use moment::MomentExpression;
pub use piecewise::{Piece, PiecewisePolynomial};
pub use polynomial::{Homogeneity, Monomial, Polynomial};

use num_traits::ToPrimitive;

use crate::linear::Q;

pub fn q_to_f64(c: &Q) -> f64 {
    c.to_f64().unwrap_or(f64::NAN)
}

pub fn wall_continuity(pp: &PiecewisePolynomial) -> bool {
    pp.wall_continuity()
}

pub fn homogeneous_degree(p: &Polynomial) -> Homogeneity {
    p.homogeneous_degree()
}
