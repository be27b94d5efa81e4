use std::collections::HashMap;
use std::fmt;

use num_traits::{Signed, Zero};
use serde_json::{json, Value};

use super::{q_to_f64, PiecewisePolynomial, Polynomial};
use crate::error::{Error, Result};
use crate::linear::{fmt_q, Var, Q};

/// `scale * numerator / sqrt(radicand)`, square root kept formal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MomentExpression {
    pub numerator: PiecewisePolynomial,
    pub radicand: Polynomial,
    pub scale: Q,
}

/// Exact value `scale * num / sqrt(rad)` at a rational point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactMoment {
    pub scaled_numerator: Q,
    pub radicand: Q,
}

impl ExactMoment {
    pub fn to_f64(&self) -> f64 {
        q_to_f64(&self.scaled_numerator) / q_to_f64(&self.radicand).sqrt()
    }
}

impl MomentExpression {
    pub fn eval_exact(&self, point: &HashMap<Var, Q>) -> Result<ExactMoment> {
        let num = self
            .numerator
            .eval(point)?
            .ok_or_else(|| Error::Internal("point outside every piece".into()))?;
        let rad = self.radicand.eval(point)?;
        if !rad.is_positive() {
            return Err(Error::Internal(format!("nonpositive radicand {}", fmt_q(&rad))));
        }
        Ok(ExactMoment {
            scaled_numerator: &self.scale * num,
            radicand: rad,
        })
    }

    pub fn eval_f64(&self, point: &HashMap<Var, Q>) -> Result<f64> {
        Ok(self.eval_exact(point)?.to_f64())
    }

    pub fn is_zero(&self) -> bool {
        self.scale.is_zero() || self.numerator.pieces.iter().all(|p| p.poly.is_zero())
    }

    pub fn to_json(&self) -> Value {
        json!({
            "scale": fmt_q(&self.scale),
            "numerator": self.numerator.to_json(),
            "radicand": self.radicand.to_string(),
            "radicand_terms": self.radicand.to_json(),
        })
    }
}

impl fmt::Display for MomentExpression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} * ({}) / sqrt({})",
            fmt_q(&self.scale),
            self.numerator,
            self.radicand
        )
    }
}
