use std::collections::HashMap;
use std::fmt;

use num_traits::{Signed, Zero};

use crate::error::Result;
use crate::linear::{LinearForm, Var, Q};

/// Subcone of the closed positive orthant cut out by `f >= 0` constraints.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Cone {
    pub inequalities: Vec<LinearForm>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sign {
    NonNeg,
    NonPos,
    Indefinite,
}

impl Cone {
    pub fn orthant() -> Self {
        Cone::default()
    }

    pub fn from_ineqs(v: Vec<LinearForm>) -> Self {
        let mut c = Cone::orthant();
        for f in v {
            c.push(f);
        }
        c
    }

    /// Adds `f >= 0`, skipping forms that hold on the whole orthant.
    pub fn push(&mut self, f: LinearForm) {
        if orthant_sign(&f) == Sign::NonNeg {
            return;
        }
        if !self.inequalities.contains(&f) {
            self.inequalities.push(f);
        }
    }

    pub fn intersect(&self, o: &Cone) -> Cone {
        let mut c = self.clone();
        for f in &o.inequalities {
            c.push(f.clone());
        }
        c
    }

    pub fn contains(&self, point: &HashMap<Var, Q>) -> Result<bool> {
        for f in &self.inequalities {
            if f.eval(point)?.is_negative() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn contains_strictly(&self, point: &HashMap<Var, Q>) -> Result<bool> {
        for f in &self.inequalities {
            if !f.eval(point)?.is_positive() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Cheap emptiness test for the interior: a constraint negative on the
    /// open orthant, or a pair `f >= 0`, `-c f >= 0`.
    pub fn is_syntactically_thin(&self) -> bool {
        for (i, f) in self.inequalities.iter().enumerate() {
            if f.is_zero() {
                continue;
            }
            if orthant_sign(f) == Sign::NonPos {
                return true;
            }
            for g in &self.inequalities[i + 1..] {
                if proportional_opposite(f, g) {
                    return true;
                }
            }
        }
        false
    }

    pub fn substitute(&self, m: &HashMap<Var, LinearForm>) -> Cone {
        Cone::from_ineqs(self.inequalities.iter().map(|f| f.substitute(m)).collect())
    }

    pub fn vars(&self) -> Vec<Var> {
        let mut v: Vec<Var> = self.inequalities.iter().flat_map(|f| f.vars()).collect();
        v.sort();
        v.dedup();
        v
    }
}

fn proportional_opposite(f: &LinearForm, g: &LinearForm) -> bool {
    let Some((v, a)) = f.terms().next() else {
        return false;
    };
    let b = g.coeff(v);
    if b.is_zero() || a.signum() == b.signum() {
        return false;
    }
    let r = b / a;
    f.scale(&r) == *g
}

/// Sign of a linear form on the closed positive orthant, from its coefficients.
pub fn orthant_sign(f: &LinearForm) -> Sign {
    let mut pos = f.constant_term().is_positive();
    let mut neg = f.constant_term().is_negative();
    for (_, c) in f.terms() {
        pos |= c.is_positive();
        neg |= c.is_negative();
    }
    match (pos, neg) {
        (_, false) => Sign::NonNeg,
        (false, true) => Sign::NonPos,
        (true, true) => Sign::Indefinite,
    }
}

impl fmt::Display for Cone {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.inequalities.is_empty() {
            return write!(f, "orthant");
        }
        let parts: Vec<String> = self.inequalities.iter().map(|g| format!("{g} >= 0")).collect();
        write!(f, "{}", parts.join(", "))
    }
}

impl fmt::Debug for Cone {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Image of an orthant under a map with nonnegative coefficients,
/// given by the substitution `x -> form(t)`.
#[derive(Clone, Debug, Default)]
pub struct ParamCone {
    pub map: HashMap<Var, LinearForm>,
}

impl ParamCone {
    pub fn new(map: HashMap<Var, LinearForm>) -> Self {
        ParamCone { map }
    }

    /// Decides the sign of `f` on the whole cone by coefficient signs after
    /// substitution. Exact; unmapped variables are orthant coordinates.
    pub fn sign_of(&self, f: &LinearForm) -> Sign {
        orthant_sign(&f.substitute(&self.map))
    }
}

pub fn sign_on_cone(f: &LinearForm, c: &ParamCone) -> Sign {
    c.sign_of(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linear::var;

    fn lf(s: &str) -> LinearForm {
        LinearForm::parse(s).unwrap()
    }

    #[test]
    fn sign_examples() {
        let c = ParamCone::new(
            [(var("e"), lf("t1 + t2")), (var("f"), lf("t1"))].into_iter().collect(),
        );
        assert_eq!(sign_on_cone(&lf("e - f"), &c), Sign::NonNeg);
        let d = ParamCone::new([(var("e"), lf("t1")), (var("f"), lf("t2"))].into_iter().collect());
        assert_eq!(sign_on_cone(&lf("e - f"), &d), Sign::Indefinite);
        assert_eq!(sign_on_cone(&LinearForm::zero(), &d), Sign::NonNeg);
        assert_eq!(sign_on_cone(&lf("f - e - t1"), &c), Sign::NonPos);
    }

    #[test]
    fn thin_cones() {
        let c = Cone::from_ineqs(vec![lf("e - f"), lf("f - e")]);
        assert!(c.is_syntactically_thin());
        let d = Cone::from_ineqs(vec![lf("e - f"), lf("g - f")]);
        assert!(!d.is_syntactically_thin());
        assert!(Cone::from_ineqs(vec![lf("-e - f")]).is_syntactically_thin());
    }
}
