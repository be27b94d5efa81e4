use std::collections::{BTreeSet, HashMap};
use std::fmt;

use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use super::cone::{Cone, ParamCone, Sign};
use super::polynomial::{Homogeneity, Polynomial};
use crate::error::{Error, Result};
use crate::linear::{qf, LinearForm, Var, Q};

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Piece {
    pub cone: Cone,
    pub poly: Polynomial,
}

/// Piecewise polynomial over closed subcones of the orthant.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct PiecewisePolynomial {
    pub pieces: Vec<Piece>,
}

impl PiecewisePolynomial {
    pub fn zero() -> Self {
        Self::from_poly(Polynomial::zero())
    }

    pub fn from_poly(p: Polynomial) -> Self {
        PiecewisePolynomial {
            pieces: vec![Piece {
                cone: Cone::orthant(),
                poly: p,
            }],
        }
    }

    pub fn from_pieces(pieces: Vec<(Cone, Polynomial)>) -> Self {
        let mut out = PiecewisePolynomial { pieces: Vec::new() };
        for (cone, poly) in pieces {
            out.push(cone, poly);
        }
        out
    }

    fn push(&mut self, cone: Cone, poly: Polynomial) {
        if cone.is_syntactically_thin() {
            return;
        }
        let piece = Piece { cone, poly };
        if !self.pieces.contains(&piece) {
            self.pieces.push(piece);
        }
    }

    pub fn is_polynomial(&self) -> bool {
        self.pieces.len() == 1 && self.pieces[0].cone.inequalities.is_empty()
    }

    /// Pointwise sum over the common refinement.
    pub fn add(&self, o: &Self) -> Self {
        let mut out = PiecewisePolynomial { pieces: Vec::new() };
        for a in &self.pieces {
            for b in &o.pieces {
                out.push(a.cone.intersect(&b.cone), a.poly.add(&b.poly));
            }
        }
        out
    }

    pub fn add_poly(&self, p: &Polynomial) -> Self {
        self.map_polys(|q| q.add(p))
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut out = PiecewisePolynomial { pieces: Vec::new() };
        for a in &self.pieces {
            for b in &o.pieces {
                out.push(a.cone.intersect(&b.cone), a.poly.mul(&b.poly));
            }
        }
        out
    }

    pub fn mul_poly(&self, p: &Polynomial) -> Self {
        self.map_polys(|q| q.mul(p))
    }

    pub fn map_polys(&self, f: impl Fn(&Polynomial) -> Polynomial) -> Self {
        PiecewisePolynomial {
            pieces: self
                .pieces
                .iter()
                .map(|pc| Piece {
                    cone: pc.cone.clone(),
                    poly: f(&pc.poly),
                })
                .collect(),
        }
    }

    /// Restricts every piece to `cone`.
    pub fn restrict(&self, cone: &Cone) -> Self {
        let mut out = PiecewisePolynomial { pieces: Vec::new() };
        for a in &self.pieces {
            out.push(a.cone.intersect(cone), a.poly.clone());
        }
        out
    }

    /// Disjoint-support union (caller guarantees the cones tile).
    pub fn union(parts: Vec<PiecewisePolynomial>) -> Self {
        let mut out = PiecewisePolynomial { pieces: Vec::new() };
        for p in parts {
            for pc in p.pieces {
                out.push(pc.cone, pc.poly);
            }
        }
        out
    }

    pub fn eval(&self, point: &HashMap<Var, Q>) -> Result<Option<Q>> {
        for pc in &self.pieces {
            if pc.cone.contains(point)? {
                return Ok(Some(pc.poly.eval(point)?));
            }
        }
        Ok(None)
    }

    /// Values of every piece whose closed cone holds the point.
    pub fn eval_all(&self, point: &HashMap<Var, Q>) -> Result<Vec<Q>> {
        let mut out = Vec::new();
        for pc in &self.pieces {
            if pc.cone.contains(point)? {
                out.push(pc.poly.eval(point)?);
            }
        }
        Ok(out)
    }

    /// Picks the polynomial valid on a whole parametrized cone.
    pub fn select(&self, cone: &ParamCone) -> Result<&Polynomial> {
        let mut indefinite: Option<String> = None;
        for pc in &self.pieces {
            let mut ok = true;
            for f in &pc.cone.inequalities {
                match cone.sign_of(f) {
                    Sign::NonNeg => {}
                    Sign::NonPos => {
                        if !f.substitute(&cone.map).is_zero() {
                            ok = false;
                            break;
                        }
                    }
                    Sign::Indefinite => {
                        ok = false;
                        indefinite.get_or_insert_with(|| format!("{f}"));
                        break;
                    }
                }
            }
            if ok {
                return Ok(&pc.poly);
            }
        }
        Err(match indefinite {
            Some(f) => Error::ConeNotBranchPure(f),
            None => Error::Internal("no piece covers the cone".into()),
        })
    }

    /// Substitutes `v -> f` in polynomials and cones; used for exact limits.
    pub fn substitute(&self, m: &HashMap<Var, LinearForm>) -> Self {
        let mut out = PiecewisePolynomial { pieces: Vec::new() };
        for pc in &self.pieces {
            out.push(pc.cone.substitute(m), pc.poly.substitute_partial(m));
        }
        out
    }

    pub fn homogeneity(&self) -> Vec<Homogeneity> {
        self.pieces.iter().map(|p| p.poly.homogeneous_degree()).collect()
    }

    fn vars(&self) -> BTreeSet<Var> {
        let mut s = BTreeSet::new();
        for pc in &self.pieces {
            s.extend(pc.poly.vars());
            s.extend(pc.cone.vars());
        }
        s
    }

    /// Checks that neighbouring pieces agree on their common walls.
    ///
    /// Candidate walls are opposite inequality pairs. Adjacency is probed by
    /// seeded sampling on the wall; agreement is then exact, by substituting
    /// the solved wall equation into both polynomials.
    pub fn wall_continuity(&self) -> bool {
        self.wall_mismatches().is_empty()
    }

    pub fn wall_mismatches(&self) -> Vec<(usize, usize, LinearForm)> {
        let vars: Vec<Var> = self.vars().into_iter().collect();
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
        let mut bad = Vec::new();
        for i in 0..self.pieces.len() {
            for j in i + 1..self.pieces.len() {
                let (a, b) = (&self.pieces[i], &self.pieces[j]);
                for f in &a.cone.inequalities {
                    let opposite = b
                        .cone
                        .inequalities
                        .iter()
                        .any(|g| proportional(f, g) == Some(false));
                    if !opposite {
                        continue;
                    }
                    let Some((pivot, c)) = f.terms().next().map(|(v, c)| (v, c.clone())) else {
                        continue;
                    };
                    // wall: pivot = -(f - c*pivot)/c
                    let rest = f.sub(&LinearForm::term(pivot, c.clone()));
                    let solved = rest.scale(&-(Q::from_integer(1.into()) / &c));
                    if !adjacent(a, b, f, pivot, &solved, &vars, &mut rng) {
                        continue;
                    }
                    let m: HashMap<Var, LinearForm> = [(pivot, solved)].into_iter().collect();
                    if a.poly.substitute_partial(&m) != b.poly.substitute_partial(&m) {
                        bad.push((i, j, f.clone()));
                    }
                }
            }
        }
        bad
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            self.pieces
                .iter()
                .map(|pc| {
                    let cone: Vec<String> =
                        pc.cone.inequalities.iter().map(|f| f.to_string()).collect();
                    json!({"cone": cone, "poly": pc.poly.to_string(), "terms": pc.poly.to_json()})
                })
                .collect(),
        )
    }
}

/// `Some(true)` when g = c f with c > 0, `Some(false)` when c < 0.
fn proportional(f: &LinearForm, g: &LinearForm) -> Option<bool> {
    let (v, a) = f.terms().next()?;
    let b = g.coeff(v);
    if b.is_zero() {
        return None;
    }
    let r = &b / a;
    if f.scale(&r) == *g {
        Some(r.is_positive())
    } else {
        None
    }
}

fn adjacent(
    a: &Piece,
    b: &Piece,
    wall: &LinearForm,
    pivot: Var,
    solved: &LinearForm,
    vars: &[Var],
    rng: &mut ChaCha8Rng,
) -> bool {
    for _ in 0..400 {
        let mut pt: HashMap<Var, Q> = HashMap::new();
        for &v in vars {
            if v != pivot {
                pt.insert(v, qf(rng.gen_range(1..=60), rng.gen_range(1..=12)));
            }
        }
        for v in solved.vars() {
            pt.entry(v).or_insert_with(|| qf(rng.gen_range(1..=60), rng.gen_range(1..=12)));
        }
        let Ok(x) = solved.eval(&pt) else { continue };
        if !x.is_positive() {
            continue;
        }
        pt.insert(pivot, x);
        let strict = |c: &Cone| {
            c.inequalities.iter().all(|g| {
                if proportional(wall, g).is_some() {
                    return true;
                }
                g.eval(&pt).map(|y| y.is_positive()).unwrap_or(false)
            })
        };
        if strict(&a.cone) && strict(&b.cone) {
            return true;
        }
    }
    false
}

impl fmt::Display for PiecewisePolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_polynomial() {
            return write!(f, "{}", self.pieces[0].poly);
        }
        for (i, pc) in self.pieces.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "[{}] {}", pc.cone, pc.poly)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lf(s: &str) -> LinearForm {
        LinearForm::parse(s).unwrap()
    }
    fn p(s: &str) -> Polynomial {
        Polynomial::parse(s).unwrap()
    }

    #[test]
    fn mismatch_detected() {
        let pp = PiecewisePolynomial::from_pieces(vec![
            (Cone::from_ineqs(vec![lf("x - y")]), p("x^2")),
            (Cone::from_ineqs(vec![lf("y - x")]), p("y^3")),
        ]);
        assert!(!pp.wall_continuity());
        let ok = PiecewisePolynomial::from_pieces(vec![
            (Cone::from_ineqs(vec![lf("x - y")]), p("x*y")),
            (Cone::from_ineqs(vec![lf("y - x")]), p("y^2")),
        ]);
        assert!(ok.wall_continuity());
    }

    #[test]
    fn select_and_limit() {
        let pp = PiecewisePolynomial::from_pieces(vec![
            (Cone::from_ineqs(vec![lf("e - f")]), p("e")),
            (Cone::from_ineqs(vec![lf("f - e")]), p("f")),
        ]);
        let c = ParamCone::new(
            [(crate::linear::var("e"), lf("t1 + t2")), (crate::linear::var("f"), lf("t1"))]
                .into_iter()
                .collect(),
        );
        assert_eq!(pp.select(&c).unwrap(), &p("e"));
        let d = ParamCone::new(
            [(crate::linear::var("e"), lf("t1")), (crate::linear::var("f"), lf("t2"))]
                .into_iter()
                .collect(),
        );
        assert!(matches!(pp.select(&d), Err(Error::ConeNotBranchPure(_))));
        let m = [(crate::linear::var("f"), LinearForm::zero())].into_iter().collect();
        let lim = pp.substitute(&m);
        assert_eq!(lim.pieces.len(), 1);
        assert_eq!(lim.pieces[0].poly, p("e"));
    }
}
