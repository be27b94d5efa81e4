use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::linear::{fmt_q, parse_q, var, var_cmp, LinearForm, Var, Q};

/// Sparse monomial, sorted by variable id, exponents positive.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Monomial(Vec<(Var, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(v: Var) -> Self {
        Monomial(vec![(v, 1)])
    }

    pub fn from_powers(mut p: Vec<(Var, u32)>) -> Self {
        p.retain(|(_, e)| *e > 0);
        p.sort();
        let mut out: Vec<(Var, u32)> = Vec::with_capacity(p.len());
        for (v, e) in p {
            match out.last_mut() {
                Some((w, f)) if *w == v => *f += e,
                _ => out.push((v, e)),
            }
        }
        Monomial(out)
    }

    pub fn powers(&self) -> &[(Var, u32)] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|(_, e)| e).sum()
    }

    pub fn exponent(&self, v: Var) -> u32 {
        self.0.iter().find(|(w, _)| *w == v).map_or(0, |(_, e)| *e)
    }

    pub fn mul(&self, o: &Monomial) -> Monomial {
        let (a, b) = (&self.0, &o.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((a[i].0, a[i].1 + b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial(out)
    }

    fn by_name(&self) -> Vec<(Var, u32)> {
        let mut p = self.0.clone();
        p.sort_by(|a, b| var_cmp(a.0, b.0));
        p
    }

    /// Graded lexicographic order on names; greater sorts first when printing.
    pub fn grlex_cmp(&self, o: &Monomial) -> Ordering {
        let d = self.degree().cmp(&o.degree());
        if d != Ordering::Equal {
            return d;
        }
        let (a, b) = (self.by_name(), o.by_name());
        for (x, y) in a.iter().zip(b.iter()) {
            if x.0 != y.0 {
                // the monomial using the earlier variable is larger
                return var_cmp(y.0, x.0);
            }
            if x.1 != y.1 {
                return x.1.cmp(&y.1);
            }
        }
        a.len().cmp(&b.len())
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .by_name()
            .iter()
            .map(|(v, e)| if *e == 1 { v.name() } else { format!("{}^{}", v.name(), e) })
            .collect();
        write!(f, "{}", parts.join("*"))
    }
}

/// Exact sparse multivariate polynomial with rational coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Polynomial {
    terms: BTreeMap<Monomial, Q>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Homogeneity {
    Zero,
    Degree(u32),
    Inhomogeneous,
}

impl Polynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Q::one())
    }

    pub fn constant(c: Q) -> Self {
        let mut p = Self::zero();
        p.add_term(Monomial::one(), c);
        p
    }

    pub fn int(n: i64) -> Self {
        Self::constant(crate::linear::q(n))
    }

    pub fn var(v: Var) -> Self {
        let mut p = Self::zero();
        p.add_term(Monomial::var(v), Q::one());
        p
    }

    pub fn named(name: &str) -> Self {
        Self::var(var(name))
    }

    pub fn from_linear(f: &LinearForm) -> Self {
        let mut p = Self::constant(f.constant_term().clone());
        for (v, c) in f.terms() {
            p.add_term(Monomial::var(v), c.clone());
        }
        p
    }

    /// Inverse of `from_linear`; `None` when the degree exceeds one.
    pub fn to_linear(&self) -> Option<LinearForm> {
        let mut f = LinearForm::zero();
        for (m, c) in &self.terms {
            match m.powers() {
                [] => f = f.add(&LinearForm::constant(c.clone())),
                [(v, 1)] => f.add_term(*v, c.clone()),
                _ => return None,
            }
        }
        Some(f)
    }

    pub fn add_term(&mut self, m: Monomial, c: Q) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Q)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &Monomial) -> Q {
        self.terms.get(m).cloned().unwrap_or_else(Q::zero)
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        self.terms
            .keys()
            .flat_map(|m| m.powers().iter().map(|(v, _)| *v))
            .collect()
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut r = self.clone();
        r.add_assign(o);
        r
    }

    pub fn add_assign(&mut self, o: &Self) {
        for (m, c) in &o.terms {
            self.add_term(m.clone(), c.clone());
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        let mut r = self.clone();
        for (m, c) in &o.terms {
            r.add_term(m.clone(), -c.clone());
        }
        r
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Q::one())
    }

    pub fn scale(&self, s: &Q) -> Self {
        if s.is_zero() {
            return Self::zero();
        }
        Polynomial {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c * s)).collect(),
        }
    }

    pub fn scale_int(&self, n: i64) -> Self {
        self.scale(&crate::linear::q(n))
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut acc: HashMap<Monomial, Q> = HashMap::with_capacity(self.len() * o.len());
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                *acc.entry(m1.mul(m2)).or_insert_with(Q::zero) += c1 * c2;
            }
        }
        Polynomial {
            terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut r = Self::one();
        for _ in 0..n {
            r = r.mul(self);
        }
        r
    }

    pub fn product<'a>(it: impl IntoIterator<Item = &'a Polynomial>) -> Self {
        it.into_iter().fold(Self::one(), |a, b| a.mul(b))
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|m| m.degree()).max().unwrap_or(0)
    }

    pub fn homogeneous_degree(&self) -> Homogeneity {
        let mut degs = self.terms.keys().map(|m| m.degree());
        match degs.next() {
            None => Homogeneity::Zero,
            Some(d) => {
                if degs.all(|e| e == d) {
                    Homogeneity::Degree(d)
                } else {
                    Homogeneity::Inhomogeneous
                }
            }
        }
    }

    pub fn degree_in(&self, v: Var) -> u32 {
        self.terms.keys().map(|m| m.exponent(v)).max().unwrap_or(0)
    }

    /// Composition with linear forms; every variable must be mapped.
    pub fn substitute(&self, m: &HashMap<Var, LinearForm>) -> Result<Self> {
        for v in self.vars() {
            if !m.contains_key(&v) {
                return Err(Error::UnmappedVariable(v.name()));
            }
        }
        Ok(self.substitute_partial(m))
    }

    /// Composition; unmapped variables are left alone.
    pub fn substitute_partial(&self, m: &HashMap<Var, LinearForm>) -> Self {
        let pm: HashMap<Var, Polynomial> =
            m.iter().map(|(v, f)| (*v, Polynomial::from_linear(f))).collect();
        self.substitute_poly(&pm)
    }

    pub fn substitute_poly(&self, m: &HashMap<Var, Polynomial>) -> Self {
        let mut cache: HashMap<(Var, u32), Polynomial> = HashMap::new();
        let mut out = Polynomial::zero();
        for (mono, c) in &self.terms {
            let mut keep: Vec<(Var, u32)> = Vec::new();
            let mut acc = Polynomial::constant(c.clone());
            for &(v, e) in mono.powers() {
                match m.get(&v) {
                    Some(p) => {
                        let pw = cache.entry((v, e)).or_insert_with(|| p.pow(e)).clone();
                        acc = acc.mul(&pw);
                    }
                    None => keep.push((v, e)),
                }
            }
            if !keep.is_empty() {
                let mut k = Polynomial::zero();
                k.add_term(Monomial::from_powers(keep), Q::one());
                acc = acc.mul(&k);
            }
            out.add_assign(&acc);
        }
        out
    }

    pub fn rename(&self, f: &dyn Fn(Var) -> Var) -> Self {
        let mut out = Polynomial::zero();
        for (m, c) in &self.terms {
            let p = m.powers().iter().map(|(v, e)| (f(*v), *e)).collect();
            out.add_term(Monomial::from_powers(p), c.clone());
        }
        out
    }

    pub fn eval(&self, point: &HashMap<Var, Q>) -> Result<Q> {
        let mut acc = Q::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (v, e) in m.powers() {
                let x = point.get(v).ok_or_else(|| Error::UnmappedVariable(v.name()))?;
                t *= num_traits::pow(x.clone(), *e as usize);
            }
            acc += t;
        }
        Ok(acc)
    }

    pub fn eval_f64(&self, point: &HashMap<Var, f64>) -> Result<f64> {
        let mut acc = 0.0;
        for (m, c) in &self.terms {
            let mut t = crate::poly::q_to_f64(c);
            for (v, e) in m.powers() {
                let x = point.get(v).ok_or_else(|| Error::UnmappedVariable(v.name()))?;
                t *= x.powi(*e as i32);
            }
            acc += t;
        }
        Ok(acc)
    }

    fn sorted_terms(&self) -> Vec<(&Monomial, &Q)> {
        let mut t: Vec<(&Monomial, &Q)> = self.terms.iter().collect();
        t.sort_by(|a, b| b.0.grlex_cmp(a.0));
        t
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            self.sorted_terms()
                .into_iter()
                .map(|(m, c)| {
                    let powers: Vec<Value> = m
                        .by_name()
                        .iter()
                        .map(|(v, e)| json!([v.name(), e]))
                        .collect();
                    json!({"coeff": fmt_q(c), "powers": powers})
                })
                .collect(),
        )
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let bad = || Error::Parse("bad polynomial term list".into());
        let mut p = Polynomial::zero();
        for t in v.as_array().ok_or_else(bad)? {
            let c = parse_q(t.get("coeff").and_then(Value::as_str).ok_or_else(bad)?)?;
            let mut pw = Vec::new();
            for x in t.get("powers").and_then(Value::as_array).ok_or_else(bad)? {
                let name = x.get(0).and_then(Value::as_str).ok_or_else(bad)?;
                let e = x.get(1).and_then(Value::as_u64).ok_or_else(bad)?;
                pw.push((var(name), e as u32));
            }
            p.add_term(Monomial::from_powers(pw), c);
        }
        Ok(p)
    }

    /// Parses the text form produced by `Display`.
    pub fn parse(s: &str) -> Result<Self> {
        let src = s.replace(' ', "");
        let bad = || Error::Parse(format!("bad polynomial '{s}'"));
        if src.is_empty() {
            return Err(bad());
        }
        let mut out = Polynomial::zero();
        let mut chunks: Vec<(bool, String)> = Vec::new();
        let mut cur = String::new();
        let mut neg = false;
        for (i, ch) in src.chars().enumerate() {
            if ch == '+' || ch == '-' {
                if i == 0 {
                    neg = ch == '-';
                    continue;
                }
                chunks.push((neg, std::mem::take(&mut cur)));
                neg = ch == '-';
            } else {
                cur.push(ch);
            }
        }
        chunks.push((neg, cur));
        for (neg, chunk) in chunks {
            if chunk.is_empty() {
                return Err(bad());
            }
            let mut coef = Q::one();
            let mut powers = Vec::new();
            for f in chunk.split('*') {
                if f.is_empty() {
                    return Err(bad());
                }
                if f.starts_with(|c: char| c.is_ascii_digit()) {
                    coef *= parse_q(f)?;
                } else {
                    let (name, e) = match f.split_once('^') {
                        Some((n, e)) => (n, e.parse::<u32>().map_err(|_| bad())?),
                        None => (f, 1),
                    };
                    powers.push((var(name), e));
                }
            }
            if neg {
                coef = -coef;
            }
            out.add_term(Monomial::from_powers(powers), coef);
        }
        Ok(out)
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.sorted_terms().into_iter().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            let body = if m.powers().is_empty() {
                fmt_q(&a)
            } else if a.is_one() {
                m.to_string()
            } else {
                format!("{}*{}", fmt_q(&a), m)
            };
            match (i, neg) {
                (0, true) => write!(f, "-{body}")?,
                (0, false) => write!(f, "{body}")?,
                (_, true) => write!(f, " - {body}")?,
                (_, false) => write!(f, " + {body}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl From<&LinearForm> for Polynomial {
    fn from(f: &LinearForm) -> Self {
        Polynomial::from_linear(f)
    }
}
