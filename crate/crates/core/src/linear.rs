//! Formal variables and rational linear forms.
//!
//! Variables are interned in a process-wide append-only registry. Ids depend
//! on registration order, so anything printed sorts by name instead.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use once_cell::sync::Lazy;
use parking_lot::RwLock;

use crate::error::{Error, Result};

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qf(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Var(pub u32);

struct Registry {
    names: Vec<String>,
    ids: HashMap<String, u32>,
}

static REGISTRY: Lazy<RwLock<Registry>> = Lazy::new(|| {
    RwLock::new(Registry {
        names: Vec::new(),
        ids: HashMap::new(),
    })
});

/// Interns `name`, returning the same variable for the same name.
pub fn var(name: &str) -> Var {
    if let Some(&id) = REGISTRY.read().ids.get(name) {
        return Var(id);
    }
    let mut reg = REGISTRY.write();
    if let Some(&id) = reg.ids.get(name) {
        return Var(id);
    }
    let id = reg.names.len() as u32;
    reg.names.push(name.to_string());
    reg.ids.insert(name.to_string(), id);
    Var(id)
}

impl Var {
    pub fn name(self) -> String {
        REGISTRY.read().names[self.0 as usize].clone()
    }
}

impl fmt::Debug for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name())
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name())
    }
}

/// Natural order on names: `t2 < t10`.
pub fn natural_cmp(a: &str, b: &str) -> Ordering {
    fn split(s: &str) -> (&str, Option<u64>) {
        let cut = s.trim_end_matches(|c: char| c.is_ascii_digit()).len();
        let (head, tail) = s.split_at(cut);
        (head, tail.parse().ok())
    }
    let (ha, na) = split(a);
    let (hb, nb) = split(b);
    ha.cmp(hb).then(na.cmp(&nb)).then(a.cmp(b))
}

pub fn var_cmp(a: Var, b: Var) -> Ordering {
    if a == b {
        return Ordering::Equal;
    }
    let reg = REGISTRY.read();
    natural_cmp(&reg.names[a.0 as usize], &reg.names[b.0 as usize])
}

pub fn fmt_q(c: &Q) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

pub fn parse_q(s: &str) -> Result<Q> {
    let s = s.trim();
    let bad = || Error::Parse(format!("bad rational '{s}'"));
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        Ok(Q::new(n, d))
    } else if let Some((i, f)) = s.split_once('.') {
        let digits = format!("{i}{f}");
        let n: BigInt = digits.parse().map_err(|_| bad())?;
        let d = num_traits::pow(BigInt::from(10), f.len());
        Ok(Q::new(n, d))
    } else {
        Ok(Q::from_integer(s.parse().map_err(|_| bad())?))
    }
}

/// Parses `a=1,b=3/2` into a point.
pub fn parse_assignment(s: &str) -> Result<HashMap<Var, Q>> {
    let mut out = HashMap::new();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (k, v) = part
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("expected name=value, got '{part}'")))?;
        out.insert(var(k.trim()), parse_q(v)?);
    }
    Ok(out)
}

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct LinearForm {
    coeffs: BTreeMap<Var, Q>,
    constant: Q,
}

impl LinearForm {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: Q) -> Self {
        LinearForm {
            coeffs: BTreeMap::new(),
            constant: c,
        }
    }

    pub fn var(v: Var) -> Self {
        Self::term(v, Q::one())
    }

    pub fn named(name: &str) -> Self {
        Self::var(var(name))
    }

    pub fn term(v: Var, c: Q) -> Self {
        let mut f = Self::zero();
        f.add_term(v, c);
        f
    }

    pub fn add_term(&mut self, v: Var, c: Q) {
        if c.is_zero() {
            return;
        }
        let e = self.coeffs.entry(v).or_insert_with(Q::zero);
        *e += c;
        if e.is_zero() {
            self.coeffs.remove(&v);
        }
    }

    pub fn coeff(&self, v: Var) -> Q {
        self.coeffs.get(&v).cloned().unwrap_or_else(Q::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (Var, &Q)> {
        self.coeffs.iter().map(|(v, c)| (*v, c))
    }

    pub fn constant_term(&self) -> &Q {
        &self.constant
    }

    pub fn vars(&self) -> Vec<Var> {
        self.coeffs.keys().copied().collect()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty() && self.constant.is_zero()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut r = self.clone();
        for (v, c) in &o.coeffs {
            r.add_term(*v, c.clone());
        }
        r.constant += &o.constant;
        r
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(&-Q::one()))
    }

    pub fn scale(&self, s: &Q) -> Self {
        if s.is_zero() {
            return Self::zero();
        }
        LinearForm {
            coeffs: self.coeffs.iter().map(|(v, c)| (*v, c * s)).collect(),
            constant: &self.constant * s,
        }
    }

    pub fn eval(&self, point: &HashMap<Var, Q>) -> Result<Q> {
        let mut acc = self.constant.clone();
        for (v, c) in &self.coeffs {
            let x = point
                .get(v)
                .ok_or_else(|| Error::UnmappedVariable(v.name()))?;
            acc += c * x;
        }
        Ok(acc)
    }

    /// Replaces variables by linear forms; unmapped variables stay.
    pub fn substitute(&self, m: &HashMap<Var, LinearForm>) -> Self {
        let mut r = Self::constant(self.constant.clone());
        for (v, c) in &self.coeffs {
            match m.get(v) {
                Some(f) => r = r.add(&f.scale(c)),
                None => r.add_term(*v, c.clone()),
            }
        }
        r
    }

    /// True when nonnegative on the closed orthant and positive on the open one.
    pub fn is_positive_on_orthant(&self) -> bool {
        !self.constant.is_negative()
            && self.coeffs.values().all(|c| c.is_positive())
            && (!self.coeffs.is_empty() || self.constant.is_positive())
    }

    /// Parses sums like `t1`, `3/2`, `1/2*t3 + t4 - 2`.
    pub fn parse(s: &str) -> Result<Self> {
        let src = s.replace(' ', "");
        if src.is_empty() {
            return Err(Error::Parse("empty linear form".into()));
        }
        let mut out = Self::zero();
        let mut chunks: Vec<(bool, String)> = Vec::new();
        let mut cur = String::new();
        let mut neg = false;
        for (i, ch) in src.chars().enumerate() {
            if (ch == '+' || ch == '-') && i > 0 {
                chunks.push((neg, std::mem::take(&mut cur)));
                neg = ch == '-';
            } else if ch == '-' && i == 0 {
                neg = true;
            } else if ch == '+' && i == 0 {
            } else {
                cur.push(ch);
            }
        }
        chunks.push((neg, cur));
        for (neg, chunk) in chunks {
            if chunk.is_empty() {
                return Err(Error::Parse(format!("bad linear form '{s}'")));
            }
            let sign = if neg { -Q::one() } else { Q::one() };
            let (coef, name) = match chunk.split_once('*') {
                Some((c, n)) => (parse_q(c)?, Some(n.to_string())),
                None => {
                    if chunk.starts_with(|c: char| c.is_ascii_digit()) {
                        (parse_q(&chunk)?, None)
                    } else {
                        (Q::one(), Some(chunk.clone()))
                    }
                }
            };
            match name {
                Some(n) => {
                    if n.is_empty()
                        || n.starts_with(|c: char| c.is_ascii_digit())
                        || !n.chars().all(|c| c.is_alphanumeric() || c == '_')
                    {
                        return Err(Error::Parse(format!("bad variable '{n}'")));
                    }
                    out.add_term(var(&n), coef * sign);
                }
                None => out.constant += coef * sign,
            }
        }
        Ok(out)
    }

    pub fn sorted_terms(&self) -> Vec<(Var, Q)> {
        let mut t: Vec<(Var, Q)> = self.coeffs.iter().map(|(v, c)| (*v, c.clone())).collect();
        t.sort_by(|a, b| var_cmp(a.0, b.0));
        t
    }
}

impl fmt::Display for LinearForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<(bool, String)> = Vec::new();
        for (v, c) in self.sorted_terms() {
            let neg = c.is_negative();
            let a = c.abs();
            let body = if a.is_one() {
                v.name()
            } else {
                format!("{}*{}", fmt_q(&a), v.name())
            };
            parts.push((neg, body));
        }
        if !self.constant.is_zero() || parts.is_empty() {
            parts.push((self.constant.is_negative(), fmt_q(&self.constant.abs())));
        }
        for (i, (neg, body)) in parts.iter().enumerate() {
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

impl fmt::Debug for LinearForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl From<Q> for LinearForm {
    fn from(c: Q) -> Self {
        Self::constant(c)
    }
}
