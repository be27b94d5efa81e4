//! Zeroth and second moments of tropical Jacobians and Prym varieties.
//!
//! Jacobian moments come from spanning trees and 2-forests, Prym moments
//! from the signed graphic matroid plus the piecewise term `q` (see [`q`]).
//! Covers that are not free, or whose stable model is not trivalent, are
//! handled by resolving them into a trivalent free cover with extra edges of
//! formal length and taking the exact limit as those lengths go to zero.

mod conjecture;
mod q;

pub use conjecture::{classify, conjectural_i2, ConjectureClass};
pub use q::{q_free_trivalent, QCase};

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::linear::{qf, var, LinearForm, Var, Q};
use crate::matroid::{independent_sets_k, spanning_trees, weight, SignedMatroid};
use crate::morphism::{DoubleCover, Mark};
use crate::poly::{MomentExpression, PiecewisePolynomial, Polynomial};

/// Which reading of the genus-4 table to emit where the printed cones look
/// inconsistent with the rest of the table.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum AppendixReading {
    Printed,
    #[default]
    Corrected,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrymOptions {
    /// Coefficient of the near-basis sum in `p`.
    pub p_coefficient: i64,
    pub reading: AppendixReading,
}

impl Default for PrymOptions {
    fn default() -> Self {
        PrymOptions {
            p_coefficient: 2,
            reading: AppendixReading::Corrected,
        }
    }
}

fn lin(f: &LinearForm) -> Polynomial {
    Polynomial::from_linear(f)
}

fn complement(n: usize, set: &[usize]) -> Vec<usize> {
    (0..n).filter(|e| !set.contains(e)).collect()
}

/// Sum over spanning trees of the product of the edges not in the tree.
pub fn w0_jac(g: &Graph) -> Result<Polynomial> {
    let m = g.num_edges();
    let mut out = Polynomial::zero();
    for t in spanning_trees(g)? {
        out.add_assign(&weight(g, complement(m, &t)));
    }
    Ok(out)
}

/// Same sum over spanning 2-forests; zero for one-vertex graphs.
pub fn w1_jac(g: &Graph) -> Result<Polynomial> {
    let n = g.num_vertices();
    if n < 2 {
        return Ok(Polynomial::zero());
    }
    let m = g.num_edges();
    let mut out = Polynomial::zero();
    for f in independent_sets_k(g, n - 2)? {
        out.add_assign(&weight(g, complement(m, &f)));
    }
    Ok(out)
}

/// `sum_T w(T) l(T)` with `l(T)` the total length off the tree.
fn tree_length_sum(g: &Graph) -> Result<Polynomial> {
    let m = g.num_edges();
    let mut out = Polynomial::zero();
    for t in spanning_trees(g)? {
        let off = complement(m, &t);
        let mut len = LinearForm::zero();
        for &e in &off {
            len = len.add(&g.edges[e].length);
        }
        out.add_assign(&weight(g, off).mul(&lin(&len)));
    }
    Ok(out)
}

/// `p = 2 w0 l - sum_T w(T) l(T) - 2 w1`.
pub fn p_jac(g: &Graph) -> Result<Polynomial> {
    let w0 = w0_jac(g)?;
    let l = lin(&g.total_length());
    let first = w0.mul(&l).scale_int(2);
    Ok(first.sub(&tree_length_sum(g)?).sub(&w1_jac(g)?.scale_int(2)))
}

pub fn i2_jac(g: &Graph) -> Result<MomentExpression> {
    Ok(MomentExpression {
        numerator: PiecewisePolynomial::from_poly(p_jac(g)?),
        radicand: w0_jac(g)?,
        scale: qf(1, 12),
    })
}

/// `tau = N / (12 w0)`; returns `(N, 12 w0)`.
pub fn tau_expression(g: &Graph) -> Result<(Polynomial, Polynomial)> {
    let w0 = w0_jac(g)?;
    let l = lin(&g.total_length());
    let num = w0
        .mul(&l)
        .neg()
        .add(&tree_length_sum(g)?.scale_int(2))
        .add(&w1_jac(g)?.scale_int(4));
    Ok((num, w0.scale_int(12)))
}

pub fn tau(g: &Graph, point: &HashMap<Var, Q>) -> Result<Q> {
    let (n, d) = tau_expression(g)?;
    let d = d.eval(point)?;
    if d == Q::from_integer(0.into()) {
        return Err(Error::DegenerateGram);
    }
    Ok(n.eval(point)? / d)
}

/// `12 w0 (tau/2 + I2/I0 - l/8)` as a polynomial; identically zero.
pub fn tau_identity_residual(g: &Graph) -> Result<Polynomial> {
    let (n, _) = tau_expression(g)?;
    let w0 = w0_jac(g)?;
    let l = lin(&g.total_length());
    Ok(n.scale(&qf(1, 2))
        .add(&p_jac(g)?)
        .sub(&w0.mul(&l).scale(&qf(3, 2))))
}

/// Sum of `i(F) w(F)` over cographic bases.
pub fn w0_prym(c: &DoubleCover) -> Result<Polynomial> {
    let m = SignedMatroid::new(c)?;
    Ok(w0_of(&m))
}

fn w0_of(m: &SignedMatroid) -> Polynomial {
    let mut out = Polynomial::zero();
    for b in &m.cobases {
        out.add_assign(&weight(&m.cover.base, b.set.iter().copied()).scale_int(b.index as i64));
    }
    out
}

/// The three-term polynomial `p` of a double cover with the given
/// near-basis coefficient.
pub fn p_prym(c: &DoubleCover, coefficient: i64) -> Result<Polynomial> {
    let m = SignedMatroid::new(c)?;
    let base = &c.base;
    let mut idx: HashMap<usize, i64> = HashMap::new();
    for &e in &m.ground {
        idx.insert(e, m.edge_index(e)? as i64);
    }
    let weighted = |set: &mut dyn Iterator<Item = usize>| -> Polynomial {
        let mut l = LinearForm::zero();
        for e in set {
            l = l.add(&base.edges[e].length.scale(&Q::from_integer(idx[&e].into())));
        }
        lin(&l)
    };
    let w0 = w0_of(&m);
    let first = w0.mul(&weighted(&mut m.ground.iter().copied())).scale_int(2);
    let mut second = Polynomial::zero();
    for b in &m.cobases {
        let w = weight(base, b.set.iter().copied()).scale_int(b.index as i64);
        second.add_assign(&w.mul(&weighted(&mut b.set.iter().copied())));
    }
    let mut third = Polynomial::zero();
    if m.graphic_rank() > 0 {
        for f in near_bases_with_index(&m, &idx) {
            third.add_assign(&f);
        }
    }
    Ok(first.sub(&second).sub(&third.scale_int(coefficient)))
}

/// `i(F) w(F)` for every near-basis `F`, using a hashed basis lookup.
fn near_bases_with_index(m: &SignedMatroid, idx: &HashMap<usize, i64>) -> Vec<Polynomial> {
    let bases: HashMap<Vec<usize>, u64> = m.graphic_bases().into_iter().collect();
    let mut out = Vec::new();
    for f in m.near_bases() {
        let mut best: Option<i64> = None;
        for &e in &m.ground {
            if f.contains(&e) {
                continue;
            }
            let mut t = f.clone();
            t.push(e);
            t.sort();
            if let Some(&i) = bases.get(&t) {
                let v = i as i64 * idx[&e];
                best = Some(best.map_or(v, |b| b.min(v)));
            }
        }
        let i = best.expect("near-basis extends to a basis");
        let rest = m.ground.iter().copied().filter(|e| !f.contains(e));
        out.push(weight(&m.cover.base, rest).scale_int(i));
    }
    out
}

/// A trivalent free cover with the same Prym in the limit where every
/// variable in `eps` goes to zero.
#[derive(Clone, Debug)]
pub struct Resolution {
    pub cover: DoubleCover,
    pub eps: Vec<Var>,
}

impl Resolution {
    pub fn limit_map(&self) -> HashMap<Var, LinearForm> {
        self.eps.iter().map(|&v| (v, LinearForm::zero())).collect()
    }
}

fn eps_var(k: usize) -> Var {
    var(&format!("_eps{k}"))
}

/// Contracts dilated edges, replaces each dilated vertex of genus `g` by a
/// genus `g - 1` vertex with an odd loop, drops vertex genera (they do not
/// enter the Prym lattice), removes trees and series vertices, and splits
/// vertices of valence above three.
pub fn resolve(c: &DoubleCover) -> Result<Resolution> {
    let c = if c.dilated_edges().is_empty() {
        c.clone()
    } else {
        c.contract_dilated()?
    };
    let mut g = Graph::new();
    for v in &c.base.vertices {
        g.add_vertex(v.name.clone(), 0);
    }
    let mut signs: Vec<i8> = Vec::new();
    for (i, e) in c.base.edges.iter().enumerate() {
        g.add_edge(e.name.clone(), e.ends[0], e.ends[1], e.length.clone());
        signs.push(if c.sign(i) < 0 { -1 } else { 1 });
    }
    let mut eps = Vec::new();
    for v in 0..c.base.num_vertices() {
        if c.dilated[v] {
            let x = eps_var(eps.len());
            eps.push(x);
            g.add_edge(format!("_loop{}", eps.len()), v, v, LinearForm::var(x));
            signs.push(-1);
        }
    }
    let free = DoubleCover::free(g, &signs)?;
    if free.base.b1() == 0 {
        return Ok(Resolution { cover: free, eps });
    }
    let (core, _) = free.core()?;
    let (cover, extra) = split_high_valence(core, eps.len())?;
    eps.extend(extra);
    Ok(Resolution { cover, eps })
}

fn split_high_valence(c: DoubleCover, start: usize) -> Result<(DoubleCover, Vec<Var>)> {
    let mut g = c.base.clone();
    let mut signs: Vec<i8> = (0..g.num_edges()).map(|e| c.sign(e)).collect();
    let mut eps = Vec::new();
    let mut v = 0;
    while v < g.num_vertices() {
        if g.valence(v) <= 3 {
            v += 1;
            continue;
        }
        let hs = g.half_edges_at(v);
        // move both ends of a loop together when possible
        let pair = hs
            .iter()
            .find(|&&h| g.root(h ^ 1) == v && hs.contains(&(h ^ 1)))
            .map(|&h| [h, h ^ 1])
            .unwrap_or([hs[0], hs[1]]);
        let x = eps_var(start + eps.len());
        eps.push(x);
        let w = g.add_vertex(format!("_split{}", start + eps.len()), 0);
        for h in pair {
            g.edges[h / 2].ends[h % 2] = w;
        }
        g.add_edge(format!("_eps{}", start + eps.len()), v, w, LinearForm::var(x));
        signs.push(1);
    }
    Ok((DoubleCover::free(g, &signs)?, eps))
}

/// The piecewise term `q` of a cover whose base has genus at most four.
pub fn q_prym(c: &DoubleCover, reading: AppendixReading) -> Result<PiecewisePolynomial> {
    Ok(q_prym_case(c, reading)?.0)
}

/// `q` together with the matched configuration (on the resolved cover).
pub fn q_prym_case(c: &DoubleCover, reading: AppendixReading) -> Result<(PiecewisePolynomial, QCase)> {
    check_genus(c)?;
    let r = resolve(c)?;
    let (q, case) = q_free_trivalent(&r.cover, reading)?;
    if r.eps.is_empty() {
        return Ok((q, case));
    }
    Ok((q.substitute(&r.limit_map()), case))
}

fn check_genus(c: &DoubleCover) -> Result<()> {
    let g = c.base.genus()?;
    if g > 4 {
        return Err(Error::GenusTooLarge(g));
    }
    Ok(())
}

/// `(p + q) / (12 sqrt(w0))`, computed on the resolution (free, trivalent,
/// no trees or series vertices) and carried back by the exact limit.
pub fn i2_prym(c: &DoubleCover, opts: PrymOptions) -> Result<MomentExpression> {
    check_genus(c)?;
    if !c.is_connected_cover() {
        return Err(Error::DisconnectedCover);
    }
    let r = resolve(c)?;
    let p = p_prym(&r.cover, opts.p_coefficient)?;
    let (q, _) = q_free_trivalent(&r.cover, opts.reading)?;
    let numerator = q.add_poly(&p);
    let radicand = w0_prym(&r.cover)?;
    if r.eps.is_empty() {
        return Ok(MomentExpression {
            numerator,
            radicand,
            scale: qf(1, 12),
        });
    }
    let m = r.limit_map();
    Ok(MomentExpression {
        numerator: numerator.substitute(&m),
        radicand: radicand.substitute_partial(&m),
        scale: qf(1, 12),
    })
}

/// Undilated marks as signs; helper for building sub-covers.
pub(crate) fn signs_of(c: &DoubleCover, edges: &[usize]) -> Vec<i8> {
    edges
        .iter()
        .map(|&e| match c.marks[e] {
            Mark::Minus => -1,
            _ => 1,
        })
        .collect()
}
