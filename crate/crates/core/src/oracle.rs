//! Numeric ground truth from lattices.
//!
//! Gram matrices come straight from graph homology with the integration
//! pairing; the Prym lattice is the image of `Id - ι_*` on the cycles of the
//! total space, with half the pairing. Voronoi moments are estimated by
//! sampling a fundamental parallelepiped and reducing every sample to the
//! Voronoi cell by an exact closest-vector search.

use std::collections::HashMap;

use nalgebra::DMatrix;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::Value;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::linear::{fmt_q, parse_q, q, qf, Var, Q};
use crate::morphism::DoubleCover;

/// Symmetric positive-definite rational matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Gram(pub Vec<Vec<Q>>);

impl Gram {
    pub fn new(rows: Vec<Vec<Q>>) -> Result<Gram> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::DegenerateGram);
        }
        for i in 0..n {
            for j in 0..i {
                if rows[i][j] != rows[j][i] {
                    return Err(Error::DegenerateGram);
                }
            }
        }
        let g = Gram(rows);
        for k in 1..=n {
            if !g.minor(k).is_positive() {
                return Err(Error::DegenerateGram);
            }
        }
        Ok(g)
    }

    pub fn from_ints(rows: &[&[i64]]) -> Result<Gram> {
        Gram::new(rows.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    /// Leading principal minor of size `k`.
    pub fn minor(&self, k: usize) -> Q {
        let m: Vec<Vec<Q>> = self.0[..k].iter().map(|r| r[..k].to_vec()).collect();
        det(m)
    }

    pub fn det(&self) -> Q {
        self.minor(self.dim())
    }

    pub fn to_f64(&self) -> DMatrix<f64> {
        let n = self.dim();
        DMatrix::from_fn(n, n, |i, j| self.0[i][j].to_f64().unwrap_or(f64::NAN))
    }

    /// Rows of rationals as strings.
    pub fn to_json(&self) -> Value {
        Value::Array(
            self.0
                .iter()
                .map(|r| Value::Array(r.iter().map(|x| Value::String(fmt_q(x))).collect()))
                .collect(),
        )
    }

    /// Accepts rows of integers or rational strings such as `"3/2"`.
    pub fn from_json(v: &Value) -> Result<Gram> {
        let bad = |m: String| Error::Parse(format!("gram: {m}"));
        let rows = v.as_array().ok_or_else(|| bad("expected an array of rows".into()))?;
        let mut out = Vec::new();
        for (i, r) in rows.iter().enumerate() {
            let r = r.as_array().ok_or_else(|| bad(format!("row {i} is not an array")))?;
            let mut row = Vec::new();
            for (j, x) in r.iter().enumerate() {
                row.push(match x {
                    Value::Number(n) if n.is_i64() => q(n.as_i64().unwrap()),
                    Value::String(t) => parse_q(t)?,
                    _ => return Err(bad(format!("entry ({i},{j}) must be an integer or a rational string"))),
                });
            }
            out.push(row);
        }
        Gram::new(out)
    }

    pub fn form(&self, a: &[Q], b: &[Q]) -> Q {
        let mut s = Q::zero();
        for i in 0..a.len() {
            for j in 0..b.len() {
                s += &a[i] * &self.0[i][j] * &b[j];
            }
        }
        s
    }
}

/// Exact determinant by elimination over the rationals.
pub fn det(mut m: Vec<Vec<Q>>) -> Q {
    let n = m.len();
    let mut d = q(1);
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !m[i][c].is_zero()) else {
            return Q::zero();
        };
        if p != c {
            m.swap(p, c);
            d = -d;
        }
        let piv = m[c][c].clone();
        d *= &piv;
        for i in c + 1..n {
            if m[i][c].is_zero() {
                continue;
            }
            let f = &m[i][c] / &piv;
            for j in c..n {
                let x = &m[c][j] * &f;
                m[i][j] -= x;
            }
        }
    }
    d
}

fn lengths(g: &Graph, point: &HashMap<Var, Q>) -> Result<Vec<Q>> {
    g.edges
        .iter()
        .map(|e| {
            let l = e.length.eval(point)?;
            if l.is_positive() {
                Ok(l)
            } else {
                Err(Error::OutOfRange(format!("length of {} is not positive", e.name)))
            }
        })
        .collect()
}

/// Fundamental cycles of the greedy spanning tree as edge vectors.
pub fn cycle_basis(g: &Graph) -> Vec<Vec<i64>> {
    let tree = g.spanning_tree();
    let n = g.num_vertices();
    let mut adj = vec![Vec::new(); n];
    for &e in &tree {
        let [a, b] = g.edges[e].ends;
        adj[a].push((b, e, 1i64));
        adj[b].push((a, e, -1i64));
    }
    // path from the root of each component, as a signed edge vector
    let mut path: Vec<Option<Vec<i64>>> = vec![None; n];
    for r in 0..n {
        if path[r].is_some() {
            continue;
        }
        path[r] = Some(vec![0; g.num_edges()]);
        let mut stack = vec![r];
        while let Some(v) = stack.pop() {
            for &(u, e, s) in &adj[v] {
                if path[u].is_none() {
                    let mut p = path[v].clone().unwrap();
                    p[e] += s;
                    path[u] = Some(p);
                    stack.push(u);
                }
            }
        }
    }
    (0..g.num_edges())
        .filter(|e| !tree.contains(e))
        .map(|e| {
            let [a, b] = g.edges[e].ends;
            let pa = path[a].as_ref().unwrap();
            let pb = path[b].as_ref().unwrap();
            let mut c: Vec<i64> = pa.iter().zip(pb).map(|(x, y)| x - y).collect();
            c[e] += 1;
            c
        })
        .collect()
}

fn pairing(vs: &[Vec<i64>], len: &[Q], scale: &Q) -> Vec<Vec<Q>> {
    vs.iter()
        .map(|a| {
            vs.iter()
                .map(|b| {
                    let mut s = Q::zero();
                    for (e, l) in len.iter().enumerate() {
                        if a[e] != 0 && b[e] != 0 {
                            s += l * q(a[e] * b[e]);
                        }
                    }
                    s * scale
                })
                .collect()
        })
        .collect()
}

pub fn jac_gram(g: &Graph, point: &HashMap<Var, Q>) -> Result<Gram> {
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let len = lengths(g, point)?;
    Gram::new(pairing(&cycle_basis(g), &len, &q(1)))
}

/// Integer row reduction to a basis of the lattice spanned by `vs`.
pub fn lattice_basis(vs: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let mut rows: Vec<Vec<i64>> = vs.iter().filter(|v| v.iter().any(|&x| x != 0)).cloned().collect();
    let cols = rows.first().map_or(0, |r| r.len());
    let mut out = Vec::new();
    for c in 0..cols {
        loop {
            let nz: Vec<usize> = (0..rows.len()).filter(|&i| rows[i][c] != 0).collect();
            if nz.len() <= 1 {
                if let Some(&i) = nz.first() {
                    out.push(rows.remove(i));
                }
                break;
            }
            let p = *nz.iter().min_by_key(|&&i| rows[i][c].abs()).unwrap();
            let pr = rows[p].clone();
            for &i in &nz {
                if i != p {
                    let f = Integer::div_floor(&rows[i][c], &pr[c]);
                    for j in 0..cols {
                        rows[i][j] -= f * pr[j];
                    }
                }
            }
        }
        rows.retain(|r| r.iter().any(|&x| x != 0));
    }
    out
}

/// Gram matrix of `Im(Id - ι_*)` in the cycles of the total space, under half
/// the integration pairing.
pub fn prym_gram(c: &DoubleCover, point: &HashMap<Var, Q>) -> Result<Gram> {
    let ex = c.expand()?;
    let total = ex.total();
    if !total.is_connected() {
        return Err(Error::DisconnectedCover);
    }
    let len = lengths(total, point)?;
    let images: Vec<Vec<i64>> = cycle_basis(total)
        .into_iter()
        .map(|v| {
            let mut w = v.clone();
            for (x, &a) in v.iter().enumerate() {
                w[ex.edge_involution[x]] -= a;
            }
            w
        })
        .collect();
    let basis = lattice_basis(&images);
    let t = c.torus_rank()?;
    if basis.len() != t {
        return Err(Error::Internal(format!("Prym lattice has rank {} not {t}", basis.len())));
    }
    Gram::new(pairing(&basis, &len, &qf(1, 2)))
}

/// Closest lattice vector search in dimension at most 4.
#[derive(Clone, Debug)]
pub struct Reducer {
    gram: DMatrix<f64>,
    /// Upper Cholesky factor `R` with `G = R^T R`.
    r: DMatrix<f64>,
    inv: DMatrix<f64>,
}

impl Reducer {
    pub fn new(g: &Gram) -> Result<Reducer> {
        let n = g.dim();
        if n == 0 || n > 4 {
            return Err(Error::OutOfRange(format!("dimension {n} not in 1..=4")));
        }
        let gram = g.to_f64();
        let chol = nalgebra::Cholesky::new(gram.clone()).ok_or(Error::DegenerateGram)?;
        let r = chol.l().transpose();
        let inv = r.clone().try_inverse().ok_or(Error::DegenerateGram)?;
        Ok(Reducer { gram, r, inv })
    }

    pub fn dim(&self) -> usize {
        self.gram.nrows()
    }

    /// Point `x = Σ u_i b_i` in Cartesian coordinates `R u`.
    pub fn embed(&self, u: &[f64]) -> Vec<f64> {
        let n = self.dim();
        (0..n).map(|i| (0..n).map(|j| self.r[(i, j)] * u[j]).sum()).collect()
    }

    /// Returns `x - λ` for the lattice vector `λ` closest to `x` (given in
    /// Cartesian coordinates), found by Fincke-Pohst enumeration inside the
    /// ball through the rounded candidate.
    pub fn reduce(&self, x: &[f64]) -> Vec<f64> {
        let n = self.dim();
        let u: Vec<f64> = (0..n).map(|i| (0..n).map(|j| self.inv[(i, j)] * x[j]).sum()).collect();
        let k0: Vec<f64> = u.iter().map(|v| v.round()).collect();
        let d0 = self.dist2(x, &k0);
        let mut best = (d0, k0);
        let mut k = vec![0.0; n];
        self.search(x, &u, n, 0.0, d0 * (1.0 + 1e-12) + 1e-300, &mut k, &mut best);
        let lam = self.embed(&best.1);
        x.iter().zip(lam).map(|(a, b)| a - b).collect()
    }

    fn dist2(&self, x: &[f64], k: &[f64]) -> f64 {
        let l = self.embed(k);
        x.iter().zip(l).map(|(a, b)| (a - b) * (a - b)).sum()
    }

    // |R(u - k)|^2 = Σ_i r_ii^2 (u_i - k_i + Σ_{j>i} r_ij/r_ii (u_j - k_j))^2
    #[allow(clippy::too_many_arguments)]
    fn search(&self, x: &[f64], u: &[f64], level: usize, acc: f64, bound: f64, k: &mut Vec<f64>, best: &mut (f64, Vec<f64>)) {
        if level == 0 {
            let d = self.dist2(x, k);
            if d < best.0 {
                *best = (d, k.clone());
            }
            return;
        }
        let i = level - 1;
        let n = self.dim();
        let rii = self.r[(i, i)];
        let c = u[i] + (i + 1..n).map(|j| self.r[(i, j)] / rii * (u[j] - k[j])).sum::<f64>();
        let room = (bound.min(best.0 * (1.0 + 1e-12)) - acc).max(0.0);
        let w = room.sqrt() / rii;
        let lo = (c - w).ceil() as i64;
        let hi = (c + w).floor() as i64;
        for ki in lo..=hi {
            k[i] = ki as f64;
            let t = rii * (c - k[i]);
            self.search(x, u, i, acc + t * t, bound, k, best);
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct McResult {
    /// `det G`; the volume is its square root.
    pub det: f64,
    pub i0: f64,
    pub i2: f64,
    pub std_error: f64,
}

const CHUNK: usize = 1 << 14;

/// Monte Carlo estimate of `∫_Vor |x|^2 dx`. Chunk `k` draws from ChaCha
/// stream `k` of `seed`, so the result does not depend on thread count.
pub fn mc_moment(g: &Gram, samples: usize, seed: u64) -> Result<McResult> {
    let red = Reducer::new(g)?;
    let n = red.dim();
    let det = g.det().to_f64().ok_or(Error::DegenerateGram)?;
    let i0 = det.sqrt();
    let chunks = samples.div_ceil(CHUNK);
    let sums: Vec<(f64, f64)> = (0..chunks)
        .into_par_iter()
        .map(|k| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(k as u64);
            let m = CHUNK.min(samples - k * CHUNK);
            let (mut s, mut s2) = (0.0, 0.0);
            let mut u = vec![0.0; n];
            for _ in 0..m {
                for x in u.iter_mut() {
                    *x = rng.gen::<f64>();
                }
                let y = red.reduce(&red.embed(&u));
                let r2: f64 = y.iter().map(|a| a * a).sum();
                s += r2;
                s2 += r2 * r2;
            }
            (s, s2)
        })
        .collect();
    let (s, s2) = sums.iter().fold((0.0, 0.0), |a, b| (a.0 + b.0, a.1 + b.1));
    let m = samples as f64;
    let mean = s / m;
    let var = (s2 / m - mean * mean).max(0.0) * m / (m - 1.0).max(1.0);
    Ok(McResult {
        det,
        i0,
        i2: mean * i0,
        std_error: (var / m).sqrt() * i0,
    })
}

/// Exact Voronoi second moment in dimension 2: returns `R` with
/// `I₂ = R · √det G`. The cell is cut out in lattice coordinates, where its
/// vertices are rational, and `∫ uᵀGu du` is summed over a fan of triangles.
pub fn voronoi_second_moment_2d(g: &Gram) -> Result<Q> {
    if g.dim() != 2 {
        return Err(Error::OutOfRange("polygon integration needs dimension 2".into()));
    }
    let gm = &g.0;
    // generous box in lattice coordinates, then clip by bisectors
    let b = q(2);
    let mut poly: Vec<[Q; 2]> = vec![
        [-b.clone(), -b.clone()],
        [b.clone(), -b.clone()],
        [b.clone(), b.clone()],
        [-b.clone(), b.clone()],
    ];
    for k0 in -3i64..=3 {
        for k1 in -3i64..=3 {
            if k0 == 0 && k1 == 0 {
                continue;
            }
            let k = [q(k0), q(k1)];
            // kᵀG u <= kᵀG k / 2
            let a = [
                &k[0] * &gm[0][0] + &k[1] * &gm[1][0],
                &k[0] * &gm[0][1] + &k[1] * &gm[1][1],
            ];
            let rhs = (&a[0] * &k[0] + &a[1] * &k[1]) / q(2);
            poly = clip(&poly, &a, &rhs);
        }
    }
    let mut total = Q::zero();
    for i in 0..poly.len() {
        let p = &poly[i];
        let r = &poly[(i + 1) % poly.len()];
        let area = (&p[0] * &r[1] - &p[1] * &r[0]) / q(2);
        let qa = g.form(p, p);
        let qb = g.form(r, r);
        let ab = g.form(p, r);
        total += area * (qa + qb + ab) / q(6);
    }
    Ok(total)
}

fn clip(poly: &[[Q; 2]], a: &[Q; 2], rhs: &Q) -> Vec<[Q; 2]> {
    let val = |p: &[Q; 2]| &a[0] * &p[0] + &a[1] * &p[1] - rhs;
    let mut out = Vec::new();
    for i in 0..poly.len() {
        let p = &poly[i];
        let r = &poly[(i + 1) % poly.len()];
        let (vp, vr) = (val(p), val(r));
        if !vp.is_positive() {
            out.push(p.clone());
        }
        if (vp.is_positive() && vr.is_negative()) || (vp.is_negative() && vr.is_positive()) {
            let t = &vp / (&vp - &vr);
            out.push([&p[0] + (&r[0] - &p[0]) * &t, &p[1] + (&r[1] - &p[1]) * &t]);
        }
    }
    out
}

#[cfg(test)]
mod tests;
