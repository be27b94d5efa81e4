//! The tropical trigonal construction.
//!
//! Points of `Π̃` over a point `x` of the tree are effective divisors on the
//! total space pushing forward to `φ*(x)`. Over a vertex or an edge of the
//! tree such a divisor is a choice, for every preimage of local degree `d`,
//! of how to split `d` between its two lifts. A split `(a, d - a)` carries
//! the local degree `C(d, a)`, so the sections over any point have total
//! degree `2^3 = 8`. Edge sections are attached to vertex sections by
//! restricting the divisor to the endpoints.

use std::collections::HashMap;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::graph::canonical_code_weighted;
use crate::graph::json::graph_to_json;
use crate::graph::Graph;
use crate::linear::qf;
use crate::moments::{i2_jac, i2_prym, q_prym_case, w0_jac, w0_prym, PrymOptions};
use crate::morphism::{Expanded, HarmonicMorphism, Tower};
use crate::poly::{ParamCone, Polynomial};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Point {
    Vertex(usize),
    Edge(usize),
}

/// A section over a vertex or edge of the tree. `parts` lists, for each
/// preimage in the base (vertex or edge index), its local degree `d` and the
/// coefficient `a` put on the `+` lift; the `-` lift gets `d - a`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Section {
    pub base: Point,
    pub parts: Vec<(usize, u32, u32)>,
    pub degree: u32,
}

impl Section {
    fn involution(&self) -> Section {
        Section {
            base: self.base,
            parts: self.parts.iter().map(|&(y, d, a)| (y, d, d - a)).collect(),
            degree: self.degree,
        }
    }
}

fn binomial(n: u32, k: u32) -> u32 {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn fiber(t: &Tower, x: Point) -> Vec<(usize, u32)> {
    let m = &t.trig;
    match x {
        Point::Vertex(v) => (0..m.source.num_vertices())
            .filter(|&w| m.vertex_map[w] == v)
            .map(|w| (w, m.vertex_degree[w]))
            .collect(),
        Point::Edge(e) => (0..m.source.num_edges())
            .filter(|&y| m.edge_map(y) == e)
            .map(|y| (y, m.edge_degree[y]))
            .collect(),
    }
}

/// All sections over `x`, `+`-heavy splits first.
pub fn fiber_sections(t: &Tower, x: Point) -> Result<Vec<Section>> {
    let fib = fiber(t, x);
    let total: u32 = fib.iter().map(|p| p.1).sum();
    if total != 3 {
        return Err(Error::InvalidTower(format!("fiber over {x:?} has degree {total}")));
    }
    let mut out: Vec<Section> = vec![Section {
        base: x,
        parts: Vec::new(),
        degree: 1,
    }];
    for &(y, d) in &fib {
        let mut next = Vec::with_capacity(out.len() * (d as usize + 1));
        for s in &out {
            for a in (0..=d).rev() {
                let mut parts = s.parts.clone();
                parts.push((y, d, a));
                next.push(Section {
                    base: x,
                    parts,
                    degree: s.degree * binomial(d, a),
                });
            }
        }
        out = next;
    }
    let sum: u32 = out.iter().map(|s| s.degree).sum();
    if sum != 8 {
        return Err(Error::ConstructionViolated(format!(
            "section degrees over {x:?} sum to {sum}"
        )));
    }
    Ok(out)
}

/// Output of the construction.
#[derive(Clone, Debug)]
pub struct Construction {
    /// `Π̃ -> Δ`, of degree 8.
    pub psi_tilde: HarmonicMorphism,
    pub vertex_sections: Vec<Section>,
    pub edge_sections: Vec<Section>,
    /// Component label (0 or 1) of every vertex of `Π̃`; 0 holds vertex 0.
    pub component: Vec<usize>,
    /// `Π -> Δ`, of degree 4, with `Π` the component labelled 0.
    pub psi: HarmonicMorphism,
}

impl Construction {
    pub fn pi_tilde(&self) -> &Graph {
        &self.psi_tilde.source
    }

    pub fn pi(&self) -> &Graph {
        &self.psi.source
    }
}

fn section_name(g: &Graph, t: &Graph, s: &Section) -> String {
    let (head, names): (&str, Vec<&str>) = match s.base {
        Point::Vertex(v) => (&t.vertices[v].name, s.parts.iter().map(|p| g.vertices[p.0].name.as_str()).collect()),
        Point::Edge(e) => (&t.edges[e].name, s.parts.iter().map(|p| g.edges[p.0].name.as_str()).collect()),
    };
    let body: Vec<String> = s
        .parts
        .iter()
        .zip(names)
        .map(|(&(_, d, a), n)| format!("{n}+{a}-{}", d - a))
        .collect();
    format!("{head}[{}]", body.join(" "))
}

/// Restriction of an edge section to the endpoint on side `side`, as a
/// vertex section key.
fn restrict(t: &Tower, ex: &Expanded, s: &Section, e: usize, side: usize) -> Result<Vec<(usize, u32, u32)>> {
    let m = &t.trig;
    let total = ex.total();
    let tv = m.target.root(2 * e + side);
    let mut plus: HashMap<usize, u32> = HashMap::new();
    for &(y, d, a) in &s.parts {
        let sy = (0..2)
            .find(|&sy| m.half_edge_map[2 * y + sy] == 2 * e + side)
            .ok_or_else(|| Error::Internal("edge does not lie over its image".into()))?;
        for (lift, c) in [(ex.edge_lifts[y][0], a), (ex.edge_lifts[y][1], d - a)] {
            let r = total.root(2 * lift + sy);
            let w = ex.morphism.vertex_map[r];
            if ex.vertex_lifts[w][0] == r {
                *plus.entry(w).or_default() += c;
            } else {
                plus.entry(w).or_default();
            }
        }
    }
    let mut key: Vec<(usize, u32, u32)> = (0..m.source.num_vertices())
        .filter(|&w| m.vertex_map[w] == tv)
        .map(|w| (w, m.vertex_degree[w], plus.get(&w).copied().unwrap_or(0)))
        .collect();
    key.sort();
    Ok(key)
}

/// Builds `Π̃`, splits it into its two components and returns `Π`.
pub fn build_pi(t: &Tower) -> Result<Construction> {
    t.validate()?;
    let ex = t.cover.expand()?;
    let m = &t.trig;
    let delta = &m.target;
    let gamma = &m.source;

    let mut pt = Graph::new();
    let mut vertex_sections = Vec::new();
    let mut index: HashMap<(usize, Vec<(usize, u32, u32)>), usize> = HashMap::new();
    let mut vertex_map = Vec::new();
    let mut vertex_degree = Vec::new();
    for v in 0..delta.num_vertices() {
        for s in fiber_sections(t, Point::Vertex(v))? {
            let i = pt.add_vertex(section_name(gamma, delta, &s), 0);
            index.insert((v, s.parts.clone()), i);
            vertex_map.push(v);
            vertex_degree.push(s.degree);
            vertex_sections.push(s);
        }
    }
    let mut edge_sections = Vec::new();
    let mut half_edge_map = Vec::new();
    let mut edge_degree = Vec::new();
    for e in 0..delta.num_edges() {
        for s in fiber_sections(t, Point::Edge(e))? {
            let mut ends = [0usize; 2];
            for (side, end) in ends.iter_mut().enumerate() {
                let key = restrict(t, &ex, &s, e, side)?;
                let tv = delta.root(2 * e + side);
                *end = *index.get(&(tv, key)).ok_or_else(|| {
                    Error::ConstructionViolated(format!(
                        "restriction of {} is not a vertex section",
                        section_name(gamma, delta, &s)
                    ))
                })?;
            }
            let len = delta.edges[e].length.scale(&qf(1, s.degree as i64));
            pt.add_edge(section_name(gamma, delta, &s), ends[0], ends[1], len);
            half_edge_map.extend([2 * e, 2 * e + 1]);
            edge_degree.push(s.degree);
            edge_sections.push(s);
        }
    }
    let psi_tilde = HarmonicMorphism {
        source: pt,
        target: delta.clone(),
        vertex_map,
        half_edge_map,
        vertex_degree,
        edge_degree,
    };
    psi_tilde
        .validate()
        .map_err(|e| Error::ConstructionViolated(e.to_string()))?;
    let deg = psi_tilde.global_degree()?;
    if deg != 8 {
        return Err(Error::ConstructionViolated(format!("degree {deg} instead of 8")));
    }

    let pt = &psi_tilde.source;
    let (label, n) = pt.components_with(|_| true);
    if n != 2 {
        return Err(Error::ConstructionViolated(format!("{n} components instead of 2")));
    }
    let component: Vec<usize> = label.iter().map(|&l| (l != label[0]) as usize).collect();
    for (i, s) in vertex_sections.iter().enumerate() {
        let v = match s.base {
            Point::Vertex(v) => v,
            Point::Edge(_) => unreachable!(),
        };
        let j = index[&(v, s.involution().parts)];
        if component[i] == component[j] {
            return Err(Error::ConstructionViolated("involution preserves a component".into()));
        }
    }

    let keep: Vec<usize> = (0..pt.num_vertices()).filter(|&v| component[v] == 0).collect();
    let edges: Vec<usize> = (0..pt.num_edges())
        .filter(|&e| component[pt.edges[e].ends[0]] == 0)
        .collect();
    let psi = restrict_morphism(&psi_tilde, &keep, &edges);
    let other_v: Vec<usize> = (0..pt.num_vertices()).filter(|&v| component[v] == 1).collect();
    let other_e: Vec<usize> = (0..pt.num_edges())
        .filter(|&e| component[pt.edges[e].ends[0]] == 1)
        .collect();
    let other = pt.subgraph(&other_v, &other_e).0;
    if canonical_code_weighted(&psi.source) != canonical_code_weighted(&other) {
        return Err(Error::ConstructionViolated("components are not isomorphic".into()));
    }
    let d4 = psi.global_degree()?;
    if d4 != 4 {
        return Err(Error::ConstructionViolated(format!("component has degree {d4}")));
    }
    let g_pi = psi.source.genus()?;
    let g = gamma.genus()?;
    if g_pi + 1 != g {
        return Err(Error::ConstructionViolated(format!("g(Π) = {g_pi} but g(Γ) = {g}")));
    }
    Ok(Construction {
        psi_tilde,
        vertex_sections,
        edge_sections,
        component,
        psi,
    })
}

fn restrict_morphism(m: &HarmonicMorphism, verts: &[usize], edges: &[usize]) -> HarmonicMorphism {
    let (g, _, _) = m.source.subgraph(verts, edges);
    HarmonicMorphism {
        source: g,
        target: m.target.clone(),
        vertex_map: verts.iter().map(|&v| m.vertex_map[v]).collect(),
        half_edge_map: edges
            .iter()
            .flat_map(|&e| [m.half_edge_map[2 * e], m.half_edge_map[2 * e + 1]])
            .collect(),
        vertex_degree: verts.iter().map(|&v| m.vertex_degree[v]).collect(),
        edge_degree: edges.iter().map(|&e| m.edge_degree[e]).collect(),
    }
}

/// Comparison of both sides of the second-moment formula on one tower.
#[derive(Clone, Debug)]
pub struct TowerReport {
    pub genus_pi: usize,
    pub w0_jac_pi: Polynomial,
    pub w0_prym: Polynomial,
    pub p_pi: Polynomial,
    /// `p + q` on the branch of `q` containing the tower's cone.
    pub p_plus_q: Polynomial,
    pub q_case: String,
    pub volume_ok: bool,
    pub moment_ok: bool,
}

impl TowerReport {
    pub fn passed(&self) -> bool {
        self.volume_ok && self.moment_ok
    }

    pub fn to_json(&self) -> Value {
        json!({
            "genus_pi": self.genus_pi,
            "w0_jac_pi": self.w0_jac_pi.to_string(),
            "w0_prym": self.w0_prym.to_string(),
            "p_pi": self.p_pi.to_string(),
            "p_plus_q": self.p_plus_q.to_string(),
            "q_case": self.q_case,
            "volume_ok": self.volume_ok,
            "moment_ok": self.moment_ok,
        })
    }
}

/// Runs the construction and compares `Jac(Π)` with the Prym formula, both
/// as polynomials in the tree's edge lengths.
pub fn verify_tower(t: &Tower, opts: PrymOptions) -> Result<TowerReport> {
    let c = build_pi(t)?;
    let pi = c.pi().core()?.graph;
    let w0_jac_pi = w0_jac(&pi)?;
    let w0p = w0_prym(&t.cover)?;
    let p_pi = i2_jac(&pi)?
        .numerator
        .pieces
        .first()
        .map(|p| p.poly.clone())
        .unwrap_or_default();
    let i2 = i2_prym(&t.cover, opts)?;
    let p_plus_q = i2.numerator.select(&ParamCone::default())?.clone();
    let (_, case) = q_prym_case(&t.cover, opts.reading)?;
    Ok(TowerReport {
        genus_pi: c.pi().genus()?,
        volume_ok: w0_jac_pi == w0p && i2.radicand == w0p,
        moment_ok: p_pi == p_plus_q,
        w0_jac_pi,
        w0_prym: w0p,
        p_pi,
        p_plus_q,
        q_case: case.name,
    })
}

/// JSON form of `Π` with its map to the tree.
pub fn pi_to_json(c: &Construction) -> Value {
    let m = &c.psi;
    json!({
        "graph": graph_to_json(&m.source),
        "tree": graph_to_json(&m.target),
        "vertex_map": m.vertex_map,
        "vertex_degree": m.vertex_degree,
        "edge_degree": m.edge_degree,
    })
}

#[cfg(test)]
mod tests;
