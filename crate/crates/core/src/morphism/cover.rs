//! Double covers stored base-side as signs and dilation marks.

use serde_json::{json, Value};

use super::HarmonicMorphism;
use crate::error::{Error, Result};
use crate::graph::json::{as_array, as_obj, graph_from_json, graph_to_json};
use crate::graph::{Dsu, Graph, Stabilized};
use crate::linear::qf;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Mark {
    Plus,
    Minus,
    Dilated,
}

impl Mark {
    pub fn from_sign(s: i8) -> Mark {
        if s < 0 {
            Mark::Minus
        } else {
            Mark::Plus
        }
    }

    pub fn flip(self) -> Mark {
        match self {
            Mark::Plus => Mark::Minus,
            Mark::Minus => Mark::Plus,
            Mark::Dilated => Mark::Dilated,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DoubleCover {
    pub base: Graph,
    pub marks: Vec<Mark>,
    pub dilated: Vec<bool>,
}

/// Total space of a cover with its projection and involution.
#[derive(Clone, Debug)]
pub struct Expanded {
    pub morphism: HarmonicMorphism,
    /// Total-space edge lifts of each base edge: `[e+, e-]`, equal if dilated.
    pub edge_lifts: Vec<[usize; 2]>,
    pub vertex_lifts: Vec<[usize; 2]>,
    pub edge_involution: Vec<usize>,
    pub vertex_involution: Vec<usize>,
}

impl Expanded {
    pub fn total(&self) -> &Graph {
        &self.morphism.source
    }
}

impl DoubleCover {
    /// Builds a cover; vertices touching dilated edges are dilated, plus any
    /// listed in `declared`.
    pub fn new(base: Graph, marks: Vec<Mark>, declared: &[usize]) -> Result<DoubleCover> {
        if marks.len() != base.num_edges() {
            return Err(Error::InvalidDilation("one mark per edge is required".into()));
        }
        let mut dilated = vec![false; base.num_vertices()];
        for &v in declared {
            if v >= dilated.len() {
                return Err(Error::UnknownVertex(v.to_string()));
            }
            dilated[v] = true;
        }
        for (e, m) in base.edges.iter().zip(&marks) {
            if *m == Mark::Dilated {
                dilated[e.ends[0]] = true;
                dilated[e.ends[1]] = true;
            }
        }
        let c = DoubleCover {
            base,
            marks,
            dilated,
        };
        c.check_dilation()?;
        Ok(c)
    }

    pub fn free(base: Graph, signs: &[i8]) -> Result<DoubleCover> {
        let marks = signs.iter().map(|&s| Mark::from_sign(s)).collect();
        DoubleCover::new(base, marks, &[])
    }

    fn check_dilation(&self) -> Result<()> {
        for v in 0..self.base.num_vertices() {
            if !self.dilated[v] {
                continue;
            }
            let dval = self.dilated_valence(v);
            let name = &self.base.vertices[v].name;
            if dval % 2 == 1 {
                return Err(Error::InvalidDilation(format!(
                    "vertex {name} has odd dilated valence {dval}"
                )));
            }
            if self.base.vertices[v].genus == 0 && dval == 0 {
                return Err(Error::InvalidDilation(format!(
                    "isolated dilated vertex {name} must have genus at least 1"
                )));
            }
        }
        Ok(())
    }

    pub fn dilated_valence(&self, v: usize) -> usize {
        self.base
            .edges
            .iter()
            .zip(&self.marks)
            .filter(|(_, m)| **m == Mark::Dilated)
            .map(|(e, _)| (e.ends[0] == v) as usize + (e.ends[1] == v) as usize)
            .sum()
    }

    /// Genus of the lift of a dilated vertex: `2g - 1 + dval/2`.
    pub fn lifted_genus(&self, v: usize) -> u32 {
        if self.dilated[v] {
            2 * self.base.vertices[v].genus + (self.dilated_valence(v) / 2) as u32 - 1
        } else {
            self.base.vertices[v].genus
        }
    }

    pub fn is_free(&self) -> bool {
        !self.dilated.iter().any(|&d| d)
    }

    /// +1 or -1 for undilated edges, 0 for dilated ones.
    pub fn sign(&self, e: usize) -> i8 {
        match self.marks[e] {
            Mark::Plus => 1,
            Mark::Minus => -1,
            Mark::Dilated => 0,
        }
    }

    pub fn undilated_edges(&self) -> Vec<usize> {
        (0..self.base.num_edges())
            .filter(|&e| self.marks[e] != Mark::Dilated)
            .collect()
    }

    pub fn dilated_edges(&self) -> Vec<usize> {
        (0..self.base.num_edges())
            .filter(|&e| self.marks[e] == Mark::Dilated)
            .collect()
    }

    pub fn num_undilated_vertices(&self) -> usize {
        self.dilated.iter().filter(|&&d| !d).count()
    }

    pub fn expand(&self) -> Result<Expanded> {
        self.check_dilation()?;
        let b = &self.base;
        let mut total = Graph::new();
        let mut vertex_lifts = Vec::new();
        let mut vertex_map = Vec::new();
        let mut vertex_degree = Vec::new();
        for (v, vert) in b.vertices.iter().enumerate() {
            if self.dilated[v] {
                let x = total.add_vertex(vert.name.clone(), self.lifted_genus(v));
                vertex_lifts.push([x, x]);
                vertex_map.push(v);
                vertex_degree.push(2);
            } else {
                let x = total.add_vertex(format!("{}+", vert.name), vert.genus);
                let y = total.add_vertex(format!("{}-", vert.name), vert.genus);
                vertex_lifts.push([x, y]);
                vertex_map.extend([v, v]);
                vertex_degree.extend([1, 1]);
            }
        }
        let mut edge_lifts = Vec::new();
        let mut half_edge_map = Vec::new();
        let mut edge_degree = Vec::new();
        for (i, e) in b.edges.iter().enumerate() {
            let [a, c] = e.ends;
            match self.marks[i] {
                Mark::Dilated => {
                    let x = total.add_edge(
                        e.name.clone(),
                        vertex_lifts[a][0],
                        vertex_lifts[c][0],
                        e.length.scale(&qf(1, 2)),
                    );
                    edge_lifts.push([x, x]);
                    half_edge_map.extend([2 * i, 2 * i + 1]);
                    edge_degree.push(2);
                }
                m => {
                    let flip = (m == Mark::Minus) as usize;
                    let x = total.add_edge(
                        format!("{}+", e.name),
                        vertex_lifts[a][0],
                        vertex_lifts[c][flip],
                        e.length.clone(),
                    );
                    let y = total.add_edge(
                        format!("{}-", e.name),
                        vertex_lifts[a][1],
                        vertex_lifts[c][1 - flip],
                        e.length.clone(),
                    );
                    edge_lifts.push([x, y]);
                    half_edge_map.extend([2 * i, 2 * i + 1, 2 * i, 2 * i + 1]);
                    edge_degree.extend([1, 1]);
                }
            }
        }
        let mut edge_involution = vec![0; total.num_edges()];
        for l in &edge_lifts {
            edge_involution[l[0]] = l[1];
            edge_involution[l[1]] = l[0];
        }
        let mut vertex_involution = vec![0; total.num_vertices()];
        for l in &vertex_lifts {
            vertex_involution[l[0]] = l[1];
            vertex_involution[l[1]] = l[0];
        }
        let morphism = HarmonicMorphism {
            source: total,
            target: b.clone(),
            vertex_map,
            half_edge_map,
            vertex_degree,
            edge_degree,
        };
        Ok(Expanded {
            morphism,
            edge_lifts,
            vertex_lifts,
            edge_involution,
            vertex_involution,
        })
    }

    /// Signed union-find on the lifts: node `2v + side`, dilated vertices
    /// have their two nodes joined.
    fn lift_dsu(&self, keep: impl Fn(usize) -> bool) -> Dsu {
        let n = self.base.num_vertices();
        let mut d = Dsu::new(2 * n);
        for v in 0..n {
            if self.dilated[v] {
                d.union(2 * v, 2 * v + 1);
            }
        }
        for (i, e) in self.base.edges.iter().enumerate() {
            if !keep(i) {
                continue;
            }
            let [a, b] = e.ends;
            match self.marks[i] {
                Mark::Dilated => {
                    d.union(2 * a, 2 * b);
                }
                Mark::Plus => {
                    d.union(2 * a, 2 * b);
                    d.union(2 * a + 1, 2 * b + 1);
                }
                Mark::Minus => {
                    d.union(2 * a, 2 * b + 1);
                    d.union(2 * a + 1, 2 * b);
                }
            }
        }
        d
    }

    /// Components of the spanning subgraph on edges passing `keep`, with an
    /// unbalanced flag (connected preimage) per component.
    pub fn component_balance(&self, keep: impl Fn(usize) -> bool + Copy) -> (Vec<usize>, Vec<bool>) {
        let (label, n) = self.base.components_with(keep);
        let mut d = self.lift_dsu(keep);
        let mut unbalanced = vec![false; n];
        for v in 0..self.base.num_vertices() {
            if d.find(2 * v) == d.find(2 * v + 1) {
                unbalanced[label[v]] = true;
            }
        }
        (label, unbalanced)
    }

    pub fn is_connected_cover(&self) -> bool {
        if !self.base.is_connected() {
            return false;
        }
        let (_, unb) = self.component_balance(|_| true);
        unb[0]
    }

    /// Whether the connected subgraph `(verts, edges)` has connected preimage.
    pub fn is_unbalanced(&self, verts: &[usize], edges: &[usize]) -> Result<bool> {
        let (sub, _, _) = self.base.subgraph(verts, edges);
        if !sub.is_connected() {
            return Err(Error::Disconnected);
        }
        let mut d = self.lift_dsu(|i| edges.contains(&i));
        let v = verts[0];
        Ok(d.find(2 * v) == d.find(2 * v + 1))
    }

    /// `b1(total) - b1(base)`, which equals `|E_ud| - |V_ud|`.
    pub fn torus_rank(&self) -> Result<usize> {
        if !self.is_connected_cover() {
            return Err(Error::DisconnectedCover);
        }
        Ok(self.undilated_edges().len() - self.num_undilated_vertices())
    }

    /// Switches signs so that a greedy spanning forest of the undilated part
    /// is all `+1`; signs of edges at dilated vertices are set to `+1` since
    /// they do not affect the cover.
    pub fn normalized(&self) -> DoubleCover {
        let mut c = self.clone();
        let n = c.base.num_vertices();
        let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
        for (i, e) in c.base.edges.iter().enumerate() {
            if c.marks[i] == Mark::Dilated {
                continue;
            }
            if c.dilated[e.ends[0]] || c.dilated[e.ends[1]] {
                c.marks[i] = Mark::Plus;
                continue;
            }
            adj[e.ends[0]].push((e.ends[1], i));
            adj[e.ends[1]].push((e.ends[0], i));
        }
        // switch[v] = true flips every undilated edge at v
        let mut switch = vec![false; n];
        let mut seen = vec![false; n];
        for r in 0..n {
            if seen[r] || c.dilated[r] {
                continue;
            }
            seen[r] = true;
            let mut stack = vec![r];
            while let Some(v) = stack.pop() {
                let mut nb = adj[v].clone();
                nb.sort_by_key(|&(_, i)| i);
                for (u, i) in nb {
                    if seen[u] {
                        continue;
                    }
                    seen[u] = true;
                    let s = (c.marks[i] == Mark::Minus) ^ switch[v];
                    switch[u] = s;
                    stack.push(u);
                }
            }
        }
        for (i, e) in c.base.edges.iter().enumerate() {
            if c.marks[i] == Mark::Dilated || c.dilated[e.ends[0]] || c.dilated[e.ends[1]] {
                continue;
            }
            if switch[e.ends[0]] ^ switch[e.ends[1]] {
                c.marks[i] = c.marks[i].flip();
            }
        }
        c
    }

    pub fn same_class(&self, o: &DoubleCover) -> bool {
        self.base == o.base && self.dilated == o.dilated && self.normalized().marks == o.normalized().marks
    }

    fn reduce_with(&self, st: Stabilized) -> Result<(DoubleCover, Stabilized)> {
        let mut marks = Vec::new();
        for chain in &st.chains {
            let kinds: Vec<Mark> = chain.iter().map(|&e| self.marks[e]).collect();
            if kinds.contains(&Mark::Dilated) {
                if kinds.iter().any(|&m| m != Mark::Dilated) {
                    return Err(Error::InvalidDilation("mixed chain".into()));
                }
                marks.push(Mark::Dilated);
            } else {
                let neg = kinds.iter().filter(|&&m| m == Mark::Minus).count();
                marks.push(if neg % 2 == 0 { Mark::Plus } else { Mark::Minus });
            }
        }
        let declared: Vec<usize> = st
            .vertex_origin
            .iter()
            .enumerate()
            .filter(|(_, &o)| self.dilated[o])
            .map(|(i, _)| i)
            .collect();
        let c = DoubleCover::new(st.graph.clone(), marks, &declared)?;
        Ok((c, st))
    }

    /// Stabilizes the base, multiplying signs along merged chains.
    pub fn stabilize(&self) -> Result<(DoubleCover, Stabilized)> {
        self.reduce_with(self.base.stabilize()?)
    }

    /// Like `stabilize` but allows genus 1.
    pub fn core(&self) -> Result<(DoubleCover, Stabilized)> {
        self.reduce_with(self.base.core()?)
    }

    /// Contracts the listed edges. A merged vertex is dilated when one of its
    /// members is or when the contracted piece is unbalanced; balanced pieces
    /// are switched to trivial signs first.
    pub fn contract(&self, f: &[usize]) -> Result<DoubleCover> {
        let inf = |i: usize| f.contains(&i);
        let (g, label, emap) = self.base.contract_with_maps(f)?;
        let (_, unbalanced) = self.component_balance(inf);
        let mut d = self.lift_dsu(inf);
        let n = self.base.num_vertices();
        let mut rep = vec![usize::MAX; g.num_vertices()];
        let mut switch = vec![false; n];
        for v in 0..n {
            let l = label[v];
            if rep[l] == usize::MAX {
                rep[l] = v;
            }
            switch[v] = d.find(2 * v) != d.find(2 * rep[l]);
        }
        let mut marks = vec![Mark::Plus; g.num_edges()];
        for (e, ne) in emap.iter().enumerate() {
            if let Some(ne) = ne {
                let [a, b] = self.base.edges[e].ends;
                marks[*ne] = if switch[a] ^ switch[b] {
                    self.marks[e].flip()
                } else {
                    self.marks[e]
                };
            }
        }
        let mut declared = Vec::new();
        for v in 0..n {
            let l = label[v];
            let dil = self.dilated[v] || (unbalanced[l] && f.iter().any(|&e| label[self.base.edges[e].ends[0]] == l));
            if dil && !declared.contains(&l) {
                declared.push(l);
            }
        }
        DoubleCover::new(g, marks, &declared)
    }

    pub fn contract_dilated(&self) -> Result<DoubleCover> {
        self.contract(&self.dilated_edges())
    }

    pub fn to_json(&self) -> Value {
        let mut v = graph_to_json(&self.base);
        for (i, e) in v["edges"].as_array_mut().unwrap().iter_mut().enumerate() {
            e["sign"] = match self.marks[i] {
                Mark::Plus => json!(1),
                Mark::Minus => json!(-1),
                Mark::Dilated => json!("dilated"),
            };
        }
        for (i, x) in v["vertices"].as_array_mut().unwrap().iter_mut().enumerate() {
            if self.dilated[i] {
                x["dilated"] = json!(true);
            }
        }
        v
    }

    pub fn from_json(v: &Value) -> Result<DoubleCover> {
        let base = graph_from_json(v)?;
        let obj = as_obj(v, "cover")?;
        let mut marks = Vec::new();
        for (i, e) in as_array(&obj["edges"], "edges")?.iter().enumerate() {
            let m = match e.get("sign") {
                None => Mark::Plus,
                Some(s) if s == &json!(1) => Mark::Plus,
                Some(s) if s == &json!(-1) => Mark::Minus,
                Some(s) if s == &json!("dilated") => Mark::Dilated,
                Some(s) => {
                    return Err(Error::Parse(format!(
                        "edges[{i}]: invalid sign {s}, expected 1, -1 or \"dilated\""
                    )))
                }
            };
            marks.push(m);
        }
        let mut declared = Vec::new();
        for (i, x) in as_array(&obj["vertices"], "vertices")?.iter().enumerate() {
            match x.get("dilated") {
                None | Some(Value::Bool(false)) => {}
                Some(Value::Bool(true)) => declared.push(i),
                Some(o) => return Err(Error::Parse(format!("vertices[{i}]: invalid dilated flag {o}"))),
            }
        }
        DoubleCover::new(base, marks, &declared)
    }

    pub fn parse(text: &str) -> Result<DoubleCover> {
        let v: Value = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        DoubleCover::from_json(&v)
    }
}

/// All `2^b1 - 1` nontrivial free covers: signs `+1` on the greedy spanning
/// tree, every nonzero sign pattern on the remaining edges (bit `i` of the
/// mask negates the `i`-th non-tree edge).
pub fn enumerate_free_covers(g: &Graph) -> Vec<DoubleCover> {
    let tree = g.spanning_tree();
    let rest: Vec<usize> = (0..g.num_edges()).filter(|e| !tree.contains(e)).collect();
    let mut out = Vec::new();
    for mask in 1u64..(1u64 << rest.len()) {
        let mut signs = vec![1i8; g.num_edges()];
        for (k, &e) in rest.iter().enumerate() {
            if mask >> k & 1 == 1 {
                signs[e] = -1;
            }
        }
        out.push(DoubleCover::free(g.clone(), &signs).expect("free covers are valid"));
    }
    out
}
