//! Half-edge multigraphs with vertex genera and linear-form edge lengths.
//!
//! Half-edge `h` belongs to edge `h / 2` and sits at `ends[h % 2]`; the
//! involution is `h ^ 1`. A loop has both half-edges at one vertex.

mod canonical;
pub mod json;

pub use canonical::{canonical_code, canonical_code_weighted};

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::linear::LinearForm;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Vertex {
    pub name: String,
    pub genus: u32,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub name: String,
    pub ends: [usize; 2],
    pub length: LinearForm,
}

impl Edge {
    pub fn is_loop(&self) -> bool {
        self.ends[0] == self.ends[1]
    }

    pub fn other(&self, v: usize) -> usize {
        if self.ends[0] == v {
            self.ends[1]
        } else {
            self.ends[0]
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Graph {
    pub vertices: Vec<Vertex>,
    pub edges: Vec<Edge>,
}

/// Result of stabilization: the stable graph plus, for each new edge, the
/// chain of original edges merged into it and, per vertex, its origin.
#[derive(Clone, Debug)]
pub struct Stabilized {
    pub graph: Graph,
    pub chains: Vec<Vec<usize>>,
    pub vertex_origin: Vec<usize>,
}

/// Union-find over `0..n`.
#[derive(Clone, Debug)]
pub struct Dsu {
    parent: Vec<usize>,
}

impl Dsu {
    pub fn new(n: usize) -> Self {
        Dsu {
            parent: (0..n).collect(),
        }
    }

    pub fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        let mut y = x;
        while self.parent[y] != r {
            let n = self.parent[y];
            self.parent[y] = r;
            y = n;
        }
        r
    }

    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra.max(rb)] = ra.min(rb);
        true
    }
}

impl Graph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_vertex(&mut self, name: impl Into<String>, genus: u32) -> usize {
        self.vertices.push(Vertex {
            name: name.into(),
            genus,
        });
        self.vertices.len() - 1
    }

    pub fn add_edge(&mut self, name: impl Into<String>, a: usize, b: usize, length: LinearForm) -> usize {
        self.edges.push(Edge {
            name: name.into(),
            ends: [a, b],
            length,
        });
        self.edges.len() - 1
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn vertex_index(&self, name: &str) -> Result<usize> {
        self.vertices
            .iter()
            .position(|v| v.name == name)
            .ok_or_else(|| Error::UnknownVertex(name.into()))
    }

    pub fn edge_index(&self, name: &str) -> Result<usize> {
        self.edges
            .iter()
            .position(|e| e.name == name)
            .ok_or_else(|| Error::UnknownEdge(name.into()))
    }

    pub fn root(&self, h: usize) -> usize {
        self.edges[h / 2].ends[h % 2]
    }

    /// Half-edges rooted at `v`, in edge order.
    pub fn half_edges_at(&self, v: usize) -> Vec<usize> {
        let mut out = Vec::new();
        for (i, e) in self.edges.iter().enumerate() {
            for s in 0..2 {
                if e.ends[s] == v {
                    out.push(2 * i + s);
                }
            }
        }
        out
    }

    pub fn valence(&self, v: usize) -> usize {
        self.edges
            .iter()
            .map(|e| (e.ends[0] == v) as usize + (e.ends[1] == v) as usize)
            .sum()
    }

    pub fn valences(&self) -> Vec<usize> {
        let mut val = vec![0; self.vertices.len()];
        for e in &self.edges {
            val[e.ends[0]] += 1;
            val[e.ends[1]] += 1;
        }
        val
    }

    pub fn euler_char(&self, v: usize) -> Result<i64> {
        if v >= self.vertices.len() {
            return Err(Error::UnknownVertex(v.to_string()));
        }
        Ok(2 - 2 * self.vertices[v].genus as i64 - self.valence(v) as i64)
    }

    pub fn euler_char_total(&self) -> i64 {
        (0..self.vertices.len()).map(|v| self.euler_char(v).unwrap()).sum()
    }

    /// Component label per vertex using only edges passing `keep`.
    pub fn components_with(&self, keep: impl Fn(usize) -> bool) -> (Vec<usize>, usize) {
        let mut d = Dsu::new(self.vertices.len());
        for (i, e) in self.edges.iter().enumerate() {
            if keep(i) {
                d.union(e.ends[0], e.ends[1]);
            }
        }
        let mut label = vec![usize::MAX; self.vertices.len()];
        let mut map: HashMap<usize, usize> = HashMap::new();
        for v in 0..self.vertices.len() {
            let r = d.find(v);
            let n = map.len();
            label[v] = *map.entry(r).or_insert(n);
        }
        let n = map.len();
        (label, n)
    }

    pub fn num_components(&self) -> usize {
        self.components_with(|_| true).1
    }

    pub fn is_connected(&self) -> bool {
        !self.vertices.is_empty() && self.num_components() == 1
    }

    /// First Betti number `|E| - |V| + #components`.
    pub fn b1(&self) -> usize {
        self.edges.len() + self.num_components() - self.vertices.len()
    }

    pub fn genus(&self) -> Result<usize> {
        if !self.is_connected() {
            return Err(Error::Disconnected);
        }
        Ok(self.b1() + self.vertices.iter().map(|v| v.genus as usize).sum::<usize>())
    }

    pub fn total_length(&self) -> LinearForm {
        self.edges.iter().fold(LinearForm::zero(), |a, e| a.add(&e.length))
    }

    pub fn with_zero_genera(&self) -> Graph {
        let mut g = self.clone();
        for v in &mut g.vertices {
            v.genus = 0;
        }
        g
    }

    /// Contracts the edges in `f`; returns the graph, the vertex map and the
    /// map from surviving old edges to new edge indices.
    pub fn contract_with_maps(&self, f: &[usize]) -> Result<(Graph, Vec<usize>, Vec<Option<usize>>)> {
        let mut inf = vec![false; self.edges.len()];
        for &e in f {
            if e >= self.edges.len() {
                return Err(Error::UnknownEdge(e.to_string()));
            }
            inf[e] = true;
        }
        let (label, n) = self.components_with(|i| inf[i]);
        let mut members: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (v, &l) in label.iter().enumerate() {
            members[l].push(v);
        }
        let mut edges_in: Vec<usize> = vec![0; n];
        for (i, e) in self.edges.iter().enumerate() {
            if inf[i] {
                edges_in[label[e.ends[0]]] += 1;
            }
        }
        let mut g = Graph::new();
        for (c, m) in members.iter().enumerate() {
            let genus: u32 = m.iter().map(|&v| self.vertices[v].genus).sum::<u32>()
                + (edges_in[c] + 1 - m.len()) as u32;
            let name = m
                .iter()
                .map(|&v| self.vertices[v].name.as_str())
                .collect::<Vec<_>>()
                .join("+");
            g.add_vertex(name, genus);
        }
        let mut emap = vec![None; self.edges.len()];
        for (i, e) in self.edges.iter().enumerate() {
            if !inf[i] {
                emap[i] = Some(g.add_edge(
                    e.name.clone(),
                    label[e.ends[0]],
                    label[e.ends[1]],
                    e.length.clone(),
                ));
            }
        }
        Ok((g, label, emap))
    }

    pub fn contract(&self, f: &[usize]) -> Result<Graph> {
        Ok(self.contract_with_maps(f)?.0)
    }

    /// Subgraph on the given vertex set using the given edges (whose ends
    /// must lie in the set). Returns the graph and the old-to-new maps.
    pub fn subgraph(&self, verts: &[usize], edges: &[usize]) -> (Graph, HashMap<usize, usize>, Vec<usize>) {
        let mut g = Graph::new();
        let mut vmap = HashMap::new();
        for &v in verts {
            vmap.insert(v, g.add_vertex(self.vertices[v].name.clone(), self.vertices[v].genus));
        }
        let mut eorig = Vec::new();
        for &i in edges {
            let e = &self.edges[i];
            g.add_edge(e.name.clone(), vmap[&e.ends[0]], vmap[&e.ends[1]], e.length.clone());
            eorig.push(i);
        }
        (g, vmap, eorig)
    }

    /// Prunes genus-0 leaves and merges genus-0 bivalent vertices, adding
    /// lengths along merged chains.
    pub fn stabilize(&self) -> Result<Stabilized> {
        let genus = self.genus()?;
        if genus < 2 {
            return Err(Error::GenusTooSmall(genus));
        }
        Ok(self.reduce())
    }

    /// Same pruning and merging as `stabilize` without the genus bound; a
    /// genus-1 cycle ends as a single loop.
    pub fn core(&self) -> Result<Stabilized> {
        let genus = self.genus()?;
        if genus < 1 {
            return Err(Error::GenusTooSmall(genus));
        }
        Ok(self.reduce())
    }

    fn reduce(&self) -> Stabilized {
        let mut alive_v = vec![true; self.vertices.len()];
        let mut edges: Vec<Option<(Edge, Vec<usize>)>> = self
            .edges
            .iter()
            .enumerate()
            .map(|(i, e)| Some((e.clone(), vec![i])))
            .collect();
        loop {
            let mut val = vec![0usize; self.vertices.len()];
            for (e, _) in edges.iter().flatten() {
                val[e.ends[0]] += 1;
                val[e.ends[1]] += 1;
            }
            let leaf = (0..self.vertices.len())
                .find(|&v| alive_v[v] && self.vertices[v].genus == 0 && val[v] == 1);
            if let Some(v) = leaf {
                let idx = edges
                    .iter()
                    .position(|x| x.as_ref().is_some_and(|(e, _)| e.ends.contains(&v)))
                    .unwrap();
                edges[idx] = None;
                alive_v[v] = false;
                continue;
            }
            let mid = (0..self.vertices.len()).find(|&v| {
                alive_v[v]
                    && self.vertices[v].genus == 0
                    && val[v] == 2
                    && !edges
                        .iter()
                        .flatten()
                        .any(|(e, _)| e.is_loop() && e.ends[0] == v)
            });
            if let Some(v) = mid {
                let idx: Vec<usize> = edges
                    .iter()
                    .enumerate()
                    .filter(|(_, x)| x.as_ref().is_some_and(|(e, _)| e.ends.contains(&v)))
                    .map(|(i, _)| i)
                    .collect();
                let (e1, c1) = edges[idx[0]].take().unwrap();
                let (e2, c2) = edges[idx[1]].take().unwrap();
                let a = e1.other(v);
                let b = e2.other(v);
                let mut chain = c1;
                chain.extend(c2);
                let merged = Edge {
                    name: format!("{}+{}", e1.name, e2.name),
                    ends: [a, b],
                    length: e1.length.add(&e2.length),
                };
                edges[idx[0]] = Some((merged, chain));
                alive_v[v] = false;
                continue;
            }
            break;
        }
        let mut g = Graph::new();
        let mut vmap = vec![usize::MAX; self.vertices.len()];
        let mut origin = Vec::new();
        for (v, vert) in self.vertices.iter().enumerate() {
            if alive_v[v] {
                vmap[v] = g.add_vertex(vert.name.clone(), vert.genus);
                origin.push(v);
            }
        }
        let mut chains = Vec::new();
        for (e, c) in edges.into_iter().flatten() {
            g.add_edge(e.name, vmap[e.ends[0]], vmap[e.ends[1]], e.length);
            chains.push(c);
        }
        Stabilized {
            graph: g,
            chains,
            vertex_origin: origin,
        }
    }

    pub fn is_stable(&self) -> bool {
        (0..self.vertices.len()).all(|v| self.euler_char(v).unwrap() < 0)
    }

    pub fn is_trivalent(&self) -> bool {
        self.valences().iter().all(|&d| d == 3)
    }

    /// Spanning tree chosen greedily in edge order.
    pub fn spanning_tree(&self) -> Vec<usize> {
        let mut d = Dsu::new(self.vertices.len());
        let mut t = Vec::new();
        for (i, e) in self.edges.iter().enumerate() {
            if d.union(e.ends[0], e.ends[1]) {
                t.push(i);
            }
        }
        t
    }

    /// Replaces every edge length by a fresh variable `{prefix}{i}`;
    /// returns the copy and the map back to the original lengths.
    pub fn symbolic_copy(&self, prefix: &str) -> (Graph, HashMap<crate::linear::Var, LinearForm>) {
        let mut g = self.clone();
        let mut back = HashMap::new();
        for (i, e) in g.edges.iter_mut().enumerate() {
            let v = crate::linear::var(&format!("{prefix}{}", i + 1));
            back.insert(v, e.length.clone());
            e.length = LinearForm::var(v);
        }
        (g, back)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{dumbbell, theta};

    #[test]
    fn genus_examples() {
        assert_eq!(theta().genus().unwrap(), 2);
        let mut g = Graph::new();
        let v = g.add_vertex("v", 1);
        g.add_edge("e", v, v, LinearForm::named("e"));
        assert_eq!(g.genus().unwrap(), 2);
        for n in 1..5 {
            let mut fs = Graph::new();
            let a = fs.add_vertex("a", 1);
            let b = fs.add_vertex("b", 1);
            for i in 0..n {
                fs.add_edge(format!("e{i}"), a, b, LinearForm::named(&format!("e{i}")));
            }
            assert_eq!(fs.genus().unwrap(), n + 1);
        }
        let mut d = Graph::new();
        d.add_vertex("a", 0);
        d.add_vertex("b", 0);
        assert_eq!(d.genus(), Err(Error::Disconnected));
    }

    #[test]
    fn euler_examples() {
        let t = theta();
        assert_eq!(t.euler_char(0).unwrap(), -1);
        let mut p = Graph::new();
        let a = p.add_vertex("a", 0);
        let b = p.add_vertex("b", 0);
        let c = p.add_vertex("c", 0);
        p.add_edge("e", a, b, LinearForm::named("e"));
        p.add_edge("f", b, c, LinearForm::named("f"));
        assert_eq!(p.euler_char(b).unwrap(), 0);
        assert_eq!(p.euler_char(a).unwrap(), 1);
        assert!(p.euler_char(7).is_err());
        assert_eq!(t.euler_char_total(), 2 - 2 * 2);
    }

    #[test]
    fn contract_examples() {
        let t = theta();
        let c = t.contract(&[0]).unwrap();
        assert_eq!(c.num_vertices(), 1);
        assert!(c.edges.iter().all(|e| e.is_loop()));
        assert_eq!(c.genus().unwrap(), 2);
        let d = dumbbell();
        let c = d.contract(&[0]).unwrap();
        assert_eq!(c.vertices[0].genus, 1);
        assert_eq!(d.contract(&[]).unwrap(), d);
    }

    #[test]
    fn stabilize_examples() {
        let mut g = Graph::new();
        let a = g.add_vertex("a", 0);
        let b = g.add_vertex("b", 0);
        let m = g.add_vertex("m", 0);
        g.add_edge("x", a, b, LinearForm::named("x"));
        g.add_edge("y", a, b, LinearForm::named("y"));
        g.add_edge("p", a, m, LinearForm::named("p"));
        g.add_edge("q", m, b, LinearForm::named("q"));
        let leaf = g.add_vertex("l", 0);
        g.add_edge("tail", m, leaf, LinearForm::named("tail"));
        let s = g.stabilize().unwrap();
        assert_eq!(s.graph.num_edges(), 3);
        assert!(s.graph.is_stable());
        let merged = s.graph.edges.iter().find(|e| e.length == LinearForm::parse("p + q").unwrap());
        assert!(merged.is_some());
        let again = s.graph.stabilize().unwrap();
        assert_eq!(again.graph, s.graph);
        assert_eq!(theta().stabilize().unwrap().graph, theta());
    }
}
