//! Harmonic morphisms, double covers and trigonal towers.

mod cover;
mod tower;

pub use cover::{enumerate_free_covers, DoubleCover, Expanded, Mark};
pub use tower::Tower;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::linear::q;

/// A map of graphs given on vertices and half-edges, with local degrees on
/// vertices and edges (both half-edges of an edge share the degree).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HarmonicMorphism {
    pub source: Graph,
    pub target: Graph,
    pub vertex_map: Vec<usize>,
    pub half_edge_map: Vec<usize>,
    pub vertex_degree: Vec<u32>,
    pub edge_degree: Vec<u32>,
}

impl HarmonicMorphism {
    pub fn edge_map(&self, e: usize) -> usize {
        self.half_edge_map[2 * e] / 2
    }

    /// Checks root and involution compatibility and the balancing condition.
    pub fn validate_combinatorial(&self) -> Result<()> {
        let s = &self.source;
        let t = &self.target;
        if self.vertex_map.len() != s.num_vertices()
            || self.half_edge_map.len() != 2 * s.num_edges()
            || self.vertex_degree.len() != s.num_vertices()
            || self.edge_degree.len() != s.num_edges()
        {
            return Err(Error::NotHarmonic("map sizes do not match the source".into()));
        }
        for h in 0..2 * s.num_edges() {
            let th = self.half_edge_map[h];
            if th >= 2 * t.num_edges() {
                return Err(Error::NotHarmonic(format!("half-edge {h} maps out of range")));
            }
            if t.root(th) != self.vertex_map[s.root(h)] {
                return Err(Error::NotHarmonic(format!(
                    "half-edge {h} of {} does not commute with roots",
                    s.edges[h / 2].name
                )));
            }
            if self.half_edge_map[h ^ 1] != th ^ 1 {
                return Err(Error::NotHarmonic(format!(
                    "edge {} does not commute with the involution",
                    s.edges[h / 2].name
                )));
            }
        }
        if self.vertex_degree.iter().chain(&self.edge_degree).any(|&d| d == 0) {
            return Err(Error::NotHarmonic("zero local degree".into()));
        }
        for v in 0..s.num_vertices() {
            let tv = self.vertex_map[v];
            for th in t.half_edges_at(tv) {
                let sum: u32 = s
                    .half_edges_at(v)
                    .into_iter()
                    .filter(|&h| self.half_edge_map[h] == th)
                    .map(|h| self.edge_degree[h / 2])
                    .sum();
                if sum != self.vertex_degree[v] {
                    return Err(Error::NotHarmonic(format!(
                        "vertex {} has degree {} but {} over a half-edge of {}",
                        s.vertices[v].name,
                        self.vertex_degree[v],
                        sum,
                        t.edges[th / 2].name
                    )));
                }
            }
        }
        Ok(())
    }

    /// Full validation including `l(f(e)) = d(e) * l(e)`.
    pub fn validate(&self) -> Result<()> {
        self.validate_combinatorial()?;
        for (i, e) in self.source.edges.iter().enumerate() {
            let te = &self.target.edges[self.edge_map(i)];
            if te.length != e.length.scale(&q(self.edge_degree[i] as i64)) {
                return Err(Error::NotHarmonic(format!("edge {} breaks the metric", e.name)));
            }
        }
        Ok(())
    }

    /// Common fiber sum over every target vertex and edge.
    pub fn global_degree(&self) -> Result<u32> {
        let t = &self.target;
        let mut vsum = vec![0u32; t.num_vertices()];
        for (v, &tv) in self.vertex_map.iter().enumerate() {
            vsum[tv] += self.vertex_degree[v];
        }
        let mut esum = vec![0u32; t.num_edges()];
        for e in 0..self.source.num_edges() {
            esum[self.edge_map(e)] += self.edge_degree[e];
        }
        let mut all = vsum.into_iter().chain(esum);
        let first = all
            .next()
            .ok_or_else(|| Error::NotHarmonic("empty target".into()))?;
        if all.all(|d| d == first) {
            Ok(first)
        } else {
            Err(Error::NotHarmonic("fiber sums differ".into()))
        }
    }

    pub fn ramification(&self, v: usize) -> Result<i64> {
        let tv = self.vertex_map[v];
        Ok(self.vertex_degree[v] as i64 * self.target.euler_char(tv)? - self.source.euler_char(v)?)
    }

    pub fn total_ramification(&self) -> i64 {
        (0..self.source.num_vertices())
            .map(|v| self.ramification(v).unwrap())
            .sum()
    }

    pub fn is_unramified(&self) -> bool {
        (0..self.source.num_vertices()).all(|v| self.ramification(v).unwrap() == 0)
    }

    pub fn is_effective(&self) -> bool {
        (0..self.source.num_vertices()).all(|v| self.ramification(v).unwrap() >= 0)
    }

    /// Contracts `f` in the target and its preimage in the source. A
    /// collapsed source component gets the degree of the map restricted to it.
    pub fn contract_morphism(&self, f: &[usize]) -> Result<HarmonicMorphism> {
        let pre: Vec<usize> = (0..self.source.num_edges())
            .filter(|&e| f.contains(&self.edge_map(e)))
            .collect();
        let (tg, tlabel, temap) = self.target.contract_with_maps(f)?;
        let (sg, slabel, semap) = self.source.contract_with_maps(&pre)?;
        let mut vertex_map = vec![usize::MAX; sg.num_vertices()];
        for v in 0..self.source.num_vertices() {
            vertex_map[slabel[v]] = tlabel[self.vertex_map[v]];
        }
        // degree over one fixed target vertex of the collapsed component
        let mut rep = vec![usize::MAX; tg.num_vertices()];
        for v in 0..self.target.num_vertices() {
            if rep[tlabel[v]] == usize::MAX {
                rep[tlabel[v]] = v;
            }
        }
        let mut vertex_degree = vec![0u32; sg.num_vertices()];
        for v in 0..self.source.num_vertices() {
            let tv = self.vertex_map[v];
            if rep[tlabel[tv]] == tv {
                vertex_degree[slabel[v]] += self.vertex_degree[v];
            }
        }
        let mut half_edge_map = vec![0; 2 * sg.num_edges()];
        let mut edge_degree = vec![0; sg.num_edges()];
        for e in 0..self.source.num_edges() {
            if let Some(ne) = semap[e] {
                for side in 0..2 {
                    let th = self.half_edge_map[2 * e + side];
                    let nte = temap[th / 2].expect("image edge survives");
                    half_edge_map[2 * ne + side] = 2 * nte + th % 2;
                }
                edge_degree[ne] = self.edge_degree[e];
            }
        }
        let m = HarmonicMorphism {
            source: sg,
            target: tg,
            vertex_map,
            half_edge_map,
            vertex_degree,
            edge_degree,
        };
        m.validate_combinatorial()?;
        Ok(m)
    }

    pub fn identity(g: &Graph) -> HarmonicMorphism {
        HarmonicMorphism {
            source: g.clone(),
            target: g.clone(),
            vertex_map: (0..g.num_vertices()).collect(),
            half_edge_map: (0..2 * g.num_edges()).collect(),
            vertex_degree: vec![1; g.num_vertices()],
            edge_degree: vec![1; g.num_edges()],
        }
    }
}
