//! Seeded random graphs, covers and length assignments.

use std::collections::HashMap;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::graph::Graph;
use crate::linear::{qf, LinearForm, Var, Q};
use crate::morphism::DoubleCover;

/// A connected multigraph of the given genus, vertex genera zero, edges
/// `r1, r2, ...` with symbolic lengths. Built from a random spanning tree on
/// `2g - 2` vertices (one vertex for `g = 1`) plus `g` extra edges whose ends
/// are uniform, so loops and parallel edges occur.
pub fn random_graph<R: Rng>(rng: &mut R, genus: usize) -> Graph {
    let n = if genus <= 1 { 1 } else { 2 * genus - 2 };
    let mut g = Graph::new();
    for i in 0..n {
        g.add_vertex(format!("u{i}"), 0);
    }
    let mut k = 0;
    let mut add = |g: &mut Graph, a: usize, b: usize| {
        k += 1;
        let name = format!("r{k}");
        g.add_edge(name.clone(), a, b, LinearForm::named(&name));
    };
    for v in 1..n {
        let u = rng.gen_range(0..v);
        add(&mut g, u, v);
    }
    for _ in 0..genus {
        let a = rng.gen_range(0..n);
        let b = rng.gen_range(0..n);
        add(&mut g, a, b);
    }
    g
}

/// A trivalent connected multigraph of genus `g >= 2` from a random perfect
/// matching of `3(2g - 2)` half-edges; retries until connected.
pub fn random_cubic<R: Rng>(rng: &mut R, genus: usize) -> Graph {
    assert!(genus >= 2);
    let n = 2 * genus - 2;
    loop {
        let mut hs: Vec<usize> = (0..3 * n).map(|h| h / 3).collect();
        hs.shuffle(rng);
        let mut g = Graph::new();
        for i in 0..n {
            g.add_vertex(format!("u{i}"), 0);
        }
        for (k, p) in hs.chunks(2).enumerate() {
            let name = format!("r{}", k + 1);
            g.add_edge(name.clone(), p[0], p[1], LinearForm::named(&name));
        }
        if g.is_connected() {
            return g;
        }
    }
}

/// Random signs on `g` until the total space is connected.
pub fn random_free_cover<R: Rng>(rng: &mut R, g: &Graph) -> DoubleCover {
    assert!(g.b1() > 0, "a tree has no connected double cover");
    loop {
        let signs: Vec<i8> = (0..g.num_edges()).map(|_| if rng.gen() { 1 } else { -1 }).collect();
        let c = DoubleCover::free(g.clone(), &signs).expect("free covers are valid");
        if c.is_connected_cover() {
            return c;
        }
    }
}

/// Positive rationals `a/b` with `1 <= a <= 12`, `1 <= b <= 4`.
pub fn random_point<R: Rng>(rng: &mut R, vars: &[Var]) -> HashMap<Var, Q> {
    vars.iter()
        .map(|&v| (v, qf(rng.gen_range(1..=12), rng.gen_range(1..=4))))
        .collect()
}

/// Variables appearing in the edge lengths of `g`, sorted.
pub fn length_vars(g: &Graph) -> Vec<Var> {
    let mut vs: Vec<Var> = g.edges.iter().flat_map(|e| e.length.vars()).collect();
    vs.sort();
    vs.dedup();
    vs
}
