//! Canonical codes by colour refinement with individualisation, and an
//! AHU-style code for trees.

use std::collections::BTreeMap;

use super::Graph;

fn labels(g: &Graph, with_lengths: bool) -> Vec<String> {
    g.edges
        .iter()
        .map(|e| if with_lengths { e.length.to_string() } else { String::new() })
        .collect()
}

fn adjacency(g: &Graph, lab: &[String]) -> Vec<Vec<(usize, usize)>> {
    // (neighbour, label id) per half-edge at each vertex
    let mut ids: BTreeMap<&str, usize> = BTreeMap::new();
    for l in lab {
        let n = ids.len();
        ids.entry(l.as_str()).or_insert(n);
    }
    // label ids must not depend on edge order
    let sorted: Vec<&str> = ids.keys().copied().collect();
    let rank = |s: &str| sorted.iter().position(|x| *x == s).unwrap();
    let mut adj = vec![Vec::new(); g.num_vertices()];
    for (i, e) in g.edges.iter().enumerate() {
        let l = rank(&lab[i]);
        adj[e.ends[0]].push((e.ends[1], l));
        adj[e.ends[1]].push((e.ends[0], l));
    }
    adj
}

fn rank_of<T: Ord + Clone>(sigs: &[T]) -> Vec<usize> {
    let mut u: Vec<T> = sigs.to_vec();
    u.sort();
    u.dedup();
    sigs.iter().map(|s| u.binary_search(s).unwrap()).collect()
}

fn refine(adj: &[Vec<(usize, usize)>], colors: Vec<usize>) -> Vec<usize> {
    let mut c = colors;
    loop {
        let sigs: Vec<(usize, Vec<(usize, usize)>)> = (0..c.len())
            .map(|v| {
                let mut nb: Vec<(usize, usize)> = adj[v].iter().map(|&(u, l)| (c[u], l)).collect();
                nb.sort();
                (c[v], nb)
            })
            .collect();
        let n = rank_of(&sigs);
        let before = distinct(&c);
        let after = distinct(&n);
        c = n;
        if after == before {
            return c;
        }
    }
}

fn distinct(c: &[usize]) -> usize {
    let mut u = c.to_vec();
    u.sort();
    u.dedup();
    u.len()
}

fn encode(g: &Graph, lab: &[String], order: &[usize]) -> Vec<u8> {
    // order[v] = position of v
    let mut verts: Vec<(usize, u32)> = (0..g.num_vertices()).map(|v| (order[v], g.vertices[v].genus)).collect();
    verts.sort();
    let mut edges: Vec<(usize, usize, &str)> = g
        .edges
        .iter()
        .enumerate()
        .map(|(i, e)| {
            let (a, b) = (order[e.ends[0]], order[e.ends[1]]);
            (a.min(b), a.max(b), lab[i].as_str())
        })
        .collect();
    edges.sort();
    let mut s = String::new();
    s.push_str(&format!("V{}:", verts.len()));
    for (_, gen) in verts {
        s.push_str(&format!("{gen},"));
    }
    s.push_str("E:");
    for (a, b, l) in edges {
        s.push_str(&format!("{a}-{b}[{l}],"));
    }
    s.into_bytes()
}

fn search(g: &Graph, lab: &[String], adj: &[Vec<(usize, usize)>], colors: Vec<usize>, best: &mut Option<Vec<u8>>) {
    let c = refine(adj, colors);
    let n = c.len();
    if distinct(&c) == n {
        let code = encode(g, lab, &c);
        if best.as_ref().is_none_or(|b| code < *b) {
            *best = Some(code);
        }
        return;
    }
    // smallest colour class with more than one member
    let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
    for &x in &c {
        *counts.entry(x).or_default() += 1;
    }
    let target = counts
        .iter()
        .filter(|(_, &k)| k > 1)
        .min_by_key(|(&col, &k)| (k, col))
        .map(|(&col, _)| col)
        .unwrap();
    for v in 0..n {
        if c[v] != target {
            continue;
        }
        let sigs: Vec<(usize, usize)> = (0..n).map(|u| (c[u], (u != v) as usize)).collect();
        search(g, lab, adj, rank_of(&sigs), best);
    }
}

fn general_code(g: &Graph, with_lengths: bool) -> Vec<u8> {
    let lab = labels(g, with_lengths);
    let adj = adjacency(g, &lab);
    let init: Vec<(u32, usize)> = (0..g.num_vertices())
        .map(|v| (g.vertices[v].genus, adj[v].len()))
        .collect();
    let mut best = None;
    search(g, &lab, &adj, rank_of(&init), &mut best);
    let mut out = b"G".to_vec();
    out.extend(best.unwrap_or_default());
    out
}

fn is_tree(g: &Graph) -> bool {
    g.is_connected() && g.num_edges() + 1 == g.num_vertices()
}

fn tree_code(g: &Graph, with_lengths: bool) -> Vec<u8> {
    let lab = labels(g, with_lengths);
    let n = g.num_vertices();
    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    for (i, e) in g.edges.iter().enumerate() {
        adj[e.ends[0]].push((e.ends[1], i));
        adj[e.ends[1]].push((e.ends[0], i));
    }
    // centers by repeated leaf stripping
    let mut deg: Vec<usize> = adj.iter().map(|a| a.len()).collect();
    let mut layer: Vec<usize> = (0..n).filter(|&v| deg[v] <= 1).collect();
    let mut left = n;
    while left > 2 {
        left -= layer.len();
        let mut next = Vec::new();
        for &v in &layer {
            for &(u, _) in &adj[v] {
                if deg[u] > 1 {
                    deg[u] -= 1;
                    if deg[u] == 1 {
                        next.push(u);
                    }
                }
            }
            deg[v] = 0;
        }
        layer = next;
    }
    fn rooted(v: usize, parent: usize, g: &Graph, adj: &[Vec<(usize, usize)>], lab: &[String]) -> String {
        let mut kids: Vec<String> = adj[v]
            .iter()
            .filter(|(u, _)| *u != parent)
            .map(|&(u, e)| format!("[{}]{}", lab[e], rooted(u, v, g, adj, lab)))
            .collect();
        kids.sort();
        format!("({}{})", g.vertices[v].genus, kids.concat())
    }
    let code = layer
        .iter()
        .map(|&c| rooted(c, usize::MAX, g, &adj, &lab))
        .min()
        .unwrap_or_default();
    let mut out = b"T".to_vec();
    out.extend(code.into_bytes());
    out
}

/// Isomorphism invariant of the weighted graph (genera, no lengths).
pub fn canonical_code(g: &Graph) -> Vec<u8> {
    if is_tree(g) {
        tree_code(g, false)
    } else {
        general_code(g, false)
    }
}

/// Same, with edge lengths as labels.
pub fn canonical_code_weighted(g: &Graph) -> Vec<u8> {
    if is_tree(g) {
        tree_code(g, true)
    } else {
        general_code(g, true)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{dumbbell, theta};
    use crate::linear::LinearForm;

    fn path_and_star() -> (Graph, Graph) {
        let mut p = Graph::new();
        for i in 0..5 {
            p.add_vertex(i.to_string(), 0);
        }
        for i in 0..4 {
            p.add_edge(format!("e{i}"), i, i + 1, LinearForm::named("x"));
        }
        let mut s = Graph::new();
        for i in 0..5 {
            s.add_vertex(i.to_string(), 0);
        }
        for i in 1..5 {
            s.add_edge(format!("e{i}"), 0, i, LinearForm::named("x"));
        }
        (p, s)
    }

    #[test]
    fn relabeled_theta_matches() {
        let t = theta();
        let mut r = Graph::new();
        let b = r.add_vertex("B", 0);
        let a = r.add_vertex("A", 0);
        r.add_edge("z", b, a, LinearForm::named("z"));
        r.add_edge("x", a, b, LinearForm::named("x"));
        r.add_edge("y", b, a, LinearForm::named("y"));
        assert_eq!(canonical_code(&t), canonical_code(&r));
        assert_ne!(canonical_code(&t), canonical_code(&dumbbell()));
    }

    #[test]
    fn trees_distinguished() {
        let (p, s) = path_and_star();
        assert_ne!(canonical_code(&p), canonical_code(&s));
    }
}
