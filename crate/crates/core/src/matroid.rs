//! Graphic matroids and the signed (co)graphic matroid of a double cover.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::graph::{Dsu, Graph};
use crate::morphism::{DoubleCover, Mark};
use crate::poly::Polynomial;

/// Calls `f` on every `k`-subset of `items` (lexicographic order).
pub(crate) fn for_each_subset(items: &[usize], k: usize, f: &mut dyn FnMut(&[usize])) {
    fn rec(items: &[usize], k: usize, start: usize, cur: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
        if cur.len() == k {
            f(cur);
            return;
        }
        let need = k - cur.len();
        for i in start..items.len() {
            if items.len() - i < need {
                break;
            }
            cur.push(items[i]);
            rec(items, k, i + 1, cur, f);
            cur.pop();
        }
    }
    rec(items, k, 0, &mut Vec::with_capacity(k), f);
}

fn is_acyclic(g: &Graph, set: &[usize]) -> bool {
    let mut d = Dsu::new(g.num_vertices());
    set.iter().all(|&e| d.union(g.edges[e].ends[0], g.edges[e].ends[1]))
}

/// Acyclic edge sets of size `k`.
pub fn independent_sets_k(g: &Graph, k: usize) -> Result<Vec<Vec<usize>>> {
    let rank = g.num_vertices() - g.num_components();
    if k > rank {
        return Err(Error::OutOfRange(format!("size {k} exceeds rank {rank}")));
    }
    let all: Vec<usize> = (0..g.num_edges()).collect();
    let mut out = Vec::new();
    for_each_subset(&all, k, &mut |s| {
        if is_acyclic(g, s) {
            out.push(s.to_vec());
        }
    });
    Ok(out)
}

/// Edge sets of spanning trees.
pub fn spanning_trees(g: &Graph) -> Result<Vec<Vec<usize>>> {
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    independent_sets_k(g, g.num_vertices() - 1)
}

/// Product of the lengths of the listed edges.
pub fn weight(g: &Graph, edges: impl IntoIterator<Item = usize>) -> Polynomial {
    let mut p = Polynomial::one();
    for e in edges {
        p = p.mul(&Polynomial::from_linear(&g.edges[e].length));
    }
    p
}

/// A basis of the signed cographic matroid with its component count and
/// index `4^(c-1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoBasis {
    pub set: Vec<usize>,
    pub components: usize,
    pub index: u64,
}

#[derive(Clone, Debug)]
pub struct SignedMatroid {
    pub cover: DoubleCover,
    pub ground: Vec<usize>,
    pub rank: usize,
    pub cobases: Vec<CoBasis>,
}

impl SignedMatroid {
    pub fn new(cover: &DoubleCover) -> Result<SignedMatroid> {
        let rank = cover.torus_rank()?;
        let ground = cover.undilated_edges();
        let mut cobases = Vec::new();
        for_each_subset(&ground, rank, &mut |f| {
            if let Some(c) = cographic_components(cover, f) {
                cobases.push(CoBasis {
                    set: f.to_vec(),
                    components: c,
                    index: 4u64.pow(c as u32 - 1),
                });
            }
        });
        Ok(SignedMatroid {
            cover: cover.clone(),
            ground,
            rank,
            cobases,
        })
    }

    pub fn graphic_rank(&self) -> usize {
        self.ground.len() - self.rank
    }

    /// Graphic bases `E_ud \ F` with the index of `F`.
    pub fn graphic_bases(&self) -> Vec<(Vec<usize>, u64)> {
        self.cobases
            .iter()
            .map(|b| {
                let t: Vec<usize> = self.ground.iter().copied().filter(|e| !b.set.contains(e)).collect();
                (t, b.index)
            })
            .collect()
    }

    pub fn is_cographic_independent(&self, f: &[usize]) -> bool {
        f.iter().all(|e| self.ground.contains(e)) && cographic_components(&self.cover, f).is_some()
    }

    /// 4 when `e` is a bridge with both sides unbalanced, else 1.
    pub fn edge_index(&self, e: usize) -> Result<u64> {
        if !self.ground.contains(&e) {
            return Err(Error::OutOfRange(format!("edge {e} is dilated or unknown")));
        }
        let (label, unb) = self.cover.component_balance(|i| i != e);
        let two = unb.len() == 2;
        let _ = label;
        Ok(if two && unb.iter().all(|&u| u) { 4 } else { 1 })
    }

    /// Same value through `min over bases containing e of i(B)`, kept as a
    /// cross-check.
    pub fn edge_index_by_bases(&self, e: usize) -> Option<u64> {
        self.cobases
            .iter()
            .filter(|b| b.set.contains(&e))
            .map(|b| b.index)
            .min()
    }

    /// Graphic-independent sets of size `graphic_rank - 1`.
    pub fn near_bases(&self) -> Vec<Vec<usize>> {
        let mut s: BTreeSet<Vec<usize>> = BTreeSet::new();
        for (t, _) in self.graphic_bases() {
            for i in 0..t.len() {
                let mut f = t.clone();
                f.remove(i);
                s.insert(f);
            }
        }
        s.into_iter().collect()
    }

    /// Weight and index of a graphic-independent set of size `rank - 1`:
    /// `i(F) = min over e in dF of i(F + e) i(e)`.
    pub fn independent_index(&self, f: &[usize]) -> Result<(Polynomial, u64)> {
        let r = self.graphic_rank();
        if r == 0 || f.len() + 1 != r {
            return Err(Error::OutOfRange(format!("expected {} edges, got {}", r.saturating_sub(1), f.len())));
        }
        let bases = self.graphic_bases();
        let mut best: Option<u64> = None;
        for &e in &self.ground {
            if f.contains(&e) {
                continue;
            }
            let mut t: Vec<usize> = f.to_vec();
            t.push(e);
            t.sort();
            if let Some((_, i)) = bases.iter().find(|(b, _)| *b == t) {
                let v = i * self.edge_index(e)?;
                best = Some(best.map_or(v, |b| b.min(v)));
            }
        }
        let idx = best.ok_or(Error::Dependent)?;
        let rest = self.ground.iter().copied().filter(|e| !f.contains(e));
        Ok((weight(&self.cover.base, rest), idx))
    }

    /// FS_n sets: `n` undilated edges whose removal leaves exactly two
    /// unbalanced components while removing any `n - 1` of them keeps the
    /// graph connected.
    pub fn fs_sets(&self, n: usize) -> Vec<Vec<usize>> {
        fs_sets(&self.cover, n)
    }
}

/// Component count of `Gamma \ F` when every component is unbalanced.
fn cographic_components(c: &DoubleCover, f: &[usize]) -> Option<usize> {
    let n = c.base.num_vertices();
    // lift nodes 2v, 2v+1; a component is unbalanced iff some vertex has
    // both lifts joined
    let mut d = Dsu::new(2 * n);
    let mut b = Dsu::new(n);
    for v in 0..n {
        if c.dilated[v] {
            d.union(2 * v, 2 * v + 1);
        }
    }
    for (i, e) in c.base.edges.iter().enumerate() {
        if f.contains(&i) {
            continue;
        }
        let [x, y] = e.ends;
        b.union(x, y);
        match c.marks[i] {
            Mark::Dilated => {
                d.union(2 * x, 2 * y);
            }
            Mark::Plus => {
                d.union(2 * x, 2 * y);
                d.union(2 * x + 1, 2 * y + 1);
            }
            Mark::Minus => {
                d.union(2 * x, 2 * y + 1);
                d.union(2 * x + 1, 2 * y);
            }
        }
    }
    let mut unb = vec![false; n];
    let mut roots = 0;
    for v in 0..n {
        let r = b.find(v);
        if r == v {
            roots += 1;
        }
        if d.find(2 * v) == d.find(2 * v + 1) {
            unb[r] = true;
        }
    }
    (0..n).filter(|&v| b.find(v) == v).all(|v| unb[v]).then_some(roots)
}

pub fn fs_sets(c: &DoubleCover, n: usize) -> Vec<Vec<usize>> {
    let ground = c.undilated_edges();
    let mut out = Vec::new();
    if n == 0 {
        return out;
    }
    for_each_subset(&ground, n, &mut |f| {
        let (_, unb) = c.component_balance(|i| !f.contains(&i));
        if unb.len() != 2 || !unb.iter().all(|&u| u) {
            return;
        }
        for skip in 0..n {
            let sub: Vec<usize> = f.iter().enumerate().filter(|(j, _)| *j != skip).map(|(_, &e)| e).collect();
            if c.base.components_with(|i| !sub.contains(&i)).1 != 1 {
                return;
            }
        }
        out.push(f.to_vec());
    });
    out
}

pub fn is_unbalanced(c: &DoubleCover, verts: &[usize], edges: &[usize]) -> Result<bool> {
    c.is_unbalanced(verts, edges)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{dumbbell, theta};
    use crate::linear::LinearForm;
    use crate::fixtures::{dumbbell_cover, fs_cover, two_loops_cover};

    fn cycle4() -> Graph {
        let mut g = Graph::new();
        for i in 0..4 {
            g.add_vertex(format!("v{i}"), 0);
        }
        for i in 0..4 {
            g.add_edge(format!("e{i}"), i, (i + 1) % 4, LinearForm::named(&format!("e{i}")));
        }
        g
    }

    #[test]
    fn spanning_tree_examples() {
        assert_eq!(spanning_trees(&theta()).unwrap(), vec![vec![0], vec![1], vec![2]]);
        let mut l = Graph::new();
        let v = l.add_vertex("v", 0);
        l.add_edge("e", v, v, LinearForm::named("e"));
        assert_eq!(spanning_trees(&l).unwrap(), vec![Vec::<usize>::new()]);
        assert_eq!(spanning_trees(&cycle4()).unwrap().len(), 4);
        assert_eq!(independent_sets_k(&theta(), 0).unwrap().len(), 1);
        assert_eq!(independent_sets_k(&theta(), 1).unwrap().len(), 3);
        assert!(independent_sets_k(&theta(), 2).is_err());
        assert_eq!(spanning_trees(&dumbbell()).unwrap(), vec![vec![1]]);
    }

    #[test]
    fn cographic_examples() {
        let m = SignedMatroid::new(&dumbbell_cover()).unwrap();
        let got: Vec<(Vec<usize>, usize, u64)> =
            m.cobases.iter().map(|b| (b.set.clone(), b.components, b.index)).collect();
        assert_eq!(got, vec![(vec![0], 1, 1), (vec![1], 2, 4), (vec![2], 1, 1)]);
        let m2 = SignedMatroid::new(&two_loops_cover()).unwrap();
        assert_eq!(m2.cobases.len(), 2);
        assert!(m2.cobases.iter().all(|b| b.index == 1));
        let fs = SignedMatroid::new(&fs_cover(3)).unwrap();
        assert_eq!(fs.cobases.len(), 1);
        assert_eq!(fs.cobases[0].set, vec![0, 1, 2]);
        assert_eq!(fs.cobases[0].index, 4);
    }

    #[test]
    fn edge_indices() {
        let m = SignedMatroid::new(&dumbbell_cover()).unwrap();
        assert_eq!(m.edge_index(1).unwrap(), 4);
        assert_eq!(m.edge_index(0).unwrap(), 1);
        for e in 0..3 {
            assert_eq!(Some(m.edge_index(e).unwrap()), m.edge_index_by_bases(e));
        }
        let t = SignedMatroid::new(&DoubleCover::free(theta(), &[1, 1, -1]).unwrap()).unwrap();
        assert!((0..3).all(|e| t.edge_index(e).unwrap() == 1));
    }

    #[test]
    fn independent_index_examples() {
        let m = SignedMatroid::new(&dumbbell_cover()).unwrap();
        let p = |s: &str| Polynomial::parse(s).unwrap();
        assert_eq!(m.independent_index(&[0]).unwrap(), (p("f*g2"), 4));
        assert_eq!(m.independent_index(&[1]).unwrap(), (p("g1*g2"), 1));
        assert_eq!(m.independent_index(&[2]).unwrap(), (p("f*g1"), 4));
        assert!(m.independent_index(&[0, 1]).is_err());
    }

    #[test]
    fn fs_examples() {
        // two unbalanced genus-1 ends joined by e and f
        let mut g = Graph::new();
        let a = g.add_vertex("a", 0);
        let b = g.add_vertex("b", 0);
        g.add_edge("la", a, a, LinearForm::named("la"));
        g.add_edge("e", a, b, LinearForm::named("e"));
        g.add_edge("f", a, b, LinearForm::named("f"));
        g.add_edge("lb", b, b, LinearForm::named("lb"));
        let c = DoubleCover::free(g, &[-1, 1, 1, -1]).unwrap();
        assert_eq!(fs_sets(&c, 2), vec![vec![1, 2]]);
        let t = DoubleCover::free(theta(), &[1, 1, -1]).unwrap();
        assert!(fs_sets(&t, 2).is_empty());
        assert!(fs_sets(&t, 1).is_empty());
    }

    #[test]
    fn unbalanced_examples() {
        let c = dumbbell_cover();
        assert!(is_unbalanced(&c, &[0], &[0]).unwrap());
        assert!(!is_unbalanced(&c, &[0, 1], &[1]).unwrap());
        let even = DoubleCover::free(cycle4(), &[1, -1, 1, -1]).unwrap();
        assert!(!is_unbalanced(&even, &[0, 1, 2, 3], &[0, 1, 2, 3]).unwrap());
        assert!(is_unbalanced(&c, &[0, 1], &[0]).is_err());
    }
}
