//! Enumeration of generic trigonal towers and the verification sweep.
//!
//! Stages: trees of maximal valence 3 with `2g + 1` edges, type markings of
//! their edges, monodromy labels, realized degree-3 maps filtered for
//! genericity, and finally every nontrivial free double cover of the source.
//! Trees come from the Wright-Richmond-Odlyzko-McKay generator; its vertex
//! numbering fixes which edge is normalized at a type III vertex, so the
//! labelled counts depend on it. Isomorphic structures are not merged.

use std::collections::BTreeMap;
use std::time::Instant;

use rayon::prelude::*;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::linear::{qf, LinearForm, Var, Q};
use crate::moments::{AppendixReading, PrymOptions};
use crate::morphism::{enumerate_free_covers, HarmonicMorphism, Tower};
use crate::trigonal::verify_tower;

use num_traits::Zero;

// ---------------------------------------------------------------- trees

fn next_rooted_tree(pred: &[usize], p: Option<usize>) -> Option<Vec<usize>> {
    let p = match p {
        Some(p) => p,
        None => {
            let mut p = pred.len() - 1;
            while pred[p] == 1 {
                p -= 1;
            }
            p
        }
    };
    if p == 0 {
        return None;
    }
    let mut q = p - 1;
    while pred[q] != pred[p] - 1 {
        q -= 1;
    }
    let mut r = pred.to_vec();
    for i in p..r.len() {
        r[i] = r[i - p + q];
    }
    Some(r)
}

fn split_tree(layout: &[usize]) -> (Vec<usize>, Vec<usize>) {
    let m = layout
        .iter()
        .enumerate()
        .filter(|(_, &x)| x == 1)
        .nth(1)
        .map(|(i, _)| i)
        .unwrap_or(layout.len());
    let left = layout[1..m].iter().map(|x| x - 1).collect();
    let mut rest = vec![0];
    rest.extend_from_slice(&layout[m..]);
    (left, rest)
}

fn next_tree(cand: Vec<usize>) -> Option<Vec<usize>> {
    let (left, rest) = split_tree(&cand);
    let lh = left.iter().max().copied().unwrap_or(0);
    let rh = rest.iter().max().copied().unwrap_or(0);
    let mut valid = rh >= lh;
    if valid && rh == lh {
        if left.len() > rest.len() || (left.len() == rest.len() && left > rest) {
            valid = false;
        }
    }
    if valid {
        return Some(cand);
    }
    let p = left.len();
    let mut new = next_rooted_tree(&cand, Some(p))?;
    if cand[p] > 2 {
        let (nl, _) = split_tree(&new);
        let nlh = nl.iter().max().copied().unwrap_or(0);
        let n = new.len();
        for (k, v) in (1..=nlh + 1).enumerate() {
            new[n - (nlh + 1) + k] = v;
        }
    }
    Some(new)
}

fn layout_edges(layout: &[usize]) -> Vec<[usize; 2]> {
    let mut stack: Vec<usize> = Vec::new();
    let mut edges = Vec::new();
    for i in 0..layout.len() {
        if let Some(mut j) = stack.last().copied() {
            while layout[j] >= layout[i] {
                stack.pop();
                j = *stack.last().expect("root has level 0");
            }
            edges.push([j.min(i), j.max(i)]);
        }
        stack.push(i);
    }
    edges.sort();
    edges
}

/// Level sequences of all free trees on `order` vertices.
fn free_tree_layouts(order: usize) -> Vec<Vec<usize>> {
    if order == 1 {
        return vec![vec![0]];
    }
    let mut out = Vec::new();
    let mut layout: Option<Vec<usize>> =
        Some((0..=order / 2).chain(1..order.div_ceil(2)).collect());
    while let Some(l) = layout {
        match next_tree(l) {
            Some(t) => {
                layout = next_rooted_tree(&t, None);
                out.push(t);
            }
            None => layout = None,
        }
    }
    out
}

pub fn tree_variable(k: usize) -> Var {
    crate::linear::var(&format!("t{}", k + 1))
}

/// All trees with `n_edges` edges and maximal valence 3, up to isomorphism.
/// Vertex `i` is `v{i}`; edges `t1, t2, ...` are sorted by endpoints, run
/// from the smaller to the larger vertex and have length `t{k}`.
pub fn trivalent_trees(n_edges: usize) -> Vec<Graph> {
    free_tree_layouts(n_edges + 1)
        .into_iter()
        .map(|l| layout_edges(&l))
        .filter(|edges| {
            let mut val = vec![0; n_edges + 1];
            for e in edges {
                val[e[0]] += 1;
                val[e[1]] += 1;
            }
            val.iter().all(|&d| d <= 3)
        })
        .map(|edges| {
            let mut g = Graph::new();
            for i in 0..=n_edges {
                g.add_vertex(format!("v{i}"), 0);
            }
            for (k, [a, b]) in edges.into_iter().enumerate() {
                g.add_edge(format!("t{}", k + 1), a, b, LinearForm::var(tree_variable(k)));
            }
            g
        })
        .collect()
}

// ---------------------------------------------------------------- types

/// Number of preimages: I has one point of degree 3, II has points of degree
/// 1 and 2, III has three points of degree 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Kind {
    I = 1,
    II = 2,
    III = 3,
}

impl Kind {
    const ALL: [Kind; 3] = [Kind::I, Kind::II, Kind::III];

    /// Preimage label of sheet `i`.
    fn label(self, i: usize) -> usize {
        match self {
            Kind::I => 0,
            Kind::II => (i > 0) as usize,
            Kind::III => i,
        }
    }

    fn degrees(self) -> &'static [u32] {
        match self {
            Kind::I => &[3],
            Kind::II => &[1, 2],
            Kind::III => &[1, 1, 1],
        }
    }

    fn roman(self) -> &'static str {
        match self {
            Kind::I => "I",
            Kind::II => "II",
            Kind::III => "III",
        }
    }
}

/// Vertex type forced by the incident edge types, if the combination is
/// allowed.
pub fn vertex_kind(incident: &[Kind]) -> Option<Kind> {
    use Kind::*;
    let mut s = incident.to_vec();
    s.sort();
    match s.as_slice() {
        [I] | [I, II] | [I, I, III] | [I, II, II] => Some(I),
        [III] | [II, III] | [II, II, III] => Some(II),
        [III, III, III] => Some(III),
        _ => None,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TypedTree {
    pub tree: Graph,
    pub edge_type: Vec<Kind>,
    pub vertex_type: Vec<Kind>,
}

/// Every admissible marking, edge types varying fastest on the last edge.
pub fn type_markings(t: &Graph) -> Vec<TypedTree> {
    let n = t.num_edges();
    let inc: Vec<Vec<usize>> = (0..t.num_vertices())
        .map(|v| (0..n).filter(|&e| t.edges[e].ends.contains(&v)).collect())
        .collect();
    let mut out = Vec::new();
    let mut types = vec![Kind::I; n];
    loop {
        let vt: Option<Vec<Kind>> = inc
            .iter()
            .map(|es| vertex_kind(&es.iter().map(|&e| types[e]).collect::<Vec<_>>()))
            .collect();
        if let Some(vt) = vt {
            out.push(TypedTree {
                tree: t.clone(),
                edge_type: types.clone(),
                vertex_type: vt,
            });
        }
        // odometer
        let mut k = n;
        loop {
            if k == 0 {
                return out;
            }
            k -= 1;
            let pos = Kind::ALL.iter().position(|&x| x == types[k]).unwrap();
            if pos < 2 {
                types[k] = Kind::ALL[pos + 1];
                break;
            }
            types[k] = Kind::I;
        }
    }
}

// ---------------------------------------------------------------- monodromy

pub type Perm = [usize; 3];
const ID: Perm = [0, 1, 2];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonodromyTree {
    pub typed: TypedTree,
    pub sigma: Vec<Perm>,
}

fn choices(e: Kind, a: Kind, b: Kind) -> Vec<Perm> {
    if e != Kind::III || a == Kind::I || b == Kind::I {
        return vec![ID];
    }
    match (a.min(b), a.max(b)) {
        (Kind::II, Kind::II) => vec![ID, [1, 0, 2]],
        (Kind::II, Kind::III) => vec![ID, [1, 0, 2], [2, 1, 0]],
        _ => vec![[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]],
    }
}

/// Edges whose label is fixed to the identity: at each type III vertex, in
/// increasing order, the first incident edge not already fixed.
fn normalized_edges(tt: &TypedTree) -> Vec<bool> {
    let t = &tt.tree;
    let mut forced = vec![false; t.num_edges()];
    for v in 0..t.num_vertices() {
        if tt.vertex_type[v] != Kind::III {
            continue;
        }
        if let Some(e) = (0..t.num_edges()).find(|&e| t.edges[e].ends.contains(&v) && !forced[e]) {
            forced[e] = true;
        }
    }
    forced
}

pub fn monodromy_assignments(tt: &TypedTree) -> Vec<MonodromyTree> {
    let t = &tt.tree;
    let forced = normalized_edges(tt);
    let opts: Vec<Vec<Perm>> = (0..t.num_edges())
        .map(|e| {
            if forced[e] {
                vec![ID]
            } else {
                let [a, b] = t.edges[e].ends;
                choices(tt.edge_type[e], tt.vertex_type[a], tt.vertex_type[b])
            }
        })
        .collect();
    let mut out = Vec::new();
    let mut idx = vec![0usize; opts.len()];
    loop {
        out.push(MonodromyTree {
            typed: tt.clone(),
            sigma: idx.iter().zip(&opts).map(|(&i, o)| o[i]).collect(),
        });
        let mut k = opts.len();
        loop {
            if k == 0 {
                return out;
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < opts[k].len() {
                break;
            }
            idx[k] = 0;
        }
    }
}

pub fn monodromy_count(tt: &TypedTree) -> usize {
    let t = &tt.tree;
    let forced = normalized_edges(tt);
    (0..t.num_edges())
        .map(|e| {
            if forced[e] {
                1
            } else {
                let [a, b] = t.edges[e].ends;
                choices(tt.edge_type[e], tt.vertex_type[a], tt.vertex_type[b]).len()
            }
        })
        .product()
}

// ---------------------------------------------------------------- realization

/// Glues the source graph from sheet labels: the lift of sheet `i` of edge
/// `e = (a, b)` runs from preimage `label(a, i)` to preimage
/// `label(b, σ_e(i))`. Returns `None` if the source is disconnected.
pub fn realize_trigonal(mt: &MonodromyTree) -> Option<HarmonicMorphism> {
    let tt = &mt.typed;
    let t = &tt.tree;
    let mut g = Graph::new();
    let mut vid = Vec::new();
    let mut vertex_map = Vec::new();
    let mut vertex_degree = Vec::new();
    for v in 0..t.num_vertices() {
        let k = tt.vertex_type[v];
        let ids: Vec<usize> = k
            .degrees()
            .iter()
            .enumerate()
            .map(|(j, &d)| {
                vertex_map.push(v);
                vertex_degree.push(d);
                g.add_vertex(format!("{}_{j}", t.vertices[v].name), 0)
            })
            .collect();
        vid.push(ids);
    }
    let mut half_edge_map = Vec::new();
    let mut edge_degree = Vec::new();
    for (e, edge) in t.edges.iter().enumerate() {
        let [a, b] = edge.ends;
        let k = tt.edge_type[e];
        let mut ends: Vec<Option<[usize; 2]>> = vec![None; k.degrees().len()];
        for i in 0..3 {
            let s = vid[a][tt.vertex_type[a].label(i)];
            let r = vid[b][tt.vertex_type[b].label(mt.sigma[e][i])];
            match ends[k.label(i)] {
                None => ends[k.label(i)] = Some([s, r]),
                Some(x) if x == [s, r] => {}
                Some(_) => return None,
            }
        }
        for (j, (&d, ends)) in k.degrees().iter().zip(ends).enumerate() {
            let [s, r] = ends.expect("every label is hit");
            g.add_edge(
                format!("{}_{j}", edge.name),
                s,
                r,
                edge.length.scale(&qf(1, d as i64)),
            );
            half_edge_map.extend([2 * e, 2 * e + 1]);
            edge_degree.push(d);
        }
    }
    if !g.is_connected() {
        return None;
    }
    Some(HarmonicMorphism {
        source: g,
        target: t.clone(),
        vertex_map,
        half_edge_map,
        vertex_degree,
        edge_degree,
    })
}

/// Rank of a rational matrix.
pub fn rank(rows: &[Vec<Q>]) -> usize {
    let mut m: Vec<Vec<Q>> = rows.to_vec();
    let cols = m.first().map_or(0, |r| r.len());
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let piv = m[r][c].clone();
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone() / piv.clone();
                for j in c..cols {
                    let x = m[r][j].clone() * f.clone();
                    m[i][j] -= x;
                }
            }
        }
        r += 1;
    }
    r
}

/// The stable model has `3g - 3` edges whose lengths are independent linear
/// functions of the tree's edge lengths.
pub fn genericity_filter(f: &HarmonicMorphism) -> bool {
    let Ok(g) = f.source.genus() else {
        return false;
    };
    if g < 2 {
        return false;
    }
    let Ok(st) = f.source.stabilize() else {
        return false;
    };
    let edges = &st.graph.edges;
    if edges.len() != 3 * g - 3 {
        return false;
    }
    let vars: Vec<Var> = (0..f.target.num_edges()).map(tree_variable).collect();
    let rows: Vec<Vec<Q>> = edges
        .iter()
        .map(|e| vars.iter().map(|&v| e.length.coeff(v)).collect())
        .collect();
    rank(&rows) == 3 * g - 3
}

// ---------------------------------------------------------------- pipeline

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct StageCounts {
    pub trees: usize,
    pub typed: usize,
    pub monodromy: usize,
    pub connected: usize,
    pub generic: usize,
    pub covers: usize,
}

impl StageCounts {
    pub fn to_json(&self) -> Value {
        json!({
            "trees": self.trees,
            "typed": self.typed,
            "monodromy": self.monodromy,
            "connected": self.connected,
            "generic": self.generic,
            "covers": self.covers,
        })
    }

    /// One `name count` line per stage.
    pub fn to_text(&self) -> String {
        format!(
            "trees {}\ntyped {}\nmonodromy {}\nconnected {}\ngeneric {}\ncovers {}\n",
            self.trees, self.typed, self.monodromy, self.connected, self.generic, self.covers
        )
    }

    /// Reads the lines written by [`StageCounts::to_text`]; other lines are
    /// skipped, missing stages are an error.
    pub fn from_text(s: &str) -> Result<StageCounts> {
        let mut c = StageCounts::default();
        let mut found = 0u8;
        for line in s.lines() {
            let mut it = line.split_whitespace();
            let (Some(k), Some(v), None) = (it.next(), it.next(), it.next()) else {
                continue;
            };
            let Ok(v) = v.parse::<usize>() else {
                continue;
            };
            let (slot, bit) = match k {
                "trees" => (&mut c.trees, 0),
                "typed" => (&mut c.typed, 1),
                "monodromy" => (&mut c.monodromy, 2),
                "connected" => (&mut c.connected, 3),
                "generic" => (&mut c.generic, 4),
                "covers" => (&mut c.covers, 5),
                _ => continue,
            };
            *slot = v;
            found |= 1 << bit;
        }
        if found != 0b111111 {
            return Err(Error::Parse("stage counts: missing stages".into()));
        }
        Ok(c)
    }
}

pub fn tree_edges_for_genus(g: usize) -> usize {
    2 * g + 1
}

/// Generic trigonal structures of genus `g`, in enumeration order.
pub fn generic_structures(g: usize) -> (StageCounts, Vec<HarmonicMorphism>) {
    let trees = trivalent_trees(tree_edges_for_genus(g));
    let typed: Vec<TypedTree> = trees.iter().flat_map(type_markings).collect();
    let mut counts = StageCounts {
        trees: trees.len(),
        typed: typed.len(),
        ..Default::default()
    };
    let per: Vec<(usize, usize, Vec<HarmonicMorphism>)> = typed
        .par_iter()
        .map(|tt| {
            let all = monodromy_assignments(tt);
            let mut connected = 0;
            let mut keep = Vec::new();
            for mt in &all {
                if let Some(f) = realize_trigonal(mt) {
                    connected += 1;
                    if genericity_filter(&f) {
                        keep.push(f);
                    }
                }
            }
            (all.len(), connected, keep)
        })
        .collect();
    let mut out = Vec::new();
    for (m, c, k) in per {
        counts.monodromy += m;
        counts.connected += c;
        out.extend(k);
    }
    counts.generic = out.len();
    (counts, out)
}

/// Every tower over a generic structure: all `2^g - 1` free covers each.
pub fn generic_towers(g: usize) -> Result<(StageCounts, Vec<Tower>)> {
    let (mut counts, structs) = generic_structures(g);
    let mut towers = Vec::new();
    for f in structs {
        for c in enumerate_free_covers(&f.source) {
            towers.push(Tower::new(c, f.clone())?);
        }
    }
    counts.covers = towers.len();
    Ok((counts, towers))
}

/// Stage counts only; skips building the covers.
pub fn stage_counts(g: usize) -> StageCounts {
    let (mut counts, structs) = generic_structures(g);
    counts.covers = structs.iter().map(|f| (1usize << f.source.b1()) - 1).sum();
    counts
}

#[derive(Clone, Debug)]
pub struct Failure {
    pub index: usize,
    pub reason: String,
    pub tower: Value,
}

#[derive(Clone, Debug)]
pub struct Report {
    pub genus: usize,
    pub options: PrymOptions,
    pub counts: StageCounts,
    pub passed: usize,
    pub failures: Vec<Failure>,
    /// Number of towers per q-configuration name.
    pub q_cases: BTreeMap<String, usize>,
    pub seconds: f64,
}

impl Report {
    pub fn all_passed(&self) -> bool {
        self.failures.is_empty() && self.passed == self.counts.covers
    }

    /// Deterministic JSON; timing is left out unless asked for.
    pub fn to_json(&self, with_timing: bool) -> Value {
        let mut v = json!({
            "genus": self.genus,
            "p_coefficient": self.options.p_coefficient,
            "reading": match self.options.reading {
                AppendixReading::Printed => "printed",
                AppendixReading::Corrected => "corrected",
            },
            "counts": self.counts.to_json(),
            "passed": self.passed,
            "failed": self.failures.len(),
            "q_cases": self.q_cases,
            "failures": self.failures.iter().map(|f| json!({
                "index": f.index,
                "reason": f.reason,
                "tower": f.tower,
            })).collect::<Vec<_>>(),
        });
        if with_timing {
            v["seconds"] = json!(self.seconds);
        }
        v
    }

    pub fn to_text(&self) -> String {
        let c = &self.counts;
        let mut s = format!(
            "genus {}  p-coefficient {}  reading {:?}\n{}passed {}/{}\n",
            self.genus,
            self.options.p_coefficient,
            self.options.reading,
            c.to_text(),
            self.passed,
            c.covers
        );
        for (k, n) in &self.q_cases {
            s.push_str(&format!("  {k}: {n}\n"));
        }
        for f in self.failures.iter().take(10) {
            s.push_str(&format!("  tower {} failed: {}\n", f.index, f.reason));
        }
        s
    }
}

/// Builds every generic tower of genus `g` and checks the second-moment
/// formula on each.
pub fn run_verification(g: usize, options: PrymOptions) -> Result<Report> {
    let start = Instant::now();
    let (mut counts, structs) = generic_structures(g);
    let mut offsets = Vec::with_capacity(structs.len());
    let mut total = 0;
    for f in &structs {
        offsets.push(total);
        total += (1usize << f.source.b1()) - 1;
    }
    counts.covers = total;
    // towers are built per structure so only one batch is alive per thread
    let per: Vec<Vec<(usize, std::result::Result<String, Failure>)>> = structs
        .par_iter()
        .zip(offsets.par_iter())
        .map(|(f, &off)| {
            enumerate_free_covers(&f.source)
                .into_iter()
                .enumerate()
                .map(|(j, c)| {
                    let index = off + j;
                    let fail = |reason: String, tower: Value| Failure { index, reason, tower };
                    let t = match Tower::new(c, f.clone()) {
                        Ok(t) => t,
                        Err(e) => return (index, Err(fail(e.to_string(), Value::Null))),
                    };
                    let r = match verify_tower(&t, options) {
                        Ok(r) if r.passed() => Ok(r.q_case),
                        Ok(r) => Err(format!(
                            "{}{}",
                            if r.volume_ok { "" } else { "volume mismatch; " },
                            if r.moment_ok { "" } else { "second moment mismatch" }
                        )),
                        Err(e) => Err(e.to_string()),
                    };
                    (index, r.map_err(|reason| fail(reason, t.to_json())))
                })
                .collect()
        })
        .collect();
    let mut q_cases = BTreeMap::new();
    let mut failures = Vec::new();
    let mut passed = 0;
    for (_, r) in per.into_iter().flatten() {
        match r {
            Ok(case) => {
                passed += 1;
                *q_cases.entry(case).or_insert(0) += 1;
            }
            Err(f) => failures.push(f),
        }
    }
    Ok(Report {
        genus: g,
        options,
        counts,
        passed,
        failures,
        q_cases,
        seconds: start.elapsed().as_secs_f64(),
    })
}

/// Label of a typed tree such as `I,III,II` over its edges.
pub fn marking_string(tt: &TypedTree) -> String {
    tt.edge_type.iter().map(|k| k.roman()).collect::<Vec<_>>().join(",")
}

#[cfg(test)]
mod tests;
