//! Small named graphs and covers used by tests, the CLI and the docs.

use crate::graph::Graph;
use crate::linear::LinearForm;
use crate::morphism::{DoubleCover, Mark};

fn edge(g: &mut Graph, name: &str, a: usize, b: usize) {
    g.add_edge(name, a, b, LinearForm::named(name));
}

/// One genus-0 vertex with a loop `e`.
pub fn loop_graph() -> Graph {
    let mut g = Graph::new();
    let v = g.add_vertex("v", 0);
    edge(&mut g, "e", v, v);
    g
}

/// Two vertices joined by `x`, `y`, `z`.
pub fn theta() -> Graph {
    let mut g = Graph::new();
    let a = g.add_vertex("a", 0);
    let b = g.add_vertex("b", 0);
    for n in ["x", "y", "z"] {
        edge(&mut g, n, a, b);
    }
    g
}

/// Loops `g1` at `u` and `g2` at `v` joined by the bridge `f`.
pub fn dumbbell() -> Graph {
    let mut g = Graph::new();
    let u = g.add_vertex("u", 0);
    let v = g.add_vertex("v", 0);
    edge(&mut g, "g1", u, u);
    edge(&mut g, "f", u, v);
    edge(&mut g, "g2", v, v);
    g
}

/// Complete graph on four vertices.
pub fn k4() -> Graph {
    let mut g = Graph::new();
    for i in 0..4 {
        g.add_vertex(format!("v{i}"), 0);
    }
    let mut k = 0;
    for i in 0..4 {
        for j in i + 1..4 {
            k += 1;
            edge(&mut g, &format!("e{k}"), i, j);
        }
    }
    g
}

/// Dumbbell with both loops odd.
pub fn dumbbell_cover() -> DoubleCover {
    DoubleCover::free(dumbbell(), &[-1, 1, -1]).unwrap()
}

/// Two odd loops at one vertex.
pub fn two_loops_cover() -> DoubleCover {
    let mut g = Graph::new();
    let v = g.add_vertex("v", 0);
    edge(&mut g, "g1", v, v);
    edge(&mut g, "g2", v, v);
    DoubleCover::free(g, &[-1, -1]).unwrap()
}

/// Theta with the single odd edge `z`.
pub fn theta_cover() -> DoubleCover {
    DoubleCover::free(theta(), &[1, 1, -1]).unwrap()
}

/// Two dilated genus-1 vertices joined by `n` undilated edges.
pub fn fs_cover(n: usize) -> DoubleCover {
    let mut g = Graph::new();
    let a = g.add_vertex("a", 1);
    let b = g.add_vertex("b", 1);
    for i in 1..=n {
        edge(&mut g, &format!("e{i}"), a, b);
    }
    DoubleCover::new(g, vec![Mark::Plus; n], &[a, b]).unwrap()
}

/// Genus 3: odd loops `la`, `lb` at the two ends of the digon `e`, `f`.
pub fn genus3_fs2_cover() -> DoubleCover {
    let mut g = Graph::new();
    let a = g.add_vertex("a", 0);
    let b = g.add_vertex("b", 0);
    edge(&mut g, "la", a, a);
    edge(&mut g, "e", a, b);
    edge(&mut g, "f", a, b);
    edge(&mut g, "lb", b, b);
    DoubleCover::free(g, &[-1, 1, 1, -1]).unwrap()
}

/// Genus 4 prism: two triangles with odd edges `a1` and `b1`, joined by
/// `e`, `f`, `g`. The unique FS3 set is `{e, f, g}`.
pub fn prism_fs3_cover() -> DoubleCover {
    let mut g = Graph::new();
    let x: Vec<usize> = (0..3).map(|i| g.add_vertex(format!("x{i}"), 0)).collect();
    let y: Vec<usize> = (0..3).map(|i| g.add_vertex(format!("y{i}"), 0)).collect();
    edge(&mut g, "a1", x[0], x[1]);
    edge(&mut g, "a2", x[1], x[2]);
    edge(&mut g, "a3", x[2], x[0]);
    edge(&mut g, "b1", y[0], y[1]);
    edge(&mut g, "b2", y[1], y[2]);
    edge(&mut g, "b3", y[2], y[0]);
    edge(&mut g, "e", x[0], y[0]);
    edge(&mut g, "f", x[1], y[1]);
    edge(&mut g, "g", x[2], y[2]);
    DoubleCover::free(g, &[-1, 1, 1, -1, 1, 1, 1, 1, 1]).unwrap()
}

/// Free cover of K4 with one odd edge (no FS sets).
pub fn k4_cover() -> DoubleCover {
    DoubleCover::free(k4(), &[-1, 1, 1, 1, 1, 1]).unwrap()
}

/// A dilated loop `d` at `a`, the digon `e1`, `e2` to `b`, and an odd loop
/// `l` at `b`.
pub fn dilated_loop_cover() -> DoubleCover {
    let mut g = Graph::new();
    let a = g.add_vertex("a", 0);
    let b = g.add_vertex("b", 0);
    edge(&mut g, "d", a, a);
    edge(&mut g, "e1", a, b);
    edge(&mut g, "e2", a, b);
    edge(&mut g, "l", b, b);
    DoubleCover::new(g, vec![Mark::Dilated, Mark::Plus, Mark::Plus, Mark::Minus], &[]).unwrap()
}

/// Named fixture covers.
pub fn covers() -> Vec<(&'static str, DoubleCover)> {
    vec![
        ("dumbbell", dumbbell_cover()),
        ("two-odd-loops", two_loops_cover()),
        ("theta-odd", theta_cover()),
        ("fs2", fs_cover(2)),
        ("fs3", fs_cover(3)),
        ("genus3-fs2", genus3_fs2_cover()),
        ("prism-fs3", prism_fs3_cover()),
        ("k4-odd", k4_cover()),
        ("dilated-loop", dilated_loop_cover()),
    ]
}

/// Named fixture graphs.
pub fn graphs() -> Vec<(&'static str, Graph)> {
    vec![
        ("loop", loop_graph()),
        ("theta", theta()),
        ("dumbbell", dumbbell()),
        ("k4", k4()),
    ]
}
