use super::*;
use crate::enumerate::generic_towers;
use crate::morphism::{DoubleCover, Mark};

fn towers(g: usize) -> Vec<Tower> {
    generic_towers(g).unwrap().1
}

#[test]
fn fiber_section_degrees() {
    let ts = towers(2);
    let mut seen = std::collections::BTreeSet::new();
    for t in &ts {
        let m = &t.trig.target;
        let points = (0..m.num_vertices())
            .map(Point::Vertex)
            .chain((0..m.num_edges()).map(Point::Edge));
        for x in points {
            let ss = fiber_sections(t, x).unwrap();
            let mut degs: Vec<u32> = ss.iter().map(|s| s.degree).collect();
            degs.sort();
            assert_eq!(degs.iter().sum::<u32>(), 8);
            seen.insert(degs);
        }
    }
    assert!(seen.contains(&vec![1; 8]));
    assert!(seen.contains(&vec![1, 1, 1, 1, 2, 2]));
    assert!(seen.contains(&vec![1, 1, 3, 3]));
}

#[test]
fn construction_on_genus_two_towers() {
    for t in towers(2) {
        let c = build_pi(&t).unwrap();
        assert_eq!(c.pi().genus().unwrap(), 1);
        assert_eq!(c.psi.global_degree().unwrap(), 4);
        assert_eq!(c.psi_tilde.global_degree().unwrap(), 8);
        assert_eq!(c.component[0], 0);
        // eight edge sections over a tree edge with three simple preimages
        for e in 0..t.trig.target.num_edges() {
            let n = c.edge_sections.iter().filter(|s| s.base == Point::Edge(e)).count();
            let simple = (0..t.trig.source.num_edges())
                .filter(|&y| t.trig.edge_map(y) == e)
                .count();
            if simple == 3 {
                assert_eq!(n, 8);
            }
        }
    }
}

#[test]
fn volumes_agree_on_genus_two() {
    for t in towers(2).iter().step_by(7) {
        let r = verify_tower(t, PrymOptions::default()).unwrap();
        assert_eq!(r.genus_pi, 1);
        assert!(r.volume_ok, "{} vs {}", r.w0_jac_pi, r.w0_prym);
        assert!(r.moment_ok, "{} vs {}", r.p_pi, r.p_plus_q);
    }
}

#[test]
fn corrupted_sign_is_reported() {
    let t = towers(2).into_iter().next().unwrap();
    let r = verify_tower(&t, PrymOptions::default()).unwrap();
    assert!(r.passed());
    // flip one sign on a cycle edge: a different (or split) cover over the
    // same trigonal structure
    let base = t.cover.base.clone();
    let tree = base.spanning_tree();
    let e = (0..base.num_edges()).find(|e| !tree.contains(e)).unwrap();
    let mut marks = t.cover.marks.clone();
    marks[e] = marks[e].flip();
    let flipped = DoubleCover::new(base, marks, &[]).unwrap();
    match Tower::new(flipped.clone(), t.trig.clone()) {
        Err(_) => assert!(!flipped.is_connected_cover()),
        Ok(bad) => {
            // compare the original Π against the flipped cover's formula
            let c = build_pi(&t).unwrap();
            let pi = c.pi().core().unwrap().graph;
            let w = w0_jac(&pi).unwrap();
            let wb = w0_prym(&bad.cover).unwrap();
            let pb = i2_prym(&bad.cover, PrymOptions::default()).unwrap();
            let pp = i2_jac(&pi).unwrap().numerator.pieces[0].poly.clone();
            assert!(w != wb || pp != *pb.numerator.select(&ParamCone::default()).unwrap());
        }
    }
    assert_eq!(Mark::Plus.flip(), Mark::Minus);
}

#[test]
fn components_swap_and_match() {
    let t = &towers(3)[17];
    let c = build_pi(t).unwrap();
    assert_eq!(c.pi().genus().unwrap(), 2);
    let n0 = c.component.iter().filter(|&&x| x == 0).count();
    assert_eq!(2 * n0, c.component.len());
}
