use super::*;
use crate::graph::canonical_code;

#[test]
fn small_tree_counts() {
    assert_eq!(trivalent_trees(1).len(), 1);
    assert_eq!(trivalent_trees(3).len(), 2);
    assert_eq!(trivalent_trees(5).len(), 4);
    assert_eq!(trivalent_trees(7).len(), 11);
    assert_eq!(trivalent_trees(9).len(), 37);
}

#[test]
fn trees_are_distinct_and_bounded() {
    let ts = trivalent_trees(9);
    let mut codes: Vec<_> = ts.iter().map(canonical_code).collect();
    codes.sort();
    codes.dedup();
    assert_eq!(codes.len(), 37);
    for t in &ts {
        assert!(t.is_connected() && t.b1() == 0);
        assert!(t.valences().iter().all(|&d| d <= 3));
    }
    // all free trees on 10 vertices, before the valence filter
    assert_eq!(free_tree_layouts(10).len(), 106);
}

#[test]
fn single_edge_marking() {
    let t = &trivalent_trees(1)[0];
    let m = type_markings(t);
    assert_eq!(m.len(), 2);
    let iii: Vec<_> = m.iter().filter(|x| x.edge_type == vec![Kind::III]).collect();
    assert_eq!(iii.len(), 1);
    assert_eq!(iii[0].vertex_type, vec![Kind::II, Kind::II]);
}

#[test]
fn vertex_table() {
    use Kind::*;
    assert_eq!(vertex_kind(&[III, II]), Some(II));
    assert_eq!(vertex_kind(&[III, I, I]), Some(I));
    assert_eq!(vertex_kind(&[II]), None);
    assert_eq!(vertex_kind(&[I, I]), None);
    assert_eq!(vertex_kind(&[III, III]), None);
}

#[test]
fn typed_and_monodromy_counts() {
    let typed: Vec<TypedTree> = trivalent_trees(9).iter().flat_map(type_markings).collect();
    assert_eq!(typed.len(), 1184);
    let m: usize = typed.iter().map(monodromy_count).sum();
    assert_eq!(m, 12977);
}

#[test]
fn type_one_edges_carry_identity() {
    for t in trivalent_trees(5) {
        for tt in type_markings(&t) {
            let forced = normalized_edges(&tt);
            for mt in monodromy_assignments(&tt) {
                for (e, s) in mt.sigma.iter().enumerate() {
                    let [a, b] = tt.tree.edges[e].ends;
                    if tt.edge_type[e] != Kind::III
                        || tt.vertex_type[a] == Kind::I
                        || tt.vertex_type[b] == Kind::I
                        || forced[e]
                    {
                        assert_eq!(*s, ID);
                    }
                }
            }
        }
    }
}

#[test]
fn identity_monodromy_on_all_iii_is_disconnected() {
    // star with three edges: centre III, leaves II
    let t = trivalent_trees(3).into_iter().find(|t| t.valences().contains(&3)).unwrap();
    let tt = type_markings(&t)
        .into_iter()
        .find(|x| x.edge_type.iter().all(|&k| k == Kind::III))
        .unwrap();
    let mt = MonodromyTree {
        typed: tt.clone(),
        sigma: vec![ID; 3],
    };
    assert!(realize_trigonal(&mt).is_none());
    let mut twisted = mt.clone();
    twisted.sigma[1] = [1, 0, 2];
    let f = realize_trigonal(&twisted).unwrap();
    f.validate().unwrap();
    assert_eq!(f.global_degree().unwrap(), 3);
}

#[test]
fn genus_two_pipeline_counts() {
    let c = stage_counts(2);
    assert_eq!(
        (c.trees, c.typed, c.monodromy, c.generic, c.covers),
        (4, 32, 140, 121, 363)
    );
    assert_eq!(c.connected, 136);
}

#[test]
fn generic_structures_are_harmonic_and_effective() {
    let (_, fs) = generic_structures(2);
    for f in &fs {
        f.validate().unwrap();
        assert_eq!(f.global_degree().unwrap(), 3);
        assert!(f.is_effective());
        assert_eq!(f.source.genus().unwrap(), 2);
        // 2 per leaf and 1 per bivalent vertex of the tree
        let t = &f.target;
        let expect: i64 = (0..t.num_vertices())
            .map(|v| match t.valence(v) {
                1 => 2,
                2 => 1,
                _ => 0,
            })
            .sum();
        assert_eq!(f.total_ramification(), expect);
        assert_eq!(expect, 2 * 2 + 2 * 3 - 2);
    }
}

#[test]
fn rank_examples() {
    use crate::linear::q;
    assert_eq!(rank(&[vec![q(1), q(2)], vec![q(2), q(4)]]), 1);
    assert_eq!(rank(&[vec![q(1), q(0)], vec![q(1), q(1)]]), 2);
    assert_eq!(rank(&[]), 0);
}

#[test]
fn genus_two_sweep_passes() {
    let r = run_verification(2, PrymOptions::default()).unwrap();
    assert_eq!(r.counts.covers, 363);
    assert!(r.all_passed(), "{}", r.to_text());
    assert_eq!(r.q_cases.keys().collect::<Vec<_>>(), vec!["no FS sets"]);
}

#[test]
fn reports_are_deterministic() {
    let a = run_verification(2, PrymOptions::default()).unwrap();
    let b = run_verification(2, PrymOptions::default()).unwrap();
    assert_eq!(a.to_json(false).to_string(), b.to_json(false).to_string());
}
