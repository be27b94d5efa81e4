use super::*;
use crate::fixtures::*;
use crate::linear::var;
use crate::moments::{w0_jac, w0_prym};

fn ones(g: &Graph) -> HashMap<Var, Q> {
    let mut m = HashMap::new();
    for e in &g.edges {
        for v in e.length.vars() {
            m.insert(v, q(1));
        }
    }
    m
}

#[test]
fn jacobian_grams() {
    let l = loop_graph();
    let g = jac_gram(&l, &[(var("e"), q(4))].into_iter().collect()).unwrap();
    assert_eq!(g, Gram::from_ints(&[&[4]]).unwrap());
    let t = theta();
    let g = jac_gram(&t, &ones(&t)).unwrap();
    assert_eq!(g.det(), q(3));
    assert_eq!(g.0[0][0], q(2));
    for (_, gr) in graphs() {
        let p = ones(&gr);
        assert_eq!(jac_gram(&gr, &p).unwrap().det(), w0_jac(&gr).unwrap().eval(&p).unwrap());
    }
}

#[test]
fn prym_grams() {
    let c = dumbbell_cover();
    assert_eq!(prym_gram(&c, &ones(&c.base)).unwrap(), Gram::from_ints(&[&[6]]).unwrap());
    let c = two_loops_cover();
    assert_eq!(prym_gram(&c, &ones(&c.base)).unwrap(), Gram::from_ints(&[&[2]]).unwrap());
    let c = fs_cover(2);
    let g = prym_gram(&c, &ones(&c.base)).unwrap();
    assert_eq!(g.dim(), 2);
    assert_eq!(g.det(), w0_prym(&c).unwrap().eval(&ones(&c.base)).unwrap());
}

#[test]
fn gram_validation() {
    assert!(Gram::from_ints(&[&[1, 2], &[2, 1]]).is_err());
    assert!(Gram::from_ints(&[&[1, 0], &[1, 1]]).is_err());
    assert_eq!(det(vec![vec![q(0), q(1)], vec![q(1), q(0)]]), q(-1));
}

#[test]
fn lattice_basis_reduces() {
    let b = lattice_basis(&[vec![2, 4], vec![4, 8], vec![0, 6], vec![0, 0]]);
    assert_eq!(b.len(), 2);
    let g = Gram::new(
        b.iter()
            .map(|x| b.iter().map(|y| q(x[0] * y[0] + x[1] * y[1])).collect())
            .collect(),
    )
    .unwrap();
    // index of the lattice generated by (2,4),(0,6) in Z^2 is 12
    assert_eq!(g.det(), q(144));
}

#[test]
fn reducer_lands_in_the_cell() {
    let g = Gram::from_ints(&[&[3, 1, 0], &[1, 4, -1], &[0, -1, 2]]).unwrap();
    let red = Reducer::new(&g).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..500 {
        let u: Vec<f64> = (0..3).map(|_| rng.gen::<f64>() * 6.0 - 3.0).collect();
        let y = red.reduce(&red.embed(&u));
        let n2: f64 = y.iter().map(|a| a * a).sum();
        for a in -2i32..=2 {
            for b in -2i32..=2 {
                for c in -2i32..=2 {
                    let l = red.embed(&[a as f64, b as f64, c as f64]);
                    let d: f64 = y.iter().zip(&l).map(|(p, q)| (p - q) * (p - q)).sum();
                    assert!(n2 <= d + 1e-9);
                }
            }
        }
    }
}

#[test]
fn mc_closed_forms() {
    let r = mc_moment(&Gram::from_ints(&[&[4]]).unwrap(), 200_000, 1).unwrap();
    assert_eq!(r.i0, 2.0);
    assert!((r.i2 - 2.0 / 3.0).abs() < 4.0 * r.std_error);
    let r = mc_moment(&Gram::from_ints(&[&[1, 0], &[0, 1]]).unwrap(), 200_000, 2).unwrap();
    assert!((r.i2 - 1.0 / 6.0).abs() < 4.0 * r.std_error);
}

#[test]
fn mc_is_deterministic() {
    let g = Gram::from_ints(&[&[2, -1], &[-1, 2]]).unwrap();
    let a = mc_moment(&g, 50_000, 9).unwrap();
    let b = mc_moment(&g, 50_000, 9).unwrap();
    assert_eq!(a.i2, b.i2);
}

#[test]
fn hexagon_exact() {
    let g = Gram::from_ints(&[&[2, -1], &[-1, 2]]).unwrap();
    // I2 = R sqrt(3) = 10 / (12 sqrt 3)
    assert_eq!(voronoi_second_moment_2d(&g).unwrap(), qf(10, 36));
    let sq = Gram::from_ints(&[&[1, 0], &[0, 1]]).unwrap();
    assert_eq!(voronoi_second_moment_2d(&sq).unwrap(), qf(1, 6));
}
