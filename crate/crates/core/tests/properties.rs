use std::collections::HashMap;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use prym_core::graph::json::{graph_from_json, graph_to_json};
use prym_core::linear::{LinearForm, Var};
use prym_core::moments::{i2_prym, tau_identity_residual, w0_jac, w0_prym, PrymOptions};
use prym_core::morphism::DoubleCover;
use prym_core::oracle::{jac_gram, prym_gram, Reducer};
use prym_core::poly::Homogeneity;
use prym_core::random::{length_vars, random_free_cover, random_graph, random_point};

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn jacobian_volume_is_a_determinant(seed in any::<u64>(), g in 1usize..=4) {
        let mut r = rng(seed);
        let x = random_graph(&mut r, g);
        let pt = random_point(&mut r, &length_vars(&x));
        prop_assert_eq!(jac_gram(&x, &pt).unwrap().det(), w0_jac(&x).unwrap().eval(&pt).unwrap());
    }

    #[test]
    fn prym_volume_is_a_determinant(seed in any::<u64>(), g in 2usize..=4) {
        let mut r = rng(seed);
        let x = random_graph(&mut r, g);
        let c = random_free_cover(&mut r, &x);
        let pt = random_point(&mut r, &length_vars(&x));
        prop_assert_eq!(prym_gram(&c, &pt).unwrap().det(), w0_prym(&c).unwrap().eval(&pt).unwrap());
    }

    #[test]
    fn degrees_and_walls(seed in any::<u64>(), g in 2usize..=4) {
        let mut r = rng(seed);
        let x = random_graph(&mut r, g);
        let c = random_free_cover(&mut r, &x);
        let t = c.torus_rank().unwrap() as u32;
        let i2 = i2_prym(&c, PrymOptions::default()).unwrap();
        prop_assert_eq!(i2.radicand.homogeneous_degree(), Homogeneity::Degree(t));
        for h in i2.numerator.homogeneity() {
            prop_assert!(h == Homogeneity::Degree(t + 1) || h == Homogeneity::Zero);
        }
        prop_assert!(i2.numerator.wall_continuity());
    }

    #[test]
    fn tau_identity(seed in any::<u64>(), g in 1usize..=4) {
        let x = random_graph(&mut rng(seed), g);
        prop_assert!(tau_identity_residual(&x).unwrap().is_zero());
    }

    #[test]
    fn moments_scale_with_lengths(seed in any::<u64>(), g in 2usize..=4, s in 1i64..=5) {
        // I2 is homogeneous of degree t/2 + 1 in the lengths
        let mut r = rng(seed);
        let x = random_graph(&mut r, g);
        let c = random_free_cover(&mut r, &x);
        let t = c.torus_rank().unwrap() as i32;
        let i2 = i2_prym(&c, PrymOptions::default()).unwrap();
        let pt = random_point(&mut r, &length_vars(&x));
        let scaled: HashMap<Var, _> = pt.iter().map(|(v, q)| (*v, q * prym_core::linear::q(s))).collect();
        let a = i2.eval_f64(&pt).unwrap();
        let b = i2.eval_f64(&scaled).unwrap();
        let want = a * (s as f64).powf(t as f64 / 2.0 + 1.0);
        prop_assert!((b - want).abs() <= 1e-9 * want.abs());
    }

    #[test]
    fn json_round_trips(seed in any::<u64>(), g in 1usize..=4) {
        let mut r = rng(seed);
        let x = random_graph(&mut r, g);
        prop_assert_eq!(graph_from_json(&graph_to_json(&x)).unwrap(), x.clone());
        let c = random_free_cover(&mut r, &x);
        prop_assert_eq!(DoubleCover::from_json(&c.to_json()).unwrap(), c);
    }

    #[test]
    fn reducer_returns_the_shortest_coset_vector(seed in any::<u64>(), g in 2usize..=4) {
        let mut r = rng(seed);
        let x = random_graph(&mut r, g);
        let c = random_free_cover(&mut r, &x);
        let pt = random_point(&mut r, &length_vars(&x));
        let gram = prym_gram(&c, &pt).unwrap();
        let red = Reducer::new(&gram).unwrap();
        let n = red.dim();
        for _ in 0..20 {
            let u: Vec<f64> = (0..n).map(|_| r.gen_range(-2.0..2.0)).collect();
            let y = red.reduce(&red.embed(&u));
            let ny: f64 = y.iter().map(|a| a * a).sum();
            // no small lattice vector moves y closer to the origin
            let mut k = vec![-2i64; n];
            loop {
                let lam = red.embed(&k.iter().map(|&a| a as f64).collect::<Vec<_>>());
                let d: f64 = y.iter().zip(&lam).map(|(a, b)| (a - b) * (a - b)).sum();
                prop_assert!(d >= ny - 1e-9 * (1.0 + ny));
                let mut i = 0;
                while i < n && k[i] == 2 {
                    k[i] = -2;
                    i += 1;
                }
                if i == n {
                    break;
                }
                k[i] += 1;
            }
        }
    }
}

#[test]
fn contraction_of_a_random_edge_is_a_limit() {
    // single-edge limits on random free covers
    let mut r = rng(99);
    let mut checked = 0;
    while checked < 30 {
        let x = random_graph(&mut r, 3);
        let c = random_free_cover(&mut r, &x);
        let e = r.gen_range(0..x.num_edges());
        let ed = &x.edges[e];
        if ed.is_loop() {
            continue;
        }
        let k = c.contract(&[e]).unwrap();
        let full = i2_prym(&c, PrymOptions::default()).unwrap();
        let m: HashMap<Var, LinearForm> = [(ed.length.vars()[0], LinearForm::zero())].into();
        let lim_num = full.numerator.substitute(&m);
        let lim_rad = full.radicand.substitute_partial(&m);
        let kk = i2_prym(&k, PrymOptions::default()).unwrap();
        for _ in 0..3 {
            let pt = random_point(&mut r, &length_vars(&k.base));
            let a = lim_num.eval(&pt).unwrap().unwrap() * &full.scale;
            let ar = lim_rad.eval(&pt).unwrap();
            let b = kk.eval_exact(&pt).unwrap();
            assert_eq!(&a * &a / ar, &b.scaled_numerator * &b.scaled_numerator / &b.radicand);
        }
        checked += 1;
    }
}
