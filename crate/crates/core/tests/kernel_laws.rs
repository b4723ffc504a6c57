mod common;

use common::{random_based, random_kernel, random_kernel_any, random_map};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sketchy_core::fibered::FinMap;
use sketchy_core::kernels::{
    cartesian_lift, compose, dirac, product_map, pushforward, tensor_kernels, BasedSpace, MeasSpace,
};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn composition_is_associative(seed in any::<u64>(), sizes in prop::array::uniform4(0usize..=6), bases in prop::array::uniform4(1usize..=3)) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let xs: Vec<BasedSpace> = (0..4).map(|i| random_based(&mut rng, &format!("x{i}_"), sizes[i], bases[i])).collect();
        let phis: Vec<FinMap> = (0..3).map(|i| random_map(&mut rng, bases[i], bases[i + 1])).collect();
        let k1 = random_kernel(&mut rng, &xs[0], &xs[1], &phis[0]);
        let k2 = random_kernel(&mut rng, &xs[1], &xs[2], &phis[1]);
        let k3 = random_kernel(&mut rng, &xs[2], &xs[3], &phis[2]);
        let left = compose(&compose(&k1, &k2).unwrap(), &k3).unwrap();
        let right = compose(&k1, &compose(&k2, &k3).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn dirac_is_a_two_sided_identity(seed in any::<u64>(), n in 0usize..=6, m in 0usize..=6, b in 1usize..=3, c in 1usize..=3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = random_based(&mut rng, "x", n, b);
        let y = random_based(&mut rng, "y", m, c);
        let k = random_kernel_any(&mut rng, &x, &y);
        prop_assert_eq!(compose(&dirac(&x), &k).unwrap(), k.clone());
        prop_assert_eq!(compose(&k, &dirac(&y)).unwrap(), k);
    }

    #[test]
    fn norm_is_submultiplicative(seed in any::<u64>(), n in 0usize..=5, m in 0usize..=5, l in 0usize..=5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = random_based(&mut rng, "x", n, 2);
        let y = random_based(&mut rng, "y", m, 2);
        let z = random_based(&mut rng, "z", l, 2);
        let k1 = random_kernel_any(&mut rng, &x, &y);
        let k2 = random_kernel_any(&mut rng, &y, &z);
        let k = compose(&k1, &k2).unwrap();
        prop_assert!(k.norm() <= k1.norm() * k2.norm());
        prop_assert!(k.check_support().is_ok());
    }

    #[test]
    fn cartesian_lift_round_trips(seed in any::<u64>(), n in 0usize..=5, m in 0usize..=5, j in 1usize..=3, i in 1usize..=3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let z = random_based(&mut rng, "z", n, j);
        let x = random_based(&mut rng, "x", m, i);
        let k = random_kernel_any(&mut rng, &z, &x);
        let cl = cartesian_lift(&k).unwrap();
        prop_assert_eq!(compose(&cl.lift, &cl.projection).unwrap(), k.clone());
        prop_assert_eq!(cl.from_marginal(&cl.lift).unwrap(), cl.lift.clone());
        prop_assert!(cl.lift.phi().is_bijective());
    }

    #[test]
    fn pushforward_is_a_strict_functor(seed in any::<u64>(), n in 0usize..=4, m in 1usize..=4, l in 1usize..=4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (x, y, z) = (
            BasedSpace::trivial(MeasSpace::of_size("x", n)),
            BasedSpace::trivial(MeasSpace::of_size("y", m)),
            BasedSpace::trivial(MeasSpace::of_size("z", l)),
        );
        let one = FinMap::identity(1);
        let h = random_map(&mut rng, n, m);
        let g = random_map(&mut rng, m, l);
        let both = pushforward(&h.then(&g).unwrap(), &x, &z, &one).unwrap();
        let each = compose(&pushforward(&h, &x, &y, &one).unwrap(), &pushforward(&g, &y, &z, &one).unwrap()).unwrap();
        prop_assert_eq!(both, each);
        prop_assert_eq!(pushforward(&FinMap::identity(n), &x, &x, &one).unwrap(), dirac(&x));
    }

    #[test]
    fn tensor_interchanges_with_composition(seed in any::<u64>(), sizes in prop::array::uniform6(0usize..=3)) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s: Vec<BasedSpace> = sizes.iter().enumerate().map(|(i, &n)| random_based(&mut rng, &format!("s{i}_"), n, 2)).collect();
        let mut k = |a: usize, b: usize| {
            let phi = random_map(&mut rng, 2, 2);
            random_kernel(&mut rng, &s[a], &s[b], &phi)
        };
        let (k1, k1p, k2, k2p) = (k(0, 1), k(1, 2), k(3, 4), k(4, 5));
        let left = compose(&tensor_kernels(&k1, &k2), &tensor_kernels(&k1p, &k2p)).unwrap();
        let right = tensor_kernels(&compose(&k1, &k1p).unwrap(), &compose(&k2, &k2p).unwrap());
        prop_assert_eq!(left, right);
    }

    #[test]
    fn tensor_preserves_pushforwards(seed in any::<u64>(), sizes in prop::array::uniform4(1usize..=3)) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let sp: Vec<BasedSpace> = sizes.iter().map(|&n| BasedSpace::trivial(MeasSpace::of_size("p", n))).collect();
        let one = FinMap::identity(1);
        let h1 = random_map(&mut rng, sizes[0], sizes[1]);
        let h2 = random_map(&mut rng, sizes[2], sizes[3]);
        let t = tensor_kernels(&pushforward(&h1, &sp[0], &sp[1], &one).unwrap(), &pushforward(&h2, &sp[2], &sp[3], &one).unwrap());
        let p = pushforward(&product_map(&h1, &h2), &sp[0].product(&sp[2]), &sp[1].product(&sp[3]), &product_map(&one, &one)).unwrap();
        prop_assert_eq!(t, p);
    }
}

#[test]
fn stochastic_tensor_is_stochastic() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let x = BasedSpace::trivial(MeasSpace::of_size("x", 3));
    let make = |rng: &mut ChaCha8Rng| {
        let rows = (0..3)
            .map(|_| {
                let w: Vec<i128> = (0..3).map(|_| rand::Rng::gen_range(rng, 1..=5)).collect();
                let total: i128 = w.iter().sum();
                sketchy_core::kernels::AtomicMeasure::from_pairs(3, w.iter().enumerate().map(|(i, &a)| (i, sketchy_core::arith::rat(a, total)))).unwrap()
            })
            .collect();
        sketchy_core::kernels::Kernel::new(x.clone(), x.clone(), FinMap::identity(1), rows).unwrap()
    };
    let (a, b) = (make(&mut rng), make(&mut rng));
    let t = tensor_kernels(&a, &b);
    assert!(a.is_stochastic() && b.is_stochastic() && t.is_stochastic());
    assert_eq!(t.norm(), a.norm() * b.norm());
}
