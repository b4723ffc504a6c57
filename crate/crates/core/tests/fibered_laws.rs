use proptest::prelude::*;
use sketchy_core::arith::{Field, PrimeField, Rationals};
use sketchy_core::fibered::{
    check_beck_chevalley, check_projection_formula, projection_is_natural, triangle_identities, BundleMap, FinMap,
    LinearBundle, Square,
};
use sketchy_core::linalg::Matrix;

fn map_strategy(max_domain: usize, max_codomain: usize) -> impl Strategy<Value = FinMap> {
    (0..=max_domain, 1..=max_codomain).prop_flat_map(|(d, c)| {
        prop::collection::vec(0..c, d).prop_map(move |t| FinMap::new(t, c).unwrap())
    })
}

/// A random bundle endomorphism with entries in `-2..=2`.
fn endo<F: Field>(field: &F, v: &LinearBundle<F>, entries: &[i64]) -> BundleMap<F> {
    let mut it = entries.iter().cycle();
    let blocks = v
        .dims()
        .iter()
        .map(|&d| {
            let mut m = Matrix::zeros(field, d, d);
            for r in 0..d {
                for c in 0..d {
                    m.set(r, c, field.from_i64(*it.next().unwrap()));
                }
            }
            m
        })
        .collect();
    BundleMap::new(v.clone(), v.clone(), blocks).unwrap()
}

#[test]
fn beck_chevalley_on_pullbacks_over_three_points() {
    let mut squares = 0;
    for c in 1..=3 {
        for a in 0..=3 {
            for b in 0..=3 {
                for right in FinMap::all(a, c) {
                    for bottom in FinMap::all(b, c) {
                        let sq = Square::pullback(right.clone(), bottom.clone()).unwrap();
                        assert!(sq.is_pullback());
                        let v = LinearBundle::new(&Rationals, (0..b).map(|p| (p * 2 + c) % 4).collect());
                        let w = check_beck_chevalley(&sq, &v).unwrap();
                        assert!(w.verify(), "{right:?} {bottom:?}");
                        squares += 1;
                    }
                }
            }
        }
    }
    assert!(squares > 500);
}

proptest! {
    #[test]
    fn triangle_identities_hold(phi in map_strategy(4, 3), seed in any::<u64>()) {
        let f = PrimeField::new(3).unwrap();
        let dv: Vec<usize> = (0..phi.domain()).map(|i| ((seed >> (2 * i)) & 3) as usize).collect();
        let dw: Vec<usize> = (0..phi.codomain()).map(|i| ((seed >> (20 + 2 * i)) & 3) as usize).collect();
        let v = LinearBundle::new(&f, dv);
        let w = LinearBundle::new(&f, dw);
        prop_assume!(v.total_dim() + w.total_dim() <= 24);
        prop_assert!(triangle_identities(&phi, &v, &w).unwrap().all());
    }

    #[test]
    fn projection_formula_is_iso(phi in map_strategy(3, 3), seed in any::<u64>()) {
        let dt: Vec<usize> = (0..phi.domain()).map(|i| ((seed >> (2 * i)) & 3) as usize).collect();
        let dp: Vec<usize> = (0..phi.codomain()).map(|i| ((seed >> (16 + 2 * i)) & 3) as usize).collect();
        let w = check_projection_formula(&phi, &LinearBundle::new(&Rationals, dp), &LinearBundle::new(&Rationals, dt)).unwrap();
        prop_assert!(w.verify());
    }

    #[test]
    fn projection_map_is_natural(
        phi in map_strategy(3, 2),
        seed in any::<u64>(),
        entries in prop::collection::vec(-2i64..=2, 1..12),
    ) {
        let f = PrimeField::new(5).unwrap();
        let dt: Vec<usize> = (0..phi.domain()).map(|i| ((seed >> (2 * i)) % 3) as usize).collect();
        let dp: Vec<usize> = (0..phi.codomain()).map(|i| ((seed >> (16 + 2 * i)) % 3) as usize).collect();
        let t = LinearBundle::new(&f, dt);
        let tp = LinearBundle::new(&f, dp);
        let a = endo(&f, &t, &entries);
        let rev: Vec<i64> = entries.iter().rev().copied().collect();
        let ap = endo(&f, &tp, &rev);
        prop_assert!(projection_is_natural(&phi, &ap, &a).unwrap());
    }

    #[test]
    fn non_pullback_squares_are_caught(right in map_strategy(3, 2), extra in 1usize..=2) {
        let bottom = FinMap::identity(right.codomain());
        let pb = Square::pullback(right.clone(), bottom.clone()).unwrap();
        prop_assume!(pb.top().domain() > 0);
        // Repeat the first point of the pullback `extra` times.
        let grow = |m: &FinMap| {
            let mut t = m.table().to_vec();
            t.extend(std::iter::repeat(t[0]).take(extra));
            FinMap::new(t, m.codomain()).unwrap()
        };
        let sq = Square::new(grow(pb.top()), grow(pb.left()), right, bottom).unwrap();
        prop_assert!(!sq.is_pullback());
        let v = LinearBundle::new(&Rationals, vec![1; sq.bottom().domain()]);
        prop_assert!(!check_beck_chevalley(&sq, &v).unwrap().is_iso());
    }
}
