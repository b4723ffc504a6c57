mod support;

use std::sync::Arc;

use sketchy_core::fincat::{FinCategory, Presheaf};
use support::presheaves::for_each_presheaf;

fn all(cat: &Arc<FinCategory>, sizes: &[usize]) -> Vec<Presheaf> {
    let gens: Vec<usize> = cat.arrows().collect();
    let mut out = Vec::new();
    let n = for_each_presheaf(cat, &gens, sizes, |p| {
        out.push(p);
        true
    });
    assert_eq!(n, out.len());
    for (i, p) in out.iter().enumerate() {
        assert!(p.check_functoriality().is_empty());
        assert!(out[..i].iter().all(|q| q != p), "repeated presheaf");
    }
    out
}

#[test]
fn involutions_on_the_group_of_order_two() {
    let z2 = Arc::new(FinCategory::monoid(2, 0, |a, b| a ^ b));
    let counts: Vec<usize> = (0..=4).map(|n| all(&z2, &[n]).len()).collect();
    assert_eq!(counts, vec![1, 1, 2, 4, 10]);
}

#[test]
fn functions_on_an_arrow() {
    let arrow = Arc::new(FinCategory::poset(2, |a, b| a <= b));
    for a in 0..=3 {
        for b in 0..=3 {
            assert_eq!(all(&arrow, &[a, b]).len(), a.pow(b as u32), "{a} {b}");
        }
    }
}

#[test]
fn idempotents_on_a_three_element_set() {
    // The monoid {1, e} with e·e = e: presheaves on n points are idempotent
    // self-maps, of which there are Σ_k C(n, k) k^(n-k).
    let m = Arc::new(FinCategory::monoid(2, 0, |a, b| a.max(b)));
    assert_eq!(all(&m, &[3]).len(), 10);
    assert_eq!(all(&m, &[4]).len(), 41);
}

#[test]
fn early_stop() {
    let z2 = Arc::new(FinCategory::monoid(2, 0, |a, b| a ^ b));
    let mut seen = 0;
    let n = for_each_presheaf(&z2, &[1], &[4], |_| {
        seen += 1;
        seen < 3
    });
    assert_eq!((n, seen), (3, 3));
}
