use alloc::vec::Vec;
use core::ops::ControlFlow;

use super::csp::Csp;
use super::presheaf::{Isomorphism, NatTransformation, PresheafLike};

fn action_tables<Q: PresheafLike + ?Sized>(q: &Q) -> Vec<Vec<u32>> {
    let cat = q.category();
    cat.arrows()
        .map(|f| {
            if cat.is_identity(f) {
                Vec::new()
            } else {
                (0..q.size(cat.dst(f))).map(|y| q.act(f, y) as u32).collect()
            }
        })
        .collect()
}

fn search<P, Q>(p: &P, q: &Q, bijective: bool, mut visit: impl FnMut(NatTransformation) -> ControlFlow<()>)
where
    P: PresheafLike + ?Sized,
    Q: PresheafLike + ?Sized,
{
    let cat = p.category();
    if bijective && cat.objects().any(|c| p.size(c) != q.size(c)) {
        return;
    }
    let tables = action_tables(q);
    let mut base = Vec::with_capacity(cat.object_count());
    let mut dom = Vec::new();
    for c in cat.objects() {
        base.push(dom.len());
        dom.extend(core::iter::repeat_n(q.size(c), p.size(c)));
    }
    let mut csp = Csp::new(dom);
    for f in cat.arrows() {
        if cat.is_identity(f) {
            continue;
        }
        let (s, d) = (cat.src(f), cat.dst(f));
        for x in 0..p.size(d) {
            csp.constrain(base[d] + x, base[s] + p.act(f, x), &tables[f]);
        }
    }
    if bijective {
        for c in cat.objects() {
            let vars: Vec<usize> = (base[c]..base[c] + p.size(c)).collect();
            csp.all_different(&vars);
        }
    }
    csp.for_each(|values| {
        let components = cat
            .objects()
            .map(|c| values[base[c]..base[c] + p.size(c)].to_vec())
            .collect();
        visit(NatTransformation { components })
    });
}

/// Visits every natural transformation `p → q` in a deterministic order.
pub fn for_each_hom<P, Q>(p: &P, q: &Q, visit: impl FnMut(NatTransformation) -> ControlFlow<()>)
where
    P: PresheafLike + ?Sized,
    Q: PresheafLike + ?Sized,
{
    search(p, q, false, visit)
}

/// All natural transformations `p → q`.
pub fn homs<P, Q>(p: &P, q: &Q) -> Vec<NatTransformation>
where
    P: PresheafLike + ?Sized,
    Q: PresheafLike + ?Sized,
{
    let mut out = Vec::new();
    for_each_hom(p, q, |t| {
        out.push(t);
        ControlFlow::Continue(())
    });
    out
}

pub fn count_homs<P, Q>(p: &P, q: &Q) -> u64
where
    P: PresheafLike + ?Sized,
    Q: PresheafLike + ?Sized,
{
    let mut n = 0u64;
    for_each_hom(p, q, |_| {
        n += 1;
        ControlFlow::Continue(())
    });
    n
}

/// Searches for an isomorphism `p ≅ q`, returned with its inverse.
pub fn find_iso<P, Q>(p: &P, q: &Q) -> Option<Isomorphism>
where
    P: PresheafLike + ?Sized,
    Q: PresheafLike + ?Sized,
{
    let mut found = None;
    search(p, q, true, |t| {
        found = Some(t);
        ControlFlow::Break(())
    });
    Isomorphism::from_forward(found?, p, q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::{FinCategory, Presheaf};
    use alloc::sync::Arc;

    #[test]
    fn yoneda_counts() {
        // |hom(y(c), P)| = |P(c)|.
        let cat = Arc::new(FinCategory::finset(2));
        let p = Presheaf::representable(cat.clone(), 2)
            .coproduct(&Presheaf::constant(cat.clone(), 1))
            .unwrap();
        for c in cat.objects() {
            let y = Presheaf::representable(cat.clone(), c);
            assert_eq!(count_homs(&y, &p), p.size(c) as u64);
        }
    }

    #[test]
    fn isomorphisms_are_found_and_verified() {
        let cat = Arc::new(FinCategory::poset(3, |i, j| i <= j));
        let a = Presheaf::representable(cat.clone(), 1)
            .coproduct(&Presheaf::terminal(cat.clone()))
            .unwrap();
        let b = Presheaf::terminal(cat.clone())
            .coproduct(&Presheaf::representable(cat.clone(), 1))
            .unwrap();
        let iso = find_iso(&a, &b).unwrap();
        assert!(iso.verify(&a, &b));
        assert!(find_iso(&a, &Presheaf::constant(cat, 2)).is_none());
    }
}
