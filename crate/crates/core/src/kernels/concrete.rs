use alloc::vec::Vec;

use hashbrown::HashMap;

use crate::fincat::{FinCategory, Ob, PresheafLike};
use crate::error::{precondition, Result};

/// Two elements of `F(X)` with the same evaluation at every point `1 → X`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ConcreteWitness {
    pub object: Ob,
    pub first: usize,
    pub second: usize,
}

/// An object with exactly one arrow into it from every object.
pub fn terminal_object(cat: &FinCategory) -> Option<Ob> {
    cat.objects().find(|&t| cat.objects().all(|c| cat.hom(c, t).len() == 1))
}

/// Checks that `F(X) → F(1)^{C(1, X)}`, `e ↦ (F(p)(e))_p`, is injective at
/// every object. Returns the first collision found.
pub fn is_concrete<P: PresheafLike + ?Sized>(f: &P, terminal: Ob) -> Result<Option<ConcreteWitness>> {
    let cat = f.category();
    if terminal >= cat.object_count() || cat.objects().any(|c| cat.hom(c, terminal).len() != 1) {
        return Err(precondition("object is not terminal"));
    }
    for x in cat.objects() {
        let points = cat.hom(terminal, x);
        let mut seen: HashMap<Vec<usize>, usize> = HashMap::new();
        for e in 0..f.size(x) {
            let eval: Vec<usize> = points.iter().map(|&p| f.act(p as usize, e)).collect();
            if let Some(&first) = seen.get(&eval) {
                return Ok(Some(ConcreteWitness { object: x, first, second: e }));
            }
            seen.insert(eval, e);
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::Presheaf;
    use alloc::sync::Arc;

    #[test]
    fn representables_on_finite_sets_are_concrete() {
        let cat = Arc::new(FinCategory::finset(2));
        let t = terminal_object(&cat).unwrap();
        assert_eq!(cat.object_name(t), "1");
        for c in cat.objects() {
            assert_eq!(is_concrete(&Presheaf::representable(cat.clone(), c), t).unwrap(), None);
        }
    }

    #[test]
    fn one_object_site_is_vacuous() {
        let cat = Arc::new(FinCategory::terminal());
        assert_eq!(is_concrete(&Presheaf::constant(cat, 3), 0).unwrap(), None);
    }

    #[test]
    fn glued_quotient_is_not_concrete() {
        // The quotient of y(2) sending the bijections of 2 to one element and
        // every other function to another; F(1) becomes a single point.
        let cat = Arc::new(FinCategory::finset(2));
        let c = cat.clone();
        let two = cat.object_by_name("2").unwrap();
        let sizes = cat.objects().map(|x| if x == two { 2 } else { 1 }).collect();
        let is_iso = |a: usize| c.hom(c.dst(a), c.src(a)).iter().any(|&b| c.is_identity(c.compose(b as usize, a)));
        let f = Presheaf::from_fn(cat.clone(), sizes, |a, e| {
            if c.src(a) == two && c.dst(a) == two && is_iso(a) {
                e
            } else {
                0
            }
        });
        assert!(f.check_functoriality().is_empty());
        let w = is_concrete(&f, cat.object_by_name("1").unwrap()).unwrap().unwrap();
        assert_eq!(w, ConcreteWitness { object: two, first: 0, second: 1 });
        assert!(is_concrete(&f, two).is_err());
    }

}
