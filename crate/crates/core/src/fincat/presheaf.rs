use alloc::sync::Arc;
use alloc::vec::Vec;

use super::category::{Arr, FinCategory, Ob};
use super::functor::{same_category, FinFunctor};
use crate::error::{malformed, Error, Result};

/// Read access to a set-valued contravariant functor.
///
/// `act(f, x)` applies `P(f): P(dst f) → P(src f)`.
pub trait PresheafLike {
    fn category(&self) -> &FinCategory;
    fn size(&self, c: Ob) -> usize;
    fn act(&self, f: Arr, x: usize) -> usize;
}

/// A presheaf with elements `0..size(c)` at each object.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Presheaf {
    cat: Arc<FinCategory>,
    sizes: Vec<u32>,
    offsets: Vec<usize>,
    act: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PresheafViolation {
    Identity { ob: Ob, element: usize },
    /// `P(g∘f)(x) != P(f)(P(g)(x))`.
    Composition { g: Arr, f: Arr, element: usize },
}

impl PresheafLike for Presheaf {
    fn category(&self) -> &FinCategory {
        &self.cat
    }
    fn size(&self, c: Ob) -> usize {
        self.sizes[c] as usize
    }
    fn act(&self, f: Arr, x: usize) -> usize {
        self.act[self.offsets[f] + x] as usize
    }
}

impl Presheaf {
    /// Builds a presheaf from one table per arrow. Shapes and ranges are
    /// checked; functoriality is not (see [`Presheaf::check_functoriality`]).
    pub fn new(cat: Arc<FinCategory>, sizes: Vec<usize>, tables: Vec<Vec<u32>>) -> Result<Self> {
        if sizes.len() != cat.object_count() || tables.len() != cat.arrow_count() {
            return Err(malformed("presheaf tables do not match the category"));
        }
        let mut offsets = Vec::with_capacity(tables.len());
        let mut act = Vec::new();
        for (f, t) in tables.into_iter().enumerate() {
            if t.len() != sizes[cat.dst(f)] || t.iter().any(|&y| y as usize >= sizes[cat.src(f)]) {
                return Err(malformed(alloc::format!(
                    "action of arrow {} has the wrong shape",
                    cat.arrow_name(f)
                )));
            }
            offsets.push(act.len());
            act.extend(t);
        }
        Ok(Presheaf {
            cat,
            sizes: sizes.into_iter().map(|s| s as u32).collect(),
            offsets,
            act,
        })
    }

    /// Builds a presheaf from an action function, trusted to stay in range.
    pub fn from_fn(
        cat: Arc<FinCategory>,
        sizes: Vec<usize>,
        mut act: impl FnMut(Arr, usize) -> usize,
    ) -> Self {
        let mut offsets = Vec::with_capacity(cat.arrow_count());
        let mut table = Vec::new();
        for f in cat.arrows() {
            offsets.push(table.len());
            for x in 0..sizes[cat.dst(f)] {
                table.push(act(f, x) as u32);
            }
        }
        Presheaf {
            sizes: sizes.into_iter().map(|s| s as u32).collect(),
            cat,
            offsets,
            act: table,
        }
    }

    /// Copies any presheaf-like value into table form.
    pub fn materialize<P: PresheafLike + ?Sized>(cat: Arc<FinCategory>, p: &P) -> Self {
        let sizes = cat.objects().map(|c| p.size(c)).collect();
        Self::from_fn(cat, sizes, |f, x| p.act(f, x))
    }

    pub fn cat(&self) -> &Arc<FinCategory> {
        &self.cat
    }
    pub fn sizes(&self) -> impl Iterator<Item = usize> + '_ {
        self.sizes.iter().map(|&s| s as usize)
    }
    pub fn total_size(&self) -> usize {
        self.sizes.iter().map(|&s| s as usize).sum()
    }
    /// The action table of `f`, indexed by elements of `P(dst f)`.
    pub fn table(&self, f: Arr) -> &[u32] {
        let start = self.offsets[f];
        &self.act[start..start + self.sizes[self.cat.dst(f)] as usize]
    }

    /// The representable `y(c) = C(-, c)`; the element at `d` with index `i`
    /// is the `i`-th arrow of `hom(d, c)`.
    pub fn representable(cat: Arc<FinCategory>, c: Ob) -> Self {
        let sizes = cat.objects().map(|d| cat.hom(d, c).len()).collect();
        let cc = cat.clone();
        Self::from_fn(cat, sizes, |f, i| {
            let u = cc.hom(cc.dst(f), c)[i] as usize;
            cc.hom_index(cc.compose(u, f))
        })
    }

    pub fn constant(cat: Arc<FinCategory>, k: usize) -> Self {
        let sizes = alloc::vec![k; cat.object_count()];
        Self::from_fn(cat, sizes, |_, x| x)
    }

    pub fn terminal(cat: Arc<FinCategory>) -> Self {
        Self::constant(cat, 1)
    }

    pub fn empty(cat: Arc<FinCategory>) -> Self {
        Self::constant(cat, 0)
    }

    /// Pointwise disjoint union; elements of `q` follow those of `self`.
    pub fn coproduct(&self, q: &Presheaf) -> Result<Self> {
        if !same_category(&self.cat, &q.cat) {
            return Err(Error::CategoryMismatch);
        }
        let sizes = self.cat.objects().map(|c| self.size(c) + q.size(c)).collect();
        Ok(Self::from_fn(self.cat.clone(), sizes, |f, x| {
            let n = self.size(self.cat.dst(f));
            if x < n {
                self.act(f, x)
            } else {
                self.size(self.cat.src(f)) + q.act(f, x - n)
            }
        }))
    }

    /// Pointwise product; the pair `(x, y)` is `x * |Q(c)| + y`.
    pub fn product(&self, q: &Presheaf) -> Result<Self> {
        if !same_category(&self.cat, &q.cat) {
            return Err(Error::CategoryMismatch);
        }
        let sizes = self.cat.objects().map(|c| self.size(c) * q.size(c)).collect();
        Ok(Self::from_fn(self.cat.clone(), sizes, |f, xy| {
            let nq = q.size(self.cat.dst(f));
            let (x, y) = (xy / nq, xy % nq);
            self.act(f, x) * q.size(self.cat.src(f)) + q.act(f, y)
        }))
    }

    /// Precomposition `q ∘ f` along a functor into `q`'s category.
    pub fn restrict(f: &FinFunctor, q: &Presheaf) -> Result<Self> {
        if !same_category(f.target(), &q.cat) {
            return Err(Error::CategoryMismatch);
        }
        let src = f.source().clone();
        let sizes = src.objects().map(|c| q.size(f.ob(c))).collect();
        Ok(Self::from_fn(src, sizes, |a, x| q.act(f.arr(a), x)))
    }

    /// Identity and composition laws, checked exhaustively.
    pub fn check_functoriality(&self) -> Vec<PresheafViolation> {
        check_functoriality(self)
    }
}

/// The precomposition `p ∘ f`, evaluated lazily.
#[derive(Debug, Clone, Copy)]
pub struct Restriction<'a, P: ?Sized> {
    pub functor: &'a FinFunctor,
    pub presheaf: &'a P,
}

impl<P: PresheafLike + ?Sized> PresheafLike for Restriction<'_, P> {
    fn category(&self) -> &FinCategory {
        self.functor.source()
    }
    fn size(&self, c: Ob) -> usize {
        self.presheaf.size(self.functor.ob(c))
    }
    fn act(&self, f: Arr, x: usize) -> usize {
        self.presheaf.act(self.functor.arr(f), x)
    }
}

/// Identity and composition laws for any presheaf-like value.
pub fn check_functoriality<P: PresheafLike + ?Sized>(p: &P) -> Vec<PresheafViolation> {
    let cat = p.category();
    let mut out = Vec::new();
    for c in cat.objects() {
        let i = cat.id(c);
        for x in 0..p.size(c) {
            if p.act(i, x) != x {
                out.push(PresheafViolation::Identity { ob: c, element: x });
            }
        }
    }
    for f in cat.arrows() {
        for d in cat.objects() {
            for &g in cat.hom(cat.dst(f), d) {
                let g = g as usize;
                let gf = cat.compose(g, f);
                for x in 0..p.size(d) {
                    if p.act(gf, x) != p.act(f, p.act(g, x)) {
                        out.push(PresheafViolation::Composition { g, f, element: x });
                    }
                }
            }
        }
    }
    out
}

/// A natural transformation, stored as one component table per object.
/// Source and target presheaves are supplied to the operations that need them.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct NatTransformation {
    pub components: Vec<Vec<u32>>,
}

impl NatTransformation {
    pub fn identity<P: PresheafLike + ?Sized>(p: &P) -> Self {
        NatTransformation {
            components: p
                .category()
                .objects()
                .map(|c| (0..p.size(c) as u32).collect())
                .collect(),
        }
    }

    /// The map `y(c) → p` sending the identity of `c` to `x`.
    pub fn yoneda<P: PresheafLike + ?Sized>(p: &P, c: Ob, x: usize) -> Self {
        let cat = p.category();
        NatTransformation {
            components: cat
                .objects()
                .map(|d| cat.hom(d, c).iter().map(|&u| p.act(u as usize, x) as u32).collect())
                .collect(),
        }
    }

    pub fn apply(&self, c: Ob, x: usize) -> usize {
        self.components[c][x] as usize
    }

    /// Whether the tables have the right shapes and every naturality square
    /// commutes.
    pub fn is_natural<P, Q>(&self, p: &P, q: &Q) -> bool
    where
        P: PresheafLike + ?Sized,
        Q: PresheafLike + ?Sized,
    {
        let cat = p.category();
        if self.components.len() != cat.object_count() {
            return false;
        }
        for c in cat.objects() {
            let comp = &self.components[c];
            if comp.len() != p.size(c) || comp.iter().any(|&y| y as usize >= q.size(c)) {
                return false;
            }
        }
        cat.arrows().all(|f| {
            (0..p.size(cat.dst(f))).all(|x| {
                self.apply(cat.src(f), p.act(f, x)) == q.act(f, self.apply(cat.dst(f), x))
            })
        })
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &NatTransformation) -> NatTransformation {
        NatTransformation {
            components: self
                .components
                .iter()
                .zip(&other.components)
                .map(|(a, b)| a.iter().map(|&x| b[x as usize]).collect())
                .collect(),
        }
    }

    /// Componentwise inverse when every component is a bijection onto a set
    /// of the same size.
    pub fn inverse<Q: PresheafLike + ?Sized>(&self, q: &Q) -> Option<NatTransformation> {
        let mut components = Vec::with_capacity(self.components.len());
        for (c, comp) in self.components.iter().enumerate() {
            if comp.len() != q.size(c) {
                return None;
            }
            let mut inv = alloc::vec![u32::MAX; comp.len()];
            for (x, &y) in comp.iter().enumerate() {
                let slot = inv.get_mut(y as usize)?;
                if *slot != u32::MAX {
                    return None;
                }
                *slot = x as u32;
            }
            components.push(inv);
        }
        Some(NatTransformation { components })
    }

    pub fn is_identity(&self) -> bool {
        self.components
            .iter()
            .all(|c| c.iter().enumerate().all(|(i, &x)| i == x as usize))
    }
}

/// A pair of mutually inverse natural transformations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Isomorphism {
    pub forward: NatTransformation,
    pub backward: NatTransformation,
}

impl Isomorphism {
    /// Verifies naturality of both directions and that both composites are
    /// identities.
    pub fn verify<P, Q>(&self, p: &P, q: &Q) -> bool
    where
        P: PresheafLike + ?Sized,
        Q: PresheafLike + ?Sized,
    {
        self.forward.is_natural(p, q)
            && self.backward.is_natural(q, p)
            && self.forward.then(&self.backward).is_identity()
            && self.backward.then(&self.forward).is_identity()
    }

    /// Completes a natural bijection to a witnessed isomorphism.
    pub fn from_forward<P, Q>(forward: NatTransformation, p: &P, q: &Q) -> Option<Self>
    where
        P: PresheafLike + ?Sized,
        Q: PresheafLike + ?Sized,
    {
        if !forward.is_natural(p, q) {
            return None;
        }
        let backward = forward.inverse(q)?;
        let iso = Isomorphism { forward, backward };
        iso.verify(p, q).then_some(iso)
    }
}
