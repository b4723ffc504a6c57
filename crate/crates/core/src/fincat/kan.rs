use alloc::sync::Arc;
use alloc::vec::Vec;
use core::ops::ControlFlow;

use hashbrown::HashMap;

use super::category::Ob;
use super::functor::{same_category, FinFunctor};
use super::hom::for_each_hom;
use super::presheaf::{NatTransformation, Presheaf, PresheafLike};
use crate::dsu::UnionFind;
use crate::error::{Error, Result};

/// `Lan_f p`, computed pointwise as the coend `∫^c D(-, f c) × p(c)`.
#[derive(Debug, Clone)]
pub struct LeftKan {
    pub presheaf: Presheaf,
    /// `p → f*(Lan_f p)`, sending `x ∈ p(c)` to the class of `(id_{fc}, x)`.
    pub unit: NatTransformation,
    base: Vec<Vec<usize>>,
    class: Vec<Vec<u32>>,
    psizes: Vec<usize>,
}

impl LeftKan {
    /// The class of `(u, x)` at `d`, where `u` is the `i`-th arrow of
    /// `D(d, f c)` and `x ∈ p(c)`.
    pub fn class(&self, d: Ob, c: Ob, i: usize, x: usize) -> usize {
        self.class[d][self.base[d][c] + i * self.psizes[c] + x] as usize
    }

    /// Transposes `α: Lan_f p → q` to `f*α ∘ unit: p → f* q`.
    pub fn transpose(&self, f: &FinFunctor, alpha: &NatTransformation) -> NatTransformation {
        NatTransformation {
            components: f
                .source()
                .objects()
                .map(|c| {
                    self.unit.components[c]
                        .iter()
                        .map(|&k| alpha.components[f.ob(c)][k as usize])
                        .collect()
                })
                .collect(),
        }
    }
}

pub fn lan(f: &FinFunctor, p: &Presheaf) -> Result<LeftKan> {
    if !same_category(f.source(), p.cat()) {
        return Err(Error::CategoryMismatch);
    }
    let src = f.source();
    let tgt = f.target().clone();
    let psizes: Vec<usize> = p.sizes().collect();
    let mut base = Vec::with_capacity(tgt.object_count());
    let mut class = Vec::with_capacity(tgt.object_count());
    let mut reps = Vec::with_capacity(tgt.object_count());
    let mut sizes = Vec::with_capacity(tgt.object_count());
    for d in tgt.objects() {
        let mut b = Vec::with_capacity(src.object_count());
        let mut total = 0;
        for c in src.objects() {
            b.push(total);
            total += tgt.hom(d, f.ob(c)).len() * psizes[c];
        }
        let mut uf = UnionFind::new(total);
        for a in src.arrows() {
            if src.is_identity(a) {
                continue;
            }
            let (c1, c) = (src.src(a), src.dst(a));
            let fa = f.arr(a);
            for (i1, &u1) in tgt.hom(d, f.ob(c1)).iter().enumerate() {
                let u = tgt.compose(fa, u1 as usize);
                let i = tgt.hom_index(u);
                for x in 0..psizes[c] {
                    uf.union(
                        b[c] + i * psizes[c] + x,
                        b[c1] + i1 * psizes[c1] + p.act(a, x),
                    );
                }
            }
        }
        let (cls, n) = uf.classes();
        let mut rep = alloc::vec![(0u32, 0u32, 0u32); n];
        let mut seen = alloc::vec![false; n];
        for c in src.objects() {
            for i in 0..tgt.hom(d, f.ob(c)).len() {
                for x in 0..psizes[c] {
                    let k = cls[b[c] + i * psizes[c] + x] as usize;
                    if !seen[k] {
                        seen[k] = true;
                        rep[k] = (c as u32, tgt.hom(d, f.ob(c))[i], x as u32);
                    }
                }
            }
        }
        base.push(b);
        class.push(cls);
        reps.push(rep);
        sizes.push(n);
    }
    let presheaf = Presheaf::from_fn(tgt.clone(), sizes, |g, k| {
        let (c, u, x) = reps[tgt.dst(g)][k];
        let ug = tgt.compose(u as usize, g);
        let d1 = tgt.src(g);
        let c = c as usize;
        class[d1][base[d1][c] + tgt.hom_index(ug) * psizes[c] + x as usize] as usize
    });
    let unit = NatTransformation {
        components: src
            .objects()
            .map(|c| {
                let d = f.ob(c);
                let i = tgt.hom_index(tgt.id(d));
                (0..psizes[c])
                    .map(|x| class[d][base[d][c] + i * psizes[c] + x])
                    .collect()
            })
            .collect(),
    };
    Ok(LeftKan {
        presheaf,
        unit,
        base,
        class,
        psizes,
    })
}

/// `Ran_f p`, computed pointwise as the end `∫_c [D(f c, -), p(c)]`, i.e. as
/// natural transformations `D(f -, d) → p`.
#[derive(Debug, Clone)]
pub struct RightKan {
    pub presheaf: Presheaf,
    /// `f*(Ran_f p) → p`, evaluating a family at the identity.
    pub counit: NatTransformation,
    /// `families[d][k]` is the natural transformation `D(f -, d) → p` that is
    /// element `k` of `Ran_f p (d)`.
    pub families: Vec<Vec<NatTransformation>>,
}

impl RightKan {
    /// Transposes `β: q → Ran_f p` to `counit ∘ f*β: f* q → p`.
    pub fn transpose(&self, f: &FinFunctor, beta: &NatTransformation) -> NatTransformation {
        NatTransformation {
            components: f
                .source()
                .objects()
                .map(|c| {
                    beta.components[f.ob(c)]
                        .iter()
                        .map(|&k| self.counit.components[c][k as usize])
                        .collect()
                })
                .collect(),
        }
    }
}

/// The presheaf `c ↦ D(f c, d)` on the source of `f`.
fn corepresented(f: &FinFunctor, d: Ob) -> Presheaf {
    let src = f.source().clone();
    let tgt = f.target().clone();
    let sizes = src.objects().map(|c| tgt.hom(f.ob(c), d).len()).collect();
    Presheaf::from_fn(src.clone(), sizes, |a, i| {
        let v = tgt.hom(f.ob(src.dst(a)), d)[i] as usize;
        tgt.hom_index(tgt.compose(v, f.arr(a)))
    })
}

pub fn ran(f: &FinFunctor, p: &Presheaf) -> Result<RightKan> {
    if !same_category(f.source(), p.cat()) {
        return Err(Error::CategoryMismatch);
    }
    let src = f.source();
    let tgt: Arc<_> = f.target().clone();
    let mut families = Vec::with_capacity(tgt.object_count());
    let mut index = Vec::with_capacity(tgt.object_count());
    for d in tgt.objects() {
        let r = corepresented(f, d);
        let mut fams = Vec::new();
        for_each_hom(&r, p, |t| {
            fams.push(t);
            ControlFlow::Continue(())
        });
        let idx: HashMap<NatTransformation, u32> =
            fams.iter().enumerate().map(|(i, t)| (t.clone(), i as u32)).collect();
        families.push(fams);
        index.push(idx);
    }
    let sizes = families.iter().map(|v| v.len()).collect();
    let presheaf = Presheaf::from_fn(tgt.clone(), sizes, |g, k| {
        let (d1, d) = (tgt.src(g), tgt.dst(g));
        let theta = &families[d][k];
        let moved = NatTransformation {
            components: src
                .objects()
                .map(|c| {
                    tgt.hom(f.ob(c), d1)
                        .iter()
                        .map(|&w| {
                            let gw = tgt.compose(g, w as usize);
                            theta.components[c][tgt.hom_index(gw)]
                        })
                        .collect()
                })
                .collect(),
        };
        index[d1][&moved] as usize
    });
    let counit = NatTransformation {
        components: src
            .objects()
            .map(|c| {
                let d = f.ob(c);
                let i = tgt.hom_index(tgt.id(d));
                families[d].iter().map(|t| t.components[c][i]).collect()
            })
            .collect(),
    };
    Ok(RightKan {
        presheaf,
        counit,
        families,
    })
}
