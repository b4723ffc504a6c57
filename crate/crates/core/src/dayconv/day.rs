use alloc::vec::Vec;

use hashbrown::HashMap;

use super::MonoidalFinCategory;
use crate::dsu::UnionFind;
use crate::error::{precondition, Error, Result};
use crate::fincat::{
    composition_generators, for_each_hom, same_category, Arr, Isomorphism, NatTransformation, Ob,
    Presheaf, PresheafLike,
};

/// `P ⊗̄ Q`, with the coend classes of its elements.
///
/// An element of `(P ⊗̄ Q)(c)` is the class of a tuple `(a, b, x, y, h)` with
/// `x ∈ P(a)`, `y ∈ Q(b)` and `h: c → a ⊗ b`, under
/// `(x, y, (u ⊗ v) ∘ h) ~ (P(u) x, Q(v) y, h)`.
#[derive(Debug, Clone)]
pub struct DayTensor {
    pub presheaf: Presheaf,
    /// Pairs `(a, b)` with `a ⊗ b` defined.
    pairs: Vec<(Ob, Ob)>,
    psize: Vec<usize>,
    qsize: Vec<usize>,
    /// `offset[c][k]`: first raw tuple of pair `k` at `c`.
    offset: Vec<Vec<usize>>,
    /// `class[c][raw]`.
    class: Vec<Vec<u32>>,
    /// `rep[c][class]`: least raw tuple of the class.
    rep: Vec<Vec<u32>>,
    pair_index: HashMap<(Ob, Ob), usize>,
}

impl DayTensor {
    fn raw(&self, m: &MonoidalFinCategory, c: Ob, k: usize, x: usize, y: usize, h: Arr) -> usize {
        let cat = m.base();
        let (_, b) = self.pairs[k];
        let homs = cat.hom(c, cat.dst(h)).len();
        self.offset[c][k] + (x * self.qsize[b] + y) * homs + cat.hom_index(h)
    }

    /// The class of `(a, b, x, y, h)` in `(P ⊗̄ Q)(c)`.
    pub fn element(&self, m: &MonoidalFinCategory, c: Ob, a: Ob, b: Ob, x: usize, y: usize, h: Arr) -> Option<usize> {
        let k = *self.pair_index.get(&(a, b))?;
        let cat = m.base();
        if x >= self.psize[a] || y >= self.qsize[b] || cat.src(h) != c || Some(cat.dst(h)) != m.tensor_ob(a, b) {
            return None;
        }
        Some(self.class[c][self.raw(m, c, k, x, y, h)] as usize)
    }

    /// The least tuple `(a, b, x, y, h)` of an element of `(P ⊗̄ Q)(c)`.
    pub fn representative(&self, m: &MonoidalFinCategory, c: Ob, e: usize) -> (Ob, Ob, usize, usize, Arr) {
        let raw = self.rep[c][e] as usize;
        let k = self.offset[c].partition_point(|&o| o <= raw) - 1;
        let (a, b) = self.pairs[k];
        let cat = m.base();
        let ab = m.tensor_ob(a, b).expect("defined pair");
        let hom = cat.hom(c, ab);
        let r = raw - self.offset[c][k];
        let h = hom[r % hom.len()] as usize;
        let xy = r / hom.len();
        (a, b, xy / self.qsize[b], xy % self.qsize[b], h)
    }
}

/// Day convolution `(P ⊗̄ Q)(c) = ∫^{a,b} P(a) × Q(b) × C(c, a ⊗ b)`.
///
/// The coend runs over the pairs with `a ⊗ b` defined. It is generated by
/// the one-sided relations `(u ⊗ id, id)` and `(id, id ⊗ v)`, with `u`
/// ranging over generators of the full subcategory of objects tensorable
/// with `b` (and dually); pairs of pairs joined by no such path get the
/// two-sided relations directly.
pub fn day_tensor(p: &Presheaf, q: &Presheaf, m: &MonoidalFinCategory) -> Result<DayTensor> {
    let cat = m.base().clone();
    if !same_category(p.cat(), &cat) || !same_category(q.cat(), &cat) {
        return Err(Error::CategoryMismatch);
    }
    let nob = cat.object_count();
    let mut pairs = Vec::new();
    for a in cat.objects() {
        for b in cat.objects() {
            if m.tensor_ob(a, b).is_some() {
                pairs.push((a, b));
            }
        }
    }
    let pair_index: HashMap<(Ob, Ob), usize> = pairs.iter().enumerate().map(|(k, &ab)| (ab, k)).collect();
    let psize: Vec<usize> = cat.objects().map(|c| p.size(c)).collect();
    let qsize: Vec<usize> = cat.objects().map(|c| q.size(c)).collect();

    // Generators of each slice: left[b] moves `a` with `b` fixed.
    let slice_gens = |fixed: Ob, left: bool| {
        let allowed: Vec<bool> = cat
            .objects()
            .map(|x| if left { m.tensor_ob(x, fixed) } else { m.tensor_ob(fixed, x) }.is_some())
            .collect();
        composition_generators(&cat, Some(&allowed))
    };
    let left: Vec<Vec<u32>> = cat.objects().map(|b| slice_gens(b, true)).collect();
    let right: Vec<Vec<u32>> = cat.objects().map(|a| slice_gens(a, false)).collect();
    let mut gaps = Vec::new();
    for &(a2, b2) in &pairs {
        for &(a, b) in &pairs {
            let linked = m.tensor_ob(a, b2).is_some() || m.tensor_ob(a2, b).is_some();
            if !linked && !cat.hom(a2, a).is_empty() && !cat.hom(b2, b).is_empty() {
                gaps.push(((a2, b2), (a, b)));
            }
        }
    }

    let mut t = DayTensor {
        presheaf: Presheaf::empty(cat.clone()),
        pairs,
        psize,
        qsize,
        offset: Vec::with_capacity(nob),
        class: Vec::with_capacity(nob),
        rep: Vec::with_capacity(nob),
        pair_index,
    };
    let mut sizes = Vec::with_capacity(nob);
    for c in cat.objects() {
        let mut offs = Vec::with_capacity(t.pairs.len());
        let mut total = 0usize;
        for &(a, b) in &t.pairs {
            offs.push(total);
            let ab = m.tensor_ob(a, b).expect("defined pair");
            total += t.psize[a] * t.qsize[b] * cat.hom(c, ab).len();
        }
        t.offset.push(offs);
        let mut uf = UnionFind::new(total);
        // (x, y, (u ⊗ v) ∘ h) ~ (P(u) x, Q(v) y, h) for h: c → a2 ⊗ b2.
        let relate = |t: &DayTensor, uf: &mut UnionFind, u: Arr, v: Arr| {
            let (a2, a) = (cat.src(u), cat.dst(u));
            let (b2, b) = (cat.src(v), cat.dst(v));
            let (Some(k), Some(k2)) = (t.pair_index.get(&(a, b)), t.pair_index.get(&(a2, b2))) else {
                return;
            };
            let uv = m.tensor_arr(u, v).expect("defined pair");
            let hs = cat.hom(c, cat.src(uv));
            for x in 0..t.psize[a] {
                let px = p.act(u, x);
                for y in 0..t.qsize[b] {
                    let qy = q.act(v, y);
                    for &h in hs {
                        let h = h as usize;
                        let lhs = t.raw(m, c, *k, x, y, cat.compose(uv, h));
                        let rhs = t.raw(m, c, *k2, px, qy, h);
                        uf.union(lhs, rhs);
                    }
                }
            }
        };
        for b in cat.objects() {
            for &u in &left[b] {
                relate(&t, &mut uf, u as usize, cat.id(b));
            }
        }
        for a in cat.objects() {
            for &v in &right[a] {
                relate(&t, &mut uf, cat.id(a), v as usize);
            }
        }
        for &((a2, b2), (a, b)) in &gaps {
            for &u in cat.hom(a2, a) {
                for &v in cat.hom(b2, b) {
                    relate(&t, &mut uf, u as usize, v as usize);
                }
            }
        }
        let (class, n) = uf.classes();
        let mut rep = alloc::vec![u32::MAX; n];
        for (raw, &k) in class.iter().enumerate() {
            if rep[k as usize] == u32::MAX {
                rep[k as usize] = raw as u32;
            }
        }
        t.class.push(class);
        t.rep.push(rep);
        sizes.push(n);
    }
    let presheaf = Presheaf::from_fn(cat.clone(), sizes, |g, e| {
        let (c2, c) = (cat.src(g), cat.dst(g));
        let (a, b, x, y, h) = t.representative(m, c, e);
        t.element(m, c2, a, b, x, y, cat.compose(h, g)).expect("in range")
    });
    t.presheaf = presheaf;
    Ok(t)
}

/// `[P, Q]`, with each element as the natural transformation it names.
#[derive(Debug, Clone)]
pub struct DayHom {
    pub presheaf: Presheaf,
    /// `elements[c][i]`: a map `P → Q(- ⊗ c)`.
    pub elements: Vec<Vec<NatTransformation>>,
    index: Vec<HashMap<NatTransformation, usize>>,
}

impl DayHom {
    pub fn index_of(&self, c: Ob, alpha: &NatTransformation) -> Option<usize> {
        self.index[c].get(alpha).copied()
    }
}

/// `Q(- ⊗ c)` as a presheaf; needs `d ⊗ c` defined for every `d`.
pub fn shifted(q: &Presheaf, c: Ob, m: &MonoidalFinCategory) -> Option<Presheaf> {
    let cat = m.base();
    let sizes = cat
        .objects()
        .map(|d| m.tensor_ob(d, c).map(|dc| q.size(dc)))
        .collect::<Option<Vec<_>>>()?;
    let idc = cat.id(c);
    Some(Presheaf::from_fn(cat.clone(), sizes, |f, x| {
        q.act(m.tensor_arr(f, idc).expect("defined"), x)
    }))
}

/// The internal hom `[P, Q](c) = ∫_{d} [P(d), Q(d ⊗ c)]`: the natural
/// transformations `P → Q(- ⊗ c)`. Needs a total tensor.
pub fn day_hom(p: &Presheaf, q: &Presheaf, m: &MonoidalFinCategory) -> Result<DayHom> {
    let cat = m.base().clone();
    if !same_category(p.cat(), &cat) || !same_category(q.cat(), &cat) {
        return Err(Error::CategoryMismatch);
    }
    if !m.is_total() {
        return Err(precondition("the internal hom needs a total tensor"));
    }
    let mut elements = Vec::with_capacity(cat.object_count());
    let mut index = Vec::with_capacity(cat.object_count());
    for c in cat.objects() {
        let qc = shifted(q, c, m).expect("total");
        let mut list = Vec::new();
        for_each_hom(p, &qc, |h| {
            list.push(h);
            core::ops::ControlFlow::Continue(())
        });
        index.push(list.iter().cloned().enumerate().map(|(i, h)| (h, i)).collect::<HashMap<_, _>>());
        elements.push(list);
    }
    let sizes = elements.iter().map(Vec::len).collect();
    let presheaf = Presheaf::from_fn(cat.clone(), sizes, |g, i| {
        let (c2, c) = (cat.src(g), cat.dst(g));
        let alpha = &elements[c][i];
        let beta = NatTransformation {
            components: cat
                .objects()
                .map(|d| {
                    let dg = m.tensor_arr(cat.id(d), g).expect("total");
                    alpha.components[d].iter().map(|&y| q.act(dg, y as usize) as u32).collect()
                })
                .collect(),
        };
        index[c2][&beta]
    });
    Ok(DayHom {
        presheaf,
        elements,
        index,
    })
}

/// The transpose `R → [P, Q]` of `φ: P ⊗̄ R → Q`:
/// `r ↦ (x ∈ P(d) ↦ φ[(d, c, x, r, id)])`.
pub fn day_curry(
    phi: &NatTransformation,
    tensor: &DayTensor,
    hom: &DayHom,
    r: &Presheaf,
    m: &MonoidalFinCategory,
) -> Option<NatTransformation> {
    let cat = m.base();
    let mut components = Vec::with_capacity(cat.object_count());
    for c in cat.objects() {
        let mut comp = Vec::with_capacity(r.size(c));
        for z in 0..r.size(c) {
            let mut alpha = Vec::with_capacity(cat.object_count());
            for d in cat.objects() {
                let dc = m.tensor_ob(d, c)?;
                let row = (0..tensor.psize[d])
                    .map(|x| {
                        let e = tensor.element(m, dc, d, c, x, z, cat.id(dc))?;
                        Some(phi.components[dc][e])
                    })
                    .collect::<Option<Vec<u32>>>()?;
                alpha.push(row);
            }
            comp.push(hom.index_of(c, &NatTransformation { components: alpha })? as u32);
        }
        components.push(comp);
    }
    Some(NatTransformation { components })
}

/// `y(a ⊗ b) ≅ y(a) ⊗̄ y(b)`, sending `h: c → a ⊗ b` to `(id_a, id_b, h)`.
pub fn yoneda_tensor_iso(a: Ob, b: Ob, m: &MonoidalFinCategory) -> Result<(Presheaf, DayTensor, Option<Isomorphism>)> {
    let cat = m.base().clone();
    let ab = m.tensor_ob(a, b).ok_or_else(|| precondition("a ⊗ b is undefined"))?;
    let ya = Presheaf::representable(cat.clone(), a);
    let yb = Presheaf::representable(cat.clone(), b);
    let yab = Presheaf::representable(cat.clone(), ab);
    let t = day_tensor(&ya, &yb, m)?;
    let (ia, ib) = (cat.hom_index(cat.id(a)), cat.hom_index(cat.id(b)));
    let forward = NatTransformation {
        components: cat
            .objects()
            .map(|c| {
                cat.hom(c, ab)
                    .iter()
                    .map(|&h| t.element(m, c, a, b, ia, ib, h as usize).expect("in range") as u32)
                    .collect()
            })
            .collect(),
    };
    let iso = Isomorphism::from_forward(forward, &yab, &t.presheaf);
    Ok((yab, t, iso))
}

/// `P ≅ P ⊗̄ y(e)`, sending `x ∈ P(c)` to `(x, id_e, ρ_c⁻¹)`.
pub fn right_unit_iso(p: &Presheaf, m: &MonoidalFinCategory) -> Result<(DayTensor, Option<Isomorphism>)> {
    unit_iso(p, m, false)
}

/// `P ≅ y(e) ⊗̄ P`, sending `x ∈ P(c)` to `(id_e, x, λ_c⁻¹)`.
pub fn left_unit_iso(p: &Presheaf, m: &MonoidalFinCategory) -> Result<(DayTensor, Option<Isomorphism>)> {
    unit_iso(p, m, true)
}

fn unit_iso(p: &Presheaf, m: &MonoidalFinCategory, left: bool) -> Result<(DayTensor, Option<Isomorphism>)> {
    let cat = m.base().clone();
    let e = m.unit();
    let ye = Presheaf::representable(cat.clone(), e);
    let t = if left { day_tensor(&ye, p, m)? } else { day_tensor(p, &ye, m)? };
    let ie = cat.hom_index(cat.id(e));
    let mut components = Vec::with_capacity(cat.object_count());
    for c in cat.objects() {
        let unitor = if left { m.left_unitor(c) } else { m.right_unitor(c) };
        let inv = unitor
            .and_then(|u| m.inverse(u))
            .ok_or_else(|| precondition("unitor is missing or not invertible"))?;
        components.push(
            (0..p.size(c))
                .map(|x| {
                    let el = if left {
                        t.element(m, c, e, c, ie, x, inv)
                    } else {
                        t.element(m, c, c, e, x, ie, inv)
                    };
                    el.expect("in range") as u32
                })
                .collect(),
        );
    }
    let iso = Isomorphism::from_forward(NatTransformation { components }, p, &t.presheaf);
    Ok((t, iso))
}

/// `P ⊗̄ Q ≅ Q ⊗̄ P`, sending `(a, b, x, y, h)` to `(b, a, y, x, σ ∘ h)`.
pub fn symmetry_iso(pq: &DayTensor, qp: &DayTensor, m: &MonoidalFinCategory) -> Option<Isomorphism> {
    let cat = m.base();
    let components = cat
        .objects()
        .map(|c| {
            (0..pq.presheaf.size(c))
                .map(|e| {
                    let (a, b, x, y, h) = pq.representative(m, c, e);
                    let s = m.symmetry(a, b)?;
                    qp.element(m, c, b, a, y, x, cat.compose(s, h)).map(|k| k as u32)
                })
                .collect::<Option<Vec<u32>>>()
        })
        .collect::<Option<Vec<_>>>()?;
    Isomorphism::from_forward(NatTransformation { components }, &pq.presheaf, &qp.presheaf)
}

/// `(P ⊗̄ Q) ⊗̄ R ≅ P ⊗̄ (Q ⊗̄ R)`, sending `((a, b, x, y, h1), c, z, h)` to
/// `(a, b ⊗ c, x, (b, c, y, z, id), α ∘ (h1 ⊗ id) ∘ h)`.
pub fn associator_iso(
    pq: &DayTensor,
    pq_r: &DayTensor,
    qr: &DayTensor,
    p_qr: &DayTensor,
    m: &MonoidalFinCategory,
) -> Option<Isomorphism> {
    let cat = m.base();
    let components = cat
        .objects()
        .map(|c0| {
            (0..pq_r.presheaf.size(c0))
                .map(|e| {
                    let (d, c, w, z, h) = pq_r.representative(m, c0, e);
                    let (a, b, x, y, h1) = pq.representative(m, d, w);
                    let bc = m.tensor_ob(b, c)?;
                    let inner = qr.element(m, bc, b, c, y, z, cat.id(bc))?;
                    let h1c = m.tensor_arr(h1, cat.id(c))?;
                    let k = cat.compose(m.associator(a, b, c)?, cat.compose(h1c, h));
                    p_qr.element(m, c0, a, bc, x, inner, k).map(|k| k as u32)
                })
                .collect::<Option<Vec<u32>>>()
        })
        .collect::<Option<Vec<_>>>()?;
    Isomorphism::from_forward(NatTransformation { components }, &pq_r.presheaf, &p_qr.presheaf)
}
