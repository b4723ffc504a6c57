use alloc::sync::Arc;
use alloc::vec::Vec;

use super::category::{Arr, FinCategory, Ob};
use super::limits::Colimit;
use crate::dsu::UnionFind;

/// A functor `C^op × C → Set` given by explicit tables.
///
/// `left(f, b)` is `H(f, b): H(dst f, b) → H(src f, b)` and `right(g, a)` is
/// `H(a, g): H(a, src g) → H(a, dst g)`.
#[derive(Debug, Clone)]
pub struct Bifunctor {
    cat: Arc<FinCategory>,
    sizes: Vec<usize>,
    left: Vec<Vec<Vec<u32>>>,
    right: Vec<Vec<Vec<u32>>>,
}

impl Bifunctor {
    pub fn from_fn(
        cat: Arc<FinCategory>,
        size: impl Fn(Ob, Ob) -> usize,
        left: impl Fn(Arr, Ob, usize) -> usize,
        right: impl Fn(Arr, Ob, usize) -> usize,
    ) -> Self {
        let n = cat.object_count();
        let mut sizes = Vec::with_capacity(n * n);
        for a in 0..n {
            for b in 0..n {
                sizes.push(size(a, b));
            }
        }
        let left = cat
            .arrows()
            .map(|f| {
                (0..n)
                    .map(|b| (0..sizes[cat.dst(f) * n + b]).map(|x| left(f, b, x) as u32).collect())
                    .collect()
            })
            .collect();
        let right = cat
            .arrows()
            .map(|g| {
                (0..n)
                    .map(|a| (0..sizes[a * n + cat.src(g)]).map(|x| right(g, a, x) as u32).collect())
                    .collect()
            })
            .collect();
        Bifunctor {
            cat,
            sizes,
            left,
            right,
        }
    }

    /// The hom bifunctor `C(-, -)`.
    pub fn hom(cat: Arc<FinCategory>) -> Self {
        let c = cat.clone();
        let c2 = cat.clone();
        let c3 = cat.clone();
        Self::from_fn(
            cat,
            move |a, b| c.hom(a, b).len(),
            move |f, b, i| {
                let u = c2.hom(c2.dst(f), b)[i] as usize;
                c2.hom_index(c2.compose(u, f))
            },
            move |g, a, i| {
                let u = c3.hom(a, c3.src(g))[i] as usize;
                c3.hom_index(c3.compose(g, u))
            },
        )
    }

    pub fn cat(&self) -> &Arc<FinCategory> {
        &self.cat
    }
    pub fn size(&self, a: Ob, b: Ob) -> usize {
        self.sizes[a * self.cat.object_count() + b]
    }
    pub fn left(&self, f: Arr, b: Ob, x: usize) -> usize {
        self.left[f][b][x] as usize
    }
    pub fn right(&self, g: Arr, a: Ob, x: usize) -> usize {
        self.right[g][a][x] as usize
    }

    /// Functoriality in each variable and the interchange law.
    pub fn is_functorial(&self) -> bool {
        let c = &*self.cat;
        for a in c.objects() {
            for b in c.objects() {
                for x in 0..self.size(a, b) {
                    if self.left(c.id(a), b, x) != x || self.right(c.id(b), a, x) != x {
                        return false;
                    }
                }
            }
        }
        for f in c.arrows() {
            for g in c.arrows() {
                if c.dst(f) == c.src(g) {
                    let gf = c.compose(g, f);
                    for b in c.objects() {
                        for x in 0..self.size(c.dst(g), b) {
                            if self.left(gf, b, x) != self.left(f, b, self.left(g, b, x)) {
                                return false;
                            }
                        }
                    }
                    for a in c.objects() {
                        for x in 0..self.size(a, c.src(f)) {
                            if self.right(gf, a, x) != self.right(g, a, self.right(f, a, x)) {
                                return false;
                            }
                        }
                    }
                }
                // H(f, dst g) ∘ H(dst f, g) = H(src f, g) ∘ H(f, src g).
                let (a1, a) = (c.src(f), c.dst(f));
                let (b, b1) = (c.src(g), c.dst(g));
                for x in 0..self.size(a, b) {
                    let p = self.left(f, b1, self.right(g, a, x));
                    let q = self.right(g, a1, self.left(f, b, x));
                    if p != q {
                        return false;
                    }
                }
            }
        }
        true
    }
}

/// Elements of `∫_c H(c, c)`: families `e_c ∈ H(c, c)` with
/// `H(x, f)(e_x) = H(f, y)(e_y)` for every `f: x → y`.
pub fn end_of(h: &Bifunctor) -> Vec<Vec<u32>> {
    let c = &*h.cat;
    let n = c.object_count();
    let mut out = Vec::new();
    let mut fam = alloc::vec![0u32; n];
    // Arrows checked once both endpoints are assigned, i.e. at the later one.
    let mut due: Vec<Vec<Arr>> = alloc::vec![Vec::new(); n];
    for f in c.arrows() {
        if !c.is_identity(f) {
            due[c.src(f).max(c.dst(f))].push(f);
        }
    }
    fn go(h: &Bifunctor, due: &[Vec<Arr>], k: usize, fam: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        let c = &*h.cat;
        if k == fam.len() {
            out.push(fam.clone());
            return;
        }
        for v in 0..h.size(k, k) {
            fam[k] = v as u32;
            let ok = due[k].iter().all(|&f| {
                let (x, y) = (c.src(f), c.dst(f));
                h.right(f, x, fam[x] as usize) == h.left(f, y, fam[y] as usize)
            });
            if ok {
                go(h, due, k + 1, fam, out);
            }
        }
    }
    go(h, &due, 0, &mut fam, &mut out);
    out
}

/// `∫^c H(c, c)`: the disjoint union of the diagonal modulo
/// `H(f, x)(z) ~ H(y, f)(z)` for `f: x → y` and `z ∈ H(y, x)`.
pub fn coend_of(h: &Bifunctor) -> Colimit {
    let c = &*h.cat;
    let mut base = Vec::with_capacity(c.object_count());
    let mut total = 0;
    for x in c.objects() {
        base.push(total);
        total += h.size(x, x);
    }
    let mut uf = UnionFind::new(total);
    for f in c.arrows() {
        let (x, y) = (c.src(f), c.dst(f));
        for z in 0..h.size(y, x) {
            uf.union(base[x] + h.left(f, x, z), base[y] + h.right(f, y, z));
        }
    }
    let (cls, size) = uf.classes();
    let injections = c
        .objects()
        .map(|x| cls[base[x]..base[x] + h.size(x, x)].to_vec())
        .collect();
    Colimit { size, injections }
}
