//! Finite sites, the sheaf condition, and sheafification.
//!
//! A cover is a finite family of arrows into a common apex. The sheaf
//! condition is checked against matching families over all spans
//! `a_i ← b → a_j` that the legs equalize, so it does not depend on the
//! existence of pullbacks in the underlying category.

mod reflect;

use alloc::sync::Arc;
use alloc::vec::Vec;
use core::ops::ControlFlow;

use hashbrown::HashMap;

use crate::error::{malformed, Error, Result};
use crate::fincat::{FinCategory, NatTransformation, Ob, Presheaf, PresheafLike};

pub(crate) use reflect::{reflect, ReflectionShape};

/// A family of arrows with a common codomain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cover {
    pub apex: Ob,
    pub legs: Vec<usize>,
}

/// A pair of arrows `v: b → a_i`, `w: b → a_j` with `u_i ∘ v = u_j ∘ w`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Span {
    pub i: u32,
    pub j: u32,
    pub v: u32,
    pub w: u32,
}

/// A finite category with a finite list of covers.
#[derive(Debug, Clone)]
pub struct FiniteSite {
    cat: Arc<FinCategory>,
    covers: Vec<Cover>,
    spans: Vec<Vec<Span>>,
    dec: Vec<Option<u32>>,
}

impl FiniteSite {
    pub fn new(cat: Arc<FinCategory>, covers: Vec<Cover>) -> Result<Self> {
        for cv in &covers {
            if cv.apex >= cat.object_count() {
                return Err(malformed("cover apex out of range"));
            }
            for &u in &cv.legs {
                if u >= cat.arrow_count() || cat.dst(u) != cv.apex {
                    return Err(malformed("cover legs must share the apex as codomain"));
                }
            }
        }
        let spans = covers.iter().map(|cv| spans_of(&cat, &cv.legs)).collect();
        let dec = alloc::vec![None; cat.object_count()];
        Ok(FiniteSite {
            cat,
            covers,
            spans,
            dec,
        })
    }

    pub fn cat(&self) -> &Arc<FinCategory> {
        &self.cat
    }
    pub fn covers(&self) -> &[Cover] {
        &self.covers
    }
    pub fn spans(&self, cover: usize) -> &[Span] {
        &self.spans[cover]
    }
    /// The cover used to split elements at `c` into smaller pieces during
    /// reflection, if one is designated.
    pub fn decomposition(&self, c: Ob) -> Option<usize> {
        self.dec[c].map(|k| k as usize)
    }

    pub(crate) fn shape(&self) -> ReflectionShape {
        ReflectionShape::new(
            self.cat.clone(),
            self.covers.iter().map(|c| (c.apex, c.legs.clone())).collect(),
            self.spans.clone(),
            self.dec.clone(),
        )
    }
}

impl FiniteSite {
    /// The covers pushed forward along an identity-on-objects functor, with
    /// matching still tested on spans of this site.
    pub(crate) fn transported_shape(&self, tau: &crate::fincat::FinFunctor) -> ReflectionShape {
        let covers = self
            .covers
            .iter()
            .map(|c| (c.apex, c.legs.iter().map(|&u| tau.arr(u)).collect()))
            .collect();
        let spans = self
            .spans
            .iter()
            .map(|ss| {
                ss.iter()
                    .map(|s| Span {
                        i: s.i,
                        j: s.j,
                        v: tau.arr(s.v as usize) as u32,
                        w: tau.arr(s.w as usize) as u32,
                    })
                    .collect()
            })
            .collect();
        ReflectionShape::new(tau.target().clone(), covers, spans, self.dec.clone())
    }
}

/// Every span equalized by a pair of legs, excluding the diagonal `v = w`
/// on a single leg.
pub(crate) fn spans_of(cat: &FinCategory, legs: &[usize]) -> Vec<Span> {
    let mut out = Vec::new();
    for (i, &ui) in legs.iter().enumerate() {
        for (j, &uj) in legs.iter().enumerate().skip(i) {
            for b in cat.objects() {
                for &v in cat.hom(b, cat.src(ui)) {
                    let uv = cat.compose(ui, v as usize);
                    for &w in cat.hom(b, cat.src(uj)) {
                        if i == j && v >= w {
                            continue;
                        }
                        if cat.compose(uj, w as usize) == uv {
                            out.push(Span {
                                i: i as u32,
                                j: j as u32,
                                v,
                                w,
                            });
                        }
                    }
                }
            }
        }
    }
    out
}

/// Why a presheaf fails the sheaf condition on some cover.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SheafFailure {
    /// Two elements of the apex with the same restrictions to every leg.
    NotInjective { cover: usize, a: usize, b: usize },
    /// A matching family that no element of the apex restricts to.
    NotSurjective { cover: usize, family: Vec<u32> },
}

/// Visits every matching family for a cover, as one element per leg.
pub(crate) fn for_each_matching_family<P: PresheafLike + ?Sized>(
    p: &P,
    legs: &[usize],
    spans: &[Span],
    mut visit: impl FnMut(&[u32]) -> ControlFlow<()>,
) -> ControlFlow<()> {
    let cat = p.category();
    let k = legs.len();
    let mut due: Vec<Vec<Span>> = alloc::vec![Vec::new(); k];
    for s in spans {
        due[s.j.max(s.i) as usize].push(*s);
    }
    let sizes: Vec<usize> = legs.iter().map(|&u| p.size(cat.src(u))).collect();
    let mut fam = alloc::vec![0u32; k];
    fn go<P: PresheafLike + ?Sized>(
        p: &P,
        sizes: &[usize],
        due: &[Vec<Span>],
        t: usize,
        fam: &mut Vec<u32>,
        visit: &mut impl FnMut(&[u32]) -> ControlFlow<()>,
    ) -> ControlFlow<()> {
        if t == fam.len() {
            return visit(fam);
        }
        for x in 0..sizes[t] {
            fam[t] = x as u32;
            let ok = due[t].iter().all(|s| {
                p.act(s.v as usize, fam[s.i as usize] as usize)
                    == p.act(s.w as usize, fam[s.j as usize] as usize)
            });
            if ok {
                go(p, sizes, due, t + 1, fam, visit)?;
            }
        }
        ControlFlow::Continue(())
    }
    go(p, &sizes, &due, 0, &mut fam, &mut visit)
}

/// Checks the sheaf condition for `p` on one cover.
pub(crate) fn check_cover<P: PresheafLike + ?Sized>(
    p: &P,
    index: usize,
    legs: &[usize],
    apex: Ob,
    spans: &[Span],
) -> Result<(), SheafFailure> {
    let mut seen: HashMap<Vec<u32>, u32> = HashMap::new();
    for x in 0..p.size(apex) {
        let fam: Vec<u32> = legs.iter().map(|&u| p.act(u, x) as u32).collect();
        if let Some(&y) = seen.get(&fam) {
            return Err(SheafFailure::NotInjective {
                cover: index,
                a: y as usize,
                b: x,
            });
        }
        seen.insert(fam, x as u32);
    }
    let mut missing = None;
    let _ = for_each_matching_family(p, legs, spans, |fam| {
        if seen.contains_key(fam) {
            ControlFlow::Continue(())
        } else {
            missing = Some(fam.to_vec());
            ControlFlow::Break(())
        }
    });
    match missing {
        Some(family) => Err(SheafFailure::NotSurjective {
            cover: index,
            family,
        }),
        None => Ok(()),
    }
}

/// The sheaf condition on every cover, reporting the first failure.
pub fn check_sheaf<P: PresheafLike + ?Sized>(p: &P, s: &FiniteSite) -> Result<(), SheafFailure> {
    for (k, cv) in s.covers.iter().enumerate() {
        check_cover(p, k, &cv.legs, cv.apex, &s.spans[k])?;
    }
    Ok(())
}

pub fn is_sheaf<P: PresheafLike + ?Sized>(p: &P, s: &FiniteSite) -> bool {
    check_sheaf(p, s).is_ok()
}

/// The associated sheaf with its unit `p → a(p)`.
#[derive(Debug, Clone)]
pub struct Sheafified {
    pub sheaf: Presheaf,
    pub unit: NatTransformation,
    pub rounds: usize,
}

/// Reflects `p` into sheaves by alternately separating and gluing matching
/// families, for at most `bound` rounds.
pub fn sheafify(p: &Presheaf, s: &FiniteSite, bound: usize) -> Result<Sheafified> {
    if !crate::fincat::same_category(p.cat(), &s.cat) {
        return Err(Error::CategoryMismatch);
    }
    let r = reflect(p, &s.shape(), bound)?;
    Ok(Sheafified {
        sheaf: r.presheaf,
        unit: r.unit,
        rounds: r.rounds,
    })
}

/// The truncated extensive site: finite sets `0..=N` and all functions,
/// covered by binary coproduct decompositions and the empty cover of `0`.
///
/// For every apex `m` and every subset `S ⊆ m` there is a cover by the
/// monotone injections of `S` and of its complement. The family is closed
/// under pullback, and it generates the same sheaves as all finite
/// coproduct decompositions (see [`TruncatedFinSetSite::full_closure`]).
#[derive(Debug, Clone)]
pub struct TruncatedFinSetSite {
    bound: usize,
    site: FiniteSite,
}

/// The arrow `m → n` of [`FinCategory::finset`] with the given table.
pub fn finset_arrow(cat: &FinCategory, table: &[usize], n: usize) -> usize {
    let m = table.len();
    let code = table.iter().rev().fold(0usize, |acc, &d| acc * n + d);
    cat.hom(m, n)[code] as usize
}

fn monotone_injection(cat: &FinCategory, m: usize, subset: &[usize]) -> usize {
    finset_arrow(cat, subset, m)
}

impl TruncatedFinSetSite {
    pub fn new(n: usize) -> Self {
        let cat = Arc::new(FinCategory::finset(n));
        let mut covers = Vec::new();
        let mut dec = alloc::vec![None; n + 1];
        dec[0] = Some(0u32);
        covers.push(Cover {
            apex: 0,
            legs: Vec::new(),
        });
        for m in 1..=n {
            for mask in 0..(1usize << m) {
                let s: Vec<usize> = (0..m).filter(|i| mask >> i & 1 == 1).collect();
                let t: Vec<usize> = (0..m).filter(|i| mask >> i & 1 == 0).collect();
                if m >= 2 && mask == 1 {
                    dec[m] = Some(covers.len() as u32);
                }
                covers.push(Cover {
                    apex: m,
                    legs: alloc::vec![
                        monotone_injection(&cat, m, &s),
                        monotone_injection(&cat, m, &t)
                    ],
                });
            }
        }
        let mut site = FiniteSite::new(cat, covers).expect("covers are well formed");
        site.dec = dec;
        TruncatedFinSetSite { bound: n, site }
    }

    pub fn bound(&self) -> usize {
        self.bound
    }
    pub fn site(&self) -> &FiniteSite {
        &self.site
    }
    pub fn cat(&self) -> &Arc<FinCategory> {
        &self.site.cat
    }

    /// The same category covered by every ordered partition of each `m`
    /// into nonempty blocks, plus the empty cover of `0`.
    pub fn full_closure(&self) -> FiniteSite {
        let cat = self.site.cat.clone();
        let mut covers = alloc::vec![Cover {
            apex: 0,
            legs: Vec::new()
        }];
        for m in 1..=self.bound {
            // Assign each point a block label; keep labelings whose labels are
            // exactly 0..k in order of first use, then permute blocks.
            let mut labels = alloc::vec![0usize; m];
            loop {
                let k = labels.iter().max().map_or(0, |x| x + 1);
                let canonical = (0..m).all(|i| labels[i] <= labels[..i].iter().max().map_or(0, |x| x + 1));
                if canonical {
                    for perm in permutations(k) {
                        let legs = perm
                            .iter()
                            .map(|&b| {
                                let block: Vec<usize> = (0..m).filter(|&i| labels[i] == b).collect();
                                monotone_injection(&cat, m, &block)
                            })
                            .collect();
                        covers.push(Cover { apex: m, legs });
                    }
                }
                let mut i = m;
                loop {
                    if i == 0 {
                        break;
                    }
                    i -= 1;
                    if labels[i] + 1 < m {
                        labels[i] += 1;
                        for l in labels.iter_mut().skip(i + 1) {
                            *l = 0;
                        }
                        break;
                    }
                    labels[i] = 0;
                    if i == 0 {
                        i = usize::MAX;
                        break;
                    }
                }
                if i == usize::MAX {
                    break;
                }
            }
        }
        FiniteSite::new(cat, covers).expect("covers are well formed")
    }

    /// The sheaf `m ↦ k^m` with projection actions.
    pub fn power_sheaf(&self, k: usize) -> Presheaf {
        let cat = self.site.cat.clone();
        power_presheaf(&cat, k)
    }
}

/// `m ↦ k^m` on [`FinCategory::finset`]; tuples are base-`k` digit strings,
/// least significant first, and a function `f: m → n` acts by
/// `(x_0, …, x_{n-1}) ↦ (x_{f 0}, …, x_{f(m-1)})`.
pub fn power_presheaf(cat: &Arc<FinCategory>, k: usize) -> Presheaf {
    let tables = finset_tables(cat);
    let sizes = cat.objects().map(|m| k.pow(m as u32)).collect();
    let c = cat.clone();
    Presheaf::from_fn(cat.clone(), sizes, |f, x| {
        let n = c.dst(f);
        let digits: Vec<usize> = (0..n).map(|i| x / k.pow(i as u32) % k).collect();
        tables[f].iter().rev().fold(0, |acc, &j| acc * k + digits[j])
    })
}

/// The function table of every arrow of [`FinCategory::finset`].
pub fn finset_tables(cat: &FinCategory) -> Vec<Vec<usize>> {
    cat.arrows()
        .map(|f| {
            let (m, n) = (cat.src(f), cat.dst(f));
            let mut code = cat.hom_index(f);
            (0..m)
                .map(|_| {
                    let d = code % n;
                    code /= n;
                    d
                })
                .collect()
        })
        .collect()
}

fn permutations(k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return alloc::vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(k - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, k - 1);
            out.push(q);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn representables_are_sheaves() {
        for n in 1..=3 {
            let s = TruncatedFinSetSite::new(n);
            for m in 0..=n {
                let y = Presheaf::representable(s.cat().clone(), m);
                assert_eq!(check_sheaf(&y, s.site()), Ok(()), "y({m}) at N={n}");
            }
        }
    }

    #[test]
    fn constant_presheaf_fails_at_zero() {
        let s = TruncatedFinSetSite::new(3);
        let k = Presheaf::constant(s.cat().clone(), 2);
        assert!(matches!(
            check_sheaf(&k, s.site()),
            Err(SheafFailure::NotInjective { cover: 0, .. })
        ));
        assert!(is_sheaf(&s.power_sheaf(2), s.site()));
    }

    #[test]
    fn closure_agrees_with_generators() {
        let s = TruncatedFinSetSite::new(3);
        let full = s.full_closure();
        // Ordered partitions of 3 into nonempty blocks: 13.
        assert_eq!(full.covers().iter().filter(|c| c.apex == 3).count(), 13);
        let k = Presheaf::constant(s.cat().clone(), 1);
        assert!(is_sheaf(&k, &full));
        assert!(is_sheaf(&s.power_sheaf(3), &full));
    }

    #[test]
    fn sheafify_examples() {
        let s = TruncatedFinSetSite::new(2);
        let k = Presheaf::constant(s.cat().clone(), 2);
        let r = sheafify(&k, s.site(), 8).unwrap();
        assert_eq!(r.sheaf.sizes().collect::<Vec<_>>(), alloc::vec![1, 2, 4]);
        assert!(is_sheaf(&r.sheaf, s.site()));
        assert!(r.unit.is_natural(&k, &r.sheaf));

        let e = Presheaf::empty(s.cat().clone());
        let r = sheafify(&e, s.site(), 8).unwrap();
        assert_eq!(r.sheaf.sizes().collect::<Vec<_>>(), alloc::vec![1, 0, 0]);

        let p = s.power_sheaf(3);
        let r = sheafify(&p, s.site(), 8).unwrap();
        assert_eq!(r.rounds, 1);
        assert!(r.unit.is_identity());
        assert_eq!(r.sheaf, p);
    }
}
