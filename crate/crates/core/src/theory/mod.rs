//! Theories over a finite site: an identity-on-objects functor `τ: C → T`
//! sending covers to coproducts. A model is a presheaf on `T` whose
//! restriction along `τ` is a sheaf.
//!
//! Over the truncated site of finite sets an arrow `1 → n` of `T` acts as an
//! `n`-ary operation `M(n) → M(1)`, and a model is determined by the
//! operation tables on `M(1)` (see [`FiniteAlgebra`]).

mod algebra;
mod monad;
mod presented;

use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::error::{precondition, Error, Result};
use crate::fincat::{
    check_category, composition_generators, count_homs, for_each_hom, homs, lan, same_category, CategoryViolation,
    FinCategory, FinFunctor, FunctorViolation, NatTransformation, Ob, Presheaf, PresheafLike,
    Restriction,
};
use crate::site::{check_sheaf, finset_arrow, reflect, FiniteSite, SheafFailure, TruncatedFinSetSite};

pub use algebra::{EquationFailure, FiniteAlgebra, Quotient};
pub use monad::*;
pub use presented::{PresentedAlgebra, Relation};
pub(crate) use presented::solve;

pub(crate) use algebra::{coords, decode_into, encode};

/// A site, a category of operations with the same objects, and `τ`.
#[derive(Debug, Clone)]
pub struct TheoryPresentation {
    site: FiniteSite,
    theory: Arc<FinCategory>,
    tau: FinFunctor,
    monad: Option<Arc<dyn KleisliSpec>>,
    finset_bound: Option<usize>,
    generating: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TheoryViolation {
    Category(CategoryViolation),
    Functor(FunctorViolation),
    NotIdentityOnObjects,
    /// `T(c, t) → ∏ T(a_i, t)`, precomposition with the legs of the cover,
    /// is not a bijection.
    NotAdditive { cover: usize, target: Ob },
    /// The representable at `object`, restricted along `τ`, is not a sheaf.
    NotSubcanonical { object: Ob, failure: SheafFailure },
}

/// Largest theory category built from a monad.
const MAX_THEORY_ARROWS: usize = 1 << 13;

impl TheoryPresentation {
    /// Checks shapes only; the laws are reported by [`validate_theory`].
    pub fn new(site: FiniteSite, theory: Arc<FinCategory>, tau: FinFunctor) -> Result<Self> {
        if !same_category(tau.source(), site.cat()) || !same_category(tau.target(), &theory) {
            return Err(Error::CategoryMismatch);
        }
        let nob = site.cat().object_count();
        let finset_bound = (nob >= 1 && nob <= 10 && **site.cat() == FinCategory::finset(nob - 1))
            .then(|| nob - 1);
        let generating = composition_generators(&theory, None);
        Ok(TheoryPresentation {
            site,
            theory,
            tau,
            monad: None,
            finset_bound,
            generating,
        })
    }

    /// The truncated Kleisli category of `monad` on `0..=n`: arrows `m → n`
    /// are `m`-tuples in `T(n)`, coded with component `0` least significant.
    pub fn from_monad(monad: Arc<dyn KleisliSpec>, n: usize) -> Result<Self> {
        let site = TruncatedFinSetSite::new(n);
        let fin = site.cat().clone();
        let nob = n + 1;
        let mut free = Vec::with_capacity(nob);
        for k in 0..nob {
            free.push(monad.free_size(k).ok_or_else(|| precondition("free algebra too large"))?);
        }
        let mut base = alloc::vec![0usize; nob * nob];
        let mut arrows = Vec::new();
        for m in 0..nob {
            for k in 0..nob {
                base[m * nob + k] = arrows.len();
                let count = (free[k] as usize)
                    .checked_pow(m as u32)
                    .filter(|&c| arrows.len() + c <= MAX_THEORY_ARROWS)
                    .ok_or_else(|| precondition("theory has too many arrows"))?;
                for code in 0..count {
                    let comps = decode_u64(code as u64, free[k], m);
                    let mut name = format!("t{m}to{k}");
                    for c in comps {
                        name.push_str(&format!("_{c}"));
                    }
                    arrows.push((name, m, k));
                }
            }
        }
        let ends: Vec<(usize, usize)> = arrows.iter().map(|a| (a.1, a.2)).collect();
        let comps_of = |a: usize| {
            let (m, k) = ends[a];
            decode_u64((a - base[m * nob + k]) as u64, free[k], m)
        };
        let ident = (0..nob)
            .map(|m| {
                let units: Vec<u64> = (0..m).map(|i| monad.unit(m, i)).collect();
                base[m * nob + m] + encode_u64(&units, free[m]) as usize
            })
            .collect();
        let obs = (0..nob).map(|i| format!("{i}")).collect();
        let theory = Arc::new(FinCategory::from_fn(obs, arrows.clone(), ident, |g, f| {
            let (m, k) = ends[f];
            let p = ends[g].1;
            let gs = comps_of(g);
            let out: Vec<u64> = comps_of(f).into_iter().map(|t| monad.bind(t, k, p, &gs)).collect();
            base[m * nob + p] + encode_u64(&out, free[p]) as usize
        }));
        let tables = crate::site::finset_tables(&fin);
        let arr_map = fin
            .arrows()
            .map(|f| {
                let (m, k) = (fin.src(f), fin.dst(f));
                let units: Vec<u64> = tables[f].iter().map(|&j| monad.unit(k, j)).collect();
                base[m * nob + k] + encode_u64(&units, free[k]) as usize
            })
            .collect();
        let tau = FinFunctor::new(fin.clone(), theory.clone(), fin.objects().collect(), arr_map);
        let mut t = Self::new(site.site().clone(), theory, tau)?;
        t.monad = Some(monad);
        Ok(t)
    }

    /// Vector spaces over the prime field `F_q`.
    pub fn fq_modules(q: u64, n: usize) -> Result<Self> {
        if q > u32::MAX as u64 || crate::arith::PrimeField::new(q as u32).is_none() {
            return Err(precondition("q must be prime"));
        }
        Self::from_monad(Arc::new(FqModules { q }), n)
    }
    pub fn pointed_sets(n: usize) -> Result<Self> {
        Self::from_monad(Arc::new(PointedSets), n)
    }
    pub fn semilattices(n: usize) -> Result<Self> {
        Self::from_monad(Arc::new(Semilattices), n)
    }
    /// `τ` the identity: models are sheaves.
    pub fn degenerate(n: usize) -> Result<Self> {
        Self::from_monad(Arc::new(Degenerate), n)
    }
    pub fn monoid_actions(m: MonoidActions, n: usize) -> Result<Self> {
        Self::from_monad(Arc::new(m), n)
    }

    pub fn site(&self) -> &FiniteSite {
        &self.site
    }
    pub fn theory(&self) -> &Arc<FinCategory> {
        &self.theory
    }
    pub fn tau(&self) -> &FinFunctor {
        &self.tau
    }
    pub fn monad(&self) -> Option<&Arc<dyn KleisliSpec>> {
        self.monad.as_ref()
    }
    pub fn name(&self) -> String {
        match &self.monad {
            Some(m) => m.name(),
            None => String::from("custom"),
        }
    }
    /// `N` when the site is the truncated site of finite sets `0..=N`.
    pub fn finset_bound(&self) -> Option<usize> {
        self.finset_bound
    }
    /// Arrows of the theory generating all others under composition.
    pub fn generating_arrows(&self) -> impl Iterator<Item = usize> + '_ {
        self.generating.iter().map(|&a| a as usize)
    }

    /// `τ(ι_i)` for the inclusion `ι_i: 1 → n` of the point `i`.
    pub(crate) fn inclusion(&self, n: usize, i: usize) -> usize {
        self.tau.arr(finset_arrow(self.site.cat(), &[i], n))
    }

    pub(crate) fn require_finset(&self) -> Result<usize> {
        match self.finset_bound {
            Some(n) if n >= 1 => Ok(n),
            _ => Err(precondition("needs the truncated site of finite sets with N >= 1")),
        }
    }

    /// The laws of [`validate_theory`], as a report.
    pub fn certificate(&self) -> Vec<TheoryViolation> {
        validate_theory(self)
    }
}

pub(crate) fn decode_u64(mut x: u64, base: u64, len: usize) -> Vec<u64> {
    (0..len)
        .map(|_| {
            let d = x % base;
            x /= base;
            d
        })
        .collect()
}

pub(crate) fn encode_u64(d: &[u64], base: u64) -> u64 {
    d.iter().rev().fold(0, |acc, &x| acc * base + x)
}

/// Identity on objects, `τ` a functor, additivity on covers, and
/// subcanonicity. Empty iff all hold.
pub fn validate_theory(t: &TheoryPresentation) -> Vec<TheoryViolation> {
    let mut out: Vec<TheoryViolation> = check_category(&t.theory)
        .into_iter()
        .map(TheoryViolation::Category)
        .collect();
    if !out.is_empty() {
        return out;
    }
    out.extend(t.tau.check().into_iter().map(TheoryViolation::Functor));
    if !out.is_empty() {
        return out;
    }
    if !t.tau.is_identity_on_objects() {
        out.push(TheoryViolation::NotIdentityOnObjects);
        return out;
    }
    let cat = &*t.theory;
    for (k, cv) in t.site.covers().iter().enumerate() {
        let legs: Vec<usize> = cv.legs.iter().map(|&u| t.tau.arr(u)).collect();
        for target in cat.objects() {
            let radix: Vec<usize> = legs.iter().map(|&u| cat.hom(cat.src(u), target).len()).collect();
            let total = radix.iter().try_fold(1usize, |a, &r| a.checked_mul(r));
            let hom = cat.hom(cv.apex, target);
            let additive = total == Some(hom.len()) && {
                let mut seen = alloc::vec![false; hom.len()];
                hom.iter().all(|&h| {
                    let code = legs.iter().zip(&radix).rev().fold(0usize, |acc, (&u, &r)| {
                        acc * r + cat.hom_index(cat.compose(h as usize, u))
                    });
                    !core::mem::replace(&mut seen[code], true)
                })
            };
            if !additive {
                out.push(TheoryViolation::NotAdditive { cover: k, target });
            }
        }
    }
    for object in cat.objects() {
        let y = Presheaf::representable(t.theory.clone(), object);
        if let Err(failure) = check_sheaf(&Restriction { functor: &t.tau, presheaf: &y }, &t.site) {
            out.push(TheoryViolation::NotSubcanonical { object, failure });
        }
    }
    out
}

/// A presheaf on the theory whose restriction along `τ` is a sheaf.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Model {
    presheaf: Presheaf,
}

impl Model {
    pub fn new(p: Presheaf, t: &TheoryPresentation) -> Result<Self> {
        if !same_category(p.cat(), &t.theory) {
            return Err(Error::CategoryMismatch);
        }
        if !model_of(&p, t) {
            return Err(precondition("restriction along tau is not a sheaf"));
        }
        Ok(Model { presheaf: p })
    }
    pub fn presheaf(&self) -> &Presheaf {
        &self.presheaf
    }
    pub fn into_presheaf(self) -> Presheaf {
        self.presheaf
    }
    /// The pointwise product, again a model.
    pub fn product(&self, other: &Model) -> Result<Model> {
        Ok(Model {
            presheaf: self.presheaf.product(&other.presheaf)?,
        })
    }
}

impl PresheafLike for Model {
    fn category(&self) -> &FinCategory {
        self.presheaf.category()
    }
    fn size(&self, c: Ob) -> usize {
        self.presheaf.size(c)
    }
    fn act(&self, f: usize, x: usize) -> usize {
        self.presheaf.act(f, x)
    }
}

/// Whether `p` is a presheaf on the theory whose restriction is a sheaf.
pub fn model_of(p: &Presheaf, t: &TheoryPresentation) -> bool {
    same_category(p.cat(), &t.theory)
        && check_sheaf(&Restriction { functor: &t.tau, presheaf: p }, &t.site).is_ok()
}

/// The underlying sheaf `m ∘ τ`.
pub fn forget(m: &Model, t: &TheoryPresentation) -> Result<Presheaf> {
    Presheaf::restrict(&t.tau, &m.presheaf)
}

/// A model with the unit of the reflection or free construction.
#[derive(Debug, Clone)]
pub struct Modelified {
    pub model: Model,
    /// From the input to the model (for [`free_model`], to its underlying
    /// sheaf).
    pub unit: NatTransformation,
    pub rounds: usize,
}

/// Reflects a presheaf on the theory into models.
///
/// Theories from a monad truncated at or above its equational arity go
/// through [`modelify_by_presentation`]; all others through
/// [`modelify_by_gluing`]. Both compute the same reflection.
pub fn modelify(p: &Presheaf, t: &TheoryPresentation, bound: usize) -> Result<Modelified> {
    if presented::presentable(t) {
        modelify_by_presentation(p, t, bound)
    } else {
        modelify_by_gluing(p, t, bound)
    }
}

/// The reflection by repeatedly gluing matching families of the restriction
/// along `τ` and closing under the equations of a presheaf on the theory,
/// for at most `bound` gluing rounds.
pub fn modelify_by_gluing(p: &Presheaf, t: &TheoryPresentation, bound: usize) -> Result<Modelified> {
    if !same_category(p.cat(), &t.theory) {
        return Err(Error::CategoryMismatch);
    }
    let shape = t.site.transported_shape(&t.tau);
    let r = reflect(p, &shape, bound)?;
    Ok(Modelified {
        model: Model { presheaf: r.presheaf },
        unit: r.unit,
        rounds: r.rounds,
    })
}

/// The reflection as the algebra generated by `p(1)` subject to
/// `p(f)(z) = op_f(p(τι_0)z, …, p(τι_{n-1})z)` for every `z ∈ p(n)` and
/// operation `f: 1 → n`.
pub fn modelify_by_presentation(
    p: &Presheaf,
    t: &TheoryPresentation,
    bound: usize,
) -> Result<Modelified> {
    if !same_category(p.cat(), &t.theory) {
        return Err(Error::CategoryMismatch);
    }
    let nmax = t.require_finset()?;
    let incl: Vec<Vec<usize>> = (0..=nmax).map(|n| (0..n).map(|i| t.inclusion(n, i)).collect()).collect();
    let relations = presentation_of(p, t)?;
    let pa = PresentedAlgebra::new(t, p.size(1), &relations, bound)?;
    let size = pa.algebra.size();
    let unit = NatTransformation {
        components: (0..=nmax)
            .map(|n| {
                (0..p.size(n))
                    .map(|z| {
                        incl[n]
                            .iter()
                            .rev()
                            .fold(0, |acc, &u| acc * size + pa.generators[p.act(u, z)] as usize)
                            as u32
                    })
                    .collect()
            })
            .collect(),
    };
    Ok(Modelified {
        model: Model {
            presheaf: pa.algebra.to_presheaf(t),
        },
        unit,
        rounds: pa.rounds,
    })
}

/// The relations `p(f)(z) = op_f(p(τι_0)z, …, p(τι_{n-1})z)` on the
/// generators `p(1)`, one per element `z ∈ p(n)` and operation `f: 1 → n`.
pub(crate) fn presentation_of<P: PresheafLike + ?Sized>(p: &P, t: &TheoryPresentation) -> Result<Vec<Relation>> {
    let nmax = t.require_finset()?;
    let cat = &*t.theory;
    let mut seen = hashbrown::HashSet::new();
    let mut relations = Vec::new();
    for n in 0..=nmax {
        let incl: Vec<usize> = (0..n).map(|i| t.inclusion(n, i)).collect();
        for z in 0..p.size(n) {
            let args: Vec<usize> = incl.iter().map(|&u| p.act(u, z)).collect();
            for &f in cat.hom(1, n) {
                let f = f as usize;
                let r = Relation {
                    lhs: p.act(f, z),
                    op: f,
                    args: args.clone(),
                };
                if !(n == 1 && r.args[0] == r.lhs) && seen.insert(r.clone()) {
                    relations.push(r);
                }
            }
        }
    }
    Ok(relations)
}

/// The free model on a sheaf: left Kan extension along `τ`, then
/// [`modelify`].
pub fn free_model(x: &Presheaf, t: &TheoryPresentation, bound: usize) -> Result<Modelified> {
    if !same_category(x.cat(), t.site.cat()) {
        return Err(Error::CategoryMismatch);
    }
    if check_sheaf(x, &t.site).is_err() {
        return Err(precondition("free_model expects a sheaf"));
    }
    let l = lan(&t.tau, x)?;
    let m = modelify(&l.presheaf, t, bound)?;
    Ok(Modelified {
        unit: l.unit.then(&m.unit),
        model: m.model,
        rounds: m.rounds,
    })
}

/// Model maps, through operation tables when the site is finite sets.
pub fn model_homs(a: &Model, b: &Model, t: &TheoryPresentation) -> Result<Vec<NatTransformation>> {
    if t.require_finset().is_err() {
        return Ok(homs(&a.presheaf, &b.presheaf));
    }
    let fa = FiniteAlgebra::from_model(a, t)?;
    let fb = FiniteAlgebra::from_model(b, t)?;
    Ok(fa
        .homs(&fb)
        .into_iter()
        .map(|h| algebra::lift_hom(&h, a, b, t))
        .collect())
}

/// Both sides of `hom(F x, m) ≅ hom(x, U m)` and whether `φ ↦ Uφ ∘ η` is a
/// bijection between them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdjunctionCheck {
    pub model_homs: usize,
    pub sheaf_homs: usize,
    pub bijective: bool,
}

/// Enumerates both hom-sets and tests the transpose map.
pub fn adjunction_check(
    x: &Presheaf,
    m: &Model,
    t: &TheoryPresentation,
    bound: usize,
) -> Result<AdjunctionCheck> {
    let free = free_model(x, t, bound)?;
    let um = forget(m, t)?;
    let left = model_homs(&free.model, m, t)?;
    let mut right = hashbrown::HashSet::new();
    for_each_hom(x, &um, |h| {
        right.insert(h);
        core::ops::ControlFlow::Continue(())
    });
    let mut image = hashbrown::HashSet::new();
    let mut bijective = true;
    for phi in &left {
        let tr = free.unit.then(phi);
        bijective &= right.contains(&tr) && image.insert(tr);
    }
    bijective &= image.len() == right.len();
    debug_assert!(right.len() as u64 == count_homs(x, &um));
    Ok(AdjunctionCheck {
        model_homs: left.len(),
        sheaf_homs: right.len(),
        bijective,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::Isomorphism;

    #[test]
    fn kleisli_sizes() {
        let f2 = TheoryPresentation::fq_modules(2, 3).unwrap();
        assert_eq!(f2.theory().arrow_count(), 689);
        assert_eq!(TheoryPresentation::pointed_sets(3).unwrap().theory().arrow_count(), 144);
        let m = TheoryPresentation::monoid_actions(MonoidActions::left_zero(), 2).unwrap();
        assert_eq!(m.theory().arrow_count(), 57);
    }

    #[test]
    fn built_in_theories_validate() {
        for t in [
            TheoryPresentation::degenerate(2).unwrap(),
            TheoryPresentation::fq_modules(2, 3).unwrap(),
            TheoryPresentation::fq_modules(3, 2).unwrap(),
            TheoryPresentation::pointed_sets(3).unwrap(),
            TheoryPresentation::semilattices(3).unwrap(),
            TheoryPresentation::monoid_actions(MonoidActions::left_zero(), 2).unwrap(),
        ] {
            assert!(t.certificate().is_empty(), "{}", t.name());
            assert!(!t.generating.is_empty());
        }
    }

    #[test]
    fn generating_set_generates() {
        let t = TheoryPresentation::fq_modules(2, 2).unwrap();
        let cat = t.theory();
        let mut reached: Vec<bool> = cat.arrows().map(|f| cat.is_identity(f)).collect();
        loop {
            let mut grew = false;
            for h in cat.arrows() {
                for g in t.generating_arrows() {
                    if reached[h] {
                        if let Some(gh) = cat.try_compose(g, h) {
                            grew |= !core::mem::replace(&mut reached[gh], true);
                        }
                    }
                }
            }
            if !grew {
                break;
            }
        }
        assert!(reached.iter().all(|&r| r));
    }

    #[test]
    fn free_models_on_representables() {
        let t = TheoryPresentation::fq_modules(2, 3).unwrap();
        let site_cat = t.site().cat().clone();
        for n in 0..=3 {
            let y = Presheaf::representable(site_cat.clone(), n);
            let f = free_model(&y, &t, 8).unwrap();
            assert_eq!(f.model.size(1), 1 << n);
            let ty = Presheaf::representable(t.theory().clone(), n);
            let e = f.unit.apply(n, site_cat.hom_index(site_cat.id(n)));
            let fwd = NatTransformation::yoneda(&f.model, n, e);
            assert!(Isomorphism::from_forward(fwd, &ty, &f.model).is_some());
        }
    }

    #[test]
    fn models_and_non_models() {
        let t = TheoryPresentation::fq_modules(2, 2).unwrap();
        let y1 = Presheaf::representable(t.theory().clone(), 1);
        assert!(model_of(&y1, &t));
        assert!(!model_of(&Presheaf::constant(t.theory().clone(), 2), &t));
        let m = Model::new(y1.clone(), &t).unwrap();
        let u = forget(&m, &t).unwrap();
        assert_eq!(u.sizes().collect::<Vec<_>>(), alloc::vec![1, 2, 4]);
        let r = modelify(&y1, &t, 4).unwrap();
        assert!(r.unit.is_identity());
        assert_eq!(r.rounds, 1);
    }

    #[test]
    fn modelify_coproduct_of_lines() {
        let t = TheoryPresentation::fq_modules(2, 2).unwrap();
        let y1 = Presheaf::representable(t.theory().clone(), 1);
        let sum = y1.coproduct(&y1).unwrap();
        let r = modelify(&sum, &t, 8).unwrap();
        assert_eq!(r.model.size(1), 4);
        assert!(model_of(r.model.presheaf(), &t));
    }

    #[test]
    fn gluing_and_presentation_agree() {
        use crate::fincat::find_iso;
        for t in [
            TheoryPresentation::pointed_sets(2).unwrap(),
            TheoryPresentation::degenerate(2).unwrap(),
            TheoryPresentation::monoid_actions(MonoidActions::left_zero(), 2).unwrap(),
        ] {
            let y1 = Presheaf::representable(t.theory().clone(), 1);
            let y2 = Presheaf::representable(t.theory().clone(), 2);
            for p in [y1.coproduct(&y2).unwrap(), Presheaf::constant(t.theory().clone(), 2)] {
                let a = modelify_by_gluing(&p, &t, 16).unwrap();
                let b = modelify_by_presentation(&p, &t, 64).unwrap();
                assert!(model_of(a.model.presheaf(), &t) && model_of(b.model.presheaf(), &t));
                assert!(a.unit.is_natural(&p, &a.model) && b.unit.is_natural(&p, &b.model));
                let iso = find_iso(&a.model, &b.model).expect(&t.name());
                // The isomorphism is the one induced by the units.
                assert_eq!(a.unit.then(&iso.forward), b.unit, "{}", t.name());
            }
        }
    }

    #[test]
    fn adjunction_on_small_sheaves() {
        let t = TheoryPresentation::fq_modules(2, 3).unwrap();
        let site = TruncatedFinSetSite::new(3);
        for k in 0..=2 {
            let x = site.power_sheaf(k);
            for j in 0..=2 {
                let m = Model::new(FiniteAlgebra::free(j, &t, 64).unwrap().to_presheaf(&t), &t).unwrap();
                let r = adjunction_check(&x, &m, &t, 64).unwrap();
                assert!(r.bijective);
                assert_eq!(r.model_homs, 1 << (j * k));
            }
        }
    }

    #[test]
    fn additivity_failure_names_a_cover() {
        // Finite sets with an absorbing extra arrow in every hom-set.
        let n = 2;
        let fin = Arc::new(FinCategory::finset(n));
        let nob = n + 1;
        let mut arrows: Vec<(String, usize, usize)> =
            fin.arrows().map(|f| (fin.arrow_name(f).into(), fin.src(f), fin.dst(f))).collect();
        let na = arrows.len();
        for m in 0..nob {
            for k in 0..nob {
                arrows.push((format!("z{m}to{k}"), m, k));
            }
        }
        let zero = |m: usize, k: usize| na + m * nob + k;
        let ends: Vec<(usize, usize)> = arrows.iter().map(|a| (a.1, a.2)).collect();
        let ident = fin.objects().map(|c| fin.id(c)).collect();
        let cat = Arc::new(FinCategory::from_fn(
            (0..nob).map(|i| format!("{i}")).collect(),
            arrows,
            ident,
            |g, f| {
                if g < na && f < na {
                    fin.compose(g, f)
                } else {
                    zero(ends[f].0, ends[g].1)
                }
            },
        ));
        assert!(check_category(&cat).is_empty());
        let tau = FinFunctor::new(fin.clone(), cat.clone(), fin.objects().collect(), fin.arrows().collect());
        let site = TruncatedFinSetSite::new(n);
        let t = TheoryPresentation::new(site.site().clone(), cat, tau).unwrap();
        let report = validate_theory(&t);
        assert!(report.contains(&TheoryViolation::NotAdditive { cover: 0, target: 0 }));
        assert!(report
            .iter()
            .any(|v| matches!(v, TheoryViolation::NotSubcanonical { .. })));
    }
}
