use alloc::collections::BTreeMap;
use alloc::format;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{precondition, Error, Result};
use crate::fincat::{power, Arr, FinCategory, FinFunctor, FunctorViolation, Isomorphism, NatTransformation, Ob, Presheaf, PresheafLike};
use crate::site::{finset_arrow, finset_tables};
use crate::theory::TheoryPresentation;

/// A functor `p: total → base` with chosen cartesian lifts (one per base
/// arrow `φ` and object over `dst φ`) and chosen opcartesian lifts (where
/// they exist).
#[derive(Debug, Clone)]
pub struct FiberedPresentation {
    total: Arc<FinCategory>,
    base: Arc<FinCategory>,
    projection: FinFunctor,
    cartesian: BTreeMap<(Arr, Ob), Arr>,
    opcartesian: BTreeMap<(Arr, Ob), Arr>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FiberedViolation {
    Projection(FunctorViolation),
    MissingLift { phi: Arr, object: Ob },
    /// A chosen lift does not lie over its base arrow or has the wrong end.
    LiftNotOver { lift: Arr, phi: Arr },
    /// `g` over `φ∘ψ` factors through the lift over `ψ` in `count` ways.
    NotCartesian { lift: Arr, g: Arr, psi: Arr, count: usize },
    NotOpcartesian { lift: Arr, g: Arr, psi: Arr, count: usize },
    /// Chosen cartesian lifts do not compose strictly.
    NotSplit { phi: Arr, psi: Arr, object: Ob },
}

impl FiberedPresentation {
    pub fn new(
        projection: FinFunctor,
        cartesian: BTreeMap<(Arr, Ob), Arr>,
        opcartesian: BTreeMap<(Arr, Ob), Arr>,
    ) -> Self {
        FiberedPresentation {
            total: projection.source().clone(),
            base: projection.target().clone(),
            projection,
            cartesian,
            opcartesian,
        }
    }

    pub fn total(&self) -> &Arc<FinCategory> {
        &self.total
    }
    pub fn base(&self) -> &Arc<FinCategory> {
        &self.base
    }
    pub fn projection(&self) -> &FinFunctor {
        &self.projection
    }
    /// The chosen cartesian lift of `φ` ending at `object`.
    pub fn cartesian_lift(&self, phi: Arr, object: Ob) -> Option<Arr> {
        self.cartesian.get(&(phi, object)).copied()
    }
    /// The chosen opcartesian lift of `φ` starting at `object`.
    pub fn opcartesian_lift(&self, phi: Arr, object: Ob) -> Option<Arr> {
        self.opcartesian.get(&(phi, object)).copied()
    }
    pub fn set_cartesian_lift(&mut self, phi: Arr, object: Ob, lift: Arr) {
        self.cartesian.insert((phi, object), lift);
    }

    /// Enumerates the universal properties of every chosen lift, presence of
    /// all cartesian lifts, and splitness.
    pub fn check(&self) -> Vec<FiberedViolation> {
        let mut out: Vec<FiberedViolation> =
            self.projection.check().into_iter().map(FiberedViolation::Projection).collect();
        if !out.is_empty() {
            return out;
        }
        let (e, b, p) = (&*self.total, &*self.base, &self.projection);
        for phi in b.arrows() {
            for y in e.objects().filter(|&y| p.ob(y) == b.dst(phi)) {
                if !self.cartesian.contains_key(&(phi, y)) {
                    out.push(FiberedViolation::MissingLift { phi, object: y });
                }
            }
        }
        for (&(phi, y), &l) in &self.cartesian {
            if p.arr(l) != phi || e.dst(l) != y {
                out.push(FiberedViolation::LiftNotOver { lift: l, phi });
                continue;
            }
            let x = e.src(l);
            for &g in e.arrows_into(y) {
                let g = g as usize;
                let z = e.src(g);
                let mut count: BTreeMap<Arr, usize> = BTreeMap::new();
                for &h in e.hom(z, x) {
                    if e.compose(l, h as usize) == g {
                        *count.entry(p.arr(h as usize)).or_default() += 1;
                    }
                }
                for &psi in b.hom(p.ob(z), b.src(phi)) {
                    let psi = psi as usize;
                    if b.compose(phi, psi) != p.arr(g) {
                        continue;
                    }
                    let c = count.get(&psi).copied().unwrap_or(0);
                    if c != 1 {
                        out.push(FiberedViolation::NotCartesian { lift: l, g, psi, count: c });
                    }
                }
            }
        }
        for (&(phi, x), &l) in &self.opcartesian {
            if p.arr(l) != phi || e.src(l) != x {
                out.push(FiberedViolation::LiftNotOver { lift: l, phi });
                continue;
            }
            let y = e.dst(l);
            for z in e.objects() {
                for &g in e.hom(x, z) {
                    let g = g as usize;
                    let mut count: BTreeMap<Arr, usize> = BTreeMap::new();
                    for &h in e.hom(y, z) {
                        if e.compose(h as usize, l) == g {
                            *count.entry(p.arr(h as usize)).or_default() += 1;
                        }
                    }
                    for &psi in b.hom(b.dst(phi), p.ob(z)) {
                        let psi = psi as usize;
                        if b.compose(psi, phi) != p.arr(g) {
                            continue;
                        }
                        let c = count.get(&psi).copied().unwrap_or(0);
                        if c != 1 {
                            out.push(FiberedViolation::NotOpcartesian { lift: l, g, psi, count: c });
                        }
                    }
                }
            }
        }
        for (&(phi, z), &l) in &self.cartesian {
            if b.is_identity(phi) && !e.is_identity(l) {
                out.push(FiberedViolation::NotSplit { phi, psi: phi, object: z });
            }
            let y = e.src(l);
            for &psi in b.arrows_into(b.src(phi)) {
                let psi = psi as usize;
                let composite = self.cartesian.get(&(b.compose(phi, psi), z));
                let inner = self.cartesian.get(&(psi, y));
                if let (Some(&c), Some(&i)) = (composite, inner) {
                    if e.compose(l, i) != c {
                        out.push(FiberedViolation::NotSplit { phi, psi, object: z });
                    }
                }
            }
        }
        out
    }
}

/// Largest fiber or total category the family fibration will build.
const MAX_ARROWS: usize = 4096;

/// The fibration of families of theory objects over the category of finite
/// sets `0..=b`: the fiber over `I` is the power `T^I`, restriction along
/// `φ: I → K` reindexes, and left extension takes disjoint unions over the
/// fibers of `φ` (when the sums stay within the truncation bound).
///
/// Objects and arrows of `T^k` are coded as `k`-tuples, first entry most
/// significant.
#[derive(Debug, Clone)]
pub struct FamilyFibration {
    theory: TheoryPresentation,
    n: usize,
    base: Arc<FinCategory>,
    base_tables: Vec<Vec<usize>>,
    fibers: Vec<Arc<FinCategory>>,
}

fn digits(mut code: usize, radix: usize, k: usize) -> Vec<usize> {
    let mut t = alloc::vec![0; k];
    for i in (0..k).rev() {
        t[i] = code % radix;
        code /= radix;
    }
    t
}

fn undigits(t: &[usize], radix: usize) -> usize {
    t.iter().fold(0, |acc, &d| acc * radix + d)
}

/// Mixed-radix code, first digit least significant.
fn mixed_encode(t: &[usize], radices: &[usize]) -> usize {
    t.iter().zip(radices).rev().fold(0, |acc, (&d, &r)| acc * r + d)
}

fn mixed_decode(mut code: usize, radices: &[usize]) -> Vec<usize> {
    radices
        .iter()
        .map(|&r| {
            let d = code % r;
            code /= r;
            d
        })
        .collect()
}

impl FamilyFibration {
    /// Needs a theory built from a monad on the truncated site of finite
    /// sets; `base_bound` is the largest base set.
    pub fn new(t: &TheoryPresentation, base_bound: usize) -> Result<Self> {
        let n = t.require_finset()?;
        if t.monad().is_none() {
            return Err(precondition("family fibration needs a theory built from a monad"));
        }
        let arrows = t.theory().arrow_count();
        let too_big = (0..=base_bound).any(|k| arrows.checked_pow(k as u32).is_none_or(|c| c > MAX_ARROWS));
        if too_big {
            return Err(precondition(format!(
                "fiber T^{base_bound} over a theory with {arrows} arrows is too large"
            )));
        }
        let base = Arc::new(FinCategory::finset(base_bound));
        let base_tables = finset_tables(&base);
        let fibers = (0..=base_bound)
            .map(|k| if k == 1 { t.theory().clone() } else { Arc::new(power(t.theory(), k)) })
            .collect();
        Ok(FamilyFibration { theory: t.clone(), n, base, base_tables, fibers })
    }

    pub fn theory(&self) -> &TheoryPresentation {
        &self.theory
    }
    pub fn base(&self) -> &Arc<FinCategory> {
        &self.base
    }
    pub fn base_bound(&self) -> usize {
        self.fibers.len() - 1
    }
    /// The fiber `T^k` over the set `k`.
    pub fn fiber(&self, k: usize) -> &Arc<FinCategory> {
        &self.fibers[k]
    }

    pub fn object(&self, t: &[usize]) -> Ob {
        undigits(t, self.n + 1)
    }
    pub fn object_tuple(&self, k: usize, x: Ob) -> Vec<usize> {
        digits(x, self.n + 1, k)
    }
    pub fn arrow(&self, t: &[usize]) -> Arr {
        undigits(t, self.theory.theory().arrow_count())
    }
    pub fn arrow_tuple(&self, k: usize, f: Arr) -> Vec<usize> {
        digits(f, self.theory.theory().arrow_count(), k)
    }

    /// The base arrow with the given function table into `0..codomain`.
    pub fn base_arrow(&self, table: &[usize], codomain: usize) -> Arr {
        finset_arrow(&self.base, table, codomain)
    }

    /// `φ^*` on objects of the fiber over `dst φ`.
    pub fn restrict_object(&self, phi: Arr, y: Ob) -> Ob {
        let ys = self.object_tuple(self.base.dst(phi), y);
        let t: Vec<usize> = self.base_tables[phi].iter().map(|&k| ys[k]).collect();
        self.object(&t)
    }

    /// `φ^*` on arrows of the fiber over `dst φ`.
    pub fn restrict_arrow(&self, phi: Arr, g: Arr) -> Arr {
        let gs = self.arrow_tuple(self.base.dst(phi), g);
        let t: Vec<usize> = self.base_tables[phi].iter().map(|&k| gs[k]).collect();
        self.arrow(&t)
    }

    /// `φ_!` on objects: sizes summed over the fibers of `φ`, `None` past
    /// the truncation bound.
    pub fn extend_object(&self, phi: Arr, x: Ob) -> Option<Ob> {
        let xs = self.object_tuple(self.base.src(phi), x);
        let mut sums = alloc::vec![0usize; self.base.dst(phi)];
        for (i, &k) in self.base_tables[phi].iter().enumerate() {
            sums[k] += xs[i];
        }
        sums.iter().all(|&s| s <= self.n).then(|| self.object(&sums))
    }

    /// The unit `X → φ^* φ_! X`: each `X_i` included as its block of the
    /// sum over the fiber of `φ` through `φ(i)`, blocks in order of `i`.
    pub fn extend_unit(&self, phi: Arr, x: Ob) -> Option<Arr> {
        let target = self.extend_object(phi, x)?;
        let k = self.base.src(phi);
        let xs = self.object_tuple(k, x);
        let sums = self.object_tuple(self.base.dst(phi), target);
        let mut next = alloc::vec![0usize; sums.len()];
        let site = self.theory.site().cat();
        let comps: Vec<usize> = (0..k)
            .map(|i| {
                let q = self.base_tables[phi][i];
                let table: Vec<usize> = (next[q]..next[q] + xs[i]).collect();
                next[q] += xs[i];
                self.theory.tau().arr(finset_arrow(site, &table, sums[q]))
            })
            .collect();
        Some(self.arrow(&comps))
    }

    /// The object of `T^k` with `x` at `j` and `0` elsewhere.
    pub fn point_object(&self, k: usize, j: usize, x: Ob) -> Ob {
        let mut t = alloc::vec![0; k];
        t[j] = x;
        self.object(&t)
    }

    /// `f` at `j` and identities of `0` elsewhere.
    pub fn point_arrow(&self, k: usize, j: usize, f: Arr) -> Arr {
        let id0 = self.theory.theory().id(0);
        let mut t = alloc::vec![id0; k];
        t[j] = f;
        self.arrow(&t)
    }

    /// The arrow `e_j(X_j) → X` that is the identity at `j` and empty
    /// elsewhere.
    fn block_inclusion(&self, k: usize, j: usize, x: Ob) -> Arr {
        let th = self.theory.theory();
        let xs = self.object_tuple(k, x);
        let t: Vec<usize> = (0..k)
            .map(|i| if i == j { th.id(xs[i]) } else { th.hom(0, xs[i])[0] as usize })
            .collect();
        self.arrow(&t)
    }

    /// Whether `p` on `T^k` is a Linton model: its value at each object is
    /// the product of its values at the points, through the point inclusions.
    /// Returns the first object where this fails.
    pub fn linton_failure(&self, k: usize, p: &Presheaf) -> Option<Ob> {
        let cat = self.fiber(k);
        let th = self.theory.theory();
        let unit_points: Vec<usize> = (0..k).map(|j| self.point_object(k, j, 1)).collect();
        for x in cat.objects() {
            let xs = self.object_tuple(k, x);
            let mut legs = Vec::new();
            let mut radices = Vec::new();
            for j in 0..k {
                for u in 0..xs[j] {
                    let t: Vec<usize> = (0..k)
                        .map(|i| {
                            if i == j {
                                self.theory.inclusion(xs[j], u)
                            } else {
                                th.hom(0, xs[i])[0] as usize
                            }
                        })
                        .collect();
                    legs.push(self.arrow(&t));
                    radices.push(p.size(unit_points[j]));
                }
            }
            let expected: usize = radices.iter().product();
            if p.size(x) != expected {
                return Some(x);
            }
            let mut seen = alloc::vec![false; expected];
            for e in 0..p.size(x) {
                let t: Vec<usize> = legs.iter().map(|&l| p.act(l, e)).collect();
                if core::mem::replace(&mut seen[mixed_encode(&t, &radices)], true) {
                    return Some(x);
                }
            }
        }
        None
    }

    /// Builds the total category and chosen lifts. Only feasible for very
    /// small theories and bases.
    pub fn presentation(&self) -> Result<FiberedPresentation> {
        let b = &*self.base;
        let mut offsets = Vec::new();
        let mut obs = Vec::new();
        let mut names = Vec::new();
        for k in b.objects() {
            offsets.push(obs.len());
            for x in self.fiber(k).objects() {
                obs.push((k, x));
                names.push(format!("{k}:{}", self.fiber(k).object_name(x)));
            }
        }
        let mut arrows = Vec::new();
        let mut data = Vec::new();
        let mut index = hashbrown::HashMap::new();
        for (s, &(k, x)) in obs.iter().enumerate() {
            for (d, &(l, y)) in obs.iter().enumerate() {
                for &phi in b.hom(k, l) {
                    let phi = phi as usize;
                    let py = self.restrict_object(phi, y);
                    for &f in self.fiber(k).hom(x, py) {
                        if arrows.len() >= MAX_ARROWS {
                            return Err(precondition("total category is too large"));
                        }
                        index.insert((phi, f as usize, s, d), arrows.len());
                        arrows.push((format!("{}/{}", b.arrow_name(phi), self.fiber(k).arrow_name(f as usize)), s, d));
                        data.push((phi, f as usize));
                    }
                }
            }
        }
        let ident = obs
            .iter()
            .enumerate()
            .map(|(s, &(k, x))| index[&(b.id(k), self.fiber(k).id(x), s, s)])
            .collect();
        let total = Arc::new(FinCategory::from_fn(names, arrows.clone(), ident, |g, f| {
            let (phi, ff) = data[f];
            let (psi, gg) = data[g];
            let k = b.src(phi);
            let h = self.fiber(k).compose(self.restrict_arrow(phi, gg), ff);
            index[&(b.compose(psi, phi), h, arrows[f].1, arrows[g].2)]
        }));
        let projection = FinFunctor::new(
            total.clone(),
            self.base.clone(),
            obs.iter().map(|&(k, _)| k).collect(),
            data.iter().map(|&(phi, _)| phi).collect(),
        );
        let mut cartesian = BTreeMap::new();
        let mut opcartesian = BTreeMap::new();
        for phi in b.arrows() {
            let (k, l) = (b.src(phi), b.dst(phi));
            for y in self.fiber(l).objects() {
                let px = self.restrict_object(phi, y);
                let s = offsets[k] + px;
                cartesian.insert((phi, offsets[l] + y), index[&(phi, self.fiber(k).id(px), s, offsets[l] + y)]);
            }
            for x in self.fiber(k).objects() {
                if let (Some(y), Some(unit)) = (self.extend_object(phi, x), self.extend_unit(phi, x)) {
                    let s = offsets[k] + x;
                    opcartesian.insert((phi, s), index[&(phi, unit, s, offsets[l] + y)]);
                }
            }
        }
        Ok(FiberedPresentation::new(projection, cartesian, opcartesian))
    }
}

/// A fibered functor `M: T^op → E^J` given by its components: for each base
/// set `k` and each `(i, j) ∈ k × J`, a presheaf `M^k(-)_{(i,j)}` on `T^k`.
/// Sheaves over `k × J` are recorded by their values at points.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LawvereModel {
    sorts: usize,
    components: Vec<Vec<Presheaf>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LawvereFailure {
    Shape,
    NotFunctorial { fiber: usize, point: usize, sort: usize },
    /// `M^k(φ^* Y)_{(i,j)}` differs from `M^l(Y)_{(φ(i),j)}`.
    NotCartesian { phi: Arr, object: Ob, point: usize, sort: usize },
    /// `M^l(φ_! X)_{(q,j)} → ∏_{φ(i)=q} M^k(X)_{(i,j)}` is not a bijection.
    NotMultiplicative { phi: Arr, object: Ob, point: usize, sort: usize },
}

impl fmt::Display for LawvereFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LawvereFailure::Shape => f.write_str("components do not match the fibration"),
            LawvereFailure::NotFunctorial { fiber, point, sort } => {
                write!(f, "component ({point}, {sort}) over {fiber} is not a presheaf")
            }
            LawvereFailure::NotCartesian { phi, object, point, sort } => write!(
                f,
                "not cartesian along base arrow {phi} at object {object}, component ({point}, {sort})"
            ),
            LawvereFailure::NotMultiplicative { phi, object, point, sort } => write!(
                f,
                "not multiplicative along base arrow {phi} at object {object}, component ({point}, {sort})"
            ),
        }
    }
}

impl LawvereModel {
    pub fn new(fib: &FamilyFibration, sorts: usize, components: Vec<Vec<Presheaf>>) -> Result<Self> {
        let ok = components.len() == fib.base_bound() + 1
            && components.iter().enumerate().all(|(k, c)| {
                c.len() == k * sorts && c.iter().all(|p| **p.cat() == **fib.fiber(k))
            });
        if !ok {
            return Err(precondition(format!("{}", LawvereFailure::Shape)));
        }
        Ok(LawvereModel { sorts, components })
    }

    /// The model of a `J`-indexed family of presheaves on `T`:
    /// `M^k(X)_{(i,j)} = models[j](X_i)`.
    pub fn from_family(fib: &FamilyFibration, models: &[Presheaf]) -> Result<Self> {
        let th = fib.theory.theory();
        if models.iter().any(|m| **m.cat() != **th) {
            return Err(Error::CategoryMismatch);
        }
        let mut components = Vec::new();
        for k in 0..=fib.base_bound() {
            let cat = fib.fiber(k);
            let mut row = Vec::new();
            for i in 0..k {
                for m in models {
                    let sizes = cat.objects().map(|x| m.size(fib.object_tuple(k, x)[i])).collect();
                    row.push(Presheaf::from_fn(cat.clone(), sizes, |f, e| {
                        m.act(fib.arrow_tuple(k, f)[i], e)
                    }));
                }
            }
            components.push(row);
        }
        Self::new(fib, models.len(), components)
    }

    /// `|J|`.
    pub fn sorts(&self) -> usize {
        self.sorts
    }
    pub fn component(&self, k: usize, i: usize, j: usize) -> &Presheaf {
        &self.components[k][i * self.sorts + j]
    }
}

/// Checks functoriality, strict cartesianness and multiplicativity along
/// every base arrow.
pub fn check_lawvere(fib: &FamilyFibration, m: &LawvereModel) -> Result<(), LawvereFailure> {
    let b = fib.base();
    let sorts = m.sorts;
    for k in b.objects() {
        for i in 0..k {
            for j in 0..sorts {
                if !m.component(k, i, j).check_functoriality().is_empty() {
                    return Err(LawvereFailure::NotFunctorial { fiber: k, point: i, sort: j });
                }
            }
        }
    }
    for phi in b.arrows() {
        let (k, l) = (b.src(phi), b.dst(phi));
        let table = &fib.base_tables[phi];
        for i in 0..k {
            for j in 0..sorts {
                let (lo, hi) = (m.component(k, i, j), m.component(l, table[i], j));
                for y in fib.fiber(l).objects() {
                    if lo.size(fib.restrict_object(phi, y)) != hi.size(y) {
                        return Err(LawvereFailure::NotCartesian { phi, object: y, point: i, sort: j });
                    }
                }
                for g in fib.fiber(l).arrows() {
                    if lo.table(fib.restrict_arrow(phi, g)) != hi.table(g) {
                        let object = fib.fiber(l).dst(g);
                        return Err(LawvereFailure::NotCartesian { phi, object, point: i, sort: j });
                    }
                }
            }
        }
    }
    for phi in b.arrows() {
        let (k, l) = (b.src(phi), b.dst(phi));
        let table = &fib.base_tables[phi];
        for x in fib.fiber(k).objects() {
            let (Some(y), Some(unit)) = (fib.extend_object(phi, x), fib.extend_unit(phi, x)) else {
                continue;
            };
            for q in 0..l {
                let pre: Vec<usize> = (0..k).filter(|&i| table[i] == q).collect();
                for j in 0..sorts {
                    let fail = LawvereFailure::NotMultiplicative { phi, object: x, point: q, sort: j };
                    let radices: Vec<usize> = pre.iter().map(|&i| m.component(k, i, j).size(x)).collect();
                    let expected: usize = radices.iter().product();
                    let top = m.component(l, q, j);
                    if top.size(y) != expected {
                        return Err(fail);
                    }
                    let mut seen = alloc::vec![false; expected];
                    for e in 0..expected {
                        // M^l(φ_!X)_{(q,j)} = M^k(φ^*φ_!X)_{(i,j)}, then the unit.
                        let t: Vec<usize> = pre.iter().map(|&i| m.component(k, i, j).act(unit, e)).collect();
                        if core::mem::replace(&mut seen[mixed_encode(&t, &radices)], true) {
                            return Err(fail);
                        }
                    }
                }
            }
        }
    }
    Ok(())
}

fn require_lawvere(fib: &FamilyFibration, m: &LawvereModel) -> Result<()> {
    check_lawvere(fib, m).map_err(|f| precondition(format!("{f}")))?;
    if m.sorts > fib.base_bound() {
        return Err(precondition("the base object J exceeds the base bound"));
    }
    Ok(())
}

/// `α_J(M)(T) = E^{J×J}(Δ_J, M^J(T)) = ∏_j M^J(T)_{(j,j)}`, a presheaf on
/// `T^J`; tuples coded with `j = 0` least significant.
pub fn lawvere_to_linton(fib: &FamilyFibration, m: &LawvereModel) -> Result<Presheaf> {
    require_lawvere(fib, m)?;
    let jn = m.sorts;
    let cat = fib.fiber(jn).clone();
    let diag: Vec<&Presheaf> = (0..jn).map(|j| m.component(jn, j, j)).collect();
    let radices = |x: Ob| -> Vec<usize> { diag.iter().map(|p| p.size(x)).collect() };
    let sizes = cat.objects().map(|x| radices(x).iter().product()).collect();
    let c2 = cat.clone();
    Ok(Presheaf::from_fn(cat, sizes, |f, e| {
        let t = mixed_decode(e, &radices(c2.dst(f)));
        let image: Vec<usize> = t.iter().zip(&diag).map(|(&x, p)| p.act(f, x)).collect();
        mixed_encode(&image, &radices(c2.src(f)))
    }))
}

/// `β_J(M̄)`: `M^k(T)_{(i,j)} = M̄(e_j(T_i))`, the value of `M̄` at `T_i`
/// placed at `j`.
pub fn linton_to_lawvere(fib: &FamilyFibration, sorts: usize, bar_m: &Presheaf) -> Result<LawvereModel> {
    if sorts > fib.base_bound() || **bar_m.cat() != **fib.fiber(sorts) {
        return Err(Error::CategoryMismatch);
    }
    if let Some(x) = fib.linton_failure(sorts, bar_m) {
        return Err(precondition(format!("not a Linton model at object {x}")));
    }
    let mut components = Vec::new();
    for k in 0..=fib.base_bound() {
        let cat = fib.fiber(k);
        let mut row = Vec::new();
        for i in 0..k {
            for j in 0..sorts {
                let sizes = cat
                    .objects()
                    .map(|x| bar_m.size(fib.point_object(sorts, j, fib.object_tuple(k, x)[i])))
                    .collect();
                row.push(Presheaf::from_fn(cat.clone(), sizes, |f, e| {
                    bar_m.act(fib.point_arrow(sorts, j, fib.arrow_tuple(k, f)[i]), e)
                }));
            }
        }
        components.push(row);
    }
    LawvereModel::new(fib, sorts, components)
}

/// The isomorphism `M̄ ≅ α_J β_J M̄`, `x ↦ (M̄(ι_j) x)_j` for the block
/// inclusions `ι_j: e_j(T_j) → T`.
pub fn alpha_beta_iso(fib: &FamilyFibration, sorts: usize, bar_m: &Presheaf) -> Result<Isomorphism> {
    let round = lawvere_to_linton(fib, &linton_to_lawvere(fib, sorts, bar_m)?)?;
    let cat = fib.fiber(sorts);
    let components = cat
        .objects()
        .map(|x| {
            let xs = fib.object_tuple(sorts, x);
            let radices: Vec<usize> =
                (0..sorts).map(|j| bar_m.size(fib.point_object(sorts, j, xs[j]))).collect();
            let legs: Vec<Arr> = (0..sorts).map(|j| fib.block_inclusion(sorts, j, x)).collect();
            (0..bar_m.size(x))
                .map(|e| {
                    let t: Vec<usize> = legs.iter().map(|&l| bar_m.act(l, e)).collect();
                    mixed_encode(&t, &radices) as u32
                })
                .collect()
        })
        .collect();
    let forward = NatTransformation { components };
    Isomorphism::from_forward(forward, bar_m, &round)
        .ok_or_else(|| precondition("α∘β comparison is not an isomorphism"))
}

/// Isomorphisms `β_J α_J M ≅ M`, one per component `(k, i, j)` in the
/// order of [`LawvereModel::component`]. An element of `α_J M(e_j(T_i))`
/// is projected to its `j`-th factor `M^J(e_j(T_i))_{(j,j)} = M^1(T_i)_{(0,j)}`
/// and moved along the unit of `j_!`.
pub fn beta_alpha_iso(fib: &FamilyFibration, m: &LawvereModel) -> Result<Vec<Vec<Isomorphism>>> {
    let jn = m.sorts;
    let round = linton_to_lawvere(fib, jn, &lawvere_to_linton(fib, m)?)?;
    let mut out = Vec::new();
    for k in 0..=fib.base_bound() {
        let cat = fib.fiber(k);
        let mut row = Vec::new();
        for i in 0..k {
            for j in 0..jn {
                let j_arrow = fib.base_arrow(&[j], jn);
                let components = cat
                    .objects()
                    .map(|x| {
                        let xi = fib.object_tuple(k, x)[i];
                        let y = fib.point_object(jn, j, xi);
                        let radices: Vec<usize> = (0..jn).map(|jj| m.component(jn, jj, jj).size(y)).collect();
                        let unit = fib.extend_unit(j_arrow, xi).expect("a single block fits");
                        (0..round.component(k, i, j).size(x))
                            .map(|e| m.component(1, 0, j).act(unit, mixed_decode(e, &radices)[j]) as u32)
                            .collect()
                    })
                    .collect();
                let forward = NatTransformation { components };
                let (src, dst) = (round.component(k, i, j), m.component(k, i, j));
                let iso = Isomorphism::from_forward(forward, src, dst)
                    .ok_or_else(|| precondition(format!("β∘α comparison fails at ({k}, {i}, {j})")))?;
                row.push(iso);
            }
        }
        out.push(row);
    }
    Ok(out)
}
