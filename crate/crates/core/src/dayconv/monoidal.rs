use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::fincat::{Arr, FinCategory, Ob, NONE};
use crate::site::{finset_arrow, finset_tables};

/// A symmetric monoidal structure on a finite category, possibly partial:
/// `a ⊗ b` may be undefined, as for products of finite sets truncated at
/// `N`. All structure maps are stored as dense tables.
#[derive(Debug, Clone)]
pub struct MonoidalFinCategory {
    name: String,
    base: Arc<FinCategory>,
    unit: Ob,
    ob: Vec<u32>,
    arr: Vec<u32>,
    assoc: Vec<u32>,
    lunit: Vec<u32>,
    runit: Vec<u32>,
    sym: Vec<u32>,
}

/// Which structure map a violation is about.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Component {
    Associator,
    LeftUnitor,
    RightUnitor,
    Symmetry,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MonoidalViolation {
    /// `e ⊗ a` or `a ⊗ e` is undefined or not `a`.
    UnitLaw { ob: Ob },
    /// `f ⊗ g` does not go from `src f ⊗ src g` to `dst f ⊗ dst g`.
    TensorEndpoints { f: Arr, g: Arr },
    TensorIdentity { a: Ob, b: Ob },
    /// `(f2 ⊗ g2) ∘ (f ⊗ g) != (f2 ∘ f) ⊗ (g2 ∘ g)`.
    Interchange { f: Arr, g: Arr, f2: Arr, g2: Arr },
    /// A structure map with the wrong endpoints, or missing while its
    /// endpoints are defined.
    Endpoints { which: Component, obs: [Ob; 3] },
    NotInvertible { which: Component, obs: [Ob; 3] },
    NotNatural { which: Component, arrows: [Arr; 3] },
    Pentagon { obs: [Ob; 4] },
    Triangle { a: Ob, b: Ob },
    Hexagon { obs: [Ob; 3] },
    SymmetryNotInvolutive { a: Ob, b: Ob },
}

/// Violations reported before the check stops.
const MAX_REPORT: usize = 64;

impl MonoidalFinCategory {
    /// Tabulates the structure. `arr` is consulted on pairs of arrows whose
    /// endpoints have defined tensors, `assoc` where both bracketings are
    /// defined, `sym` where both orders are defined. Nothing is checked here;
    /// see [`MonoidalFinCategory::check`].
    pub fn from_fn(
        name: impl Into<String>,
        base: Arc<FinCategory>,
        unit: Ob,
        ob: impl Fn(Ob, Ob) -> Option<Ob>,
        arr: impl Fn(Arr, Arr) -> Arr,
        assoc: impl Fn(Ob, Ob, Ob) -> Arr,
        lunit: impl Fn(Ob) -> Arr,
        runit: impl Fn(Ob) -> Arr,
        sym: impl Fn(Ob, Ob) -> Arr,
    ) -> Self {
        let nob = base.object_count();
        let na = base.arrow_count();
        let mut obt = alloc::vec![NONE; nob * nob];
        for a in 0..nob {
            for b in 0..nob {
                if let Some(c) = ob(a, b) {
                    obt[a * nob + b] = c as u32;
                }
            }
        }
        let mut arrt = alloc::vec![NONE; na * na];
        for f in 0..na {
            for g in 0..na {
                let s = obt[base.src(f) * nob + base.src(g)];
                let d = obt[base.dst(f) * nob + base.dst(g)];
                if s != NONE && d != NONE {
                    arrt[f * na + g] = arr(f, g) as u32;
                }
            }
        }
        let t = |a: Ob, b: Ob| obt[a * nob + b];
        let mut assoct = alloc::vec![NONE; nob * nob * nob];
        for a in 0..nob {
            for b in 0..nob {
                for c in 0..nob {
                    let (ab, bc) = (t(a, b), t(b, c));
                    if ab != NONE && bc != NONE && t(ab as usize, c) != NONE && t(a, bc as usize) != NONE {
                        assoct[(a * nob + b) * nob + c] = assoc(a, b, c) as u32;
                    }
                }
            }
        }
        let lunitt = (0..nob)
            .map(|a| if t(unit, a) != NONE { lunit(a) as u32 } else { NONE })
            .collect();
        let runitt = (0..nob)
            .map(|a| if t(a, unit) != NONE { runit(a) as u32 } else { NONE })
            .collect();
        let mut symt = alloc::vec![NONE; nob * nob];
        for a in 0..nob {
            for b in 0..nob {
                if t(a, b) != NONE && t(b, a) != NONE {
                    symt[a * nob + b] = sym(a, b) as u32;
                }
            }
        }
        MonoidalFinCategory {
            name: name.into(),
            base,
            unit,
            ob: obt,
            arr: arrt,
            assoc: assoct,
            lunit: lunitt,
            runit: runitt,
            sym: symt,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }
    pub fn base(&self) -> &Arc<FinCategory> {
        &self.base
    }
    pub fn unit(&self) -> Ob {
        self.unit
    }
    pub fn tensor_ob(&self, a: Ob, b: Ob) -> Option<Ob> {
        opt(self.ob[a * self.base.object_count() + b])
    }
    pub fn tensor_arr(&self, f: Arr, g: Arr) -> Option<Arr> {
        opt(self.arr[f * self.base.arrow_count() + g])
    }
    /// `(a ⊗ b) ⊗ c → a ⊗ (b ⊗ c)`.
    pub fn associator(&self, a: Ob, b: Ob, c: Ob) -> Option<Arr> {
        let n = self.base.object_count();
        opt(self.assoc[(a * n + b) * n + c])
    }
    /// `e ⊗ a → a`.
    pub fn left_unitor(&self, a: Ob) -> Option<Arr> {
        opt(self.lunit[a])
    }
    /// `a ⊗ e → a`.
    pub fn right_unitor(&self, a: Ob) -> Option<Arr> {
        opt(self.runit[a])
    }
    /// `a ⊗ b → b ⊗ a`.
    pub fn symmetry(&self, a: Ob, b: Ob) -> Option<Arr> {
        opt(self.sym[a * self.base.object_count() + b])
    }
    pub fn is_total(&self) -> bool {
        self.ob.iter().all(|&c| c != NONE)
    }

    /// The inverse of an invertible arrow.
    pub fn inverse(&self, f: Arr) -> Option<Arr> {
        let c = &*self.base;
        c.hom(c.dst(f), c.src(f))
            .iter()
            .map(|&g| g as usize)
            .find(|&g| c.compose(g, f) == c.id(c.src(f)) && c.compose(f, g) == c.id(c.dst(f)))
    }

    /// Functoriality of the tensor, and the coherence laws of a symmetric
    /// monoidal category wherever every term is defined. Exhaustive; stops
    /// after a few dozen violations.
    pub fn check(&self) -> Vec<MonoidalViolation> {
        let mut out = Vec::new();
        self.check_tensor(&mut out);
        if out.len() < MAX_REPORT {
            self.check_components(&mut out);
        }
        if out.len() < MAX_REPORT {
            self.check_coherence(&mut out);
        }
        out.truncate(MAX_REPORT);
        out
    }

    fn check_tensor(&self, out: &mut Vec<MonoidalViolation>) {
        let c = &*self.base;
        for a in c.objects() {
            if self.tensor_ob(self.unit, a) != Some(a) || self.tensor_ob(a, self.unit) != Some(a) {
                out.push(MonoidalViolation::UnitLaw { ob: a });
            }
            for b in c.objects() {
                if let Some(ab) = self.tensor_ob(a, b) {
                    if self.tensor_arr(c.id(a), c.id(b)) != Some(c.id(ab)) {
                        out.push(MonoidalViolation::TensorIdentity { a, b });
                    }
                }
            }
        }
        for f in c.arrows() {
            for g in c.arrows() {
                let Some(fg) = self.tensor_arr(f, g) else { continue };
                if Some(c.src(fg)) != self.tensor_ob(c.src(f), c.src(g))
                    || Some(c.dst(fg)) != self.tensor_ob(c.dst(f), c.dst(g))
                {
                    out.push(MonoidalViolation::TensorEndpoints { f, g });
                    continue;
                }
                for p in c.objects() {
                    for &f2 in c.hom(c.dst(f), p) {
                        for q in c.objects() {
                            for &g2 in c.hom(c.dst(g), q) {
                                let (f2, g2) = (f2 as usize, g2 as usize);
                                let Some(fg2) = self.tensor_arr(f2, g2) else { continue };
                                let lhs = c.try_compose(fg2, fg);
                                let rhs = self.tensor_arr(c.compose(f2, f), c.compose(g2, g));
                                if lhs.is_none() || rhs != lhs {
                                    out.push(MonoidalViolation::Interchange { f, g, f2, g2 });
                                    if out.len() >= MAX_REPORT {
                                        return;
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
    }

    fn check_components(&self, out: &mut Vec<MonoidalViolation>) {
        let c = &*self.base;
        let t = |a, b| self.tensor_ob(a, b);
        let tt = |a: Option<Ob>, b: Option<Ob>| a.zip(b).and_then(|(a, b)| self.tensor_ob(a, b));
        let e = self.unit;
        let mut component = |which, obs: [Ob; 3], f: Option<Arr>, src: Option<Ob>, dst: Option<Ob>| {
            match (f, src, dst) {
                (None, None, _) | (None, _, None) => {}
                (Some(f), Some(s), Some(d)) if c.src(f) == s && c.dst(f) == d => {
                    if self.inverse(f).is_none() {
                        out.push(MonoidalViolation::NotInvertible { which, obs });
                    }
                }
                _ => out.push(MonoidalViolation::Endpoints { which, obs }),
            }
        };
        for a in c.objects() {
            component(Component::LeftUnitor, [a, 0, 0], self.left_unitor(a), t(e, a), Some(a));
            component(Component::RightUnitor, [a, 0, 0], self.right_unitor(a), t(a, e), Some(a));
            for b in c.objects() {
                component(Component::Symmetry, [a, b, 0], self.symmetry(a, b), t(a, b), t(b, a));
                for d in c.objects() {
                    let src = tt(t(a, b), Some(d));
                    let dst = tt(Some(a), t(b, d));
                    component(Component::Associator, [a, b, d], self.associator(a, b, d), src, dst);
                }
            }
        }
        if !out.is_empty() {
            return;
        }
        // Naturality squares.
        let ta = |f, g| self.tensor_arr(f, g);
        let tta = |f: Option<Arr>, g: Option<Arr>| f.zip(g).and_then(|(f, g)| self.tensor_arr(f, g));
        let comp = |g: Option<Arr>, f: Option<Arr>| g.zip(f).and_then(|(g, f)| c.try_compose(g, f));
        let ide = c.id(e);
        for f in c.arrows() {
            let (a, a2) = (c.src(f), c.dst(f));
            let l = comp(self.left_unitor(a2), ta(ide, f));
            if l.is_some() && l != comp(Some(f), self.left_unitor(a)) {
                out.push(MonoidalViolation::NotNatural { which: Component::LeftUnitor, arrows: [f, f, f] });
            }
            let r = comp(self.right_unitor(a2), ta(f, ide));
            if r.is_some() && r != comp(Some(f), self.right_unitor(a)) {
                out.push(MonoidalViolation::NotNatural { which: Component::RightUnitor, arrows: [f, f, f] });
            }
            for g in c.arrows() {
                let (b, b2) = (c.src(g), c.dst(g));
                let lhs = comp(self.symmetry(a2, b2), ta(f, g));
                let rhs = comp(ta(g, f), self.symmetry(a, b));
                if lhs.is_some() && rhs.is_some() && lhs != rhs {
                    out.push(MonoidalViolation::NotNatural { which: Component::Symmetry, arrows: [f, g, g] });
                }
                if t(a, b).is_none() || t(a2, b2).is_none() {
                    continue;
                }
                for h in c.arrows() {
                    let (d, d2) = (c.src(h), c.dst(h));
                    let lhs = comp(self.associator(a2, b2, d2), tta(ta(f, g), Some(h)));
                    let rhs = comp(tta(Some(f), ta(g, h)), self.associator(a, b, d));
                    if lhs.is_some() && rhs.is_some() && lhs != rhs {
                        out.push(MonoidalViolation::NotNatural { which: Component::Associator, arrows: [f, g, h] });
                    }
                    if out.len() >= MAX_REPORT {
                        return;
                    }
                }
            }
        }
    }

    fn check_coherence(&self, out: &mut Vec<MonoidalViolation>) {
        let c = &*self.base;
        let t = |a, b| self.tensor_ob(a, b);
        let ta = |f: Option<Arr>, g: Option<Arr>| f.zip(g).and_then(|(f, g)| self.tensor_arr(f, g));
        let comp = |g: Option<Arr>, f: Option<Arr>| g.zip(f).and_then(|(g, f)| c.try_compose(g, f));
        let id = |a: Option<Ob>| a.map(|a| c.id(a));
        let al = |a: Option<Ob>, b: Option<Ob>, d: Option<Ob>| match (a, b, d) {
            (Some(a), Some(b), Some(d)) => self.associator(a, b, d),
            _ => None,
        };
        let e = self.unit;
        for a in c.objects() {
            for b in c.objects() {
                let (sa, sb) = (Some(a), Some(b));
                // (id_a ⊗ λ_b) ∘ α_{a,e,b} = ρ_a ⊗ id_b
                let lhs = comp(ta(id(sa), self.left_unitor(b)), al(sa, Some(e), sb));
                let rhs = ta(self.right_unitor(a), id(sb));
                if lhs.is_some() && rhs.is_some() && lhs != rhs {
                    out.push(MonoidalViolation::Triangle { a, b });
                }
                let twice = comp(self.symmetry(b, a), self.symmetry(a, b));
                if let (Some(s), Some(ab)) = (twice, t(a, b)) {
                    if s != c.id(ab) {
                        out.push(MonoidalViolation::SymmetryNotInvolutive { a, b });
                    }
                }
                for d in c.objects() {
                    let sd = Some(d);
                    // α_{b,d,a} ∘ σ_{a,b⊗d} ∘ α_{a,b,d} = (id_b ⊗ σ_{a,d}) ∘ α_{b,a,d} ∘ (σ_{a,b} ⊗ id_d)
                    let s1 = t(b, d).and_then(|bd| self.symmetry(a, bd));
                    let lhs = comp(al(sb, sd, sa), comp(s1, al(sa, sb, sd)));
                    let rhs = comp(
                        ta(id(sb), self.symmetry(a, d)),
                        comp(al(sb, sa, sd), ta(self.symmetry(a, b), id(sd))),
                    );
                    if lhs.is_some() && rhs.is_some() && lhs != rhs {
                        out.push(MonoidalViolation::Hexagon { obs: [a, b, d] });
                    }
                    for g in c.objects() {
                        let sg = Some(g);
                        // α_{a,b,d⊗g} ∘ α_{a⊗b,d,g} = (id_a ⊗ α_{b,d,g}) ∘ α_{a,b⊗d,g} ∘ (α_{a,b,d} ⊗ id_g)
                        let lhs = comp(al(sa, sb, t(d, g)), al(t(a, b), sd, sg));
                        let rhs = comp(
                            ta(id(sa), al(sb, sd, sg)),
                            comp(al(sa, t(b, d), sg), ta(al(sa, sb, sd), id(sg))),
                        );
                        if lhs.is_some() && rhs.is_some() && lhs != rhs {
                            out.push(MonoidalViolation::Pentagon { obs: [a, b, d, g] });
                        }
                    }
                    if out.len() >= MAX_REPORT {
                        return;
                    }
                }
            }
        }
    }

    /// Finite sets `0..=n` under cartesian product, defined when `a·b ≤ n`.
    /// The pair `(i, j)` of `a × b` is the element `i·b + j`, which makes the
    /// associator and unitors identities.
    pub fn finset_product(n: usize) -> Self {
        let base = Arc::new(FinCategory::finset(n));
        let tables = finset_tables(&base);
        let c = base.clone();
        let swap = move |a: Ob, b: Ob| {
            let t: Vec<usize> = (0..a * b).map(|k| (k % b) * a + k / b).collect();
            finset_arrow(&c, &t, a * b)
        };
        let c = base.clone();
        let arr = move |f: Arr, g: Arr| {
            let (b, b2) = (c.src(g), c.dst(g));
            let t: Vec<usize> = (0..c.src(f) * b)
                .map(|k| tables[f][k / b] * b2 + tables[g][k % b])
                .collect();
            finset_arrow(&c, &t, c.dst(f) * b2)
        };
        let c = base.clone();
        Self::from_fn(
            alloc::format!("finset-product-{n}"),
            base.clone(),
            1,
            move |a, b| Some(a * b).filter(|&p| p <= n),
            arr,
            |a, b, d| c.id(a * b * d),
            |a| c.id(a),
            |a| c.id(a),
            swap,
        )
    }

    /// Finite sets `0..=n` under disjoint union, defined when `a + b ≤ n`.
    pub fn finset_coproduct(n: usize) -> Self {
        let base = Arc::new(FinCategory::finset(n));
        let tables = finset_tables(&base);
        let c = base.clone();
        let swap = move |a: Ob, b: Ob| {
            let t: Vec<usize> = (0..a + b).map(|k| if k < a { b + k } else { k - a }).collect();
            finset_arrow(&c, &t, a + b)
        };
        let c = base.clone();
        let arr = move |f: Arr, g: Arr| {
            let (a, a2) = (c.src(f), c.dst(f));
            let t: Vec<usize> = (0..a + c.src(g))
                .map(|k| if k < a { tables[f][k] } else { a2 + tables[g][k - a] })
                .collect();
            finset_arrow(&c, &t, a2 + c.dst(g))
        };
        let c = base.clone();
        Self::from_fn(
            alloc::format!("finset-coproduct-{n}"),
            base.clone(),
            0,
            move |a, b| Some(a + b).filter(|&p| p <= n),
            arr,
            |a, b, d| c.id(a + b + d),
            |a| c.id(a),
            |a| c.id(a),
            swap,
        )
    }

    /// A finite poset whose tensor is a monotone commutative monoid `op`
    /// with unit `e`; every structure map is the unique arrow.
    pub fn thin(
        name: &str,
        n: usize,
        leq: impl Fn(usize, usize) -> bool,
        e: usize,
        op: impl Fn(usize, usize) -> usize + Clone,
    ) -> Self {
        let base = Arc::new(FinCategory::poset(n, leq));
        let c = base.clone();
        let unique = move |a: Ob, b: Ob| c.hom(a, b).first().map_or(0, |&f| f as usize);
        let c = base.clone();
        let (u1, u2, u3, u4, u5) = (unique.clone(), unique.clone(), unique.clone(), unique.clone(), unique);
        let (o1, o2, o3) = (op.clone(), op.clone(), op.clone());
        Self::from_fn(
            name,
            base,
            e,
            move |a, b| Some(o1(a, b)),
            move |f, g| u1(o2(c.src(f), c.src(g)), o2(c.dst(f), c.dst(g))),
            move |a, b, d| {
                let x = o3(o3(a, b), d);
                u2(x, x)
            },
            move |a| u3(a, a),
            move |a| u4(a, a),
            move |a, b| u5(op(a, b), op(b, a)),
        )
    }

    /// A commutative monoid `0..n` with unit `e`, as a one-object category
    /// tensored by multiplication.
    pub fn commutative_monoid(name: &str, n: usize, e: usize, mul: impl Fn(usize, usize) -> usize + Clone) -> Self {
        let m = mul.clone();
        let base = Arc::new(FinCategory::monoid(n, e, mul));
        Self::from_fn(name, base, 0, |_, _| Some(0), m, move |_, _, _| e, move |_| e, move |_| e, move |_, _| e)
    }

    /// A finite commutative monoid as a discrete category.
    pub fn discrete(name: &str, n: usize, e: usize, op: impl Fn(usize, usize) -> usize + Clone) -> Self {
        let base = Arc::new(FinCategory::discrete(n));
        let (o1, o2, o3) = (op.clone(), op.clone(), op.clone());
        // Arrow `i` is the identity of object `i`.
        Self::from_fn(
            name,
            base,
            e,
            move |a, b| Some(o1(a, b)),
            move |f, g| o2(f, g),
            move |a, b, d| o3(o3(a, b), d),
            |a| a,
            |a| a,
            move |a, b| op(a, b),
        )
    }
}

fn opt(x: u32) -> Option<usize> {
    (x != NONE).then_some(x as usize)
}

/// The bundled monoidal categories with a total tensor.
pub fn monoidal_fixtures() -> Vec<MonoidalFinCategory> {
    alloc::vec![
        MonoidalFinCategory::discrete("point", 1, 0, |_, _| 0),
        MonoidalFinCategory::discrete("cyclic-3", 3, 0, |a, b| (a + b) % 3),
        MonoidalFinCategory::thin("chain-3-max", 3, |i, j| i <= j, 0, |a, b| a.max(b)),
        MonoidalFinCategory::thin("chain-3-min", 3, |i, j| i <= j, 2, |a, b| a.min(b)),
        MonoidalFinCategory::thin("subsets-2-union", 4, |i, j| i & j == i, 0, |a, b| a | b),
        MonoidalFinCategory::thin("chain-3-truncated-sum", 3, |i, j| i <= j, 0, |a, b| (a + b).min(2)),
        MonoidalFinCategory::commutative_monoid("z2", 2, 0, |a, b| a ^ b),
        MonoidalFinCategory::commutative_monoid("mul-mod-3", 3, 1, |a, b| a * b % 3),
        MonoidalFinCategory::finset_product(1),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_are_coherent() {
        for m in monoidal_fixtures() {
            assert!(m.is_total(), "{}", m.name());
            assert_eq!(m.check(), alloc::vec![], "{}", m.name());
        }
    }

    #[test]
    fn partial_finset_structures_are_coherent() {
        for n in 1..=3 {
            let p = MonoidalFinCategory::finset_product(n);
            assert_eq!(p.check(), alloc::vec![]);
            assert_eq!(p.is_total(), n == 1);
            let s = MonoidalFinCategory::finset_coproduct(n);
            assert_eq!(s.check(), alloc::vec![]);
        }
    }

    #[test]
    fn broken_structures_are_reported() {
        // Subtraction-like tensor on a chain is not a bifunctor.
        let m = MonoidalFinCategory::thin("bad", 3, |i, j| i <= j, 0, |a, b| (a + 2 * b) % 3);
        assert!(!m.check().is_empty());
        // A symmetry that is not involutive on Z/3 acting on itself.
        let base = Arc::new(FinCategory::monoid(3, 0, |a, b| (a + b) % 3));
        let m = MonoidalFinCategory::from_fn("twisted", base, 0, |_, _| Some(0), |f, g| (f + g) % 3, |_, _, _| 0, |_| 0, |_| 0, |_, _| 1);
        assert!(m
            .check()
            .iter()
            .any(|v| matches!(v, MonoidalViolation::SymmetryNotInvolutive { .. } | MonoidalViolation::Hexagon { .. })));
    }
}
