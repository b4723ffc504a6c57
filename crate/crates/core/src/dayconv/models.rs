use alloc::vec::Vec;

use hashbrown::HashMap;

use super::{day_tensor, MonoidalFinCategory, MonoidalViolation};
use crate::error::{precondition, Result};
use crate::fincat::{Arr, Ob, Presheaf, PresheafLike};
use crate::site::{finset_arrow, finset_tables};
use crate::theory::{
    coords, decode_into, decode_u64, encode, encode_u64, modelify, presentation_of, solve, FiniteAlgebra,
    Model, PresentedAlgebra, Relation, TheoryPresentation,
};

/// A theory from a monad on the truncated site of finite sets, with the
/// tensor `m ⊗ n = m × n` on its objects and `u ⊗ v` on Kleisli arrows by
/// substituting `v` into `u`. The tensor is a bifunctor exactly when the
/// monad is commutative; [`tensor_sketchy`] reports when it is not.
#[derive(Debug, Clone)]
pub struct CommutativeTheory {
    theory: TheoryPresentation,
    monoidal: MonoidalFinCategory,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SketchyViolation {
    Monoidal(MonoidalViolation),
    /// `τ(f × g) != τf ⊗ τg` for arrows of the site.
    NotStrict { f: Arr, g: Arr },
    /// `id_I ⊗ g` (or `g ⊗ id_I` when `left` is false) is not the sum of
    /// `I` copies of `g`.
    NotDistributive { copies: Ob, arrow: Arr, left: bool },
}

/// Visits allowed when solving relations into a power of a carrier.
const SEARCH_LIMIT: usize = 1 << 24;

impl CommutativeTheory {
    pub fn new(theory: TheoryPresentation) -> Result<Self> {
        let n = theory.require_finset()?;
        let monad = theory
            .monad()
            .ok_or_else(|| precondition("a commutative theory needs a monad"))?
            .clone();
        let cat = theory.theory().clone();
        let free: Vec<u64> = (0..=n).map(|k| monad.free_size(k).expect("theory exists")).collect();
        let c = cat.clone();
        let arr = move |f: Arr, g: Arr| {
            let comps = |f: Arr| decode_u64(c.hom_index(f) as u64, free[c.dst(f)], c.src(f));
            let (m2, n2) = (c.dst(f), c.dst(g));
            let p = m2 * n2;
            let (uf, vg) = (comps(f), comps(g));
            let mut out = Vec::with_capacity(uf.len() * vg.len());
            for &u in &uf {
                for &v in &vg {
                    let inner: Vec<u64> = (0..m2)
                        .map(|k| {
                            let units: Vec<u64> = (0..n2).map(|l| monad.unit(p, k * n2 + l)).collect();
                            monad.bind(v, n2, p, &units)
                        })
                        .collect();
                    out.push(monad.bind(u, m2, p, &inner));
                }
            }
            c.hom(c.src(f) * c.src(g), p)[encode_u64(&out, free[p]) as usize] as usize
        };
        let tau = theory.tau().clone();
        let fin = theory.site().cat().clone();
        let swap = move |a: Ob, b: Ob| {
            let t: Vec<usize> = (0..a * b).map(|k| (k % b) * a + k / b).collect();
            tau.arr(finset_arrow(&fin, &t, a * b))
        };
        let c = cat.clone();
        let monoidal = MonoidalFinCategory::from_fn(
            alloc::format!("{}-tensor", theory.name()),
            cat.clone(),
            1,
            move |a, b| Some(a * b).filter(|&p| p <= n),
            arr,
            |a, b, d| c.id(a * b * d),
            |a| c.id(a),
            |a| c.id(a),
            swap,
        );
        Ok(CommutativeTheory { theory, monoidal })
    }

    pub fn theory(&self) -> &TheoryPresentation {
        &self.theory
    }
    pub fn monoidal(&self) -> &MonoidalFinCategory {
        &self.monoidal
    }
}

/// Checks that `T ⊗ -` is sketchy at the base fiber: the tensor on the
/// theory is a symmetric monoidal bifunctor, `τ` is strict monoidal, and for
/// every object `I` and arrow `g` of the theory, `id_I ⊗ g` is the sum of
/// `I` copies of `g` (so `τI ⊗ T ≅ I · T` naturally in `T`).
pub fn tensor_sketchy(ct: &CommutativeTheory) -> Vec<SketchyViolation> {
    let m = &ct.monoidal;
    let t = &ct.theory;
    let mut out: Vec<SketchyViolation> = m.check().into_iter().map(SketchyViolation::Monoidal).collect();
    let cat = t.theory();
    let fin = t.site().cat();
    let n = t.finset_bound().expect("checked in new");
    let tables = finset_tables(fin);
    let tau = t.tau();
    for f in fin.arrows() {
        for g in fin.arrows() {
            let (a, b) = (fin.src(f) * fin.src(g), fin.dst(f) * fin.dst(g));
            if a > n || b > n {
                continue;
            }
            let (b2, gb) = (fin.dst(g), fin.src(g));
            let table: Vec<usize> = (0..a).map(|k| tables[f][k / gb] * b2 + tables[g][k % gb]).collect();
            let prod = tau.arr(finset_arrow(fin, &table, b));
            if m.tensor_arr(tau.arr(f), tau.arr(g)) != Some(prod) {
                out.push(SketchyViolation::NotStrict { f, g });
            }
        }
    }
    // Block inclusions n → I·n.
    let block = |copies: usize, size: usize, i: usize, left: bool| {
        let t: Vec<usize> = (0..size)
            .map(|j| if left { i * size + j } else { j * copies + i })
            .collect();
        tau.arr(finset_arrow(fin, &t, copies * size))
    };
    for copies in 0..=n {
        for g in cat.arrows() {
            let (s, d) = (cat.src(g), cat.dst(g));
            if copies * s > n || copies * d > n {
                continue;
            }
            for left in [true, false] {
                let sum: Vec<usize> = cat
                    .hom(copies * s, copies * d)
                    .iter()
                    .map(|&c| c as usize)
                    .filter(|&c| {
                        (0..copies).all(|i| {
                            cat.compose(c, block(copies, s, i, left)) == cat.compose(block(copies, d, i, left), g)
                        })
                    })
                    .collect();
                let id = cat.id(copies);
                let tensor = if left { m.tensor_arr(id, g) } else { m.tensor_arr(g, id) };
                if sum.len() != 1 || tensor != Some(sum[0]) {
                    out.push(SketchyViolation::NotDistributive { copies, arrow: g, left });
                }
            }
        }
    }
    out
}

/// Which construction [`model_tensor`] uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TensorRoute {
    /// Reflect the Day convolution of the two models into models.
    Day,
    /// The algebra generated by `A × B` subject to bihomomorphism relations.
    Congruence,
}

/// A tensor product of models as a finite algebra with its universal
/// bilinear map.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModelTensor {
    pub algebra: FiniteAlgebra,
    /// `pair[a * |B| + b]` is `a ⊗ b`.
    pub pair: Vec<u32>,
    pub rounds: usize,
}

/// `m1 ⊗ m2` by either route. Carriers can be large, so the result is the
/// algebra at `1`; [`FiniteAlgebra::to_model`] gives the model.
pub fn model_tensor(m1: &Model, m2: &Model, ct: &CommutativeTheory, route: TensorRoute, bound: usize) -> Result<ModelTensor> {
    let t = &ct.theory;
    let (na, nb) = (m1.size(1), m2.size(1));
    match route {
        TensorRoute::Day => {
            let d = day_tensor(m1.presheaf(), m2.presheaf(), &ct.monoidal)?;
            let r = modelify(&d.presheaf, t, bound)?;
            let algebra = FiniteAlgebra::from_model(&r.model, t)?;
            let id = t.theory().id(1);
            let pair = (0..na * nb)
                .map(|k| {
                    let e = d.element(&ct.monoidal, 1, 1, 1, k / nb, k % nb, id).expect("in range");
                    r.unit.components[1][e]
                })
                .collect();
            Ok(ModelTensor {
                algebra,
                pair,
                rounds: r.rounds,
            })
        }
        TensorRoute::Congruence => {
            let fa = FiniteAlgebra::from_model(m1, t)?;
            let fb = FiniteAlgebra::from_model(m2, t)?;
            let mut relations = Vec::new();
            let mut args = Vec::new();
            // op_f(a) ⊗ b = op_f(a_i ⊗ b), and on the right.
            for (f, n) in fa.operations() {
                for (x, nx, ny, left) in [(&fa, na, nb, true), (&fb, nb, na, false)] {
                    let gen = |s: usize, o: usize| if left { s * nb + o } else { o * nb + s };
                    args.resize(n, 0);
                    for code in 0..nx.pow(n as u32) {
                        decode_into(code, nx, &mut args);
                        let r = x.op(f, &args);
                        for o in 0..ny {
                            relations.push(Relation {
                                lhs: gen(r, o),
                                op: f,
                                args: args.iter().map(|&s| gen(s, o)).collect(),
                            });
                        }
                    }
                }
            }
            let pa = PresentedAlgebra::new(t, na * nb, &relations, bound)?;
            Ok(ModelTensor {
                algebra: pa.algebra,
                pair: pa.generators,
                rounds: pa.rounds,
            })
        }
    }
}

/// The isomorphism between two tensor products matching `a ⊗ b` with
/// `a ⊗ b`, if there is one.
pub fn tensor_iso(x: &ModelTensor, y: &ModelTensor) -> Option<Vec<u32>> {
    if x.pair.len() != y.pair.len() || x.algebra.size() != y.algebra.size() {
        return None;
    }
    let seeds: Vec<(usize, usize)> = x.pair.iter().zip(&y.pair).map(|(&a, &b)| (a as usize, b as usize)).collect();
    let h = x.algebra.extend_hom(&y.algebra, &seeds)?;
    let mut seen = alloc::vec![false; y.algebra.size()];
    h.iter().all(|&v| !core::mem::replace(&mut seen[v as usize], true)).then_some(h)
}

/// `[P, M]` for a model `M`, through `M(d ⊗ c) = A^{d·c}` on all objects
/// (the truncation itself lacks `d ⊗ c` when `d·c > N`).
///
/// An element of `[P, M](c)` is a map `P → M(- ⊗ c)`, determined by its
/// component at `1`: a map `P(1) → A^c` satisfying the relations of `P`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModelHom {
    /// `|[P, M](c)|` for every object.
    pub sizes: Vec<usize>,
    /// The elements of `[P, M](1)`, as maps `P(1) → A`.
    pub maps: Vec<Vec<u32>>,
    /// Whether `[P, M](c) → [P, M](1)^c` is a bijection for every `c`.
    pub is_model: bool,
    /// The operations of `[P, M](1)`, pointwise; present when `is_model`.
    pub algebra: Option<FiniteAlgebra>,
}

impl ModelHom {
    pub fn index_of(&self, map: &[u32]) -> Option<usize> {
        self.maps.iter().position(|h| h == map)
    }
}

pub fn day_hom_into_model(p: &Presheaf, m: &Model, ct: &CommutativeTheory) -> Result<ModelHom> {
    let t = &ct.theory;
    let n = t.require_finset()?;
    let a = FiniteAlgebra::from_model(m, t)?;
    let co = coords(m, t)?;
    let relations = presentation_of(p, t)?;
    let gens = p.size(1);
    let size = a.size();
    let mut per_object: Vec<Vec<Vec<u32>>> = Vec::with_capacity(n + 1);
    for c in 0..=n {
        // Digits of every element of M(c) = A^c, and scratch space.
        let digits: Vec<u32> = co.code[c]
            .iter()
            .flat_map(|&code| {
                let mut d = alloc::vec![0usize; c];
                decode_into(code as usize, size, &mut d);
                d.into_iter().map(|x| x as u32)
            })
            .collect();
        let scratch = core::cell::RefCell::new((Vec::new(), alloc::vec![0usize; c]));
        let op = |f: Arr, args: &[usize]| -> usize {
            let mut guard = scratch.borrow_mut();
            let (comps, out) = &mut *guard;
            for (j, o) in out.iter_mut().enumerate() {
                comps.clear();
                comps.extend(args.iter().map(|&e| digits[e * c + j] as usize));
                *o = a.op(f, comps);
            }
            co.elem[c][encode(out, size)] as usize
        };
        per_object.push(solve(gens, &relations, m.size(c), SEARCH_LIMIT, &op)?);
    }
    let sizes: Vec<usize> = per_object.iter().map(Vec::len).collect();
    let maps = per_object[1].clone();
    let index: HashMap<Vec<u32>, usize> = maps.iter().cloned().enumerate().map(|(i, h)| (h, i)).collect();
    let mut is_model = true;
    for (c, list) in per_object.iter().enumerate() {
        let expected = maps.len().checked_pow(c as u32);
        is_model &= expected == Some(list.len());
        let incl: Vec<usize> = (0..c).map(|i| t.inclusion(c, i)).collect();
        let mut seen = hashbrown::HashSet::new();
        for h in list {
            let key: Option<Vec<usize>> = incl
                .iter()
                .map(|&u| {
                    let comp: Vec<u32> = h.iter().map(|&e| m.act(u, e as usize) as u32).collect();
                    index.get(&comp).copied()
                })
                .collect();
            match key {
                Some(k) => is_model &= seen.insert(k),
                None => is_model = false,
            }
        }
    }
    let algebra = if is_model {
        let mut img = Vec::new();
        Some(FiniteAlgebra::from_fn(t, maps.len(), |f, args| {
            img.clear();
            img.extend((0..gens).map(|g| {
                let comps: Vec<usize> = args.iter().map(|&h| maps[h][g] as usize).collect();
                a.op(f, &comps) as u32
            }));
            index[&img]
        })?)
    } else {
        None
    };
    Ok(ModelHom {
        sizes,
        maps,
        is_model,
        algebra,
    })
}

/// The internal hom of two models.
pub fn model_hom(m1: &Model, m2: &Model, ct: &CommutativeTheory) -> Result<ModelHom> {
    day_hom_into_model(m1.presheaf(), m2, ct)
}

/// The transpose `A → [B, C]` of a homomorphism `φ: A ⊗ B → C`:
/// `a ↦ (b ↦ φ(a ⊗ b))`.
pub fn curry(phi: &[u32], tensor: &ModelTensor, nb: usize, hom: &ModelHom) -> Option<Vec<u32>> {
    let na = tensor.pair.len().checked_div(nb).unwrap_or(0);
    (0..na)
        .map(|x| {
            let map: Vec<u32> = (0..nb).map(|y| phi[tensor.pair[x * nb + y] as usize]).collect();
            hom.index_of(&map).map(|i| i as u32)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::site::power_presheaf;
    use crate::theory::{free_model, MonoidActions};

    fn free(k: usize, t: &TheoryPresentation) -> (Model, usize) {
        let x = power_presheaf(t.site().cat(), k);
        let f = free_model(&x, t, 16).unwrap();
        // The image of the generator `i` of `x(1) = k`.
        let g = if k > 0 { f.unit.components[1][k - 1] as usize } else { 0 };
        (f.model, g)
    }

    #[test]
    fn sketchy_exactly_for_commutative_monads() {
        for t in [
            TheoryPresentation::fq_modules(2, 3).unwrap(),
            TheoryPresentation::semilattices(3).unwrap(),
            TheoryPresentation::pointed_sets(3).unwrap(),
            TheoryPresentation::monoid_actions(MonoidActions::cyclic(2), 2).unwrap(),
        ] {
            let ct = CommutativeTheory::new(t).unwrap();
            assert_eq!(tensor_sketchy(&ct), alloc::vec![], "{}", ct.theory().name());
        }
        let ct = CommutativeTheory::new(TheoryPresentation::monoid_actions(MonoidActions::left_zero(), 2).unwrap()).unwrap();
        let report = tensor_sketchy(&ct);
        assert!(report
            .iter()
            .any(|v| matches!(v, SketchyViolation::Monoidal(MonoidalViolation::Interchange { .. }))));
    }

    #[test]
    fn tensor_routes_agree_on_free_vector_spaces() {
        let ct = CommutativeTheory::new(TheoryPresentation::fq_modules(2, 3).unwrap()).unwrap();
        let t = ct.theory();
        for m in 0..=2 {
            for n in 0..=2 {
                let (a, _) = free(m, t);
                let (b, _) = free(n, t);
                let x = model_tensor(&a, &b, &ct, TensorRoute::Day, 16).unwrap();
                let y = model_tensor(&a, &b, &ct, TensorRoute::Congruence, 16).unwrap();
                assert_eq!(x.algebra.size(), 1 << (m * n));
                assert!(tensor_iso(&x, &y).is_some(), "{m} {n}");
            }
        }
        let (a, _) = free(2, t);
        let (b, _) = free(3, t);
        let y = model_tensor(&a, &b, &ct, TensorRoute::Congruence, 16).unwrap();
        assert_eq!(y.algebra.size(), 64);
    }

    #[test]
    fn tensor_unit_and_symmetry() {
        for t in [TheoryPresentation::fq_modules(2, 3).unwrap(), TheoryPresentation::pointed_sets(3).unwrap()] {
            let ct = CommutativeTheory::new(t).unwrap();
            let t = ct.theory();
            let (unit, g) = free(1, t);
            for k in 0..=2 {
                let (m, _) = free(k, t);
                let x = model_tensor(&m, &unit, &ct, TensorRoute::Congruence, 16).unwrap();
                let fm = FiniteAlgebra::from_model(&m, t).unwrap();
                let nu = unit.size(1);
                let seeds: Vec<(usize, usize)> = (0..m.size(1)).map(|a| (x.pair[a * nu + g] as usize, a)).collect();
                let h = x.algebra.extend_hom(&fm, &seeds);
                assert!(h.is_some() && x.algebra.size() == fm.size());
                let (other, _) = free(2, t);
                let ab = model_tensor(&m, &other, &ct, TensorRoute::Congruence, 16).unwrap();
                let ba = model_tensor(&other, &m, &ct, TensorRoute::Congruence, 16).unwrap();
                let (na, nb) = (m.size(1), other.size(1));
                let seeds: Vec<(usize, usize)> = (0..na * nb)
                    .map(|k| (ab.pair[k] as usize, ba.pair[(k % nb) * na + k / nb] as usize))
                    .collect();
                assert!(ab.algebra.extend_hom(&ba.algebra, &seeds).is_some());
            }
        }
    }

    #[test]
    fn internal_hom_of_vector_spaces() {
        let ct = CommutativeTheory::new(TheoryPresentation::fq_modules(2, 3).unwrap()).unwrap();
        let t = ct.theory();
        let (a, _) = free(2, t);
        let (b, _) = free(3, t);
        let h = model_hom(&a, &b, &ct).unwrap();
        assert!(h.is_model);
        assert_eq!(h.maps.len(), 64);
        assert_eq!(h.sizes, alloc::vec![1, 64, 64 * 64, 64 * 64 * 64]);
        let (unit, _) = free(1, t);
        let h = model_hom(&unit, &b, &ct).unwrap();
        assert_eq!(h.maps.len(), b.size(1));
    }

    #[test]
    fn currying_is_a_bijection() {
        let ct = CommutativeTheory::new(TheoryPresentation::fq_modules(2, 3).unwrap()).unwrap();
        let t = ct.theory();
        for (i, j, k) in [(1, 1, 1), (1, 2, 1), (2, 1, 2), (1, 1, 2)] {
            let (a, _) = free(i, t);
            let (b, _) = free(j, t);
            let (c, _) = free(k, t);
            let ab = model_tensor(&a, &b, &ct, TensorRoute::Congruence, 16).unwrap();
            let fc = FiniteAlgebra::from_model(&c, t).unwrap();
            let left = ab.algebra.homs(&fc);
            let bc = model_hom(&b, &c, &ct).unwrap();
            let hom_alg = bc.algebra.as_ref().unwrap();
            let fa = FiniteAlgebra::from_model(&a, t).unwrap();
            let right = fa.homs(hom_alg);
            assert_eq!(left.len(), right.len());
            assert_eq!(left.len(), 1 << (i * j * k));
            let mut seen = hashbrown::HashSet::new();
            for phi in &left {
                let psi = curry(phi, &ab, b.size(1), &bc).unwrap();
                assert!(fa.is_homomorphism(hom_alg, &psi));
                assert!(seen.insert(psi));
            }
        }
    }
}
