//! Finite algebras: the value of a model at `1` with one table per
//! operation `1 → n`. Tuples `(a_0, …, a_{n-1})` are coded `Σ a_i |A|^i`.

use alloc::vec::Vec;

use super::{Model, TheoryPresentation};
use crate::dsu::UnionFind;
use crate::error::{precondition, Result};
use crate::fincat::{Arr, NatTransformation, Presheaf, PresheafLike, NONE};

/// Largest operation table.
const MAX_TABLE: usize = 1 << 24;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteAlgebra {
    size: usize,
    arrow: Vec<u32>,
    arity: Vec<u32>,
    op_of: Vec<u32>,
    tables: Vec<Vec<u32>>,
}

/// An equation of the theory that the tables violate, with a witness tuple.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EquationFailure {
    /// `τ(ι_i)` does not act as the `i`-th projection of `A^n`.
    Projection { arity: usize, index: usize, tuple: usize },
    /// `op_{g∘f}(a) != op_f(M(g)(a))` for an operation `f: 1 → n` and an
    /// arrow `g: n → p`.
    Composition { outer: Arr, op: Arr, tuple: usize },
}

/// The quotient by a congruence, with the quotient map.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Quotient {
    pub algebra: FiniteAlgebra,
    pub map: Vec<u32>,
}

fn table_len(size: usize, n: usize) -> Result<usize> {
    size.checked_pow(n as u32)
        .filter(|&l| l <= MAX_TABLE)
        .ok_or_else(|| precondition("operation table too large"))
}

pub(crate) fn decode_into(mut code: usize, size: usize, out: &mut [usize]) {
    for a in out.iter_mut() {
        *a = code % size;
        code /= size;
    }
}

pub(crate) fn encode(args: &[usize], size: usize) -> usize {
    args.iter().rev().fold(0, |acc, &a| acc * size + a)
}

/// Elements of `M(n)` against tuples in `M(1)^n`.
pub(crate) struct Coords {
    pub size: usize,
    /// `elem[n][code]`.
    pub elem: Vec<Vec<u32>>,
    /// `code[n][element]`.
    pub code: Vec<Vec<u32>>,
}

pub(crate) fn coords<P: PresheafLike + ?Sized>(m: &P, t: &TheoryPresentation) -> Result<Coords> {
    let bound = t.require_finset()?;
    let size = m.size(1);
    let mut elem = Vec::with_capacity(bound + 1);
    let mut code = Vec::with_capacity(bound + 1);
    for n in 0..=bound {
        let len = table_len(size, n)?;
        if m.size(n) != len {
            return Err(precondition("not a model: M(n) is not M(1)^n"));
        }
        let incl: Vec<usize> = (0..n).map(|i| t.inclusion(n, i)).collect();
        let mut e_of = alloc::vec![NONE; len];
        let mut c_of = Vec::with_capacity(len);
        for e in 0..len {
            let c = incl.iter().rev().fold(0, |acc, &u| acc * size + m.act(u, e));
            if e_of[c] != NONE {
                return Err(precondition("not a model: M(n) is not M(1)^n"));
            }
            e_of[c] = e as u32;
            c_of.push(c as u32);
        }
        elem.push(e_of);
        code.push(c_of);
    }
    Ok(Coords { size, elem, code })
}

/// A carrier map `h: A → B` as the model map with components `h^n`.
pub(crate) fn lift_hom(h: &[u32], a: &Model, b: &Model, t: &TheoryPresentation) -> NatTransformation {
    let ca = coords(a, t).expect("a model");
    let cb = coords(b, t).expect("a model");
    let mut args = Vec::new();
    let components = ca
        .code
        .iter()
        .enumerate()
        .map(|(n, codes)| {
            args.resize(n, 0);
            codes
                .iter()
                .map(|&c| {
                    decode_into(c as usize, ca.size, &mut args);
                    for x in args.iter_mut() {
                        *x = h[*x] as usize;
                    }
                    cb.elem[n][encode(&args, cb.size)]
                })
                .collect()
        })
        .collect();
    NatTransformation { components }
}

impl FiniteAlgebra {
    /// Tables from a function `(op, args) ↦ result` for every arrow `1 → n`.
    pub fn from_fn(
        t: &TheoryPresentation,
        size: usize,
        mut op: impl FnMut(Arr, &[usize]) -> usize,
    ) -> Result<Self> {
        let bound = t.require_finset()?;
        let cat = t.theory();
        let mut alg = FiniteAlgebra {
            size,
            arrow: Vec::new(),
            arity: Vec::new(),
            op_of: alloc::vec![NONE; cat.arrow_count()],
            tables: Vec::new(),
        };
        let mut args = Vec::new();
        for n in 0..=bound {
            let len = table_len(size, n)?;
            args.resize(n, 0);
            for &f in cat.hom(1, n) {
                alg.op_of[f as usize] = alg.arrow.len() as u32;
                alg.arrow.push(f);
                alg.arity.push(n as u32);
                let mut table = Vec::with_capacity(len);
                for code in 0..len {
                    decode_into(code, size, &mut args);
                    let r = op(f as usize, &args);
                    if r >= size {
                        return Err(precondition("operation result outside the carrier"));
                    }
                    table.push(r as u32);
                }
                alg.tables.push(table);
            }
        }
        Ok(alg)
    }

    /// The carrier `M(1)` with `op_f(a) = M(f)(a)` under `M(n) ≅ M(1)^n`.
    pub fn from_model<P: PresheafLike + ?Sized>(m: &P, t: &TheoryPresentation) -> Result<Self> {
        let c = coords(m, t)?;
        Self::from_fn(t, c.size, |f, args| {
            let n = args.len();
            m.act(f, c.elem[n][encode(args, c.size)] as usize)
        })
    }

    /// The free algebra on `k` generators, as the free model on `m ↦ k^m`.
    pub fn free(k: usize, t: &TheoryPresentation, bound: usize) -> Result<Self> {
        let x = crate::site::power_presheaf(t.site().cat(), k);
        let f = super::free_model(&x, t, bound)?;
        Self::from_model(&f.model, t)
    }

    /// The model `n ↦ A^n`; a model when the equations hold.
    pub fn to_presheaf(&self, t: &TheoryPresentation) -> Presheaf {
        let bound = t.finset_bound().unwrap_or(0);
        let cat = t.theory().clone();
        let size = self.size;
        let sizes = cat.objects().map(|n| size.pow(n as u32)).collect();
        let comps: Vec<Vec<u32>> = cat
            .arrows()
            .map(|g| {
                (0..cat.src(g))
                    .map(|i| self.op_of[cat.compose(g, t.inclusion(cat.src(g), i))])
                    .collect()
            })
            .collect();
        let mut args = alloc::vec![0; bound];
        let mut out = alloc::vec![0; bound];
        Presheaf::from_fn(cat.clone(), sizes, |g, x| {
            let (m, n) = (cat.src(g), cat.dst(g));
            decode_into(x, size, &mut args[..n]);
            for (o, &op) in out[..m].iter_mut().zip(&comps[g]) {
                *o = self.tables[op as usize][encode(&args[..n], size)] as usize;
            }
            encode(&out[..m], size)
        })
    }

    pub fn to_model(&self, t: &TheoryPresentation) -> Result<Model> {
        if !self.equation_failures(t, false).is_empty() {
            return Err(precondition("tables violate the theory"));
        }
        Model::new(self.to_presheaf(t), t)
    }

    pub fn size(&self) -> usize {
        self.size
    }
    /// The operations as `(arrow, arity)`.
    pub fn operations(&self) -> impl Iterator<Item = (Arr, usize)> + '_ {
        self.arrow.iter().zip(&self.arity).map(|(&f, &n)| (f as usize, n as usize))
    }
    pub fn table(&self, f: Arr) -> &[u32] {
        &self.tables[self.op_of[f] as usize]
    }
    pub fn op(&self, f: Arr, args: &[usize]) -> usize {
        self.table(f)[encode(args, self.size)] as usize
    }

    /// Equations failing on these tables. With `exhaustive` every arrow
    /// `g` is tried; otherwise only the generating arrows, which suffices.
    pub fn equation_failures(&self, t: &TheoryPresentation, exhaustive: bool) -> Vec<EquationFailure> {
        let cat = t.theory();
        let size = self.size;
        let mut out = Vec::new();
        let bound = match t.finset_bound() {
            Some(b) => b,
            None => return out,
        };
        let mut args = alloc::vec![0; bound];
        for n in 0..=bound {
            let len = size.pow(n as u32);
            for i in 0..n {
                let table = self.table(t.inclusion(n, i));
                if let Some(x) = (0..len).find(|&x| {
                    decode_into(x, size, &mut args[..n]);
                    table[x] as usize != args[i]
                }) {
                    out.push(EquationFailure::Projection {
                        arity: n,
                        index: i,
                        tuple: x,
                    });
                }
            }
        }
        let outer: Vec<usize> = if exhaustive {
            cat.arrows().collect()
        } else {
            t.generating_arrows().collect()
        };
        let mut inner = alloc::vec![0; bound];
        for g in outer {
            let (n, p) = (cat.src(g), cat.dst(g));
            let len = size.pow(p as u32);
            let comps: Vec<&[u32]> = (0..n).map(|i| self.table(cat.compose(g, t.inclusion(n, i)))).collect();
            for &f in cat.hom(1, n) {
                let f = f as usize;
                let lhs = self.table(cat.compose(g, f));
                let rhs = self.table(f);
                for x in 0..len {
                    for (v, c) in inner[..n].iter_mut().zip(&comps) {
                        *v = c[x] as usize;
                    }
                    if lhs[x] != rhs[encode(&inner[..n], size)] {
                        out.push(EquationFailure::Composition {
                            outer: g,
                            op: f,
                            tuple: x,
                        });
                        break;
                    }
                }
            }
        }
        out
    }

    /// Whether `h` commutes with every operation table.
    pub fn is_homomorphism(&self, other: &FiniteAlgebra, h: &[u32]) -> bool {
        self.arrow == other.arrow
            && h.len() == self.size
            && h.iter().all(|&y| (y as usize) < other.size)
            && (0..self.arrow.len()).all(|k| self.commutes(other, h, k))
    }

    fn commutes(&self, other: &FiniteAlgebra, h: &[u32], k: usize) -> bool {
        let n = self.arity[k] as usize;
        let mut args = alloc::vec![0; n];
        let (ta, tb) = (&self.tables[k], &other.tables[k]);
        (0..ta.len()).all(|x| {
            decode_into(x, self.size, &mut args);
            for a in args.iter_mut() {
                *a = h[*a] as usize;
            }
            h[ta[x] as usize] == tb[encode(&args, other.size)]
        })
    }

    /// A greedy generating set, with steps `(op, args, result)` that build
    /// every other element from it.
    pub fn generators(&self) -> (Vec<usize>, Vec<(usize, Vec<u32>, u32)>) {
        let mut reached = alloc::vec![false; self.size];
        let mut order: Vec<usize> = Vec::new();
        let mut gens = Vec::new();
        let mut steps = Vec::new();
        let mut args = Vec::new();
        let mut idx = Vec::new();
        loop {
            // Close under every operation until nothing new appears.
            let mut done = 0;
            loop {
                let len = order.len();
                for k in 0..self.arrow.len() {
                    let n = self.arity[k] as usize;
                    let count = match len.checked_pow(n as u32) {
                        Some(c) => c,
                        None => continue,
                    };
                    idx.resize(n, 0);
                    args.resize(n, 0);
                    for code in 0..count {
                        decode_into(code, len.max(1), &mut idx);
                        if n > 0 && idx.iter().all(|&i| i < done) {
                            continue;
                        }
                        if n == 0 && done > 0 {
                            continue;
                        }
                        for (a, &i) in args.iter_mut().zip(&idx) {
                            *a = order[i];
                        }
                        let r = self.tables[k][encode(&args, self.size)] as usize;
                        if !reached[r] {
                            reached[r] = true;
                            order.push(r);
                            steps.push((k, args.iter().map(|&a| a as u32).collect(), r as u32));
                        }
                    }
                }
                if order.len() == len {
                    break;
                }
                done = len;
            }
            match reached.iter().position(|&r| !r) {
                Some(g) => {
                    reached[g] = true;
                    order.push(g);
                    gens.push(g);
                }
                None => break,
            }
        }
        (gens, steps)
    }

    /// All homomorphisms to `other`, determined by their values on
    /// [`FiniteAlgebra::generators`]. Both algebras must satisfy the theory.
    pub fn homs(&self, other: &FiniteAlgebra) -> Vec<Vec<u32>> {
        let mut out = Vec::new();
        if self.arrow != other.arrow {
            return out;
        }
        let (gens, steps) = self.generators();
        let mut h = alloc::vec![NONE; self.size];
        let mut args = Vec::new();
        let k = gens.len();
        let total = match other.size.checked_pow(k as u32) {
            Some(t) => t,
            None => return out,
        };
        // Steps may be recorded before a generator they do not use, so the
        // generators are fixed first and the steps replayed in order.
        'next: for code in 0..total {
            let mut c = code;
            for &g in &gens {
                h[g] = (c % other.size) as u32;
                c /= other.size.max(1);
            }
            for (op, a, r) in &steps {
                args.clear();
                for &x in a {
                    let y = h[x as usize];
                    if y == NONE {
                        continue 'next;
                    }
                    args.push(y as usize);
                }
                h[*r as usize] = other.tables[*op][encode(&args, other.size)];
            }
            if h.iter().any(|&y| y == NONE) {
                continue;
            }
            if (0..self.arrow.len()).all(|k| self.commutes(other, &h, k)) {
                out.push(h.clone());
            }
        }
        out
    }

    /// The homomorphism to `other` with the given values on `seeds`, if the
    /// seeds generate this algebra and the values extend consistently.
    pub fn extend_hom(&self, other: &FiniteAlgebra, seeds: &[(usize, usize)]) -> Option<Vec<u32>> {
        if self.arrow != other.arrow {
            return None;
        }
        let mut h = alloc::vec![NONE; self.size];
        let mut order = Vec::new();
        for &(x, y) in seeds {
            if y >= other.size {
                return None;
            }
            if h[x] == NONE {
                h[x] = y as u32;
                order.push(x);
            } else if h[x] as usize != y {
                return None;
            }
        }
        let mut args = Vec::new();
        let mut image = Vec::new();
        let mut idx = Vec::new();
        let mut done = 0;
        let mut first = true;
        loop {
            let len = order.len();
            for k in 0..self.arrow.len() {
                let n = self.arity[k] as usize;
                if n == 0 && !first {
                    continue;
                }
                idx.resize(n, 0);
                args.resize(n, 0);
                image.resize(n, 0);
                for code in 0..len.checked_pow(n as u32)? {
                    decode_into(code, len.max(1), &mut idx);
                    if n > 0 && idx.iter().all(|&i| i < done) {
                        continue;
                    }
                    for ((a, b), &i) in args.iter_mut().zip(image.iter_mut()).zip(&idx) {
                        *a = order[i];
                        *b = h[order[i]] as usize;
                    }
                    let r = self.tables[k][encode(&args, self.size)] as usize;
                    let v = other.tables[k][encode(&image, other.size)];
                    if h[r] == NONE {
                        h[r] = v;
                        order.push(r);
                    } else if h[r] != v {
                        return None;
                    }
                }
            }
            first = false;
            if order.len() == len {
                break;
            }
            done = len;
        }
        (order.len() == self.size && self.is_homomorphism(other, &h)).then_some(h)
    }

    /// The smallest congruence containing `pairs`, and the quotient.
    pub fn congruence_quotient(&self, pairs: &[(usize, usize)]) -> Quotient {
        let mut uf = UnionFind::new(self.size);
        for &(a, b) in pairs {
            uf.union(a, b);
        }
        let mut args = Vec::new();
        loop {
            let mut changed = false;
            for k in 0..self.arrow.len() {
                let n = self.arity[k] as usize;
                if n == 0 {
                    continue;
                }
                args.resize(n, 0);
                let table = &self.tables[k];
                let mut first = alloc::vec![NONE; table.len()];
                for x in 0..table.len() {
                    decode_into(x, self.size, &mut args);
                    for a in args.iter_mut() {
                        *a = uf.find(*a);
                    }
                    let key = encode(&args, self.size);
                    if first[key] == NONE {
                        first[key] = table[x];
                    } else {
                        changed |= uf.union(first[key] as usize, table[x] as usize);
                    }
                }
            }
            if !changed {
                break;
            }
        }
        let (map, classes) = uf.classes();
        let mut rep = alloc::vec![0usize; classes];
        for x in (0..self.size).rev() {
            rep[map[x] as usize] = x;
        }
        let mut tables = Vec::with_capacity(self.tables.len());
        for k in 0..self.arrow.len() {
            let n = self.arity[k] as usize;
            args.resize(n, 0);
            let len = classes.pow(n as u32);
            tables.push(
                (0..len)
                    .map(|x| {
                        decode_into(x, classes, &mut args);
                        for a in args.iter_mut() {
                            *a = rep[*a];
                        }
                        map[self.tables[k][encode(&args, self.size)] as usize]
                    })
                    .collect(),
            );
        }
        Quotient {
            algebra: FiniteAlgebra {
                size: classes,
                arrow: self.arrow.clone(),
                arity: self.arity.clone(),
                op_of: self.op_of.clone(),
                tables,
            },
            map,
        }
    }

    /// The product algebra; `(x, y)` is `x * |B| + y`.
    pub fn product(&self, other: &FiniteAlgebra) -> Result<FiniteAlgebra> {
        if self.arrow != other.arrow {
            return Err(crate::error::Error::CategoryMismatch);
        }
        let size = self.size * other.size;
        let mut tables = Vec::with_capacity(self.tables.len());
        let (mut args, mut xa, mut xb) = (Vec::new(), Vec::new(), Vec::new());
        for k in 0..self.arrow.len() {
            let n = self.arity[k] as usize;
            let len = table_len(size, n)?;
            args.resize(n, 0);
            xa.resize(n, 0);
            xb.resize(n, 0);
            tables.push(
                (0..len)
                    .map(|x| {
                        decode_into(x, size, &mut args);
                        for i in 0..n {
                            xa[i] = args[i] / other.size;
                            xb[i] = args[i] % other.size;
                        }
                        let a = self.tables[k][encode(&xa, self.size)];
                        let b = other.tables[k][encode(&xb, other.size)];
                        a * other.size as u32 + b
                    })
                    .collect(),
            );
        }
        Ok(FiniteAlgebra {
            size,
            arrow: self.arrow.clone(),
            arity: self.arity.clone(),
            op_of: self.op_of.clone(),
            tables,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::find_iso;

    fn f2(n: usize) -> TheoryPresentation {
        TheoryPresentation::fq_modules(2, n).unwrap()
    }

    #[test]
    fn free_algebras_have_power_carriers() {
        let t = f2(3);
        for k in 0..=4 {
            let a = FiniteAlgebra::free(k, &t, 8).unwrap();
            assert_eq!(a.size(), 1 << k);
            assert!(a.equation_failures(&t, true).is_empty());
            assert_eq!(a.generators().0.len(), k);
        }
    }

    #[test]
    fn binary_truncation_misses_associativity() {
        // Without ternary operations the free algebra on three generators
        // keeps growing.
        let t = f2(2);
        let r = FiniteAlgebra::free(3, &t, 3);
        assert!(matches!(r, Err(crate::Error::NotConverged { .. })));
    }

    #[test]
    fn model_round_trip() {
        let t = f2(2);
        let y = Presheaf::representable(t.theory().clone(), 2);
        let a = FiniteAlgebra::from_model(&y, &t).unwrap();
        assert_eq!(a.size(), 4);
        let back = a.to_model(&t).unwrap();
        assert!(find_iso(&y, &back).is_some());
        assert_eq!(FiniteAlgebra::from_model(&back, &t).unwrap(), a);
    }

    #[test]
    fn plane_modulo_two_generators() {
        let t = f2(2);
        let plane = FiniteAlgebra::free(2, &t, 8).unwrap();
        let (gens, _) = plane.generators();
        let q = plane.congruence_quotient(&[(gens[0], gens[1])]);
        assert_eq!(q.algebra.size(), 2);
        assert!(plane.is_homomorphism(&q.algebra, &q.map));
        assert!(q.algebra.equation_failures(&t, true).is_empty());
        let same = plane.congruence_quotient(&[]);
        assert_eq!(same.algebra, plane);
    }

    #[test]
    fn hom_counts_are_linear_maps() {
        let t = f2(2);
        let a = FiniteAlgebra::free(2, &t, 8).unwrap();
        let b = FiniteAlgebra::free(1, &t, 8).unwrap();
        assert_eq!(a.homs(&b).len(), 4);
        assert_eq!(b.homs(&a).len(), 4);
        assert_eq!(a.homs(&a).len(), 16);
        // Replace addition by multiplication on the line.
        let plus = t.theory().hom(1, 2)[3] as usize;
        let broken = FiniteAlgebra::from_fn(&t, 2, |f, args| {
            if f == plus {
                args[0] & args[1]
            } else {
                b.op(f, args)
            }
        })
        .unwrap();
        assert!(!broken.equation_failures(&t, false).is_empty());
    }
}
