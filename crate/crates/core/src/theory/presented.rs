//! Finite algebras given by generators and relations `g = op_f(g_1, …, g_n)`.
//!
//! Generators are first split into independent ones and ones defined by a
//! relation from earlier generators, so every generator has a normal form
//! in the free algebra on the independent ones. Elements are then classes of
//! normal forms: operation tables are computed by substitution on class
//! witnesses, and classes are merged until the relations and the equations
//! of the theory hold on the tables.

use alloc::vec::Vec;

use hashbrown::HashMap;

use super::{FiniteAlgebra, TheoryPresentation};
use crate::dsu::UnionFind;
use crate::error::{precondition, Error, Result};
use crate::fincat::{Arr, NONE};

/// `lhs = op(args)` for an arrow `op: 1 → args.len()` of the theory.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Relation {
    pub lhs: usize,
    pub op: Arr,
    pub args: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PresentedAlgebra {
    pub algebra: FiniteAlgebra,
    /// The element named by each generator.
    pub generators: Vec<u32>,
    pub rounds: usize,
}

/// Most classes kept before giving up.
const MAX_CLASSES: usize = 1 << 12;

/// Whether the theory comes from a monad truncated high enough for its
/// free algebras to be the free models.
pub(crate) fn presentable(t: &TheoryPresentation) -> bool {
    match (t.monad(), t.finset_bound()) {
        (Some(m), Some(n)) => n >= 1 && m.equational_arity().is_some_and(|a| a <= n),
        _ => false,
    }
}

struct Classes<'a> {
    t: &'a TheoryPresentation,
    free: usize,
    uf: UnionFind,
    witness: Vec<u64>,
    of_nf: HashMap<u64, u32>,
}

impl Classes<'_> {
    fn class(&mut self, nf: u64) -> u32 {
        if let Some(&c) = self.of_nf.get(&nf) {
            return self.uf.find(c as usize) as u32;
        }
        let c = self.witness.len() as u32;
        self.witness.push(nf);
        self.uf.push();
        self.of_nf.insert(nf, c);
        c
    }

    fn bind(&self, f: Arr, n: usize, args: &[u64]) -> u64 {
        let cat = self.t.theory();
        let m = self.t.monad().expect("presentable");
        m.bind(cat.hom_index(f) as u64, n, self.free, args)
    }
}

fn power(base: usize, n: usize) -> usize {
    base.pow(n as u32)
}

/// Generators in an order where each is either independent or defined by a
/// relation from earlier ones.
pub(crate) struct Split {
    pub order: Vec<u32>,
    /// Index among the independent generators, or `NONE`.
    pub basic: Vec<u32>,
    /// The defining relation, or `NONE`.
    pub def: Vec<u32>,
    pub independent: u32,
}

pub(crate) fn split(generators: usize, relations: &[Relation]) -> Split {
    let mut basic = alloc::vec![NONE; generators];
    let mut def = alloc::vec![NONE; generators];
    let mut missing: Vec<u32> = relations.iter().map(|r| r.args.len() as u32).collect();
    let mut waiting: Vec<Vec<u32>> = alloc::vec![Vec::new(); generators];
    for (k, r) in relations.iter().enumerate() {
        for &a in &r.args {
            waiting[a].push(k as u32);
        }
    }
    let mut ready: Vec<u32> = (0..relations.len() as u32).filter(|&k| missing[k as usize] == 0).collect();
    let mut order: Vec<u32> = Vec::with_capacity(generators);
    let mut known = alloc::vec![false; generators];
    let mut next_basic = 0;
    let mut independent = 0u32;
    while order.len() < generators {
        let g = if let Some(k) = ready.pop() {
            let g = relations[k as usize].lhs;
            if known[g] {
                continue;
            }
            def[g] = k;
            g
        } else {
            while known[next_basic] {
                next_basic += 1;
            }
            basic[next_basic] = independent;
            independent += 1;
            next_basic
        };
        known[g] = true;
        order.push(g as u32);
        for &k in &waiting[g] {
            missing[k as usize] -= 1;
            if missing[k as usize] == 0 {
                ready.push(k);
            }
        }
    }
    Split { order, basic, def, independent }
}

/// Every assignment of the generators to `0..size` satisfying the relations,
/// where `op(f, args)` evaluates an operation in the target. Fails when the
/// search would visit more than `limit` partial assignments.
pub(crate) fn solve(
    generators: usize,
    relations: &[Relation],
    size: usize,
    limit: usize,
    op: &dyn Fn(Arr, &[usize]) -> usize,
) -> Result<Vec<Vec<u32>>> {
    let Split { order, basic, def, .. } = split(generators, relations);
    let mut pos = alloc::vec![0usize; generators];
    for (i, &g) in order.iter().enumerate() {
        pos[g as usize] = i;
    }
    // Each relation is checked once its last generator is assigned.
    let mut due: Vec<Vec<u32>> = alloc::vec![Vec::new(); generators];
    for (k, r) in relations.iter().enumerate() {
        let last = r.args.iter().chain(core::iter::once(&r.lhs)).map(|&a| pos[a]).max().unwrap_or(0);
        due[last].push(k as u32);
    }
    struct Search<'a> {
        order: &'a [u32],
        basic: &'a [u32],
        def: &'a [u32],
        due: &'a [Vec<u32>],
        relations: &'a [Relation],
        op: &'a dyn Fn(Arr, &[usize]) -> usize,
        size: usize,
        value: Vec<u32>,
        args: Vec<usize>,
        visits: usize,
        limit: usize,
        out: Vec<Vec<u32>>,
    }
    impl Search<'_> {
        fn holds(&mut self, i: usize) -> bool {
            for &k in &self.due[i] {
                let r = &self.relations[k as usize];
                self.args.clear();
                self.args.extend(r.args.iter().map(|&a| self.value[a] as usize));
                if (self.op)(r.op, &self.args) != self.value[r.lhs] as usize {
                    return false;
                }
            }
            true
        }
        fn run(&mut self, i: usize) -> bool {
            self.visits += 1;
            if self.visits > self.limit {
                return false;
            }
            if i == self.order.len() {
                self.out.push(self.value.clone());
                return true;
            }
            let g = self.order[i] as usize;
            if self.basic[g] != NONE {
                for v in 0..self.size {
                    self.value[g] = v as u32;
                    if self.holds(i) && !self.run(i + 1) {
                        return false;
                    }
                }
            } else {
                let r = &self.relations[self.def[g] as usize];
                self.args.clear();
                self.args.extend(r.args.iter().map(|&a| self.value[a] as usize));
                self.value[g] = (self.op)(r.op, &self.args) as u32;
                if self.holds(i) {
                    return self.run(i + 1);
                }
            }
            true
        }
    }
    let mut search = Search {
        order: &order,
        basic: &basic,
        def: &def,
        due: &due,
        relations,
        op,
        size,
        value: alloc::vec![0; generators],
        args: Vec::new(),
        visits: 0,
        limit,
        out: Vec::new(),
    };
    if search.run(0) {
        Ok(search.out)
    } else {
        Err(precondition("relation search too large"))
    }
}

impl PresentedAlgebra {
    pub fn new(
        t: &TheoryPresentation,
        generators: usize,
        relations: &[Relation],
        bound: usize,
    ) -> Result<Self> {
        if !presentable(t) {
            return Err(precondition("presentations need a monad truncated at its equational arity"));
        }
        let cat = t.theory().clone();
        let monad = t.monad().expect("presentable").clone();
        let nmax = t.finset_bound().expect("presentable");
        for r in relations {
            let n = r.args.len();
            if r.op >= cat.arrow_count()
                || cat.src(r.op) != 1
                || cat.dst(r.op) != n
                || r.lhs >= generators
                || r.args.iter().any(|&a| a >= generators)
            {
                return Err(precondition("relation does not fit the theory"));
            }
        }

        let Split { order, basic, def, independent } = split(generators, relations);
        let free = independent as usize;
        if monad.free_size(free).is_none() {
            return Err(precondition("too many independent generators"));
        }
        let mut cl = Classes {
            t,
            free,
            uf: UnionFind::new(0),
            witness: Vec::new(),
            of_nf: HashMap::new(),
        };
        let mut nf = alloc::vec![0u64; generators];
        for &g in &order {
            let g = g as usize;
            nf[g] = if basic[g] != NONE {
                monad.unit(free, basic[g] as usize)
            } else {
                let r = &relations[def[g] as usize];
                let args: Vec<u64> = r.args.iter().map(|&a| nf[a]).collect();
                cl.bind(r.op, args.len(), &args)
            };
        }
        let gen_class: Vec<u32> = nf.iter().map(|&x| cl.class(x)).collect();

        let ops: Vec<(Arr, usize)> = (0..=nmax)
            .flat_map(|n| cat.hom(1, n).iter().map(move |&f| (f as usize, n)))
            .collect();
        let mut op_pos = alloc::vec![NONE; cat.arrow_count()];
        for (k, &(f, _)) in ops.iter().enumerate() {
            op_pos[f] = k as u32;
        }
        let incl: Vec<Vec<usize>> = (0..=nmax).map(|n| (0..n).map(|i| t.inclusion(n, i)).collect()).collect();
        let gamma: Vec<usize> = t.generating_arrows().filter(|&g| cat.src(g) >= 1).collect();

        let mut rounds = 0;
        loop {
            rounds += 1;
            if rounds > bound.max(1) || cl.witness.len() > MAX_CLASSES {
                return Err(Error::NotConverged {
                    bound,
                    elements: cl.witness.len(),
                });
            }
            let roots: Vec<u32> = (0..cl.witness.len()).filter(|&c| cl.uf.find(c) == c).map(|c| c as u32).collect();
            let q = roots.len();
            let mut pos = alloc::vec![NONE; cl.witness.len()];
            for (i, &r) in roots.iter().enumerate() {
                pos[r as usize] = i as u32;
            }
            let before = cl.witness.len();
            let mut tables: Vec<Vec<u32>> = Vec::with_capacity(ops.len());
            let mut args = Vec::new();
            for &(f, n) in &ops {
                let len = power(q, n);
                let mut table = Vec::with_capacity(len);
                for code in 0..len {
                    args.clear();
                    let mut c = code;
                    for _ in 0..n {
                        args.push(cl.witness[roots[c % q] as usize]);
                        c /= q;
                    }
                    let x = cl.bind(f, n, &args);
                    table.push(cl.class(x));
                }
                tables.push(table);
                if cl.witness.len() > MAX_CLASSES {
                    break;
                }
            }
            if cl.witness.len() > MAX_CLASSES {
                continue;
            }
            let created = cl.witness.len() > before;

            // Entry of `op` at a tuple of classes, if all are current roots.
            let lookup = |cl: &mut Classes, k: usize, tuple: &[u32]| -> Option<u32> {
                let mut code = 0;
                for &x in tuple.iter().rev() {
                    let p = pos.get(cl.uf.find(x as usize)).copied().unwrap_or(NONE);
                    if p == NONE {
                        return None;
                    }
                    code = code * q + p as usize;
                }
                Some(tables[k][code])
            };

            let mut merged = false;
            for r in relations {
                let tuple: Vec<u32> = r.args.iter().map(|&a| gen_class[a]).collect();
                if let Some(x) = lookup(&mut cl, op_pos[r.op] as usize, &tuple) {
                    merged |= cl.uf.union(x as usize, gen_class[r.lhs] as usize);
                }
            }
            let mut inner = Vec::new();
            for &g in &gamma {
                let (n, p) = (cat.src(g), cat.dst(g));
                let comps: Vec<usize> = incl[n].iter().map(|&u| op_pos[cat.compose(g, u)] as usize).collect();
                for &f in cat.hom(1, n) {
                    let f = f as usize;
                    let outer = op_pos[cat.compose(g, f)] as usize;
                    let fk = op_pos[f] as usize;
                    for code in 0..power(q, p) {
                        inner.clear();
                        inner.extend(comps.iter().map(|&k| tables[k][code]));
                        if let Some(y) = lookup(&mut cl, fk, &inner) {
                            merged |= cl.uf.union(tables[outer][code] as usize, y as usize);
                        }
                    }
                }
            }
            if created || merged {
                continue;
            }

            // Stable: keep the subalgebra generated by the generators.
            let mut keep = alloc::vec![NONE; q];
            let mut kept: Vec<u32> = Vec::new();
            let mut frontier: Vec<u32> = gen_class.iter().map(|&c| pos[cl.uf.find(c as usize)]).collect();
            for (k, &(_, n)) in ops.iter().enumerate() {
                if n == 0 {
                    frontier.push(tables[k][0]);
                }
            }
            frontier = frontier.into_iter().map(|c| pos[cl.uf.find(c as usize)]).collect();
            loop {
                for c in frontier.drain(..) {
                    if keep[c as usize] == NONE {
                        keep[c as usize] = kept.len() as u32;
                        kept.push(c);
                    }
                }
                let size = kept.len();
                for (k, &(_, n)) in ops.iter().enumerate() {
                    if n == 0 {
                        continue;
                    }
                    for code in 0..power(size, n) {
                        let mut c = code;
                        let mut idx = 0;
                        let mut scale = 1;
                        for _ in 0..n {
                            idx += kept[c % size] as usize * scale;
                            scale *= q;
                            c /= size;
                        }
                        let r = pos[cl.uf.find(tables[k][idx] as usize)];
                        if keep[r as usize] == NONE {
                            frontier.push(r);
                        }
                    }
                }
                if frontier.is_empty() {
                    break;
                }
            }
            let size = kept.len();
            let algebra = FiniteAlgebra::from_fn(t, size, |f, a| {
                let idx = a.iter().rev().fold(0, |acc, &x| acc * q + kept[x] as usize);
                let r = pos[cl.uf.find(tables[op_pos[f] as usize][idx] as usize)];
                keep[r as usize] as usize
            })?;
            let generators = gen_class
                .iter()
                .map(|&c| keep[pos[cl.uf.find(c as usize)] as usize])
                .collect();
            return Ok(PresentedAlgebra {
                algebra,
                generators,
                rounds,
            });
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn free_and_quotiented_vector_spaces() {
        let t = TheoryPresentation::fq_modules(2, 3).unwrap();
        let cat = t.theory();
        for k in 0..=5 {
            let p = PresentedAlgebra::new(&t, k, &[], 16).unwrap();
            assert_eq!(p.algebra.size(), 1 << k);
            assert!(p.algebra.equation_failures(&t, false).is_empty());
        }
        // g2 = g0 + g1 and g3 = g2 + g0 leave a plane.
        let plus = cat.hom(1, 2)[3] as usize;
        let rels = [
            Relation { lhs: 2, op: plus, args: alloc::vec![0, 1] },
            Relation { lhs: 3, op: plus, args: alloc::vec![2, 0] },
        ];
        let p = PresentedAlgebra::new(&t, 4, &rels, 16).unwrap();
        assert_eq!(p.algebra.size(), 4);
        assert_eq!(p.generators[3], p.generators[1]);
        // g0 = g0 + g1 forces g1 = 0.
        let rels = [Relation { lhs: 0, op: plus, args: alloc::vec![0, 1] }];
        let p = PresentedAlgebra::new(&t, 2, &rels, 16).unwrap();
        assert_eq!(p.algebra.size(), 2);
    }

    #[test]
    fn needs_a_faithful_truncation() {
        let t = TheoryPresentation::fq_modules(2, 2).unwrap();
        assert!(PresentedAlgebra::new(&t, 1, &[], 4).is_err());
    }
}
