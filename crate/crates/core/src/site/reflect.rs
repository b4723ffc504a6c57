//! Bounded reflection of a presheaf into the presheaves satisfying the sheaf
//! condition for a family of covers.
//!
//! Elements are terms: original elements, glued matching families, and formal
//! restrictions of glued elements. A union-find over terms carries the
//! equations. Each round materializes all restrictions, closes the
//! equivalence under well-definedness, functoriality and separation, and then
//! glues every matching family that has no amalgamation.
//!
//! Functoriality is only imposed on restrictions that land in objects without
//! a designated decomposition. This suffices once separation holds: elements
//! of a decomposed object are determined by their restrictions to strictly
//! smaller pieces, so the equation at any object follows by induction.

use alloc::sync::Arc;
use alloc::vec::Vec;
use core::ops::ControlFlow;

use hashbrown::HashMap;

use super::{for_each_matching_family, Span};
use crate::dsu::UnionFind;
use crate::error::{Error, Result};
use crate::fincat::{FinCategory, NatTransformation, Ob, Presheaf, PresheafLike, NONE};

/// Covers, spans and decompositions on the category being reflected in.
#[derive(Debug, Clone)]
pub(crate) struct ReflectionShape {
    cat: Arc<FinCategory>,
    covers: Vec<(Ob, Vec<usize>)>,
    spans: Vec<Vec<Span>>,
    dec: Vec<Option<u32>>,
    /// `fact[k][into_index(g)]` is the first `(leg, v)` with `g = u_leg ∘ v`.
    fact: Vec<Vec<(u32, u32)>>,
}

impl ReflectionShape {
    pub(crate) fn new(
        cat: Arc<FinCategory>,
        covers: Vec<(Ob, Vec<usize>)>,
        spans: Vec<Vec<Span>>,
        dec: Vec<Option<u32>>,
    ) -> Self {
        let fact = covers
            .iter()
            .map(|(apex, legs)| {
                let mut t = alloc::vec![(NONE, NONE); cat.arrows_into(*apex).len()];
                for (i, &u) in legs.iter().enumerate() {
                    for &v in cat.arrows_into(cat.src(u)) {
                        let g = cat.compose(u, v as usize);
                        let slot = &mut t[cat.into_index(g)];
                        if slot.0 == NONE {
                            *slot = (i as u32, v);
                        }
                    }
                }
                t
            })
            .collect();
        ReflectionShape {
            cat,
            covers,
            spans,
            dec,
            fact,
        }
    }
}

#[derive(Debug, Clone)]
pub(crate) struct Reflection {
    pub presheaf: Presheaf,
    pub unit: NatTransformation,
    pub rounds: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum Term {
    Orig,
    Glued(u32, Vec<u32>),
    Op(u32, u32),
}

/// Hard cap on generated terms; beyond it the instance is not desk scale.
const MAX_TERMS: usize = 4_000_000;

struct Engine<'a, P: PresheafLike + ?Sized> {
    shape: &'a ReflectionShape,
    p: &'a P,
    orig_base: Vec<usize>,
    ob: Vec<u32>,
    term: Vec<Term>,
    restr: Vec<Vec<u32>>,
    uf: UnionFind,
    glued: HashMap<(u32, Vec<u32>), u32>,
    ops: HashMap<(u32, u32), u32>,
    /// Terms whose restriction tables are complete.
    done: usize,
}

impl<'a, P: PresheafLike + ?Sized> Engine<'a, P> {
    fn new(shape: &'a ReflectionShape, p: &'a P) -> Self {
        let cat = &*shape.cat;
        let mut orig_base = Vec::new();
        let mut ob = Vec::new();
        let mut term = Vec::new();
        let mut restr = Vec::new();
        for c in cat.objects() {
            orig_base.push(ob.len());
            for _ in 0..p.size(c) {
                ob.push(c as u32);
                term.push(Term::Orig);
                restr.push(alloc::vec![NONE; cat.arrows_into(c).len()]);
            }
        }
        let n = ob.len();
        Engine {
            shape,
            p,
            orig_base,
            ob,
            term,
            restr,
            uf: UnionFind::new(n),
            glued: HashMap::new(),
            ops: HashMap::new(),
            done: 0,
        }
    }

    fn push(&mut self, c: Ob, t: Term) -> Result<u32> {
        if self.ob.len() >= MAX_TERMS {
            return Err(Error::NotConverged {
                bound: 0,
                elements: self.ob.len(),
            });
        }
        let id = self.ob.len() as u32;
        self.ob.push(c as u32);
        self.term.push(t);
        self.restr
            .push(alloc::vec![NONE; self.shape.cat.arrows_into(c).len()]);
        self.uf.push();
        Ok(id)
    }

    fn glue(&mut self, k: u32, comps: Vec<u32>) -> Result<u32> {
        let key = (k, comps);
        if let Some(&e) = self.glued.get(&key) {
            return Ok(e);
        }
        let apex = self.shape.covers[k as usize].0;
        let e = self.push(apex, Term::Glued(k, key.1.clone()))?;
        self.glued.insert(key, e);
        Ok(e)
    }

    /// Restriction of term `e` along `g`, memoized.
    fn restrict(&mut self, e: u32, g: usize) -> Result<u32> {
        let cat = &*self.shape.cat;
        let gi = cat.into_index(g);
        let cached = self.restr[e as usize][gi];
        if cached != NONE {
            return Ok(cached);
        }
        let d = cat.src(g);
        let r = if cat.is_identity(g) {
            e
        } else {
            match self.term[e as usize].clone() {
                Term::Orig => {
                    let c = self.ob[e as usize] as usize;
                    let x = e as usize - self.orig_base[c];
                    (self.orig_base[d] + self.p.act(g, x)) as u32
                }
                Term::Op(base, h) => {
                    let hg = cat.compose(h as usize, g);
                    self.restrict(base, hg)?
                }
                Term::Glued(k, comps) => {
                    let (i, v) = self.shape.fact[k as usize][gi];
                    if i != NONE {
                        self.restrict(comps[i as usize], v as usize)?
                    } else if let Some(dk) = self.shape.dec[d] {
                        let legs = self.shape.covers[dk as usize].1.clone();
                        let mut parts = Vec::with_capacity(legs.len());
                        for u in legs {
                            let gu = cat.compose(g, u);
                            let x = self.restrict(e, gu)?;
                            parts.push(self.uf.find(x as usize) as u32);
                        }
                        self.glue(dk, parts)?
                    } else if let Some(&x) = self.ops.get(&(e, g as u32)) {
                        x
                    } else {
                        let x = self.push(d, Term::Op(e, g as u32))?;
                        self.ops.insert((e, g as u32), x);
                        x
                    }
                }
            }
        };
        self.restr[e as usize][gi] = r;
        Ok(r)
    }

    /// Fills the restriction tables of every term present at the call.
    /// Terms found equal to an older materialized term share its table.
    fn materialize(&mut self) -> Result<()> {
        let cat = self.shape.cat.clone();
        let end = self.ob.len();
        while self.done < end {
            let e = self.done as u32;
            self.canonicalize(e);
            let r = self.uf.find(e as usize);
            if r < e as usize {
                for gi in 0..self.restr[r].len() {
                    let (a, b) = (self.restr[e as usize][gi], self.restr[r][gi]);
                    if a == NONE {
                        self.restr[e as usize][gi] = b;
                    } else {
                        self.uf.union(a as usize, b as usize);
                    }
                }
            } else {
                let c = self.ob[e as usize] as usize;
                for &g in cat.arrows_into(c) {
                    self.restrict(e, g as usize)?;
                }
            }
            self.done += 1;
        }
        Ok(())
    }

    /// Merges `e` with an older term built the same way from equal parts.
    fn canonicalize(&mut self, e: u32) {
        match self.term[e as usize].clone() {
            Term::Glued(k, comps) => {
                let key = (k, comps.iter().map(|&x| self.rep(x)).collect());
                match self.glued.get(&key) {
                    Some(&o) if o != e => {
                        self.uf.union(o as usize, e as usize);
                    }
                    Some(_) => {}
                    None => {
                        self.glued.insert(key, e);
                    }
                }
            }
            Term::Op(b, h) => {
                let key = (self.rep(b), h);
                match self.ops.get(&key) {
                    Some(&o) if o != e => {
                        self.uf.union(o as usize, e as usize);
                    }
                    Some(_) => {}
                    None => {
                        self.ops.insert(key, e);
                    }
                }
            }
            Term::Orig => {}
        }
    }

    fn rep(&mut self, e: u32) -> u32 {
        self.uf.find(e as usize) as u32
    }

    /// Closes the equivalence under well-definedness, functoriality into
    /// undecomposed objects, and separation. Returns whether anything merged.
    fn close(&mut self) -> bool {
        let cat = self.shape.cat.clone();
        let n = self.done;
        let mut any = false;
        loop {
            let mut changed = false;
            for e in 0..n {
                let r = self.uf.find(e);
                if r == e {
                    continue;
                }
                for gi in 0..self.restr[e].len() {
                    let (a, b) = (self.restr[e][gi], self.restr[r][gi]);
                    changed |= self.uf.union(a as usize, b as usize);
                }
            }
            for x in 0..n {
                if self.uf.find(x) != x {
                    continue;
                }
                let c = self.ob[x] as usize;
                for &g in cat.arrows_into(c) {
                    let g = g as usize;
                    let y = self.uf.find(self.restr[x][cat.into_index(g)] as usize);
                    if y >= n {
                        continue;
                    }
                    let d = cat.src(g);
                    for &h in cat.arrows_into(d) {
                        let h = h as usize;
                        if self.shape.dec[cat.src(h)].is_some() || cat.is_identity(h) {
                            continue;
                        }
                        let a = self.restr[y][cat.into_index(h)];
                        let b = self.restr[x][cat.into_index(cat.compose(g, h))];
                        changed |= self.uf.union(a as usize, b as usize);
                    }
                }
            }
            for k in 0..self.shape.covers.len() {
                let (apex, ref legs) = self.shape.covers[k];
                let mut seen: HashMap<Vec<u32>, u32> = HashMap::new();
                for x in 0..n {
                    if self.ob[x] as usize != apex || self.uf.find(x) != x {
                        continue;
                    }
                    let fam: Vec<u32> = legs
                        .iter()
                        .map(|&u| {
                            let y = self.restr[x][cat.into_index(u)];
                            self.uf.find(y as usize) as u32
                        })
                        .collect();
                    match seen.get(&fam) {
                        Some(&y) => changed |= self.uf.union(x, y as usize),
                        None => {
                            seen.insert(fam, x as u32);
                        }
                    }
                }
            }
            if !changed {
                return any;
            }
            any = true;
        }
    }

    /// The current quotient as a presheaf, with the term chosen for each
    /// element.
    fn quotient(&mut self) -> (Presheaf, Vec<Vec<u32>>, Vec<u32>) {
        let cat = self.shape.cat.clone();
        let n = self.ob.len();
        let mut members: Vec<Vec<u32>> = alloc::vec![Vec::new(); cat.object_count()];
        let mut label = alloc::vec![NONE; n];
        for x in 0..n {
            if self.uf.find(x) == x {
                let c = self.ob[x] as usize;
                label[x] = members[c].len() as u32;
                members[c].push(x as u32);
            }
        }
        for x in 0..n {
            let r = self.uf.find(x);
            label[x] = label[r];
        }
        let sizes = members.iter().map(|m| m.len()).collect();
        let restr = &self.restr;
        let q = Presheaf::from_fn(cat.clone(), sizes, |g, i| {
            let x = members[cat.dst(g)][i] as usize;
            label[restr[x][cat.into_index(g)] as usize] as usize
        });
        (q, members, label)
    }

    /// Adds an amalgamation for every matching family without one. Returns
    /// the number of families glued.
    fn glue_missing(&mut self) -> Result<usize> {
        let cat = self.shape.cat.clone();
        let (q, members, _) = self.quotient();
        let mut pending = Vec::new();
        for k in 0..self.shape.covers.len() {
            let (apex, ref legs) = self.shape.covers[k];
            let mut image: hashbrown::HashSet<Vec<u32>> = hashbrown::HashSet::new();
            for x in 0..q.size(apex) {
                image.insert(legs.iter().map(|&u| q.act(u, x) as u32).collect());
            }
            let _ = for_each_matching_family(&q, legs, &self.shape.spans[k], |fam| {
                if !image.contains(fam) {
                    let comps = fam
                        .iter()
                        .zip(legs)
                        .map(|(&i, &u)| members[cat.src(u)][i as usize])
                        .collect::<Vec<u32>>();
                    pending.push((k as u32, comps));
                }
                ControlFlow::Continue(())
            });
        }
        let count = pending.len();
        for (k, comps) in pending {
            self.glue(k, comps)?;
        }
        Ok(count)
    }
}

/// Reflects `p` along the covers of `shape`, for at most `bound` rounds.
pub(crate) fn reflect<P: PresheafLike + ?Sized>(
    p: &P,
    shape: &ReflectionShape,
    bound: usize,
) -> Result<Reflection> {
    let mut eng = Engine::new(shape, p);
    let not_converged = |elements| Error::NotConverged { bound, elements };
    for round in 1..=bound.max(1) {
        loop {
            eng.materialize().map_err(|_| not_converged(eng_len(&eng)))?;
            eng.close();
            if eng.done == eng.ob.len() {
                break;
            }
        }
        let glued = eng.glue_missing().map_err(|_| not_converged(eng_len(&eng)))?;
        if glued == 0 {
            let (presheaf, _, label) = eng.quotient();
            let unit = NatTransformation {
                components: shape
                    .cat
                    .objects()
                    .map(|c| {
                        (0..p.size(c))
                            .map(|x| label[eng.orig_base[c] + x])
                            .collect()
                    })
                    .collect(),
            };
            return Ok(Reflection {
                presheaf,
                unit,
                rounds: round,
            });
        }
    }
    let _ = eng.rep(0);
    Err(not_converged(eng.ob.len()))
}

fn eng_len<P: PresheafLike + ?Sized>(e: &Engine<'_, P>) -> usize {
    e.ob.len()
}
