//! Every presheaf with prescribed sizes, by backtracking over the actions of
//! a generating set of arrows.

use std::sync::Arc;

use sketchy_core::fincat::{FinCategory, Presheaf};

struct Search<'a> {
    cat: &'a FinCategory,
    sizes: &'a [usize],
    gens: Vec<usize>,
    assigned: Vec<usize>,
    is_assigned: Vec<bool>,
    /// `act[f][x]` for `x ∈ P(dst f)`, when known.
    act: Vec<Option<Vec<usize>>>,
    known: Vec<usize>,
    trail: Vec<usize>,
}

impl Search<'_> {
    /// Sets `act[f]`, or checks it against the known value.
    fn put(&mut self, f: usize, v: Vec<usize>, queue: &mut Vec<usize>) -> bool {
        match &self.act[f] {
            Some(w) => *w == v,
            None => {
                self.act[f] = Some(v);
                self.known.push(f);
                self.trail.push(f);
                queue.push(f);
                true
            }
        }
    }

    /// `P(g ∘ h) = P(h) ∘ P(g)`.
    fn composite(&self, g: usize, h: usize) -> Vec<usize> {
        let (pg, ph) = (self.act[g].as_ref().unwrap(), self.act[h].as_ref().unwrap());
        pg.iter().map(|&x| ph[x]).collect()
    }

    /// Closes the known arrows under left composition with the assigned
    /// generators, after `g` joined them.
    fn propagate(&mut self, g: usize, mut queue: Vec<usize>) -> bool {
        let old: Vec<usize> = self.known.clone();
        for h in old {
            if let Some(gh) = self.cat.try_compose(g, h) {
                let v = self.composite(g, h);
                if !self.put(gh, v, &mut queue) {
                    return false;
                }
            }
        }
        while let Some(f) = queue.pop() {
            for i in 0..self.assigned.len() {
                let g = self.assigned[i];
                if let Some(gf) = self.cat.try_compose(g, f) {
                    let v = self.composite(g, f);
                    if !self.put(gf, v, &mut queue) {
                        return false;
                    }
                }
            }
        }
        true
    }

    fn undo(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let f = self.trail.pop().unwrap();
            self.act[f] = None;
            self.known.pop();
        }
    }

    /// Actions of `g` compatible with every known composite `g ∘ h` and
    /// `h ∘ g`.
    fn candidates(&self, g: usize) -> Vec<Vec<usize>> {
        if let Some(v) = &self.act[g] {
            return vec![v.clone()];
        }
        let (n, m) = (self.sizes[self.cat.src(g)], self.sizes[self.cat.dst(g)]);
        let mut checks: Vec<(bool, &[usize], &[usize])> = Vec::new();
        for &h in &self.known {
            let ph = self.act[h].as_deref().unwrap();
            if let Some(gh) = self.cat.try_compose(g, h) {
                if let Some(pgh) = self.act[gh].as_deref() {
                    checks.push((true, ph, pgh));
                }
            }
            if let Some(hg) = self.cat.try_compose(h, g) {
                if let Some(phg) = self.act[hg].as_deref() {
                    checks.push((false, ph, phg));
                }
            }
        }
        let total = n.checked_pow(m as u32).expect("small sizes");
        let mut out = Vec::new();
        let mut v = vec![0; m];
        for code in 0..total {
            for (x, d) in v.iter_mut().enumerate() {
                *d = code / n.pow(x as u32) % n;
            }
            let ok = checks.iter().all(|&(left, ph, pc)| {
                if left {
                    // P(g ∘ h)(x) = P(h)(P(g)(x))
                    v.iter().zip(pc).all(|(&y, &z)| ph[y] == z)
                } else {
                    // P(h ∘ g)(x) = P(g)(P(h)(x))
                    ph.iter().zip(pc).all(|(&y, &z)| v[y] == z)
                }
            });
            if ok {
                out.push(v.clone());
            }
        }
        out
    }

    fn run(&mut self, cat: &Arc<FinCategory>, count: &mut usize, visit: &mut dyn FnMut(Presheaf) -> bool) -> bool {
        let open: Vec<usize> = self.gens.iter().copied().filter(|&g| !self.is_assigned[g]).collect();
        if open.is_empty() {
            debug_assert!(self.act.iter().all(Option::is_some));
            let table = &self.act;
            let p = Presheaf::from_fn(cat.clone(), self.sizes.to_vec(), |f, x| table[f].as_ref().unwrap()[x]);
            *count += 1;
            return visit(p);
        }
        // Fail first: branch on the generator with the fewest candidates.
        let mut best: Option<(usize, Vec<Vec<usize>>)> = None;
        for g in open {
            let c = self.candidates(g);
            if best.as_ref().is_none_or(|(_, b)| c.len() < b.len()) {
                let done = c.len() <= 1;
                best = Some((g, c));
                if done {
                    break;
                }
            }
        }
        let (g, choices) = best.unwrap();
        self.is_assigned[g] = true;
        self.assigned.push(g);
        let mut go_on = true;
        for v in choices {
            let mark = self.trail.len();
            let mut queue = Vec::new();
            let ok = self.put(g, v, &mut queue) && self.propagate(g, queue);
            if ok && !self.run(cat, count, visit) {
                go_on = false;
            }
            self.undo(mark);
            if !go_on {
                break;
            }
        }
        self.assigned.pop();
        self.is_assigned[g] = false;
        go_on
    }
}

/// Calls `visit` on every presheaf with the given sizes, stopping when it
/// returns false. Returns the number visited.
pub fn for_each_presheaf(cat: &Arc<FinCategory>, gens: &[usize], sizes: &[usize], mut visit: impl FnMut(Presheaf) -> bool) -> usize {
    let mut act = vec![None; cat.arrow_count()];
    let mut known = Vec::new();
    for o in cat.objects() {
        act[cat.id(o)] = Some((0..sizes[o]).collect());
        known.push(cat.id(o));
    }
    let mut s = Search {
        cat,
        sizes,
        gens: gens.iter().copied().filter(|&g| !cat.is_identity(g)).collect(),
        assigned: Vec::new(),
        is_assigned: vec![false; cat.arrow_count()],
        act,
        known,
        trail: Vec::new(),
    };
    let mut count = 0;
    s.run(cat, &mut count, &mut visit);
    count
}
