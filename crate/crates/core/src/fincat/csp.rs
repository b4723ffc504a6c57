//! Enumeration of assignments subject to functional constraints `v = t[u]`.
//!
//! Domains are bitsets. Propagation keeps every constraint arc consistent in
//! both directions; search branches on the smallest open domain and tries
//! values in increasing order, so solutions come out in lexicographic order
//! of the branching sequence and enumeration is deterministic.

use alloc::vec::Vec;
use core::ops::ControlFlow;

pub(crate) struct Csp<'a> {
    dom: Vec<u32>,
    off: Vec<usize>,
    words: usize,
    cons: Vec<(u32, u32, &'a [u32])>,
    adj: Vec<Vec<u32>>,
    group: Vec<u32>,
    members: Vec<Vec<u32>>,
}

const NO_GROUP: u32 = u32::MAX;

impl<'a> Csp<'a> {
    pub fn new(dom: Vec<usize>) -> Self {
        let mut off = Vec::with_capacity(dom.len());
        let mut words = 0;
        for &d in &dom {
            off.push(words);
            words += d.div_ceil(64);
        }
        let n = dom.len();
        Csp {
            dom: dom.into_iter().map(|d| d as u32).collect(),
            off,
            words,
            cons: Vec::new(),
            adj: alloc::vec![Vec::new(); n],
            group: alloc::vec![NO_GROUP; n],
            members: Vec::new(),
        }
    }

    /// Adds `v = table[u]`.
    pub fn constrain(&mut self, u: usize, v: usize, table: &'a [u32]) {
        debug_assert_eq!(table.len(), self.dom[u] as usize);
        let id = self.cons.len() as u32;
        self.cons.push((u as u32, v as u32, table));
        self.adj[u].push(id);
        if u != v {
            self.adj[v].push(id);
        }
    }

    /// Requires the given variables to take pairwise distinct values.
    pub fn all_different(&mut self, vars: &[usize]) {
        let g = self.members.len() as u32;
        for &v in vars {
            self.group[v] = g;
        }
        self.members.push(vars.iter().map(|&v| v as u32).collect());
    }

    fn full(&self) -> Vec<u64> {
        let mut state = alloc::vec![0u64; self.words];
        for v in 0..self.dom.len() {
            let d = self.dom[v] as usize;
            let o = self.off[v];
            for w in 0..d / 64 {
                state[o + w] = !0;
            }
            if d % 64 != 0 {
                state[o + d / 64] = (1u64 << (d % 64)) - 1;
            }
        }
        state
    }

    fn span(&self, v: usize) -> core::ops::Range<usize> {
        let o = self.off[v];
        o..o + (self.dom[v] as usize).div_ceil(64)
    }

    fn count(&self, s: &[u64], v: usize) -> u32 {
        s[self.span(v)].iter().map(|w| w.count_ones()).sum()
    }

    fn first(&self, s: &[u64], v: usize) -> Option<usize> {
        s[self.span(v)]
            .iter()
            .enumerate()
            .find(|(_, w)| **w != 0)
            .map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
    }

    fn has(&self, s: &[u64], v: usize, a: usize) -> bool {
        s[self.off[v] + a / 64] >> (a % 64) & 1 == 1
    }

    /// Runs propagation from the queued variables. Returns `false` on a
    /// wiped-out domain.
    fn propagate(&self, s: &mut [u64], queue: &mut Vec<u32>, scratch: &mut Vec<u64>) -> bool {
        let mut queued = alloc::vec![false; self.dom.len()];
        for &v in queue.iter() {
            queued[v as usize] = true;
        }
        while let Some(x) = queue.pop() {
            let x = x as usize;
            queued[x] = false;
            if self.count(s, x) == 0 {
                return false;
            }
            let g = self.group[x];
            if g != NO_GROUP && self.count(s, x) == 1 {
                let a = self.first(s, x).unwrap();
                for &y in &self.members[g as usize] {
                    let y = y as usize;
                    if y != x && self.has(s, y, a) {
                        s[self.off[y] + a / 64] &= !(1u64 << (a % 64));
                        if !queued[y] {
                            queued[y] = true;
                            queue.push(y as u32);
                        }
                    }
                }
            }
            for &c in &self.adj[x] {
                let (u, v, t) = self.cons[c as usize];
                let (u, v) = (u as usize, v as usize);
                // Forward: D(v) ∩= t[D(u)].
                let sv = self.span(v);
                scratch.clear();
                scratch.resize(sv.len(), 0);
                let su = self.span(u);
                for (wi, &w) in s[su.clone()].iter().enumerate() {
                    let mut w = w;
                    while w != 0 {
                        let a = wi * 64 + w.trailing_zeros() as usize;
                        w &= w - 1;
                        let b = t[a] as usize;
                        scratch[b / 64] |= 1u64 << (b % 64);
                    }
                }
                let mut changed = false;
                for (i, wi) in sv.clone().enumerate() {
                    let nw = s[wi] & scratch[i];
                    if nw != s[wi] {
                        s[wi] = nw;
                        changed = true;
                    }
                }
                if changed && !queued[v] {
                    queued[v] = true;
                    queue.push(v as u32);
                }
                // Backward: D(u) = {a ∈ D(u) : t[a] ∈ D(v)}.
                let mut changed = false;
                for wi in su {
                    let mut w = s[wi];
                    let mut keep = w;
                    while w != 0 {
                        let bit = w.trailing_zeros();
                        w &= w - 1;
                        let a = (wi - self.off[u]) * 64 + bit as usize;
                        let b = t[a] as usize;
                        if s[self.off[v] + b / 64] >> (b % 64) & 1 == 0 {
                            keep &= !(1u64 << bit);
                        }
                    }
                    if keep != s[wi] {
                        s[wi] = keep;
                        changed = true;
                    }
                }
                if changed && !queued[u] {
                    queued[u] = true;
                    queue.push(u as u32);
                }
            }
        }
        true
    }

    /// Calls `visit` on every solution, as one value per variable.
    pub fn for_each(&self, mut visit: impl FnMut(&[u32]) -> ControlFlow<()>) {
        let mut s = self.full();
        let mut queue: Vec<u32> = (0..self.dom.len() as u32).collect();
        let mut scratch = Vec::new();
        if !self.propagate(&mut s, &mut queue, &mut scratch) {
            return;
        }
        let mut values = alloc::vec![0u32; self.dom.len()];
        let _ = self.search(s, &mut values, &mut scratch, &mut visit);
    }

    fn search(
        &self,
        s: Vec<u64>,
        values: &mut [u32],
        scratch: &mut Vec<u64>,
        visit: &mut impl FnMut(&[u32]) -> ControlFlow<()>,
    ) -> ControlFlow<()> {
        let mut best: Option<(u32, usize)> = None;
        for v in 0..self.dom.len() {
            let k = self.count(&s, v);
            if k > 1 && best.is_none_or(|(bk, _)| k < bk) {
                best = Some((k, v));
                if k == 2 {
                    break;
                }
            }
        }
        let Some((_, v)) = best else {
            for (x, slot) in values.iter_mut().enumerate() {
                *slot = self.first(&s, x).unwrap() as u32;
            }
            return visit(values);
        };
        for a in 0..self.dom[v] as usize {
            if !self.has(&s, v, a) {
                continue;
            }
            let mut t = s.clone();
            for wi in self.span(v) {
                t[wi] = 0;
            }
            t[self.off[v] + a / 64] = 1u64 << (a % 64);
            let mut queue = alloc::vec![v as u32];
            if self.propagate(&mut t, &mut queue, scratch) {
                self.search(t, values, scratch, visit)?;
            }
        }
        ControlFlow::Continue(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_functions_with_constraints() {
        // x ∈ 0..3, y ∈ 0..2 with y = x mod 2.
        let t = [0u32, 1, 0];
        let mut csp = Csp::new(alloc::vec![3, 2]);
        csp.constrain(0, 1, &t);
        let mut sols = Vec::new();
        csp.for_each(|v| {
            sols.push(v.to_vec());
            ControlFlow::Continue(())
        });
        sols.sort();
        assert_eq!(sols, alloc::vec![alloc::vec![0, 0], alloc::vec![1, 1], alloc::vec![2, 0]]);
    }

    #[test]
    fn all_different_counts_permutations() {
        let mut csp = Csp::new(alloc::vec![4; 4]);
        csp.all_different(&[0, 1, 2, 3]);
        let mut n = 0;
        csp.for_each(|_| {
            n += 1;
            ControlFlow::Continue(())
        });
        assert_eq!(n, 24);
    }
}
