//! Union-find with least-element representatives.

use alloc::vec::Vec;

/// Disjoint sets over `0..n`. The representative of every class is its least
/// member, so quotients built from it are reproducible.
#[derive(Debug, Clone, Default)]
pub struct UnionFind {
    parent: Vec<u32>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n as u32).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    /// Adds a fresh singleton class and returns its index.
    pub fn push(&mut self) -> usize {
        let id = self.parent.len();
        self.parent.push(id as u32);
        id
    }

    pub fn find(&mut self, x: usize) -> usize {
        let mut root = x;
        while self.parent[root] as usize != root {
            root = self.parent[root] as usize;
        }
        let mut cur = x;
        while self.parent[cur] as usize != root {
            let next = self.parent[cur] as usize;
            self.parent[cur] = root as u32;
            cur = next;
        }
        root
    }

    /// Merges the classes of `a` and `b`. Returns `true` if they were distinct.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let ra = self.find(a);
        let rb = self.find(b);
        if ra == rb {
            return false;
        }
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[hi] = lo as u32;
        true
    }

    pub fn same(&mut self, a: usize, b: usize) -> bool {
        self.find(a) == self.find(b)
    }

    /// Dense class numbering: returns `(class_of, class_count)` with classes
    /// numbered in order of their least member.
    pub fn classes(&mut self) -> (Vec<u32>, usize) {
        let n = self.parent.len();
        let mut label = alloc::vec![u32::MAX; n];
        let mut out = alloc::vec![0u32; n];
        let mut count = 0u32;
        for x in 0..n {
            let r = self.find(x);
            if label[r] == u32::MAX {
                label[r] = count;
                count += 1;
            }
            out[x] = label[r];
        }
        (out, count as usize)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn least_member_is_representative() {
        let mut uf = UnionFind::new(6);
        uf.union(4, 2);
        uf.union(5, 4);
        assert_eq!(uf.find(5), 2);
        uf.union(0, 5);
        assert_eq!(uf.find(2), 0);
        let (cls, n) = uf.classes();
        assert_eq!(n, 3);
        assert_eq!(cls, alloc::vec![0, 1, 0, 2, 0, 0]);
    }
}
