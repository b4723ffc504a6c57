use alloc::sync::Arc;
use alloc::vec::Vec;
use core::ops::ControlFlow;

use hashbrown::HashMap;

use super::category::{Arr, FinCategory, Ob};
use super::csp::Csp;
use crate::dsu::UnionFind;
use crate::error::{malformed, Result};

/// A covariant functor from a finite category into finite sets.
/// `map(f)` is the table of `D(f): D(src f) → D(dst f)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetDiagram {
    shape: Arc<FinCategory>,
    sizes: Vec<usize>,
    maps: Vec<Vec<u32>>,
}

impl SetDiagram {
    pub fn new(shape: Arc<FinCategory>, sizes: Vec<usize>, maps: Vec<Vec<u32>>) -> Result<Self> {
        if sizes.len() != shape.object_count() || maps.len() != shape.arrow_count() {
            return Err(malformed("diagram tables do not match the shape"));
        }
        for f in shape.arrows() {
            let m = &maps[f];
            if m.len() != sizes[shape.src(f)] || m.iter().any(|&y| y as usize >= sizes[shape.dst(f)]) {
                return Err(malformed("diagram map has the wrong shape"));
            }
        }
        Ok(SetDiagram { shape, sizes, maps })
    }

    /// The diagram with no objects.
    pub fn empty() -> Self {
        SetDiagram {
            shape: Arc::new(FinCategory::empty()),
            sizes: Vec::new(),
            maps: Vec::new(),
        }
    }

    /// A discrete diagram of sets with the given sizes.
    pub fn discrete(sizes: Vec<usize>) -> Self {
        let shape = Arc::new(FinCategory::discrete(sizes.len()));
        let maps = sizes.iter().map(|&n| (0..n as u32).collect()).collect();
        SetDiagram { shape, sizes, maps }
    }

    pub fn shape(&self) -> &Arc<FinCategory> {
        &self.shape
    }
    pub fn size(&self, c: Ob) -> usize {
        self.sizes[c]
    }
    pub fn map(&self, f: Arr) -> &[u32] {
        &self.maps[f]
    }
}

/// A limit: its elements are the matching families, one value per object.
/// The projection to `c` reads component `c`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Limit {
    pub elements: Vec<Vec<u32>>,
    index: HashMap<Vec<u32>, u32>,
}

impl Limit {
    pub fn len(&self) -> usize {
        self.elements.len()
    }
    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }
    pub fn projection(&self, c: Ob, e: usize) -> usize {
        self.elements[e][c] as usize
    }
    pub fn index_of(&self, family: &[u32]) -> Option<usize> {
        self.index.get(family).map(|&i| i as usize)
    }

    /// Factors a cone with vertex of size `n` (`legs[c][s]` is the leg at `c`)
    /// through the limit. `None` when the legs are not a cone; otherwise the
    /// factorization is the unique map commuting with projections.
    pub fn factor(&self, n: usize, legs: &[Vec<u32>]) -> Option<Vec<u32>> {
        (0..n)
            .map(|s| {
                let fam: Vec<u32> = legs.iter().map(|l| l[s]).collect();
                self.index.get(&fam).copied()
            })
            .collect()
    }
}

/// Computes the limit of `d` as the set of matching families.
pub fn limit(d: &SetDiagram) -> Limit {
    let shape = &d.shape;
    let mut csp = Csp::new(d.sizes.clone());
    for f in shape.arrows() {
        if !shape.is_identity(f) {
            csp.constrain(shape.src(f), shape.dst(f), &d.maps[f]);
        }
    }
    let mut elements = Vec::new();
    csp.for_each(|v| {
        elements.push(v.to_vec());
        ControlFlow::Continue(())
    });
    let index = elements
        .iter()
        .enumerate()
        .map(|(i, e)| (e.clone(), i as u32))
        .collect();
    Limit { elements, index }
}

/// A colimit: the disjoint union of the values modulo the relation generated
/// by `x ~ D(f)(x)`. Classes are numbered by least member.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Colimit {
    pub size: usize,
    /// `injections[c][x]` is the class of `x ∈ D(c)`.
    pub injections: Vec<Vec<u32>>,
}

impl Colimit {
    /// Factors a cocone with legs `legs[c]: D(c) → S` through the colimit.
    /// `None` when the legs do not agree on some class.
    pub fn factor(&self, legs: &[Vec<u32>]) -> Option<Vec<u32>> {
        let mut out = alloc::vec![u32::MAX; self.size];
        for (c, inj) in self.injections.iter().enumerate() {
            for (x, &k) in inj.iter().enumerate() {
                let slot = &mut out[k as usize];
                let v = legs[c][x];
                if *slot == u32::MAX {
                    *slot = v;
                } else if *slot != v {
                    return None;
                }
            }
        }
        Some(out)
    }
}

pub fn colimit(d: &SetDiagram) -> Colimit {
    let shape = &d.shape;
    let mut base = Vec::with_capacity(d.sizes.len());
    let mut total = 0;
    for &n in &d.sizes {
        base.push(total);
        total += n;
    }
    let mut uf = UnionFind::new(total);
    for f in shape.arrows() {
        let (s, t) = (shape.src(f), shape.dst(f));
        for (x, &y) in d.maps[f].iter().enumerate() {
            uf.union(base[s] + x, base[t] + y as usize);
        }
    }
    let (cls, size) = uf.classes();
    let injections = shape
        .objects()
        .map(|c| cls[base[c]..base[c] + d.sizes[c]].to_vec())
        .collect();
    Colimit { size, injections }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_limit_is_a_point() {
        assert_eq!(limit(&SetDiagram::empty()).len(), 1);
        assert_eq!(colimit(&SetDiagram::empty()).size, 0);
    }

    #[test]
    fn product_cardinality() {
        let l = limit(&SetDiagram::discrete(alloc::vec![2, 3]));
        assert_eq!(l.len(), 6);
        assert_eq!(colimit(&SetDiagram::discrete(alloc::vec![2, 3])).size, 5);
    }

    #[test]
    fn equalizer_of_two_maps() {
        // Parallel pair a ⇉ b with tables (0,1,1) and (0,0,1).
        let shape = Arc::new(FinCategory::from_fn(
            alloc::vec!["a".into(), "b".into()],
            alloc::vec![
                ("ia".into(), 0, 0),
                ("ib".into(), 1, 1),
                ("f".into(), 0, 1),
                ("g".into(), 0, 1),
            ],
            alloc::vec![0, 1],
            |g, f| if g == 1 { f } else { g },
        ));
        let d = SetDiagram::new(
            shape,
            alloc::vec![3, 2],
            alloc::vec![alloc::vec![0, 1, 2], alloc::vec![0, 1], alloc::vec![0, 1, 1], alloc::vec![0, 0, 1]],
        )
        .unwrap();
        let l = limit(&d);
        let apex: Vec<u32> = l.elements.iter().map(|e| e[0]).collect();
        assert_eq!(apex, alloc::vec![0, 2]);
        // The cone from a point at element 2 factors uniquely.
        assert_eq!(l.factor(1, &[alloc::vec![2], alloc::vec![1]]), Some(alloc::vec![1]));
        assert_eq!(l.factor(1, &[alloc::vec![1], alloc::vec![1]]), None);
    }
}
