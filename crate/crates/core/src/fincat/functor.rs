use alloc::sync::Arc;
use alloc::vec::Vec;

use super::category::{Arr, FinCategory, Ob};

/// A functor between finite categories, given by object and arrow tables.
#[derive(Debug, Clone)]
pub struct FinFunctor {
    source: Arc<FinCategory>,
    target: Arc<FinCategory>,
    ob_map: Vec<u32>,
    arr_map: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FunctorViolation {
    /// Table lengths disagree with the source category.
    Shape,
    /// `F f` does not run from `F(src f)` to `F(dst f)`.
    Endpoints { arrow: Arr },
    Identity { ob: Ob },
    Composition { g: Arr, f: Arr },
}

pub(crate) fn same_category(a: &Arc<FinCategory>, b: &Arc<FinCategory>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl FinFunctor {
    /// Unchecked constructor; see [`FinFunctor::check`].
    pub fn new(
        source: Arc<FinCategory>,
        target: Arc<FinCategory>,
        ob_map: Vec<Ob>,
        arr_map: Vec<Arr>,
    ) -> Self {
        FinFunctor {
            source,
            target,
            ob_map: ob_map.into_iter().map(|x| x as u32).collect(),
            arr_map: arr_map.into_iter().map(|x| x as u32).collect(),
        }
    }

    pub fn identity(c: Arc<FinCategory>) -> Self {
        let obs = c.objects().collect();
        let arrs = c.arrows().collect();
        Self::new(c.clone(), c, obs, arrs)
    }

    /// The unique functor to the terminal category.
    pub fn to_terminal(c: Arc<FinCategory>) -> Self {
        let obs = alloc::vec![0; c.object_count()];
        let arrs = alloc::vec![0; c.arrow_count()];
        Self::new(c, Arc::new(FinCategory::terminal()), obs, arrs)
    }

    /// The functor from the terminal category picking out `c`.
    pub fn point(target: Arc<FinCategory>, c: Ob) -> Self {
        let id = target.id(c);
        Self::new(Arc::new(FinCategory::terminal()), target, alloc::vec![c], alloc::vec![id])
    }

    pub fn source(&self) -> &Arc<FinCategory> {
        &self.source
    }
    pub fn target(&self) -> &Arc<FinCategory> {
        &self.target
    }
    pub fn ob(&self, c: Ob) -> Ob {
        self.ob_map[c] as usize
    }
    pub fn arr(&self, f: Arr) -> Arr {
        self.arr_map[f] as usize
    }

    /// `other ∘ self`. `None` if the categories do not meet.
    pub fn then(&self, other: &FinFunctor) -> Option<FinFunctor> {
        if !same_category(&self.target, &other.source) {
            return None;
        }
        Some(FinFunctor {
            source: self.source.clone(),
            target: other.target.clone(),
            ob_map: self.ob_map.iter().map(|&x| other.ob_map[x as usize]).collect(),
            arr_map: self.arr_map.iter().map(|&f| other.arr_map[f as usize]).collect(),
        })
    }

    pub fn is_identity_on_objects(&self) -> bool {
        self.source.object_count() == self.target.object_count()
            && self.ob_map.iter().enumerate().all(|(i, &x)| i == x as usize)
    }

    /// Exhaustive check of the functor laws.
    pub fn check(&self) -> Vec<FunctorViolation> {
        let (s, t) = (&*self.source, &*self.target);
        if self.ob_map.len() != s.object_count()
            || self.arr_map.len() != s.arrow_count()
            || self.ob_map.iter().any(|&x| x as usize >= t.object_count())
            || self.arr_map.iter().any(|&f| f as usize >= t.arrow_count())
        {
            return alloc::vec![FunctorViolation::Shape];
        }
        let mut out = Vec::new();
        for f in s.arrows() {
            let g = self.arr(f);
            if t.src(g) != self.ob(s.src(f)) || t.dst(g) != self.ob(s.dst(f)) {
                out.push(FunctorViolation::Endpoints { arrow: f });
            }
        }
        if !out.is_empty() {
            return out;
        }
        for c in s.objects() {
            if self.arr(s.id(c)) != t.id(self.ob(c)) {
                out.push(FunctorViolation::Identity { ob: c });
            }
        }
        for f in s.arrows() {
            for x in s.objects() {
                for &g in s.hom(s.dst(f), x) {
                    let g = g as usize;
                    if self.arr(s.compose(g, f)) != t.compose(self.arr(g), self.arr(f)) {
                        out.push(FunctorViolation::Composition { g, f });
                    }
                }
            }
        }
        out
    }
}
