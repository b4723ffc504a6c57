use alloc::vec::Vec;

use num_traits::Zero;

use super::measure::{product_map, AtomicMeasure, BasedSpace, MeasSpace};
use crate::arith::Rational;
use crate::error::{Error, Result};
use crate::fibered::FinMap;

/// A kernel `k: X_1 → M X_2` that is a bundle map over `φ: I_1 → I_2`:
/// `k(x_1)(x_2) ≠ 0` only when `φ(f_1(x_1)) = f_2(x_2)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Kernel {
    source: BasedSpace,
    target: BasedSpace,
    phi: FinMap,
    rows: Vec<AtomicMeasure>,
}

impl Kernel {
    /// Checks shapes and the support condition.
    pub fn new(source: BasedSpace, target: BasedSpace, phi: FinMap, rows: Vec<AtomicMeasure>) -> Result<Self> {
        if phi.domain() != source.base().len() || phi.codomain() != target.base().len() {
            return Err(Error::BaseMismatch);
        }
        if rows.len() != source.len() || rows.iter().any(|r| r.space_len() != target.len()) {
            return Err(Error::SpaceMismatch);
        }
        let k = Kernel { source, target, phi, rows };
        k.check_support()?;
        Ok(k)
    }

    /// A kernel between spaces over the point.
    pub fn plain(source: MeasSpace, target: MeasSpace, rows: Vec<AtomicMeasure>) -> Result<Self> {
        Self::new(BasedSpace::trivial(source), BasedSpace::trivial(target), FinMap::identity(1), rows)
    }

    pub fn source(&self) -> &BasedSpace {
        &self.source
    }
    pub fn target(&self) -> &BasedSpace {
        &self.target
    }
    pub fn phi(&self) -> &FinMap {
        &self.phi
    }
    pub fn rows(&self) -> &[AtomicMeasure] {
        &self.rows
    }
    pub fn row(&self, x: usize) -> &AtomicMeasure {
        &self.rows[x]
    }
    pub fn entry(&self, x1: usize, x2: usize) -> Rational {
        self.rows[x1].mass(x2)
    }

    pub fn check_support(&self) -> Result<()> {
        for (x1, row) in self.rows.iter().enumerate() {
            let over = self.phi.apply(self.source.over(x1));
            if let Some(x2) = row.support().find(|&x2| self.target.over(x2) != over) {
                return Err(Error::SupportViolation { source: x1, target: x2 });
            }
        }
        Ok(())
    }

    /// `sup_{x_1} ‖k(x_1)‖`, zero on an empty source.
    pub fn norm(&self) -> Rational {
        self.rows.iter().map(AtomicMeasure::total_variation).max().unwrap_or_else(Rational::zero)
    }

    /// Every row a probability measure.
    pub fn is_stochastic(&self) -> bool {
        self.rows.iter().all(|r| r.is_positive() && r.total_mass() == Rational::from_integer(1))
    }
}

/// `(k'∘k)(x_1)(x_3) = Σ_{x_2} k(x_1)(x_2) k'(x_2)(x_3)`, over `φ' ∘ φ`.
pub fn compose(k: &Kernel, k2: &Kernel) -> Result<Kernel> {
    if k.target.space() != k2.source.space() {
        return Err(Error::SpaceMismatch);
    }
    if k.target != k2.source {
        return Err(Error::BaseMismatch);
    }
    let n3 = k2.target.len();
    let rows = k
        .rows
        .iter()
        .map(|row| {
            let pairs = row.masses().iter().flat_map(|&(x2, a)| k2.rows[x2].masses().iter().map(move |&(x3, b)| (x3, a * b)));
            AtomicMeasure::from_pairs(n3, pairs).expect("in range")
        })
        .collect();
    let phi = k.phi.then(&k2.phi).expect("bases match");
    let out = Kernel { source: k.source.clone(), target: k2.target.clone(), phi, rows };
    debug_assert!(out.check_support().is_ok());
    Ok(out)
}

/// `δ: X → M X`, `x ↦ δ_x`, over the identity of the base.
pub fn dirac(x: &BasedSpace) -> Kernel {
    let n = x.len();
    Kernel {
        source: x.clone(),
        target: x.clone(),
        phi: FinMap::identity(x.base().len()),
        rows: (0..n).map(|p| AtomicMeasure::dirac(n, p)).collect(),
    }
}

/// `M(h)(x) = δ_{h(x)}` for a point map `h: X → Y` over `φ`; the square
/// `f_Y ∘ h = φ ∘ f_X` must commute.
pub fn pushforward(h: &FinMap, source: &BasedSpace, target: &BasedSpace, phi: &FinMap) -> Result<Kernel> {
    if h.domain() != source.len() || h.codomain() != target.len() {
        return Err(Error::SpaceMismatch);
    }
    if phi.domain() != source.base().len() || phi.codomain() != target.base().len() {
        return Err(Error::BaseMismatch);
    }
    if let Some(point) = (0..source.len()).find(|&x| target.over(h.apply(x)) != phi.apply(source.over(x))) {
        return Err(Error::NonCommutingSquare { point });
    }
    let rows = (0..source.len()).map(|x| AtomicMeasure::dirac(target.len(), h.apply(x))).collect();
    Ok(Kernel { source: source.clone(), target: target.clone(), phi: phi.clone(), rows })
}

/// `k_1 ⊗ k_2`, rows the product measures, over `φ_1 × φ_2`.
pub fn tensor_kernels(k1: &Kernel, k2: &Kernel) -> Kernel {
    let mut rows = Vec::with_capacity(k1.rows.len() * k2.rows.len());
    for a in &k1.rows {
        for b in &k2.rows {
            rows.push(a.product(b));
        }
    }
    let out = Kernel {
        source: k1.source.product(&k2.source),
        target: k1.target.product(&k2.target),
        phi: product_map(&k1.phi, &k2.phi),
        rows,
    };
    debug_assert!(out.check_support().is_ok());
    out
}

/// The factorization of `k: Z → M X` over `φ: J → I` through the fibered
/// product `X ×_I J = {(x, j) : g(x) = φ(j)}` (pairs in lexicographic order,
/// over `J` by the second projection).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CartesianLift {
    /// `X ×_I J` over `J`.
    pub pullback: BasedSpace,
    /// The point pairs of the fibered product.
    pub pairs: Vec<(usize, usize)>,
    /// `k̃: Z → M(X ×_I J)` over the identity of `J`.
    pub lift: Kernel,
    /// `M p_X: X ×_I J → M X` over `φ`.
    pub projection: Kernel,
}

/// `k̃(z)(x, j) = k(z)(x) · δ(f(z), j)`.
pub fn cartesian_lift(k: &Kernel) -> Result<CartesianLift> {
    k.check_support()?;
    let (z, x, phi) = (&k.source, &k.target, &k.phi);
    let j_space = z.base().clone();
    let mut pairs = Vec::new();
    for xi in 0..x.len() {
        for j in 0..j_space.len() {
            if x.over(xi) == phi.apply(j) {
                pairs.push((xi, j));
            }
        }
    }
    let names = pairs.iter().map(|&(xi, j)| alloc::format!("{}.{}", x.space().name(xi), j_space.name(j))).collect();
    let p_space = MeasSpace::new(names)?;
    let p_j = FinMap::new(pairs.iter().map(|&(_, j)| j).collect(), j_space.len())?;
    let pullback = BasedSpace::new(p_space, j_space.clone(), p_j)?;
    let index = |xi: usize, j: usize| pairs.binary_search(&(xi, j)).ok();
    let rows = (0..z.len())
        .map(|zi| {
            let j = z.over(zi);
            let masses = k.rows[zi].masses().iter().map(|&(xi, m)| (index(xi, j).expect("support condition"), m));
            AtomicMeasure::from_pairs(pairs.len(), masses).expect("in range")
        })
        .collect();
    let lift = Kernel::new(z.clone(), pullback.clone(), FinMap::identity(j_space.len()), rows)?;
    let p_x = FinMap::new(pairs.iter().map(|&(xi, _)| xi).collect(), x.len())?;
    let projection = pushforward(&p_x, &pullback, x, phi)?;
    Ok(CartesianLift { pullback, pairs, lift, projection })
}

impl CartesianLift {
    /// Whether `candidate: Z → M(X ×_I J)` factors `k` through `M p_X`.
    pub fn factors(&self, candidate: &Kernel, k: &Kernel) -> bool {
        compose(candidate, &self.projection).is_ok_and(|c| c == *k)
    }

    /// Reconstructs the unique lift from any factorization through the
    /// marginal `a(z, x) = (M p_X ∘ k̃)(z, x)`, placed at `(x, f(z))`.
    pub fn from_marginal(&self, candidate: &Kernel) -> Result<Kernel> {
        let marginal = compose(candidate, &self.projection)?;
        let z = candidate.source();
        let rows = (0..z.len())
            .map(|zi| {
                let j = z.over(zi);
                let masses = marginal.rows[zi].masses().iter().map(|&(xi, m)| {
                    let at = self.pairs.binary_search(&(xi, j)).map_err(|_| Error::SupportViolation { source: zi, target: xi })?;
                    Ok((at, m))
                });
                AtomicMeasure::from_pairs(self.pairs.len(), masses.collect::<Result<Vec<_>>>()?)
            })
            .collect::<Result<Vec<_>>>()?;
        Kernel::new(z.clone(), self.pullback.clone(), candidate.phi().clone(), rows)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    fn two_by_two(a: [(i128, i128); 4]) -> Kernel {
        let s = MeasSpace::of_size("s", 2);
        let rows = (0..2)
            .map(|r| {
                AtomicMeasure::from_pairs(2, (0..2).map(|c| (c, rat(a[r * 2 + c].0, a[r * 2 + c].1)))).unwrap()
            })
            .collect();
        Kernel::plain(s.clone(), s, rows).unwrap()
    }

    #[test]
    fn stochastic_matrices_multiply() {
        let p = two_by_two([(1, 2), (1, 2), (1, 3), (2, 3)]);
        let q = two_by_two([(1, 1), (0, 1), (1, 4), (3, 4)]);
        let pq = compose(&p, &q).unwrap();
        // Row 0: (1/2 + 1/8, 3/8); row 1: (1/3 + 1/6, 1/2).
        assert_eq!(pq, two_by_two([(5, 8), (3, 8), (1, 2), (1, 2)]));
        assert!(pq.is_stochastic());
    }

    #[test]
    fn dirac_is_identity() {
        let k = two_by_two([(2, 1), (-1, 1), (0, 1), (3, 1)]);
        let d = dirac(k.source());
        assert_eq!(compose(&d, &k).unwrap(), k);
        assert_eq!(compose(&k, &d).unwrap(), k);
        assert_eq!(compose(&d, &d).unwrap(), d);
        assert_eq!(d.norm(), rat(1, 1));
        let empty = dirac(&BasedSpace::trivial(MeasSpace::of_size("e", 0)));
        assert!(empty.rows().is_empty());
        assert_eq!(empty.norm(), rat(0, 1));
    }

    #[test]
    fn norms_are_submultiplicative() {
        let k = two_by_two([(2, 1), (0, 1), (1, 1), (-1, 1)]);
        let l = two_by_two([(1, 1), (2, 1), (0, 1), (3, 1)]);
        assert_eq!((k.norm(), l.norm()), (rat(2, 1), rat(3, 1)));
        let kl = compose(&k, &l).unwrap();
        // Rows (2, 4) and (1, -1): norms 6 and 2.
        assert_eq!(kl.norm(), rat(6, 1));
        assert!(kl.norm() <= k.norm() * l.norm());
    }

    #[test]
    fn mismatches_and_support() {
        let k = two_by_two([(1, 1), (0, 1), (0, 1), (1, 1)]);
        let other = Kernel::plain(MeasSpace::of_size("t", 2), MeasSpace::of_size("t", 2), k.rows().to_vec()).unwrap();
        assert_eq!(compose(&k, &other), Err(Error::SpaceMismatch));
        let x = MeasSpace::of_size("x", 2);
        let over = BasedSpace::over_itself(x.clone());
        let bad = Kernel::new(over.clone(), over.clone(), FinMap::identity(2), alloc::vec![AtomicMeasure::dirac(2, 1), AtomicMeasure::dirac(2, 1)]);
        assert_eq!(bad, Err(Error::SupportViolation { source: 0, target: 1 }));
        let twisted = BasedSpace::new(x.clone(), x, FinMap::new(alloc::vec![1, 0], 2).unwrap()).unwrap();
        let d = dirac(&over);
        let e = Kernel::new(twisted.clone(), twisted, FinMap::identity(2), d.rows().to_vec()).unwrap();
        assert_eq!(compose(&d, &e), Err(Error::BaseMismatch));
    }

    #[test]
    fn pushforward_is_functorial() {
        let x = BasedSpace::trivial(MeasSpace::of_size("x", 3));
        let h = FinMap::new(alloc::vec![1, 1, 0], 3).unwrap();
        let g = FinMap::new(alloc::vec![2, 0, 2], 3).unwrap();
        let one = FinMap::identity(1);
        let ph = pushforward(&h, &x, &x, &one).unwrap();
        let pg = pushforward(&g, &x, &x, &one).unwrap();
        let pgh = pushforward(&h.then(&g).unwrap(), &x, &x, &one).unwrap();
        assert_eq!(compose(&ph, &pg).unwrap(), pgh);
        assert_eq!(pushforward(&FinMap::identity(3), &x, &x, &one).unwrap(), dirac(&x));
        let c = pushforward(&FinMap::constant(3, 3, 2).unwrap(), &x, &x, &one).unwrap();
        assert!(c.rows().iter().all(|r| r.masses() == [(2, rat(1, 1))]));
    }

    #[test]
    fn non_commuting_square_is_rejected() {
        let x = BasedSpace::over_itself(MeasSpace::of_size("x", 2));
        let swap = FinMap::new(alloc::vec![1, 0], 2).unwrap();
        assert_eq!(pushforward(&swap, &x, &x, &FinMap::identity(2)), Err(Error::NonCommutingSquare { point: 0 }));
        assert!(pushforward(&swap, &x, &x, &swap).is_ok());
    }

    #[test]
    fn diracs_tensor_to_dirac() {
        let a = BasedSpace::trivial(MeasSpace::of_size("a", 2));
        let b = BasedSpace::over_itself(MeasSpace::of_size("b", 3));
        let t = tensor_kernels(&dirac(&a), &dirac(&b));
        assert_eq!(t, dirac(&a.product(&b)));
    }

    #[test]
    fn lift_over_two_point_fiber() {
        // Z = {z0, z1} over J = {j0, j1}, X = {x0, x1, x2} over I = {i}.
        let j = MeasSpace::of_size("j", 2);
        let z = BasedSpace::new(MeasSpace::of_size("z", 2), j.clone(), FinMap::new(alloc::vec![1, 0], 2).unwrap()).unwrap();
        let x = BasedSpace::trivial(MeasSpace::of_size("x", 3));
        let phi = FinMap::constant(2, 1, 0).unwrap();
        let rows = alloc::vec![
            AtomicMeasure::from_pairs(3, [(0, rat(1, 2)), (2, rat(-3, 1))]).unwrap(),
            AtomicMeasure::from_pairs(3, [(1, rat(5, 7))]).unwrap(),
        ];
        let k = Kernel::new(z, x, phi, rows).unwrap();
        let cl = cartesian_lift(&k).unwrap();
        assert_eq!(cl.pairs.len(), 6);
        // Hand oracle: mass k(z)(x) at (x, f(z)).
        let at = |xi: usize, ji: usize| cl.pairs.iter().position(|&p| p == (xi, ji)).unwrap();
        assert_eq!(cl.lift.row(0).masses(), &[(at(0, 1), rat(1, 2)), (at(2, 1), rat(-3, 1))]);
        assert_eq!(cl.lift.row(1).masses(), &[(at(1, 0), rat(5, 7))]);
        assert!(cl.factors(&cl.lift, &k));
        assert_eq!(cl.from_marginal(&cl.lift).unwrap(), cl.lift);
        // Extra mass off the graph of f changes the marginal.
        let mut rows = cl.lift.rows().to_vec();
        rows[0] = rows[0].add(&AtomicMeasure::from_pairs(6, [(at(1, 0), rat(1, 1))]).unwrap());
        let off = Kernel { rows, ..cl.lift.clone() };
        assert!(!cl.factors(&off, &k));
        assert!(off.check_support().is_err());
    }

    #[test]
    fn lift_over_identity_is_reindexing() {
        let i = MeasSpace::of_size("i", 2);
        let z = BasedSpace::new(MeasSpace::of_size("z", 2), i.clone(), FinMap::new(alloc::vec![0, 1], 2).unwrap()).unwrap();
        let x = BasedSpace::new(MeasSpace::of_size("x", 3), i, FinMap::new(alloc::vec![1, 0, 1], 2).unwrap()).unwrap();
        let rows = alloc::vec![
            AtomicMeasure::from_pairs(3, [(1, rat(2, 1))]).unwrap(),
            AtomicMeasure::from_pairs(3, [(0, rat(1, 1)), (2, rat(1, 3))]).unwrap(),
        ];
        let k = Kernel::new(z, x, FinMap::identity(2), rows).unwrap();
        let cl = cartesian_lift(&k).unwrap();
        // X ×_I I ≅ X: one pair per point of X.
        assert_eq!(cl.pairs, alloc::vec![(0, 1), (1, 0), (2, 1)]);
        for (zi, row) in k.rows().iter().enumerate() {
            assert_eq!(cl.lift.row(zi).masses(), row.masses());
        }
    }
}
