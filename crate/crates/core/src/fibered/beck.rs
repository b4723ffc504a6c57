use alloc::vec::Vec;

use super::bundle::{
    pullback_bundle, pullback_map, sigma_bundle, sigma_counit, sigma_map, sigma_unit, tensor_bundle,
    tensor_map, BundleMap, FinMap, LinearBundle,
};
use crate::arith::Field;
use crate::error::{precondition, Result};

/// A commuting square of finite sets
///
/// ```text
///   P --top--> A
///   |          |
///  left      right
///   v          v
///   B -bottom-> C
/// ```
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Square {
    top: FinMap,
    left: FinMap,
    right: FinMap,
    bottom: FinMap,
}

impl Square {
    pub fn new(top: FinMap, left: FinMap, right: FinMap, bottom: FinMap) -> Result<Self> {
        let shapes = top.domain() == left.domain()
            && top.codomain() == right.domain()
            && left.codomain() == bottom.domain()
            && right.codomain() == bottom.codomain();
        if !shapes {
            return Err(precondition("square maps do not line up"));
        }
        if let Some(p) = (0..top.domain()).find(|&p| right.apply(top.apply(p)) != bottom.apply(left.apply(p))) {
            return Err(precondition(alloc::format!("square does not commute at {p}")));
        }
        Ok(Square { top, left, right, bottom })
    }

    /// The fiber product `A ×_C B` of `right: A → C` and `bottom: B → C`,
    /// pairs `(a, b)` in lexicographic order.
    pub fn pullback(right: FinMap, bottom: FinMap) -> Result<Self> {
        if right.codomain() != bottom.codomain() {
            return Err(precondition("maps have different codomains"));
        }
        let mut pa = Vec::new();
        let mut pb = Vec::new();
        for a in 0..right.domain() {
            for b in 0..bottom.domain() {
                if right.apply(a) == bottom.apply(b) {
                    pa.push(a);
                    pb.push(b);
                }
            }
        }
        let top = FinMap::new(pa, right.domain())?;
        let left = FinMap::new(pb, bottom.domain())?;
        Self::new(top, left, right, bottom)
    }

    pub fn top(&self) -> &FinMap {
        &self.top
    }
    pub fn left(&self) -> &FinMap {
        &self.left
    }
    pub fn right(&self) -> &FinMap {
        &self.right
    }
    pub fn bottom(&self) -> &FinMap {
        &self.bottom
    }

    /// Whether `(top, left)` is a bijection onto `A ×_C B`.
    pub fn is_pullback(&self) -> bool {
        let mut seen = hashbrown::HashSet::new();
        let pairs_ok = (0..self.top.domain()).all(|p| seen.insert((self.top.apply(p), self.left.apply(p))));
        let expected = (0..self.right.domain())
            .map(|a| self.bottom.fiber(self.right.apply(a)).count())
            .sum::<usize>();
        pairs_ok && seen.len() == expected
    }
}

/// Either a witnessed isomorphism or the canonical map with a point where it
/// fails to be invertible.
#[derive(Debug, Clone, PartialEq)]
pub enum Witness<F: Field> {
    Iso { forward: BundleMap<F>, backward: BundleMap<F> },
    NotIso { map: BundleMap<F>, point: usize, source_dim: usize, target_dim: usize, rank: usize },
}

impl<F: Field> Witness<F> {
    fn of(map: BundleMap<F>) -> Self {
        match map.inverse() {
            Some(backward) => Witness::Iso { forward: map, backward },
            None => {
                let (point, rank) = map.singular_point().expect("a block is singular");
                Witness::NotIso {
                    point,
                    source_dim: map.source().dim(point),
                    target_dim: map.target().dim(point),
                    rank,
                    map,
                }
            }
        }
    }

    pub fn is_iso(&self) -> bool {
        matches!(self, Witness::Iso { .. })
    }

    /// Re-checks an isomorphism witness: both composites are identities.
    pub fn verify(&self) -> bool {
        match self {
            Witness::Iso { forward, backward } => {
                forward.then(backward).is_ok_and(|m| m.is_identity())
                    && backward.then(forward).is_ok_and(|m| m.is_identity())
            }
            Witness::NotIso { .. } => false,
        }
    }

    pub fn map(&self) -> &BundleMap<F> {
        match self {
            Witness::Iso { forward, .. } => forward,
            Witness::NotIso { map, .. } => map,
        }
    }
}

/// The canonical map `top_! left^* V → right^* bottom_! V` for `V` over `B`:
/// the unit of `bottom_! ⊣ bottom^*`, pulled back along `left` and pushed along
/// `top`, followed by the counit of `top_! ⊣ top^*`.
pub fn beck_chevalley_map<F: Field>(sq: &Square, v: &LinearBundle<F>) -> Result<BundleMap<F>> {
    let unit = sigma_unit(&sq.bottom, v)?;
    let middle = sigma_map(&sq.top, &pullback_map(&sq.left, &unit)?)?;
    let pushed = sigma_bundle(&sq.bottom, v)?;
    let counit = sigma_counit(&sq.top, &pullback_bundle(&sq.right, &pushed)?)?;
    middle.then(&counit)
}

pub fn check_beck_chevalley<F: Field>(sq: &Square, v: &LinearBundle<F>) -> Result<Witness<F>> {
    Ok(Witness::of(beck_chevalley_map(sq, v)?))
}

/// The canonical map `Σ_φ(φ*T' ⊗ T) → T' ⊗ Σ_φ T`: `id ⊗ η` under `Σ_φ`,
/// then the counit at `T' ⊗ Σ_φ T`.
pub fn projection_map<F: Field>(
    phi: &FinMap,
    t_prime: &LinearBundle<F>,
    t: &LinearBundle<F>,
) -> Result<BundleMap<F>> {
    let pulled = pullback_bundle(phi, t_prime)?;
    let inner = tensor_map(&BundleMap::identity(&pulled), &sigma_unit(phi, t)?)?;
    let pushed = sigma_map(phi, &inner)?;
    let rhs = tensor_bundle(t_prime, &sigma_bundle(phi, t)?)?;
    pushed.then(&sigma_counit(phi, &rhs)?)
}

pub fn check_projection_formula<F: Field>(
    phi: &FinMap,
    t_prime: &LinearBundle<F>,
    t: &LinearBundle<F>,
) -> Result<Witness<F>> {
    Ok(Witness::of(projection_map(phi, t_prime, t)?))
}

/// Naturality of the projection map in both arguments, for bundle maps
/// `a': T' → S'` over the codomain and `a: T → S` over the domain of `φ`.
pub fn projection_is_natural<F: Field>(phi: &FinMap, a_prime: &BundleMap<F>, a: &BundleMap<F>) -> Result<bool> {
    let before = projection_map(phi, a_prime.source(), a.source())?;
    let after = projection_map(phi, a_prime.target(), a.target())?;
    let lhs_leg = sigma_map(phi, &tensor_map(&pullback_map(phi, a_prime)?, a)?)?;
    let rhs_leg = tensor_map(a_prime, &sigma_map(phi, a)?)?;
    let lhs = lhs_leg.then(&after)?;
    let rhs = before.then(&rhs_leg)?;
    Ok(lhs.agrees_with(&rhs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{rat, PrimeField, Rationals};
    use crate::linalg::Matrix;

    #[test]
    fn identity_square_gives_identity_comparison() {
        let v = LinearBundle::new(&Rationals, alloc::vec![2, 1, 3]);
        let id = FinMap::identity(3);
        let sq = Square::pullback(id.clone(), id).unwrap();
        match check_beck_chevalley(&sq, &v).unwrap() {
            Witness::Iso { forward, .. } => assert!(forward.is_identity()),
            w => panic!("{w:?}"),
        }
    }

    #[test]
    fn mixed_square_is_iso_with_hand_computed_fibers() {
        // right: A(3) → C(2), bottom: B(3) → C(2).
        let right = FinMap::new(alloc::vec![0, 1, 1], 2).unwrap();
        let bottom = FinMap::new(alloc::vec![1, 0, 1], 2).unwrap();
        let sq = Square::pullback(right.clone(), bottom.clone()).unwrap();
        assert_eq!(sq.top().domain(), 5);
        let v = LinearBundle::new(&Rationals, alloc::vec![2, 3, 1]);
        let w = check_beck_chevalley(&sq, &v).unwrap();
        assert!(w.verify());
        // Over a, both sides are ⊕ of V_b for b with bottom(b) = right(a).
        for a in 0..3 {
            let expect: usize = (0..3).filter(|&b| bottom.apply(b) == right.apply(a)).map(|b| v.dim(b)).sum();
            assert_eq!(w.map().source().dim(a), expect);
            assert_eq!(w.map().target().dim(a), expect);
        }
        assert_eq!(w.map().target().dims(), &[3, 3, 3]);
    }

    #[test]
    fn doubled_square_fails_by_dimension() {
        let right = FinMap::new(alloc::vec![0, 0], 1).unwrap();
        let bottom = FinMap::identity(1);
        let pb = Square::pullback(right.clone(), bottom.clone()).unwrap();
        let twice = |m: &FinMap| FinMap::new([m.table(), m.table()].concat(), m.codomain()).unwrap();
        let sq = Square::new(twice(pb.top()), twice(pb.left()), right, bottom).unwrap();
        assert!(!sq.is_pullback());
        let v = LinearBundle::new(&Rationals, alloc::vec![2]);
        match check_beck_chevalley(&sq, &v).unwrap() {
            Witness::NotIso { source_dim, target_dim, rank, .. } => {
                assert_eq!((source_dim, target_dim, rank), (4, 2, 2));
            }
            w => panic!("{w:?}"),
        }
    }

    #[test]
    fn projection_formula_over_two_points() {
        let q = Rationals;
        let phi = FinMap::constant(2, 1, 0).unwrap();
        let tp = LinearBundle::new(&q, alloc::vec![3]);
        let t = LinearBundle::new(&q, alloc::vec![1, 2]);
        let w = check_projection_formula(&phi, &tp, &t).unwrap();
        assert!(w.verify());
        // Hand oracle: (a) in T'⊗T_0 goes to (a, 0); (a, b) in T'⊗T_1 to (a, 1 + b).
        let mut expect = Matrix::zeros(&q, 9, 9);
        for a in 0..3 {
            expect.set(a * 3, a, rat(1, 1));
            for b in 0..2 {
                expect.set(a * 3 + 1 + b, 3 + a * 2 + b, rat(1, 1));
            }
        }
        assert_eq!(w.map().block(0), &expect);
    }

    #[test]
    fn projection_formula_trivial_cases() {
        let f = PrimeField::new(5).unwrap();
        let id = FinMap::identity(2);
        let tp = LinearBundle::new(&f, alloc::vec![2, 1]);
        let t = LinearBundle::new(&f, alloc::vec![3, 2]);
        assert!(projection_map(&id, &tp, &t).unwrap().is_identity());
        let zero = LinearBundle::zero(&f, 2);
        let w = check_projection_formula(&FinMap::constant(2, 1, 0).unwrap(), &LinearBundle::new(&f, alloc::vec![2]), &zero)
            .unwrap();
        assert!(w.is_iso());
        assert_eq!(w.map().source().dims(), &[0]);
    }

    #[test]
    fn projection_naturality_on_scalings() {
        let q = Rationals;
        let phi = FinMap::new(alloc::vec![0, 0, 1], 2).unwrap();
        let tp = LinearBundle::new(&q, alloc::vec![1, 2]);
        let t = LinearBundle::new(&q, alloc::vec![2, 1, 1]);
        let scale = |v: &LinearBundle<Rationals>, s: i128| {
            let blocks = v
                .dims()
                .iter()
                .map(|&d| {
                    let mut m = Matrix::identity(&q, d);
                    if d > 0 {
                        m.set(0, d - 1, rat(s, 1));
                    }
                    m
                })
                .collect();
            BundleMap::new(v.clone(), v.clone(), blocks).unwrap()
        };
        assert!(projection_is_natural(&phi, &scale(&tp, 2), &scale(&t, -3)).unwrap());
    }
}
