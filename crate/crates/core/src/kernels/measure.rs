use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_traits::Zero;

use crate::arith::{rat_abs, Rational};
use crate::error::{malformed, Result};
use crate::fibered::FinMap;

/// A finite space of named points in a fixed order. Finite sets and finite
/// grids stand in for standard Borel spaces.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MeasSpace {
    points: Vec<String>,
}

impl MeasSpace {
    pub fn new(points: Vec<String>) -> Result<Self> {
        for (i, p) in points.iter().enumerate() {
            if points[..i].contains(p) {
                return Err(malformed(format!("duplicate point {p}")));
            }
        }
        Ok(MeasSpace { points })
    }

    /// Points `{prefix}0, {prefix}1, …`.
    pub fn of_size(prefix: &str, n: usize) -> Self {
        MeasSpace { points: (0..n).map(|i| format!("{prefix}{i}")).collect() }
    }

    /// The grid `a, a + h, …, b` with `steps` intervals, points named by
    /// their rational values.
    pub fn grid(a: Rational, b: Rational, steps: usize) -> Result<Self> {
        if steps == 0 {
            return Ok(MeasSpace { points: alloc::vec![format!("{a}")] });
        }
        let h = (b - a) / Rational::from_integer(steps as i128);
        Self::new((0..=steps).map(|k| format!("{}", a + h * Rational::from_integer(k as i128))).collect())
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }
    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
    pub fn name(&self, x: usize) -> &str {
        &self.points[x]
    }
    pub fn names(&self) -> &[String] {
        &self.points
    }
    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.points.iter().position(|p| p == name)
    }

    /// `X × Y`, the pair `(x, y)` at index `x * |Y| + y`.
    pub fn product(&self, other: &MeasSpace) -> MeasSpace {
        let mut points = Vec::with_capacity(self.len() * other.len());
        for x in &self.points {
            for y in &other.points {
                points.push(format!("{x}.{y}"));
            }
        }
        MeasSpace { points }
    }
}

/// A space `X` with a map `f: X → I` to a base space.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BasedSpace {
    space: MeasSpace,
    base: MeasSpace,
    map: FinMap,
}

impl BasedSpace {
    pub fn new(space: MeasSpace, base: MeasSpace, map: FinMap) -> Result<Self> {
        if map.domain() != space.len() || map.codomain() != base.len() {
            return Err(malformed("base map does not match the spaces"));
        }
        Ok(BasedSpace { space, base, map })
    }

    /// `X` over the one-point base.
    pub fn trivial(space: MeasSpace) -> Self {
        let map = FinMap::new(alloc::vec![0; space.len()], 1).expect("in range");
        BasedSpace { space, base: MeasSpace::of_size("*", 1), map }
    }

    /// `X` over itself by the identity.
    pub fn over_itself(space: MeasSpace) -> Self {
        let map = FinMap::identity(space.len());
        BasedSpace { base: space.clone(), space, map }
    }

    pub fn space(&self) -> &MeasSpace {
        &self.space
    }
    pub fn base(&self) -> &MeasSpace {
        &self.base
    }
    pub fn map(&self) -> &FinMap {
        &self.map
    }
    pub fn len(&self) -> usize {
        self.space.len()
    }
    pub fn is_empty(&self) -> bool {
        self.space.is_empty()
    }
    pub fn over(&self, x: usize) -> usize {
        self.map.apply(x)
    }

    /// `X_1 × X_2` over `I_1 × I_2`.
    pub fn product(&self, other: &BasedSpace) -> BasedSpace {
        BasedSpace {
            space: self.space.product(&other.space),
            base: self.base.product(&other.base),
            map: product_map(&self.map, &other.map),
        }
    }
}

/// `f × g`, indices as in [`MeasSpace::product`].
pub fn product_map(f: &FinMap, g: &FinMap) -> FinMap {
    let mut table = Vec::with_capacity(f.domain() * g.domain());
    for &a in f.table() {
        for &b in g.table() {
            table.push(a * g.codomain() + b);
        }
    }
    FinMap::new(table, f.codomain() * g.codomain()).expect("in range")
}

/// A finitely supported signed measure on `0..len`, stored as the nonzero
/// masses in increasing point order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AtomicMeasure {
    len: usize,
    masses: Vec<(usize, Rational)>,
}

impl AtomicMeasure {
    pub fn zero(len: usize) -> Self {
        AtomicMeasure { len, masses: Vec::new() }
    }

    /// The unit mass at `x`.
    pub fn dirac(len: usize, x: usize) -> Self {
        assert!(x < len, "point out of range");
        AtomicMeasure { len, masses: alloc::vec![(x, Rational::from_integer(1))] }
    }

    /// Sums repeated points and drops zero masses.
    pub fn from_pairs(len: usize, pairs: impl IntoIterator<Item = (usize, Rational)>) -> Result<Self> {
        let mut acc: BTreeMap<usize, Rational> = BTreeMap::new();
        for (x, m) in pairs {
            if x >= len {
                return Err(malformed(format!("mass at point {x} outside a space of {len} points")));
            }
            *acc.entry(x).or_insert_with(Rational::zero) += m;
        }
        Ok(AtomicMeasure { len, masses: acc.into_iter().filter(|(_, m)| !m.is_zero()).collect() })
    }

    /// Size of the underlying space.
    pub fn space_len(&self) -> usize {
        self.len
    }
    pub fn masses(&self) -> &[(usize, Rational)] {
        &self.masses
    }
    pub fn mass(&self, x: usize) -> Rational {
        match self.masses.binary_search_by_key(&x, |&(p, _)| p) {
            Ok(i) => self.masses[i].1,
            Err(_) => Rational::zero(),
        }
    }
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.masses.iter().map(|&(x, _)| x)
    }
    pub fn is_zero(&self) -> bool {
        self.masses.is_empty()
    }

    /// `Σ |μ(x)|`.
    pub fn total_variation(&self) -> Rational {
        self.masses.iter().fold(Rational::zero(), |acc, (_, m)| acc + rat_abs(m))
    }
    pub fn total_mass(&self) -> Rational {
        self.masses.iter().fold(Rational::zero(), |acc, (_, m)| acc + m)
    }
    pub fn is_positive(&self) -> bool {
        self.masses.iter().all(|(_, m)| *m > Rational::zero())
    }

    pub fn scale(&self, c: Rational) -> Self {
        if c.is_zero() {
            return Self::zero(self.len);
        }
        AtomicMeasure { len: self.len, masses: self.masses.iter().map(|&(x, m)| (x, m * c)).collect() }
    }

    pub fn add(&self, other: &AtomicMeasure) -> Self {
        assert_eq!(self.len, other.len, "measures on different spaces");
        Self::from_pairs(self.len, self.masses.iter().chain(&other.masses).copied()).expect("in range")
    }

    /// The product measure on `X × Y`.
    pub fn product(&self, other: &AtomicMeasure) -> Self {
        let mut masses = Vec::with_capacity(self.masses.len() * other.masses.len());
        for &(x, a) in &self.masses {
            for &(y, b) in &other.masses {
                masses.push((x * other.len + y, a * b));
            }
        }
        AtomicMeasure { len: self.len * other.len, masses }
    }

    /// The image measure along `h`.
    pub fn pushforward(&self, h: &FinMap) -> Self {
        Self::from_pairs(h.codomain(), self.masses.iter().map(|&(x, m)| (h.apply(x), m))).expect("in range")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    #[test]
    fn measures_are_canonical() {
        let m = AtomicMeasure::from_pairs(3, [(2, rat(1, 2)), (0, rat(1, 3)), (2, rat(-1, 2))]).unwrap();
        assert_eq!(m.masses(), &[(0, rat(1, 3))]);
        assert_eq!(m.mass(2), rat(0, 1));
        assert!(AtomicMeasure::from_pairs(2, [(2, rat(1, 1))]).is_err());
        let n = AtomicMeasure::from_pairs(2, [(0, rat(-2, 1)), (1, rat(1, 1))]).unwrap();
        assert_eq!(n.total_variation(), rat(3, 1));
        assert_eq!(n.total_mass(), rat(-1, 1));
        assert_eq!(m.product(&n).total_variation(), rat(1, 1));
    }

    #[test]
    fn grids_and_products() {
        let g = MeasSpace::grid(rat(0, 1), rat(1, 1), 4).unwrap();
        assert_eq!(g.names(), &["0", "1/4", "1/2", "3/4", "1"]);
        let p = MeasSpace::of_size("a", 2).product(&MeasSpace::of_size("b", 3));
        assert_eq!(p.name(4), "a1.b1");
        assert!(MeasSpace::new(alloc::vec!["x".into(), "x".into()]).is_err());
    }
}
