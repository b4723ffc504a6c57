//! Exact scalars: the rationals and prime fields.

use core::fmt::Debug;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Exact rational number. Desk-scale computations stay far below the `i128`
/// range; overflow panics rather than wrapping.
pub type Rational = num_rational::Ratio<i128>;

pub fn rat(n: i128, d: i128) -> Rational {
    Rational::new(n, d)
}

/// Absolute value of a rational.
pub fn rat_abs(q: &Rational) -> Rational {
    q.abs()
}

/// A field whose elements are cheap to copy. The field value itself carries
/// any runtime parameter (the characteristic of a prime field).
pub trait Field: Clone + PartialEq + Debug {
    type Elem: Copy + PartialEq + Debug;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: Self::Elem, b: Self::Elem) -> Self::Elem;
    fn neg(&self, a: Self::Elem) -> Self::Elem;
    fn mul(&self, a: Self::Elem, b: Self::Elem) -> Self::Elem;
    /// Multiplicative inverse; `None` for zero.
    fn inv(&self, a: Self::Elem) -> Option<Self::Elem>;
    fn from_i64(&self, n: i64) -> Self::Elem;

    fn sub(&self, a: Self::Elem, b: Self::Elem) -> Self::Elem {
        self.add(a, self.neg(b))
    }

    fn is_zero(&self, a: Self::Elem) -> bool {
        a == self.zero()
    }
}

/// The field of rational numbers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = Rational;

    fn zero(&self) -> Rational {
        Rational::zero()
    }
    fn one(&self) -> Rational {
        Rational::one()
    }
    fn add(&self, a: Rational, b: Rational) -> Rational {
        a + b
    }
    fn neg(&self, a: Rational) -> Rational {
        -a
    }
    fn mul(&self, a: Rational, b: Rational) -> Rational {
        a * b
    }
    fn inv(&self, a: Rational) -> Option<Rational> {
        if a.is_zero() {
            None
        } else {
            Some(a.recip())
        }
    }
    fn from_i64(&self, n: i64) -> Rational {
        Rational::from_integer(n as i128)
    }
}

/// The prime field `F_p`, elements stored as residues in `0..p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimeField {
    p: u32,
}

impl PrimeField {
    /// Returns `None` unless `p` is prime.
    pub fn new(p: u32) -> Option<Self> {
        if p < 2 {
            return None;
        }
        let mut d = 2u32;
        while d * d <= p {
            if p % d == 0 {
                return None;
            }
            d += 1;
        }
        Some(PrimeField { p })
    }

    pub fn order(&self) -> u32 {
        self.p
    }
}

impl Field for PrimeField {
    type Elem = u32;

    fn zero(&self) -> u32 {
        0
    }
    fn one(&self) -> u32 {
        1 % self.p
    }
    fn add(&self, a: u32, b: u32) -> u32 {
        ((a as u64 + b as u64) % self.p as u64) as u32
    }
    fn neg(&self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }
    fn mul(&self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.p as u64) as u32
    }
    fn inv(&self, a: u32) -> Option<u32> {
        if a % self.p == 0 {
            return None;
        }
        let e = i64::from(a).extended_gcd(&i64::from(self.p));
        Some(e.x.rem_euclid(i64::from(self.p)) as u32)
    }
    fn from_i64(&self, n: i64) -> u32 {
        n.rem_euclid(i64::from(self.p)) as u32
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_inverses() {
        let f = PrimeField::new(7).unwrap();
        for a in 1..7 {
            let b = f.inv(a).unwrap();
            assert_eq!(f.mul(a, b), 1);
        }
        assert_eq!(f.inv(0), None);
        assert!(PrimeField::new(9).is_none());
        assert_eq!(f.from_i64(-1), 6);
    }

    #[test]
    fn rationals_reduce() {
        let q = Rationals;
        assert_eq!(q.add(rat(1, 2), rat(1, 3)), rat(5, 6));
        assert_eq!(q.inv(rat(-2, 3)), Some(rat(-3, 2)));
        assert_eq!(rat_abs(&rat(-3, 4)), rat(3, 4));
    }
}
