//! Finitary monads on finite sets, given by their free algebras on `n`
//! generators. The truncated Kleisli category of such a monad is a theory.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt::Debug;

/// A finitary monad `T` given on finite sets `n = {0, …, n-1}`.
///
/// Elements of `T(n)` are numbered `0..free_size(n)`. An element of `T(n)`
/// is an `n`-ary term; `bind` substitutes terms for its variables.
pub trait KleisliSpec: Debug + Send + Sync {
    fn name(&self) -> String;
    /// `|T(n)|`, or `None` if it does not fit in a `u64`.
    fn free_size(&self, n: usize) -> Option<u64>;
    /// The variable `i` as an element of `T(n)`.
    fn unit(&self, n: usize, i: usize) -> u64;
    /// Substitutes `subst[i] ∈ T(n)` for variable `i` of `t ∈ T(m)`.
    fn bind(&self, t: u64, m: usize, n: usize, subst: &[u64]) -> u64;
    /// The variables `t ∈ T(m)` actually depends on, ascending.
    fn support(&self, t: u64, m: usize) -> Vec<usize>;
    /// Whether the monad is claimed commutative; checked, never trusted.
    fn claims_commutative(&self) -> bool;
    /// A number of variables sufficient to axiomatize the algebras, if known.
    /// Truncating at or above it loses no equations.
    fn equational_arity(&self) -> Option<usize> {
        None
    }

    /// The unique `s ∈ T(k)` whose substitution along the inclusion of
    /// `vars` (with `|vars| = k`) into `m` is `t`.
    fn restrict(&self, t: u64, m: usize, vars: &[usize]) -> Option<u64> {
        let k = vars.len();
        let subst: Vec<u64> = vars.iter().map(|&v| self.unit(m, v)).collect();
        (0..self.free_size(k)?).find(|&s| self.bind(s, k, m, &subst) == t)
    }
}

fn digits(mut x: u64, base: u64, len: usize) -> Vec<u64> {
    (0..len)
        .map(|_| {
            let d = x % base;
            x /= base;
            d
        })
        .collect()
}

fn undigits(d: &[u64], base: u64) -> u64 {
    d.iter().rev().fold(0, |acc, &x| acc * base + x)
}

/// Modules over the prime field `F_q`: `T(n) = F_q^n`, coordinates as
/// base-`q` digits, least significant first.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FqModules {
    pub q: u64,
}

impl KleisliSpec for FqModules {
    fn name(&self) -> String {
        format!("F{}-modules", self.q)
    }
    fn free_size(&self, n: usize) -> Option<u64> {
        self.q.checked_pow(n as u32)
    }
    fn unit(&self, _n: usize, i: usize) -> u64 {
        self.q.pow(i as u32)
    }
    fn bind(&self, t: u64, m: usize, n: usize, subst: &[u64]) -> u64 {
        let q = self.q;
        let mut acc = alloc::vec![0u64; n];
        for (i, c) in digits(t, q, m).into_iter().enumerate() {
            if c == 0 {
                continue;
            }
            for (a, s) in acc.iter_mut().zip(digits(subst[i], q, n)) {
                *a = (*a + c * s) % q;
            }
        }
        undigits(&acc, q)
    }
    fn support(&self, t: u64, m: usize) -> Vec<usize> {
        digits(t, self.q, m)
            .into_iter()
            .enumerate()
            .filter(|&(_, d)| d != 0)
            .map(|(i, _)| i)
            .collect()
    }
    fn equational_arity(&self) -> Option<usize> {
        Some(3)
    }
    fn claims_commutative(&self) -> bool {
        true
    }
    fn restrict(&self, t: u64, m: usize, vars: &[usize]) -> Option<u64> {
        let d = digits(t, self.q, m);
        let outside = (0..m).any(|i| d[i] != 0 && !vars.contains(&i));
        let kept: Vec<u64> = vars.iter().map(|&v| d[v]).collect();
        (!outside).then(|| undigits(&kept, self.q))
    }
}

/// Pointed sets: `T(n) = n + 1`, the element `n` being the base point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct PointedSets;

impl KleisliSpec for PointedSets {
    fn name(&self) -> String {
        "pointed-sets".into()
    }
    fn free_size(&self, n: usize) -> Option<u64> {
        Some(n as u64 + 1)
    }
    fn unit(&self, _n: usize, i: usize) -> u64 {
        i as u64
    }
    fn bind(&self, t: u64, m: usize, n: usize, subst: &[u64]) -> u64 {
        if t as usize == m {
            n as u64
        } else {
            subst[t as usize]
        }
    }
    fn support(&self, t: u64, m: usize) -> Vec<usize> {
        if t as usize == m {
            Vec::new()
        } else {
            alloc::vec![t as usize]
        }
    }
    fn equational_arity(&self) -> Option<usize> {
        Some(1)
    }
    fn claims_commutative(&self) -> bool {
        true
    }
}

/// Idempotent commutative monoids: `T(n)` is the set of subsets of `n`,
/// as bitmasks, with union as the operation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Semilattices;

impl KleisliSpec for Semilattices {
    fn name(&self) -> String {
        "idempotent-commutative-monoids".into()
    }
    fn free_size(&self, n: usize) -> Option<u64> {
        1u64.checked_shl(n as u32)
    }
    fn unit(&self, _n: usize, i: usize) -> u64 {
        1 << i
    }
    fn bind(&self, t: u64, m: usize, _n: usize, subst: &[u64]) -> u64 {
        (0..m).filter(|i| t >> i & 1 == 1).fold(0, |acc, i| acc | subst[i])
    }
    fn support(&self, t: u64, m: usize) -> Vec<usize> {
        (0..m).filter(|i| t >> i & 1 == 1).collect()
    }
    fn equational_arity(&self) -> Option<usize> {
        Some(3)
    }
    fn claims_commutative(&self) -> bool {
        true
    }
}

/// The identity monad: its Kleisli category is finite sets itself.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Degenerate;

impl KleisliSpec for Degenerate {
    fn name(&self) -> String {
        "degenerate".into()
    }
    fn free_size(&self, n: usize) -> Option<u64> {
        Some(n as u64)
    }
    fn unit(&self, _n: usize, i: usize) -> u64 {
        i as u64
    }
    fn bind(&self, t: u64, _m: usize, _n: usize, subst: &[u64]) -> u64 {
        subst[t as usize]
    }
    fn support(&self, t: u64, _m: usize) -> Vec<usize> {
        alloc::vec![t as usize]
    }
    fn equational_arity(&self) -> Option<usize> {
        Some(1)
    }
    fn claims_commutative(&self) -> bool {
        true
    }
}

/// Left actions of a finite monoid on sets: `T(n) = M × n`, the pair
/// `(a, i)` numbered `a * n + i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonoidActions {
    pub size: usize,
    pub unit: usize,
    /// `mul[a * size + b] = a · b`.
    pub mul: Vec<usize>,
}

impl MonoidActions {
    /// `{e, a, b}` with `x · y = x` for `x ≠ e`: left zeros `a`, `b` and an
    /// identity `e = 0`. Not commutative.
    pub fn left_zero() -> Self {
        let mut mul = alloc::vec![0; 9];
        for x in 0..3 {
            for y in 0..3 {
                mul[x * 3 + y] = if x == 0 { y } else { x };
            }
        }
        MonoidActions {
            size: 3,
            unit: 0,
            mul,
        }
    }

    /// The cyclic group of order `k`; commutative.
    pub fn cyclic(k: usize) -> Self {
        let mul = (0..k * k).map(|ab| (ab / k + ab % k) % k).collect();
        MonoidActions {
            size: k,
            unit: 0,
            mul,
        }
    }
}

impl KleisliSpec for MonoidActions {
    fn name(&self) -> String {
        format!("monoid-actions-{}", self.size)
    }
    fn free_size(&self, n: usize) -> Option<u64> {
        Some((self.size * n) as u64)
    }
    fn unit(&self, n: usize, i: usize) -> u64 {
        (self.unit * n + i) as u64
    }
    fn bind(&self, t: u64, m: usize, n: usize, subst: &[u64]) -> u64 {
        let (a, i) = (t as usize / m, t as usize % m);
        let s = subst[i] as usize;
        let (b, j) = (s / n, s % n);
        (self.mul[a * self.size + b] * n + j) as u64
    }
    fn support(&self, t: u64, m: usize) -> Vec<usize> {
        alloc::vec![t as usize % m]
    }
    fn equational_arity(&self) -> Option<usize> {
        Some(1)
    }
    fn claims_commutative(&self) -> bool {
        (0..self.size).all(|a| (0..self.size).all(|b| self.mul[a * self.size + b] == self.mul[b * self.size + a]))
    }
    fn restrict(&self, t: u64, m: usize, vars: &[usize]) -> Option<u64> {
        let (a, i) = (t as usize / m, t as usize % m);
        let k = vars.len();
        let pos = vars.iter().position(|&v| v == i)?;
        Some((a * k + pos) as u64)
    }
}
