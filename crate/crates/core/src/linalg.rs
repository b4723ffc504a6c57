//! Dense matrices over an exact field: products, block sums, Kronecker
//! products, rank and inverses.

use alloc::vec::Vec;

use crate::arith::Field;

#[derive(Debug, Clone, PartialEq)]
pub struct Matrix<F: Field> {
    field: F,
    rows: usize,
    cols: usize,
    data: Vec<F::Elem>,
}

impl<F: Field> Matrix<F> {
    pub fn zeros(field: &F, rows: usize, cols: usize) -> Self {
        Matrix {
            data: alloc::vec![field.zero(); rows * cols],
            field: field.clone(),
            rows,
            cols,
        }
    }

    pub fn identity(field: &F, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    /// Builds a matrix from row-major entries.
    pub fn from_rows(field: &F, rows: usize, cols: usize, data: Vec<F::Elem>) -> Option<Self> {
        (data.len() == rows * cols).then(|| Matrix {
            field: field.clone(),
            rows,
            cols,
            data,
        })
    }

    pub fn field(&self) -> &F {
        &self.field
    }
    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }
    pub fn get(&self, r: usize, c: usize) -> F::Elem {
        self.data[r * self.cols + c]
    }
    pub fn set(&mut self, r: usize, c: usize, v: F::Elem) {
        self.data[r * self.cols + c] = v;
    }
    pub fn entries(&self) -> &[F::Elem] {
        &self.data
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols && *self == Self::identity(&self.field, self.rows)
    }

    /// `self * rhs`; `None` on a shape mismatch.
    pub fn mul(&self, rhs: &Self) -> Option<Self> {
        if self.cols != rhs.rows {
            return None;
        }
        let f = &self.field;
        let mut out = Self::zeros(f, self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if f.is_zero(a) {
                    continue;
                }
                for j in 0..rhs.cols {
                    let v = f.add(out.get(i, j), f.mul(a, rhs.get(k, j)));
                    out.set(i, j, v);
                }
            }
        }
        Some(out)
    }

    /// Block-diagonal sum.
    pub fn direct_sum(&self, rhs: &Self) -> Self {
        let mut out = Self::zeros(&self.field, self.rows + rhs.rows, self.cols + rhs.cols);
        out.paste(0, 0, self);
        out.paste(self.rows, self.cols, rhs);
        out
    }

    /// Block-diagonal sum of a family; the empty family gives the 0×0 matrix.
    pub fn block_diagonal(field: &F, blocks: &[Self]) -> Self {
        let rows = blocks.iter().map(|b| b.rows).sum();
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut out = Self::zeros(field, rows, cols);
        let (mut r, mut c) = (0, 0);
        for b in blocks {
            out.paste(r, c, b);
            r += b.rows;
            c += b.cols;
        }
        out
    }

    /// Copies `block` into `self` with its top-left corner at `(r, c)`.
    pub fn paste(&mut self, r: usize, c: usize, block: &Self) {
        for i in 0..block.rows {
            for j in 0..block.cols {
                self.set(r + i, c + j, block.get(i, j));
            }
        }
    }

    /// Kronecker product, rows and columns indexed lexicographically.
    pub fn kronecker(&self, rhs: &Self) -> Self {
        let f = &self.field;
        let mut out = Self::zeros(f, self.rows * rhs.rows, self.cols * rhs.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if f.is_zero(a) {
                    continue;
                }
                for k in 0..rhs.rows {
                    for l in 0..rhs.cols {
                        out.set(i * rhs.rows + k, j * rhs.cols + l, f.mul(a, rhs.get(k, l)));
                    }
                }
            }
        }
        out
    }

    fn row_echelon(&self) -> (Self, usize) {
        let f = &self.field;
        let mut m = self.clone();
        let mut rank = 0;
        for col in 0..m.cols {
            let Some(pivot) = (rank..m.rows).find(|&r| !f.is_zero(m.get(r, col))) else {
                continue;
            };
            m.swap_rows(rank, pivot);
            let inv = f.inv(m.get(rank, col)).expect("nonzero pivot");
            for j in 0..m.cols {
                let v = f.mul(m.get(rank, j), inv);
                m.set(rank, j, v);
            }
            for r in 0..m.rows {
                if r == rank {
                    continue;
                }
                let factor = m.get(r, col);
                if f.is_zero(factor) {
                    continue;
                }
                for j in 0..m.cols {
                    let v = f.sub(m.get(r, j), f.mul(factor, m.get(rank, j)));
                    m.set(r, j, v);
                }
            }
            rank += 1;
        }
        (m, rank)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn rank(&self) -> usize {
        self.row_echelon().1
    }

    /// Inverse of a square matrix, `None` if singular or not square.
    pub fn inverse(&self) -> Option<Self> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let mut aug = Self::zeros(&self.field, n, 2 * n);
        aug.paste(0, 0, self);
        aug.paste(0, n, &Self::identity(&self.field, n));
        let (red, _) = aug.row_echelon();
        for i in 0..n {
            for j in 0..n {
                let expect = if i == j { self.field.one() } else { self.field.zero() };
                if red.get(i, j) != expect {
                    return None;
                }
            }
        }
        let mut inv = Self::zeros(&self.field, n, n);
        for i in 0..n {
            for j in 0..n {
                inv.set(i, j, red.get(i, n + j));
            }
        }
        Some(inv)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{rat, PrimeField, Rationals};

    #[test]
    fn inverse_round_trip_over_rationals() {
        let q = Rationals;
        let m = Matrix::from_rows(&q, 2, 2, alloc::vec![rat(2, 1), rat(1, 1), rat(1, 1), rat(1, 1)])
            .unwrap();
        let inv = m.inverse().unwrap();
        assert!(m.mul(&inv).unwrap().is_identity());
        let singular =
            Matrix::from_rows(&q, 2, 2, alloc::vec![rat(1, 1), rat(2, 1), rat(2, 1), rat(4, 1)])
                .unwrap();
        assert_eq!(singular.rank(), 1);
        assert!(singular.inverse().is_none());
    }

    #[test]
    fn kronecker_shapes_and_mixed_product() {
        let f = PrimeField::new(3).unwrap();
        let a = Matrix::from_rows(&f, 2, 1, alloc::vec![1, 2]).unwrap();
        let b = Matrix::from_rows(&f, 1, 2, alloc::vec![2, 1]).unwrap();
        let k = a.kronecker(&b);
        assert_eq!((k.rows(), k.cols()), (2, 2));
        assert_eq!(k.entries(), &[2, 1, 1, 2]);
        // (A⊗B)(C⊗D) = AC⊗BD
        let c = Matrix::from_rows(&f, 1, 2, alloc::vec![1, 1]).unwrap();
        let d = Matrix::from_rows(&f, 2, 1, alloc::vec![1, 0]).unwrap();
        let lhs = a.kronecker(&b).mul(&c.kronecker(&d)).unwrap();
        let rhs = a.mul(&c).unwrap().kronecker(&b.mul(&d).unwrap());
        assert_eq!(lhs, rhs);
    }
}
