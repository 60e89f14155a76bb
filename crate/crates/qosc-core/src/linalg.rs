//! Dense exact linear algebra over a coefficient field.

use alloc::vec;
use alloc::vec::Vec;

use crate::coeff::Field;
use crate::error::Error;

/// A dense row-major matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<C> {
    rows: usize,
    cols: usize,
    data: Vec<C>,
}

impl<C: Field> Matrix<C> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![C::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, C::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<C>>, cols: usize) -> Self {
        let r = rows.len();
        let mut data = Vec::with_capacity(r * cols);
        for row in rows {
            assert_eq!(row.len(), cols, "ragged rows");
            data.extend(row);
        }
        Matrix { rows: r, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &C {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: C) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[C] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn push_row(&mut self, row: Vec<C>) {
        assert_eq!(row.len(), self.cols, "row length");
        self.data.extend(row);
        self.rows += 1;
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.cols, o.rows, "shape mismatch");
        let mut r = Self::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let b = o.get(k, j);
                    if !b.is_zero() {
                        let v = r.get(i, j).add(&a.mul(b));
                        r.set(i, j, v);
                    }
                }
            }
        }
        r
    }

    pub fn sub(&self, o: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols), "shape mismatch");
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().zip(&o.data).map(|(a, b)| a.sub(b)).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    /// Reduced row echelon form in place; returns pivot columns.
    ///
    /// Pivots are chosen as the first nonzero entry in row order, so results
    /// are deterministic for a given matrix.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !self.get(i, c).is_zero()) else {
                continue;
            };
            if p != r {
                for j in 0..self.cols {
                    self.data.swap(p * self.cols + j, r * self.cols + j);
                }
            }
            let inv = self.get(r, c).inv().expect("nonzero pivot");
            for j in c..self.cols {
                let v = self.get(r, j).mul(&inv);
                self.set(r, j, v);
            }
            for i in 0..self.rows {
                if i == r {
                    continue;
                }
                let fct = self.get(i, c).clone();
                if fct.is_zero() {
                    continue;
                }
                for j in c..self.cols {
                    let rv = self.get(r, j);
                    if rv.is_zero() {
                        continue;
                    }
                    let v = self.get(i, j).sub(&fct.mul(rv));
                    self.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        self.data.truncate(r * self.cols);
        self.rows = r;
        pivots
    }

    pub fn rank(&self) -> usize {
        self.clone().rref().len()
    }

    /// Basis of the right kernel, one vector per free column in increasing order.
    pub fn kernel(&self) -> Vec<Vec<C>> {
        let mut m = self.clone();
        let piv = m.rref();
        let mut out = Vec::new();
        for free in (0..self.cols).filter(|c| !piv.contains(c)) {
            let mut v = vec![C::zero(); self.cols];
            v[free] = C::one();
            for (r, &pc) in piv.iter().enumerate() {
                v[pc] = m.get(r, free).neg();
            }
            out.push(v);
        }
        out
    }

    /// Solves `self * x = b` for a unique `x`.
    pub fn solve(&self, b: &[C]) -> Result<Vec<C>, Error> {
        assert_eq!(b.len(), self.rows, "rhs length");
        let mut aug = Self::zeros(self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, self.cols, b[i].clone());
        }
        let piv = aug.rref();
        if piv.last() == Some(&self.cols) {
            return Err(Error::Inconsistent);
        }
        if piv.len() < self.cols {
            return Err(Error::Underdetermined(self.cols - piv.len()));
        }
        Ok((0..self.cols).map(|r| aug.get(r, self.cols).clone()).collect())
    }

    /// Inverse of a square matrix.
    pub fn inverse(&self) -> Result<Self, Error> {
        assert_eq!(self.rows, self.cols, "square matrix");
        let n = self.rows;
        let mut aug = Self::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, n + i, C::one());
        }
        let piv = aug.rref();
        if piv.len() < n || piv[n - 1] >= n {
            return Err(Error::DivisionByZero);
        }
        let mut r = Self::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                r.set(i, j, aug.get(i, n + j).clone());
            }
        }
        Ok(r)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Scalar;

    fn s(x: i64) -> Scalar {
        Scalar::from_i64(x)
    }

    #[test]
    fn kernel_of_rank_one() {
        let m = Matrix::from_rows(vec![vec![s(1), s(2), s(3)], vec![s(2), s(4), s(6)]], 3);
        let k = m.kernel();
        assert_eq!(k.len(), 2);
        for v in &k {
            for r in 0..2 {
                let dot = (0..3).fold(Scalar::zero(), |a, j| a.add(&m.get(r, j).mul(&v[j])));
                assert!(dot.is_zero());
            }
        }
    }

    #[test]
    fn solve_and_inverse() {
        let q = Scalar::q();
        let m = Matrix::from_rows(vec![vec![q.clone(), s(1)], vec![s(1), q.clone()]], 2);
        let x = m.solve(&[s(1), s(0)]).unwrap();
        let inv = m.inverse().unwrap();
        assert_eq!(x[0], *inv.get(0, 0));
        assert!(m.mul(&inv).sub(&Matrix::identity(2)).is_zero());
        let sing = Matrix::from_rows(vec![vec![s(1), s(1)], vec![s(1), s(1)]], 2);
        assert!(matches!(sing.solve(&[s(1), s(2)]), Err(Error::Inconsistent)));
        assert!(matches!(sing.solve(&[s(1), s(1)]), Err(Error::Underdetermined(1))));
    }
}
