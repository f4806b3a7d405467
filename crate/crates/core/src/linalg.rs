//! Dense matrices over GF(q) with exact Gaussian elimination.
//!
//! Pivoting takes the first nonzero entry in each column, so every result
//! (RREF, kernel basis, particular solution) is a deterministic function of
//! the input.

use std::fmt;

use thiserror::Error;

use crate::galois::Field;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinalgError {
    #[error("column index {index} out of range for {cols} columns")]
    ColumnOutOfRange { index: usize, cols: usize },
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("entry {0} is not a field element")]
    BadEntry(u32),
}

#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} over {:?}", self.rows, self.cols, self.field)?;
        for r in 0..self.rows {
            writeln!(f, "  {:?}", self.row(r))?;
        }
        Ok(())
    }
}

/// Outcome of [`Matrix::solve`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Solution {
    Consistent { particular: Vec<u32>, kernel: Vec<Vec<u32>> },
    Inconsistent,
}

impl Matrix {
    pub fn zeros(field: &Field, rows: usize, cols: usize) -> Matrix {
        Matrix { field: field.clone(), rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(field: &Field, n: usize) -> Matrix {
        let mut m = Matrix::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_rows(field: &Field, rows: &[Vec<u32>]) -> Result<Matrix, LinalgError> {
        let cols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            if r.len() != cols {
                return Err(LinalgError::Dimension("ragged rows".into()));
            }
            if let Some(&bad) = r.iter().find(|&&x| !field.contains(x)) {
                return Err(LinalgError::BadEntry(bad));
            }
            data.extend_from_slice(r);
        }
        Ok(Matrix { field: field.clone(), rows: rows.len(), cols, data })
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(field: &Field, cols: &[Vec<u32>]) -> Result<Matrix, LinalgError> {
        Ok(Matrix::from_rows(field, cols)?.transpose())
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u32 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: u32) {
        debug_assert!(self.field.contains(v));
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[u32] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<u32> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<u32>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(&self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c));
            }
        }
        t
    }

    pub fn select_columns(&self, idx: &[usize]) -> Result<Matrix, LinalgError> {
        self.check_columns(idx)?;
        let mut m = Matrix::zeros(&self.field, self.rows, idx.len());
        for r in 0..self.rows {
            for (j, &c) in idx.iter().enumerate() {
                m.set(r, j, self.get(r, c));
            }
        }
        Ok(m)
    }

    fn check_columns(&self, idx: &[usize]) -> Result<(), LinalgError> {
        match idx.iter().find(|&&c| c >= self.cols) {
            Some(&index) => Err(LinalgError::ColumnOutOfRange { index, cols: self.cols }),
            None => Ok(()),
        }
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix, LinalgError> {
        if self.cols != other.rows {
            return Err(LinalgError::Dimension(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let f = &self.field;
        let mut out = Matrix::zeros(f, self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = 0;
                for t in 0..self.cols {
                    acc = f.add(acc, f.mul(self.get(i, t), other.get(t, j)));
                }
                out.set(i, j, acc);
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, x: &[u32]) -> Result<Vec<u32>, LinalgError> {
        if x.len() != self.cols {
            return Err(LinalgError::Dimension(format!("vector of length {} for {} columns", x.len(), self.cols)));
        }
        let f = &self.field;
        Ok((0..self.rows).map(|r| self.row(r).iter().zip(x).fold(0, |acc, (&a, &b)| f.add(acc, f.mul(a, b)))).collect())
    }

    /// Row vector times matrix.
    pub fn vec_mul(&self, x: &[u32]) -> Result<Vec<u32>, LinalgError> {
        if x.len() != self.rows {
            return Err(LinalgError::Dimension(format!("vector of length {} for {} rows", x.len(), self.rows)));
        }
        let f = &self.field;
        let mut out = vec![0; self.cols];
        for (r, &c) in x.iter().enumerate() {
            if c == 0 {
                continue;
            }
            for (o, &a) in out.iter_mut().zip(self.row(r)) {
                *o = f.add(*o, f.mul(c, a));
            }
        }
        Ok(out)
    }

    /// Reduced row echelon form. Returns the rank, the RREF and the pivot columns.
    pub fn rref(&self) -> (usize, Matrix, Vec<usize>) {
        let f = &self.field;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(pr) = (row..m.rows).find(|&r| m.get(r, col) != 0) else {
                continue;
            };
            m.swap_rows(row, pr);
            let inv = f.inv(m.get(row, col)).expect("nonzero pivot");
            m.scale_row(row, inv);
            for r in 0..m.rows {
                if r != row {
                    let c = m.get(r, col);
                    if c != 0 {
                        m.add_row_multiple(r, row, f.neg(c));
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        (row, m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().0
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for c in 0..self.cols {
                self.data.swap(a * self.cols + c, b * self.cols + c);
            }
        }
    }

    fn scale_row(&mut self, r: usize, s: u32) {
        for c in 0..self.cols {
            let v = self.field.mul(self.get(r, c), s);
            self.set(r, c, v);
        }
    }

    /// row[dst] += s·row[src]
    fn add_row_multiple(&mut self, dst: usize, src: usize, s: u32) {
        for c in 0..self.cols {
            let v = self.field.add(self.get(dst, c), self.field.mul(s, self.get(src, c)));
            self.set(dst, c, v);
        }
    }

    pub fn columns_independent(&self, idx: &[usize]) -> Result<bool, LinalgError> {
        self.check_columns(idx)?;
        let mut basis = EchelonBasis::new(&self.field, self.rows);
        Ok(idx.iter().all(|&c| basis.push(&self.column(c))))
    }

    /// Kernel basis as rows, one per free column in increasing order,
    /// with that free variable set to 1 and the others to 0.
    pub fn kernel_basis(&self) -> Matrix {
        let (rank, r, pivots) = self.rref();
        let f = &self.field;
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut k = Matrix::zeros(f, free.len(), self.cols);
        for (i, &fc) in free.iter().enumerate() {
            k.set(i, fc, 1);
            for (pr, &pc) in pivots.iter().enumerate().take(rank) {
                k.set(i, pc, f.neg(r.get(pr, fc)));
            }
        }
        k
    }

    /// Solves `M·x = b`; free variables are set to zero in the particular solution.
    pub fn solve(&self, b: &[u32]) -> Result<Solution, LinalgError> {
        if b.len() != self.rows {
            return Err(LinalgError::Dimension(format!("rhs of length {} for {} rows", b.len(), self.rows)));
        }
        let mut aug = Matrix::zeros(&self.field, self.rows, self.cols + 1);
        for r in 0..self.rows {
            for c in 0..self.cols {
                aug.set(r, c, self.get(r, c));
            }
            aug.set(r, self.cols, b[r]);
        }
        let (_, red, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return Ok(Solution::Inconsistent);
        }
        let mut x = vec![0; self.cols];
        for (pr, &pc) in pivots.iter().enumerate() {
            x[pc] = red.get(pr, self.cols);
        }
        Ok(Solution::Consistent { particular: x, kernel: self.kernel_basis().to_rows() })
    }
}

/// 3×3 determinant of the matrix with the given columns.
pub fn det3(f: &Field, a: &[u32], b: &[u32], c: &[u32]) -> u32 {
    let m = |x: u32, y: u32| f.mul(x, y);
    let minor = |i: usize, j: usize, k: usize, l: usize| f.sub(m(b[i], c[j]), m(b[k], c[l]));
    let t0 = m(a[0], minor(1, 2, 2, 1));
    let t1 = m(a[1], minor(0, 2, 2, 0));
    let t2 = m(a[2], minor(0, 1, 1, 0));
    f.add(f.sub(t0, t1), t2)
}

/// Incrementally grown set of linearly independent vectors, kept in
/// forward-reduced echelon form so that the last vector can be popped.
#[derive(Clone, Debug)]
pub struct EchelonBasis {
    field: Field,
    dim: usize,
    rows: Vec<(usize, Vec<u32>)>,
}

impl EchelonBasis {
    pub fn new(field: &Field, dim: usize) -> EchelonBasis {
        EchelonBasis { field: field.clone(), dim, rows: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Reduces `v` against the basis; returns the residual.
    pub fn reduce(&self, v: &[u32]) -> Vec<u32> {
        debug_assert_eq!(v.len(), self.dim);
        let f = &self.field;
        let mut w = v.to_vec();
        for (piv, row) in &self.rows {
            let c = w[*piv];
            if c != 0 {
                let nc = f.neg(c);
                for (x, &y) in w.iter_mut().zip(row) {
                    if y != 0 {
                        *x = f.add(*x, f.mul(nc, y));
                    }
                }
            }
        }
        w
    }

    pub fn contains(&self, v: &[u32]) -> bool {
        self.reduce(v).iter().all(|&x| x == 0)
    }

    /// Adds `v` if it is independent of the current basis; returns whether it was added.
    pub fn push(&mut self, v: &[u32]) -> bool {
        let mut w = self.reduce(v);
        let Some(piv) = w.iter().position(|&x| x != 0) else {
            return false;
        };
        let inv = self.field.inv(w[piv]).expect("nonzero");
        for x in w.iter_mut() {
            *x = self.field.mul(*x, inv);
        }
        self.rows.push((piv, w));
        true
    }

    pub fn pop(&mut self) {
        self.rows.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(q: u64) -> Field {
        Field::with_order(q).unwrap()
    }

    #[test]
    fn identity_rref() {
        let f = gf(8);
        let id = Matrix::identity(&f, 3);
        let (rank, r, piv) = id.rref();
        assert_eq!(rank, 3);
        assert_eq!(r, id);
        assert_eq!(piv, vec![0, 1, 2]);
    }

    #[test]
    fn vandermonde_full_rank() {
        let f = gf(8);
        let v = |a: u32| vec![1, a, f.mul(a, a)];
        let m = Matrix::from_columns(&f, &[v(2), v(3), v(7)]).unwrap();
        assert_eq!(m.rank(), 3);
        assert_ne!(det3(&f, &v(2), &v(3), &v(7)), 0);
    }

    #[test]
    fn zero_matrix() {
        let f = gf(8);
        let z = Matrix::zeros(&f, 2, 5);
        assert_eq!(z.rank(), 0);
        assert_eq!(Matrix::zeros(&f, 2, 3).kernel_basis().rows(), 3);
    }

    #[test]
    fn column_independence() {
        let f = gf(8);
        let m = Matrix::from_columns(&f, &[vec![1, 2, 3], vec![2, 4, 6], vec![0, 0, 1]]).unwrap();
        assert!(m.columns_independent(&[0]).unwrap());
        // 2·(1,2,3) in GF(8)
        let twice = vec![2, f.mul(2, 2), f.mul(2, 3)];
        let m2 = Matrix::from_columns(&f, &[vec![1, 2, 3], twice]).unwrap();
        assert!(!m2.columns_independent(&[0, 1]).unwrap());
        assert_eq!(m.columns_independent(&[3]), Err(LinalgError::ColumnOutOfRange { index: 3, cols: 3 }));
    }

    #[test]
    fn solve_cases() {
        let f = gf(8);
        let id = Matrix::identity(&f, 3);
        assert_eq!(id.solve(&[5, 6, 7]).unwrap(), Solution::Consistent { particular: vec![5, 6, 7], kernel: vec![] });
        let f2 = gf(2);
        let ones = Matrix::from_rows(&f2, &[vec![1, 1, 1]]).unwrap();
        match ones.solve(&[0]).unwrap() {
            Solution::Consistent { particular, kernel } => {
                assert_eq!(particular, vec![0, 0, 0]);
                assert_eq!(kernel.len(), 2);
            }
            Solution::Inconsistent => panic!(),
        }
        let z = Matrix::zeros(&f2, 1, 2);
        assert_eq!(z.solve(&[1]).unwrap(), Solution::Inconsistent);
    }

    #[test]
    fn det3_matches_rank() {
        let f = gf(4);
        let vecs: Vec<Vec<u32>> = (0..64).map(|i| vec![i % 4, (i / 4) % 4, i / 16]).collect();
        for a in vecs.iter().step_by(3) {
            for b in vecs.iter().step_by(5) {
                for c in &vecs {
                    let m = Matrix::from_columns(&f, &[a.clone(), b.clone(), c.clone()]).unwrap();
                    assert_eq!(det3(&f, a, b, c) != 0, m.rank() == 3);
                }
            }
        }
    }

    #[test]
    fn echelon_basis_push_pop() {
        let f = gf(16);
        let mut b = EchelonBasis::new(&f, 3);
        assert!(b.push(&[1, 2, 3]));
        assert!(b.push(&[0, 1, 5]));
        let dep: Vec<u32> = (0..3).map(|i| f.add([1, 2, 3][i], f.mul(7, [0, 1, 5][i]))).collect();
        assert!(!b.push(&dep));
        assert!(b.contains(&dep));
        b.pop();
        assert!(b.push(&dep));
        assert_eq!(b.len(), 2);
    }
}
