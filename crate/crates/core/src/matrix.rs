//! Matrix storage for operators in a sector basis.
//!
//! Hamiltonian blocks are real symmetric whenever the basis phases and the
//! operator coefficients are real (momentum k = 0 or L/2 with real
//! perturbations); otherwise complex Hermitian. Small blocks are kept dense,
//! large ones in compressed sparse rows.

use crate::Complex;
use ndarray::Array2;
use rayon::prelude::*;

/// Compressed sparse row matrix.
#[derive(Debug, Clone)]
pub struct CsrMatrix<T> {
    pub dim: usize,
    pub row_ptr: Vec<usize>,
    pub col_idx: Vec<u32>,
    pub values: Vec<T>,
}

impl<T: Copy> CsrMatrix<T> {
    /// Assemble from per-row triplet lists (columns may repeat; they are
    /// merged).
    pub fn from_rows(dim: usize, rows: Vec<Vec<(u32, T)>>) -> Self
    where
        T: std::ops::AddAssign + Default + PartialEq,
    {
        let mut row_ptr = Vec::with_capacity(dim + 1);
        let mut col_idx = Vec::new();
        let mut values = Vec::new();
        row_ptr.push(0);
        for mut row in rows {
            row.sort_unstable_by_key(|e| e.0);
            let mut iter = row.into_iter().peekable();
            while let Some((c, mut v)) = iter.next() {
                while iter.peek().map(|e| e.0) == Some(c) {
                    v += iter.next().unwrap().1;
                }
                if v != T::default() {
                    col_idx.push(c);
                    values.push(v);
                }
            }
            row_ptr.push(col_idx.len());
        }
        Self {
            dim,
            row_ptr,
            col_idx,
            values,
        }
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }
}

impl CsrMatrix<f64> {
    pub fn matvec(&self, x: &[Complex], y: &mut [Complex]) {
        y.par_iter_mut().enumerate().for_each(|(r, out)| {
            let mut acc = Complex::new(0.0, 0.0);
            for idx in self.row_ptr[r]..self.row_ptr[r + 1] {
                acc += x[self.col_idx[idx] as usize] * self.values[idx];
            }
            *out = acc;
        });
    }
}

impl CsrMatrix<Complex> {
    pub fn matvec(&self, x: &[Complex], y: &mut [Complex]) {
        y.par_iter_mut().enumerate().for_each(|(r, out)| {
            let mut acc = Complex::new(0.0, 0.0);
            for idx in self.row_ptr[r]..self.row_ptr[r + 1] {
                acc += x[self.col_idx[idx] as usize] * self.values[idx];
            }
            *out = acc;
        });
    }
}

/// Dense or sparse, real or complex operator storage.
#[derive(Debug, Clone)]
pub enum MatrixStorage {
    DenseReal(Array2<f64>),
    DenseComplex(Array2<Complex>),
    SparseReal(CsrMatrix<f64>),
    SparseComplex(CsrMatrix<Complex>),
}

impl MatrixStorage {
    pub fn dim(&self) -> usize {
        match self {
            MatrixStorage::DenseReal(m) => m.nrows(),
            MatrixStorage::DenseComplex(m) => m.nrows(),
            MatrixStorage::SparseReal(m) => m.dim,
            MatrixStorage::SparseComplex(m) => m.dim,
        }
    }

    pub fn is_sparse(&self) -> bool {
        matches!(
            self,
            MatrixStorage::SparseReal(_) | MatrixStorage::SparseComplex(_)
        )
    }

    pub fn is_real(&self) -> bool {
        matches!(
            self,
            MatrixStorage::DenseReal(_) | MatrixStorage::SparseReal(_)
        )
    }

    /// Matrix-vector product.
    pub fn apply(&self, x: &[Complex]) -> Vec<Complex> {
        assert_eq!(x.len(), self.dim(), "operator/vector dimension mismatch");
        let mut y = vec![Complex::new(0.0, 0.0); x.len()];
        match self {
            MatrixStorage::DenseReal(m) => {
                y.par_iter_mut().enumerate().for_each(|(r, out)| {
                    let row = m.row(r);
                    let mut acc = Complex::new(0.0, 0.0);
                    for (v, xv) in row.iter().zip(x) {
                        acc += xv * *v;
                    }
                    *out = acc;
                });
            }
            MatrixStorage::DenseComplex(m) => {
                y.par_iter_mut().enumerate().for_each(|(r, out)| {
                    let row = m.row(r);
                    let mut acc = Complex::new(0.0, 0.0);
                    for (v, xv) in row.iter().zip(x) {
                        acc += xv * *v;
                    }
                    *out = acc;
                });
            }
            MatrixStorage::SparseReal(m) => m.matvec(x, &mut y),
            MatrixStorage::SparseComplex(m) => m.matvec(x, &mut y),
        }
        y
    }

    /// Densify to a complex matrix (used by the complex eigensolver path).
    pub fn to_dense_complex(&self) -> Array2<Complex> {
        let n = self.dim();
        match self {
            MatrixStorage::DenseReal(m) => m.mapv(|v| Complex::new(v, 0.0)),
            MatrixStorage::DenseComplex(m) => m.clone(),
            MatrixStorage::SparseReal(m) => {
                let mut out = Array2::zeros((n, n));
                for r in 0..n {
                    for idx in m.row_ptr[r]..m.row_ptr[r + 1] {
                        out[[r, m.col_idx[idx] as usize]] = Complex::new(m.values[idx], 0.0);
                    }
                }
                out
            }
            MatrixStorage::SparseComplex(m) => {
                let mut out = Array2::zeros((n, n));
                for r in 0..n {
                    for idx in m.row_ptr[r]..m.row_ptr[r + 1] {
                        out[[r, m.col_idx[idx] as usize]] = m.values[idx];
                    }
                }
                out
            }
        }
    }

    /// Densify to a real matrix; only valid for real storage.
    pub fn to_dense_real(&self) -> Option<Array2<f64>> {
        let n = self.dim();
        match self {
            MatrixStorage::DenseReal(m) => Some(m.clone()),
            MatrixStorage::SparseReal(m) => {
                let mut out = Array2::zeros((n, n));
                for r in 0..n {
                    for idx in m.row_ptr[r]..m.row_ptr[r + 1] {
                        out[[r, m.col_idx[idx] as usize]] = m.values[idx];
                    }
                }
                Some(out)
            }
            _ => None,
        }
    }

    /// Largest deviation from Hermiticity, `max |H - H†|`.
    pub fn hermiticity_error(&self) -> f64 {
        match self {
            MatrixStorage::DenseReal(m) => {
                let mut e = 0.0f64;
                for i in 0..m.nrows() {
                    for j in i..m.ncols() {
                        e = e.max((m[[i, j]] - m[[j, i]]).abs());
                    }
                }
                e
            }
            MatrixStorage::DenseComplex(m) => {
                let mut e = 0.0f64;
                for i in 0..m.nrows() {
                    for j in i..m.ncols() {
                        e = e.max((m[[i, j]] - m[[j, i]].conj()).norm());
                    }
                }
                e
            }
            // for sparse storage compare each entry against its transpose
            MatrixStorage::SparseReal(m) => {
                let mut e = 0.0f64;
                for r in 0..m.dim {
                    for idx in m.row_ptr[r]..m.row_ptr[r + 1] {
                        let c = m.col_idx[idx] as usize;
                        let vt = csr_get(m, c, r as u32);
                        e = e.max((m.values[idx] - vt).abs());
                    }
                }
                e
            }
            MatrixStorage::SparseComplex(m) => {
                let mut e = 0.0f64;
                for r in 0..m.dim {
                    for idx in m.row_ptr[r]..m.row_ptr[r + 1] {
                        let c = m.col_idx[idx] as usize;
                        let vt = csr_get_c(m, c, r as u32);
                        e = e.max((m.values[idx] - vt.conj()).norm());
                    }
                }
                e
            }
        }
    }

    /// Iterate all stored entries as `(row, col, value)` triplets.
    pub fn for_each_entry(&self, mut f: impl FnMut(usize, usize, Complex)) {
        match self {
            MatrixStorage::DenseReal(m) => {
                for ((r, c), &v) in m.indexed_iter() {
                    if v != 0.0 {
                        f(r, c, Complex::new(v, 0.0));
                    }
                }
            }
            MatrixStorage::DenseComplex(m) => {
                for ((r, c), &v) in m.indexed_iter() {
                    if v != Complex::new(0.0, 0.0) {
                        f(r, c, v);
                    }
                }
            }
            MatrixStorage::SparseReal(m) => {
                for r in 0..m.dim {
                    for idx in m.row_ptr[r]..m.row_ptr[r + 1] {
                        f(r, m.col_idx[idx] as usize, Complex::new(m.values[idx], 0.0));
                    }
                }
            }
            MatrixStorage::SparseComplex(m) => {
                for r in 0..m.dim {
                    for idx in m.row_ptr[r]..m.row_ptr[r + 1] {
                        f(r, m.col_idx[idx] as usize, m.values[idx]);
                    }
                }
            }
        }
    }
}

fn csr_get(m: &CsrMatrix<f64>, row: usize, col: u32) -> f64 {
    let lo = m.row_ptr[row];
    let hi = m.row_ptr[row + 1];
    match m.col_idx[lo..hi].binary_search(&col) {
        Ok(k) => m.values[lo + k],
        Err(_) => 0.0,
    }
}

fn csr_get_c(m: &CsrMatrix<Complex>, row: usize, col: u32) -> Complex {
    let lo = m.row_ptr[row];
    let hi = m.row_ptr[row + 1];
    match m.col_idx[lo..hi].binary_search(&col) {
        Ok(k) => m.values[lo + k],
        Err(_) => Complex::new(0.0, 0.0),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csr_merges_duplicate_columns() {
        let rows = vec![vec![(1u32, 2.0), (1, 3.0), (0, 1.0)], vec![(0, -1.0)]];
        let m = CsrMatrix::from_rows(2, rows);
        assert_eq!(m.nnz(), 3);
        let x = [Complex::new(1.0, 0.0), Complex::new(1.0, 0.0)];
        let mut y = vec![Complex::new(0.0, 0.0); 2];
        m.matvec(&x, &mut y);
        assert_eq!(y[0], Complex::new(6.0, 0.0));
        assert_eq!(y[1], Complex::new(-1.0, 0.0));
    }

    #[test]
    fn identity_apply_is_identity() {
        let eye = MatrixStorage::DenseReal(ndarray::Array2::eye(3));
        let x = vec![
            Complex::new(1.0, 2.0),
            Complex::new(-0.5, 0.0),
            Complex::new(0.0, 1.0),
        ];
        assert_eq!(eye.apply(&x), x);
        assert_eq!(eye.hermiticity_error(), 0.0);
    }
}
