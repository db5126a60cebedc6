use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// A square linear operator that can be applied to vectors and matrices.
pub trait LinearOp {
    fn dim(&self) -> usize;

    fn apply_vec(&self, x: &DVector<f64>) -> DVector<f64>;

    /// Applies the operator to every column of `x`.
    fn apply_mat(&self, x: &DMatrix<f64>) -> DMatrix<f64> {
        let mut out = DMatrix::zeros(self.dim(), x.ncols());
        for (j, col) in x.column_iter().enumerate() {
            out.set_column(j, &self.apply_vec(&col.into_owned()));
        }
        out
    }
}

impl LinearOp for DMatrix<f64> {
    fn dim(&self) -> usize {
        self.nrows()
    }

    fn apply_vec(&self, x: &DVector<f64>) -> DVector<f64> {
        self * x
    }

    fn apply_mat(&self, x: &DMatrix<f64>) -> DMatrix<f64> {
        self * x
    }
}

/// Compressed sparse row matrix, square.
#[derive(Debug, Clone, PartialEq)]
pub struct CsrMatrix {
    n: usize,
    row_ptr: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<f64>,
}

impl CsrMatrix {
    pub fn from_dense(m: &DMatrix<f64>) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(Error::Dimension(format!(
                "CSR operator must be square, got {}x{}",
                m.nrows(),
                m.ncols()
            )));
        }
        let n = m.nrows();
        let mut row_ptr = Vec::with_capacity(n + 1);
        let mut cols = Vec::new();
        let mut vals = Vec::new();
        row_ptr.push(0);
        for i in 0..n {
            for j in 0..n {
                let v = m[(i, j)];
                if v != 0.0 {
                    cols.push(j);
                    vals.push(v);
                }
            }
            row_ptr.push(cols.len());
        }
        Ok(CsrMatrix { n, row_ptr, cols, vals })
    }

    pub fn nnz(&self) -> usize {
        self.vals.len()
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(self.n, self.n);
        for i in 0..self.n {
            for k in self.row_ptr[i]..self.row_ptr[i + 1] {
                m[(i, self.cols[k])] = self.vals[k];
            }
        }
        m
    }
}

impl LinearOp for CsrMatrix {
    fn dim(&self) -> usize {
        self.n
    }

    fn apply_vec(&self, x: &DVector<f64>) -> DVector<f64> {
        DVector::from_fn(self.n, |i, _| {
            (self.row_ptr[i]..self.row_ptr[i + 1])
                .map(|k| self.vals[k] * x[self.cols[k]])
                .sum()
        })
    }
}
