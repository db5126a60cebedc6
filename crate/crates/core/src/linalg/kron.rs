use nalgebra::{DMatrix, DVector};

use super::op::LinearOp;
use crate::error::{check_square, Error, Result};

/// Largest `n` for which an `n^2 x n^2` operator may be materialized.
pub const DENSE_LIMIT: usize = 32;

/// Column-stacking vectorization.
pub fn vec(x: &DMatrix<f64>) -> DVector<f64> {
    DVector::from_column_slice(x.as_slice())
}

pub fn unvec(v: &DVector<f64>, rows: usize, cols: usize) -> Result<DMatrix<f64>> {
    if v.len() != rows * cols {
        return Err(Error::Dimension(format!(
            "cannot reshape {} entries into {rows}x{cols}",
            v.len()
        )));
    }
    Ok(DMatrix::from_column_slice(rows, cols, v.as_slice()))
}

/// `A X B`, which is `(B^T ⊗ A) vec(X)` without forming the Kronecker product.
pub fn kron_apply(a: &DMatrix<f64>, b: &DMatrix<f64>, x: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let n = x.nrows();
    check_square("X", n, x.ncols(), n)?;
    check_square("A", a.nrows(), a.ncols(), n)?;
    check_square("B", b.nrows(), b.ncols(), n)?;
    Ok(a * x * b)
}

/// Materialized `A ⊗ B`, guarded by [`DENSE_LIMIT`] on the factor size.
pub fn kron_dense(a: &DMatrix<f64>, b: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let big = a.nrows().max(a.ncols()).max(b.nrows()).max(b.ncols());
    if big > DENSE_LIMIT {
        return Err(Error::Guard(format!(
            "refusing to materialize a Kronecker product with factor size {big} > {DENSE_LIMIT}"
        )));
    }
    Ok(a.kronecker(b))
}

/// Implicit Kronecker sum `L ⊗ I + I ⊗ L` acting on `n x n` pair signals.
#[derive(Debug, Clone)]
pub struct KronSum {
    l: DMatrix<f64>,
}

impl KronSum {
    pub fn new(l: DMatrix<f64>) -> Result<Self> {
        check_square("L", l.nrows(), l.ncols(), l.nrows())?;
        if (&l - l.transpose()).abs().max() > 1e-12 {
            return Err(Error::Domain("Kronecker sum needs a symmetric L".into()));
        }
        Ok(KronSum { l })
    }

    pub fn n(&self) -> usize {
        self.l.nrows()
    }

    /// `eps L + L eps`.
    pub fn apply(&self, eps: &DMatrix<f64>) -> Result<DMatrix<f64>> {
        check_square("pair signal", eps.nrows(), eps.ncols(), self.n())?;
        Ok(eps * &self.l + &self.l * eps)
    }

    pub fn to_dense(&self) -> Result<DMatrix<f64>> {
        let n = self.n();
        if n > DENSE_LIMIT {
            return Err(Error::Guard(format!(
                "refusing to materialize an {0}x{0} Kronecker sum (n = {n} > {DENSE_LIMIT})",
                n * n
            )));
        }
        let id = DMatrix::identity(n, n);
        Ok(self.l.kronecker(&id) + id.kronecker(&self.l))
    }
}

impl LinearOp for KronSum {
    fn dim(&self) -> usize {
        self.n() * self.n()
    }

    fn apply_vec(&self, x: &DVector<f64>) -> DVector<f64> {
        let eps = unvec(x, self.n(), self.n()).expect("dimension checked by caller");
        vec(&(&eps * &self.l + &self.l * &eps))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{laplacian, named, LaplacianKind};
    use crate::linalg::eigendecompose;
    use rand::Rng as _;

    fn random(n: usize, m: usize, seed: u64) -> DMatrix<f64> {
        let mut r = crate::rng::seeded(seed);
        DMatrix::from_fn(n, m, |_, _| r.random_range(-1.0..1.0))
    }

    #[test]
    fn vec_is_column_stacking() {
        let x = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(vec(&x).as_slice(), &[1.0, 3.0, 2.0, 4.0]);
        assert_eq!(unvec(&vec(&x), 2, 2).unwrap(), x);
        assert!(unvec(&vec(&x), 3, 1).is_err());
    }

    #[test]
    fn kron_apply_matches_dense() {
        let (a, b, x) = (random(5, 5, 1), random(5, 5, 2), random(5, 5, 3));
        let got = vec(&kron_apply(&a, &b, &x).unwrap());
        let want = b.transpose().kronecker(&a) * vec(&x);
        assert!((got - want).abs().max() < 1e-12);
        let id = DMatrix::identity(5, 5);
        assert_eq!(kron_apply(&id, &id, &x).unwrap(), x);
        let (u, v) = (random(5, 1, 4), random(5, 1, 5));
        let uv = &u * v.transpose();
        assert!((kron_apply(&uv, &id, &id).unwrap() - &uv).abs().max() < 1e-15);
        assert!(kron_apply(&random(4, 4, 0), &id, &x).is_err());
    }

    #[test]
    fn kron_sum_of_p2_is_c4() {
        let l = laplacian(&named::path(2), LaplacianKind::Combinatorial);
        let dense = KronSum::new(l).unwrap().to_dense().unwrap();
        let c4 = named::path(2).cartesian_product();
        assert_eq!(dense, laplacian(&c4, LaplacianKind::Combinatorial));
        let big = KronSum::new(DMatrix::zeros(33, 33)).unwrap();
        assert!(matches!(big.to_dense(), Err(Error::Guard(_))));
    }

    #[test]
    fn kron_sum_eigen_action() {
        let l = laplacian(&named::path(4), LaplacianKind::Combinatorial);
        let s = eigendecompose(&l, 1e-12).unwrap();
        let ks = KronSum::new(l).unwrap();
        let lam = s.eigenvalues();
        for i in 0..4 {
            for j in 0..4 {
                let e = s.eigenvector(i) * s.eigenvector(j).transpose();
                let got = ks.apply(&e).unwrap();
                assert!((got - &e * (lam[i] + lam[j])).abs().max() < 1e-12);
            }
        }
        let zero = KronSum::new(DMatrix::zeros(3, 3)).unwrap();
        assert_eq!(zero.apply(&random(3, 3, 9)).unwrap(), DMatrix::zeros(3, 3));
    }

    #[test]
    fn kron_sum_spectrum_is_pairwise_sums() {
        let g = crate::graph::random_connected(6, 0.5, 3);
        let l = laplacian(&g, LaplacianKind::SymmetricNormalized);
        let lam = eigendecompose(&l, 1e-12).unwrap().eigenvalues().to_vec();
        let dense = KronSum::new(l).unwrap().to_dense().unwrap();
        let got = eigendecompose(&dense, 1e-12).unwrap().eigenvalues().to_vec();
        let mut want: Vec<f64> = lam.iter().flat_map(|a| lam.iter().map(move |b| a + b)).collect();
        want.sort_by(f64::total_cmp);
        for (g, w) in got.iter().zip(&want) {
            assert!((g - w).abs() < 1e-10);
        }
    }

    #[test]
    fn kron_dense_guard() {
        assert!(kron_dense(&DMatrix::zeros(33, 1), &DMatrix::zeros(1, 1)).is_err());
        let a = random(2, 2, 1);
        assert_eq!(kron_dense(&a, &a).unwrap(), a.kronecker(&a));
    }
}
