use nalgebra::{DMatrix, DVector, SymmetricEigen};
use serde::Serialize;

use crate::error::{check_square, Error, Result};
use crate::graph::LaplacianKind;

/// Eigenpairs of a symmetric matrix, eigenvalues ascending.
///
/// Eigenvectors are the columns of `vectors`; each is sign-normalized so
/// that its first entry with magnitude above `1e-12` is positive. Inside a
/// repeated eigenvalue the basis is whatever the solver returned; use
/// [`eigenspace_projectors`] when a basis-free answer is needed.
#[derive(Debug, Clone)]
pub struct Spectrum {
    values: Vec<f64>,
    vectors: DMatrix<f64>,
    source_kind: Option<LaplacianKind>,
}

const SIGN_EPS: f64 = 1e-12;

/// Dense symmetric eigendecomposition. `tol` bounds the allowed asymmetry
/// `max |L - L^T|`.
pub fn eigendecompose(l: &DMatrix<f64>, tol: f64) -> Result<Spectrum> {
    check_square("matrix", l.nrows(), l.ncols(), l.nrows())?;
    let asym = (l - l.transpose()).abs().max();
    if asym > tol {
        return Err(Error::Domain(format!(
            "matrix is not symmetric (max |L - L^T| = {asym:e} > {tol:e})"
        )));
    }
    let n = l.nrows();
    if n == 0 {
        return Ok(Spectrum {
            values: Vec::new(),
            vectors: DMatrix::zeros(0, 0),
            source_kind: None,
        });
    }
    let sym = (l + l.transpose()) * 0.5;
    let eig = SymmetricEigen::try_new(sym, f64::EPSILON, 10_000)
        .ok_or_else(|| Error::Numeric("symmetric eigensolver did not converge".into()))?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut vectors = DMatrix::zeros(n, n);
    for (c, &i) in order.iter().enumerate() {
        let mut col = eig.eigenvectors.column(i).into_owned();
        if let Some(first) = col.iter().find(|x| x.abs() > SIGN_EPS) {
            if *first < 0.0 {
                col.neg_mut();
            }
        }
        vectors.set_column(c, &col);
    }
    Ok(Spectrum {
        values,
        vectors,
        source_kind: None,
    })
}

impl Spectrum {
    /// Decomposes a graph Laplacian and remembers which kind it was.
    pub fn of_laplacian(l: &DMatrix<f64>, kind: LaplacianKind) -> Result<Self> {
        let mut s = eigendecompose(l, 1e-12)?;
        s.source_kind = Some(kind);
        Ok(s)
    }

    pub fn n(&self) -> usize {
        self.values.len()
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.values
    }

    /// `U`, eigenvectors as columns.
    pub fn eigenvectors(&self) -> &DMatrix<f64> {
        &self.vectors
    }

    pub fn eigenvector(&self, i: usize) -> DVector<f64> {
        self.vectors.column(i).into_owned()
    }

    pub fn source_kind(&self) -> Option<LaplacianKind> {
        self.source_kind
    }

    /// `U diag(g) U^T`.
    pub fn matrix_function(&self, g: impl Fn(f64) -> f64) -> DMatrix<f64> {
        let mut scaled = self.vectors.clone();
        for (j, &lam) in self.values.iter().enumerate() {
            let w = g(lam);
            scaled.column_mut(j).scale_mut(w);
        }
        scaled * self.vectors.transpose()
    }

    pub fn reconstruct(&self) -> DMatrix<f64> {
        self.matrix_function(|x| x)
    }

    /// Smallest gap between consecutive eigenvalues (`inf` for n < 2).
    pub fn min_gap(&self) -> f64 {
        self.values
            .windows(2)
            .map(|w| w[1] - w[0])
            .fold(f64::INFINITY, f64::min)
    }

    /// True iff every consecutive eigenvalue gap exceeds `gap_tol`.
    pub fn is_simple(&self, gap_tol: f64) -> bool {
        self.min_gap() > gap_tol
    }

    /// Indices `(i, i+1)` of the closest adjacent pair, if any gap is at or
    /// below `gap_tol`.
    pub fn colliding_pair(&self, gap_tol: f64) -> Option<(usize, usize)> {
        let (i, gap) = self
            .values
            .windows(2)
            .enumerate()
            .map(|(i, w)| (i, w[1] - w[0]))
            .min_by(|a, b| a.1.total_cmp(&b.1))?;
        (gap <= gap_tol).then_some((i, i + 1))
    }

    /// Eigenvalue groups: consecutive eigenvalues within `group_tol` of their
    /// neighbour share a group. Returns index ranges.
    pub fn groups(&self, group_tol: f64) -> Vec<std::ops::Range<usize>> {
        let mut out = Vec::new();
        let mut start = 0;
        for i in 1..=self.n() {
            if i == self.n() || self.values[i] - self.values[i - 1] > group_tol {
                out.push(start..i);
                start = i;
            }
        }
        out
    }

    fn check_len(&self, len: usize) -> Result<()> {
        if len != self.n() {
            return Err(Error::Dimension(format!(
                "signal of length {len} on a spectrum of size {}",
                self.n()
            )));
        }
        Ok(())
    }
}

/// True iff every consecutive eigenvalue gap exceeds `gap_tol`.
pub fn is_simple_spectrum(s: &Spectrum, gap_tol: f64) -> bool {
    s.is_simple(gap_tol)
}

pub fn gft(s: &Spectrum, x: &DVector<f64>) -> Result<DVector<f64>> {
    s.check_len(x.len())?;
    Ok(s.vectors.tr_mul(x))
}

pub fn igft(s: &Spectrum, xhat: &DVector<f64>) -> Result<DVector<f64>> {
    s.check_len(xhat.len())?;
    Ok(&s.vectors * xhat)
}

/// Pair-domain transform `U^T eps U`, i.e. `(U ⊗ U)^T vec(eps)` reshaped.
pub fn pair_gft(s: &Spectrum, eps: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    check_square("pair signal", eps.nrows(), eps.ncols(), s.n())?;
    Ok(s.vectors.tr_mul(eps) * &s.vectors)
}

pub fn pair_igft(s: &Spectrum, coeffs: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    check_square("coefficient matrix", coeffs.nrows(), coeffs.ncols(), s.n())?;
    Ok(&s.vectors * coeffs * s.vectors.transpose())
}

/// Orthogonal projector onto one eigenspace.
#[derive(Debug, Clone, Serialize)]
pub struct EigenspaceProjector {
    /// Mean of the grouped eigenvalues.
    pub eigenvalue: f64,
    pub multiplicity: usize,
    #[serde(skip)]
    pub projector: DMatrix<f64>,
}

/// Spectral resolution `L = sum_lambda lambda E_lambda`.
pub fn eigenspace_projectors(s: &Spectrum, group_tol: f64) -> Vec<EigenspaceProjector> {
    s.groups(group_tol)
        .into_iter()
        .map(|range| {
            let basis = s.vectors.columns(range.start, range.len());
            let eigenvalue = s.values[range.clone()].iter().sum::<f64>() / range.len() as f64;
            EigenspaceProjector {
                eigenvalue,
                multiplicity: range.len(),
                projector: &basis * basis.transpose(),
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{laplacian, named::*, random_connected, LaplacianKind::*};
    use crate::linalg::default_spectral_tol;

    fn spec(g: &crate::graph::Graph, kind: LaplacianKind) -> Spectrum {
        Spectrum::of_laplacian(&laplacian(g, kind), kind).unwrap()
    }

    #[test]
    fn small_spectra() {
        let p2 = spec(&path(2), Combinatorial);
        assert!((p2.eigenvalues()[0]).abs() < 1e-14 && (p2.eigenvalues()[1] - 2.0).abs() < 1e-14);
        let k3 = spec(&complete(3), SymmetricNormalized);
        for (got, want) in k3.eigenvalues().iter().zip([0.0, 1.5, 1.5]) {
            assert!((got - want).abs() < 1e-14);
        }
        // det(L - x I) for P3 = -x (x - 1)(x - 3)
        let p3 = spec(&path(3), Combinatorial);
        for (got, want) in p3.eigenvalues().iter().zip([0.0, 1.0, 3.0]) {
            assert!((got - want).abs() < 1e-13);
        }
    }

    #[test]
    fn invariants_on_random_graphs() {
        for seed in 0..10 {
            let g = random_connected(9, 0.4, seed);
            for kind in [Combinatorial, SymmetricNormalized] {
                let l = laplacian(&g, kind);
                let s = spec(&g, kind);
                let u = s.eigenvectors();
                let ortho = (u.transpose() * u - DMatrix::identity(9, 9)).norm();
                assert!(ortho < 1e-10);
                assert!((s.reconstruct() - &l).norm() / l.norm() < 1e-9);
                assert!(s.eigenvalues().windows(2).all(|w| w[0] <= w[1]));
                assert!(s.eigenvalues()[0] > -1e-10);
                for j in 0..9 {
                    let first = u.column(j).iter().copied().find(|x| x.abs() > 1e-12).unwrap();
                    assert!(first > 0.0);
                }
            }
            // connected combinatorial Laplacian: kernel is span{1}
            let s = spec(&g, Combinatorial);
            assert!(s.eigenvalues()[1] > 1e-8);
            let u0 = s.eigenvector(0);
            assert!(u0.iter().all(|&x| (x - u0[0]).abs() < 1e-10));
        }
    }

    #[test]
    fn rejects_asymmetric() {
        let m = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 0.0, 1.0]);
        assert!(matches!(eigendecompose(&m, 1e-12), Err(Error::Domain(_))));
    }

    #[test]
    fn gft_examples() {
        let s = spec(&path(3), Combinatorial);
        let e1 = gft(&s, &s.eigenvector(0)).unwrap();
        assert!((e1[0] - 1.0).abs() < 1e-14 && e1[1].abs() < 1e-14 && e1[2].abs() < 1e-14);
        assert_eq!(gft(&s, &DVector::zeros(3)).unwrap(), DVector::zeros(3));
        assert!(gft(&s, &DVector::zeros(4)).is_err());
    }

    #[test]
    fn pair_gft_examples() {
        let s = spec(&path(4), Combinatorial);
        let (ui, uj) = (s.eigenvector(1), s.eigenvector(3));
        let coeff = pair_gft(&s, &(&ui * uj.transpose())).unwrap();
        for a in 0..4 {
            for b in 0..4 {
                let want = if (a, b) == (1, 3) { 1.0 } else { 0.0 };
                assert!((coeff[(a, b)] - want).abs() < 1e-13);
            }
        }
        let id = pair_gft(&s, &DMatrix::identity(4, 4)).unwrap();
        assert!((id - DMatrix::<f64>::identity(4, 4)).abs().max() < 1e-13);
    }

    #[test]
    fn projectors() {
        let k3 = spec(&complete(3), SymmetricNormalized);
        let tol = default_spectral_tol(k3.eigenvalues());
        let ps = eigenspace_projectors(&k3, tol);
        assert_eq!(ps.iter().map(|p| p.multiplicity).collect::<Vec<_>>(), vec![1, 2]);
        assert!(!k3.is_simple(tol));
        assert!(spec(&path(3), Combinatorial).is_simple(1e-8));
        assert!(spec(&Graph1::k1(), Combinatorial).is_simple(1e-8));

        for seed in 0..8 {
            let g = random_connected(8, 0.5, 100 + seed);
            let l = laplacian(&g, SymmetricNormalized);
            let s = spec(&g, SymmetricNormalized);
            let ps = eigenspace_projectors(&s, default_spectral_tol(s.eigenvalues()));
            let mut sum = DMatrix::zeros(8, 8);
            let mut recon = DMatrix::zeros(8, 8);
            for p in &ps {
                let e = &p.projector;
                assert!((e * e - e).norm() < 1e-9);
                assert!((e - e.transpose()).norm() < 1e-9);
                sum += e;
                recon += e * p.eigenvalue;
            }
            assert!((sum - DMatrix::<f64>::identity(8, 8)).norm() < 1e-9);
            assert!((recon - l).norm() < 1e-9);
        }
    }

    struct Graph1;
    impl Graph1 {
        fn k1() -> crate::graph::Graph {
            crate::graph::Graph::new(1, []).unwrap()
        }
    }
}
