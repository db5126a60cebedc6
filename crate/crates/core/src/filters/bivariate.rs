use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::univariate::UnivariatePoly;
use crate::error::{check_square, Error, Result};
use crate::linalg::{numerical_rank, svd, Dd, LinearOp, Spectrum};

/// `q(s, t) = sum_ij a_ij s^i t^j` with a square `(K+1) x (K+1)` coefficient
/// matrix.
///
/// As an operator on pair signals, `s` stands for `L ⊗ I` and `t` for
/// `I ⊗ L`. Under column-stacking vectorization `s` therefore multiplies a
/// pair signal from the right and `t` from the left:
/// `q(L ⊗ I, I ⊗ L) vec(eps) = vec(sum_ij a_ij L^j eps L^i)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "BivariateJson", into = "BivariateJson")]
pub struct BivariatePoly {
    coeffs: DMatrix<f64>,
    /// Optional low-order parts: the exact coefficients are
    /// `coeffs + coeffs_lo`, as produced by extended-precision constructions.
    coeffs_lo: Option<DMatrix<f64>>,
    cap: Option<usize>,
}

#[derive(Serialize, Deserialize)]
struct BivariateJson {
    #[serde(rename = "K")]
    k: usize,
    coeff_matrix: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    total_degree_cap: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    coeff_matrix_lo: Option<Vec<Vec<f64>>>,
}

impl TryFrom<BivariateJson> for BivariatePoly {
    type Error = Error;

    fn try_from(j: BivariateJson) -> Result<Self> {
        let size = j.k + 1;
        if j.coeff_matrix.len() != size || j.coeff_matrix.iter().any(|r| r.len() != size) {
            return Err(Error::Dimension(format!(
                "coeff_matrix must be {size}x{size} for K = {}",
                j.k
            )));
        }
        let m = DMatrix::from_fn(size, size, |i, k| j.coeff_matrix[i][k]);
        let mut q = BivariatePoly::new(m)?;
        if let Some(lo) = j.coeff_matrix_lo {
            if lo.len() != size || lo.iter().any(|r| r.len() != size) {
                return Err(Error::Dimension("coeff_matrix_lo must match coeff_matrix".into()));
            }
            q.coeffs_lo = Some(DMatrix::from_fn(size, size, |i, k| lo[i][k]));
        }
        match j.total_degree_cap {
            Some(cap) => q.with_cap(cap),
            None => Ok(q),
        }
    }
}

impl From<BivariatePoly> for BivariateJson {
    fn from(q: BivariatePoly) -> Self {
        BivariateJson {
            k: q.degree(),
            coeff_matrix: q
                .coeffs
                .row_iter()
                .map(|r| r.iter().copied().collect())
                .collect(),
            total_degree_cap: q.cap,
            coeff_matrix_lo: q
                .coeffs_lo
                .map(|lo| lo.row_iter().map(|r| r.iter().copied().collect()).collect()),
        }
    }
}

impl BivariatePoly {
    pub fn new(coeffs: DMatrix<f64>) -> Result<Self> {
        if coeffs.nrows() == 0 || coeffs.nrows() != coeffs.ncols() {
            return Err(Error::Dimension(format!(
                "coefficient matrix must be square and non-empty, got {}x{}",
                coeffs.nrows(),
                coeffs.ncols()
            )));
        }
        Ok(Self {
            coeffs,
            coeffs_lo: None,
            cap: None,
        })
    }

    /// Coefficients given as unevaluated sums `hi + lo`.
    pub(crate) fn from_split(hi: DMatrix<f64>, lo: DMatrix<f64>) -> Result<Self> {
        let mut q = Self::new(hi)?;
        if lo.shape() != q.coeffs.shape() {
            return Err(Error::Dimension("low-order part must match".into()));
        }
        q.coeffs_lo = Some(lo);
        Ok(q)
    }

    /// Declares that `a_ij = 0` whenever `i + j > cap`.
    pub fn with_cap(mut self, cap: usize) -> Result<Self> {
        for i in 0..self.coeffs.nrows() {
            for j in 0..self.coeffs.ncols() {
                if i + j > cap && self.coeffs[(i, j)] != 0.0 {
                    return Err(Error::Domain(format!(
                        "a_{i}{j} = {} violates total degree cap {cap}",
                        self.coeffs[(i, j)]
                    )));
                }
            }
        }
        self.cap = Some(cap);
        Ok(self)
    }

    pub fn constant(c: f64) -> Self {
        Self::new(DMatrix::from_element(1, 1, c)).expect("1x1")
    }

    /// Single monomial `s^i t^j`.
    pub fn monomial(i: usize, j: usize) -> Self {
        let size = i.max(j) + 1;
        let mut m = DMatrix::zeros(size, size);
        m[(i, j)] = 1.0;
        Self::new(m).expect("square")
    }

    pub fn degree(&self) -> usize {
        self.coeffs.nrows() - 1
    }

    pub fn coeff_matrix(&self) -> &DMatrix<f64> {
        &self.coeffs
    }

    pub fn cap(&self) -> Option<usize> {
        self.cap
    }

    /// Horner evaluation carried out in double-double arithmetic, which
    /// keeps high-degree interpolants accurate despite large coefficients.
    pub fn eval(&self, s: f64, t: f64) -> f64 {
        let k = self.degree();
        let coeff = |i: usize, j: usize| Dd {
            hi: self.coeffs[(i, j)],
            lo: self.coeffs_lo.as_ref().map_or(0.0, |lo| lo[(i, j)]),
        };
        let outer = (0..=k).rev().fold(Dd::ZERO, |acc, i| {
            let inner = (0..=k)
                .rev()
                .fold(Dd::ZERO, |a, j| a.mul_f64(t).add(coeff(i, j)));
            acc.mul_f64(s).add(inner)
        });
        outer.to_f64()
    }

    /// Coefficient-matrix rank at a relative singular-value cutoff.
    pub fn rank(&self, rel_tol: f64) -> usize {
        numerical_rank(&self.coeffs, rel_tol)
    }
}

/// `G_ij = q(lambda_i, lambda_j)`.
pub fn tabulate(q: &BivariatePoly, s: &Spectrum) -> DMatrix<f64> {
    let lam = s.eigenvalues();
    DMatrix::from_fn(s.n(), s.n(), |i, j| q.eval(lam[i], lam[j]))
}

/// Full-spectrum convolution through the eigenbasis.
///
/// `G_ij` scales the Kronecker basis vector `u_i ⊗ u_j`, which is
/// `vec(u_j u_i^T)`. In matrix form this is
/// `U (G^T .* (U^T eps U)) U^T`, so the pair signal `u_a u_b^T` is mapped
/// to `G_ba u_a u_b^T`.
pub fn apply_full_spectrum_eigen(
    s: &Spectrum,
    g: &DMatrix<f64>,
    eps: &DMatrix<f64>,
) -> Result<DMatrix<f64>> {
    let n = s.n();
    check_square("response", g.nrows(), g.ncols(), n)?;
    check_square("pair signal", eps.nrows(), eps.ncols(), n)?;
    let u = s.eigenvectors();
    let mut hat = u.tr_mul(eps) * u;
    for i in 0..n {
        for j in 0..n {
            hat[(i, j)] *= g[(j, i)];
        }
    }
    Ok(u * hat * u.transpose())
}

/// `sum_pq a_pq L^q eps L^p` for symmetric `L`, with `K + 1` left powers
/// cached and a Horner sweep on the right.
pub fn apply_bivariate_poly<L: LinearOp + ?Sized>(
    l: &L,
    q: &BivariatePoly,
    eps: &DMatrix<f64>,
) -> Result<DMatrix<f64>> {
    let n = l.dim();
    check_square("pair signal", eps.nrows(), eps.ncols(), n)?;
    let k = q.degree();
    let mut left = Vec::with_capacity(k + 1);
    left.push(eps.clone());
    for p in 1..=k {
        let next = l.apply_mat(&left[p - 1]);
        left.push(next);
    }
    let a = q.coeff_matrix();
    let row_term = |p: usize| -> DMatrix<f64> {
        let mut r = DMatrix::zeros(n, n);
        for (qq, lq) in left.iter().enumerate() {
            let c = a[(p, qq)];
            if c != 0.0 {
                r += lq * c;
            }
        }
        r
    };
    // Y L = (L Y^T)^T because L is symmetric
    let mut y = row_term(k);
    for p in (0..k).rev() {
        y = l.apply_mat(&y.transpose()).transpose() + row_term(p);
    }
    Ok(y)
}

/// `sum_r f_r(s) h_r(t)`, realised as `sum_r h_r(L) eps f_r(L)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TensorDecomposition {
    #[serde(rename = "S")]
    pub rank: usize,
    pub pairs: Vec<FactorPair>,
    /// Frobenius norm of the discarded part of the coefficient matrix.
    #[serde(default)]
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FactorPair {
    pub f: UnivariatePoly,
    pub h: UnivariatePoly,
}

/// Truncated SVD of the coefficient matrix: `A ≈ sum_r sigma_r a_r b_r^T`
/// with `f_r = sqrt(sigma_r) a_r` and `h_r = sqrt(sigma_r) b_r`.
pub fn tensor_decompose(q: &BivariatePoly, rank: usize) -> Result<TensorDecomposition> {
    if rank == 0 {
        return Err(Error::Domain("decomposition rank must be at least 1".into()));
    }
    let d = svd(q.coeff_matrix());
    let (u, v, sv) = (&d.u, &d.v, &d.singular_values);
    let kept = rank.min(sv.len());
    let pairs = (0..kept)
        .map(|r| {
            let w = sv[r].sqrt();
            FactorPair {
                f: UnivariatePoly::monomial(u.column(r).iter().map(|x| x * w).collect()),
                h: UnivariatePoly::monomial(v.column(r).iter().map(|x| x * w).collect()),
            }
        })
        .collect();
    let residual = sv.iter().skip(kept).map(|s| s * s).sum::<f64>().sqrt();
    Ok(TensorDecomposition {
        rank,
        pairs,
        residual,
    })
}

impl TensorDecomposition {
    /// Coefficient matrix `sum_r f_r h_r^T` in the monomial basis.
    pub fn coeff_matrix(&self) -> DMatrix<f64> {
        let size = self
            .pairs
            .iter()
            .map(|p| p.f.degree().max(p.h.degree()) + 1)
            .max()
            .unwrap_or(1);
        let mut a = DMatrix::zeros(size, size);
        for p in &self.pairs {
            let (f, h) = (p.f.to_monomial(), p.h.to_monomial());
            for (i, fi) in f.iter().enumerate() {
                for (j, hj) in h.iter().enumerate() {
                    a[(i, j)] += fi * hj;
                }
            }
        }
        a
    }
}

/// `sum_r h_r(L) eps f_r(L)` for symmetric `L`.
pub fn apply_rank_s<L: LinearOp + ?Sized>(
    t: &TensorDecomposition,
    l: &L,
    eps: &DMatrix<f64>,
) -> Result<DMatrix<f64>> {
    let n = l.dim();
    check_square("pair signal", eps.nrows(), eps.ncols(), n)?;
    let mut out = DMatrix::zeros(n, n);
    for p in &t.pairs {
        let right = p.f.apply(l, &eps.transpose()).transpose();
        out += p.h.apply(l, &right);
    }
    Ok(out)
}
