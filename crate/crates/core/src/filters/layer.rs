use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use super::univariate::UnivariatePoly;
use crate::error::{Error, Result};
use crate::linalg::{CsrMatrix, LinearOp, Spectrum};

/// Multiply-add counts for one rank-1 layer evaluation.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct LayerCost {
    /// Products with `L` (each costs `nnz(L)` per feature column).
    pub propagation: u64,
    /// Product of the pair signal with the node features.
    pub pair_mix: u64,
    /// Dense feature transform `H W`.
    pub transform: u64,
}

impl LayerCost {
    pub fn total(&self) -> u64 {
        self.propagation + self.pair_mix + self.transform
    }
}

#[derive(Debug, Clone)]
pub struct LayerOutput {
    pub output: DMatrix<f64>,
    pub cost: LayerCost,
}

/// `sigma(h(L) eps f(L) H W)`, evaluated right to left so that no `n x n`
/// intermediate beyond `eps` is formed.
pub fn rank1_layer(
    l: &CsrMatrix,
    f: &UnivariatePoly,
    h: &UnivariatePoly,
    eps: &DMatrix<f64>,
    features: &DMatrix<f64>,
    weights: &DMatrix<f64>,
    sigma: impl Fn(f64) -> f64,
) -> Result<LayerOutput> {
    let n = l.dim();
    if eps.shape() != (n, n) || features.nrows() != n || weights.nrows() != features.ncols() {
        return Err(Error::Dimension(format!(
            "layer chain {}x{} . {}x{} . {}x{} on {n} nodes",
            eps.nrows(),
            eps.ncols(),
            features.nrows(),
            features.ncols(),
            weights.nrows(),
            weights.ncols()
        )));
    }
    let d = features.ncols() as u64;
    let h1 = f.apply(l, features);
    let h2 = eps * h1;
    let h3 = h.apply(l, &h2);
    let output = (h3 * weights).map(sigma);
    // Bernstein de Casteljau needs K(K+1) products; the other bases K
    let products = |p: &UnivariatePoly| -> u64 {
        let k = p.degree() as u64;
        match p.basis() {
            super::Basis::Bernstein => k * (k + 1),
            _ => k,
        }
    };
    let nnz_eps = eps.iter().filter(|x| **x != 0.0).count() as u64;
    let cost = LayerCost {
        propagation: (products(f) + products(h)) * l.nnz() as u64 * d,
        pair_mix: nnz_eps * d,
        transform: n as u64 * d * weights.ncols() as u64,
    };
    Ok(LayerOutput { output, cost })
}

/// `sum_i xhat_i u_i u_i^T`.
pub fn diag_embed(s: &Spectrum, x: &DVector<f64>) -> Result<DMatrix<f64>> {
    let xhat = crate::linalg::gft(s, x)?;
    let u = s.eigenvectors();
    let mut scaled = u.clone();
    for (j, c) in xhat.iter().enumerate() {
        scaled.column_mut(j).scale_mut(*c);
    }
    Ok(scaled * u.transpose())
}

/// `sum_ij (u_i^T H u_j) u_i`.
pub fn project(s: &Spectrum, h: &DMatrix<f64>) -> Result<DVector<f64>> {
    let hat = crate::linalg::pair_gft(s, h)?;
    let row_sums = DVector::from_fn(s.n(), |i, _| hat.row(i).sum());
    Ok(s.eigenvectors() * row_sums)
}
