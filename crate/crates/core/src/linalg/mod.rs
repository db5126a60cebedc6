//! Eigendecomposition, graph Fourier transforms, and Kronecker-operator algebra.

mod csv;
mod dd;
mod kron;
mod op;
mod spectrum;
mod svd;

pub(crate) use dd::Dd;
pub use csv::{format_f64, read_matrix_csv, write_matrix_csv};
pub use kron::{kron_apply, kron_dense, unvec, vec, KronSum, DENSE_LIMIT};
pub use op::{CsrMatrix, LinearOp};
pub use spectrum::{
    eigendecompose, eigenspace_projectors, gft, igft, is_simple_spectrum, pair_gft, pair_igft,
    EigenspaceProjector, Spectrum,
};
pub use svd::{svd, Svd};

use nalgebra::DMatrix;

/// Numerical rank: singular values above `rel_tol * sigma_max`.
pub fn numerical_rank(m: &DMatrix<f64>, rel_tol: f64) -> usize {
    if m.is_empty() {
        return 0;
    }
    let sv = svd(m).singular_values;
    let smax = sv.max();
    if smax == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > rel_tol * smax).count()
}

/// Orthonormal basis (as columns) of the null space of `m`, using the same
/// relative cutoff as [`numerical_rank`].
pub fn null_space(m: &DMatrix<f64>, rel_tol: f64) -> DMatrix<f64> {
    let cols = m.ncols();
    // pad with zero rows so the decomposition returns a full right basis
    let rows = m.nrows().max(cols);
    let mut padded = DMatrix::zeros(rows, cols);
    padded.view_mut((0, 0), (m.nrows(), cols)).copy_from(m);
    let d = svd(&padded);
    let smax = d.singular_values.max();
    let keep: Vec<usize> = (0..cols)
        .filter(|&i| smax == 0.0 || d.singular_values[i] <= rel_tol * smax)
        .collect();
    let mut out = DMatrix::zeros(cols, keep.len());
    for (c, &i) in keep.iter().enumerate() {
        out.set_column(c, &d.v.column(i));
    }
    out
}

/// Default grouping/gap tolerance: `1e-8 * max(1, |lambda_max|)`.
pub fn default_spectral_tol(eigenvalues: &[f64]) -> f64 {
    let scale = eigenvalues.iter().fold(1.0_f64, |m, &x| m.max(x.abs()));
    1e-8 * scale
}
