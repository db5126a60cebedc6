use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{Graph, Partition};
use crate::linalg::{default_spectral_tol, eigenspace_projectors, null_space, numerical_rank, Spectrum};

/// Rank witness that a spectral filter with no cross-class entries must be
/// a multiple of the identity.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectralObstruction {
    /// Vertices chosen by the greedy coverage rule, in order.
    pub activating_list: Vec<usize>,
    /// `S_i` for each listed vertex: eigenvector indices with `|u_l(i)| > tol`.
    pub block_supports: Vec<Vec<usize>>,
    pub stacked_rank: usize,
    #[serde(rename = "K")]
    pub k: usize,
    pub n: usize,
    /// Listed vertices as singletons plus one class with the rest.
    pub labels: Vec<usize>,
    /// Dimension of the kernel of the cross-class map on eigenspace coefficients.
    pub kernel_dim: usize,
    /// Whether that kernel is spanned by the all-ones vector.
    pub kernel_is_constant: bool,
    /// Per eigenspace: every cross-class-free coefficient vector on the
    /// individual eigenvectors is constant across the eigenspace.
    pub eigenspace_constancy: Vec<bool>,
    pub verdict: bool,
}

impl SpectralObstruction {
    pub fn partition(&self) -> Partition {
        Partition::new(self.labels.clone()).expect("labels cover 0..=K")
    }
}

/// `M_i = U_{-i} diag(u_1(i), ..., u_n(i))`.
pub fn deleted_row_block(u: &DMatrix<f64>, i: usize) -> DMatrix<f64> {
    let n = u.ncols();
    let rows: Vec<usize> = (0..u.nrows()).filter(|&r| r != i).collect();
    DMatrix::from_fn(rows.len(), n, |r, l| u[(rows[r], l)] * u[(i, l)])
}

pub fn support(u: &DMatrix<f64>, i: usize, tol: f64) -> Vec<usize> {
    (0..u.ncols()).filter(|&l| u[(i, l)].abs() > tol).collect()
}

fn stack(blocks: &[DMatrix<f64>], n: usize) -> DMatrix<f64> {
    let rows: usize = blocks.iter().map(|b| b.nrows()).sum();
    let mut out = DMatrix::zeros(rows, n);
    let mut at = 0;
    for b in blocks {
        out.view_mut((at, 0), (b.nrows(), n)).copy_from(b);
        at += b.nrows();
    }
    out
}

fn is_constant_span(kernel: &DMatrix<f64>, tol: f64) -> bool {
    if kernel.ncols() != 1 {
        return false;
    }
    let v = kernel.column(0);
    let m = v.len() as f64;
    let mean = v.sum() / m;
    v.iter().all(|x| (x - mean).abs() <= tol.max(1e-12) * m.sqrt())
}

/// Greedy column-activating list, stacked rank, and kernel checks of the
/// cross-class constraint map for the induced `(K + 1)`-partition.
///
/// `tol` is both the support threshold for eigenvector entries and the
/// relative singular-value cutoff.
pub fn spectral_obstruction(g: &Graph, s: &Spectrum, tol: f64) -> Result<SpectralObstruction> {
    let n = g.n();
    if s.n() != n {
        return Err(Error::Dimension(format!("spectrum of size {} for {n} nodes", s.n())));
    }
    if n == 0 || !g.is_connected() {
        return Err(Error::Precondition(format!(
            "graph must be connected ({} components)",
            g.component_count()
        )));
    }
    let u = s.eigenvectors();
    let supports: Vec<Vec<usize>> = (0..n).map(|i| support(u, i, tol)).collect();
    let mut covered = vec![false; n];
    let mut count = 0;
    let mut list = Vec::new();
    while count < n {
        let gain = |i: usize| supports[i].iter().filter(|&&l| !covered[l]).count();
        // strict comparison keeps the smallest vertex among ties
        let (best, best_gain) = (0..n).fold((0, 0), |(b, bg), i| {
            let gi = gain(i);
            if gi > bg {
                (i, gi)
            } else {
                (b, bg)
            }
        });
        if best_gain == 0 {
            return Err(Error::Numeric(format!(
                "support threshold {tol:e} leaves an eigenvector with no entry above it"
            )));
        }
        for &l in &supports[best] {
            if !covered[l] {
                covered[l] = true;
                count += 1;
            }
        }
        list.push(best);
    }
    let blocks: Vec<DMatrix<f64>> = list.iter().map(|&i| deleted_row_block(u, i)).collect();
    let m_i = stack(&blocks, n);
    let stacked_rank = numerical_rank(&m_i, tol);

    let mut labels = vec![list.len(); n];
    for (t, &i) in list.iter().enumerate() {
        labels[i] = t;
    }
    // compact the labels when the listed vertices already exhaust V
    if labels.iter().all(|&c| c < list.len()) {
        labels.iter_mut().for_each(|c| *c = (*c).min(list.len() - 1));
    }
    let cross: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .filter(|&(i, j)| labels[i] != labels[j])
        .collect();

    let group_tol = default_spectral_tol(s.eigenvalues());
    let projectors = eigenspace_projectors(s, group_tol);
    let t_map = DMatrix::from_fn(cross.len(), projectors.len(), |r, c| projectors[c].projector[cross[r]]);
    let kernel = null_space(&t_map, tol);
    let kernel_is_constant = is_constant_span(&kernel, tol.sqrt());

    let t_fine = DMatrix::from_fn(cross.len(), n, |r, l| {
        let (i, j) = cross[r];
        u[(i, l)] * u[(j, l)]
    });
    let fine_kernel = null_space(&t_fine, tol);
    let eigenspace_constancy = s
        .groups(group_tol)
        .into_iter()
        .map(|range| {
            fine_kernel.column_iter().all(|v| {
                let first = v[range.start];
                range.clone().all(|l| (v[l] - first).abs() <= tol.sqrt())
            })
        })
        .collect();

    Ok(SpectralObstruction {
        block_supports: list.iter().map(|&i| supports[i].clone()).collect(),
        k: list.len(),
        activating_list: list,
        stacked_rank,
        n,
        labels,
        kernel_dim: kernel.ncols(),
        kernel_is_constant,
        eigenspace_constancy,
        verdict: stacked_rank + 1 == n && kernel_is_constant,
    })
}

/// Frobenius distance from `c` to `span{E_lambda}`, using the coefficients
/// `c_lambda = tr(E_lambda C) / m_lambda`.
pub fn distance_to_spectral_subspace(c: &DMatrix<f64>, s: &Spectrum, group_tol: f64) -> Result<f64> {
    let n = s.n();
    if c.nrows() != n || c.ncols() != n {
        return Err(Error::Dimension(format!(
            "operator is {}x{} for a spectrum of size {n}",
            c.nrows(),
            c.ncols()
        )));
    }
    let mut proj = DMatrix::zeros(n, n);
    for e in eigenspace_projectors(s, group_tol) {
        let coeff = (&e.projector * c).trace() / e.multiplicity as f64;
        proj += e.projector * coeff;
    }
    Ok((c - proj).norm())
}
