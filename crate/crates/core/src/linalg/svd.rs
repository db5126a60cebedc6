use nalgebra::{DMatrix, DVector};

/// Thin singular value decomposition `A = U diag(s) V^T` with `s` sorted
/// descending.
///
/// One-sided Jacobi rotations: slower than bidiagonalization but the
/// singular vectors stay paired correctly for exactly rank-deficient
/// inputs, which are the common case here (low-rank coefficient matrices,
/// stacked constraint blocks).
#[derive(Debug, Clone)]
pub struct Svd {
    /// `m x k` with `k = min(m, n)`; columns for zero singular values are zero.
    pub u: DMatrix<f64>,
    pub singular_values: DVector<f64>,
    /// `n x k`.
    pub v: DMatrix<f64>,
}

impl Svd {
    pub fn recompose(&self) -> DMatrix<f64> {
        let mut us = self.u.clone();
        for (j, s) in self.singular_values.iter().enumerate() {
            us.column_mut(j).scale_mut(*s);
        }
        us * self.v.transpose()
    }
}

const MAX_SWEEPS: usize = 80;

pub fn svd(a: &DMatrix<f64>) -> Svd {
    if a.nrows() < a.ncols() {
        let t = svd(&a.transpose());
        return Svd {
            u: t.v,
            singular_values: t.singular_values,
            v: t.u,
        };
    }
    let (m, n) = a.shape();
    let mut w = a.clone();
    let mut v = DMatrix::<f64>::identity(n, n);
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let alpha = w.column(p).norm_squared();
                let beta = w.column(q).norm_squared();
                let gamma = w.column(p).dot(&w.column(q));
                if gamma == 0.0 || gamma.abs() <= f64::EPSILON * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                rotate(&mut w, p, q, c, s);
                rotate(&mut v, p, q, c, s);
            }
        }
        if !rotated {
            break;
        }
    }
    let norms: Vec<f64> = (0..n).map(|j| w.column(j).norm()).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| norms[y].total_cmp(&norms[x]));
    let mut u = DMatrix::zeros(m, n);
    let mut vs = DMatrix::zeros(n, n);
    let mut sv = DVector::zeros(n);
    for (dst, &src) in order.iter().enumerate() {
        sv[dst] = norms[src];
        if norms[src] > 0.0 {
            u.set_column(dst, &(w.column(src) / norms[src]));
        }
        vs.set_column(dst, &v.column(src));
    }
    Svd {
        u,
        singular_values: sv,
        v: vs,
    }
}

fn rotate(m: &mut DMatrix<f64>, p: usize, q: usize, c: f64, s: f64) {
    for r in 0..m.nrows() {
        let (x, y) = (m[(r, p)], m[(r, q)]);
        m[(r, p)] = c * x - s * y;
        m[(r, q)] = s * x + c * y;
    }
}
