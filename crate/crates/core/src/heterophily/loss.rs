use nalgebra::DMatrix;
use serde::Serialize;

use super::ClassModel;
use crate::error::{Error, Result};
use crate::graph::Partition;

/// Coefficients of a classwise permutation-equivariant matrix
/// `C = sum_a (alpha_a I + beta_a J) on V_a x V_a + sum_{a != b} gamma_ab J on V_a x V_b`.
///
/// A singleton class stores its single entry in `beta` with `alpha = 0`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EquivariantConv {
    pub alpha: Vec<f64>,
    pub beta: Vec<f64>,
    /// Row-major `k x k`; the diagonal is unused and kept at zero.
    pub gamma: Vec<Vec<f64>>,
}

impl EquivariantConv {
    pub fn zeros(k: usize) -> Self {
        Self {
            alpha: vec![0.0; k],
            beta: vec![0.0; k],
            gamma: vec![vec![0.0; k]; k],
        }
    }

    /// `C = I`, written with the singleton convention.
    pub fn identity(partition: &Partition) -> Self {
        let mut c = Self::zeros(partition.k());
        for (a, &s) in partition.sizes().iter().enumerate() {
            if s == 1 {
                c.beta[a] = 1.0;
            } else {
                c.alpha[a] = 1.0;
            }
        }
        c
    }

    pub fn k(&self) -> usize {
        self.alpha.len()
    }

    pub fn assemble(&self, partition: &Partition) -> Result<DMatrix<f64>> {
        let k = partition.k();
        if self.alpha.len() != k
            || self.beta.len() != k
            || self.gamma.len() != k
            || self.gamma.iter().any(|r| r.len() != k)
        {
            return Err(Error::Dimension(format!(
                "coefficients for {} classes, partition has {k}",
                self.alpha.len()
            )));
        }
        let n = partition.n();
        Ok(DMatrix::from_fn(n, n, |p, q| {
            let (a, b) = (partition.class_of(p), partition.class_of(q));
            if a != b {
                self.gamma[a][b]
            } else if p == q {
                self.alpha[a] + self.beta[a]
            } else {
                self.beta[a]
            }
        }))
    }
}

/// Closed-form classwise mean-squared error of `H = C X` against the class
/// means, with the noise integrated out.
pub fn loss(c: &DMatrix<f64>, model: &ClassModel) -> Result<f64> {
    let n = model.n();
    if c.nrows() != n || c.ncols() != n {
        return Err(Error::Dimension(format!(
            "operator is {}x{} for {n} nodes",
            c.nrows(),
            c.ncols()
        )));
    }
    let part = model.partition();
    let k = model.k();
    let gram = model.mean_gram();
    let taus = model.taus();
    let mut total = 0.0;
    let mut r = vec![0.0; k];
    for p in 0..n {
        let a = part.class_of(p);
        r.iter_mut().for_each(|x| *x = 0.0);
        let mut variance = 0.0;
        for q in 0..n {
            let b = part.class_of(q);
            r[b] += c[(p, q)];
            variance += taus[b] * c[(p, q)] * c[(p, q)];
        }
        // ||sum_b r_b m_b - m_a||^2 through the Gram matrix of the means
        let mut bias = gram[(a, a)];
        for b in 0..k {
            bias -= 2.0 * r[b] * gram[(b, a)];
            for e in 0..k {
                bias += r[b] * r[e] * gram[(b, e)];
            }
        }
        total += (bias + variance) / part.sizes()[a] as f64;
    }
    Ok(total)
}

/// Per-class quadratic `phi_a` of an equivariant operator.
pub fn class_loss(coeffs: &EquivariantConv, model: &ClassModel, a: usize) -> f64 {
    let k = model.k();
    let sizes = model.sizes();
    let taus = model.taus();
    let gram = model.mean_gram();
    let na = sizes[a] as f64;
    let (al, be) = (coeffs.alpha[a], coeffs.beta[a]);
    // coefficient of m_b in the bias vector u_a + M_{-a} gamma_a
    let w: Vec<f64> = (0..k)
        .map(|b| {
            if b == a {
                al + na * be - 1.0
            } else {
                sizes[b] as f64 * coeffs.gamma[a][b]
            }
        })
        .collect();
    let mut bias = 0.0;
    for b in 0..k {
        for e in 0..k {
            bias += w[b] * w[e] * gram[(b, e)];
        }
    }
    let own = taus[a] * ((al + be).powi(2) + (na - 1.0) * be * be);
    let cross: f64 = (0..k)
        .filter(|&b| b != a)
        .map(|b| taus[b] * sizes[b] as f64 * coeffs.gamma[a][b].powi(2))
        .sum();
    bias + own + cross
}

/// `sum_a phi_a`; equal to `loss(coeffs.assemble(..))` because each of the
/// `n_a` rows of class `a` contributes `phi_a / n_a`.
pub fn loss_equivariant(coeffs: &EquivariantConv, model: &ClassModel) -> Result<f64> {
    let k = model.k();
    if coeffs.k() != k || coeffs.beta.len() != k || coeffs.gamma.len() != k {
        return Err(Error::Dimension(format!(
            "coefficients for {} classes, model has {k}",
            coeffs.k()
        )));
    }
    Ok((0..k).map(|a| class_loss(coeffs, model, a)).sum())
}

/// Mean taken relative to the first value, so a constant block averages to
/// itself exactly.
fn shifted_mean(xs: impl Iterator<Item = f64>) -> f64 {
    let mut xs = xs.peekable();
    let first = *xs.peek().expect("non-empty block");
    let (sum, count) = xs.fold((0.0, 0usize), |(s, c), x| (s + (x - first), c + 1));
    first + sum / count as f64
}

/// Coefficients of the Reynolds average of `c` over within-class
/// permutations, via block means.
pub fn equivariant_part(c: &DMatrix<f64>, partition: &Partition) -> Result<EquivariantConv> {
    let n = partition.n();
    if c.nrows() != n || c.ncols() != n {
        return Err(Error::Dimension(format!(
            "operator is {}x{} for {n} nodes",
            c.nrows(),
            c.ncols()
        )));
    }
    let k = partition.k();
    let members = partition.members();
    let mut out = EquivariantConv::zeros(k);
    for a in 0..k {
        let va = &members[a];
        let diag = shifted_mean(va.iter().map(|&p| c[(p, p)]));
        if va.len() == 1 {
            out.beta[a] = diag;
        } else {
            let off = shifted_mean(
                va.iter()
                    .flat_map(|&p| va.iter().filter(move |&&q| q != p).map(move |&q| c[(p, q)])),
            );
            out.beta[a] = off;
            out.alpha[a] = diag - off;
        }
        for b in (0..k).filter(|&b| b != a) {
            let vb = &members[b];
            out.gamma[a][b] = shifted_mean(va.iter().flat_map(|&p| vb.iter().map(move |&q| c[(p, q)])));
        }
    }
    Ok(out)
}

/// Projection of `c` onto the classwise permutation-equivariant matrices.
pub fn reynolds_average(c: &DMatrix<f64>, partition: &Partition) -> Result<DMatrix<f64>> {
    equivariant_part(c, partition)?.assemble(partition)
}
