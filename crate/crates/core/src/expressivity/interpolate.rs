use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::filters::BivariatePoly;
use crate::linalg::{default_spectral_tol, pair_gft, Dd, Spectrum};

#[derive(Debug, Clone, Copy)]
pub struct InterpolationOptions {
    /// Minimum eigenvalue gap; `None` uses the scale-relative default.
    pub gap_tol: Option<f64>,
    /// Spectral coefficients with `|c_ij| <= coeff_tol * max |c|` count as zero.
    pub coeff_tol: f64,
}

impl Default for InterpolationOptions {
    fn default() -> Self {
        Self {
            gap_tol: None,
            coeff_tol: 1e-10,
        }
    }
}

/// Monomial coefficients of the Lagrange basis on `nodes`; row `a` holds `l_a`.
pub fn lagrange_basis(nodes: &[f64]) -> DMatrix<f64> {
    let n = nodes.len();
    let dd = lagrange_basis_dd(nodes);
    DMatrix::from_fn(n, n, |a, k| dd[a * n + k].to_f64())
}

fn lagrange_basis_dd(nodes: &[f64]) -> Vec<Dd> {
    let n = nodes.len();
    let mut out = vec![Dd::ZERO; n * n];
    for a in 0..n {
        let mut poly = vec![Dd::from(1.0)];
        let mut denom = Dd::from(1.0);
        for (m, &x) in nodes.iter().enumerate() {
            if m == a {
                continue;
            }
            let mut next = vec![Dd::ZERO; poly.len() + 1];
            for (k, c) in poly.iter().enumerate() {
                next[k + 1] = next[k + 1].add(*c);
                next[k] = next[k].add(c.mul_f64(-x));
            }
            poly = next;
            denom = denom.mul(Dd::from(nodes[a]).add_f64(-x));
        }
        for (k, c) in poly.iter().enumerate() {
            out[a * n + k] = c.div(denom);
        }
    }
    out
}

/// Finds `q` with `apply_full_spectrum_eigen(tabulate(q), eps) = target`.
///
/// Each spectral coefficient of `target` is divided by the matching
/// coefficient of `eps`; the resulting multipliers are interpolated on the
/// eigenvalue grid, so `deg q = n - 1` in each variable.
pub fn universal_interpolate(
    s: &Spectrum,
    eps: &DMatrix<f64>,
    target: &DMatrix<f64>,
    opts: &InterpolationOptions,
) -> Result<BivariatePoly> {
    let n = s.n();
    if n == 0 {
        return Err(Error::Domain("empty graph".into()));
    }
    let gap_tol = opts
        .gap_tol
        .unwrap_or_else(|| default_spectral_tol(s.eigenvalues()));
    if let Some((i, j)) = s.colliding_pair(gap_tol) {
        let lam = s.eigenvalues();
        return Err(Error::Precondition(format!(
            "repeated eigenvalues: lambda_{i} = {} and lambda_{j} = {} are within {gap_tol:e}",
            lam[i], lam[j]
        )));
    }
    let c = pair_gft(s, eps)?;
    let y = pair_gft(s, target)?;
    let cmax = c.abs().max();
    let cutoff = opts.coeff_tol * cmax.max(f64::MIN_POSITIVE);
    for i in 0..n {
        for j in 0..n {
            if c[(i, j)].abs() <= cutoff {
                return Err(Error::Precondition(format!(
                    "spectral coefficient c_({i},{j}) = {:e} of the input vanishes",
                    c[(i, j)]
                )));
            }
        }
    }
    let ratio = y.component_div(&c);
    let ls = lagrange_basis_dd(s.eigenvalues());
    // q(lambda_a, lambda_b) must equal ratio_ba, so A = Ls^T ratio^T Ls. The
    // Lagrange coefficients are huge and cancel, so everything is carried in
    // double-double and the result keeps its low-order part.
    let mut half = vec![Dd::ZERO; n * n];
    for a in 0..n {
        for qq in 0..n {
            half[a * n + qq] = (0..n).fold(Dd::ZERO, |acc, b| {
                acc.add(ls[b * n + qq].mul_f64(ratio[(b, a)]))
            });
        }
    }
    let full: Vec<Dd> = (0..n * n)
        .map(|idx| {
            let (p, qq) = (idx / n, idx % n);
            (0..n).fold(Dd::ZERO, |acc, a| acc.add(half[a * n + qq].mul(ls[a * n + p])))
        })
        .collect();
    BivariatePoly::from_split(
        DMatrix::from_fn(n, n, |p, qq| full[p * n + qq].hi),
        DMatrix::from_fn(n, n, |p, qq| full[p * n + qq].lo),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::filters::{apply_full_spectrum_eigen, tabulate};
    use crate::graph::{laplacian, named, random_connected, LaplacianKind::*};
    use rand::Rng as _;

    fn random(n: usize, seed: u64) -> DMatrix<f64> {
        let mut r = crate::rng::seeded(seed);
        DMatrix::from_fn(n, n, |_, _| r.random_range(-1.0..1.0))
    }

    #[test]
    fn lagrange_is_cardinal() {
        let nodes = [0.0, 0.4, 1.1, 2.0];
        let l = lagrange_basis(&nodes);
        for a in 0..4 {
            for (b, &x) in nodes.iter().enumerate() {
                let v: f64 = (0..4).map(|k| l[(a, k)] * x.powi(k as i32)).sum();
                assert!((v - if a == b { 1.0 } else { 0.0 }).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn identity_and_zero_targets() {
        let l = laplacian(&named::path(4), Combinatorial);
        let s = Spectrum::of_laplacian(&l, Combinatorial).unwrap();
        let eps = random(4, 1);
        let opts = InterpolationOptions::default();
        let q = universal_interpolate(&s, &eps, &eps, &opts).unwrap();
        for &x in &[0.0, 0.5, 1.7, 3.0] {
            assert!((q.eval(x, 0.3) - 1.0).abs() < 1e-9);
        }
        let q0 = universal_interpolate(&s, &eps, &DMatrix::zeros(4, 4), &opts).unwrap();
        assert!(q0.coeff_matrix().abs().max() < 1e-12);
    }

    #[test]
    fn p2_reconstruction() {
        let l = laplacian(&named::path(2), Combinatorial);
        let s = Spectrum::of_laplacian(&l, Combinatorial).unwrap();
        let (eps, y) = (random(2, 2), random(2, 3));
        let q = universal_interpolate(&s, &eps, &y, &Default::default()).unwrap();
        let got = apply_full_spectrum_eigen(&s, &tabulate(&q, &s), &eps).unwrap();
        assert!((got - y).abs().max() < 1e-10);
    }

    #[test]
    fn random_graphs_reconstruct() {
        for seed in 0..10 {
            let g = random_connected(7, 0.45, seed);
            let l = laplacian(&g, SymmetricNormalized);
            let s = Spectrum::of_laplacian(&l, SymmetricNormalized).unwrap();
            if !s.is_simple(1e-6) {
                continue;
            }
            let (eps, y) = (random(7, 10 + seed), random(7, 20 + seed));
            let q = universal_interpolate(&s, &eps, &y, &Default::default()).unwrap();
            let got = apply_full_spectrum_eigen(&s, &tabulate(&q, &s), &eps).unwrap();
            assert!((got - &y).abs().max() < 1e-7, "seed {seed}");
        }
    }

    #[test]
    fn preconditions_are_named() {
        let l = laplacian(&named::complete(3), SymmetricNormalized);
        let s = Spectrum::of_laplacian(&l, SymmetricNormalized).unwrap();
        let err = universal_interpolate(&s, &random(3, 1), &random(3, 2), &Default::default());
        match err {
            Err(Error::Precondition(m)) => assert!(m.contains("lambda_1") && m.contains("lambda_2")),
            other => panic!("{other:?}"),
        }
        let l = laplacian(&named::path(3), Combinatorial);
        let s = Spectrum::of_laplacian(&l, Combinatorial).unwrap();
        let mut chat = pair_gft(&s, &random(3, 4)).unwrap();
        chat[(0, 2)] = 0.0;
        let eps = crate::linalg::pair_igft(&s, &chat).unwrap();
        match universal_interpolate(&s, &eps, &random(3, 5), &Default::default()) {
            Err(Error::Precondition(m)) => assert!(m.contains("(0,2)")),
            other => panic!("{other:?}"),
        }
    }
}
