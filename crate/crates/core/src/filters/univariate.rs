use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::LaplacianKind;
use crate::linalg::{LinearOp, Spectrum};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Basis {
    Monomial,
    #[serde(alias = "chebyshev")]
    ChebyshevFirstKind,
    /// Coefficients are the filter values at the Chebyshev nodes of the
    /// rescaled domain.
    ChebyshevInterpolated,
    Bernstein,
}

impl Basis {
    pub fn is_rescaled(self) -> bool {
        self != Basis::Monomial
    }
}

/// Polynomial `p(x)` in one of several bases. Rescaled bases live on
/// `domain`, mapped affinely onto `[-1, 1]` (Chebyshev) or `[0, 1]` (Bernstein).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "PolyJson")]
pub struct UnivariatePoly {
    basis: Basis,
    coeffs: Vec<f64>,
    domain: [f64; 2],
}

#[derive(Deserialize)]
struct PolyJson {
    basis: Basis,
    coeffs: Vec<f64>,
    #[serde(default = "default_domain")]
    domain: [f64; 2],
}

fn default_domain() -> [f64; 2] {
    [0.0, 2.0]
}

impl TryFrom<PolyJson> for UnivariatePoly {
    type Error = Error;

    fn try_from(j: PolyJson) -> Result<Self> {
        UnivariatePoly::new(j.basis, j.coeffs, j.domain)
    }
}

/// Interval containing the spectrum of `l` without decomposing it: `[0, 2]`
/// for the normalized Laplacian, the Gershgorin bound `[0, max_i 2 L_ii]`
/// for the combinatorial one.
pub fn spectral_domain(l: &DMatrix<f64>, kind: LaplacianKind) -> [f64; 2] {
    match kind {
        LaplacianKind::SymmetricNormalized => [0.0, 2.0],
        LaplacianKind::Combinatorial => {
            let hi = l
                .row_iter()
                .map(|r| r.iter().map(|x| x.abs()).sum::<f64>())
                .fold(0.0, f64::max);
            [0.0, if hi > 0.0 { hi } else { 1.0 }]
        }
    }
}

impl UnivariatePoly {
    pub fn new(basis: Basis, coeffs: Vec<f64>, domain: [f64; 2]) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::Domain("a polynomial needs at least one coefficient".into()));
        }
        if basis.is_rescaled() && !(domain[1] > domain[0] && domain.iter().all(|x| x.is_finite())) {
            return Err(Error::Domain(format!(
                "degenerate spectral domain [{}, {}]",
                domain[0], domain[1]
            )));
        }
        Ok(Self {
            basis,
            coeffs,
            domain,
        })
    }

    pub fn monomial(coeffs: Vec<f64>) -> Self {
        Self::new(Basis::Monomial, coeffs, default_domain()).expect("monomial needs no domain")
    }

    pub fn constant(c: f64) -> Self {
        Self::monomial(vec![c])
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn domain(&self) -> [f64; 2] {
        self.domain
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Affine map of the domain onto `[-1, 1]`, as `(scale, shift)`.
    fn cheb_map(&self) -> (f64, f64) {
        let [a, b] = self.domain;
        (2.0 / (b - a), -(a + b) / (b - a))
    }

    /// Chebyshev nodes on `[-1, 1]` for the current degree.
    fn cheb_nodes(&self) -> Vec<f64> {
        let m = self.coeffs.len() as f64;
        (0..self.coeffs.len())
            .map(|j| ((j as f64 + 0.5) * std::f64::consts::PI / m).cos())
            .collect()
    }

    /// Chebyshev-series coefficients `w` of an interpolating polynomial,
    /// such that `p(y) = sum_k w_k T_k(y)`.
    fn interpolated_to_chebyshev(&self) -> Vec<f64> {
        let m = self.coeffs.len();
        let nodes = self.cheb_nodes();
        let mut w: Vec<f64> = (0..m)
            .map(|k| {
                2.0 / m as f64
                    * nodes
                        .iter()
                        .zip(&self.coeffs)
                        .map(|(&x, &g)| g * (k as f64 * x.acos()).cos())
                        .sum::<f64>()
            })
            .collect();
        w[0] *= 0.5;
        w
    }

    pub fn eval(&self, x: f64) -> f64 {
        match self.basis {
            Basis::Monomial => self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c),
            Basis::ChebyshevFirstKind => {
                let (sc, sh) = self.cheb_map();
                cheb_eval(&self.coeffs, sc * x + sh)
            }
            Basis::ChebyshevInterpolated => {
                let (sc, sh) = self.cheb_map();
                cheb_eval(&self.interpolated_to_chebyshev(), sc * x + sh)
            }
            Basis::Bernstein => {
                let [a, b] = self.domain;
                let t = (x - a) / (b - a);
                let mut beta = self.coeffs.clone();
                for r in 1..beta.len() {
                    for k in 0..beta.len() - r {
                        beta[k] = (1.0 - t) * beta[k] + t * beta[k + 1];
                    }
                }
                beta[0]
            }
        }
    }

    /// Monomial coefficients in the unscaled variable `x`.
    pub fn to_monomial(&self) -> Vec<f64> {
        match self.basis {
            Basis::Monomial => self.coeffs.clone(),
            Basis::ChebyshevFirstKind => self.cheb_series_to_monomial(&self.coeffs),
            Basis::ChebyshevInterpolated => {
                self.cheb_series_to_monomial(&self.interpolated_to_chebyshev())
            }
            Basis::Bernstein => {
                let [a, b] = self.domain;
                let t = [-a / (b - a), 1.0 / (b - a)];
                let one_minus_t = [1.0 - t[0], -t[1]];
                let k = self.degree();
                let mut out = vec![0.0; k + 1];
                for (i, &c) in self.coeffs.iter().enumerate() {
                    let mut term = vec![c * binomial(k, i)];
                    for _ in 0..i {
                        term = poly_mul(&term, &t);
                    }
                    for _ in i..k {
                        term = poly_mul(&term, &one_minus_t);
                    }
                    poly_add_into(&mut out, &term);
                }
                out
            }
        }
    }

    fn cheb_series_to_monomial(&self, w: &[f64]) -> Vec<f64> {
        let (sc, sh) = self.cheb_map();
        let mut t: Vec<Vec<f64>> = vec![vec![1.0], vec![sh, sc]];
        for k in 2..w.len() {
            let mut next = poly_mul(&t[k - 1], &[2.0 * sh, 2.0 * sc]);
            poly_add_into(&mut next, &t[k - 2].iter().map(|c| -c).collect::<Vec<_>>());
            t.push(next);
        }
        let mut out = vec![0.0; w.len()];
        for (tk, &wk) in t.iter().zip(w) {
            poly_add_into(&mut out, &tk.iter().map(|c| c * wk).collect::<Vec<_>>());
        }
        out.truncate(w.len());
        out
    }

    /// Same polynomial in the monomial basis.
    pub fn as_monomial(&self) -> UnivariatePoly {
        UnivariatePoly::monomial(self.to_monomial())
    }

    /// `p(L) X` using only products with `L`.
    pub fn apply<L: LinearOp + ?Sized>(&self, l: &L, x: &DMatrix<f64>) -> DMatrix<f64> {
        match self.basis {
            Basis::Monomial => {
                let mut y = x * *self.coeffs.last().expect("non-empty");
                for &c in self.coeffs.iter().rev().skip(1) {
                    y = l.apply_mat(&y) + x * c;
                }
                y
            }
            Basis::ChebyshevFirstKind => self.cheb_apply(&self.coeffs, l, x),
            Basis::ChebyshevInterpolated => {
                self.cheb_apply(&self.interpolated_to_chebyshev(), l, x)
            }
            Basis::Bernstein => {
                let [a, b] = self.domain;
                let t = |z: &DMatrix<f64>| (l.apply_mat(z) - z * a) / (b - a);
                let mut beta: Vec<DMatrix<f64>> = self.coeffs.iter().map(|&c| x * c).collect();
                for r in 1..beta.len() {
                    for k in 0..beta.len() - r {
                        let tk = t(&beta[k]);
                        let tk1 = t(&beta[k + 1]);
                        beta[k] = &beta[k] - tk + tk1;
                    }
                }
                beta.swap_remove(0)
            }
        }
    }

    fn cheb_apply<L: LinearOp + ?Sized>(
        &self,
        w: &[f64],
        l: &L,
        x: &DMatrix<f64>,
    ) -> DMatrix<f64> {
        let (sc, sh) = self.cheb_map();
        let y = |z: &DMatrix<f64>| l.apply_mat(z) * sc + z * sh;
        let mut out = x * w[0];
        if w.len() == 1 {
            return out;
        }
        let mut prev = x.clone();
        let mut cur = y(x);
        out += &cur * w[1];
        for &wk in &w[2..] {
            let next = y(&cur) * 2.0 - &prev;
            out += &next * wk;
            prev = std::mem::replace(&mut cur, next);
        }
        out
    }
}

fn cheb_eval(w: &[f64], y: f64) -> f64 {
    // Clenshaw
    let mut b1 = 0.0;
    let mut b2 = 0.0;
    for &c in w.iter().skip(1).rev() {
        let b0 = 2.0 * y * b1 - b2 + c;
        b2 = b1;
        b1 = b0;
    }
    w[0] + y * b1 - b2
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

fn poly_mul(a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn poly_add_into(acc: &mut Vec<f64>, p: &[f64]) {
    if acc.len() < p.len() {
        acc.resize(p.len(), 0.0);
    }
    for (a, b) in acc.iter_mut().zip(p) {
        *a += b;
    }
}

/// Where a univariate filter gets its spectral information from.
#[derive(Debug, Clone, Copy)]
pub enum NodeOperator<'a> {
    Spectrum(&'a Spectrum),
    Matrix(&'a DMatrix<f64>),
}

#[derive(Debug, Clone, PartialEq)]
pub enum UnivariateResponse {
    Poly(UnivariatePoly),
    /// `g(lambda_i)` for each eigenvalue in ascending order.
    Tabulated(Vec<f64>),
}

/// `g(L) x`: `U (g(lambda) .* U^T x)` given a spectrum, or a basis
/// recurrence given only the matrix.
pub fn apply_univariate(
    op: NodeOperator<'_>,
    g: &UnivariateResponse,
    x: &DVector<f64>,
) -> Result<DVector<f64>> {
    match (op, g) {
        (NodeOperator::Spectrum(s), g) => {
            if x.len() != s.n() {
                return Err(Error::Dimension(format!(
                    "signal of length {} on {} nodes",
                    x.len(),
                    s.n()
                )));
            }
            let gl: Vec<f64> = match g {
                UnivariateResponse::Poly(p) => s.eigenvalues().iter().map(|&l| p.eval(l)).collect(),
                UnivariateResponse::Tabulated(v) if v.len() == s.n() => v.clone(),
                UnivariateResponse::Tabulated(v) => {
                    return Err(Error::Dimension(format!(
                        "{} tabulated values for {} eigenvalues",
                        v.len(),
                        s.n()
                    )))
                }
            };
            let u = s.eigenvectors();
            let mut xhat = u.tr_mul(x);
            for (c, w) in xhat.iter_mut().zip(&gl) {
                *c *= w;
            }
            Ok(u * xhat)
        }
        (NodeOperator::Matrix(l), UnivariateResponse::Poly(p)) => {
            crate::error::check_square("L", l.nrows(), l.ncols(), x.len())?;
            let xm = DMatrix::from_column_slice(x.len(), 1, x.as_slice());
            Ok(p.apply(l, &xm).column(0).into_owned())
        }
        (NodeOperator::Matrix(_), UnivariateResponse::Tabulated(_)) => Err(Error::NeedsSpectrum),
    }
}
