use nalgebra::DMatrix;
use rand::Rng as _;
use rayon::prelude::*;
use serde::Serialize;

use super::PairLabelMatrix;
use crate::filters::{apply_bivariate_poly, BivariatePoly, UnivariatePoly};
use crate::graph::{laplacian, Graph, LaplacianKind};
use crate::refinement::{local2_refine, wl1_refine};
use crate::rng;

/// Values are "equal" within `1e-8` relative with a `1e-12` absolute floor.
pub fn approx_equal(a: f64, b: f64) -> bool {
    (a - b).abs() <= (1e-8 * a.abs().max(b.abs())).max(1e-12)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundOptions {
    pub laplacian: LaplacianKind,
    /// Refinement rounds; `None` uses the round count of the statement
    /// being checked.
    pub rounds: Option<usize>,
}

impl Default for BoundOptions {
    fn default() -> Self {
        Self {
            laplacian: LaplacianKind::SymmetricNormalized,
            rounds: None,
        }
    }
}

/// Two elements with equal colors but different filtered values.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Violation {
    pub trial: usize,
    /// A pair `[u, v]` or a single node `[u]`.
    pub first: Vec<usize>,
    pub second: Vec<usize>,
    pub first_value: f64,
    pub second_value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub bound: String,
    pub graph_id: String,
    #[serde(rename = "K")]
    pub k: usize,
    pub rounds: usize,
    pub laplacian: LaplacianKind,
    pub trials: usize,
    pub violating_trials: usize,
    /// At most one witness per violating trial.
    pub violations: Vec<Violation>,
    /// Largest value spread inside one color class, over all trials.
    pub max_spread: f64,
}

impl BoundReport {
    pub fn holds(&self) -> bool {
        self.violating_trials == 0
    }

    pub fn with_graph_id(mut self, id: impl Into<String>) -> Self {
        self.graph_id = id.into();
        self
    }
}

/// Per-class spread of `values` and the first offending pair of elements.
fn class_check(colors: &[usize], values: &[Vec<f64>]) -> (f64, Option<(usize, usize)>) {
    let mut rep: std::collections::HashMap<usize, usize> = Default::default();
    let mut spread = 0.0_f64;
    let mut witness = None;
    for (i, &c) in colors.iter().enumerate() {
        let r = *rep.entry(c).or_insert(i);
        for (a, b) in values[i].iter().zip(&values[r]) {
            spread = spread.max((a - b).abs());
            if witness.is_none() && !approx_equal(*a, *b) {
                witness = Some((r, i));
            }
        }
    }
    (spread, witness)
}

fn random_total_degree_poly(k: usize, r: &mut rng::Rng) -> BivariatePoly {
    let a = DMatrix::from_fn(k + 1, k + 1, |i, j| {
        if i + j <= k {
            r.random_range(-1.0..1.0)
        } else {
            0.0
        }
    });
    BivariatePoly::new(a)
        .and_then(|q| q.with_cap(k))
        .expect("masked coefficients respect the cap")
}

fn finish(
    bound: &str,
    k: usize,
    rounds: usize,
    opts: &BoundOptions,
    trials: usize,
    per_trial: Vec<(f64, Option<Violation>)>,
) -> BoundReport {
    let max_spread = per_trial.iter().map(|t| t.0).fold(0.0, f64::max);
    let violations: Vec<Violation> = per_trial.into_iter().filter_map(|t| t.1).collect();
    BoundReport {
        bound: bound.into(),
        graph_id: String::new(),
        k,
        rounds,
        laplacian: opts.laplacian,
        trials,
        violating_trials: violations.len(),
        violations,
        max_spread,
    }
}

/// Randomized check of "equal Local 2-GNN pair colors after the given
/// number of rounds imply equal outputs of any pair filter of total degree
/// at most `k`".
///
/// Each trial draws a polynomial with coefficients uniform on `[-1, 1]` and
/// a weight vector `W`, filters `eps = Matrix(𝓛 W)` and compares outputs
/// inside every color class.
pub fn check_order2_bound(
    g: &Graph,
    k: usize,
    trials: usize,
    seed: u64,
    opts: &BoundOptions,
) -> BoundReport {
    let rounds = opts.rounds.unwrap_or(k);
    let l = laplacian(g, opts.laplacian);
    let labels = PairLabelMatrix::from_graph(g);
    let colors = local2_refine(g, g.labels(), rounds);
    let colors = colors.colors_at(rounds);
    let n = g.n();
    let per_trial = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut r = rng::seeded(rng::derive(seed, t as u64));
            let q = random_total_degree_poly(k, &mut r);
            let w: Vec<f64> = (0..labels.dim()).map(|_| r.random_range(-1.0..1.0)).collect();
            let eps = labels.project(&w);
            let out = apply_bivariate_poly(&l, &q, &eps).expect("square pair signal");
            let values: Vec<Vec<f64>> = (0..n * n).map(|p| vec![out[(p / n, p % n)]]).collect();
            let (spread, witness) = class_check(colors, &values);
            let violation = witness.map(|(a, b)| Violation {
                trial: t,
                first: vec![a / n, a % n],
                second: vec![b / n, b % n],
                first_value: values[a][0],
                second_value: values[b][0],
            });
            (spread, violation)
        })
        .collect();
    finish("local2-upper-bound", k, rounds, opts, trials, per_trial)
}

/// One-hot encoding of the graph labels (a single constant column when the
/// graph is unlabeled).
pub fn node_feature_matrix(g: &Graph) -> DMatrix<f64> {
    match g.labels() {
        None => DMatrix::from_element(g.n(), 1, 1.0),
        Some(l) => {
            let mut distinct = l.to_vec();
            distinct.sort_unstable();
            distinct.dedup();
            DMatrix::from_fn(g.n(), distinct.len(), |v, c| {
                if distinct[c] == l[v] {
                    1.0
                } else {
                    0.0
                }
            })
        }
    }
}

/// Randomized check of "equal 1-WL colors imply equal rows of
/// `Z = sum_t alpha_t L^t X W`" for polynomials of degree `k`.
pub fn check_wl1_bound(
    g: &Graph,
    k: usize,
    trials: usize,
    seed: u64,
    opts: &BoundOptions,
) -> BoundReport {
    const OUT_DIM: usize = 3;
    let rounds = opts.rounds.unwrap_or(k + 1);
    let l = laplacian(g, opts.laplacian);
    let x = node_feature_matrix(g);
    let colors = wl1_refine(g, g.labels(), rounds);
    let colors = colors.colors_at(rounds);
    let per_trial = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut r = rng::seeded(rng::derive(seed, t as u64));
            let alpha = UnivariatePoly::monomial((0..=k).map(|_| r.random_range(-1.0..1.0)).collect());
            let w = DMatrix::from_fn(x.ncols(), OUT_DIM, |_, _| r.random_range(-1.0..1.0));
            let z = alpha.apply(&l, &(&x * w));
            let values: Vec<Vec<f64>> = z.row_iter().map(|row| row.iter().copied().collect()).collect();
            let (spread, witness) = class_check(colors, &values);
            let violation = witness.map(|(a, b)| {
                let col = (0..OUT_DIM)
                    .find(|&c| !approx_equal(values[a][c], values[b][c]))
                    .expect("witness differs somewhere");
                Violation {
                    trial: t,
                    first: vec![a],
                    second: vec![b],
                    first_value: values[a][col],
                    second_value: values[b][col],
                }
            });
            (spread, violation)
        })
        .collect();
    finish("wl1-node-bound", k, rounds, opts, trials, per_trial)
}
