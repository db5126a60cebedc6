use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{optimal::median, optimal_convolution, ClassModel};
use crate::error::{Error, Result};
use crate::graph::{generate_class_graph, laplacian, LaplacianKind, Partition};
use crate::linalg::{format_f64, Spectrum};
use crate::rng;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EnergyPoint {
    pub delta: f64,
    pub ratio: f64,
}

/// Fraction of the squared eigenbasis coefficients `W_ij = (U^T C U)_ij^2`
/// on eigenvalue pairs with `|lambda_i - lambda_j| <= delta`.
pub fn near_diagonal_energy(c: &DMatrix<f64>, s: &Spectrum, deltas: &[f64]) -> Result<Vec<EnergyPoint>> {
    let n = s.n();
    if c.nrows() != n || c.ncols() != n {
        return Err(Error::Dimension(format!(
            "operator is {}x{} for a spectrum of size {n}",
            c.nrows(),
            c.ncols()
        )));
    }
    let u = s.eigenvectors();
    let w = (u.transpose() * c * u).map(|x| x * x);
    let lam = s.eigenvalues();
    let total: f64 = w.iter().sum();
    if !(total > 0.0) {
        return Err(Error::Domain("operator has zero energy; the ratio is undefined".into()));
    }
    Ok(deltas
        .iter()
        .map(|&delta| {
            // same traversal as `total`, so the full mask gives exactly 1
            let mut inside = 0.0;
            for j in 0..n {
                for i in 0..n {
                    if (lam[i] - lam[j]).abs() <= delta {
                        inside += w[(i, j)];
                    }
                }
            }
            EnergyPoint {
                delta,
                ratio: inside / total,
            }
        })
        .collect())
}

pub fn energy_curve_csv(points: &[EnergyPoint]) -> String {
    let mut out = String::from("delta,ratio\n");
    for p in points {
        out += &format!("{},{}\n", format_f64(p.delta), format_f64(p.ratio));
    }
    out
}

/// Synthetic graphs with a growing share of cross-class edges, the optimal
/// operator of a random feature model on their classes, and its energy curve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct HeterophilySweepConfig {
    pub class_sizes: Vec<usize>,
    pub h_grid: Vec<f64>,
    pub avg_degree: f64,
    pub dim: usize,
    pub tau: f64,
    pub deltas: Vec<f64>,
    pub seeds: usize,
    pub laplacian: LaplacianKind,
    pub seed: u64,
}

impl Default for HeterophilySweepConfig {
    fn default() -> Self {
        Self {
            class_sizes: vec![10; 10],
            h_grid: vec![0.1, 0.3, 0.5, 0.7, 0.9],
            avg_degree: 10.0,
            dim: 64,
            tau: 1.0,
            deltas: vec![0.25],
            seeds: 10,
            laplacian: LaplacianKind::SymmetricNormalized,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HeterophilyRow {
    pub h: f64,
    pub seed: u64,
    pub realized_h: f64,
    pub delta: f64,
    pub ratio: f64,
}

pub fn heterophily_sweep(cfg: &HeterophilySweepConfig) -> Result<Vec<HeterophilyRow>> {
    if cfg.deltas.is_empty() {
        return Err(Error::Domain("the delta grid is empty".into()));
    }
    if cfg.h_grid.is_empty() {
        return Err(Error::Domain("the h grid is empty".into()));
    }
    let partition = Partition::contiguous(&cfg.class_sizes)?;
    let cells: Vec<(usize, u64)> = (0..cfg.h_grid.len())
        .flat_map(|i| (0..cfg.seeds as u64).map(move |s| (i, s)))
        .collect();
    let per_cell: Vec<Vec<HeterophilyRow>> = cells
        .par_iter()
        .map(|&(i, s)| {
            let h = cfg.h_grid[i];
            let cell_seed = rng::derive(rng::derive(cfg.seed, i as u64), s);
            let generated = generate_class_graph(&partition, h, cfg.avg_degree, cell_seed)?;
            let model = ClassModel::sample(
                partition.clone(),
                cfg.dim,
                vec![cfg.tau; partition.k()],
                rng::derive(cell_seed, 1),
            )?;
            let opt = optimal_convolution(&model)?;
            let s_l = Spectrum::of_laplacian(&laplacian(&generated.graph, cfg.laplacian), cfg.laplacian)?;
            let curve = near_diagonal_energy(&opt.matrix, &s_l, &cfg.deltas)?;
            let realized_h = generated.realized_h.unwrap_or(f64::NAN);
            Ok(curve
                .into_iter()
                .map(|p| HeterophilyRow {
                    h,
                    seed: s,
                    realized_h,
                    delta: p.delta,
                    ratio: p.ratio,
                })
                .collect())
        })
        .collect::<Result<_>>()?;
    Ok(per_cell.into_iter().flatten().collect())
}

/// Median ratio at `delta` for each `h`, in grid order.
pub fn median_energy_by_h(rows: &[HeterophilyRow], h_grid: &[f64], delta: f64) -> Vec<f64> {
    h_grid
        .iter()
        .map(|&h| {
            median(
                rows.iter()
                    .filter(|r| r.h == h && r.delta == delta)
                    .map(|r| r.ratio)
                    .collect(),
            )
        })
        .collect()
}

pub fn heterophily_csv(rows: &[HeterophilyRow]) -> String {
    let mut out = String::from("h,seed,realized_h,delta,ratio\n");
    for r in rows {
        out += &format!(
            "{},{},{},{},{}\n",
            format_f64(r.h),
            r.seed,
            format_f64(r.realized_h),
            format_f64(r.delta),
            format_f64(r.ratio)
        );
    }
    out
}
