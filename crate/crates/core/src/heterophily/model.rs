use nalgebra::DMatrix;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::graph::Partition;
use crate::rng;

/// Classwise feature model: node `v` in class `a` has features
/// `m_a + z_v` with `z_v ~ N(0, (tau_a / d) I_d)`, so `tr Cov = tau_a`.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassModel {
    partition: Partition,
    /// Row `a` is the unit mean `m_a`.
    means: DMatrix<f64>,
    taus: Vec<f64>,
    seed: u64,
}

impl ClassModel {
    /// Model with explicit means (rows are normalized) on an arbitrary partition.
    pub fn new(partition: Partition, means: DMatrix<f64>, taus: Vec<f64>) -> Result<Self> {
        let k = partition.k();
        if means.nrows() != k || taus.len() != k {
            return Err(Error::Dimension(format!(
                "{k} classes but {} means and {} variances",
                means.nrows(),
                taus.len()
            )));
        }
        if means.ncols() == 0 {
            return Err(Error::Domain("feature dimension must be at least 1".into()));
        }
        if let Some(t) = taus.iter().find(|t| !(t.is_finite() && **t > 0.0)) {
            return Err(Error::Domain(format!("class variance {t} must be positive")));
        }
        let mut means = means;
        for mut row in means.row_iter_mut() {
            let norm = row.norm();
            if norm == 0.0 || !norm.is_finite() {
                return Err(Error::Domain("class means must be nonzero and finite".into()));
            }
            row /= norm;
        }
        Ok(Self {
            partition,
            means,
            taus,
            seed: 0,
        })
    }

    /// Draws means uniformly on the unit sphere of `R^d`.
    pub fn sample(partition: Partition, d: usize, taus: Vec<f64>, seed: u64) -> Result<Self> {
        if d == 0 {
            return Err(Error::Domain("feature dimension must be at least 1".into()));
        }
        let mut r = rng::seeded(seed);
        let k = partition.k();
        let mut means = DMatrix::zeros(k, d);
        for a in 0..k {
            loop {
                for x in means.row_mut(a).iter_mut() {
                    *x = StandardNormal.sample(&mut r);
                }
                if means.row(a).norm() > 0.0 {
                    break;
                }
            }
        }
        let mut model = Self::new(partition, means, taus)?;
        model.seed = seed;
        Ok(model)
    }

    pub fn partition(&self) -> &Partition {
        &self.partition
    }

    pub fn k(&self) -> usize {
        self.partition.k()
    }

    pub fn n(&self) -> usize {
        self.partition.n()
    }

    pub fn sizes(&self) -> &[usize] {
        self.partition.sizes()
    }

    pub fn dim(&self) -> usize {
        self.means.ncols()
    }

    pub fn means(&self) -> &DMatrix<f64> {
        &self.means
    }

    pub fn taus(&self) -> &[f64] {
        &self.taus
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// `<m_a, m_b>` for all class pairs.
    pub fn mean_gram(&self) -> DMatrix<f64> {
        &self.means * self.means.transpose()
    }
}

/// Contiguous classes of the given sizes with sampled means.
pub fn sample_model(sizes: &[usize], d: usize, taus: &[f64], seed: u64) -> Result<ClassModel> {
    ClassModel::sample(Partition::contiguous(sizes)?, d, taus.to_vec(), seed)
}

/// One feature draw `X` (`n x d`).
pub fn sample_features(model: &ClassModel, seed: u64) -> DMatrix<f64> {
    let mut r = rng::seeded(seed);
    let d = model.dim();
    let mut x = DMatrix::zeros(model.n(), d);
    for v in 0..model.n() {
        let a = model.partition.class_of(v);
        let sd = (model.taus[a] / d as f64).sqrt();
        for c in 0..d {
            let z: f64 = StandardNormal.sample(&mut r);
            x[(v, c)] = model.means[(a, c)] + sd * z;
        }
    }
    x
}
