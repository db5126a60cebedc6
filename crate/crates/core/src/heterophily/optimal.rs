use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::Serialize;

use super::{loss::EquivariantConv, ClassModel};
use crate::error::{Error, Result};
use crate::graph::Partition;
use crate::rng;

#[derive(Debug, Clone)]
pub struct OptimalConv {
    pub coeffs: EquivariantConv,
    pub matrix: DMatrix<f64>,
    /// `A_a`, the part of `||m_a||^2` not explained by the other classes.
    pub residual_norms: Vec<f64>,
}

/// The unique minimizer of the classwise loss, in closed form.
pub fn optimal_convolution(model: &ClassModel) -> Result<OptimalConv> {
    let k = model.k();
    let sizes = model.sizes();
    let taus = model.taus();
    let gram = model.mean_gram();
    let mut coeffs = EquivariantConv::zeros(k);
    let mut residual_norms = vec![0.0; k];
    for a in 0..k {
        let others: Vec<usize> = (0..k).filter(|&b| b != a).collect();
        let m = others.len();
        let nb = |i: usize| sizes[others[i]] as f64;
        // (G + D) with G = M_{-a}^T M_{-a}, columns of M_{-a} being n_b m_b
        let sys = DMatrix::from_fn(m, m, |i, j| {
            let g = nb(i) * nb(j) * gram[(others[i], others[j])];
            if i == j {
                g + taus[others[i]] * nb(i)
            } else {
                g
            }
        });
        let h = DVector::from_fn(m, |i, _| nb(i) * gram[(others[i], a)]);
        let sol = if m == 0 {
            DVector::zeros(0)
        } else {
            sys.cholesky()
                .ok_or_else(|| Error::Numeric(format!("class {a}: singular normal equations")))?
                .solve(&h)
        };
        let big_a = gram[(a, a)] - h.dot(&sol);
        let na = sizes[a] as f64;
        let denom = na * big_a + taus[a];
        coeffs.beta[a] = big_a / denom;
        for (i, &b) in others.iter().enumerate() {
            coeffs.gamma[a][b] = taus[a] / denom * sol[i];
        }
        residual_norms[a] = big_a;
    }
    let matrix = coeffs.assemble(model.partition())?;
    Ok(OptimalConv {
        coeffs,
        matrix,
        residual_norms,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepRow {
    pub d: usize,
    pub seed: u64,
    pub class: usize,
    /// `|beta_a - 1/(n_a + tau_a)|`
    pub beta_err: f64,
    /// `max_b |gamma_ab|`
    pub gamma_max: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepMedian {
    pub d: usize,
    pub beta_err: f64,
    pub gamma_max: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepTable {
    pub rows: Vec<SweepRow>,
}

pub(crate) fn median(mut xs: Vec<f64>) -> f64 {
    if xs.is_empty() {
        return f64::NAN;
    }
    xs.sort_by(f64::total_cmp);
    let m = xs.len() / 2;
    if xs.len() % 2 == 1 {
        xs[m]
    } else {
        0.5 * (xs[m - 1] + xs[m])
    }
}

impl SweepTable {
    /// Medians over seeds and classes, one entry per dimension in sweep order.
    pub fn medians(&self) -> Vec<SweepMedian> {
        let mut dims: Vec<usize> = self.rows.iter().map(|r| r.d).collect();
        dims.dedup();
        dims.into_iter()
            .map(|d| {
                let cell = self.rows.iter().filter(|r| r.d == d);
                SweepMedian {
                    d,
                    beta_err: median(cell.clone().map(|r| r.beta_err).collect()),
                    gamma_max: median(cell.map(|r| r.gamma_max).collect()),
                }
            })
            .collect()
    }

    pub fn to_csv(&self) -> String {
        use crate::linalg::format_f64;
        let mut out = String::from("d,seed,class,beta_err,gamma_max\n");
        for r in &self.rows {
            out += &format!(
                "{},{},{},{},{}\n",
                r.d,
                r.seed,
                r.class,
                format_f64(r.beta_err),
                format_f64(r.gamma_max)
            );
        }
        out
    }
}

/// Convergence of the optimal operator to its block-diagonal limit as the
/// feature dimension grows. Cell `(d, s)` samples means with a seed derived
/// from `(base_seed, d, s)`.
pub fn asymptotic_sweep(
    sizes: &[usize],
    taus: &[f64],
    dims: &[usize],
    seeds: usize,
    base_seed: u64,
) -> Result<SweepTable> {
    if dims.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Domain("dimensions must be strictly ascending".into()));
    }
    let partition = Partition::contiguous(sizes)?;
    let cells: Vec<(usize, u64)> = dims
        .iter()
        .flat_map(|&d| (0..seeds as u64).map(move |s| (d, s)))
        .collect();
    let per_cell: Vec<Vec<SweepRow>> = cells
        .par_iter()
        .map(|&(d, s)| {
            let seed = rng::derive(rng::derive(base_seed, d as u64), s);
            let model = ClassModel::sample(partition.clone(), d, taus.to_vec(), seed)?;
            let opt = optimal_convolution(&model)?;
            Ok((0..model.k())
                .map(|a| SweepRow {
                    d,
                    seed: s,
                    class: a,
                    beta_err: (opt.coeffs.beta[a] - 1.0 / (sizes[a] as f64 + taus[a])).abs(),
                    gamma_max: opt.coeffs.gamma[a].iter().fold(0.0, |m, g| m.max(g.abs())),
                })
                .collect())
        })
        .collect::<Result<_>>()?;
    Ok(SweepTable {
        rows: per_cell.into_iter().flatten().collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::heterophily::{loss, loss_equivariant, sample_model};

    #[test]
    fn single_class_limits() {
        let m = sample_model(&[2], 5, &[1.0], 0).unwrap();
        let opt = optimal_convolution(&m).unwrap();
        assert!((opt.coeffs.beta[0] - 1.0 / 3.0).abs() < 1e-15);
        assert!((opt.matrix.clone() - DMatrix::from_element(2, 2, 1.0 / 3.0)).abs().max() < 1e-15);
        for (n, tau) in [(1, 0.5), (4, 2.0), (9, 0.1)] {
            let m = sample_model(&[n], 7, &[tau], 1).unwrap();
            let b = optimal_convolution(&m).unwrap().coeffs.beta[0];
            assert!((b - 1.0 / (n as f64 + tau)).abs() < 1e-12);
        }
    }

    #[test]
    fn stationary_point() {
        let m = sample_model(&[3, 4], 50, &[1.0, 0.5], 2).unwrap();
        let opt = optimal_convolution(&m).unwrap();
        let base = opt.coeffs.clone();
        let f = |c: &EquivariantConv| loss_equivariant(c, &m).unwrap();
        let h = 1e-6;
        let mut grad2 = 0.0;
        let mut probe = |get: &dyn Fn(&mut EquivariantConv) -> &mut f64| {
            let (mut p, mut q) = (base.clone(), base.clone());
            *get(&mut p) += h;
            *get(&mut q) -= h;
            grad2 += ((f(&p) - f(&q)) / (2.0 * h)).powi(2);
        };
        for a in 0..2 {
            probe(&move |c: &mut EquivariantConv| &mut c.alpha[a]);
            probe(&move |c: &mut EquivariantConv| &mut c.beta[a]);
            probe(&move |c: &mut EquivariantConv| &mut c.gamma[a][1 - a]);
        }
        assert!(grad2.sqrt() < 1e-8, "{}", grad2.sqrt());
    }

    #[test]
    fn beats_perturbations() {
        use rand::Rng as _;
        let m = sample_model(&[2, 3, 1], 8, &[1.0, 0.3, 2.0], 4).unwrap();
        let opt = optimal_convolution(&m).unwrap();
        let best = loss(&opt.matrix, &m).unwrap();
        let mut r = crate::rng::seeded(9);
        for _ in 0..200 {
            let d = DMatrix::from_fn(6, 6, |_, _| r.random_range(-1.0..1.0));
            let d = d.scale(r.random_range(0.0..0.1) / d.norm());
            assert!(loss(&(&opt.matrix + d), &m).unwrap() >= best);
        }
    }

    #[test]
    fn sweep_shapes() {
        let t = asymptotic_sweep(&[4], &[1.0], &[8, 16], 3, 0).unwrap();
        assert_eq!(t.rows.len(), 6);
        assert!(t.rows.iter().all(|r| r.beta_err < 1e-12 && r.gamma_max == 0.0));
        assert!(t.to_csv().starts_with("d,seed,class,beta_err,gamma_max\n8,0,0,"));
        assert!(asymptotic_sweep(&[4], &[1.0], &[16, 8], 3, 0).is_err());
        let t = asymptotic_sweep(&[5, 5, 5], &[1.0; 3], &[16, 256, 4096], 15, 1).unwrap();
        let med = t.medians();
        assert!(med[0].gamma_max > med[2].gamma_max && med[0].beta_err > med[2].beta_err);
    }
}
