use nalgebra::DMatrix;
use rand::Rng as _;
use serde::Serialize;

use super::{approx_equal, universal_interpolate, InterpolationOptions, PairLabelMatrix};
use crate::error::{Error, Result};
use crate::filters::{apply_full_spectrum_eigen, tabulate, BivariatePoly};
use crate::graph::Graph;
use crate::linalg::{default_spectral_tol, pair_gft, Spectrum};
use crate::refinement::local2_refine;
use crate::rng;

/// Attempts at drawing a weight vector whose pair signal has no vanishing
/// spectral coefficient.
pub const W_RETRIES: usize = 64;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SeparationReport {
    pub stable_classes: usize,
    pub largest_class: usize,
    /// Distinct filtered values, up to the equality tolerance.
    pub filtered_classes: usize,
    /// Pairs of elements from different stable classes with equal output.
    pub merges: usize,
    pub max_target_error: f64,
    pub w_attempts: usize,
}

impl SeparationReport {
    /// The filtered partition refines the stable coloring, strictly when
    /// some stable class has more than one element.
    pub fn holds(&self) -> bool {
        self.merges == 0 && (self.largest_class < 2 || self.filtered_classes > self.stable_classes)
    }
}

#[derive(Debug, Clone)]
pub struct SeparatingPoly {
    pub q: BivariatePoly,
    pub w: Vec<f64>,
    pub output: DMatrix<f64>,
    pub report: SeparationReport,
}

/// Builds a pair filter whose output separates every stable Local 2-GNN
/// class and also splits each class internally.
///
/// Class `t` receives target values inside `[t, t + 0.5]`, distinct per
/// member; the filter realizing them comes from [`universal_interpolate`].
pub fn construct_separating_poly(
    g: &Graph,
    s: &Spectrum,
    labels: &PairLabelMatrix,
    seed: u64,
) -> Result<SeparatingPoly> {
    let n = g.n();
    if s.n() != n {
        return Err(Error::Dimension(format!("spectrum of size {} for {n} nodes", s.n())));
    }
    let tol = default_spectral_tol(s.eigenvalues());
    if let Some((i, j)) = s.colliding_pair(tol) {
        return Err(Error::Precondition(format!(
            "repeated eigenvalues: lambda_{i} and lambda_{j} coincide"
        )));
    }
    let opts = InterpolationOptions::default();
    let mut chosen = None;
    for attempt in 0..W_RETRIES {
        let mut r = rng::seeded(rng::derive(seed, attempt as u64));
        let w: Vec<f64> = (0..labels.dim()).map(|_| r.random_range(-1.0..1.0)).collect();
        let eps = labels.project(&w);
        let c = pair_gft(s, &eps)?;
        let cutoff = opts.coeff_tol * c.abs().max();
        if c.iter().all(|x| x.abs() > cutoff) {
            chosen = Some((w, eps, attempt + 1));
            break;
        }
    }
    let (w, eps, w_attempts) = chosen.ok_or_else(|| {
        Error::Precondition(format!(
            "no weight vector out of {W_RETRIES} gives a pair signal with all spectral \
             coefficients nonzero"
        ))
    })?;

    let colors = local2_refine(g, g.labels(), n * n + 1);
    let colors = colors.final_colors();
    let stable_classes = colors.iter().max().map_or(0, |m| m + 1);
    let mut sizes = vec![0usize; stable_classes];
    for &c in colors {
        sizes[c] += 1;
    }
    let mut seen = vec![0usize; stable_classes];
    let target = DMatrix::from_fn(n, n, |u, v| {
        let c = colors[u * n + v];
        let alpha = seen[c];
        seen[c] += 1;
        c as f64 + 0.5 * (alpha as f64 + 0.5) / sizes[c] as f64
    });
    // from_fn visits column-major; the assignment order inside a class is
    // irrelevant as long as values are distinct
    let q = universal_interpolate(s, &eps, &target, &opts)?;
    let output = apply_full_spectrum_eigen(s, &tabulate(&q, s), &eps)?;

    let values: Vec<f64> = (0..n * n).map(|p| output[(p / n, p % n)]).collect();
    let mut merges = 0;
    for a in 0..values.len() {
        for b in a + 1..values.len() {
            if colors[a] != colors[b] && approx_equal(values[a], values[b]) {
                merges += 1;
            }
        }
    }
    let mut sorted = values.clone();
    sorted.sort_by(f64::total_cmp);
    let filtered_classes = if sorted.is_empty() {
        0
    } else {
        1 + sorted.windows(2).filter(|w| !approx_equal(w[0], w[1])).count()
    };
    let report = SeparationReport {
        stable_classes,
        largest_class: sizes.iter().copied().max().unwrap_or(0),
        filtered_classes,
        merges,
        max_target_error: (&output - &target).abs().max(),
        w_attempts,
    };
    Ok(SeparatingPoly {
        q,
        w,
        output,
        report,
    })
}
