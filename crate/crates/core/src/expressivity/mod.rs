//! Constructive and randomized harnesses for what pair filters can and
//! cannot express.

mod bounds;
mod interpolate;
mod separate;

pub use bounds::{
    approx_equal, check_order2_bound, check_wl1_bound, node_feature_matrix, BoundOptions,
    BoundReport, Violation,
};
pub use interpolate::{lagrange_basis, universal_interpolate, InterpolationOptions};
pub use separate::{construct_separating_poly, SeparationReport, SeparatingPoly, W_RETRIES};

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Initial pair labels stacked as an `n^2 x d` matrix. Row `u * n + v` is
/// `(l(u), l(v), 1_{u=v}, 1_{uv in E})`.
#[derive(Debug, Clone, PartialEq)]
pub struct PairLabelMatrix {
    n: usize,
    values: DMatrix<f64>,
}

impl PairLabelMatrix {
    /// Uses the graph labels as one-dimensional node labels, or the
    /// constant 1 for an unlabeled graph.
    pub fn from_graph(g: &Graph) -> Self {
        let node = match g.labels() {
            Some(l) => DMatrix::from_fn(g.n(), 1, |v, _| l[v] as f64),
            None => DMatrix::from_element(g.n(), 1, 1.0),
        };
        Self::from_node_features(g, &node).expect("one row per node")
    }

    pub fn from_node_features(g: &Graph, node: &DMatrix<f64>) -> Result<Self> {
        let n = g.n();
        if node.nrows() != n {
            return Err(Error::Dimension(format!(
                "{} feature rows for {n} nodes",
                node.nrows()
            )));
        }
        let dn = node.ncols();
        let mut values = DMatrix::zeros(n * n, 2 * dn + 2);
        for u in 0..n {
            for v in 0..n {
                let r = u * n + v;
                for c in 0..dn {
                    values[(r, c)] = node[(u, c)];
                    values[(r, dn + c)] = node[(v, c)];
                }
                let (eq, edge) = crate::refinement::atp(g, u, v);
                values[(r, 2 * dn)] = f64::from(u8::from(eq));
                values[(r, 2 * dn + 1)] = f64::from(u8::from(edge));
            }
        }
        Ok(Self { n, values })
    }

    pub fn values(&self) -> &DMatrix<f64> {
        &self.values
    }

    pub fn dim(&self) -> usize {
        self.values.ncols()
    }

    /// The pair signal `Matrix(𝓛 w)`.
    pub fn project(&self, w: &[f64]) -> DMatrix<f64> {
        assert_eq!(w.len(), self.dim(), "weight length must match label width");
        let n = self.n;
        DMatrix::from_fn(n, n, |u, v| {
            self.values
                .row(u * n + v)
                .iter()
                .zip(w)
                .map(|(a, b)| a * b)
                .sum()
        })
    }
}
