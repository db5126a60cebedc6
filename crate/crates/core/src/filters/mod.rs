//! Spectral filters on nodes and node pairs.

mod bivariate;
mod layer;
mod univariate;

pub use bivariate::{
    apply_bivariate_poly, apply_full_spectrum_eigen, apply_rank_s, tabulate, tensor_decompose,
    BivariatePoly, FactorPair, TensorDecomposition,
};
pub use layer::{diag_embed, project, rank1_layer, LayerCost, LayerOutput};
pub use univariate::{
    apply_univariate, spectral_domain, Basis, NodeOperator, UnivariatePoly, UnivariateResponse,
};
