//! Spectral filters on graphs and node pairs, their expressive power, and
//! optimal equivariant convolutions for class-structured features.

pub mod error;
pub mod expressivity;
pub mod filters;
pub mod graph;
pub mod heterophily;
pub mod linalg;
pub mod refinement;
pub mod rng;

pub use error::{Error, Result};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/pair-filters.md")]
    mod pair_filters {}
    #[doc = include_str!("../../../book/src/low-rank.md")]
    mod low_rank {}
    #[doc = include_str!("../../../book/src/expressivity.md")]
    mod expressivity {}
    #[doc = include_str!("../../../book/src/heterophily.md")]
    mod heterophily {}
    #[doc = include_str!("../../../book/src/obstruction.md")]
    mod obstruction {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
