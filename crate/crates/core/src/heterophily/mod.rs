//! Classwise feature model, the loss it induces on linear operators, the
//! closed-form optimal operator, and why spectral filters cannot reach it.

mod energy;
mod loss;
mod model;
mod obstruction;
mod optimal;

pub use energy::{
    energy_curve_csv, heterophily_csv, heterophily_sweep, median_energy_by_h,
    near_diagonal_energy, EnergyPoint, HeterophilyRow, HeterophilySweepConfig,
};
pub use loss::{
    class_loss, equivariant_part, loss, loss_equivariant, reynolds_average, EquivariantConv,
};
pub use model::{sample_features, sample_model, ClassModel};
pub use obstruction::{
    deleted_row_block, distance_to_spectral_subspace, spectral_obstruction, support,
    SpectralObstruction,
};
pub use optimal::{
    asymptotic_sweep, optimal_convolution, OptimalConv, SweepMedian, SweepRow, SweepTable,
};
