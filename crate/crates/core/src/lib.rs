//! Numerical laboratory for wave breaking in the Dullin-Gottwald-Holm (DGH)
//! equation and the two-component DGH system.
//!
//! The equations are integrated in their nonlocal transport form on a periodic
//! pseudospectral grid. Characteristic-based diagnostics (the flow map, slope
//! along a particle path, the monotone `A`/`B` functionals) are evaluated as
//! post-processing over recorded trajectories, and the sharp convolution
//! inequalities behind the breaking criteria can be checked pointwise.

// `!(x > 0.0)` is used on purpose so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod characteristics;
pub mod cli;
pub mod error;
pub mod evolution;
pub mod grid;
pub mod helmholtz;
pub mod params;
pub mod presets;
pub mod state;

pub use error::{Error, Result};
pub use grid::{Field, Grid, Interpolant};
pub use helmholtz::NonlocalOperator;
pub use params::Parameters;
pub use presets::Preset;
pub use state::State;
