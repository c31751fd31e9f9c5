//! Numerical experiments on Dirichlet series with a functional equation:
//! smoothed evaluation near the critical line, an oscillatory transform that
//! isolates a resonant coefficient, and additive twists giving Ω-results for
//! partial sums of the coefficients.

pub mod coefficients;
pub mod compensated;
pub mod config;
pub mod error;
pub mod evaluate;
pub mod model;
pub mod oscillatory;
pub mod presets;
pub mod reference;
pub mod special;
pub mod summatory;
pub mod transform;

pub use coefficients::{CoefficientProvider, CoefficientTable};
pub use error::{Error, Result};
pub use model::{
    pick_resonant_index, resonance_alpha, Budget, DerivedInvariants, FunctionalEquationData, GammaFactor,
    GammaFactorSpec, LSeriesInstance, Pole, SmoothingParams,
};
pub use presets::{preset, PRESET_NAMES};
pub use transform::Convention;
