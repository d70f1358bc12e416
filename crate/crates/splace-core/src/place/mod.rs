//! Electrostatics-based global placement: smooth wirelength surrogates,
//! scheduled bin density, the spectral potential solve, and the
//! accelerated-gradient placement loop tying them together.

pub mod density;
pub mod optimizer;
pub mod poisson;
pub mod wirelength;

pub use density::smoothed_density;
pub use optimizer::{run_global_placement, PlacementResult, TracePoint};
pub use poisson::{density_gradient, field_energy, PoissonSolution, PoissonSolver};
pub use wirelength::wirelength_and_grad;

use serde::{Deserialize, Serialize};

use crate::bookshelf::WirelengthModel;
use crate::error::{Error, Result};

/// Knobs of the global placement loop. `gamma` is the wirelength
/// smoothing base (4.0 is neutral in the bin-size-scaled annealing
/// rule); `density_weight` seeds the penalty weight relative to the
/// wirelength gradient scale; `ref_hpwl`, `lower_pcof`, `upper_pcof`
/// govern the multiplicative weight adaptation.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PlacerConfig {
    pub wirelength: WirelengthModel,
    pub gamma: f64,
    pub density_weight: f64,
    pub target_density: f64,
    pub epsilon: f64,
    pub learning_rate: f64,
    pub max_iterations: usize,
    pub stop_overflow: f64,
    pub num_bin_x: usize,
    pub num_bin_y: usize,
    pub ref_hpwl: f64,
    pub lower_pcof: f64,
    pub upper_pcof: f64,
    /// extra frozen-weight iterations after feasibility; the lowest-HPWL
    /// snapshot still meeting the overflow target is returned
    pub polish_iterations: usize,
}

impl Default for PlacerConfig {
    fn default() -> Self {
        PlacerConfig {
            wirelength: WirelengthModel::Wa,
            gamma: 4.0,
            density_weight: 1e-2,
            target_density: 0.9,
            epsilon: 1.0,
            learning_rate: 0.01,
            max_iterations: 1000,
            stop_overflow: 0.1,
            num_bin_x: 32,
            num_bin_y: 32,
            ref_hpwl: 3.5e5,
            lower_pcof: 0.95,
            upper_pcof: 1.05,
            polish_iterations: 60,
        }
    }
}

impl PlacerConfig {
    pub fn validate(&self) -> Result<()> {
        if self.gamma <= 0.0 {
            return Err(Error::Config("wirelength smoothing base must be positive".into()));
        }
        if self.density_weight < 0.0 {
            return Err(Error::Config("density weight must be non-negative".into()));
        }
        if !(self.stop_overflow > 0.0 && self.stop_overflow < 1.0) {
            return Err(Error::Config("stop overflow threshold must lie in (0,1)".into()));
        }
        if self.target_density <= 0.0 {
            return Err(Error::Config("target density must be positive".into()));
        }
        if self.epsilon <= 0.0 || self.learning_rate <= 0.0 {
            return Err(Error::Config("epsilon and learning rate must be positive".into()));
        }
        if self.num_bin_x < 8 || self.num_bin_y < 8 {
            return Err(Error::Config("placement grid must be at least 8x8".into()));
        }
        if !(0.0 < self.lower_pcof && self.lower_pcof <= 1.0 && self.upper_pcof >= 1.0) {
            return Err(Error::Config(
                "weight adaptation bounds must straddle 1 (lower <= 1 <= upper)".into(),
            ));
        }
        Ok(())
    }
}
