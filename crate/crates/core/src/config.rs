use serde::{Deserialize, Serialize};

/// Numerical thresholds used across the pipeline. All values are relative.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Tolerances {
    /// Joint residual below which a parameter counts as a base point, a
    /// singular point or a space double point.
    pub validation: f64,
    /// Residual a double point of the projection must reach after refinement.
    pub pair_residual: f64,
    /// Parameters closer than this are a collision.
    pub collision: f64,
    /// Imaginary parts below this are real; conjugate pairs are matched within it.
    pub real_axis: f64,
    /// Imaginary part left after rotating a solitary image into the real plane.
    pub phase: f64,
    /// Cusps, triple points and tangencies of the projection.
    pub genericity: f64,
    /// Sign determinants must exceed this times the product of the vector norms.
    pub frame: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            validation: 1e-7,
            pair_residual: 1e-6,
            collision: 1e-6,
            real_axis: 1e-7,
            phase: 1e-7,
            genericity: 1e-4,
            frame: 1e-8,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Config {
    pub tolerances: Tolerances,
    /// Seeds center sampling and the parameter randomization of the solver.
    pub seed: u64,
    pub max_center_attempts: usize,
}

impl Default for Config {
    fn default() -> Self {
        Self { tolerances: Tolerances::default(), seed: 0, max_center_attempts: 64 }
    }
}

impl Config {
    pub fn with_seed(seed: u64) -> Self {
        Self { seed, ..Self::default() }
    }
}
