//! TOML-backed experiment configuration.
//!
//! Every field has a default; unknown keys are rejected to guard against
//! silent typos.

use serde::{Deserialize, Serialize};

use crate::dynamics::SamplingStrategy;
use crate::error::{Error, Result};
use crate::trigpoly::FrequencySet;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Frequency cutoff N_max; the system has N = 2 N_max + 1 columns.
    pub max_freq: u32,
    /// Sparsity grid (odd values: DC plus conjugate pairs).
    pub sparsities: Vec<usize>,
    /// Sample-count grid M.
    pub sample_counts: Vec<usize>,
    /// Noise grid sigma.
    pub noise_sigmas: Vec<f64>,
    /// Trials per grid cell.
    pub trials: usize,
    /// Orbit prefix discarded before sampling.
    pub burn_in: usize,
    /// Retained orbit length used for density estimation (grown to M + 1
    /// when a cell needs more consecutive samples).
    pub orbit_length: usize,
    /// Histogram resolution for the invariant-density estimate.
    pub density_bins: usize,
    /// Observation index strategy: `consecutive`, `uniform`, or `strided:k`.
    pub sampling: String,
    /// Constant A in `lambda = A sigma sqrt(log N / M)`; must exceed
    /// 2 sqrt(2).
    pub lambda_constant: f64,
    /// Constant C2 in the sample-size rule.
    pub c2: f64,
    pub master_seed: u64,
    pub output_dir: String,
    /// DC coefficient of generated maps.
    pub dc_value: f64,
    /// Total modulus budget for the non-DC coefficients of generated maps;
    /// must stay below min(dc_value, 1 - dc_value).
    pub amplitude_budget: f64,
    /// Reject generated maps whose empirical density floor does not exceed
    /// this threshold. Non-positive disables the screen.
    pub xi_h_threshold: f64,
    /// Generator retries before a trial gives up.
    pub generator_retries: usize,
    /// Lasso penalty used for noiseless cells (the rule returns 0 there).
    pub noiseless_lambda: f64,
    /// Solver convergence tolerance.
    pub tolerance: f64,
    /// Solver sweep cap.
    pub max_sweeps: usize,
    /// Grid resolution for circle-map validation.
    pub validation_grid: usize,
    /// Write measured wall time into result files. Off by default so that
    /// repeated runs are byte-identical.
    pub record_wall_time: bool,
    /// Record per-sweep objectives inside the solver.
    pub record_objectives: bool,
    /// Worker threads for grid execution; 0 = all cores.
    pub threads: usize,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            max_freq: 15,
            sparsities: vec![3],
            sample_counts: vec![400],
            noise_sigmas: vec![0.0],
            trials: 1,
            burn_in: 1000,
            orbit_length: 100_000,
            density_bins: 64,
            sampling: "consecutive".into(),
            lambda_constant: 4.0,
            c2: 1.0,
            master_seed: 0,
            output_dir: ".".into(),
            dc_value: 0.5,
            amplitude_budget: 0.3,
            xi_h_threshold: 0.05,
            generator_retries: 1000,
            noiseless_lambda: 1e-8,
            tolerance: 1e-10,
            max_sweeps: 100_000,
            validation_grid: 4096,
            record_wall_time: false,
            record_objectives: false,
            threads: 0,
        }
    }
}

impl ExperimentConfig {
    pub fn from_toml_str(s: &str) -> Result<Self> {
        let cfg: ExperimentConfig =
            toml::from_str(s).map_err(|e| Error::Config(format!("toml: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string_pretty(self).expect("config serializes")
    }

    pub fn frequency_set(&self) -> Result<FrequencySet> {
        FrequencySet::new(self.max_freq)
    }

    pub fn strategy(&self) -> Result<SamplingStrategy> {
        self.sampling.parse()
    }

    pub fn validate(&self) -> Result<()> {
        let err = |msg: String| Err(Error::Config(msg));
        if self.max_freq == 0 {
            return err("max_freq must be positive".into());
        }
        if self.sparsities.is_empty() || self.sample_counts.is_empty()
            || self.noise_sigmas.is_empty()
        {
            return err("sparsities, sample_counts, and noise_sigmas must be nonempty".into());
        }
        if self.sparsities.iter().any(|&s| s == 0) {
            return err("sparsities must be positive".into());
        }
        if self.sample_counts.iter().any(|&m| m == 0) {
            return err("sample_counts must be positive".into());
        }
        if self.noise_sigmas.iter().any(|&s| s < 0.0 || !s.is_finite()) {
            return err("noise_sigmas must be finite and nonnegative".into());
        }
        if self.trials == 0 {
            return err("trials must be at least 1".into());
        }
        if self.lambda_constant <= 2.0 * std::f64::consts::SQRT_2 {
            return err(format!(
                "lambda_constant {} must exceed 2*sqrt(2)",
                self.lambda_constant
            ));
        }
        if self.c2 <= 0.0 {
            return err("c2 must be positive".into());
        }
        if !(0.0 < self.dc_value && self.dc_value < 1.0) {
            return err(format!("dc_value {} must lie in (0,1)", self.dc_value));
        }
        let headroom = self.dc_value.min(1.0 - self.dc_value);
        if !(0.0..headroom).contains(&self.amplitude_budget) {
            return err(format!(
                "amplitude_budget {} must lie in [0, {headroom})",
                self.amplitude_budget
            ));
        }
        if self.density_bins == 0 {
            return err("density_bins must be positive".into());
        }
        if self.orbit_length < self.density_bins {
            return err("orbit_length must be at least density_bins".into());
        }
        if self.generator_retries == 0 {
            return err("generator_retries must be at least 1".into());
        }
        if !(self.noiseless_lambda >= 0.0) {
            return err("noiseless_lambda must be nonnegative".into());
        }
        if !(self.tolerance > 0.0) {
            return err("tolerance must be positive".into());
        }
        if self.max_sweeps == 0 {
            return err("max_sweeps must be at least 1".into());
        }
        if self.validation_grid == 0 {
            return err("validation_grid must be positive".into());
        }
        self.strategy()?;
        Ok(())
    }
}
