//! End-to-end identification runs, phase diagrams over (M, s, sigma), and
//! error-scaling fits.
//!
//! Every artifact output is a pure function of (config, master seed):
//! per-trial seeds derive from the master seed by a counter-based split,
//! grid cells execute independently, and results are merged in grid order
//! before anything is written.

pub mod config;

use std::io::Write;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::dynamics::{estimate_density, sample_observations, simulate};
use crate::error::{Error, Result};
use crate::lasso::{lambda_rule_with_constant, solve_lasso, LassoConfig};
use crate::sensing::MeasurementSystem;
use crate::trigpoly::{random_sparse_map, TrigPoly};

pub use config::ExperimentConfig;

/// SplitMix64 finalizer.
pub fn splitmix64(state: u64) -> u64 {
    let mut z = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Counter-based seed split:
/// `hash64(master, cell, trial) = sm(sm(sm(master) ^ cell) ^ trial)`
/// with `sm` the SplitMix64 finalizer. Cells are reproducible in isolation.
pub fn hash64(master: u64, cell: u64, trial: u64) -> u64 {
    splitmix64(splitmix64(splitmix64(master) ^ cell) ^ trial)
}

// Sub-stream tags inside one trial.
const STREAM_MAP: u64 = 1;
const STREAM_X0: u64 = 2;
const STREAM_OBS: u64 = 3;

/// Metrics of a single seeded identification run.
#[derive(Debug, Clone)]
pub struct TrialResult {
    pub seed: u64,
    /// The generating map (ground truth).
    pub true_map: TrigPoly,
    /// The recovered map (nonzero Lasso coefficients).
    pub recovered_map: TrigPoly,
    pub s: usize,
    pub xi_h: f64,
    pub m: usize,
    pub sigma: f64,
    pub lambda: f64,
    /// `||a_L - a*||_1`.
    pub l1_error: f64,
    /// Wiener-algebra error of the reconstructed map; equals the l1
    /// coefficient error by definition of the norm.
    pub wiener_error: f64,
    pub support_recovered: bool,
    pub kkt_residual: f64,
    pub converged: bool,
    pub generator_attempts: usize,
    pub wall_ms: u64,
}

/// Runs one cell: generate a map (with screening retries), simulate, build
/// the measurement system, pick lambda, solve, and compare to the truth.
///
/// The map is regenerated until it validates and its empirical density floor
/// exceeds `xi_h_threshold` (non-positive threshold disables the screen).
/// Noisy cells use `lambda = A sigma sqrt(log N / M)`; noiseless cells use
/// the configured `noiseless_lambda`. Fully deterministic per seed.
pub fn run_identification(
    cfg: &ExperimentConfig,
    s: usize,
    m: usize,
    sigma: f64,
    seed: u64,
) -> Result<TrialResult> {
    use rand::{Rng, SeedableRng};

    let started = Instant::now();
    let freqs = cfg.frequency_set()?;
    let strategy = cfg.strategy()?;
    let orbit_length = cfg.orbit_length.max(m + 1);

    let mut accepted = None;
    let mut attempts = 0;
    for attempt in 1..=cfg.generator_retries {
        attempts = attempt;
        let map_seed = hash64(seed, STREAM_MAP, attempt as u64);
        let map = random_sparse_map(s, freqs, cfg.dc_value, cfg.amplitude_budget, map_seed)?;
        if !map.validate_circle_map(cfg.validation_grid).is_valid() {
            continue;
        }
        let mut x0_rng =
            rand_chacha::ChaCha8Rng::seed_from_u64(hash64(seed, STREAM_X0, attempt as u64));
        let x0: f64 = x0_rng.random();
        let traj = match simulate(&map, x0, cfg.burn_in, orbit_length) {
            Ok(t) => t,
            Err(Error::Dynamics { .. }) => continue,
            Err(e) => return Err(e),
        };
        let density = estimate_density(&traj, cfg.density_bins)?;
        let xi_h = density.lower_bound();
        if cfg.xi_h_threshold > 0.0 && xi_h <= cfg.xi_h_threshold {
            continue;
        }
        accepted = Some((map, traj, xi_h));
        break;
    }
    let Some((map, traj, xi_h)) = accepted else {
        return Err(Error::Experiment(format!(
            "no generated map passed validation and the density screen (threshold {}) in {} attempts",
            cfg.xi_h_threshold, cfg.generator_retries
        )));
    };

    let obs = sample_observations(&traj, m, strategy, sigma, hash64(seed, STREAM_OBS, 0))?;
    let sys = MeasurementSystem::build(&obs, freqs)?;
    let lambda = if sigma > 0.0 {
        lambda_rule_with_constant(cfg.lambda_constant, sigma, sys.n(), m)
    } else {
        cfg.noiseless_lambda
    };

    let lasso_cfg = LassoConfig {
        lambda,
        max_iterations: cfg.max_sweeps,
        tolerance: cfg.tolerance,
        symmetrize_output: true,
        record_objectives: cfg.record_objectives,
        warm_start: None,
    };
    let solution = solve_lasso(&sys, &lasso_cfg)?;

    let truth = map.coeff_vector();
    let l1_error: f64 = solution
        .coeffs
        .iter()
        .zip(&truth)
        .map(|(got, want)| (got - want).norm())
        .sum();
    let true_support: Vec<usize> = truth
        .iter()
        .enumerate()
        .filter(|(_, c)| c.norm() > 0.0)
        .map(|(i, _)| i)
        .collect();
    let recovered_support: Vec<usize> = if sigma > 0.0 {
        // threshold rule under noise: active iff |a_n| > lambda
        solution
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| c.norm() > lambda)
            .map(|(i, _)| i)
            .collect()
    } else {
        solution.support()
    };
    let support_recovered = recovered_support == true_support;
    let recovered_map = TrigPoly::from_coeffs(
        freqs,
        solution
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, &c)| (freqs.freq_at(i), c)),
    )?;

    Ok(TrialResult {
        seed,
        s: map.sparsity(),
        recovered_map,
        true_map: map,
        xi_h,
        m,
        sigma,
        lambda,
        l1_error,
        wiener_error: l1_error,
        support_recovered,
        kkt_residual: solution.kkt_residual,
        converged: solution.converged,
        generator_attempts: attempts,
        wall_ms: started.elapsed().as_millis() as u64,
    })
}

impl TrialResult {
    /// Success rule: exact support plus small error when noiseless, the
    /// thresholded support match otherwise.
    pub fn success(&self) -> bool {
        if self.sigma == 0.0 {
            self.support_recovered && self.l1_error <= 1e-4
        } else {
            self.support_recovered
        }
    }

    /// Solution JSON
    /// `{"lambda":..,"converged":..,"kkt_residual":..,"coeffs":[[n,re,im],..]}`.
    pub fn solution_json_string(&self) -> String {
        #[derive(Serialize)]
        struct SolutionJson {
            lambda: f64,
            converged: bool,
            kkt_residual: f64,
            coeffs: Vec<(i32, f64, f64)>,
        }
        serde_json::to_string_pretty(&SolutionJson {
            lambda: self.lambda,
            converged: self.converged,
            kkt_residual: self.kkt_residual,
            coeffs: self
                .recovered_map
                .iter()
                .map(|(n, c)| (n, c.re, c.im))
                .collect(),
        })
        .expect("solution serializes")
    }

    /// Metrics JSON for `identify` runs; wall time is reported as 0 unless
    /// measured timings were requested.
    pub fn metrics_json_string(&self, record_wall_time: bool) -> String {
        #[derive(Serialize)]
        struct MetricsJson<'a> {
            seed: u64,
            s: usize,
            m: usize,
            sigma: f64,
            lambda: f64,
            xi_h: f64,
            l1_error: f64,
            wiener_error: f64,
            support_recovered: bool,
            kkt_residual: f64,
            converged: bool,
            generator_attempts: usize,
            wall_ms: u64,
            true_map: &'a TrigPoly,
            recovered_map: &'a TrigPoly,
        }
        serde_json::to_string_pretty(&MetricsJson {
            seed: self.seed,
            s: self.s,
            m: self.m,
            sigma: self.sigma,
            lambda: self.lambda,
            xi_h: self.xi_h,
            l1_error: self.l1_error,
            wiener_error: self.wiener_error,
            support_recovered: self.support_recovered,
            kkt_residual: self.kkt_residual,
            converged: self.converged,
            generator_attempts: self.generator_attempts,
            wall_ms: if record_wall_time { self.wall_ms } else { 0 },
            true_map: &self.true_map,
            recovered_map: &self.recovered_map,
        })
        .expect("metrics serialize")
    }
}

/// One grid-cell worth of aggregated trials.
#[derive(Debug, Clone, Serialize)]
pub struct CellSummary {
    pub s: usize,
    pub m: usize,
    pub sigma: f64,
    pub trials: usize,
    pub completed: usize,
    pub success_rate: f64,
    pub median_l1_error: f64,
}

/// Failed trial record (kept, not fatal).
#[derive(Debug, Clone, Serialize)]
pub struct TrialFailure {
    pub cell: usize,
    pub trial: usize,
    pub seed: u64,
    pub message: String,
}

/// Per-trial record in grid order.
#[derive(Debug, Clone)]
pub struct TrialRecord {
    pub cell: usize,
    pub trial: usize,
    pub result: TrialResult,
}

/// Full phase-diagram output.
#[derive(Debug, Clone)]
pub struct PhaseDiagram {
    pub records: Vec<TrialRecord>,
    pub failures: Vec<TrialFailure>,
    pub summaries: Vec<CellSummary>,
    record_wall_time: bool,
}

fn median(values: &mut Vec<f64>) -> f64 {
    if values.is_empty() {
        return f64::NAN;
    }
    values.sort_by(|a, b| a.total_cmp(b));
    let n = values.len();
    if n % 2 == 1 {
        values[n / 2]
    } else {
        0.5 * (values[n / 2 - 1] + values[n / 2])
    }
}

/// Runs `trials` seeded trials for every `(s, M, sigma)` cell. Cells and
/// trials execute in parallel; per-cell failures are recorded rather than
/// aborting the sweep. Output order is by cell then trial, independent of
/// scheduling.
pub fn run_phase_diagram(cfg: &ExperimentConfig) -> Result<PhaseDiagram> {
    cfg.validate()?;
    let mut jobs = Vec::new();
    let mut cell = 0usize;
    for &s in &cfg.sparsities {
        for &m in &cfg.sample_counts {
            for &sigma in &cfg.noise_sigmas {
                for trial in 0..cfg.trials {
                    jobs.push((cell, trial, s, m, sigma));
                }
                cell += 1;
            }
        }
    }

    let outcomes: Vec<(usize, usize, u64, std::result::Result<TrialResult, String>)> = jobs
        .par_iter()
        .map(|&(cell, trial, s, m, sigma)| {
            let seed = hash64(cfg.master_seed, cell as u64, trial as u64);
            let outcome = run_identification(cfg, s, m, sigma, seed).map_err(|e| e.to_string());
            (cell, trial, seed, outcome)
        })
        .collect();

    let mut ordered = outcomes;
    ordered.sort_by_key(|&(cell, trial, _, _)| (cell, trial));

    let mut records = Vec::new();
    let mut failures = Vec::new();
    for (cell, trial, seed, outcome) in ordered {
        match outcome {
            Ok(result) => records.push(TrialRecord {
                cell,
                trial,
                result,
            }),
            Err(message) => {
                log::warn!("cell {cell} trial {trial} failed: {message}");
                failures.push(TrialFailure {
                    cell,
                    trial,
                    seed,
                    message,
                });
            }
        }
    }

    let mut summaries = Vec::new();
    let mut cell = 0usize;
    for &s in &cfg.sparsities {
        for &m in &cfg.sample_counts {
            for &sigma in &cfg.noise_sigmas {
                let cell_records: Vec<&TrialRecord> =
                    records.iter().filter(|r| r.cell == cell).collect();
                let completed = cell_records.len();
                let successes = cell_records.iter().filter(|r| r.result.success()).count();
                let mut errors: Vec<f64> =
                    cell_records.iter().map(|r| r.result.l1_error).collect();
                summaries.push(CellSummary {
                    s,
                    m,
                    sigma,
                    trials: cfg.trials,
                    completed,
                    success_rate: if completed > 0 {
                        successes as f64 / completed as f64
                    } else {
                        0.0
                    },
                    median_l1_error: median(&mut errors),
                });
                cell += 1;
            }
        }
    }

    Ok(PhaseDiagram {
        records,
        failures,
        summaries,
        record_wall_time: cfg.record_wall_time,
    })
}

pub const TRIAL_CSV_HEADER: &str =
    "s,M,sigma,trial,seed,l1_error,wiener_error,support_recovered,kkt_residual,xi_h,lambda,wall_ms";

impl PhaseDiagram {
    /// Per-trial CSV in grid order. Wall time is written as 0 unless the
    /// config asked for measured timings, keeping reruns byte-identical.
    pub fn write_trials_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "{TRIAL_CSV_HEADER}")?;
        for record in &self.records {
            let r = &record.result;
            let wall = if self.record_wall_time { r.wall_ms } else { 0 };
            writeln!(
                w,
                "{},{},{},{},{},{},{},{},{},{},{},{}",
                r.s,
                r.m,
                r.sigma,
                record.trial,
                r.seed,
                r.l1_error,
                r.wiener_error,
                r.support_recovered,
                r.kkt_residual,
                r.xi_h,
                r.lambda,
                wall
            )?;
        }
        Ok(())
    }

    /// Aggregated per-cell CSV.
    pub fn write_summary_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "s,M,sigma,trials,completed,success_rate,median_l1_error")?;
        for c in &self.summaries {
            writeln!(
                w,
                "{},{},{},{},{},{},{}",
                c.s, c.m, c.sigma, c.trials, c.completed, c.success_rate, c.median_l1_error
            )?;
        }
        Ok(())
    }

    pub fn write_failures_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "cell,trial,seed,message")?;
        for f in &self.failures {
            writeln!(
                w,
                "{},{},{},{:?}",
                f.cell, f.trial, f.seed, f.message
            )?;
        }
        Ok(())
    }

    /// JSON alternative to the per-trial CSV (same fields and order).
    pub fn trials_json_string(&self) -> String {
        #[derive(Serialize)]
        struct Row {
            s: usize,
            m: usize,
            sigma: f64,
            trial: usize,
            seed: u64,
            l1_error: f64,
            wiener_error: f64,
            support_recovered: bool,
            kkt_residual: f64,
            xi_h: f64,
            lambda: f64,
            wall_ms: u64,
        }
        let rows: Vec<Row> = self
            .records
            .iter()
            .map(|record| {
                let r = &record.result;
                Row {
                    s: r.s,
                    m: r.m,
                    sigma: r.sigma,
                    trial: record.trial,
                    seed: r.seed,
                    l1_error: r.l1_error,
                    wiener_error: r.wiener_error,
                    support_recovered: r.support_recovered,
                    kkt_residual: r.kkt_residual,
                    xi_h: r.xi_h,
                    lambda: r.lambda,
                    wall_ms: if self.record_wall_time { r.wall_ms } else { 0 },
                }
            })
            .collect();
        serde_json::to_string_pretty(&rows).expect("rows serialize")
    }

    pub fn results(&self) -> Vec<&TrialResult> {
        self.records.iter().map(|r| &r.result).collect()
    }
}

/// Which grid axis an error-scaling fit runs over.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScalingAxis {
    SampleCount,
    Sigma,
    Sparsity,
}

/// Log-log OLS fit of median error against a grid axis.
#[derive(Debug, Clone, Copy)]
pub struct ScalingFit {
    pub slope: f64,
    /// 95% confidence half-width of the slope.
    pub half_width: f64,
    pub points_used: usize,
}

/// Groups trials by the axis value, takes the median l1 error per group,
/// and fits `log(median) ~ log(axis)` by ordinary least squares.
///
/// Groups with non-positive medians (exact recoveries) are excluded; at
/// least 4 usable grid points are required.
pub fn fit_error_scaling(results: &[&TrialResult], axis: ScalingAxis) -> Result<ScalingFit> {
    use std::collections::BTreeMap;

    let key = |r: &TrialResult| -> f64 {
        match axis {
            ScalingAxis::SampleCount => r.m as f64,
            ScalingAxis::Sigma => r.sigma,
            ScalingAxis::Sparsity => r.s as f64,
        }
    };
    let mut groups: BTreeMap<u64, (f64, Vec<f64>)> = BTreeMap::new();
    for r in results {
        let k = key(r);
        groups
            .entry(k.to_bits())
            .or_insert_with(|| (k, Vec::new()))
            .1
            .push(r.l1_error);
    }

    let mut points = Vec::new();
    for (_bits, (value, mut errors)) in groups {
        if value <= 0.0 {
            return Err(Error::Parameter(format!(
                "axis value {value} is not positive; cannot fit in log space"
            )));
        }
        let med = median(&mut errors);
        if med > 0.0 {
            points.push((value.ln(), med.ln()));
        }
    }
    if points.len() < 4 {
        return Err(Error::Parameter(format!(
            "scaling fit needs at least 4 grid points with positive errors, found {}",
            points.len()
        )));
    }

    let n = points.len() as f64;
    let mean_x = points.iter().map(|p| p.0).sum::<f64>() / n;
    let mean_y = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mean_x).powi(2)).sum();
    let sxy: f64 = points
        .iter()
        .map(|p| (p.0 - mean_x) * (p.1 - mean_y))
        .sum();
    if sxx <= 0.0 {
        return Err(Error::Parameter(
            "axis values are all identical; no scaling fit possible".into(),
        ));
    }
    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_x;
    let rss: f64 = points
        .iter()
        .map(|p| (p.1 - intercept - slope * p.0).powi(2))
        .sum();
    let dof = points.len() as f64 - 2.0;
    let se = (rss / dof / sxx).sqrt();
    let half_width = if se > 0.0 {
        use statrs::distribution::ContinuousCDF;
        let t = statrs::distribution::StudentsT::new(0.0, 1.0, dof)
            .map_err(|e| Error::Parameter(format!("t distribution: {e}")))?;
        t.inverse_cdf(0.975) * se
    } else {
        0.0
    };
    Ok(ScalingFit {
        slope,
        half_width,
        points_used: points.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn small_cfg() -> ExperimentConfig {
        ExperimentConfig {
            max_freq: 5,
            sparsities: vec![3],
            sample_counts: vec![128],
            noise_sigmas: vec![0.0],
            trials: 2,
            burn_in: 200,
            orbit_length: 2000,
            density_bins: 32,
            amplitude_budget: 0.45,
            xi_h_threshold: 0.0,
            master_seed: 7,
            ..ExperimentConfig::default()
        }
    }

    #[test]
    fn seed_split_is_stable_and_spread() {
        let a = hash64(1, 2, 3);
        assert_eq!(a, hash64(1, 2, 3));
        assert_ne!(a, hash64(1, 2, 4));
        assert_ne!(a, hash64(1, 3, 3));
        assert_ne!(a, hash64(2, 2, 3));
    }

    #[test]
    fn noiseless_identification_recovers_map() {
        let cfg = small_cfg();
        let result = run_identification(&cfg, 3, 128, 0.0, 42).unwrap();
        assert!(result.converged);
        assert!(result.support_recovered);
        assert!(result.l1_error <= 1e-4, "l1 error {}", result.l1_error);
        assert_eq!(result.wiener_error, result.l1_error);
        assert_eq!(result.lambda, cfg.noiseless_lambda);
    }

    #[test]
    fn constant_map_fails_density_screen() {
        let cfg = ExperimentConfig {
            sparsities: vec![1],
            amplitude_budget: 0.0,
            xi_h_threshold: 0.05,
            generator_retries: 5,
            orbit_length: 2000,
            max_freq: 5,
            ..ExperimentConfig::default()
        };
        match run_identification(&cfg, 1, 64, 0.0, 1) {
            Err(Error::Experiment(msg)) => assert!(msg.contains("density screen")),
            other => panic!("expected screening failure, got {other:?}"),
        }
    }

    #[test]
    fn noisy_lambda_follows_the_rule() {
        let cfg = ExperimentConfig {
            xi_h_threshold: 0.0,
            orbit_length: 3000,
            amplitude_budget: 0.45,
            max_freq: 5,
            ..ExperimentConfig::default()
        };
        let m = 256;
        let result = run_identification(&cfg, 3, m, 0.05, 9).unwrap();
        let n = 2 * cfg.max_freq as usize + 1;
        assert_eq!(
            result.lambda,
            lambda_rule_with_constant(cfg.lambda_constant, 0.05, n, m)
        );
    }

    #[test]
    fn phase_diagram_shapes_and_determinism() {
        let mut cfg = small_cfg();
        cfg.sample_counts = vec![64, 128];
        cfg.noise_sigmas = vec![0.0, 0.05];
        let diagram = run_phase_diagram(&cfg).unwrap();
        assert_eq!(
            diagram.records.len() + diagram.failures.len(),
            cfg.trials * 4
        );
        assert_eq!(diagram.summaries.len(), 4);

        let mut csv1 = Vec::new();
        diagram.write_trials_csv(&mut csv1).unwrap();
        let diagram2 = run_phase_diagram(&cfg).unwrap();
        let mut csv2 = Vec::new();
        diagram2.write_trials_csv(&mut csv2).unwrap();
        assert_eq!(csv1, csv2);
        let text = String::from_utf8(csv1).unwrap();
        assert!(text.starts_with(TRIAL_CSV_HEADER));
        assert!(text.lines().count() >= 1 + diagram.records.len());
    }

    #[test]
    fn phase_diagram_underdetermined_cell_fails() {
        let mut cfg = small_cfg();
        cfg.sample_counts = vec![2];
        cfg.trials = 4;
        let diagram = run_phase_diagram(&cfg).unwrap();
        assert_eq!(diagram.summaries.len(), 1);
        assert!(diagram.summaries[0].success_rate < 0.5);
    }

    #[test]
    fn phase_diagram_saturated_cell_succeeds() {
        let mut cfg = small_cfg();
        // M = 4 N with a rich map: the near-orthogonal regime
        cfg.sample_counts = vec![4 * (2 * cfg.max_freq as usize + 1)];
        cfg.trials = 4;
        let diagram = run_phase_diagram(&cfg).unwrap();
        assert_eq!(diagram.summaries[0].success_rate, 1.0);
    }

    #[test]
    fn success_rate_is_monotone_in_m() {
        let mut cfg = small_cfg();
        cfg.sample_counts = vec![8, 32, 128];
        cfg.trials = 6;
        let diagram = run_phase_diagram(&cfg).unwrap();
        let rates: Vec<f64> = diagram.summaries.iter().map(|c| c.success_rate).collect();
        let slack = 1.0 / cfg.trials as f64 + 1e-12;
        assert!(rates[1] >= rates[0] - slack, "rates {rates:?}");
        assert!(rates[2] >= rates[1] - slack, "rates {rates:?}");
        assert!(rates[2] >= rates[0] - slack, "rates {rates:?}");
    }

    fn synthetic_result(m: usize, sigma: f64, s: usize, l1: f64) -> TrialResult {
        use crate::trigpoly::FrequencySet;
        let freqs = FrequencySet::new(1).unwrap();
        TrialResult {
            seed: 0,
            true_map: TrigPoly::new(freqs),
            recovered_map: TrigPoly::new(freqs),
            s,
            xi_h: 0.5,
            m,
            sigma,
            lambda: 0.0,
            l1_error: l1,
            wiener_error: l1,
            support_recovered: true,
            kkt_residual: 0.0,
            converged: true,
            generator_attempts: 1,
            wall_ms: 0,
        }
    }

    #[test]
    fn scaling_fit_exact_slopes() {
        let results: Vec<TrialResult> = [256usize, 512, 1024, 2048, 4096]
            .iter()
            .map(|&m| synthetic_result(m, 0.05, 3, 3.7 * (m as f64).powf(-0.5)))
            .collect();
        let refs: Vec<&TrialResult> = results.iter().collect();
        let fit = fit_error_scaling(&refs, ScalingAxis::SampleCount).unwrap();
        assert_abs_diff_eq!(fit.slope, -0.5, epsilon = 1e-12);
        assert!(fit.half_width < 1e-10);

        let results: Vec<TrialResult> = [0.01, 0.02, 0.04, 0.08]
            .iter()
            .map(|&sg| synthetic_result(1024, sg, 3, 2.2 * sg))
            .collect();
        let refs: Vec<&TrialResult> = results.iter().collect();
        let fit = fit_error_scaling(&refs, ScalingAxis::Sigma).unwrap();
        assert_abs_diff_eq!(fit.slope, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn scaling_fit_needs_enough_positive_points() {
        let results: Vec<TrialResult> = [256usize, 512, 1024]
            .iter()
            .map(|&m| synthetic_result(m, 0.05, 3, (m as f64).powf(-0.5)))
            .collect();
        let refs: Vec<&TrialResult> = results.iter().collect();
        assert!(fit_error_scaling(&refs, ScalingAxis::SampleCount).is_err());

        // exact recoveries (zero error) are excluded
        let results: Vec<TrialResult> = [256usize, 512, 1024, 2048]
            .iter()
            .map(|&m| synthetic_result(m, 0.0, 3, 0.0))
            .collect();
        let refs: Vec<&TrialResult> = results.iter().collect();
        assert!(fit_error_scaling(&refs, ScalingAxis::SampleCount).is_err());
    }
}
