//! Complex-valued Lasso via cyclic coordinate descent, with KKT
//! certificates and brute-force oracles.
//!
//! Every measurement column has squared norm exactly M, so the coordinate
//! update is the proximal map with threshold exactly lambda:
//! `a_n <- soft_threshold(a_n + g_n^*(y - G a)/M, lambda)`. The residual is
//! maintained incrementally and refreshed once at the end.

use itertools::Itertools;
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg;
use crate::sensing::MeasurementSystem;
use crate::trigpoly::FrequencySet;

/// Default cap on the number of supports the l0 oracle may enumerate.
pub const DEFAULT_ENUMERATION_BUDGET: u64 = 1_000_000;

/// Proximal map of `t * |.|`: returns 0 if `|c| <= t`, else `c (1 - t/|c|)`.
pub fn soft_threshold_complex(c: Complex64, t: f64) -> Complex64 {
    debug_assert!(t >= 0.0);
    let norm = c.norm();
    if norm <= t {
        Complex64::ZERO
    } else {
        c * (1.0 - t / norm)
    }
}

/// The tuning rule `lambda = 4 sigma sqrt(log N / M)` (natural log).
pub fn lambda_rule(sigma: f64, n_cols: usize, m_samples: usize) -> f64 {
    lambda_rule_with_constant(4.0, sigma, n_cols, m_samples)
}

/// `lambda = A sigma sqrt(log N / M)` for a configurable constant `A`.
pub fn lambda_rule_with_constant(a: f64, sigma: f64, n_cols: usize, m_samples: usize) -> f64 {
    debug_assert!(n_cols >= 2);
    debug_assert!(m_samples >= 1);
    debug_assert!(sigma >= 0.0);
    a * sigma * ((n_cols as f64).ln() / m_samples as f64).sqrt()
}

/// Solver configuration.
#[derive(Debug, Clone)]
pub struct LassoConfig {
    pub lambda: f64,
    /// Maximum number of full coordinate sweeps.
    pub max_iterations: usize,
    /// Convergence threshold on the per-sweep max coefficient change.
    pub tolerance: f64,
    /// Hermitian-symmetrize the iterate once the sweeps stall. For real
    /// observations this never increases the objective.
    pub symmetrize_output: bool,
    /// Record the objective after every sweep (instrumented runs).
    pub record_objectives: bool,
    /// Initial point, e.g. the previous solution along a lambda path.
    pub warm_start: Option<DVector<Complex64>>,
}

impl LassoConfig {
    pub fn new(lambda: f64) -> Result<Self> {
        let cfg = Self {
            lambda,
            max_iterations: 100_000,
            tolerance: 1e-10,
            symmetrize_output: false,
            record_objectives: false,
            warm_start: None,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.lambda >= 0.0 && self.lambda.is_finite()) {
            return Err(Error::Parameter(format!(
                "lambda {} must be finite and nonnegative",
                self.lambda
            )));
        }
        if !(self.tolerance > 0.0) {
            return Err(Error::Parameter("tolerance must be positive".into()));
        }
        if self.max_iterations == 0 {
            return Err(Error::Parameter("max_iterations must be at least 1".into()));
        }
        Ok(())
    }
}

/// Solver output; `converged` implies `kkt_residual <= 10 * tolerance`.
#[derive(Debug, Clone)]
pub struct LassoSolution {
    pub coeffs: DVector<Complex64>,
    pub lambda: f64,
    pub objective_value: f64,
    pub kkt_residual: f64,
    pub iterations_used: usize,
    pub converged: bool,
    /// Objective after each sweep, present when recording was requested.
    pub objective_trace: Vec<f64>,
}

impl LassoSolution {
    /// Indices with exactly nonzero coefficients.
    pub fn support(&self) -> Vec<usize> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| **c != Complex64::ZERO)
            .map(|(i, _)| i)
            .collect()
    }

    pub fn l1_norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).sum()
    }

    /// JSON export `{"lambda":..,"converged":..,"kkt_residual":..,"coeffs":[[n,re,im],..]}`
    /// listing the nonzero coefficients by frequency, ascending.
    pub fn to_json_string(&self, freqs: FrequencySet) -> String {
        #[derive(Serialize)]
        struct SolutionJson {
            lambda: f64,
            converged: bool,
            kkt_residual: f64,
            coeffs: Vec<(i32, f64, f64)>,
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| **c != Complex64::ZERO)
            .map(|(i, c)| (freqs.freq_at(i), c.re, c.im))
            .collect();
        serde_json::to_string(&SolutionJson {
            lambda: self.lambda,
            converged: self.converged,
            kkt_residual: self.kkt_residual,
            coeffs,
        })
        .expect("solution serializes")
    }
}

fn objective(residual: &DVector<Complex64>, coeffs: &DVector<Complex64>, lambda: f64, m: f64) -> f64 {
    residual.iter().map(|z| z.norm_sqr()).sum::<f64>() / m
        + 2.0 * lambda * coeffs.iter().map(|z| z.norm()).sum::<f64>()
}

fn symmetrize_coeffs(coeffs: &DVector<Complex64>) -> DVector<Complex64> {
    let n = coeffs.len();
    DVector::from_fn(n, |i, _| (coeffs[i] + coeffs[n - 1 - i].conj()) * 0.5)
}

/// Minimizes `(1/M) ||y - G a||_2^2 + 2 lambda ||a||_1` by cyclic coordinate
/// descent.
///
/// Convergence requires both the per-sweep max coefficient change to drop to
/// `tolerance` and the KKT residual to certify optimality within
/// `10 * tolerance`. Non-convergence is reported through the `converged`
/// flag, not as an error.
pub fn solve_lasso(sys: &MeasurementSystem, cfg: &LassoConfig) -> Result<LassoSolution> {
    cfg.validate()?;
    let n = sys.n();
    let m = sys.m() as f64;
    let lambda = cfg.lambda;

    let mut coeffs = match &cfg.warm_start {
        Some(start) => {
            if start.len() != n {
                return Err(Error::Parameter(format!(
                    "warm start length {} does not match column count {n}",
                    start.len()
                )));
            }
            start.clone()
        }
        None => DVector::zeros(n),
    };
    let mut residual = sys.residual(&coeffs);

    let mut trace = Vec::new();
    if cfg.record_objectives {
        trace.push(objective(&residual, &coeffs, lambda, m));
    }

    let mut converged = false;
    let mut sweeps = 0;
    while sweeps < cfg.max_iterations {
        sweeps += 1;
        let mut max_delta: f64 = 0.0;
        for col in 0..n {
            let column = sys.column(col);
            let mut corr = Complex64::ZERO;
            for (g, r) in column.iter().zip(residual.iter()) {
                corr += g.conj() * r;
            }
            let target = coeffs[col] + corr / m;
            let updated = soft_threshold_complex(target, lambda);
            let delta = updated - coeffs[col];
            if delta != Complex64::ZERO {
                for (r, g) in residual.iter_mut().zip(column.iter()) {
                    *r -= g * delta;
                }
                coeffs[col] = updated;
            }
            max_delta = max_delta.max(delta.norm());
        }
        if cfg.record_objectives {
            trace.push(objective(&residual, &coeffs, lambda, m));
        }

        if max_delta <= cfg.tolerance {
            if cfg.symmetrize_output {
                // Objective-safe for real observations: the flipped iterate
                // attains the same objective, so the midpoint cannot be worse.
                let symmetrized = symmetrize_coeffs(&coeffs);
                if symmetrized != coeffs {
                    coeffs = symmetrized;
                    residual = sys.residual(&coeffs);
                }
            }
            let kkt = kkt_residual(sys, &coeffs, lambda);
            if kkt <= 10.0 * cfg.tolerance {
                converged = true;
                break;
            }
            if max_delta == 0.0 {
                break;
            }
        }
    }

    // Fresh residual washes out incremental drift before reporting.
    let residual = sys.residual(&coeffs);
    let objective_value = objective(&residual, &coeffs, lambda, m);
    let kkt = kkt_residual(sys, &coeffs, lambda);
    if converged {
        converged = kkt <= 10.0 * cfg.tolerance;
    }
    Ok(LassoSolution {
        coeffs,
        lambda,
        objective_value,
        kkt_residual: kkt,
        iterations_used: sweeps,
        converged,
        objective_trace: trace,
    })
}

/// Max violation of the Lasso stationarity conditions at `coeffs`:
/// with `c_n = g_n^* (y - G a) / M`, active coordinates must satisfy
/// `c_n = lambda a_n / |a_n|` and inactive ones `|c_n| <= lambda`.
/// Zero iff `coeffs` minimizes the objective.
pub fn kkt_residual(sys: &MeasurementSystem, coeffs: &DVector<Complex64>, lambda: f64) -> f64 {
    let m = sys.m() as f64;
    let residual = sys.residual(coeffs);
    let mut worst: f64 = 0.0;
    for col in 0..sys.n() {
        let column = sys.column(col);
        let mut corr = Complex64::ZERO;
        for (g, r) in column.iter().zip(residual.iter()) {
            corr += g.conj() * r;
        }
        corr /= m;
        let a = coeffs[col];
        let violation = if a == Complex64::ZERO {
            (corr.norm() - lambda).max(0.0)
        } else {
            (corr - a / a.norm() * lambda).norm()
        };
        worst = worst.max(violation);
    }
    worst
}

/// Least-squares refit on a fixed support: minimizes `||y - G_S a_S||_2`.
///
/// Returns the coefficients in support order. The support must be strictly
/// increasing with at most M indices; a numerically rank-deficient
/// restriction is an error.
pub fn debias_on_support(
    sys: &MeasurementSystem,
    support: &[usize],
) -> Result<DVector<Complex64>> {
    if support.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Parameter(
            "support indices must be strictly increasing".into(),
        ));
    }
    if support.iter().any(|&i| i >= sys.n()) {
        return Err(Error::Parameter("support index out of range".into()));
    }
    if support.len() > sys.m() {
        return Err(Error::Parameter(format!(
            "support size {} exceeds sample count {}",
            support.len(),
            sys.m()
        )));
    }
    if support.is_empty() {
        return Ok(DVector::zeros(0));
    }
    let m = sys.m();
    let mut a = DMatrix::zeros(m, support.len());
    for (j, &col) in support.iter().enumerate() {
        let column = sys.column(col);
        for i in 0..m {
            a[(i, j)] = column[i];
        }
    }
    let b = DVector::from_iterator(m, sys.y().iter().map(|&v| Complex64::new(v, 0.0)));
    linalg::least_squares(&a, &b)
}

/// Best support of size at most `s` found by exhaustive enumeration.
#[derive(Debug, Clone)]
pub struct L0Solution {
    /// Full-length coefficient vector, zero off the support.
    pub coeffs: DVector<Complex64>,
    pub support: Vec<usize>,
    pub residual_norm: f64,
}

fn binomial(n: u128, k: u128) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.saturating_mul(n - i) / (i + 1);
    }
    acc
}

/// `min ||a||_0` oracle: enumerates every support of size at most `s`,
/// refits each by least squares, and returns the residual minimizer.
///
/// Supports are visited by ascending size, lexicographically within a size,
/// and only strict improvements replace the incumbent, so ties resolve to
/// the smallest support. Uses [`DEFAULT_ENUMERATION_BUDGET`].
pub fn l0_oracle(sys: &MeasurementSystem, s: usize) -> Result<L0Solution> {
    l0_oracle_with_budget(sys, s, DEFAULT_ENUMERATION_BUDGET)
}

pub fn l0_oracle_with_budget(
    sys: &MeasurementSystem,
    s: usize,
    budget: u64,
) -> Result<L0Solution> {
    let n = sys.n();
    let s = s.min(n);
    let required: u128 = (1..=s).map(|k| binomial(n as u128, k as u128)).sum();
    if required > budget as u128 {
        return Err(Error::BudgetExceeded {
            required,
            budget,
        });
    }

    let y_norm = sys.y().iter().map(|v| v * v).sum::<f64>().sqrt();
    let mut best = L0Solution {
        coeffs: DVector::zeros(n),
        support: Vec::new(),
        residual_norm: y_norm,
    };

    for k in 1..=s {
        for support in (0..n).combinations(k) {
            let refit = match debias_on_support(sys, &support) {
                Ok(v) => v,
                // Rank-deficient restrictions are dominated by a subset.
                Err(Error::NumericalRank(_)) => continue,
                Err(e) => return Err(e),
            };
            let mut coeffs = DVector::zeros(n);
            for (j, &col) in support.iter().enumerate() {
                coeffs[col] = refit[j];
            }
            let norm = sys.residual(&coeffs).norm();
            if norm < best.residual_norm {
                best = L0Solution {
                    coeffs,
                    support,
                    residual_norm: norm,
                };
            }
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{sample_observations, simulate, SamplingStrategy};
    use crate::trigpoly::{random_sparse_map, FrequencySet, TrigPoly};
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn freqs(n: u32) -> FrequencySet {
        FrequencySet::new(n).unwrap()
    }

    /// Random points + real observations from a conjugate-pair ground truth.
    fn pair_instance(
        max_freq: u32,
        m: usize,
        seed: u64,
    ) -> (MeasurementSystem, TrigPoly) {
        let f = freqs(max_freq);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let k = rng.random_range(1..=max_freq as i32);
        let amp = 0.3 + 0.7 * rng.random::<f64>();
        let phase = rng.random_range(0.0..std::f64::consts::TAU);
        let a = Complex64::from_polar(amp, phase);
        let truth =
            TrigPoly::from_coeffs(f, [(k, a), (-k, a.conj())]).unwrap();
        let x: Vec<f64> = (0..m).map(|_| rng.random::<f64>()).collect();
        let y: Vec<f64> = x.iter().map(|&xi| truth.evaluate_real(xi)).collect();
        (MeasurementSystem::from_points(x, y, f).unwrap(), truth)
    }

    #[test]
    fn soft_threshold_examples() {
        let shrunk = soft_threshold_complex(c(3.0, 4.0), 2.0);
        assert_abs_diff_eq!(shrunk.re, 1.8, epsilon = 1e-15);
        assert_abs_diff_eq!(shrunk.im, 2.4, epsilon = 1e-15);
        assert_eq!(soft_threshold_complex(c(1.0, 0.0), 2.0), Complex64::ZERO);
        assert_eq!(soft_threshold_complex(c(0.3, -0.4), 0.0), c(0.3, -0.4));
    }

    #[test]
    fn lambda_rule_examples() {
        assert_abs_diff_eq!(lambda_rule(0.1, 128, 1024), 0.0275, epsilon = 5e-5);
        assert_eq!(lambda_rule(0.0, 128, 1024), 0.0);
        assert_abs_diff_eq!(lambda_rule(1.0, 8, 4), 2.884, epsilon = 1e-3);
    }

    #[test]
    fn large_lambda_gives_zero_solution() {
        let (sys, _) = pair_instance(3, 40, 1);
        let m = sys.m() as f64;
        let max_corr = (0..sys.n())
            .map(|col| {
                let column = sys.column(col);
                let corr: Complex64 = column
                    .iter()
                    .zip(sys.y())
                    .map(|(g, &y)| g.conj() * c(y, 0.0))
                    .sum();
                (corr / m).norm()
            })
            .fold(0.0, f64::max);
        let cfg = LassoConfig::new(max_corr * 1.0001).unwrap();
        let sol = solve_lasso(&sys, &cfg).unwrap();
        assert!(sol.converged);
        assert!(sol.coeffs.iter().all(|z| *z == Complex64::ZERO));
        assert_eq!(kkt_residual(&sys, &sol.coeffs, cfg.lambda), 0.0);
    }

    #[test]
    fn orthogonal_design_matches_closed_form() {
        // Equispaced points make G*G/M the identity, so the solution is the
        // entrywise prox of G*y/M.
        let m = 16;
        let f = freqs(3);
        let x: Vec<f64> = (0..m).map(|i| i as f64 / m as f64).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let y: Vec<f64> = (0..m).map(|_| rng.random::<f64>() - 0.5).collect();
        let sys = MeasurementSystem::from_points(x, y, f).unwrap();
        let lambda = 0.05;
        let cfg = LassoConfig::new(lambda).unwrap();
        let sol = solve_lasso(&sys, &cfg).unwrap();
        assert!(sol.converged);
        for col in 0..sys.n() {
            let column = sys.column(col);
            let corr: Complex64 = column
                .iter()
                .zip(sys.y())
                .map(|(g, &yv)| g.conj() * c(yv, 0.0))
                .sum();
            let expected = soft_threshold_complex(corr / m as f64, lambda);
            assert!((sol.coeffs[col] - expected).norm() < 1e-9);
        }
        assert!(sol.kkt_residual <= 1e-12, "kkt {}", sol.kkt_residual);
    }

    #[test]
    fn noiseless_orbit_recovery() {
        let map_freqs = freqs(5);
        let map = random_sparse_map(3, map_freqs, 0.5, 0.45, 33).unwrap();
        let traj = simulate(&map, 0.37, 500, 65).unwrap();
        let obs = sample_observations(&traj, 64, SamplingStrategy::Consecutive, 0.0, 7).unwrap();
        let sys = MeasurementSystem::build(&obs, map_freqs).unwrap();
        let cfg = LassoConfig::new(1e-6).unwrap();
        let sol = solve_lasso(&sys, &cfg).unwrap();
        assert!(sol.converged);
        let truth = map.coeff_vector();
        let max_err = sol
            .coeffs
            .iter()
            .zip(&truth)
            .map(|(got, want)| (got - want).norm())
            .fold(0.0, f64::max);
        assert!(max_err <= 1e-4, "l-infinity error {max_err}");
    }

    #[test]
    fn objective_trace_is_monotone() {
        let (sys, _) = pair_instance(5, 48, 5);
        let mut cfg = LassoConfig::new(0.01).unwrap();
        cfg.record_objectives = true;
        let sol = solve_lasso(&sys, &cfg).unwrap();
        assert!(sol.objective_trace.len() >= 2);
        for w in sol.objective_trace.windows(2) {
            assert!(
                w[1] <= w[0] + 1e-11 * (1.0 + w[0].abs()),
                "objective increased: {} -> {}",
                w[0],
                w[1]
            );
        }
        // reported objective recomputes from the fields
        let m = sys.m() as f64;
        let recomputed = sys.residual(&sol.coeffs).iter().map(|z| z.norm_sqr()).sum::<f64>() / m
            + 2.0 * cfg.lambda * sol.l1_norm();
        assert_abs_diff_eq!(recomputed, sol.objective_value, epsilon = 1e-10);
    }

    #[test]
    fn non_convergence_is_flagged_not_thrown() {
        let (sys, _) = pair_instance(5, 48, 6);
        let mut cfg = LassoConfig::new(1e-6).unwrap();
        cfg.max_iterations = 1;
        cfg.tolerance = 1e-14;
        let sol = solve_lasso(&sys, &cfg).unwrap();
        assert!(!sol.converged);
        assert_eq!(sol.iterations_used, 1);
    }

    #[test]
    fn symmetrized_output_is_hermitian_and_no_worse() {
        let (sys, _) = pair_instance(4, 40, 9);
        let cfg_plain = LassoConfig::new(0.01).unwrap();
        let plain = solve_lasso(&sys, &cfg_plain).unwrap();
        let mut cfg_sym = cfg_plain.clone();
        cfg_sym.symmetrize_output = true;
        let sym = solve_lasso(&sys, &cfg_sym).unwrap();
        assert!(sym.converged);
        let n = sym.coeffs.len();
        for i in 0..n {
            assert!((sym.coeffs[i] - sym.coeffs[n - 1 - i].conj()).norm() < 1e-14);
        }
        assert!(sym.objective_value <= plain.objective_value + 1e-10);
        assert!(sym.kkt_residual <= 10.0 * cfg_sym.tolerance);
    }

    #[test]
    fn warm_start_resumes_from_solution() {
        let (sys, _) = pair_instance(4, 40, 10);
        let cfg = LassoConfig::new(0.02).unwrap();
        let cold = solve_lasso(&sys, &cfg).unwrap();
        let mut warm_cfg = cfg.clone();
        warm_cfg.warm_start = Some(cold.coeffs.clone());
        let warm = solve_lasso(&sys, &warm_cfg).unwrap();
        assert!(warm.converged);
        assert!(warm.iterations_used <= 2);
        assert!((&warm.coeffs - &cold.coeffs).norm() < 1e-8);
    }

    #[test]
    fn debias_recovers_exact_coefficients() {
        let (sys, truth) = pair_instance(4, 60, 11);
        let f = truth.freqs();
        let support: Vec<usize> = truth
            .support()
            .iter()
            .map(|&n| f.index_of(n).unwrap())
            .collect();
        let refit = debias_on_support(&sys, &support).unwrap();
        for (j, &col) in support.iter().enumerate() {
            let want = truth.coeff(f.freq_at(col));
            assert!((refit[j] - want).norm() < 1e-10);
        }
    }

    #[test]
    fn debias_dc_only_gives_mean() {
        let f = freqs(2);
        let x = vec![0.12, 0.4, 0.77];
        let y = vec![0.6, 0.6, 0.6];
        let sys = MeasurementSystem::from_points(x, y, f).unwrap();
        let dc_index = f.index_of(0).unwrap();
        let refit = debias_on_support(&sys, &[dc_index]).unwrap();
        assert!((refit[0] - c(0.6, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn debias_noise_error_scales_with_sigma() {
        let sigma = 0.01;
        let m = 512;
        let map_freqs = freqs(7);
        let map = random_sparse_map(5, map_freqs, 0.5, 0.4, 13).unwrap();
        let traj = simulate(&map, 0.3, 500, m + 1).unwrap();
        let obs =
            sample_observations(&traj, m, SamplingStrategy::Consecutive, sigma, 29).unwrap();
        let sys = MeasurementSystem::build(&obs, map_freqs).unwrap();
        let support: Vec<usize> = map
            .support()
            .iter()
            .map(|&n| map_freqs.index_of(n).unwrap())
            .collect();
        let refit = debias_on_support(&sys, &support).unwrap();
        let err: f64 = support
            .iter()
            .enumerate()
            .map(|(j, &col)| {
                (refit[j] - map.coeff(map_freqs.freq_at(col))).norm_sqr()
            })
            .sum::<f64>()
            .sqrt();
        let bound = 5.0 * sigma * (map.sparsity() as f64 / m as f64).sqrt();
        assert!(err <= bound, "refit error {err} > {bound}");
    }

    #[test]
    fn debias_rejects_bad_support() {
        let (sys, _) = pair_instance(3, 10, 14);
        assert!(debias_on_support(&sys, &[2, 1]).is_err());
        assert!(debias_on_support(&sys, &[99]).is_err());
        let too_big: Vec<usize> = (0..sys.n()).collect();
        // n = 7 <= m = 10 is fine; duplicate indices are not
        assert!(debias_on_support(&sys, &too_big).is_ok());
        assert!(debias_on_support(&sys, &[1, 1]).is_err());
    }

    #[test]
    fn l0_oracle_recovers_sparse_truth() {
        let (sys, truth) = pair_instance(3, 20, 15);
        let sol = l0_oracle(&sys, 2).unwrap();
        let f = truth.freqs();
        let want: Vec<usize> = truth
            .support()
            .iter()
            .map(|&n| f.index_of(n).unwrap())
            .collect();
        assert_eq!(sol.support, want);
        assert!(sol.residual_norm < 1e-10);
    }

    #[test]
    fn l0_oracle_zero_observations() {
        let f = freqs(2);
        let sys =
            MeasurementSystem::from_points(vec![0.1, 0.5, 0.9], vec![0.0; 3], f).unwrap();
        let sol = l0_oracle(&sys, 2).unwrap();
        assert!(sol.support.is_empty());
        assert!(sol.coeffs.iter().all(|z| *z == Complex64::ZERO));
    }

    #[test]
    fn l0_budget_is_enforced() {
        let (sys, _) = pair_instance(3, 10, 16);
        assert!(matches!(
            l0_oracle_with_budget(&sys, 3, 10),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn l0_and_lasso_agree_on_noiseless_supports() {
        for seed in [21u64, 22, 23, 24, 25] {
            let (sys, _) = pair_instance(3, 24, seed);
            let l0 = l0_oracle(&sys, 2).unwrap();
            let cfg = LassoConfig::new(1e-8).unwrap();
            let lasso = solve_lasso(&sys, &cfg).unwrap();
            assert!(lasso.converged);
            assert_eq!(lasso.support(), l0.support, "seed {seed}");
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn prox_minimizes_its_objective(re in -3.0f64..3.0, im in -3.0f64..3.0, t in 0.0f64..2.0) {
            let point = c(re, im);
            let prox = soft_threshold_complex(point, t);
            let value = |z: Complex64| (z - point).norm_sqr() + 2.0 * t * z.norm();
            let best = value(prox);
            // polar grid search around the point
            for ir in 0..40 {
                for ip in 0..32 {
                    let r = point.norm() * 1.5 * ir as f64 / 39.0;
                    let phi = std::f64::consts::TAU * ip as f64 / 32.0;
                    let z = Complex64::from_polar(r, phi);
                    prop_assert!(best <= value(z) + 1e-9);
                }
            }
        }

        #[test]
        fn solutions_scale_with_observations(seed in 0u64..200, gamma in 0.1f64..5.0) {
            let (sys, _) = pair_instance(3, 24, seed);
            let lambda = 0.05;
            let base = solve_lasso(&sys, &LassoConfig::new(lambda).unwrap()).unwrap();
            let scaled_y: Vec<f64> = sys.y().iter().map(|&v| gamma * v).collect();
            let scaled_sys = MeasurementSystem::from_points(
                sys.sample_points().to_vec(),
                scaled_y,
                sys.freqs(),
            )
            .unwrap();
            let scaled =
                solve_lasso(&scaled_sys, &LassoConfig::new(gamma * lambda).unwrap()).unwrap();
            let dev = (0..sys.n())
                .map(|i| (scaled.coeffs[i] - base.coeffs[i] * gamma).norm())
                .fold(0.0f64, f64::max);
            prop_assert!(dev <= 1e-8, "scaling deviation {}", dev);
        }
    }
}
