//! Orbit simulation, invariant-density estimation, and observation sampling.
//!
//! The orbit evolves noiselessly; Gaussian noise enters only the observed
//! successor values. All functions are deterministic given their seeds.

use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{Error, Result};
use crate::trigpoly::TrigPoly;

/// Orbit of the iterated map, states in [0,1).
#[derive(Debug, Clone)]
pub struct Trajectory {
    states: Vec<f64>,
    burn_in_discarded: usize,
    map: TrigPoly,
    seed: Option<u64>,
}

impl Trajectory {
    pub fn states(&self) -> &[f64] {
        &self.states
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn burn_in_discarded(&self) -> usize {
        self.burn_in_discarded
    }

    pub fn map(&self) -> &TrigPoly {
        &self.map
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    /// CSV export with header `step,x`; step counts from the first retained
    /// state. Full round-trip decimal precision.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "step,x")?;
        for (k, x) in self.states.iter().enumerate() {
            writeln!(w, "{},{}", self.burn_in_discarded + k, x)?;
        }
        Ok(())
    }
}

/// Iterates `x_{k+1} = f(x_k)` for `burn_in + length` states starting from
/// `x0` (the start state counts), then discards the first `burn_in`.
///
/// Callers are expected to pass a validated circle map; if an iterate still
/// escapes `(0,1)` the offending step is reported. A computed value of
/// exactly 1 is identified with 0.
pub fn simulate(map: &TrigPoly, x0: f64, burn_in: usize, length: usize) -> Result<Trajectory> {
    if !(0.0..1.0).contains(&x0) {
        return Err(Error::Parameter(format!("x0 {x0} must lie in [0,1)")));
    }
    let total = burn_in + length;
    let mut states = Vec::with_capacity(length);
    let mut x = x0;
    for step in 0..total {
        if step >= burn_in {
            states.push(x);
        }
        if step + 1 == total {
            break;
        }
        let mut next = map.evaluate_real(x);
        if next == 1.0 {
            next = 0.0;
        }
        if !(0.0..1.0).contains(&next) || !next.is_finite() {
            return Err(Error::Dynamics {
                step: step + 1,
                value: next,
            });
        }
        x = next;
    }
    Ok(Trajectory {
        states,
        burn_in_discarded: burn_in,
        map: map.clone(),
        seed: None,
    })
}

/// Histogram estimate of the invariant density over [0,1).
#[derive(Debug, Clone, PartialEq)]
pub struct DensityEstimate {
    bin_masses: Vec<f64>,
    sample_count: usize,
}

impl DensityEstimate {
    /// Builds from bin masses that must be nonnegative and sum to 1
    /// within 1e-12.
    pub fn from_masses(bin_masses: Vec<f64>, sample_count: usize) -> Result<Self> {
        if bin_masses.is_empty() {
            return Err(Error::Parameter("density needs at least one bin".into()));
        }
        if bin_masses.iter().any(|&m| !(m >= 0.0)) {
            return Err(Error::Parameter("bin masses must be nonnegative".into()));
        }
        let total: f64 = bin_masses.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::Parameter(format!(
                "bin masses sum to {total}, expected 1"
            )));
        }
        Ok(Self {
            bin_masses,
            sample_count,
        })
    }

    pub fn bin_count(&self) -> usize {
        self.bin_masses.len()
    }

    pub fn masses(&self) -> &[f64] {
        &self.bin_masses
    }

    pub fn sample_count(&self) -> usize {
        self.sample_count
    }

    /// Piecewise-constant density values `h_b = B * mass_b`.
    pub fn densities(&self) -> Vec<f64> {
        let b = self.bin_masses.len() as f64;
        self.bin_masses.iter().map(|m| m * b).collect()
    }

    pub fn bin_edges(&self, b: usize) -> (f64, f64) {
        let n = self.bin_masses.len() as f64;
        (b as f64 / n, (b + 1) as f64 / n)
    }

    /// Empirical density floor `xi_h = min_b h_b`.
    pub fn lower_bound(&self) -> f64 {
        let b = self.bin_masses.len() as f64;
        self.bin_masses
            .iter()
            .map(|m| m * b)
            .fold(f64::INFINITY, f64::min)
    }

    /// CSV export with header `bin_left,bin_right,density`.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "bin_left,bin_right,density")?;
        let b = self.bin_masses.len() as f64;
        for (i, m) in self.bin_masses.iter().enumerate() {
            let (left, right) = self.bin_edges(i);
            writeln!(w, "{},{},{}", left, right, m * b)?;
        }
        Ok(())
    }

    /// Reads the `bin_left,bin_right,density` CSV back. Bins must be the
    /// equal-width partition of [0,1) in order; masses are renormalized to
    /// absorb formatting round-off.
    pub fn read_csv<R: std::io::Read>(r: R) -> Result<Self> {
        let mut reader = csv::ReaderBuilder::new().has_headers(true).from_reader(r);
        {
            let headers = reader
                .headers()
                .map_err(|e| Error::Format(format!("density csv: {e}")))?;
            if headers.iter().collect::<Vec<_>>() != ["bin_left", "bin_right", "density"] {
                return Err(Error::Format(
                    "density csv: expected header bin_left,bin_right,density".into(),
                ));
            }
        }
        let mut densities = Vec::new();
        for record in reader.records() {
            let record = record.map_err(|e| Error::Format(format!("density csv: {e}")))?;
            if record.len() != 3 {
                return Err(Error::Format("density csv: expected 3 fields".into()));
            }
            let d: f64 = record[2]
                .parse()
                .map_err(|_| Error::Format(format!("density csv: bad density {:?}", &record[2])))?;
            if d < 0.0 {
                return Err(Error::Format("density csv: negative density".into()));
            }
            densities.push(d);
        }
        if densities.is_empty() {
            return Err(Error::Format("density csv: no bins".into()));
        }
        let b = densities.len() as f64;
        let total: f64 = densities.iter().map(|d| d / b).sum();
        if (total - 1.0).abs() > 1e-6 {
            return Err(Error::Format(format!(
                "density csv: density integrates to {total}, expected 1"
            )));
        }
        let masses = densities.iter().map(|d| d / b / total).collect();
        Self::from_masses(masses, 0)
    }
}

/// Histogram of the trajectory states over `bins` equal-width bins on [0,1).
pub fn estimate_density(traj: &Trajectory, bins: usize) -> Result<DensityEstimate> {
    if bins == 0 {
        return Err(Error::Parameter("bin count must be positive".into()));
    }
    if traj.len() < bins {
        return Err(Error::Parameter(format!(
            "trajectory length {} is below the bin count {bins}",
            traj.len()
        )));
    }
    let mut counts = vec![0usize; bins];
    for &x in traj.states() {
        let idx = ((x * bins as f64) as usize).min(bins - 1);
        counts[idx] += 1;
    }
    let n = traj.len() as f64;
    let bin_masses = counts.iter().map(|&c| c as f64 / n).collect();
    Ok(DensityEstimate {
        bin_masses,
        sample_count: traj.len(),
    })
}

/// How observation indices are drawn from the trajectory.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SamplingStrategy {
    /// `j_m = m`: the first M consecutive transitions.
    Consecutive,
    /// `j_m = m * k` for stride `k >= 1`.
    Strided(usize),
    /// `j_m` i.i.d. uniform over all valid indices.
    UniformIndices,
}

impl SamplingStrategy {
    pub fn label(&self) -> String {
        match self {
            SamplingStrategy::Consecutive => "consecutive".into(),
            SamplingStrategy::Strided(k) => format!("strided:{k}"),
            SamplingStrategy::UniformIndices => "uniform".into(),
        }
    }
}

impl std::str::FromStr for SamplingStrategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "consecutive" => Ok(SamplingStrategy::Consecutive),
            "uniform" => Ok(SamplingStrategy::UniformIndices),
            other => {
                if let Some(k) = other.strip_prefix("strided:") {
                    let k: usize = k
                        .parse()
                        .map_err(|_| Error::Parameter(format!("bad stride in {other:?}")))?;
                    if k == 0 {
                        return Err(Error::Parameter("stride must be at least 1".into()));
                    }
                    Ok(SamplingStrategy::Strided(k))
                } else {
                    Err(Error::Parameter(format!(
                        "unknown sampling strategy {other:?} (expected consecutive, uniform, or strided:k)"
                    )))
                }
            }
        }
    }
}

/// Observed transitions `(x_j, f(x_j) + eta_j)` with `eta ~ N(0, sigma^2)`.
#[derive(Debug, Clone)]
pub struct ObservationSet {
    pairs: Vec<(f64, f64)>,
    noise_sigma: f64,
    strategy: SamplingStrategy,
    seed: u64,
}

impl ObservationSet {
    /// Wraps externally produced pairs (synthetic instances, CSV input).
    pub fn from_pairs(
        pairs: Vec<(f64, f64)>,
        noise_sigma: f64,
        strategy: SamplingStrategy,
        seed: u64,
    ) -> Result<Self> {
        if pairs.is_empty() {
            return Err(Error::Parameter("observation set must be nonempty".into()));
        }
        if pairs.iter().any(|&(x, _)| !(0.0..1.0).contains(&x)) {
            return Err(Error::Parameter(
                "observation points must lie in [0,1)".into(),
            ));
        }
        Ok(Self {
            pairs,
            noise_sigma,
            strategy,
            seed,
        })
    }

    pub fn pairs(&self) -> &[(f64, f64)] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn noise_sigma(&self) -> f64 {
        self.noise_sigma
    }

    pub fn strategy(&self) -> SamplingStrategy {
        self.strategy
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// CSV export with header `x,y`.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "x,y")?;
        for (x, y) in &self.pairs {
            writeln!(w, "{},{}", x, y)?;
        }
        Ok(())
    }

    /// Reads the `x,y` CSV format back. Strategy and seed are not stored in
    /// the file; imported sets are tagged as uniform with seed 0.
    pub fn read_csv<R: std::io::Read>(r: R, noise_sigma: f64) -> Result<Self> {
        let mut reader = csv::ReaderBuilder::new().has_headers(true).from_reader(r);
        {
            let headers = reader
                .headers()
                .map_err(|e| Error::Format(format!("observations csv: {e}")))?;
            if headers.iter().collect::<Vec<_>>() != ["x", "y"] {
                return Err(Error::Format(format!(
                    "observations csv: expected header x,y, found {}",
                    headers.iter().collect::<Vec<_>>().join(",")
                )));
            }
        }
        let mut pairs = Vec::new();
        for record in reader.records() {
            let record = record.map_err(|e| Error::Format(format!("observations csv: {e}")))?;
            if record.len() != 2 {
                return Err(Error::Format(format!(
                    "observations csv: expected 2 fields, found {}",
                    record.len()
                )));
            }
            let x: f64 = record[0]
                .parse()
                .map_err(|_| Error::Format(format!("observations csv: bad x {:?}", &record[0])))?;
            let y: f64 = record[1]
                .parse()
                .map_err(|_| Error::Format(format!("observations csv: bad y {:?}", &record[1])))?;
            pairs.push((x, y));
        }
        Self::from_pairs(pairs, noise_sigma, SamplingStrategy::UniformIndices, 0)
    }
}

/// Draws `m` observation pairs from the trajectory by the given strategy and
/// perturbs the successor values with i.i.d. `N(0, sigma^2)` noise.
///
/// With `sigma = 0` the pairs are exact transitions and no random noise is
/// consumed. Deterministic given the seed.
pub fn sample_observations(
    traj: &Trajectory,
    m: usize,
    strategy: SamplingStrategy,
    sigma: f64,
    seed: u64,
) -> Result<ObservationSet> {
    if m == 0 {
        return Err(Error::Parameter("observation count must be positive".into()));
    }
    if sigma < 0.0 || !sigma.is_finite() {
        return Err(Error::Parameter(format!("noise sigma {sigma} is invalid")));
    }
    if traj.len() < 2 {
        return Err(Error::Parameter(
            "trajectory too short to observe a transition".into(),
        ));
    }
    let states = traj.states();
    let last_start = traj.len() - 2;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let indices: Vec<usize> = match strategy {
        SamplingStrategy::Consecutive => {
            if last_start + 1 < m {
                return Err(Error::Parameter(format!(
                    "trajectory length {} supports at most {} consecutive observations, requested {m}",
                    traj.len(),
                    last_start + 1
                )));
            }
            (0..m).collect()
        }
        SamplingStrategy::Strided(k) => {
            if k == 0 {
                return Err(Error::Parameter("stride must be at least 1".into()));
            }
            let needed = (m - 1) * k;
            if needed > last_start {
                return Err(Error::Parameter(format!(
                    "trajectory length {} too short for {m} observations at stride {k}",
                    traj.len()
                )));
            }
            (0..m).map(|i| i * k).collect()
        }
        SamplingStrategy::UniformIndices => (0..m)
            .map(|_| rng.random_range(0..=last_start))
            .collect(),
    };

    let noise: Vec<f64> = if sigma > 0.0 {
        let normal = Normal::new(0.0, sigma)
            .map_err(|e| Error::Parameter(format!("noise sigma {sigma}: {e}")))?;
        (0..m).map(|_| normal.sample(&mut rng)).collect()
    } else {
        vec![0.0; m]
    };

    let pairs = indices
        .iter()
        .zip(&noise)
        .map(|(&j, &eta)| (states[j], states[j + 1] + eta))
        .collect();

    Ok(ObservationSet {
        pairs,
        noise_sigma: sigma,
        strategy,
        seed,
    })
}
