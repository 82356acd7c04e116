//! Measurement-system assembly and basis covariance matrices.
//!
//! The measurement matrix has entries `G[m,n] = e^{2 pi i n x_m}` with
//! columns in ascending frequency order. The covariance matrix of the basis
//! under a sampling density `h` is Hermitian Toeplitz with entries
//! `V[j,k] = h_hat(f_j - f_k)` built from the Fourier coefficients
//! `h_hat(d) = integral e^{-2 pi i d x} h(x) dx`, so that the normalized Gram
//! `G* G / M` of density-distributed samples converges to `V` entrywise.

use std::borrow::Cow;
use std::f64::consts::TAU;
use std::io::Write;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::dynamics::{DensityEstimate, ObservationSet};
use crate::error::{Error, Result};
use crate::linalg;
use crate::trigpoly::{FrequencySet, TrigPoly};

fn unit_phasor(angle: f64) -> Complex64 {
    Complex64::new(angle.cos(), angle.sin())
}

enum Storage {
    Dense(DMatrix<Complex64>),
    /// Entries generated on the fly from the sample points.
    Implicit,
}

/// The linear system `y = G a` of observed transitions against the Fourier
/// basis.
pub struct MeasurementSystem {
    storage: Storage,
    y: Vec<f64>,
    freqs: FrequencySet,
    sample_points: Vec<f64>,
}

impl MeasurementSystem {
    /// Dense assembly from an observation set.
    pub fn build(obs: &ObservationSet, freqs: FrequencySet) -> Result<Self> {
        let (x, y): (Vec<f64>, Vec<f64>) = obs.pairs().iter().copied().unzip();
        Self::from_points(x, y, freqs)
    }

    /// Dense assembly from raw sample points and observations.
    pub fn from_points(x: Vec<f64>, y: Vec<f64>, freqs: FrequencySet) -> Result<Self> {
        let mut sys = Self::implicit_from_points(x, y, freqs)?;
        let m = sys.m();
        let n = sys.n();
        let mut g = DMatrix::zeros(m, n);
        for (col, freq) in freqs.iter().enumerate() {
            for (row, &x) in sys.sample_points.iter().enumerate() {
                g[(row, col)] = unit_phasor(TAU * freq as f64 * x);
            }
        }
        sys.storage = Storage::Dense(g);
        Ok(sys)
    }

    /// Matrix-free assembly: entries are regenerated per column request.
    /// Useful when `M * N` is too large to materialize.
    pub fn implicit_from_points(x: Vec<f64>, y: Vec<f64>, freqs: FrequencySet) -> Result<Self> {
        if x.is_empty() {
            return Err(Error::Parameter("measurement system needs samples".into()));
        }
        if x.len() != y.len() {
            return Err(Error::Parameter(format!(
                "sample points ({}) and observations ({}) differ in length",
                x.len(),
                y.len()
            )));
        }
        if x.iter().any(|v| !(0.0..1.0).contains(v)) {
            return Err(Error::Parameter(
                "sample points must lie in [0,1)".into(),
            ));
        }
        Ok(Self {
            storage: Storage::Implicit,
            y,
            freqs,
            sample_points: x,
        })
    }

    pub fn m(&self) -> usize {
        self.sample_points.len()
    }

    pub fn n(&self) -> usize {
        self.freqs.len()
    }

    pub fn freqs(&self) -> FrequencySet {
        self.freqs
    }

    pub fn y(&self) -> &[f64] {
        &self.y
    }

    pub fn sample_points(&self) -> &[f64] {
        &self.sample_points
    }

    pub fn is_dense(&self) -> bool {
        matches!(self.storage, Storage::Dense(_))
    }

    /// Column for the `col`-th frequency (ascending order). Borrows from the
    /// dense storage; generates on the fly in implicit mode.
    pub fn column(&self, col: usize) -> Cow<'_, [Complex64]> {
        match &self.storage {
            Storage::Dense(g) => {
                let m = g.nrows();
                Cow::Borrowed(&g.as_slice()[col * m..(col + 1) * m])
            }
            Storage::Implicit => {
                let freq = self.freqs.freq_at(col) as f64;
                Cow::Owned(
                    self.sample_points
                        .iter()
                        .map(|&x| unit_phasor(TAU * freq * x))
                        .collect(),
                )
            }
        }
    }

    /// `y - G a` as a complex vector.
    pub fn residual(&self, coeffs: &DVector<Complex64>) -> DVector<Complex64> {
        assert_eq!(coeffs.len(), self.n());
        let mut r = DVector::from_iterator(self.m(), self.y.iter().map(|&v| Complex64::new(v, 0.0)));
        for (col, a) in coeffs.iter().enumerate() {
            if *a != Complex64::ZERO {
                for (ri, gi) in r.iter_mut().zip(self.column(col).iter()) {
                    *ri -= gi * a;
                }
            }
        }
        r
    }

    /// Normalized Gram matrix `G* G / M`.
    ///
    /// Assembled from the structured sums `t(d) = (1/M) sum_m e^{2 pi i d x_m}`
    /// over frequency differences, which keeps the result exactly Hermitian
    /// Toeplitz with unit diagonal.
    pub fn empirical_gram(&self) -> DMatrix<Complex64> {
        let n = self.n();
        let m = self.m() as f64;
        let span = self.freqs.len(); // offsets 0 .. 2*max_freq
        let mut t = vec![Complex64::ZERO; span];
        t[0] = Complex64::new(1.0, 0.0);
        for d in 1..span {
            let mut acc = Complex64::ZERO;
            for &x in &self.sample_points {
                acc += unit_phasor(TAU * d as f64 * x);
            }
            t[d] = acc / m;
        }
        // Gram[j,k] = mean e^{2 pi i (f_k - f_j) x} = t(k - j).
        DMatrix::from_fn(n, n, |j, k| {
            if k >= j {
                t[k - j]
            } else {
                t[j - k].conj()
            }
        })
    }

    /// Diagnostics export: one-line header `M,N,freq_min,freq_max`, then the
    /// matrix row-major with interleaved real/imaginary parts.
    pub fn write_matrix_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(
            w,
            "{},{},{},{}",
            self.m(),
            self.n(),
            -self.freqs.max_freq(),
            self.freqs.max_freq()
        )?;
        let columns: Vec<Cow<'_, [Complex64]>> = (0..self.n()).map(|c| self.column(c)).collect();
        for row in 0..self.m() {
            let mut line = String::new();
            for (c, col) in columns.iter().enumerate() {
                if c > 0 {
                    line.push(',');
                }
                let z = col[row];
                line.push_str(&format!("{},{}", z.re, z.im));
            }
            writeln!(w, "{line}")?;
        }
        Ok(())
    }
}

/// Where a covariance matrix came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DensitySource {
    ExactDensity,
    Histogram,
}

/// Density specification for covariance assembly.
pub enum DensitySpec<'a> {
    /// Lebesgue measure; the covariance is the identity.
    Uniform,
    /// Closed-form density given by a Hermitian trigonometric polynomial
    /// with unit mean.
    FourierCoeffs(&'a TrigPoly),
    /// Piecewise-constant histogram density.
    Histogram(&'a DensityEstimate),
}

/// Covariance matrix `V[j,k] = <Phi_{f_k}, Phi_{f_j}>_nu` of the Fourier
/// basis under the sampling measure: Hermitian, Toeplitz, positive
/// semidefinite, unit diagonal.
pub struct CovarianceMatrix {
    v: DMatrix<Complex64>,
    source: DensitySource,
    freqs: FrequencySet,
}

impl CovarianceMatrix {
    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.v
    }

    pub fn n(&self) -> usize {
        self.v.nrows()
    }

    pub fn source(&self) -> DensitySource {
        self.source
    }

    pub fn freqs(&self) -> FrequencySet {
        self.freqs
    }

    pub fn lambda_min(&self) -> f64 {
        linalg::lambda_min_hermitian(&self.v)
    }

    /// Hermitian square root of the covariance.
    pub fn sqrt(&self) -> Result<DMatrix<Complex64>> {
        linalg::hermitian_sqrt(&self.v)
    }
}

/// Assembles the covariance matrix of the basis under the given density.
///
/// Histogram densities are integrated bin-exactly against the exponentials,
/// so the Toeplitz/PSD structure holds up to rounding. The density must be
/// nonnegative with unit mass (closed-form polynomials are grid-checked).
pub fn covariance_from_density(
    spec: &DensitySpec,
    freqs: FrequencySet,
) -> Result<CovarianceMatrix> {
    let span = freqs.len();
    let (coeffs, source) = match spec {
        DensitySpec::Uniform => {
            let mut t = vec![Complex64::ZERO; span];
            t[0] = Complex64::new(1.0, 0.0);
            (t, DensitySource::ExactDensity)
        }
        DensitySpec::FourierCoeffs(poly) => {
            if !poly.is_hermitian_within(1e-12) {
                return Err(Error::Parameter(
                    "density coefficients must be Hermitian-symmetric".into(),
                ));
            }
            let mean = poly.coeff(0).re;
            if (mean - 1.0).abs() > 1e-9 {
                return Err(Error::Parameter(format!(
                    "density integrates to {mean}, expected 1"
                )));
            }
            let grid = 4096;
            for i in 0..grid {
                let x = i as f64 / grid as f64;
                let h = poly.evaluate_real(x);
                if h < -1e-12 {
                    return Err(Error::Parameter(format!(
                        "density is negative at x = {x}: {h}"
                    )));
                }
            }
            // h_hat(d) = c_d for h = sum_k c_k e^{2 pi i k x}.
            let scale = 1.0 / mean;
            let mut t = vec![Complex64::ZERO; span];
            t[0] = Complex64::new(1.0, 0.0);
            for (d, slot) in t.iter_mut().enumerate().skip(1) {
                *slot = poly.coeff(d as i32) * scale;
            }
            (t, DensitySource::ExactDensity)
        }
        DensitySpec::Histogram(est) => {
            let total: f64 = est.masses().iter().sum();
            if (total - 1.0).abs() > 1e-9 {
                return Err(Error::Parameter(format!(
                    "histogram masses sum to {total}, expected 1"
                )));
            }
            let masses: Vec<f64> = est.masses().iter().map(|m| m / total).collect();
            let bins = masses.len();
            let mut t = vec![Complex64::ZERO; span];
            t[0] = Complex64::new(1.0, 0.0);
            for (d, slot) in t.iter_mut().enumerate().skip(1) {
                // Exact integral of h against e^{-2 pi i d x}: the density is
                // B * mass_b on bin b, and
                // int_a^b e^{-2 pi i d x} dx = (e^{-2 pi i d b} - e^{-2 pi i d a}) / (-2 pi i d).
                let omega = -TAU * d as f64;
                let denom = Complex64::new(0.0, omega);
                let mut acc = Complex64::ZERO;
                for (b, &mass) in masses.iter().enumerate() {
                    let left = b as f64 / bins as f64;
                    let right = (b + 1) as f64 / bins as f64;
                    let integral = (unit_phasor(omega * right) - unit_phasor(omega * left)) / denom;
                    acc += mass * bins as f64 * integral;
                }
                *slot = acc;
            }
            (t, DensitySource::Histogram)
        }
    };

    let n = span;
    let v = DMatrix::from_fn(n, n, |j, k| {
        if j >= k {
            coeffs[j - k]
        } else {
            coeffs[k - j].conj()
        }
    });
    Ok(CovarianceMatrix {
        v,
        source,
        freqs,
    })
}
