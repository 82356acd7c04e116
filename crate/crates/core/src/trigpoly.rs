//! Sparse trigonometric polynomials on the circle.
//!
//! A map is represented by its nonzero Fourier coefficients over the
//! symmetric frequency set {-N_max, ..., N_max}. Real-valued maps satisfy
//! Hermitian symmetry `a(-n) = conj(a(n))`; circle-map validity additionally
//! requires the range to stay inside the open unit interval.

use std::collections::BTreeMap;
use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Symmetric set of integer frequencies {-N_max, ..., N_max}.
///
/// The column count of every measurement system built on this set is
/// `N = 2 * N_max + 1`, with columns ordered by ascending frequency.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrequencySet {
    max_freq: u32,
}

impl FrequencySet {
    pub fn new(max_freq: u32) -> Result<Self> {
        if max_freq == 0 {
            return Err(Error::Parameter("max_freq must be positive".into()));
        }
        Ok(Self { max_freq })
    }

    pub fn max_freq(&self) -> i32 {
        self.max_freq as i32
    }

    /// Number of frequencies, `2 * N_max + 1`.
    pub fn len(&self) -> usize {
        2 * self.max_freq as usize + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Frequencies in ascending order.
    pub fn iter(&self) -> impl Iterator<Item = i32> {
        -(self.max_freq as i32)..=self.max_freq as i32
    }

    pub fn contains(&self, n: i32) -> bool {
        n.unsigned_abs() <= self.max_freq
    }

    /// Column index of frequency `n` in ascending order.
    pub fn index_of(&self, n: i32) -> Option<usize> {
        self.contains(n)
            .then(|| (n + self.max_freq as i32) as usize)
    }

    /// Frequency at column index `idx`.
    pub fn freq_at(&self, idx: usize) -> i32 {
        assert!(idx < self.len());
        idx as i32 - self.max_freq as i32
    }
}

/// Verdict of a circle-map range check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MapValidity {
    /// Every grid point landed strictly inside (0,1). Records whether the
    /// sufficient analytic bound `|a0 - 1/2| + sum_{n!=0} |a_n| < 1/2`
    /// also holds.
    Valid { analytic_bound_holds: bool },
    /// First grid point whose value left (0,1).
    RangeViolation { x: f64, value: f64 },
}

impl MapValidity {
    pub fn is_valid(&self) -> bool {
        matches!(self, MapValidity::Valid { .. })
    }
}

/// Sparse trigonometric polynomial `f(x) = sum_n a_n e^{2 pi i n x}`.
///
/// Coefficients are stored sparsely; absent frequencies are zero. Dense
/// expansion happens only at matrix-assembly time.
#[derive(Debug, Clone, PartialEq)]
pub struct TrigPoly {
    freqs: FrequencySet,
    coeffs: BTreeMap<i32, Complex64>,
}

impl TrigPoly {
    pub fn new(freqs: FrequencySet) -> Self {
        Self {
            freqs,
            coeffs: BTreeMap::new(),
        }
    }

    /// Builds from `(frequency, coefficient)` pairs. Exact zeros are dropped.
    pub fn from_coeffs<I>(freqs: FrequencySet, coeffs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (i32, Complex64)>,
    {
        let mut poly = Self::new(freqs);
        for (n, c) in coeffs {
            poly.set_coeff(n, c)?;
        }
        Ok(poly)
    }

    pub fn freqs(&self) -> FrequencySet {
        self.freqs
    }

    pub fn coeff(&self, n: i32) -> Complex64 {
        self.coeffs.get(&n).copied().unwrap_or(Complex64::ZERO)
    }

    pub fn set_coeff(&mut self, n: i32, c: Complex64) -> Result<()> {
        if !self.freqs.contains(n) {
            return Err(Error::Parameter(format!(
                "frequency {n} outside the set [-{0}, {0}]",
                self.freqs.max_freq()
            )));
        }
        if c == Complex64::ZERO {
            self.coeffs.remove(&n);
        } else {
            self.coeffs.insert(n, c);
        }
        Ok(())
    }

    /// Stored nonzero coefficients in ascending frequency order.
    pub fn iter(&self) -> impl Iterator<Item = (i32, Complex64)> + '_ {
        self.coeffs.iter().map(|(&n, &c)| (n, c))
    }

    /// Support of the coefficient vector, ascending.
    pub fn support(&self) -> Vec<i32> {
        self.coeffs.keys().copied().collect()
    }

    /// `||a||_0`, the number of stored nonzero coefficients.
    pub fn sparsity(&self) -> usize {
        self.coeffs.len()
    }

    /// Dense coefficient vector in ascending frequency order (length N).
    pub fn coeff_vector(&self) -> Vec<Complex64> {
        self.freqs.iter().map(|n| self.coeff(n)).collect()
    }

    /// `sum_n a_n e^{2 pi i n x}`.
    ///
    /// The real part is the map value when the polynomial is
    /// Hermitian-symmetric; the imaginary part then stays below
    /// `10 * eps * ||a||_1`.
    pub fn evaluate(&self, x: f64) -> Complex64 {
        let mut acc = Complex64::ZERO;
        for (&n, &c) in &self.coeffs {
            let angle = TAU * (n as f64) * x;
            acc += c * Complex64::new(angle.cos(), angle.sin());
        }
        acc
    }

    pub fn evaluate_real(&self, x: f64) -> f64 {
        self.evaluate(x).re
    }

    /// Exact Hermitian symmetry: `a(-n) == conj(a(n))` for all stored
    /// frequencies and `Im a(0) == 0`.
    pub fn is_hermitian(&self) -> bool {
        self.is_hermitian_within(0.0)
    }

    pub fn is_hermitian_within(&self, tol: f64) -> bool {
        self.coeffs.iter().all(|(&n, &c)| {
            let mirrored = self.coeff(-n).conj();
            (c - mirrored).norm() <= tol
        })
    }

    /// Wiener-algebra norm `||a||_1 = sum_n |a_n|`.
    pub fn wiener_norm(&self) -> f64 {
        self.coeffs.values().map(|c| c.norm()).sum()
    }

    /// Projects onto the Hermitian-symmetric subspace:
    /// `b(n) = (a(n) + conj(a(-n))) / 2`. Idempotent; the output is
    /// exactly symmetric.
    pub fn hermitian_symmetrize(&self) -> TrigPoly {
        let mut out = TrigPoly::new(self.freqs);
        for &n in self.coeffs.keys() {
            if out.coeffs.contains_key(&n) || out.coeffs.contains_key(&-n) {
                continue;
            }
            if n == 0 {
                let re = self.coeff(0).re;
                if re != 0.0 {
                    out.coeffs.insert(0, Complex64::new(re, 0.0));
                }
            } else {
                let b = (self.coeff(n) + self.coeff(-n).conj()) * 0.5;
                if b != Complex64::ZERO {
                    out.coeffs.insert(n, b);
                    out.coeffs.insert(-n, b.conj());
                }
            }
        }
        out
    }

    /// Checks `0 < f(x) < 1` on an equispaced grid, plus the sufficient
    /// analytic bound `|a0 - 1/2| + sum_{n!=0} |a_n| < 1/2`. The grid check
    /// is the binding verdict; the analytic flag is informational.
    ///
    /// Expects a Hermitian-symmetric polynomial (the real part is checked).
    pub fn validate_circle_map(&self, grid_points: usize) -> MapValidity {
        let grid = grid_points.max(1);
        for i in 0..grid {
            let x = i as f64 / grid as f64;
            let value = self.evaluate_real(x);
            if value <= 0.0 || value >= 1.0 {
                return MapValidity::RangeViolation { x, value };
            }
        }
        let off_dc: f64 = self
            .coeffs
            .iter()
            .filter(|(&n, _)| n != 0)
            .map(|(_, c)| c.norm())
            .sum();
        let analytic_bound_holds = (self.coeff(0).re - 0.5).abs() + off_dc < 0.5;
        MapValidity::Valid {
            analytic_bound_holds,
        }
    }

    /// JSON schema `{"max_freq": N, "coeffs": [[n, re, im], ...]}` with
    /// frequencies ascending.
    pub fn to_json_string(&self) -> String {
        serde_json::to_string(&TrigPolyJson::from(self)).expect("trig poly serializes")
    }

    /// Parses the JSON schema. With `require_real`, non-Hermitian data is
    /// rejected (tolerance `1e-12` per coefficient).
    pub fn from_json_str(s: &str, require_real: bool) -> Result<Self> {
        let raw: TrigPolyJson =
            serde_json::from_str(s).map_err(|e| Error::Format(format!("trig poly json: {e}")))?;
        let freqs = FrequencySet::new(raw.max_freq)?;
        let mut poly = TrigPoly::new(freqs);
        for &(n, re, im) in &raw.coeffs {
            if poly.coeffs.contains_key(&n) {
                return Err(Error::Format(format!("duplicate frequency {n}")));
            }
            poly.set_coeff(n, Complex64::new(re, im))
                .map_err(|e| Error::Format(e.to_string()))?;
        }
        if require_real && !poly.is_hermitian_within(1e-12) {
            return Err(Error::Format(
                "coefficients are not Hermitian-symmetric but the real-valued flag is set".into(),
            ));
        }
        Ok(poly)
    }
}

impl Serialize for TrigPoly {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        TrigPolyJson::from(self).serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for TrigPoly {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as DeError;
        let raw = TrigPolyJson::deserialize(deserializer)?;
        let freqs = FrequencySet::new(raw.max_freq).map_err(D::Error::custom)?;
        let mut poly = TrigPoly::new(freqs);
        for &(n, re, im) in &raw.coeffs {
            if poly.coeffs.contains_key(&n) {
                return Err(D::Error::custom(format!("duplicate frequency {n}")));
            }
            poly.set_coeff(n, Complex64::new(re, im))
                .map_err(D::Error::custom)?;
        }
        Ok(poly)
    }
}

#[derive(Serialize, Deserialize)]
struct TrigPolyJson {
    max_freq: u32,
    coeffs: Vec<(i32, f64, f64)>,
}

impl From<&TrigPoly> for TrigPolyJson {
    fn from(poly: &TrigPoly) -> Self {
        Self {
            max_freq: poly.freqs.max_freq() as u32,
            coeffs: poly.iter().map(|(n, c)| (n, c.re, c.im)).collect(),
        }
    }
}

/// Draws a Hermitian-symmetric circle map with exactly `s` nonzero
/// coefficients: the DC term pinned to `dc_value` plus `(s-1)/2` conjugate
/// pairs whose moduli sum to `amplitude_budget`.
///
/// Requiring `amplitude_budget < min(dc_value, 1 - dc_value)` makes the
/// analytic range bound hold by construction, so the generated map always
/// passes `validate_circle_map`. Deterministic given the seed.
pub fn random_sparse_map(
    s: usize,
    freqs: FrequencySet,
    dc_value: f64,
    amplitude_budget: f64,
    seed: u64,
) -> Result<TrigPoly> {
    if s == 0 {
        return Err(Error::Parameter("sparsity must be at least 1".into()));
    }
    if !(0.0 < dc_value && dc_value < 1.0) {
        return Err(Error::Parameter(format!(
            "dc_value {dc_value} must lie in (0,1)"
        )));
    }
    let headroom = dc_value.min(1.0 - dc_value);
    if !(0.0..headroom).contains(&amplitude_budget) {
        return Err(Error::Parameter(format!(
            "amplitude_budget {amplitude_budget} must lie in [0, {headroom})"
        )));
    }
    if s % 2 == 0 {
        return Err(Error::Parameter(format!(
            "sparsity {s} is even, but the DC term is forced and conjugate pairs cost 2"
        )));
    }
    let pairs = (s - 1) / 2;
    if pairs > freqs.max_freq() as usize {
        return Err(Error::Parameter(format!(
            "sparsity {s} needs {pairs} distinct positive frequencies but max_freq is {}",
            freqs.max_freq()
        )));
    }
    if pairs > 0 && amplitude_budget == 0.0 {
        return Err(Error::Parameter(
            "zero amplitude budget cannot support nonzero conjugate pairs".into(),
        ));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut poly = TrigPoly::new(freqs);
    poly.set_coeff(0, Complex64::new(dc_value, 0.0))?;

    if pairs > 0 {
        let mut chosen: Vec<i32> = sample(&mut rng, freqs.max_freq() as usize, pairs)
            .iter()
            .map(|i| i as i32 + 1)
            .collect();
        chosen.sort_unstable();

        // Bounded-ratio weights (each in [1/2, 3/2] before normalization),
        // so no pair ends up with a negligible amplitude.
        let weights: Vec<f64> = (0..pairs)
            .map(|_| 0.5 + rng.random::<f64>())
            .collect();
        let total: f64 = weights.iter().sum();
        let mut moduli: Vec<f64> = weights
            .iter()
            .map(|w| 0.5 * amplitude_budget * w / total)
            .collect();
        let realized: f64 = moduli.iter().map(|r| 2.0 * r).sum();
        if realized > amplitude_budget {
            let scale = amplitude_budget / realized;
            for r in &mut moduli {
                *r *= scale;
            }
        }

        for (&n, &r) in chosen.iter().zip(&moduli) {
            debug_assert!(r > 0.0);
            let phase = rng.random_range(0.0..TAU);
            let c = Complex64::from_polar(r, phase);
            poly.set_coeff(n, c)?;
            poly.set_coeff(-n, c.conj())?;
        }
    }

    debug_assert_eq!(poly.sparsity(), s);
    debug_assert!(poly.is_hermitian());
    Ok(poly)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn cosine_map(dc: f64, half_amp: f64) -> TrigPoly {
        // dc + 2*half_amp*cos(2 pi x)
        let freqs = FrequencySet::new(1).unwrap();
        TrigPoly::from_coeffs(
            freqs,
            [(0, c(dc, 0.0)), (1, c(half_amp, 0.0)), (-1, c(half_amp, 0.0))],
        )
        .unwrap()
    }

    #[test]
    fn frequency_set_layout() {
        let f = FrequencySet::new(3).unwrap();
        assert_eq!(f.len(), 7);
        assert_eq!(f.iter().collect::<Vec<_>>(), vec![-3, -2, -1, 0, 1, 2, 3]);
        assert_eq!(f.index_of(-3), Some(0));
        assert_eq!(f.index_of(0), Some(3));
        assert_eq!(f.index_of(3), Some(6));
        assert_eq!(f.index_of(4), None);
        assert_eq!(f.freq_at(6), 3);
        assert!(FrequencySet::new(0).is_err());
    }

    #[test]
    fn evaluate_constant() {
        let freqs = FrequencySet::new(1).unwrap();
        let p = TrigPoly::from_coeffs(freqs, [(0, c(0.5, 0.0))]).unwrap();
        assert_abs_diff_eq!(p.evaluate(0.7).re, 0.5);
        assert_abs_diff_eq!(p.evaluate(0.7).im, 0.0);
    }

    #[test]
    fn evaluate_cosine_zero_and_peak() {
        let p = cosine_map(0.5, 0.2);
        // cos(pi/2) = 0 at x = 0.25
        assert_abs_diff_eq!(p.evaluate(0.25).re, 0.5, epsilon = 1e-15);
        // cos(0) = 1 at x = 0
        assert_abs_diff_eq!(p.evaluate(0.0).re, 0.9, epsilon = 1e-15);
    }

    #[test]
    fn symmetrize_averaging() {
        let freqs = FrequencySet::new(1).unwrap();
        let p = TrigPoly::from_coeffs(freqs, [(1, c(0.0, 1.0))]).unwrap();
        let sym = p.hermitian_symmetrize();
        assert_eq!(sym.coeff(1), c(0.0, 0.5));
        assert_eq!(sym.coeff(-1), c(0.0, -0.5));
        assert!(sym.is_hermitian());
    }

    #[test]
    fn symmetrize_fixed_point_and_dc() {
        let p = cosine_map(0.5, 0.2);
        assert_eq!(p.hermitian_symmetrize(), p);

        let freqs = FrequencySet::new(1).unwrap();
        let q = TrigPoly::from_coeffs(freqs, [(0, c(1.0, 1.0))]).unwrap();
        assert_eq!(q.hermitian_symmetrize().coeff(0), c(1.0, 0.0));
    }

    #[test]
    fn wiener_norm_examples() {
        assert_abs_diff_eq!(cosine_map(0.5, 0.2).wiener_norm(), 0.9, epsilon = 1e-15);
        let freqs = FrequencySet::new(2).unwrap();
        assert_eq!(TrigPoly::new(freqs).wiener_norm(), 0.0);
        let p = TrigPoly::from_coeffs(freqs, [(2, c(3.0, 4.0))]).unwrap();
        assert_abs_diff_eq!(p.wiener_norm(), 5.0);
    }

    #[test]
    fn validate_within_range() {
        let verdict = cosine_map(0.5, 0.2).validate_circle_map(1024);
        assert_eq!(
            verdict,
            MapValidity::Valid {
                analytic_bound_holds: true
            }
        );
    }

    #[test]
    fn validate_range_violation_at_peak() {
        // 0.5 + 0.6 cos(2 pi x) exceeds 1 near x = 0.
        match cosine_map(0.5, 0.3).validate_circle_map(1024) {
            MapValidity::RangeViolation { x, value } => {
                assert_eq!(x, 0.0);
                assert_abs_diff_eq!(value, 1.1, epsilon = 1e-12);
            }
            v => panic!("expected violation, got {v:?}"),
        }
    }

    #[test]
    fn validate_constant_above_one() {
        let freqs = FrequencySet::new(1).unwrap();
        let p = TrigPoly::from_coeffs(freqs, [(0, c(1.2, 0.0))]).unwrap();
        match p.validate_circle_map(8) {
            MapValidity::RangeViolation { value, .. } => assert_eq!(value, 1.2),
            v => panic!("expected violation, got {v:?}"),
        }
    }

    #[test]
    fn generator_dc_only() {
        let freqs = FrequencySet::new(4).unwrap();
        let p = random_sparse_map(1, freqs, 0.5, 0.0, 3).unwrap();
        assert_eq!(p.sparsity(), 1);
        assert_eq!(p.coeff(0), c(0.5, 0.0));
    }

    #[test]
    fn generator_invariants_hold() {
        let freqs = FrequencySet::new(5).unwrap();
        let p = random_sparse_map(3, freqs, 0.5, 0.4, 7).unwrap();
        assert_eq!(p.sparsity(), 3);
        assert_eq!(p.coeff(0), c(0.5, 0.0));
        assert!(p.is_hermitian());
        let off_dc: f64 = p
            .iter()
            .filter(|&(n, _)| n != 0)
            .map(|(_, v)| v.norm())
            .sum();
        assert!(off_dc <= 0.4 + 1e-15);
        assert!(p.validate_circle_map(4096).is_valid());
        // deterministic
        assert_eq!(p, random_sparse_map(3, freqs, 0.5, 0.4, 7).unwrap());
    }

    #[test]
    fn generator_rejects_infeasible() {
        let freqs = FrequencySet::new(5).unwrap();
        assert!(random_sparse_map(3, freqs, 0.5, 0.6, 1).is_err());
        assert!(random_sparse_map(2, freqs, 0.5, 0.3, 1).is_err());
        assert!(random_sparse_map(13, freqs, 0.5, 0.3, 1).is_err());
        assert!(random_sparse_map(3, freqs, 0.5, 0.0, 1).is_err());
        assert!(random_sparse_map(1, freqs, 1.2, 0.0, 1).is_err());
    }

    #[test]
    fn json_round_trip_and_rejection() {
        let p = cosine_map(0.5, 0.2);
        let s = p.to_json_string();
        assert_eq!(
            s,
            r#"{"max_freq":1,"coeffs":[[-1,0.2,0.0],[0,0.5,0.0],[1,0.2,0.0]]}"#
        );
        let q = TrigPoly::from_json_str(&s, true).unwrap();
        assert_eq!(p, q);

        let bad = r#"{"max_freq":1,"coeffs":[[1,0.2,0.1]]}"#;
        assert!(TrigPoly::from_json_str(bad, true).is_err());
        assert!(TrigPoly::from_json_str(bad, false).is_ok());

        let dup = r#"{"max_freq":1,"coeffs":[[1,0.2,0.0],[1,0.3,0.0]]}"#;
        assert!(TrigPoly::from_json_str(dup, false).is_err());
        let out_of_range = r#"{"max_freq":1,"coeffs":[[2,0.2,0.0]]}"#;
        assert!(TrigPoly::from_json_str(out_of_range, false).is_err());
    }

    fn arb_coeffs(max_freq: u32) -> impl Strategy<Value = Vec<(i32, f64, f64)>> {
        let n = max_freq as i32;
        prop::collection::vec(
            (-n..=n, -1.0f64..1.0, -1.0f64..1.0),
            0..(2 * max_freq as usize + 1),
        )
        .prop_map(|v| {
            let mut seen = std::collections::BTreeMap::new();
            for (n, re, im) in v {
                seen.insert(n, (n, re, im));
            }
            seen.into_values().collect()
        })
    }

    proptest! {
        #[test]
        fn symmetrized_polys_evaluate_real(coeffs in arb_coeffs(6), x in 0.0f64..1.0) {
            let freqs = FrequencySet::new(6).unwrap();
            let p = TrigPoly::from_coeffs(
                freqs,
                coeffs.into_iter().map(|(n, re, im)| (n, c(re, im))),
            )
            .unwrap()
            .hermitian_symmetrize();
            let bound = 10.0 * f64::EPSILON * p.wiener_norm();
            prop_assert!(p.evaluate(x).im.abs() <= bound);
        }

        #[test]
        fn symmetrize_is_idempotent(coeffs in arb_coeffs(6)) {
            let freqs = FrequencySet::new(6).unwrap();
            let p = TrigPoly::from_coeffs(
                freqs,
                coeffs.into_iter().map(|(n, re, im)| (n, c(re, im))),
            )
            .unwrap();
            let once = p.hermitian_symmetrize();
            prop_assert!(once.is_hermitian());
            prop_assert_eq!(once.hermitian_symmetrize(), once);
        }

        #[test]
        fn wiener_norm_is_a_norm(a in arb_coeffs(4), b in arb_coeffs(4), gamma in -3.0f64..3.0) {
            let freqs = FrequencySet::new(4).unwrap();
            let pa = TrigPoly::from_coeffs(freqs, a.iter().map(|&(n, re, im)| (n, c(re, im)))).unwrap();
            let pb = TrigPoly::from_coeffs(freqs, b.iter().map(|&(n, re, im)| (n, c(re, im)))).unwrap();
            let sum = TrigPoly::from_coeffs(
                freqs,
                freqs.iter().map(|n| (n, pa.coeff(n) + pb.coeff(n))),
            )
            .unwrap();
            prop_assert!(sum.wiener_norm() <= pa.wiener_norm() + pb.wiener_norm() + 1e-12);
            let scaled = TrigPoly::from_coeffs(
                freqs,
                freqs.iter().map(|n| (n, pa.coeff(n) * gamma)),
            )
            .unwrap();
            prop_assert!((scaled.wiener_norm() - gamma.abs() * pa.wiener_norm()).abs() <= 1e-12);
        }

        #[test]
        fn analytic_bound_implies_grid_pass(
            coeffs in arb_coeffs(5),
            grid in 1usize..2048,
        ) {
            let freqs = FrequencySet::new(5).unwrap();
            let p = TrigPoly::from_coeffs(
                freqs,
                coeffs.into_iter().map(|(n, re, im)| (n, c(re, im))),
            )
            .unwrap()
            .hermitian_symmetrize();
            let off_dc: f64 = p.iter().filter(|&(n, _)| n != 0).map(|(_, v)| v.norm()).sum();
            if (p.coeff(0).re - 0.5).abs() + off_dc < 0.5 {
                prop_assert!(p.validate_circle_map(grid).is_valid());
            }
        }

        #[test]
        fn evaluate_is_periodic_on_dyadics(k in 0u32..1024, shift in 1i32..4) {
            // x and x + integer shift are the same circle point; dyadic x keeps
            // the shifted argument exactly representable.
            let freqs = FrequencySet::new(5).unwrap();
            let p = random_sparse_map(5, freqs, 0.4, 0.3, 11).unwrap();
            let x = k as f64 / 1024.0;
            let wrapped = (x + shift as f64) - shift as f64;
            prop_assert_eq!(p.evaluate(x), p.evaluate(wrapped));
        }
    }
}
