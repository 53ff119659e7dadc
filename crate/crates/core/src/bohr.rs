//! Means over the almost-periodic (Bohr) measure.
//!
//! A quasiperiodic function is stored as a finite Fourier series keyed by
//! exact [`FrequencyLabel`]s. Its Bohr mean
//! `lim (1/tau) int_0^tau f dt` is then the coefficient at the zero label,
//! read off exactly. [`bohr_mean_numeric`] computes the same limit by
//! one-sided Cesaro averaging, for cross-checks and diagnostics.

use std::collections::BTreeMap;
use std::f64::consts::TAU;
use std::sync::Arc;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{ChronosError, Result};
use crate::integrate;
use crate::precision::Turns;
use crate::spectrum::{BaseFrequencies, FrequencyLabel};
use crate::state::QuantumState;

/// Tolerance used when asserting that a series is real-valued.
pub const REALNESS_TOL: f64 = 1e-12;

/// Default Cesaro convergence tolerance.
pub const DEFAULT_TOL: f64 = 1e-3;

#[derive(Clone, Debug, PartialEq)]
pub struct FourierSeries {
    terms: BTreeMap<FrequencyLabel, Complex64>,
    bases: Arc<BaseFrequencies>,
}

impl FourierSeries {
    pub fn zero(bases: Arc<BaseFrequencies>) -> Self {
        FourierSeries {
            terms: BTreeMap::new(),
            bases,
        }
    }

    pub fn constant(bases: Arc<BaseFrequencies>, value: Complex64) -> Self {
        let mut f = Self::zero(bases);
        let dims = f.bases.len();
        f.add_term(FrequencyLabel::zero(dims), value)
            .expect("zero label has matching dims");
        f
    }

    /// `amplitude * cos(omega_L t + phase)` as two conjugate terms.
    pub fn cosine(bases: Arc<BaseFrequencies>, label: FrequencyLabel, amplitude: f64, phase: f64) -> Result<Self> {
        let mut f = Self::zero(bases);
        let c = Complex64::from_polar(0.5 * amplitude, phase);
        f.add_term(label.clone(), c)?;
        f.add_term(label.neg(), c.conj())?;
        Ok(f)
    }

    pub fn from_terms<I>(bases: Arc<BaseFrequencies>, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (FrequencyLabel, Complex64)>,
    {
        let mut f = Self::zero(bases);
        for (label, c) in terms {
            f.add_term(label, c)?;
        }
        Ok(f)
    }

    /// Accumulates `c` at `label`; entries that become exactly zero are dropped.
    pub fn add_term(&mut self, label: FrequencyLabel, c: Complex64) -> Result<()> {
        if label.dims() != self.bases.len() {
            return Err(ChronosError::InvalidArgument(format!(
                "label {label} has {} components, bases have {}",
                label.dims(),
                self.bases.len()
            )));
        }
        let entry = self.terms.entry(label).or_insert(Complex64::new(0.0, 0.0));
        *entry += c;
        self.terms.retain(|_, v| *v != Complex64::new(0.0, 0.0));
        Ok(())
    }

    pub fn bases(&self) -> &Arc<BaseFrequencies> {
        &self.bases
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&FrequencyLabel, &Complex64)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, label: &FrequencyLabel) -> Complex64 {
        self.terms.get(label).copied().unwrap_or_default()
    }

    /// `coefficient(-L) == conj(coefficient(L))` for every label, within tolerance.
    pub fn is_real(&self) -> bool {
        self.terms.iter().all(|(label, c)| {
            let mirror = self.coefficient(&label.neg());
            (mirror - c.conj()).norm() <= REALNESS_TOL * c.norm().max(1.0)
        })
    }

    /// Terms with each label converted to exact turns.
    pub fn turns_terms(&self) -> Vec<(Turns, Complex64)> {
        self.terms
            .iter()
            .map(|(label, c)| (self.bases.label_turns(label), *c))
            .collect()
    }

    /// Largest `|omega_L|` among the terms.
    pub fn max_frequency(&self) -> f64 {
        self.terms
            .keys()
            .map(|l| self.bases.label_value(l).abs())
            .fold(0.0, f64::max)
    }

    pub fn eval(&self, t: f64) -> Complex64 {
        self.terms
            .iter()
            .map(|(label, c)| c * self.bases.label_turns(label).cis(t))
            .sum()
    }
}

/// `p(t) = |sum_n c_n exp(i E_n t)|^2` as a series: `conj(c_m) c_n` at `label(E_n - E_m)`.
pub fn density_as_series(state: &QuantumState) -> FourierSeries {
    let spectrum = state.spectrum();
    let c = state.amplitudes();
    let mut f = FourierSeries::zero(spectrum.bases().clone());
    for m in 0..c.len() {
        for n in 0..c.len() {
            let label = spectrum
                .difference_label(n, m)
                .expect("indices in range; coefficients validated");
            f.add_term(label, c[m].conj() * c[n]).expect("dims match");
        }
    }
    f
}

/// Convolution of label maps.
pub fn series_product(f: &FourierSeries, g: &FourierSeries) -> Result<FourierSeries> {
    if f.bases != g.bases {
        return Err(ChronosError::MismatchedBases);
    }
    let mut out = FourierSeries::zero(f.bases.clone());
    for (lf, cf) in &f.terms {
        for (lg, cg) in &g.terms {
            out.add_term(lf.checked_add(lg)?, cf * cg)?;
        }
    }
    Ok(out)
}

/// The zero-label coefficient: the exact Bohr mean under declared independence.
pub fn bohr_mean_analytic(f: &FourierSeries) -> Complex64 {
    f.coefficient(&FrequencyLabel::zero(f.bases.len()))
}

/// `<f>_psi = mu_ap[f p]` for a real-valued `f`.
pub fn expectation(state: &QuantumState, f: &FourierSeries) -> Result<f64> {
    if !f.is_real() {
        return Err(ChronosError::NotRealValued);
    }
    let p = density_as_series(state);
    let mean = bohr_mean_analytic(&series_product(f, &p)?);
    let scale = f.terms().map(|(_, c)| c.norm()).sum::<f64>().max(1.0);
    if mean.im.abs() > REALNESS_TOL * scale {
        return Err(ChronosError::NotRealValued);
    }
    Ok(mean.re)
}

/// True when every nonzero-frequency coefficient of the density vanishes.
pub fn density_is_uniform(state: &QuantumState) -> bool {
    density_as_series(state)
        .terms()
        .all(|(label, c)| label.is_zero() || c.norm() <= 1e-14)
}

/// Geometric horizon schedule `tau_k = tau_0 * growth^k`, `k < max_steps`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct AveragingSchedule {
    pub initial_horizon: f64,
    pub growth: f64,
    pub max_steps: usize,
}

impl AveragingSchedule {
    pub fn validate(&self) -> Result<()> {
        if !(self.initial_horizon > 0.0 && self.initial_horizon.is_finite()) {
            return Err(ChronosError::InvalidArgument("initial horizon must be positive".into()));
        }
        if !(self.growth > 1.0 && self.growth.is_finite()) {
            return Err(ChronosError::InvalidArgument("growth factor must exceed 1".into()));
        }
        if self.max_steps == 0 {
            return Err(ChronosError::InvalidArgument("at least one averaging step is required".into()));
        }
        Ok(())
    }

    pub fn horizons(&self) -> Vec<f64> {
        (0..self.max_steps)
            .map(|k| self.initial_horizon * self.growth.powi(k as i32))
            .collect()
    }
}

impl Default for AveragingSchedule {
    fn default() -> Self {
        AveragingSchedule {
            initial_horizon: 100.0,
            growth: 2.0,
            max_steps: 10,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConvergenceReport {
    pub estimates: Vec<(f64, f64)>,
    pub converged: bool,
    pub final_error_bound: f64,
}

impl ConvergenceReport {
    pub fn final_estimate(&self) -> Option<f64> {
        self.estimates.last().map(|e| e.1)
    }
}

/// Panel width for a Gauss-Legendre rule that resolves frequencies up to `max_frequency`.
pub(crate) fn panel_width(max_frequency: f64, span: f64) -> f64 {
    if max_frequency > 0.0 {
        TAU / max_frequency / 4.0
    } else {
        span.max(f64::MIN_POSITIVE)
    }
}

/// One-sided Cesaro means `(1/tau) int_0^tau f dt` at each increasing horizon.
/// Integration is incremental: each new horizon only adds its own segment.
pub fn cesaro_means<F>(f: F, horizons: &[f64], max_frequency: f64) -> Result<Vec<Complex64>>
where
    F: Fn(f64) -> Complex64 + Sync,
{
    if horizons.iter().any(|&h| !(h > 0.0 && h.is_finite())) {
        return Err(ChronosError::InvalidArgument("horizons must be positive".into()));
    }
    if horizons.windows(2).any(|w| w[1] <= w[0]) {
        return Err(ChronosError::InvalidArgument("horizons must be strictly increasing".into()));
    }
    let mut integral = Complex64::new(0.0, 0.0);
    let mut reached = 0.0;
    let mut out = Vec::with_capacity(horizons.len());
    for &h in horizons {
        let width = panel_width(max_frequency, h - reached);
        integral += integrate::composite(reached, h, width, &f);
        reached = h;
        out.push(integral / h);
    }
    Ok(out)
}

/// Numeric Bohr mean. `max_frequency` bounds the angular frequencies in `f`.
/// Non-convergence is reported, not raised.
pub fn bohr_mean_numeric<F>(
    f: F,
    schedule: &AveragingSchedule,
    max_frequency: f64,
    tol: f64,
) -> Result<ConvergenceReport>
where
    F: Fn(f64) -> f64 + Sync,
{
    schedule.validate()?;
    if !(tol > 0.0) {
        return Err(ChronosError::InvalidArgument("tolerance must be positive".into()));
    }
    let mut estimates: Vec<(f64, f64)> = Vec::new();
    let mut integral = 0.0;
    let mut reached = 0.0;
    let mut converged = false;
    let mut bound = f64::INFINITY;
    for h in schedule.horizons() {
        let width = panel_width(max_frequency, h - reached);
        integral += integrate::composite(reached, h, width, |t| Complex64::new(f(t), 0.0)).re;
        reached = h;
        let value = integral / h;
        if let Some(&(_, prev)) = estimates.last() {
            let diff = (value - prev).abs();
            // a 1/tau remainder shrinks by `growth` per step
            bound = diff / (schedule.growth - 1.0);
            if diff < tol {
                converged = true;
            }
        }
        estimates.push((h, value));
        if converged {
            break;
        }
    }
    Ok(ConvergenceReport {
        estimates,
        converged,
        final_error_bound: bound,
    })
}
