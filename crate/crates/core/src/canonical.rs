//! The canonical time ("age") observable.
//!
//! For a state `sum_n c_n |E_n>` the quasiperiodic density is
//! `p(t) = |sum_n c_n exp(i E_n t)|^2`; on a commensurate spectrum with period
//! `T` the periodic density is `p(t) / T`, normalized over any window of
//! length `T`. The matching POVM elements are the rank-one matrices
//! `exp(-i (E_m - E_n) t)`, scaled by `1/T` in the periodic case.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bohr::FourierSeries;
use crate::error::{ChronosError, Result};
use crate::integrate::cis_integral;
use crate::precision::Turns;
use crate::spectrum::EnergySpectrum;
use crate::state::QuantumState;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DensityKind {
    Periodic,
    Quasiperiodic,
}

fn period_of(spectrum: &EnergySpectrum) -> Result<f64> {
    match spectrum.fundamental_period() {
        Err(ChronosError::NoFinitePeriod) => Err(ChronosError::NotPeriodic),
        other => other,
    }
}

/// `|sum_n c_n exp(i E_n t)|^2`.
pub fn quasiperiodic_density(state: &QuantumState, t: f64) -> f64 {
    state.time_amplitude(t).norm_sqr()
}

/// `(1/T) |sum_n c_n exp(i E_n t)|^2`.
pub fn periodic_density(state: &QuantumState, t: f64) -> Result<f64> {
    let period = period_of(state.spectrum())?;
    Ok(quasiperiodic_density(state, t) / period)
}

/// A POVM density element at one time point.
#[derive(Clone, Debug)]
pub struct PovmElement {
    pub matrix: DMatrix<Complex64>,
    pub time: f64,
    pub scaled_by_inverse_period: bool,
}

impl PovmElement {
    /// `<psi| A |psi>`.
    pub fn expectation(&self, state: &QuantumState) -> f64 {
        let c = nalgebra::DVector::from_column_slice(state.amplitudes());
        (c.adjoint() * &self.matrix * &c)[(0, 0)].re
    }

    pub fn hermiticity_defect(&self) -> f64 {
        (&self.matrix - self.matrix.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Eigenvalues, ascending.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut ev: Vec<f64> = self.matrix.clone().symmetric_eigenvalues().iter().copied().collect();
        ev.sort_by(f64::total_cmp);
        ev
    }
}

/// `A_t` (periodic) or `M_t` (quasiperiodic): entry `(m, n) = exp(-i (E_m - E_n) t)`.
pub fn povm_element(spectrum: &EnergySpectrum, t: f64, kind: DensityKind) -> Result<PovmElement> {
    let scale = match kind {
        DensityKind::Periodic => 1.0 / period_of(spectrum)?,
        DensityKind::Quasiperiodic => 1.0,
    };
    let n = spectrum.len();
    let matrix = DMatrix::from_fn(n, n, |m, k| {
        if m == k {
            Complex64::new(scale, 0.0)
        } else {
            spectrum.difference_turns(m, k).cis(t).conj() * scale
        }
    });
    Ok(PovmElement {
        matrix,
        time: t,
        scaled_by_inverse_period: kind == DensityKind::Periodic,
    })
}

/// `int_{t_a}^{t_b} A_t dt`, the operator assigned to an outcome interval.
pub fn interval_operator(spectrum: &EnergySpectrum, t_a: f64, t_b: f64) -> Result<DMatrix<Complex64>> {
    let period = period_of(spectrum)?;
    check_interval(t_a, t_b, period)?;
    let n = spectrum.len();
    Ok(DMatrix::from_fn(n, n, |m, k| {
        // entry (m, k) integrates exp(-i (E_m - E_k) t) = exp(i (E_k - E_m) t)
        cis_integral(&spectrum.difference_turns(k, m), t_a, t_b) / period
    }))
}

fn check_interval(t_a: f64, t_b: f64, period: f64) -> Result<()> {
    let width = t_b - t_a;
    if !(width >= 0.0) {
        return Err(ChronosError::InvalidArgument(format!("interval [{t_a}, {t_b}] is reversed")));
    }
    if width > period * (1.0 + 1e-12) {
        return Err(ChronosError::InvalidArgument(format!(
            "interval of length {width} exceeds the period {period}"
        )));
    }
    Ok(())
}

/// Off-diagonal and diagonal density terms `(freq(E_n - E_m), conj(c_m) c_n)`.
pub(crate) fn density_terms(state: &QuantumState) -> Vec<(Turns, Complex64)> {
    let spectrum = state.spectrum();
    let support = state.support();
    let c = state.amplitudes();
    let mut terms = Vec::with_capacity(support.len() * support.len());
    for &m in &support {
        for &n in &support {
            let freq = if m == n { Turns::zero() } else { spectrum.difference_turns(n, m) };
            terms.push((freq, c[m].conj() * c[n]));
        }
    }
    terms
}

/// Closed-form probability of an outcome in `[t_a, t_b]` for the periodic observable.
pub fn interval_probability(state: &QuantumState, t_a: f64, t_b: f64) -> Result<f64> {
    let period = period_of(state.spectrum())?;
    check_interval(t_a, t_b, period)?;
    let total: Complex64 = density_terms(state)
        .iter()
        .map(|(freq, c)| c * cis_integral(freq, t_a, t_b))
        .sum();
    Ok((total.re / period).clamp(0.0, 1.0))
}

/// `(1/(t1 - t0)) int_{t0}^{t1} f(t) p(t) dt` for `f = sum_k f_k exp(i w_k t)`,
/// integrating every product term in closed form.
pub fn average_product(state: &QuantumState, f_terms: &[(Turns, Complex64)], t0: f64, t1: f64) -> Complex64 {
    average_terms(&density_terms(state), f_terms, t0, t1)
}

/// Closed-form average of the product of two exponential sums over `[t0, t1]`.
pub(crate) fn average_terms(
    density: &[(Turns, Complex64)],
    f_terms: &[(Turns, Complex64)],
    t0: f64,
    t1: f64,
) -> Complex64 {
    let mut total = Complex64::new(0.0, 0.0);
    for (fw, fc) in f_terms {
        for (dw, dc) in density {
            total += fc * dc * cis_integral(&(fw + dw), t0, t1);
        }
    }
    total / (t1 - t0)
}

/// `int_0^T f(t) p_T(t) dt` on a commensurate spectrum.
pub fn periodic_expectation(state: &QuantumState, f: &FourierSeries) -> Result<f64> {
    if f.bases() != state.spectrum().bases() {
        return Err(ChronosError::MismatchedBases);
    }
    if !f.is_real() {
        return Err(ChronosError::NotRealValued);
    }
    let period = period_of(state.spectrum())?;
    Ok(average_product(state, &f.turns_terms(), 0.0, period).re)
}

/// Density samples on a uniform grid.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DensityTrace {
    pub times: Vec<f64>,
    pub values: Vec<f64>,
    pub kind: DensityKind,
    pub period: Option<f64>,
}

impl DensityTrace {
    /// `max - min` of the samples within `tol`.
    pub fn is_constant(&self, tol: f64) -> bool {
        let max = self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let min = self.values.iter().copied().fold(f64::INFINITY, f64::min);
        max - min <= tol
    }
}

/// Periodic when the spectrum has a finite period, else quasiperiodic.
pub fn natural_kind(spectrum: &EnergySpectrum) -> DensityKind {
    if spectrum.fundamental_period().is_ok() {
        DensityKind::Periodic
    } else {
        DensityKind::Quasiperiodic
    }
}

pub fn density_trace(state: &QuantumState, t_start: f64, t_end: f64, samples: usize) -> Result<DensityTrace> {
    density_trace_with_kind(state, t_start, t_end, samples, natural_kind(state.spectrum()))
}

pub fn density_trace_with_kind(
    state: &QuantumState,
    t_start: f64,
    t_end: f64,
    samples: usize,
    kind: DensityKind,
) -> Result<DensityTrace> {
    if samples < 2 {
        return Err(ChronosError::InvalidArgument("at least two samples are required".into()));
    }
    if !(t_end > t_start) {
        return Err(ChronosError::InvalidArgument("t_end must exceed t_start".into()));
    }
    let period = match kind {
        DensityKind::Periodic => Some(period_of(state.spectrum())?),
        DensityKind::Quasiperiodic => None,
    };
    let step = (t_end - t_start) / (samples - 1) as f64;
    let times: Vec<f64> = (0..samples)
        .map(|i| if i + 1 == samples { t_end } else { t_start + i as f64 * step })
        .collect();
    let scale = period.map_or(1.0, |t| 1.0 / t);
    let values = times
        .par_iter()
        .map(|&t| (quasiperiodic_density(state, t) * scale).max(0.0))
        .collect();
    Ok(DensityTrace {
        times,
        values,
        kind,
        period,
    })
}
