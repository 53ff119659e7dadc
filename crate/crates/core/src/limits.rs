//! Quasiperiodic expectations as limits of periodic ones.

use rayon::prelude::*;
use serde::Serialize;

use crate::bohr::{expectation, FourierSeries};
use num_complex::Complex64;

use crate::canonical::average_terms;
use crate::error::{ChronosError, Result};
use crate::precision::Turns;
use crate::spectrum::{ApproximantSequence, ApproximantStep};
use crate::state::QuantumState;

/// `f_k(t) = f(t mod T_k)`.
#[derive(Clone, Debug)]
pub struct Periodized {
    f: FourierSeries,
    period: f64,
    turns: Turns,
}

pub fn periodize(f: &FourierSeries, period: f64) -> Result<Periodized> {
    if !(period > 0.0 && period.is_finite()) {
        return Err(ChronosError::InvalidArgument("period must be positive".into()));
    }
    Ok(Periodized {
        f: f.clone(),
        period,
        turns: Turns::from_period(period),
    })
}

impl Periodized {
    pub fn period(&self) -> f64 {
        self.period
    }

    /// `t mod T` in `[0, T)`, reduced in fixed point.
    pub fn reduce(&self, t: f64) -> f64 {
        (self.turns.phase_fraction(t) * self.period).min(self.period.next_down())
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.f.eval(self.reduce(t)).re
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LimitEntry {
    pub k: usize,
    pub period: f64,
    pub denominator: i64,
    pub expectation: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LimitTrace {
    pub entries: Vec<LimitEntry>,
    pub target: f64,
}

impl LimitTrace {
    pub fn errors(&self) -> Vec<f64> {
        self.entries.iter().map(|e| (e.expectation - self.target).abs()).collect()
    }
}

/// Degeneracy sector of each level: levels that coincide on an approximant
/// spectrum are numbered `0, 1, ...` in index order.
fn sectors(step: &ApproximantStep) -> Vec<usize> {
    let spectrum = &step.spectrum;
    (0..spectrum.len())
        .map(|n| (0..n).filter(|&m| spectrum.coefficients(m) == spectrum.coefficients(n)).count())
        .collect()
}

/// Density terms on the k-th approximant. Coherences are kept only between
/// levels of the same degeneracy sector.
fn approximant_terms(state: &QuantumState, step: &ApproximantStep) -> Vec<(Turns, Complex64)> {
    let sector = sectors(step);
    let c = state.amplitudes();
    let mut terms = Vec::new();
    for m in 0..c.len() {
        for n in 0..c.len() {
            if sector[m] == sector[n] {
                terms.push((step.spectrum.difference_turns(n, m), c[m].conj() * c[n]));
            }
        }
    }
    terms
}

/// `sum_r |sum_{n in r} c_n exp(i E_n^(k) t)|^2`, the k-th periodic density
/// times `T_k`, evaluated directly.
pub fn approximant_density(state: &QuantumState, step: &ApproximantStep, t: f64) -> f64 {
    let sector = sectors(step);
    let count = sector.iter().max().map_or(0, |m| m + 1);
    (0..count)
        .map(|r| {
            (0..state.len())
                .filter(|&n| sector[n] == r)
                .map(|n| state.amplitudes()[n] * step.spectrum.level_turns(n).cis(t))
                .sum::<Complex64>()
                .norm_sqr()
        })
        .sum()
}

/// `(1/T_k) int_0^{T_k} f(t) p_k(t) dt` for every approximant `k` (1-based),
/// with `p_k` the density of the same amplitudes on the k-th periodic spectrum.
pub fn expectation_sequence(
    state: &QuantumState,
    f: &FourierSeries,
    approximants: &ApproximantSequence,
) -> Result<LimitTrace> {
    if approximants.target != **state.spectrum() {
        return Err(ChronosError::ForeignApproximants);
    }
    if f.bases() != state.spectrum().bases() {
        return Err(ChronosError::MismatchedBases);
    }
    let target = expectation(state, f)?;
    let f_terms = f.turns_terms();
    let entries = approximants
        .steps
        .par_iter()
        .enumerate()
        .map(|(i, step)| {
            let density = approximant_terms(state, step);
            let value = average_terms(&density, &f_terms, 0.0, step.period);
            LimitEntry {
                k: i + 1,
                period: step.period,
                denominator: step.denominator,
                expectation: value.re,
            }
        })
        .collect();
    Ok(LimitTrace { entries, target })
}
