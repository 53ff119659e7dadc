//! Pure states in the energy eigenbasis.

use std::sync::Arc;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{ChronosError, Result};
use crate::spectrum::EnergySpectrum;

/// Normalized amplitudes `c_n` bound to a spectrum.
#[derive(Clone, Debug)]
pub struct QuantumState {
    amplitudes: Vec<Complex64>,
    spectrum: Arc<EnergySpectrum>,
}

impl QuantumState {
    /// Normalizes on construction.
    pub fn new(spectrum: Arc<EnergySpectrum>, amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.len() != spectrum.len() {
            return Err(ChronosError::DimensionMismatch {
                expected: spectrum.len(),
                got: amplitudes.len(),
            });
        }
        let norm = amplitudes.iter().map(Complex64::norm_sqr).sum::<f64>().sqrt();
        if !(norm.is_finite() && norm > 0.0) {
            return Err(ChronosError::ZeroNorm);
        }
        let amplitudes = amplitudes.into_iter().map(|c| c / norm).collect();
        Ok(QuantumState {
            amplitudes,
            spectrum,
        })
    }

    /// The energy eigenstate `|E_n>`.
    pub fn eigenstate(spectrum: Arc<EnergySpectrum>, n: usize) -> Result<Self> {
        if n >= spectrum.len() {
            return Err(ChronosError::IndexOutOfRange {
                index: n,
                levels: spectrum.len(),
            });
        }
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); spectrum.len()];
        amplitudes[n] = Complex64::new(1.0, 0.0);
        Self::new(spectrum, amplitudes)
    }

    /// Equal-weight superposition of all levels.
    pub fn uniform_superposition(spectrum: Arc<EnergySpectrum>) -> Self {
        let amplitudes = vec![Complex64::new(1.0, 0.0); spectrum.len()];
        Self::new(spectrum, amplitudes).expect("nonempty spectrum")
    }

    /// I.i.d. complex standard normal amplitudes from a seeded ChaCha8 stream, normalized.
    pub fn random(spectrum: Arc<EnergySpectrum>, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let scale = std::f64::consts::FRAC_1_SQRT_2;
        let amplitudes = (0..spectrum.len())
            .map(|_| {
                let re: f64 = StandardNormal.sample(&mut rng);
                let im: f64 = StandardNormal.sample(&mut rng);
                Complex64::new(re * scale, im * scale)
            })
            .collect();
        Self::new(spectrum, amplitudes).expect("gaussian draw is almost surely nonzero")
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn spectrum(&self) -> &Arc<EnergySpectrum> {
        &self.spectrum
    }

    pub fn len(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amplitudes.is_empty()
    }

    /// `c_n -> c_n exp(-i E_n tau)`, phases reduced in fixed point.
    pub fn evolve(&self, tau: f64) -> Self {
        let amplitudes = self
            .amplitudes
            .iter()
            .enumerate()
            .map(|(n, c)| c * self.spectrum.level_turns(n).cis(tau).conj())
            .collect();
        QuantumState {
            amplitudes,
            spectrum: self.spectrum.clone(),
        }
    }

    /// `sum_n c_n exp(i E_n t)`.
    pub fn time_amplitude(&self, t: f64) -> Complex64 {
        self.amplitudes
            .iter()
            .enumerate()
            .filter(|(_, c)| c.norm_sqr() > 0.0)
            .map(|(n, c)| c * self.spectrum.level_turns(n).cis(t))
            .sum()
    }

    /// Indices with nonzero amplitude.
    pub fn support(&self) -> Vec<usize> {
        (0..self.len()).filter(|&n| self.amplitudes[n].norm_sqr() > 0.0).collect()
    }

    /// The same state over the sub-spectrum of its support.
    pub fn restrict_to_support(&self) -> Result<Self> {
        let support = self.support();
        let sub = self.spectrum.restrict(&support)?;
        Self::new(Arc::new(sub), support.iter().map(|&n| self.amplitudes[n]).collect())
    }

    /// Same amplitudes placed on another spectrum with the same number of levels.
    pub fn with_spectrum(&self, spectrum: Arc<EnergySpectrum>) -> Result<Self> {
        Self::new(spectrum, self.amplitudes.clone())
    }

    /// Multiplies every amplitude by `exp(i alpha)`.
    pub fn with_global_phase(&self, alpha: f64) -> Self {
        let phase = Complex64::from_polar(1.0, alpha);
        QuantumState {
            amplitudes: self.amplitudes.iter().map(|c| c * phase).collect(),
            spectrum: self.spectrum.clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectrum::{BaseFrequencies, BaseFrequency};
    use proptest::prelude::*;
    use std::f64::consts::{PI, TAU};

    fn two_level() -> Arc<EnergySpectrum> {
        Arc::new(EnergySpectrum::integer_levels(BaseFrequency::parse("1").unwrap(), &[0, 1]).unwrap())
    }

    fn four_level() -> Arc<EnergySpectrum> {
        let bases = vec![BaseFrequency::parse("1").unwrap(), BaseFrequency::parse("sqrt2").unwrap()];
        Arc::new(
            EnergySpectrum::new(
                Arc::new(BaseFrequencies::new(bases, true).unwrap()),
                vec![vec![0, 0], vec![1, 0], vec![0, 1], vec![3, -1]],
                None,
            )
            .unwrap(),
        )
    }

    fn max_diff(a: &QuantumState, b: &QuantumState) -> f64 {
        a.amplitudes()
            .iter()
            .zip(b.amplitudes())
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max)
    }

    #[test]
    fn construction_normalizes_and_validates() {
        let s = QuantumState::new(two_level(), vec![Complex64::new(3.0, 0.0), Complex64::new(0.0, 4.0)]).unwrap();
        let norm: f64 = s.amplitudes().iter().map(|c| c.norm_sqr()).sum();
        assert!((norm - 1.0).abs() < 1e-15);
        assert!(QuantumState::new(two_level(), vec![Complex64::new(1.0, 0.0)]).is_err());
        assert_eq!(
            QuantumState::new(two_level(), vec![Complex64::new(0.0, 0.0); 2]).unwrap_err(),
            ChronosError::ZeroNorm
        );
    }

    #[test]
    fn evolve_identity_and_period() {
        let s = QuantumState::random(four_level(), 3);
        assert_eq!(max_diff(&s.evolve(0.0), &s), 0.0);

        let p = QuantumState::random(
            Arc::new(EnergySpectrum::integer_levels(BaseFrequency::parse("1").unwrap(), &[2, 3, 5]).unwrap()),
            9,
        );
        let back = p.evolve(TAU);
        // global phase exp(-i E_0 T) = exp(-4 pi i) = 1
        let global = Complex64::from_polar(1.0, -2.0 * TAU);
        let expected = p.with_global_phase(global.arg());
        assert!(max_diff(&back, &expected) < 1e-14);
    }

    #[test]
    fn two_level_relative_phase() {
        let s = QuantumState::uniform_superposition(two_level());
        let e = s.evolve(PI);
        let rel = e.amplitudes()[1] / e.amplitudes()[0];
        assert!((rel - Complex64::new(-1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn long_horizon_evolution_is_accurate() {
        // base pi: period 2 exactly, so t = 2e7 is an exact multiple of the period
        let spectrum = Arc::new(EnergySpectrum::integer_levels(BaseFrequency::parse("pi").unwrap(), &[0, 1, 3]).unwrap());
        let s = QuantumState::random(spectrum, 5);
        let e = s.evolve(2.0e7);
        assert!(max_diff(&e, &s) < 1e-14);
        // naive binary64 phases drift visibly at this horizon
        let naive: f64 = (3.0 * PI * 2.0e7).sin().abs();
        assert!(naive > 1e-10);
    }

    #[test]
    fn random_states_are_deterministic() {
        let a = QuantumState::random(four_level(), 42);
        let b = QuantumState::random(four_level(), 42);
        let c = QuantumState::random(four_level(), 43);
        assert_eq!(a.amplitudes(), b.amplitudes());
        assert_ne!(a.amplitudes(), c.amplitudes());
        let norm: f64 = a.amplitudes().iter().map(|c| c.norm_sqr()).sum();
        assert!((norm - 1.0).abs() < 1e-12);
    }

    #[test]
    fn restriction_keeps_support() {
        let spectrum = four_level();
        let s = QuantumState::new(
            spectrum,
            vec![
                Complex64::new(0.6, 0.0),
                Complex64::new(0.0, 0.8),
                Complex64::new(0.0, 0.0),
                Complex64::new(0.0, 0.0),
            ],
        )
        .unwrap();
        let r = s.restrict_to_support().unwrap();
        assert_eq!(r.len(), 2);
        assert!(r.spectrum().is_commensurate());
    }

    proptest! {
        // taus on a dyadic grid so tau1 + tau2 is exact in binary64
        #[test]
        fn evolution_composes(seed in 0u64..1000, k1 in -(1i64 << 40)..(1i64 << 40), k2 in -(1i64 << 40)..(1i64 << 40)) {
            let scale = 2f64.powi(-20);
            let (t1, t2) = (k1 as f64 * scale, k2 as f64 * scale);
            let s = QuantumState::random(four_level(), seed);
            let a = s.evolve(t1).evolve(t2);
            let b = s.evolve(t1 + t2);
            prop_assert!(max_diff(&a, &b) < 1e-12);
            for (x, y) in s.amplitudes().iter().zip(a.amplitudes()) {
                prop_assert!((x.norm() - y.norm()).abs() < 1e-14);
            }
        }
    }
}
