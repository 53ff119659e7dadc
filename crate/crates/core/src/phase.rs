//! Phase distributions: the rescaled canonical time density of a periodic
//! system, and the quasiperiodic phase construction it is compared against.

use std::f64::consts::TAU;
use std::sync::Arc;

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::bohr::{cesaro_means, density_as_series, ConvergenceReport, DEFAULT_TOL};
use crate::canonical::quasiperiodic_density;
use crate::error::{ChronosError, Result};
use crate::exact::Surd;
use crate::integrate::{cis_integral_from_zero, composite};
use crate::spectrum::{BaseFrequency, BaseSource, EnergySpectrum};
use crate::state::QuantumState;

#[derive(Clone, Debug, PartialEq)]
pub enum PhaseShape {
    Uniform,
    /// `q(theta) = (1/2pi) |sum_n c_n exp(i k_n theta)|^2` with integer harmonics `k_n`.
    Harmonic {
        amplitudes: Vec<Complex64>,
        harmonics: Vec<i64>,
    },
}

#[derive(Clone, Debug, PartialEq)]
pub enum Provenance {
    /// Rescaled from a commensurate spectrum.
    Periodic,
    /// Quasiperiodic construction with a rational frequency ratio.
    Rational(BigRational),
    /// Quasiperiodic construction with an irrational frequency ratio.
    Irrational,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PhaseDistribution {
    pub shape: PhaseShape,
    pub provenance: Provenance,
}

impl PhaseDistribution {
    pub fn uniform(provenance: Provenance) -> Self {
        PhaseDistribution {
            shape: PhaseShape::Uniform,
            provenance,
        }
    }

    pub fn is_uniform(&self) -> bool {
        self.shape == PhaseShape::Uniform
    }

    pub fn density(&self, theta: f64) -> f64 {
        match &self.shape {
            PhaseShape::Uniform => 1.0 / TAU,
            PhaseShape::Harmonic {
                amplitudes,
                harmonics,
            } => {
                let z: Complex64 = amplitudes
                    .iter()
                    .zip(harmonics)
                    .map(|(c, &k)| c * Complex64::from_polar(1.0, (k as f64 * theta) % TAU))
                    .sum();
                z.norm_sqr() / TAU
            }
        }
    }

    /// Probability of `[theta_a, theta_b]`, in closed form.
    pub fn probability(&self, theta_a: f64, theta_b: f64) -> f64 {
        let width = theta_b - theta_a;
        match &self.shape {
            PhaseShape::Uniform => width / TAU,
            PhaseShape::Harmonic {
                amplitudes,
                harmonics,
            } => {
                let mut total = Complex64::new(0.0, 0.0);
                for (cm, &km) in amplitudes.iter().zip(harmonics) {
                    for (cn, &kn) in amplitudes.iter().zip(harmonics) {
                        let k = (kn - km) as f64;
                        let start = Complex64::from_polar(1.0, (k * theta_a) % TAU);
                        total += cm.conj() * cn * start * cis_integral_from_zero(k, width);
                    }
                }
                total.re / TAU
            }
        }
    }

    /// Highest harmonic present in the density.
    pub fn bandwidth(&self) -> i64 {
        match &self.shape {
            PhaseShape::Uniform => 0,
            PhaseShape::Harmonic { harmonics, .. } => {
                let max = harmonics.iter().max().copied().unwrap_or(0);
                let min = harmonics.iter().min().copied().unwrap_or(0);
                max - min
            }
        }
    }

    /// `samples` equally spaced values on `[0, 2pi)`.
    pub fn sampled(&self, samples: usize) -> Vec<(f64, f64)> {
        (0..samples)
            .map(|i| {
                let theta = TAU * i as f64 / samples as f64;
                (theta, self.density(theta))
            })
            .collect()
    }

    /// `(1/2) int_0^{2pi} |q_1 - q_2|`, integrated piecewise between sign changes.
    pub fn total_variation(&self, other: &PhaseDistribution) -> f64 {
        let diff = |theta: f64| self.density(theta) - other.density(theta);
        let band = self.bandwidth().max(other.bandwidth()).max(1) as f64;
        let grid = (64.0 * band) as usize;
        let mut breaks = vec![0.0];
        let mut prev = diff(0.0);
        for i in 1..=grid {
            let b = TAU * i as f64 / grid as f64;
            let value = diff(b);
            if value == 0.0 {
                breaks.push(b);
            } else if prev * value < 0.0 {
                let (mut lo, mut hi) = (TAU * (i - 1) as f64 / grid as f64, b);
                for _ in 0..80 {
                    let mid = 0.5 * (lo + hi);
                    if diff(lo) * diff(mid) <= 0.0 {
                        hi = mid;
                    } else {
                        lo = mid;
                    }
                }
                breaks.push(0.5 * (lo + hi));
            }
            prev = value;
        }
        breaks.push(TAU);
        breaks.dedup();
        let width = TAU / band / 4.0;
        let total: f64 = breaks
            .windows(2)
            .map(|w| composite(w[0], w[1], width, |t| Complex64::new(diff(t), 0.0)).re.abs())
            .sum();
        0.5 * total
    }
}

/// Canonical periodic time density with time rescaled onto `[0, 2pi)`:
/// `q(theta) = (T/2pi) p_T(theta T / 2pi)`.
pub fn phase_from_periodic(state: &QuantumState) -> Result<PhaseDistribution> {
    let support = state.support();
    let structure = state.spectrum().commensurate_structure().ok_or(ChronosError::NotPeriodic)?;
    if support.len() == 1 || structure.gcd == 0 {
        return Ok(PhaseDistribution::uniform(Provenance::Periodic));
    }
    let harmonics = support.iter().map(|&n| structure.multiples[n] / structure.gcd).collect();
    let amplitudes = support.iter().map(|&n| state.amplitudes()[n]).collect();
    Ok(PhaseDistribution {
        shape: PhaseShape::Harmonic {
            amplitudes,
            harmonics,
        },
        provenance: Provenance::Periodic,
    })
}

/// The quasiperiodic phase construction assigns `(theta_b - theta_a) / 2pi`
/// to every state.
pub fn arsenovic_quasi_phase_probability(_state: &QuantumState, theta_a: f64, theta_b: f64) -> f64 {
    (theta_b - theta_a) / TAU
}

/// Cesaro magnitudes of `exp(i omega t) p(t)` over growing horizons.
#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct WashoutReport {
    pub report: ConvergenceReport,
    /// `|coefficient|` of the density term at frequency `-omega`, or 0.
    pub analytic: f64,
    /// Log-log slope of the deviation envelope against the horizon.
    pub slope: Option<f64>,
}

/// Relative tolerance for matching `omega` against a difference frequency.
const COLLISION_TOL: f64 = 1e-12;

pub fn washout_demo(state: &QuantumState, omega: f64, horizons: &[f64]) -> Result<WashoutReport> {
    if omega == 0.0 || !omega.is_finite() {
        return Err(ChronosError::InvalidArgument("omega must be nonzero and finite".into()));
    }
    if horizons.len() < 2 {
        return Err(ChronosError::InvalidArgument("at least two horizons are required".into()));
    }
    let series = density_as_series(state);
    let bases = series.bases().clone();
    let analytic = series
        .terms()
        .filter(|(label, _)| (bases.label_value(label) + omega).abs() <= COLLISION_TOL * omega.abs())
        .map(|(_, c)| *c)
        .sum::<Complex64>();
    let max_frequency = series.max_frequency() + omega.abs();
    let integrand = |t: f64| Complex64::from_polar(1.0, (omega * t) % TAU) * quasiperiodic_density(state, t);

    // dense geometric grid so the envelope sees the oscillation maxima
    let first = horizons[0];
    let last = *horizons.last().expect("two horizons");
    let per_octave = 32;
    let octaves = ((2.0 * last / first).log2() * per_octave as f64).ceil() as usize;
    let dense: Vec<f64> = (0..=octaves)
        .map(|i| first * 2f64.powf(i as f64 / per_octave as f64))
        .collect();
    let mut wanted = horizons.to_vec();
    wanted.extend(&dense);
    wanted.sort_by(f64::total_cmp);
    wanted.dedup();
    let means = cesaro_means(integrand, &wanted, max_frequency)?;

    let deviation: Vec<(f64, f64)> = wanted
        .iter()
        .zip(&means)
        .map(|(&h, m)| (h, (m - analytic).norm()))
        .collect();
    let estimates: Vec<(f64, f64)> = horizons
        .iter()
        .map(|h| {
            let i = wanted.iter().position(|w| w == h).expect("horizon kept");
            (*h, means[i].norm())
        })
        .collect();

    // envelope: max deviation over [h, 2h)
    let envelope: Vec<(f64, f64)> = horizons
        .iter()
        .map(|&h| {
            let max = deviation
                .iter()
                .filter(|(w, _)| *w >= h && *w < 2.0 * h)
                .map(|d| d.1)
                .fold(0.0, f64::max);
            (h, max)
        })
        .filter(|e| e.1 > 0.0)
        .collect();
    let slope = fit_slope(&envelope);

    let n = estimates.len();
    let (h0, m0) = estimates[n - 2];
    let (h1, m1) = estimates[n - 1];
    let bound = (m1 - m0).abs() * h0 / (h1 - h0);
    Ok(WashoutReport {
        report: ConvergenceReport {
            estimates,
            converged: bound < DEFAULT_TOL,
            final_error_bound: bound,
        },
        analytic: analytic.norm(),
        slope,
    })
}

/// Least-squares slope of `log y` against `log x`.
fn fit_slope(points: &[(f64, f64)]) -> Option<f64> {
    if points.len() < 2 {
        return None;
    }
    let n = points.len() as f64;
    let xs: Vec<f64> = points.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

/// Outcome of the three-level perturbation experiment.
#[derive(Clone, Debug, PartialEq)]
pub struct ThreeLevelReport {
    /// `(E_2 + eps - E_1) / (E_1 - E_0)` when rational.
    pub nu: Option<BigRational>,
    pub arsenovic: PhaseDistribution,
    pub canonical: PhaseDistribution,
}

impl ThreeLevelReport {
    pub fn tv_distance(&self) -> f64 {
        self.arsenovic.total_variation(&self.canonical)
    }
}

/// Tolerance on `|c0|^2 + |c1|^2 = 1`.
pub const NORMALIZATION_TOL: f64 = 1e-10;

/// The state `c0 |E_0> + c1 |E_1>` on a three-level spectrum whose upper gap is
/// perturbed by `epsilon`.
pub fn three_level_experiment(
    c0: Complex64,
    c1: Complex64,
    epsilon: &Surd,
    gaps: (&Surd, &Surd),
) -> Result<ThreeLevelReport> {
    let norm = c0.norm_sqr() + c1.norm_sqr();
    if (norm - 1.0).abs() > NORMALIZATION_TOL {
        return Err(ChronosError::InvalidArgument(format!(
            "|c0|^2 + |c1|^2 = {norm}, expected 1"
        )));
    }
    let (gap1, gap2) = gaps;
    let base = BaseFrequency::new(BaseSource::Exact(gap1.clone()))?;
    let upper = gap2 + epsilon;

    let two_level = Arc::new(EnergySpectrum::integer_levels(base.clone(), &[0, 1])?);
    let canonical = phase_from_periodic(&QuantumState::new(two_level, vec![c0, c1])?)?;

    let nu = upper.rational_ratio(gap1);
    let arsenovic = match &nu {
        None => PhaseDistribution::uniform(Provenance::Irrational),
        Some(nu) => {
            let p = nu.numer().to_i64().ok_or(ChronosError::Overflow)?;
            let q = nu.denom().to_i64().ok_or(ChronosError::Overflow)?;
            let sub = base.scaled(&BigRational::new(One::one(), q.into()))?;
            let levels = [0, q, q.checked_add(p).ok_or(ChronosError::Overflow)?];
            let spectrum = Arc::new(EnergySpectrum::integer_levels(sub, &levels)?);
            let zero = Complex64::zero();
            let state = QuantumState::new(spectrum, vec![c0, c1, zero])?;
            let mut dist = phase_from_periodic(&state)?;
            dist.provenance = Provenance::Rational(nu.clone());
            dist
        }
    };
    Ok(ThreeLevelReport {
        nu,
        arsenovic,
        canonical,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::canonical::interval_probability;
    use crate::spectrum::BaseFrequencies;
    use proptest::prelude::*;
    use std::f64::consts::{FRAC_1_SQRT_2, PI};

    fn integer_spectrum(levels: &[i64]) -> Arc<EnergySpectrum> {
        Arc::new(EnergySpectrum::integer_levels(BaseFrequency::parse("1").unwrap(), levels).unwrap())
    }

    fn sqrt2_three() -> Arc<EnergySpectrum> {
        let bases = vec![BaseFrequency::parse("1").unwrap(), BaseFrequency::parse("sqrt2").unwrap()];
        Arc::new(
            EnergySpectrum::new(
                Arc::new(BaseFrequencies::new(bases, true).unwrap()),
                vec![vec![0, 0], vec![1, 0], vec![0, 1]],
                None,
            )
            .unwrap(),
        )
    }

    fn half() -> Complex64 {
        Complex64::new(FRAC_1_SQRT_2, 0.0)
    }

    #[test]
    fn eigenstate_phase_is_uniform() {
        let psi = QuantumState::eigenstate(integer_spectrum(&[0, 2, 5]), 1).unwrap();
        let d = phase_from_periodic(&psi).unwrap();
        assert!(d.is_uniform());
        assert_eq!(d.density(1.0), 1.0 / TAU);
    }

    #[test]
    fn two_level_phase_density() {
        let psi = QuantumState::uniform_superposition(integer_spectrum(&[0, 1]));
        let d = phase_from_periodic(&psi).unwrap();
        for i in 0..40 {
            let theta = i as f64 * 0.157;
            assert!((d.density(theta) - (1.0 + theta.cos()) / TAU).abs() < 1e-15);
        }
        assert!((d.probability(0.0, TAU) - 1.0).abs() < 1e-14);
        let q = QuantumState::uniform_superposition(sqrt2_three());
        assert_eq!(phase_from_periodic(&q), Err(ChronosError::NotPeriodic));
    }

    #[test]
    fn rescaling_preserves_interval_probabilities() {
        // base 0.7: T = 2pi / 0.7 for levels with gcd 1
        let s = Arc::new(EnergySpectrum::integer_levels(BaseFrequency::parse("0.7").unwrap(), &[0, 2, 3, 7]).unwrap());
        let period = s.fundamental_period().unwrap();
        for seed in 0..10 {
            let psi = QuantumState::random(s.clone(), seed);
            let d = phase_from_periodic(&psi).unwrap();
            for &(a, b) in &[(0.0, 1.0), (0.5, 4.0), (2.0, 6.2), (0.0, TAU)] {
                let scaled = interval_probability(&psi, a * period / TAU, b * period / TAU).unwrap();
                assert!((d.probability(a, b) - scaled).abs() < 1e-13);
            }
            // density integrates to 1 by quadrature as well
            let total = composite(0.0, TAU, 0.05, |t| Complex64::new(d.density(t), 0.0)).re;
            assert!((total - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn quasi_phase_is_state_independent() {
        let s = sqrt2_three();
        let eig = QuantumState::eigenstate(s.clone(), 0).unwrap();
        let rnd = QuantumState::random(s, 3);
        assert_eq!(arsenovic_quasi_phase_probability(&eig, 0.0, TAU), 1.0);
        assert_eq!(arsenovic_quasi_phase_probability(&rnd, 0.0, PI), 0.5);
        assert_eq!(
            arsenovic_quasi_phase_probability(&eig, 0.3, 2.0),
            arsenovic_quasi_phase_probability(&rnd, 0.3, 2.0)
        );
    }

    #[test]
    fn total_variation_oracle() {
        let uniform = PhaseDistribution::uniform(Provenance::Irrational);
        assert_eq!(uniform.total_variation(&uniform), 0.0);
        for q in [1i64, 3, 7] {
            let d = PhaseDistribution {
                shape: PhaseShape::Harmonic {
                    amplitudes: vec![half(), half()],
                    harmonics: vec![0, q],
                },
                provenance: Provenance::Periodic,
            };
            // (1/2) int |cos(q theta)| / 2pi = 1/pi for every q
            let tv = d.total_variation(&uniform);
            assert!((tv - 1.0 / PI).abs() < 1e-12, "{q} {tv}");
        }
    }

    #[test]
    fn three_level_discontinuity() {
        let one = Surd::integer(1);
        let equal = three_level_experiment(half(), half(), &Surd::integer(0), (&one, &one)).unwrap();
        assert_eq!(equal.nu, Some(BigRational::one()));
        assert!(!equal.arsenovic.is_uniform());
        for i in 0..30 {
            let theta = 0.2 * i as f64;
            assert!((equal.arsenovic.density(theta) - (1.0 + theta.cos()) / TAU).abs() < 1e-15);
        }

        let irrational = three_level_experiment(half(), half(), &Surd::sqrt2(), (&one, &one)).unwrap();
        assert_eq!(irrational.nu, None);
        assert!(irrational.arsenovic.is_uniform());
        assert_eq!(irrational.arsenovic.provenance, Provenance::Irrational);

        for i in 0..100 {
            let theta = TAU * i as f64 / 100.0;
            assert_eq!(equal.canonical.density(theta), irrational.canonical.density(theta));
        }
        let tv = equal.arsenovic.total_variation(&irrational.arsenovic);
        assert!((tv - 1.0 / PI).abs() < 1e-10);
    }

    #[test]
    fn three_level_rational_perturbation() {
        // gaps (1, 1), eps = 1/2: nu = 3/2, harmonic q = 2 for the occupied pair
        let one = Surd::integer(1);
        let eps: Surd = "1/2".parse().unwrap();
        let r = three_level_experiment(half(), half(), &eps, (&one, &one)).unwrap();
        assert_eq!(r.nu, Some(BigRational::new(3.into(), 2.into())));
        let theta = 0.4;
        assert!((r.arsenovic.density(theta) - (1.0 + (2.0 * theta).cos()) / TAU).abs() < 1e-15);
        assert!(three_level_experiment(half(), Complex64::new(0.2, 0.0), &eps, (&one, &one)).is_err());
    }

    #[test]
    fn washout_decays_like_inverse_horizon() {
        let psi = QuantumState::random(sqrt2_three(), 7);
        let omega = 0.7;
        let base = TAU / omega;
        let horizons: Vec<f64> = [10.0, 30.0, 100.0, 300.0, 1000.0].iter().map(|k| k * base).collect();
        let r = washout_demo(&psi, omega, &horizons).unwrap();
        assert_eq!(r.analytic, 0.0);
        assert!(r.report.final_estimate().unwrap() < 1e-2);
        let slope = r.slope.unwrap();
        assert!((-1.3..=-0.7).contains(&slope), "{slope}");
    }

    #[test]
    fn washout_at_a_difference_frequency() {
        let psi = QuantumState::random(sqrt2_three(), 7);
        // density term at label E_0 - E_1 = -1 has coefficient conj(c_1) c_0
        let expected = (psi.amplitudes()[1].conj() * psi.amplitudes()[0]).norm();
        let horizons = [1e3, 4e3, 1.6e4];
        let r = washout_demo(&psi, 1.0, &horizons).unwrap();
        assert!((r.analytic - expected).abs() < 1e-15);
        assert!((r.report.final_estimate().unwrap() - expected).abs() < 1e-3);

        let eig = QuantumState::eigenstate(sqrt2_three(), 2).unwrap();
        let r = washout_demo(&eig, 2.5, &horizons).unwrap();
        assert_eq!(r.analytic, 0.0);
        assert!(r.report.final_estimate().unwrap() < 1e-3);
        assert!(washout_demo(&eig, 0.0, &horizons).is_err());
    }

    proptest! {
        #[test]
        fn quasi_phase_ignores_unitaries(seed in 0u64..1000, a in 0.0f64..TAU, w in 0.0f64..1.0) {
            let psi = QuantumState::random(sqrt2_three(), seed);
            let b = a + w * (TAU - a);
            let moved = psi.evolve(seed as f64 * 0.37).with_global_phase(w);
            prop_assert_eq!(
                arsenovic_quasi_phase_probability(&psi, a, b),
                arsenovic_quasi_phase_probability(&moved, a, b)
            );
        }
    }
}
