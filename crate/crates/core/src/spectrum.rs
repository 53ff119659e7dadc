//! Discrete energy spectra over declared base frequencies.
//!
//! A level is an integer coefficient vector over a set of base angular
//! frequencies (`hbar = 1`), so every energy difference carries an exact
//! [`FrequencyLabel`]. Commensurability, fundamental periods and the
//! continued-fraction approximants are all decided on those integers; base
//! values are never compared as floats.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{ChronosError, Result};
use crate::exact::{parse_rational, Surd};
use crate::precision::{pi_fixed, Turns};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum BaseSource {
    /// A value in `Q(sqrt2, sqrt5)`.
    Exact(Surd),
    /// A rational multiple of pi.
    Pi(BigRational),
}

impl fmt::Display for BaseSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BaseSource::Exact(s) => write!(f, "{s}"),
            BaseSource::Pi(r) if r.is_one() => write!(f, "pi"),
            BaseSource::Pi(r) => write!(f, "{r}*pi"),
        }
    }
}

/// One positive base angular frequency, kept exactly and in fixed point.
#[derive(Clone, Debug)]
pub struct BaseFrequency {
    source: BaseSource,
    value: f64,
    fixed: BigInt,
    turns: Turns,
}

impl PartialEq for BaseFrequency {
    fn eq(&self, other: &Self) -> bool {
        self.source == other.source
    }
}

impl Eq for BaseFrequency {}

impl BaseFrequency {
    pub fn new(source: BaseSource) -> Result<Self> {
        let (value, fixed) = match &source {
            BaseSource::Exact(s) => (s.to_f64(), s.to_fixed()),
            BaseSource::Pi(r) => (
                r.to_f64().unwrap_or(f64::NAN) * std::f64::consts::PI,
                (r.numer() * pi_fixed()) / r.denom(),
            ),
        };
        if !(value.is_finite() && value > 0.0) || !fixed.is_positive() {
            return Err(ChronosError::InvalidSpectrum(format!(
                "base frequency {source} must be positive and finite"
            )));
        }
        let turns = match &source {
            BaseSource::Pi(r) => {
                // pi * r / 2pi = r / 2
                let num = r.numer() << crate::precision::FRAC_BITS;
                Turns::from_raw(num / (r.denom() * 2))
            }
            BaseSource::Exact(_) => Turns::from_angular_fixed(&fixed),
        };
        Ok(BaseFrequency {
            source,
            value,
            fixed,
            turns,
        })
    }

    /// Parses `pi`, `<coef>*pi`, a decimal, `p/q`, or a `sqrt2`/`golden` expression.
    pub fn parse(token: &str) -> Result<Self> {
        let compact: String = token.chars().filter(|c| !c.is_whitespace()).collect();
        let source = if compact == "pi" {
            BaseSource::Pi(BigRational::one())
        } else if let Some(coef) = compact.strip_suffix("*pi") {
            BaseSource::Pi(parse_rational(coef)?)
        } else {
            BaseSource::Exact(compact.parse()?)
        };
        Self::new(source)
    }

    pub fn source(&self) -> &BaseSource {
        &self.source
    }

    pub fn value(&self) -> f64 {
        self.value
    }

    pub fn turns(&self) -> &Turns {
        &self.turns
    }

    /// This frequency multiplied by an exact positive rational.
    pub fn scaled(&self, factor: &BigRational) -> Result<Self> {
        let source = match &self.source {
            BaseSource::Exact(s) => BaseSource::Exact(s.scale(factor)),
            BaseSource::Pi(r) => BaseSource::Pi(r * factor),
        };
        Self::new(source)
    }
}

/// Exact knowledge of a ratio of two base frequencies.
#[derive(Clone, Debug, PartialEq)]
pub enum Ratio {
    Rational(BigRational),
    /// The true ratio lies strictly inside `(lo, hi)`.
    Bracket(BigRational, BigRational),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BaseFrequencies {
    values: Vec<BaseFrequency>,
    declared_independent: bool,
}

impl BaseFrequencies {
    /// More than one base requires `declared_independent`, since relations
    /// among base values are never inferred.
    pub fn new(values: Vec<BaseFrequency>, declared_independent: bool) -> Result<Self> {
        if values.is_empty() {
            return Err(ChronosError::InvalidSpectrum("at least one base frequency is required".into()));
        }
        if values.len() > 1 && !declared_independent {
            return Err(ChronosError::InvalidSpectrum(
                "several bases must be declared rationally independent".into(),
            ));
        }
        Ok(BaseFrequencies {
            values,
            declared_independent,
        })
    }

    pub fn single(base: BaseFrequency) -> Self {
        BaseFrequencies {
            values: vec![base],
            declared_independent: true,
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn declared_independent(&self) -> bool {
        self.declared_independent
    }

    pub fn get(&self, j: usize) -> &BaseFrequency {
        &self.values[j]
    }

    pub fn iter(&self) -> impl Iterator<Item = &BaseFrequency> {
        self.values.iter()
    }

    pub fn values(&self) -> Vec<f64> {
        self.values.iter().map(BaseFrequency::value).collect()
    }

    pub fn label_turns(&self, label: &FrequencyLabel) -> Turns {
        let mut acc = Turns::zero();
        for (k, base) in label.0.iter().zip(&self.values) {
            if *k != 0 {
                acc = &acc + &base.turns.scale(*k);
            }
        }
        acc
    }

    /// Real angular frequency of a label.
    pub fn label_value(&self, label: &FrequencyLabel) -> f64 {
        self.label_turns(label).angular()
    }

    /// `values[j] / values[i]`, exactly when possible.
    pub fn ratio(&self, j: usize, i: usize) -> Ratio {
        let (a, b) = (&self.values[j], &self.values[i]);
        match (&a.source, &b.source) {
            (BaseSource::Exact(x), BaseSource::Exact(y)) => {
                if let Some(r) = x.rational_ratio(y) {
                    return Ratio::Rational(r);
                }
            }
            (BaseSource::Pi(x), BaseSource::Pi(y)) => return Ratio::Rational(x / y),
            _ => {}
        }
        // both fixed images are within a few units of the truth
        let margin = BigInt::from(8);
        let lo = BigRational::new(&a.fixed - &margin, &b.fixed + &margin);
        let hi = BigRational::new(&a.fixed + &margin, &b.fixed - &margin);
        Ratio::Bracket(lo, hi)
    }
}

/// Integer coefficient vector of a frequency over the base frequencies.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FrequencyLabel(pub Vec<i64>);

impl FrequencyLabel {
    pub fn zero(dims: usize) -> Self {
        FrequencyLabel(vec![0; dims])
    }

    pub fn dims(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    pub fn neg(&self) -> Self {
        FrequencyLabel(self.0.iter().map(|x| -x).collect())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_add(*b).ok_or(ChronosError::Overflow))
            .collect::<Result<Vec<_>>>()
            .map(FrequencyLabel)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_sub(*b).ok_or(ChronosError::Overflow))
            .collect::<Result<Vec<_>>>()
            .map(FrequencyLabel)
    }
}

impl fmt::Display for FrequencyLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

/// Rank-one structure of a commensurate spectrum: `row_n - row_0 = multiples[n] * unit`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Commensurate {
    pub unit: FrequencyLabel,
    pub multiples: Vec<i64>,
    pub gcd: i64,
}

#[derive(Clone, Debug)]
pub struct EnergySpectrum {
    bases: Arc<BaseFrequencies>,
    coefficients: Vec<FrequencyLabel>,
    labels: Vec<String>,
    level_turns: Vec<Turns>,
    level_values: Vec<f64>,
}

impl PartialEq for EnergySpectrum {
    fn eq(&self, other: &Self) -> bool {
        self.bases == other.bases && self.coefficients == other.coefficients
    }
}

impl EnergySpectrum {
    pub fn new(
        bases: Arc<BaseFrequencies>,
        coefficients: Vec<Vec<i64>>,
        labels: Option<Vec<String>>,
    ) -> Result<Self> {
        let spectrum = Self::build(bases, coefficients, labels)?;
        for (i, a) in spectrum.coefficients.iter().enumerate() {
            if spectrum.coefficients[..i].contains(a) {
                return Err(ChronosError::InvalidSpectrum(format!(
                    "level {i} repeats coefficients {a}; degenerate spectra are not supported"
                )));
            }
        }
        Ok(spectrum)
    }

    /// Same checks as [`EnergySpectrum::new`] except that coincident levels are
    /// allowed. Approximant spectra may merge levels at coarse convergents.
    fn build(
        bases: Arc<BaseFrequencies>,
        coefficients: Vec<Vec<i64>>,
        labels: Option<Vec<String>>,
    ) -> Result<Self> {
        if coefficients.is_empty() {
            return Err(ChronosError::InvalidSpectrum("at least one level is required".into()));
        }
        let dims = bases.len();
        if let Some(bad) = coefficients.iter().position(|row| row.len() != dims) {
            return Err(ChronosError::InvalidSpectrum(format!(
                "level {bad} has {} coefficients, expected {dims}",
                coefficients[bad].len()
            )));
        }
        let labels = match labels {
            Some(l) if l.len() != coefficients.len() => {
                return Err(ChronosError::InvalidSpectrum(format!(
                    "{} labels for {} levels",
                    l.len(),
                    coefficients.len()
                )))
            }
            Some(l) => l,
            None => (0..coefficients.len()).map(|n| format!("E{n}")).collect(),
        };
        let coefficients: Vec<FrequencyLabel> = coefficients.into_iter().map(FrequencyLabel).collect();
        let level_turns: Vec<Turns> = coefficients.iter().map(|a| bases.label_turns(a)).collect();
        let level_values = level_turns.iter().map(Turns::angular).collect();
        Ok(EnergySpectrum {
            bases,
            coefficients,
            labels,
            level_turns,
            level_values,
        })
    }

    /// Single-base spectrum with integer levels `levels[n] * base`.
    pub fn integer_levels(base: BaseFrequency, levels: &[i64]) -> Result<Self> {
        Self::new(
            Arc::new(BaseFrequencies::single(base)),
            levels.iter().map(|&k| vec![k]).collect(),
            None,
        )
    }

    pub fn len(&self) -> usize {
        self.coefficients.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coefficients.is_empty()
    }

    pub fn dims(&self) -> usize {
        self.bases.len()
    }

    pub fn bases(&self) -> &Arc<BaseFrequencies> {
        &self.bases
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn coefficients(&self, n: usize) -> &FrequencyLabel {
        &self.coefficients[n]
    }

    pub fn energy(&self, n: usize) -> f64 {
        self.level_values[n]
    }

    pub fn energies(&self) -> &[f64] {
        &self.level_values
    }

    pub fn level_turns(&self, n: usize) -> &Turns {
        &self.level_turns[n]
    }

    fn check_index(&self, index: usize) -> Result<()> {
        if index >= self.len() {
            Err(ChronosError::IndexOutOfRange {
                index,
                levels: self.len(),
            })
        } else {
            Ok(())
        }
    }

    /// Exact label of `E_m - E_n`.
    pub fn difference_label(&self, m: usize, n: usize) -> Result<FrequencyLabel> {
        self.check_index(m)?;
        self.check_index(n)?;
        self.coefficients[m].checked_sub(&self.coefficients[n])
    }

    /// Turns of `E_m - E_n`, from the integer difference.
    pub fn difference_turns(&self, m: usize, n: usize) -> Turns {
        let label = FrequencyLabel(
            self.coefficients[m]
                .0
                .iter()
                .zip(&self.coefficients[n].0)
                .map(|(a, b)| a - b)
                .collect(),
        );
        self.bases.label_turns(&label)
    }

    /// Rank-one decomposition of the difference lattice, if it exists.
    pub fn commensurate_structure(&self) -> Option<Commensurate> {
        let origin = &self.coefficients[0];
        let diffs: Vec<Vec<i64>> = self
            .coefficients
            .iter()
            .map(|row| row.0.iter().zip(&origin.0).map(|(a, b)| a - b).collect())
            .collect();
        let Some(first) = diffs.iter().find(|d| d.iter().any(|&x| x != 0)) else {
            return Some(Commensurate {
                unit: FrequencyLabel::zero(self.dims()),
                multiples: vec![0; self.len()],
                gcd: 0,
            });
        };
        let g = first.iter().fold(0i64, |acc, &x| acc.gcd(&x));
        let mut unit: Vec<i64> = first.iter().map(|x| x / g).collect();
        if self.bases.label_turns(&FrequencyLabel(unit.clone())).signum() < 0 {
            unit.iter_mut().for_each(|x| *x = -*x);
        }
        let pivot = unit.iter().position(|&x| x != 0)?;
        let mut multiples = Vec::with_capacity(self.len());
        for d in &diffs {
            if d[pivot] % unit[pivot] != 0 {
                return None;
            }
            let k = d[pivot] / unit[pivot];
            if d.iter().zip(&unit).any(|(x, u)| *x != k * u) {
                return None;
            }
            multiples.push(k);
        }
        let gcd = multiples.iter().fold(0i64, |acc, &k| acc.gcd(&k));
        Some(Commensurate {
            unit: FrequencyLabel(unit),
            multiples,
            gcd,
        })
    }

    pub fn is_commensurate(&self) -> bool {
        self.dims() == 1 || self.commensurate_structure().is_some()
    }

    /// Turns of the fundamental angular frequency `2pi / T`.
    pub fn fundamental_turns(&self) -> Result<Turns> {
        let structure = self.commensurate_structure().ok_or(ChronosError::NoFinitePeriod)?;
        if structure.gcd == 0 {
            return Err(ChronosError::UndefinedPeriod);
        }
        Ok(self.bases.label_turns(&structure.unit).scale(structure.gcd))
    }

    /// Minimal period `T = 2pi / (g * beta)` of a commensurate spectrum.
    pub fn fundamental_period(&self) -> Result<f64> {
        Ok(1.0 / self.fundamental_turns()?.to_f64())
    }

    /// The sub-spectrum made of the given levels, over the same bases.
    pub fn restrict(&self, levels: &[usize]) -> Result<Self> {
        for &n in levels {
            self.check_index(n)?;
        }
        Self::new(
            self.bases.clone(),
            levels.iter().map(|&n| self.coefficients[n].0.clone()).collect(),
            Some(levels.iter().map(|&n| self.labels[n].clone()).collect()),
        )
    }

    /// Periodic approximants from the continued fraction of `beta_2 / beta_1`.
    pub fn rational_approximants(&self, depth: usize) -> Result<ApproximantSequence> {
        if depth < 1 {
            return Err(ChronosError::InvalidArgument("depth must be at least 1".into()));
        }
        if self.dims() != 2 {
            return Err(ChronosError::InvalidArgument(format!(
                "approximants need exactly two base frequencies, got {}",
                self.dims()
            )));
        }
        if self.is_commensurate() {
            return Err(ChronosError::InvalidArgument(
                "spectrum is already commensurate".into(),
            ));
        }
        let convergents = convergents(&self.bases.ratio(1, 0), depth)?;
        let base = self.bases.get(0);
        let mut steps = Vec::with_capacity(depth);
        for (p, q) in convergents {
            let coefficients = self
                .coefficients
                .iter()
                .map(|a| {
                    a.0[0]
                        .checked_mul(q)
                        .and_then(|x| a.0[1].checked_mul(p).and_then(|y| x.checked_add(y)))
                        .map(|c| vec![c])
                        .ok_or(ChronosError::Overflow)
                })
                .collect::<Result<Vec<_>>>()?;
            let sub_base = base.scaled(&BigRational::new(BigInt::one(), BigInt::from(q)))?;
            let spectrum = Self::build(
                Arc::new(BaseFrequencies::single(sub_base)),
                coefficients,
                Some(self.labels.clone()),
            )?;
            let period = match spectrum.fundamental_period() {
                Ok(t) => t,
                // every level merged: fall back to the lattice period of the base
                Err(ChronosError::UndefinedPeriod) => 1.0 / spectrum.bases.get(0).turns().to_f64(),
                Err(e) => return Err(e),
            };
            steps.push(ApproximantStep {
                spectrum,
                period,
                numerator: p,
                denominator: q,
            });
        }
        Ok(ApproximantSequence {
            target: self.clone(),
            steps,
        })
    }
}

#[derive(Clone, Debug)]
pub struct ApproximantStep {
    pub spectrum: EnergySpectrum,
    pub period: f64,
    pub numerator: i64,
    pub denominator: i64,
}

#[derive(Clone, Debug)]
pub struct ApproximantSequence {
    pub target: EnergySpectrum,
    pub steps: Vec<ApproximantStep>,
}

/// First `depth` continued-fraction convergents `p_k / q_k` of a ratio.
///
/// A rational ratio repeats its final convergent once the expansion ends.
/// A bracketed ratio fails when the bracket no longer pins a partial quotient.
pub fn convergents(ratio: &Ratio, depth: usize) -> Result<Vec<(i64, i64)>> {
    let (mut lo, mut hi) = match ratio {
        Ratio::Rational(r) => (r.clone(), r.clone()),
        Ratio::Bracket(lo, hi) => (lo.clone(), hi.clone()),
    };
    let exact = lo == hi;
    let (mut p_prev, mut q_prev) = (BigInt::one(), BigInt::zero());
    let (mut p_prev2, mut q_prev2) = (BigInt::zero(), BigInt::one());
    let mut out = Vec::with_capacity(depth);
    let mut finished = false;
    while out.len() < depth {
        if finished {
            let last = *out.last().expect("at least one convergent");
            out.push(last);
            continue;
        }
        let a = lo.floor();
        if !exact && hi.floor() != a {
            return Err(ChronosError::PrecisionExhausted(out.len() + 1));
        }
        let a_int = a.to_integer();
        let p = &a_int * &p_prev + &p_prev2;
        let q = &a_int * &q_prev + &q_prev2;
        let (Some(pi), Some(qi)) = (p.to_i64(), q.to_i64()) else {
            return Err(ChronosError::PrecisionExhausted(out.len() + 1));
        };
        out.push((pi, qi));
        p_prev2 = std::mem::replace(&mut p_prev, p);
        q_prev2 = std::mem::replace(&mut q_prev, q);
        let lo_frac = &lo - &a;
        let hi_frac = &hi - &a;
        if exact {
            if lo_frac.is_zero() {
                finished = true;
            } else {
                lo = lo_frac.recip();
                hi = lo.clone();
            }
        } else {
            if lo_frac.is_zero() || hi_frac.is_zero() {
                return Err(ChronosError::PrecisionExhausted(out.len() + 1));
            }
            // reciprocal flips the bracket
            let new_lo = hi_frac.recip();
            hi = lo_frac.recip();
            lo = new_lo;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spectrum(bases: &[&str], levels: &[&[i64]]) -> EnergySpectrum {
        let b: Vec<_> = bases.iter().map(|s| BaseFrequency::parse(s).unwrap()).collect();
        EnergySpectrum::new(
            Arc::new(BaseFrequencies::new(b, true).unwrap()),
            levels.iter().map(|r| r.to_vec()).collect(),
            None,
        )
        .unwrap()
    }

    #[test]
    fn difference_labels() {
        let s = spectrum(&["1"], &[&[0], &[1]]);
        assert!(s.difference_label(1, 1).unwrap().is_zero());
        let l = s.difference_label(1, 0).unwrap();
        assert_eq!(l.0, vec![1]);
        assert!((s.bases().label_value(&l) - 1.0).abs() < 1e-15);

        let s = spectrum(&["1", "sqrt2"], &[&[0, 0], &[1, 0], &[0, 1]]);
        let l = s.difference_label(2, 1).unwrap();
        assert_eq!(l.0, vec![-1, 1]);
        assert!((s.bases().label_value(&l) - (2f64.sqrt() - 1.0)).abs() < 1e-15);
        assert_eq!(
            s.difference_label(3, 0),
            Err(ChronosError::IndexOutOfRange { index: 3, levels: 3 })
        );
    }

    #[test]
    fn commensurability() {
        assert!(spectrum(&["1"], &[&[0], &[3], &[7]]).is_commensurate());
        assert!(!spectrum(&["1", "sqrt2"], &[&[0, 0], &[1, 0], &[0, 1]]).is_commensurate());
        assert!(spectrum(&["1", "sqrt2"], &[&[0, 0], &[2, 0], &[5, 0]]).is_commensurate());
        // a mixed direction used consistently is still rank one
        assert!(spectrum(&["1", "sqrt2"], &[&[1, 1], &[3, 3], &[0, 0]]).is_commensurate());
        // two levels are always commensurate
        assert!(spectrum(&["1", "sqrt2"], &[&[1, 1], &[2, 3]]).is_commensurate());
    }

    #[test]
    fn periods() {
        use std::f64::consts::{PI, TAU};
        let t = spectrum(&["1"], &[&[0], &[1], &[2]]).fundamental_period().unwrap();
        assert!((t - TAU).abs() < 1e-14);
        let t = spectrum(&["1"], &[&[0], &[2], &[4]]).fundamental_period().unwrap();
        assert!((t - PI).abs() < 1e-14);
        let t = spectrum(&["0.75"], &[&[4], &[9]]).fundamental_period().unwrap();
        assert!((t - TAU / 3.75).abs() < 1e-14);
        let t = spectrum(&["1", "sqrt2"], &[&[0, 0], &[0, 2], &[0, 5]])
            .fundamental_period()
            .unwrap();
        assert!((t - TAU / 2f64.sqrt()).abs() < 1e-14);
        assert_eq!(
            spectrum(&["1", "sqrt2"], &[&[0, 0], &[1, 0], &[0, 1]]).fundamental_period(),
            Err(ChronosError::NoFinitePeriod)
        );
        assert_eq!(
            spectrum(&["1"], &[&[4]]).fundamental_period(),
            Err(ChronosError::UndefinedPeriod)
        );
    }

    #[test]
    fn rejects_degenerate_and_malformed() {
        let b = Arc::new(BaseFrequencies::single(BaseFrequency::parse("1").unwrap()));
        assert!(EnergySpectrum::new(b.clone(), vec![vec![1], vec![1]], None).is_err());
        assert!(EnergySpectrum::new(b.clone(), vec![], None).is_err());
        assert!(EnergySpectrum::new(b.clone(), vec![vec![1, 2]], None).is_err());
        assert!(EnergySpectrum::new(b, vec![vec![1]], Some(vec![])).is_err());
        assert!(BaseFrequency::parse("-1").is_err());
        assert!(BaseFrequency::parse("0").is_err());
        let two = vec![BaseFrequency::parse("1").unwrap(), BaseFrequency::parse("sqrt2").unwrap()];
        assert!(BaseFrequencies::new(two, false).is_err());
    }

    /// Independent convergent oracle: brute-force best approximations by
    /// scanning denominators, which for a quadratic irrational produces the
    /// convergents as the record-setting `|q x - p|` values.
    fn best_approximation_records(x: f64, max_q: i64) -> Vec<(i64, i64)> {
        let mut records = Vec::new();
        let mut best = f64::INFINITY;
        for q in 1..=max_q {
            let p = (q as f64 * x).round() as i64;
            let err = (q as f64 * x - p as f64).abs();
            if err < best {
                best = err;
                records.push((p, q));
            }
        }
        records
    }

    #[test]
    fn sqrt2_and_golden_convergents() {
        let s = spectrum(&["1", "sqrt2"], &[&[0, 0], &[1, 0], &[0, 1]]);
        let seq = s.rational_approximants(4).unwrap();
        let got: Vec<_> = seq.steps.iter().map(|s| (s.numerator, s.denominator)).collect();
        assert_eq!(got, vec![(1, 1), (3, 2), (7, 5), (17, 12)]);
        let oracle = best_approximation_records(2f64.sqrt(), 12);
        assert_eq!(oracle, got);

        let s = spectrum(&["1", "golden"], &[&[0, 0], &[1, 0], &[0, 1]]);
        let seq = s.rational_approximants(4).unwrap();
        let got: Vec<_> = seq.steps.iter().map(|s| (s.numerator, s.denominator)).collect();
        assert_eq!(got, vec![(1, 1), (2, 1), (3, 2), (5, 3)]);
    }

    #[test]
    fn deep_convergents_stay_exact() {
        let s = spectrum(&["1", "sqrt2"], &[&[0, 0], &[1, 0], &[0, 1]]);
        let seq = s.rational_approximants(40).unwrap();
        // Pell recurrence for sqrt2 convergents
        let (mut p, mut q) = (1i64, 1i64);
        for step in &seq.steps {
            assert_eq!((step.numerator, step.denominator), (p, q));
            let (np, nq) = (p + 2 * q, p + q);
            p = np;
            q = nq;
        }
    }

    #[test]
    fn pi_ratio_brackets() {
        let s = spectrum(&["1", "pi"], &[&[0, 0], &[1, 0], &[0, 1]]);
        let seq = s.rational_approximants(5).unwrap();
        let got: Vec<_> = seq.steps.iter().map(|s| (s.numerator, s.denominator)).collect();
        assert_eq!(got, vec![(3, 1), (22, 7), (333, 106), (355, 113), (103993, 33102)]);
    }

    #[test]
    fn approximant_error_bound_and_periods() {
        let s = spectrum(&["1.3", "1.3*sqrt2"], &[&[0, 0], &[1, 0], &[0, 1], &[2, -1]]);
        let seq = s.rational_approximants(9).unwrap();
        let beta1 = 1.3;
        for k in 0..seq.steps.len() - 1 {
            let step = &seq.steps[k];
            let q_next = seq.steps[k + 1].denominator as f64;
            for n in 0..s.len() {
                let a2 = s.coefficients(n).0[1].abs() as f64;
                let err = (step.spectrum.energy(n) - s.energy(n)).abs();
                let bound = a2 * beta1 / (step.denominator as f64 * q_next);
                assert!(err <= bound * (1.0 + 1e-9) + 1e-14, "k={k} n={n} {err} > {bound}");
            }
            if k > 0 {
                assert!(seq.steps[k].period > seq.steps[k - 1].period);
            }
        }
        // even-indexed errors decrease monotonically
        for n in 0..s.len() {
            let errs: Vec<f64> = seq
                .steps
                .iter()
                .step_by(2)
                .map(|st| (st.spectrum.energy(n) - s.energy(n)).abs())
                .collect();
            assert!(errs.windows(2).all(|w| w[1] <= w[0] + 1e-15));
        }
    }

    #[test]
    fn rational_target_is_recovered_exactly() {
        // a (false) independence declaration on rationally related bases
        let s = spectrum(&["1", "1.5"], &[&[0, 0], &[1, 0], &[0, 1]]);
        let seq = s.rational_approximants(4).unwrap();
        let got: Vec<_> = seq.steps.iter().map(|s| (s.numerator, s.denominator)).collect();
        assert_eq!(got, vec![(1, 1), (3, 2), (3, 2), (3, 2)]);
        for n in 0..3 {
            assert!((seq.steps[1].spectrum.energy(n) - s.energy(n)).abs() < 1e-15);
        }
    }

    #[test]
    fn approximant_errors() {
        let s = spectrum(&["1", "sqrt2"], &[&[0, 0], &[1, 0], &[0, 1]]);
        assert!(s.rational_approximants(0).is_err());
        let c = spectrum(&["1", "sqrt2"], &[&[0, 0], &[2, 0]]);
        assert!(c.rational_approximants(3).is_err());
        let one = spectrum(&["1"], &[&[0], &[1]]);
        assert!(one.rational_approximants(3).is_err());
    }
}
