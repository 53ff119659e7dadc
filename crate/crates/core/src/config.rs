//! JSON documents for spectra, states and Fourier terms.

use std::path::Path;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::bohr::FourierSeries;
use crate::error::{ChronosError, Result};
use crate::spectrum::{BaseFrequencies, BaseFrequency, EnergySpectrum, FrequencyLabel};
use crate::state::QuantumState;

/// A base given either as a JSON number or as a token such as `"sqrt2"`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum BaseToken {
    Number(serde_json::Number),
    Token(String),
}

impl BaseToken {
    fn text(&self) -> String {
        match self {
            BaseToken::Number(n) => n.to_string(),
            BaseToken::Token(s) => s.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpectrumConfig {
    pub bases: Vec<BaseToken>,
    #[serde(default)]
    pub independent: bool,
    pub levels: Vec<Vec<i64>>,
    #[serde(default)]
    pub labels: Option<Vec<String>>,
}

impl SpectrumConfig {
    pub fn build(&self) -> Result<EnergySpectrum> {
        let bases = self
            .bases
            .iter()
            .map(|b| BaseFrequency::parse(&b.text()))
            .collect::<Result<Vec<_>>>()?;
        let bases = Arc::new(BaseFrequencies::new(bases, self.independent)?);
        EnergySpectrum::new(bases, self.levels.clone(), self.labels.clone())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateConfig {
    pub amplitudes: Vec<[f64; 2]>,
}

impl StateConfig {
    pub fn build(&self, spectrum: Arc<EnergySpectrum>) -> Result<QuantumState> {
        let amplitudes = self.amplitudes.iter().map(|[re, im]| Complex64::new(*re, *im)).collect();
        QuantumState::new(spectrum, amplitudes)
    }
}

/// One term `(re + i im) exp(i omega_label t)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermConfig {
    pub label: Vec<i64>,
    pub re: f64,
    #[serde(default)]
    pub im: f64,
}

pub fn build_series(terms: &[TermConfig], spectrum: &EnergySpectrum) -> Result<FourierSeries> {
    FourierSeries::from_terms(
        spectrum.bases().clone(),
        terms
            .iter()
            .map(|t| (FrequencyLabel(t.label.clone()), Complex64::new(t.re, t.im))),
    )
}

/// Parses JSON, keeping serde's line/column diagnostics.
pub fn parse_json<T: for<'de> Deserialize<'de>>(text: &str, what: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| ChronosError::Parse(format!("{what}: {e}")))
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| ChronosError::Parse(format!("{}: {e}", path.display())))?;
    parse_json(&text, &path.display().to_string())
}

/// Reads JSON from a file path, or parses the argument itself when it
/// starts with `[` or `{`.
pub fn read_inline_or_file<T: for<'de> Deserialize<'de>>(arg: &str) -> Result<T> {
    let trimmed = arg.trim_start();
    if trimmed.starts_with('[') || trimmed.starts_with('{') {
        parse_json(arg, "inline JSON")
    } else {
        read_json(Path::new(arg))
    }
}
