//! Command-line front end.
//!
//! Exit codes: 0 on success, 1 on usage or input errors, 2 when `--strict`
//! is set and a numerical limit did not converge.

use std::ffi::OsString;
use std::f64::consts::{FRAC_1_SQRT_2, PI, TAU};
use std::io::Write;
use std::path::PathBuf;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::bohr::{self, AveragingSchedule};
use crate::canonical::{self, DensityKind};
use crate::classical;
use crate::config::{build_series, read_inline_or_file, read_json, SpectrumConfig, StateConfig, TermConfig};
use crate::error::{ChronosError, Result};
use crate::exact::Surd;
use crate::limits;
use crate::phase::{self, PhaseDistribution, PhaseShape, Provenance};
use crate::spectrum::{BaseFrequencies, BaseFrequency, EnergySpectrum, FrequencyLabel};
use crate::state::QuantumState;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_NOT_CONVERGED: i32 = 2;

/// Environment variable capping rayon worker threads (0 = automatic).
pub const THREADS_ENV: &str = "CHRONOS_THREADS";

#[derive(Parser, Debug)]
#[command(name = "chronos", version, about = "Canonical time observables for discrete spectra")]
#[command(allow_negative_numbers = true)]
struct Cli {
    /// Spectrum JSON document.
    #[arg(long, global = true)]
    spectrum: Option<PathBuf>,
    /// State JSON document.
    #[arg(long, global = true)]
    state: Option<PathBuf>,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Seed for random states when no --state is given.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Exit with status 2 on numerical non-convergence.
    #[arg(long, global = true)]
    strict: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum KindArg {
    Auto,
    Periodic,
    Quasiperiodic,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Sample the time density on a uniform grid.
    #[command(allow_negative_numbers = true)]
    Density {
        #[arg(long, default_value_t = 0.0)]
        t_start: f64,
        #[arg(long)]
        t_end: f64,
        #[arg(long, default_value_t = 201)]
        samples: usize,
        #[arg(long, value_enum, default_value_t = KindArg::Auto)]
        kind: KindArg,
    },
    /// Probability of an outcome in [t_a, t_b] (periodic spectra).
    #[command(allow_negative_numbers = true)]
    Interval {
        #[arg(long)]
        t_a: f64,
        #[arg(long)]
        t_b: f64,
    },
    /// Expectation of a quasiperiodic function, analytic and numeric.
    #[command(allow_negative_numbers = true)]
    Expect {
        /// JSON list of {label, re, im} terms, inline or as a file path.
        #[arg(long)]
        f: String,
        #[arg(long, default_value_t = 100.0)]
        tau0: f64,
        #[arg(long, default_value_t = 2.0)]
        growth: f64,
        #[arg(long, default_value_t = 10)]
        steps: usize,
        #[arg(long, default_value_t = bohr::DEFAULT_TOL)]
        tol: f64,
    },
    /// Three-level perturbation experiment.
    #[command(allow_negative_numbers = true)]
    ThreeLevel {
        /// Amplitude as `re` or `re,im`.
        #[arg(long, default_value = "0.7071067811865476")]
        c0: String,
        #[arg(long, default_value = "0.7071067811865476")]
        c1: String,
        /// Exact perturbation: `p/q`, a decimal, or an expression in sqrt2, sqrt5, golden.
        #[arg(long)]
        epsilon: String,
        /// `E1-E0,E2-E1`, each exact.
        #[arg(long, default_value = "1,1")]
        gaps: String,
    },
    /// Expectations along the periodic approximants of a two-base spectrum.
    #[command(allow_negative_numbers = true)]
    Limit {
        #[arg(long, default_value_t = 12)]
        depth: usize,
        /// JSON list of {label, re, im} terms, inline or as a file path.
        #[arg(long)]
        f: String,
    },
    /// Recover elapsed time from two classical angles.
    #[command(allow_negative_numbers = true)]
    Classical {
        #[arg(long, default_value_t = 1.0)]
        omega1: f64,
        #[arg(long, default_value_t = std::f64::consts::SQRT_2)]
        omega2: f64,
        #[arg(long)]
        t_star: f64,
        /// `t_min,t_max`.
        #[arg(long, default_value = "0,10000")]
        window: String,
        #[arg(long, default_value_t = 1e-4)]
        tol: f64,
    },
    /// Residual of the covariance identity for evolved states.
    #[command(allow_negative_numbers = true)]
    CovarianceCheck {
        #[arg(long, value_delimiter = ',', default_value = "0,123.456")]
        taus: Vec<f64>,
        /// Random-state seeds; defaults to --seed, or 0.
        #[arg(long, value_delimiter = ',')]
        seeds: Vec<u64>,
        #[arg(long, default_value_t = -50.0)]
        t_start: f64,
        #[arg(long, default_value_t = 50.0)]
        t_end: f64,
        #[arg(long, default_value_t = 2001)]
        samples: usize,
    },
    /// Run built-in invariant checks.
    Selftest,
}

/// Result of one subcommand, renderable as JSON and possibly CSV.
struct Output {
    json: Value,
    csv: Option<(Vec<&'static str>, Vec<Vec<String>>)>,
    default_format: Format,
    status: i32,
}

impl Output {
    fn json(json: Value) -> Self {
        Output {
            json,
            csv: None,
            default_format: Format::Json,
            status: EXIT_OK,
        }
    }
}

/// Reals in CSV: 17 significant digits.
fn real(x: f64) -> String {
    format!("{x:.16e}")
}

fn configure_threads() -> Result<()> {
    let Ok(value) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize = value
        .trim()
        .parse()
        .map_err(|_| ChronosError::InvalidArgument(format!("{THREADS_ENV} must be a non-negative integer")))?;
    if n > 0 {
        // a second call in the same process keeps the first pool
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    Ok(())
}

/// Runs the CLI with process stdout/stderr.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with_io(args, &mut stdout.lock(), &mut stderr.lock())
}

pub fn run_with_io<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK { write!(out, "{text}") } else { write!(err, "{text}") };
            return code;
        }
    };
    match execute(&cli).and_then(|output| emit(&cli, output, out)) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_USAGE
        }
    }
}

fn emit(cli: &Cli, output: Output, out: &mut dyn Write) -> Result<i32> {
    let format = cli.format.unwrap_or(output.default_format);
    let mut text = match format {
        Format::Json => serde_json::to_string_pretty(&output.json).map_err(|e| ChronosError::Parse(e.to_string()))?,
        Format::Csv => {
            let (header, rows) = output
                .csv
                .ok_or_else(|| ChronosError::InvalidArgument("this subcommand has no CSV form; use --format json".into()))?;
            let mut w = csv::Writer::from_writer(Vec::new());
            let io = |e: csv::Error| ChronosError::Parse(e.to_string());
            w.write_record(&header).map_err(io)?;
            for row in rows {
                w.write_record(&row).map_err(io)?;
            }
            let bytes = w.into_inner().map_err(|e| ChronosError::Parse(e.to_string()))?;
            String::from_utf8(bytes).expect("ascii output")
        }
    };
    if !text.ends_with('\n') {
        text.push('\n');
    }
    match &cli.out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| ChronosError::InvalidArgument(format!("cannot write {}: {e}", path.display())))?,
        None => out
            .write_all(text.as_bytes())
            .map_err(|e| ChronosError::InvalidArgument(format!("cannot write output: {e}")))?,
    }
    Ok(output.status)
}

fn load_spectrum(cli: &Cli) -> Result<Arc<EnergySpectrum>> {
    let path = cli
        .spectrum
        .as_deref()
        .ok_or_else(|| ChronosError::InvalidArgument("--spectrum FILE is required".into()))?;
    let cfg: SpectrumConfig = read_json(path)?;
    Ok(Arc::new(cfg.build()?))
}

fn load_state(cli: &Cli, spectrum: &Arc<EnergySpectrum>) -> Result<QuantumState> {
    match (&cli.state, cli.seed) {
        (Some(path), _) => read_json::<StateConfig>(path)?.build(spectrum.clone()),
        (None, Some(seed)) => Ok(QuantumState::random(spectrum.clone(), seed)),
        (None, None) => Err(ChronosError::InvalidArgument(
            "--state FILE or --seed INT is required".into(),
        )),
    }
}

fn execute(cli: &Cli) -> Result<Output> {
    configure_threads()?;
    match &cli.command {
        Command::Density {
            t_start,
            t_end,
            samples,
            kind,
        } => {
            let spectrum = load_spectrum(cli)?;
            let state = load_state(cli, &spectrum)?;
            let trace = match kind {
                KindArg::Auto => canonical::density_trace(&state, *t_start, *t_end, *samples)?,
                KindArg::Periodic => {
                    canonical::density_trace_with_kind(&state, *t_start, *t_end, *samples, DensityKind::Periodic)?
                }
                KindArg::Quasiperiodic => canonical::density_trace_with_kind(
                    &state,
                    *t_start,
                    *t_end,
                    *samples,
                    DensityKind::Quasiperiodic,
                )?,
            };
            let rows = trace
                .times
                .iter()
                .zip(&trace.values)
                .map(|(t, p)| vec![real(*t), real(*p)])
                .collect();
            Ok(Output {
                json: json!({"kind": trace.kind, "period": trace.period, "t": trace.times, "p": trace.values}),
                csv: Some((vec!["t", "p"], rows)),
                default_format: Format::Csv,
                status: EXIT_OK,
            })
        }
        Command::Interval { t_a, t_b } => {
            let spectrum = load_spectrum(cli)?;
            let state = load_state(cli, &spectrum)?;
            let p = canonical::interval_probability(&state, *t_a, *t_b)?;
            Ok(Output {
                json: json!(p),
                csv: Some((vec!["probability"], vec![vec![real(p)]])),
                default_format: Format::Json,
                status: EXIT_OK,
            })
        }
        Command::Expect {
            f,
            tau0,
            growth,
            steps,
            tol,
        } => {
            let spectrum = load_spectrum(cli)?;
            let state = load_state(cli, &spectrum)?;
            let terms: Vec<TermConfig> = read_inline_or_file(f)?;
            let series = build_series(&terms, &spectrum)?;
            let analytic = bohr::expectation(&state, &series)?;
            let schedule = AveragingSchedule {
                initial_horizon: *tau0,
                growth: *growth,
                max_steps: *steps,
            };
            let density = bohr::density_as_series(&state);
            let max_frequency = series.max_frequency() + density.max_frequency();
            let report = bohr::bohr_mean_numeric(
                |t| series.eval(t).re * canonical::quasiperiodic_density(&state, t),
                &schedule,
                max_frequency,
                *tol,
            )?;
            let status = if cli.strict && !report.converged {
                EXIT_NOT_CONVERGED
            } else {
                EXIT_OK
            };
            Ok(Output {
                json: json!({"analytic": analytic, "numeric": report.final_estimate(), "report": report}),
                csv: None,
                default_format: Format::Json,
                status,
            })
        }
        Command::ThreeLevel {
            c0,
            c1,
            epsilon,
            gaps,
        } => {
            let c0 = parse_complex(c0)?;
            let c1 = parse_complex(c1)?;
            let epsilon: Surd = epsilon.parse()?;
            let (g1, g2) = parse_pair(gaps, |s| s.parse::<Surd>())?;
            let report = phase::three_level_experiment(c0, c1, &epsilon, (&g1, &g2))?;
            Ok(Output::json(json!({
                "nu": report.nu.as_ref().map(|r| r.to_string()),
                "arsenovic": describe(&report.arsenovic),
                "canonical": describe(&report.canonical),
                "tv_distance": report.tv_distance(),
            })))
        }
        Command::Limit { depth, f } => {
            let spectrum = load_spectrum(cli)?;
            let state = load_state(cli, &spectrum)?;
            let terms: Vec<TermConfig> = read_inline_or_file(f)?;
            let series = build_series(&terms, &spectrum)?;
            let approximants = spectrum.rational_approximants(*depth)?;
            let trace = limits::expectation_sequence(&state, &series, &approximants)?;
            let errors = trace.errors();
            let rows = trace
                .entries
                .iter()
                .zip(&errors)
                .map(|(e, err)| {
                    vec![
                        e.k.to_string(),
                        e.denominator.to_string(),
                        real(e.period),
                        real(e.expectation),
                        real(*err),
                    ]
                })
                .collect();
            let entries: Vec<Value> = trace
                .entries
                .iter()
                .zip(&errors)
                .map(|(e, err)| {
                    json!({"k": e.k, "q_k": e.denominator, "T_k": e.period, "expectation_k": e.expectation, "abs_error": err})
                })
                .collect();
            let converged = errors.last().is_some_and(|e| *e < bohr::DEFAULT_TOL);
            Ok(Output {
                json: json!({"target": trace.target, "entries": entries, "converged": converged}),
                csv: Some((vec!["k", "q_k", "T_k", "expectation_k", "abs_error"], rows)),
                default_format: Format::Csv,
                status: if cli.strict && !converged { EXIT_NOT_CONVERGED } else { EXIT_OK },
            })
        }
        Command::Classical {
            omega1,
            omega2,
            t_star,
            window,
            tol,
        } => {
            let window = parse_pair(window, |s| {
                s.trim()
                    .parse::<f64>()
                    .map_err(|e| ChronosError::Parse(format!("window bound {s:?}: {e}")))
            })?;
            let target = classical::angles_at(*t_star, *omega1, *omega2)?;
            let candidates = classical::reconstruct_time(target, *omega1, *omega2, window, *tol)?;
            let gap = classical::min_lattice_gap(*omega1, *omega2, window.1 - window.0)?;
            Ok(Output::json(json!({
                "target": target,
                "candidates": candidates,
                "min_lattice_gap": gap,
            })))
        }
        Command::CovarianceCheck {
            taus,
            seeds,
            t_start,
            t_end,
            samples,
        } => {
            let spectrum = load_spectrum(cli)?;
            let mut states = Vec::new();
            if let Some(path) = &cli.state {
                states.push(("file".to_string(), read_json::<StateConfig>(path)?.build(spectrum.clone())?));
            } else {
                let seeds = if seeds.is_empty() { vec![cli.seed.unwrap_or(0)] } else { seeds.clone() };
                for seed in seeds {
                    states.push((seed.to_string(), QuantumState::random(spectrum.clone(), seed)));
                }
            }
            let rows = covariance_rows(&states, taus, (*t_start, *t_end), *samples)?;
            let max = rows.iter().map(|r| r.residual).fold(0.0, f64::max);
            let csv_rows = rows
                .iter()
                .map(|r| vec![r.source.clone(), real(r.tau), kind_name(r.kind).into(), real(r.residual)])
                .collect();
            Ok(Output {
                json: json!({"rows": rows, "max_residual": max}),
                csv: Some((vec!["source", "tau", "kind", "residual"], csv_rows)),
                default_format: Format::Json,
                status: EXIT_OK,
            })
        }
        Command::Selftest => {
            let checks = selftest();
            let passed = checks.iter().all(|c| c.passed);
            let rows = checks
                .iter()
                .map(|c| vec![c.name.to_string(), real(c.value), real(c.tolerance), c.passed.to_string()])
                .collect();
            Ok(Output {
                json: json!({"checks": checks, "passed": passed}),
                csv: Some((vec!["name", "value", "tolerance", "passed"], rows)),
                default_format: Format::Json,
                status: if passed { EXIT_OK } else { EXIT_USAGE },
            })
        }
    }
}

fn kind_name(kind: DensityKind) -> &'static str {
    match kind {
        DensityKind::Periodic => "periodic",
        DensityKind::Quasiperiodic => "quasiperiodic",
    }
}

fn parse_pair<T>(text: &str, parse: impl Fn(&str) -> Result<T>) -> Result<(T, T)> {
    let parts: Vec<&str> = text.split(',').collect();
    if parts.len() != 2 {
        return Err(ChronosError::Parse(format!("expected two comma-separated values, got {text:?}")));
    }
    Ok((parse(parts[0])?, parse(parts[1])?))
}

fn parse_complex(text: &str) -> Result<Complex64> {
    let number = |s: &str| {
        s.trim()
            .parse::<f64>()
            .map_err(|e| ChronosError::Parse(format!("amplitude {text:?}: {e}")))
    };
    match text.split_once(',') {
        Some((re, im)) => Ok(Complex64::new(number(re)?, number(im)?)),
        None => Ok(Complex64::new(number(text)?, 0.0)),
    }
}

fn describe(dist: &PhaseDistribution) -> Value {
    let provenance = match &dist.provenance {
        Provenance::Periodic => json!({"type": "periodic"}),
        Provenance::Rational(nu) => json!({"type": "rational", "nu": nu.to_string()}),
        Provenance::Irrational => json!({"type": "irrational"}),
    };
    let (kind, harmonics, amplitudes) = match &dist.shape {
        PhaseShape::Uniform => ("uniform", Value::Null, Value::Null),
        PhaseShape::Harmonic {
            amplitudes,
            harmonics,
        } => (
            "nonuniform",
            json!(harmonics),
            json!(amplitudes.iter().map(|c| [c.re, c.im]).collect::<Vec<_>>()),
        ),
    };
    let density: Vec<[f64; 2]> = dist.sampled(64).into_iter().map(|(t, q)| [t, q]).collect();
    json!({
        "kind": kind,
        "provenance": provenance,
        "harmonics": harmonics,
        "amplitudes": amplitudes,
        "density": density,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct CovarianceRow {
    pub source: String,
    pub tau: f64,
    pub kind: DensityKind,
    pub residual: f64,
}

/// `max_t |p(t | psi_tau) - p(t - tau | psi)|` on a uniform grid, for each
/// state, shift and applicable density kind.
pub fn covariance_rows(
    states: &[(String, QuantumState)],
    taus: &[f64],
    window: (f64, f64),
    samples: usize,
) -> Result<Vec<CovarianceRow>> {
    if samples < 2 || !(window.1 > window.0) {
        return Err(ChronosError::InvalidArgument("covariance grid needs two or more samples on a nonempty window".into()));
    }
    let mut rows = Vec::new();
    for (source, state) in states {
        let period = state.spectrum().fundamental_period().ok();
        for &tau in taus {
            let moved = state.evolve(tau);
            let residual = |scale: f64| {
                (0..samples)
                    .map(|i| {
                        let t = window.0 + (window.1 - window.0) * i as f64 / (samples - 1) as f64;
                        let lhs = canonical::quasiperiodic_density(&moved, t) * scale;
                        let rhs = canonical::quasiperiodic_density(state, t - tau) * scale;
                        (lhs - rhs).abs()
                    })
                    .fold(0.0, f64::max)
            };
            let mut kinds = vec![(DensityKind::Quasiperiodic, 1.0)];
            if let Some(t) = period {
                kinds.insert(0, (DensityKind::Periodic, 1.0 / t));
            }
            for (kind, scale) in kinds {
                rows.push(CovarianceRow {
                    source: source.clone(),
                    tau,
                    kind,
                    residual: residual(scale),
                });
            }
        }
    }
    Ok(rows)
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub value: f64,
    pub tolerance: f64,
    pub passed: bool,
}

fn check(name: &'static str, value: Result<f64>, tolerance: f64) -> Check {
    let value = value.unwrap_or(f64::INFINITY);
    Check {
        name,
        value,
        tolerance,
        passed: value <= tolerance,
    }
}

fn base(token: &str) -> BaseFrequency {
    BaseFrequency::parse(token).expect("built-in base token")
}

/// Two-level spectrum with gap 1.
pub fn two_level_fixture() -> Arc<EnergySpectrum> {
    Arc::new(EnergySpectrum::integer_levels(base("1"), &[0, 1]).expect("valid fixture"))
}

/// Levels `0`, `beta_1`, `beta_2` with `beta_2 / beta_1 = sqrt2`.
pub fn sqrt2_fixture() -> Arc<EnergySpectrum> {
    let bases = BaseFrequencies::new(vec![base("1"), base("sqrt2")], true).expect("valid fixture");
    Arc::new(
        EnergySpectrum::new(Arc::new(bases), vec![vec![0, 0], vec![1, 0], vec![0, 1]], None).expect("valid fixture"),
    )
}

fn selftest() -> Vec<Check> {
    let mut checks = Vec::new();

    let two = QuantumState::uniform_superposition(two_level_fixture());
    checks.push(check(
        "two_level_density",
        (0..401)
            .map(|i| {
                let t = -10.0 + 0.05 * i as f64;
                canonical::periodic_density(&two, t).map(|p| (p - (1.0 + t.cos()) / TAU).abs())
            })
            .try_fold(0.0, |m, r| r.map(|d| f64::max(m, d))),
        1e-12,
    ));

    let periodic = Arc::new(EnergySpectrum::integer_levels(base("1"), &[0, 1, 3, 7]).expect("valid fixture"));
    checks.push(check(
        "periodic_normalization",
        (0..10)
            .map(|seed| {
                let psi = QuantumState::random(periodic.clone(), seed);
                let t = periodic.fundamental_period()?;
                canonical::interval_probability(&psi, 0.0, t).map(|p| (p - 1.0).abs())
            })
            .try_fold(0.0, |m, r| r.map(|d| f64::max(m, d))),
        1e-10,
    ));

    let sqrt2 = sqrt2_fixture();
    checks.push(check(
        "bohr_normalization",
        Ok((0..10)
            .map(|seed| {
                let p = bohr::density_as_series(&QuantumState::random(sqrt2.clone(), seed));
                (bohr::bohr_mean_analytic(&p) - Complex64::new(1.0, 0.0)).norm()
            })
            .fold(0.0, f64::max)),
        1e-12,
    ));

    let states: Vec<(String, QuantumState)> = (0..3)
        .map(|seed| (seed.to_string(), QuantumState::random(sqrt2.clone(), seed)))
        .collect();
    checks.push(check(
        "covariance",
        covariance_rows(&states, &[123.456, -987.5], (-20.0, 20.0), 401)
            .map(|rows| rows.iter().map(|r| r.residual).fold(0.0, f64::max)),
        1e-10,
    ));

    let mismatches = (0..3)
        .map(|n| QuantumState::eigenstate(sqrt2.clone(), n).expect("index in range"))
        .chain((0..10).map(|seed| QuantumState::random(sqrt2.clone(), seed)))
        .filter(|psi| bohr::density_is_uniform(psi) != (psi.support().len() == 1))
        .count();
    checks.push(check("eigenstate_uniformity", Ok(mismatches as f64), 0.0));

    let half = Complex64::new(FRAC_1_SQRT_2, 0.0);
    let one = Surd::integer(1);
    checks.push(check(
        "three_level_tv",
        phase::three_level_experiment(half, half, &Surd::integer(0), (&one, &one)).and_then(|rational| {
            let irrational = phase::three_level_experiment(half, half, &Surd::sqrt2(), (&one, &one))?;
            Ok((rational.arsenovic.total_variation(&irrational.arsenovic) - 1.0 / PI).abs())
        }),
        1e-6,
    ));

    checks.push(check(
        "limit_convergence",
        (|| {
            let psi = QuantumState::uniform_superposition(sqrt2.clone());
            let f = bohr::FourierSeries::cosine(sqrt2.bases().clone(), FrequencyLabel(vec![1, 0]), 1.0, 0.0)?;
            let trace = limits::expectation_sequence(&psi, &f, &sqrt2.rational_approximants(12)?)?;
            let entry = trace
                .entries
                .iter()
                .find(|e| e.denominator >= 100)
                .ok_or(ChronosError::PrecisionExhausted(12))?;
            Ok((entry.expectation - trace.target).abs())
        })(),
        1e-3,
    ));

    checks.push(check(
        "classical_reconstruction",
        (|| {
            let mut rng = ChaCha8Rng::seed_from_u64(0);
            let mut worst: f64 = 0.0;
            for _ in 0..10 {
                let t_star: f64 = rng.random_range(0.0..1e4);
                let target = classical::angles_at(t_star, 1.0, std::f64::consts::SQRT_2)?;
                let found = classical::reconstruct_time(target, 1.0, std::f64::consts::SQRT_2, (0.0, 1e4), 1e-4)?;
                if found.len() != 1 {
                    return Ok(f64::INFINITY);
                }
                worst = worst.max((found[0] - t_star).abs());
            }
            Ok(worst)
        })(),
        1e-4,
    ));

    checks.push(check(
        "long_horizon_evolution",
        (|| {
            let spectrum = Arc::new(EnergySpectrum::integer_levels(base("pi"), &[0, 1, 3])?);
            let psi = QuantumState::random(spectrum, 5);
            let back = psi.evolve(2.0e7);
            Ok(psi
                .amplitudes()
                .iter()
                .zip(back.amplitudes())
                .map(|(a, b)| (a - b).norm())
                .fold(0.0, f64::max))
        })(),
        1e-12,
    ));

    checks
}
