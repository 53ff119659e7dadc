//! Two classical angles advancing at incommensurate rates, and recovery of
//! the elapsed time from the angle pair alone.

use std::f64::consts::{PI, TAU};

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{ChronosError, Result};
use crate::precision::Turns;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct AnglePair {
    pub phi1: f64,
    pub phi2: f64,
}

fn check_frequencies(omega1: f64, omega2: f64) -> Result<()> {
    if !(omega1 > 0.0 && omega2 > 0.0 && omega1.is_finite() && omega2.is_finite()) {
        return Err(ChronosError::InvalidArgument("angular frequencies must be positive".into()));
    }
    Ok(())
}

fn angle(turns: &Turns, t: f64) -> f64 {
    // phase_fraction < 1, but TAU * x can round up to TAU
    let a = TAU * turns.phase_fraction(t);
    if a >= TAU {
        0.0
    } else {
        a
    }
}

/// `(omega1 t mod 2pi, omega2 t mod 2pi)`.
pub fn angles_at(t: f64, omega1: f64, omega2: f64) -> Result<AnglePair> {
    check_frequencies(omega1, omega2)?;
    Ok(AnglePair {
        phi1: angle(&Turns::from_angular(omega1), t),
        phi2: angle(&Turns::from_angular(omega2), t),
    })
}

/// Distance between two angles on the circle, in `[0, pi]`.
pub fn circular_distance(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(TAU);
    if d > PI {
        TAU - d
    } else {
        d
    }
}

/// Range of `j` with `(phi1 + 2pi j) / omega1` inside the window.
fn lattice_range(phi1: f64, omega1: f64, window: (f64, f64)) -> (i64, i64) {
    let lo = ((window.0 * omega1 - phi1) / TAU).ceil() as i64;
    let hi = ((window.1 * omega1 - phi1) / TAU).floor() as i64;
    (lo, hi)
}

/// Every `t` in the window whose angles match `target` within `tol` on both
/// circles. Candidates come from the lattice of exact `phi1` matches.
pub fn reconstruct_time(
    target: AnglePair,
    omega1: f64,
    omega2: f64,
    window: (f64, f64),
    tol: f64,
) -> Result<Vec<f64>> {
    check_frequencies(omega1, omega2)?;
    if !(window.1 > window.0) || !window.0.is_finite() || !window.1.is_finite() {
        return Err(ChronosError::InvalidArgument(format!(
            "empty window [{}, {}]",
            window.0, window.1
        )));
    }
    if !(tol > 0.0) {
        return Err(ChronosError::InvalidArgument("tolerance must be positive".into()));
    }
    let turns2 = Turns::from_angular(omega2);
    let (lo, hi) = lattice_range(target.phi1, omega1, window);
    let candidates = (lo..=hi)
        .into_par_iter()
        .filter_map(|j| {
            let t = (target.phi1 + TAU * j as f64) / omega1;
            let inside = t >= window.0 && t <= window.1;
            (inside && circular_distance(angle(&turns2, t), target.phi2) < tol).then_some(t)
        })
        .collect();
    Ok(candidates)
}

/// Smallest `phi2` separation between distinct `phi1` lattice points in a
/// window of length `length`: `min_{1 <= d <= J} ||2pi d omega2 / omega1||`.
/// Any `tol` below this yields at most one candidate.
pub fn min_lattice_gap(omega1: f64, omega2: f64, length: f64) -> Result<f64> {
    check_frequencies(omega1, omega2)?;
    let span = (length * omega1 / TAU).ceil() as i64;
    let step = Turns::from_angular(omega2);
    let lattice = TAU / omega1;
    Ok((1..=span.max(1))
        .into_par_iter()
        .map(|d| {
            let a = angle(&step, lattice * d as f64);
            circular_distance(a, 0.0)
        })
        .reduce(|| f64::INFINITY, f64::min))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    const SQRT2: f64 = std::f64::consts::SQRT_2;

    #[test]
    fn angles() {
        assert_eq!(angles_at(0.0, 1.0, SQRT2).unwrap(), AnglePair { phi1: 0.0, phi2: 0.0 });
        let a = angles_at(PI, 1.0, SQRT2).unwrap();
        assert!((a.phi1 - PI).abs() < 1e-15);
        assert!((a.phi2 - (SQRT2 * PI) % TAU).abs() < 1e-14);
        let w = angles_at(TAU / 1.5, 1.5, 2.0).unwrap();
        assert!(circular_distance(w.phi1, 0.0) < 1e-14);
        assert!((w.phi2 - (TAU * 2.0 / 1.5) % TAU).abs() < 1e-14);
        assert!(angles_at(1.0, 0.0, 1.0).is_err());
    }

    #[test]
    fn circle_distance() {
        assert!((circular_distance(0.1, TAU - 0.1) - 0.2).abs() < 1e-15);
        assert_eq!(circular_distance(1.0, 1.0), 0.0);
        assert!((circular_distance(0.0, PI) - PI).abs() < 1e-15);
    }

    #[test]
    fn self_consistent_reconstruction() {
        let t_star = 1234.5678;
        let target = angles_at(t_star, 1.0, SQRT2).unwrap();
        let found = reconstruct_time(target, 1.0, SQRT2, (0.0, 1e4), 1e-6).unwrap();
        assert_eq!(found.len(), 1);
        assert!((found[0] - t_star).abs() < 1e-9);
    }

    #[test]
    fn commensurate_contrast_is_ambiguous() {
        let target = angles_at(2.0, 1.0, 1.0).unwrap();
        let found = reconstruct_time(target, 1.0, 1.0, (0.0, 100.0), 1e-6).unwrap();
        assert_eq!(found.len(), 16);
        for w in found.windows(2) {
            assert!((w[1] - w[0] - TAU).abs() < 1e-10);
        }
    }

    #[test]
    fn unique_reconstruction_matches_exhaustive_scan() {
        let (window, tol) = ((0.0, 1e4), 1e-4);
        let gap = min_lattice_gap(1.0, SQRT2, window.1 - window.0).unwrap();
        assert!(gap > 2.0 * tol);
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..20 {
            let t_star: f64 = rng.random_range(window.0..window.1);
            let target = angles_at(t_star, 1.0, SQRT2).unwrap();
            let found = reconstruct_time(target, 1.0, SQRT2, window, tol).unwrap();
            // independent oracle: brute-force float scan of the lattice
            let oracle: Vec<f64> = (0..=1600)
                .map(|j| target.phi1 + TAU * j as f64)
                .filter(|&t| t <= window.1)
                .filter(|&t| circular_distance((SQRT2 * t) % TAU, target.phi2) < tol)
                .collect();
            assert_eq!(found.len(), 1);
            assert_eq!(oracle.len(), 1);
            assert!((found[0] - oracle[0]).abs() < 1e-9);
            assert!((found[0] - t_star).abs() < tol);
        }
    }

    #[test]
    fn rejects_bad_input() {
        let target = AnglePair { phi1: 0.0, phi2: 0.0 };
        assert!(reconstruct_time(target, 1.0, SQRT2, (5.0, 5.0), 1e-3).is_err());
        assert!(reconstruct_time(target, 1.0, SQRT2, (0.0, 5.0), 0.0).is_err());
    }
}
