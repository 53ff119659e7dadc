//! Closed-form and Gauss-Legendre integration of oscillatory terms.

use std::sync::OnceLock;

use gauss_quad::GaussLegendre;
use num_complex::Complex64;
use rayon::prelude::*;

use crate::precision::Turns;

/// Below this `|omega| * width` the antiderivative switches to its Taylor series.
pub const SMALL_PHASE: f64 = 1e-8;

/// Nodes per Gauss-Legendre panel.
pub const PANEL_ORDER: usize = 10;

fn rule() -> &'static GaussLegendre {
    static RULE: OnceLock<GaussLegendre> = OnceLock::new();
    RULE.get_or_init(|| GaussLegendre::new(PANEL_ORDER).expect("order >= 2"))
}

/// `(exp(i x) - 1) / (i x) * width` where `x = omega * width`, i.e. the integral
/// of `exp(i omega t)` over `[0, width]`.
pub fn cis_integral_from_zero(omega: f64, width: f64) -> Complex64 {
    let x = omega * width;
    if x.abs() < SMALL_PHASE {
        // 1 + ix/2 - x^2/6 - ix^3/24
        let x2 = x * x;
        Complex64::new(1.0 - x2 / 6.0, x / 2.0 - x * x2 / 24.0) * width
    } else {
        let half = 0.5 * x;
        Complex64::from_polar(width * half.sin() / half, half)
    }
}

/// Exact-phase integral of `exp(i omega t)` over `[a, b]`, with `omega = 2pi * freq`.
pub fn cis_integral(freq: &Turns, a: f64, b: f64) -> Complex64 {
    let width = b - a;
    let omega = freq.angular();
    let x = omega * width;
    if x.abs() < SMALL_PHASE {
        return freq.cis(a) * cis_integral_from_zero(omega, width);
    }
    // exp(i omega a) * exp(i omega w/2) * w * sinc(omega w / 2)
    let half = 0.5 * x;
    freq.cis(a) * freq.cis(0.5 * width) * (width * half.sin() / half)
}

/// Composite Gauss-Legendre integral of `f` over `[a, b]` with panels no wider
/// than `max_width`. Panels are evaluated in parallel and summed in panel order,
/// so the result does not depend on the thread count.
pub fn composite<F>(a: f64, b: f64, max_width: f64, f: F) -> Complex64
where
    F: Fn(f64) -> Complex64 + Sync,
{
    if b <= a {
        return Complex64::new(0.0, 0.0);
    }
    let panels = ((b - a) / max_width).ceil().max(1.0) as usize;
    let h = (b - a) / panels as f64;
    let pairs = rule().as_node_weight_pairs();
    let sums: Vec<Complex64> = (0..panels)
        .into_par_iter()
        .map(|i| {
            let lo = a + i as f64 * h;
            let hi = if i + 1 == panels { b } else { lo + h };
            let mid = 0.5 * (lo + hi);
            let half = 0.5 * (hi - lo);
            let mut acc = Complex64::new(0.0, 0.0);
            for (x, w) in pairs {
                acc += f(mid + half * x) * *w;
            }
            acc * half
        })
        .collect();
    sums.into_iter().sum()
}
