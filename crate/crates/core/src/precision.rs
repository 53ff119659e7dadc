//! Fixed-point phase arithmetic.
//!
//! Frequencies are carried as *turns per unit time* (`omega / 2pi`) in a
//! signed fixed-point integer with [`FRAC_BITS`] fractional bits. A phase
//! `omega * t` reduced modulo `2pi` is then the fractional part of
//! `turns * t`, which for a binary64 `t = m * 2^e` is an exact integer
//! product followed by a mask. No trigonometric argument ever exceeds one
//! turn, so evolution over 10^7 periods keeps full double accuracy.

use std::f64::consts::TAU;
use std::ops::{Add, Neg, Sub};
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Fractional bits of every [`Turns`] value.
pub const FRAC_BITS: u32 = 192;

/// Extra bits carried through divisions so the final rounding is the only one.
pub(crate) const GUARD_BITS: u32 = 64;

/// Working precision for intermediate constants.
pub(crate) const WORK_BITS: u32 = FRAC_BITS + GUARD_BITS;

/// `atan(1/x) * 2^bits` by the alternating Taylor series.
fn arctan_inv(x: u32, bits: u32) -> BigInt {
    let x = BigInt::from(x);
    let x2 = &x * &x;
    let mut power = (BigInt::one() << bits) / &x;
    let mut sum = power.clone();
    let mut k = 1u64;
    loop {
        power /= &x2;
        if power.is_zero() {
            break;
        }
        let term = &power / BigInt::from(2 * k + 1);
        if k % 2 == 1 {
            sum -= term;
        } else {
            sum += term;
        }
        k += 1;
    }
    sum
}

/// `pi * 2^WORK_BITS`, from Machin's formula.
pub(crate) fn pi_fixed() -> &'static BigInt {
    static PI: OnceLock<BigInt> = OnceLock::new();
    PI.get_or_init(|| {
        let extra = 32;
        let bits = WORK_BITS + extra;
        let pi = arctan_inv(5, bits) * 16 - arctan_inv(239, bits) * 4;
        pi >> extra
    })
}

/// `2pi * 2^WORK_BITS`.
pub(crate) fn two_pi_fixed() -> &'static BigInt {
    static TWO_PI: OnceLock<BigInt> = OnceLock::new();
    TWO_PI.get_or_init(|| pi_fixed() << 1)
}

/// Splits a finite binary64 into `(mantissa, exponent)` with `x = mantissa * 2^exponent`.
pub(crate) fn decompose(x: f64) -> (i64, i32) {
    if x == 0.0 {
        return (0, 0);
    }
    let bits = x.to_bits();
    let sign = if bits >> 63 == 0 { 1 } else { -1 };
    let exponent = ((bits >> 52) & 0x7ff) as i32;
    let mantissa = if exponent == 0 {
        (bits & 0xf_ffff_ffff_ffff) << 1
    } else {
        (bits & 0xf_ffff_ffff_ffff) | 0x10_0000_0000_0000
    };
    (sign * mantissa as i64, exponent - 1075)
}

/// Exact `x * 2^shift` for an integer `x`, floored when shifting right.
fn shift(x: BigInt, shift: i64) -> BigInt {
    if shift >= 0 {
        x << shift as u64
    } else {
        x >> (-shift) as u64
    }
}

/// Converts a fixed-point integer with `bits` fractional bits to `f64`.
pub(crate) fn fixed_to_f64(x: &BigInt, bits: u32) -> f64 {
    let len = x.bits();
    if len <= 1000 {
        // keep 64 significant bits then scale
        let drop = len.saturating_sub(64) as u32;
        let head = (x >> drop).to_f64().unwrap_or(f64::NAN);
        head * 2f64.powi(drop as i32 - bits as i32)
    } else {
        f64::INFINITY.copysign(if x.is_negative() { -1.0 } else { 1.0 })
    }
}

/// Exact fixed-point image of a finite binary64 with `bits` fractional bits (floored).
pub(crate) fn f64_to_fixed(x: f64, bits: u32) -> BigInt {
    let (m, e) = decompose(x);
    shift(BigInt::from(m), e as i64 + bits as i64)
}

/// A frequency expressed in turns per unit time, fixed point.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Turns(BigInt);

impl Turns {
    pub fn zero() -> Self {
        Turns(BigInt::zero())
    }

    pub(crate) fn from_raw(raw: BigInt) -> Self {
        Turns(raw)
    }

    /// Turns for an angular frequency given at `WORK_BITS` fixed point.
    pub(crate) fn from_angular_fixed(angular: &BigInt) -> Self {
        Turns((angular << FRAC_BITS) / two_pi_fixed())
    }

    /// Turns for an angular frequency given as a binary64.
    pub fn from_angular(omega: f64) -> Self {
        Self::from_angular_fixed(&f64_to_fixed(omega, WORK_BITS))
    }

    /// The frequency whose period is `period` (i.e. `1/period` turns per unit time).
    pub fn from_period(period: f64) -> Self {
        let (m, e) = decompose(period);
        // 1 / (m 2^e) = 2^-e / m
        let numerator = shift(BigInt::one(), FRAC_BITS as i64 - e as i64 + GUARD_BITS as i64);
        Turns((numerator / BigInt::from(m)) >> GUARD_BITS)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn signum(&self) -> i32 {
        if self.0.is_zero() {
            0
        } else if self.0.is_negative() {
            -1
        } else {
            1
        }
    }

    pub fn scale(&self, k: i64) -> Self {
        Turns(&self.0 * k)
    }

    pub fn div_int(&self, q: i64) -> Self {
        Turns(self.0.div_floor(&BigInt::from(q)))
    }

    /// Turns per unit time as a binary64.
    pub fn to_f64(&self) -> f64 {
        fixed_to_f64(&self.0, FRAC_BITS)
    }

    /// Angular frequency `2pi * turns`.
    pub fn angular(&self) -> f64 {
        TAU * self.to_f64()
    }

    /// Fractional part of `turns * t` in `[0, 1)`.
    pub fn phase_fraction(&self, t: f64) -> f64 {
        let (m, e) = decompose(t);
        let product = shift(&self.0 * m, e as i64);
        let modulus = BigInt::one() << FRAC_BITS;
        let reduced = product.mod_floor(&modulus);
        let head = (reduced >> (FRAC_BITS - 64)).to_u64().unwrap_or(0);
        head as f64 / 2f64.powi(64)
    }

    /// Phase `2pi * turns * t` reduced into `(-pi, pi]`.
    pub fn phase(&self, t: f64) -> f64 {
        let mut x = self.phase_fraction(t);
        if x > 0.5 {
            x -= 1.0;
        }
        TAU * x
    }

    /// `exp(i * 2pi * turns * t)`.
    pub fn cis(&self, t: f64) -> Complex64 {
        let (s, c) = self.phase(t).sin_cos();
        Complex64::new(c, s)
    }
}

impl Add for &Turns {
    type Output = Turns;
    fn add(self, rhs: &Turns) -> Turns {
        Turns(&self.0 + &rhs.0)
    }
}

impl Sub for &Turns {
    type Output = Turns;
    fn sub(self, rhs: &Turns) -> Turns {
        Turns(&self.0 - &rhs.0)
    }
}

impl Neg for &Turns {
    type Output = Turns;
    fn neg(self) -> Turns {
        Turns(-&self.0)
    }
}

impl<'a> std::iter::Sum<&'a Turns> for Turns {
    fn sum<I: Iterator<Item = &'a Turns>>(iter: I) -> Turns {
        Turns(iter.map(|t| &t.0).sum())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn machin_pi_matches_hex_digits() {
        // pi = 3.243F6A8885A308D313198A2E03707344A4093822299F31D0082EFA98EC4E6C89...
        let expected = BigInt::parse_bytes(
            b"3243F6A8885A308D313198A2E03707344A4093822299F31D0082EFA98EC4E6C89",
            16,
        )
        .unwrap();
        let digits_bits = 64 * 4;
        let ours = pi_fixed() >> (WORK_BITS - digits_bits);
        assert!((ours - expected).abs() <= BigInt::one());
    }

    #[test]
    fn decompose_round_trips() {
        for &x in &[1.0, -3.5, 1e-300, 5e-324, 123456.789, -1e300] {
            let (m, e) = decompose(x);
            let half = e / 2;
            assert_eq!(m as f64 * 2f64.powi(half) * 2f64.powi(e - half), x);
        }
    }

    #[test]
    fn unit_angular_frequency_phase() {
        let one = Turns::from_angular(1.0);
        assert!((one.angular() - 1.0).abs() < 1e-15);
        assert!((one.phase(PI) - PI).abs() < 1e-15);
        assert!((one.phase(2.0 * PI)).abs() < 1e-15);
        assert!((one.phase(0.5) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn large_time_phase_is_exact() {
        // omega = 1, t = 2^40 exactly: phase = 2^40 mod 2pi, computed independently
        // from the fixed-point pi with a different route (BigInt remainder of t scaled).
        let t = 2f64.powi(40);
        let omega = Turns::from_angular(1.0);
        let two_pi = two_pi_fixed();
        let t_fixed = BigInt::one() << (40 + WORK_BITS);
        let r = t_fixed.mod_floor(two_pi);
        let expected = fixed_to_f64(&r, WORK_BITS);
        let got = omega.phase_fraction(t) * TAU;
        assert!((got - expected).abs() < 1e-14, "{got} vs {expected}");
    }

    #[test]
    fn negative_time_wraps_forward() {
        let omega = Turns::from_angular(1.0);
        let f = omega.phase_fraction(-0.5);
        assert!((f - (1.0 - 0.5 / TAU)).abs() < 1e-15);
    }

    #[test]
    fn period_turns_invert() {
        let t = Turns::from_period(2.0 * PI);
        assert!((t.angular() - 1.0).abs() < 1e-15);
        assert!(t.phase_fraction(2.0 * PI).min(1.0 - t.phase_fraction(2.0 * PI)) < 1e-15);
    }
}
