//! Exact real numbers in `Q + Q*sqrt(2) + Q*sqrt(5)`.
//!
//! This is the field every symbolic token accepted on input lives in
//! (`sqrt2`, `golden`, decimals, `p/q`). Since `1`, `sqrt2` and `sqrt5` are
//! linearly independent over the rationals, rationality and rational
//! ratios are decided componentwise with no floating-point comparisons.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{ChronosError, Result};
use crate::precision::WORK_BITS;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Surd {
    pub rational: BigRational,
    pub sqrt2: BigRational,
    pub sqrt5: BigRational,
}

impl Surd {
    pub fn from_rational(r: BigRational) -> Self {
        Surd {
            rational: r,
            sqrt2: BigRational::zero(),
            sqrt5: BigRational::zero(),
        }
    }

    pub fn integer(n: i64) -> Self {
        Self::from_rational(BigRational::from_integer(n.into()))
    }

    pub fn sqrt2() -> Self {
        Surd {
            rational: BigRational::zero(),
            sqrt2: BigRational::one(),
            sqrt5: BigRational::zero(),
        }
    }

    /// `(1 + sqrt5) / 2`.
    pub fn golden() -> Self {
        let half = BigRational::new(1.into(), 2.into());
        Surd {
            rational: half.clone(),
            sqrt2: BigRational::zero(),
            sqrt5: half,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.rational.is_zero() && self.sqrt2.is_zero() && self.sqrt5.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.sqrt2.is_zero() && self.sqrt5.is_zero()
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        self.is_rational().then_some(&self.rational)
    }

    pub fn scale(&self, k: &BigRational) -> Self {
        Surd {
            rational: &self.rational * k,
            sqrt2: &self.sqrt2 * k,
            sqrt5: &self.sqrt5 * k,
        }
    }

    /// `self / other` when that ratio is rational, else `None`.
    pub fn rational_ratio(&self, other: &Surd) -> Option<BigRational> {
        if other.is_zero() {
            return None;
        }
        let pairs = [
            (&self.rational, &other.rational),
            (&self.sqrt2, &other.sqrt2),
            (&self.sqrt5, &other.sqrt5),
        ];
        let mut ratio: Option<BigRational> = None;
        for (a, b) in pairs {
            if b.is_zero() {
                if !a.is_zero() {
                    return None;
                }
                continue;
            }
            let r = a / b;
            match &ratio {
                None => ratio = Some(r),
                Some(prev) if *prev == r => {}
                Some(_) => return None,
            }
        }
        ratio
    }

    /// `self * 2^WORK_BITS`, floored to within one unit.
    pub(crate) fn to_fixed(&self) -> BigInt {
        let bits = WORK_BITS;
        let sqrt_fixed = |n: u32| -> BigInt { (BigInt::from(n) << (2 * bits)).sqrt() };
        let part = |r: &BigRational, unit: BigInt| -> BigInt {
            if r.is_zero() {
                BigInt::zero()
            } else {
                (r.numer() * unit) / r.denom()
            }
        };
        part(&self.rational, BigInt::one() << bits)
            + part(&self.sqrt2, sqrt_fixed(2))
            + part(&self.sqrt5, sqrt_fixed(5))
    }

    pub fn to_f64(&self) -> f64 {
        let r = |x: &BigRational| x.to_f64().unwrap_or(f64::NAN);
        r(&self.rational) + r(&self.sqrt2) * 2f64.sqrt() + r(&self.sqrt5) * 5f64.sqrt()
    }

    /// Sign, decided from a high-precision image (exact for nonzero values).
    pub fn signum(&self) -> i32 {
        if self.is_zero() {
            return 0;
        }
        if self.is_rational() {
            return if self.rational.is_positive() { 1 } else { -1 };
        }
        let fixed = self.to_fixed();
        if fixed.is_positive() {
            1
        } else {
            -1
        }
    }
}

impl Add for &Surd {
    type Output = Surd;
    fn add(self, rhs: &Surd) -> Surd {
        Surd {
            rational: &self.rational + &rhs.rational,
            sqrt2: &self.sqrt2 + &rhs.sqrt2,
            sqrt5: &self.sqrt5 + &rhs.sqrt5,
        }
    }
}

impl Sub for &Surd {
    type Output = Surd;
    fn sub(self, rhs: &Surd) -> Surd {
        self + &(-rhs)
    }
}

impl Neg for &Surd {
    type Output = Surd;
    fn neg(self) -> Surd {
        Surd {
            rational: -&self.rational,
            sqrt2: -&self.sqrt2,
            sqrt5: -&self.sqrt5,
        }
    }
}

impl Mul<&BigRational> for &Surd {
    type Output = Surd;
    fn mul(self, rhs: &BigRational) -> Surd {
        self.scale(rhs)
    }
}

impl fmt::Display for Surd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if !self.rational.is_zero() || self.is_zero() {
            parts.push(format!("{}", self.rational));
        }
        if !self.sqrt2.is_zero() {
            parts.push(format!("{}*sqrt2", self.sqrt2));
        }
        if !self.sqrt5.is_zero() {
            parts.push(format!("{}*sqrt5", self.sqrt5));
        }
        write!(f, "{}", parts.join("+"))
    }
}

/// Parses a decimal literal (`-1.25`, `3`, `6.02e23`) or a fraction `p/q` exactly.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || ChronosError::Parse(format!("not an exact number: {s:?}"));
    if let Some((p, q)) = s.split_once('/') {
        let p = parse_rational(p)?;
        let q = parse_rational(q)?;
        if q.is_zero() {
            return Err(ChronosError::Parse(format!("zero denominator in {s:?}")));
        }
        return Ok(p / q);
    }
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (s, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let all: String = format!("{int_part}{frac_part}");
    let mut numer = BigInt::from_str(if all.is_empty() { "0" } else { &all }).map_err(|_| bad())?;
    if negative {
        numer = -numer;
    }
    let scale = exponent - frac_part.len() as i32;
    let ten = BigInt::from(10);
    let r = if scale >= 0 {
        BigRational::from_integer(numer * num_traits::pow(ten, scale as usize))
    } else {
        BigRational::new(numer, num_traits::pow(ten, (-scale) as usize))
    };
    Ok(r)
}

impl FromStr for Surd {
    type Err = ChronosError;

    /// Sums of terms `[coef*]atom` or bare rationals, where atom is one of
    /// `sqrt2`, `sqrt5`, `golden`. Example: `1 - sqrt2`, `3/2*golden`.
    fn from_str(s: &str) -> Result<Surd> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(ChronosError::Parse("empty number".into()));
        }
        // split into signed terms, keeping exponent signs attached
        let mut terms = Vec::new();
        let mut start = 0;
        let bytes = compact.as_bytes();
        for i in 1..bytes.len() {
            let c = bytes[i];
            let prev = bytes[i - 1];
            if (c == b'+' || c == b'-') && prev != b'e' && prev != b'E' && prev != b'*' && prev != b'/' {
                terms.push(&compact[start..i]);
                start = i;
            }
        }
        terms.push(&compact[start..]);

        let mut total = Surd::integer(0);
        for term in terms {
            let (sign, body) = match term.strip_prefix('-') {
                Some(rest) => (-1, rest),
                None => (1, term.strip_prefix('+').unwrap_or(term)),
            };
            let (coef, atom) = match body.rsplit_once('*') {
                Some((c, a)) => (parse_rational(c)?, a),
                None => (BigRational::one(), body),
            };
            let unit = match atom {
                "sqrt2" => Surd::sqrt2(),
                "sqrt5" => Surd {
                    rational: BigRational::zero(),
                    sqrt2: BigRational::zero(),
                    sqrt5: BigRational::one(),
                },
                "golden" => Surd::golden(),
                other if body.contains('*') => {
                    return Err(ChronosError::Parse(format!("unknown symbol {other:?}")))
                }
                other => Surd::from_rational(parse_rational(other)?),
            };
            let signed = coef * BigRational::from_integer(sign.into());
            total = &total + &unit.scale(&signed);
        }
        Ok(total)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(p: i64, d: i64) -> BigRational {
        BigRational::new(p.into(), d.into())
    }

    #[test]
    fn decimals_parse_exactly() {
        assert_eq!(parse_rational("1.25").unwrap(), q(5, 4));
        assert_eq!(parse_rational("-0.1").unwrap(), q(-1, 10));
        assert_eq!(parse_rational("2e3").unwrap(), q(2000, 1));
        assert_eq!(parse_rational("1.5E-1").unwrap(), q(3, 20));
        assert_eq!(parse_rational("7/3").unwrap(), q(7, 3));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational(".").is_err());
    }

    #[test]
    fn symbolic_sums() {
        let s: Surd = "1 - sqrt2".parse().unwrap();
        assert_eq!(s.rational, q(1, 1));
        assert_eq!(s.sqrt2, q(-1, 1));
        let g: Surd = "golden".parse().unwrap();
        assert!((g.to_f64() - 1.618_033_988_749_895).abs() < 1e-15);
        let h: Surd = "3/2*sqrt5+1e-1".parse().unwrap();
        assert_eq!(h.sqrt5, q(3, 2));
        assert_eq!(h.rational, q(1, 10));
        assert!("2*pi".parse::<Surd>().is_err());
    }

    #[test]
    fn rational_ratio_decisions() {
        let a: Surd = "2+2*sqrt2".parse().unwrap();
        let b: Surd = "1+sqrt2".parse().unwrap();
        assert_eq!(a.rational_ratio(&b), Some(q(2, 1)));
        let c: Surd = "1+2*sqrt2".parse().unwrap();
        assert_eq!(c.rational_ratio(&b), None);
        assert_eq!(Surd::integer(3).rational_ratio(&Surd::integer(6)), Some(q(1, 2)));
        assert_eq!(Surd::sqrt2().rational_ratio(&Surd::integer(1)), None);
    }

    #[test]
    fn signs_of_near_cancellations() {
        // 99/70 - sqrt2 > 0 (convergent above), 140/99 - sqrt2 < 0
        let above: Surd = "99/70 - sqrt2".parse().unwrap();
        let below: Surd = "140/99 - sqrt2".parse().unwrap();
        assert_eq!(above.signum(), 1);
        assert_eq!(below.signum(), -1);
    }
}
