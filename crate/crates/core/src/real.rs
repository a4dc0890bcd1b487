//! Decimal fixed-point reals backed by big integers.
//!
//! A [`Real`] is `mantissa / 10^digits`. Public producers in this crate work
//! at `digits + GUARD_DIGITS` and round back, so the printed digits are the
//! correctly rounded value up to pathological near-ties.

use alloc::string::String;
use core::cmp::Ordering;
use core::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Extra decimal digits carried internally before rounding to the caller's
/// precision.
pub const GUARD_DIGITS: u32 = 12;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Real {
    mantissa: BigInt,
    digits: u32,
}

pub(crate) fn pow10(n: u32) -> BigInt {
    BigInt::from(10u32).pow(n)
}

impl Real {
    pub fn from_mantissa(mantissa: BigInt, digits: u32) -> Self {
        Real { mantissa, digits }
    }

    pub fn from_integer(value: impl Into<BigInt>, digits: u32) -> Self {
        Real { mantissa: value.into() * pow10(digits), digits }
    }

    /// `floor(num / den)` at the given precision; `den` must be nonzero.
    pub fn from_ratio(num: &BigInt, den: &BigInt, digits: u32) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        let mantissa = (num * pow10(digits)).div_floor(den);
        Real { mantissa, digits }
    }

    /// `floor(sqrt(num / den))` at the given precision.
    pub fn sqrt_ratio(num: &BigUint, den: &BigUint, digits: u32) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        let scaled = num * BigUint::from(10u32).pow(2 * digits) / den;
        Real { mantissa: BigInt::from(scaled.sqrt()), digits }
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mantissa
    }

    pub fn digits(&self) -> u32 {
        self.digits
    }

    pub fn is_negative(&self) -> bool {
        self.mantissa.is_negative()
    }

    pub fn signum(&self) -> Ordering {
        self.mantissa.sign().cmp(&Sign::NoSign)
    }

    /// Change precision. Dropping digits rounds half away from zero.
    pub fn rescale(&self, digits: u32) -> Self {
        match digits.cmp(&self.digits) {
            Ordering::Equal => self.clone(),
            Ordering::Greater => Real {
                mantissa: &self.mantissa * pow10(digits - self.digits),
                digits,
            },
            Ordering::Less => {
                let div = pow10(self.digits - digits);
                let half = &div / 2u32;
                let mag = (self.mantissa.abs() + half) / div;
                let mantissa = if self.mantissa.is_negative() { -mag } else { mag };
                Real { mantissa, digits }
            }
        }
    }

    fn aligned(&self, other: &Real) -> (BigInt, BigInt, u32) {
        let d = self.digits.max(other.digits);
        (self.rescale(d).mantissa, other.rescale(d).mantissa, d)
    }

    pub fn add(&self, other: &Real) -> Real {
        let (a, b, d) = self.aligned(other);
        Real { mantissa: a + b, digits: d }
    }

    pub fn sub(&self, other: &Real) -> Real {
        let (a, b, d) = self.aligned(other);
        Real { mantissa: a - b, digits: d }
    }

    pub fn neg(&self) -> Real {
        Real { mantissa: -&self.mantissa, digits: self.digits }
    }

    /// Product, truncated toward negative infinity.
    pub fn mul(&self, other: &Real) -> Real {
        let (a, b, d) = self.aligned(other);
        Real { mantissa: (a * b).div_floor(&pow10(d)), digits: d }
    }

    pub fn mul_int(&self, k: &BigInt) -> Real {
        Real { mantissa: &self.mantissa * k, digits: self.digits }
    }

    /// Quotient, truncated toward negative infinity. Panics on division by zero.
    pub fn div(&self, other: &Real) -> Real {
        let (a, b, d) = self.aligned(other);
        assert!(!b.is_zero(), "division by zero");
        Real { mantissa: (a * pow10(d)).div_floor(&b), digits: d }
    }

    pub fn sqrt(&self) -> Real {
        assert!(!self.is_negative(), "square root of a negative value");
        let scaled = &self.mantissa * pow10(self.digits);
        Real { mantissa: scaled.sqrt(), digits: self.digits }
    }

    /// Integer power by repeated squaring; negative powers go through `div`.
    pub fn powi(&self, exp: i64) -> Real {
        let one = Real::from_integer(1, self.digits);
        let mut base = self.clone();
        let mut e = exp.unsigned_abs();
        let mut acc = one.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        if exp < 0 {
            one.div(&acc)
        } else {
            acc
        }
    }

    /// Natural logarithm of a positive value.
    ///
    /// Halves or doubles into `[3/4, 3/2)`, then sums
    /// `ln y = 2 atanh((y - 1) / (y + 1))`. Error is a few units in the last
    /// place of the working precision.
    pub fn ln(&self) -> Real {
        assert!(self.signum() == Ordering::Greater, "logarithm of a nonpositive value");
        let digits = self.digits;
        let work = digits + 8;
        let one = pow10(work);
        let mut y = self.rescale(work).mantissa;
        let mut k: i64 = 0;
        let upper = &one * 3u32 / 2u32;
        let lower = &one * 3u32 / 4u32;
        while y >= upper {
            y /= 2u32;
            k += 1;
        }
        while y < lower {
            y *= 2u32;
            k -= 1;
        }
        let z = ((&y - &one) * &one).div_floor(&(&y + &one));
        let mut acc = atanh_fixed(&z, work) * 2u32;
        if k != 0 {
            let z3 = &one / 3u32;
            let ln2 = atanh_fixed(&z3, work) * 2u32;
            acc += ln2 * BigInt::from(k);
        }
        Real { mantissa: acc, digits: work }.rescale(digits)
    }

    /// Decimal string with exactly `digits` fractional digits.
    pub fn to_decimal_string(&self) -> String {
        use core::fmt::Write;
        let mut out = String::new();
        let _ = write!(out, "{self}");
        out
    }

    /// Nearest `f64`, for display and plotting only.
    pub fn to_f64(&self) -> f64 {
        self.to_decimal_string().parse().unwrap_or(f64::NAN)
    }
}

// atanh(z) = z + z^3/3 + z^5/5 + ... at scale 10^work, for |z| well below 1.
fn atanh_fixed(z: &BigInt, work: u32) -> BigInt {
    let one = pow10(work);
    let z2 = (z * z).div_floor(&one);
    let mut power = z.clone();
    let mut sum = BigInt::zero();
    let mut n = BigInt::one();
    loop {
        let term = &power / &n;
        if term.is_zero() {
            break;
        }
        sum += term;
        power = (&power * &z2) / &one;
        n += 2u32;
    }
    sum
}

impl fmt::Display for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let scale = pow10(self.digits);
        let mag = self.mantissa.abs();
        let (int, frac) = mag.div_rem(&scale);
        if self.mantissa.is_negative() {
            f.write_str("-")?;
        }
        write!(f, "{int}")?;
        if self.digits > 0 {
            let frac = frac.to_str_radix(10);
            f.write_str(".")?;
            for _ in frac.len()..self.digits as usize {
                f.write_str("0")?;
            }
            f.write_str(&frac)?;
        }
        Ok(())
    }
}

impl PartialOrd for Real {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Real {
    fn cmp(&self, other: &Self) -> Ordering {
        let d = self.digits.max(other.digits);
        let a = &self.mantissa * pow10(d - self.digits);
        let b = &other.mantissa * pow10(d - other.digits);
        a.cmp(&b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    #[test]
    fn display_pads_fraction() {
        let r = Real::from_mantissa(BigInt::from(-1205), 4);
        assert_eq!(r.to_string(), "-0.1205");
        let r = Real::from_mantissa(BigInt::from(1003), 3);
        assert_eq!(r.to_string(), "1.003");
        assert_eq!(Real::from_integer(7, 0).to_string(), "7");
    }

    #[test]
    fn rescale_rounds_half_away_from_zero() {
        let r = Real::from_mantissa(BigInt::from(12345), 4);
        assert_eq!(r.rescale(3).to_string(), "1.235");
        assert_eq!(r.neg().rescale(3).to_string(), "-1.235");
        assert_eq!(r.rescale(6).to_string(), "1.234500");
    }

    #[test]
    fn sqrt_two() {
        let r = Real::sqrt_ratio(&BigUint::from(2u32), &BigUint::from(1u32), 20);
        assert_eq!(r.to_string(), "1.41421356237309504880");
    }

    #[test]
    fn ln_matches_reference_digits() {
        // ln 2 and ln 10 to 40 digits, from an independent multiprecision run.
        let two = Real::from_integer(2, 50);
        assert_eq!(
            two.ln().rescale(40).to_string(),
            "0.6931471805599453094172321214581765680755"
        );
        let ten = Real::from_integer(10, 50);
        assert_eq!(
            ten.ln().rescale(40).to_string(),
            "2.3025850929940456840179914546843642076011"
        );
        let tenth = Real::from_ratio(&BigInt::from(1), &BigInt::from(10), 50);
        assert_eq!(
            tenth.ln().rescale(40).to_string(),
            "-2.3025850929940456840179914546843642076011"
        );
    }

    #[test]
    fn powi_and_div() {
        let x = Real::from_ratio(&BigInt::from(3), &BigInt::from(2), 30);
        assert_eq!(x.powi(3).rescale(6).to_string(), "3.375000");
        assert_eq!(x.powi(-2).rescale(6).to_string(), "0.444444");
    }

    #[test]
    fn ordering_across_scales() {
        let a = Real::from_mantissa(BigInt::from(15), 1);
        let b = Real::from_mantissa(BigInt::from(149), 2);
        assert!(a > b);
        assert_eq!(a.cmp(&a.rescale(5)), Ordering::Equal);
    }
}
