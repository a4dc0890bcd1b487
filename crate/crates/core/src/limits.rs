//! Closed-form limits of the end ratios of the line families and the two
//! threshold slopes that separate the monotonicity regimes.
//!
//! For `k = -a1/a2` the last ratio of `l_n` tends to
//! `((5 - sqrt 5)/6)^a1 ((3 + sqrt 5)/2)^a2` and the first ratio of `L_n`
//! tends to `(3 sqrt 2 / 4)^(a1 + a2) (1 + sqrt 2)^(a2 - a1)`. Both live in a
//! quadratic field and are computed exactly; decimals are rendered from the
//! exact value.

use core::cmp::Ordering;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::Signed;

use crate::lattice::Rational;
use crate::real::{Real, GUARD_DIGITS};
use crate::surd::QuadraticSurd;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SlopeRegime {
    /// `k >= k_plus`: values increase along every line of this slope.
    Increasing,
    /// `k <= k_minus`: values decrease along every line of this slope.
    Decreasing,
    /// `k_minus < k < k_plus`: almost every line is non-monotonic.
    Mixed,
}

fn check_parts(a1: u64, a2: u64) -> Result<()> {
    if a1 == 0 || a2 == 0 {
        return Err(Error::OutOfRange { q: a2, p: a1 });
    }
    if a1.gcd(&a2) != 1 {
        return Err(Error::NotCoprime { q: a2, p: a1 });
    }
    Ok(())
}

/// Exact limit of the last ratio along `l_n`, as an element of `Q(sqrt 5)`.
pub fn limit_last_ratio_exact(a1: u64, a2: u64) -> Result<QuadraticSurd> {
    check_parts(a1, a2)?;
    // 2 sqrt5 / (3 (1 + sqrt5)) = (5 - sqrt5)/6 and phi^2 = (3 + sqrt5)/2
    let shrink = QuadraticSurd::new(5, -1, 6, 5);
    let phi_sq = QuadraticSurd::new(3, 1, 2, 5);
    Ok(shrink.pow(a1).mul(&phi_sq.pow(a2)))
}

/// Exact limit of the first ratio along `L_n`, as an element of `Q(sqrt 2)`.
pub fn limit_first_ratio_exact(a1: u64, a2: u64) -> Result<QuadraticSurd> {
    check_parts(a1, a2)?;
    // 3 / (2 sqrt2) = 3 sqrt2 / 4
    let base = QuadraticSurd::new(0, 3, 4, 2);
    let silver = QuadraticSurd::new(1, 1, 1, 2);
    let exp = a2 as i64 - a1 as i64;
    Ok(base.pow(a1 + a2).mul(&silver.powi(exp)))
}

/// `lim r_{l_n}` at the second-to-last point, to `digits` places.
pub fn limit_last_ratio(a1: u64, a2: u64, digits: u32) -> Result<Real> {
    Ok(limit_last_ratio_exact(a1, a2)?.to_real(digits + GUARD_DIGITS).rescale(digits))
}

/// `lim r_{L_n}` at the first point, to `digits` places.
pub fn limit_first_ratio(a1: u64, a2: u64, digits: u32) -> Result<Real> {
    Ok(limit_first_ratio_exact(a1, a2)?.to_real(digits + GUARD_DIGITS).rescale(digits))
}

/// The threshold slopes with the constants they are built from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosedFormConstants {
    pub phi: Real,
    pub silver: Real,
    /// `-ln(3(2 + sqrt2)/4) / ln(2(2 + sqrt2)/3)`.
    pub k_plus: Real,
    /// `-2 ln(phi) / ln(3(1 + sqrt5)/(2 sqrt5))`.
    pub k_minus: Real,
    pub digits: u32,
}

struct LogConstants {
    /// `ln(3 / (2 sqrt 2))`
    ln_first_base: Real,
    /// `ln(1 + sqrt 2)`
    ln_silver: Real,
    /// `ln(3 (1 + sqrt 5) / (2 sqrt 5))`
    ln_last_base: Real,
    /// `ln(phi)`
    ln_phi: Real,
    sqrt2: Real,
    sqrt5: Real,
}

impl LogConstants {
    fn at(work: u32) -> Self {
        let one = BigUint::from(1u32);
        let sqrt2 = Real::sqrt_ratio(&BigUint::from(2u32), &one, work);
        let sqrt5 = Real::sqrt_ratio(&BigUint::from(5u32), &one, work);
        let int = |v: i64| Real::from_integer(v, work);
        let silver = int(1).add(&sqrt2);
        let phi = int(1).add(&sqrt5).div(&int(2));
        let first_base = int(3).mul(&sqrt2).div(&int(4));
        let last_base = int(3).mul(&int(1).add(&sqrt5)).div(&int(2).mul(&sqrt5));
        LogConstants {
            ln_first_base: first_base.ln(),
            ln_silver: silver.ln(),
            ln_last_base: last_base.ln(),
            ln_phi: phi.ln(),
            sqrt2,
            sqrt5,
        }
    }
}

/// `k_plus` and `k_minus` to `digits` places.
pub fn thresholds(digits: u32) -> ClosedFormConstants {
    let work = digits + GUARD_DIGITS;
    let c = LogConstants::at(work);
    let int = |v: i64| Real::from_integer(v, work);
    let two_plus_sqrt2 = int(2).add(&c.sqrt2);
    let num_plus = int(3).mul(&two_plus_sqrt2).div(&int(4)).ln();
    let den_plus = int(2).mul(&two_plus_sqrt2).div(&int(3)).ln();
    let k_plus = num_plus.div(&den_plus).neg();
    let k_minus = int(2).mul(&c.ln_phi).div(&c.ln_last_base).neg();
    ClosedFormConstants {
        phi: int(1).add(&c.sqrt5).div(&int(2)).rescale(digits),
        silver: int(1).add(&c.sqrt2).rescale(digits),
        k_plus: k_plus.rescale(digits),
        k_minus: k_minus.rescale(digits),
        digits,
    }
}

const START_PRECISION: u32 = 40;
const MAX_PRECISION: u32 = 5120;

// Sign of c1 * x1 + c2 * x2 where each x is accurate to 10^-(work-6).
fn certified_sign(c1: &BigInt, x1: &Real, c2: &BigInt, x2: &Real, work: u32) -> Option<Ordering> {
    let value = x1.mul_int(c1).add(&x2.mul_int(c2));
    let slack = Real::from_mantissa(
        (c1.abs() + c2.abs() + 1u32) * BigInt::from(10u32).pow(6),
        work,
    );
    let mag = if value.is_negative() { value.neg() } else { value.clone() };
    (mag > slack).then(|| value.signum())
}

/// Regime of a rational slope.
///
/// Nonnegative slopes are increasing. For `k = -a1/a2` the regime follows
/// from the signs of `ln` of the two limit ratios, evaluated in fixed point
/// with an explicit error allowance and refined until the sign is certain.
/// Neither limit can equal 1 for a rational slope, so refinement terminates.
pub fn slope_regime(k: Rational) -> Result<SlopeRegime> {
    if !k.is_negative() {
        return Ok(SlopeRegime::Increasing);
    }
    let a1 = BigInt::from(-*k.numer());
    let a2 = BigInt::from(*k.denom());
    let mut work = START_PRECISION;
    let mut first_sign = None;
    let mut last_sign = None;
    while work <= MAX_PRECISION {
        let c = LogConstants::at(work);
        if first_sign.is_none() {
            // ln lim_first = (a1 + a2) ln(3/(2 sqrt2)) + (a2 - a1) ln(1 + sqrt2)
            first_sign = certified_sign(&(&a1 + &a2), &c.ln_first_base, &(&a2 - &a1), &c.ln_silver, work);
        }
        if last_sign.is_none() {
            // ln lim_last = -a1 ln(3(1 + sqrt5)/(2 sqrt5)) + 2 a2 ln(phi)
            last_sign = certified_sign(&(-&a1), &c.ln_last_base, &(&a2 * 2u32), &c.ln_phi, work);
        }
        if let (Some(first), Some(last)) = (first_sign, last_sign) {
            return Ok(if first == Ordering::Greater {
                SlopeRegime::Increasing
            } else if last == Ordering::Less {
                SlopeRegime::Decreasing
            } else {
                SlopeRegime::Mixed
            });
        }
        work *= 2;
    }
    Err(Error::Undecidable)
}

/// Same decision as [`slope_regime`], made by exact comparison of the
/// quadratic-field limits with 1.
pub fn slope_regime_exact(k: Rational) -> Result<SlopeRegime> {
    if !k.is_negative() {
        return Ok(SlopeRegime::Increasing);
    }
    let (a1, a2) = ((-*k.numer()) as u64, *k.denom() as u64);
    if limit_first_ratio_exact(a1, a2)?.cmp_one() != Ordering::Less {
        Ok(SlopeRegime::Increasing)
    } else if limit_last_ratio_exact(a1, a2)?.cmp_one() != Ordering::Greater {
        Ok(SlopeRegime::Decreasing)
    } else {
        Ok(SlopeRegime::Mixed)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    #[test]
    fn last_ratio_limits() {
        assert_eq!(limit_last_ratio(1, 1, 6).unwrap().to_string(), "1.206011");
        let mixed = limit_last_ratio(6, 5, 10).unwrap();
        assert!(mixed > Real::from_integer(1, 0));
        assert_eq!(mixed.to_string(), "1.1752575388");
        // (2,1) is exactly 5/9
        let exact = limit_last_ratio_exact(2, 1).unwrap();
        assert_eq!(exact.as_rational(), Some((BigInt::from(5), BigInt::from(9))));
        assert_eq!(limit_last_ratio(2, 1, 4).unwrap().to_string(), "0.5556");
    }

    #[test]
    fn first_ratio_limits() {
        let exact = limit_first_ratio_exact(1, 1).unwrap();
        assert_eq!(exact.as_rational(), Some((BigInt::from(9), BigInt::from(8))));
        assert_eq!(limit_first_ratio(1, 1, 3).unwrap().to_string(), "1.125");
        assert_eq!(limit_first_ratio(6, 5, 6).unwrap().to_string(), "0.791705");
        assert_eq!(limit_first_ratio(2, 1, 6).unwrap().to_string(), "0.494257");
        assert!(limit_first_ratio(2, 4, 6).is_err());
    }

    #[test]
    fn printed_threshold_values() {
        let c = thresholds(4);
        assert_eq!(c.k_plus.to_string(), "-1.1432");
        assert_eq!(c.k_minus.to_string(), "-1.2417");
        assert!(c.k_minus < c.k_plus);
        assert_eq!(c.phi.to_string(), "1.6180");
        assert_eq!(c.silver.to_string(), "2.4142");
    }

    #[test]
    fn regimes() {
        let r = |n, d| slope_regime(Rational::new(n, d)).unwrap();
        assert_eq!(r(-1, 1), SlopeRegime::Increasing);
        assert_eq!(r(-2, 1), SlopeRegime::Decreasing);
        assert_eq!(r(-6, 5), SlopeRegime::Mixed);
        assert_eq!(r(-5, 4), SlopeRegime::Decreasing);
        assert_eq!(r(-9, 8), SlopeRegime::Increasing);
        assert_eq!(r(0, 1), SlopeRegime::Increasing);
        assert_eq!(r(1, 3), SlopeRegime::Increasing);
    }

    #[test]
    fn regime_near_thresholds() {
        // |k_plus| = 1.14320438..., |k_minus| = 1.24166848...
        let r = |n, d| slope_regime(Rational::new(n, d)).unwrap();
        assert_eq!(r(-114_320, 100_000), SlopeRegime::Increasing);
        assert_eq!(r(-114_321, 100_000), SlopeRegime::Mixed);
        assert_eq!(r(-124_166, 100_000), SlopeRegime::Mixed);
        assert_eq!(r(-124_167, 100_000), SlopeRegime::Decreasing);
    }
}
