//! Exact ratios between neighbouring generalized Markov numbers.

use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::Zero;

use crate::lattice::{LatticePoint, RationalLine};
use crate::markov::{generalized_markov, generalized_markov_at};
use crate::surd::QuadraticSurd;
use crate::{Error, ExactNat, Result};

/// `num / den` with `den >= 1`, kept unreduced.
///
/// Comparisons go through cross-multiplication, so equality is value
/// equality even between unreduced forms.
#[derive(Clone, Debug)]
pub struct ExactRatio {
    pub num: ExactNat,
    pub den: ExactNat,
}

impl ExactRatio {
    pub fn new(num: ExactNat, den: ExactNat) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        Ok(ExactRatio { num, den })
    }

    pub fn reduced(&self) -> ExactRatio {
        let g = self.num.gcd(&self.den);
        ExactRatio { num: &self.num / &g, den: &self.den / &g }
    }

    pub fn cmp_one(&self) -> Ordering {
        self.num.cmp(&self.den)
    }

    /// Compare with the rational `n/d` (`d > 0`).
    pub fn cmp_fraction(&self, n: &ExactNat, d: &ExactNat) -> Ordering {
        (&self.num * d).cmp(&(n * &self.den))
    }

    /// Exact comparison with a quadratic irrational.
    pub fn cmp_surd(&self, s: &QuadraticSurd) -> Ordering {
        use num_bigint::BigInt;
        s.cmp_rational(&BigInt::from(self.num.clone()), &BigInt::from(self.den.clone()))
            .reverse()
    }

    /// Decimal expansion truncated to `digits` places.
    pub fn to_decimal(&self, digits: u32) -> String {
        use core::fmt::Write;
        let (int, mut rem) = self.num.div_rem(&self.den);
        let mut out = String::new();
        let _ = write!(out, "{int}");
        if digits > 0 {
            out.push('.');
            let scaled = {
                rem *= BigUint::from(10u32).pow(digits);
                rem / &self.den
            };
            let frac = scaled.to_str_radix(10);
            for _ in frac.len()..digits as usize {
                out.push('0');
            }
            out.push_str(&frac);
        }
        out
    }

    /// Nearest `f64`, for plotting only.
    pub fn to_f64(&self) -> f64 {
        self.to_decimal(20).parse().unwrap_or(f64::NAN)
    }

    pub fn is_one(&self) -> bool {
        self.num == self.den
    }
}

impl PartialEq for ExactRatio {
    fn eq(&self, other: &Self) -> bool {
        compare_exact(self, other) == Ordering::Equal
    }
}

impl Eq for ExactRatio {}

impl PartialOrd for ExactRatio {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExactRatio {
    fn cmp(&self, other: &Self) -> Ordering {
        compare_exact(self, other)
    }
}

impl fmt::Display for ExactRatio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

/// `num1 * den2` against `num2 * den1`.
pub fn compare_exact(r1: &ExactRatio, r2: &ExactRatio) -> Ordering {
    (&r1.num * &r2.den).cmp(&(&r2.num * &r1.den))
}

/// `h(q, p) = m(q+1, p) / m(q, p)` for `0 <= p <= q`, `q >= 1`.
pub fn horizontal_ratio(q: u64, p: u64) -> Result<ExactRatio> {
    if q == 0 || p > q {
        return Err(Error::OutOfRange { q, p });
    }
    ExactRatio::new(generalized_markov(q + 1, p)?, generalized_markov(q, p)?)
}

/// `v(q, p) = m(q, p+1) / m(q, p)` for `0 <= p < q`.
pub fn vertical_ratio(q: u64, p: u64) -> Result<ExactRatio> {
    if p >= q {
        return Err(Error::OutOfRange { q, p });
    }
    ExactRatio::new(generalized_markov(q, p + 1)?, generalized_markov(q, p)?)
}

/// Ratio of values at two points, `m(to) / m(from)`.
pub fn point_ratio(from: LatticePoint, to: LatticePoint) -> Result<ExactRatio> {
    ExactRatio::new(generalized_markov_at(to)?, generalized_markov_at(from)?)
}

/// Ratios along a line: `(P_i, m(P_{i+1}) / m(P_i))` for consecutive region
/// points. Needs at least two points.
pub fn line_ratios(
    line: &RationalLine,
    x_cap: Option<i64>,
) -> Result<Vec<(LatticePoint, ExactRatio)>> {
    let points = line.region_points(x_cap)?;
    if points.len() < 2 {
        return Err(Error::TooFewPoints { found: points.len() });
    }
    let values = points
        .iter()
        .map(|&p| generalized_markov_at(p))
        .collect::<Result<Vec<_>>>()?;
    Ok(points
        .iter()
        .zip(values.windows(2))
        .map(|(&p, w)| (p, ExactRatio { num: w[1].clone(), den: w[0].clone() }))
        .collect())
}

/// `1 + sqrt 2`.
pub fn silver_ratio() -> QuadraticSurd {
    QuadraticSurd::new(1, 1, 1, 2)
}

/// `(1 + sqrt 5) / 2`.
pub fn golden_ratio() -> QuadraticSurd {
    QuadraticSurd::new(1, 1, 2, 5)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    fn r(n: u64, d: u64) -> ExactRatio {
        ExactRatio::new(ExactNat::from(n), ExactNat::from(d)).unwrap()
    }

    fn parts(x: &ExactRatio) -> (ExactNat, ExactNat) {
        (x.num.clone(), x.den.clone())
    }

    #[test]
    fn horizontal_examples() {
        assert_eq!(parts(&horizontal_ratio(2, 1).unwrap()), parts(&r(13, 5)));
        assert_eq!(parts(&horizontal_ratio(2, 2).unwrap()), parts(&r(29, 12)));
        assert_eq!(parts(&horizontal_ratio(3, 1).unwrap()), parts(&r(34, 13)));
        assert!(horizontal_ratio(0, 0).is_err());
        assert!(horizontal_ratio(2, 3).is_err());
    }

    #[test]
    fn vertical_examples() {
        assert_eq!(parts(&vertical_ratio(1, 0).unwrap()), parts(&r(2, 1)));
        assert_eq!(parts(&vertical_ratio(3, 1).unwrap()), parts(&r(29, 13)));
        assert_eq!(parts(&vertical_ratio(4, 2).unwrap()), parts(&r(169, 75)));
        assert!(vertical_ratio(3, 3).is_err());
    }

    #[test]
    fn comparisons() {
        assert_eq!(compare_exact(&r(194, 169), &r(233, 194)), Ordering::Less);
        assert_eq!(compare_exact(&r(5, 1), &r(5, 1)), Ordering::Equal);
        assert_eq!(compare_exact(&r(13, 5), &r(29, 12)), Ordering::Greater);
        assert_eq!(r(10, 4), r(5, 2));
    }

    #[test]
    fn decimals() {
        assert_eq!(r(233, 194).to_decimal(6), "1.201030");
        assert_eq!(r(1, 1).to_decimal(3), "1.000");
        assert_eq!(r(9077, 16725).to_decimal(4), "0.5427");
        assert_eq!(r(7, 2).to_decimal(0), "3");
    }

    #[test]
    fn surd_bounds() {
        // 12/5 > phi, 12/5 < 1 + sqrt 2
        assert_eq!(r(12, 5).cmp_surd(&golden_ratio()), Ordering::Greater);
        assert_eq!(r(12, 5).cmp_surd(&silver_ratio()), Ordering::Less);
        assert_eq!(r(5, 2).cmp_surd(&silver_ratio()), Ordering::Greater);
    }

    #[test]
    fn line_ratio_examples() {
        let l = RationalLine::new(-1, 1, 7, 1).unwrap();
        let got: Vec<_> = line_ratios(&l, None)
            .unwrap()
            .iter()
            .map(|(p, x)| (*p, x.to_string()))
            .collect();
        assert_eq!(
            got,
            [(LatticePoint::new(4, 3), "194/169".to_string()), (LatticePoint::new(5, 2), "233/194".to_string())]
        );
        let l = RationalLine::new(-2, 1, 20, 1).unwrap();
        let got: Vec<_> = line_ratios(&l, None).unwrap().iter().map(|(_, x)| x.to_string()).collect();
        assert_eq!(got, ["16725/33461", "9077/16725"]);
        let l = RationalLine::new(1, 2, 0, 1).unwrap();
        let got: Vec<_> = line_ratios(&l, Some(6)).unwrap().iter().map(|(_, x)| x.to_string()).collect();
        assert_eq!(got, ["75/5", "1120/75"]);
        let l = RationalLine::new(-2, 1, 9, 1).unwrap();
        assert_eq!(line_ratios(&l, None), Err(Error::TooFewPoints { found: 1 }));
    }
}
