//! Exact arithmetic in real quadratic fields `Q(sqrt d)`.
//!
//! The closed-form limits of boundary ratios live in `Q(sqrt 2)` and
//! `Q(sqrt 5)`, so they can be compared with 1 (or with rationals) without
//! any rounding.

use core::cmp::Ordering;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::real::{pow10, Real};

/// `(a + b sqrt(d)) / c` with `c > 0` and squarefree `d > 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadraticSurd {
    a: BigInt,
    b: BigInt,
    c: BigInt,
    d: u32,
}

impl QuadraticSurd {
    pub fn new(a: impl Into<BigInt>, b: impl Into<BigInt>, c: impl Into<BigInt>, d: u32) -> Self {
        let c = c.into();
        assert!(!c.is_zero(), "zero denominator");
        assert!(d > 1, "d must exceed 1");
        let (a, b, c) = if c.is_negative() {
            (-a.into(), -b.into(), -c)
        } else {
            (a.into(), b.into(), c)
        };
        QuadraticSurd { a, b, c, d }.normalized()
    }

    pub fn rational(num: impl Into<BigInt>, den: impl Into<BigInt>, d: u32) -> Self {
        Self::new(num, 0, den, d)
    }

    pub fn one(d: u32) -> Self {
        Self::rational(1, 1, d)
    }

    pub fn radicand(&self) -> u32 {
        self.d
    }

    fn normalized(mut self) -> Self {
        let g = self.a.gcd(&self.b).gcd(&self.c);
        if !g.is_zero() && !g.is_one() {
            self.a /= &g;
            self.b /= &g;
            self.c /= &g;
        }
        self
    }

    /// `Some((num, den))` when the irrational part vanishes.
    pub fn as_rational(&self) -> Option<(BigInt, BigInt)> {
        self.b.is_zero().then(|| (self.a.clone(), self.c.clone()))
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.d, other.d, "mixed quadratic fields");
        let d = BigInt::from(self.d);
        QuadraticSurd {
            a: &self.a * &other.a + &d * &self.b * &other.b,
            b: &self.a * &other.b + &self.b * &other.a,
            c: &self.c * &other.c,
            d: self.d,
        }
        .normalized()
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.d, other.d, "mixed quadratic fields");
        QuadraticSurd {
            a: &self.a * &other.c - &other.a * &self.c,
            b: &self.b * &other.c - &other.b * &self.c,
            c: &self.c * &other.c,
            d: self.d,
        }
        .normalized()
    }

    /// Multiplicative inverse via the conjugate. Panics on zero.
    pub fn recip(&self) -> Self {
        let norm = &self.a * &self.a - BigInt::from(self.d) * &self.b * &self.b;
        assert!(!norm.is_zero(), "inverse of zero");
        Self::new(&self.c * &self.a, -(&self.c * &self.b), norm, self.d)
    }

    pub fn pow(&self, mut exp: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(self.d);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mul(&base);
            }
            exp >>= 1;
            if exp > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn powi(&self, exp: i64) -> Self {
        let p = self.pow(exp.unsigned_abs());
        if exp < 0 {
            p.recip()
        } else {
            p
        }
    }

    /// Exact sign of the value.
    pub fn signum(&self) -> Ordering {
        // sign of a + b sqrt d; c > 0
        let sa = self.a.sign();
        let sb = self.b.sign();
        match (sa, sb) {
            (Sign::NoSign, s) | (s, Sign::NoSign) => s.cmp(&Sign::NoSign),
            (x, y) if x == y => x.cmp(&Sign::NoSign),
            _ => {
                let a2 = &self.a * &self.a;
                let db2 = BigInt::from(self.d) * &self.b * &self.b;
                // |a| vs |b| sqrt d decides which term dominates
                match a2.cmp(&db2) {
                    Ordering::Greater => sa.cmp(&Sign::NoSign),
                    Ordering::Less => sb.cmp(&Sign::NoSign),
                    Ordering::Equal => Ordering::Equal,
                }
            }
        }
    }

    pub fn cmp_rational(&self, num: &BigInt, den: &BigInt) -> Ordering {
        self.sub(&Self::new(num.clone(), 0, den.clone(), self.d)).signum()
    }

    pub fn cmp_one(&self) -> Ordering {
        self.cmp_rational(&BigInt::one(), &BigInt::one())
    }

    /// Floor of `value * 10^digits` (within one unit of the last place).
    pub fn to_real(&self, digits: u32) -> Real {
        let work = digits + 2;
        let scale = pow10(work);
        let b_scaled = BigUint::from(self.d) * self.b.magnitude() * self.b.magnitude()
            * scale.magnitude()
            * scale.magnitude();
        let root = BigInt::from(b_scaled.sqrt());
        let irr = if self.b.is_negative() { -root } else { root };
        let mantissa = (&self.a * &scale + irr).div_floor(&self.c);
        Real::from_mantissa(mantissa, work).rescale(digits)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    #[test]
    fn silver_ratio_inverse() {
        let silver = QuadraticSurd::new(1, 1, 1, 2);
        let inv = silver.recip();
        assert_eq!(inv, QuadraticSurd::new(-1, 1, 1, 2));
        assert_eq!(silver.mul(&inv), QuadraticSurd::one(2));
    }

    #[test]
    fn signs() {
        // sqrt 2 - 1 > 0, 1 - sqrt 2 < 0, 3 - 2 sqrt 2 > 0
        assert_eq!(QuadraticSurd::new(-1, 1, 1, 2).signum(), Ordering::Greater);
        assert_eq!(QuadraticSurd::new(1, -1, 1, 2).signum(), Ordering::Less);
        assert_eq!(QuadraticSurd::new(3, -2, 1, 2).signum(), Ordering::Greater);
        assert_eq!(QuadraticSurd::new(0, 0, 5, 2).signum(), Ordering::Equal);
    }

    #[test]
    fn golden_ratio_decimal() {
        let phi = QuadraticSurd::new(1, 1, 2, 5);
        assert_eq!(phi.to_real(15).to_string(), "1.618033988749895");
        assert_eq!(phi.pow(2), QuadraticSurd::new(3, 1, 2, 5));
    }

    #[test]
    fn three_over_two_root_two_squared_is_rational() {
        let x = QuadraticSurd::new(0, 3, 4, 2);
        assert_eq!(x.pow(2).as_rational(), Some((BigInt::from(9), BigInt::from(8))));
    }
}
