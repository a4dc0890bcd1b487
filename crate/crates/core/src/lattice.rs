//! Integral points of rational lines inside the region `x > y >= 1`.

use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{Signed, Zero};

use crate::{Error, Result};

/// Exact rational with machine-size parts, always in lowest terms.
pub type Rational = Ratio<i64>;

type Wide = Ratio<i128>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LatticePoint {
    pub x: i64,
    pub y: i64,
}

impl LatticePoint {
    pub const fn new(x: i64, y: i64) -> Self {
        LatticePoint { x, y }
    }

    /// `x > y >= 1`.
    pub fn in_region(&self) -> bool {
        self.x > self.y && self.y >= 1
    }

    /// `x >= y >= 0`: region points plus the two boundary rays.
    pub fn in_closed_region(&self) -> bool {
        self.x >= self.y && self.y >= 0
    }

    pub fn offset(&self, dx: i64, dy: i64) -> Self {
        LatticePoint { x: self.x + dx, y: self.y + dy }
    }
}

impl fmt::Display for LatticePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ShiftMode {
    /// `l[t]: y = k(x - t) + b`.
    XAxis,
    /// `l<t>: y - t = k(x - t) + b`.
    Diagonal,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    /// `l_n: y = k(x - n) + 1`, through `(n, 1)`.
    Lower,
    /// `L_n: y = k(x - n) + n - 1`, through `(n, n - 1)`.
    Upper,
}

/// The line `y = kx + b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RationalLine {
    k: Rational,
    b: Rational,
}

fn ratio(n: i64, d: i64) -> Result<Rational> {
    if d == 0 {
        return Err(Error::ZeroDenominator);
    }
    Ok(Rational::new(n, d))
}

fn wide(r: Rational) -> Wide {
    Wide::new_raw(*r.numer() as i128, *r.denom() as i128)
}

fn narrow(r: Wide) -> Result<Rational> {
    let n = i64::try_from(*r.numer()).map_err(|_| Error::Overflow)?;
    let d = i64::try_from(*r.denom()).map_err(|_| Error::Overflow)?;
    Ok(Rational::new_raw(n, d))
}

fn floor_i128(r: &Wide) -> i128 {
    Integer::div_floor(r.numer(), r.denom())
}

fn ceil_i128(r: &Wide) -> i128 {
    -Integer::div_floor(&-r.numer(), r.denom())
}

// (g, s) with s * a = g (mod m), g = gcd(a, m)
fn ext_gcd(a: i128, m: i128) -> (i128, i128) {
    let (mut old_r, mut r) = (a, m);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    (old_r, old_s)
}

/// Solutions of `a x = c (mod m)` as `(x0, period)` with `0 <= x0 < period`.
fn solve_congruence(a: i128, c: i128, m: i128) -> Option<(i128, i128)> {
    let a = a.rem_euclid(m);
    let c = c.rem_euclid(m);
    let (g, s) = ext_gcd(a, m);
    if c % g != 0 {
        return None;
    }
    let period = m / g;
    let x0 = (s.rem_euclid(period) * (c / g).rem_euclid(period)).rem_euclid(period);
    Some((x0, period))
}

impl RationalLine {
    /// Canonical line from numerator/denominator pairs of `k` and `b`.
    pub fn new(kn: i64, kd: i64, bn: i64, bd: i64) -> Result<Self> {
        Ok(RationalLine { k: ratio(kn, kd)?, b: ratio(bn, bd)? })
    }

    pub fn from_parts(k: Rational, b: Rational) -> Self {
        RationalLine { k, b }
    }

    pub fn slope(&self) -> Rational {
        self.k
    }

    pub fn intercept(&self) -> Rational {
        self.b
    }

    /// `(a1, a2)` with `k = -a1/a2` in lowest terms, for negative slopes.
    pub fn negative_slope_parts(&self) -> Option<(i64, i64)> {
        self.k.is_negative().then(|| (-*self.k.numer(), *self.k.denom()))
    }

    /// Exact incidence test.
    pub fn contains(&self, p: LatticePoint) -> bool {
        let lhs = Wide::from_integer(p.y as i128);
        lhs == wide(self.k) * Wide::from_integer(p.x as i128) + wide(self.b)
    }

    pub fn shift(&self, t: i64, mode: ShiftMode) -> Result<Self> {
        let t = Rational::from_integer(t);
        match mode {
            ShiftMode::XAxis => self.shift_x(t),
            ShiftMode::Diagonal => {
                let b = wide(self.b) + wide(t) * (Wide::from_integer(1) - wide(self.k));
                Ok(RationalLine { k: self.k, b: narrow(b)? })
            }
        }
    }

    /// `l[t]` for a rational shift `t`.
    pub fn shift_x(&self, t: Rational) -> Result<Self> {
        let b = wide(self.b) - wide(self.k) * wide(t);
        Ok(RationalLine { k: self.k, b: narrow(b)? })
    }

    /// Iterator over region points in ascending `x`; unbounded when the slope
    /// is nonnegative and no cap is given.
    pub fn region_iter(&self, x_cap: Option<i64>) -> RegionIter {
        RegionIter::new(self, x_cap)
    }

    /// All region points with `x <= x_cap`, ascending in `x`. The cap is
    /// mandatory for nonnegative slopes.
    pub fn region_points(&self, x_cap: Option<i64>) -> Result<Vec<LatticePoint>> {
        if !self.k.is_negative() && x_cap.is_none() {
            return Err(Error::CapRequired);
        }
        Ok(self.region_iter(x_cap).collect())
    }

    /// First two and last two region points. The last pair is only filled for
    /// negative slopes.
    pub fn endpoints(&self) -> LineEndpoints {
        let mut head = self.region_iter(None);
        let first = head.next();
        let second = head.next();
        let (second_last, last) = if self.k.is_negative() {
            let all: Vec<_> = self.region_iter(None).collect();
            let n = all.len();
            (
                n.checked_sub(2).map(|i| all[i]),
                n.checked_sub(1).map(|i| all[i]),
            )
        } else {
            (None, None)
        };
        LineEndpoints { first, second, second_last, last }
    }
}

impl fmt::Display for RationalLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}/{},{}/{}",
            self.k.numer(),
            self.k.denom(),
            self.b.numer(),
            self.b.denom()
        )
    }
}

/// Parses `"n/d"` or a bare integer `"n"`.
pub fn parse_rational(s: &str) -> Result<Rational, ParseLineError> {
    let s = s.trim();
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: i64 = n.parse().map_err(|_| ParseLineError)?;
    let d: i64 = d.parse().map_err(|_| ParseLineError)?;
    if d == 0 {
        return Err(ParseLineError);
    }
    Ok(Rational::new(n, d))
}

/// Failure to parse a line or rational from text.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ParseLineError;

impl fmt::Display for ParseLineError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("expected rationals of the form n/d")
    }
}

impl core::error::Error for ParseLineError {}

impl FromStr for RationalLine {
    type Err = ParseLineError;

    /// `"kn/kd,bn/bd"`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (k, b) = s.split_once(',').ok_or(ParseLineError)?;
        Ok(RationalLine { k: parse_rational(k)?, b: parse_rational(b)? })
    }
}

#[derive(Clone, Debug)]
pub struct RegionIter {
    k: Wide,
    b: Wide,
    next_x: i128,
    step: i128,
    end: Option<i128>,
}

impl RegionIter {
    fn new(line: &RationalLine, x_cap: Option<i64>) -> Self {
        let empty = RegionIter {
            k: wide(line.k),
            b: wide(line.b),
            next_x: 1,
            step: 1,
            end: Some(0),
        };
        let (kn, kd) = (*line.k.numer() as i128, *line.k.denom() as i128);
        let (bn, bd) = (*line.b.numer() as i128, *line.b.denom() as i128);
        // y integral <=> kn bd x + bn kd = 0 (mod kd bd)
        let Some((x0, period)) = solve_congruence(kn * bd, -bn * kd, kd * bd) else {
            return empty;
        };
        let k = wide(line.k);
        let b = wide(line.b);
        let one = Wide::from_integer(1);
        let mut lo: i128 = 2;
        let mut hi: Option<i128> = x_cap.map(i128::from);

        let mut cap_hi = |h: i128| hi = Some(hi.map_or(h, |c| c.min(h)));
        // y >= 1
        if k.is_zero() {
            if b < one {
                return empty;
            }
        } else if k.is_negative() {
            cap_hi(floor_i128(&((one - b) / k)));
        } else {
            lo = lo.max(ceil_i128(&((one - b) / k)));
        }
        // x > y  <=>  (1 - k) x > b
        let slack = one - k;
        if slack.is_zero() {
            if !b.is_negative() {
                return empty;
            }
        } else if slack.is_positive() {
            lo = lo.max(floor_i128(&(b / slack)) + 1);
        } else {
            cap_hi(ceil_i128(&(b / slack)) - 1);
        }
        let start = lo + (x0 - lo).rem_euclid(period);
        RegionIter { k, b, next_x: start, step: period, end: hi }
    }
}

impl Iterator for RegionIter {
    type Item = LatticePoint;

    fn next(&mut self) -> Option<LatticePoint> {
        let x = self.next_x;
        if self.end.is_some_and(|e| x > e) || x > i64::MAX as i128 {
            return None;
        }
        self.next_x = x + self.step;
        let y = self.k * Wide::from_integer(x) + self.b;
        debug_assert!(y.is_integer());
        let y = y.to_integer();
        let p = LatticePoint::new(x as i64, i64::try_from(y).ok()?);
        debug_assert!(p.in_region());
        Some(p)
    }
}

/// The first two and last two region points of a line, by ascending `x`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct LineEndpoints {
    pub first: Option<LatticePoint>,
    pub second: Option<LatticePoint>,
    pub second_last: Option<LatticePoint>,
    pub last: Option<LatticePoint>,
}

/// `l_n` or `L_n` for slope `k < 0`.
pub fn family_line(k: Rational, n: i64, family: Family) -> Result<RationalLine> {
    if !k.is_negative() {
        return Err(Error::NonNegativeSlope);
    }
    let through_y = match family {
        Family::Lower => 1,
        Family::Upper => n - 1,
    };
    let b = wide(Rational::from_integer(through_y)) - wide(k) * Wide::from_integer(n as i128);
    Ok(RationalLine { k, b: narrow(b)? })
}

/// Closed-form end points of a family line: the last two points of `l_n`
/// or the first two of `L_n`. `None` when `n` is too small for the formula
/// to stay inside the region (`n > 1 + a1 + a2` for `l_n`, `n > 1 + a1`
/// for `L_n`).
pub fn family_anchor_points(
    k: Rational,
    n: i64,
    family: Family,
) -> Result<Option<[LatticePoint; 2]>> {
    if !k.is_negative() {
        return Err(Error::NonNegativeSlope);
    }
    let (a1, a2) = (-*k.numer(), *k.denom());
    Ok(match family {
        Family::Lower => (n > 1 + a1 + a2)
            .then(|| [LatticePoint::new(n - a2, 1 + a1), LatticePoint::new(n, 1)]),
        Family::Upper => (n > 1 + a1)
            .then(|| [LatticePoint::new(n, n - 1), LatticePoint::new(n + a2, n - 1 - a1)]),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;
    use alloc::vec;

    fn p(x: i64, y: i64) -> LatticePoint {
        LatticePoint::new(x, y)
    }

    fn line(kn: i64, kd: i64, bn: i64, bd: i64) -> RationalLine {
        RationalLine::new(kn, kd, bn, bd).unwrap()
    }

    #[test]
    fn canonical_form() {
        assert_eq!(line(-1, 1, 7, 1).to_string(), "-1/1,7/1");
        assert_eq!(line(-6, 5, 99, 5).to_string(), "-6/5,99/5");
        assert_eq!(line(2, 4, 3, 6).to_string(), "1/2,1/2");
        assert_eq!(line(1, -2, 3, 1).to_string(), "-1/2,3/1");
        assert_eq!(RationalLine::new(1, 0, 1, 1), Err(Error::ZeroDenominator));
        assert_eq!(RationalLine::new(1, 1, 1, 0), Err(Error::ZeroDenominator));
    }

    #[test]
    fn parse_round_trip() {
        let l: RationalLine = "-6/5,99/5".parse().unwrap();
        assert_eq!(l, line(-6, 5, 99, 5));
        assert_eq!("-2,20".parse::<RationalLine>().unwrap(), line(-2, 1, 20, 1));
        assert!("-1/0,2/1".parse::<RationalLine>().is_err());
        assert!("-1/2".parse::<RationalLine>().is_err());
    }

    #[test]
    fn enumerates_negative_slopes() {
        assert_eq!(line(-1, 1, 7, 1).region_points(None).unwrap(), [p(4, 3), p(5, 2), p(6, 1)]);
        assert_eq!(line(-2, 1, 20, 1).region_points(None).unwrap(), [p(7, 6), p(8, 4), p(9, 2)]);
        assert_eq!(line(-6, 5, 149, 5).region_points(None).unwrap(), [p(14, 13), p(19, 7), p(24, 1)]);
    }

    #[test]
    fn enumerates_nonnegative_slopes() {
        assert!(line(1, 2, 1, 3).region_points(Some(100)).unwrap().is_empty());
        assert_eq!(line(1, 2, 0, 1).region_points(Some(6)).unwrap(), [p(2, 1), p(4, 2), p(6, 3)]);
        assert_eq!(line(0, 1, 3, 1).region_points(Some(6)).unwrap(), [p(4, 3), p(5, 3), p(6, 3)]);
        assert_eq!(line(1, 2, 1, 3).region_points(None), Err(Error::CapRequired));
        // slope 1: only b < 0 has points
        assert_eq!(line(1, 1, -2, 1).region_points(Some(5)).unwrap(), [p(3, 1), p(4, 2), p(5, 3)]);
        assert!(line(1, 1, 0, 1).region_points(Some(5)).unwrap().is_empty());
        // slope above 1 gives a finite set
        assert_eq!(line(2, 1, -5, 1).region_points(Some(100)).unwrap(), [p(3, 1), p(4, 3)]);
    }

    #[test]
    fn endpoints_examples() {
        let e = line(-1, 1, 7, 1).endpoints();
        assert_eq!(
            e,
            LineEndpoints {
                first: Some(p(4, 3)),
                second: Some(p(5, 2)),
                second_last: Some(p(5, 2)),
                last: Some(p(6, 1)),
            }
        );
        let e = line(-2, 1, 9, 1).endpoints();
        assert_eq!((e.first, e.second, e.last), (Some(p(4, 1)), None, Some(p(4, 1))));
        let e = line(-1, 1, 5, 1).endpoints();
        assert_eq!((e.first, e.second, e.second_last, e.last), (Some(p(3, 2)), Some(p(4, 1)), Some(p(3, 2)), Some(p(4, 1))));
        let e = line(1, 3, 1, 1).endpoints();
        assert_eq!((e.first, e.second, e.last), (Some(p(3, 2)), Some(p(6, 3)), None));
    }

    #[test]
    fn shifts() {
        let l = line(-1, 1, 7, 1);
        assert_eq!(l.shift(3, ShiftMode::XAxis).unwrap(), line(-1, 1, 10, 1));
        assert_eq!(l.shift(2, ShiftMode::Diagonal).unwrap(), line(-1, 1, 11, 1));
        let l = line(-6, 5, 4, 1);
        assert_eq!(l.shift(5, ShiftMode::XAxis).unwrap(), line(-6, 5, 10, 1));
        // l<t> = l[t - t/k]
        for t in 1..10 {
            let k = l.slope();
            let tr = Rational::from_integer(t);
            assert_eq!(l.shift(t, ShiftMode::Diagonal).unwrap(), l.shift_x(tr - tr / k).unwrap());
        }
    }

    #[test]
    fn family_lines() {
        let k = Rational::from_integer(-1);
        let l5 = family_line(k, 5, Family::Lower).unwrap();
        assert_eq!(l5, line(-1, 1, 6, 1));
        let e = l5.endpoints();
        assert_eq!((e.second_last, e.last), (Some(p(4, 2)), Some(p(5, 1))));
        assert_eq!(family_anchor_points(k, 5, Family::Lower).unwrap(), Some([p(4, 2), p(5, 1)]));

        let u6 = family_line(k, 6, Family::Upper).unwrap();
        assert_eq!(u6, line(-1, 1, 11, 1));
        let e = u6.endpoints();
        assert_eq!((e.first, e.second), (Some(p(6, 5)), Some(p(7, 4))));

        // too close to the boundary for the closed form
        let k = Rational::new(-6, 5);
        assert_eq!(family_anchor_points(k, 11, Family::Lower).unwrap(), None);
        let e = family_line(k, 11, Family::Lower).unwrap().endpoints();
        assert_eq!(e.last, Some(p(11, 1)));
        assert!(e.second_last.is_none());
        assert!(family_line(Rational::from_integer(0), 3, Family::Lower).is_err());
    }

    #[test]
    fn consecutive_points_step_by_direction() {
        let l = line(-6, 5, 301, 5);
        let pts = l.region_points(None).unwrap();
        assert!(pts.len() > 3);
        for w in pts.windows(2) {
            assert_eq!((w[1].x - w[0].x, w[1].y - w[0].y), (5, -6));
        }
        assert_eq!(vec![l.contains(pts[0])], vec![true]);
    }
}
