//! Per-line monotonicity of generalized Markov numbers, with certificates.

use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::lattice::{LatticePoint, Rational, RationalLine};
use crate::limits::{slope_regime, SlopeRegime};
use crate::markov::generalized_markov_at;
use crate::ratio::ExactRatio;
use crate::{Error, ExactNat, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Classification {
    Increasing,
    Decreasing,
    NonMonotonic,
    /// Exactly one region point.
    Singleton,
    /// No region points.
    Empty,
}

impl Classification {
    pub fn as_str(&self) -> &'static str {
        match self {
            Classification::Increasing => "Increasing",
            Classification::Decreasing => "Decreasing",
            Classification::NonMonotonic => "NonMonotonic",
            Classification::Singleton => "Singleton",
            Classification::Empty => "Empty",
        }
    }
}

impl core::fmt::Display for Classification {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// `Exhaustive` evaluates every point and checks every ratio. `Fast` relies
/// on the ratios increasing along the line: it looks at the two end ratios
/// and locates the minimum by bisection.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum ClassifyMode {
    #[default]
    Exhaustive,
    Fast,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonotonicityReport {
    pub line: RationalLine,
    pub classification: Classification,
    pub mode: ClassifyMode,
    /// Number of region points (within the cap when one was given).
    pub n_points: usize,
    /// Evaluated points in increasing `x`. All of them in exhaustive mode.
    pub points: Vec<(LatticePoint, ExactNat)>,
    /// `(P, m(next)/m(P))` for evaluated consecutive pairs.
    pub ratios: Vec<(LatticePoint, ExactRatio)>,
    /// Smallest-`x` minimizer of `m`, present for non-monotonic lines and
    /// whenever the minimum is attained twice.
    pub turning_point: Option<LatticePoint>,
    pub tie_flag: bool,
    /// Whether the ratio signs change from `< 1` to `> 1` at most once and
    /// never back. `None` when not every ratio was computed.
    pub unimodal: Option<bool>,
}

impl MonotonicityReport {
    pub fn first_ratio(&self) -> Option<&ExactRatio> {
        self.ratios.first().map(|(_, r)| r)
    }

    pub fn last_ratio(&self) -> Option<&ExactRatio> {
        self.ratios.last().map(|(_, r)| r)
    }

    /// `first ratio < 1 and last ratio > 1`.
    pub fn end_ratio_criterion(&self) -> bool {
        match (self.first_ratio(), self.last_ratio()) {
            (Some(f), Some(l)) => f.cmp_one() == Ordering::Less && l.cmp_one() == Ordering::Greater,
            _ => false,
        }
    }

    pub fn values(&self) -> impl Iterator<Item = &ExactNat> {
        self.points.iter().map(|(_, v)| v)
    }
}

fn empty_report(line: RationalLine, mode: ClassifyMode, points: Vec<(LatticePoint, ExactNat)>) -> MonotonicityReport {
    let classification = if points.is_empty() { Classification::Empty } else { Classification::Singleton };
    MonotonicityReport {
        line,
        classification,
        mode,
        n_points: points.len(),
        points,
        ratios: Vec::new(),
        turning_point: None,
        tie_flag: false,
        unimodal: None,
    }
}

fn ratio_between(a: &ExactNat, b: &ExactNat) -> ExactRatio {
    ExactRatio { num: b.clone(), den: a.clone() }
}

/// Classify `line` by the values of `m` at its region points.
///
/// A cap on `x` is required for nonnegative slopes, where the line meets the
/// region in infinitely many points; only the capped prefix is examined.
pub fn classify_line(
    line: &RationalLine,
    x_cap: Option<i64>,
    mode: ClassifyMode,
) -> Result<MonotonicityReport> {
    let region = line.region_points(x_cap)?;
    match mode {
        ClassifyMode::Exhaustive => classify_exhaustive(*line, region),
        ClassifyMode::Fast => classify_fast(*line, region),
    }
}

fn classify_exhaustive(line: RationalLine, region: Vec<LatticePoint>) -> Result<MonotonicityReport> {
    let points = region
        .into_iter()
        .map(|p| generalized_markov_at(p).map(|v| (p, v)))
        .collect::<Result<Vec<_>>>()?;
    if points.len() < 2 {
        return Ok(empty_report(line, ClassifyMode::Exhaustive, points));
    }
    let ratios: Vec<_> = points
        .windows(2)
        .map(|w| (w[0].0, ratio_between(&w[0].1, &w[1].1)))
        .collect();
    let signs: Vec<Ordering> = ratios.iter().map(|(_, r)| r.cmp_one()).collect();

    let classification = if signs.iter().all(|s| *s != Ordering::Less) {
        Classification::Increasing
    } else if signs.iter().all(|s| *s != Ordering::Greater) {
        Classification::Decreasing
    } else {
        Classification::NonMonotonic
    };

    // signs must read Less* Equal? Greater*
    let below = signs.iter().take_while(|s| **s == Ordering::Less).count();
    let rest = &signs[below..];
    let rest = rest.strip_prefix(&[Ordering::Equal]).unwrap_or(rest);
    let unimodal = rest.iter().all(|s| *s == Ordering::Greater);

    let min = points.iter().map(|(_, v)| v).min().ok_or(Error::Internal("empty line"))?;
    let mut minimizers = points.iter().filter(|(_, v)| v == min);
    let argmin = minimizers.next().map(|(p, _)| *p);
    let tie_flag = minimizers.next().is_some();
    let turning_point = if classification == Classification::NonMonotonic || tie_flag { argmin } else { None };

    Ok(MonotonicityReport {
        line,
        classification,
        mode: ClassifyMode::Exhaustive,
        n_points: points.len(),
        points,
        ratios,
        turning_point,
        tie_flag,
        unimodal: Some(unimodal),
    })
}

fn classify_fast(line: RationalLine, region: Vec<LatticePoint>) -> Result<MonotonicityReport> {
    let n = region.len();
    if n < 2 {
        let points = region
            .into_iter()
            .map(|p| generalized_markov_at(p).map(|v| (p, v)))
            .collect::<Result<Vec<_>>>()?;
        return Ok(empty_report(line, ClassifyMode::Fast, points));
    }
    let mut evaluated: Vec<Option<ExactNat>> = alloc::vec![None; n];
    let mut value = |i: usize| -> Result<ExactNat> {
        if let Some(v) = &evaluated[i] {
            return Ok(v.clone());
        }
        let v = generalized_markov_at(region[i])?;
        evaluated[i] = Some(v.clone());
        Ok(v)
    };
    // sign of m(i+1)/m(i) - 1
    let mut step = |i: usize| -> Result<Ordering> { Ok(value(i + 1)?.cmp(&value(i)?)) };

    let first = step(0)?;
    let last = step(n - 2)?;
    let (classification, turning) = if first != Ordering::Less {
        (Classification::Increasing, if first == Ordering::Equal { Some(0) } else { None })
    } else if last != Ordering::Greater {
        (Classification::Decreasing, if last == Ordering::Equal { Some(n - 2) } else { None })
    } else {
        // smallest i with step(i) >= 0; step(0) < 0 and step(n-2) > 0
        let (mut lo, mut hi) = (0usize, n - 2);
        while hi - lo > 1 {
            let mid = lo + (hi - lo) / 2;
            if step(mid)? == Ordering::Less {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        (Classification::NonMonotonic, Some(hi))
    };
    let tie_flag = match turning {
        Some(i) => step(i)? == Ordering::Equal,
        None => false,
    };
    drop(step);
    drop(value);

    let points: Vec<(LatticePoint, ExactNat)> = region
        .iter()
        .zip(evaluated.iter())
        .filter_map(|(p, v)| v.clone().map(|v| (*p, v)))
        .collect();
    let ratios = region
        .iter()
        .enumerate()
        .take(n - 1)
        .filter_map(|(i, p)| match (&evaluated[i], &evaluated[i + 1]) {
            (Some(a), Some(b)) => Some((*p, ratio_between(a, b))),
            _ => None,
        })
        .collect();
    Ok(MonotonicityReport {
        line,
        classification,
        mode: ClassifyMode::Fast,
        n_points: n,
        points,
        ratios,
        turning_point: turning.map(|i| region[i]),
        tie_flag,
        unimodal: None,
    })
}

/// Smallest intercept `b = c/a2`, `1 <= c <= search_cap`, whose line of slope
/// `k = -a1/a2` is non-monotonic. Only slopes strictly between the two
/// thresholds are accepted. `Ok(None)` when the cap is exhausted.
pub fn find_nonmonotonic_intercept(
    k: Rational,
    search_cap: u64,
) -> Result<Option<(Rational, MonotonicityReport)>> {
    let regime = slope_regime(k)?;
    if regime != SlopeRegime::Mixed {
        return Err(Error::WrongRegime(regime));
    }
    let a2 = *k.denom();
    for c in 1..=search_cap {
        let c = i64::try_from(c).map_err(|_| Error::Overflow)?;
        let b = Rational::new(c, a2);
        let report = classify_line(&RationalLine::from_parts(k, b), None, ClassifyMode::Exhaustive)?;
        if report.classification == Classification::NonMonotonic {
            return Ok(Some((b, report)));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::{String, ToString};

    fn line(kn: i64, kd: i64, bn: i64, bd: i64) -> RationalLine {
        RationalLine::new(kn, kd, bn, bd).unwrap()
    }

    fn values(r: &MonotonicityReport) -> Vec<String> {
        r.values().map(|v| v.to_string()).collect()
    }

    #[test]
    fn witness_lines() {
        let r = classify_line(&line(-1, 1, 7, 1), None, ClassifyMode::Exhaustive).unwrap();
        assert_eq!(r.classification, Classification::Increasing);
        assert_eq!(values(&r), ["169", "194", "233"]);
        assert_eq!(r.turning_point, None);

        let r = classify_line(&line(-2, 1, 20, 1), None, ClassifyMode::Exhaustive).unwrap();
        assert_eq!(r.classification, Classification::Decreasing);
        assert_eq!(values(&r), ["33461", "16725", "9077"]);

        let r = classify_line(&line(-1, 1, 5, 1), None, ClassifyMode::Exhaustive).unwrap();
        assert_eq!(r.classification, Classification::Increasing);
        assert_eq!(r.first_ratio().unwrap().to_string(), "34/29");
    }

    #[test]
    fn degenerate_lines() {
        let r = classify_line(&line(-2, 1, 9, 1), None, ClassifyMode::Exhaustive).unwrap();
        assert_eq!(r.classification, Classification::Singleton);
        let r = classify_line(&line(-1, 1, 2, 1), None, ClassifyMode::Exhaustive).unwrap();
        assert_eq!(r.classification, Classification::Empty);
        let r = classify_line(&line(-1, 1, 1, 2), None, ClassifyMode::Fast).unwrap();
        assert_eq!(r.classification, Classification::Empty);
    }

    #[test]
    fn nonnegative_slope_needs_cap() {
        let l = line(1, 2, 0, 1);
        assert_eq!(classify_line(&l, None, ClassifyMode::Exhaustive), Err(Error::CapRequired));
        let r = classify_line(&l, Some(40), ClassifyMode::Exhaustive).unwrap();
        assert_eq!(r.classification, Classification::Increasing);
    }

    #[test]
    fn first_nonmonotonic_line_of_slope_six_fifths() {
        let k = Rational::new(-6, 5);
        let (b, r) = find_nonmonotonic_intercept(k, 10_000).unwrap().unwrap();
        assert_eq!(b, Rational::new(149, 5));
        assert_eq!(r.classification, Classification::NonMonotonic);
        assert_eq!(r.turning_point, Some(LatticePoint::new(19, 7)));
        assert_eq!(r.unimodal, Some(true));
        assert!(r.end_ratio_criterion());
        assert!(!r.tie_flag);
        let fast = classify_line(&r.line, None, ClassifyMode::Fast).unwrap();
        assert_eq!(fast.classification, r.classification);
        assert_eq!(fast.turning_point, r.turning_point);
    }

    #[test]
    fn search_rejects_other_regimes() {
        assert_eq!(
            find_nonmonotonic_intercept(Rational::new(-1, 1), 10).map(|_| ()),
            Err(Error::WrongRegime(SlopeRegime::Increasing))
        );
        assert_eq!(
            find_nonmonotonic_intercept(Rational::new(-5, 4), 10).map(|_| ()),
            Err(Error::WrongRegime(SlopeRegime::Decreasing))
        );
    }

    #[test]
    fn fast_agrees_with_exhaustive() {
        let k = Rational::new(-6, 5);
        for c in 140..260 {
            let l = RationalLine::from_parts(k, Rational::new(c, 5));
            let slow = classify_line(&l, None, ClassifyMode::Exhaustive).unwrap();
            let fast = classify_line(&l, None, ClassifyMode::Fast).unwrap();
            assert_eq!(slow.classification, fast.classification, "{l}");
            assert_eq!(slow.turning_point, fast.turning_point, "{l}");
            assert_eq!(slow.n_points, fast.n_points);
            assert_eq!(slow.first_ratio(), fast.first_ratio());
            assert_eq!(slow.last_ratio(), fast.last_ratio());
        }
    }
}
