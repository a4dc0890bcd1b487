//! Documents emitted by the CLI, their CSV and JSON forms, and the cache file.
//!
//! Big integers always travel as decimal strings. CSV column orders are
//! fixed by the field order of the row types below; new columns go at the end.

use std::fmt;

use genmarkov_core::{ExactNat, ExactRatio, LatticePoint, MarkovCache, MonotonicityReport};
use num_integer::Integer;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

#[derive(Debug)]
pub enum FormatError {
    Csv(csv::Error),
    Json(serde_json::Error),
    /// A malformed line of the cache file, numbered from 1.
    Cache { line: usize, text: String },
}

impl fmt::Display for FormatError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FormatError::Csv(e) => write!(f, "csv: {e}"),
            FormatError::Json(e) => write!(f, "json: {e}"),
            FormatError::Cache { line, text } => write!(f, "cache line {line}: expected q,p,value, got `{text}`"),
        }
    }
}

impl std::error::Error for FormatError {}

impl From<csv::Error> for FormatError {
    fn from(e: csv::Error) -> Self {
        FormatError::Csv(e)
    }
}

impl From<serde_json::Error> for FormatError {
    fn from(e: serde_json::Error) -> Self {
        FormatError::Json(e)
    }
}

/// Decimal places used for ratio decimals unless the caller asks otherwise.
pub const DEFAULT_DIGITS: u32 = 20;
/// Environment variable overriding [`DEFAULT_DIGITS`].
pub const DIGITS_ENV: &str = "GENMARKOV_DIGITS";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MarkovDoc {
    pub q: u64,
    pub p: u64,
    pub value: String,
}

/// One row of `table`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableRow {
    pub q: u64,
    pub p: u64,
    pub value: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointValue {
    pub x: i64,
    pub y: i64,
    pub value: String,
}

/// `m(next) / m(point)` for consecutive points of a line.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RatioRow {
    pub x: i64,
    pub y: i64,
    pub next_x: i64,
    pub next_y: i64,
    pub numerator: String,
    pub denominator: String,
    pub decimal: String,
}

impl RatioRow {
    pub fn new(point: LatticePoint, next: LatticePoint, r: &ExactRatio, digits: u32) -> Self {
        RatioRow {
            x: point.x,
            y: point.y,
            next_x: next.x,
            next_y: next.y,
            numerator: r.num.to_string(),
            denominator: r.den.to_string(),
            decimal: r.to_decimal(digits),
        }
    }

    pub fn ratio(&self) -> Option<ExactRatio> {
        ExactRatio::new(self.numerator.parse().ok()?, self.denominator.parse().ok()?).ok()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportDoc {
    pub line: String,
    pub classification: String,
    pub mode: String,
    pub n_points: usize,
    pub points: Vec<PointValue>,
    pub ratios: Vec<RatioRow>,
    pub turning_point: Option<[i64; 2]>,
    pub tie_flag: bool,
    pub unimodal: Option<bool>,
    pub end_ratio_criterion: bool,
}

impl ReportDoc {
    pub fn from_report(r: &MonotonicityReport, digits: u32) -> Self {
        let step = r.line.slope();
        let next = |p: LatticePoint| p.offset(*step.denom(), *step.numer());
        ReportDoc {
            line: r.line.to_string(),
            classification: r.classification.as_str().to_string(),
            mode: format!("{:?}", r.mode),
            n_points: r.n_points,
            points: r
                .points
                .iter()
                .map(|(p, v)| PointValue { x: p.x, y: p.y, value: v.to_string() })
                .collect(),
            ratios: r.ratios.iter().map(|(p, q)| RatioRow::new(*p, next(*p), q, digits)).collect(),
            turning_point: r.turning_point.map(|p| [p.x, p.y]),
            tie_flag: r.tie_flag,
            unimodal: r.unimodal,
            end_ratio_criterion: r.end_ratio_criterion(),
        }
    }

    /// The fixed-column summary row.
    pub fn summary(&self) -> ClassifyRow {
        ClassifyRow {
            line: self.line.clone(),
            classification: self.classification.clone(),
            n_points: self.n_points,
            turning_x: self.turning_point.map(|p| p[0]),
            turning_y: self.turning_point.map(|p| p[1]),
            first_ratio_decimal: self.ratios.first().map(|r| r.decimal.clone()),
            last_ratio_decimal: self.ratios.last().map(|r| r.decimal.clone()),
        }
    }
}

/// CSV row of `classify`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassifyRow {
    pub line: String,
    pub classification: String,
    pub n_points: usize,
    pub turning_x: Option<i64>,
    pub turning_y: Option<i64>,
    pub first_ratio_decimal: Option<String>,
    pub last_ratio_decimal: Option<String>,
}

/// One end ratio of a family line in `limits`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LimitRow {
    pub family: String,
    pub n: i64,
    pub numerator: String,
    pub denominator: String,
    pub decimal: String,
    /// The family's closed-form limit, repeated on every row.
    pub limit: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LimitsDoc {
    pub slope: String,
    pub digits: u32,
    pub limit_last_ratio: String,
    pub limit_first_ratio: String,
    /// Last ratios of `l_n`.
    pub lower: Vec<LimitRow>,
    /// First ratios of `L_n`.
    pub upper: Vec<LimitRow>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThresholdsDoc {
    pub digits: u32,
    pub k_plus: String,
    pub k_minus: String,
    pub phi: String,
    pub silver: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchDoc {
    pub slope: String,
    pub cap: u64,
    pub intercept: Option<String>,
    pub report: Option<ReportDoc>,
}

pub fn to_json<T: Serialize>(doc: &T) -> Result<String, FormatError> {
    let mut s = serde_json::to_string_pretty(doc)?;
    s.push('\n');
    Ok(s)
}

pub fn from_json<T: DeserializeOwned>(s: &str) -> Result<T, FormatError> {
    Ok(serde_json::from_str(s)?)
}

pub fn to_csv<T: Serialize>(rows: &[T]) -> Result<String, FormatError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r)?;
    }
    let bytes = w.into_inner().map_err(|e| FormatError::Csv(e.into_error().into()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

pub fn from_csv<T: DeserializeOwned>(s: &str) -> Result<Vec<T>, FormatError> {
    let mut r = csv::Reader::from_reader(s.as_bytes());
    r.deserialize().map(|row| row.map_err(FormatError::from)).collect()
}

/// Cache file text: one `q,p,value` line per entry, sorted by index.
pub fn write_cache(cache: &MarkovCache) -> String {
    let mut entries: Vec<_> = cache.iter().collect();
    entries.sort_by_key(|(k, _)| **k);
    let mut out = String::new();
    for ((q, p), v) in entries {
        out.push_str(&format!("{q},{p},{v}\n"));
    }
    out
}

/// Parse cache text. Blank lines are ignored. Entries are not re-verified.
pub fn read_cache(text: &str) -> Result<MarkovCache, FormatError> {
    let mut cache = MarkovCache::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let bad = || FormatError::Cache { line: i + 1, text: line.to_string() };
        let mut parts = line.split(',');
        let (Some(q), Some(p), Some(v), None) = (parts.next(), parts.next(), parts.next(), parts.next()) else {
            return Err(bad());
        };
        let q: u64 = q.trim().parse().map_err(|_| bad())?;
        let p: u64 = p.trim().parse().map_err(|_| bad())?;
        let v: ExactNat = v.trim().parse().map_err(|_| bad())?;
        if p > q {
            return Err(bad());
        }
        cache.insert(q, p, v);
    }
    Ok(cache)
}

/// `"a1/a2"` naming the slope `-a1/a2`, both parts positive and coprime.
/// A leading minus sign is accepted and ignored, so `-6/5` and `6/5` agree.
pub fn parse_slope_parts(s: &str) -> Option<(u64, u64)> {
    let s = s.trim();
    let s = s.strip_prefix('-').unwrap_or(s);
    let (a1, a2) = s.split_once('/').unwrap_or((s, "1"));
    let a1: u64 = a1.trim().parse().ok()?;
    let a2: u64 = a2.trim().parse().ok()?;
    (a1 > 0 && a2 > 0 && a1.gcd(&a2) == 1).then_some((a1, a2))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slope_parts() {
        assert_eq!(parse_slope_parts("6/5"), Some((6, 5)));
        assert_eq!(parse_slope_parts("-6/5"), Some((6, 5)));
        assert_eq!(parse_slope_parts("2"), Some((2, 1)));
        assert_eq!(parse_slope_parts("4/2"), None);
        assert_eq!(parse_slope_parts("0/1"), None);
        assert_eq!(parse_slope_parts("1.2"), None);
    }

    #[test]
    fn cache_round_trip() {
        let mut cache = MarkovCache::new();
        cache.insert(9, 2, ExactNat::from(9077u32));
        cache.insert(5, 2, ExactNat::from(194u32));
        let text = write_cache(&cache);
        assert_eq!(text, "5,2,194\n9,2,9077\n");
        let back = read_cache(&text).unwrap();
        assert_eq!(write_cache(&back), text);
    }

    #[test]
    fn cache_rejects_bad_lines() {
        assert!(read_cache("1,2\n").is_err());
        assert!(read_cache("3,1,5,7\n").is_err());
        assert!(read_cache("1,3,5\n").is_err());
        assert!(read_cache("a,1,5\n").is_err());
        assert!(read_cache("\n\n").unwrap().is_empty());
    }

    #[test]
    fn classify_columns_are_frozen() {
        let row = ClassifyRow {
            line: "-2/1,20/1".into(),
            classification: "Decreasing".into(),
            n_points: 3,
            turning_x: None,
            turning_y: None,
            first_ratio_decimal: Some("0.4998".into()),
            last_ratio_decimal: Some("0.5427".into()),
        };
        let csv = to_csv(&[row.clone()]).unwrap();
        assert_eq!(
            csv.lines().next().unwrap(),
            "line,classification,n_points,turning_x,turning_y,first_ratio_decimal,last_ratio_decimal"
        );
        assert_eq!(from_csv::<ClassifyRow>(&csv).unwrap(), vec![row]);
    }
}
