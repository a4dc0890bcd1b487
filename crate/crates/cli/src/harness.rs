//! Named verification suites over exact values.
//!
//! Every suite scans a deterministic list of work items, possibly in
//! parallel, and merges the partial results back in scan order, so a report
//! depends only on the suite name and its bounds.

use std::collections::BTreeMap;
use std::fmt::{self, Display, Write as _};
use std::str::FromStr;
use std::time::Instant;

use genmarkov_core::cohn::cohn_trace_oracle;
use genmarkov_core::lattice::{family_line, Family};
use genmarkov_core::markov::markov_triple_visiting;
use genmarkov_core::{
    classify_line, fibonacci, find_nonmonotonic_intercept, generalized_markov, generalized_markov_at,
    growth_alpha, limit_first_ratio_exact, limit_last_ratio_exact, pell, scaled_sequence,
    slope_regime, Classification, ClassifyMode, Error, ExactNat, ExactRatio, LatticePoint,
    Rational, RationalLine, Real, ShiftMode, SlopeRegime,
};
use num_bigint::BigInt;
use num_integer::Integer;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub const SUITES: &[&str] = &[
    "identities",
    "markov_equation",
    "oracle_equivalence",
    "recurrence",
    "h_monotonicity",
    "v_monotonicity",
    "ratio_bounds",
    "line_ratio_monotonicity",
    "parallel_line_comparisons",
    "midpoint_inequality",
    "shift_consistency",
    "bracket_inequalities",
    "tail_convergence",
    "classifier_regime_agreement",
    "uniqueness_scan",
];

/// Relative tolerance `10^-6` for the closed-form ray values.
pub const RECURRENCE_TOLERANCE_EXP: u32 = 6;
/// Relative tolerance `10^-6` for the end-ratio limits at `n = nmax`.
pub const TAIL_TOLERANCE_EXP: u32 = 6;
/// Working precision when comparing ratios with limits numerically.
pub const TAIL_DIGITS: u32 = 40;
/// Slopes `-a1/a2` used by the tail suite.
pub const TAIL_SLOPES: &[(i64, i64)] = &[(1, 1), (6, 5), (2, 1)];
/// Slopes `-a1/a2` of the negative-slope corpus.
pub const CORPUS_SLOPES: &[(i64, i64)] =
    &[(1, 1), (1, 2), (2, 1), (6, 5), (9, 8), (5, 4), (3, 2), (7, 6), (2, 3), (3, 1)];
/// Mixed-regime slope swept intercept by intercept.
pub const SWEEP_SLOPE: (i64, i64) = (6, 5);
/// `x` cap for lines of nonnegative slope.
pub const POSITIVE_CAP: i64 = 60;
/// Range of right shifts `l[t]` that must all be non-monotonic for mixed slopes.
pub const RIGHT_SHIFTS: std::ops::RangeInclusive<i64> = 150..=170;
/// Violations kept verbatim per report; the count is always exact.
pub const MAX_STORED_VIOLATIONS: usize = 100;

#[derive(Debug)]
pub enum HarnessError {
    UnknownSuite(String),
    BadBounds(String),
    Core(Error),
}

impl Display for HarnessError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HarnessError::UnknownSuite(s) => {
                write!(f, "unknown suite `{s}`; known suites: {}", SUITES.join(", "))
            }
            HarnessError::BadBounds(s) => write!(f, "bad bounds: {s}"),
            HarnessError::Core(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for HarnessError {}

impl From<Error> for HarnessError {
    fn from(e: Error) -> Self {
        HarnessError::Core(e)
    }
}

pub type Result<T, E = HarnessError> = std::result::Result<T, E>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct Bounds {
    /// Largest `q` in exact scans of `h`, `v`, the tree and uniqueness.
    pub qmax: u64,
    pub identity_qmax: u64,
    pub oracle_qmax: u64,
    pub recurrence_qmax: u64,
    pub recurrence_nmax: u64,
    /// Box for the midpoint and parallel-line scans.
    pub box_qmax: u64,
    /// Last family index in the tail suite.
    pub nmax: i64,
    /// Number of negative-slope corpus lines.
    pub corpus: usize,
    pub shift_tmax: i64,
    /// Largest numerator `c` of `b = c/a2` in the mixed sweep.
    pub sweep_cmax: i64,
    /// Digits of the growth constant in the recurrence suite.
    pub digits: u32,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds {
            qmax: 40,
            identity_qmax: 60,
            oracle_qmax: 25,
            recurrence_qmax: 15,
            recurrence_nmax: 8,
            box_qmax: 30,
            nmax: 30,
            corpus: 200,
            shift_tmax: 10,
            sweep_cmax: 400,
            digits: 30,
        }
    }
}

impl FromStr for Bounds {
    type Err = HarnessError;

    /// `key=value` pairs separated by commas, e.g. `qmax=30,nmax=60`.
    fn from_str(s: &str) -> Result<Self> {
        let mut b = Bounds::default();
        for item in s.split(',').map(str::trim).filter(|i| !i.is_empty()) {
            let (key, value) = item
                .split_once('=')
                .ok_or_else(|| HarnessError::BadBounds(format!("expected key=value, got `{item}`")))?;
            let bad = |_| HarnessError::BadBounds(format!("invalid value for {key}: `{value}`"));
            match key.trim() {
                "qmax" => b.qmax = value.parse().map_err(bad)?,
                "identity_qmax" => b.identity_qmax = value.parse().map_err(bad)?,
                "oracle_qmax" => b.oracle_qmax = value.parse().map_err(bad)?,
                "recurrence_qmax" => b.recurrence_qmax = value.parse().map_err(bad)?,
                "recurrence_nmax" => b.recurrence_nmax = value.parse().map_err(bad)?,
                "box_qmax" => b.box_qmax = value.parse().map_err(bad)?,
                "nmax" => b.nmax = value.parse().map_err(bad)?,
                "corpus" => b.corpus = value.parse().map_err(bad)?,
                "shift_tmax" => b.shift_tmax = value.parse().map_err(bad)?,
                "sweep_cmax" => b.sweep_cmax = value.parse().map_err(bad)?,
                "digits" => b.digits = value.parse().map_err(bad)?,
                other => return Err(HarnessError::BadBounds(format!("unknown key `{other}`"))),
            }
        }
        Ok(b)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub claim: String,
    pub witness: String,
    pub lhs: String,
    pub rhs: String,
}

fn violation(claim: &str, witness: impl Display, lhs: impl Display, rhs: impl Display) -> Violation {
    Violation {
        claim: claim.to_string(),
        witness: witness.to_string(),
        lhs: lhs.to_string(),
        rhs: rhs.to_string(),
    }
}

/// A statement as printed, run alongside its corrected form and either
/// refuted with the first counterexample in scan order or left standing.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuditEntry {
    pub claim: String,
    pub printed: String,
    pub checked: u64,
    pub refuted: bool,
    pub witness: Option<Violation>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ViolationReport {
    pub suite: String,
    pub bounds: Bounds,
    pub checks: u64,
    pub violation_count: u64,
    /// The first violations in scan order.
    pub violations: Vec<Violation>,
    pub audit: Vec<AuditEntry>,
    pub notes: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u64>,
}

impl ViolationReport {
    pub fn passed(&self) -> bool {
        self.violation_count == 0
    }

    /// The report without its timing field.
    pub fn payload(&self) -> ViolationReport {
        ViolationReport { elapsed_ms: None, ..self.clone() }
    }

    pub fn to_table(&self) -> String {
        let mut out = String::new();
        let status = if self.passed() { "PASS" } else { "FAIL" };
        let _ = writeln!(out, "suite       {}", self.suite);
        let _ = writeln!(out, "status      {status}");
        let _ = writeln!(out, "checks      {}", self.checks);
        let _ = writeln!(out, "violations  {}", self.violation_count);
        if let Some(ms) = self.elapsed_ms {
            let _ = writeln!(out, "elapsed     {ms} ms");
        }
        for v in &self.violations {
            let _ = writeln!(out, "  ! {} at {}: {} vs {}", v.claim, v.witness, v.lhs, v.rhs);
        }
        for a in &self.audit {
            let tag = if a.refuted { "refuted" } else { "stands" };
            let _ = write!(out, "  audit [{tag}] {} ({}; {} checks)", a.claim, a.printed, a.checked);
            if let Some(w) = &a.witness {
                let _ = write!(out, " witness {}: {} vs {}", w.witness, w.lhs, w.rhs);
            }
            out.push('\n');
        }
        for n in &self.notes {
            let _ = writeln!(out, "  note {n}");
        }
        out
    }
}

#[derive(Default)]
struct Part {
    checks: u64,
    violation_count: u64,
    violations: Vec<Violation>,
    audits: BTreeMap<usize, (u64, Option<Violation>)>,
    notes: Vec<String>,
}

impl Part {
    fn check(&mut self, holds: bool, witness: impl FnOnce() -> Violation) {
        self.checks += 1;
        if !holds {
            self.violation_count += 1;
            if self.violations.len() < MAX_STORED_VIOLATIONS {
                self.violations.push(witness());
            }
        }
    }

    fn audit(&mut self, slot: usize, holds: bool, witness: impl FnOnce() -> Violation) {
        let entry = self.audits.entry(slot).or_default();
        entry.0 += 1;
        if !holds && entry.1.is_none() {
            entry.1 = Some(witness());
        }
    }

    fn merge(&mut self, other: Part) {
        self.checks += other.checks;
        self.violation_count += other.violation_count;
        let room = MAX_STORED_VIOLATIONS.saturating_sub(self.violations.len());
        self.violations.extend(other.violations.into_iter().take(room));
        for (slot, (n, w)) in other.audits {
            let entry = self.audits.entry(slot).or_default();
            entry.0 += n;
            if entry.1.is_none() {
                entry.1 = w;
            }
        }
        self.notes.extend(other.notes);
    }

    fn into_report(self, suite: &str, bounds: &Bounds, printed: &[(&str, &str)]) -> ViolationReport {
        let audit = printed
            .iter()
            .enumerate()
            .map(|(slot, (claim, statement))| {
                let (checked, witness) = self.audits.get(&slot).cloned().unwrap_or_default();
                AuditEntry {
                    claim: claim.to_string(),
                    printed: statement.to_string(),
                    checked,
                    refuted: witness.is_some(),
                    witness,
                }
            })
            .collect();
        ViolationReport {
            suite: suite.to_string(),
            bounds: bounds.clone(),
            checks: self.checks,
            violation_count: self.violation_count,
            violations: self.violations,
            audit,
            notes: self.notes,
            elapsed_ms: None,
        }
    }
}

// Runs `f` over `items` on the current pool and merges in item order.
fn sharded<T: Sync>(items: &[T], f: impl Fn(&T) -> Result<Part> + Sync + Send) -> Result<Part> {
    let parts: Vec<Result<Part>> = items.par_iter().map(f).collect();
    let mut total = Part::default();
    for p in parts {
        total.merge(p?);
    }
    Ok(total)
}

/// `m(q, p)` for every `0 <= p <= q <= qmax`, with `m(0, 0) = 0`.
struct Values {
    rows: Vec<Vec<ExactNat>>,
}

impl Values {
    fn new(qmax: u64) -> Result<Self> {
        let rows = (0..=qmax)
            .into_par_iter()
            .map(|q| {
                if q == 0 {
                    Ok(vec![ExactNat::default()])
                } else {
                    (0..=q).map(|p| generalized_markov(q, p)).collect::<Result<Vec<_>, _>>()
                }
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Values { rows })
    }

    fn m(&self, q: u64, p: u64) -> &ExactNat {
        &self.rows[q as usize][p as usize]
    }

    fn at(&self, pt: LatticePoint) -> &ExactNat {
        self.m(pt.x as u64, pt.y as u64)
    }

    fn h(&self, q: u64, p: u64) -> ExactRatio {
        ratio(self.m(q + 1, p), self.m(q, p))
    }

    fn v(&self, q: u64, p: u64) -> ExactRatio {
        ratio(self.m(q, p + 1), self.m(q, p))
    }
}

fn ratio(num: &ExactNat, den: &ExactNat) -> ExactRatio {
    ExactRatio { num: num.clone(), den: den.clone() }
}

fn neg_slope(a1: i64, a2: i64) -> Rational {
    Rational::new(-a1, a2)
}

fn coprime_pairs(qmax: u64) -> Vec<(u64, u64)> {
    (2..=qmax)
        .flat_map(|q| (1..q).map(move |p| (q, p)))
        .filter(|(q, p)| q.gcd(p) == 1)
        .collect()
}

fn abs(r: Real) -> Real {
    if r.is_negative() {
        r.neg()
    } else {
        r
    }
}

fn relative_error(value: &Real, reference: &Real) -> Real {
    abs(value.sub(reference).div(reference))
}

fn tolerance(exp: u32) -> Real {
    Real::from_mantissa(BigInt::from(1), exp)
}

fn ratio_real(r: &ExactRatio, digits: u32) -> Real {
    Real::from_ratio(&BigInt::from(r.num.clone()), &BigInt::from(r.den.clone()), digits)
}

/// First and last ratio of a line with at least two region points.
pub fn end_ratios(l: &RationalLine) -> Result<Option<(ExactRatio, ExactRatio)>> {
    let e = l.endpoints();
    let (Some(first), Some(second), Some(second_last), Some(last)) =
        (e.first, e.second, e.second_last, e.last)
    else {
        return Ok(None);
    };
    let m = |p| generalized_markov_at(p);
    Ok(Some((
        ExactRatio::new(m(second)?, m(first)?)?,
        ExactRatio::new(m(last)?, m(second_last)?)?,
    )))
}

/// Position of a negative-slope line among the lines of a family.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Bracket {
    /// The line lies strictly between family lines `N - 1` and `N`.
    Between(i64),
    /// The line is family line `n`.
    OnFamilyLine(i64),
}

/// The `N` with `l` strictly between family lines `N - 1` and `N`.
///
/// Family intercepts grow with `n` (`1 - kn` for the lower family,
/// `n(1 - k) - 1` for the upper one), so `N` is the smallest `n` whose
/// intercept exceeds that of `l`.
pub fn bracket_index(l: &RationalLine, family: Family) -> Result<Bracket> {
    let k = l.slope();
    if k >= Rational::from_integer(0) {
        return Err(Error::NonNegativeSlope.into());
    }
    let one = Rational::from_integer(1);
    // intercept of family line n is offset + n * step
    let (offset, step) = match family {
        Family::Lower => (one, -k),
        Family::Upper => (-one, one - k),
    };
    let position = (l.intercept() - offset) / step;
    if position.is_integer() {
        return Ok(Bracket::OnFamilyLine(position.to_integer()));
    }
    Ok(Bracket::Between(position.floor().to_integer() + 1))
}

/// Smallest `t` in `1..=t_cap` at which the shifted line passes family
/// line `n`: for the lower family `l[t]` gets a last ratio above that of
/// `l_n`, for the upper family `l<t>` gets a first ratio below that of `L_n`.
pub fn empirical_shift_threshold(
    l: &RationalLine,
    n: i64,
    family: Family,
    t_cap: i64,
) -> Result<Option<i64>> {
    if t_cap < 1 {
        return Ok(None);
    }
    let target_line = family_line(l.slope(), n, family)?;
    let (target_first, target_last) =
        end_ratios(&target_line)?.ok_or(Error::TooFewPoints { found: target_line.region_points(None)?.len() })?;
    for t in 1..=t_cap {
        let mode = match family {
            Family::Lower => ShiftMode::XAxis,
            Family::Upper => ShiftMode::Diagonal,
        };
        let Some((first, last)) = end_ratios(&l.shift(t, mode)?)? else {
            continue;
        };
        let passed = match family {
            Family::Lower => last > target_last,
            Family::Upper => first < target_first,
        };
        if passed {
            return Ok(Some(t));
        }
    }
    Ok(None)
}

/// Negative-slope corpus: for each corpus slope, lines `b = c/a2` with at
/// least two region points, starting at the first such `c` and stepping by 7.
pub fn line_corpus(total: usize) -> Result<Vec<RationalLine>> {
    let per_slope = total.div_ceil(CORPUS_SLOPES.len());
    let mut lines = Vec::with_capacity(per_slope * CORPUS_SLOPES.len());
    for &(a1, a2) in CORPUS_SLOPES {
        let k = neg_slope(a1, a2);
        let has_two = |c: i64| -> Result<bool> {
            Ok(RationalLine::from_parts(k, Rational::new(c, a2)).region_points(None)?.len() >= 2)
        };
        let mut c = 1;
        while !has_two(c)? {
            c += 1;
        }
        let mut found = 0;
        while found < per_slope {
            if has_two(c)? {
                lines.push(RationalLine::from_parts(k, Rational::new(c, a2)));
                found += 1;
            }
            c += 7;
        }
    }
    lines.truncate(total.max(CORPUS_SLOPES.len()));
    Ok(lines)
}

/// Lines of slope `0`, `1/3`, `1/2` and `2/5`, examined up to [`POSITIVE_CAP`].
pub fn positive_corpus() -> Vec<RationalLine> {
    let mut lines = Vec::new();
    for b in [1, 2, 3, 5, 8] {
        lines.push(RationalLine::from_parts(Rational::from_integer(0), Rational::from_integer(b)));
    }
    for (kn, kd) in [(1, 3), (1, 2), (2, 5)] {
        for c in 1..=6 {
            lines.push(RationalLine::from_parts(Rational::new(kn, kd), Rational::new(c, kd)));
        }
    }
    lines
}

/// Run one suite on a pool of `workers` threads.
pub fn run_suite(name: &str, bounds: &Bounds, workers: usize) -> Result<ViolationReport> {
    if !SUITES.contains(&name) {
        return Err(HarnessError::UnknownSuite(name.to_string()));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| HarnessError::BadBounds(e.to_string()))?;
    let start = Instant::now();
    let mut report = pool.install(|| dispatch(name, bounds))?;
    report.elapsed_ms = Some(start.elapsed().as_millis() as u64);
    Ok(report)
}

fn dispatch(name: &str, b: &Bounds) -> Result<ViolationReport> {
    match name {
        "identities" => Ok(identities(b)?.into_report(name, b, &[])),
        "markov_equation" => Ok(markov_equation(b)?.into_report(name, b, &[])),
        "oracle_equivalence" => Ok(oracle_equivalence(b)?.into_report(name, b, &[])),
        "recurrence" => Ok(recurrence(b)?.into_report(name, b, &[])),
        "h_monotonicity" => Ok(h_monotonicity(b)?.into_report(name, b, &[])),
        "v_monotonicity" => Ok(v_monotonicity(b)?.into_report(name, b, V_MONOTONICITY_AUDIT)),
        "ratio_bounds" => Ok(ratio_bounds(b)?.into_report(name, b, RATIO_BOUNDS_AUDIT)),
        "line_ratio_monotonicity" => Ok(line_ratio_monotonicity(b)?.into_report(name, b, &[])),
        "parallel_line_comparisons" => Ok(parallel_lines(b)?.into_report(name, b, &[])),
        "midpoint_inequality" => Ok(midpoint(b)?.into_report(name, b, &[])),
        "shift_consistency" => Ok(shift_consistency(b)?.into_report(name, b, SHIFT_AUDIT)),
        "bracket_inequalities" => Ok(bracket_inequalities(b)?.into_report(name, b, &[])),
        "tail_convergence" => Ok(tail_convergence(b)?.into_report(name, b, TAIL_AUDIT)),
        "classifier_regime_agreement" => Ok(regime_agreement(b)?.into_report(name, b, &[])),
        "uniqueness_scan" => Ok(uniqueness(b)?.into_report(name, b, &[])),
        other => Err(HarnessError::UnknownSuite(other.to_string())),
    }
}

fn identities(b: &Bounds) -> Result<Part> {
    let qs: Vec<u64> = (1..=b.identity_qmax).collect();
    sharded(&qs, |&q| {
        let mut part = Part::default();
        let mut cases = vec![
            ("m(q,0) = F(2q)", generalized_markov(q, 0)?, fibonacci(2 * q)),
            ("m(q,q) = P(2q)", generalized_markov(q, q)?, pell(2 * q)),
            ("m(q,1) = F(2q+1)", generalized_markov(q, 1)?, fibonacci(2 * q + 1)),
        ];
        if q >= 2 {
            cases.push(("m(q,q-1) = P(2q-1)", generalized_markov(q, q - 1)?, pell(2 * q - 1)));
        }
        for (claim, lhs, rhs) in cases {
            part.check(lhs == rhs, || violation(claim, format_args!("q={q}"), &lhs, &rhs));
        }
        Ok(part)
    })
}

/// Spot values, each confirmed by the Cohn oracle before the tree is trusted.
pub const SPOT_VALUES: &[(u64, u64, u64)] = &[(5, 2, 194), (5, 3, 433), (9, 2, 9077)];

fn markov_equation(b: &Bounds) -> Result<Part> {
    let mut spots = Part::default();
    for &(q, p, want) in SPOT_VALUES {
        let want = ExactNat::from(want);
        let oracle = cohn_trace_oracle(q, p)?;
        spots.check(oracle == want, || violation("Cohn spot value", format_args!("({q},{p})"), &oracle, &want));
        let tree = generalized_markov(q, p)?;
        spots.check(tree == oracle, || violation("tree spot value", format_args!("({q},{p})"), &tree, &oracle));
    }
    let mut part = sharded(&coprime_pairs(b.qmax), |&(q, p)| {
        let mut part = Part::default();
        let mut nodes = Vec::new();
        let result = markov_triple_visiting(q, p, |t| nodes.push(t.clone()));
        for t in &nodes {
            let (x, y, z) = (&t.left, &t.right, &t.mediant);
            let lhs = x * x + y * y + z * z;
            let rhs = x * y * z * 3u32;
            part.check(lhs == rhs, || {
                violation("x^2+y^2+z^2 = 3xyz", format_args!("({q},{p}) node {:?}", t.mediant_fraction()), &lhs, &rhs)
            });
        }
        match result {
            Ok(t) => part.check(t.mediant_fraction() == (p, q), || {
                violation("descent reaches p/q", format_args!("({q},{p})"), format_args!("{:?}", t.mediant_fraction()), format_args!("({p}, {q})"))
            }),
            Err(e) => part.check(false, || violation("tree descent", format_args!("({q},{p})"), e, "ok")),
        }
        Ok(part)
    })?;
    spots.merge(std::mem::take(&mut part));
    Ok(spots)
}

fn oracle_equivalence(b: &Bounds) -> Result<Part> {
    sharded(&coprime_pairs(b.oracle_qmax), |&(q, p)| {
        let mut part = Part::default();
        let tree = generalized_markov(q, p)?;
        let oracle = cohn_trace_oracle(q, p)?;
        part.check(tree == oracle, || violation("tree = Cohn trace / 3", format_args!("({q},{p})"), &tree, &oracle));
        Ok(part)
    })
}

fn recurrence(b: &Bounds) -> Result<Part> {
    let mut bases = vec![(1, 0), (1, 1)];
    bases.extend(coprime_pairs(b.recurrence_qmax));
    let tol = tolerance(RECURRENCE_TOLERANCE_EXP);
    let digits = b.digits;
    let nmax = b.recurrence_nmax;
    sharded(&bases, |&(q, p)| {
        let mut part = Part::default();
        let seq = scaled_sequence(q, p, nmax)?;
        let f1 = seq.f1().clone();
        let three_f1 = &f1 * 3u32;
        for n in 2..seq.values.len() {
            let lhs = &seq.values[n] + &seq.values[n - 2];
            let rhs = &three_f1 * &seq.values[n - 1];
            part.check(lhs == rhs, || violation("f(n) = 3 f1 f(n-1) - f(n-2)", format_args!("({q},{p}) n={n}"), &lhs, &rhs));
        }
        let alpha = growth_alpha(&f1, digits)?.alpha;
        let disc = Real::from_integer(BigInt::from(&f1 * &f1 * 9u32 - 4u32), digits).sqrt();
        let f1r = Real::from_integer(BigInt::from(f1.clone()), digits);
        for n in 1..seq.values.len() {
            let e = n as i64;
            let closed = f1r.mul(&alpha.powi(e).sub(&alpha.powi(-e))).div(&disc);
            let exact = Real::from_integer(BigInt::from(seq.values[n].clone()), digits);
            let rel = relative_error(&closed, &exact);
            part.check(rel < tol, || violation("f(n) = f1 (a^n - a^-n) / sqrt(9 f1^2 - 4)", format_args!("({q},{p}) n={n}"), &rel, &tol));
        }
        Ok(part)
    })
}

fn h_monotonicity(b: &Bounds) -> Result<Part> {
    let values = Values::new(b.qmax + 2)?;
    let qs: Vec<u64> = (1..=b.qmax).collect();
    sharded(&qs, |&q| {
        let mut part = Part::default();
        for p in 1..=q {
            let (here, right) = (values.h(q, p), values.h(q + 1, p));
            part.check(right > here, || violation("h increasing in q", format_args!("h({},{p}) vs h({q},{p})", q + 1), &right, &here));
            if p < q {
                let up = values.h(q, p + 1);
                part.check(here > up, || violation("h decreasing in p", format_args!("h({q},{p}) vs h({q},{})", p + 1), &here, &up));
            }
        }
        Ok(part)
    })
}

const V_MONOTONICITY_AUDIT: &[(&str, &str)] = &[("v increasing in q", "v(q,p) < v(q+1,p)")];

fn v_monotonicity(b: &Bounds) -> Result<Part> {
    let values = Values::new(b.qmax + 1)?;
    let qs: Vec<u64> = (1..=b.qmax).collect();
    sharded(&qs, |&q| {
        let mut part = Part::default();
        for p in 0..q {
            let here = values.v(q, p);
            if p + 1 < q {
                let up = values.v(q, p + 1);
                part.check(up > here, || violation("v increasing in p", format_args!("v({q},{}) vs v({q},{p})", p + 1), &up, &here));
            }
            let right = values.v(q + 1, p);
            part.check(right < here, || violation("v decreasing in q", format_args!("v({},{p}) vs v({q},{p})", q + 1), &right, &here));
            if p >= 1 {
                part.audit(0, here < right, || violation(V_MONOTONICITY_AUDIT[0].0, format_args!("v({q},{p}) vs v({},{p})", q + 1), &here, &right));
            }
        }
        Ok(part)
    })
}

const RATIO_BOUNDS_AUDIT: &[(&str, &str)] = &[
    ("v below phi", "m(q,p+1) < phi m(q,p)"),
    ("v above 1 + sqrt 2", "(1 + sqrt 2) m(q,p) < m(q,p+1)"),
];

fn ratio_bounds(b: &Bounds) -> Result<Part> {
    use genmarkov_core::ratio::{golden_ratio, silver_ratio};
    use genmarkov_core::surd::QuadraticSurd;
    use std::cmp::Ordering::{Greater, Less};

    let values = Values::new(b.qmax + 1)?;
    let silver = silver_ratio();
    let phi = golden_ratio();
    let phi_sq = QuadraticSurd::new(3, 1, 2, 5);
    let qs: Vec<u64> = (1..=b.qmax).collect();
    sharded(&qs, |&q| {
        let mut part = Part::default();
        for p in 1..=q {
            let h = values.h(q, p);
            part.check(h.cmp_surd(&silver) == Greater, || violation("h > 1 + sqrt 2", format_args!("h({q},{p})"), &h, "1+sqrt2"));
            part.check(h.cmp_surd(&phi_sq) == Less, || violation("h < phi^2", format_args!("h({q},{p})"), &h, "phi^2"));
        }
        for p in 0..q {
            let v = values.v(q, p);
            part.check(v.cmp_surd(&phi) == Greater, || violation("v > phi", format_args!("v({q},{p})"), &v, "phi"));
            part.check(v.cmp_surd(&silver) == Less, || violation("v < 1 + sqrt 2", format_args!("v({q},{p})"), &v, "1+sqrt2"));
            if p >= 1 {
                part.audit(0, v.cmp_surd(&phi) == Less, || violation(RATIO_BOUNDS_AUDIT[0].0, format_args!("v({q},{p})"), &v, "phi"));
                part.audit(1, v.cmp_surd(&silver) == Greater, || violation(RATIO_BOUNDS_AUDIT[1].0, format_args!("v({q},{p})"), &v, "1+sqrt2"));
            }
        }
        Ok(part)
    })
}

fn line_ratio_monotonicity(b: &Bounds) -> Result<Part> {
    let mut lines: Vec<(RationalLine, Option<i64>)> =
        line_corpus(b.corpus)?.into_iter().map(|l| (l, None)).collect();
    lines.extend(positive_corpus().into_iter().map(|l| (l, Some(POSITIVE_CAP))));
    let mut part = sharded(&lines, |(l, cap)| {
        let mut part = Part::default();
        let points = l.region_points(*cap)?;
        if points.len() < 3 {
            return Ok(part);
        }
        let ratios = genmarkov_core::line_ratios(l, *cap)?;
        for w in ratios.windows(2) {
            part.check(w[0].1 < w[1].1, || violation("ratios increase along the line", format_args!("{l} at {}", w[1].0), &w[1].1, &w[0].1));
        }
        Ok(part)
    })?;
    // through the origin the ratios fall towards alpha
    let origin: Vec<(u64, u64)> = coprime_pairs(10);
    part.merge(sharded(&origin, |&(q, p)| {
        let mut part = Part::default();
        let l = RationalLine::new(p as i64, q as i64, 0, 1)?;
        let ratios = genmarkov_core::line_ratios(&l, Some(6 * q as i64))?;
        for w in ratios.windows(2) {
            part.check(w[0].1 > w[1].1, || violation("ratios decrease through the origin", format_args!("{l} at {}", w[1].0), &w[1].1, &w[0].1));
        }
        let f1 = generalized_markov(q, p)?;
        for (pt, r) in &ratios {
            // r > (3 f1 + sqrt(9 f1^2 - 4)) / 2
            let d = BigInt::from(&r.num * 2u32) - BigInt::from(&f1 * &r.den * 3u32);
            let holds = d.sign() == num_bigint::Sign::Plus
                && &d * &d > BigInt::from((&f1 * &f1 * 9u32 - 4u32) * &r.den * &r.den);
            part.check(holds, || violation("ratios stay above alpha", format_args!("{l} at {pt}"), r, "alpha"));
        }
        Ok(part)
    })?);
    Ok(part)
}

fn parallel_lines(b: &Bounds) -> Result<Part> {
    let max_a2 = CORPUS_SLOPES.iter().map(|s| s.1).max().unwrap_or(1) as u64;
    let values = Values::new(b.box_qmax + max_a2 + 1)?;
    let boxq = b.box_qmax as i64;
    sharded(CORPUS_SLOPES, |&(a1, a2)| {
        let mut part = Part::default();
        let valid = |x: i64, y: i64| y >= 1 && x > y && x <= boxq + 1 && y - a1 >= 1;
        let r = |x: i64, y: i64| {
            ratio(values.at(LatticePoint::new(x + a2, y - a1)), values.at(LatticePoint::new(x, y)))
        };
        for x in 2..=boxq {
            for y in 1..x {
                if !valid(x, y) {
                    continue;
                }
                let here = r(x, y);
                let w = |claim: &str, ox: i64, oy: i64, other: &ExactRatio| {
                    violation(claim, format_args!("k=-{a1}/{a2} ({x},{y}) vs ({ox},{oy})"), &here, other)
                };
                if valid(x + 1, y) {
                    let other = r(x + 1, y);
                    part.check(here < other, || w("ratio increases with x at fixed y", x + 1, y, &other));
                }
                if valid(x, y + 1) {
                    let other = r(x, y + 1);
                    part.check(here > other, || w("ratio decreases with y at fixed x", x, y + 1, &other));
                }
                if valid(x + 1, y + 1) {
                    let other = r(x + 1, y + 1);
                    part.check(here > other, || w("ratio decreases along the diagonal", x + 1, y + 1, &other));
                }
            }
        }
        Ok(part)
    })
}

fn midpoint(b: &Bounds) -> Result<Part> {
    let values = Values::new(b.box_qmax)?;
    let points: Vec<LatticePoint> = (1..=b.box_qmax as i64)
        .flat_map(|x| (0..=x).map(move |y| LatticePoint::new(x, y)))
        .collect();
    let indices: Vec<usize> = (0..points.len()).collect();
    sharded(&indices, |&i| {
        let mut part = Part::default();
        let a = points[i];
        for &c in &points[i + 1..] {
            if (a.x + c.x) % 2 != 0 || (a.y + c.y) % 2 != 0 {
                continue;
            }
            let mid = LatticePoint::new((a.x + c.x) / 2, (a.y + c.y) / 2);
            let lhs = values.at(a) + values.at(c);
            let rhs = values.at(mid) * 2u32;
            part.check(lhs >= rhs, || violation("m(A) + m(C) >= 2 m(midpoint)", format_args!("{a} {mid} {c}"), &lhs, &rhs));
        }
        Ok(part)
    })
}

const SHIFT_AUDIT: &[(&str, &str)] =
    &[("diagonal shift moves the last points along x", "last(l<t>) = last(l) + (t,0)")];

fn shift_consistency(b: &Bounds) -> Result<Part> {
    let lines = line_corpus(b.corpus)?;
    let tmax = b.shift_tmax;
    sharded(&lines, |l| {
        let mut part = Part::default();
        let e = l.endpoints();
        let (Some(first), Some(second), Some(second_last), Some(last)) = (e.first, e.second, e.second_last, e.last) else {
            return Ok(part);
        };
        for t in 1..=tmax {
            let diag = l.shift(t, ShiftMode::Diagonal)?.endpoints();
            let xs = l.shift(t, ShiftMode::XAxis)?.endpoints();
            let w = |claim: &str, got: Option<LatticePoint>, want: LatticePoint| {
                let got = got.map_or("none".to_string(), |p| p.to_string());
                violation(claim, format_args!("{l} t={t}"), got, want)
            };
            part.check(diag.first == Some(first.offset(t, t)), || w("first(l<t>) = first(l) + (t,t)", diag.first, first.offset(t, t)));
            part.check(diag.second == Some(second.offset(t, t)), || w("second(l<t>) = second(l) + (t,t)", diag.second, second.offset(t, t)));
            part.check(xs.last == Some(last.offset(t, 0)), || w("last(l[t]) = last(l) + (t,0)", xs.last, last.offset(t, 0)));
            part.check(xs.second_last == Some(second_last.offset(t, 0)), || w("second_last(l[t]) = second_last(l) + (t,0)", xs.second_last, second_last.offset(t, 0)));
            part.audit(0, diag.last == Some(last.offset(t, 0)) && diag.second_last == Some(second_last.offset(t, 0)), || {
                w(SHIFT_AUDIT[0].0, diag.last, last.offset(t, 0))
            });
        }
        Ok(part)
    })
}

fn bracket_inequalities(b: &Bounds) -> Result<Part> {
    let lines = line_corpus(b.corpus)?;
    let mut part = sharded(&lines, |l| {
        let mut part = Part::default();
        let Some((first, last)) = end_ratios(l)? else {
            return Ok(part);
        };
        if let Bracket::Between(n) = bracket_index(l, Family::Lower)? {
            if n >= 4 {
                let fam = family_line(l.slope(), n, Family::Lower)?;
                if let Some((_, fam_last)) = end_ratios(&fam)? {
                    part.check(last < fam_last, || violation("last ratio below that of the next lower family line", format_args!("{l} N={n}"), &last, &fam_last));
                }
            }
        }
        if let Bracket::Between(n) = bracket_index(l, Family::Upper)? {
            let fam = family_line(l.slope(), n, Family::Upper)?;
            if let Some((fam_first, _)) = end_ratios(&fam)? {
                part.check(first > fam_first, || violation("first ratio above that of the next upper family line", format_args!("{l} N={n}"), &first, &fam_first));
            }
        }
        Ok(part)
    })?;
    // measured shift thresholds for the first corpus line of each slope
    for l in lines.iter().step_by(lines.len().div_ceil(CORPUS_SLOPES.len()).max(1)) {
        let (a1, a2) = l.negative_slope_parts().unwrap_or((0, 1));
        let n0 = 2 + a1 + a2;
        let lower: Vec<String> = (n0..n0 + 4)
            .map(|n| Ok(empirical_shift_threshold(l, n, Family::Lower, 200)?.map_or("-".into(), |t| t.to_string())))
            .collect::<Result<_>>()?;
        let upper: Vec<String> = (n0..n0 + 4)
            .map(|n| Ok(empirical_shift_threshold(l, n, Family::Upper, 200)?.map_or("-".into(), |t| t.to_string())))
            .collect::<Result<_>>()?;
        part.notes.push(format!(
            "shift thresholds for {l}, n={n0}..{}: lower [{}], upper [{}]",
            n0 + 3,
            lower.join(" "),
            upper.join(" ")
        ));
    }
    Ok(part)
}

const TAIL_AUDIT: &[(&str, &str)] =
    &[("last ratio of l[t] strictly decreasing in t", "r(l[t+1]) < r(l[t])")];

fn tail_convergence(b: &Bounds) -> Result<Part> {
    use std::cmp::Ordering::{Greater, Less};
    let nmax = b.nmax;
    let tol = tolerance(TAIL_TOLERANCE_EXP);
    let bases = line_corpus(CORPUS_SLOPES.len())?;
    sharded(TAIL_SLOPES, |&(a1, a2)| {
        let mut part = Part::default();
        let k = neg_slope(a1, a2);
        let slope = format!("k=-{a1}/{a2}");
        let lim_last = limit_last_ratio_exact(a1 as u64, a2 as u64)?;
        let lim_first = limit_first_ratio_exact(a1 as u64, a2 as u64)?;
        if (a1, a2) == (1, 1) {
            let exact = lim_first.as_rational();
            let want = Some((BigInt::from(9), BigInt::from(8)));
            part.check(exact == want, || violation("first-ratio limit is 9/8", &slope, format_args!("{exact:?}"), "9/8"));
        }
        for (family, label) in [(Family::Lower, "lower"), (Family::Upper, "upper")] {
            let limit = match family {
                Family::Lower => &lim_last,
                Family::Upper => &lim_first,
            };
            let limit_real = limit.to_real(TAIL_DIGITS);
            let mut seq: Vec<(i64, ExactRatio)> = Vec::new();
            for n in 1..=nmax {
                if let Some((first, last)) = end_ratios(&family_line(k, n, family)?)? {
                    seq.push((n, if family == Family::Lower { last } else { first }));
                }
            }
            for w in seq.windows(2) {
                let (prev, cur) = (&w[0].1, &w[1].1);
                match family {
                    Family::Lower => part.check(cur > prev, || violation("l_n last ratio increasing", format_args!("{slope} n={}", w[1].0), cur, prev)),
                    Family::Upper => part.check(cur < prev, || violation("L_n first ratio decreasing", format_args!("{slope} n={}", w[1].0), cur, prev)),
                }
            }
            for (n, r) in &seq {
                let side = r.cmp_surd(limit);
                match family {
                    Family::Lower => part.check(side == Less, || violation("l_n last ratio below its limit", format_args!("{slope} n={n}"), r, ">= limit")),
                    Family::Upper => part.check(side == Greater, || violation("L_n first ratio above its limit", format_args!("{slope} n={n}"), r, "<= limit")),
                }
            }
            let errors: Vec<(i64, Real)> =
                seq.iter().map(|(n, r)| (*n, relative_error(&ratio_real(r, TAIL_DIGITS), &limit_real))).collect();
            match errors.last() {
                Some((n, err)) if *n == nmax => {
                    let claim = match family {
                        Family::Lower => "l_n last ratio within tolerance of its limit at nmax",
                        Family::Upper => "L_n first ratio within tolerance of its limit at nmax",
                    };
                    part.check(*err < tol, || violation(claim, format_args!("{slope} n={n}"), err.rescale(12), &tol));
                    let rate = errors.len().checked_sub(2).map(|i| err.div(&errors[i].1).rescale(4));
                    part.notes.push(format!(
                        "{slope} {label} family: relative error {:.3e} at n={n}, first n={}, error ratio per step {}",
                        err.to_f64(),
                        errors[0].0,
                        rate.map_or("-".to_string(), |r| r.to_string())
                    ));
                }
                _ => part.check(false, || violation("family line has two points at nmax", &slope, "none", nmax)),
            }
        }
        // shifts of a generic line of the same slope
        let Some(base) = bases.iter().find(|l| l.slope() == k) else {
            return Ok(part);
        };
        let mut prev: Option<(ExactRatio, ExactRatio)> = None;
        for t in 0..=nmax {
            let Some((_, last)) = end_ratios(&base.shift(t, ShiftMode::XAxis)?)? else { continue };
            let Some((first, _)) = end_ratios(&base.shift(t, ShiftMode::Diagonal)?)? else { continue };
            part.check(last.cmp_surd(&lim_last) == Less, || violation("l[t] last ratio below the limit", format_args!("{base} t={t}"), &last, "limit"));
            part.check(first.cmp_surd(&lim_first) == Greater, || violation("l<t> first ratio above the limit", format_args!("{base} t={t}"), &first, "limit"));
            if let Some((p_last, p_first)) = &prev {
                part.check(&last > p_last, || violation("l[t] last ratio increasing in t", format_args!("{base} t={t}"), &last, p_last));
                part.check(&first < p_first, || violation("l<t> first ratio decreasing in t", format_args!("{base} t={t}"), &first, p_first));
                part.audit(0, &last < p_last, || violation(TAIL_AUDIT[0].0, format_args!("{base} t={}..{t}", t - 1), &last, p_last));
            }
            prev = Some((last, first));
        }
        Ok(part)
    })
}

fn regime_agreement(b: &Bounds) -> Result<Part> {
    let mut lines: Vec<(RationalLine, Option<i64>)> =
        line_corpus(b.corpus)?.into_iter().map(|l| (l, None)).collect();
    lines.extend(positive_corpus().into_iter().map(|l| (l, Some(POSITIVE_CAP))));

    let mut part = sharded(&lines, |(l, cap)| {
        let mut part = Part::default();
        let report = classify_line(l, *cap, ClassifyMode::Exhaustive)?;
        if report.n_points < 2 {
            return Ok(part);
        }
        let got = report.classification;
        match slope_regime(l.slope())? {
            SlopeRegime::Increasing => part.check(got == Classification::Increasing, || violation("increasing regime", l, got, "Increasing")),
            SlopeRegime::Decreasing => part.check(got == Classification::Decreasing, || violation("decreasing regime", l, got, "Decreasing")),
            SlopeRegime::Mixed => {}
        }
        check_report_shape(&mut part, &report);
        Ok(part)
    })?;

    // intercept sweep at a mixed slope
    let (a1, a2) = SWEEP_SLOPE;
    let k = neg_slope(a1, a2);
    let cs: Vec<i64> = (1..=b.sweep_cmax).collect();
    let outcomes: Vec<Result<(Classification, Part)>> = cs
        .par_iter()
        .map(|&c| {
            let mut part = Part::default();
            let report = classify_line(&RationalLine::from_parts(k, Rational::new(c, a2)), None, ClassifyMode::Exhaustive)?;
            check_report_shape(&mut part, &report);
            Ok((report.classification, part))
        })
        .collect();
    let mut counts: BTreeMap<&'static str, usize> = BTreeMap::new();
    for o in outcomes {
        let (class, p) = o?;
        *counts.entry(class.as_str()).or_default() += 1;
        part.merge(p);
    }
    for needed in ["Increasing", "Decreasing", "NonMonotonic"] {
        let n = counts.get(needed).copied().unwrap_or(0);
        part.check(n > 0, || violation("mixed slope shows every outcome", format_args!("k=-{a1}/{a2} c<={}", b.sweep_cmax), needed, "absent"));
    }
    part.notes.push(format!(
        "k=-{a1}/{a2}, b=c/{a2}, c=1..{}: {}",
        b.sweep_cmax,
        counts.iter().map(|(k, v)| format!("{k} {v}")).collect::<Vec<_>>().join(", ")
    ));

    // far right shifts of mixed-slope corpus lines
    let mixed: Vec<RationalLine> = lines
        .iter()
        .map(|(l, _)| *l)
        .filter(|l| l.slope() < Rational::from_integer(0))
        .filter(|l| matches!(slope_regime(l.slope()), Ok(SlopeRegime::Mixed)))
        .collect();
    let mut seen = BTreeMap::new();
    let bases: Vec<RationalLine> = mixed.into_iter().filter(|l| *seen.entry(l.slope()).or_insert(0usize) < 3 && { *seen.get_mut(&l.slope()).unwrap() += 1; true }).collect();
    part.merge(sharded(&bases, |l| {
        let mut part = Part::default();
        for t in RIGHT_SHIFTS {
            let shifted = l.shift(t, ShiftMode::XAxis)?;
            let got = classify_line(&shifted, None, ClassifyMode::Exhaustive)?.classification;
            part.check(got == Classification::NonMonotonic, || violation("far right shifts are non-monotonic", format_args!("{l} t={t}"), got, "NonMonotonic"));
        }
        Ok(part)
    })?);

    // witness lines and the first non-monotonic intercept
    for (line, class, values) in [
        (RationalLine::new(-1, 1, 7, 1)?, Classification::Increasing, ["169", "194", "233"]),
        (RationalLine::new(-2, 1, 20, 1)?, Classification::Decreasing, ["33461", "16725", "9077"]),
    ] {
        let r = classify_line(&line, None, ClassifyMode::Exhaustive)?;
        let got: Vec<String> = r.values().map(|v| v.to_string()).collect();
        part.check(r.classification == class && got == values, || violation("witness line", line, format_args!("{} {}", r.classification, got.join(",")), format_args!("{class} {}", values.join(","))));
    }
    match find_nonmonotonic_intercept(k, 10_000)? {
        Some((b0, r)) => {
            part.check(r.unimodal == Some(true) && r.end_ratio_criterion(), || violation("first non-monotonic line is unimodal", r.line, format_args!("{:?}", r.unimodal), "Some(true)"));
            part.notes.push(format!(
                "first non-monotonic intercept for k=-{a1}/{a2}: b={b0}, turning point {}",
                r.turning_point.map_or("-".to_string(), |p| p.to_string())
            ));
        }
        None => part.check(false, || violation("non-monotonic line exists", format_args!("k=-{a1}/{a2}"), "none", "c<=10000")),
    }
    Ok(part)
}

fn check_report_shape(part: &mut Part, r: &genmarkov_core::MonotonicityReport) {
    if r.n_points < 2 {
        return;
    }
    let nonmono = r.classification == Classification::NonMonotonic;
    part.check(nonmono == r.end_ratio_criterion(), || violation("non-monotonic iff first < 1 < last", r.line, r.classification, format_args!("criterion {}", r.end_ratio_criterion())));
    part.check(r.unimodal == Some(true), || violation("decrease then increase", r.line, format_args!("{:?}", r.unimodal), "Some(true)"));
}

fn uniqueness(b: &Bounds) -> Result<Part> {
    let values = Values::new(b.qmax)?;
    let mut part = Part::default();
    let mut first_seen: BTreeMap<&ExactNat, (u64, u64)> = BTreeMap::new();
    for q in 1..=b.qmax {
        for p in 0..=q {
            let v = values.m(q, p);
            let clash = first_seen.insert(v, (q, p));
            part.check(clash.is_none(), || {
                let (q0, p0) = clash.unwrap_or_default();
                violation("distinct indices give distinct values", format_args!("({q0},{p0}) and ({q},{p})"), v, v)
            });
        }
    }
    Ok(part)
}
