//! Argument grammar and dispatch for the `genmarkov` binary.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::PathBuf;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};
use genmarkov_core::lattice::{family_line, parse_rational, Family};
use genmarkov_core::{
    classify_line, find_nonmonotonic_intercept, generalized_markov, limit_first_ratio,
    limit_last_ratio, line_ratios, thresholds, ClassifyMode, MarkovCache, Rational, RationalLine,
};

use crate::format::{
    self, LimitRow, LimitsDoc, MarkovDoc, RatioRow, ReportDoc, SearchDoc, TableRow, ThresholdsDoc,
    DEFAULT_DIGITS, DIGITS_ENV,
};
use crate::harness::{self, end_ratios, Bounds, ViolationReport, SUITES};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Csv,
    Json,
    Plain,
}

#[derive(Debug, Parser)]
#[command(name = "genmarkov", version, about = "Generalized Markov numbers, line ratios and their monotonicity")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Output format; each subcommand has its own default.
    #[arg(long, global = true, value_enum)]
    pub format: Option<OutputFormat>,
    /// Write the document here instead of standard output.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
    /// Decimal places for ratios, limits and constants.
    #[arg(long, global = true, env = DIGITS_ENV, default_value_t = DEFAULT_DIGITS)]
    pub digits: u32,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print m(q, p).
    Markov {
        q: u64,
        p: u64,
        /// Cache file of `q,p,value` lines, read if present and rewritten.
        #[arg(long)]
        cache: Option<PathBuf>,
    },
    /// m over 0 <= p <= q <= qmax.
    Table {
        #[arg(long)]
        qmax: u64,
        /// Worker threads.
        #[arg(long)]
        workers: Option<usize>,
    },
    /// Points of a line with the exact ratios between neighbours.
    Ratios {
        #[arg(long, allow_hyphen_values = true, value_parser = rational)]
        k: Rational,
        #[arg(long, allow_hyphen_values = true, value_parser = rational)]
        b: Rational,
        #[arg(long)]
        cap: Option<i64>,
    },
    /// Monotonicity report of a line.
    Classify {
        #[arg(long, allow_hyphen_values = true, value_parser = rational)]
        k: Rational,
        #[arg(long, allow_hyphen_values = true, value_parser = rational)]
        b: Rational,
        #[arg(long)]
        cap: Option<i64>,
        /// Use only the end ratios and bisection.
        #[arg(long)]
        fast: bool,
    },
    /// End ratios of the families l_n and L_n for the slope -a1/a2.
    Limits {
        #[arg(long, allow_hyphen_values = true, value_parser = slope)]
        slope: (u64, u64),
        #[arg(long, default_value_t = 30)]
        nmax: i64,
    },
    /// The threshold slopes k_plus and k_minus.
    Thresholds,
    /// First intercept c/a2 giving a non-monotonic line of slope -a1/a2.
    SearchNonmono {
        #[arg(long, allow_hyphen_values = true, value_parser = slope)]
        slope: (u64, u64),
        #[arg(long, default_value_t = 10_000)]
        cap: u64,
    },
    /// Run a verification suite, or `all` of them.
    Verify {
        #[arg(long)]
        suite: String,
        /// Comma-separated `key=value` overrides, e.g. `qmax=30,nmax=60`.
        #[arg(long, default_value = "")]
        bounds: String,
        #[arg(long)]
        workers: Option<usize>,
    },
}

fn rational(s: &str) -> Result<Rational, String> {
    parse_rational(s).map_err(|e| format!("`{s}`: {e}"))
}

fn slope(s: &str) -> Result<(u64, u64), String> {
    format::parse_slope_parts(s).ok_or_else(|| format!("`{s}`: expected coprime positive a1/a2 for the slope -a1/a2"))
}

/// What a run produced. `stdout` is empty when the document went to a file.
#[derive(Debug, Default, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn usage(message: impl std::fmt::Display) -> Self {
        Outcome { code: 2, stdout: String::new(), stderr: format!("error: {message}\n") }
    }
}

/// Parse `argv` (program name first) and run it.
pub fn run_cli<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    Outcome { code: 0, stdout: text, stderr: String::new() }
                }
                _ => Outcome { code: 2, stdout: String::new(), stderr: text },
            };
        }
    };
    let (code, document) = match execute(&cli) {
        Ok(done) => done,
        Err(message) => return Outcome::usage(message),
    };
    match &cli.output {
        Some(path) => match std::fs::write(path, &document) {
            Ok(()) => Outcome { code, ..Outcome::default() },
            Err(e) => Outcome::usage(format!("{}: {e}", path.display())),
        },
        None => Outcome { code, stdout: document, stderr: String::new() },
    }
}

fn workers(requested: Option<usize>) -> usize {
    requested.unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
}

// Exit code and document, or a message for exit code 2.
fn execute(cli: &Cli) -> Result<(i32, String), String> {
    let digits = cli.digits;
    let err = |e: &dyn std::fmt::Display| e.to_string();
    let doc = match &cli.command {
        Command::Markov { q, p, cache } => {
            let value = match cache {
                Some(path) => {
                    let mut cache = match std::fs::read_to_string(path) {
                        Ok(text) => format::read_cache(&text).map_err(|e| err(&e))?,
                        Err(e) if e.kind() == std::io::ErrorKind::NotFound => MarkovCache::new(),
                        Err(e) => return Err(format!("{}: {e}", path.display())),
                    };
                    let value = cache.get(*q, *p).map_err(|e| err(&e))?.clone();
                    std::fs::write(path, format::write_cache(&cache)).map_err(|e| format!("{}: {e}", path.display()))?;
                    value
                }
                None => generalized_markov(*q, *p).map_err(|e| err(&e))?,
            };
            match cli.format.unwrap_or(OutputFormat::Plain) {
                OutputFormat::Plain => format!("{value}\n"),
                OutputFormat::Json => format::to_json(&MarkovDoc { q: *q, p: *p, value: value.to_string() }).map_err(|e| err(&e))?,
                OutputFormat::Csv => format::to_csv(&[TableRow { q: *q, p: *p, value: value.to_string() }]).map_err(|e| err(&e))?,
            }
        }
        Command::Table { qmax, workers: w } => {
            let rows = value_table(*qmax, workers(*w)).map_err(|e| err(&e))?;
            match cli.format.unwrap_or(OutputFormat::Csv) {
                OutputFormat::Json => format::to_json(&rows),
                _ => format::to_csv(&rows),
            }
            .map_err(|e| err(&e))?
        }
        Command::Ratios { k, b, cap } => {
            let line = RationalLine::from_parts(*k, *b);
            let step = (*k.denom(), *k.numer());
            let rows: Vec<RatioRow> = line_ratios(&line, *cap)
                .map_err(|e| err(&e))?
                .iter()
                .map(|(p, r)| RatioRow::new(*p, p.offset(step.0, step.1), r, digits))
                .collect();
            match cli.format.unwrap_or(OutputFormat::Csv) {
                OutputFormat::Json => format::to_json(&rows),
                _ => format::to_csv(&rows),
            }
            .map_err(|e| err(&e))?
        }
        Command::Classify { k, b, cap, fast } => {
            let mode = if *fast { ClassifyMode::Fast } else { ClassifyMode::Exhaustive };
            let report = classify_line(&RationalLine::from_parts(*k, *b), *cap, mode).map_err(|e| err(&e))?;
            let doc = ReportDoc::from_report(&report, digits);
            match cli.format.unwrap_or(OutputFormat::Json) {
                OutputFormat::Json => format::to_json(&doc).map_err(|e| err(&e))?,
                OutputFormat::Csv => format::to_csv(&[doc.summary()]).map_err(|e| err(&e))?,
                OutputFormat::Plain => {
                    let mut s = format!("{} {} ({} points)\n", doc.line, doc.classification, doc.n_points);
                    for p in &doc.points {
                        let _ = writeln!(s, "({}, {}) {}", p.x, p.y, p.value);
                    }
                    s
                }
            }
        }
        Command::Limits { slope: (a1, a2), nmax } => {
            let doc = limits_doc(*a1, *a2, *nmax, digits).map_err(|e| err(&e))?;
            match cli.format.unwrap_or(OutputFormat::Json) {
                OutputFormat::Csv => {
                    let rows: Vec<LimitRow> = doc.lower.iter().chain(&doc.upper).cloned().collect();
                    format::to_csv(&rows).map_err(|e| err(&e))?
                }
                OutputFormat::Json => format::to_json(&doc).map_err(|e| err(&e))?,
                OutputFormat::Plain => format!(
                    "lower family last ratio -> {}\nupper family first ratio -> {}\n",
                    doc.limit_last_ratio, doc.limit_first_ratio
                ),
            }
        }
        Command::Thresholds => {
            let c = thresholds(digits);
            let doc = ThresholdsDoc {
                digits,
                k_plus: c.k_plus.to_string(),
                k_minus: c.k_minus.to_string(),
                phi: c.phi.to_string(),
                silver: c.silver.to_string(),
            };
            match cli.format.unwrap_or(OutputFormat::Plain) {
                OutputFormat::Json => format::to_json(&doc).map_err(|e| err(&e))?,
                OutputFormat::Csv => format::to_csv(&[doc]).map_err(|e| err(&e))?,
                OutputFormat::Plain => format!(
                    "k_plus  {}\nk_minus {}\nphi     {}\nsilver  {}\n",
                    doc.k_plus, doc.k_minus, doc.phi, doc.silver
                ),
            }
        }
        Command::SearchNonmono { slope: (a1, a2), cap } => {
            let k = Rational::new(-(*a1 as i64), *a2 as i64);
            let found = find_nonmonotonic_intercept(k, *cap).map_err(|e| err(&e))?;
            let doc = SearchDoc {
                slope: k.to_string(),
                cap: *cap,
                intercept: found.as_ref().map(|(b, _)| b.to_string()),
                report: found.as_ref().map(|(_, r)| ReportDoc::from_report(r, digits)),
            };
            match cli.format.unwrap_or(OutputFormat::Json) {
                OutputFormat::Plain => match &doc.intercept {
                    Some(b) => format!("y = {}x + {b}\n", doc.slope),
                    None => "none\n".to_string(),
                },
                _ => format::to_json(&doc).map_err(|e| err(&e))?,
            }
        }
        Command::Verify { suite, bounds, workers: w } => {
            let bounds: Bounds = bounds.parse().map_err(|e| err(&e))?;
            let names: Vec<&str> = if suite == "all" { SUITES.to_vec() } else { vec![suite.as_str()] };
            let mut reports: Vec<ViolationReport> = Vec::new();
            for name in names {
                reports.push(harness::run_suite(name, &bounds, workers(*w)).map_err(|e| err(&e))?);
            }
            let code = if reports.iter().all(ViolationReport::passed) { 0 } else { 1 };
            let doc = match cli.format.unwrap_or(OutputFormat::Plain) {
                OutputFormat::Json if reports.len() == 1 => format::to_json(&reports[0]).map_err(|e| err(&e))?,
                OutputFormat::Json => format::to_json(&reports).map_err(|e| err(&e))?,
                _ => reports.iter().map(ViolationReport::to_table).collect::<Vec<_>>().join("\n"),
            };
            return Ok((code, doc));
        }
    };
    Ok((0, doc))
}

/// Rows `(q, p, m(q, p))` for `1 <= q <= qmax`, `0 <= p <= q`, by `q` then `p`.
pub fn value_table(qmax: u64, workers: usize) -> genmarkov_core::Result<Vec<TableRow>> {
    use rayon::prelude::*;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|_| genmarkov_core::Error::Internal("thread pool"))?;
    let indices: Vec<(u64, u64)> = (1..=qmax).flat_map(|q| (0..=q).map(move |p| (q, p))).collect();
    pool.install(|| {
        indices
            .par_iter()
            .map(|&(q, p)| Ok(TableRow { q, p, value: generalized_markov(q, p)?.to_string() }))
            .collect()
    })
}

/// End-ratio sequences of `l_n` and `L_n` for `n <= nmax` with their limits.
pub fn limits_doc(a1: u64, a2: u64, nmax: i64, digits: u32) -> genmarkov_core::Result<LimitsDoc> {
    let k = Rational::new(-(a1 as i64), a2 as i64);
    let last = limit_last_ratio(a1, a2, digits)?.to_string();
    let first = limit_first_ratio(a1, a2, digits)?.to_string();
    let mut lower = Vec::new();
    let mut upper = Vec::new();
    for n in 1..=nmax {
        for (family, rows, limit) in [(Family::Lower, &mut lower, &last), (Family::Upper, &mut upper, &first)] {
            let line = family_line(k, n, family)?;
            let ends = end_ratios(&line).map_err(|e| match e {
                harness::HarnessError::Core(e) => e,
                _ => genmarkov_core::Error::Internal("end ratios"),
            })?;
            if let Some((f, l)) = ends {
                let r = if family == Family::Lower { l } else { f };
                rows.push(LimitRow {
                    family: if family == Family::Lower { "lower" } else { "upper" }.to_string(),
                    n,
                    numerator: r.num.to_string(),
                    denominator: r.den.to_string(),
                    decimal: r.to_decimal(digits),
                    limit: limit.clone(),
                });
            }
        }
    }
    Ok(LimitsDoc { slope: k.to_string(), digits, limit_last_ratio: last, limit_first_ratio: first, lower, upper })
}
