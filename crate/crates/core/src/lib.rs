//! Exact arithmetic for generalized Markov numbers.
//!
//! A generalized Markov number `m(q, p)` is attached to every integer point
//! `0 <= p <= q`. For coprime `0 < p < q` it is the classical Markov number
//! indexed by the Farey fraction `p/q`; other points are reached by the
//! recurrence `f(n) = 3 f(1) f(n-1) - f(n-2)` along the ray through the
//! primitive point, with Fibonacci and Pell numbers on the two boundary rays.
//!
//! On top of the values themselves the crate provides
//!
//! * enumeration of integral points of rational lines inside `x > y >= 1`
//!   ([`lattice`]),
//! * exact ratios between neighbouring values and their closed-form limits
//!   ([`ratio`], [`limits`]),
//! * a per-line monotonicity classifier with certificates ([`monotonicity`]).
//!
//! Every inequality is decided by exact integer arithmetic. Real-valued
//! outputs (growth constants, limits, threshold slopes) are produced by
//! scaled integer arithmetic in [`real`] and never by machine floats.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod cohn;
mod error;
pub mod lattice;
pub mod limits;
pub mod markov;
pub mod monotonicity;
pub mod ratio;
pub mod real;
pub mod sequence;
pub mod surd;

pub use error::{Error, Result};
pub use lattice::{Family, LatticePoint, LineEndpoints, Rational, RationalLine, ShiftMode};
pub use limits::{
    limit_first_ratio, limit_first_ratio_exact, limit_last_ratio, limit_last_ratio_exact,
    slope_regime, slope_regime_exact, thresholds, ClosedFormConstants, SlopeRegime,
};
pub use markov::{
    generalized_markov, generalized_markov_at, growth_alpha, markov_triple_at, scaled_sequence,
    GrowthConstant, MarkovCache, MarkovTriple, ScaledSequence,
};
pub use monotonicity::{
    classify_line, find_nonmonotonic_intercept, Classification, ClassifyMode, MonotonicityReport,
};
pub use ratio::{compare_exact, horizontal_ratio, line_ratios, vertical_ratio, ExactRatio};
pub use real::Real;
pub use sequence::{fibonacci, pell};

/// Arbitrary-precision nonnegative integer used for every Markov value.
pub type ExactNat = num_bigint::BigUint;
