//! Markov triples on the Stern-Brocot tree and generalized Markov numbers.
//!
//! The tree is descended from the root interval `[0/1, 1/1]`, which carries
//! the triple `(1, 2, 5)`: the endpoint values `m(1,0) = 1` and `m(1,1) = 2`
//! together with the value `5` at the mediant `1/2`. Moving into the left
//! half-interval maps `(x, y, z)` to `(x, z, 3xz - y)`, the right half maps it
//! to `(z, y, 3yz - x)`. Non-primitive points `(nq, np)` follow from the
//! primitive value `f1 = m(q, p)` by `f(n) = 3 f1 f(n-1) - f(n-2)`.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::lattice::LatticePoint;
use crate::real::{Real, GUARD_DIGITS};
use crate::sequence::{fibonacci, pell};
use crate::{Error, ExactNat, Result};

/// A fraction `num/den` labelling a Farey interval endpoint.
pub type Fraction = (u64, u64);

/// A Markov triple together with the Farey interval it labels.
///
/// `left` and `right` belong to the interval endpoints, `mediant` to the
/// mediant fraction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MarkovTriple {
    pub left: ExactNat,
    pub right: ExactNat,
    pub mediant: ExactNat,
    pub left_fraction: Fraction,
    pub right_fraction: Fraction,
}

impl MarkovTriple {
    fn root() -> Self {
        MarkovTriple {
            left: ExactNat::from(1u32),
            right: ExactNat::from(2u32),
            mediant: ExactNat::from(5u32),
            left_fraction: (0, 1),
            right_fraction: (1, 1),
        }
    }

    /// The fraction `p/q` labelled by `mediant`.
    pub fn mediant_fraction(&self) -> Fraction {
        (
            self.left_fraction.0 + self.right_fraction.0,
            self.left_fraction.1 + self.right_fraction.1,
        )
    }

    /// `x^2 + y^2 + z^2 == 3xyz`.
    pub fn satisfies_markov_equation(&self) -> bool {
        let (x, y, z) = (&self.left, &self.right, &self.mediant);
        x * x + y * y + z * z == x * y * z * 3u32
    }

    fn left_child(&self) -> Self {
        let mediant = (&self.left * &self.mediant * 3u32) - &self.right;
        MarkovTriple {
            left: self.left.clone(),
            right: self.mediant.clone(),
            mediant,
            left_fraction: self.left_fraction,
            right_fraction: self.mediant_fraction(),
        }
    }

    fn right_child(&self) -> Self {
        let mediant = (&self.right * &self.mediant * 3u32) - &self.left;
        MarkovTriple {
            left: self.mediant.clone(),
            right: self.right.clone(),
            mediant,
            left_fraction: self.mediant_fraction(),
            right_fraction: self.right_fraction,
        }
    }
}

fn check_primitive(q: u64, p: u64) -> Result<()> {
    if p == 0 || p >= q {
        return Err(Error::OutOfRange { q, p });
    }
    if q.gcd(&p) != 1 {
        return Err(Error::NotCoprime { q, p });
    }
    Ok(())
}

/// Triple whose mediant fraction is `p/q`, for coprime `0 < p < q`.
///
/// Iterative descent; the number of steps is the sum of the partial
/// quotients of `p/q` minus one.
pub fn markov_triple_at(q: u64, p: u64) -> Result<MarkovTriple> {
    markov_triple_visiting(q, p, |_| {})
}

/// Like [`markov_triple_at`], calling `visit` on every triple on the path
/// from the root, the result included.
pub fn markov_triple_visiting(
    q: u64,
    p: u64,
    mut visit: impl FnMut(&MarkovTriple),
) -> Result<MarkovTriple> {
    check_primitive(q, p)?;
    let target = (p as u128, q as u128);
    let mut triple = MarkovTriple::root();
    loop {
        if !triple.satisfies_markov_equation() {
            return Err(Error::Internal("Markov equation violated on tree descent"));
        }
        visit(&triple);
        let (mn, md) = triple.mediant_fraction();
        let (mn, md) = (mn as u128, md as u128);
        // p/q against the mediant by cross-multiplication
        match (target.0 * md).cmp(&(mn * target.1)) {
            core::cmp::Ordering::Equal => return Ok(triple),
            core::cmp::Ordering::Less => triple = triple.left_child(),
            core::cmp::Ordering::Greater => triple = triple.right_child(),
        }
    }
}

fn scaled_term(f1: &ExactNat, n: u64) -> ExactNat {
    let mut prev = ExactNat::zero();
    let mut cur = f1.clone();
    if n == 0 {
        return prev;
    }
    let three_f1 = f1 * 3u32;
    for _ in 1..n {
        let next = &three_f1 * &cur - &prev;
        prev = core::mem::replace(&mut cur, next);
    }
    cur
}

/// `m(q, p)` for `0 <= p <= q`, with `m(0, 0) = 0`.
pub fn generalized_markov(q: u64, p: u64) -> Result<ExactNat> {
    if p > q {
        return Err(Error::OutOfRange { q, p });
    }
    if p == 0 {
        return Ok(fibonacci(2 * q));
    }
    if p == q {
        return Ok(pell(2 * q));
    }
    let g = q.gcd(&p);
    let f1 = markov_triple_at(q / g, p / g)?.mediant;
    Ok(scaled_term(&f1, g))
}

/// `m(x, y)` at a lattice point with `0 <= y <= x`.
pub fn generalized_markov_at(point: LatticePoint) -> Result<ExactNat> {
    let LatticePoint { x, y } = point;
    if y < 0 || y > x {
        return Err(Error::InvalidPoint { x, y });
    }
    generalized_markov(x as u64, y as u64)
}

/// Values `f(n) = m(nq, np)` along the ray through a primitive point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScaledSequence {
    pub base: (u64, u64),
    pub values: Vec<ExactNat>,
}

impl ScaledSequence {
    pub fn f1(&self) -> &ExactNat {
        &self.values[1]
    }

    /// `f(n) = 3 f(1) f(n-1) - f(n-2)` at every `n >= 2` and `f(0) = 0`.
    pub fn satisfies_recurrence(&self) -> bool {
        if !self.values[0].is_zero() {
            return false;
        }
        let three_f1 = self.f1() * 3u32;
        self.values
            .windows(3)
            .all(|w| &w[2] + &w[0] == &three_f1 * &w[1])
    }
}

/// Ray values for a primitive base: coprime `0 < p < q`, or one of the
/// boundary seeds `(1, 0)` and `(1, 1)`.
pub fn scaled_sequence(q: u64, p: u64, nmax: u64) -> Result<ScaledSequence> {
    let f1 = match (q, p) {
        (1, 0) | (1, 1) => generalized_markov(q, p)?,
        _ => markov_triple_at(q, p)?.mediant,
    };
    let three_f1 = &f1 * 3u32;
    let mut values = Vec::with_capacity(nmax as usize + 1);
    values.push(ExactNat::zero());
    if nmax >= 1 {
        values.push(f1);
    }
    for n in 2..=nmax as usize {
        let next = &three_f1 * &values[n - 1] - &values[n - 2];
        values.push(next);
    }
    Ok(ScaledSequence { base: (q, p), values })
}

/// `alpha = (3 f1 + sqrt(9 f1^2 - 4)) / 2`, the dominant root of the ray
/// recurrence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GrowthConstant {
    pub f1: ExactNat,
    pub alpha: Real,
}

impl GrowthConstant {
    pub fn digits(&self) -> u32 {
        self.alpha.digits()
    }
}

/// `sqrt(9 f1^2 - 4)` at the given precision.
pub fn growth_discriminant_sqrt(f1: &ExactNat, digits: u32) -> Real {
    let disc = f1 * f1 * 9u32 - 4u32;
    Real::sqrt_ratio(&disc, &BigUint::one(), digits)
}

/// Growth constant for `f1 >= 1`, rounded to `digits` places.
pub fn growth_alpha(f1: &ExactNat, digits: u32) -> Result<GrowthConstant> {
    if f1.is_zero() {
        return Err(Error::OutOfRange { q: 0, p: 0 });
    }
    let work = digits + GUARD_DIGITS;
    let root = growth_discriminant_sqrt(f1, work);
    let three_f1 = Real::from_integer(num_bigint::BigInt::from(f1 * 3u32), work);
    let two = Real::from_integer(2, work);
    let alpha = three_f1.add(&root).div(&two).rescale(digits);
    Ok(GrowthConstant { f1: f1.clone(), alpha })
}

/// A memo of `m(q, p)` values owned by a single worker.
#[derive(Clone, Debug, Default)]
pub struct MarkovCache {
    values: BTreeMap<(u64, u64), ExactNat>,
}

impl MarkovCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&mut self, q: u64, p: u64) -> Result<&ExactNat> {
        if !self.values.contains_key(&(q, p)) {
            let v = generalized_markov(q, p)?;
            self.values.insert((q, p), v);
        }
        Ok(&self.values[&(q, p)])
    }

    pub fn at(&mut self, point: LatticePoint) -> Result<&ExactNat> {
        let LatticePoint { x, y } = point;
        if y < 0 || y > x {
            return Err(Error::InvalidPoint { x, y });
        }
        self.get(x as u64, y as u64)
    }

    pub fn insert(&mut self, q: u64, p: u64, value: ExactNat) {
        self.values.insert((q, p), value);
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Entries in ascending `(q, p)` order.
    pub fn iter(&self) -> impl Iterator<Item = (&(u64, u64), &ExactNat)> {
        self.values.iter()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    fn n(v: u64) -> ExactNat {
        ExactNat::from(v)
    }

    #[test]
    fn root_and_first_steps() {
        let t = markov_triple_at(2, 1).unwrap();
        assert_eq!((t.left, t.right, t.mediant), (n(1), n(2), n(5)));
        let t = markov_triple_at(3, 2).unwrap();
        assert_eq!((t.left.clone(), t.right.clone(), t.mediant.clone()), (n(5), n(2), n(29)));
        assert_eq!(t.mediant_fraction(), (2, 3));
        let t = markov_triple_at(9, 2).unwrap();
        assert_eq!((t.left, t.right, t.mediant), (n(89), n(34), n(9077)));
    }

    #[test]
    fn rejects_bad_indices() {
        assert_eq!(markov_triple_at(4, 2), Err(Error::NotCoprime { q: 4, p: 2 }));
        assert_eq!(markov_triple_at(3, 3), Err(Error::OutOfRange { q: 3, p: 3 }));
        assert_eq!(markov_triple_at(3, 0), Err(Error::OutOfRange { q: 3, p: 0 }));
        assert_eq!(generalized_markov(2, 3), Err(Error::OutOfRange { q: 2, p: 3 }));
    }

    #[test]
    fn long_path_is_iterative() {
        // 1/200 walks 198 left steps; value is F(401)
        let t = markov_triple_at(200, 1).unwrap();
        assert_eq!(t.mediant, fibonacci(401));
    }

    #[test]
    fn generalized_values() {
        assert_eq!(generalized_markov(3, 1).unwrap(), n(13));
        assert_eq!(generalized_markov(3, 3).unwrap(), n(70));
        assert_eq!(generalized_markov(4, 2).unwrap(), n(75));
        assert_eq!(generalized_markov(6, 3).unwrap(), n(1120));
        assert_eq!(generalized_markov(0, 0).unwrap(), n(0));
        assert_eq!(generalized_markov(1, 0).unwrap(), n(1));
        assert_eq!(generalized_markov(1, 1).unwrap(), n(2));
    }

    #[test]
    fn scaled_sequences() {
        let s = scaled_sequence(2, 1, 3).unwrap();
        assert_eq!(s.values, [n(0), n(5), n(75), n(1120)]);
        let s = scaled_sequence(1, 0, 4).unwrap();
        assert_eq!(s.values, [n(0), n(1), n(3), n(8), n(21)]);
        let s = scaled_sequence(1, 1, 3).unwrap();
        assert_eq!(s.values, [n(0), n(2), n(12), n(70)]);
        assert!(s.satisfies_recurrence());
        assert!(scaled_sequence(4, 2, 3).is_err());
    }

    #[test]
    fn growth_alpha_digits() {
        assert_eq!(growth_alpha(&n(1), 12).unwrap().alpha.to_string(), "2.618033988750");
        assert_eq!(growth_alpha(&n(2), 10).unwrap().alpha.to_string(), "5.8284271247");
        assert_eq!(growth_alpha(&n(5), 6).unwrap().alpha.to_string(), "14.933034");
    }

    #[test]
    fn cache_agrees_with_direct() {
        let mut cache = MarkovCache::new();
        assert_eq!(cache.get(9, 2).unwrap(), &n(9077));
        assert_eq!(cache.at(LatticePoint::new(4, 2)).unwrap(), &n(75));
        assert_eq!(cache.len(), 2);
    }
}
