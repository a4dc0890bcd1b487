//! Cohn-matrix characterization of Markov numbers.
//!
//! Independent of the tree descent: the lower Christoffel word of the
//! primitive point `(q, p)` is evaluated with `a -> [[2,1],[1,1]]` and
//! `b -> [[5,2],[2,1]]`; the trace of the product is three times the Markov
//! number.

use alloc::vec::Vec;

use num_integer::Integer;
use num_traits::{One, Zero};

use crate::{Error, ExactNat, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Letter {
    A,
    B,
}

/// Word of length `q` with `p` letters `b`; letter `i` (1-based) is `b`
/// exactly when `floor(i p / q)` steps up.
pub fn christoffel_word(q: u64, p: u64) -> Vec<Letter> {
    let (q128, p128) = (q as u128, p as u128);
    (1..=q128)
        .map(|i| {
            if (i * p128) / q128 > ((i - 1) * p128) / q128 {
                Letter::B
            } else {
                Letter::A
            }
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct Mat2([ExactNat; 4]);

impl Mat2 {
    fn identity() -> Self {
        Mat2([ExactNat::one(), ExactNat::zero(), ExactNat::zero(), ExactNat::one()])
    }

    fn from_u32(e: [u32; 4]) -> Self {
        Mat2(e.map(ExactNat::from))
    }

    fn mul(&self, o: &Mat2) -> Mat2 {
        let [a, b, c, d] = &self.0;
        let [e, f, g, h] = &o.0;
        Mat2([a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h])
    }

    fn trace(&self) -> ExactNat {
        &self.0[0] + &self.0[3]
    }
}

/// Markov number at coprime `0 < p < q` from the Cohn-matrix trace.
pub fn cohn_trace_oracle(q: u64, p: u64) -> Result<ExactNat> {
    if p == 0 || p >= q {
        return Err(Error::OutOfRange { q, p });
    }
    if q.gcd(&p) != 1 {
        return Err(Error::NotCoprime { q, p });
    }
    let a = Mat2::from_u32([2, 1, 1, 1]);
    let b = Mat2::from_u32([5, 2, 2, 1]);
    let product = christoffel_word(q, p)
        .into_iter()
        .fold(Mat2::identity(), |acc, letter| match letter {
            Letter::A => acc.mul(&a),
            Letter::B => acc.mul(&b),
        });
    let (value, rem) = product.trace().div_rem(&ExactNat::from(3u32));
    if !rem.is_zero() {
        return Err(Error::Internal("Cohn trace not divisible by 3"));
    }
    Ok(value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use Letter::{A, B};

    #[test]
    fn words() {
        assert_eq!(christoffel_word(2, 1), [A, B]);
        assert_eq!(christoffel_word(3, 2), [A, B, B]);
        assert_eq!(christoffel_word(5, 2), [A, A, B, A, B]);
    }

    #[test]
    fn traces() {
        assert_eq!(cohn_trace_oracle(2, 1).unwrap(), ExactNat::from(5u32));
        assert_eq!(cohn_trace_oracle(3, 2).unwrap(), ExactNat::from(29u32));
        assert_eq!(cohn_trace_oracle(5, 2).unwrap(), ExactNat::from(194u32));
    }

    #[test]
    fn rejects_non_primitive() {
        assert!(matches!(cohn_trace_oracle(6, 4), Err(Error::NotCoprime { .. })));
        assert!(matches!(cohn_trace_oracle(3, 0), Err(Error::OutOfRange { .. })));
    }
}
