//! Fibonacci and Pell numbers, the two boundary rays of the value triangle.

use num_traits::{One, Zero};

use crate::ExactNat;

/// `F(0) = 0, F(1) = 1, F(n) = F(n-1) + F(n-2)`.
pub fn fibonacci(n: u64) -> ExactNat {
    linear_recurrence(n, 1u32)
}

/// `P(0) = 0, P(1) = 1, P(n) = 2 P(n-1) + P(n-2)`, so `P(2) = 2`.
pub fn pell(n: u64) -> ExactNat {
    linear_recurrence(n, 2u32)
}

// a(n) = c a(n-1) + a(n-2) from (0, 1)
fn linear_recurrence(n: u64, c: u32) -> ExactNat {
    let mut prev = ExactNat::zero();
    let mut cur = ExactNat::one();
    if n == 0 {
        return prev;
    }
    for _ in 1..n {
        let next = &cur * c + &prev;
        prev = core::mem::replace(&mut cur, next);
    }
    cur
}
