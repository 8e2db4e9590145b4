//! Exact binomial coefficients.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

/// `C(n, k)` for `n >= 0`, zero when `k < 0` or `k > n`.
pub fn binomial(n: i64, k: i64) -> BigUint {
    if n < 0 || k < 0 || k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        // acc * (n - i) is always divisible by (i + 1) at this point
        acc *= BigUint::from((n - i) as u64);
        acc /= BigUint::from((i + 1) as u64);
    }
    acc
}

/// The polynomial binomial `x(x-1)...(x-k+1)/k!`, valid for negative `x`.
pub fn binomial_poly(x: i64, k: i64) -> BigInt {
    if k < 0 {
        return BigInt::zero();
    }
    let mut acc = BigInt::one();
    for i in 0..k {
        acc *= BigInt::from(x - i);
        acc /= BigInt::from(i + 1);
    }
    acc
}

pub fn pow2(e: u32) -> u64 {
    1u64 << e
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pascal(n: usize, k: usize) -> u64 {
        let mut row = vec![1u64];
        for _ in 0..n {
            let mut next = vec![1u64; row.len() + 1];
            for j in 1..row.len() {
                next[j] = row[j - 1] + row[j];
            }
            row = next;
        }
        row.get(k).copied().unwrap_or(0)
    }

    #[test]
    fn matches_pascal_triangle() {
        for n in 0..30 {
            for k in 0..=n + 2 {
                assert_eq!(binomial(n as i64, k as i64), BigUint::from(pascal(n, k)), "C({n},{k})");
            }
        }
    }

    #[test]
    fn out_of_range_is_zero() {
        assert!(binomial(-1, 0).is_zero());
        assert!(binomial(3, -1).is_zero());
        assert!(binomial(3, 4).is_zero());
    }

    #[test]
    fn polynomial_binomial_handles_negatives() {
        // C(-1, 2) = (-1)(-2)/2 = 1
        assert_eq!(binomial_poly(-1, 2), BigInt::from(1));
        assert_eq!(binomial_poly(-3, 3), BigInt::from(-10));
        assert_eq!(binomial_poly(5, 2), BigInt::from(10));
        assert_eq!(binomial_poly(1, 3), BigInt::from(0));
    }

    #[test]
    fn large_values_are_exact() {
        let b = binomial(100, 49);
        assert_eq!(b.to_string(), "98913082887808032681188722800");
    }
}
