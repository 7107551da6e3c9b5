//! Trial-division factorization of desk-scale integers.

use alloc::format;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Inputs with absolute value at or above this bound are rejected.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FactorBound {
    pub max_abs: u64,
}

impl Default for FactorBound {
    fn default() -> Self {
        FactorBound { max_abs: i64::MAX as u64 }
    }
}

/// Prime factorization of |n| as (prime, exponent) pairs, primes ascending.
pub fn factorize(n: &BigInt, bound: FactorBound) -> Result<Vec<(u64, u32)>> {
    if n.is_zero() {
        return Err(Error::Invalid(format!("cannot factor zero")));
    }
    let m = n
        .abs()
        .to_u64()
        .filter(|m| *m < bound.max_abs)
        .ok_or_else(|| Error::InputTooLarge(format!("{n} exceeds the factorization bound {}", bound.max_abs)))?;
    Ok(factor_u64(m))
}

pub fn factor_u64(mut m: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d.saturating_mul(d) <= m {
        if m % d == 0 {
            let mut e = 0;
            while m % d == 0 {
                m /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if m > 1 {
        out.push((m, 1));
    }
    out
}

/// p-adic valuation of a nonzero integer.
pub fn valuation(n: &BigInt, p: u64) -> (u32, BigInt) {
    let p = BigInt::from(p);
    let mut n = n.clone();
    let mut v = 0;
    while (&n % &p).is_zero() {
        n /= &p;
        v += 1;
    }
    (v, n)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factors_small_numbers() {
        assert_eq!(factor_u64(360), alloc::vec![(2, 3), (3, 2), (5, 1)]);
        assert_eq!(factor_u64(97), alloc::vec![(97, 1)]);
        assert!(factorize(&BigInt::from(-12), FactorBound::default()).is_ok());
    }

    #[test]
    fn bound_is_enforced() {
        let big: BigInt = BigInt::from(1u64 << 40);
        let err = factorize(&big, FactorBound { max_abs: 1 << 20 }).unwrap_err();
        assert!(matches!(err, Error::InputTooLarge(_)));
        assert!(factorize(&(big.clone() * big), FactorBound::default()).is_err());
    }
}
