//! Exact scalars: rationals, p-adic valuations and modular powers.
//!
//! Big integers and rationals come from `num-bigint` / `num-rational`; this
//! module adds the valuation type and the few number-theoretic helpers the
//! rest of the crate needs.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};

/// Arbitrary-precision rational, always in lowest terms with positive denominator.
pub type ExactRational = BigRational;

/// A p-adic valuation. Zero valuates to [`Valuation::Infinite`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Valuation {
    Finite(i64),
    Infinite,
}

impl Valuation {
    pub fn is_infinite(self) -> bool {
        matches!(self, Valuation::Infinite)
    }

    /// The finite value, or an error for the valuation of zero.
    pub fn finite(self) -> Result<i64> {
        match self {
            Valuation::Finite(v) => Ok(v),
            Valuation::Infinite => Err(Error::InfiniteValuation),
        }
    }
}

impl PartialOrd for Valuation {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Valuation {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Valuation::Finite(a), Valuation::Finite(b)) => a.cmp(b),
            (Valuation::Finite(_), Valuation::Infinite) => Ordering::Less,
            (Valuation::Infinite, Valuation::Finite(_)) => Ordering::Greater,
            (Valuation::Infinite, Valuation::Infinite) => Ordering::Equal,
        }
    }
}

impl std::ops::Add for Valuation {
    type Output = Valuation;

    fn add(self, rhs: Valuation) -> Valuation {
        match (self, rhs) {
            (Valuation::Finite(a), Valuation::Finite(b)) => Valuation::Finite(a + b),
            _ => Valuation::Infinite,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinite => f.write_str("inf"),
        }
    }
}

/// Trial-division primality test.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Validates `p` as an odd prime.
pub fn check_odd_prime(p: i64) -> Result<u64> {
    if p > 2 && is_prime(p as u64) {
        Ok(p as u64)
    } else {
        Err(Error::NotOddPrime(p))
    }
}

/// Exponent of `p` in a nonzero integer, together with the cofactor.
pub fn split_p_part(x: &BigInt, p: u64) -> (u64, BigInt) {
    debug_assert!(!x.is_zero());
    let pb = BigInt::from(p);
    let mut rest = x.clone();
    let mut k = 0;
    loop {
        let (q, r) = rest.div_rem(&pb);
        if !r.is_zero() {
            return (k, rest);
        }
        rest = q;
        k += 1;
    }
}

/// ord_p of an integer.
pub fn padic_valuation_int(x: &BigInt, p: i64) -> Result<Valuation> {
    let p = check_odd_prime(p)?;
    if x.is_zero() {
        return Ok(Valuation::Infinite);
    }
    Ok(Valuation::Finite(split_p_part(x, p).0 as i64))
}

/// ord_p(x) = ord_p(numerator) - ord_p(denominator); infinite iff x = 0.
pub fn padic_valuation(x: &ExactRational, p: i64) -> Result<Valuation> {
    let p = check_odd_prime(p)?;
    if x.is_zero() {
        return Ok(Valuation::Infinite);
    }
    let num = split_p_part(x.numer(), p).0 as i64;
    let den = split_p_part(x.denom(), p).0 as i64;
    Ok(Valuation::Finite(num - den))
}

/// `a^k mod modulus` by square-and-multiply, result in `[0, modulus)`.
pub fn pow_mod(a: i64, k: u64, modulus: u64) -> u64 {
    assert!(modulus >= 1, "modulus must be positive");
    let m = modulus as u128;
    let mut base = (a as i128).rem_euclid(modulus as i128) as u128;
    let mut acc = 1u128 % m;
    let mut k = k;
    while k > 0 {
        if k & 1 == 1 {
            acc = acc * base % m;
        }
        base = base * base % m;
        k >>= 1;
    }
    acc as u64
}

/// Checked `base^exp` in u64.
pub fn checked_pow(base: u64, exp: u32) -> Result<u64> {
    base.checked_pow(exp).ok_or(Error::Overflow("integer power"))
}

/// Euler's totient of p^k for a prime p and k >= 1.
pub fn phi_prime_power(p: u64, k: u32) -> Result<u64> {
    assert!(k >= 1);
    Ok((p - 1) * checked_pow(p, k - 1)?)
}

/// Euler's totient by trial-division factorization.
pub fn totient(n: u64) -> u64 {
    let mut result = n;
    let mut m = n;
    let mut d = 2;
    while d * d <= m {
        if m.is_multiple_of(d) {
            while m.is_multiple_of(d) {
                m /= d;
            }
            result -= result / d;
        }
        d += 1;
    }
    if m > 1 {
        result -= result / m;
    }
    result
}

/// Distinct prime factors by trial division.
pub fn prime_factors(n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut m = n;
    let mut d = 2;
    while d * d <= m {
        if m.is_multiple_of(d) {
            out.push(d);
            while m.is_multiple_of(d) {
                m /= d;
            }
        }
        d += 1;
    }
    if m > 1 {
        out.push(m);
    }
    out
}

/// All positive divisors in increasing order.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n.is_multiple_of(d) {
            small.push(d);
            if d != n / d {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// Converts an exact rational to an integer, failing on a nontrivial denominator.
pub fn to_integer(x: &ExactRational) -> Result<BigInt> {
    if x.is_integer() {
        Ok(x.to_integer())
    } else {
        Err(Error::NotInteger(x.to_string()))
    }
}

/// `(num / den)` as an exact rational.
pub fn ratio(num: i64, den: i64) -> ExactRational {
    ExactRational::new(BigInt::from(num), BigInt::from(den))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(x: ExactRational, p: i64) -> Valuation {
        padic_valuation(&x, p).unwrap()
    }

    #[test]
    fn valuation_examples() {
        assert_eq!(v(ratio(9, 2), 3), Valuation::Finite(2));
        assert_eq!(v(ratio(1, 1), 5), Valuation::Finite(0));
        assert_eq!(v(ratio(-242, 1), 11), Valuation::Finite(2));
        assert_eq!(v(ratio(0, 1), 7), Valuation::Infinite);
        assert_eq!(v(ratio(2, 75), 5), Valuation::Finite(-2));
    }

    #[test]
    fn valuation_rejects_bad_primes() {
        assert_eq!(padic_valuation(&ratio(4, 1), 2), Err(Error::NotOddPrime(2)));
        assert_eq!(padic_valuation(&ratio(4, 1), 9), Err(Error::NotOddPrime(9)));
        assert_eq!(padic_valuation(&ratio(4, 1), -3), Err(Error::NotOddPrime(-3)));
        assert!(Valuation::Infinite.finite().is_err());
    }

    #[test]
    fn pow_mod_examples() {
        // 2^8 = 256 = 15 * 17 + 1
        assert_eq!(2u64.pow(8) % 17, 1);
        assert_eq!(pow_mod(2, 8, 17), 1);
        assert_eq!(243 % 121, 1);
        assert_eq!(pow_mod(3, 5, 121), 1);
        assert_eq!(pow_mod(12345, 0, 7), 1);
        assert_eq!(pow_mod(5, 0, 1), 0);
        assert_eq!(pow_mod(-1, 3, 9), 8);
    }

    #[test]
    fn helpers() {
        assert_eq!(divisors(12), vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(prime_factors(360), vec![2, 3, 5]);
        assert_eq!(totient(272), 128);
        assert_eq!(phi_prime_power(17, 2).unwrap(), 272);
        assert!(is_prime(2) && is_prime(23) && !is_prime(1) && !is_prime(91));
        assert!(Valuation::Finite(3) < Valuation::Infinite);
    }
}
