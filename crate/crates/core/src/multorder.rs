//! Multiplicative orders modulo prime powers and the order-lifting data
//! `(e, m, f_n)` of a prime `q` relative to an odd prime `p`.

use num_bigint::BigInt;
use num_traits::{One, Pow};

use crate::error::{Error, Result};
use crate::exactnum::{
    check_odd_prime, checked_pow, divisors, is_prime, padic_valuation_int, phi_prime_power,
    pow_mod, Valuation,
};

/// Order-lifting data of `q` relative to `p`.
///
/// `e` is the order of `q` mod `p` and `m = ord_p(1 - q^e)`; for `k >= m`
/// the order of `q` mod `p^k` is `e * p^(k - m)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OrderProfile {
    pub q: u64,
    pub p: u64,
    pub e: u64,
    pub m: u32,
}

/// Smallest `t >= 1` with `a^t = 1 (mod p^k)`, searched over the divisors of
/// `phi(p^k)` in increasing order.
pub fn mult_order(a: i64, p: u64, k: u32) -> Result<u64> {
    let p = check_odd_prime(p as i64)?;
    if a.rem_euclid(p as i64) == 0 {
        return Err(Error::NotUnit { a, modulus: p });
    }
    if k == 0 {
        return Ok(1);
    }
    let modulus = checked_pow(p, k)?;
    let phi = phi_prime_power(p, k)?;
    divisors(phi)
        .into_iter()
        .find(|&t| pow_mod(a, t, modulus) == 1)
        .ok_or_else(|| Error::Inconsistent(format!("no order of {a} divides phi({modulus})")))
}

pub fn order_profile(q: u64, p: u64) -> Result<OrderProfile> {
    let p = check_odd_prime(p as i64)?;
    if !is_prime(q) {
        return Err(Error::NotPrime(q as i64));
    }
    if q == p {
        return Err(Error::SamePrime { p, q });
    }
    let e = mult_order(q as i64, p, 1)?;
    let one_minus = BigInt::one() - BigInt::from(q).pow(e);
    let m = match padic_valuation_int(&one_minus, p as i64)? {
        Valuation::Finite(m) => m as u32,
        // q^e > 1 for a prime q
        Valuation::Infinite => unreachable!("1 - q^e is nonzero"),
    };
    Ok(OrderProfile { q, p, e, m })
}

impl OrderProfile {
    /// Order of `q` modulo `p^(n+1)` from the closed form `e * p^(n+1-m)`.
    ///
    /// Only valid for `n + 1 >= m`; smaller `n` must go through [`mult_order`].
    pub fn f_n(&self, n: u32) -> Result<u64> {
        if n + 1 < self.m {
            return Err(Error::OutsideClosedForm { n, m: self.m });
        }
        let lift = checked_pow(self.p, n + 1 - self.m)?;
        self.e.checked_mul(lift).ok_or(Error::Overflow("f_n"))
    }

    /// Order of `q` modulo `p^(n+1)` for any `n`, by brute force when the
    /// closed form does not apply.
    pub fn order_mod_power(&self, n: u32) -> Result<u64> {
        match self.f_n(n) {
            Ok(f) => Ok(f),
            Err(Error::OutsideClosedForm { .. }) => mult_order(self.q as i64, self.p, n + 1),
            Err(e) => Err(e),
        }
    }

    pub fn e_is_even(&self) -> bool {
        self.e.is_multiple_of(2)
    }

    /// `beta` in `q^e = 1 + beta * p^m`.
    pub fn beta(&self) -> BigInt {
        let qe = BigInt::from(self.q).pow(self.e);
        (qe - 1u32) / BigInt::from(self.p).pow(self.m)
    }
}

/// Outcome of the order-lifting verification at one `n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lemma31Report {
    pub profile: OrderProfile,
    pub n: u32,
    pub f_n: u64,
    pub f_n_bruteforce: u64,
    /// Closed form for `f_n` matches the brute-force order.
    pub order_ok: bool,
    pub val_one_minus: Valuation,
    /// `ord_p(1 - q^f_n) = n + 1`.
    pub one_minus_ok: bool,
    /// `(ord_p(1 + q^(f_n/2)), ord_p(1 - q^(f_n/2)))` when `e` is even.
    pub half_valuations: Option<(Valuation, Valuation)>,
    /// `ord_p(1 + q^(f_n/2)) = n + 1` and `ord_p(1 - q^(f_n/2)) = 0`; `None` when `e` is odd.
    pub half_ok: Option<bool>,
    /// `f_n` has the parity of `e`.
    pub parity_ok: bool,
}

impl Lemma31Report {
    pub fn passed(&self) -> bool {
        self.order_ok && self.one_minus_ok && self.parity_ok && self.half_ok.unwrap_or(true)
    }
}

/// Checks every clause of the order-lifting lemma at `n` by direct big-integer
/// evaluation. Requires `n > m`.
pub fn verify_lemma31(profile: &OrderProfile, n: u32) -> Result<Lemma31Report> {
    if n <= profile.m {
        return Err(Error::HypothesisViolated { n, m: profile.m });
    }
    let p = profile.p as i64;
    let target = Valuation::Finite(n as i64 + 1);
    let f_n = profile.f_n(n)?;
    let f_n_bruteforce = mult_order(profile.q as i64, profile.p, n + 1)?;

    let q = BigInt::from(profile.q);
    let one = BigInt::one();
    let val_one_minus = padic_valuation_int(&(&one - q.clone().pow(f_n)), p)?;

    let (half_valuations, half_ok) = if profile.e_is_even() {
        let half = q.pow(f_n / 2);
        let plus = padic_valuation_int(&(&one + &half), p)?;
        let minus = padic_valuation_int(&(&one - &half), p)?;
        (
            Some((plus, minus)),
            Some(plus == target && minus == Valuation::Finite(0)),
        )
    } else {
        (None, None)
    };

    Ok(Lemma31Report {
        profile: *profile,
        n,
        f_n,
        f_n_bruteforce,
        order_ok: f_n == f_n_bruteforce,
        val_one_minus,
        one_minus_ok: val_one_minus == target,
        half_valuations,
        half_ok,
        parity_ok: f_n % 2 == profile.e % 2,
    })
}

/// For `k >= m`, `(q^(e p^(k-m)) - 1) / p^k` is an integer not divisible by `p`.
pub fn beta_expansion_holds(profile: &OrderProfile, k: u32) -> Result<bool> {
    if k < profile.m {
        return Err(Error::OutsideClosedForm { n: k.saturating_sub(1), m: profile.m });
    }
    let exp = profile
        .e
        .checked_mul(checked_pow(profile.p, k - profile.m)?)
        .ok_or(Error::Overflow("lifted exponent"))?;
    let pk = BigInt::from(profile.p).pow(k);
    let numer = BigInt::from(profile.q).pow(exp) - 1u32;
    let (quot, rem) = num_integer::Integer::div_rem(&numer, &pk);
    let p = BigInt::from(profile.p);
    Ok(num_traits::Zero::is_zero(&rem)
        && !num_traits::Zero::is_zero(&num_integer::Integer::mod_floor(&quot, &p)))
}
