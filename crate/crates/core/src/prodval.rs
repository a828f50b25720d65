//! The product `prod_{chi odd} (1 - q chi(q))` for a prime `q != p`.
//!
//! Brute force multiplies the cyclotomic factors. For `n + 1 >= m` the product
//! has the closed form `(1 + q^(f_n/2))^d_q` when `e` is even and
//! `(1 - q^f_n)^d_q` when `e` is odd, with the n-independent exponent
//! `d_q = (p-1) p^(m-1) / e` (even `e`) or `(p-1) p^(m-1) / (2e)` (odd `e`),
//! so `ord_p` of the product is `(n + 1) d_q`.

use num_bigint::BigInt;
use num_traits::{One, Pow};

use crate::chars::{char_product_identity_check, CharGroup, CharSubset};
use crate::cyclo::balanced_product;
use crate::error::{Error, Result};
use crate::exactnum::{
    checked_pow, is_prime, padic_valuation_int, phi_prime_power, to_integer, ExactRational,
    Valuation,
};
use crate::multorder::{order_profile, OrderProfile};
use crate::par::try_map;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    /// `n + 1 >= m`: the closed form applies.
    ClosedFormValid,
    /// `n + 1 < m`: only the brute-force product is available.
    BruteForceOnly,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProductResult {
    pub p: u64,
    pub n: u32,
    pub q: u64,
    /// Brute-force value.
    pub value: BigInt,
    /// Closed-form value, present in the closed-form regime.
    pub closed: Option<BigInt>,
    pub valuation: Valuation,
    pub d_q: u64,
    pub regime: Regime,
}

impl ProductResult {
    /// Brute force equals the closed form, and the valuation is `(n+1) d_q`.
    pub fn consistent(&self) -> bool {
        match (&self.regime, &self.closed) {
            (Regime::ClosedFormValid, Some(c)) => {
                *c == self.value
                    && self.valuation == Valuation::Finite((self.n as i64 + 1) * self.d_q as i64)
            }
            (Regime::BruteForceOnly, None) => true,
            _ => false,
        }
    }
}

fn check_q(group: &CharGroup, q: u64) -> Result<()> {
    if !is_prime(q) {
        return Err(Error::NotPrime(q as i64));
    }
    if q == group.p() {
        return Err(Error::SamePrime { p: group.p(), q });
    }
    Ok(())
}

/// Exact product over the odd characters of `(1 - q chi(q))`.
pub fn char_product_bruteforce_in(group: &CharGroup, q: u64) -> Result<BigInt> {
    check_q(group, q)?;
    let ctx = group.context();
    let q_rat = ExactRational::from_integer(BigInt::from(q));
    let odd: Vec<u64> = group.odd_characters().map(|chi| chi.index()).collect();
    let factors = try_map(odd, |j| {
        let value = group.character(j).evaluate(q as i64).into_element(ctx);
        ctx.one().checked_sub(&value.scale(&q_rat))
    })?;
    to_integer(&balanced_product(ctx, factors)?.as_rational()?)
}

pub fn char_product_bruteforce(p: u64, n: u32, q: u64, cap: u64) -> Result<BigInt> {
    char_product_bruteforce_in(&CharGroup::new(p, n, cap)?, q)
}

/// The n-independent exponent `d_q`.
pub fn d_q(profile: &OrderProfile) -> Result<u64> {
    let base = (profile.p - 1) * checked_pow(profile.p, profile.m - 1)?;
    let div = if profile.e_is_even() { profile.e } else { 2 * profile.e };
    if !base.is_multiple_of(div) {
        return Err(Error::Inconsistent(format!(
            "d_q: {div} does not divide (p-1)p^(m-1) = {base}"
        )));
    }
    Ok(base / div)
}

/// `phi(p^(n+1)) / f_n` (even `e`) or `phi(p^(n+1)) / (2 f_n)` (odd `e`) at a given `n`.
pub fn d_q_at(profile: &OrderProfile, n: u32) -> Result<u64> {
    let phi = phi_prime_power(profile.p, n + 1)?;
    let f = profile.f_n(n)?;
    let div = if profile.e_is_even() { f } else { 2 * f };
    if phi % div != 0 {
        return Err(Error::Inconsistent(format!("{div} does not divide phi = {phi}")));
    }
    Ok(phi / div)
}

fn closed_from_profile(profile: &OrderProfile, n: u32) -> Result<BigInt> {
    let f = profile.f_n(n)?;
    let d = d_q(profile)? as u32;
    let q = BigInt::from(profile.q);
    let base = if profile.e_is_even() {
        BigInt::one() + Pow::pow(q, f / 2)
    } else {
        BigInt::one() - Pow::pow(q, f)
    };
    Ok(Pow::pow(base, d))
}

/// Closed form of the product; rejects `n + 1 < m`.
pub fn char_product_closed(p: u64, n: u32, q: u64) -> Result<BigInt> {
    closed_from_profile(&order_profile(q, p)?, n)
}

/// `ord_p` of the product: `(n+1) d_q` in the closed-form regime, otherwise
/// read off the brute-force value.
pub fn product_valuation(p: u64, n: u32, q: u64, cap: u64) -> Result<Valuation> {
    let profile = order_profile(q, p)?;
    if n + 1 >= profile.m {
        Ok(Valuation::Finite((n as i64 + 1) * d_q(&profile)? as i64))
    } else {
        padic_valuation_int(&char_product_bruteforce(p, n, q, cap)?, p as i64)
    }
}

pub fn product_result_in(group: &CharGroup, q: u64) -> Result<ProductResult> {
    let (p, n) = (group.p(), group.n());
    let profile = order_profile(q, p)?;
    let value = char_product_bruteforce_in(group, q)?;
    let regime = if n + 1 >= profile.m { Regime::ClosedFormValid } else { Regime::BruteForceOnly };
    let closed = match regime {
        Regime::ClosedFormValid => Some(closed_from_profile(&profile, n)?),
        Regime::BruteForceOnly => None,
    };
    Ok(ProductResult {
        p,
        n,
        q,
        valuation: padic_valuation_int(&value, p as i64)?,
        value,
        closed,
        d_q: d_q(&profile)?,
        regime,
    })
}

pub fn product_result(p: u64, n: u32, q: u64, cap: u64) -> Result<ProductResult> {
    product_result_in(&CharGroup::new(p, n, cap)?, q)
}

/// The odd-character product as the full-group product divided by the
/// even-character product, all at `T = q`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuotientReport {
    pub full: ExactRational,
    pub even: ExactRational,
    pub odd: BigInt,
    /// Both character-product identities hold at `T = q`.
    pub identities_hold: bool,
}

impl QuotientReport {
    pub fn holds(&self) -> bool {
        self.identities_hold
            && &self.full / &self.even == ExactRational::from_integer(self.odd.clone())
    }
}

pub fn quotient_check_in(group: &CharGroup, q: u64) -> Result<QuotientReport> {
    check_q(group, q)?;
    let t = ExactRational::from_integer(BigInt::from(q));
    let full = char_product_identity_check(group, q as i64, &t, CharSubset::All)?;
    let even = char_product_identity_check(group, q as i64, &t, CharSubset::Even)?;
    Ok(QuotientReport {
        identities_hold: full.holds() && even.holds(),
        full: full.lhs,
        even: even.lhs,
        odd: char_product_bruteforce_in(group, q)?,
    })
}
