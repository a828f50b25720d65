//! Exact arithmetic in the cyclotomic field Q(zeta_M).
//!
//! Elements are stored in the power basis `1, zeta, ..., zeta^(d-1)` with
//! `d = phi(M)`, reduced modulo the cyclotomic polynomial `Phi_M`. The
//! coefficient vector is kept as integer numerators over a single positive
//! common denominator with no common factor, so two elements are equal iff
//! their stored data are equal.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exactnum::{divisors, totient, ExactRational};

pub const DEFAULT_LEVEL_CAP: u64 = 3000;

/// Dense integer polynomial, lowest degree first.
pub type IntPoly = Vec<BigInt>;

/// Exact quotient of `num` by a monic `den`.
fn div_monic(num: &[BigInt], den: &[BigInt]) -> IntPoly {
    let dd = den.len() - 1;
    debug_assert!(den[dd].is_one());
    let mut rem = num.to_vec();
    let qlen = num.len() - dd;
    let mut quot = vec![BigInt::zero(); qlen];
    for i in (0..qlen).rev() {
        let c = rem[i + dd].clone();
        if c.is_zero() {
            continue;
        }
        for (j, dj) in den.iter().enumerate() {
            if !dj.is_zero() {
                rem[i + j] -= &c * dj;
            }
        }
        quot[i] = c;
    }
    debug_assert!(rem.iter().all(Zero::is_zero), "inexact cyclotomic division");
    quot
}

/// `Phi_M(x)` via `(x^M - 1) / prod_{d | M, d < M} Phi_d(x)`.
pub fn cyclotomic_polynomial(m: u64) -> IntPoly {
    assert!(m >= 1, "cyclotomic level must be positive");
    let mut memo: HashMap<u64, IntPoly> = HashMap::new();
    for d in divisors(m) {
        let mut poly = vec![BigInt::zero(); d as usize + 1];
        poly[0] = BigInt::from(-1);
        poly[d as usize] = BigInt::one();
        for e in divisors(d) {
            if e < d {
                poly = div_monic(&poly, &memo[&e]);
            }
        }
        memo.insert(d, poly);
    }
    memo.remove(&m).expect("m divides itself")
}

/// Per-level data shared by all elements of Q(zeta_M).
#[derive(Debug)]
pub struct CycloContext {
    level: u64,
    degree: usize,
    phi: IntPoly,
    /// Nonzero non-leading terms of `Phi_M`.
    tail: Vec<(usize, BigInt)>,
}

impl CycloContext {
    pub fn new(level: u64, cap: u64) -> Result<Arc<CycloContext>> {
        if level == 0 || level > cap {
            return Err(Error::LevelCap { level, cap });
        }
        let phi = cyclotomic_polynomial(level);
        let degree = phi.len() - 1;
        debug_assert_eq!(degree as u64, totient(level));
        let tail = phi[..degree]
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (i, c.clone()))
            .collect();
        Ok(Arc::new(CycloContext { level, degree, phi, tail }))
    }

    pub fn level(&self) -> u64 {
        self.level
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn polynomial(&self) -> &IntPoly {
        &self.phi
    }

    /// Reduces an integer polynomial of any length modulo `Phi_M`.
    fn reduce(&self, mut v: Vec<BigInt>) -> Vec<BigInt> {
        let d = self.degree;
        for i in (d..v.len()).rev() {
            if v[i].is_zero() {
                continue;
            }
            let c = std::mem::take(&mut v[i]);
            for (j, a) in &self.tail {
                v[i - d + j] -= &c * a;
            }
        }
        v.resize(d, BigInt::zero());
        v
    }

    fn element(self: &Arc<Self>, num: Vec<BigInt>, den: BigInt) -> CycloElement {
        let mut el = CycloElement { ctx: Arc::clone(self), num, den };
        el.normalize();
        el
    }

    pub fn zero(self: &Arc<Self>) -> CycloElement {
        self.from_rational(&ExactRational::zero())
    }

    pub fn one(self: &Arc<Self>) -> CycloElement {
        self.from_rational(&ExactRational::one())
    }

    pub fn from_rational(self: &Arc<Self>, r: &ExactRational) -> CycloElement {
        let mut num = vec![BigInt::zero(); self.degree];
        num[0] = r.numer().clone();
        self.element(num, r.denom().clone())
    }

    pub fn from_integer(self: &Arc<Self>, k: i64) -> CycloElement {
        self.from_rational(&ExactRational::from_integer(BigInt::from(k)))
    }

    /// `zeta_M^k`, with `k` taken modulo `M`.
    pub fn root_of_unity(self: &Arc<Self>, k: i64) -> CycloElement {
        let e = k.rem_euclid(self.level as i64) as usize;
        let mut v = vec![BigInt::zero(); e.max(self.degree - 1) + 1];
        v[e] = BigInt::one();
        self.element(self.reduce(v), BigInt::one())
    }

    /// `(1/den) * sum_k sums[k] zeta^k` for a vector indexed by exponents mod `M`.
    pub fn from_exponent_sums(self: &Arc<Self>, sums: Vec<BigInt>, den: BigInt) -> CycloElement {
        assert_eq!(sums.len() as u64, self.level, "exponent vector must have length M");
        let mut v = sums;
        if v.len() < self.degree {
            v.resize(self.degree, BigInt::zero());
        }
        self.element(self.reduce(v), den)
    }
}

/// An element of Q(zeta_M).
#[derive(Clone)]
pub struct CycloElement {
    ctx: Arc<CycloContext>,
    num: Vec<BigInt>,
    den: BigInt,
}

impl PartialEq for CycloElement {
    fn eq(&self, other: &Self) -> bool {
        self.ctx.level == other.ctx.level && self.den == other.den && self.num == other.num
    }
}

impl Eq for CycloElement {}

impl fmt::Debug for CycloElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CycloElement[{}]({})", self.ctx.level, self)
    }
}

impl fmt::Display for CycloElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        for (i, c) in self.coeffs().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            terms.push(match i {
                0 => format!("{c}"),
                1 => format!("({c})*z"),
                _ => format!("({c})*z^{i}"),
            });
        }
        if terms.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&terms.join(" + "))
        }
    }
}

impl CycloElement {
    fn normalize(&mut self) {
        if self.num.iter().all(Zero::is_zero) {
            self.den = BigInt::one();
            return;
        }
        if self.den.is_negative() {
            self.den = -std::mem::take(&mut self.den);
            for c in &mut self.num {
                *c = -std::mem::take(c);
            }
        }
        let mut g = self.den.clone();
        for c in &self.num {
            if g.is_one() {
                break;
            }
            if !c.is_zero() {
                g = g.gcd(c);
            }
        }
        if !g.is_one() {
            self.den /= &g;
            for c in &mut self.num {
                *c /= &g;
            }
        }
    }

    pub fn context(&self) -> &Arc<CycloContext> {
        &self.ctx
    }

    pub fn level(&self) -> u64 {
        self.ctx.level
    }

    /// Rational coefficients in the power basis; length `phi(M)`.
    pub fn coeffs(&self) -> Vec<ExactRational> {
        self.num
            .iter()
            .map(|c| ExactRational::new(c.clone(), self.den.clone()))
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.num.iter().all(Zero::is_zero)
    }

    fn same_level(&self, other: &CycloElement) -> Result<()> {
        if self.ctx.level == other.ctx.level {
            Ok(())
        } else {
            Err(Error::LevelMismatch(self.ctx.level, other.ctx.level))
        }
    }

    pub fn checked_add(&self, other: &CycloElement) -> Result<CycloElement> {
        self.same_level(other)?;
        let num = self
            .num
            .iter()
            .zip(&other.num)
            .map(|(a, b)| a * &other.den + b * &self.den)
            .collect();
        Ok(self.ctx.element(num, &self.den * &other.den))
    }

    pub fn checked_sub(&self, other: &CycloElement) -> Result<CycloElement> {
        self.checked_add(&other.neg())
    }

    pub fn neg(&self) -> CycloElement {
        CycloElement {
            ctx: Arc::clone(&self.ctx),
            num: self.num.iter().map(|c| -c).collect(),
            den: self.den.clone(),
        }
    }

    pub fn checked_mul(&self, other: &CycloElement) -> Result<CycloElement> {
        self.same_level(other)?;
        let d = self.ctx.degree;
        let mut prod = vec![BigInt::zero(); 2 * d - 1];
        let rhs: Vec<(usize, &BigInt)> =
            other.num.iter().enumerate().filter(|(_, c)| !c.is_zero()).collect();
        for (i, a) in self.num.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in &rhs {
                prod[i + j] += a * *b;
            }
        }
        Ok(self.ctx.element(self.ctx.reduce(prod), &self.den * &other.den))
    }

    pub fn scale(&self, r: &ExactRational) -> CycloElement {
        let num = self.num.iter().map(|c| c * r.numer()).collect();
        self.ctx.element(num, &self.den * r.denom())
    }

    /// Image under `zeta -> zeta^k`; `k` must be a unit modulo `M`.
    pub fn galois(&self, k: i64) -> Result<CycloElement> {
        let m = self.ctx.level as i64;
        if k.gcd(&m) != 1 {
            return Err(Error::NotUnit { a: k, modulus: m as u64 });
        }
        let k = k.rem_euclid(m) as u64;
        let mut sums = vec![BigInt::zero(); m as usize];
        for (i, c) in self.num.iter().enumerate() {
            if !c.is_zero() {
                sums[((i as u64 * k) % m as u64) as usize] += c;
            }
        }
        Ok(self.ctx.from_exponent_sums(sums, self.den.clone()))
    }

    /// Complex conjugation, `zeta -> zeta^(-1)`.
    pub fn conjugate(&self) -> CycloElement {
        self.galois(-1).expect("-1 is a unit")
    }

    /// Embeds into Q(zeta_T) via `zeta_M -> zeta_T^(T/M)`.
    pub fn lift_level(&self, target: &Arc<CycloContext>) -> Result<CycloElement> {
        let (m, t) = (self.ctx.level, target.level);
        if t % m != 0 {
            return Err(Error::NotMultiple { level: m, target: t });
        }
        let step = (t / m) as usize;
        let mut sums = vec![BigInt::zero(); t as usize];
        for (i, c) in self.num.iter().enumerate() {
            sums[i * step] = c.clone();
        }
        Ok(target.from_exponent_sums(sums, self.den.clone()))
    }

    /// The element as a rational; fails if any non-constant coefficient is nonzero.
    pub fn as_rational(&self) -> Result<ExactRational> {
        if let Some(i) = self.num.iter().skip(1).position(|c| !c.is_zero()) {
            return Err(Error::NotRational(i + 1));
        }
        Ok(ExactRational::new(self.num[0].clone(), self.den.clone()))
    }
}

/// Product of all factors by a balanced reduction tree. Empty input gives one.
pub fn balanced_product(
    ctx: &Arc<CycloContext>,
    mut items: Vec<CycloElement>,
) -> Result<CycloElement> {
    if items.is_empty() {
        return Ok(ctx.one());
    }
    while items.len() > 1 {
        items = pairwise(items)?;
    }
    Ok(items.pop().expect("non-empty"))
}

#[cfg(feature = "parallel")]
fn pairwise(items: Vec<CycloElement>) -> Result<Vec<CycloElement>> {
    use rayon::prelude::*;
    items
        .par_chunks(2)
        .map(|pair| match pair {
            [a, b] => a.checked_mul(b),
            [a] => Ok(a.clone()),
            _ => unreachable!(),
        })
        .collect()
}

#[cfg(not(feature = "parallel"))]
fn pairwise(items: Vec<CycloElement>) -> Result<Vec<CycloElement>> {
    items
        .chunks(2)
        .map(|pair| match pair {
            [a, b] => a.checked_mul(b),
            [a] => Ok(a.clone()),
            _ => unreachable!(),
        })
        .collect()
}
