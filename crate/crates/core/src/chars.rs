//! Dirichlet characters modulo `p^(n+1)`.
//!
//! The unit group is cyclic with a fixed generator `g` (the smallest positive
//! primitive root modulo `p^2`). Character `chi_j` sends `g^a` to
//! `zeta^(j*a)` with `zeta` a primitive root of unity of order
//! `phi(p^(n+1))`; all values live at that single cyclotomic level.

use std::sync::Arc;

use num_integer::Integer;
use num_traits::{One, Pow};

use crate::cyclo::{balanced_product, CycloContext, CycloElement};
use crate::error::{Error, Result};
use crate::exactnum::{check_odd_prime, checked_pow, pow_mod, prime_factors, ExactRational};

const NOT_A_UNIT: u32 = u32::MAX;

/// The group `(Z/p^(n+1))^x` with a discrete-log table against a fixed generator.
#[derive(Debug)]
pub struct CharGroup {
    p: u64,
    n: u32,
    modulus: u64,
    order: u64,
    generator: u64,
    dlog: Vec<u32>,
    ctx: Arc<CycloContext>,
}

/// Smallest positive primitive root modulo `p^2`, which generates every `(Z/p^k)^x`.
pub fn smallest_primitive_root(p: u64) -> u64 {
    let factors = prime_factors(p - 1);
    let p2 = p * p;
    (2..p)
        .find(|&g| {
            factors.iter().all(|r| pow_mod(g as i64, (p - 1) / r, p) != 1)
                && pow_mod(g as i64, p - 1, p2) != 1
        })
        .unwrap_or(2)
}

impl CharGroup {
    pub fn new(p: u64, n: u32, cap: u64) -> Result<CharGroup> {
        let p = check_odd_prime(p as i64)?;
        let pn = checked_pow(p, n)?;
        let order = (p - 1).checked_mul(pn).ok_or(Error::Overflow("group order"))?;
        if order > cap {
            return Err(Error::LevelCap { level: order, cap });
        }
        let modulus = pn * p;
        let ctx = CycloContext::new(order, cap)?;
        let generator = smallest_primitive_root(p);

        let mut dlog = vec![NOT_A_UNIT; modulus as usize];
        let mut x = 1u64;
        for a in 0..order {
            debug_assert_eq!(dlog[x as usize], NOT_A_UNIT, "generator is not primitive");
            dlog[x as usize] = a as u32;
            x = x * generator % modulus;
        }
        debug_assert_eq!(x, 1);
        Ok(CharGroup { p, n, modulus, order, generator, dlog, ctx })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// `phi(p^(n+1))`, also the cyclotomic level of character values.
    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn generator(&self) -> u64 {
        self.generator
    }

    pub fn context(&self) -> &Arc<CycloContext> {
        &self.ctx
    }

    fn residue(&self, x: i64) -> usize {
        x.rem_euclid(self.modulus as i64) as usize
    }

    /// `log_g(x)` for a unit `x`.
    pub fn dlog(&self, x: i64) -> Option<u64> {
        match self.dlog[self.residue(x)] {
            NOT_A_UNIT => None,
            a => Some(a as u64),
        }
    }

    pub fn is_unit(&self, x: i64) -> bool {
        self.dlog(x).is_some()
    }

    pub fn units(&self) -> impl Iterator<Item = i64> + '_ {
        (1..self.modulus as i64).filter(move |&x| self.is_unit(x))
    }

    pub fn character(&self, index: u64) -> DirichletCharacter<'_> {
        DirichletCharacter { group: self, index: index % self.order }
    }

    pub fn characters(&self) -> impl Iterator<Item = DirichletCharacter<'_>> + '_ {
        (0..self.order).map(move |j| self.character(j))
    }

    /// The odd characters, selected by [`DirichletCharacter::is_odd`].
    pub fn odd_characters(&self) -> impl Iterator<Item = DirichletCharacter<'_>> + '_ {
        self.characters().filter(|chi| chi.is_odd())
    }

    /// Characters of the quotient by `{1, -1}`: indices in steps of two.
    pub fn even_characters(&self) -> impl Iterator<Item = DirichletCharacter<'_>> + '_ {
        (0..self.order).step_by(2).map(move |j| self.character(j))
    }
}

/// A character value: a root of unity at the group's level, or zero off the units.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CharValue {
    Zero,
    Value(CycloElement),
}

impl CharValue {
    pub fn into_element(self, ctx: &Arc<CycloContext>) -> CycloElement {
        match self {
            CharValue::Zero => ctx.zero(),
            CharValue::Value(v) => v,
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct DirichletCharacter<'a> {
    group: &'a CharGroup,
    index: u64,
}

impl<'a> DirichletCharacter<'a> {
    pub fn group(&self) -> &'a CharGroup {
        self.group
    }

    pub fn index(&self) -> u64 {
        self.index
    }

    pub fn is_trivial(&self) -> bool {
        self.index == 0
    }

    /// Exponent `k` with `chi(x) = zeta^k`, or `None` off the units.
    pub fn exponent(&self, x: i64) -> Option<u64> {
        let order = self.group.order as u128;
        self.group
            .dlog(x)
            .map(|a| ((self.index as u128 * a as u128) % order) as u64)
    }

    pub fn evaluate(&self, x: i64) -> CharValue {
        match self.exponent(x) {
            None => CharValue::Zero,
            Some(k) => CharValue::Value(self.group.ctx.root_of_unity(k as i64)),
        }
    }

    /// `chi(-1) = -1`. Index parity and direct evaluation must agree.
    pub fn is_odd(&self) -> bool {
        let by_index = self.index % 2 == 1;
        let minus_one = self.group.ctx.from_integer(-1);
        let by_value = self.evaluate(-1) == CharValue::Value(minus_one);
        assert_eq!(by_index, by_value, "parity mismatch for chi_{}", self.index);
        by_index
    }

    /// Order of the character: `phi / gcd(j, phi)`.
    pub fn order(&self) -> u64 {
        self.group.order / self.index.gcd(&self.group.order)
    }

    /// `p^(s+1)` where `p^s` is the p-part of the character's order; 1 if trivial.
    pub fn conductor(&self) -> u64 {
        if self.is_trivial() {
            return 1;
        }
        let mut ord = self.order();
        let mut f = self.group.p;
        while ord.is_multiple_of(self.group.p) {
            ord /= self.group.p;
            f *= self.group.p;
        }
        f
    }

    /// Conductor by brute force: the smallest `p^t` such that `chi` is trivial
    /// on every unit congruent to 1 modulo `p^t`.
    pub fn conductor_by_constancy(&self) -> u64 {
        let p = self.group.p;
        let mut pt = 1u64;
        for _ in 0..=self.group.n + 1 {
            let trivial_on_kernel = (1..self.group.modulus as i64)
                .step_by(pt as usize)
                .filter(|&x| self.group.is_unit(x))
                .all(|x| self.exponent(x) == Some(0));
            if trivial_on_kernel {
                return pt;
            }
            pt *= p;
        }
        unreachable!("chi is trivial modulo p^(n+1)")
    }

    /// Exponent of the primitive character inducing `chi`, or `None` when `x`
    /// shares a factor with the conductor.
    pub fn primitive_exponent(&self, x: i64) -> Option<u64> {
        if self.is_trivial() {
            return Some(0);
        }
        // every nontrivial conductor is a positive power of p
        if x.rem_euclid(self.group.p as i64) == 0 {
            None
        } else {
            self.exponent(x)
        }
    }

    pub fn evaluate_primitive(&self, x: i64) -> CharValue {
        match self.primitive_exponent(x) {
            None => CharValue::Zero,
            Some(k) => CharValue::Value(self.group.ctx.root_of_unity(k as i64)),
        }
    }

    /// The conjugate character `chi_(phi - j)`.
    pub fn conjugate(&self) -> DirichletCharacter<'a> {
        self.group.character(self.group.order - self.index)
    }
}

/// Which characters a product ranges over.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CharSubset {
    /// Every character of `(Z/p^(n+1))^x`.
    All,
    /// Characters of the quotient `(Z/p^(n+1))^x / {1, -1}`.
    Even,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdentityReport {
    pub a: i64,
    pub t: ExactRational,
    pub subset: CharSubset,
    /// Order of the group the characters live on.
    pub group_order: u64,
    /// Order of `a` in that group.
    pub h: u64,
    pub lhs: ExactRational,
    pub rhs: ExactRational,
}

impl IdentityReport {
    pub fn holds(&self) -> bool {
        self.lhs == self.rhs
    }
}

/// Order of the class of `a` in the chosen group (all units, or units modulo `{1, -1}`).
pub fn order_in(group: &CharGroup, a: i64, subset: CharSubset) -> Result<u64> {
    let log = group
        .dlog(a)
        .ok_or(Error::NotUnit { a, modulus: group.modulus })?;
    let n = match subset {
        CharSubset::All => group.order,
        CharSubset::Even => group.order / 2,
    };
    Ok(n / (log % n).gcd(&n))
}

/// Evaluates `prod_chi (1 - chi(a) T)` by exact cyclotomic products and the
/// closed form `(1 - T^h)^(N/h)`, for all characters or the even ones.
pub fn char_product_identity_check(
    group: &CharGroup,
    a: i64,
    t: &ExactRational,
    subset: CharSubset,
) -> Result<IdentityReport> {
    let h = order_in(group, a, subset)?;
    let group_order = match subset {
        CharSubset::All => group.order,
        CharSubset::Even => group.order / 2,
    };
    let ctx = group.context();
    let chars: Vec<DirichletCharacter<'_>> = match subset {
        CharSubset::All => group.characters().collect(),
        CharSubset::Even => group.even_characters().collect(),
    };
    let one = ctx.one();
    let factors = chars
        .iter()
        .map(|chi| {
            let value = chi.evaluate(a).into_element(ctx);
            one.checked_sub(&value.scale(t))
        })
        .collect::<Result<Vec<_>>>()?;
    let lhs = balanced_product(ctx, factors)?.as_rational()?;

    let base = ExactRational::one() - Pow::pow(t, h as u32);
    let rhs = Pow::pow(&base, (group_order / h) as u32);
    Ok(IdentityReport { a, t: t.clone(), subset, group_order, h, lhs, rhs })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclo::DEFAULT_LEVEL_CAP;
    use crate::exactnum::ratio;

    fn group(p: u64, n: u32) -> CharGroup {
        CharGroup::new(p, n, DEFAULT_LEVEL_CAP).unwrap()
    }

    #[test]
    fn group_examples() {
        let g = group(3, 0);
        assert_eq!((g.modulus(), g.order(), g.generator()), (3, 2, 2));
        let g = group(5, 1);
        assert_eq!((g.modulus(), g.order(), g.generator()), (25, 20, 2));
        let g = group(7, 0);
        assert_eq!((g.order(), g.generator()), (6, 3));
        assert_eq!(g.dlog(-1), Some(3));
        assert_eq!(g.dlog(1), Some(0));
        assert_eq!(g.dlog(7), None);
        assert_eq!(
            CharGroup::new(3, 7, 3000).unwrap_err(),
            Error::LevelCap { level: 4374, cap: 3000 }
        );
    }

    #[test]
    fn dlog_table_inverts_powers() {
        for (p, n) in [(3, 3), (5, 2), (7, 1), (11, 1), (13, 0)] {
            let g = group(p, n);
            assert_eq!(g.dlog(-1), Some(g.order() / 2));
            for x in g.units() {
                let a = g.dlog(x).unwrap();
                assert_eq!(pow_mod(g.generator() as i64, a, g.modulus()), x as u64);
            }
        }
    }

    #[test]
    fn evaluation_examples() {
        let g = group(3, 0);
        let ctx = g.context().clone();
        assert_eq!(g.character(0).evaluate(2), CharValue::Value(ctx.one()));
        assert_eq!(g.character(1).evaluate(2), CharValue::Value(ctx.from_integer(-1)));
        assert_eq!(g.character(1).evaluate(3), CharValue::Zero);
        assert_eq!(g.character(1).evaluate(-6), CharValue::Zero);
    }

    #[test]
    fn parity() {
        assert!(!group(3, 0).character(0).is_odd());
        assert!(group(3, 0).character(1).is_odd());
        let g5 = group(5, 0);
        assert!(!g5.character(2).is_odd());
        assert_eq!(g5.character(2).evaluate(4), CharValue::Value(g5.context().one()));
        for (p, n) in [(3, 2), (5, 1), (7, 1), (13, 0)] {
            let g = group(p, n);
            assert_eq!(g.odd_characters().count() as u64, g.order() / 2);
        }
    }

    #[test]
    fn conductors() {
        for (p, n) in [(3, 0), (3, 1), (3, 2), (5, 0), (5, 1), (5, 2), (7, 0), (7, 1), (7, 2)] {
            let g = group(p, n);
            for chi in g.characters() {
                assert_eq!(chi.conductor(), chi.conductor_by_constancy(), "p={p} n={n} j={}", chi.index());
                if !chi.is_trivial() && (p - 1) % chi.order() == 0 {
                    assert_eq!(chi.conductor(), p);
                }
            }
        }
        let g = group(3, 1);
        assert_eq!(g.character(0).conductor(), 1);
        // order-6 characters mod 9 are j = 1, 5
        assert_eq!(g.character(1).order(), 6);
        assert_eq!(g.character(1).conductor(), 9);
        assert_eq!(g.character(3).conductor(), 3);
    }

    #[test]
    fn primitive_evaluation() {
        let g = group(3, 1);
        let chi = g.character(3);
        assert_eq!(chi.conductor(), 3);
        assert_eq!(chi.evaluate_primitive(4), CharValue::Value(g.context().one()));
        assert_eq!(chi.evaluate_primitive(3), CharValue::Zero);
        assert_eq!(g.character(0).evaluate_primitive(9), CharValue::Value(g.context().one()));
        let prim = g.character(1);
        for x in g.units() {
            assert_eq!(prim.evaluate_primitive(x), prim.evaluate(x));
        }
    }

    #[test]
    fn multiplicativity_orthogonality_conjugation() {
        for (p, n) in [(3, 1), (5, 1), (7, 0)] {
            let g = group(p, n);
            let ctx = g.context().clone();
            let units: Vec<i64> = g.units().collect();
            for chi in g.characters() {
                for &x in units.iter().take(6) {
                    for &y in units.iter().rev().take(6) {
                        let lhs = chi.evaluate(x * y).into_element(&ctx);
                        let rhs = chi
                            .evaluate(x)
                            .into_element(&ctx)
                            .checked_mul(&chi.evaluate(y).into_element(&ctx))
                            .unwrap();
                        assert_eq!(lhs, rhs);
                    }
                    assert_eq!(
                        chi.conjugate().evaluate(x).into_element(&ctx),
                        chi.evaluate(x).into_element(&ctx).conjugate()
                    );
                }
                let sum = units.iter().fold(ctx.zero(), |acc, &x| {
                    acc.checked_add(&chi.evaluate(x).into_element(&ctx)).unwrap()
                });
                if chi.is_trivial() {
                    assert_eq!(sum, ctx.from_integer(g.order() as i64));
                } else {
                    assert!(sum.is_zero());
                }
            }
        }
    }

    #[test]
    fn identity_examples() {
        let g5 = group(5, 0);
        let r = char_product_identity_check(&g5, 2, &ratio(1, 3), CharSubset::All).unwrap();
        assert_eq!(r.h, 4);
        assert_eq!(r.lhs, ratio(80, 81));
        assert!(r.holds());

        let t = ratio(2, 5);
        let r = char_product_identity_check(&g5, 1, &t, CharSubset::All).unwrap();
        assert_eq!(r.h, 1);
        assert_eq!(r.lhs, Pow::pow(&(ExactRational::one() - &t), 4u32));

        let g7 = group(7, 0);
        let r = char_product_identity_check(&g7, 2, &ratio(2, 1), CharSubset::Even).unwrap();
        assert_eq!((r.h, r.group_order), (3, 3));
        assert_eq!(r.lhs, ratio(-7, 1));
        assert!(r.holds());

        assert_eq!(
            char_product_identity_check(&g7, 14, &t, CharSubset::All).unwrap_err(),
            Error::NotUnit { a: 14, modulus: 7 }
        );
    }
}
