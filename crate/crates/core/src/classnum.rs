//! Generalized Bernoulli numbers, Eulerian L-values at zero and the two
//! minus class numbers.
//!
//! With `k = phi(p^(n+1)) / 2` odd characters:
//!
//! ```text
//! h_n^-     = 2 p^(n+1) prod_chi (-B_{1,chi} / 2)
//! h_{n,2}^- = (-1)^k 2^(1 - 2k) prod_chi L_E(0, chi),   L_E(0, chi) = 2 (1 - 2 chi(2)) B_{1,chi}
//! ```
//!
//! `h_{n,2}^-` is also reachable as `h_n^- / p^(n+1) * prod_chi (1 - 2 chi(2))`;
//! [`verify_prop_2_2`] evaluates both sides without sharing any product.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Pow, Signed, Zero};

use crate::chars::{CharGroup, DirichletCharacter};
use crate::cyclo::{balanced_product, CycloElement, DEFAULT_LEVEL_CAP};
use crate::error::{Error, Result};
use crate::exactnum::{padic_valuation, to_integer, ExactRational, Valuation};
use crate::par::try_map;
use crate::prodval;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ClassNumberOptions {
    pub cap: u64,
    /// Evaluate the Bernoulli product one Galois orbit at a time (orbit norms).
    pub orbit_norms: bool,
}

impl Default for ClassNumberOptions {
    fn default() -> Self {
        ClassNumberOptions { cap: DEFAULT_LEVEL_CAP, orbit_norms: false }
    }
}

/// `B_{1,chi} = (1/f) sum_{a=1}^{f} chi*(a) a` with `chi*` primitive of conductor `f`.
pub fn bernoulli1(chi: &DirichletCharacter<'_>) -> CycloElement {
    let group = chi.group();
    let f = chi.conductor();
    let mut sums = vec![BigInt::zero(); group.order() as usize];
    for a in 1..=f {
        if let Some(k) = chi.primitive_exponent(a as i64) {
            sums[k as usize] += a;
        }
    }
    group.context().from_exponent_sums(sums, BigInt::from(f))
}

/// `L_E(0, chi) = 2 (1 - 2 chi(2)) B_{1,chi}`.
pub fn eulerian_l_at_zero(chi: &DirichletCharacter<'_>) -> CycloElement {
    let ctx = chi.group().context();
    let chi2 = chi.evaluate_primitive(2).into_element(ctx);
    let factor = ctx.one().checked_sub(&chi2.scale(&ExactRational::from_integer(2.into())));
    factor
        .expect("same level")
        .scale(&ExactRational::from_integer(2.into()))
        .checked_mul(&bernoulli1(chi))
        .expect("same level")
}

/// `L_E(0, chi)` from the alternating series itself: the summand
/// `psi(k) = (-1)^k chi*(k)` has period `2f`, so
/// `L_E(0, chi) = 2 sum_{a=1}^{2f} psi(a) (1/2 - a/(2f))`.
pub fn eulerian_l_at_zero_series(chi: &DirichletCharacter<'_>) -> CycloElement {
    let group = chi.group();
    let period = 2 * chi.conductor() as i64;
    // 2 * psi(a) * (1/2 - a/N) = psi(a) * (N - 2a) / N
    let mut sums = vec![BigInt::zero(); group.order() as usize];
    for a in 1..=period {
        if let Some(k) = chi.primitive_exponent(a) {
            let sign = if a % 2 == 0 { 1 } else { -1 };
            sums[k as usize] += sign * (period - 2 * a);
        }
    }
    group.context().from_exponent_sums(sums, BigInt::from(period))
}

fn odd_indices(group: &CharGroup) -> Vec<u64> {
    group.odd_characters().map(|chi| chi.index()).collect()
}

/// Rational product of `factor(chi)` over the odd characters of `group`.
fn odd_product<F>(group: &CharGroup, factor: F) -> Result<ExactRational>
where
    F: Fn(&DirichletCharacter<'_>) -> CycloElement + Sync + Send,
{
    let factors = try_map(odd_indices(group), |j| Ok(factor(&group.character(j))))?;
    balanced_product(group.context(), factors)?.as_rational()
}

/// `prod_{chi odd} B_{1,chi}`.
pub fn bernoulli_product(group: &CharGroup, orbit_norms: bool) -> Result<ExactRational> {
    if orbit_norms {
        bernoulli_product_by_orbits(group)
    } else {
        odd_product(group, bernoulli1)
    }
}

/// Same product, computing one `B_{1,chi}` per Galois orbit and applying the
/// automorphisms `zeta -> zeta^u` to it. The odd characters with
/// `gcd(j, phi) = g` form one orbit `{g u : u in (Z/(phi/g))^x}`.
fn bernoulli_product_by_orbits(group: &CharGroup) -> Result<ExactRational> {
    let order = group.order();
    let mut gcds: Vec<u64> = odd_indices(group).iter().map(|j| j.gcd(&order)).collect();
    gcds.sort_unstable();
    gcds.dedup();

    let mut total = ExactRational::one();
    for g in gcds {
        let base = bernoulli1(&group.character(g));
        let sub = order / g;
        let units: Vec<u64> = (1..=sub).filter(|u| u.gcd(&sub) == 1).collect();
        let conjugates = try_map(units, |u| {
            let mut lift = u;
            while lift.gcd(&order) != 1 {
                lift += sub;
            }
            base.galois(lift as i64)
        })?;
        total *= balanced_product(group.context(), conjugates)?.as_rational()?;
    }
    Ok(total)
}

/// `prod_{chi odd} L_E(0, chi)`.
pub fn eulerian_product(group: &CharGroup) -> Result<ExactRational> {
    odd_product(group, eulerian_l_at_zero)
}

/// `prod_{chi odd} (1 - 2 chi(2))`, through the primitive characters.
pub fn two_factor_product(group: &CharGroup) -> Result<ExactRational> {
    let ctx = group.context();
    let two = ExactRational::from_integer(2.into());
    odd_product(group, |chi| {
        let chi2 = chi.evaluate_primitive(2).into_element(ctx);
        ctx.one().checked_sub(&chi2.scale(&two)).expect("same level")
    })
}

fn half_odd_count(group: &CharGroup) -> u32 {
    (group.order() / 2) as u32
}

/// `h_n^-` for the group of `p^(n+1)`.
pub fn h_minus_in(group: &CharGroup, opts: &ClassNumberOptions) -> Result<BigInt> {
    let k = half_odd_count(group);
    let prod = bernoulli_product(group, opts.orbit_norms)?;
    let scale = ExactRational::new(BigInt::from(-1), BigInt::from(2));
    let modulus = ExactRational::from_integer(BigInt::from(group.modulus()));
    let h = ExactRational::from_integer(2.into()) * modulus * Pow::pow(&scale, k) * prod;
    let h = to_integer(&h)?;
    if !h.is_positive() {
        return Err(Error::Inconsistent(format!("h_minus = {h} is not positive")));
    }
    Ok(h)
}

pub fn h_minus(p: u64, n: u32, opts: &ClassNumberOptions) -> Result<BigInt> {
    h_minus_in(&CharGroup::new(p, n, opts.cap)?, opts)
}

/// `h_{n,2}^-` straight from the Eulerian product. The sign is returned as
/// computed, never corrected.
pub fn h_minus_refined_in(group: &CharGroup) -> Result<BigInt> {
    let k = half_odd_count(group);
    let sign = if k.is_multiple_of(2) { 1 } else { -1 };
    let scale = ExactRational::new(
        BigInt::from(sign) * BigInt::from(2),
        Pow::pow(BigInt::from(2), 2 * k),
    );
    let h = to_integer(&(scale * eulerian_product(group)?))?;
    if h.is_zero() {
        return Err(Error::Inconsistent("h_minus_refined vanished".into()));
    }
    Ok(h)
}

pub fn h_minus_refined(p: u64, n: u32, opts: &ClassNumberOptions) -> Result<BigInt> {
    h_minus_refined_in(&CharGroup::new(p, n, opts.cap)?)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassNumberResult {
    pub p: u64,
    pub n: u32,
    pub h_minus: BigInt,
    pub h_minus_refined: BigInt,
    pub val_h_minus: Valuation,
    pub val_h_minus_refined: Valuation,
}

impl ClassNumberResult {
    /// Positivity of `h_{n,2}^-`; reported, not enforced.
    pub fn refined_is_positive(&self) -> bool {
        self.h_minus_refined.is_positive()
    }
}

pub fn class_numbers_in(group: &CharGroup, opts: &ClassNumberOptions) -> Result<ClassNumberResult> {
    let p = group.p();
    let h = h_minus_in(group, opts)?;
    let h2 = h_minus_refined_in(group)?;
    Ok(ClassNumberResult {
        p,
        n: group.n(),
        val_h_minus: padic_valuation(&ExactRational::from_integer(h.clone()), p as i64)?,
        val_h_minus_refined: padic_valuation(&ExactRational::from_integer(h2.clone()), p as i64)?,
        h_minus: h,
        h_minus_refined: h2,
    })
}

pub fn class_numbers(p: u64, n: u32, opts: &ClassNumberOptions) -> Result<ClassNumberResult> {
    class_numbers_in(&CharGroup::new(p, n, opts.cap)?, opts)
}

/// `prod L_E(0,chi)` against `2^k prod (1 - 2chi(2)) prod B_{1,chi}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lemma21Report {
    pub p: u64,
    pub n: u32,
    pub eulerian_product: ExactRational,
    pub two_factor_product: ExactRational,
    pub bernoulli_product: ExactRational,
    pub rhs: ExactRational,
}

impl Lemma21Report {
    pub fn holds(&self) -> bool {
        self.eulerian_product == self.rhs
    }
}

pub fn verify_lemma_2_1_in(group: &CharGroup) -> Result<Lemma21Report> {
    let eulerian = eulerian_product(group)?;
    let two = two_factor_product(group)?;
    let bern = bernoulli_product(group, false)?;
    let k = half_odd_count(group);
    let rhs = ExactRational::from_integer(Pow::pow(BigInt::from(2), k)) * &two * &bern;
    Ok(Lemma21Report {
        p: group.p(),
        n: group.n(),
        eulerian_product: eulerian,
        two_factor_product: two,
        bernoulli_product: bern,
        rhs,
    })
}

pub fn verify_lemma_2_1(p: u64, n: u32, cap: u64) -> Result<Lemma21Report> {
    verify_lemma_2_1_in(&CharGroup::new(p, n, cap)?)
}

/// `h_{n,2}^-` from the Eulerian product against `h_n^- / p^(n+1) * prod (1 - 2chi(2))`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Prop22Report {
    pub p: u64,
    pub n: u32,
    pub direct: BigInt,
    pub h_minus: BigInt,
    pub two_product: BigInt,
    pub via_relation: ExactRational,
}

impl Prop22Report {
    pub fn holds(&self) -> bool {
        self.via_relation == ExactRational::from_integer(self.direct.clone())
    }
}

pub fn verify_prop_2_2_in(group: &CharGroup, opts: &ClassNumberOptions) -> Result<Prop22Report> {
    let direct = h_minus_refined_in(group)?;
    let h = h_minus_in(group, opts)?;
    let two_product = prodval::char_product_bruteforce_in(group, 2)?;
    let via_relation = ExactRational::new(h.clone() * &two_product, BigInt::from(group.modulus()));
    Ok(Prop22Report { p: group.p(), n: group.n(), direct, h_minus: h, two_product, via_relation })
}

pub fn verify_prop_2_2(p: u64, n: u32, opts: &ClassNumberOptions) -> Result<Prop22Report> {
    verify_prop_2_2_in(&CharGroup::new(p, n, opts.cap)?, opts)
}
