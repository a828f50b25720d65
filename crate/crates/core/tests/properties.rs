use num_bigint::BigInt;
use num_traits::{One, Pow, Zero};
use proptest::prelude::*;

use refclass::cyclo::{cyclotomic_polynomial, CycloContext, CycloElement, DEFAULT_LEVEL_CAP};
use refclass::exactnum::{padic_valuation, pow_mod, ExactRational, Valuation};
use refclass::multorder::{mult_order, order_profile};

fn rational() -> impl Strategy<Value = ExactRational> {
    (-10_000i64..10_000, 1i64..5_000)
        .prop_map(|(n, d)| ExactRational::new(BigInt::from(n), BigInt::from(d)))
}

fn nonzero_rational() -> impl Strategy<Value = ExactRational> {
    rational().prop_filter("nonzero", |x| !x.is_zero())
}

fn odd_prime() -> impl Strategy<Value = i64> {
    prop::sample::select(vec![3i64, 5, 7, 11, 13, 17, 19, 23])
}

fn element(ctx: &std::sync::Arc<CycloContext>, coeffs: &[(i64, i64)]) -> CycloElement {
    coeffs.iter().enumerate().fold(ctx.zero(), |acc, (k, &(n, d))| {
        let c = ExactRational::new(BigInt::from(n), BigInt::from(d));
        acc.checked_add(&ctx.root_of_unity(k as i64).scale(&c)).unwrap()
    })
}

proptest! {
    #[test]
    fn valuation_is_additive(x in nonzero_rational(), y in nonzero_rational(), p in odd_prime()) {
        let vx = padic_valuation(&x, p).unwrap();
        let vy = padic_valuation(&y, p).unwrap();
        prop_assert_eq!(padic_valuation(&(&x * &y), p).unwrap(), vx + vy);
    }

    #[test]
    fn valuation_is_ultrametric(x in nonzero_rational(), y in nonzero_rational(), p in odd_prime()) {
        let vx = padic_valuation(&x, p).unwrap();
        let vy = padic_valuation(&y, p).unwrap();
        let vs = padic_valuation(&(&x + &y), p).unwrap();
        prop_assert!(vs >= vx.min(vy));
        if vx != vy {
            prop_assert_eq!(vs, vx.min(vy));
        }
    }

    #[test]
    fn valuation_splits_off_unit(x in nonzero_rational(), p in odd_prime()) {
        let v = padic_valuation(&x, p).unwrap().finite().unwrap();
        let pr = ExactRational::from_integer(BigInt::from(p));
        let unit = &x / Pow::pow(&pr, v as i32);
        prop_assert_eq!(padic_valuation(&unit, p).unwrap(), Valuation::Finite(0));
    }

    #[test]
    fn pow_mod_matches_repeated_multiplication(a in -1000i64..1000, k in 0u64..60, m in 1u64..5000) {
        let mut acc = 1i128 % m as i128;
        for _ in 0..k {
            acc = acc * a as i128 % m as i128;
        }
        prop_assert_eq!(pow_mod(a, k, m) as i128, acc.rem_euclid(m as i128));
    }

    #[test]
    fn ring_axioms(
        level in 1u64..=60,
        a in prop::collection::vec((-20i64..20, 1i64..6), 1..8),
        b in prop::collection::vec((-20i64..20, 1i64..6), 1..8),
        c in prop::collection::vec((-20i64..20, 1i64..6), 1..8),
    ) {
        let ctx = CycloContext::new(level, DEFAULT_LEVEL_CAP).unwrap();
        let (a, b, c) = (element(&ctx, &a), element(&ctx, &b), element(&ctx, &c));
        let ab_c = a.checked_mul(&b).unwrap().checked_mul(&c).unwrap();
        let a_bc = a.checked_mul(&b.checked_mul(&c).unwrap()).unwrap();
        prop_assert_eq!(&ab_c, &a_bc);
        let lhs = a.checked_mul(&b.checked_add(&c).unwrap()).unwrap();
        let rhs = a.checked_mul(&b).unwrap().checked_add(&a.checked_mul(&c).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
        prop_assert_eq!(a.checked_mul(&b).unwrap(), b.checked_mul(&a).unwrap());
        prop_assert!(a.checked_sub(&a).unwrap().is_zero());
        prop_assert_eq!(a.conjugate().conjugate(), a.clone());
        // conjugation is a ring homomorphism
        prop_assert_eq!(
            a.checked_mul(&b).unwrap().conjugate(),
            a.conjugate().checked_mul(&b.conjugate()).unwrap()
        );
    }

    #[test]
    fn cyclotomic_polynomial_is_product_over_primitive_roots(level in 1u64..=30, x in rational()) {
        let ctx = CycloContext::new(level, DEFAULT_LEVEL_CAP).unwrap();
        let xe = ctx.from_rational(&x);
        let prod = (0..level as i64)
            .filter(|k| num_integer::Integer::gcd(k, &(level as i64)) == 1)
            .fold(ctx.one(), |acc, k| {
                acc.checked_mul(&xe.checked_sub(&ctx.root_of_unity(k)).unwrap()).unwrap()
            });
        let phi = cyclotomic_polynomial(level);
        let value = phi.iter().rev().fold(ExactRational::zero(), |acc, c| {
            acc * &x + ExactRational::from_integer(c.clone())
        });
        prop_assert_eq!(prod.as_rational().unwrap(), value);
    }

    #[test]
    fn lifting_is_a_ring_map(
        level in 1u64..=20,
        factor in 1u64..=4,
        a in prop::collection::vec((-9i64..9, 1i64..4), 1..6),
        b in prop::collection::vec((-9i64..9, 1i64..4), 1..6),
    ) {
        let ctx = CycloContext::new(level, DEFAULT_LEVEL_CAP).unwrap();
        let big = CycloContext::new(level * factor, DEFAULT_LEVEL_CAP).unwrap();
        let (a, b) = (element(&ctx, &a), element(&ctx, &b));
        let lifted = a.checked_mul(&b).unwrap().lift_level(&big).unwrap();
        let product = a.lift_level(&big).unwrap().checked_mul(&b.lift_level(&big).unwrap()).unwrap();
        prop_assert_eq!(lifted, product);
    }
}

#[test]
fn orbit_norm_of_nonzero_element_is_positive() {
    for level in [5u64, 7, 8, 12, 15] {
        let ctx = CycloContext::new(level, DEFAULT_LEVEL_CAP).unwrap();
        let a = element(&ctx, &[(1, 1), (-2, 3), (5, 2)]);
        let norm_sq = (1..level as i64)
            .filter(|k| num_integer::Integer::gcd(k, &(level as i64)) == 1)
            .map(|k| {
                let s = a.galois(k).unwrap();
                s.checked_mul(&s.conjugate()).unwrap()
            })
            .fold(ctx.one(), |acc, x| acc.checked_mul(&x).unwrap());
        assert!(norm_sq.as_rational().unwrap() > ExactRational::zero());
    }
}

#[test]
fn f_n_closed_form_matches_bruteforce_order() {
    for p in [3u64, 5, 7, 11, 13, 17, 19, 23] {
        for q in [2u64, 3, 5, 7] {
            if q == p {
                continue;
            }
            let pr = order_profile(q, p).unwrap();
            for n in pr.m.saturating_sub(1)..=4 {
                if p.checked_pow(n + 1).is_none_or(|m| m > 1_000_000_000) {
                    break;
                }
                let f = pr.f_n(n).unwrap();
                assert_eq!(f, mult_order(q as i64, p, n + 1).unwrap(), "q={q} p={p} n={n}");
                assert_eq!(f % 2, pr.e % 2);
            }
            assert!(BigInt::from(q).pow(pr.e) != BigInt::one());
        }
    }
}
