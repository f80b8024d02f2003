use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Signed;
use proptest::prelude::*;

use valdyn::numeric::{QuadReal, Rat};

fn rat() -> impl Strategy<Value = Rat> {
    (-50i64..=50, 1i64..=20).prop_map(|(n, d)| Rat::new(n, d))
}

fn quad() -> impl Strategy<Value = QuadReal> {
    (rat(), rat(), 1u64..=30).prop_map(|(r, s, n)| QuadReal::new(r, s, n))
}

const BITS: u32 = 200;

/// `floor(r * 2^BITS)` up to one unit.
fn fixed_rat(r: &Rat) -> BigInt {
    (r.numer() << BITS).div_floor(r.denom())
}

/// `r + s sqrt(n)` scaled by `2^BITS`, within three units, computed with an
/// integer square root.
fn fixed(r: &Rat, s: &Rat, n: u64) -> BigInt {
    let (p, q) = (s.numer().abs(), s.denom().clone());
    let root = ((&p * &p * BigInt::from(n)) << (2 * BITS)).sqrt() / q;
    let surd = if s.is_negative() { -root } else { root };
    fixed_rat(r) + surd
}

proptest! {
    #[test]
    fn rat_field_laws(a in rat(), b in rat(), c in rat()) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
    }

    #[test]
    fn rat_normalization_idempotent(n in -1000i64..1000, d in 1i64..1000, k in 1i64..50) {
        let r = Rat::new(n * k, d * k);
        prop_assert_eq!(&r, &Rat::new(n, d));
        prop_assert_eq!(Rat::new(r.numer().clone(), r.denom().clone()), r.clone());
        prop_assert_eq!(r.to_string().parse::<Rat>().unwrap(), r.clone());
        prop_assert!(r.denom() > &BigInt::from(0));
        prop_assert!(r.numer().gcd(r.denom()) == BigInt::from(1) || r.is_zero());
    }

    #[test]
    fn min_poly_vanishes(a in quad()) {
        let mp = a.min_poly();
        prop_assert!(mp.eval(&a).is_zero(), "{} at {}", mp, a);
        prop_assert!(mp.degree() <= 2);
    }

    #[test]
    fn quad_arithmetic_consistent(a in quad(), b in quad()) {
        prop_assume!(a.radicand() == b.radicand() || a.is_rational() || b.is_rational());
        let s = &a + &b;
        prop_assert_eq!(&s - &b, a.clone());
        if !b.is_zero() {
            prop_assert_eq!(&(&a * &b) / &b, a.clone());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn quad_cmp_matches_fixed_point(a in quad(), b in quad()) {
        let fa = fixed(a.rational_part(), a.surd_part(), a.radicand());
        let fb = fixed(b.rational_part(), b.surd_part(), b.radicand());
        let gap = &fa - &fb;
        if gap.abs() <= BigInt::from(8) {
            // too close for the oracle; only exact equality is plausible
            prop_assert!(a.cmp(&b) == Ordering::Equal || (a.to_f64() - b.to_f64()).abs() < 1e-50);
        } else {
            let want = if gap.is_positive() { Ordering::Greater } else { Ordering::Less };
            prop_assert_eq!(a.cmp(&b), want, "{} vs {}", a, b);
        }
    }
}
