use std::sync::OnceLock;

use proptest::prelude::*;

use valdyn::dynamics::{degree_prefix, CLASSIFY_BUDGET};
use valdyn::numeric::{Coeff, QuadReal, Rat};
use valdyn::poly::{parse_map, BiPoly};
use valdyn::valtree::{Val, ValInfinity, DEFAULT_MAX_REFINE};

/// Monomial valuations, rational and irrational, and non-monomial orbit
/// points.
fn pool() -> &'static [ValInfinity] {
    static POOL: OnceLock<Vec<ValInfinity>> = OnceLock::new();
    POOL.get_or_init(|| {
        let mut out = vec![ValInfinity::root()];
        for (n, d) in [(0, 1), (1, 3), (1, 2), (2, 3), (5, 7)] {
            out.push(ValInfinity::monomial_rat(Rat::new(-n, d), Rat::from_int(-1)).unwrap());
            out.push(ValInfinity::monomial_rat(Rat::from_int(-1), Rat::new(-n, d)).unwrap());
        }
        let surd = QuadReal::new(Rat::zero(), Rat::new(1, 3), 6);
        out.push(ValInfinity::monomial_s(surd).unwrap());
        for text in ["P = x*(x - y^2); Q = x + y", "P = y; Q = y^2 - x", "P = y + x^2; Q = x^2"] {
            let f = parse_map(text).unwrap();
            out.extend(degree_prefix(&f, 5, DEFAULT_MAX_REFINE, CLASSIFY_BUDGET).unwrap().orbit);
        }
        out
    })
}

fn poly() -> impl Strategy<Value = BiPoly> {
    proptest::collection::vec(((0u32..=4, 0u32..=4), -4i64..=4), 1..6)
        .prop_map(|ts| BiPoly::from_terms(ts.into_iter().map(|(m, c)| (m, Coeff::from_int(c)))))
        .prop_filter("nonzero", |p| !p.is_zero())
}

fn add(a: &Val, b: &Val) -> Val {
    match (a, b) {
        (Val::Fin(x), Val::Fin(y)) => Val::Fin(x + y),
        _ => Val::Inf,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn eval_is_a_valuation(k in 0usize..64, r in poly(), s in poly()) {
        let v = &pool()[k % pool().len()];
        let (vr, vs) = (v.eval(&r).unwrap(), v.eval(&s).unwrap());
        prop_assert_eq!(v.eval(&(&r * &s)).unwrap(), add(&vr, &vs), "{}", v);
        let sum = &r + &s;
        if !sum.is_zero() {
            prop_assert!(v.eval(&sum).unwrap() >= vr.clone().min(vs.clone()), "{}", v);
        }
    }

    #[test]
    fn meet_of_monomials_is_componentwise_min(
        a in 0i64..=12, b in 0i64..=12, d in 1i64..=12, xa in any::<bool>(), xb in any::<bool>()
    ) {
        let one = Rat::from_int(-1);
        let mono = |n: i64, x_major: bool| {
            let s = Rat::new(-n.min(d), d);
            if x_major {
                ValInfinity::monomial_rat(one.clone(), s).unwrap()
            } else {
                ValInfinity::monomial_rat(s, one.clone()).unwrap()
            }
        };
        let (v, w) = (mono(a, xa), mono(b, xb));
        let (_, m) = v.meet(&w);
        prop_assert!(m.le(&v) && m.le(&w));
        let (vx, vy) = v.weights();
        let (wx, wy) = w.weights();
        prop_assert_eq!(m.weights(), (vx.min(wx), vy.min(wy)));
    }
}

#[test]
fn skewness_and_thinness_bounds() {
    for v in pool() {
        let inv = v.invariants().unwrap();
        let (one, minus_two) = (QuadReal::one(), QuadReal::from_int(-2));
        if v.is_root() {
            assert_eq!((inv.alpha, inv.thinness), (one, minus_two));
        } else {
            assert!(inv.alpha < one, "{v}: alpha = {}", inv.alpha);
            assert!(inv.thinness > minus_two, "{v}: A = {}", inv.thinness);
        }
    }
}

#[test]
fn invariants_monotone_along_extensions() {
    for v in pool() {
        // prefixes, and a midpoint inside every segment
        let mut chain = vec![ValInfinity::root()];
        for (k, level) in v.levels().iter().enumerate() {
            let Val::Fin(t) = &level.value else { continue };
            let (Some(start), Some(end)) = (v.segment_start(k).as_rational().cloned(), t.as_rational().cloned()) else {
                continue;
            };
            let mid = (&start + &end) / Rat::from_int(2);
            chain.push(v.with_top_value(k, QuadReal::rational(mid)));
            chain.push(v.with_top_value(k, t.clone()));
        }
        chain.dedup_by(|a, b| a.same_as(b));
        for pair in chain.windows(2) {
            let (lo, hi) = (pair[0].invariants().unwrap(), pair[1].invariants().unwrap());
            assert!(pair[0].le(&pair[1]), "{} !<= {}", pair[0], pair[1]);
            assert!(hi.alpha < lo.alpha, "alpha along {} -> {}", pair[0], pair[1]);
            assert!(hi.thinness > lo.thinness, "A along {} -> {}", pair[0], pair[1]);
        }
    }
}
