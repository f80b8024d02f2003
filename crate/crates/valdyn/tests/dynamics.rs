use std::path::PathBuf;
use std::sync::OnceLock;

use num_bigint::BigInt;
use proptest::prelude::*;

use valdyn::dynamics::{
    d_of, degree_prefix, degree_sequence, degree_sequence_bruteforce, detect_recurrence, eigenvaluation,
    jacobian_formula_check, pushforward, CLASSIFY_BUDGET, DEFAULT_MAX_ITER,
};
use valdyn::numeric::{QuadReal, Rat};
use valdyn::poly::{parse_map, BiPoly, PolyMap};
use valdyn::valtree::{ValInfinity, DEFAULT_MAX_REFINE};

fn fixtures() -> &'static [(String, PolyMap)] {
    static FX: OnceLock<Vec<(String, PolyMap)>> = OnceLock::new();
    FX.get_or_init(|| {
        let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures");
        let mut paths: Vec<_> = std::fs::read_dir(dir).unwrap().map(|e| e.unwrap().path()).collect();
        paths.sort();
        paths
            .into_iter()
            .filter(|p| p.extension().is_some_and(|e| e == "map"))
            .map(|p| {
                let name = p.file_stem().unwrap().to_string_lossy().into_owned();
                (name, parse_map(&std::fs::read_to_string(&p).unwrap()).unwrap())
            })
            .collect()
    })
}

/// `(-s, -1)` or `(-1, -s)` with rational `s` in `[0, 1]`.
fn v1() -> impl Strategy<Value = ValInfinity> {
    (1i64..=12, 0i64..=12, any::<bool>()).prop_map(|(d, n, x_major)| {
        let s = Rat::new(-n.min(d), d);
        let one = Rat::from_int(-1);
        if x_major {
            ValInfinity::monomial_rat(one, s).unwrap()
        } else {
            ValInfinity::monomial_rat(s, one).unwrap()
        }
    })
}

fn fixture() -> impl Strategy<Value = usize> {
    0..fixtures().len()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn pushforward_preserves_v1(k in fixture(), v in v1()) {
        let (name, f) = &fixtures()[k];
        prop_assert!(d_of(f, &v).signum() > 0, "{} at {}", name, v);
        let w = pushforward(f, &v, DEFAULT_MAX_REFINE).unwrap();
        prop_assert!(w.in_v1().unwrap(), "{} at {}: {}", name, v, w);
    }

    #[test]
    fn jacobian_formula(k in fixture(), v in v1()) {
        let (name, f) = &fixtures()[k];
        let j = jacobian_formula_check(f, &v).unwrap();
        prop_assert!(j.equal, "{} at {}: {} != {}", name, v, j.lhs, j.rhs);
    }

    #[test]
    fn local_degree_is_multiplicative(k in fixture(), v in v1()) {
        let (name, f) = &fixtures()[k];
        let fv = pushforward(f, &v, DEFAULT_MAX_REFINE).unwrap();
        let lhs = d_of(&f.compose(f), &v);
        let rhs = &d_of(f, &v) * &d_of(f, &fv);
        prop_assert_eq!(lhs, rhs, "{} at {}", name, v);
    }
}

#[test]
fn degrees_match_bruteforce() {
    for (name, f) in fixtures() {
        let fast = degree_sequence(f, 3, DEFAULT_MAX_REFINE).unwrap().degrees;
        let slow: Vec<BigInt> = degree_sequence_bruteforce(f, 3).unwrap().into_iter().map(BigInt::from).collect();
        assert_eq!(fast, slow, "{name}");
    }
}

#[test]
fn recurrences_reproduce_terms() {
    for (name, f) in fixtures() {
        let degrees = degree_prefix(f, 8, DEFAULT_MAX_REFINE, CLASSIFY_BUDGET).unwrap().degrees;
        let Ok(r) = detect_recurrence(&degrees, 3) else {
            continue;
        };
        for j in (r.offset + r.order)..degrees.len() {
            assert_eq!(r.predict(&degrees[..j]), degrees[j], "{name}: term {j}");
        }
        assert!(r.min_poly.is_integral() && r.min_poly.degree() <= 2, "{name}: {:?}", r.min_poly);
        assert_eq!(r.min_poly.coeffs.last(), Some(&Rat::one()));
        assert!(r.min_poly.eval(&r.dominant_root).is_zero());
    }
}

#[test]
fn exact_eigenvaluations_are_fixed() {
    let mut exact = 0;
    for (name, f) in fixtures() {
        let e = eigenvaluation(f, DEFAULT_MAX_ITER, DEFAULT_MAX_REFINE).unwrap();
        if !e.kind.is_exact() {
            continue;
        }
        exact += 1;
        let nu = &e.nu_star;
        let image = pushforward(f, nu, DEFAULT_MAX_REFINE).unwrap();
        assert!(image.same_as(nu), "{name}: {image} != {nu}");
        let mut probes = vec![BiPoly::x(), BiPoly::y()];
        probes.extend(nu.witnesses().iter().cloned());
        for p in &probes {
            assert_eq!(image.eval(p).unwrap(), nu.eval(p).unwrap(), "{name}: value on {p}");
        }
        assert_eq!(d_of(f, nu), e.lambda1, "{name}");
        assert!(e.fixed_point_exact, "{name}");
        assert!(e.min_poly.is_integral() && e.min_poly.degree() <= 2, "{name}");
        assert_eq!(e.min_poly.eval(&e.lambda1), QuadReal::zero(), "{name}");
    }
    assert!(exact >= 10, "only {exact} exact eigenvaluations");
}
