//! Degree sequences `deg F^j`.

use num_bigint::BigInt;

use super::{d_of, pushforward, DynError};
use crate::numeric::QuadReal;
use crate::poly::PolyMap;
use crate::valtree::{ValError, ValInfinity};

/// Largest monomial count a brute-force composition may reach.
pub const BRUTEFORCE_LIMIT: u128 = 10_000;

#[derive(Clone, Debug)]
pub struct DegreeReport {
    /// `deg F^0, ..., deg F^n`.
    pub degrees: Vec<BigInt>,
    /// The orbit `nu_0 = -deg, nu_{i+1} = F•nu_i` used for the product.
    pub orbit: Vec<ValInfinity>,
    /// `d(F, nu_i)`.
    pub local_degrees: Vec<QuadReal>,
}

/// `deg F^j = prod_{i<j} d(F, nu_i)` along the orbit of `-deg`.
pub fn degree_sequence(f: &PolyMap, n: usize, max_refine: usize) -> Result<DegreeReport, DynError> {
    degree_prefix(f, n, max_refine, OrbitBudget::UNLIMITED)
}

/// Limits on the orbit elements that may still be pushed forward.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OrbitBudget {
    /// Degree of the top key, exclusive.
    pub key_degree: u64,
    /// See [`ValInfinity::probe_degree`]; inclusive.
    pub probe_degree: u64,
}

impl OrbitBudget {
    pub const UNLIMITED: OrbitBudget = OrbitBudget { key_degree: u64::MAX, probe_degree: u64::MAX };

    pub fn allows(&self, v: &ValInfinity) -> bool {
        v.key_degree(v.levels().len() - 1) < self.key_degree && v.probe_degree() <= self.probe_degree
    }
}

/// Like [`degree_sequence`], but stops early at the first orbit element the
/// budget does not allow to push forward.
pub fn degree_prefix(f: &PolyMap, n: usize, max_refine: usize, budget: OrbitBudget) -> Result<DegreeReport, DynError> {
    if !f.is_dominant() {
        return Err(crate::poly::PolyError::NonDominant.into());
    }
    let mut nu = ValInfinity::root();
    let mut acc = QuadReal::one();
    let mut report = DegreeReport { degrees: vec![BigInt::from(1)], orbit: Vec::new(), local_degrees: Vec::new() };
    for j in 0..n {
        let d = d_of(f, &nu);
        acc = &acc * &d;
        let deg = acc
            .as_rational()
            .filter(|r| r.is_integer() && r.is_positive())
            .map(|r| r.numer().clone())
            .ok_or_else(|| DynError::NonIntegralDegree(acc.to_string()))?;
        report.degrees.push(deg);
        report.local_degrees.push(d);
        let next = if j + 1 < n && budget.allows(&nu) { Some(pushforward(f, &nu, max_refine)?) } else { None };
        report.orbit.push(nu.clone());
        let Some(next) = next else {
            break;
        };
        {
            if next.is_truncated() {
                return Err(ValError::RefinementLimit(max_refine).into());
            }
            nu = next;
        }
    }
    Ok(report)
}

fn monomials_up_to(d: u128) -> u128 {
    (d + 1) * (d + 2) / 2
}

/// Degrees of the literal iterates `F^0, ..., F^n`.
pub fn degree_sequence_bruteforce(f: &PolyMap, n: usize) -> Result<Vec<u64>, DynError> {
    let d = f.degree() as u128;
    let top = (0..n).try_fold(1u128, |acc, _| acc.checked_mul(d.max(1)));
    match top {
        Some(t) if monomials_up_to(t) <= BRUTEFORCE_LIMIT => {}
        Some(t) => return Err(DynError::TooLarge(monomials_up_to(t))),
        None => return Err(DynError::TooLarge(u128::MAX)),
    }
    let mut out = vec![1u64];
    let mut it = PolyMap::identity();
    for _ in 0..n {
        it = f.compose(&it);
        out.push(it.degree() as u64);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_map;
    use crate::valtree::DEFAULT_MAX_REFINE;

    fn degs(text: &str, n: usize) -> Vec<i64> {
        let f = parse_map(text).unwrap();
        degree_sequence(&f, n, DEFAULT_MAX_REFINE)
            .unwrap()
            .degrees
            .iter()
            .map(|d| i64::try_from(d.clone()).unwrap())
            .collect()
    }

    #[test]
    fn example_sequences() {
        assert_eq!(degs("P = x*(x - y^2); Q = x + y", 6), [1, 3, 6, 11, 23, 46, 91]);
        assert_eq!(degs("P = x^2; Q = x*y^2", 4), [1, 3, 8, 20, 48]);
        assert_eq!(degs("P = y; Q = y^2 - x", 5), [1, 2, 4, 8, 16, 32]);
    }

    #[test]
    fn bruteforce_examples() {
        let f = parse_map("P = x*(x - y^2); Q = x + y").unwrap();
        assert_eq!(degree_sequence_bruteforce(&f, 2).unwrap(), [1, 3, 6]);
        assert_eq!(degree_sequence_bruteforce(&PolyMap::identity(), 4).unwrap(), [1, 1, 1, 1, 1]);
        let g = parse_map("P = x^2; Q = y^2").unwrap();
        assert_eq!(degree_sequence_bruteforce(&g, 3).unwrap(), [1, 2, 4, 8]);
        assert!(matches!(degree_sequence_bruteforce(&f, 9), Err(DynError::TooLarge(_))));
    }
}
