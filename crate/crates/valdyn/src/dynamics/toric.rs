//! Monomial fixed sets and extension to weighted projective planes.

use num_integer::Integer;

use super::eigen::is_fixed;
use super::DynError;
use crate::numeric::upoly::{self, UPoly};
use crate::numeric::{QuadReal, Rat};
use crate::poly::{BiPoly, PolyMap};
use crate::valtree::{ValInfinity, DEFAULT_MAX_REFINE};

/// A closed piece of the monomial path
/// `(0,-1) -> (-1,-1) -> (-1,0)`, as weight pairs `(nu(x), nu(y))`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TfSegment {
    pub lo: (QuadReal, QuadReal),
    pub hi: (QuadReal, QuadReal),
}

impl TfSegment {
    pub fn is_singleton(&self) -> bool {
        self.lo == self.hi
    }

    pub fn endpoints(&self) -> Result<(ValInfinity, ValInfinity), DynError> {
        let lo = ValInfinity::monomial(self.lo.0.clone(), self.lo.1.clone())?;
        let hi = ValInfinity::monomial(self.hi.0.clone(), self.hi.1.clone())?;
        Ok((lo, hi))
    }
}

/// Path parameter `tau` in `[0, 2]`: `(-tau, -1)` then `(-1, tau - 2)`.
fn at(tau: &QuadReal) -> (QuadReal, QuadReal) {
    let one = QuadReal::one();
    if *tau <= one {
        (-tau, -&one)
    } else {
        (-&one, tau - &QuadReal::from_int(2))
    }
}

fn fixed_at(f: &PolyMap, tau: &QuadReal) -> bool {
    let (wx, wy) = at(tau);
    ValInfinity::monomial(wx, wy).is_ok_and(|v| is_fixed(f, &v, DEFAULT_MAX_REFINE))
}

/// Exponents `(a, b)` as the linear weight `a s + b` along one family, where
/// `swap` selects the family `(-1, -s)`.
fn lin(e: (u32, u32), swap: bool) -> (i64, i64) {
    let (i, j) = (e.0 as i64, e.1 as i64);
    if swap {
        (j, i)
    } else {
        (i, j)
    }
}

/// Term ties of `r` in `(0, 1)`.
fn ties(r: &BiPoly, swap: bool, out: &mut Vec<Rat>) {
    let t: Vec<(i64, i64)> = r.terms().map(|(&e, _)| lin(e, swap)).collect();
    for (k, &(a, b)) in t.iter().enumerate() {
        for &(a2, b2) in &t[k + 1..] {
            if a != a2 {
                let s = Rat::new(b2 - b, a - a2);
                if s.is_positive() && s < Rat::one() {
                    out.push(s);
                }
            }
        }
    }
}

/// Dominant linear form of `r` at `s`.
fn top(r: &BiPoly, swap: bool, s: &Rat) -> (i64, i64) {
    r.terms()
        .map(|(&e, _)| lin(e, swap))
        .max_by(|&(a, b), &(a2, b2)| {
            (Rat::from(a) * s + Rat::from(b)).cmp(&(Rat::from(a2) * s + Rat::from(b2)))
        })
        .expect("nonzero polynomial")
}

/// Roots in the closed interval `[lo, hi]` of `c2 s^2 + c1 s + c0`.
fn roots_in(c2: i64, c1: i64, c0: i64, lo: &Rat, hi: &Rat) -> Vec<QuadReal> {
    let inside = |r: &QuadReal| *r >= QuadReal::rational(lo.clone()) && *r <= QuadReal::rational(hi.clone());
    let cands = if c2 == 0 {
        if c1 == 0 {
            Vec::new()
        } else {
            vec![QuadReal::rational(Rat::new(-c0, c1))]
        }
    } else {
        let disc = c1 * c1 - 4 * c2 * c0;
        if disc < 0 {
            Vec::new()
        } else {
            let sq = QuadReal::sqrt_rat(&Rat::from(disc));
            let den = Rat::new(1, 2 * c2);
            vec![
                (&QuadReal::from_int(-c1) + &sq).scale(&den),
                (&QuadReal::from_int(-c1) - &sq).scale(&den),
            ]
        }
    };
    cands.into_iter().filter(inside).collect()
}

/// Every monomial valuation on the path fixed by `F•`, as maximal closed
/// pieces in path order. Candidates come from the weight equations and are
/// each confirmed with the pushforward.
pub fn fixed_monomial_set(f: &PolyMap) -> Vec<TfSegment> {
    // (tau_lo, tau_hi) pieces
    let mut pieces: Vec<(QuadReal, QuadReal)> = Vec::new();
    for swap in [false, true] {
        let mut cuts = vec![Rat::zero(), Rat::one()];
        ties(&f.p, swap, &mut cuts);
        ties(&f.q, swap, &mut cuts);
        cuts.sort();
        cuts.dedup();
        // s -> tau
        let tau = |s: QuadReal| {
            if swap {
                &QuadReal::from_int(2) - &s
            } else {
                s
            }
        };
        for c in &cuts {
            let t = tau(QuadReal::rational(c.clone()));
            if fixed_at(f, &t) {
                pieces.push((t.clone(), t));
            }
        }
        for w in cuts.windows(2) {
            let (lo, hi) = (&w[0], &w[1]);
            let mid = (lo + hi) * Rat::new(1, 2);
            // the x-side and y-side weights along the family
            let ((a, b), (c, d)) = if swap {
                (top(&f.q, swap, &mid), top(&f.p, swap, &mid))
            } else {
                (top(&f.p, swap, &mid), top(&f.q, swap, &mid))
            };
            // (a s + b) = s (c s + d)
            let (c2, c1, c0) = (c, d - a, -b);
            if (c2, c1, c0) == (0, 0, 0) {
                let t = tau(QuadReal::rational(mid));
                if fixed_at(f, &t) {
                    let (x, y) = (tau(QuadReal::rational(lo.clone())), tau(QuadReal::rational(hi.clone())));
                    pieces.push((x.clone().min(y.clone()), x.max(y)));
                }
                continue;
            }
            for r in roots_in(c2, c1, c0, lo, hi) {
                let t = tau(r);
                if fixed_at(f, &t) {
                    pieces.push((t.clone(), t));
                }
            }
        }
    }
    pieces.sort();
    let mut merged: Vec<(QuadReal, QuadReal)> = Vec::new();
    for (lo, hi) in pieces {
        match merged.last_mut() {
            Some(last) if lo <= last.1 => {
                if hi > last.1 {
                    last.1 = hi;
                }
            }
            _ => merged.push((lo, hi)),
        }
    }
    merged
        .into_iter()
        .map(|(lo, hi)| TfSegment { lo: at(&lo), hi: at(&hi) })
        .collect()
}

/// The monomial part of `T_F`: the fixed monomial set, required to be a
/// single point or a single segment.
pub fn tf_segment(f: &PolyMap) -> Result<TfSegment, DynError> {
    let mut set = fixed_monomial_set(f);
    match set.len() {
        0 => Err(DynError::NotApplicable("no monomial valuation is fixed".into())),
        1 => Ok(set.pop().unwrap()),
        n => Err(DynError::NotApplicable(format!("fixed monomial set has {n} components"))),
    }
}

fn rational_upoly(coeffs: Vec<(usize, Rat)>) -> UPoly {
    let n = coeffs.iter().map(|(k, _)| k + 1).max().unwrap_or(0);
    let mut p = vec![Rat::zero(); n];
    for (k, c) in coeffs {
        p[k] += &c;
    }
    upoly::trimmed(p)
}

/// `H(s, t) = R_+(s^p, t^q)` restricted to a chart of the line at infinity
/// of `P(1, ..)`: `t = 1` gives a polynomial in `s`, `s = 1` one in `t`.
fn chart(h: &BiPoly, p: u32, q: u32, t_one: bool) -> Result<UPoly, DynError> {
    let mut out = Vec::new();
    for (&(i, j), c) in h.terms() {
        let c = c
            .as_rat()
            .ok_or_else(|| DynError::NotApplicable("leading parts must have rational coefficients".into()))?;
        let k = if t_one { i * p } else { j * q };
        out.push((k as usize, c.clone()));
    }
    Ok(rational_upoly(out))
}

/// Whether `F` extends holomorphically to the weighted projective plane where
/// `nu(x) = -p/q`, `nu(y) = -1` is the divisor at infinity.
///
/// The weighted leading parts are substituted as `R_+(s^p, t^q)`, which is
/// homogeneous in `(s, t)`, and tested for a common zero off the origin in
/// both affine charts of the projective line.
pub fn extends_to_weighted_p2(f: &PolyMap, p: u64, q: u64) -> Result<bool, DynError> {
    if p == 0 || q < p || p.gcd(&q) != 1 {
        return Err(DynError::BadWeights(format!("need gcd(p,q) = 1 and q >= p >= 1, got ({p},{q})")));
    }
    let (pi, qi) = (p as i64, q as i64);
    let nu = ValInfinity::monomial_rat(Rat::new(-pi, qi), Rat::from(-1))?;
    if !is_fixed(f, &nu, DEFAULT_MAX_REFINE) {
        return Err(DynError::NotAnEigenvaluation(p, q));
    }
    let (wx, wy) = (QuadReal::from_int(-pi), QuadReal::from_int(-qi));
    let pp = f.p.leading_part(&wx, &wy)?;
    let qp = f.q.leading_part(&wx, &wy)?;
    let (p32, q32) = (p as u32, q as u32);
    // t != 0
    let g = upoly::gcd(&chart(&pp, p32, q32, true)?, &chart(&qp, p32, q32, true)?);
    if upoly::degree(&g) != Some(0) {
        return Ok(false);
    }
    // the point t = 0
    let at_zero = |h: &BiPoly| -> Result<bool, DynError> {
        let c = chart(h, p32, q32, false)?;
        Ok(c.first().is_none_or(Rat::is_zero))
    };
    Ok(!(at_zero(&pp)? && at_zero(&qp)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_map;

    fn q(n: i64, d: i64) -> QuadReal {
        QuadReal::rational(Rat::new(n, d))
    }

    #[test]
    fn extension_examples() {
        let f = parse_map("P = x^2 + y; Q = y^2").unwrap();
        assert_eq!(extends_to_weighted_p2(&f, 1, 1), Ok(true));
        let g = parse_map("P = x^2; Q = x*y").unwrap();
        assert_eq!(extends_to_weighted_p2(&g, 1, 1), Ok(false));
        let h = parse_map("P = y^3; Q = x^2").unwrap();
        assert_eq!(extends_to_weighted_p2(&h, 1, 1), Err(DynError::NotAnEigenvaluation(1, 1)));
        assert!(matches!(extends_to_weighted_p2(&f, 2, 4), Err(DynError::BadWeights(_))));
    }

    #[test]
    fn weighted_extension() {
        // nu(x) = -1/2: P_+ = x^4 + y^2, Q_+ = y^4
        let f = parse_map("P = x^4 + y^2; Q = y^4").unwrap();
        assert_eq!(extends_to_weighted_p2(&f, 1, 2), Ok(true));
        let g = parse_map("P = x^4 - y^2; Q = x^4*y^2 - y^4").unwrap();
        assert_eq!(extends_to_weighted_p2(&g, 1, 2), Ok(false));
    }

    #[test]
    fn singleton_irrational() {
        let f = parse_map("P = y^2; Q = x^3").unwrap();
        let t = tf_segment(&f).unwrap();
        assert!(t.is_singleton());
        assert_eq!(t.lo, (-QuadReal::new(Rat::zero(), Rat::new(1, 3), 6), q(-1, 1)));
    }

    #[test]
    fn segment_with_two_blocks() {
        let f = parse_map("P = x^4 + y^2; Q = y^4 + x^2 + 1").unwrap();
        let t = tf_segment(&f).unwrap();
        assert_eq!(t.lo, (q(-1, 2), q(-1, 1)));
        assert_eq!(t.hi, (q(-1, 1), q(-1, 2)));
    }

    #[test]
    fn full_path_for_powers() {
        let f = parse_map("P = x^2; Q = y^2").unwrap();
        let t = tf_segment(&f).unwrap();
        assert_eq!((t.lo, t.hi), ((q(0, 1), q(-1, 1)), (q(-1, 1), q(0, 1))));
    }
}
