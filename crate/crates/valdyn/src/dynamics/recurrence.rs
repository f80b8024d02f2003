//! Integer linear recurrences of degree sequences.

use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{ToPrimitive, Zero};

use super::DynError;
use crate::numeric::upoly::{self, UPoly};
use crate::numeric::{MinPoly, QuadReal, Rat};

/// `a_j = sum_i coeffs[i-1] a_{j-i}` for `j >= offset + order`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Recurrence {
    pub order: usize,
    pub coeffs: Vec<BigInt>,
    pub offset: usize,
    /// `x^k - c_1 x^{k-1} - ... - c_k`, constant term first.
    pub char_poly: Vec<BigInt>,
    pub dominant_root: QuadReal,
    /// How often the minimal polynomial of the dominant root divides the
    /// characteristic polynomial.
    pub dominant_multiplicity: usize,
    pub min_poly: MinPoly,
    /// Last index checked.
    pub validated_through: usize,
}

impl Recurrence {
    pub fn predict(&self, prefix: &[BigInt]) -> BigInt {
        let j = prefix.len();
        self.coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| c * &prefix[j - 1 - i])
            .sum()
    }

    /// `a[j] = 1*a[j-1] + 1*a[j-2] + 2*a[j-3]`.
    pub fn formula(&self) -> String {
        let mut s = String::from("a[j] =");
        for (i, c) in self.coeffs.iter().enumerate() {
            let neg = c < &BigInt::zero();
            let mag = if neg { -c } else { c.clone() };
            let sep = match (i, neg) {
                (0, false) => " ",
                (0, true) => " -",
                (_, false) => " + ",
                (_, true) => " - ",
            };
            s += &format!("{sep}{mag}*a[j-{}]", i + 1);
        }
        s
    }
}

impl fmt::Display for Recurrence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.formula())
    }
}

/// Solves `m c = rhs` exactly; `None` unless the solution exists and is unique.
fn solve(mut m: Vec<Vec<Rat>>, mut rhs: Vec<Rat>) -> Option<Vec<Rat>> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    let mut pivots = Vec::new();
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        rhs.swap(r, p);
        let inv = m[r][c].recip();
        for k in c..cols {
            m[r][k] = &m[r][k] * &inv;
        }
        rhs[r] = &rhs[r] * &inv;
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for k in c..cols {
                    let t = &m[r][k] * &f;
                    m[i][k] = &m[i][k] - &t;
                }
                let t = &rhs[r] * &f;
                rhs[i] = &rhs[i] - &t;
            }
        }
        pivots.push(c);
        r += 1;
    }
    if pivots.len() < cols || rhs[r..].iter().any(|x| !x.is_zero()) {
        return None;
    }
    Some(rhs[..cols].to_vec())
}

fn fit(seq: &[BigInt], k: usize, offset: usize) -> Option<Vec<BigInt>> {
    let rows: Vec<usize> = (offset + k..seq.len()).collect();
    if rows.len() < k + 1 {
        return None;
    }
    let m = rows
        .iter()
        .map(|&j| (1..=k).map(|i| Rat::from_int(seq[j - i].clone())).collect())
        .collect();
    let rhs = rows.iter().map(|&j| Rat::from_int(seq[j].clone())).collect();
    let c = solve(m, rhs)?;
    c.iter().map(Rat::to_integer).collect()
}

/// Roots of a polynomial with real coefficients (Durand-Kerner), used only to
/// locate candidates that are then confirmed exactly.
fn approx_roots(p: &[f64]) -> Vec<Complex64> {
    let n = p.len() - 1;
    let lead = p[n];
    let monic: Vec<f64> = p.iter().map(|c| c / lead).collect();
    let eval = |z: Complex64| monic.iter().rev().fold(Complex64::zero(), |acc, &c| acc * z + c);
    let mut roots: Vec<Complex64> = (0..n).map(|i| Complex64::new(0.4, 0.9).powu(i as u32)).collect();
    for _ in 0..500 {
        let mut delta: f64 = 0.0;
        for i in 0..n {
            let zi = roots[i];
            let denom = (0..n).filter(|&j| j != i).fold(Complex64::new(1.0, 0.0), |acc, j| acc * (zi - roots[j]));
            let step = eval(zi) / denom;
            roots[i] = zi - step;
            delta = delta.max(step.norm());
        }
        if delta < 1e-14 {
            break;
        }
    }
    roots
}

fn to_upoly(p: &[BigInt]) -> UPoly {
    p.iter().map(|c| Rat::from_int(c.clone())).collect()
}

/// Largest real root in absolute value as an exact quadratic surd, with its
/// minimal polynomial.
fn dominant_root(char_poly: &[BigInt]) -> Result<(QuadReal, MinPoly), DynError> {
    let p = to_upoly(char_poly);
    let fp: Vec<f64> = char_poly.iter().map(|c| c.to_f64().unwrap_or(f64::NAN)).collect();
    let mut roots = approx_roots(&fp);
    roots.sort_by(|a, b| b.norm().total_cmp(&a.norm()).then(b.re.total_cmp(&a.re)));
    let top = roots[0];
    let tol = 1e-6 * (1.0 + top.norm());
    if top.im.abs() > tol {
        return Err(DynError::Inconclusive(format!("dominant root {top} is not real")));
    }
    let n = top.re.round();
    if (top.re - n).abs() < tol && upoly::eval(&p, &Rat::from(n as i64)).is_zero() {
        let r = QuadReal::from_int(n as i64);
        return Ok((r.clone(), r.min_poly()));
    }
    for other in &roots[1..] {
        if other.im.abs() > tol {
            continue;
        }
        let (s, q) = ((top.re + other.re).round(), (top.re * other.re).round());
        // x^2 - s x + q
        let quad: UPoly = vec![Rat::from(q as i64), Rat::from(-(s as i64)), Rat::one()];
        if !upoly::divrem(&p, &quad).1.is_empty() {
            continue;
        }
        let disc = Rat::from((s * s - 4.0 * q) as i64);
        let sq = QuadReal::sqrt_rat(&disc);
        let half = Rat::new(1, 2);
        let plus = (&QuadReal::from_int(s as i64) + &sq).scale(&half);
        let minus = (&QuadReal::from_int(s as i64) - &sq).scale(&half);
        let r = if (plus.to_f64() - top.re).abs() <= (minus.to_f64() - top.re).abs() { plus } else { minus };
        let mp = r.min_poly();
        return Ok((r, mp));
    }
    Err(DynError::Inconclusive(format!("dominant root {} is not a quadratic surd", top.re)))
}

fn multiplicity(p: &[BigInt], mp: &MinPoly) -> usize {
    let mut p = to_upoly(p);
    let mut k = 0;
    loop {
        let (q, r) = upoly::divrem(&p, &mp.coeffs);
        if !r.is_empty() {
            return k;
        }
        p = q;
        k += 1;
    }
}

/// The minimal-order integer recurrence of `seq`, allowing a start offset of at
/// most `max_order`.
pub fn detect_recurrence(seq: &[BigInt], max_order: usize) -> Result<Recurrence, DynError> {
    if max_order == 0 || seq.len() < 2 * max_order + 2 {
        return Err(DynError::SequenceTooShort { len: seq.len(), max_order });
    }
    for k in 1..=max_order {
        for offset in 0..=max_order {
            let Some(coeffs) = fit(seq, k, offset) else {
                continue;
            };
            if coeffs.last().is_some_and(Zero::is_zero) {
                // a lower order would fit with a larger offset
                continue;
            }
            let mut char_poly: Vec<BigInt> = coeffs.iter().rev().map(|c| -c).collect();
            char_poly.push(BigInt::from(1));
            let (dominant_root, min_poly) = dominant_root(&char_poly)?;
            let dominant_multiplicity = multiplicity(&char_poly, &min_poly);
            return Ok(Recurrence {
                order: k,
                coeffs,
                offset,
                char_poly,
                dominant_root,
                dominant_multiplicity,
                min_poly,
                validated_through: seq.len() - 1,
            });
        }
    }
    Err(DynError::NoRecurrenceFound(max_order))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn example_five_three() {
        let r = detect_recurrence(&big(&[1, 3, 6, 11, 23, 46, 91, 183]), 3).unwrap();
        assert_eq!(r.order, 3);
        assert_eq!(r.coeffs, big(&[1, 1, 2]));
        assert_eq!(r.dominant_root, QuadReal::from_int(2));
        assert_eq!(r.formula(), "a[j] = 1*a[j-1] + 1*a[j-2] + 2*a[j-3]");
    }

    #[test]
    fn geometric() {
        let r = detect_recurrence(&big(&[1, 2, 4, 8, 16]), 1).unwrap();
        assert_eq!((r.order, r.coeffs.clone()), (1, big(&[2])));
        assert_eq!(r.dominant_root, QuadReal::from_int(2));
    }

    #[test]
    fn double_root() {
        let r = detect_recurrence(&big(&[1, 3, 8, 20, 48, 112]), 2).unwrap();
        assert_eq!(r.coeffs, big(&[4, -4]));
        assert_eq!(r.dominant_root, QuadReal::from_int(2));
        assert_eq!(r.dominant_multiplicity, 2);
        assert_eq!(r.formula(), "a[j] = 4*a[j-1] - 4*a[j-2]");
    }

    #[test]
    fn surd_root() {
        // a_j = 2 a_{j-1} + a_{j-2}: root 1 + sqrt(2)
        let r = detect_recurrence(&big(&[1, 3, 7, 17, 41, 99, 239]), 2).unwrap();
        assert_eq!(r.dominant_root, QuadReal::new(Rat::one(), Rat::one(), 2));
        assert!(r.min_poly.is_integral());
    }

    #[test]
    fn too_short_and_missing() {
        assert!(matches!(detect_recurrence(&big(&[1, 2, 3]), 2), Err(DynError::SequenceTooShort { .. })));
        let noisy = big(&[1, 5, 2, 9, 3, 14, 1, 27, 8, 3]);
        assert_eq!(detect_recurrence(&noisy, 2), Err(DynError::NoRecurrenceFound(2)));
    }
}
