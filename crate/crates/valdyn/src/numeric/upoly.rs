//! Dense univariate polynomials over the rationals, coefficients stored from
//! the constant term upwards. Used for field extensions, characteristic
//! polynomials and chart dehomogenizations.

use super::Rat;

pub type UPoly = Vec<Rat>;

pub fn trim(p: &mut UPoly) {
    while p.last().is_some_and(Rat::is_zero) {
        p.pop();
    }
}

pub fn trimmed(mut p: UPoly) -> UPoly {
    trim(&mut p);
    p
}

/// Degree, or `None` for the zero polynomial.
pub fn degree(p: &[Rat]) -> Option<usize> {
    p.iter().rposition(|c| !c.is_zero())
}

pub fn add(a: &[Rat], b: &[Rat]) -> UPoly {
    let n = a.len().max(b.len());
    let out = (0..n)
        .map(|i| match (a.get(i), b.get(i)) {
            (Some(x), Some(y)) => x + y,
            (Some(x), None) => x.clone(),
            (None, Some(y)) => y.clone(),
            (None, None) => Rat::zero(),
        })
        .collect();
    trimmed(out)
}

pub fn scale(a: &[Rat], k: &Rat) -> UPoly {
    trimmed(a.iter().map(|c| c * k).collect())
}

pub fn sub(a: &[Rat], b: &[Rat]) -> UPoly {
    add(a, &scale(b, &Rat::from(-1)))
}

pub fn mul(a: &[Rat], b: &[Rat]) -> UPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Rat::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += &(x * y);
        }
    }
    trimmed(out)
}

/// Quotient and remainder of `a` by a nonzero `b`.
pub fn divrem(a: &[Rat], b: &[Rat]) -> (UPoly, UPoly) {
    let db = degree(b).expect("division by the zero polynomial");
    let lead = b[db].clone();
    let mut rem = trimmed(a.to_vec());
    let mut quo = vec![Rat::zero(); rem.len().saturating_sub(db).max(1)];
    while let Some(dr) = degree(&rem) {
        if dr < db {
            break;
        }
        let c = &rem[dr] / &lead;
        let shift = dr - db;
        for (i, bc) in b.iter().enumerate().take(db + 1) {
            let t = &c * bc;
            rem[i + shift] -= &t;
        }
        quo[shift] = c;
        trim(&mut rem);
    }
    (trimmed(quo), rem)
}

pub fn monic(a: &[Rat]) -> UPoly {
    match degree(a) {
        None => Vec::new(),
        Some(d) => scale(a, &a[d].recip()),
    }
}

pub fn gcd(a: &[Rat], b: &[Rat]) -> UPoly {
    let (mut x, mut y) = (trimmed(a.to_vec()), trimmed(b.to_vec()));
    while !y.is_empty() {
        let (_, r) = divrem(&x, &y);
        x = y;
        y = r;
    }
    monic(&x)
}

/// Returns `(g, s)` with `s*a = g (mod m)` and `g = gcd(a, m)` monic.
pub fn inverse_mod(a: &[Rat], m: &[Rat]) -> Option<UPoly> {
    let (mut r0, mut r1) = (trimmed(m.to_vec()), trimmed(a.to_vec()));
    let (mut s0, mut s1): (UPoly, UPoly) = (Vec::new(), vec![Rat::one()]);
    while !r1.is_empty() {
        let (q, r) = divrem(&r0, &r1);
        let s2 = sub(&s0, &mul(&q, &s1));
        r0 = r1;
        r1 = r;
        s0 = s1;
        s1 = s2;
    }
    if degree(&r0) != Some(0) {
        return None;
    }
    let inv = scale(&s0, &r0[0].recip());
    Some(divrem(&inv, m).1)
}

pub fn eval(p: &[Rat], x: &Rat) -> Rat {
    p.iter().rev().fold(Rat::zero(), |acc, c| acc * x + c)
}

pub fn eval_f64(p: &[Rat], x: f64) -> f64 {
    p.iter().rev().fold(0.0, |acc, c| acc * x + c.to_f64())
}

pub fn derivative(p: &[Rat]) -> UPoly {
    trimmed(
        p.iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * Rat::from(i as i64))
            .collect(),
    )
}

/// Resultant of two univariate polynomials via the Euclidean remainder
/// sequence (exact over the rationals). Zero if they share a root.
pub fn resultant(a: &[Rat], b: &[Rat]) -> Rat {
    let (Some(mut da), Some(mut db)) = (degree(a), degree(b)) else {
        return Rat::zero();
    };
    let mut a = trimmed(a.to_vec());
    let mut b = trimmed(b.to_vec());
    let mut acc = Rat::one();
    loop {
        if db == 0 {
            return acc * b[0].pow(da as i32);
        }
        let (_, r) = divrem(&a, &b);
        let Some(dr) = degree(&r) else {
            return Rat::zero();
        };
        // res(a,b) = (-1)^{da db} lc(b)^{da - dr} res(b, r)
        if da * db % 2 == 1 {
            acc = -acc;
        }
        acc = acc * b[db].pow((da - dr) as i32);
        a = b;
        b = r;
        da = db;
        db = dr;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(v: &[i64]) -> UPoly {
        v.iter().map(|&x| Rat::from(x)).collect()
    }

    #[test]
    fn divrem_reconstructs() {
        let a = p(&[-2, 0, 0, 1]);
        let b = p(&[1, 1]);
        let (q, r) = divrem(&a, &b);
        assert_eq!(add(&mul(&q, &b), &r), trimmed(a));
    }

    #[test]
    fn inverse_mod_sqrt2() {
        let m = p(&[-2, 0, 1]);
        let a = p(&[1, 1]);
        let inv = inverse_mod(&a, &m).unwrap();
        let prod = divrem(&mul(&a, &inv), &m).1;
        assert_eq!(prod, p(&[1]));
    }

    #[test]
    fn resultant_detects_common_root() {
        assert!(resultant(&p(&[-1, 1]), &p(&[-1, 0, 1])).is_zero());
        // res(x - 2, x^2 + 1) = 5
        assert_eq!(resultant(&p(&[-2, 1]), &p(&[1, 0, 1])), Rat::from(5));
    }
}
