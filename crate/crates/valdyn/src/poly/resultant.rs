use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{BiPoly, PolyError, PolyMap};
use crate::numeric::upoly::{self, UPoly};
use crate::numeric::{Coeff, Rat};

pub const DEFAULT_SEED: u64 = 20_240_531;

const TRIALS: usize = 3;

/// Coefficients of `r` as a polynomial in `y` over `Q[x]`, lowest first.
/// Panics on non-rational coefficients.
fn y_rows(r: &BiPoly) -> Vec<UPoly> {
    let dy = r.deg_y().map_or(0, |d| d as usize + 1);
    let mut rows: Vec<UPoly> = vec![Vec::new(); dy];
    for (&(i, j), c) in r.terms() {
        let row = &mut rows[j as usize];
        if row.len() <= i as usize {
            row.resize(i as usize + 1, Rat::zero());
        }
        row[i as usize] = c.as_rat().expect("resultants need rational coefficients").clone();
    }
    rows.into_iter().map(upoly::trimmed).collect()
}

/// Determinant of a square matrix over `Q[x]` by Bareiss elimination.
fn bareiss(mut m: Vec<Vec<UPoly>>) -> UPoly {
    let n = m.len();
    if n == 0 {
        return vec![Rat::one()];
    }
    let mut sign = false;
    let mut prev: UPoly = vec![Rat::one()];
    for k in 0..n - 1 {
        if m[k][k].is_empty() {
            let Some(swap) = (k + 1..n).find(|&i| !m[i][k].is_empty()) else {
                return Vec::new();
            };
            m.swap(k, swap);
            sign = !sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = upoly::sub(&upoly::mul(&m[i][j], &m[k][k]), &upoly::mul(&m[i][k], &m[k][j]));
                let (q, r) = upoly::divrem(&num, &prev);
                debug_assert!(r.is_empty(), "Bareiss division must be exact");
                m[i][j] = q;
            }
            m[i][k] = Vec::new();
        }
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    if sign {
        upoly::scale(&det, &Rat::from(-1))
    } else {
        det
    }
}

/// `Res_y(a, b)` as a polynomial in `x`, via the Sylvester matrix.
pub fn resultant_y(a: &BiPoly, b: &BiPoly) -> UPoly {
    let (ra, rb) = (y_rows(a), y_rows(b));
    if ra.is_empty() || rb.is_empty() {
        return Vec::new();
    }
    let (m, n) = (ra.len() - 1, rb.len() - 1);
    if m + n == 0 {
        return vec![Rat::one()];
    }
    let size = m + n;
    let mut mat = vec![vec![Vec::new(); size]; size];
    for row in 0..n {
        for (k, c) in ra.iter().rev().enumerate() {
            mat[row][row + k] = c.clone();
        }
    }
    for row in 0..m {
        for (k, c) in rb.iter().rev().enumerate() {
            mat[n + row][row + k] = c.clone();
        }
    }
    bareiss(mat)
}

fn shear(r: &BiPoly, c: i64) -> BiPoly {
    let xs = &BiPoly::x() + &BiPoly::monomial(Coeff::from(c), 0, 1);
    r.substitute(&xs, &BiPoly::y())
}

/// The `y`-leading coefficient is a nonzero constant.
fn y_monic_up_to_scalar(r: &BiPoly) -> bool {
    let rows = y_rows(r);
    rows.last().is_some_and(|top| top.len() == 1)
}

fn random_target(rng: &mut ChaCha8Rng) -> Rat {
    Rat::new(rng.gen_range(-40i64..=40), rng.gen_range(1i64..=7))
}

/// Number of preimages of a generic point, as the `x`-degree of
/// `Res_y(P' - a, Q' - b)` after a random shear `(x, y) -> (x + c y, y)`.
pub fn topological_degree(f: &PolyMap, seed: u64) -> Result<usize, PolyError> {
    if !f.is_dominant() {
        return Err(PolyError::NonDominant);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut found = Vec::new();
    let mut zero_trials = 0;
    while found.len() + zero_trials < TRIALS {
        let c = loop {
            let c = rng.gen_range(1i64..=97);
            let (p, q) = (shear(&f.p, c), shear(&f.q, c));
            if y_monic_up_to_scalar(&p) && y_monic_up_to_scalar(&q) {
                break (c, p, q);
            }
        };
        let (_, p, q) = c;
        let a = BiPoly::constant(Coeff::from(random_target(&mut rng)));
        let b = BiPoly::constant(Coeff::from(random_target(&mut rng)));
        let res = resultant_y(&(&p - &a), &(&q - &b));
        match upoly::degree(&res) {
            Some(d) => found.push(d),
            None => zero_trials += 1,
        }
    }
    if found.is_empty() {
        return Err(PolyError::NonDominant);
    }
    if found.iter().all(|&d| d == found[0]) && zero_trials == 0 {
        Ok(found[0])
    } else {
        Err(PolyError::Unstable(found))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_map;

    #[test]
    fn fixture_degrees() {
        let cases = [
            ("P = x*(x - y^2); Q = x + y", 3),
            ("P = x^2; Q = y^2", 4),
            ("P = y; Q = y^2 - x", 1),
            ("P = x; Q = y", 1),
        ];
        for (text, want) in cases {
            let f = parse_map(text).unwrap();
            assert_eq!(topological_degree(&f, DEFAULT_SEED).unwrap(), want, "{text}");
        }
    }

    #[test]
    fn non_dominant_rejected() {
        let f = parse_map("P = x + y; Q = (x + y)^2").unwrap();
        assert_eq!(topological_degree(&f, 1), Err(PolyError::NonDominant));
    }

    #[test]
    fn resultant_of_lines() {
        // Res_y(y - x, y + x) = 2x up to sign
        let a = &BiPoly::y() - &BiPoly::x();
        let b = &BiPoly::y() + &BiPoly::x();
        let r = resultant_y(&a, &b);
        assert_eq!(upoly::degree(&r), Some(1));
    }
}
