//! Composition truncated by a monomial weight.

use std::collections::BTreeMap;

use super::{BiPoly, PolyMap};
use crate::numeric::Coeff;

/// Integer monomial weight `i*wx + j*wy`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Weight {
    pub wx: i64,
    pub wy: i64,
}

impl Weight {
    pub fn of(&self, i: u32, j: u32) -> i64 {
        i as i64 * self.wx + j as i64 * self.wy
    }

    /// Smallest weight of a term of `r`, `None` for zero.
    pub fn min(&self, r: &BiPoly) -> Option<i64> {
        r.terms().map(|(&(i, j), _)| self.of(i, j)).min()
    }

    pub fn max(&self, r: &BiPoly) -> Option<i64> {
        r.terms().map(|(&(i, j), _)| self.of(i, j)).max()
    }
}

/// Terms of `a * b` of weight at most `t`; exact there provided `a` and `b`
/// are exact up to `t - min(b)` and `t - min(a)`.
pub fn mul_truncated(a: &BiPoly, b: &BiPoly, w: Weight, t: i64) -> BiPoly {
    let mut bs: Vec<(i64, u32, u32, &Coeff)> =
        b.terms().map(|(&(i, j), c)| (w.of(i, j), i, j, c)).collect();
    bs.sort_by_key(|e| e.0);
    let mut out: BTreeMap<(u32, u32), Coeff> = BTreeMap::new();
    for (&(i, j), ca) in a.terms() {
        let wa = w.of(i, j);
        for &(wb, bi, bj, cb) in &bs {
            if wa + wb > t {
                break;
            }
            let prod = ca * cb;
            out.entry((i + bi, j + bj))
                .and_modify(|c| *c = &*c + &prod)
                .or_insert(prod);
        }
    }
    out.retain(|_, c| !c.is_zero());
    BiPoly::from_terms(out)
}

fn keep_below(r: &BiPoly, w: Weight, t: i64) -> BiPoly {
    BiPoly::from_terms(
        r.terms()
            .filter(|(&(i, j), _)| w.of(i, j) <= t)
            .map(|(k, c)| (*k, c.clone())),
    )
}

/// Powers `base^0..=base^n`, the `k`-th exact up to weight `need[k]`.
fn powers(base: &BiPoly, need: &[Option<i64>], w: Weight) -> Vec<BiPoly> {
    let n = need.len();
    let mb = w.min(base).unwrap_or(0);
    // bound[k]: what base^k must be exact to, including later powers' needs
    let mut bound: Vec<Option<i64>> = vec![None; n];
    let mut carry: Option<i64> = None;
    for k in (0..n).rev() {
        let b = match (need[k], carry) {
            (Some(a), Some(c)) => Some(a.max(c)),
            (a, c) => a.or(c),
        };
        bound[k] = b;
        carry = b.map(|b| b - mb);
    }
    let mut out = vec![BiPoly::one()];
    for k in 1..n {
        let next = match bound[k] {
            Some(t) => mul_truncated(&out[k - 1], base, w, t),
            None => BiPoly::zero(),
        };
        out.push(next);
    }
    out
}

impl PolyMap {
    /// `R o F` restricted to terms of weight at most `t`, exactly.
    pub fn pullback_truncated(&self, r: &BiPoly, w: Weight, t: i64) -> BiPoly {
        let (Some(dx), Some(dy)) = (r.deg_x(), r.deg_y()) else {
            return BiPoly::zero();
        };
        let mp = w.min(&self.p).unwrap_or(0);
        let mq = w.min(&self.q).unwrap_or(0);
        let mut need_p: Vec<Option<i64>> = vec![None; dx as usize + 1];
        let mut row_low: Vec<Option<i64>> = vec![None; dy as usize + 1];
        for (&(i, j), _) in r.terms() {
            let b = t - j as i64 * mq;
            let slot = &mut need_p[i as usize];
            *slot = Some(slot.map_or(b, |s| s.max(b)));
            let lo = i as i64 * mp;
            let slot = &mut row_low[j as usize];
            *slot = Some(slot.map_or(lo, |s| s.min(lo)));
        }
        let need_q: Vec<Option<i64>> = row_low.iter().map(|lo| lo.map(|lo| t - lo)).collect();
        let ppow = powers(&self.p, &need_p, w);
        let qpow = powers(&self.q, &need_q, w);
        let mut rows = vec![BiPoly::zero(); dy as usize + 1];
        for (&(i, j), c) in r.terms() {
            let tj = t - j as i64 * mq;
            let row = &mut rows[j as usize];
            for (&(a, b), pc) in ppow[i as usize].terms() {
                if w.of(a, b) <= tj {
                    row.add_term(a, b, pc * c);
                }
            }
        }
        let mut out = BiPoly::zero();
        for (j, row) in rows.iter().enumerate() {
            if !row.is_zero() {
                out = &out + &mul_truncated(row, &qpow[j], w, t);
            }
        }
        keep_below(&out, w, t)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_map;

    #[test]
    fn agrees_with_full_composition_below_bound() {
        let f = parse_map("P = x*(x - y^2); Q = x + y").unwrap();
        let r = parse_map("P = (y^2 - x)^3 - x^2*y + 5*x*y; Q = 0").unwrap().p;
        let full = f.pullback(&r);
        for (wx, wy) in [(-3, -1), (-2, -1), (-6, -1), (-1, 0)] {
            let w = Weight { wx, wy };
            let lo = w.min(&full).unwrap();
            for t in lo..lo + 12 {
                assert_eq!(f.pullback_truncated(&r, w, t), keep_below(&full, w, t), "{wx} {wy} {t}");
            }
        }
    }
}
