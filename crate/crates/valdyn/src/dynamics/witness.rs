//! Divisorial witnesses of non-properness.

use num_integer::Integer;

use super::d_of;
use crate::numeric::Rat;
use crate::poly::PolyMap;
use crate::valtree::ValInfinity;

/// First monomial valuation with `d(F, nu) = 0` among weights `(±p/q, -1)`
/// and `(-1, ±p/q)` with `q <= bound` and `p <= bound * q`. `None` proves
/// nothing.
pub fn non_properness_witness(f: &PolyMap, bound: u64) -> Option<ValInfinity> {
    let minus_one = Rat::from(-1);
    for q in 1..=bound {
        for p in 0..=bound * q {
            if p.gcd(&q) != 1 {
                continue;
            }
            let w = Rat::new(p as i64, q as i64);
            let signs: &[Rat] = if p == 0 { &[Rat::zero()][..] } else { &[w.clone(), -&w][..] };
            for s in signs {
                for (wx, wy) in [(s.clone(), minus_one.clone()), (minus_one.clone(), s.clone())] {
                    let Ok(v) = ValInfinity::monomial_rat(wx, wy) else {
                        continue;
                    };
                    if d_of(f, &v).is_zero() {
                        return Some(v);
                    }
                }
            }
        }
    }
    None
}
