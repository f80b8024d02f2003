//! Skewness, thinness and multiplicity read off blowup chains.

use num_bigint::BigInt;

use super::{Tail, ValError, ValInfinity};
use crate::blowup::realize::{chain, Chain};
use crate::blowup::Bracket;
use crate::numeric::{QuadReal, Rat};

/// Satellite steps taken inside the bracket of an irrational point.
const BRACKET_STEPS: usize = 6;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Invariants {
    pub alpha: QuadReal,
    pub thinness: QuadReal,
    /// Multiplicity on the segment just below the valuation.
    pub multiplicity: BigInt,
    /// Depth of the truncation when the datum only approximates an
    /// infinitely singular valuation.
    pub truncated: Option<usize>,
}

fn rq(r: &Rat) -> QuadReal {
    QuadReal::rational(r.clone())
}

fn ratio_to_int(num: &Rat, den: &Rat) -> Result<BigInt, ValError> {
    let m = num / den;
    if !m.is_integer() || !m.is_positive() {
        return Err(ValError::Inconsistent(format!("multiplicity {m} is not a positive integer")));
    }
    Ok(m.numer().clone())
}

/// Affine interpolation of skewness and thinness at `t` inside a bracket.
fn interpolate(b: &Bracket, t: &QuadReal) -> (QuadReal, QuadReal, Rat, Rat) {
    let (lo, hi) = (b.graph.get(b.lo.id).unwrap(), b.graph.get(b.hi.id).unwrap());
    let span = &b.hi.t - &b.lo.t;
    let s = &(t - &rq(&b.lo.t)) / &rq(&span);
    let d_alpha = &hi.alpha - &lo.alpha;
    let d_a = &hi.thinness - &lo.thinness;
    let alpha = &rq(&lo.alpha) + &(&s * &rq(&d_alpha));
    let a = &rq(&lo.thinness) + &(&s * &rq(&d_a));
    (alpha, a, d_alpha, d_a)
}

/// `(alpha, A, m)` of `v`, plus a truncation flag.
pub fn invariants(v: &ValInfinity) -> Result<Invariants, ValError> {
    let truncated = match v.tail() {
        Tail::Curve => return Err(ValError::CurveValuation),
        Tail::Truncated(d) => Some(d),
        Tail::Generic => None,
    };
    let top = v.levels().len() - 1;
    let t = v.levels()[top].value.expect_fin().clone();
    // a rational value is always reached
    let limit = if t.is_rational() { usize::MAX } else { BRACKET_STEPS };
    match chain(v, limit)? {
        Chain::Hit(r) => {
            let rec = r.graph.get(r.target).unwrap();
            let multiplicity = match r.lower {
                None => BigInt::from(1),
                Some(lo) => {
                    let lo = r.graph.get(lo).unwrap();
                    ratio_to_int(&(&rec.thinness - &lo.thinness), &(&lo.alpha - &rec.alpha))?
                }
            };
            Ok(Invariants {
                alpha: rq(&rec.alpha),
                thinness: rq(&rec.thinness),
                multiplicity,
                truncated,
            })
        }
        Chain::Bracket(b) => {
            let (alpha, thinness, da, dth) = interpolate(&b, &t);
            let m = ratio_to_int(&dth, &-da)?;
            // a finer bracket must give the same slope
            let Chain::Bracket(b2) = chain(v, BRACKET_STEPS + 1)? else {
                return Err(ValError::Inconsistent("irrational point was hit".into()));
            };
            let (_, _, da2, dth2) = interpolate(&b2, &t);
            if ratio_to_int(&dth2, &-da2)? != m {
                return Err(ValError::Inconsistent("multiplicity did not stabilize".into()));
            }
            Ok(Invariants { alpha, thinness, multiplicity: m, truncated })
        }
    }
}

impl ValInfinity {
    pub fn invariants(&self) -> Result<Invariants, ValError> {
        invariants(self)
    }

    /// Skewness at least zero and thinness at most zero.
    pub fn in_v1(&self) -> Result<bool, ValError> {
        let inv = invariants(self)?;
        Ok(inv.alpha.signum() >= 0 && inv.thinness.signum() <= 0)
    }

    pub fn is_rational_pencil(&self) -> Result<bool, ValError> {
        if !self.is_divisorial() {
            return Err(ValError::NotDivisorial);
        }
        let inv = invariants(self)?;
        Ok(inv.alpha.signum() == 0 && inv.thinness.signum() < 0)
    }

    /// `A + m alpha < 0`.
    pub fn is_monomializable(&self) -> Result<bool, ValError> {
        let inv = invariants(self)?;
        let m = QuadReal::rational(Rat::from_int(inv.multiplicity));
        Ok((&inv.thinness + &(&m * &inv.alpha)).signum() < 0)
    }
}
