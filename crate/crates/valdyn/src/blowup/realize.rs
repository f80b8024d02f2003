//! Blowup chains realizing a valuation.
//!
//! Along the segment of key `k` the value `t = nu(phi_k)` is the natural
//! parameter: a free blowup on a prime at `t` lands at `t + D/b^2` (`D` the
//! degree of the key) and a satellite blowup lands at the `b`-weighted mean.
//! Skewness and thinness are affine in `t` on each segment.

use super::{DualGraph, PrimeId};
use crate::numeric::{QuadReal, Rat};
use crate::valtree::{Tail, Val, ValError, ValInfinity};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Placement {
    pub id: PrimeId,
    /// Index of the key whose value parametrizes the segment.
    pub piece: usize,
    pub t: Rat,
}

#[derive(Clone, Debug)]
pub struct Realization {
    pub graph: DualGraph,
    pub target: PrimeId,
    /// Every prime created, in order; the root is not listed.
    pub path: Vec<Placement>,
    /// The neighbor on the root side when the target was created.
    pub lower: Option<PrimeId>,
}

/// Two primes enclosing an irrational point on its last segment.
#[derive(Clone, Debug)]
pub struct Bracket {
    pub graph: DualGraph,
    pub lo: Placement,
    pub hi: Placement,
    pub path: Vec<Placement>,
}

pub(crate) enum Chain {
    Hit(Realization),
    Bracket(Bracket),
}

enum Walk {
    Hit { id: PrimeId, lower: Option<PrimeId> },
    Bracket { lo: Placement, hi: Placement },
}

struct Walker<'a> {
    g: DualGraph,
    path: &'a mut Vec<Placement>,
}

impl Walker<'_> {
    /// Walks one segment from `start` towards `target`, stopping after
    /// `limit` satellite steps once the target is bracketed.
    fn walk(&mut self, piece: usize, start: PrimeId, t_s: Rat, d: &Rat, target: &QuadReal, limit: usize) -> Walk {
        let mut lo = Placement { id: start, piece, t: t_s };
        if QuadReal::rational(lo.t.clone()) == *target {
            return Walk::Hit { id: start, lower: None };
        }
        let mut hi: Option<Placement> = None;
        let mut steps = 0;
        loop {
            if let Some(h) = &hi {
                if steps >= limit {
                    return Walk::Bracket { lo, hi: h.clone() };
                }
                steps += 1;
            }
            let b_lo = Rat::from_int(self.g.records[lo.id].b.clone());
            let (g, id, t) = match &hi {
                None => {
                    let (g, id) = self.g.blowup_free(lo.id).expect("prime exists");
                    (g, id, &lo.t + &(d / &(&b_lo * &b_lo)))
                }
                Some(h) => {
                    let b_hi = Rat::from_int(self.g.records[h.id].b.clone());
                    let (g, id) = self.g.blowup_satellite(lo.id, h.id).expect("adjacent bracket");
                    let t = (&b_lo * &lo.t + &b_hi * &h.t) / (&b_lo + &b_hi);
                    (g, id, t)
                }
            };
            self.g = g;
            let p = Placement { id, piece, t };
            self.path.push(p.clone());
            match QuadReal::rational(p.t.clone()).cmp(target) {
                std::cmp::Ordering::Equal => return Walk::Hit { id, lower: Some(lo.id) },
                std::cmp::Ordering::Less => lo = p,
                std::cmp::Ordering::Greater => hi = Some(p),
            }
        }
    }
}

/// Walks every segment of `v`; the last one stops at the target or, for an
/// irrational value, after `limit` satellite steps.
pub(crate) fn chain(v: &ValInfinity, limit: usize) -> Result<Chain, ValError> {
    if v.tail() == Tail::Curve {
        return Err(ValError::CurveValuation);
    }
    let mut path = Vec::new();
    let mut w = Walker { g: DualGraph::new(), path: &mut path };
    let mut start = DualGraph::ROOT;
    let top = v.levels().len() - 1;
    for (k, level) in v.levels().iter().enumerate() {
        let Val::Fin(target) = &level.value else {
            return Err(ValError::CurveValuation);
        };
        let t_s = v.segment_start(k).as_rational().expect("rational segment start").clone();
        let d = Rat::from(v.key_degree(k) as i64);
        let lim = if k == top { limit } else { usize::MAX };
        match w.walk(k, start, t_s, &d, target, lim) {
            Walk::Hit { id, lower } if k == top => {
                let graph = w.g;
                return Ok(Chain::Hit(Realization { graph, target: id, path, lower }));
            }
            Walk::Hit { id, .. } => start = id,
            Walk::Bracket { lo, hi } => {
                let graph = w.g;
                return Ok(Chain::Bracket(Bracket { graph, lo, hi, path }));
            }
        }
    }
    unreachable!("the top segment always returns")
}

/// The chain of free and satellite blowups whose last prime carries `v`.
pub fn realize_divisorial(v: &ValInfinity) -> Result<Realization, ValError> {
    if !v.is_divisorial() {
        return Err(ValError::NotDivisorial);
    }
    match chain(v, usize::MAX)? {
        Chain::Hit(r) => Ok(r),
        Chain::Bracket(_) => Err(ValError::NotDivisorial),
    }
}

/// Intersection number of the classes of `v` and `w`: the skewness of their
/// meet.
pub fn intersect(v: &ValInfinity, w: &ValInfinity) -> Result<QuadReal, ValError> {
    let (_, m) = v.meet(w);
    Ok(crate::valtree::invariants(&m)?.alpha)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn mono(wx: (i64, i64), wy: (i64, i64)) -> ValInfinity {
        ValInfinity::monomial_rat(Rat::new(wx.0, wx.1), Rat::new(wy.0, wy.1)).unwrap()
    }

    #[test]
    fn realize_half() {
        let r = realize_divisorial(&mono((-1, 2), (-1, 1))).unwrap();
        assert_eq!(r.path.len(), 2);
        let rec = r.graph.get(r.target).unwrap();
        assert_eq!((rec.b.clone(), rec.a.clone()), (BigInt::from(2), BigInt::from(-3)));
    }

    #[test]
    fn realize_root_is_empty() {
        let r = realize_divisorial(&ValInfinity::root()).unwrap();
        assert!(r.path.is_empty());
        assert_eq!(r.target, DualGraph::ROOT);
    }

    #[test]
    fn realize_third() {
        let r = realize_divisorial(&mono((-1, 3), (-1, 1))).unwrap();
        assert_eq!(r.path.len(), 3);
        let rec = r.graph.get(r.target).unwrap();
        assert_eq!((rec.b.clone(), rec.a.clone()), (BigInt::from(3), BigInt::from(-4)));
    }

    #[test]
    fn intersections() {
        let a = mono((-1, 3), (-1, 1));
        let b = mono((-1, 2), (-1, 1));
        assert_eq!(intersect(&a, &b).unwrap(), QuadReal::rational(Rat::new(1, 2)));
        assert_eq!(intersect(&a, &a).unwrap(), QuadReal::rational(Rat::new(1, 3)));
        assert_eq!(intersect(&ValInfinity::root(), &a).unwrap(), QuadReal::one());
    }
}
