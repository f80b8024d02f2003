//! The induced action of a map on valuations.

use super::DynError;
use crate::numeric::{Coeff, QuadReal, Rat};
use crate::poly::{BiPoly, PolyMap, Weight};
use num_integer::Integer;

use crate::valtree::{discover, Lead, Oracle, Val, ValError, ValInfinity};

/// `d(F, nu) = -min(nu(P), nu(Q), 0)`.
pub fn d_of(f: &PolyMap, v: &ValInfinity) -> QuadReal {
    let m = [v.value(&f.p), v.value(&f.q), Val::Fin(QuadReal::zero())]
        .into_iter()
        .min()
        .expect("nonempty");
    -m.expect_fin().clone()
}

struct PushOracle<'a> {
    f: &'a PolyMap,
    nu: &'a ValInfinity,
    d: QuadReal,
    /// Monomial weight of the first level scaled to integers, with the scale.
    weight: Option<(Weight, i64)>,
}

/// `nu` dominates the monomial valuation of its first level, so terms of
/// large enough weight cannot reach the initial form.
fn base_weight(nu: &ValInfinity) -> Option<(Weight, i64)> {
    let (vx, vy) = nu.weights();
    let (Val::Fin(x), Val::Fin(y)) = (vx, vy) else {
        return None;
    };
    let (x, y) = (x.as_rational()?.clone(), y.as_rational()?.clone());
    let q = Rat::from_int(x.denom().lcm(y.denom()));
    let scaled = |r: Rat| (r * &q).to_i64();
    Some((Weight { wx: scaled(x)?, wy: scaled(y)? }, q.to_i64()?))
}

impl PushOracle<'_> {
    fn lead_of_pullback(&self, r: &BiPoly) -> Lead {
        let Some((w, q)) = self.weight else {
            return self.nu.lead(&self.f.pullback(r));
        };
        let bounds = |pick: fn(&Weight, &BiPoly) -> Option<i64>, fold: fn(i64, i64) -> i64| {
            let (bp, bq) = (pick(&w, &self.f.p).unwrap_or(0), pick(&w, &self.f.q).unwrap_or(0));
            r.terms()
                .map(|(&(i, j), _)| i as i64 * bp + j as i64 * bq)
                .reduce(fold)
                .unwrap_or(0)
        };
        let lo = bounds(Weight::min, i64::min);
        let hi = bounds(Weight::max, i64::max);
        let mut margin = q;
        loop {
            let t = lo + margin;
            let s = self.f.pullback_truncated(r, w, t);
            let lead = self.nu.lead(&s);
            let settled = match &lead.value {
                Val::Fin(v) => *v <= QuadReal::rational(Rat::new(t, q)),
                Val::Inf => false,
            };
            if settled || t >= hi {
                return lead;
            }
            margin *= 2;
        }
    }
}

impl Oracle for PushOracle<'_> {
    type Lead = Lead;

    fn probe(&self, r: &BiPoly) -> (Val, Lead) {
        let lead = self.lead_of_pullback(r);
        let v = match &lead.value {
            Val::Fin(q) => Val::Fin(q / &self.d),
            Val::Inf => Val::Inf,
        };
        (v, lead)
    }

    fn ratio(&self, a: &Lead, b: &Lead) -> Option<Coeff> {
        a.ratio(b)
    }
}

/// `F•nu = F_*nu / d(F, nu)`.
pub fn pushforward(f: &PolyMap, v: &ValInfinity, max_refine: usize) -> Result<ValInfinity, DynError> {
    let d = d_of(f, v);
    if d.signum() <= 0 {
        return Err(ValError::DegenerateImage.into());
    }
    let o = PushOracle { f, nu: v, d, weight: base_weight(v) };
    let mut out = discover(&o, max_refine)?;
    if v.is_truncated() && !out.is_truncated() {
        let depth = out.levels().len();
        out.set_tail(crate::valtree::Tail::Truncated(depth));
    }
    Ok(out)
}

/// Both sides of `A(nu) + nu(JF) = d(F, nu) A(F•nu)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JacobianCheck {
    pub lhs: QuadReal,
    pub rhs: QuadReal,
    pub equal: bool,
}

pub fn jacobian_formula_check(f: &PolyMap, v: &ValInfinity) -> Result<JacobianCheck, DynError> {
    let jac = f.jacobian_det();
    let vj = v.eval(&jac)?;
    let Val::Fin(vj) = vj else {
        return Err(ValError::CurveValuation.into());
    };
    let lhs = &v.invariants()?.thinness + &vj;
    let d = d_of(f, v);
    let image = pushforward(f, v, crate::valtree::DEFAULT_MAX_REFINE)?;
    let rhs = &d * &image.invariants()?.thinness;
    let equal = lhs == rhs;
    Ok(JacobianCheck { lhs, rhs, equal })
}
