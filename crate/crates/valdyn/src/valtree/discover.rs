//! Recovering key polynomials of a valuation known only through an oracle.

use std::collections::BTreeMap;

use super::{Chart, ChartPoly, Level, Step, Tail, Val, ValError, ValInfinity};
use crate::numeric::{Coeff, QuadReal, Rat};
use crate::poly::BiPoly;

pub const DEFAULT_MAX_REFINE: usize = 32;

/// Black-box access to a valuation: its value on a polynomial and a
/// comparable initial form.
pub trait Oracle {
    type Lead;
    fn probe(&self, r: &BiPoly) -> (Val, Self::Lead);
    /// `Some(c)` when the initial forms satisfy `a = c * b`.
    fn ratio(&self, a: &Self::Lead, b: &Self::Lead) -> Option<Coeff>;
}

/// Builds the key sequence of the valuation described by `o`.
///
/// At each level the candidate `phi^e` is compared with the monomial `M` of
/// the same value; a constant ratio `c` produces the next key
/// `phi^e - c M`, otherwise the residue is transcendental and the current
/// keys with a generic tail describe the valuation exactly.
pub fn discover<O: Oracle>(o: &O, max_refine: usize) -> Result<ValInfinity, ValError> {
    let (vx, _) = o.probe(&BiPoly::x());
    let (vy, _) = o.probe(&BiPoly::y());
    let (Val::Fin(qx), Val::Fin(qy)) = (&vx, &vy) else {
        return Err(ValError::Inconsistent("infinite value on a coordinate".into()));
    };
    let minus_one = QuadReal::from_int(-1);
    let (chart, major, w0) = if qx <= qy {
        (Chart::XMajor, qx, vy.clone())
    } else {
        (Chart::YMajor, qy, vx.clone())
    };
    if *major != minus_one {
        return Err(ValError::NotCenteredAtInfinity);
    }
    let mut v = ValInfinity {
        chart,
        levels: vec![Level { key: ChartPoly::minor(), value: w0 }],
        steps: Vec::new(),
        tail: Tail::Generic,
        normalizer: QuadReal::one(),
        witnesses: Vec::new(),
    };
    let mut witnesses = vec![BiPoly::x(), BiPoly::y()];
    loop {
        let k = v.top();
        let w = v.levels[k].value.clone();
        let Val::Fin(wq) = &w else {
            v.tail = Tail::Curve;
            break;
        };
        let Some(e) = v.order_at(k) else {
            break;
        };
        let wr = wq.as_rational().expect("rational").clone();
        let m_exps = v.canonical_exps(&(wr * Rat::from(e as i64)), k);
        let a = v.levels[k].key.pow(e);
        let m = v.monomial_poly(&m_exps);
        let s = (-a.min_u()).max(-m.min_u()).max(0);
        let (ab, _) = a.shift_u(s).to_bipoly(chart);
        let (mb, _) = m.shift_u(s).to_bipoly(chart);
        let (va, la) = o.probe(&ab);
        let (vm, lm) = o.probe(&mb);
        if va != vm {
            return Err(ValError::Inconsistent(format!(
                "key power and monomial disagree: {va} vs {vm}"
            )));
        }
        witnesses.push(ab);
        witnesses.push(mb);
        let Some(c) = o.ratio(&la, &lm) else {
            break;
        };
        if v.levels.len() > max_refine {
            v.tail = Tail::Truncated(v.levels.len());
            break;
        }
        let key = a.sub(&m.scale(&c));
        let (kb, ks) = key.to_bipoly(chart);
        let (vk, _) = o.probe(&kb);
        let w_new = vk.plus(&QuadReal::from_int(ks));
        if w_new <= va.plus(&QuadReal::from_int(s)) {
            return Err(ValError::Inconsistent("refined key did not gain value".into()));
        }
        witnesses.push(kb);
        v.steps.push(Step { e, c, mono: m_exps });
        v.levels.push(Level { key, value: w_new });
    }
    for wit in &witnesses {
        let (want, _) = o.probe(wit);
        if v.tail != Tail::Curve && v.value(wit) != want {
            return Err(ValError::Inconsistent(format!("witness {wit} not reproduced")));
        }
    }
    v.witnesses = witnesses;
    Ok(v)
}

/// A Puiseux datum: the minor variable as `sum a_k u^{beta_k}` followed by a
/// tail `theta * u^tau` (`theta` transcendental) or a concrete curve term.
#[derive(Clone, Debug)]
pub struct Puiseux {
    pub chart: Chart,
    pub terms: Vec<(Rat, Coeff)>,
    pub tail_exponent: QuadReal,
    pub tail: PuiseuxTail,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PuiseuxTail {
    Generic,
    Curve(Coeff),
    /// Truncation of an infinitely singular valuation.
    Infinite,
}

/// Series in `u` with real exponents and coefficients polynomial in `theta`.
type Series = BTreeMap<QuadReal, Vec<Coeff>>;

fn poly_add(a: &mut Vec<Coeff>, b: &[Coeff]) {
    if a.len() < b.len() {
        a.resize(b.len(), Coeff::zero());
    }
    for (x, y) in a.iter_mut().zip(b) {
        *x = &*x + y;
    }
    while a.last().is_some_and(Coeff::is_zero) {
        a.pop();
    }
}

fn poly_mul(a: &[Coeff], b: &[Coeff]) -> Vec<Coeff> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Coeff::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = &out[i + j] + &(x * y);
        }
    }
    out
}

fn series_mul(a: &Series, b: &Series) -> Series {
    let mut out = Series::new();
    for (ea, pa) in a {
        for (eb, pb) in b {
            let slot = out.entry(ea + eb).or_default();
            poly_add(slot, &poly_mul(pa, pb));
        }
    }
    out.retain(|_, p| !p.is_empty());
    out
}

impl Puiseux {
    pub fn validate(&self) -> Result<(), ValError> {
        let mut prev: Option<QuadReal> = None;
        for (b, c) in &self.terms {
            let b = QuadReal::rational(b.clone());
            if c.is_zero() || prev.as_ref().is_some_and(|p| *p <= b) {
                return Err(ValError::Inconsistent("Puiseux exponents must strictly decrease".into()));
            }
            prev = Some(b);
        }
        if prev.as_ref().is_some_and(|p| *p <= self.tail_exponent) {
            return Err(ValError::Inconsistent("tail exponent must lie below the terms".into()));
        }
        let top = prev_top(self);
        if top > QuadReal::one() {
            return Err(ValError::NotCenteredAtInfinity);
        }
        Ok(())
    }

    fn minor_series(&self) -> Series {
        let mut s = Series::new();
        for (b, c) in &self.terms {
            s.insert(QuadReal::rational(b.clone()), vec![c.clone()]);
        }
        let tail = match &self.tail {
            PuiseuxTail::Curve(c) => vec![c.clone()],
            _ => vec![Coeff::zero(), Coeff::one()],
        };
        let slot = s.entry(self.tail_exponent.clone()).or_default();
        poly_add(slot, &tail);
        s.retain(|_, p| !p.is_empty());
        s
    }

    /// `R(u, h(u) + theta u^tau)` as a series.
    fn substitute(&self, r: &BiPoly) -> Series {
        let rc = ChartPoly::from_bipoly(r, self.chart);
        let h = self.minor_series();
        let mut out = Series::new();
        let mut hp: Series = [(QuadReal::zero(), vec![Coeff::one()])].into_iter().collect();
        for (j, row) in rc.rows().iter().enumerate() {
            if j > 0 {
                hp = series_mul(&hp, &h);
            }
            for (e, c) in row.terms() {
                for (he, hpoly) in &hp {
                    let slot = out.entry(he + &QuadReal::from_int(e)).or_default();
                    poly_add(slot, &hpoly.iter().map(|x| x * c).collect::<Vec<_>>());
                }
            }
        }
        out.retain(|_, p| !p.is_empty());
        out
    }

    /// Converts the datum to key form.
    pub fn to_valuation(&self, max_refine: usize) -> Result<ValInfinity, ValError> {
        self.validate()?;
        let mut v = discover(self, max_refine)?;
        if self.tail == PuiseuxTail::Infinite {
            let depth = v.levels().len();
            v.set_tail(Tail::Truncated(depth));
        }
        Ok(v)
    }
}

fn prev_top(p: &Puiseux) -> QuadReal {
    p.terms
        .first()
        .map(|(b, _)| QuadReal::rational(b.clone()))
        .unwrap_or_else(|| p.tail_exponent.clone())
}

impl Oracle for Puiseux {
    type Lead = (Val, Vec<Coeff>);

    fn probe(&self, r: &BiPoly) -> (Val, Self::Lead) {
        let s = self.substitute(r);
        match s.iter().next_back() {
            None => (Val::Inf, (Val::Inf, Vec::new())),
            Some((e, p)) => {
                let v = Val::Fin(-e.clone());
                (v.clone(), (v, p.clone()))
            }
        }
    }

    fn ratio(&self, a: &Self::Lead, b: &Self::Lead) -> Option<Coeff> {
        super::Lead { value: a.0.clone(), poly: a.1.clone() }
            .ratio(&super::Lead { value: b.0.clone(), poly: b.1.clone() })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_map;
    use crate::valtree::TreeOrder;

    fn q(n: i64, d: i64) -> QuadReal {
        QuadReal::rational(Rat::new(n, d))
    }

    fn poly(s: &str) -> BiPoly {
        parse_map(&format!("P = {s}; Q = 0")).unwrap().p
    }

    fn sqrt_datum() -> ValInfinity {
        // y = x^(1/2) + theta x^(1/4)
        Puiseux {
            chart: Chart::XMajor,
            terms: vec![(Rat::new(1, 2), Coeff::one())],
            tail_exponent: q(1, 4),
            tail: PuiseuxTail::Generic,
        }
        .to_valuation(DEFAULT_MAX_REFINE)
        .unwrap()
    }

    #[test]
    fn datum_produces_key() {
        let v = sqrt_datum();
        assert_eq!(v.levels().len(), 2);
        assert_eq!(v.eval(&poly("y^2 - x")).unwrap(), Val::Fin(q(-3, 4)));
        assert_eq!(v.eval(&poly("y")).unwrap(), Val::Fin(q(-1, 2)));
        assert_eq!(v.eval(&poly("y^4 - 2*x*y^2 + x^2 + x*y")).unwrap(), Val::Fin(q(-3, 2)));
    }

    #[test]
    fn datum_meets_monomial_at_common_segment() {
        let v = sqrt_datum();
        let m = ValInfinity::monomial(q(-1, 1), q(-1, 3)).unwrap();
        let (ord, meet) = v.meet(&m);
        assert_eq!(ord, TreeOrder::Incomparable);
        assert!(meet.same_as(&ValInfinity::monomial(q(-1, 1), q(-1, 2)).unwrap()));
    }

    #[test]
    fn curve_tail_vanishes_on_its_curve() {
        let v = Puiseux {
            chart: Chart::XMajor,
            terms: vec![(Rat::new(1, 2), Coeff::one())],
            tail_exponent: q(0, 1),
            tail: PuiseuxTail::Curve(Coeff::from_int(3)),
        }
        .to_valuation(DEFAULT_MAX_REFINE)
        .unwrap();
        // y = x^(1/2) + 3  =>  (y - 3)^2 - x = 0
        assert_eq!(v.value(&poly("(y - 3)^2 - x")), Val::Inf);
        assert_eq!(v.tail(), Tail::Curve);
    }
}
