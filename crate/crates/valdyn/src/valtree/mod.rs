//! Valuations centered at infinity.
//!
//! A valuation is stored through a sequence of key polynomials in a chart
//! `(u, v)` where the major variable `u` has value `-1`. Level 0 is `v`
//! itself; each further key is `phi_{i+1} = phi_i^e - c * M` with `M` a
//! monomial in `u` and the lower keys of the same value as `phi_i^e`. Key
//! coefficients stay in the base field even when the Puiseux expansion of
//! the same valuation would need roots.

mod chart;
mod discover;
mod invariants;

pub use chart::{Chart, ChartPoly, LPoly};
pub use discover::{discover, Oracle, Puiseux, PuiseuxTail, DEFAULT_MAX_REFINE};
pub use invariants::{invariants, Invariants};

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};
use thiserror::Error;

use crate::numeric::{Coeff, QuadReal, Rat};
use crate::poly::BiPoly;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ValError {
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("curve value indeterminate")]
    CurveValueIndeterminate,
    #[error("valuation not centered at infinity")]
    NotCenteredAtInfinity,
    #[error("datum is a truncation of an infinitely singular valuation (depth {0})")]
    TruncatedDatum(usize),
    #[error("valuation is not divisorial")]
    NotDivisorial,
    #[error("operation undefined on curve valuations")]
    CurveValuation,
    #[error("d(F, nu) = 0: pushforward degenerates")]
    DegenerateImage,
    #[error("refinement limit {0} reached")]
    RefinementLimit(usize),
    #[error("inconsistent oracle: {0}")]
    Inconsistent(String),
}

/// A value in `R ∪ {+∞}`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Val {
    Fin(QuadReal),
    Inf,
}

impl Val {
    pub fn rat(r: Rat) -> Val {
        Val::Fin(QuadReal::rational(r))
    }

    pub fn fin(&self) -> Option<&QuadReal> {
        match self {
            Val::Fin(q) => Some(q),
            Val::Inf => None,
        }
    }

    pub fn expect_fin(&self) -> &QuadReal {
        self.fin().expect("finite value")
    }

    pub fn plus(&self, q: &QuadReal) -> Val {
        match self {
            Val::Fin(a) => Val::Fin(a + q),
            Val::Inf => Val::Inf,
        }
    }
}

impl Ord for Val {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Val::Fin(a), Val::Fin(b)) => a.cmp(b),
            (Val::Fin(_), Val::Inf) => Ordering::Less,
            (Val::Inf, Val::Fin(_)) => Ordering::Greater,
            (Val::Inf, Val::Inf) => Ordering::Equal,
        }
    }
}

impl PartialOrd for Val {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Val {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Val::Fin(q) => write!(f, "{q}"),
            Val::Inf => write!(f, "inf"),
        }
    }
}

impl fmt::Debug for Val {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Level {
    pub key: ChartPoly,
    pub value: Val,
}

/// Relation `phi_{i+1} = phi_i^e - c * u^mono[0] * prod_j phi_j^mono[j+1]`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Step {
    pub e: u64,
    pub c: Coeff,
    pub mono: Vec<i64>,
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Tail {
    /// The last key value is generic: the valuation is quasimonomial.
    Generic,
    /// The last key has value `+∞`.
    Curve,
    /// Refinement stopped at the given depth; the true valuation lies above.
    Truncated(usize),
}

/// Initial form data: the value, and the coefficients of the residue
/// polynomial in `xi = phi_k^e / M_k` relative to the canonical monomial of
/// that value.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Lead {
    pub value: Val,
    pub poly: Vec<Coeff>,
}

impl Lead {
    /// `Some(c)` when `self = c * other` in the graded algebra.
    pub fn ratio(&self, other: &Lead) -> Option<Coeff> {
        if self.value != other.value || self.poly.len() != other.poly.len() {
            return None;
        }
        let t0 = other.poly.iter().position(|c| !c.is_zero())?;
        if self.poly[t0].is_zero() {
            return None;
        }
        let c = &self.poly[t0] / &other.poly[t0];
        self.poly
            .iter()
            .zip(&other.poly)
            .all(|(a, b)| *a == &c * b)
            .then_some(c)
    }
}

/// Monomial initial form below the top level.
#[derive(Clone, Debug)]
struct Init {
    value: QuadReal,
    coeff: Coeff,
    /// `[n_u, n_0, ..., n_{k-1}]`
    exps: Vec<i64>,
}

#[derive(Clone)]
pub struct ValInfinity {
    chart: Chart,
    levels: Vec<Level>,
    steps: Vec<Step>,
    tail: Tail,
    normalizer: QuadReal,
    witnesses: Vec<BiPoly>,
}

impl PartialEq for ValInfinity {
    fn eq(&self, other: &Self) -> bool {
        self.chart == other.chart
            && self.levels == other.levels
            && self.steps == other.steps
            && self.tail == other.tail
    }
}

impl Eq for ValInfinity {}

fn lcm(a: &BigInt, b: &BigInt) -> BigInt {
    a.lcm(b)
}

impl ValInfinity {
    /// The valuation `-deg`.
    pub fn root() -> ValInfinity {
        ValInfinity::from_parts(Chart::XMajor, vec![Val::rat(Rat::from(-1))], vec![], Tail::Generic)
            .expect("root")
    }

    fn from_parts(
        chart: Chart,
        values: Vec<Val>,
        steps: Vec<Step>,
        tail: Tail,
    ) -> Result<ValInfinity, ValError> {
        let mut levels = vec![Level { key: ChartPoly::minor(), value: values[0].clone() }];
        let mut v = ValInfinity {
            chart,
            levels: Vec::new(),
            steps: Vec::new(),
            tail,
            normalizer: QuadReal::one(),
            witnesses: Vec::new(),
        };
        v.levels = levels.clone();
        for (i, st) in steps.into_iter().enumerate() {
            let key = v.step_key(&levels[i].key, &st);
            levels.push(Level { key, value: values[i + 1].clone() });
            v.steps.push(st);
            v.levels = levels.clone();
        }
        Ok(v.canonical())
    }

    fn step_key(&self, prev: &ChartPoly, st: &Step) -> ChartPoly {
        prev.pow(st.e).sub(&self.monomial_poly(&st.mono).scale(&st.c))
    }

    /// Builds `u^exps[0] * prod phi_j^exps[j+1]`; negative key exponents are
    /// not allowed here.
    fn monomial_poly(&self, exps: &[i64]) -> ChartPoly {
        let mut p = ChartPoly::u_power(exps[0]);
        for (j, &n) in exps[1..].iter().enumerate() {
            assert!(n >= 0, "negative key exponent in a monomial");
            if n > 0 {
                p = p.mul(&self.levels[j].key.pow(n as u64));
            }
        }
        p
    }

    /// Monomial valuation from raw weights, normalized so that
    /// `min(nu(x), nu(y), 0) = -1`.
    pub fn monomial(wx: QuadReal, wy: QuadReal) -> Result<ValInfinity, ValError> {
        let m = wx.clone().min(wy.clone()).min(QuadReal::zero());
        if m.signum() >= 0 {
            return Err(ValError::NotCenteredAtInfinity);
        }
        let n = -m;
        let (x, y) = (&wx / &n, &wy / &n);
        let mut v = if x <= y {
            ValInfinity::from_parts(Chart::XMajor, vec![Val::Fin(y)], vec![], Tail::Generic)?
        } else {
            ValInfinity::from_parts(Chart::YMajor, vec![Val::Fin(x)], vec![], Tail::Generic)?
        };
        v.normalizer = n;
        Ok(v)
    }

    /// The family `nu(x) = -s`, `nu(y) = -1`.
    pub fn monomial_s(s: QuadReal) -> Result<ValInfinity, ValError> {
        ValInfinity::monomial(-s, QuadReal::from_int(-1))
    }

    /// Rational monomial shorthand.
    pub fn monomial_rat(wx: Rat, wy: Rat) -> Result<ValInfinity, ValError> {
        ValInfinity::monomial(QuadReal::rational(wx), QuadReal::rational(wy))
    }

    /// Normalizes raw monomial data; identical to [`ValInfinity::monomial`],
    /// with the normalizer kept for reporting.
    pub fn normalize(wx: QuadReal, wy: QuadReal) -> Result<ValInfinity, ValError> {
        ValInfinity::monomial(wx, wy)
    }

    pub fn chart(&self) -> Chart {
        self.chart
    }

    pub fn levels(&self) -> &[Level] {
        &self.levels
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    pub fn tail(&self) -> Tail {
        self.tail
    }

    pub fn normalizer(&self) -> &QuadReal {
        &self.normalizer
    }

    pub fn witnesses(&self) -> &[BiPoly] {
        &self.witnesses
    }

    pub fn set_tail(&mut self, t: Tail) {
        self.tail = t;
    }

    pub fn is_root(&self) -> bool {
        self.chart == Chart::XMajor
            && self.levels.len() == 1
            && self.levels[0].value == Val::Fin(QuadReal::from_int(-1))
    }

    pub fn is_monomial(&self) -> bool {
        self.levels.len() == 1 && self.tail == Tail::Generic
    }

    pub fn is_truncated(&self) -> bool {
        matches!(self.tail, Tail::Truncated(_))
    }

    /// Divisorial: every key value rational and a generic tail.
    pub fn is_divisorial(&self) -> bool {
        self.tail == Tail::Generic && self.levels.iter().all(|l| l.value.fin().is_some_and(QuadReal::is_rational))
    }

    /// Values on `x` and `y`.
    pub fn weights(&self) -> (Val, Val) {
        let minus_one = Val::Fin(QuadReal::from_int(-1));
        let w0 = self.levels[0].value.clone();
        match self.chart {
            Chart::XMajor => (minus_one, w0),
            Chart::YMajor => (w0, minus_one),
        }
    }

    fn top(&self) -> usize {
        self.levels.len() - 1
    }

    fn rat_value(&self, i: usize) -> Option<Rat> {
        self.levels[i].value.fin().and_then(|q| q.as_rational().cloned())
    }

    /// Denominator of the group generated by `1, w_0, ..., w_{k-1}`.
    fn group_den(&self, k: usize) -> BigInt {
        (0..k).fold(BigInt::one(), |acc, i| {
            lcm(&acc, self.rat_value(i).expect("rational lower value").denom())
        })
    }

    /// Order `e_k` of `w_k` modulo the lower value group; `None` when the value
    /// is irrational or infinite.
    pub fn order_at(&self, k: usize) -> Option<u64> {
        let w = self.rat_value(k)?;
        let g = Rat::from_int(self.group_den(k));
        (w * g).denom().to_u64()
    }

    /// Degree in the minor variable of the next candidate key, the top key
    /// raised to its order. Measures the cost of refining further; a
    /// monomial valuation counts as 1.
    pub fn probe_degree(&self) -> u64 {
        let k = self.top();
        if k == 0 {
            return 1;
        }
        self.key_degree(k) * self.order_at(k).unwrap_or(1)
    }

    /// Degree of key `k` in the minor variable.
    pub fn key_degree(&self, k: usize) -> u64 {
        self.levels[k].key.deg_v().unwrap_or(0) as u64
    }

    /// Canonical exponents `[n_u, n_0, ..., n_{k-1}]` (with `0 <= n_j < e_j`)
    /// of the monomial of value `gamma` built from `u` and keys below `k`.
    fn canonical_exps(&self, gamma: &Rat, k: usize) -> Vec<i64> {
        let mut t = gamma.clone();
        let mut exps = vec![0i64; k + 1];
        for j in (0..k).rev() {
            let w = self.rat_value(j).expect("rational lower value");
            let e = self.steps[j].e as i64;
            let g = Rat::from_int(self.group_den(j));
            let n = (0..e)
                .find(|&n| ((&t - &w * Rat::from(n)) * &g).is_integer())
                .expect("value lies in the value group");
            t = t - w * Rat::from(n);
            exps[j + 1] = n;
        }
        assert!(t.is_integer(), "value not in the value group");
        exps[0] = -t.to_i64().expect("small exponent");
        exps
    }

    /// Rewrites a monomial (exponents `[n_u, n_0, .., n_{k-1}]`, any signs) in
    /// canonical form using `phi_i^{e_i} = c_{i+1} M_i`.
    fn reduce(&self, mut exps: Vec<i64>) -> (Coeff, Vec<i64>) {
        let mut c = Coeff::one();
        let k = exps.len() - 1;
        for i in (0..k).rev() {
            let st = &self.steps[i];
            let e = st.e as i64;
            let q = exps[i + 1].div_euclid(e);
            if q != 0 {
                exps[i + 1] -= q * e;
                c = &c * &st.c.pow(q);
                for (slot, m) in exps[..=i].iter_mut().zip(&st.mono) {
                    *slot += q * m;
                }
            }
        }
        (c, exps)
    }

    /// Initial monomial of `r` for the valuation truncated below level `k`
    /// (requires `deg_v r < deg_v phi_k`, or any `r` when `k = 0`).
    fn init_below(&self, r: &ChartPoly, k: usize) -> Option<Init> {
        if r.is_zero() {
            return None;
        }
        if k == 0 {
            debug_assert_eq!(r.deg_v(), Some(0));
            let row = &r.rows()[0];
            let high = row.high()?;
            return Some(Init {
                value: QuadReal::from_int(-high),
                coeff: row.top_coeff()?.clone(),
                exps: vec![high],
            });
        }
        let w = self.levels[k - 1].value.expect_fin().clone();
        let digits = self.digits(r, k - 1);
        let mut best: Option<Init> = None;
        for (j, a) in digits.iter().enumerate() {
            let Some(mut init) = self.init_below(a, k - 1) else {
                continue;
            };
            init.value = &init.value + &w.scale(&Rat::from(j as i64));
            init.exps.push(j as i64);
            match &best {
                Some(b) if b.value <= init.value => {
                    debug_assert!(b.value != init.value, "lower-level ties cannot occur");
                }
                _ => best = Some(init),
            }
        }
        best
    }

    fn digits(&self, r: &ChartPoly, level: usize) -> Vec<ChartPoly> {
        if level == 0 {
            r.rows()
                .iter()
                .map(|row| ChartPoly::from_rows(vec![row.clone()]))
                .collect()
        } else {
            r.expand(&self.levels[level].key)
        }
    }

    /// Terms `(j, init(a_j) * phi_k^j)` of the top-level expansion that reach
    /// the minimum, plus that minimum.
    fn top_terms(&self, r: &ChartPoly) -> (Val, Vec<(usize, Init)>) {
        let k = self.top();
        let digits = self.digits(r, k);
        let w = &self.levels[k].value;
        let mut best = Val::Inf;
        let mut terms: Vec<(usize, Init)> = Vec::new();
        for (j, a) in digits.iter().enumerate() {
            if w == &Val::Inf && j > 0 {
                break;
            }
            let Some(init) = self.init_below(a, k) else {
                continue;
            };
            let v = match w {
                Val::Fin(wk) => Val::Fin(&init.value + &wk.scale(&Rat::from(j as i64))),
                Val::Inf => Val::Fin(init.value.clone()),
            };
            match v.cmp(&best) {
                Ordering::Less => {
                    best = v;
                    terms = vec![(j, init)];
                }
                Ordering::Equal => terms.push((j, init)),
                Ordering::Greater => {}
            }
        }
        (best, terms)
    }

    pub fn value_chart(&self, r: &ChartPoly) -> Val {
        self.top_terms(r).0
    }

    /// Value of a chart polynomial written in another chart.
    pub fn value_in(&self, r: &ChartPoly, chart: Chart) -> Val {
        if chart == self.chart {
            return self.value_chart(r);
        }
        let (b, s) = r.to_bipoly(chart);
        let major = match chart {
            Chart::XMajor => BiPoly::x(),
            Chart::YMajor => BiPoly::y(),
        };
        let vu = self.value(&major);
        self.value(&b).plus(&-vu.expect_fin().scale(&Rat::from(s)))
    }

    /// `nu(R)`, with `+∞` for the zero polynomial.
    pub fn value(&self, r: &BiPoly) -> Val {
        self.value_chart(&ChartPoly::from_bipoly(r, self.chart))
    }

    pub fn eval(&self, r: &BiPoly) -> Result<Val, ValError> {
        if r.is_zero() {
            return Err(ValError::ZeroPolynomial);
        }
        Ok(self.value(r))
    }

    /// Initial form of `r` in the graded algebra, as a residue polynomial.
    pub fn lead(&self, r: &BiPoly) -> Lead {
        let rc = ChartPoly::from_bipoly(r, self.chart);
        let (value, terms) = self.top_terms(&rc);
        if terms.is_empty() {
            return Lead { value, poly: Vec::new() };
        }
        let k = self.top();
        let e = self.order_at(k);
        let mk = e.map(|e| {
            let wk = self.rat_value(k).expect("rational top");
            self.canonical_exps(&(wk * Rat::from(e as i64)), k)
        });
        let mut poly: Vec<Coeff> = Vec::new();
        let mut canon: Option<Vec<i64>> = None;
        for (j, init) in terms {
            let (t, mut exps) = match (&e, &mk) {
                (Some(e), Some(m)) => {
                    // phi_k^j = phi_k^(j mod e) * (xi * M_k)^(j div e)
                    let t = j / *e as usize;
                    let mut ex = init.exps.clone();
                    for (s, mm) in ex.iter_mut().zip(m) {
                        *s += t as i64 * mm;
                    }
                    (t, ex)
                }
                _ => (0, init.exps.clone()),
            };
            exps.truncate(k + 1);
            let (c, mut ex) = self.reduce(exps);
            ex.push(e.map_or(j, |e| j % e as usize) as i64);
            match &canon {
                None => canon = Some(ex),
                Some(cn) => debug_assert_eq!(cn, &ex),
            }
            if poly.len() <= t {
                poly.resize(t + 1, Coeff::zero());
            }
            poly[t] = &init.coeff * &c;
        }
        Lead { value, poly }
    }

    /// Value of the major variable of `chart`.
    fn major_value(&self, chart: Chart) -> Val {
        match chart {
            Chart::XMajor => self.value(&BiPoly::x()),
            Chart::YMajor => self.value(&BiPoly::y()),
        }
    }

    /// Tree order: `self <= other` iff `self(R) <= other(R)` for all `R`.
    pub fn le(&self, other: &ValInfinity) -> bool {
        if self.is_root() {
            return true;
        }
        if self.chart != other.chart && other.major_value(self.chart) != Val::Fin(QuadReal::from_int(-1)) {
            return false;
        }
        self.levels
            .iter()
            .all(|l| other.value_in(&l.key, self.chart) >= l.value)
    }

    /// Same valuation (mutual order).
    pub fn same_as(&self, other: &ValInfinity) -> bool {
        self.le(other) && other.le(self)
    }

    /// Prefix of the keys up to level `i`, with `phi_i` assigned `t`.
    fn truncate_at(&self, i: usize, t: Val) -> ValInfinity {
        let mut v = ValInfinity {
            chart: self.chart,
            levels: self.levels[..=i].to_vec(),
            steps: self.steps[..i].to_vec(),
            tail: Tail::Generic,
            normalizer: QuadReal::one(),
            witnesses: Vec::new(),
        };
        v.levels[i].value = t;
        v.canonical()
    }

    /// Value of `phi_i` at the start of its segment, `nu_{i-1}(phi_i)`.
    pub fn segment_start(&self, i: usize) -> QuadReal {
        if i == 0 {
            return QuadReal::from_int(-1);
        }
        let st = &self.steps[i - 1];
        self.levels[i - 1].value.expect_fin().scale(&Rat::from(st.e as i64))
    }

    /// Drops a top key whose value sits at its segment start, and rewrites the
    /// root in the x-major chart.
    fn canonical(mut self) -> ValInfinity {
        while self.levels.len() > 1 {
            let k = self.top();
            if self.levels[k].value == Val::Fin(self.segment_start(k)) {
                self.levels.pop();
                self.steps.pop();
            } else {
                break;
            }
        }
        if self.chart == Chart::YMajor
            && self.levels.len() == 1
            && self.levels[0].value == Val::Fin(QuadReal::from_int(-1))
        {
            self.chart = Chart::XMajor;
        }
        self
    }

    /// Order relation and the meet `self ∧ other`.
    pub fn meet(&self, other: &ValInfinity) -> (TreeOrder, ValInfinity) {
        let (a, b) = (self.le(other), other.le(self));
        match (a, b) {
            (true, true) => return (TreeOrder::Equal, self.clone()),
            (true, false) => return (TreeOrder::Less, self.clone()),
            (false, true) => return (TreeOrder::Greater, other.clone()),
            _ => {}
        }
        for (i, l) in self.levels.iter().enumerate() {
            let t = other.value_in(&l.key, self.chart);
            if t < l.value {
                return (TreeOrder::Incomparable, self.truncate_at(i, t));
            }
        }
        // Unreachable for genuinely incomparable inputs; fall back to the root.
        (TreeOrder::Incomparable, ValInfinity::root())
    }

    /// Rebuilds `[keys < k; phi_k -> t]` as a standalone valuation.
    pub fn with_top_value(&self, k: usize, t: QuadReal) -> ValInfinity {
        self.truncate_at(k, Val::Fin(t))
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum TreeOrder {
    Less,
    Greater,
    Equal,
    Incomparable,
}

impl fmt::Display for TreeOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            TreeOrder::Less => "less",
            TreeOrder::Greater => "greater",
            TreeOrder::Equal => "equal",
            TreeOrder::Incomparable => "incomparable",
        };
        write!(f, "{s}")
    }
}

impl fmt::Display for ValInfinity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (wx, wy) = self.weights();
        write!(f, "chart={}; ν(x)={}; ν(y)={}", self.chart, wx, wy)?;
        for l in &self.levels[1..] {
            write!(f, "; ν({})={}", l.key.render(self.chart), l.value)?;
        }
        match self.tail {
            Tail::Generic if self.levels.len() == 1 => Ok(()),
            Tail::Generic => write!(f, "; tail=generic"),
            Tail::Curve => write!(f, "; tail=curve"),
            Tail::Truncated(d) => write!(f, "; tail=truncated(depth {d})"),
        }
    }
}

impl fmt::Debug for ValInfinity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
