//! Eigenvaluations: valuations fixed by `F•`.

use super::{d_of, pushforward, DynError};
use crate::numeric::{MinPoly, QuadReal, Rat};
use crate::poly::PolyMap;
use crate::valtree::{Tail, Val, ValInfinity};

pub const DEFAULT_MAX_ITER: usize = 40;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EigenKind {
    Divisorial,
    Irrational,
    /// Infinitely singular; only a truncation of the given depth is known.
    Truncated(usize),
    /// No fixed point found; `nu_star` is the last iterate.
    NotConverged,
}

impl EigenKind {
    pub fn is_exact(self) -> bool {
        matches!(self, EigenKind::Divisorial | EigenKind::Irrational)
    }

    pub fn label(self) -> &'static str {
        match self {
            EigenKind::Divisorial => "divisorial",
            EigenKind::Irrational => "irrational",
            EigenKind::Truncated(_) => "infinitely-singular-truncated",
            EigenKind::NotConverged => "not-converged",
        }
    }
}

#[derive(Clone, Debug)]
pub struct EigenReport {
    pub nu_star: ValInfinity,
    pub lambda1: QuadReal,
    pub min_poly: MinPoly,
    pub kind: EigenKind,
    /// `F•nu_* = nu_*` checked exactly.
    pub fixed_point_exact: bool,
    pub iterations: usize,
}

fn weights_f64(v: &ValInfinity) -> (f64, f64) {
    let f = |w: Val| w.fin().map_or(f64::INFINITY, QuadReal::to_f64);
    let (x, y) = v.weights();
    (f(x), f(y))
}

/// Monomial valuations whose weights solve the fixed-point equations for one
/// pair of terms `x^a y^b` of `P` and `x^c y^d` of `Q`.
pub(crate) fn monomial_candidates(f: &PolyMap) -> Vec<(QuadReal, QuadReal)> {
    let mut out: Vec<(QuadReal, QuadReal)> = Vec::new();
    for (&(a, b), _) in f.p.terms() {
        for (&(c, d), _) in f.q.terms() {
            let (a, b, c, d) = (a as i64, b as i64, c as i64, d as i64);
            let tr = Rat::from(a + d);
            let disc = Rat::from((a - d) * (a - d) + 4 * b * c);
            let lambda = (&QuadReal::rational(tr) + &QuadReal::sqrt_rat(&disc)).scale(&Rat::new(1, 2));
            if lambda.signum() <= 0 {
                continue;
            }
            let vecs: Vec<(QuadReal, QuadReal)> = if b != 0 {
                vec![(QuadReal::from_int(b), &lambda - &QuadReal::from_int(a))]
            } else if c != 0 {
                vec![(&lambda - &QuadReal::from_int(d), QuadReal::from_int(c))]
            } else {
                vec![(QuadReal::one(), QuadReal::zero()), (QuadReal::zero(), QuadReal::one())]
            };
            for (u, v) in vecs {
                if u.signum() < 0 || v.signum() < 0 {
                    continue;
                }
                let m = u.clone().max(v.clone());
                let w = (-&(&u / &m), -&(&v / &m));
                if !out.contains(&w) {
                    out.push(w);
                }
            }
        }
    }
    out
}

/// `F•nu = nu` with `d(F, nu) > 0`.
pub(crate) fn is_fixed(f: &PolyMap, v: &ValInfinity, max_refine: usize) -> bool {
    if d_of(f, v).signum() <= 0 {
        return false;
    }
    pushforward(f, v, max_refine).is_ok_and(|w| !w.is_truncated() && w.same_as(v))
}

fn kind_of(v: &ValInfinity) -> EigenKind {
    match v.tail() {
        Tail::Truncated(k) => EigenKind::Truncated(k),
        _ if v.is_divisorial() => EigenKind::Divisorial,
        _ => EigenKind::Irrational,
    }
}

fn report(f: &PolyMap, nu: ValInfinity, kind: EigenKind, exact: bool, iterations: usize) -> EigenReport {
    let lambda1 = d_of(f, &nu);
    let min_poly = lambda1.min_poly();
    EigenReport { nu_star: nu, lambda1, min_poly, kind, fixed_point_exact: exact, iterations }
}

/// Iterates whose first-level weights need a larger denominator, or whose
/// next candidate key has larger degree, are not pushed further.
const MAX_COMPLEXITY: u64 = 16;

fn complexity(v: &ValInfinity) -> u64 {
    let den = match &v.levels()[0].value {
        Val::Fin(w) => w.as_rational().and_then(|r| r.denom().try_into().ok()).unwrap_or(1),
        Val::Inf => 1,
    };
    den.max(v.probe_degree())
}

/// The last three iterates agree on `nu(x)` and `nu(y)`.
fn weights_settled(orbit: &[ValInfinity]) -> bool {
    let [.., a, b, c] = orbit else {
        return false;
    };
    a.weights() == b.weights() && b.weights() == c.weights()
}

/// Keys shared by the last three iterates, when there is more than one.
fn stable_prefix(orbit: &[ValInfinity]) -> Option<usize> {
    let [.., a, b, c] = orbit else {
        return None;
    };
    if a.chart() != b.chart() || b.chart() != c.chart() {
        return None;
    }
    let shared = a
        .levels()
        .iter()
        .zip(b.levels())
        .zip(c.levels())
        .take_while(|((x, y), z)| x.key == y.key && y.key == z.key)
        .count();
    (shared >= 2).then_some(shared)
}

/// Iterates `F•` from `-deg`. An exact fixed point of the orbit is taken
/// as is; otherwise monomial solutions of the weight equations are tried,
/// nearest to the last iterate first.
pub fn eigenvaluation(f: &PolyMap, max_iter: usize, max_refine: usize) -> Result<EigenReport, DynError> {
    if !f.is_dominant() {
        return Err(crate::poly::PolyError::NonDominant.into());
    }
    let mut orbit = vec![ValInfinity::root()];
    for i in 0..max_iter {
        let cur = orbit.last().unwrap();
        if complexity(cur) > MAX_COMPLEXITY {
            break;
        }
        let next = pushforward(f, cur, max_refine)?;
        if !next.is_truncated() && next.same_as(cur) {
            let nu = orbit.pop().unwrap();
            let kind = kind_of(&nu);
            return Ok(report(f, nu, kind, true, i));
        }
        let stop = next.is_truncated();
        orbit.push(next);
        if stop || weights_settled(&orbit) {
            break;
        }
    }
    let last = orbit.last().unwrap().clone();
    let (lx, ly) = weights_f64(&last);
    let mut cands: Vec<ValInfinity> = monomial_candidates(f)
        .into_iter()
        .filter_map(|(wx, wy)| ValInfinity::monomial(wx, wy).ok())
        .collect();
    let dist = |v: &ValInfinity| {
        let (x, y) = weights_f64(v);
        (x - lx).abs() + (y - ly).abs()
    };
    cands.sort_by(|a, b| dist(a).total_cmp(&dist(b)));
    let iterations = orbit.len() - 1;
    if let Some(nu) = cands.into_iter().find(|v| is_fixed(f, v, max_refine)) {
        let kind = kind_of(&nu);
        return Ok(report(f, nu, kind, true, iterations));
    }
    if let Some(depth) = stable_prefix(&orbit) {
        let mut nu = last;
        nu.set_tail(Tail::Truncated(depth));
        return Ok(report(f, nu, EigenKind::Truncated(depth), false, iterations));
    }
    Ok(report(f, last, EigenKind::NotConverged, false, iterations))
}
