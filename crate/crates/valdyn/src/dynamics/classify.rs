//! The `lambda2` versus `lambda1^2` dichotomy.

use std::fmt;

use num_bigint::BigInt;

use super::{degree_prefix, detect_recurrence, eigenvaluation, tf_segment, DynError, EigenKind, OrbitBudget, EigenReport, Recurrence, TfSegment, DEFAULT_MAX_ITER};
use crate::numeric::QuadReal;
use crate::poly::{topological_degree, PolyMap, DEFAULT_SEED};
use crate::valtree::DEFAULT_MAX_REFINE;

/// Degree terms computed for the recurrence.
pub const CLASSIFY_TERMS: usize = 8;
pub const CLASSIFY_MAX_ORDER: usize = 3;
/// Orbit elements outside this budget are not pushed forward; the
/// recurrence order shrinks with the number of terms obtained.
pub const CLASSIFY_BUDGET: OrbitBudget = OrbitBudget { key_degree: 16, probe_degree: 48 };

#[derive(Clone, Debug)]
pub enum Branch {
    /// `deg F^n ~ n lambda1^n`; `skew_form` when the map is already a skew
    /// product in the given coordinates.
    Skew { skew_form: bool },
    /// `deg F^n ~ lambda1^n`, with the monomial part of `T_F` when it could
    /// be computed in the given coordinates.
    Toric { segment: Option<TfSegment> },
    Automorphism,
    /// `lambda2 < lambda1`.
    SmallDegree { eigen: Option<EigenKind> },
    /// `lambda1 <= lambda2 < lambda1^2`.
    General { eigen: Option<EigenKind> },
}

impl Branch {
    pub fn label(&self) -> &'static str {
        match self {
            Branch::Skew { .. } => "C1-skew",
            Branch::Toric { .. } => "C2-toric",
            Branch::Automorphism => "automorphism-bounded",
            Branch::SmallDegree { .. } => "small-degree-lt",
            Branch::General { .. } => "general",
        }
    }
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Clone, Debug)]
pub struct Classification {
    pub lambda1: QuadReal,
    pub lambda2: u64,
    pub branch: Branch,
    pub degrees: Vec<BigInt>,
    pub recurrence: Recurrence,
    pub eigen: Option<EigenReport>,
}

impl Classification {
    /// Rays of the fan at infinity, `(p, q)` for each endpoint of `T_F`
    /// with `nu(x) = -p/q`, `nu(y) = -1` or the symmetric chart. Rational
    /// endpoints only.
    pub fn toric_rays(&self) -> Vec<String> {
        let Branch::Toric { segment: Some(s) } = &self.branch else {
            return Vec::new();
        };
        let mut out = vec![ray(&s.lo)];
        if !s.is_singleton() {
            out.push(ray(&s.hi));
        }
        out
    }
}

fn ray(w: &(QuadReal, QuadReal)) -> String {
    format!("({}, {})", -&w.0, -&w.1)
}

/// `P = P(x)` and `Q = A(x) y^k + O_x(y^{k-1})` with `k >= 1`, `deg A >= 1`.
pub fn is_skew_form(f: &PolyMap) -> bool {
    skew_exponent(f).is_some()
}

fn skew_exponent(f: &PolyMap) -> Option<u32> {
    if f.p.deg_y() != Some(0) {
        return None;
    }
    let k = f.q.deg_y().filter(|&k| k >= 1)?;
    let a_deg = f.q.terms().filter(|(e, _)| e.1 == k).map(|(e, _)| e.0).max()?;
    (a_deg >= 1).then_some(k)
}

pub fn classify(f: &PolyMap) -> Result<Classification, DynError> {
    classify_with_seed(f, DEFAULT_SEED)
}

/// `seed` drives the random shear and target of the topological degree.
pub fn classify_with_seed(f: &PolyMap, seed: u64) -> Result<Classification, DynError> {
    let lambda2 = topological_degree(f, seed)? as u64;
    let report = degree_prefix(f, CLASSIFY_TERMS, DEFAULT_MAX_REFINE, CLASSIFY_BUDGET)?;
    let degrees = report.degrees;
    let order = CLASSIFY_MAX_ORDER.min(degrees.len().saturating_sub(2) / 2);
    let recurrence = detect_recurrence(&degrees, order)
        .map_err(|e| DynError::Inconclusive(format!("recurrence: {e}")))?;
    let lambda1 = recurrence.dominant_root.clone();
    let eigen = eigenvaluation(f, DEFAULT_MAX_ITER, DEFAULT_MAX_REFINE).ok();
    let l2 = QuadReal::from_int(lambda2 as i64);
    let square = &lambda1 * &lambda1;
    let branch = if l2 == square {
        if recurrence.dominant_multiplicity >= 2 {
            let skew_form = skew_exponent(f).is_some_and(|k| QuadReal::from_int(k as i64) == lambda1);
            Branch::Skew { skew_form }
        } else if lambda1 == QuadReal::one() {
            Branch::Automorphism
        } else {
            Branch::Toric { segment: tf_segment(f).ok() }
        }
    } else if l2 < square {
        let kind = eigen.as_ref().map(|e| e.kind);
        if l2 < lambda1 {
            Branch::SmallDegree { eigen: kind }
        } else {
            Branch::General { eigen: kind }
        }
    } else {
        return Err(DynError::Inconclusive(format!("lambda2 = {lambda2} exceeds lambda1^2 = {square}")));
    };
    Ok(Classification { lambda1, lambda2, branch, degrees, recurrence, eigen })
}
