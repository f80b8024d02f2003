//! Blowup chains at infinity and their dual graphs.
//!
//! Points are tracked only by the primes they lie on. Every prime carries
//! `b = -ord(L)`, `a = 1 + ord(dx ∧ dy)`, its skewness `alpha` and thinness
//! `A = a / b`.

pub(crate) mod realize;

pub use realize::{intersect, realize_divisorial, Bracket, Placement, Realization};

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_traits::One;
use thiserror::Error;

use crate::numeric::Rat;

pub type PrimeId = usize;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BlowupError {
    #[error("unknown prime {0}")]
    UnknownPrime(PrimeId),
    #[error("primes {0} and {1} do not intersect")]
    NotAdjacent(PrimeId, PrimeId),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimeRecord {
    pub id: PrimeId,
    pub b: BigInt,
    pub a: BigInt,
    pub alpha: Rat,
    pub thinness: Rat,
    pub neighbors: BTreeSet<PrimeId>,
}

impl PrimeRecord {
    pub fn in_v1(&self) -> bool {
        !self.alpha.is_negative() && !self.thinness.is_positive()
    }
}

/// A blowup to perform next.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Move {
    /// A free point on one prime.
    Free(PrimeId),
    /// The intersection point of two primes.
    Satellite(PrimeId, PrimeId),
}

/// The primes at infinity of a compactification, as a tree.
///
/// Values are persistent: blowups return a new graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualGraph {
    records: Vec<PrimeRecord>,
}

impl Default for DualGraph {
    fn default() -> Self {
        DualGraph::new()
    }
}

impl DualGraph {
    /// The projective plane: the line at infinity alone.
    pub fn new() -> DualGraph {
        DualGraph {
            records: vec![PrimeRecord {
                id: 0,
                b: BigInt::one(),
                a: BigInt::from(-2),
                alpha: Rat::one(),
                thinness: Rat::from(-2),
                neighbors: BTreeSet::new(),
            }],
        }
    }

    pub const ROOT: PrimeId = 0;

    pub fn records(&self) -> &[PrimeRecord] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn get(&self, id: PrimeId) -> Result<&PrimeRecord, BlowupError> {
        self.records.get(id).ok_or(BlowupError::UnknownPrime(id))
    }

    fn push(&mut self, b: BigInt, a: BigInt, alpha: Rat) -> PrimeId {
        let id = self.records.len();
        let thinness = Rat::from_int(a.clone()) / Rat::from_int(b.clone());
        self.records.push(PrimeRecord { id, b, a, alpha, thinness, neighbors: BTreeSet::new() });
        id
    }

    fn link(&mut self, x: PrimeId, y: PrimeId) {
        self.records[x].neighbors.insert(y);
        self.records[y].neighbors.insert(x);
    }

    fn unlink(&mut self, x: PrimeId, y: PrimeId) {
        self.records[x].neighbors.remove(&y);
        self.records[y].neighbors.remove(&x);
    }

    pub fn blowup_free(&self, e: PrimeId) -> Result<(DualGraph, PrimeId), BlowupError> {
        let r = self.get(e)?;
        let b2 = Rat::from_int(&r.b * &r.b);
        let (b, a, alpha) = (r.b.clone(), &r.a + 1, &r.alpha - &(Rat::one() / b2));
        let mut g = self.clone();
        let id = g.push(b, a, alpha);
        g.link(e, id);
        Ok((g, id))
    }

    pub fn blowup_satellite(&self, e: PrimeId, e2: PrimeId) -> Result<(DualGraph, PrimeId), BlowupError> {
        let (r1, r2) = (self.get(e)?, self.get(e2)?);
        if !r1.neighbors.contains(&e2) {
            return Err(BlowupError::NotAdjacent(e, e2));
        }
        let b = &r1.b + &r2.b;
        let a = &r1.a + &r2.a;
        let alpha = (Rat::from_int(r1.b.clone()) * &r1.alpha + Rat::from_int(r2.b.clone()) * &r2.alpha)
            / Rat::from_int(b.clone());
        let mut g = self.clone();
        let id = g.push(b, a, alpha);
        g.unlink(e, e2);
        g.link(e, id);
        g.link(id, e2);
        Ok((g, id))
    }

    pub fn apply(&self, mv: Move) -> Result<(DualGraph, PrimeId), BlowupError> {
        match mv {
            Move::Free(e) => self.blowup_free(e),
            Move::Satellite(e, e2) => self.blowup_satellite(e, e2),
        }
    }

    /// Every prime lies in the subtree `V1`.
    pub fn is_tight(&self) -> bool {
        self.records.iter().all(PrimeRecord::in_v1)
    }

    /// Whether `mv` keeps a tight compactification tight: a free point on a
    /// prime with zero skewness or zero thinness may not be blown up, every
    /// satellite point may.
    pub fn legal_next(&self, mv: Move) -> bool {
        match mv {
            Move::Free(e) => self
                .get(e)
                .is_ok_and(|r| !r.alpha.is_zero() && !r.thinness.is_zero()),
            Move::Satellite(e, e2) => self.get(e).is_ok_and(|r| r.neighbors.contains(&e2)),
        }
    }

    /// Every currently legal move, free ones first, in id order.
    pub fn legal_moves(&self) -> Vec<Move> {
        let mut out: Vec<Move> = (0..self.len()).map(Move::Free).filter(|&m| self.legal_next(m)).collect();
        for r in &self.records {
            for &n in r.neighbors.range(r.id + 1..) {
                out.push(Move::Satellite(r.id, n));
            }
        }
        out
    }

    /// The `blowup dump` text: one `id b a alpha A neighbors=[..]` line per
    /// prime.
    pub fn dump(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for DualGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.records {
            let n: Vec<String> = r.neighbors.iter().map(ToString::to_string).collect();
            writeln!(f, "{} {} {} {} {} neighbors=[{}]", r.id, r.b, r.a, r.alpha, r.thinness, n.join(","))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(g: &DualGraph, id: PrimeId) -> (i64, i64, Rat, Rat) {
        let r = g.get(id).unwrap();
        (
            r.b.clone().try_into().unwrap(),
            r.a.clone().try_into().unwrap(),
            r.alpha.clone(),
            r.thinness.clone(),
        )
    }

    #[test]
    fn free_blowups_from_root() {
        let g = DualGraph::new();
        let (g, p) = g.blowup_free(DualGraph::ROOT).unwrap();
        assert_eq!(rec(&g, p), (1, -1, Rat::zero(), Rat::from(-1)));
        let (g2, q) = g.blowup_free(p).unwrap();
        assert_eq!(rec(&g2, q), (1, 0, Rat::from(-1), Rat::zero()));
        let (g3, r) = g.blowup_free(DualGraph::ROOT).unwrap();
        assert_eq!(rec(&g3, r), rec(&g3, p));
        assert_ne!(r, p);
    }

    #[test]
    fn satellite_blowups() {
        let (g, p) = DualGraph::new().blowup_free(DualGraph::ROOT).unwrap();
        let (g, s) = g.blowup_satellite(DualGraph::ROOT, p).unwrap();
        assert_eq!(rec(&g, s), (2, -3, Rat::new(1, 2), Rat::new(-3, 2)));
        let (g, t) = g.blowup_satellite(s, p).unwrap();
        assert_eq!(rec(&g, t), (3, -4, Rat::new(1, 3), Rat::new(-4, 3)));
        assert!(!g.get(DualGraph::ROOT).unwrap().neighbors.contains(&p));
    }

    #[test]
    fn satellite_needs_adjacency() {
        let (g, p) = DualGraph::new().blowup_free(DualGraph::ROOT).unwrap();
        let (g, q) = g.blowup_free(DualGraph::ROOT).unwrap();
        assert_eq!(g.blowup_satellite(p, q), Err(BlowupError::NotAdjacent(p, q)));
        assert_eq!(g.blowup_satellite(0, 0), Err(BlowupError::NotAdjacent(0, 0)));
        assert_eq!(g.blowup_free(9).unwrap_err(), BlowupError::UnknownPrime(9));
    }

    #[test]
    fn tightness() {
        let g = DualGraph::new();
        assert!(g.is_tight());
        let (g1, p) = g.blowup_free(0).unwrap();
        let (g2, _) = g1.blowup_free(p).unwrap();
        assert!(!g2.is_tight());
        assert!(!g1.legal_next(Move::Free(p)));
        let (g3, _) = g1.blowup_satellite(0, p).unwrap();
        assert!(g3.is_tight());
    }

    #[test]
    fn dump_format() {
        let (g, _) = DualGraph::new().blowup_free(0).unwrap();
        assert_eq!(g.dump(), "0 1 -2 1 -2 neighbors=[1]\n1 1 -1 0 -1 neighbors=[0]\n");
    }
}
