//! Sparse bivariate polynomials and polynomial maps of the plane.

mod parse;
mod resultant;
mod trunc;

pub use parse::parse_map;
pub use resultant::{resultant_y, topological_degree, DEFAULT_SEED};
pub use trunc::Weight;

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use thiserror::Error;

use crate::numeric::{Coeff, QuadReal, Rat};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("syntax error at line {line}, column {col}: {msg}")]
    SyntaxError { line: usize, col: usize, msg: String },
    #[error("unknown identifier `{name}` at line {line}, column {col}")]
    UnknownIdentifier { name: String, line: usize, col: usize },
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("map is not dominant")]
    NonDominant,
    #[error("topological degree unstable across trials: {0:?}")]
    Unstable(Vec<usize>),
}

/// Sparse polynomial in `x` and `y`; keys are exponent pairs `(i, j)` for
/// `x^i y^j`. Zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BiPoly {
    terms: BTreeMap<(u32, u32), Coeff>,
}

impl BiPoly {
    pub fn zero() -> BiPoly {
        BiPoly::default()
    }

    pub fn constant(c: Coeff) -> BiPoly {
        BiPoly::monomial(c, 0, 0)
    }

    pub fn one() -> BiPoly {
        BiPoly::constant(Coeff::one())
    }

    pub fn x() -> BiPoly {
        BiPoly::monomial(Coeff::one(), 1, 0)
    }

    pub fn y() -> BiPoly {
        BiPoly::monomial(Coeff::one(), 0, 1)
    }

    pub fn monomial(c: Coeff, i: u32, j: u32) -> BiPoly {
        let mut p = BiPoly::zero();
        p.add_term(i, j, c);
        p
    }

    pub fn from_terms(terms: impl IntoIterator<Item = ((u32, u32), Coeff)>) -> BiPoly {
        let mut p = BiPoly::zero();
        for ((i, j), c) in terms {
            p.add_term(i, j, c);
        }
        p
    }

    /// Adds `c x^i y^j` in place.
    pub fn add_term(&mut self, i: u32, j: u32, c: Coeff) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry((i, j)) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                let s = e.get() + &c;
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &Coeff)> {
        self.terms.iter()
    }

    pub fn coeff(&self, i: u32, j: u32) -> Coeff {
        self.terms.get(&(i, j)).cloned().unwrap_or_else(Coeff::zero)
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|(i, j)| i + j).max()
    }

    pub fn deg_x(&self) -> Option<u32> {
        self.terms.keys().map(|k| k.0).max()
    }

    pub fn deg_y(&self) -> Option<u32> {
        self.terms.keys().map(|k| k.1).max()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|&k| k == (0, 0))
    }

    pub fn scale(&self, c: &Coeff) -> BiPoly {
        if c.is_zero() {
            return BiPoly::zero();
        }
        BiPoly {
            terms: self.terms.iter().map(|(k, v)| (*k, v * c)).collect(),
        }
    }

    pub fn pow(&self, mut e: u32) -> BiPoly {
        let mut acc = BiPoly::one();
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn dx(&self) -> BiPoly {
        BiPoly::from_terms(
            self.terms
                .iter()
                .filter(|(k, _)| k.0 > 0)
                .map(|(&(i, j), c)| ((i - 1, j), c * &Coeff::from(i as i64))),
        )
    }

    pub fn dy(&self) -> BiPoly {
        BiPoly::from_terms(
            self.terms
                .iter()
                .filter(|(k, _)| k.1 > 0)
                .map(|(&(i, j), c)| ((i, j - 1), c * &Coeff::from(j as i64))),
        )
    }

    /// `R(p, q)`: substitutes `x -> p`, `y -> q`.
    pub fn substitute(&self, p: &BiPoly, q: &BiPoly) -> BiPoly {
        let (Some(dx), Some(dy)) = (self.deg_x(), self.deg_y()) else {
            return BiPoly::zero();
        };
        let mut ppow = vec![BiPoly::one()];
        for k in 0..dx as usize {
            ppow.push(&ppow[k] * p);
        }
        let mut qpow = vec![BiPoly::one()];
        for k in 0..dy as usize {
            qpow.push(&qpow[k] * q);
        }
        let mut rows = vec![BiPoly::zero(); dy as usize + 1];
        for (&(i, j), c) in &self.terms {
            let row = &mut rows[j as usize];
            for (&(a, b), pc) in &ppow[i as usize].terms {
                row.add_term(a, b, pc * c);
            }
        }
        let mut out = BiPoly::zero();
        for (j, row) in rows.iter().enumerate() {
            if !row.is_zero() {
                out = &out + &(row * &qpow[j]);
            }
        }
        out
    }

    /// Sum of the monomials of minimal weight `i*wx + j*wy`.
    pub fn leading_part(&self, wx: &QuadReal, wy: &QuadReal) -> Result<BiPoly, PolyError> {
        let weight = |i: u32, j: u32| wx.scale(&Rat::from(i as i64)) + wy.scale(&Rat::from(j as i64));
        let min = self
            .terms
            .keys()
            .map(|&(i, j)| weight(i, j))
            .min()
            .ok_or(PolyError::ZeroPolynomial)?;
        Ok(BiPoly::from_terms(
            self.terms
                .iter()
                .filter(|(&(i, j), _)| weight(i, j) == min)
                .map(|(k, c)| (*k, c.clone())),
        ))
    }

    /// Homogeneous part of top total degree.
    pub fn top_form(&self) -> BiPoly {
        let Some(d) = self.degree() else {
            return BiPoly::zero();
        };
        BiPoly::from_terms(
            self.terms
                .iter()
                .filter(|(k, _)| k.0 + k.1 == d)
                .map(|(k, c)| (*k, c.clone())),
        )
    }

    /// Terms in graded lexicographic order: higher total degree first, then
    /// higher power of `x`.
    pub fn graded_terms(&self) -> Vec<((u32, u32), &Coeff)> {
        let mut v: Vec<_> = self.terms.iter().map(|(k, c)| (*k, c)).collect();
        v.sort_by(|a, b| {
            let (da, db) = (a.0 .0 + a.0 .1, b.0 .0 + b.0 .1);
            db.cmp(&da).then(b.0 .0.cmp(&a.0 .0))
        });
        v
    }

    pub fn eval_rat(&self, x: &Rat, y: &Rat) -> Option<Rat> {
        let mut acc = Rat::zero();
        for (&(i, j), c) in &self.terms {
            acc += &(c.as_rat()? * x.pow(i as i32) * y.pow(j as i32));
        }
        Some(acc)
    }

    pub fn map_coeffs(&self, f: impl Fn(&Coeff) -> Coeff) -> BiPoly {
        BiPoly::from_terms(self.terms.iter().map(|(k, c)| (*k, f(c))))
    }
}

fn write_monomial(f: &mut fmt::Formatter<'_>, i: u32, j: u32) -> fmt::Result {
    let mut parts = Vec::new();
    match i {
        0 => {}
        1 => parts.push("x".to_string()),
        _ => parts.push(format!("x^{i}")),
    }
    match j {
        0 => {}
        1 => parts.push("y".to_string()),
        _ => parts.push(format!("y^{j}")),
    }
    write!(f, "{}", parts.join("*"))
}

impl fmt::Display for BiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (n, ((i, j), c)) in self.graded_terms().into_iter().enumerate() {
            let neg = c.as_rat().is_some_and(Rat::is_negative);
            let mag = if neg { -c } else { c.clone() };
            match (n, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if i + j == 0 {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write_monomial(f, i, j)?;
            } else {
                write!(f, "{mag}*")?;
                write_monomial(f, i, j)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for BiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl<'b> Add<&'b BiPoly> for &BiPoly {
    type Output = BiPoly;
    fn add(self, rhs: &'b BiPoly) -> BiPoly {
        let mut out = self.clone();
        for (&(i, j), c) in &rhs.terms {
            out.add_term(i, j, c.clone());
        }
        out
    }
}

impl<'b> Sub<&'b BiPoly> for &BiPoly {
    type Output = BiPoly;
    fn sub(self, rhs: &'b BiPoly) -> BiPoly {
        let mut out = self.clone();
        for (&(i, j), c) in &rhs.terms {
            out.add_term(i, j, -c);
        }
        out
    }
}

impl<'b> Mul<&'b BiPoly> for &BiPoly {
    type Output = BiPoly;
    fn mul(self, rhs: &'b BiPoly) -> BiPoly {
        let mut acc: BTreeMap<(u32, u32), Coeff> = BTreeMap::new();
        for (&(i1, j1), c1) in &self.terms {
            for (&(i2, j2), c2) in &rhs.terms {
                let e = acc.entry((i1 + i2, j1 + j2)).or_insert_with(Coeff::zero);
                *e = &*e + &(c1 * c2);
            }
        }
        acc.retain(|_, c| !c.is_zero());
        BiPoly { terms: acc }
    }
}

impl Neg for &BiPoly {
    type Output = BiPoly;
    fn neg(self) -> BiPoly {
        self.map_coeffs(|c| -c)
    }
}

macro_rules! owned_binop {
    ($tr:ident, $m:ident) => {
        impl $tr<BiPoly> for BiPoly {
            type Output = BiPoly;
            fn $m(self, rhs: BiPoly) -> BiPoly {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a BiPoly> for BiPoly {
            type Output = BiPoly;
            fn $m(self, rhs: &'a BiPoly) -> BiPoly {
                (&self).$m(rhs)
            }
        }
    };
}

owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);

/// A polynomial map `F(x, y) = (P(x, y), Q(x, y))`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct PolyMap {
    pub p: BiPoly,
    pub q: BiPoly,
}

impl PolyMap {
    pub fn new(p: BiPoly, q: BiPoly) -> PolyMap {
        PolyMap { p, q }
    }

    pub fn identity() -> PolyMap {
        PolyMap::new(BiPoly::x(), BiPoly::y())
    }

    /// `self ∘ g`.
    pub fn compose(&self, g: &PolyMap) -> PolyMap {
        PolyMap::new(self.p.substitute(&g.p, &g.q), self.q.substitute(&g.p, &g.q))
    }

    /// Pulls a polynomial back: `R ∘ F`.
    pub fn pullback(&self, r: &BiPoly) -> BiPoly {
        r.substitute(&self.p, &self.q)
    }

    /// `max(deg P, deg Q)`.
    pub fn degree(&self) -> u32 {
        self.p.degree().unwrap_or(0).max(self.q.degree().unwrap_or(0))
    }

    pub fn jacobian_det(&self) -> BiPoly {
        &(&self.p.dx() * &self.q.dy()) - &(&self.p.dy() * &self.q.dx())
    }

    pub fn is_dominant(&self) -> bool {
        !self.jacobian_det().is_zero()
    }

    /// Number of monomials over both components.
    pub fn size(&self) -> usize {
        self.p.len() + self.q.len()
    }
}

impl fmt::Display for PolyMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "P = {}; Q = {}", self.p, self.q)
    }
}
