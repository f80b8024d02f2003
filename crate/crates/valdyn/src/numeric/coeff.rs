use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::Arc;

use super::upoly;
use super::{NumericError, Rat};

/// A simple algebraic extension `Q[t]/(m(t))` with `m` monic and irreducible.
///
/// Irreducibility is the caller's responsibility; a reducible modulus shows up
/// as a failed inversion.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Extension {
    modulus: Vec<Rat>,
    name: String,
}

impl Extension {
    pub fn new(name: &str, modulus: Vec<Rat>) -> Result<Arc<Extension>, NumericError> {
        let modulus = upoly::trimmed(modulus);
        match upoly::degree(&modulus) {
            Some(d) if d >= 2 => Ok(Arc::new(Extension {
                modulus: upoly::monic(&modulus),
                name: name.to_string(),
            })),
            _ => Err(NumericError::BadModulus),
        }
    }

    pub fn degree(&self) -> usize {
        self.modulus.len() - 1
    }

    pub fn modulus(&self) -> &[Rat] {
        &self.modulus
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// The generator `t` itself.
    pub fn generator(self: &Arc<Self>) -> Coeff {
        Coeff::algebraic(self.clone(), vec![Rat::zero(), Rat::one()])
    }
}

/// Exact coefficient: a rational, or an element of one simple extension.
///
/// Elements that happen to be rational are always stored as `Coeff::Rat`, so
/// structural equality is value equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Coeff {
    Rat(Rat),
    Alg(Arc<Extension>, Vec<Rat>),
}

impl Coeff {
    pub fn zero() -> Coeff {
        Coeff::Rat(Rat::zero())
    }

    pub fn one() -> Coeff {
        Coeff::Rat(Rat::one())
    }

    pub fn from_int(n: i64) -> Coeff {
        Coeff::Rat(Rat::from(n))
    }

    pub fn algebraic(ext: Arc<Extension>, rep: Vec<Rat>) -> Coeff {
        let rep = upoly::divrem(&rep, ext.modulus()).1;
        match upoly::degree(&rep) {
            None => Coeff::zero(),
            Some(0) => Coeff::Rat(rep[0].clone()),
            Some(_) => Coeff::Alg(ext, rep),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Coeff::Rat(r) if r.is_zero())
    }

    pub fn is_one(&self) -> bool {
        matches!(self, Coeff::Rat(r) if r.is_one())
    }

    pub fn as_rat(&self) -> Option<&Rat> {
        match self {
            Coeff::Rat(r) => Some(r),
            Coeff::Alg(..) => None,
        }
    }

    pub fn extension(&self) -> Option<&Arc<Extension>> {
        match self {
            Coeff::Rat(_) => None,
            Coeff::Alg(e, _) => Some(e),
        }
    }

    /// Checks that two coefficients live in a common field.
    pub fn compatible(&self, other: &Coeff) -> Result<Option<Arc<Extension>>, NumericError> {
        match (self.extension(), other.extension()) {
            (None, None) => Ok(None),
            (Some(e), None) | (None, Some(e)) => Ok(Some(e.clone())),
            (Some(a), Some(b)) if a == b => Ok(Some(a.clone())),
            (Some(a), Some(b)) => Err(NumericError::NestedExtension(
                a.name().to_string(),
                b.name().to_string(),
            )),
        }
    }

    fn rep(&self) -> Vec<Rat> {
        match self {
            Coeff::Rat(r) if r.is_zero() => Vec::new(),
            Coeff::Rat(r) => vec![r.clone()],
            Coeff::Alg(_, v) => v.clone(),
        }
    }

    fn combine(&self, other: &Coeff, f: impl Fn(&[Rat], &[Rat]) -> Vec<Rat>) -> Coeff {
        if let (Coeff::Rat(_), Coeff::Rat(_)) = (self, other) {
            let v = f(&self.rep(), &other.rep());
            return Coeff::Rat(v.into_iter().next().unwrap_or_else(Rat::zero));
        }
        match self.compatible(other) {
            Ok(Some(ext)) => Coeff::algebraic(ext, f(&self.rep(), &other.rep())),
            Ok(None) => unreachable!(),
            Err(e) => panic!("{e}"),
        }
    }

    pub fn checked_div(&self, other: &Coeff) -> Result<Coeff, NumericError> {
        if other.is_zero() {
            return Err(NumericError::DivisionByZero);
        }
        if let (Coeff::Rat(a), Coeff::Rat(b)) = (self, other) {
            return Ok(Coeff::Rat(a / b));
        }
        let ext = self.compatible(other)?.expect("algebraic operand");
        let inv = upoly::inverse_mod(&other.rep(), ext.modulus()).ok_or(NumericError::BadModulus)?;
        Ok(Coeff::algebraic(ext.clone(), upoly::mul(&self.rep(), &inv)))
    }

    pub fn recip(&self) -> Coeff {
        Coeff::one().checked_div(self).unwrap_or_else(|e| panic!("{e}"))
    }

    pub fn pow(&self, e: i64) -> Coeff {
        let base = if e < 0 { self.recip() } else { self.clone() };
        let mut n = e.unsigned_abs();
        let mut acc = Coeff::one();
        let mut sq = base;
        while n > 0 {
            if n & 1 == 1 {
                acc = &acc * &sq;
            }
            sq = &sq * &sq;
            n >>= 1;
        }
        acc
    }

    pub fn to_f64(&self) -> Option<f64> {
        self.as_rat().map(Rat::to_f64)
    }
}

impl From<Rat> for Coeff {
    fn from(r: Rat) -> Coeff {
        Coeff::Rat(r)
    }
}

impl From<i64> for Coeff {
    fn from(n: i64) -> Coeff {
        Coeff::from_int(n)
    }
}

impl fmt::Display for Coeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coeff::Rat(r) => write!(f, "{r}"),
            Coeff::Alg(ext, rep) => {
                let mut parts = Vec::new();
                for (i, c) in rep.iter().enumerate().rev() {
                    if c.is_zero() {
                        continue;
                    }
                    parts.push(match i {
                        0 => format!("{c}"),
                        1 => format!("{c}*{}", ext.name()),
                        _ => format!("{c}*{}^{i}", ext.name()),
                    });
                }
                write!(f, "({})", parts.join(" + "))
            }
        }
    }
}

impl fmt::Debug for Coeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

macro_rules! coeff_binop {
    ($tr:ident, $m:ident, $body:expr) => {
        impl<'a, 'b> $tr<&'b Coeff> for &'a Coeff {
            type Output = Coeff;
            fn $m(self, rhs: &'b Coeff) -> Coeff {
                $body(self, rhs)
            }
        }
        impl $tr<Coeff> for Coeff {
            type Output = Coeff;
            fn $m(self, rhs: Coeff) -> Coeff {
                $body(&self, &rhs)
            }
        }
        impl<'a> $tr<&'a Coeff> for Coeff {
            type Output = Coeff;
            fn $m(self, rhs: &'a Coeff) -> Coeff {
                $body(&self, rhs)
            }
        }
        impl<'a> $tr<Coeff> for &'a Coeff {
            type Output = Coeff;
            fn $m(self, rhs: Coeff) -> Coeff {
                $body(self, &rhs)
            }
        }
    };
}

coeff_binop!(Add, add, |a: &Coeff, b: &Coeff| match (a, b) {
    (Coeff::Rat(x), Coeff::Rat(y)) => Coeff::Rat(x + y),
    _ => a.combine(b, upoly::add),
});
coeff_binop!(Sub, sub, |a: &Coeff, b: &Coeff| match (a, b) {
    (Coeff::Rat(x), Coeff::Rat(y)) => Coeff::Rat(x - y),
    _ => a.combine(b, upoly::sub),
});
coeff_binop!(Mul, mul, |a: &Coeff, b: &Coeff| match (a, b) {
    (Coeff::Rat(x), Coeff::Rat(y)) => Coeff::Rat(x * y),
    _ => a.combine(b, upoly::mul),
});
coeff_binop!(Div, div, |a: &Coeff, b: &Coeff| a
    .checked_div(b)
    .unwrap_or_else(|e| panic!("{e}")));

impl Neg for Coeff {
    type Output = Coeff;
    fn neg(self) -> Coeff {
        -&self
    }
}

impl Neg for &Coeff {
    type Output = Coeff;
    fn neg(self) -> Coeff {
        match self {
            Coeff::Rat(r) => Coeff::Rat(-r),
            Coeff::Alg(e, v) => Coeff::Alg(e.clone(), v.iter().map(|c| -c).collect()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sqrt2() -> Coeff {
        let ext = Extension::new("s", vec![Rat::from(-2), Rat::zero(), Rat::one()]).unwrap();
        ext.generator()
    }

    #[test]
    fn square_of_generator_is_rational() {
        let s = sqrt2();
        assert_eq!(&s * &s, Coeff::from_int(2));
    }

    #[test]
    fn division_inverts() {
        let s = sqrt2();
        let a = &s + &Coeff::one();
        let q = &Coeff::one() / &a;
        assert_eq!(&q * &a, Coeff::one());
    }

    #[test]
    #[should_panic(expected = "nested")]
    fn mixing_extensions_panics() {
        let a = sqrt2();
        let ext = Extension::new("r", vec![Rat::from(-3), Rat::zero(), Rat::one()]).unwrap();
        let _ = a + ext.generator();
    }
}
