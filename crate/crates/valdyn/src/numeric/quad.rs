use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};

use super::{NumericError, Rat};

/// A real number `r + s*sqrt(d)` with `d` squarefree.
///
/// Rational values always carry `d = 0` and `s = 0`. Arithmetic between two
/// irrational values is only defined inside one quadratic field; mixing fields
/// is reported by the `checked_*` methods and panics in the operator impls.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QuadReal {
    r: Rat,
    s: Rat,
    d: u64,
}

/// Splits `n > 0` into `(k, m)` with `n = k^2 * m` and `m` squarefree.
fn square_split(n: &BigInt) -> (BigInt, BigInt) {
    let mut k = BigInt::one();
    let mut m = BigInt::one();
    let mut rest = n.clone();
    let mut p = BigInt::from(2u32);
    let limit = BigInt::from(1_000_000u32);
    while &p * &p <= rest && p <= limit {
        let mut e = 0u32;
        while (&rest % &p).is_zero() {
            rest /= &p;
            e += 1;
        }
        for _ in 0..e / 2 {
            k *= &p;
        }
        if e % 2 == 1 {
            m *= &p;
        }
        p += 1u32;
    }
    let root = rest.sqrt();
    if &root * &root == rest {
        k *= root;
    } else {
        m *= rest;
    }
    (k, m)
}

impl QuadReal {
    pub fn rational(r: Rat) -> QuadReal {
        QuadReal { r, s: Rat::zero(), d: 0 }
    }

    pub fn from_int(n: i64) -> QuadReal {
        QuadReal::rational(Rat::from(n))
    }

    pub fn zero() -> QuadReal {
        QuadReal::rational(Rat::zero())
    }

    pub fn one() -> QuadReal {
        QuadReal::rational(Rat::one())
    }

    /// Builds `r + s*sqrt(radicand)` for any non-negative integer radicand,
    /// pulling square factors out so the stored `d` is squarefree.
    pub fn new(r: Rat, s: Rat, radicand: u64) -> QuadReal {
        if s.is_zero() || radicand == 0 {
            return QuadReal::rational(r);
        }
        let (k, m) = square_split(&BigInt::from(radicand));
        let s = s * Rat::from_int(k);
        let m = m.to_u64().expect("squarefree part fits u64");
        if m == 1 {
            QuadReal::rational(r + s)
        } else {
            QuadReal { r, s, d: m }
        }
    }

    /// Exact square root of a non-negative rational.
    pub fn sqrt_rat(q: &Rat) -> QuadReal {
        assert!(!q.is_negative(), "square root of a negative rational");
        if q.is_zero() {
            return QuadReal::zero();
        }
        // sqrt(a/b) = sqrt(a*b)/b
        let ab = q.numer() * q.denom();
        let (k, m) = square_split(&ab);
        let coef = Rat::new(k, q.denom().clone());
        if m.is_one() {
            QuadReal::rational(coef)
        } else {
            QuadReal {
                r: Rat::zero(),
                s: coef,
                d: m.to_u64().expect("radicand fits u64"),
            }
        }
    }

    pub fn rational_part(&self) -> &Rat {
        &self.r
    }

    pub fn surd_part(&self) -> &Rat {
        &self.s
    }

    pub fn radicand(&self) -> u64 {
        self.d
    }

    pub fn is_rational(&self) -> bool {
        self.s.is_zero()
    }

    pub fn as_rational(&self) -> Option<&Rat> {
        self.is_rational().then_some(&self.r)
    }

    pub fn is_zero(&self) -> bool {
        self.r.is_zero() && self.s.is_zero()
    }

    pub fn is_integer(&self) -> bool {
        self.is_rational() && self.r.is_integer()
    }

    fn field(&self, other: &QuadReal) -> Result<u64, NumericError> {
        match (self.d, other.d) {
            (0, d) | (d, 0) => Ok(d),
            (a, b) if a == b => Ok(a),
            (a, b) => Err(NumericError::MixedField(a, b)),
        }
    }

    fn build(r: Rat, s: Rat, d: u64) -> QuadReal {
        if s.is_zero() || d == 0 {
            QuadReal::rational(r)
        } else {
            QuadReal { r, s, d }
        }
    }

    pub fn checked_add(&self, o: &QuadReal) -> Result<QuadReal, NumericError> {
        let d = self.field(o)?;
        Ok(QuadReal::build(&self.r + &o.r, &self.s + &o.s, d))
    }

    pub fn checked_sub(&self, o: &QuadReal) -> Result<QuadReal, NumericError> {
        let d = self.field(o)?;
        Ok(QuadReal::build(&self.r - &o.r, &self.s - &o.s, d))
    }

    pub fn checked_mul(&self, o: &QuadReal) -> Result<QuadReal, NumericError> {
        let d = self.field(o)?;
        let dd = Rat::from_int(d);
        let r = &self.r * &o.r + &self.s * &o.s * &dd;
        let s = &self.r * &o.s + &self.s * &o.r;
        Ok(QuadReal::build(r, s, d))
    }

    /// Norm `r^2 - d s^2` to the rationals.
    pub fn norm(&self) -> Rat {
        &self.r * &self.r - &self.s * &self.s * Rat::from_int(self.d)
    }

    pub fn conjugate(&self) -> QuadReal {
        QuadReal::build(self.r.clone(), -&self.s, self.d)
    }

    pub fn checked_div(&self, o: &QuadReal) -> Result<QuadReal, NumericError> {
        if o.is_zero() {
            return Err(NumericError::DivisionByZero);
        }
        self.field(o)?;
        let n = o.norm();
        let num = self.checked_mul(&o.conjugate())?;
        Ok(QuadReal::build(&num.r / &n, &num.s / &n, num.d))
    }

    pub fn recip(&self) -> QuadReal {
        QuadReal::one().checked_div(self).expect("reciprocal of zero")
    }

    pub fn scale(&self, k: &Rat) -> QuadReal {
        QuadReal::build(&self.r * k, &self.s * k, self.d)
    }

    pub fn signum(&self) -> i32 {
        let (a, b) = (self.r.signum(), self.s.signum());
        if b == 0 {
            return a;
        }
        if a == 0 || a == b {
            return b;
        }
        // Opposite signs: compare r^2 with s^2 d.
        let r2 = &self.r * &self.r;
        let s2d = &self.s * &self.s * Rat::from_int(self.d);
        match r2.cmp(&s2d) {
            Ordering::Greater => a,
            Ordering::Less => b,
            Ordering::Equal => 0,
        }
    }

    pub fn abs(&self) -> QuadReal {
        if self.signum() < 0 {
            -self.clone()
        } else {
            self.clone()
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.r.to_f64() + self.s.to_f64() * (self.d as f64).sqrt()
    }

    /// Largest integer not exceeding the value.
    pub fn floor(&self) -> BigInt {
        if self.is_rational() {
            return self.r.floor();
        }
        let mut guess = BigInt::from(self.to_f64().floor() as i64);
        while QuadReal::rational(Rat::from_int(guess.clone())) > *self {
            guess -= 1;
        }
        while QuadReal::rational(Rat::from_int(&guess + 1)) <= *self {
            guess += 1;
        }
        guess
    }

    /// Monic minimal polynomial over the rationals, as coefficients from the
    /// constant term upwards.
    pub fn min_poly(&self) -> MinPoly {
        let coeffs = if self.is_rational() {
            vec![-&self.r, Rat::one()]
        } else {
            vec![self.norm(), -(&self.r * Rat::from(2)), Rat::one()]
        };
        MinPoly { coeffs }
    }
}

/// Monic minimal polynomial of a [`QuadReal`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinPoly {
    /// Coefficients from degree 0 upwards; the last entry is 1.
    pub coeffs: Vec<Rat>,
}

impl MinPoly {
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(Rat::is_integer)
    }

    pub fn eval(&self, a: &QuadReal) -> QuadReal {
        let mut acc = QuadReal::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * a) + &QuadReal::rational(c.clone());
        }
        acc
    }
}

impl fmt::Display for MinPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (deg, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            let show_coeff = deg == 0 || !mag.is_one();
            if show_coeff {
                write!(f, "{mag}")?;
            }
            match deg {
                0 => {}
                1 if show_coeff => write!(f, "*x")?,
                1 => write!(f, "x")?,
                _ if show_coeff => write!(f, "*x^{deg}")?,
                _ => write!(f, "x^{deg}")?,
            }
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl PartialOrd for QuadReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for QuadReal {
    /// Exact comparison of real embeddings. Values from different quadratic
    /// fields are compared through squaring, so the order is total.
    fn cmp(&self, other: &Self) -> Ordering {
        match self.checked_sub(other) {
            Ok(diff) => diff.signum().cmp(&0),
            Err(_) => cmp_mixed(self, other),
        }
    }
}

/// Compares `a = r1 + s1 sqrt(d1)` with `b = r2 + s2 sqrt(d2)` for distinct
/// radicands by isolating the surds and squaring.
fn cmp_mixed(a: &QuadReal, b: &QuadReal) -> Ordering {
    // a - b = (r1 - r2) + s1 sqrt(d1) - s2 sqrt(d2); sign of u + v - w with
    // u rational, v = s1 sqrt(d1), w = s2 sqrt(d2).
    let u = &a.r - &b.r;
    let w = QuadReal { r: Rat::zero(), s: b.s.clone(), d: b.d };
    let lhs = QuadReal::build(u, a.s.clone(), a.d);
    let (sl, sw) = (lhs.signum(), w.signum());
    if sl != sw {
        return sl.cmp(&sw);
    }
    if sl == 0 {
        return Ordering::Equal;
    }
    // Same sign: compare squares; lhs^2 in Q(sqrt d1), w^2 rational.
    let l2 = &lhs * &lhs;
    let w2 = QuadReal::rational(&w.s * &w.s * Rat::from_int(w.d));
    let ord = l2.cmp(&w2);
    if sl > 0 {
        ord
    } else {
        ord.reverse()
    }
}

impl fmt::Display for QuadReal {
    /// Renders `r + s*sqrt(d)` as `r + sqrt(s^2 d)` (or `- sqrt(...)`), so that
    /// for instance `-sqrt(6)/3` prints as `-sqrt(2/3)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_rational() {
            return write!(f, "{}", self.r);
        }
        let inner = &self.s * &self.s * Rat::from_int(self.d);
        let neg = self.s.is_negative();
        if self.r.is_zero() {
            write!(f, "{}sqrt({})", if neg { "-" } else { "" }, inner)
        } else {
            write!(f, "{} {} sqrt({})", self.r, if neg { "-" } else { "+" }, inner)
        }
    }
}

impl fmt::Debug for QuadReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl From<Rat> for QuadReal {
    fn from(r: Rat) -> QuadReal {
        QuadReal::rational(r)
    }
}

impl From<i64> for QuadReal {
    fn from(n: i64) -> QuadReal {
        QuadReal::from_int(n)
    }
}

macro_rules! quad_binop {
    ($tr:ident, $m:ident, $checked:ident) => {
        impl<'a, 'b> $tr<&'b QuadReal> for &'a QuadReal {
            type Output = QuadReal;
            fn $m(self, rhs: &'b QuadReal) -> QuadReal {
                self.$checked(rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }
        impl $tr<QuadReal> for QuadReal {
            type Output = QuadReal;
            fn $m(self, rhs: QuadReal) -> QuadReal {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a QuadReal> for QuadReal {
            type Output = QuadReal;
            fn $m(self, rhs: &'a QuadReal) -> QuadReal {
                (&self).$m(rhs)
            }
        }
        impl<'a> $tr<QuadReal> for &'a QuadReal {
            type Output = QuadReal;
            fn $m(self, rhs: QuadReal) -> QuadReal {
                self.$m(&rhs)
            }
        }
    };
}

quad_binop!(Add, add, checked_add);
quad_binop!(Sub, sub, checked_sub);
quad_binop!(Mul, mul, checked_mul);
quad_binop!(Div, div, checked_div);

impl Neg for QuadReal {
    type Output = QuadReal;
    fn neg(self) -> QuadReal {
        QuadReal::build(-self.r, -self.s, self.d)
    }
}

impl Neg for &QuadReal {
    type Output = QuadReal;
    fn neg(self) -> QuadReal {
        QuadReal::build(-&self.r, -&self.s, self.d)
    }
}
