//! Floats with a wide exponent.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

const LN_2: f64 = std::f64::consts::LN_2;

/// Splits a finite nonzero `x` into `m * 2^e` with `1 <= |m| < 2`.
fn frexp(x: f64) -> (f64, i64) {
    if x == 0.0 || !x.is_finite() {
        return (x, 0);
    }
    let (x, bias) = if x.abs() < f64::MIN_POSITIVE { (x * 2f64.powi(64), -64) } else { (x, 0) };
    let bits = x.to_bits();
    let e = ((bits >> 52) & 0x7ff) as i64 - 1023;
    let m = f64::from_bits((bits & !(0x7ff << 52)) | (1023 << 52));
    (m, e + bias)
}

/// `2^k` for any `k`; zero or infinity out of range.
fn pow2(k: i64) -> f64 {
    if k < -1074 {
        0.0
    } else if k > 1023 {
        f64::INFINITY
    } else if k < -1022 {
        2f64.powi(-1022) * 2f64.powi((k + 1022) as i32)
    } else {
        2f64.powi(k as i32)
    }
}

/// `mantissa * 2^exponent` with `1 <= |mantissa| < 2`, or zero.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExtFloat {
    mantissa: f64,
    exponent: i64,
}

impl ExtFloat {
    pub const ZERO: ExtFloat = ExtFloat { mantissa: 0.0, exponent: 0 };
    pub const ONE: ExtFloat = ExtFloat { mantissa: 1.0, exponent: 0 };

    pub fn new(mantissa: f64, exponent: i64) -> ExtFloat {
        let (m, e) = frexp(mantissa);
        if m == 0.0 {
            return ExtFloat::ZERO;
        }
        ExtFloat { mantissa: m, exponent: exponent + e }
    }

    pub fn from_f64(x: f64) -> ExtFloat {
        ExtFloat::new(x, 0)
    }

    pub fn mantissa(&self) -> f64 {
        self.mantissa
    }

    pub fn exponent(&self) -> i64 {
        self.exponent
    }

    pub fn is_zero(&self) -> bool {
        self.mantissa == 0.0
    }

    pub fn is_finite(&self) -> bool {
        self.mantissa.is_finite()
    }

    pub fn abs(self) -> ExtFloat {
        ExtFloat { mantissa: self.mantissa.abs(), ..self }
    }

    /// Saturates to `±inf` or `0`.
    pub fn to_f64(self) -> f64 {
        self.mantissa * pow2(self.exponent)
    }

    /// Natural log of the absolute value; `-inf` at zero.
    pub fn ln(self) -> f64 {
        if self.is_zero() {
            return f64::NEG_INFINITY;
        }
        self.mantissa.abs().ln() + self.exponent as f64 * LN_2
    }

    fn cmp_abs(&self, o: &ExtFloat) -> Ordering {
        match (self.is_zero(), o.is_zero()) {
            (true, true) => Ordering::Equal,
            (true, false) => Ordering::Less,
            (false, true) => Ordering::Greater,
            _ => self
                .exponent
                .cmp(&o.exponent)
                .then(self.mantissa.abs().total_cmp(&o.mantissa.abs())),
        }
    }
}

impl PartialOrd for ExtFloat {
    fn partial_cmp(&self, o: &ExtFloat) -> Option<Ordering> {
        if !self.is_finite() || !o.is_finite() {
            return self.to_f64().partial_cmp(&o.to_f64());
        }
        let (s, t) = (self.mantissa.signum() as i32 * !self.is_zero() as i32, o.mantissa.signum() as i32 * !o.is_zero() as i32);
        Some(match s.cmp(&t) {
            Ordering::Equal if s >= 0 => self.cmp_abs(o),
            Ordering::Equal => o.cmp_abs(self),
            other => other,
        })
    }
}

impl Mul for ExtFloat {
    type Output = ExtFloat;
    fn mul(self, o: ExtFloat) -> ExtFloat {
        ExtFloat::new(self.mantissa * o.mantissa, self.exponent + o.exponent)
    }
}

impl Add for ExtFloat {
    type Output = ExtFloat;
    fn add(self, o: ExtFloat) -> ExtFloat {
        if self.is_zero() {
            return o;
        }
        if o.is_zero() {
            return self;
        }
        let (big, small) = if self.exponent >= o.exponent { (self, o) } else { (o, self) };
        let m = big.mantissa + small.mantissa * pow2(small.exponent - big.exponent);
        ExtFloat::new(m, big.exponent)
    }
}

impl Neg for ExtFloat {
    type Output = ExtFloat;
    fn neg(self) -> ExtFloat {
        ExtFloat { mantissa: -self.mantissa, ..self }
    }
}

impl Sub for ExtFloat {
    type Output = ExtFloat;
    fn sub(self, o: ExtFloat) -> ExtFloat {
        self + (-o)
    }
}

impl fmt::Display for ExtFloat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let x = self.to_f64();
        if x.is_finite() && (x == 0.0 || x.abs() > 1e-300) {
            return write!(f, "{x}");
        }
        // m * 10^k from the base-2 log
        let l10 = self.abs().ln() / std::f64::consts::LN_10;
        let k = l10.floor();
        let m = 10f64.powf(l10 - k) * self.mantissa.signum();
        write!(f, "{m}e{k}")
    }
}

/// A complex number `mantissa * 2^exponent`, with the larger part of the
/// mantissa in `[1, 2)` in absolute value.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExtComplex {
    mantissa: Complex64,
    exponent: i64,
}

impl ExtComplex {
    pub const ZERO: ExtComplex = ExtComplex { mantissa: Complex64::new(0.0, 0.0), exponent: 0 };

    pub fn new(m: Complex64, exponent: i64) -> ExtComplex {
        let big = m.re.abs().max(m.im.abs());
        if big == 0.0 {
            return ExtComplex::ZERO;
        }
        let (_, e) = frexp(big);
        let s = pow2(-e);
        ExtComplex { mantissa: Complex64::new(m.re * s, m.im * s), exponent: exponent + e }
    }

    pub fn from_c64(z: Complex64) -> ExtComplex {
        ExtComplex::new(z, 0)
    }

    pub fn is_zero(&self) -> bool {
        self.mantissa.re == 0.0 && self.mantissa.im == 0.0
    }

    pub fn is_finite(&self) -> bool {
        self.mantissa.is_finite()
    }

    /// `|z|` as an [`ExtFloat`].
    pub fn modulus(&self) -> ExtFloat {
        ExtFloat::new(self.mantissa.norm(), self.exponent)
    }

    pub fn to_c64(self) -> Complex64 {
        let s = pow2(self.exponent);
        Complex64::new(self.mantissa.re * s, self.mantissa.im * s)
    }

    pub fn powu(self, k: u32) -> ExtComplex {
        let mut acc = ExtComplex::new(Complex64::new(1.0, 0.0), 0);
        let mut base = self;
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            k >>= 1;
        }
        acc
    }

    pub fn scale(self, c: Complex64) -> ExtComplex {
        ExtComplex::new(self.mantissa * c, self.exponent)
    }
}

impl Mul for ExtComplex {
    type Output = ExtComplex;
    fn mul(self, o: ExtComplex) -> ExtComplex {
        ExtComplex::new(self.mantissa * o.mantissa, self.exponent + o.exponent)
    }
}

impl Add for ExtComplex {
    type Output = ExtComplex;
    fn add(self, o: ExtComplex) -> ExtComplex {
        if self.is_zero() {
            return o;
        }
        if o.is_zero() {
            return self;
        }
        let (big, small) = if self.exponent >= o.exponent { (self, o) } else { (o, self) };
        let m = big.mantissa + small.mantissa * pow2(small.exponent - big.exponent);
        ExtComplex::new(m, big.exponent)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalizes() {
        let x = ExtFloat::from_f64(12.0);
        assert_eq!((x.mantissa(), x.exponent()), (1.5, 3));
        assert_eq!(ExtFloat::from_f64(-0.75).exponent(), -1);
        assert!(ExtFloat::from_f64(0.0).is_zero());
        assert_eq!(ExtFloat::from_f64(5e-320).to_f64(), 5e-320);
    }

    #[test]
    fn arithmetic_beyond_f64() {
        let big = ExtFloat::new(1.0, 5000);
        let sq = big * big;
        assert_eq!(sq.exponent(), 10_000);
        assert!((sq.ln() - 10_000.0 * LN_2).abs() < 1e-9);
        assert_eq!((sq + ExtFloat::ONE), sq);
        assert!(sq > big && -sq < -big && ExtFloat::ZERO < big);
        assert_eq!((big - big), ExtFloat::ZERO);
    }

    #[test]
    fn complex_ops() {
        let z = ExtComplex::from_c64(Complex64::new(3.0, 4.0));
        assert_eq!(z.modulus().to_f64(), 5.0);
        let p = z.powu(1000);
        assert!((p.modulus().ln() - 1000.0 * 5f64.ln()).abs() < 1e-9);
        let w = (z * z).to_c64();
        assert!((w - Complex64::new(-7.0, 24.0)).norm() < 1e-12);
        assert_eq!((z + ExtComplex::ZERO), z);
    }
}
