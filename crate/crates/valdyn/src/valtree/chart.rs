//! Polynomials in a chart `(u, v)`: Laurent in the major variable `u`,
//! polynomial in the minor variable `v`.

use std::fmt;

use crate::numeric::Coeff;
use crate::poly::BiPoly;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub enum Chart {
    /// `u = x`, `v = y`.
    XMajor,
    /// `u = y`, `v = x`.
    YMajor,
}

impl Chart {
    pub fn major_name(self) -> &'static str {
        match self {
            Chart::XMajor => "x",
            Chart::YMajor => "y",
        }
    }

    pub fn minor_name(self) -> &'static str {
        match self {
            Chart::XMajor => "y",
            Chart::YMajor => "x",
        }
    }
}

impl fmt::Display for Chart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Chart::XMajor => write!(f, "x-major"),
            Chart::YMajor => write!(f, "y-major"),
        }
    }
}

/// Dense Laurent polynomial `sum c[k] u^(low + k)`, trimmed at both ends.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct LPoly {
    low: i64,
    c: Vec<Coeff>,
}

impl LPoly {
    pub fn zero() -> LPoly {
        LPoly::default()
    }

    pub fn monomial(c: Coeff, e: i64) -> LPoly {
        LPoly::from_dense(e, vec![c])
    }

    pub fn from_dense(low: i64, c: Vec<Coeff>) -> LPoly {
        let mut p = LPoly { low, c };
        p.trim();
        p
    }

    fn trim(&mut self) {
        while self.c.last().is_some_and(Coeff::is_zero) {
            self.c.pop();
        }
        let lead = self.c.iter().take_while(|c| c.is_zero()).count();
        if lead > 0 {
            self.c.drain(..lead);
            self.low += lead as i64;
        }
        if self.c.is_empty() {
            self.low = 0;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn low(&self) -> Option<i64> {
        (!self.is_zero()).then_some(self.low)
    }

    pub fn high(&self) -> Option<i64> {
        (!self.is_zero()).then(|| self.low + self.c.len() as i64 - 1)
    }

    /// Coefficient of the top power of `u`.
    pub fn top_coeff(&self) -> Option<&Coeff> {
        self.c.last()
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &Coeff)> {
        self.c
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(k, c)| (self.low + k as i64, c))
    }

    pub fn is_one(&self) -> bool {
        self.low == 0 && self.c.len() == 1 && self.c[0].is_one()
    }

    pub fn add(&self, o: &LPoly) -> LPoly {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        let low = self.low.min(o.low);
        let high = self.high().unwrap().max(o.high().unwrap());
        let mut c = vec![Coeff::zero(); (high - low + 1) as usize];
        for (e, x) in self.terms().chain(o.terms()) {
            let slot = &mut c[(e - low) as usize];
            *slot = &*slot + x;
        }
        LPoly::from_dense(low, c)
    }

    pub fn neg(&self) -> LPoly {
        LPoly { low: self.low, c: self.c.iter().map(|x| -x).collect() }
    }

    pub fn sub(&self, o: &LPoly) -> LPoly {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &LPoly) -> LPoly {
        if self.is_zero() || o.is_zero() {
            return LPoly::zero();
        }
        let mut c = vec![Coeff::zero(); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                if !b.is_zero() {
                    c[i + j] = &c[i + j] + &(a * b);
                }
            }
        }
        LPoly::from_dense(self.low + o.low, c)
    }

    pub fn scale(&self, k: &Coeff) -> LPoly {
        LPoly::from_dense(self.low, self.c.iter().map(|x| x * k).collect())
    }

    pub fn shift(&self, n: i64) -> LPoly {
        if self.is_zero() {
            return LPoly::zero();
        }
        LPoly { low: self.low + n, c: self.c.clone() }
    }
}

/// `sum_j rows[j](u) v^j`, with no trailing zero rows.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct ChartPoly {
    rows: Vec<LPoly>,
}

impl ChartPoly {
    pub fn zero() -> ChartPoly {
        ChartPoly::default()
    }

    pub fn one() -> ChartPoly {
        ChartPoly::from_rows(vec![LPoly::monomial(Coeff::one(), 0)])
    }

    /// The minor variable `v`.
    pub fn minor() -> ChartPoly {
        ChartPoly::from_rows(vec![LPoly::zero(), LPoly::monomial(Coeff::one(), 0)])
    }

    pub fn u_power(n: i64) -> ChartPoly {
        ChartPoly::from_rows(vec![LPoly::monomial(Coeff::one(), n)])
    }

    pub fn from_rows(mut rows: Vec<LPoly>) -> ChartPoly {
        while rows.last().is_some_and(LPoly::is_zero) {
            rows.pop();
        }
        ChartPoly { rows }
    }

    pub fn from_bipoly(p: &BiPoly, chart: Chart) -> ChartPoly {
        let mut rows: Vec<LPoly> = Vec::new();
        for (&(i, j), c) in p.terms() {
            let (ue, ve) = match chart {
                Chart::XMajor => (i, j),
                Chart::YMajor => (j, i),
            };
            let ve = ve as usize;
            if rows.len() <= ve {
                rows.resize(ve + 1, LPoly::zero());
            }
            rows[ve] = rows[ve].add(&LPoly::monomial(c.clone(), ue as i64));
        }
        ChartPoly::from_rows(rows)
    }

    /// Smallest power of `u` present (may be negative).
    pub fn min_u(&self) -> i64 {
        self.rows.iter().filter_map(LPoly::low).min().unwrap_or(0)
    }

    /// Returns `(u^s * self, s)` with `s >= 0` minimal so the result is a
    /// genuine polynomial in `x, y`.
    pub fn to_bipoly(&self, chart: Chart) -> (BiPoly, i64) {
        let s = (-self.min_u()).max(0);
        let mut out = BiPoly::zero();
        for (j, row) in self.rows.iter().enumerate() {
            for (e, c) in row.terms() {
                let (ue, ve) = ((e + s) as u32, j as u32);
                match chart {
                    Chart::XMajor => out.add_term(ue, ve, c.clone()),
                    Chart::YMajor => out.add_term(ve, ue, c.clone()),
                }
            }
        }
        (out, s)
    }

    pub fn is_zero(&self) -> bool {
        self.rows.is_empty()
    }

    /// Degree in the minor variable.
    pub fn deg_v(&self) -> Option<usize> {
        self.rows.len().checked_sub(1)
    }

    pub fn rows(&self) -> &[LPoly] {
        &self.rows
    }

    pub fn row(&self, j: usize) -> LPoly {
        self.rows.get(j).cloned().unwrap_or_default()
    }

    pub fn is_monic(&self) -> bool {
        self.rows.last().is_some_and(LPoly::is_one)
    }

    pub fn add(&self, o: &ChartPoly) -> ChartPoly {
        let n = self.rows.len().max(o.rows.len());
        ChartPoly::from_rows((0..n).map(|j| self.row(j).add(&o.row(j))).collect())
    }

    pub fn sub(&self, o: &ChartPoly) -> ChartPoly {
        let n = self.rows.len().max(o.rows.len());
        ChartPoly::from_rows((0..n).map(|j| self.row(j).sub(&o.row(j))).collect())
    }

    pub fn mul(&self, o: &ChartPoly) -> ChartPoly {
        if self.is_zero() || o.is_zero() {
            return ChartPoly::zero();
        }
        let mut rows = vec![LPoly::zero(); self.rows.len() + o.rows.len() - 1];
        for (i, a) in self.rows.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.rows.iter().enumerate() {
                if !b.is_zero() {
                    rows[i + j] = rows[i + j].add(&a.mul(b));
                }
            }
        }
        ChartPoly::from_rows(rows)
    }

    pub fn scale(&self, k: &Coeff) -> ChartPoly {
        ChartPoly::from_rows(self.rows.iter().map(|r| r.scale(k)).collect())
    }

    pub fn shift_u(&self, n: i64) -> ChartPoly {
        ChartPoly::from_rows(self.rows.iter().map(|r| r.shift(n)).collect())
    }

    pub fn pow(&self, e: u64) -> ChartPoly {
        let mut acc = ChartPoly::one();
        let mut base = self.clone();
        let mut n = e;
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&base);
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Quotient and remainder by a polynomial monic in `v`.
    pub fn divrem_monic(&self, d: &ChartPoly) -> (ChartPoly, ChartPoly) {
        debug_assert!(d.is_monic());
        let dd = d.rows.len() - 1;
        if self.rows.len() <= dd {
            return (ChartPoly::zero(), self.clone());
        }
        let mut rem = self.rows.clone();
        let mut quo = vec![LPoly::zero(); rem.len() - dd];
        for top in (dd..rem.len()).rev() {
            let q = std::mem::take(&mut rem[top]);
            if q.is_zero() {
                continue;
            }
            for (k, dk) in d.rows[..dd].iter().enumerate() {
                if !dk.is_zero() {
                    let idx = top - dd + k;
                    rem[idx] = rem[idx].sub(&q.mul(dk));
                }
            }
            quo[top - dd] = q;
        }
        (ChartPoly::from_rows(quo), ChartPoly::from_rows(rem))
    }

    /// Digits of the expansion `self = sum a_j d^j` with `deg_v a_j < deg_v d`.
    pub fn expand(&self, d: &ChartPoly) -> Vec<ChartPoly> {
        let mut digits = Vec::new();
        let mut cur = self.clone();
        while !cur.is_zero() {
            let (q, r) = cur.divrem_monic(d);
            digits.push(r);
            cur = q;
        }
        digits
    }

    pub fn render(&self, chart: Chart) -> String {
        let (u, v) = (chart.major_name(), chart.minor_name());
        let mut terms: Vec<(usize, i64, &Coeff)> = Vec::new();
        for (j, row) in self.rows.iter().enumerate() {
            for (e, c) in row.terms() {
                terms.push((j, e, c));
            }
        }
        terms.sort_by(|a, b| b.0.cmp(&a.0).then(b.1.cmp(&a.1)));
        if terms.is_empty() {
            return "0".into();
        }
        let mut s = String::new();
        for (n, (j, e, c)) in terms.into_iter().enumerate() {
            let neg = c.as_rat().is_some_and(|r| r.is_negative());
            let mag = if neg { -c } else { c.clone() };
            s.push_str(match (n, neg) {
                (0, true) => "-",
                (0, false) => "",
                (_, true) => " - ",
                (_, false) => " + ",
            });
            let mut parts = Vec::new();
            if !mag.is_one() || (j == 0 && e == 0) {
                parts.push(mag.to_string());
            }
            match e {
                0 => {}
                1 => parts.push(u.to_string()),
                _ => parts.push(format!("{u}^{e}")),
            }
            match j {
                0 => {}
                1 => parts.push(v.to_string()),
                _ => parts.push(format!("{v}^{j}")),
            }
            s.push_str(&parts.join("*"));
        }
        s
    }
}
