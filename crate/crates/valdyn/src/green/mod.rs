//! Numerical Green functions `G+ = lim lambda1^-n log+ |F^n p|`.

mod ext;

pub use ext::{ExtComplex, ExtFloat};

use std::fmt::Write as _;

pub use num_complex::Complex64;
use thiserror::Error;

use crate::poly::{BiPoly, PolyMap};

pub const ESCAPE_RADIUS: f64 = 1e4;
pub const DEFAULT_N_MAX: usize = 40;
pub const DEFAULT_TOL: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GreenError {
    #[error("lambda1 = {0} must exceed 1")]
    NotExpanding(f64),
    #[error("coefficient {0} has no floating-point value")]
    Coefficient(String),
    #[error("degenerate arithmetic at step {0}")]
    Degenerate(usize),
    #[error("the orbit escapes (G+ = {0}), so the point is not in K+")]
    Escaping(f64),
}

/// `P` or `Q` flattened for fast evaluation.
#[derive(Clone, Debug)]
struct Compiled {
    terms: Vec<(u32, u32, f64)>,
    dx: u32,
    dy: u32,
}

impl Compiled {
    fn new(r: &BiPoly) -> Result<Compiled, GreenError> {
        let mut terms = Vec::new();
        for (&(i, j), c) in r.terms() {
            let v = c.to_f64().ok_or_else(|| GreenError::Coefficient(c.to_string()))?;
            terms.push((i, j, v));
        }
        Ok(Compiled { dx: r.deg_x().unwrap_or(0), dy: r.deg_y().unwrap_or(0), terms })
    }
}

fn powers(z: ExtComplex, n: u32) -> Vec<ExtComplex> {
    let mut out = Vec::with_capacity(n as usize + 1);
    out.push(ExtComplex::from_c64(Complex64::new(1.0, 0.0)));
    for k in 0..n as usize {
        out.push(out[k] * z);
    }
    out
}

/// A map ready for floating-point iteration.
#[derive(Clone, Debug)]
pub struct FloatMap {
    p: Compiled,
    q: Compiled,
}

impl FloatMap {
    pub fn new(f: &PolyMap) -> Result<FloatMap, GreenError> {
        Ok(FloatMap { p: Compiled::new(&f.p)?, q: Compiled::new(&f.q)? })
    }

    pub fn apply(&self, pt: (ExtComplex, ExtComplex)) -> (ExtComplex, ExtComplex) {
        let px = powers(pt.0, self.p.dx.max(self.q.dx));
        let py = powers(pt.1, self.p.dy.max(self.q.dy));
        let eval = |c: &Compiled| {
            c.terms.iter().fold(ExtComplex::ZERO, |acc, &(i, j, k)| {
                acc + (px[i as usize] * py[j as usize]).scale(Complex64::new(k, 0.0))
            })
        };
        (eval(&self.p), eval(&self.q))
    }
}

/// `log+ max(1, |x|, |y|)`.
pub fn log_plus_norm(pt: (ExtComplex, ExtComplex)) -> f64 {
    pt.0.modulus().ln().max(pt.1.modulus().ln()).max(0.0)
}

fn norm(pt: (ExtComplex, ExtComplex)) -> ExtFloat {
    let (a, b) = (pt.0.modulus(), pt.1.modulus());
    if a > b {
        a
    } else {
        b
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Converged,
    /// Never left the escape radius within `n_max` steps; reported as zero.
    Bounded,
    /// Escaped without meeting the tolerance.
    NotConverged,
}

impl Status {
    pub fn label(self) -> &'static str {
        match self {
            Status::Converged => "true",
            Status::Bounded => "undecided",
            Status::NotConverged => "false",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GreenSample {
    pub point: (Complex64, Complex64),
    pub estimate: f64,
    pub n_used: usize,
    pub status: Status,
}

impl GreenSample {
    pub fn converged(&self) -> bool {
        self.status == Status::Converged
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GreenParams {
    pub lambda1: f64,
    pub n_max: usize,
    pub tol: f64,
}

impl GreenParams {
    pub fn new(lambda1: f64) -> GreenParams {
        GreenParams { lambda1, n_max: DEFAULT_N_MAX, tol: DEFAULT_TOL }
    }
}

/// Escape is declared above [`ESCAPE_RADIUS`] and withdrawn only below half
/// of it.
pub fn green_value_with(f: &FloatMap, p: (Complex64, Complex64), prm: &GreenParams) -> Result<GreenSample, GreenError> {
    if prm.lambda1.is_nan() || prm.lambda1 <= 1.0 {
        return Err(GreenError::NotExpanding(prm.lambda1));
    }
    let (hi, lo) = (ExtFloat::from_f64(ESCAPE_RADIUS), ExtFloat::from_f64(ESCAPE_RADIUS / 2.0));
    let mut pt = (ExtComplex::from_c64(p.0), ExtComplex::from_c64(p.1));
    let mut escaped = norm(pt) > hi;
    let mut scale = 1.0;
    let mut g = log_plus_norm(pt);
    for n in 1..=prm.n_max {
        pt = f.apply(pt);
        if !pt.0.is_finite() || !pt.1.is_finite() {
            return Err(GreenError::Degenerate(n));
        }
        scale /= prm.lambda1;
        let next = log_plus_norm(pt) * scale;
        let r = norm(pt);
        escaped = if escaped { r >= lo } else { r > hi };
        let done = escaped && (next - g).abs() < prm.tol;
        g = next;
        if done {
            return Ok(GreenSample { point: p, estimate: g, n_used: n, status: Status::Converged });
        }
    }
    if escaped {
        Ok(GreenSample { point: p, estimate: g, n_used: prm.n_max, status: Status::NotConverged })
    } else {
        Ok(GreenSample { point: p, estimate: 0.0, n_used: prm.n_max, status: Status::Bounded })
    }
}

pub fn green_value(f: &PolyMap, p: (Complex64, Complex64), prm: &GreenParams) -> Result<GreenSample, GreenError> {
    green_value_with(&FloatMap::new(f)?, p, prm)
}

/// A real rectangle `[x0, x1] x [y0, y1]` in the slice
/// `(x + i ix, y + i iy)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Window {
    pub x0: f64,
    pub x1: f64,
    pub y0: f64,
    pub y1: f64,
    pub ix: f64,
    pub iy: f64,
}

impl Window {
    pub fn square(r: f64) -> Window {
        Window { x0: -r, x1: r, y0: -r, y1: r, ix: 0.0, iy: 0.0 }
    }

    fn axis(lo: f64, hi: f64, n: usize) -> Vec<f64> {
        if n <= 1 || lo == hi {
            return vec![lo];
        }
        (0..n).map(|k| lo + (hi - lo) * k as f64 / (n - 1) as f64).collect()
    }

    /// Sample points, rows of constant `y` from `y0`, each row from `x0`.
    pub fn points(&self, resolution: usize) -> (usize, usize, Vec<(Complex64, Complex64)>) {
        let xs = Window::axis(self.x0, self.x1, resolution);
        let ys = Window::axis(self.y0, self.y1, resolution);
        let pts = ys
            .iter()
            .flat_map(|&y| xs.iter().map(move |&x| (x, y)))
            .map(|(x, y)| (Complex64::new(x, self.ix), Complex64::new(y, self.iy)))
            .collect();
        (xs.len(), ys.len(), pts)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GreenGrid {
    pub width: usize,
    pub height: usize,
    /// Row-major.
    pub samples: Vec<GreenSample>,
}

/// Twelve significant digits, `%.12g` style.
pub fn fmt_sig(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    if !v.is_finite() {
        return v.to_string();
    }
    let e = v.abs().log10().floor() as i32;
    let trim = |s: String| {
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s
        }
    };
    if (-5..12).contains(&e) {
        trim(format!("{:.*}", (11 - e).max(0) as usize, v))
    } else {
        let s = format!("{:.11e}", v);
        let (m, x) = s.split_once('e').expect("exponent");
        format!("{}e{}", trim(m.to_string()), x)
    }
}

impl GreenGrid {
    pub fn to_csv(&self) -> String {
        let mut s = String::from("x,y,G,converged,n\n");
        for g in &self.samples {
            let _ = writeln!(
                s,
                "{},{},{},{},{}",
                fmt_sig(g.point.0.re),
                fmt_sig(g.point.1.re),
                fmt_sig(g.estimate),
                g.status.label(),
                g.n_used
            );
        }
        s
    }

    /// Binary graymap, `G` clamped to `[0, max]` (default: the grid maximum).
    pub fn to_pgm(&self, max: Option<f64>) -> Vec<u8> {
        let top = max.unwrap_or_else(|| self.samples.iter().map(|g| g.estimate).fold(0.0, f64::max));
        let mut out = format!("P5\n{} {}\n255\n", self.width, self.height).into_bytes();
        out.extend(self.samples.iter().map(|g| {
            if top <= 0.0 {
                0
            } else {
                (g.estimate.clamp(0.0, top) / top * 255.0).round() as u8
            }
        }));
        out
    }
}

fn grid_with(
    f: &PolyMap,
    window: &Window,
    resolution: usize,
    prm: &GreenParams,
    run: impl FnOnce(&FloatMap, Vec<(Complex64, Complex64)>) -> Result<Vec<GreenSample>, GreenError>,
) -> Result<GreenGrid, GreenError> {
    let fm = FloatMap::new(f)?;
    if prm.lambda1.is_nan() || prm.lambda1 <= 1.0 {
        return Err(GreenError::NotExpanding(prm.lambda1));
    }
    let (width, height, pts) = window.points(resolution);
    Ok(GreenGrid { width, height, samples: run(&fm, pts)? })
}

/// Sequential raster.
pub fn grid_seq(f: &PolyMap, window: &Window, resolution: usize, prm: &GreenParams) -> Result<GreenGrid, GreenError> {
    grid_with(f, window, resolution, prm, |fm, pts| {
        pts.into_iter().map(|p| green_value_with(fm, p, prm)).collect()
    })
}

/// Raster evaluated in parallel when the `parallel` feature is on; the
/// output order is the same either way.
pub fn grid(f: &PolyMap, window: &Window, resolution: usize, prm: &GreenParams) -> Result<GreenGrid, GreenError> {
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        grid_with(f, window, resolution, prm, |fm, pts| {
            pts.into_par_iter().map(|p| green_value_with(fm, p, prm)).collect()
        })
    }
    #[cfg(not(feature = "parallel"))]
    {
        grid_seq(f, window, resolution, prm)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GrowthRow {
    pub n: usize,
    pub log_norm: f64,
    pub bound: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GrowthReport {
    /// Smallest `C >= 0` with `log+|F^n p| <= (lambda2 + eps)^n (log+|p| + C)`
    /// over the table.
    pub c: f64,
    pub rows: Vec<GrowthRow>,
}

/// Fits the constant of the growth bound along the orbit of a point of `K+`.
pub fn growth_bound_report(
    f: &PolyMap,
    p: (Complex64, Complex64),
    lambda1: f64,
    lambda2: f64,
    eps: f64,
    n_max: usize,
) -> Result<GrowthReport, GreenError> {
    let fm = FloatMap::new(f)?;
    let prm = GreenParams { lambda1, n_max, tol: DEFAULT_TOL };
    let s = green_value_with(&fm, p, &prm)?;
    if s.status != Status::Bounded {
        return Err(GreenError::Escaping(s.estimate));
    }
    let mut pt = (ExtComplex::from_c64(p.0), ExtComplex::from_c64(p.1));
    let base = lambda2 + eps;
    let l0 = log_plus_norm(pt);
    let mut logs = vec![l0];
    for _ in 0..n_max {
        pt = fm.apply(pt);
        logs.push(log_plus_norm(pt));
    }
    let c = logs
        .iter()
        .enumerate()
        .map(|(n, l)| l / base.powi(n as i32) - l0)
        .fold(0.0, f64::max);
    let rows = logs
        .into_iter()
        .enumerate()
        .map(|(n, log_norm)| GrowthRow { n, log_norm, bound: base.powi(n as i32) * (l0 + c) })
        .collect();
    Ok(GrowthReport { c, rows })
}
