//! `valdyn`: valuative dynamics of plane polynomial maps from the shell.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use valdyn::dynamics::{
    classify_with_seed, degree_prefix, degree_sequence, degree_sequence_bruteforce, detect_recurrence, eigenvaluation,
    extends_to_weighted_p2, jacobian_formula_check, non_properness_witness, pushforward, Branch, Recurrence,
    CLASSIFY_BUDGET, CLASSIFY_MAX_ORDER, CLASSIFY_TERMS, DEFAULT_MAX_ITER,
};
use valdyn::green::{
    fmt_sig, green_value, grid, grid_seq, growth_bound_report, Complex64, GreenParams, Window, DEFAULT_N_MAX,
    DEFAULT_TOL,
};
use valdyn::numeric::{QuadReal, Rat};
use valdyn::poly::{parse_map, topological_degree, PolyMap, DEFAULT_SEED};
use valdyn::valtree::{ValInfinity, DEFAULT_MAX_REFINE};

#[derive(Parser, Debug)]
#[command(name = "valdyn", version, about = "Valuative dynamics of polynomial maps of the affine plane")]
struct Cli {
    /// Seed for the randomized steps; `VALDYN_SEED` takes precedence.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Conjugate the map by `G` before the analysis: `G^-1 ∘ F ∘ G`.
    #[arg(long, global = true, requires = "conj_inv", value_name = "G.map")]
    conj: Option<PathBuf>,
    /// The inverse of `--conj`.
    #[arg(long, global = true, requires = "conj", value_name = "GINV.map")]
    conj_inv: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Degrees of the iterates, `deg F^0` through `deg F^N`.
    Degrees {
        map: PathBuf,
        #[arg(long)]
        n: usize,
        /// Compose the iterates explicitly instead.
        #[arg(long)]
        bruteforce: bool,
    },
    /// Integer linear recurrence of the degree sequence.
    Recur {
        map: PathBuf,
        #[arg(long, default_value_t = 10)]
        n: usize,
        #[arg(long, default_value_t = 4)]
        max_order: usize,
    },
    /// Eigenvaluation and asymptotic degree.
    Eigen {
        map: PathBuf,
        #[arg(long, default_value_t = DEFAULT_MAX_ITER)]
        max_iter: usize,
        #[arg(long, default_value_t = DEFAULT_MAX_REFINE)]
        max_refine: usize,
    },
    /// Topological degree.
    Lambda2 { map: PathBuf },
    /// Position relative to `lambda2 = lambda1^2`.
    Classify { map: PathBuf },
    /// Skewness, thinness and multiplicity of a monomial valuation.
    Invariants {
        map: Option<PathBuf>,
        #[arg(long, value_parser = parse_weights)]
        weights: (Rat, Rat),
    },
    /// Normalized pushforward of a monomial valuation.
    Push {
        map: PathBuf,
        #[arg(long, value_parser = parse_weights)]
        weights: (Rat, Rat),
        #[arg(long, default_value_t = DEFAULT_MAX_REFINE)]
        max_refine: usize,
    },
    /// Both sides of the Jacobian formula at a monomial valuation.
    JacobianCheck {
        map: PathBuf,
        /// Defaults to `-deg`.
        #[arg(long, value_parser = parse_weights)]
        weights: Option<(Rat, Rat)>,
    },
    /// Whether the map extends to the weighted projective plane `P(p, q)`.
    Extends {
        map: PathBuf,
        #[arg(long)]
        p: u64,
        #[arg(long)]
        q: u64,
    },
    /// Monomial valuation with `d(F, nu) = 0`.
    Witness {
        map: PathBuf,
        #[arg(long, default_value_t = 20)]
        bound: u64,
    },
    /// Blowup chain realizing a divisorial monomial valuation.
    Blowup {
        #[arg(long, value_parser = parse_weights)]
        weights: (Rat, Rat),
    },
    /// Green function at infinity.
    Green {
        #[command(subcommand)]
        cmd: GreenCmd,
    },
}

#[derive(Subcommand, Debug)]
enum GreenCmd {
    /// One sample.
    Value {
        map: PathBuf,
        /// Real parts `x,y`.
        #[arg(long, value_parser = parse_pair)]
        point: (f64, f64),
        /// Imaginary parts `ix,iy`.
        #[arg(long, value_parser = parse_pair, default_value = "0,0")]
        imag: (f64, f64),
        #[command(flatten)]
        opts: GreenOpts,
    },
    /// CSV raster over a real rectangle of a complex slice.
    Grid {
        map: PathBuf,
        /// `x0,x1,y0,y1`.
        #[arg(long, value_parser = parse_window, default_value = "-3,3,-3,3", allow_hyphen_values = true)]
        window: [f64; 4],
        /// Imaginary parts `ix,iy` of the slice.
        #[arg(long, value_parser = parse_pair, default_value = "0,0", allow_hyphen_values = true)]
        slice: (f64, f64),
        #[arg(long, default_value_t = 64)]
        res: usize,
        /// Also write a binary graymap.
        #[arg(long)]
        pgm: Option<PathBuf>,
        /// Value mapped to white; the grid maximum by default.
        #[arg(long)]
        pgm_max: Option<f64>,
        /// Evaluate on one thread.
        #[arg(long)]
        sequential: bool,
        #[command(flatten)]
        opts: GreenOpts,
    },
    /// Growth constant along a bounded orbit.
    Bound {
        map: PathBuf,
        #[arg(long, value_parser = parse_pair, allow_hyphen_values = true)]
        point: (f64, f64),
        #[arg(long, default_value_t = 0.1)]
        eps: f64,
        #[arg(long, default_value_t = DEFAULT_N_MAX)]
        n_max: usize,
    },
}

#[derive(Args, Debug)]
struct GreenOpts {
    /// Asymptotic degree; computed from the degree recurrence by default.
    #[arg(long)]
    lambda1: Option<f64>,
    #[arg(long, default_value_t = DEFAULT_N_MAX)]
    n_max: usize,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    tol: f64,
}

/// `s` for `nu(x) = -s, nu(y) = -1`, or raw weights `wx,wy`.
fn parse_weights(s: &str) -> Result<(Rat, Rat), String> {
    let rat = |t: &str| t.trim().parse::<Rat>().map_err(|e| format!("bad rational {t:?}: {e}"));
    match s.split_once(',') {
        Some((a, b)) => Ok((rat(a)?, rat(b)?)),
        None => Ok((-rat(s)?, Rat::from_int(-1))),
    }
}

fn parse_floats(s: &str, n: usize) -> Result<Vec<f64>, String> {
    let v: Vec<f64> = s
        .split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|e| format!("bad number {t:?}: {e}")))
        .collect::<Result<_, _>>()?;
    if v.len() != n {
        return Err(format!("expected {n} comma-separated numbers"));
    }
    Ok(v)
}

fn parse_pair(s: &str) -> Result<(f64, f64), String> {
    let v = parse_floats(s, 2)?;
    Ok((v[0], v[1]))
}

fn parse_window(s: &str) -> Result<[f64; 4], String> {
    let v = parse_floats(s, 4)?;
    Ok([v[0], v[1], v[2], v[3]])
}

struct Failure {
    code: u8,
    msg: String,
}

impl Failure {
    fn usage(msg: impl Into<String>) -> Failure {
        Failure { code: 2, msg: msg.into() }
    }
}

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Failure {
        Failure { code: 1, msg: e.to_string() }
    }
}

type Res<T> = Result<T, Failure>;

enum Output {
    Text(String),
    /// Report plus a binary side file.
    WithFile(String, PathBuf, Vec<u8>),
}

struct Ctx {
    seed: u64,
    conj: Option<(PolyMap, PolyMap)>,
}

impl Ctx {
    fn load(&self, path: &Path) -> Res<PolyMap> {
        let f = read_map(path)?;
        Ok(match &self.conj {
            Some((g, ginv)) => ginv.compose(&f.compose(g)),
            None => f,
        })
    }
}

fn read_map(path: &Path) -> Res<PolyMap> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    parse_map(&text).map_err(|e| Failure::from(format!("{}: {e}", path.display())))
}

fn seed(flag: u64) -> Res<u64> {
    match std::env::var("VALDYN_SEED") {
        Ok(s) => s.trim().parse().map_err(|_| Failure::usage(format!("VALDYN_SEED is not an integer: {s:?}"))),
        Err(_) => Ok(flag),
    }
}

fn monomial(w: &(Rat, Rat)) -> Res<ValInfinity> {
    Ok(ValInfinity::monomial_rat(w.0.clone(), w.1.clone())?)
}

fn join<T: ToString>(xs: &[T], sep: &str) -> String {
    xs.iter().map(ToString::to_string).collect::<Vec<_>>().join(sep)
}

fn recurrence_lines(out: &mut String, r: &Recurrence) {
    let _ = writeln!(out, "recurrence = {r}");
    let _ = writeln!(out, "offset = {}", r.offset);
    let _ = writeln!(out, "lambda1_minpoly = {}", r.min_poly);
    let _ = writeln!(out, "lambda1_multiplicity = {}", r.dominant_multiplicity);
    let _ = writeln!(out, "validated_through = {}", r.validated_through);
}

/// Degree recurrence over the classification budget, and its dominant root.
fn lambda1_of(f: &PolyMap) -> Res<QuadReal> {
    let report = degree_prefix(f, CLASSIFY_TERMS, DEFAULT_MAX_REFINE, CLASSIFY_BUDGET)?;
    let order = CLASSIFY_MAX_ORDER.min(report.degrees.len().saturating_sub(2) / 2);
    Ok(detect_recurrence(&report.degrees, order)?.dominant_root)
}

fn green_params(ctx: &Ctx, f: &PolyMap, o: &GreenOpts) -> Res<GreenParams> {
    let lambda1 = match o.lambda1 {
        Some(l) => l,
        None => {
            let l1 = lambda1_of(f)?.to_f64();
            let l2 = topological_degree(f, ctx.seed)? as f64;
            if l2 >= l1 {
                eprintln!("warning: lambda2 = {l2} is not below lambda1 = {}", fmt_sig(l1));
            }
            l1
        }
    };
    Ok(GreenParams { lambda1, n_max: o.n_max, tol: o.tol })
}

fn run(cli: Cli) -> Res<Output> {
    let conj = match (&cli.conj, &cli.conj_inv) {
        (Some(g), Some(h)) => {
            let (g, h) = (read_map(g)?, read_map(h)?);
            if h.compose(&g) != PolyMap::identity() {
                return Err("--conj-inv is not the inverse of --conj".into());
            }
            Some((g, h))
        }
        _ => None,
    };
    let ctx = Ctx { seed: seed(cli.seed)?, conj };
    let mut out = String::new();
    match cli.cmd {
        Cmd::Degrees { map, n, bruteforce } => {
            let f = ctx.load(&map)?;
            let line = if bruteforce {
                join(&degree_sequence_bruteforce(&f, n)?, " ")
            } else {
                join(&degree_sequence(&f, n, DEFAULT_MAX_REFINE)?.degrees, " ")
            };
            let _ = writeln!(out, "{line}");
        }
        Cmd::Recur { map, n, max_order } => {
            let f = ctx.load(&map)?;
            let degrees = degree_sequence(&f, n, DEFAULT_MAX_REFINE)?.degrees;
            let r = detect_recurrence(&degrees, max_order)?;
            let _ = writeln!(out, "order={} coeffs={} lambda1={}", r.order, join(&r.coeffs, ","), r.dominant_root);
            recurrence_lines(&mut out, &r);
        }
        Cmd::Eigen { map, max_iter, max_refine } => {
            let f = ctx.load(&map)?;
            let e = eigenvaluation(&f, max_iter, max_refine)?;
            let (wx, wy) = e.nu_star.weights();
            let _ = writeln!(out, "kind={} nu(x)={wx} lambda1={}", e.kind.label(), e.lambda1);
            let _ = writeln!(out, "nu(y) = {wy}");
            let _ = writeln!(out, "nu_star = {}", e.nu_star);
            let _ = writeln!(out, "lambda1_minpoly = {}", e.min_poly);
            let _ = writeln!(out, "fixed_point_exact = {}", e.fixed_point_exact);
            let _ = writeln!(out, "iterations = {}", e.iterations);
        }
        Cmd::Lambda2 { map } => {
            let f = ctx.load(&map)?;
            let _ = writeln!(out, "{}", topological_degree(&f, ctx.seed)?);
        }
        Cmd::Classify { map } => {
            let f = ctx.load(&map)?;
            let c = classify_with_seed(&f, ctx.seed)?;
            let _ = writeln!(out, "branch={} lambda1={} lambda2={}", c.branch.label(), c.lambda1, c.lambda2);
            let _ = writeln!(out, "degrees = {}", join(&c.degrees, " "));
            recurrence_lines(&mut out, &c.recurrence);
            match &c.branch {
                Branch::Skew { skew_form } => {
                    let _ = writeln!(out, "skew_form = {skew_form}");
                }
                Branch::Toric { segment } => match segment {
                    Some(s) => {
                        let (lo, hi) = (&s.lo, &s.hi);
                        let _ = writeln!(out, "tf_segment = ({}, {})..({}, {})", lo.0, lo.1, hi.0, hi.1);
                        let _ = writeln!(out, "toric_rays = {}", c.toric_rays().join(" "));
                    }
                    None => {
                        let _ = writeln!(out, "tf_segment = unavailable");
                    }
                },
                _ => {}
            }
            match &c.eigen {
                Some(e) => {
                    let _ = writeln!(out, "eigen = {}", e.kind.label());
                    let _ = writeln!(out, "nu_star = {}", e.nu_star);
                }
                None => {
                    let _ = writeln!(out, "eigen = unavailable");
                }
            }
        }
        Cmd::Invariants { map, weights } => {
            // The map is accepted for symmetry with the other commands.
            if let Some(m) = map {
                ctx.load(&m)?;
            }
            let v = monomial(&weights)?;
            let inv = v.invariants()?;
            let _ = writeln!(out, "alpha={} A={} m={}", inv.alpha, inv.thinness, inv.multiplicity);
            let _ = writeln!(out, "in_v1 = {}", v.in_v1()?);
            let _ = writeln!(out, "monomializable = {}", v.is_monomializable()?);
            let pencil = v.is_rational_pencil().map_or("n/a".to_string(), |b| b.to_string());
            let _ = writeln!(out, "rational_pencil = {pencil}");
            let trunc = inv.truncated.map_or("no".to_string(), |d| d.to_string());
            let _ = writeln!(out, "truncated = {trunc}");
        }
        Cmd::Push { map, weights, max_refine } => {
            let f = ctx.load(&map)?;
            let v = monomial(&weights)?;
            let d = valdyn::dynamics::d_of(&f, &v);
            let w = pushforward(&f, &v, max_refine)?;
            let _ = writeln!(out, "d={d}");
            let _ = writeln!(out, "image = {w}");
        }
        Cmd::JacobianCheck { map, weights } => {
            let f = ctx.load(&map)?;
            let v = match weights {
                Some(w) => monomial(&w)?,
                None => ValInfinity::root(),
            };
            let j = jacobian_formula_check(&f, &v)?;
            let _ = writeln!(out, "lhs={} rhs={} equal={}", j.lhs, j.rhs, j.equal);
        }
        Cmd::Extends { map, p, q } => {
            let f = ctx.load(&map)?;
            let _ = writeln!(out, "{}", extends_to_weighted_p2(&f, p, q)?);
        }
        Cmd::Witness { map, bound } => {
            let f = ctx.load(&map)?;
            match non_properness_witness(&f, bound) {
                Some(v) => {
                    let _ = writeln!(out, "witness {v}");
                    let _ = writeln!(out, "d = {}", valdyn::dynamics::d_of(&f, &v));
                }
                None => {
                    let _ = writeln!(out, "none bound={bound}");
                }
            }
        }
        Cmd::Blowup { weights } => {
            let v = monomial(&weights)?;
            let r = valdyn::blowup::realize_divisorial(&v)?;
            out.push_str(&r.graph.dump());
            let _ = writeln!(out, "target = {}", r.target);
            let _ = writeln!(out, "tight = {}", r.graph.is_tight());
        }
        Cmd::Green { cmd } => return green(&ctx, cmd, out),
    }
    Ok(Output::Text(out))
}

fn green(ctx: &Ctx, cmd: GreenCmd, mut out: String) -> Res<Output> {
    match cmd {
        GreenCmd::Value { map, point, imag, opts } => {
            let f = ctx.load(&map)?;
            let prm = green_params(ctx, &f, &opts)?;
            let p = (Complex64::new(point.0, imag.0), Complex64::new(point.1, imag.1));
            let s = green_value(&f, p, &prm)?;
            let _ = writeln!(out, "G={} converged={} n={}", fmt_sig(s.estimate), s.status.label(), s.n_used);
        }
        GreenCmd::Grid { map, window, slice, res, pgm, pgm_max, sequential, opts } => {
            if res == 0 {
                return Err(Failure::usage("--res must be positive"));
            }
            let f = ctx.load(&map)?;
            let prm = green_params(ctx, &f, &opts)?;
            let [x0, x1, y0, y1] = window;
            let w = Window { x0, x1, y0, y1, ix: slice.0, iy: slice.1 };
            let g = if sequential { grid_seq(&f, &w, res, &prm)? } else { grid(&f, &w, res, &prm)? };
            out.push_str(&g.to_csv());
            if let Some(path) = pgm {
                return Ok(Output::WithFile(out, path, g.to_pgm(pgm_max)));
            }
        }
        GreenCmd::Bound { map, point, eps, n_max } => {
            let f = ctx.load(&map)?;
            let l1 = lambda1_of(&f)?.to_f64();
            let l2 = topological_degree(&f, ctx.seed)? as f64;
            let p = (Complex64::new(point.0, 0.0), Complex64::new(point.1, 0.0));
            let r = growth_bound_report(&f, p, l1, l2, eps, n_max)?;
            let _ = writeln!(out, "C={} lambda2={l2} eps={}", fmt_sig(r.c), fmt_sig(eps));
            let _ = writeln!(out, "n,log_norm,bound");
            for row in &r.rows {
                let _ = writeln!(out, "{},{},{}", row.n, fmt_sig(row.log_norm), fmt_sig(row.bound));
            }
        }
    }
    Ok(Output::Text(out))
}

fn emit(out_path: Option<&Path>, o: Output) -> Res<()> {
    let text = match o {
        Output::Text(t) => t,
        Output::WithFile(t, path, bytes) => {
            std::fs::write(&path, bytes).map_err(|e| format!("{}: {e}", path.display()))?;
            t
        }
    };
    match out_path {
        Some(p) => std::fs::write(p, text).map_err(|e| format!("{}: {e}", p.display()))?,
        None => print!("{text}"),
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out_path = cli.out.clone();
    match run(cli).and_then(|o| emit(out_path.as_deref(), o)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.msg);
            ExitCode::from(f.code)
        }
    }
}
