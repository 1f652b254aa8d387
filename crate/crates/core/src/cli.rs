//! Command-line front end: `constants`, `verify`, `transform` and `norms`.
//!
//! Exit codes: 0 when every checked row passes, 1 on a verification
//! failure, 2 on usage or parse errors.

use std::f64::consts::PI;
use std::ffi::OsString;
use std::io::Write;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::constants::{
    big_c_p, big_c_p_printed, bound_cauchy, bound_grad, bound_laplacian, c_p, cos_moment,
    i_p_closed, i_p_quad, j_closed, j_quad, script_i_p, unit_norm_crossings, Exponent,
};
use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::field::{random_disk_point, random_polynomial, DiskFunction};
use crate::geometry::DiskPoint;
use crate::harmonics::{
    boyd_residual, boyd_residual_printed, cauchy_polynomial, estimate_degree_norm, monomial_action,
};
use crate::operators::{cauchy, conj_cauchy, j0star, plain_cauchy, solve_poisson};
use crate::quadrature::{PolarGrid, DEFAULT_N_RADIAL, DEFAULT_N_THETA};
use crate::report::{Entry, Format, Report};
use crate::specfun::{alpha0, bessel_first_zero};
use crate::witness;

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

pub const DEFAULT_SEED: u64 = 7;

#[derive(Debug, Parser)]
#[command(
    name = "cauchy-dirichlet",
    version,
    about = "Cauchy transform of the Dirichlet problem on the unit disk"
)]
pub struct Cli {
    /// Radial quadrature nodes (also the cell count for norm estimates).
    #[arg(long, global = true, default_value_t = DEFAULT_N_RADIAL)]
    pub nr: usize,
    /// Angular quadrature nodes.
    #[arg(long, global = true, default_value_t = DEFAULT_N_THETA)]
    pub ntheta: usize,
    /// Tolerance replacing the per-row defaults.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Seed for randomised checks.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = FormatArg::Human)]
    pub format: FormatArg,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Human,
    Json,
    Csv,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Human => Format::Human,
            FormatArg::Json => Format::Json,
            FormatArg::Csv => Format::Csv,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sharp constants and interpolation bounds.
    Constants {
        /// Comma-separated exponents; `inf` for p = ∞.
        #[arg(long, default_value = "1,1.5,2,3,inf")]
        p: String,
    },
    /// Run a verification suite.
    Verify {
        #[arg(long, value_enum, default_value_t = Suite::All)]
        suite: Suite,
    },
    /// Evaluate the transforms of an expression at points.
    Transform {
        /// Right-hand side, e.g. "z^2 zbar", "-z/|z|", "gg(1.5)".
        #[arg(long, allow_hyphen_values = true)]
        g: String,
        /// Points, e.g. "0.3+0.4i"; repeat or separate with commas.
        #[arg(
            long,
            value_delimiter = ',',
            default_value = "0",
            allow_hyphen_values = true
        )]
        at: Vec<String>,
    },
    /// Per-degree norm estimates against 2/α_|d|.
    Norms {
        /// Degrees: "k", "a..b", "a..=b" or a comma list.
        #[arg(long, default_value = "0..4", allow_hyphen_values = true)]
        d: String,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Identities,
    Witnesses,
    Hilbert,
    Harmonics,
    Bounds,
    All,
}

impl Suite {
    fn name(self) -> &'static str {
        match self {
            Suite::Identities => "identities",
            Suite::Witnesses => "witnesses",
            Suite::Hilbert => "hilbert",
            Suite::Harmonics => "harmonics",
            Suite::Bounds => "bounds",
            Suite::All => "all",
        }
    }
}

/// Shared run parameters.
#[derive(Debug, Clone)]
pub struct Settings {
    pub grid: PolarGrid,
    pub n_radial: usize,
    pub tol: Option<f64>,
    pub seed: u64,
}

impl Settings {
    pub fn new(n_radial: usize, n_theta: usize, tol: Option<f64>, seed: u64) -> Result<Self> {
        if let Some(t) = tol {
            if !(t > 0.0 && t.is_finite()) {
                return Err(Error::Parse {
                    position: 0,
                    message: format!("--tol must be positive, got {t}"),
                });
            }
        }
        Ok(Self {
            grid: PolarGrid::new(n_radial, n_theta)?,
            n_radial,
            tol,
            seed,
        })
    }

    /// Row tolerance: the flag if given, never below the discretisation
    /// `floor` of the row.
    fn tol(&self, default: f64, floor: f64) -> f64 {
        self.tol.map_or(default, |t| t.max(floor))
    }
}

impl Default for Settings {
    fn default() -> Self {
        Self::new(DEFAULT_N_RADIAL, DEFAULT_N_THETA, None, DEFAULT_SEED).expect("default grid")
    }
}

/// `check` with the error measured against `max(|claimed|, 1)`.
fn check_abs(
    name: impl Into<String>,
    claimed: impl Into<crate::report::Quantity>,
    computed: impl Into<crate::report::Quantity>,
    tol: f64,
) -> Entry {
    let claimed = claimed.into();
    let mut e = Entry::check(name, claimed, computed, tol);
    let rel = e.abs_err.unwrap_or(0.0) / claimed.magnitude().max(1.0);
    e.rel_err = Some(rel);
    e.pass = Some(rel <= tol);
    e
}

fn exponent_label(p: Exponent) -> String {
    p.to_string()
}

pub fn cmd_constants(ps: &[Exponent], s: &Settings) -> Result<Report> {
    let mut r = Report::new("constants", &s.grid).param(
        "p",
        ps.iter()
            .map(|p| exponent_label(*p))
            .collect::<Vec<_>>()
            .join(","),
    );
    let a = alpha0();
    r.push(Entry::info("alpha0", a));
    r.push(Entry::info("2/alpha0", 2.0 / a));
    for &p in ps {
        let l = exponent_label(p);
        if let Exponent::Finite(x) = p {
            if (1.0..2.0).contains(&x) {
                r.push(Entry::info(format!("c_p[{l}]"), c_p(x)?));
                r.push(Entry::info(format!("C_p[{l}]"), big_c_p(x)?));
                r.push(Entry::info(
                    format!("C_p_printed[{l}]"),
                    big_c_p_printed(x)?,
                ));
            }
        }
        r.push(Entry::info(format!("bound_cauchy[{l}]"), bound_cauchy(p)));
        r.push(Entry::info(format!("bound_grad[{l}]"), bound_grad(p)));
        let lap = bound_laplacian(p);
        r.push(Entry::info(
            format!("laplacian_cauchy[{l}]"),
            lap.cauchy_bound,
        ));
        r.push(Entry::info(format!("laplacian_grad[{l}]"), lap.grad_bound));
    }
    let (p1, p2) = unit_norm_crossings()?;
    r.push(Entry::info("crossing_p1", p1));
    r.push(Entry::info("crossing_p2", p2));
    Ok(r)
}

/// Closed forms against quadrature: `I_p`, `𝓘_p`, `J`, monomial images,
/// the connection identity and the solution of `u_{zz̄} = 1`.
pub fn suite_identities(s: &Settings) -> Result<Vec<Entry>> {
    let g = &s.grid;
    let mut out = Vec::new();
    for &p in &[1.0, 1.5, 1.9] {
        for &rho in &[0.0, 0.5, 0.9] {
            let closed = i_p_closed(p, rho)?;
            let quad = i_p_quad(p, DiskPoint::new(rho, 0.0)?, g)?;
            out.push(Entry::check(
                format!("I_p[p={p},rho={rho}]"),
                closed,
                quad,
                s.tol(1e-6, 0.0),
            ));
        }
    }
    out.push(Entry::check(
        "I_1(0) = 4/3",
        4.0 / 3.0,
        i_p_closed(1.0, 0.0)?,
        s.tol(1e-12, 0.0),
    ));
    out.push(Entry::check(
        "I_1(1) = 1",
        1.0,
        i_p_closed(1.0, 1.0)?,
        s.tol(1e-12, 0.0),
    ));
    out.push(Entry::check(
        "script_I_1(0) = 16/(3pi)",
        16.0 / (3.0 * PI),
        script_i_p(1.0, 0.0)?,
        s.tol(1e-12, 0.0),
    ));
    for &(p, rho) in &[(1.3, 0.2), (1.7, 0.6), (1.95, 0.8)] {
        let rel = 2.0 * cos_moment(p)? * i_p_closed(p, rho)?;
        out.push(Entry::check(
            format!("script_I_p[p={p},rho={rho}]"),
            rel,
            script_i_p(p, rho)?,
            s.tol(1e-12, 0.0),
        ));
    }
    for &w in &[0.0, 0.5, 0.9] {
        let omega = DiskPoint::new(w, 0.0)?;
        out.push(Entry::check(
            format!("J[omega={w}]"),
            j_closed(omega),
            j_quad(omega, g)?,
            s.tol(1e-6, 0.0),
        ));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(s.seed);
    let mut worst = 0.0f64;
    for m in 0..=4u32 {
        for n in 0..=4u32 {
            let f = DiskFunction::monomial(m, n);
            let image = monomial_action(m, n);
            for _ in 0..2 {
                let z = DiskPoint::from_complex(random_disk_point(&mut rng, 0.9))?;
                worst = worst.max((cauchy(&f, z, g)? - image.eval(z.z())).norm());
            }
        }
    }
    out.push(check_abs(
        "monomial images (max abs err, m,n<=4)",
        0.0,
        worst,
        s.tol(1e-8, 0.0),
    ));

    let mut corrected = 0.0f64;
    let mut literal = 0.0f64;
    for _ in 0..5 {
        let f = random_polynomial(&mut rng, 6, 4);
        let z = DiskPoint::from_complex(random_disk_point(&mut rng, 0.8))?;
        let c = cauchy(&f, z, g)?;
        let pc = plain_cauchy(&f, z, g)?;
        let js = j0star(&f, z, g)?;
        corrected = corrected.max((c - (js - pc)).norm());
        literal = literal.max((c - (pc - js)).norm());
    }
    out.push(check_abs(
        "connection C = J0* - F (max abs err)",
        0.0,
        corrected,
        s.tol(1e-7, 0.0),
    ));
    out.push(Entry::info(
        "connection C = F - J0* (max abs residual)",
        literal,
    ));

    let one = DiskFunction::constant(Complex64::new(1.0, 0.0));
    let z = DiskPoint::new(0.3, 0.4)?;
    out.push(check_abs(
        "solve[g=1] = |z|^2 - 1",
        z.modulus().powi(2) - 1.0,
        solve_poisson(&one, z, g)?,
        s.tol(1e-10, 0.0),
    ));
    out.push(check_abs(
        "cauchy[g=1] = zbar",
        z.z().conj(),
        cauchy(&one, z, g)?,
        s.tol(1e-10, 0.0),
    ));
    Ok(out)
}

/// Inputs attaining or approaching the sharp constants.
pub fn suite_witnesses(s: &Settings) -> Result<Vec<Entry>> {
    let g = &s.grid;
    let mut out = Vec::new();
    for &(p, tol) in &[(1.0, 1e-8), (1.5, 1e-6), (1.9, 1e-5)] {
        let w = witness::extremal_pointwise(p, g)?;
        out.push(Entry::check(
            format!("extremal_pointwise[p={p}]"),
            w.claimed_constant,
            w.achieved_ratio,
            s.tol(tol, 0.0),
        ));
    }
    for &p in &[1.0, 1.5] {
        let w = witness::extremal_gradient(p, g)?;
        out.push(Entry::check(
            format!("extremal_gradient[p={p}]"),
            w.claimed_constant,
            w.achieved_ratio,
            s.tol(1e-5, 0.0),
        ));
        let closed = w.get("gradient_closed").unwrap_or(f64::NAN);
        let quad = w.get("gradient_disk_quadrature").unwrap_or(f64::NAN);
        out.push(Entry::check(
            format!("extremal_gradient[p={p}] disk quadrature"),
            closed,
            quad,
            s.tol(1e-4, 1e-4),
        ));
    }
    for &n in &[3u32, 100] {
        let w = witness::dirac_sequence(n, g)?;
        let quad = w.get("a_n_quadrature").unwrap_or(f64::NAN);
        out.push(Entry::check(
            format!("dirac a_{n} quadrature"),
            w.achieved_ratio,
            quad,
            s.tol(1e-8, 0.0),
        ));
        out.push(Entry::condition(
            format!("dirac a_{n}/b_{n} < 2"),
            w.achieved_ratio,
            w.achieved_ratio < 2.0,
        ));
    }
    out.push(Entry::check(
        "dirac a_3 = 14/9",
        14.0 / 9.0,
        witness::dirac_a_n(3),
        s.tol(1e-15, 0.0),
    ));
    out.push(Entry::info("dirac a_100 literal 1.993333", 1.993333));

    let w = witness::bessel_extremal(g)?;
    out.push(Entry::check(
        "bessel extremal ratio",
        w.claimed_constant,
        w.achieved_ratio,
        s.tol(1e-4, 0.0),
    ));
    let quad = w.get("ratio_disk_quadrature").unwrap_or(f64::NAN);
    out.push(Entry::check(
        "bessel extremal ratio (disk quadrature)",
        w.claimed_constant,
        quad,
        s.tol(1e-4, 0.0),
    ));
    out.push(Entry::info(
        "ratio of |z|J0(alpha|z|)",
        w.get("ratio_printed_profile").unwrap_or(f64::NAN),
    ));

    let radii: Vec<f64> = (0..7).map(|k| 0.1 * 0.5f64.powi(k)).collect();
    let vals = witness::unbounded_example(&radii, g)?;
    let increasing = vals.windows(2).all(|v| v[1].1 > v[0].1);
    out.push(Entry::condition(
        "unbounded |du| increasing as r -> 0",
        vals.last().map_or(0.0, |v| v.1),
        increasing,
    ));
    let l2 = witness::unbounded_l2_norm(s.n_radial.max(64));
    out.push(Entry::condition(
        "unbounded example ||g||_2 finite",
        l2,
        l2.is_finite(),
    ));

    let w = witness::remark_solution_check(g)?;
    out.push(check_abs(
        "remark solution max abs err",
        0.0,
        w.get("max_abs_error").unwrap_or(f64::NAN),
        s.tol(1e-6, 0.0),
    ));
    out.push(Entry::info(
        "remark conjugate form max abs err",
        w.get("max_abs_error_conjugate_form").unwrap_or(f64::NAN),
    ));
    Ok(out)
}

/// `‖C_U‖_{L² → L²} = 2/α`.
pub fn suite_hilbert(s: &Settings) -> Result<Vec<Entry>> {
    let e = estimate_degree_norm(0, s.n_radial)?;
    let exact = 2.0 / alpha0();
    let mut out = vec![
        Entry::check(
            format!("hilbert norm estimate (n={})", s.n_radial),
            exact,
            e.estimate,
            s.tol(1e-3, 1e-9),
        ),
        Entry::condition(
            "estimate below 2/alpha",
            e.estimate,
            e.estimate <= exact * (1.0 + 1e-12),
        ),
    ];
    let ratio = crate::harmonics::degree_rayleigh_ratio(
        0,
        |r| crate::specfun::bessel_j(0, alpha0() * r),
        s.n_radial,
    );
    out.push(Entry::check(
        "bessel extremal Rayleigh ratio",
        exact,
        ratio,
        s.tol(1e-4, 0.0),
    ));
    Ok(out)
}

/// `λ` at which the degree-`d` equation has its admissible solution.
fn boyd_lambda(d: i64) -> Result<f64> {
    let a = bessel_first_zero(d.unsigned_abs() as u32)?;
    Ok(if d > 0 { 4.0 / (a * a) } else { 1.0 / (a * a) })
}

/// Per-degree norms, zero monotonicity and the radial eigen-equations.
pub fn suite_harmonics(s: &Settings) -> Result<Vec<Entry>> {
    let mut out = Vec::new();
    let a1 = bessel_first_zero(1)?;
    out.push(Entry::check("alpha_1", 3.831_706_0, a1, s.tol(1e-7, 1e-8)));
    let mut prev = f64::INFINITY;
    let mut decreasing = true;
    for d in 1..=4i64 {
        let e = estimate_degree_norm(d, s.n_radial)?;
        out.push(check_abs(
            format!("degree norm d={d}"),
            e.exact,
            e.estimate,
            s.tol(1e-3, 1e-9),
        ));
        decreasing &= e.estimate < prev;
        prev = e.estimate;
    }
    out.push(Entry::condition(
        "degree norms decreasing in d",
        prev,
        decreasing,
    ));
    let plus = estimate_degree_norm(2, s.n_radial)?.estimate;
    let minus = estimate_degree_norm(-2, s.n_radial)?.estimate;
    out.push(check_abs(
        "degree norm d=-2 equals d=2",
        plus,
        minus,
        s.tol(1e-12, 0.0),
    ));
    for d in -3..=3i64 {
        let lambda = boyd_lambda(d)?;
        let mut worst = 0.0f64;
        for k in 1..=20 {
            let x = k as f64 / 21.0;
            worst = worst.max(boyd_residual(d, lambda, x)?.abs());
        }
        out.push(check_abs(
            format!("radial equation residual d={d}"),
            0.0,
            worst,
            s.tol(1e-6, 0.0),
        ));
    }
    out.push(Entry::info(
        "printed d>0 equation residual (d=2, x=0.5)",
        boyd_residual_printed(2, boyd_lambda(2)?, 0.5)?,
    ));
    Ok(out)
}

/// Quadrature ratios of random polynomials against the interpolation
/// bounds.
pub fn suite_bounds(s: &Settings, count: usize) -> Result<Vec<Entry>> {
    let grid = PolarGrid::new(s.n_radial.min(64), s.grid.n_theta().min(256))?;
    let mut rng = ChaCha8Rng::seed_from_u64(s.seed);
    let exps = [1.0, 1.5, 2.0, 3.0, 8.0];
    let mut worst_cauchy = vec![0.0f64; exps.len()];
    let mut worst_grad = vec![0.0f64; exps.len()];
    for _ in 0..count {
        let terms = rng.gen_range(1..=4);
        let f = random_polynomial(&mut rng, 6, terms);
        let ratios = lp_ratios(&f, &exps, &grid)?;
        for (i, (rc, rg)) in ratios.into_iter().enumerate() {
            worst_cauchy[i] = worst_cauchy[i].max(rc);
            worst_grad[i] = worst_grad[i].max(rg);
        }
    }
    let mut out = Vec::new();
    for (i, &p) in exps.iter().enumerate() {
        let e = Exponent::Finite(p);
        let (bc, bg) = (bound_cauchy(e), bound_grad(e));
        out.push(Entry::condition(
            format!("fuzz cauchy ratio p={p} (bound {bc:.6})"),
            worst_cauchy[i],
            worst_cauchy[i] <= bc * (1.0 + 1e-6),
        ));
        out.push(Entry::condition(
            format!("fuzz grad ratio p={p} (bound {bg:.6})"),
            worst_grad[i],
            worst_grad[i] <= bg * (1.0 + 1e-6),
        ));
        out.push(Entry::info(
            format!("bound gap cauchy p={p}"),
            bc - worst_cauchy[i],
        ));
    }
    Ok(out)
}

/// `(‖∂u‖_p/‖g‖_p, ‖∇u‖_p/‖g‖_p)` for each exponent, with the norms
/// summed on the nodes of `grid`. Polynomials use the closed-form images,
/// other inputs one singular quadrature per node.
pub fn lp_ratios(f: &DiskFunction, exps: &[f64], grid: &PolarGrid) -> Result<Vec<(f64, f64)>> {
    let fbar = f.conj();
    let mut samples = Vec::with_capacity(grid.n_radial() * grid.n_theta());
    for (&r, &w) in grid.radial_nodes().iter().zip(grid.radial_weights()) {
        let weight = 2.0 * w * r / grid.n_theta() as f64;
        for j in 0..grid.n_theta() {
            let z = Complex64::from_polar(r, grid.theta(j));
            let (c, cc) = match (cauchy_polynomial(f, z), cauchy_polynomial(&fbar, z)) {
                (Some(c), Some(cb)) => (c, cb.conj()),
                _ => {
                    let p = DiskPoint::from_complex(z)?;
                    (cauchy(f, p, grid)?, conj_cauchy(f, p, grid)?)
                }
            };
            samples.push((weight, c.norm(), c.norm() + cc.norm(), f.eval(z).norm()));
        }
    }
    Ok(exps
        .iter()
        .map(|&p| {
            let (mut nc, mut ng, mut nf) = (0.0, 0.0, 0.0);
            for &(w, c, g, v) in &samples {
                nc += w * c.powf(p);
                ng += w * g.powf(p);
                nf += w * v.powf(p);
            }
            ((nc / nf).powf(1.0 / p), (ng / nf).powf(1.0 / p))
        })
        .collect())
}

fn parse_point(src: &str) -> Result<DiskPoint> {
    let e = Expr::parse(src)?;
    let a = e.eval(Complex64::new(0.17, 0.23));
    let b = e.eval(Complex64::new(-0.31, 0.05));
    if a != b {
        return Err(Error::Parse {
            position: 1,
            message: format!("point '{src}' must be a constant"),
        });
    }
    DiskPoint::from_complex(a)
}

pub fn cmd_transform(g_src: &str, at: &[String], s: &Settings) -> Result<Report> {
    let expr = Expr::parse(g_src)?;
    let points = at
        .iter()
        .map(|p| parse_point(p))
        .collect::<Result<Vec<_>>>()?;
    let g = expr.to_disk_function();
    let gbar = g.conj();
    let mut r = Report::new("transform", &s.grid)
        .param("g", g_src)
        .param("at", at.join(","));
    for z in points {
        let label = format!("{}", crate::report::Quantity::Complex(z.z()));
        let c = cauchy(&g, z, &s.grid)?;
        let cc = conj_cauchy(&g, z, &s.grid)?;
        let u = solve_poisson(&g, z, &s.grid)?;
        match (
            cauchy_polynomial(&g, z.z()),
            cauchy_polynomial(&gbar, z.z()),
        ) {
            (Some(closed), Some(closed_bar)) => {
                r.push(check_abs(
                    format!("cauchy({label})"),
                    closed,
                    c,
                    s.tol(1e-8, 0.0),
                ));
                r.push(check_abs(
                    format!("conj_cauchy({label})"),
                    closed_bar.conj(),
                    cc,
                    s.tol(1e-8, 0.0),
                ));
            }
            _ => {
                r.push(Entry::info(format!("cauchy({label})"), c));
                r.push(Entry::info(format!("conj_cauchy({label})"), cc));
            }
        }
        r.push(Entry::info(format!("solve({label})"), u));
    }
    Ok(r)
}

/// Parses "k", "a..b", "a..=b" (both inclusive) or a comma list.
pub fn parse_degrees(src: &str) -> Result<Vec<i64>> {
    let bad = |m: String| Error::Parse {
        position: 1,
        message: m,
    };
    let num = |t: &str| {
        t.trim()
            .parse::<i64>()
            .map_err(|_| bad(format!("invalid degree '{}'", t.trim())))
    };
    let out: Vec<i64> = if let Some((a, b)) = src.split_once("..") {
        let b = b.strip_prefix('=').unwrap_or(b);
        let (a, b) = (num(a)?, num(b)?);
        if a > b {
            return Err(bad(format!("empty degree range {src}")));
        }
        (a..=b).collect()
    } else {
        src.split(',').map(num).collect::<Result<_>>()?
    };
    if out.is_empty() || out.len() > 129 || out.iter().any(|d| d.unsigned_abs() > 64) {
        return Err(bad(format!(
            "degrees must be 1 to 129 values with |d| <= 64, got '{src}'"
        )));
    }
    Ok(out)
}

pub fn cmd_norms(ds: &[i64], s: &Settings) -> Result<Report> {
    let mut r = Report::new("norms", &s.grid)
        .param(
            "d",
            ds.iter()
                .map(|d| d.to_string())
                .collect::<Vec<_>>()
                .join(","),
        )
        .param("n_radial", s.n_radial);
    let mut by_abs: Vec<(u64, f64)> = Vec::new();
    for &d in ds {
        let e = estimate_degree_norm(d, s.n_radial)?;
        r.push(check_abs(
            format!("norm d={d}"),
            e.exact,
            e.estimate,
            s.tol(1e-3, 1e-9),
        ));
        by_abs.push((d.unsigned_abs(), e.estimate));
    }
    by_abs.sort_by_key(|x| x.0);
    by_abs.dedup_by_key(|x| x.0);
    if by_abs.len() > 1 {
        let ok = by_abs.windows(2).all(|w| w[1].1 < w[0].1);
        r.push(Entry::condition(
            "decreasing in |d|",
            by_abs.last().map_or(0.0, |x| x.1),
            ok,
        ));
    }
    Ok(r)
}

pub fn cmd_verify(suite: Suite, s: &Settings) -> Result<Report> {
    let mut r = Report::new("verify", &s.grid)
        .param("suite", suite.name())
        .param("seed", s.seed);
    let all = suite == Suite::All;
    if all || suite == Suite::Identities {
        r.extend(suite_identities(s)?);
    }
    if all || suite == Suite::Witnesses {
        r.extend(suite_witnesses(s)?);
    }
    if all || suite == Suite::Hilbert {
        r.extend(suite_hilbert(s)?);
    }
    if all || suite == Suite::Harmonics {
        r.extend(suite_harmonics(s)?);
    }
    if all || suite == Suite::Bounds {
        r.extend(suite_bounds(s, 200)?);
    }
    Ok(r)
}

fn parse_exponents(src: &str) -> Result<Vec<Exponent>> {
    src.split(',')
        .map(|t| {
            t.trim().parse::<Exponent>().map_err(|e| Error::Parse {
                position: 1,
                message: format!("invalid exponent '{}': {e}", t.trim()),
            })
        })
        .collect()
}

fn execute(cli: &Cli) -> Result<Report> {
    let s = Settings::new(cli.nr, cli.ntheta, cli.tol, cli.seed)?;
    let start = Instant::now();
    let mut report = match &cli.command {
        Command::Constants { p } => cmd_constants(&parse_exponents(p)?, &s)?,
        Command::Verify { suite } => cmd_verify(*suite, &s)?,
        Command::Transform { g, at } => cmd_transform(g, at, &s)?,
        Command::Norms { d } => cmd_norms(&parse_degrees(d)?, &s)?,
    };
    report.set_wall_time(start.elapsed());
    Ok(report)
}

/// Runs the CLI on `args` (including the program name) and returns the exit
/// code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() {
                EXIT_USAGE
            } else {
                EXIT_PASS
            };
            let text = e.render().to_string();
            let _ = if code == EXIT_PASS {
                write!(out, "{text}")
            } else {
                write!(err, "{text}")
            };
            return code;
        }
    };
    match execute(&cli) {
        Ok(report) => {
            let _ = write!(out, "{}", report.render(cli.format.into()));
            if report.pass {
                EXIT_PASS
            } else {
                for f in report.failures() {
                    let _ = writeln!(
                        err,
                        "failed: {} (rel_err {:?}, tol {:?})",
                        f.name, f.rel_err, f.tolerance
                    );
                }
                EXIT_FAIL
            }
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_USAGE
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let mut full = vec!["cauchy-dirichlet"];
        full.extend_from_slice(args);
        let code = run(full, &mut out, &mut err);
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn degree_ranges() {
        assert_eq!(parse_degrees("0..4").unwrap(), vec![0, 1, 2, 3, 4]);
        assert_eq!(parse_degrees("-2").unwrap(), vec![-2]);
        assert_eq!(parse_degrees("-1..=1").unwrap(), vec![-1, 0, 1]);
        assert_eq!(parse_degrees("1,3").unwrap(), vec![1, 3]);
        assert!(parse_degrees("3..1").is_err());
        assert!(parse_degrees("x").is_err());
        assert!(parse_degrees("100").is_err());
    }

    #[test]
    fn constants_rows() {
        let (code, out, _) = run_args(&["constants", "--p", "1,2,inf", "--format", "json"]);
        assert_eq!(code, 0);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        let find = |name: &str| {
            v["results"]
                .as_array()
                .unwrap()
                .iter()
                .find(|r| r["name"] == name)
                .unwrap()["computed"]
                .as_f64()
                .unwrap()
        };
        assert!((find("c_p[1]") - 4.0 / 3.0).abs() < 1e-14);
        assert!((find("bound_cauchy[2]") - 2.0 / alpha0()).abs() < 1e-14);
        assert!((find("bound_grad[inf]") - 16.0 / (3.0 * PI)).abs() < 1e-14);
        assert!((find("C_p[1]") - 16.0 / (3.0 * PI)).abs() < 1e-12);
        assert_eq!(run_args(&["constants", "--p", "0.5"]).0, 2);
        assert_eq!(run_args(&["constants", "--p", "abc"]).0, 2);
    }

    #[test]
    fn transform_examples() {
        let (code, out, _) = run_args(&[
            "transform",
            "--g",
            "1",
            "--at",
            "0.3+0.4i",
            "--format",
            "json",
            "--nr",
            "32",
            "--ntheta",
            "64",
        ]);
        assert_eq!(code, 0, "{out}");
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        let c = &v["results"][0]["computed"];
        assert!((c["re"].as_f64().unwrap() - 0.3).abs() < 1e-12);
        assert!((c["im"].as_f64().unwrap() + 0.4).abs() < 1e-12);
        let (code, out, _) = run_args(&[
            "transform",
            "--g",
            "z",
            "--at",
            "0.5",
            "--format",
            "csv",
            "--nr",
            "32",
            "--ntheta",
            "64",
        ]);
        assert_eq!(code, 0);
        let mut rd = csv::Reader::from_reader(out.as_bytes());
        let first = rd.records().next().unwrap().unwrap();
        assert!((first[2].parse::<f64>().unwrap() + 0.25).abs() < 1e-12);
        let (code, out, _) = run_args(&[
            "transform",
            "--g",
            "0",
            "--at",
            "0.1",
            "--nr",
            "16",
            "--ntheta",
            "32",
        ]);
        assert_eq!(code, 0);
        assert!(out.contains("0.0000000000"));
        let (code, _, err) = run_args(&["transform", "--g", "z + $", "--at", "0.1"]);
        assert_eq!(code, 2);
        assert!(err.contains("position 5"), "{err}");
        assert_eq!(run_args(&["transform", "--g", "z", "--at", "2"]).0, 2);
    }

    #[test]
    fn norms_rows() {
        let (code, out, _) = run_args(&["norms", "--d", "-2", "--nr", "100", "--format", "json"]);
        assert_eq!(code, 0);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        let minus = v["results"][0]["computed"].as_f64().unwrap();
        let (_, out, _) = run_args(&["norms", "--d", "2", "--nr", "100", "--format", "json"]);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert!((minus - v["results"][0]["computed"].as_f64().unwrap()).abs() < 1e-12);
        let (code, out, _) = run_args(&["norms", "--d", "0..4", "--nr", "100"]);
        assert_eq!(code, 0);
        assert!(out.contains("decreasing in |d|"));
    }

    #[test]
    fn usage_errors() {
        assert_eq!(run_args(&["verify", "--suite", "nope"]).0, 2);
        assert_eq!(run_args(&["frobnicate"]).0, 2);
        assert_eq!(run_args(&["norms", "--nr", "4"]).0, 2);
        assert_eq!(run_args(&["constants", "--tol", "-1"]).0, 2);
        assert_eq!(run_args(&["--help"]).0, 0);
    }

    #[test]
    fn failing_verification_exits_one() {
        let (code, _, err) = run_args(&[
            "verify", "--suite", "hilbert", "--nr", "16", "--tol", "1e-12",
        ]);
        assert_eq!(code, 1);
        assert!(err.contains("failed"));
    }
}
