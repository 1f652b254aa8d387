//! The Cauchy transform on single angular harmonics `g_d = f_d(r) e^{idt}`.
//!
//! On degree `d` the transform is the radial map
//!
//! ```text
//! d ≤ 0:  C_U[g_d](z) = 2 z^{d-1} ∫_0^{|z|} f_d(r) r^{1-d} dr
//! d > 0:  C_U[g_d](z) = 2 z^{d-1} (∫_0^1 f_d r^{d+1} dr - ∫_{|z|}^1 f_d r^{1-d} dr)
//! ```
//!
//! whose `L²` norm is `2/α_{|d|}`, `α_k` the first positive zero of `J_k`.

use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{domain, Error, Result};
use crate::field::DiskFunction;
use crate::geometry::DiskPoint;
use crate::quadrature::{gauss_legendre, integrate_interval, PolarGrid};
use crate::specfun::{bessel_first_zero, bessel_j_signed};

type Radial = Arc<dyn Fn(f64) -> Complex64 + Send + Sync>;

/// Nodes per panel used by [`apply_harmonic`].
pub const APPLY_NODES: usize = 96;

/// Radial profile `f_d` of one angular degree.
#[derive(Clone)]
pub struct HarmonicProfile {
    d: i64,
    f: Radial,
}

impl std::fmt::Debug for HarmonicProfile {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("HarmonicProfile")
            .field("d", &self.d)
            .finish()
    }
}

impl HarmonicProfile {
    pub fn new<F>(d: i64, f: F) -> Self
    where
        F: Fn(f64) -> Complex64 + Send + Sync + 'static,
    {
        Self { d, f: Arc::new(f) }
    }

    /// Profile interpolating samples on the Gauss–Legendre nodes of `(0, 1)`.
    pub fn from_gauss_samples(d: i64, values: Vec<Complex64>) -> Result<Self> {
        if values
            .iter()
            .any(|v| !(v.re.is_finite() && v.im.is_finite()))
        {
            return Err(domain("HarmonicProfile", "non-finite radial sample"));
        }
        let n = values.len();
        if n == 0 {
            return Err(domain("HarmonicProfile", "no radial samples"));
        }
        let (nodes, weights) = gauss_legendre(n);
        // barycentric weights of the Legendre points
        let bary: Vec<f64> = nodes
            .iter()
            .zip(&weights)
            .enumerate()
            .map(|(j, (&t, &w))| {
                let x = 2.0 * t - 1.0;
                let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
                sign * ((1.0 - x * x) * 2.0 * w).sqrt()
            })
            .collect();
        Ok(Self::new(d, move |r| {
            let mut num = Complex64::new(0.0, 0.0);
            let mut den = 0.0;
            for ((&t, &b), &v) in nodes.iter().zip(&bary).zip(&values) {
                let diff = r - t;
                if diff == 0.0 {
                    return v;
                }
                let c = b / diff;
                num += v * c;
                den += c;
            }
            num / den
        }))
    }

    pub fn degree(&self) -> i64 {
        self.d
    }

    pub fn eval(&self, r: f64) -> Complex64 {
        (self.f)(r)
    }

    /// The disk function `f_d(|z|) e^{id arg z}`.
    pub fn to_disk_function(&self) -> DiskFunction {
        let f = self.f.clone();
        let d = self.d;
        DiskFunction::new(move |w| {
            let r = w.norm();
            if r == 0.0 {
                return if d == 0 {
                    f(0.0)
                } else {
                    Complex64::new(0.0, 0.0)
                };
            }
            f(r) * (w / r).powi(d as i32)
        })
        .with_label(format!("harmonic(d={d})"))
    }
}

fn radial_integral(f: &Radial, e: f64, a: f64, b: f64) -> Complex64 {
    if b <= a {
        return Complex64::new(0.0, 0.0);
    }
    let re = integrate_interval(|r| (f(r) * r.powf(e)).re, a, b, APPLY_NODES);
    let im = integrate_interval(|r| (f(r) * r.powf(e)).im, a, b, APPLY_NODES);
    Complex64::new(re, im)
}

/// `C_U[f_d(r) e^{idt}](z)` from the radial formulas.
///
/// At `z = 0` only `d = 1` contributes; all other degrees have limit 0.
pub fn apply_harmonic(prof: &HarmonicProfile, z: DiskPoint) -> Result<Complex64> {
    z.require_interior("apply_harmonic")?;
    let d = prof.d;
    let rho = z.modulus();
    let f = &prof.f;
    if rho == 0.0 {
        if d != 1 {
            return Ok(Complex64::new(0.0, 0.0));
        }
        let whole = radial_integral(f, 2.0, 0.0, 1.0);
        let tail = radial_integral(f, 0.0, 0.0, 1.0);
        return Ok(2.0 * (whole - tail));
    }
    let radial = if d <= 0 {
        radial_integral(f, (1 - d) as f64, 0.0, rho)
    } else {
        let whole = radial_integral(f, (d + 1) as f64, 0.0, rho)
            + radial_integral(f, (d + 1) as f64, rho, 1.0);
        whole - radial_integral(f, (1 - d) as f64, rho, 1.0)
    };
    Ok(2.0 * z.z().powi((d - 1) as i32) * radial)
}

/// One term `coeff · z^m z̄^n` of a closed-form image.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ImageTerm {
    pub coeff: f64,
    pub m: u32,
    pub n: u32,
}

/// Closed form of `C_U[z^m z̄^n]`.
#[derive(Debug, Clone, PartialEq)]
pub struct MonomialImage {
    pub terms: Vec<ImageTerm>,
}

impl MonomialImage {
    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.terms
            .iter()
            .map(|t| t.coeff * z.powu(t.m) * z.conj().powu(t.n))
            .sum()
    }
}

/// `C_U[z^m z̄^n] = z^m z̄^{n+1}/(n+1)`, minus `(m-n)/((n+1)(m+1)) z^{m-n-1}`
/// when `m > n`.
pub fn monomial_action(m: u32, n: u32) -> MonomialImage {
    let mut terms = vec![ImageTerm {
        coeff: 1.0 / (n as f64 + 1.0),
        m,
        n: n + 1,
    }];
    if m > n {
        terms.push(ImageTerm {
            coeff: -((m - n) as f64) / ((n as f64 + 1.0) * (m as f64 + 1.0)),
            m: m - n - 1,
            n: 0,
        });
    }
    MonomialImage { terms }
}

/// Exact `C_U[g](z)` for a polynomial `g`.
pub fn cauchy_polynomial(g: &DiskFunction, z: Complex64) -> Option<Complex64> {
    g.monomials().map(|ts| {
        ts.iter()
            .map(|t| t.coeff * monomial_action(t.m, t.n).eval(z))
            .sum()
    })
}

/// `4/α_{|d|}²`, the sharp constant in `‖C_U g_d‖² ≤ A_d ‖g_d‖²`.
pub fn per_degree_constant(d: i64) -> Result<f64> {
    let a = bessel_first_zero(order_of(d)?)?;
    Ok(4.0 / (a * a))
}

/// `2/α_{|d|}`, the norm of `C_U` on degree `d`.
pub fn per_degree_norm(d: i64) -> Result<f64> {
    Ok(per_degree_constant(d)?.sqrt())
}

fn order_of(d: i64) -> Result<u32> {
    u32::try_from(d.unsigned_abs())
        .map_err(|_| domain("harmonics", format!("degree {d} too large")))
}

/// Galerkin matrix of the degree-`d` radial map on `n` equal cells of
/// `[0, 1]` with piecewise-constant trial functions.
#[derive(Debug, Clone)]
pub struct ReducedOperator {
    pub d: i64,
    /// `M_ij = ⟨T χ_i, T χ_j⟩`.
    pub matrix: Vec<Vec<f64>>,
    /// `‖χ_j‖² = b_j² - a_j²`.
    pub mass: Vec<f64>,
}

/// `∫_x^y 8 ρ^{2d-1} dρ`.
fn weight_integral(d: i64, x: f64, y: f64) -> f64 {
    if d == 0 {
        8.0 * (y / x).ln()
    } else {
        let k = 2 * d as i32;
        8.0 / k as f64 * (y.powi(k) - x.powi(k))
    }
}

/// `∫_x^y r^e dr` for integer `e`.
fn power_integral(e: i64, x: f64, y: f64) -> f64 {
    if e == -1 {
        (y / x).ln()
    } else {
        let k = (e + 1) as i32;
        (y.powi(k) - x.powi(k)) / k as f64
    }
}

impl ReducedOperator {
    pub fn assemble(d: i64, n: usize) -> Result<Self> {
        if n < 2 {
            return Err(domain("ReducedOperator", "need at least two cells"));
        }
        let h = 1.0 / n as f64;
        let (gt, gw) = gauss_legendre(8);
        // G_j on cell j, left value L_j and right value R_j
        let inside = |j: usize, rho: f64| -> f64 {
            let a = j as f64 * h;
            let b = a + h;
            if d <= 0 {
                power_integral(1 - d, a, rho)
            } else {
                power_integral(d + 1, a, b) - power_integral(1 - d, rho, b)
            }
        };
        let mut left = vec![0.0; n];
        let mut right = vec![0.0; n];
        let mut cross = vec![0.0; n]; // ∫_cell w G_j
        let mut square = vec![0.0; n]; // ∫_cell w G_j²
        for j in 0..n {
            let a = j as f64 * h;
            let b = a + h;
            if d <= 0 {
                right[j] = power_integral(1 - d, a, b);
            } else {
                right[j] = power_integral(d + 1, a, b);
                left[j] = if j == 0 && d >= 2 {
                    0.0
                } else {
                    right[j] - power_integral(1 - d, a, b)
                };
            }
            // the first cell carries the logarithmic or power-law end of G_0,
            // so it is split geometrically towards 0
            let pieces: Vec<(f64, f64)> = if j == 0 {
                (0..60)
                    .map(|k| (h * 0.5f64.powi(k + 1), h * 0.5f64.powi(k)))
                    .collect()
            } else {
                vec![(a, b)]
            };
            for (lo, hi) in pieces {
                for (&t, &w) in gt.iter().zip(&gw) {
                    let rho = lo + (hi - lo) * t;
                    let wt = 8.0 * rho.powi(2 * d as i32 - 1);
                    let g = inside(j, rho);
                    cross[j] += (hi - lo) * w * wt * g;
                    square[j] += (hi - lo) * w * wt * g * g;
                }
            }
        }
        let tail = |b: f64| {
            if b >= 1.0 {
                0.0
            } else {
                weight_integral(d, b, 1.0)
            }
        };
        let head = |a: f64| {
            if a <= 0.0 || d <= 0 {
                0.0
            } else {
                weight_integral(d, 0.0, a)
            }
        };
        let mut matrix = vec![vec![0.0; n]; n];
        for i in 0..n {
            let (ai, bi) = (i as f64 * h, (i + 1) as f64 * h);
            matrix[i][i] =
                left[i] * left[i] * head(ai) + square[i] + right[i] * right[i] * tail(bi);
            for j in i + 1..n {
                let (aj, bj) = (j as f64 * h, (j + 1) as f64 * h);
                let mut v = right[i] * cross[j] + right[i] * right[j] * tail(bj);
                if d > 0 {
                    v += left[i] * left[j] * head(ai) + left[j] * cross[i];
                    if aj > bi {
                        v += right[i] * left[j] * weight_integral(d, bi, aj);
                    }
                }
                matrix[i][j] = v;
                matrix[j][i] = v;
            }
        }
        let mass = (0..n)
            .map(|j| {
                let (a, b) = (j as f64 * h, (j + 1) as f64 * h);
                b * b - a * a
            })
            .collect();
        if matrix.iter().flatten().any(|v| !v.is_finite()) {
            return Err(domain("ReducedOperator", "non-finite matrix entry"));
        }
        Ok(Self { d, matrix, mass })
    }

    /// Largest singular value of the discretised map, by power iteration on
    /// `D^{-1/2} M D^{-1/2}`.
    pub fn top_singular_value(&self, rel_tol: f64, max_iter: usize) -> Result<(f64, usize)> {
        let n = self.mass.len();
        let s: Vec<f64> = self.mass.iter().map(|m| 1.0 / m.sqrt()).collect();
        let mut v = vec![1.0 / (n as f64).sqrt(); n];
        let mut lambda = 0.0;
        for it in 1..=max_iter {
            let mut next = vec![0.0; n];
            for i in 0..n {
                let row = &self.matrix[i];
                let mut acc = 0.0;
                for j in 0..n {
                    acc += row[j] * s[j] * v[j];
                }
                next[i] = s[i] * acc;
            }
            let norm = next.iter().map(|x| x * x).sum::<f64>().sqrt();
            if norm == 0.0 {
                return Ok((0.0, it));
            }
            let est = v.iter().zip(&next).map(|(a, b)| a * b).sum::<f64>();
            for (x, y) in v.iter_mut().zip(&next) {
                *x = y / norm;
            }
            if it > 1 && (est - lambda).abs() <= rel_tol * est.abs() {
                return Ok((est.sqrt(), it));
            }
            lambda = est;
        }
        Err(Error::NoConvergence {
            method: "power iteration",
            iterations: max_iter,
        })
    }
}

/// Discrete lower estimate of the degree-`d` norm together with its exact
/// value.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct NormEstimate {
    pub d: i64,
    pub n_radial: usize,
    pub estimate: f64,
    pub exact: f64,
    pub iterations: usize,
}

/// Norm of `C_U` restricted to degree `d`, from the Galerkin matrix on
/// `n_radial` cells. The estimate increases towards `2/α_{|d|}`.
pub fn estimate_degree_norm(d: i64, n_radial: usize) -> Result<NormEstimate> {
    if n_radial < 16 {
        return Err(domain(
            "estimate_degree_norm",
            "n_radial must be at least 16",
        ));
    }
    let op = ReducedOperator::assemble(d, n_radial)?;
    let (estimate, iterations) = op.top_singular_value(1e-10, 100_000)?;
    Ok(NormEstimate {
        d,
        n_radial,
        estimate,
        exact: per_degree_norm(d)?,
        iterations,
    })
}

/// Rayleigh ratio `‖C_U g_d‖₂ / ‖g_d‖₂` for `g_d = f(r) e^{idt}`, with the
/// radial integrals on `n` Gauss nodes.
pub fn degree_rayleigh_ratio<F>(d: i64, f: F, n: usize) -> f64
where
    F: Fn(f64) -> f64,
{
    let (nodes, weights) = gauss_legendre(n);
    let mut num = 0.0;
    let mut den = 0.0;
    let whole = if d > 0 {
        integrate_interval(|r| f(r) * r.powi((d + 1) as i32), 0.0, 1.0, n)
    } else {
        0.0
    };
    for (&rho, &w) in nodes.iter().zip(&weights) {
        let g = if d <= 0 {
            integrate_interval(|r| f(r) * r.powi((1 - d) as i32), 0.0, rho, n)
        } else {
            whole - integrate_interval(|r| f(r) * r.powi((1 - d) as i32), rho, 1.0, n)
        };
        num += w * 8.0 * rho.powi(2 * d as i32 - 1) * g * g;
        den += w * 2.0 * rho * f(rho).powi(2);
    }
    (num / den).sqrt()
}

/// First and second derivatives of the candidate eigenfunction.
fn candidate(d: i64, lambda: f64, x: f64) -> (f64, f64, f64) {
    if d <= 0 {
        // y = x^ν J_ν(s x), ν = 1 - d
        let nu = 1 - d;
        let s = 1.0 / lambda.sqrt();
        let t = s * x;
        let jn = bessel_j_signed(nu, t);
        let jm = bessel_j_signed(nu - 1, t);
        let jmm = bessel_j_signed(nu - 2, t);
        let xn = x.powi(nu as i32);
        let y = xn * jn;
        let dy = s * xn * jm;
        // J'_{ν-1} = (J_{ν-2} - J_ν)/2
        let ddy = nu as f64 * x.powi(nu as i32 - 1) * s * jm + xn * s * s * 0.5 * (jmm - jn);
        (y, dy, ddy)
    } else {
        // y = u^ν J_ν(u), u = 2√(x/λ), ν = 1 + d
        let nu = 1 + d;
        let u = 2.0 * (x / lambda).sqrt();
        let y = u.powi(nu as i32) * bessel_j_signed(nu, u);
        let dy = 2.0 / lambda * u.powi(nu as i32 - 1) * bessel_j_signed(nu - 1, u);
        let ddy = 4.0 / (lambda * lambda) * u.powi(nu as i32 - 2) * bessel_j_signed(nu - 2, u);
        (y, dy, ddy)
    }
}

fn boyd_check(lambda: f64, x: f64) -> Result<()> {
    if !(lambda > 0.0) || !(x > 0.0 && x < 1.0) {
        return Err(domain(
            "boyd_residual",
            format!("need λ > 0 and x in (0,1), got λ={lambda}, x={x}"),
        ));
    }
    Ok(())
}

fn relative(terms: [f64; 3]) -> f64 {
    let scale = terms.iter().fold(0.0f64, |m, t| m.max(t.abs()));
    let sum: f64 = terms.iter().sum();
    if scale == 0.0 {
        0.0
    } else {
        sum / scale
    }
}

/// Residual of the per-degree eigen-equation at the Bessel candidate:
/// `x²y'' + (2d-1)xy' + x²y/λ` for `d ≤ 0` and `xy'' - dy' + y/λ` for `d > 0`,
/// divided by the largest of its three terms.
pub fn boyd_residual(d: i64, lambda: f64, x: f64) -> Result<f64> {
    boyd_check(lambda, x)?;
    let (y, dy, ddy) = candidate(d, lambda, x);
    Ok(if d <= 0 {
        relative([x * x * ddy, (2 * d - 1) as f64 * x * dy, x * x * y / lambda])
    } else {
        relative([x * ddy, -d as f64 * dy, y / lambda])
    })
}

/// Relative residual of `xy'' - dy' + xy/λ` (the `d > 0` equation with an
/// extra factor `x` in the last term) at the same candidate.
pub fn boyd_residual_printed(d: i64, lambda: f64, x: f64) -> Result<f64> {
    boyd_check(lambda, x)?;
    if d <= 0 {
        return boyd_residual(d, lambda, x);
    }
    let (y, dy, ddy) = candidate(d, lambda, x);
    Ok(relative([x * ddy, -d as f64 * dy, x * y / lambda]))
}

/// Boundary functional whose zero fixes the admissible `λ`:
/// `J_d(2/√λ)` for `d > 0` and `J_{-d}(1/√λ)` for `d ≤ 0`.
pub fn boyd_boundary(d: i64, lambda: f64) -> Result<f64> {
    if !(lambda > 0.0) {
        return Err(domain("boyd_boundary", "λ must be positive"));
    }
    Ok(if d > 0 {
        bessel_j_signed(d, 2.0 / lambda.sqrt())
    } else {
        bessel_j_signed(-d, 1.0 / lambda.sqrt())
    })
}

/// Angular Fourier profiles `f_d`, `|d| ≤ max_d`, of `g` sampled on the
/// grid's radial nodes. Profiles whose samples all vanish (relative to the
/// largest one) are dropped.
pub fn decompose(g: &DiskFunction, max_d: usize, grid: &PolarGrid) -> Result<Vec<HarmonicProfile>> {
    let n_theta = grid.n_theta();
    let width = 2 * max_d + 1;
    let mut samples = vec![vec![Complex64::new(0.0, 0.0); grid.n_radial()]; width];
    for (i, &r) in grid.radial_nodes().iter().enumerate() {
        for j in 0..n_theta {
            let theta = grid.theta(j);
            let v = g.eval(Complex64::from_polar(r, theta));
            if !(v.re.is_finite() && v.im.is_finite()) {
                return Err(Error::NonFinite {
                    node: i * n_theta + j,
                    r,
                    theta,
                });
            }
            for (k, row) in samples.iter_mut().enumerate() {
                let d = k as f64 - max_d as f64;
                row[i] += v * Complex64::from_polar(1.0 / n_theta as f64, -d * theta);
            }
        }
    }
    let scale = samples
        .iter()
        .flatten()
        .fold(0.0f64, |m, v| m.max(v.norm()));
    let mut out = Vec::new();
    for (k, row) in samples.into_iter().enumerate() {
        let peak = row.iter().fold(0.0f64, |m, v| m.max(v.norm()));
        if scale > 0.0 && peak > 1e-12 * scale {
            out.push(HarmonicProfile::from_gauss_samples(
                k as i64 - max_d as i64,
                row,
            )?);
        }
    }
    Ok(out)
}
