//! Closed-form constants of the Cauchy transform and the gradient of the
//! zero-boundary solution, with quadrature counterparts.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Serialize, Serializer};

use crate::error::{domain, Error, Result};
use crate::geometry::DiskPoint;
use crate::quadrature::{integrate_disk_singular, PolarGrid, SingularConfig};
use crate::specfun::{alpha0, beta, gamma, hyp2f1};

/// A Lebesgue exponent in `[1, ∞]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Exponent {
    Finite(f64),
    Infinity,
}

impl Exponent {
    pub fn new(p: f64) -> Result<Self> {
        if p.is_infinite() && p > 0.0 {
            return Ok(Self::Infinity);
        }
        if !(p >= 1.0) {
            return Err(domain("Exponent", format!("p = {p} is below 1")));
        }
        Ok(Self::Finite(p))
    }

    /// `1/p`, zero at infinity.
    pub fn reciprocal(&self) -> f64 {
        match self {
            Self::Finite(p) => 1.0 / p,
            Self::Infinity => 0.0,
        }
    }

    pub fn conjugate(&self) -> Self {
        match *self {
            Self::Infinity => Self::Finite(1.0),
            Self::Finite(p) if p == 1.0 => Self::Infinity,
            Self::Finite(p) => Self::Finite(p / (p - 1.0)),
        }
    }

    pub fn as_f64(&self) -> f64 {
        match self {
            Self::Finite(p) => *p,
            Self::Infinity => f64::INFINITY,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Self::Infinity)
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Finite(p) => write!(f, "{p}"),
            Self::Infinity => write!(f, "inf"),
        }
    }
}

impl FromStr for Exponent {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if matches!(t.to_ascii_lowercase().as_str(), "inf" | "infinity" | "∞") {
            return Ok(Self::Infinity);
        }
        let p: f64 = t.parse().map_err(|_| Error::Parse {
            position: 0,
            message: format!("'{t}' is not an exponent"),
        })?;
        Self::new(p)
    }
}

impl Serialize for Exponent {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Self::Finite(p) => s.serialize_f64(*p),
            Self::Infinity => s.serialize_str("inf"),
        }
    }
}

/// `p` together with its conjugate exponent `q`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExponentPair {
    pub p: Exponent,
    pub q: Exponent,
}

impl ExponentPair {
    pub fn new(p: Exponent) -> Self {
        Self {
            p,
            q: p.conjugate(),
        }
    }

    /// Whether the pointwise constant `c_p` exists, i.e. `p < 2`.
    pub fn c_p_valid(&self) -> bool {
        matches!(self.p, Exponent::Finite(p) if p < 2.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundMethod {
    SharpEndpoint,
    Interpolated,
    PreInterpolation,
}

/// Norm bounds for `∂u` (Cauchy transform) and `∇u` at one exponent.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundSet {
    pub p: Exponent,
    pub cauchy_bound: f64,
    pub grad_bound: f64,
    pub method: BoundMethod,
}

fn pointwise_domain(func: &'static str, p: f64) -> Result<()> {
    if !(1.0..2.0).contains(&p) {
        return Err(domain(func, format!("p = {p} must lie in [1, 2)")));
    }
    Ok(())
}

/// `I_p(ρ) = ∫_U ((1-|ω|²)/(|z-ω||1-z̄ω|))^p dμ(ω)` for `|z| = ρ`:
/// `B(1+p, 1-p/2) ₂F₁(p/2-1, p; p/2+2; ρ²)`.
pub fn i_p_closed(p: f64, rho: f64) -> Result<f64> {
    pointwise_domain("i_p_closed", p)?;
    if !(0.0..=1.0).contains(&rho) {
        return Err(domain("i_p_closed", format!("rho = {rho} outside [0, 1]")));
    }
    if rho == 1.0 {
        return Ok(gamma(1.0 + p)? * gamma(1.0 - p / 2.0)? * gamma(3.0 - p)?
            / (2.0 * gamma(2.0 - p / 2.0)?));
    }
    Ok(beta(1.0 + p, 1.0 - p / 2.0)? * hyp2f1(p / 2.0 - 1.0, p, p / 2.0 + 2.0, rho * rho)?)
}

/// Singular quadrature of the integral defining `I_p` at `z`.
pub fn i_p_quad(p: f64, z: DiskPoint, grid: &PolarGrid) -> Result<f64> {
    pointwise_domain("i_p_quad", p)?;
    let zc = z.z();
    integrate_disk_singular(
        |s| {
            ((1.0 - s.omega.norm_sqr()) / (s.offset.norm() * (1.0 - zc.conj() * s.omega).norm()))
                .powf(p)
        },
        z,
        p,
        grid,
        &SingularConfig::default(),
    )
}

/// `Γ((1+p)/2) / (√π Γ(1+p/2))`, the mean of `|cos θ|^p` over the circle.
pub fn cos_moment(p: f64) -> Result<f64> {
    Ok(gamma((1.0 + p) / 2.0)? / (PI.sqrt() * gamma(1.0 + p / 2.0)?))
}

/// `𝓘_p(ρ) = 2∫_U |Re(e^{-iφ}(1-|ω|²)/((ω-z)(zω̄-1)))|^p dμ(ω)`, independent
/// of `φ`.
pub fn script_i_p(p: f64, rho: f64) -> Result<f64> {
    pointwise_domain("script_i_p", p)?;
    if !(0.0..=1.0).contains(&rho) {
        return Err(domain("script_i_p", format!("rho = {rho} outside [0, 1]")));
    }
    if rho == 1.0 {
        return Ok(2.0 * cos_moment(p)? * i_p_closed(p, 1.0)?);
    }
    let prefactor = 2.0 * gamma(1.0 + p)? * gamma(1.0 - p / 2.0)? * gamma((1.0 + p) / 2.0)?
        / (PI.sqrt() * gamma(1.0 + p / 2.0)? * gamma(2.0 + p / 2.0)?);
    Ok(prefactor * hyp2f1(p / 2.0 - 1.0, p, p / 2.0 + 2.0, rho * rho)?)
}

/// `2∫_U |Re(e^{-iφ} K(ω))|^p dμ(ω)` for the Cauchy kernel
/// `K(ω) = (1-|ω|²)/((ω-z)(zω̄-1))`.
///
/// At `z = 0` this does not depend on `φ` and equals [`script_i_p`]; for
/// `z ≠ 0` it does, and [`script_i_p`] is its mean over `φ`.
pub fn directional_kernel_mass(p: f64, z: DiskPoint, phi: f64, grid: &PolarGrid) -> Result<f64> {
    pointwise_domain("directional_kernel_mass", p)?;
    let zc = z.z();
    let rot = Complex64::from_polar(1.0, -phi);
    integrate_disk_singular(
        |s| {
            let k = rot * (1.0 - s.omega.norm_sqr()) / (s.offset * (zc * s.omega.conj() - 1.0));
            2.0 * k.re.abs().powf(p)
        },
        z,
        p,
        grid,
        &SingularConfig::default(),
    )
}

/// `J(ω) = (1-|ω|²)/(2|ω|) log((1+|ω|)/(1-|ω|))`, with `J(0) = 1`.
pub fn j_closed(omega: DiskPoint) -> f64 {
    let r = omega.modulus();
    if r < 1e-4 {
        // (1 - r²) Σ r^{2k}/(2k+1)
        let r2 = r * r;
        return (1.0 - r2) * (1.0 + r2 / 3.0 + r2 * r2 / 5.0 + r2 * r2 * r2 / 7.0);
    }
    (1.0 - r * r) / (2.0 * r) * (2.0 * r.atanh())
}

/// `J(ω) = ½∫_U (1-|ω|²)/(|z-ω||1-z̄ω|) dμ(z)` by singular quadrature.
pub fn j_quad(omega: DiskPoint, grid: &PolarGrid) -> Result<f64> {
    let w = omega.z();
    let v: f64 = integrate_disk_singular(
        |s| (1.0 - w.norm_sqr()) / (s.offset.norm() * (1.0 - s.omega.conj() * w).norm()),
        omega,
        1.0,
        grid,
        &SingularConfig::default(),
    )?;
    Ok(0.5 * v)
}

/// Sharp pointwise constant `c_p = B(1+p, 1-p/2)^{1/p}` in
/// `|∂u(z)| ≤ c_p ‖g‖_q`.
pub fn c_p(p: f64) -> Result<f64> {
    pointwise_domain("c_p", p)?;
    Ok(beta(1.0 + p, 1.0 - p / 2.0)?.powf(1.0 / p))
}

/// Sharp pointwise gradient constant in `|∇u(z)| ≤ C_p ‖g‖_q`:
/// `C_p^p = 2^p Γ((1+p)/2)/(√π Γ(1+p/2)) c_p^p = 2^{p-1} 𝓘_p(0)`.
pub fn big_c_p(p: f64) -> Result<f64> {
    pointwise_domain("big_c_p", p)?;
    Ok((2f64.powf(p) * cos_moment(p)? * c_p(p)?.powf(p)).powf(1.0 / p))
}

/// The form `C_p^p = 2^{2-p} Γ((1+p)/2)/(√π Γ(1+p/2)) c_p^p`; it agrees with
/// [`big_c_p`] only at `p = 1`.
pub fn big_c_p_printed(p: f64) -> Result<f64> {
    pointwise_domain("big_c_p_printed", p)?;
    Ok((2f64.powf(2.0 - p) * cos_moment(p)? * c_p(p)?.powf(p)).powf(1.0 / p))
}

/// Bound for `‖C_U‖_{L^p → L^p}`.
pub fn bound_cauchy(p: Exponent) -> f64 {
    let a = alpha0();
    match p {
        Exponent::Infinity => 4.0 / 3.0,
        Exponent::Finite(p) if p <= 2.0 => 2.0 / a.powf(2.0 - 2.0 / p),
        Exponent::Finite(p) => 4.0 / 3.0 * (1.5 / a).powf(2.0 / p),
    }
}

/// Bound for `‖∇u‖_p / ‖g‖_p`.
///
/// At `p = ∞` the value `16/(3π)` is the sharp constant for `|∇u(0)|`;
/// [`directional_kernel_mass`] gives larger values of `|∇u(z)|/‖g‖_∞` off the
/// origin.
pub fn bound_grad(p: Exponent) -> f64 {
    let a = alpha0();
    match p {
        Exponent::Infinity => 16.0 / (3.0 * PI),
        Exponent::Finite(p) if p <= 2.0 => 4.0 * a.powf(2.0 / p - 2.0),
        Exponent::Finite(p) => 16.0 / (3.0 * PI) * (3.0 * PI / (4.0 * a)).powf(2.0 / p),
    }
}

fn method_for(p: Exponent) -> BoundMethod {
    match p {
        Exponent::Infinity => BoundMethod::SharpEndpoint,
        Exponent::Finite(x) if x == 1.0 || x == 2.0 => BoundMethod::SharpEndpoint,
        Exponent::Finite(_) => BoundMethod::Interpolated,
    }
}

/// Interpolated bounds for `∂u` and `∇u` at `p`.
pub fn bound_set(p: Exponent) -> BoundSet {
    BoundSet {
        p,
        cauchy_bound: bound_cauchy(p),
        grad_bound: bound_grad(p),
        method: method_for(p),
    }
}

/// Bounds `(grad, cauchy) = (4(4/(3π))^{1-1/p}, 2(2/3)^{1-1/p})` obtained
/// before interpolation, for `1 < p < ∞`.
pub fn bound_pre_interpolation(p: f64) -> Result<(f64, f64)> {
    if !(p > 1.0 && p.is_finite()) {
        return Err(domain(
            "bound_pre_interpolation",
            format!("p = {p} outside (1, inf)"),
        ));
    }
    let e = 1.0 - 1.0 / p;
    Ok((
        4.0 * (4.0 / (3.0 * PI)).powf(e),
        2.0 * (2.0f64 / 3.0).powf(e),
    ))
}

/// Constants for `Δu = h` with zero boundary values: since `Δ = 4∂∂̄`, both
/// bounds are the ones above divided by 4.
pub fn bound_laplacian(p: Exponent) -> BoundSet {
    let b = bound_set(p);
    BoundSet {
        cauchy_bound: b.cauchy_bound / 4.0,
        grad_bound: b.grad_bound / 4.0,
        ..b
    }
}

fn crossing(lo: f64, hi: f64) -> Result<f64> {
    let f = |p: f64| bound_cauchy(Exponent::Finite(p)) - 1.0;
    let (mut a, mut b) = (lo, hi);
    let (fa, fb) = (f(a), f(b));
    if fa.signum() == fb.signum() {
        return Err(Error::Bracket(format!(
            "no sign change of bound_cauchy - 1 on [{lo}, {hi}]"
        )));
    }
    for _ in 0..200 {
        if b - a <= 1e-12 {
            break;
        }
        let m = 0.5 * (a + b);
        if f(m).signum() == fa.signum() {
            a = m;
        } else {
            b = m;
        }
    }
    let x = 0.5 * (a + b);
    let h = 1e-6;
    let slope = (f(x + h) - f(x - h)) / (2.0 * h);
    let polished = x - f(x) / slope;
    Ok(if (polished - x).abs() < 1e-10 {
        polished
    } else {
        x
    })
}

/// Exponents in `(1, 2)` and `(2, ∞)` where `bound_cauchy(p) = 1`.
///
/// The exponents where the exact operator norm equals 1 are not known in
/// closed form; these bound crossings bracket them only.
pub fn unit_norm_crossings() -> Result<(f64, f64)> {
    Ok((crossing(1.0 + 1e-9, 2.0)?, crossing(2.0, 64.0)?))
}
