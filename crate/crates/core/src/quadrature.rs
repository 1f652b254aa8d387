//! Quadrature against the normalized area measure `dμ = dx dy / π` of the
//! unit disk, including integrands with an integrable point singularity
//! `|ω - z|^{-p}`, `p < 2`.
//!
//! Singular integrals are pulled back through the involution
//! `ω = (z - a)/(1 - z̄ a)`, which moves the singular point to `a = 0`. In
//! polar coordinates around the origin the singular factor becomes
//! `r^{1-p}`, which the radial map `r = s t^k` with `k (2 - p)` integral
//! turns into a polynomial weight.

use std::f64::consts::PI;
use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

use crate::error::{domain, Error, Result};
use crate::geometry::{area_factor_raw, involution, DiskPoint};

/// Field values that can be integrated: real or complex.
pub trait Scalar:
    Copy + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self> + Send + Sync + 'static
{
    fn zero() -> Self;
    fn is_finite_value(&self) -> bool;
    fn to_parts(self) -> (f64, f64);
    fn from_parts(re: f64, im: f64) -> Self;
}

impl Scalar for f64 {
    fn zero() -> Self {
        0.0
    }
    fn is_finite_value(&self) -> bool {
        self.is_finite()
    }
    fn to_parts(self) -> (f64, f64) {
        (self, 0.0)
    }
    fn from_parts(re: f64, _im: f64) -> Self {
        re
    }
}

impl Scalar for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn is_finite_value(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }
    fn to_parts(self) -> (f64, f64) {
        (self.re, self.im)
    }
    fn from_parts(re: f64, im: f64) -> Self {
        Complex64::new(re, im)
    }
}

/// Neumaier-compensated running sum; the result depends only on the order
/// of additions, which is fixed by the node ordering.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

#[derive(Debug, Clone, Copy, Default)]
struct Accumulator {
    re: CompensatedSum,
    im: CompensatedSum,
}

impl Accumulator {
    fn add<T: Scalar>(&mut self, v: T) {
        let (re, im) = v.to_parts();
        self.re.add(re);
        self.im.add(im);
    }

    fn value<T: Scalar>(&self) -> T {
        T::from_parts(self.re.value(), self.im.value())
    }
}

/// Gauss–Legendre nodes and weights on `(0, 1)`, exact for polynomials of
/// degree `2n - 1`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1, "gauss_legendre needs at least one node");
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        // Tricomi initial guess for the i-th root of P_n on (-1, 1), descending
        let theta = PI * (i as f64 + 0.75) / (nf + 0.5);
        let mut x = (1.0 - (nf - 1.0) / (8.0 * nf * nf * nf)) * theta.cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        dp = if d != 0.0 { d } else { dp };
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        // map to (0, 1)
        nodes[i] = 0.5 * (1.0 - x);
        nodes[n - 1 - i] = 0.5 * (1.0 + x);
        weights[i] = 0.5 * w;
        weights[n - 1 - i] = 0.5 * w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.5;
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Gauss rule on `(0,1)` times an equiangular rule on the circle.
#[derive(Debug, Clone)]
pub struct PolarGrid {
    radial_nodes: Vec<f64>,
    radial_weights: Vec<f64>,
    n_theta: usize,
    cos_sin: Vec<(f64, f64)>,
}

pub const DEFAULT_N_RADIAL: usize = 200;
pub const DEFAULT_N_THETA: usize = 512;

impl PolarGrid {
    pub fn new(n_radial: usize, n_theta: usize) -> Result<Self> {
        if n_radial == 0 || n_theta == 0 {
            return Err(domain("PolarGrid", "node counts must be positive"));
        }
        let (radial_nodes, radial_weights) = gauss_legendre(n_radial);
        let cos_sin = (0..n_theta)
            .map(|j| {
                let t = 2.0 * PI * j as f64 / n_theta as f64;
                (t.cos(), t.sin())
            })
            .collect();
        Ok(Self {
            radial_nodes,
            radial_weights,
            n_theta,
            cos_sin,
        })
    }

    pub fn n_radial(&self) -> usize {
        self.radial_nodes.len()
    }

    pub fn n_theta(&self) -> usize {
        self.n_theta
    }

    pub fn radial_nodes(&self) -> &[f64] {
        &self.radial_nodes
    }

    pub fn radial_weights(&self) -> &[f64] {
        &self.radial_weights
    }

    pub fn theta(&self, j: usize) -> f64 {
        2.0 * PI * j as f64 / self.n_theta as f64
    }

    pub(crate) fn unit(&self, j: usize) -> Complex64 {
        let (c, s) = self.cos_sin[j];
        Complex64::new(c, s)
    }

    /// Grid with doubled radial and angular resolution.
    pub fn refined(&self) -> Self {
        Self::new(2 * self.n_radial(), 2 * self.n_theta).expect("positive sizes")
    }
}

impl Default for PolarGrid {
    fn default() -> Self {
        Self::new(DEFAULT_N_RADIAL, DEFAULT_N_THETA).expect("positive sizes")
    }
}

/// Parameters of the singular path.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SingularConfig {
    /// Radius (in the pulled-back variable) of the inner panel that carries
    /// the clustered nodes.
    pub split_radius: f64,
    /// Multiplier of the radial node count on the inner panel.
    pub refined_factor: usize,
}

impl Default for SingularConfig {
    fn default() -> Self {
        Self {
            split_radius: 0.5,
            refined_factor: 1,
        }
    }
}

impl SingularConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.split_radius > 0.0 && self.split_radius < 1.0) {
            return Err(domain("SingularConfig", "split_radius must lie in (0, 1)"));
        }
        if self.refined_factor == 0 {
            return Err(domain("SingularConfig", "refined_factor must be positive"));
        }
        Ok(())
    }
}

/// `∫_U f dμ` on the polar grid.
pub fn integrate_disk<T, F>(f: F, grid: &PolarGrid) -> Result<T>
where
    T: Scalar,
    F: Fn(Complex64) -> T,
{
    let n_theta = grid.n_theta;
    let mut acc = Accumulator::default();
    for (i, (&r, &w)) in grid
        .radial_nodes
        .iter()
        .zip(&grid.radial_weights)
        .enumerate()
    {
        let scale = w * r * 2.0 / n_theta as f64;
        let mut ring = Accumulator::default();
        for j in 0..n_theta {
            let v = f(grid.unit(j) * r);
            if !v.is_finite_value() {
                return Err(Error::NonFinite {
                    node: i * n_theta + j,
                    r,
                    theta: grid.theta(j),
                });
            }
            ring.add(v);
        }
        acc.add(ring.value::<T>() * scale);
    }
    Ok(acc.value())
}

/// What the singular integrator hands to the integrand at each node.
#[derive(Debug, Clone, Copy)]
pub struct SingularSample {
    /// The integration variable `ω`.
    pub omega: Complex64,
    /// `ω - z`, computed without cancellation.
    pub offset: Complex64,
    /// The pulled-back variable `a`, with `|a| = |(z - ω)/(1 - z̄ ω)|`.
    pub pullback: Complex64,
}

/// Exponent `k` of the radial map `r = s t^k` for a singularity of order
/// `p`: the smallest `k ≥ 2` with `k (2 - p)` integral.
pub fn clustering_exponent(order: f64) -> f64 {
    let gap = 2.0 - order;
    let m = (2.0 * gap - 1e-12).ceil().max(1.0);
    m / gap
}

/// `∫_U f dμ` for an integrand with a singularity of order at most
/// `|ω - z|^{-order}` at `z`, `0 ≤ order < 2`.
pub fn integrate_disk_singular<T, F>(
    f: F,
    z: DiskPoint,
    order: f64,
    grid: &PolarGrid,
    cfg: &SingularConfig,
) -> Result<T>
where
    T: Scalar,
    F: Fn(SingularSample) -> T,
{
    if !(0.0..2.0).contains(&order) {
        return Err(domain(
            "integrate_disk_singular",
            format!("singularity order {order} is not integrable (need 0 <= p < 2)"),
        ));
    }
    cfg.validate()?;
    z.require_interior("integrate_disk_singular")?;
    let zc = z.z();
    let zbar = zc.conj();
    let shrink = 1.0 - zc.norm_sqr();
    let k = clustering_exponent(order);
    let s = cfg.split_radius;

    let (t_inner, w_inner) = gauss_legendre(grid.n_radial() * cfg.refined_factor);
    let mut radial: Vec<(f64, f64)> = Vec::with_capacity(t_inner.len() + grid.n_radial());
    for (&t, &w) in t_inner.iter().zip(&w_inner) {
        let r = s * t.powf(k);
        let dr = s * k * t.powf(k - 1.0);
        radial.push((r, w * dr));
    }
    for (&u, &w) in grid.radial_nodes.iter().zip(&grid.radial_weights) {
        radial.push((s + (1.0 - s) * u, w * (1.0 - s)));
    }

    let n_theta = grid.n_theta;
    let mut acc = Accumulator::default();
    for (i, &(r, wr)) in radial.iter().enumerate() {
        if r == 0.0 {
            return Err(domain(
                "integrate_disk_singular",
                format!("order {order} clusters nodes below f64 range"),
            ));
        }
        let scale = wr * r * 2.0 / n_theta as f64;
        let mut ring = Accumulator::default();
        for j in 0..n_theta {
            let a = grid.unit(j) * r;
            let denom = 1.0 - zbar * a;
            let sample = SingularSample {
                omega: involution(a, zc),
                offset: -a * shrink / denom,
                pullback: a,
            };
            let v = f(sample) * area_factor_raw(zc, a);
            if !v.is_finite_value() {
                return Err(Error::NonFinite {
                    node: i * n_theta + j,
                    r,
                    theta: grid.theta(j),
                });
            }
            ring.add(v);
        }
        acc.add(ring.value::<T>() * scale);
    }
    Ok(acc.value())
}

/// Plain Gauss–Legendre value of `∫_0^1 f(r) dr` with `n` nodes.
pub fn integrate_radial<F: Fn(f64) -> f64>(f: F, n: usize) -> f64 {
    let (nodes, weights) = gauss_legendre(n);
    let mut acc = CompensatedSum::default();
    for (&r, &w) in nodes.iter().zip(&weights) {
        acc.add(w * f(r));
    }
    acc.value()
}

/// `∫_0^1 f(r) dr` for `f` behaving like `r^{1-p}` at the origin, `p < 2`,
/// using the same clustering map as the singular disk path.
pub fn integrate_radial_clustered<F: Fn(f64) -> f64>(f: F, n: usize, order: f64) -> Result<f64> {
    if !(order < 2.0) {
        return Err(domain(
            "integrate_radial_clustered",
            format!("order {order} >= 2"),
        ));
    }
    let k = clustering_exponent(order.max(0.0));
    let (nodes, weights) = gauss_legendre(n);
    let mut acc = CompensatedSum::default();
    for (&t, &w) in nodes.iter().zip(&weights) {
        let r = t.powf(k);
        if r == 0.0 {
            return Err(domain("integrate_radial_clustered", "node underflow"));
        }
        acc.add(w * k * t.powf(k - 1.0) * f(r));
    }
    Ok(acc.value())
}

/// Gauss–Legendre on `[a, b]`.
pub fn integrate_interval<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, n: usize) -> f64 {
    let (nodes, weights) = gauss_legendre(n);
    let h = b - a;
    let mut acc = CompensatedSum::default();
    for (&t, &w) in nodes.iter().zip(&weights) {
        acc.add(w * f(a + h * t));
    }
    acc.value() * h
}
