//! Evaluation of the transforms through the angular Fourier modes of `g` on
//! the circle `|z| = ρ`.
//!
//! Writing `g = Σ f_d(r) e^{idt}`, both the Cauchy transform and the
//! solution operator act diagonally in `d` and reduce to radial integrals
//! over `[0, ρ]` and `[ρ, 1]`. Splitting the radial quadrature at `ρ` keeps
//! the kink of the kernels at `r = ρ` off the nodes, and a clustered rule on
//! `[0, ρ]` absorbs singularities of `g` at the origin.

use num_complex::Complex64;

use crate::error::{domain, Error, Result};
use crate::field::{DiskFunction, Smoothness};
use crate::quadrature::{clustering_exponent, gauss_legendre, CompensatedSum, PolarGrid};

pub const DEFAULT_MAX_DEGREE: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Panel {
    Inner,
    Outer,
}

#[derive(Debug, Clone)]
struct Node {
    r: f64,
    weight: f64,
    panel: Panel,
    /// `f_d(r)` for `d = -max_d ..= max_d`.
    profile: Vec<Complex64>,
}

/// Radial Fourier data of `g` adapted to one radius `ρ`.
#[derive(Debug, Clone)]
pub struct ModalExpansion {
    rho: f64,
    max_d: usize,
    nodes: Vec<Node>,
}

impl ModalExpansion {
    pub fn new(g: &DiskFunction, rho: f64, grid: &PolarGrid, max_d: usize) -> Result<Self> {
        if !(0.0..1.0).contains(&rho) {
            return Err(domain(
                "ModalExpansion",
                format!("radius {rho} outside [0, 1)"),
            ));
        }
        let order = match g.smoothness() {
            Smoothness::Singular { point, order } if point.norm() == 0.0 => order.max(0.0),
            _ => 0.0,
        };
        if order >= 2.0 {
            return Err(domain(
                "ModalExpansion",
                "singularity at the origin is not integrable",
            ));
        }
        let k = clustering_exponent(order);
        let n = grid.n_radial();
        let (t, w) = gauss_legendre(n);

        let mut radial = Vec::with_capacity(2 * n);
        let inner_end = if rho > 0.0 { rho } else { 1.0 };
        for (&ti, &wi) in t.iter().zip(&w) {
            let r = inner_end * ti.powf(k);
            let weight = wi * inner_end * k * ti.powf(k - 1.0);
            radial.push((r, weight, Panel::Inner));
        }
        if rho > 0.0 {
            // u = ln r on [ln ρ, 0]
            let span = -rho.ln();
            for (&ti, &wi) in t.iter().zip(&w) {
                let r = (-span * (1.0 - ti)).exp();
                radial.push((r, wi * span * r, Panel::Outer));
            }
        }

        let n_theta = grid.n_theta();
        let width = 2 * max_d + 1;
        // e^{-i d θ_j} for each angle j and degree index
        let mut twiddle = Vec::with_capacity(n_theta * width);
        for j in 0..n_theta {
            let theta = grid.theta(j);
            for idx in 0..width {
                let d = idx as f64 - max_d as f64;
                twiddle.push(Complex64::from_polar(1.0 / n_theta as f64, -d * theta));
            }
        }

        let mut nodes = Vec::with_capacity(radial.len());
        for (i, (r, weight, panel)) in radial.into_iter().enumerate() {
            if r == 0.0 {
                return Err(domain("ModalExpansion", "radial node underflow"));
            }
            let mut profile = vec![Complex64::new(0.0, 0.0); width];
            for j in 0..n_theta {
                let v = g.eval(Complex64::from_polar(r, grid.theta(j)));
                if !(v.re.is_finite() && v.im.is_finite()) {
                    return Err(Error::NonFinite {
                        node: i * n_theta + j,
                        r,
                        theta: grid.theta(j),
                    });
                }
                let row = &twiddle[j * width..(j + 1) * width];
                for (acc, &tw) in profile.iter_mut().zip(row) {
                    *acc += v * tw;
                }
            }
            nodes.push(Node {
                r,
                weight,
                panel,
                profile,
            });
        }
        Ok(Self { rho, max_d, nodes })
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn max_degree(&self) -> usize {
        self.max_d
    }

    fn index(&self, d: i64) -> usize {
        (d + self.max_d as i64) as usize
    }

    /// `∫ f_d(r) r^e h(r) dr` over the selected panels.
    fn moment(&self, d: i64, e: f64, panel: Option<Panel>, log: bool) -> Complex64 {
        let idx = self.index(d);
        let mut re = CompensatedSum::default();
        let mut im = CompensatedSum::default();
        for node in &self.nodes {
            if panel.is_some_and(|p| p != node.panel) {
                continue;
            }
            let mut scale = node.weight * node.r.powf(e);
            if log {
                scale *= node.r.ln();
            }
            let v = node.profile[idx] * scale;
            re.add(v.re);
            im.add(v.im);
        }
        Complex64::new(re.value(), im.value())
    }

    fn inner(&self, d: i64, e: f64) -> Complex64 {
        if self.rho == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        self.moment(d, e, Some(Panel::Inner), false)
    }

    fn outer(&self, d: i64, e: f64) -> Complex64 {
        if self.rho == 0.0 {
            return self.moment(d, e, None, false);
        }
        self.moment(d, e, Some(Panel::Outer), false)
    }

    fn whole(&self, d: i64, e: f64) -> Complex64 {
        self.moment(d, e, None, false)
    }

    /// Radial profile `f_d` at the quadrature nodes, as `(r, f_d(r))`.
    pub fn profile(&self, d: i64) -> Vec<(f64, Complex64)> {
        let idx = self.index(d);
        self.nodes.iter().map(|n| (n.r, n.profile[idx])).collect()
    }

    /// Contribution of degree `d` to the Cauchy transform at `ρ e^{iθ}`.
    pub fn cauchy_mode(&self, d: i64, theta: f64) -> Complex64 {
        let rho = self.rho;
        if rho == 0.0 {
            if d != 1 {
                return Complex64::new(0.0, 0.0);
            }
            return 2.0 * (self.whole(1, 2.0) - self.outer(1, 0.0));
        }
        let z_pow = Complex64::from_polar(rho.powi((d - 1) as i32), (d - 1) as f64 * theta);
        let radial = if d <= 0 {
            self.inner(d, (1 - d) as f64)
        } else {
            self.whole(d, (d + 1) as f64) - self.outer(d, (1 - d) as f64)
        };
        2.0 * z_pow * radial
    }

    /// `C_U[g](ρ e^{iθ})` summed over `|d| ≤ max_d`.
    pub fn cauchy(&self, theta: f64) -> Complex64 {
        let m = self.max_d as i64;
        (-m..=m).map(|d| self.cauchy_mode(d, theta)).sum()
    }

    /// Contribution of degree `d` to the zero-boundary solution at `ρ e^{iθ}`.
    pub fn poisson_mode(&self, d: i64, theta: f64) -> Complex64 {
        let rho = self.rho;
        let k = d.unsigned_abs() as i32;
        if k == 0 {
            let value = if rho == 0.0 {
                4.0 * self.moment(0, 1.0, None, true)
            } else {
                4.0 * (rho.ln() * self.inner(0, 1.0)
                    + self.moment(0, 1.0, Some(Panel::Outer), true))
            };
            return value;
        }
        if rho == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        let kf = k as f64;
        let radial = rho.powi(-k) * self.inner(d, kf + 1.0) + rho.powi(k) * self.outer(d, 1.0 - kf)
            - rho.powi(k) * self.whole(d, kf + 1.0);
        -(2.0 / kf) * radial * Complex64::from_polar(1.0, d as f64 * theta)
    }

    /// Zero-boundary solution `u(ρ e^{iθ})` summed over `|d| ≤ max_d`.
    pub fn poisson(&self, theta: f64) -> Complex64 {
        let m = self.max_d as i64;
        (-m..=m).map(|d| self.poisson_mode(d, theta)).sum()
    }
}
