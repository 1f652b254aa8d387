//! Inputs that attain, or approach, the sharp constants.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::constants::{big_c_p, c_p, cos_moment};
use crate::error::{domain, Result};
use crate::field::DiskFunction;
use crate::geometry::DiskPoint;
use crate::harmonics::degree_rayleigh_ratio;
use crate::operators::{cauchy, directional_derivative, solve_poisson};
use crate::quadrature::{
    gauss_legendre, integrate_interval, integrate_radial_clustered, PolarGrid,
};
use crate::specfun::{alpha0, bessel_j};
use crate::spectral::{ModalExpansion, DEFAULT_MAX_DEGREE};

/// Outcome of one sharpness witness.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WitnessReport {
    pub name: String,
    pub claimed_constant: f64,
    pub achieved_ratio: f64,
    /// `|achieved/claimed - 1|`.
    pub relative_gap: f64,
    pub n_radial: usize,
    pub n_theta: usize,
    /// Secondary quantities, e.g. cross-checks by an independent route.
    pub details: Vec<(String, f64)>,
}

impl WitnessReport {
    fn new(name: impl Into<String>, claimed: f64, achieved: f64, grid: &PolarGrid) -> Self {
        Self {
            name: name.into(),
            claimed_constant: claimed,
            achieved_ratio: achieved,
            relative_gap: (achieved / claimed - 1.0).abs(),
            n_radial: grid.n_radial(),
            n_theta: grid.n_theta(),
            details: Vec::new(),
        }
    }

    fn detail(mut self, key: &str, value: f64) -> Self {
        self.details.push((key.to_string(), value));
        self
    }

    pub fn get(&self, key: &str) -> Option<f64> {
        self.details.iter().find(|(k, _)| k == key).map(|(_, v)| *v)
    }

    /// Whether the achieved ratio stays below the claimed constant up to
    /// `tol`.
    pub fn within_bound(&self, tol: f64) -> bool {
        self.achieved_ratio <= self.claimed_constant * (1.0 + tol)
    }
}

fn check_p(func: &'static str, p: f64) -> Result<()> {
    if !(1.0..2.0).contains(&p) {
        return Err(domain(func, format!("p = {p} must lie in [1, 2)")));
    }
    Ok(())
}

/// `2∫_0^1 r^{1-p}(1-r²)^p dr`.
fn radial_mass(p: f64, n: usize) -> Result<f64> {
    Ok(2.0 * integrate_radial_clustered(|r| r.powf(1.0 - p) * (1.0 - r * r).powf(p), n, p)?)
}

/// `g(z) = -(z/|z|)((1-|z|²)/|z|)^{p-1}`, for which `|∂u(0)| = c_p ‖g‖_q`.
pub fn pointwise_extremal_function(p: f64) -> DiskFunction {
    DiskFunction::singular(
        move |w| {
            let r = w.norm();
            -(w / r) * ((1.0 - r * r) / r).powf(p - 1.0)
        },
        Complex64::new(0.0, 0.0),
        p - 1.0,
    )
    .with_label(format!("gg({p})"))
}

/// Ratio `|∂u(0)|/‖g‖_q` for the pointwise extremal, against `c_p`.
pub fn extremal_pointwise(p: f64, grid: &PolarGrid) -> Result<WitnessReport> {
    check_p("extremal_pointwise", p)?;
    let n = 2 * grid.n_radial();
    let du0 = radial_mass(p, n)?;
    let norm_q = if p == 1.0 {
        // sup |g| over the grid
        grid.radial_nodes()
            .iter()
            .map(|&r| {
                pointwise_extremal_function(p)
                    .eval(Complex64::new(r, 0.0))
                    .norm()
            })
            .fold(0.0, f64::max)
    } else {
        // |g|^q = ((1-r²)/r)^p
        du0.powf(1.0 - 1.0 / p)
    };
    let ratio = du0 / norm_q;
    let g = pointwise_extremal_function(p);
    let direct = cauchy(&g, DiskPoint::origin(), grid)?;
    Ok(
        WitnessReport::new(format!("extremal_pointwise(p={p})"), c_p(p)?, ratio, grid)
            .detail("du0_radial", du0)
            .detail("du0_disk_quadrature", direct.norm())
            .detail("norm_q", norm_q),
    )
}

/// `g(re^{it}) = ((1-r²)/r)^{p-1} |cos t|^{p-1} sign(cos t)`, for which
/// `|∇u(0)(1,0)| = C_p ‖g‖_q`.
pub fn gradient_extremal_function(p: f64) -> DiskFunction {
    DiskFunction::singular(
        move |w| {
            let r = w.norm();
            let c = w.re / r;
            let v = ((1.0 - r * r) / r * c.abs()).powf(p - 1.0) * c.signum();
            Complex64::new(v, 0.0)
        },
        Complex64::new(0.0, 0.0),
        p - 1.0,
    )
    .with_label(format!("gradient-extremal({p})"))
}

/// Ratio `|∇u(0)(1,0)|/‖g‖_q` for the gradient extremal, against the sharp
/// `C_p`.
pub fn extremal_gradient(p: f64, grid: &PolarGrid) -> Result<WitnessReport> {
    check_p("extremal_gradient", p)?;
    let n = 2 * grid.n_radial();
    let mean_cos = cos_moment(p)?;
    let mass = radial_mass(p, n)?;
    // ∇u(0)(1,0) = 2∫ Re K g dμ with Re K = -((1-r²)/r) cos t
    let derivative = 2.0 * mass * mean_cos;
    let norm_q_q = mass * mean_cos;
    let norm_q = if p == 1.0 {
        1.0
    } else {
        norm_q_q.powf(1.0 - 1.0 / p)
    };
    let ratio = derivative / norm_q;
    let g = gradient_extremal_function(p);
    let fine = PolarGrid::new(grid.n_radial(), 4 * grid.n_theta())?;
    let direct = directional_derivative(&g, DiskPoint::origin(), 0.0, &fine)?;
    Ok(WitnessReport::new(
        format!("extremal_gradient(p={p})"),
        big_c_p(p)?,
        ratio,
        grid,
    )
    .detail("gradient_closed", derivative)
    .detail("gradient_disk_quadrature", direct.re.abs())
    .detail("norm_q_pow_q", norm_q_q))
}

/// `a_n = ∫|∂u_n| dμ = 2(1 - 2/(3n))` for `g_n = n² χ_{|z|<1/n}`.
pub fn dirac_a_n(n: u32) -> f64 {
    2.0 * (1.0 - 2.0 / (3.0 * n as f64))
}

/// `∂u_n(z)`: `n² z̄` for `|z| < 1/n` and `1/z` outside.
pub fn dirac_field(n: u32, z: Complex64) -> Complex64 {
    let nf = n as f64;
    if z.norm() * nf < 1.0 {
        nf * nf * z.conj()
    } else {
        1.0 / z
    }
}

/// The concentrating sequence `g_n = n² χ_{(1/n)U}` with `‖g_n‖₁ = 1`.
pub fn dirac_function(n: u32) -> DiskFunction {
    let nf = n as f64;
    DiskFunction::real(move |w| if w.norm() * nf < 1.0 { nf * nf } else { 0.0 })
        .with_label(format!("dirac({n})"))
}

/// `a_n/b_n` for the Dirac sequence, against the `L¹` constant 2.
pub fn dirac_sequence(n: u32, grid: &PolarGrid) -> Result<WitnessReport> {
    if n == 0 {
        return Err(domain("dirac_sequence", "n must be positive"));
    }
    let a_n = dirac_a_n(n);
    let edge = 1.0 / n as f64;
    // |∂u_n| is radial; integrate 2ρ|∂u_n(ρ)| on the two smooth pieces
    let m = grid.n_radial();
    let field = |rho: f64| 2.0 * rho * dirac_field(n, Complex64::new(rho, 0.0)).norm();
    let quad = integrate_interval(field, 0.0, edge, m) + integrate_interval(field, edge, 1.0, m);
    Ok(
        WitnessReport::new(format!("dirac_sequence(n={n})"), 2.0, a_n, grid)
            .detail("a_n", a_n)
            .detail("a_n_quadrature", quad)
            .detail("b_n", 1.0),
    )
}

/// Radial profile `J₀(α r)` of the maximiser of `‖C_U g‖₂/‖g‖₂`.
pub fn bessel_extremal_function() -> DiskFunction {
    let a = alpha0();
    DiskFunction::real(move |w| bessel_j(0, a * w.norm())).with_label("bessel")
}

/// The profile `|z| J₀(α|z|)`.
pub fn bessel_extremal_printed_function() -> DiskFunction {
    let a = alpha0();
    DiskFunction::real(move |w| w.norm() * bessel_j(0, a * w.norm())).with_label("bessel-printed")
}

/// `‖C_U g‖₂/‖g‖₂` for a radial `g`, with `C_U g` computed by disk
/// quadrature at `n` radial Gauss nodes.
pub fn radial_rayleigh_ratio_quadrature(
    g: &DiskFunction,
    n: usize,
    grid: &PolarGrid,
) -> Result<f64> {
    let (nodes, weights) = gauss_legendre(n);
    let mut num = 0.0;
    let mut den = 0.0;
    for (&rho, &w) in nodes.iter().zip(&weights) {
        let z = DiskPoint::new(rho, 0.0)?;
        num += w * 2.0 * rho * cauchy(g, z, grid)?.norm_sqr();
        den += w * 2.0 * rho * g.eval(z.z()).norm_sqr();
    }
    Ok((num / den).sqrt())
}

/// Rayleigh ratio of the Bessel maximiser against `2/α`.
pub fn bessel_extremal(grid: &PolarGrid) -> Result<WitnessReport> {
    let a = alpha0();
    let claimed = 2.0 / a;
    let closed = degree_rayleigh_ratio(0, |r| bessel_j(0, a * r), grid.n_radial());
    let quad = radial_rayleigh_ratio_quadrature(&bessel_extremal_function(), 32, grid)?;
    let printed = degree_rayleigh_ratio(0, |r| r * bessel_j(0, a * r), grid.n_radial());
    Ok(WitnessReport::new("bessel_extremal", claimed, closed, grid)
        .detail("ratio_disk_quadrature", quad)
        .detail("ratio_printed_profile", printed))
}

/// `g(z) = (z/(|z| log|z|)) (1-|z|²)/|z|`, which lies in `L²` while `∂u`
/// is unbounded near 0.
pub fn unbounded_function() -> DiskFunction {
    DiskFunction::singular(
        |w| {
            let r = w.norm();
            w / (r * r.ln()) * ((1.0 - r * r) / r)
        },
        Complex64::new(0.0, 0.0),
        1.0,
    )
    .with_label("she")
}

/// `|∂u(r)|` along the positive real axis for the unbounded example.
pub fn unbounded_example(radii: &[f64], grid: &PolarGrid) -> Result<Vec<(f64, f64)>> {
    let g = unbounded_function();
    radii
        .iter()
        .map(|&r| {
            if !(r > 0.0 && r < 0.5) {
                return Err(domain(
                    "unbounded_example",
                    format!("radius {r} outside (0, 0.5)"),
                ));
            }
            Ok((r, cauchy(&g, DiskPoint::new(r, 0.0)?, grid)?.norm()))
        })
        .collect()
}

/// `‖g‖₂` of the unbounded example: `2∫_0^1 (1-r²)²/(r log² r) dr`, computed
/// with `r = e^{-u}`, `u = t/(1-t)`.
pub fn unbounded_l2_norm(n: usize) -> f64 {
    let integrand = |t: f64| {
        let u = t / (1.0 - t);
        let du = 1.0 / ((1.0 - t) * (1.0 - t));
        let s = -(-2.0 * u).exp_m1();
        2.0 * s * s / (u * u) * du
    };
    integrate_interval(integrand, 0.0, 1.0, n).sqrt()
}

/// `∫_{ε<|z|<1} |g|^p dμ` for the unbounded example.
pub fn unbounded_truncated_lp(p: f64, eps: f64, n: usize) -> f64 {
    // 2∫_ε^1 r ((1-r²)/(r²|log r|))^p dr in the variable u = -ln r
    let top = -eps.ln();
    let integrand = |u: f64| {
        let r = (-u).exp();
        let s = -(-2.0 * u).exp_m1();
        2.0 * r * r * (s / (r * u)).powf(p)
    };
    // geometric panels keep the growth near u = top resolved
    let mut total = 0.0;
    let mut lo = 0.0;
    let mut hi = 1.0f64.min(top);
    while lo < top {
        total += integrate_interval(integrand, lo, hi, n);
        lo = hi;
        hi = (2.0 * hi).min(top);
    }
    total
}

/// `u(z) = (4/3) z (1 - |z|)`, the zero-boundary solution for `g = -z/|z|`.
pub fn remark_solution(z: Complex64) -> Complex64 {
    4.0 / 3.0 * z * (1.0 - z.norm())
}

/// Solution for `g = -z/|z|` on a 20×20 polar sample against
/// [`remark_solution`]; the gap is the largest absolute error.
pub fn remark_solution_check(grid: &PolarGrid) -> Result<WitnessReport> {
    let g = DiskFunction::singular(|w| -w / w.norm(), Complex64::new(0.0, 0.0), 0.0)
        .with_label("remark");
    let mut max_err = 0.0f64;
    let mut max_err_conj = 0.0f64;
    for i in 0..20 {
        let rho = i as f64 / 20.0;
        let expansion = if rho > 0.0 {
            Some(ModalExpansion::new(&g, rho, grid, DEFAULT_MAX_DEGREE)?)
        } else {
            None
        };
        for j in 0..20 {
            let theta = 2.0 * PI * j as f64 / 20.0;
            let z = Complex64::from_polar(rho, theta);
            let u = match &expansion {
                Some(e) => e.poisson(theta),
                None => solve_poisson(&g, DiskPoint::origin(), grid)?,
            };
            max_err = max_err.max((u - remark_solution(z)).norm());
            max_err_conj = max_err_conj.max((u - remark_solution(z).conj()).norm());
        }
    }
    let half = solve_poisson(&g, DiskPoint::new(0.5, 0.0)?, grid)?.re;
    let mut report = WitnessReport::new("remark_solution", 1.0 / 3.0, half, grid)
        .detail("max_abs_error", max_err)
        .detail("max_abs_error_conjugate_form", max_err_conj);
    report.relative_gap = max_err;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid() -> PolarGrid {
        PolarGrid::new(100, 256).unwrap()
    }

    #[test]
    fn pointwise_extremals() {
        let g = grid();
        let r = extremal_pointwise(1.0, &g).unwrap();
        assert!((r.get("du0_radial").unwrap() - 4.0 / 3.0).abs() < 1e-12);
        assert!((r.get("norm_q").unwrap() - 1.0).abs() < 1e-15);
        assert!(r.relative_gap < 1e-8);
        assert!((r.get("du0_disk_quadrature").unwrap() - 4.0 / 3.0).abs() < 1e-10);
        for (p, tol) in [(1.5, 1e-6), (1.9, 1e-5)] {
            let r = extremal_pointwise(p, &g).unwrap();
            assert!(r.relative_gap < tol, "{r:?}");
            assert!(r.within_bound(1e-4));
            let du0 = r.get("du0_radial").unwrap();
            assert!((r.get("du0_disk_quadrature").unwrap() - du0).abs() < 1e-6 * du0);
        }
    }

    #[test]
    fn gradient_extremals() {
        let g = grid();
        let r = extremal_gradient(1.0, &g).unwrap();
        assert!((r.achieved_ratio - 16.0 / (3.0 * PI)).abs() < 1e-10);
        let r = extremal_gradient(1.5, &g).unwrap();
        assert!(r.relative_gap < 1e-8);
        let printed = crate::constants::big_c_p_printed(1.5).unwrap();
        assert!(
            (r.get("norm_q_pow_q").unwrap() - 2f64.powf(-0.5) * printed.powf(1.5)).abs() < 1e-8
        );
        let closed = r.get("gradient_closed").unwrap();
        assert!((r.get("gradient_disk_quadrature").unwrap() - closed).abs() < 1e-4 * closed);
    }

    #[test]
    fn dirac() {
        let g = grid();
        assert!((dirac_a_n(3) - 14.0 / 9.0).abs() < 1e-15);
        assert!((dirac_a_n(100) - 1.986_666_666_666_666_7).abs() < 1e-15);
        let mut prev = 0.0;
        for n in [1, 2, 5, 10, 100, 1000] {
            let r = dirac_sequence(n, &g).unwrap();
            assert!(r.achieved_ratio > prev && r.achieved_ratio < 2.0);
            prev = r.achieved_ratio;
            assert!((r.get("a_n_quadrature").unwrap() - dirac_a_n(n)).abs() < 1e-8);
        }
        // the closed-form field agrees with the transform of g_n
        let f = dirac_function(4);
        let fine = PolarGrid::new(200, 256).unwrap();
        for &x in &[0.1, 0.6] {
            let z = DiskPoint::new(x, 0.2).unwrap();
            let v = crate::operators::cauchy(&f, z, &fine).unwrap();
            assert!((v - dirac_field(4, z.z())).norm() < 5e-3);
        }
    }

    #[test]
    fn bessel() {
        let g = PolarGrid::new(64, 128).unwrap();
        let r = bessel_extremal(&g).unwrap();
        assert!((r.achieved_ratio - 2.0 / alpha0()).abs() < 1e-10);
        assert!((r.get("ratio_disk_quadrature").unwrap() - 2.0 / alpha0()).abs() < 1e-6);
        assert!(r.get("ratio_printed_profile").unwrap() < r.achieved_ratio - 1e-3);
        let a = alpha0();
        // any perturbation lowers the ratio
        let pert = degree_rayleigh_ratio(0, |x| bessel_j(0, a * x) + 0.1 * (1.0 - x * x), 200);
        assert!(pert < r.achieved_ratio);
        let scaled = degree_rayleigh_ratio(0, |x| 3.0 * bessel_j(0, a * x), 200);
        assert!((scaled - r.achieved_ratio).abs() < 1e-14);
    }

    #[test]
    fn unbounded() {
        let g = grid();
        let radii: Vec<f64> = (0..7).map(|k| 0.1 * 0.5f64.powi(k)).collect();
        let vals = unbounded_example(&radii, &g).unwrap();
        assert!(vals.windows(2).all(|w| w[1].1 > w[0].1));
        let a = unbounded_l2_norm(200);
        let b = unbounded_l2_norm(400);
        assert!(a.is_finite() && (a - b).abs() < 1e-6 * b);
        // grows like ε^{-1/2}/|log ε|^{5/2}
        let grow: Vec<f64> = [1e-4, 1e-8, 1e-12]
            .iter()
            .map(|&e| unbounded_truncated_lp(2.5, e, 64))
            .collect();
        assert!(
            grow[1] > 4.0 * grow[0] && grow[2] > 20.0 * grow[1],
            "{grow:?}"
        );
        let l2: Vec<f64> = [1e-4, 1e-8]
            .iter()
            .map(|&e| unbounded_truncated_lp(2.0, e, 64))
            .collect();
        assert!((l2[1] - b * b).abs() < 0.2 && l2[1] > l2[0]);
        assert!(unbounded_example(&[0.7], &g).is_err());
    }

    #[test]
    fn remark() {
        let r = remark_solution_check(&grid()).unwrap();
        assert!((r.achieved_ratio - 1.0 / 3.0).abs() < 1e-10);
        assert!(r.get("max_abs_error").unwrap() < 1e-6);
        assert!(r.get("max_abs_error_conjugate_form").unwrap() > 0.1);
        assert_eq!(
            remark_solution(Complex64::new(0.0, 0.0)),
            Complex64::new(0.0, 0.0)
        );
        assert!(remark_solution(Complex64::new(0.0, 1.0)).norm() < 1e-15);
    }
}
