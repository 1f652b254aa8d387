//! Integral operators of the Dirichlet problem `u_{zz̄} = g`, `u = 0` on the
//! unit circle.
//!
//! All kernels are integrated against `dμ = dA/π`; the printed `(1/π)∫ … dA`
//! and `(2/π)∫ … dA` forms become `∫ … dμ` and `2∫ … dμ`.

use num_complex::Complex64;

use crate::error::{domain, Result};
use crate::field::{DiskFunction, Smoothness};
use crate::geometry::DiskPoint;
use crate::quadrature::{
    integrate_disk, integrate_disk_singular, PolarGrid, SingularConfig, SingularSample,
};
use crate::spectral::{ModalExpansion, DEFAULT_MAX_DEGREE};

/// `(∂u/∂z, ∂u/∂z̄)` at a point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GradientValue {
    pub dz: Complex64,
    pub dzbar: Complex64,
}

impl GradientValue {
    /// Norm of the real-linear map `h ↦ dz·h + dzbar·h̄`.
    pub fn norm(&self) -> f64 {
        self.dz.norm() + self.dzbar.norm()
    }

    /// Derivative in direction `h`.
    pub fn apply(&self, h: Complex64) -> Complex64 {
        self.dz * h + self.dzbar * h.conj()
    }

    /// Real 2×2 matrix of the map `h ↦ dz·h + dzbar·h̄` on `R²` when the
    /// values of `u` are read as points of the plane.
    pub fn jacobian(&self) -> [[f64; 2]; 2] {
        let dx = self.dz + self.dzbar;
        let dy = Complex64::i() * (self.dz - self.dzbar);
        [[dx.re, dy.re], [dx.im, dy.im]]
    }
}

const ORIGIN_TOL: f64 = 1e-14;

/// Beyond this modulus the pulled-back integrand concentrates in a sliver of
/// width `1 - |z|` and smooth inputs go through the modal expansion.
pub const BOUNDARY_LAYER: f64 = 0.9;

/// Angular degrees kept for smooth inputs in the boundary layer.
pub const BOUNDARY_MAX_DEGREE: usize = 48;

enum Route {
    /// Pull back to `a = 0` with the given singularity order.
    Mobius(f64),
    /// Angular modes `|d| <= max_d` split at `|z|`.
    Spectral(usize),
}

fn route(g: &DiskFunction, z: DiskPoint, kernel_order: f64, func: &'static str) -> Result<Route> {
    match g.smoothness() {
        Smoothness::Smooth if z.modulus() > BOUNDARY_LAYER => {
            Ok(Route::Spectral(BOUNDARY_MAX_DEGREE))
        }
        Smoothness::Smooth => Ok(Route::Mobius(kernel_order)),
        Smoothness::Singular { point, order } => {
            if (point - z.z()).norm() <= ORIGIN_TOL {
                let total = kernel_order + order.max(0.0);
                if total >= 2.0 {
                    return Err(domain(
                        func,
                        format!(
                            "kernel and right-hand side singularities at {} are not integrable",
                            z.z()
                        ),
                    ));
                }
                Ok(Route::Mobius(total))
            } else if point.norm() <= ORIGIN_TOL {
                Ok(Route::Spectral(DEFAULT_MAX_DEGREE))
            } else {
                Ok(Route::Mobius(kernel_order))
            }
        }
    }
}

/// Keeps the modes below the angular Nyquist limit of the grid.
fn capped(max_d: usize, grid: &PolarGrid) -> usize {
    max_d.min(grid.n_theta() / 2 - 1)
}

/// Kernel `(1 - |ω|²) / ((ω - z)(ω̄ z - 1))` of the Cauchy transform.
#[inline]
fn cauchy_kernel(s: &SingularSample, z: Complex64) -> Complex64 {
    (1.0 - s.omega.norm_sqr()) / (s.offset * (s.omega.conj() * z - 1.0))
}

/// Cauchy transform `C_U[g](z) = (1/π)∫ (1-|ω|²)/((ω-z)(ω̄z-1)) g(ω) dA(ω)`,
/// which equals `∂u/∂z` for the zero-boundary solution `u`.
pub fn cauchy(g: &DiskFunction, z: DiskPoint, grid: &PolarGrid) -> Result<Complex64> {
    z.require_interior("cauchy")?;
    match route(g, z, 1.0, "cauchy")? {
        Route::Mobius(order) => integrate_disk_singular(
            |s| cauchy_kernel(&s, z.z()) * g.eval(s.omega),
            z,
            order,
            grid,
            &SingularConfig::default(),
        ),
        Route::Spectral(max_d) => {
            let e = ModalExpansion::new(g, z.modulus(), grid, capped(max_d, grid))?;
            Ok(e.cauchy(z.z().arg()))
        }
    }
}

/// Conjugate Cauchy transform
/// `(1/π)∫ (1-|ω|²)/((ω̄-z̄)(ωz̄-1)) g(ω) dA(ω) = ∂u/∂z̄`.
pub fn conj_cauchy(g: &DiskFunction, z: DiskPoint, grid: &PolarGrid) -> Result<Complex64> {
    z.require_interior("conj_cauchy")?;
    match route(g, z, 1.0, "conj_cauchy")? {
        Route::Mobius(order) => integrate_disk_singular(
            |s| cauchy_kernel(&s, z.z()).conj() * g.eval(s.omega),
            z,
            order,
            grid,
            &SingularConfig::default(),
        ),
        Route::Spectral(_) => Ok(cauchy(&g.conj(), z, grid)?.conj()),
    }
}

/// Both Wirtinger derivatives of the zero-boundary solution.
pub fn gradient(g: &DiskFunction, z: DiskPoint, grid: &PolarGrid) -> Result<GradientValue> {
    Ok(GradientValue {
        dz: cauchy(g, z, grid)?,
        dzbar: conj_cauchy(g, z, grid)?,
    })
}

/// `∇u(z) h` for `h = e^{iφ}`, i.e. `∂u·h + ∂̄u·h̄`; real whenever `g` is.
pub fn directional_derivative(
    g: &DiskFunction,
    z: DiskPoint,
    phi: f64,
    grid: &PolarGrid,
) -> Result<Complex64> {
    Ok(gradient(g, z, grid)?.apply(Complex64::from_polar(1.0, phi)))
}

/// `|∂u(z)| + |∂̄u(z)|`, the norm of the differential of `u` at `z`.
pub fn grad_norm(g: &DiskFunction, z: DiskPoint, grid: &PolarGrid) -> Result<f64> {
    Ok(gradient(g, z, grid)?.norm())
}

/// Zero-boundary solution `u(z) = (2/π)∫ log(|z-ω|/|1-z̄ω|) g(ω) dA(ω)`.
///
/// Returns 0 for `z` on the unit circle.
pub fn solve_poisson(g: &DiskFunction, z: DiskPoint, grid: &PolarGrid) -> Result<Complex64> {
    if !z.is_interior() {
        return Ok(Complex64::new(0.0, 0.0));
    }
    match route(g, z, 1.0, "solve_poisson")? {
        // |(z - ω)/(1 - z̄ω)| is exactly |a| in the pulled-back variable
        Route::Mobius(order) => integrate_disk_singular(
            |s| 2.0 * s.pullback.norm().ln() * g.eval(s.omega),
            z,
            order,
            grid,
            &SingularConfig::default(),
        ),
        Route::Spectral(max_d) => {
            let e = ModalExpansion::new(g, z.modulus(), grid, capped(max_d, grid))?;
            Ok(e.poisson(z.z().arg()))
        }
    }
}

/// Newtonian potential `N[g](z) = (2/π)∫ log|z-ω| g(ω) dA(ω)`.
pub fn newtonian_potential(g: &DiskFunction, z: DiskPoint, grid: &PolarGrid) -> Result<Complex64> {
    z.require_interior("newtonian_potential")?;
    let order = match route(g, z, 1.0, "newtonian_potential")? {
        Route::Mobius(order) => order,
        Route::Spectral(_) => 1.0,
    };
    integrate_disk_singular(
        |s| 2.0 * s.offset.norm().ln() * g.eval(s.omega),
        z,
        order,
        grid,
        &SingularConfig::default(),
    )
}

/// Plain Cauchy transform `𝔉[g](z) = (1/π)∫ g(w)/(w - z) dA(w)`.
pub fn plain_cauchy(g: &DiskFunction, z: DiskPoint, grid: &PolarGrid) -> Result<Complex64> {
    z.require_interior("plain_cauchy")?;
    let order = match route(g, z, 1.0, "plain_cauchy")? {
        Route::Mobius(order) => order,
        Route::Spectral(_) => 1.0,
    };
    integrate_disk_singular(
        |s| g.eval(s.omega) / s.offset,
        z,
        order,
        grid,
        &SingularConfig::default(),
    )
}

/// `𝔍₀*[g](z) = (1/π)∫ ω̄/(1 - zω̄) g(ω) dA(ω)`.
pub fn j0star(g: &DiskFunction, z: DiskPoint, grid: &PolarGrid) -> Result<Complex64> {
    z.require_interior("j0star")?;
    let zc = z.z();
    let kernel = |w: Complex64| w.conj() / (1.0 - zc * w.conj()) * g.eval(w);
    match g.smoothness() {
        Smoothness::Singular { point, order } if point.norm() < 1.0 => {
            let center = DiskPoint::from_complex(point)?;
            integrate_disk_singular(
                |s| kernel(s.omega),
                center,
                order.max(0.0),
                grid,
                &SingularConfig::default(),
            )
        }
        _ => integrate_disk(kernel, grid),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{random_disk_point, random_polynomial};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn small() -> PolarGrid {
        PolarGrid::new(48, 256).unwrap()
    }

    #[test]
    fn cauchy_examples() {
        let grid = PolarGrid::default();
        let one = DiskFunction::constant(c(1.0, 0.0));
        let z = DiskPoint::new(0.3, 0.4).unwrap();
        assert!((cauchy(&one, z, &grid).unwrap() - c(0.3, -0.4)).norm() < 1e-12);
        let half = DiskPoint::new(0.5, 0.0).unwrap();
        let v = cauchy(&DiskFunction::monomial(1, 0), half, &grid).unwrap();
        assert!((v - c(-0.25, 0.0)).norm() < 1e-12);
        let v = cauchy(&DiskFunction::monomial(0, 1), half, &grid).unwrap();
        assert!((v - c(0.125, 0.0)).norm() < 1e-12);
        let edge = DiskPoint::new(0.6, 0.8).unwrap();
        assert!(cauchy(&one, edge, &grid).is_err());
    }

    #[test]
    fn conj_cauchy_examples() {
        let grid = small();
        let one = DiskFunction::constant(c(1.0, 0.0));
        let z = DiskPoint::new(0.3, 0.4).unwrap();
        assert!((conj_cauchy(&one, z, &grid).unwrap() - z.z()).norm() < 1e-12);
        let g = DiskFunction::monomial(1, 0);
        let half = DiskPoint::new(0.5, 0.0).unwrap();
        let lhs = conj_cauchy(&g, half, &grid).unwrap();
        let rhs = cauchy(&g.conj(), half, &grid).unwrap().conj();
        assert!((lhs - rhs).norm() < 1e-13);
    }

    #[test]
    fn gradient_examples() {
        let grid = small();
        let one = DiskFunction::constant(c(1.0, 0.0));
        let half = DiskPoint::new(0.5, 0.0).unwrap();
        assert!((directional_derivative(&one, half, 0.0, &grid).unwrap() - 1.0).norm() < 1e-12);
        assert!((grad_norm(&one, half, &grid).unwrap() - 1.0).abs() < 1e-12);
        // u = |z|^2 - 1 at z = i/2 has gradient (0, 1)
        let up = DiskPoint::new(0.0, 0.5).unwrap();
        let dv = directional_derivative(&one, up, std::f64::consts::FRAC_PI_2, &grid).unwrap();
        assert!((dv - 1.0).norm() < 1e-12);
        assert_eq!(grad_norm(&DiskFunction::zero(), half, &grid).unwrap(), 0.0);
    }

    #[test]
    fn jacobian_norm_is_top_singular_value() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..200 {
            let v = GradientValue {
                dz: random_disk_point(&mut rng, 3.0),
                dzbar: random_disk_point(&mut rng, 3.0),
            };
            let [[a, b], [cc, d]] = v.jacobian();
            let fro = a * a + b * b + cc * cc + d * d;
            let det = a * d - b * cc;
            let top = ((fro + ((fro * fro - 4.0 * det * det).max(0.0)).sqrt()) / 2.0).sqrt();
            assert!((top - v.norm()).abs() < 1e-12 * (1.0 + top));
        }
    }

    #[test]
    fn poisson_examples() {
        let grid = small();
        let one = DiskFunction::constant(c(1.0, 0.0));
        let half = DiskPoint::new(0.5, 0.0).unwrap();
        assert!((solve_poisson(&one, half, &grid).unwrap() + 0.75).norm() < 1e-12);
        assert_eq!(
            solve_poisson(&DiskFunction::zero(), half, &grid).unwrap(),
            c(0.0, 0.0)
        );
        let edge = DiskPoint::new(0.6, 0.8).unwrap();
        assert_eq!(solve_poisson(&one, edge, &grid).unwrap(), c(0.0, 0.0));
        let g = DiskFunction::singular(|w| -w / w.norm(), c(0.0, 0.0), 0.0);
        let v = solve_poisson(&g, half, &grid).unwrap();
        assert!((v - c(1.0 / 3.0, 0.0)).norm() < 1e-12);
        assert!(
            solve_poisson(&g, DiskPoint::origin(), &grid)
                .unwrap()
                .norm()
                < 1e-12
        );
    }

    #[test]
    fn newtonian_examples() {
        let grid = small();
        let one = DiskFunction::constant(c(1.0, 0.0));
        let v = newtonian_potential(&one, DiskPoint::origin(), &grid).unwrap();
        assert!((v + 1.0).norm() < 1e-12);
        // u - N is harmonic: mean over a small circle equals the centre value
        let g = DiskFunction::monomial(2, 1);
        let z0 = c(0.2, -0.1);
        let diff = |z: Complex64| {
            let p = DiskPoint::from_complex(z).unwrap();
            solve_poisson(&g, p, &grid).unwrap() - newtonian_potential(&g, p, &grid).unwrap()
        };
        let n = 16;
        let mean = (0..n)
            .map(|j| {
                diff(z0 + Complex64::from_polar(0.05, std::f64::consts::TAU * j as f64 / n as f64))
            })
            .sum::<Complex64>()
            / n as f64;
        assert!((mean - diff(z0)).norm() < 1e-6);
    }

    #[test]
    fn plain_cauchy_and_j0star() {
        let grid = small();
        let one = DiskFunction::constant(c(1.0, 0.0));
        assert!(
            plain_cauchy(&one, DiskPoint::origin(), &grid)
                .unwrap()
                .norm()
                < 1e-13
        );
        let half = DiskPoint::new(0.5, 0.0).unwrap();
        assert!((plain_cauchy(&one, half, &grid).unwrap() + 0.5).norm() < 1e-12);
        assert!(j0star(&one, half, &grid).unwrap().norm() < 1e-13);
        assert!(j0star(&DiskFunction::zero(), half, &grid).unwrap().norm() == 0.0);
        let w = DiskFunction::monomial(1, 0);
        assert!((j0star(&w, half, &grid).unwrap() - 0.5).norm() < 1e-12);
        assert!((plain_cauchy(&w, half, &grid).unwrap() - 0.75).norm() < 1e-12);
    }

    #[test]
    fn connection_identity_sign() {
        let grid = small();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..5 {
            let g = random_polynomial(&mut rng, 6, 4);
            let z = DiskPoint::from_complex(random_disk_point(&mut rng, 0.9)).unwrap();
            let lhs = cauchy(&g, z, &grid).unwrap();
            let rhs = j0star(&g, z, &grid).unwrap() - plain_cauchy(&g, z, &grid).unwrap();
            assert!((lhs - rhs).norm() < 1e-9);
        }
    }

    #[test]
    fn wirtinger_and_laplacian_consistency() {
        let grid = small();
        let g = DiskFunction::polynomial(vec![
            crate::field::Monomial::new(c(1.0, 0.5), 2, 1),
            crate::field::Monomial::new(c(-0.3, 0.0), 0, 0),
        ]);
        let z = c(0.3, 0.2);
        let u =
            |w: Complex64| solve_poisson(&g, DiskPoint::from_complex(w).unwrap(), &grid).unwrap();
        let h = 1e-4;
        let ux = (u(z + h) - u(z - h)) / (2.0 * h);
        let uy = (u(z + c(0.0, h)) - u(z - c(0.0, h))) / (2.0 * h);
        let dz = (ux - Complex64::i() * uy) / 2.0;
        let dzbar = (ux + Complex64::i() * uy) / 2.0;
        let p = DiskPoint::from_complex(z).unwrap();
        assert!((dz - cauchy(&g, p, &grid).unwrap()).norm() < 1e-5);
        assert!((dzbar - conj_cauchy(&g, p, &grid).unwrap()).norm() < 1e-5);
        let h = 1e-3;
        let lap = (u(z + h) + u(z - h) + u(z + c(0.0, h)) + u(z - c(0.0, h)) - 4.0 * u(z))
            / (h * h)
            / 4.0;
        assert!((lap - g.eval(z)).norm() < 1e-3);
    }

    #[test]
    fn boundary_vanishing() {
        let grid = PolarGrid::new(64, 512).unwrap();
        let g = DiskFunction::monomial(1, 1).plus(&DiskFunction::constant(c(0.5, 0.0)));
        let values: Vec<f64> = [0.9, 0.99, 0.999]
            .iter()
            .map(|&r| {
                solve_poisson(&g, DiskPoint::polar(r, 0.4).unwrap(), &grid)
                    .unwrap()
                    .norm()
            })
            .collect();
        assert!(values[0] > values[1] && values[1] > values[2]);
        assert!(values[2] < 1e-2);
    }
}
