//! The `L²` norm of the Cauchy transform, one angular degree at a time.

use cauchy_dirichlet::expr::Expr;
use cauchy_dirichlet::geometry::DiskPoint;
use cauchy_dirichlet::harmonics::{
    apply_harmonic, decompose, degree_rayleigh_ratio, estimate_degree_norm, per_degree_norm,
};
use cauchy_dirichlet::operators::cauchy;
use cauchy_dirichlet::quadrature::PolarGrid;
use cauchy_dirichlet::specfun::{alpha0, bessel_j};
use num_complex::Complex64;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    println!(
        "{:>3} {:>14} {:>14} {:>10}",
        "d", "Galerkin", "2/alpha_|d|", "gap"
    );
    for d in -3..=3 {
        let e = estimate_degree_norm(d, 128)?;
        println!(
            "{d:>3} {:>14.10} {:>14.10} {:>10.2e}",
            e.estimate,
            e.exact,
            e.exact - e.estimate
        );
    }

    // the radial profile J0(alpha r) attains the degree-0 norm
    let a = alpha0();
    let ratio = degree_rayleigh_ratio(0, |r| bessel_j(0, a * r), 200);
    println!(
        "Rayleigh ratio of J0(alpha |z|) = {ratio:.12}  (2/alpha = {:.12})",
        per_degree_norm(0)?
    );

    // splitting g into degrees and transforming each piece reproduces C_U g
    let grid = PolarGrid::new(200, 512)?;
    let g = Expr::parse("z^2 zbar + 2 zbar^3 - i |z|^2")?.to_disk_function();
    let z = DiskPoint::new(0.35, -0.5)?;
    let mut sum = Complex64::new(0.0, 0.0);
    for prof in decompose(&g, 6, &grid)? {
        let part = apply_harmonic(&prof, z)?;
        println!("degree {:>2}: {part:.12}", prof.degree());
        sum += part;
    }
    println!("sum      : {sum:.12}");
    println!("direct   : {:.12}", cauchy(&g, z, &grid)?);
    Ok(())
}
