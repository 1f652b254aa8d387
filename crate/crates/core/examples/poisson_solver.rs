//! Zero-boundary solutions of `∂∂̄u = g`, checked against their defining
//! equation by finite differences.

use cauchy_dirichlet::expr::Expr;
use cauchy_dirichlet::geometry::DiskPoint;
use cauchy_dirichlet::operators::{cauchy, solve_poisson};
use cauchy_dirichlet::quadrature::PolarGrid;
use cauchy_dirichlet::witness::remark_solution;
use num_complex::Complex64;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let grid = PolarGrid::new(200, 512)?;
    let g = Expr::parse("|z|^2 + z")?.to_disk_function();
    let u = |z: Complex64| solve_poisson(&g, DiskPoint::from_complex(z).unwrap(), &grid).unwrap();

    let z0 = Complex64::new(0.3, 0.2);
    let h = 1e-3;
    let (e, i) = (Complex64::new(h, 0.0), Complex64::new(0.0, h));
    let lap = (u(z0 + e) + u(z0 - e) + u(z0 + i) + u(z0 - i) - 4.0 * u(z0)) / (4.0 * h * h);
    println!(
        "dd̄u(z0) by differences = {lap:.8}   g(z0) = {:.8}",
        g.eval(z0)
    );

    let dx = (u(z0 + e) - u(z0 - e)) / (2.0 * h);
    let dy = (u(z0 + i) - u(z0 - i)) / (2.0 * h);
    let du = 0.5 * (dx - Complex64::i() * dy);
    println!(
        "du(z0) by differences   = {du:.8}   C_U g(z0) = {:.8}",
        cauchy(&g, DiskPoint::from_complex(z0)?, &grid)?
    );

    for r in [0.9, 0.99, 0.999] {
        println!("|u({r})| = {:.3e}", u(Complex64::new(r, 0.0)).norm());
    }

    // g = -z/|z| is solved by (4/3) z (1 - |z|)
    let s = Expr::parse("-z/|z|")?.to_disk_function();
    let z = DiskPoint::new(0.5, 0.0)?;
    println!(
        "u(0.5) for -z/|z| = {:.10}   closed form = {:.10}",
        solve_poisson(&s, z, &grid)?,
        remark_solution(z.z())
    );
    Ok(())
}
