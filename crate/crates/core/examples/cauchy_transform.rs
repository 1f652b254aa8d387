//! The Cauchy transform `C_U g = ∂u` of the zero-boundary solution `u` of
//! `∂∂̄u = g`, computed by quadrature and compared with closed forms.

use cauchy_dirichlet::expr::Expr;
use cauchy_dirichlet::geometry::DiskPoint;
use cauchy_dirichlet::harmonics::cauchy_polynomial;
use cauchy_dirichlet::operators::{cauchy, gradient, j0star, plain_cauchy};
use cauchy_dirichlet::quadrature::PolarGrid;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let grid = PolarGrid::new(200, 512)?;
    let g = Expr::parse("3 z^2 zbar - (1 - 2i) zbar^2 + 1")?.to_disk_function();

    println!("{:>16}  {:>40}  {:>9}", "z", "C_U g (quadrature)", "error");
    for (x, y) in [
        (0.0, 0.0),
        (0.3, -0.2),
        (-0.6, 0.5),
        (0.95, 0.0),
        (0.0, -0.99),
    ] {
        let z = DiskPoint::new(x, y)?;
        let quad = cauchy(&g, z, &grid)?;
        let exact = cauchy_polynomial(&g, z.z()).expect("polynomial");
        println!(
            "{:>16}  {:>40}  {:9.2e}",
            format!("{x}{y:+}i"),
            format!("{quad:.12}"),
            (quad - exact).norm()
        );
    }

    // C_U = J0* - plain Cauchy transform
    let z = DiskPoint::new(0.4, 0.1)?;
    let split = j0star(&g, z, &grid)? - plain_cauchy(&g, z, &grid)?;
    println!("J0* - C at {}: {:.12}", z.z(), split);

    // a field with a jump at the origin
    let s = Expr::parse("z / |z|")?.to_disk_function();
    let grad = gradient(&s, z, &grid)?;
    println!(
        "z/|z|: du = {:.10}, dbar u = {:.10}, |grad u| = {:.10}",
        grad.dz,
        grad.dzbar,
        grad.norm()
    );
    Ok(())
}
