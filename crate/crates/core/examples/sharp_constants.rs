//! Pointwise and norm constants for `∂u` and `∇u` as functions of `p`.

use cauchy_dirichlet::constants::{
    big_c_p, bound_set, c_p, i_p_closed, i_p_quad, unit_norm_crossings, Exponent, ExponentPair,
};
use cauchy_dirichlet::geometry::DiskPoint;
use cauchy_dirichlet::quadrature::PolarGrid;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    println!(
        "{:>6} {:>6} {:>12} {:>12} {:>12} {:>12}  method",
        "p", "q", "c_p", "C_p", "|C_U|_p <=", "|grad|_p <="
    );
    for s in ["1", "1.25", "1.5", "1.9", "2", "3", "8", "inf"] {
        let p: Exponent = s.parse()?;
        let pair = ExponentPair::new(p);
        let (small, big) = if pair.c_p_valid() {
            (
                format!("{:.8}", c_p(p.as_f64())?),
                format!("{:.8}", big_c_p(p.as_f64())?),
            )
        } else {
            ("-".into(), "-".into())
        };
        let b = bound_set(p);
        println!(
            "{:>6} {:>6} {small:>12} {big:>12} {:>12.8} {:>12.8}  {:?}",
            p.to_string(),
            format!("{:.4}", pair.q.as_f64()),
            b.cauchy_bound,
            b.grad_bound,
            b.method
        );
    }

    let (lo, hi) = unit_norm_crossings()?;
    println!("bound on |C_U|_p equals 1 at p = {lo:.6} and p = {hi:.6}");

    // I_p at |z| = 0.5: hypergeometric closed form against singular quadrature
    let grid = PolarGrid::new(200, 512)?;
    let z = DiskPoint::polar(0.5, 1.0)?;
    for p in [1.0, 1.5, 1.9] {
        println!(
            "I_{p}(0.5): closed {:.12}  quadrature {:.12}",
            i_p_closed(p, 0.5)?,
            i_p_quad(p, z, &grid)?
        );
    }
    Ok(())
}
