//! Functions that attain, or approach, the sharp constants, and a
//! right-hand side in `L²` whose gradient is unbounded.

use cauchy_dirichlet::quadrature::PolarGrid;
use cauchy_dirichlet::witness::{
    bessel_extremal, dirac_sequence, extremal_gradient, extremal_pointwise, remark_solution_check,
    unbounded_example, unbounded_l2_norm, unbounded_truncated_lp, WitnessReport,
};

fn show(w: &WitnessReport) {
    println!(
        "{:<28} claimed {:>12.8}  achieved {:>12.8}  gap {:9.2e}",
        w.name, w.claimed_constant, w.achieved_ratio, w.relative_gap
    );
    for (k, v) in &w.details {
        println!("    {k:<30} {v:.10}");
    }
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let grid = PolarGrid::new(200, 512)?;
    for p in [1.0, 1.5] {
        show(&extremal_pointwise(p, &grid)?);
        show(&extremal_gradient(p, &grid)?);
    }
    for n in [2, 10, 100] {
        show(&dirac_sequence(n, &grid)?);
    }
    show(&bessel_extremal(&grid)?);
    show(&remark_solution_check(&grid)?);

    println!("unbounded example: |g|_2 = {:.10}", unbounded_l2_norm(400));
    for eps in [1e-4, 1e-8, 1e-12] {
        println!(
            "    L^2.5 mass outside |z| < {eps:e}: {:.4}",
            unbounded_truncated_lp(2.5, eps, 400)
        );
    }
    for (r, v) in unbounded_example(&[0.1, 1e-3, 1e-6], &grid)? {
        println!("    |du({r:e})| = {v:.6}");
    }
    Ok(())
}
