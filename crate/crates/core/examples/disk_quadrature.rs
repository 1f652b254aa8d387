//! Smooth and singular integration over the unit disk with `dμ = dA/π`.

use cauchy_dirichlet::geometry::DiskPoint;
use cauchy_dirichlet::quadrature::{
    integrate_disk, integrate_disk_singular, integrate_radial, integrate_radial_clustered,
    PolarGrid, SingularConfig,
};
use cauchy_dirichlet::specfun::beta;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let grid = PolarGrid::new(64, 128)?;

    // ∫ |z|^4 dμ = 1/3
    let m: f64 = integrate_disk(|z| z.norm_sqr().powi(2), &grid)?;
    println!("∫|z|^4 dμ            = {m:.15}  (exact 1/3)");

    // ∫ |ω - z|^{-1} dμ(ω) has an integrable singularity at z.
    let z = DiskPoint::new(0.4, -0.3)?;
    for n in [16, 32, 64] {
        let g = PolarGrid::new(n, 2 * n)?;
        let v: f64 = integrate_disk_singular(
            |s| 1.0 / s.offset.norm(),
            z,
            1.0,
            &g,
            &SingularConfig::default(),
        )?;
        println!("∫|ω-z|^-1 dμ, n = {n:>2}  = {v:.15}");
    }

    // 2∫ r^{1-p}(1-r²)^p dr = B(1+p, 1-p/2)
    let p = 1.5;
    // plain Gauss-Legendre stalls on the r^{-1/2} endpoint; the clustered map does not
    let f = |r: f64| r.powf(1.0 - p) * (1.0 - r * r).powf(p);
    println!(
        "radial Beta, plain   = {:.12}",
        2.0 * integrate_radial(f, 400)
    );
    println!(
        "radial Beta, cluster = {:.12}",
        2.0 * integrate_radial_clustered(f, 400, p)?
    );
    println!(
        "B(1+p, 1-p/2)        = {:.12}",
        beta(1.0 + p, 1.0 - p / 2.0)?
    );

    let fine = grid.refined();
    println!(
        "refined grid         = {}x{}",
        fine.n_radial(),
        fine.n_theta()
    );
    Ok(())
}
