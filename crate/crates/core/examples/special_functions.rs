//! Gamma, Beta, Gauss hypergeometric and Bessel functions.

use cauchy_dirichlet::specfun::{alpha0, bessel_first_zero, bessel_j, beta, gamma, hyp2f1};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    println!(
        "Gamma(1/2)^2     = {:.15}  (pi = {:.15})",
        gamma(0.5)?.powi(2),
        std::f64::consts::PI
    );
    println!("B(2.5, 0.25)     = {:.15}", beta(2.5, 0.25)?);

    // Gauss summation: 2F1(a,b;c;1) = G(c)G(c-a-b) / (G(c-a)G(c-b))
    let (a, b, c) = (0.3, 0.7, 2.2);
    let gauss = gamma(c)? * gamma(c - a - b)? / (gamma(c - a)? * gamma(c - b)?);
    println!(
        "2F1(a,b;c;1)     = {:.15}  (Gauss: {gauss:.15})",
        hyp2f1(a, b, c, 1.0)?
    );

    println!(
        "alpha0           = {:.15}  J0(alpha0) = {:.1e}",
        alpha0(),
        bessel_j(0, alpha0())
    );
    for k in 0..5 {
        let z = bessel_first_zero(k)?;
        println!("first zero of J{k} = {z:.12}");
    }
    Ok(())
}
