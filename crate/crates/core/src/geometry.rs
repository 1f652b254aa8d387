//! Points of the closed unit disk, disk automorphisms and the Green function.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{domain, Error, Result};

/// Points closer than this to the unit circle are classified as boundary.
pub const BOUNDARY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Location {
    Interior,
    Boundary,
}

/// A point `z` of the closed unit disk.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiskPoint {
    z: Complex64,
    location: Location,
}

impl DiskPoint {
    pub fn new(re: f64, im: f64) -> Result<Self> {
        Self::from_complex(Complex64::new(re, im))
    }

    pub fn from_complex(z: Complex64) -> Result<Self> {
        if !z.re.is_finite() || !z.im.is_finite() {
            return Err(domain("DiskPoint", "non-finite coordinate"));
        }
        let m2 = z.norm_sqr();
        let location = if (m2 - 1.0).abs() <= BOUNDARY_TOL {
            Location::Boundary
        } else if m2 < 1.0 {
            Location::Interior
        } else {
            return Err(domain("DiskPoint", format!("|z|^2 = {m2} exceeds 1")));
        };
        Ok(Self { z, location })
    }

    /// `r e^{it}`.
    pub fn polar(r: f64, t: f64) -> Result<Self> {
        Self::from_complex(Complex64::from_polar(r, t))
    }

    pub fn origin() -> Self {
        Self {
            z: Complex64::new(0.0, 0.0),
            location: Location::Interior,
        }
    }

    pub fn z(&self) -> Complex64 {
        self.z
    }

    pub fn re(&self) -> f64 {
        self.z.re
    }

    pub fn im(&self) -> f64 {
        self.z.im
    }

    pub fn modulus(&self) -> f64 {
        self.z.norm()
    }

    pub fn location(&self) -> Location {
        self.location
    }

    pub fn is_interior(&self) -> bool {
        self.location == Location::Interior
    }

    pub(crate) fn require_interior(&self, func: &'static str) -> Result<()> {
        if self.is_interior() {
            Ok(())
        } else {
            Err(domain(
                func,
                format!("point {} is on the unit circle", self.z),
            ))
        }
    }
}

/// The automorphism `(w - z) / (1 - z̄ w)`, sending `z` to the origin.
///
/// Its inverse is `mobius(·, -z)`.
pub fn mobius(w: DiskPoint, z: DiskPoint) -> Result<DiskPoint> {
    z.require_interior("mobius")?;
    let image = mobius_raw(w.z, z.z);
    // keep boundary points on the circle despite rounding
    if w.location == Location::Boundary {
        return DiskPoint::from_complex(image / image.norm());
    }
    DiskPoint::from_complex(image)
}

#[inline]
pub(crate) fn mobius_raw(w: Complex64, z: Complex64) -> Complex64 {
    (w - z) / (1.0 - z.conj() * w)
}

/// The involution `(z - a) / (1 - z̄ a)` used as change of variables in all
/// singular integrals; it exchanges `0` and `z`.
#[inline]
pub(crate) fn involution(a: Complex64, z: Complex64) -> Complex64 {
    (z - a) / (1.0 - z.conj() * a)
}

/// Area distortion `(1 - |z|²)² / |1 - z̄ a|⁴` of the involution at `a`.
pub fn mobius_area_factor(z: DiskPoint, a: DiskPoint) -> Result<f64> {
    z.require_interior("mobius_area_factor")?;
    Ok(area_factor_raw(z.z, a.z))
}

#[inline]
pub(crate) fn area_factor_raw(z: Complex64, a: Complex64) -> f64 {
    let s = 1.0 - z.norm_sqr();
    let d = (1.0 - z.conj() * a).norm_sqr();
    s * s / (d * d)
}

/// Green function `G(z, w) = (2/π) log |(z - w)/(1 - z̄ w)|` of the unit disk.
pub fn green(z: DiskPoint, w: DiskPoint) -> Result<f64> {
    z.require_interior("green")?;
    w.require_interior("green")?;
    if z.z == w.z {
        return Err(Error::Singular {
            func: "green",
            detail: format!("z = w = {}", z.z),
        });
    }
    Ok(2.0 / PI * ((z.z - w.z).norm() / (1.0 - z.z.conj() * w.z).norm()).ln())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_point(rng: &mut ChaCha8Rng) -> DiskPoint {
        let r = rng.gen_range(0.0..0.999_f64).sqrt();
        DiskPoint::polar(r, rng.gen_range(0.0..2.0 * PI)).unwrap()
    }

    #[test]
    fn classification() {
        assert_eq!(
            DiskPoint::new(0.3, 0.4).unwrap().location(),
            Location::Interior
        );
        assert_eq!(
            DiskPoint::new(0.6, 0.8).unwrap().location(),
            Location::Boundary
        );
        assert!(DiskPoint::new(1.0, 0.1).is_err());
        assert!(DiskPoint::new(f64::NAN, 0.0).is_err());
    }

    #[test]
    fn mobius_examples() {
        let half = DiskPoint::new(0.5, 0.0).unwrap();
        assert!(mobius(half, half).unwrap().z().norm() < 1e-16);
        let m = mobius(DiskPoint::origin(), DiskPoint::new(0.3, 0.0).unwrap()).unwrap();
        assert!((m.z() - Complex64::new(-0.3, 0.0)).norm() < 1e-16);
        let boundary = DiskPoint::new(0.6, 0.8).unwrap();
        assert!(mobius(half, boundary).is_err());
    }

    #[test]
    fn mobius_inverse_and_modulus() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..500 {
            let w = random_point(&mut rng);
            let z = random_point(&mut rng);
            let image = mobius(w, z).unwrap();
            assert!(image.modulus() < 1.0);
            let neg = DiskPoint::from_complex(-z.z()).unwrap();
            let back = mobius(image, neg).unwrap();
            assert!((back.z() - w.z()).norm() < 1e-9);
            // the involution used for substitutions is its own inverse
            let a = involution(w.z(), z.z());
            assert!((involution(a, z.z()) - w.z()).norm() < 1e-9);

            let t: f64 = rng.gen_range(0.0..2.0 * PI);
            let on_circle = DiskPoint::polar(1.0, t).unwrap();
            let img = mobius(on_circle, z).unwrap();
            assert!((img.modulus() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn area_factor_examples() {
        let a = DiskPoint::new(0.2, -0.7).unwrap();
        assert_eq!(mobius_area_factor(DiskPoint::origin(), a).unwrap(), 1.0);
        let z = DiskPoint::new(0.5, 0.0).unwrap();
        assert!((mobius_area_factor(z, DiskPoint::origin()).unwrap() - 0.5625).abs() < 1e-15);
    }

    #[test]
    fn green_examples() {
        let g = green(DiskPoint::origin(), DiskPoint::new(0.5, 0.0).unwrap()).unwrap();
        assert!((g - 2.0 / PI * 0.5_f64.ln()).abs() < 1e-15);
        assert!((g + 0.441_271).abs() < 1e-6);
        let a = DiskPoint::new(0.3, 0.0).unwrap();
        let b = DiskPoint::new(0.7, 0.0).unwrap();
        assert_eq!(green(a, b).unwrap(), green(b, a).unwrap());
        assert!(green(a, a).is_err());
        let near = DiskPoint::new(1.0 - 1e-9, 0.0).unwrap();
        assert!(
            green(DiskPoint::new(0.5, 0.0).unwrap(), near)
                .unwrap()
                .abs()
                < 1e-8
        );
    }

    #[test]
    fn green_symmetric_and_negative() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..500 {
            let z = random_point(&mut rng);
            let w = random_point(&mut rng);
            let g = green(z, w).unwrap();
            assert_eq!(g, green(w, z).unwrap());
            assert!(g < 0.0);
        }
    }
}
