//! Right-hand sides `g` of the Poisson problem.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rand::Rng;

type Evaluator = Arc<dyn Fn(Complex64) -> Complex64 + Send + Sync>;

/// Regularity of a right-hand side.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Smoothness {
    Smooth,
    /// `|g(ω)| = O(|ω - point|^{-order})` near `point`; `order = 0` marks a
    /// bounded function that is not smooth there.
    Singular {
        point: Complex64,
        order: f64,
    },
}

/// The term `coeff · z^m z̄^n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Monomial {
    pub coeff: Complex64,
    pub m: u32,
    pub n: u32,
}

impl Monomial {
    pub fn new(coeff: Complex64, m: u32, n: u32) -> Self {
        Self { coeff, m, n }
    }

    pub fn eval(&self, w: Complex64) -> Complex64 {
        self.coeff * w.powu(self.m) * w.conj().powu(self.n)
    }

    /// Angular degree `m - n`.
    pub fn degree(&self) -> i64 {
        self.m as i64 - self.n as i64
    }
}

/// A function on the unit disk with its regularity tag and, for
/// polynomials, the exact list of monomials.
#[derive(Clone)]
pub struct DiskFunction {
    eval: Evaluator,
    smoothness: Smoothness,
    monomials: Option<Vec<Monomial>>,
    label: String,
}

impl fmt::Debug for DiskFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DiskFunction")
            .field("label", &self.label)
            .field("smoothness", &self.smoothness)
            .field("monomials", &self.monomials)
            .finish()
    }
}

impl DiskFunction {
    pub fn new<F>(f: F) -> Self
    where
        F: Fn(Complex64) -> Complex64 + Send + Sync + 'static,
    {
        Self {
            eval: Arc::new(f),
            smoothness: Smoothness::Smooth,
            monomials: None,
            label: "g".into(),
        }
    }

    /// Real-valued evaluator.
    pub fn real<F>(f: F) -> Self
    where
        F: Fn(Complex64) -> f64 + Send + Sync + 'static,
    {
        Self::new(move |w| Complex64::new(f(w), 0.0))
    }

    pub fn singular<F>(f: F, point: Complex64, order: f64) -> Self
    where
        F: Fn(Complex64) -> Complex64 + Send + Sync + 'static,
    {
        Self::new(f).with_smoothness(Smoothness::Singular { point, order })
    }

    pub fn zero() -> Self {
        Self::polynomial(Vec::new()).with_label("0")
    }

    pub fn constant(c: Complex64) -> Self {
        Self::polynomial(vec![Monomial::new(c, 0, 0)])
    }

    /// `z^m z̄^n`.
    pub fn monomial(m: u32, n: u32) -> Self {
        Self::polynomial(vec![Monomial::new(Complex64::new(1.0, 0.0), m, n)])
            .with_label(format!("z^{m} zbar^{n}"))
    }

    pub fn polynomial(terms: Vec<Monomial>) -> Self {
        let shared = terms.clone();
        let mut f = Self::new(move |w| {
            shared
                .iter()
                .fold(Complex64::new(0.0, 0.0), |acc, t| acc + t.eval(w))
        });
        f.monomials = Some(terms);
        f.label = "polynomial".into();
        f
    }

    pub fn with_smoothness(mut self, smoothness: Smoothness) -> Self {
        self.smoothness = smoothness;
        self
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn smoothness(&self) -> Smoothness {
        self.smoothness
    }

    pub fn monomials(&self) -> Option<&[Monomial]> {
        self.monomials.as_deref()
    }

    #[inline]
    pub fn eval(&self, w: Complex64) -> Complex64 {
        (self.eval)(w)
    }

    /// `ḡ`.
    pub fn conj(&self) -> Self {
        let inner = self.eval.clone();
        let mut out = Self::new(move |w| inner(w).conj());
        out.smoothness = self.smoothness;
        out.monomials = self.monomials.as_ref().map(|ts| {
            ts.iter()
                .map(|t| Monomial::new(t.coeff.conj(), t.n, t.m))
                .collect()
        });
        out.label = format!("conj({})", self.label);
        out
    }

    /// `c · g`.
    pub fn scaled(&self, c: Complex64) -> Self {
        let inner = self.eval.clone();
        let mut out = Self::new(move |w| c * inner(w));
        out.smoothness = self.smoothness;
        out.monomials = self.monomials.as_ref().map(|ts| {
            ts.iter()
                .map(|t| Monomial::new(c * t.coeff, t.m, t.n))
                .collect()
        });
        out.label = format!("{c}*{}", self.label);
        out
    }

    /// `g + h`; the sum keeps a singular tag if either summand has one.
    pub fn plus(&self, other: &Self) -> Self {
        let a = self.eval.clone();
        let b = other.eval.clone();
        let mut out = Self::new(move |w| a(w) + b(w));
        out.smoothness = match (self.smoothness, other.smoothness) {
            (Smoothness::Smooth, s) | (s, Smoothness::Smooth) => s,
            (
                Smoothness::Singular { point, order: p1 },
                Smoothness::Singular {
                    point: q,
                    order: p2,
                },
            ) if point == q => Smoothness::Singular {
                point,
                order: p1.max(p2),
            },
            (s, _) => s,
        };
        out.monomials = match (&self.monomials, &other.monomials) {
            (Some(x), Some(y)) => Some(x.iter().chain(y).copied().collect()),
            _ => None,
        };
        out.label = format!("{} + {}", self.label, other.label);
        out
    }
}

/// Random polynomial of total degree at most `max_degree` with `terms`
/// monomials and coefficients uniform in the unit square.
pub fn random_polynomial<R: Rng>(rng: &mut R, max_degree: u32, terms: usize) -> DiskFunction {
    let mut out = Vec::with_capacity(terms);
    for _ in 0..terms {
        let total = rng.gen_range(0..=max_degree);
        let m = rng.gen_range(0..=total);
        let c = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        out.push(Monomial::new(c, m, total - m));
    }
    DiskFunction::polynomial(out)
}

/// Uniformly distributed point of the disk of radius `r_max`.
pub fn random_disk_point<R: Rng>(rng: &mut R, r_max: f64) -> Complex64 {
    let r = r_max * rng.gen_range(0.0..1.0_f64).sqrt();
    Complex64::from_polar(r, rng.gen_range(0.0..std::f64::consts::TAU))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn monomial_evaluation() {
        let w = Complex64::new(0.3, -0.2);
        let g = DiskFunction::monomial(2, 1);
        assert!((g.eval(w) - w * w * w.conj()).norm() < 1e-16);
        assert_eq!(g.monomials().unwrap()[0].degree(), 1);
        let h = g.conj();
        assert!((h.eval(w) - (w * w * w.conj()).conj()).norm() < 1e-16);
        assert_eq!(h.monomials().unwrap()[0].m, 1);
    }

    #[test]
    fn combinators() {
        let w = Complex64::new(-0.5, 0.1);
        let g = DiskFunction::monomial(1, 0).plus(&DiskFunction::monomial(0, 1));
        assert!((g.eval(w) - Complex64::new(2.0 * w.re, 0.0)).norm() < 1e-16);
        assert_eq!(g.monomials().unwrap().len(), 2);
        let s = g.scaled(Complex64::new(0.0, 2.0));
        assert!((s.eval(w) - Complex64::new(0.0, 4.0 * w.re)).norm() < 1e-15);
        assert!(DiskFunction::zero().eval(w) == Complex64::new(0.0, 0.0));
        let sing = DiskFunction::singular(|w| w / w.norm(), Complex64::new(0.0, 0.0), 0.0);
        assert!(sing.plus(&g).monomials().is_none());
        assert!(matches!(
            sing.plus(&g).smoothness(),
            Smoothness::Singular { .. }
        ));
    }

    #[test]
    fn random_polynomials_respect_degree() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let g = random_polynomial(&mut rng, 6, 4);
            for t in g.monomials().unwrap() {
                assert!(t.m + t.n <= 6);
            }
            assert!(random_disk_point(&mut rng, 0.9).norm() < 0.9);
        }
    }
}
