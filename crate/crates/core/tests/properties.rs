use std::sync::OnceLock;

use cauchy_dirichlet::constants::{i_p_closed, j_closed};
use cauchy_dirichlet::expr::Expr;
use cauchy_dirichlet::field::{DiskFunction, Monomial};
use cauchy_dirichlet::geometry::{green, mobius, DiskPoint};
use cauchy_dirichlet::harmonics::{cauchy_polynomial, monomial_action};
use cauchy_dirichlet::operators::{cauchy, j0star, plain_cauchy, GradientValue};
use cauchy_dirichlet::quadrature::PolarGrid;
use cauchy_dirichlet::report::{Entry, Report};
use cauchy_dirichlet::specfun::{beta, gamma, hyp2f1};
use num_complex::Complex64;
use proptest::prelude::*;

fn grid() -> &'static PolarGrid {
    static G: OnceLock<PolarGrid> = OnceLock::new();
    G.get_or_init(|| PolarGrid::new(200, 512).unwrap())
}

fn point(r_max: f64) -> impl Strategy<Value = DiskPoint> {
    (0.0..r_max, 0.0..std::f64::consts::TAU).prop_map(|(r, t)| DiskPoint::polar(r, t).unwrap())
}

fn coeff() -> impl Strategy<Value = Complex64> {
    (-1.0..1.0f64, -1.0..1.0f64).prop_map(|(a, b)| Complex64::new(a, b))
}

fn polynomial() -> impl Strategy<Value = Vec<Monomial>> {
    prop::collection::vec((coeff(), 0u32..5, 0u32..5), 1..4).prop_map(|ts| {
        ts.into_iter()
            .map(|(c, m, n)| Monomial::new(c, m, n))
            .collect()
    })
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1e-300)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn gamma_recurrence(x in 0.1..20.0f64) {
        let lhs = gamma(x + 1.0).unwrap();
        prop_assert!(rel(x * gamma(x).unwrap(), lhs) <= 1e-11);
    }

    #[test]
    fn beta_symmetric(a in 0.05..10.0f64, b in 0.05..10.0f64) {
        prop_assert!(rel(beta(a, b).unwrap(), beta(b, a).unwrap()) <= 1e-12);
    }

    #[test]
    fn pfaff_transformation(a in -2.0..3.0f64, b in -2.0..3.0f64, c in 0.5..5.0f64, x in 0.0..0.9f64) {
        let lhs = hyp2f1(a, b, c, x).unwrap();
        let rhs = (1.0 - x).powf(c - a - b) * hyp2f1(c - a, c - b, c, x).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-9 * lhs.abs().max(1.0), "{lhs} vs {rhs}");
    }

    #[test]
    fn mobius_preserves_disk(w in point(1.0), z in point(1.0)) {
        prop_assert!(mobius(w, z).unwrap().modulus() < 1.0);
    }

    #[test]
    fn mobius_preserves_circle(t in 0.0..std::f64::consts::TAU, z in point(0.99)) {
        let w = DiskPoint::polar(1.0, t).unwrap();
        prop_assert!((mobius(w, z).unwrap().modulus() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn green_symmetric_negative(z in point(0.999), w in point(0.999)) {
        prop_assume!((z.z() - w.z()).norm() > 1e-9);
        let g = green(z, w).unwrap();
        prop_assert_eq!(g, green(w, z).unwrap());
        prop_assert!(g < 0.0);
    }

    #[test]
    fn i_p_nonincreasing(p in 1.0..1.95f64, a in 0.0..1.0f64, b in 0.0..1.0f64) {
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        prop_assert!(i_p_closed(p, hi).unwrap() <= i_p_closed(p, lo).unwrap() * (1.0 + 1e-12));
    }

    #[test]
    fn j_at_most_one(w in point(1.0)) {
        let j = j_closed(w);
        prop_assert!(j > 0.0 && j <= 1.0);
    }

    #[test]
    fn gradient_norm_is_operator_norm(dz in coeff(), dzbar in coeff()) {
        let g = GradientValue { dz, dzbar };
        let [[a, b], [c, d]] = g.jacobian();
        let s = a * a + b * b + c * c + d * d;
        let det = a * d - b * c;
        let top = ((s + (s * s - 4.0 * det * det).max(0.0).sqrt()) / 2.0).sqrt();
        prop_assert!((g.norm() - top).abs() <= 1e-12 * top.max(1.0));
    }

    #[test]
    fn closed_form_image_is_linear(terms in polynomial(), z in point(1.0)) {
        let g = DiskFunction::polynomial(terms.clone());
        let direct: Complex64 = terms
            .iter()
            .map(|t| t.coeff * monomial_action(t.m, t.n).eval(z.z()))
            .sum();
        let image = cauchy_polynomial(&g, z.z()).unwrap();
        prop_assert!((image - direct).norm() <= 1e-13);
    }

    #[test]
    fn expression_matches_polynomial(terms in polynomial(), z in point(1.0)) {
        let src: Vec<String> = terms
            .iter()
            .map(|t| format!("({:e} + {:e}i) * z^{} * zbar^{}", t.coeff.re, t.coeff.im, t.m, t.n))
            .collect();
        let e = Expr::parse(&src.join(" + ")).unwrap();
        let direct = DiskFunction::polynomial(terms).eval(z.z());
        prop_assert!((e.eval(z.z()) - direct).norm() <= 1e-12);
        let image = cauchy_polynomial(&e.to_disk_function(), z.z()).unwrap();
        let expected = cauchy_polynomial(&DiskFunction::polynomial(e.monomials().unwrap()), z.z()).unwrap();
        prop_assert!((image - expected).norm() <= 1e-12);
    }

    #[test]
    fn report_json_carries_every_entry(vals in prop::collection::vec((-1e6..1e6f64, -1e6..1e6f64), 1..8)) {
        let mut r = Report::new("prop", grid());
        for (i, &(a, b)) in vals.iter().enumerate() {
            r.push(Entry::check(format!("e{i}"), Complex64::new(a, b), Complex64::new(a, b), 1e-12));
        }
        let v: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        prop_assert_eq!(&v["schema"], 1);
        prop_assert_eq!(v["pass"].as_bool(), Some(true));
        for (i, &(a, b)) in vals.iter().enumerate() {
            prop_assert_eq!(v["results"][i]["computed"]["re"].as_f64(), Some(a));
            prop_assert_eq!(v["results"][i]["computed"]["im"].as_f64(), Some(b));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn quadrature_matches_closed_form(terms in polynomial(), z in point(0.95)) {
        let g = DiskFunction::polynomial(terms);
        let exact = cauchy_polynomial(&g, z.z()).unwrap();
        let quad = cauchy(&g, z, grid()).unwrap();
        prop_assert!((quad - exact).norm() <= 1e-7 * exact.norm().max(1.0), "{quad} vs {exact}");
    }

    #[test]
    fn connection_identity(terms in polynomial(), z in point(0.9)) {
        let g = DiskFunction::polynomial(terms);
        let lhs = cauchy(&g, z, grid()).unwrap();
        let rhs = j0star(&g, z, grid()).unwrap() - plain_cauchy(&g, z, grid()).unwrap();
        prop_assert!((lhs - rhs).norm() <= 1e-7 * lhs.norm().max(1.0), "{lhs} vs {rhs}");
    }

    #[test]
    fn cauchy_is_linear(f in polynomial(), g in polynomial(), a in coeff(), z in point(0.9)) {
        let f = DiskFunction::polynomial(f);
        let g = DiskFunction::polynomial(g);
        let sum = DiskFunction::new({
            let (f, g) = (f.clone(), g.clone());
            move |w| a * f.eval(w) + g.eval(w)
        });
        let lhs = cauchy(&sum, z, grid()).unwrap();
        let rhs = a * cauchy(&f, z, grid()).unwrap() + cauchy(&g, z, grid()).unwrap();
        prop_assert!((lhs - rhs).norm() <= 1e-9 * rhs.norm().max(1.0));
    }
}
