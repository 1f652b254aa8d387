//! A small expression language for right-hand sides.
//!
//! ```text
//! expr  := term (('+' | '-') term)*
//! term  := unary (('*' | '/') unary | atom)*        juxtaposition multiplies
//! unary := ('+' | '-') unary | power
//! power := atom ('^' unary)?                         constant exponents only
//! atom  := number | number 'i' | 'i' | 'pi' | 'z' | 'zbar' | 'z̄'
//!        | '|' expr '|' | '(' expr ')' | 'conj' '(' expr ')'
//!        | 'gg' '(' p ')' | 'gradient-extremal' '(' p ')' | 'dirac' '(' n ')'
//!        | 'bessel' | 'she'
//! ```
//!
//! Polynomials in `z` and `z̄` keep their monomial list, so the transforms
//! can be compared with closed forms.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::field::{DiskFunction, Monomial, Smoothness};
use crate::witness;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Imag(f64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Bar,
    End,
}

/// Token with its 1-based column.
#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    col: usize,
}

fn err(col: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        position: col,
        message: message.into(),
    }
}

fn lex(src: &str) -> Result<Vec<Spanned>> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let single = match c {
            '+' => Some(Tok::Plus),
            '-' => Some(Tok::Minus),
            '*' => Some(Tok::Star),
            '/' => Some(Tok::Slash),
            '^' => Some(Tok::Caret),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            '|' => Some(Tok::Bar),
            _ => None,
        };
        if let Some(tok) = single {
            out.push(Spanned { tok, col });
            i += 1;
            continue;
        }
        if c.is_ascii_digit() || c == '.' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                i += 1;
            }
            if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                let mut j = i + 1;
                if j < chars.len() && (chars[j] == '+' || chars[j] == '-') {
                    j += 1;
                }
                if j < chars.len() && chars[j].is_ascii_digit() {
                    i = j;
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                    }
                }
            }
            let text: String = chars[start..i].iter().collect();
            let v: f64 = text
                .parse()
                .map_err(|_| err(col, format!("malformed number '{text}'")))?;
            let imag = i < chars.len()
                && chars[i] == 'i'
                && !chars
                    .get(i + 1)
                    .is_some_and(|c| c.is_alphanumeric() || *c == '_');
            if imag {
                i += 1;
                out.push(Spanned {
                    tok: Tok::Imag(v),
                    col,
                });
            } else {
                out.push(Spanned {
                    tok: Tok::Num(v),
                    col,
                });
            }
            continue;
        }
        if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            let mut name: String = chars[start..i].iter().collect();
            if name == "gradient" {
                let rest: String = chars[i..].iter().take(9).collect();
                if rest == "-extremal" {
                    i += 9;
                    name.push_str("-extremal");
                }
            }
            // z followed by a combining macron
            if name == "z" && chars.get(i) == Some(&'\u{0304}') {
                i += 1;
                name = "zbar".into();
            }
            out.push(Spanned {
                tok: Tok::Ident(name),
                col,
            });
            continue;
        }
        return Err(err(col, format!("unexpected character '{c}'")));
    }
    out.push(Spanned {
        tok: Tok::End,
        col: chars.len() + 1,
    });
    Ok(out)
}

#[derive(Clone)]
enum Node {
    Const(Complex64),
    Z,
    Zbar,
    Abs(Box<Node>),
    Conj(Box<Node>),
    Neg(Box<Node>),
    Add(Box<Node>, Box<Node>),
    Sub(Box<Node>, Box<Node>),
    Mul(Box<Node>, Box<Node>),
    Div(Box<Node>, Box<Node>),
    Pow(Box<Node>, Complex64),
    Named(Arc<DiskFunction>),
}

impl Node {
    fn eval(&self, w: Complex64) -> Complex64 {
        match self {
            Node::Const(c) => *c,
            Node::Z => w,
            Node::Zbar => w.conj(),
            Node::Abs(a) => Complex64::new(a.eval(w).norm(), 0.0),
            Node::Conj(a) => a.eval(w).conj(),
            Node::Neg(a) => -a.eval(w),
            Node::Add(a, b) => a.eval(w) + b.eval(w),
            Node::Sub(a, b) => a.eval(w) - b.eval(w),
            Node::Mul(a, b) => a.eval(w) * b.eval(w),
            Node::Div(a, b) => a.eval(w) / b.eval(w),
            Node::Pow(a, e) => pow(a.eval(w), *e),
            Node::Named(g) => g.eval(w),
        }
    }

    fn depends_on_z(&self) -> bool {
        match self {
            Node::Const(_) => false,
            Node::Z | Node::Zbar | Node::Named(_) => true,
            Node::Abs(a) | Node::Conj(a) | Node::Neg(a) | Node::Pow(a, _) => a.depends_on_z(),
            Node::Add(a, b) | Node::Sub(a, b) | Node::Mul(a, b) | Node::Div(a, b) => {
                a.depends_on_z() || b.depends_on_z()
            }
        }
    }

    /// Whether the node is built from smooth pieces only.
    fn is_smooth(&self) -> bool {
        match self {
            Node::Const(_) | Node::Z | Node::Zbar => true,
            Node::Abs(_) => false,
            Node::Conj(a) | Node::Neg(a) => a.is_smooth(),
            Node::Add(a, b) | Node::Sub(a, b) | Node::Mul(a, b) => a.is_smooth() && b.is_smooth(),
            Node::Div(a, b) => a.is_smooth() && !b.depends_on_z(),
            Node::Pow(a, e) => a.is_smooth() && is_natural(*e),
            Node::Named(g) => g.smoothness() == Smoothness::Smooth,
        }
    }

    /// Monomial expansion, if the node is a polynomial in `z`, `z̄`.
    fn polynomial(&self) -> Option<Poly> {
        match self {
            Node::Const(c) => Some(Poly::constant(*c)),
            Node::Z => Some(Poly::monomial(1, 0)),
            Node::Zbar => Some(Poly::monomial(0, 1)),
            Node::Conj(a) => a.polynomial().map(|p| p.conj()),
            Node::Neg(a) => a.polynomial().map(|p| p.scale(-Complex64::new(1.0, 0.0))),
            Node::Add(a, b) => Some(a.polynomial()?.add(&b.polynomial()?, 1.0)),
            Node::Sub(a, b) => Some(a.polynomial()?.add(&b.polynomial()?, -1.0)),
            Node::Mul(a, b) => Some(a.polynomial()?.mul(&b.polynomial()?)),
            Node::Div(a, b) if !b.depends_on_z() => Some(
                a.polynomial()?
                    .scale(1.0 / b.eval(Complex64::new(0.0, 0.0))),
            ),
            Node::Pow(a, e) if is_natural(*e) => {
                let base = a.polynomial()?;
                let mut acc = Poly::constant(Complex64::new(1.0, 0.0));
                for _ in 0..e.re as u32 {
                    acc = acc.mul(&base);
                }
                Some(acc)
            }
            _ => None,
        }
    }
}

fn is_natural(e: Complex64) -> bool {
    e.im == 0.0 && e.re >= 0.0 && e.re.fract() == 0.0 && e.re <= 64.0
}

fn pow(b: Complex64, e: Complex64) -> Complex64 {
    if e.im == 0.0 && e.re.fract() == 0.0 && e.re.abs() <= 64.0 {
        b.powi(e.re as i32)
    } else if b.im == 0.0 && b.re >= 0.0 && e.im == 0.0 {
        Complex64::new(b.re.powf(e.re), 0.0)
    } else {
        b.powc(e)
    }
}

#[derive(Debug, Clone, Default)]
struct Poly(BTreeMap<(u32, u32), Complex64>);

impl Poly {
    fn constant(c: Complex64) -> Self {
        let mut p = Poly::default();
        p.0.insert((0, 0), c);
        p
    }

    fn monomial(m: u32, n: u32) -> Self {
        let mut p = Poly::default();
        p.0.insert((m, n), Complex64::new(1.0, 0.0));
        p
    }

    fn conj(&self) -> Self {
        Poly(
            self.0
                .iter()
                .map(|(&(m, n), c)| ((n, m), c.conj()))
                .collect(),
        )
    }

    fn scale(&self, s: Complex64) -> Self {
        Poly(self.0.iter().map(|(&k, c)| (k, c * s)).collect())
    }

    fn add(&self, other: &Poly, sign: f64) -> Self {
        let mut out = self.clone();
        for (&k, &c) in &other.0 {
            *out.0.entry(k).or_default() += c * sign;
        }
        out
    }

    fn mul(&self, other: &Poly) -> Self {
        let mut out = Poly::default();
        for (&(m1, n1), &a) in &self.0 {
            for (&(m2, n2), &b) in &other.0 {
                *out.0.entry((m1 + m2, n1 + n2)).or_default() += a * b;
            }
        }
        out
    }

    fn terms(&self) -> Vec<Monomial> {
        self.0
            .iter()
            .filter(|(_, c)| c.norm() != 0.0)
            .map(|(&(m, n), &c)| Monomial::new(c, m, n))
            .collect()
    }
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
    // open `|` pairs; inside one a bar closes rather than multiplies
    abs_depth: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn col(&self) -> usize {
        self.toks[self.pos].col
    }

    fn bump(&mut self) -> Spanned {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<()> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            Err(err(self.col(), format!("expected {what}")))
        }
    }

    fn expr(&mut self) -> Result<Node> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    lhs = Node::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Tok::Minus => {
                    self.bump();
                    lhs = Node::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Node> {
        let mut lhs = self.unary()?;
        loop {
            match self.peek() {
                Tok::Star => {
                    self.bump();
                    lhs = Node::Mul(Box::new(lhs), Box::new(self.unary()?));
                }
                Tok::Slash => {
                    self.bump();
                    lhs = Node::Div(Box::new(lhs), Box::new(self.unary()?));
                }
                Tok::Num(_) | Tok::Imag(_) | Tok::Ident(_) | Tok::LParen => {
                    lhs = Node::Mul(Box::new(lhs), Box::new(self.power()?));
                }
                Tok::Bar if self.abs_depth == 0 => {
                    lhs = Node::Mul(Box::new(lhs), Box::new(self.power()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn unary(&mut self) -> Result<Node> {
        match self.peek() {
            Tok::Minus => {
                self.bump();
                Ok(Node::Neg(Box::new(self.unary()?)))
            }
            Tok::Plus => {
                self.bump();
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Node> {
        let base = self.atom()?;
        if *self.peek() != Tok::Caret {
            return Ok(base);
        }
        self.bump();
        let col = self.col();
        let exponent = self.unary()?;
        if exponent.depends_on_z() {
            return Err(err(col, "exponent must be a constant"));
        }
        Ok(Node::Pow(
            Box::new(base),
            exponent.eval(Complex64::new(0.0, 0.0)),
        ))
    }

    fn constant_arg(&mut self, name: &str) -> Result<(f64, usize)> {
        self.expect(Tok::LParen, &format!("'(' after {name}"))?;
        let col = self.col();
        let arg = self.expr()?;
        self.expect(Tok::RParen, "')'")?;
        if arg.depends_on_z() {
            return Err(err(col, format!("argument of {name} must be a constant")));
        }
        let v = arg.eval(Complex64::new(0.0, 0.0));
        if v.im != 0.0 || !v.re.is_finite() {
            return Err(err(col, format!("argument of {name} must be real")));
        }
        Ok((v.re, col))
    }

    fn atom(&mut self) -> Result<Node> {
        let Spanned { tok, col } = self.bump();
        match tok {
            Tok::Num(v) => Ok(Node::Const(Complex64::new(v, 0.0))),
            Tok::Imag(v) => Ok(Node::Const(Complex64::new(0.0, v))),
            Tok::LParen => {
                let e = self.expr()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(e)
            }
            Tok::Bar => {
                self.abs_depth += 1;
                let e = self.expr();
                self.abs_depth -= 1;
                let e = e?;
                self.expect(Tok::Bar, "closing '|'")?;
                Ok(Node::Abs(Box::new(e)))
            }
            Tok::Ident(name) => self.named(&name, col),
            Tok::End => Err(err(col, "unexpected end of expression")),
            other => Err(err(col, format!("unexpected token {other:?}"))),
        }
    }

    fn named(&mut self, name: &str, col: usize) -> Result<Node> {
        let named = |g: DiskFunction| Ok(Node::Named(Arc::new(g)));
        match name {
            "z" => Ok(Node::Z),
            "zbar" => Ok(Node::Zbar),
            "i" => Ok(Node::Const(Complex64::new(0.0, 1.0))),
            "pi" => Ok(Node::Const(Complex64::new(PI, 0.0))),
            "conj" => {
                self.expect(Tok::LParen, "'(' after conj")?;
                let e = self.expr()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(Node::Conj(Box::new(e)))
            }
            "gg" | "gradient-extremal" => {
                let (p, at) = self.constant_arg(name)?;
                if !(1.0..2.0).contains(&p) {
                    return Err(err(at, format!("{name} needs 1 <= p < 2, got {p}")));
                }
                if name == "gg" {
                    named(witness::pointwise_extremal_function(p))
                } else {
                    named(witness::gradient_extremal_function(p))
                }
            }
            "dirac" => {
                let (n, at) = self.constant_arg(name)?;
                if n < 1.0 || n.fract() != 0.0 || n > u32::MAX as f64 {
                    return Err(err(at, format!("dirac needs a positive integer, got {n}")));
                }
                // radial with a jump: flagged so the modal route is used
                let g = witness::dirac_function(n as u32).with_smoothness(Smoothness::Singular {
                    point: Complex64::new(0.0, 0.0),
                    order: 0.0,
                });
                named(g)
            }
            "bessel" => named(witness::bessel_extremal_function()),
            "she" => named(witness::unbounded_function()),
            other => Err(err(col, format!("unknown identifier '{other}'"))),
        }
    }
}

/// A parsed right-hand side.
#[derive(Clone)]
pub struct Expr {
    source: String,
    root: Node,
}

impl std::fmt::Debug for Expr {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Expr")
            .field("source", &self.source)
            .finish()
    }
}

impl Expr {
    pub fn parse(src: &str) -> Result<Self> {
        let toks = lex(src)?;
        let mut p = Parser {
            toks,
            pos: 0,
            abs_depth: 0,
        };
        let root = p.expr()?;
        if *p.peek() != Tok::End {
            return Err(err(p.col(), format!("unexpected token {:?}", p.peek())));
        }
        Ok(Self {
            source: src.to_string(),
            root,
        })
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.root.eval(z)
    }

    /// Monomials of a polynomial expression.
    pub fn monomials(&self) -> Option<Vec<Monomial>> {
        self.root.polynomial().map(|p| p.terms())
    }

    /// The expression as a right-hand side, with its monomials or its
    /// regularity at the origin attached.
    pub fn to_disk_function(&self) -> DiskFunction {
        if let Node::Named(g) = &self.root {
            return (**g).clone().with_label(self.source.clone());
        }
        if let Some(terms) = self.monomials() {
            return DiskFunction::polynomial(terms).with_label(self.source.clone());
        }
        let root = self.root.clone();
        let f = DiskFunction::new(move |w| root.eval(w)).with_label(self.source.clone());
        if self.root.is_smooth() {
            return f;
        }
        f.with_smoothness(Smoothness::Singular {
            point: Complex64::new(0.0, 0.0),
            order: self.origin_order(),
        })
    }

    /// Blow-up rate `s` of `|g| ~ |z|^{-s}` at the origin, read off the
    /// largest modulus on two small circles; 0 for bounded expressions.
    pub fn origin_order(&self) -> f64 {
        let peak = |r: f64| {
            (0..16)
                .map(|j| {
                    self.eval(Complex64::from_polar(r, 0.3 + j as f64 * PI / 8.0))
                        .norm()
                })
                .filter(|v| v.is_finite())
                .fold(0.0, f64::max)
        };
        let (near, far) = (peak(1e-6), peak(1e-3));
        if far == 0.0 || near <= far {
            return 0.0;
        }
        // snap to 1e-6 so exact powers are reproduced
        let s = (near / far).ln() / 1e3f64.ln();
        (s * 1e6).round() / 1e6
    }
}

impl std::str::FromStr for Expr {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Expr::parse(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn close(a: Complex64, b: Complex64) -> bool {
        (a - b).norm() < 1e-12
    }

    #[test]
    fn arithmetic() {
        let z = c(0.3, -0.2);
        let cases: Vec<(&str, Complex64)> = vec![
            ("1", c(1.0, 0.0)),
            ("z", z),
            ("zbar", z.conj()),
            ("z̄", z.conj()),
            (
                "2z^2 - 3i*zbar + 0.5",
                2.0 * z * z - c(0.0, 3.0) * z.conj() + 0.5,
            ),
            ("|z|^3", c(z.norm().powi(3), 0.0)),
            ("-(z+1)/(2)", -(z + 1.0) / 2.0),
            ("z^2^1", z * z),
            ("1e-1 z", 0.1 * z),
            ("conj(z^2)", (z * z).conj()),
            ("(1+2i)(z)", c(1.0, 2.0) * z),
            ("-z/|z|", -z / z.norm()),
            ("pi", c(PI, 0.0)),
            ("2 |z|^2", c(2.0 * z.norm_sqr(), 0.0)),
            ("||z| - 1|", c(1.0 - z.norm(), 0.0)),
        ];
        for (src, want) in cases {
            let e = Expr::parse(src).unwrap();
            assert!(close(e.eval(z), want), "{src}: {} vs {want}", e.eval(z));
        }
    }

    #[test]
    fn polynomials_expand() {
        let e = Expr::parse("(z + zbar)^2").unwrap();
        let mut terms = e.monomials().unwrap();
        terms.sort_by_key(|t| (t.m, t.n));
        assert_eq!(terms.len(), 3);
        assert_eq!((terms[1].m, terms[1].n), (1, 1));
        assert!(close(terms[1].coeff, c(2.0, 0.0)));
        assert!(Expr::parse("z/|z|").unwrap().monomials().is_none());
        assert!(Expr::parse("z/2").unwrap().monomials().is_some());
        let g = Expr::parse("z - z").unwrap().to_disk_function();
        assert_eq!(g.monomials().unwrap().len(), 0);
    }

    #[test]
    fn regularity() {
        let order = |s: &str| match Expr::parse(s).unwrap().to_disk_function().smoothness() {
            Smoothness::Smooth => None,
            Smoothness::Singular { order, .. } => Some(order),
        };
        assert_eq!(order("z^2 + zbar"), None);
        assert_eq!(order("-z/|z|"), Some(0.0));
        assert_eq!(order("|z|"), Some(0.0));
        assert_eq!(order("|z|^(-0.5)"), Some(0.5));
        assert_eq!(order("1/z"), Some(1.0));
        assert_eq!(order("2 * gg(1.5)"), Some(0.5));
        assert_eq!(order("gg(1.5)"), Some(0.5));
        assert_eq!(order("she"), Some(1.0));
        assert_eq!(order("bessel"), None);
        assert_eq!(order("dirac(3)"), Some(0.0));
    }

    #[test]
    fn named_functions() {
        let z = c(0.2, 0.1);
        let e = Expr::parse("gg(1)").unwrap();
        assert!(close(e.eval(z), -z / z.norm()));
        let e = Expr::parse("2 * dirac(4)").unwrap();
        assert!(close(e.eval(z), c(32.0, 0.0)));
        assert!(close(
            Expr::parse("gradient-extremal(1)").unwrap().eval(z),
            c(1.0, 0.0)
        ));
        assert!(Expr::parse("bessel").unwrap().eval(c(0.0, 0.0)).re == 1.0);
    }

    #[test]
    fn parse_errors_carry_position() {
        let pos = |s: &str| match Expr::parse(s) {
            Err(Error::Parse { position, .. }) => position,
            other => panic!("{s}: {other:?}"),
        };
        assert_eq!(pos("z + $"), 5);
        assert_eq!(pos("(z + 1"), 7);
        assert_eq!(pos("z ^ z"), 5);
        assert_eq!(pos("foo"), 1);
        assert_eq!(pos("gg(3)"), 4);
        assert_eq!(pos("dirac(0.5)"), 7);
        assert_eq!(pos("|z"), 3);
        assert_eq!(pos(""), 1);
        assert_eq!(pos("z )"), 3);
    }
}
