//! Special functions: Gamma, Beta, Pochhammer symbol, Gauss hypergeometric
//! `2F1` on `[0, 1]`, integer-order Bessel functions `J_k` and their first
//! positive zeros.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::sync::OnceLock;

use crate::error::{domain, Error, Result};

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// Largest argument for which `Γ(x)` is finite in `f64`.
const GAMMA_MAX: f64 = 171.624_376_956_302_7;

/// Γ(x) for any real x that is not a pole. Lanczos (g = 7) on x ≥ 1/2 and the
/// reflection formula below.
pub(crate) fn gamma_real(x: f64) -> f64 {
    if x < 0.5 {
        let s = (PI * x).sin();
        if s == 0.0 {
            return f64::NAN;
        }
        return PI / (s * gamma_real(1.0 - x));
    }
    let x = x - 1.0;
    let mut acc = LANCZOS[0];
    for (i, c) in LANCZOS.iter().enumerate().skip(1) {
        acc += c / (x + i as f64);
    }
    let t = x + LANCZOS_G + 0.5;
    // split the power so that t^(x+1/2) does not overflow before e^-t kicks in
    let half = t.powf(0.5 * (x + 0.5));
    (2.0 * PI).sqrt() * half * (half * (-t).exp()) * acc
}

/// The Gamma function on the positive reals, relative error below `1e-13`.
pub fn gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(domain(
            "gamma",
            format!("argument must be positive, got {x}"),
        ));
    }
    if x > GAMMA_MAX {
        return Err(domain("gamma", format!("argument {x} overflows f64")));
    }
    Ok(gamma_real(x))
}

/// Euler Beta function `B(a, b) = Γ(a)Γ(b)/Γ(a+b)`.
pub fn beta(a: f64, b: f64) -> Result<f64> {
    if !(a > 0.0) || !(b > 0.0) {
        return Err(domain(
            "beta",
            format!("arguments must be positive, got ({a}, {b})"),
        ));
    }
    if a + b > GAMMA_MAX {
        let ln = ln_gamma_pos(a) + ln_gamma_pos(b) - ln_gamma_pos(a + b);
        return Ok(ln.exp());
    }
    Ok(gamma_real(a) * gamma_real(b) / gamma_real(a + b))
}

fn ln_gamma_pos(x: f64) -> f64 {
    if x < 0.5 {
        return gamma_real(x).ln();
    }
    let x = x - 1.0;
    let mut acc = LANCZOS[0];
    for (i, c) in LANCZOS.iter().enumerate().skip(1) {
        acc += c / (x + i as f64);
    }
    let t = x + LANCZOS_G + 0.5;
    0.5 * (2.0 * PI).ln() + (x + 0.5) * t.ln() - t + acc.ln()
}

/// Rising factorial `(d)_n = d (d+1) ⋯ (d+n-1)`, with `(d)_0 = 1`.
pub fn pochhammer(d: f64, n: u32) -> f64 {
    (0..n).fold(1.0, |acc, k| acc * (d + k as f64))
}

fn is_nonpositive_integer(x: f64) -> bool {
    x <= 0.0 && x == x.round()
}

fn distance_to_integer(x: f64) -> f64 {
    (x - x.round()).abs()
}

const HYP_MAX_TERMS: usize = 1_000_000;

/// Gauss hypergeometric function `2F1(a, b; c; x)` for `x ∈ [0, 1]`.
///
/// The defining series is summed with compensated addition until the terms
/// drop below `1e-16` of the partial sum. At `x = 1` the Gauss summation
/// formula is used, which requires `c > a + b`. For `x > 0.9` and a
/// non-integral `c - a - b` the series in `1 - x` is used instead.
pub fn hyp2f1(a: f64, b: f64, c: f64, x: f64) -> Result<f64> {
    if is_nonpositive_integer(c) {
        return Err(domain(
            "hyp2f1",
            format!("c = {c} is a non-positive integer"),
        ));
    }
    if !(0.0..=1.0).contains(&x) {
        return Err(domain("hyp2f1", format!("x = {x} outside [0, 1]")));
    }
    let terminates = is_nonpositive_integer(a) || is_nonpositive_integer(b);
    if x == 1.0 {
        if terminates {
            return hyp_series(a, b, c, x);
        }
        if !(c > a + b) {
            return Err(domain(
                "hyp2f1",
                format!("series diverges at x = 1 unless c > a + b (a={a}, b={b}, c={c})"),
            ));
        }
        return Ok(gauss_sum(a, b, c));
    }
    let s = c - a - b;
    if x > 0.9
        && !terminates
        && distance_to_integer(s) > 1e-2
        && distance_to_integer(a) > 1e-12
        && distance_to_integer(b) > 1e-12
    {
        // analytic continuation around x = 1
        let y = 1.0 - x;
        let f1 = hyp_series(a, b, 1.0 - s, y)?;
        let f2 = hyp_series(c - a, c - b, 1.0 + s, y)?;
        let g_c = gamma_real(c);
        let front = g_c * gamma_real(s) / (gamma_real(c - a) * gamma_real(c - b));
        let back = g_c * gamma_real(-s) / (gamma_real(a) * gamma_real(b));
        return Ok(front * f1 + back * y.powf(s) * f2);
    }
    hyp_series(a, b, c, x)
}

fn gauss_sum(a: f64, b: f64, c: f64) -> f64 {
    gamma_real(c) * gamma_real(c - a - b) / (gamma_real(c - a) * gamma_real(c - b))
}

fn hyp_series(a: f64, b: f64, c: f64, x: f64) -> Result<f64> {
    let mut sum = 1.0;
    let mut comp = 0.0;
    let mut term = 1.0;
    if x == 0.0 {
        return Ok(1.0);
    }
    for n in 0..HYP_MAX_TERMS {
        let nf = n as f64;
        let ratio = (a + nf) * (b + nf) / ((c + nf) * (nf + 1.0)) * x;
        term *= ratio;
        if term == 0.0 {
            return Ok(sum + comp);
        }
        let t = sum + term;
        if sum.abs() >= term.abs() {
            comp += (sum - t) + term;
        } else {
            comp += (term - t) + sum;
        }
        sum = t;
        if ratio.abs() < 1.0 && term.abs() <= 1e-16 * (sum + comp).abs() {
            return Ok(sum + comp);
        }
    }
    Err(Error::NoConvergence {
        method: "hyp2f1 series",
        iterations: HYP_MAX_TERMS,
    })
}

/// Below this argument the power series of `J_k` loses at most a few ulps
/// to cancellation; above it Miller's backward recurrence is used.
const BESSEL_SERIES_LIMIT: f64 = 8.0;

/// Bessel function of the first kind `J_k(x)` for integer `k ≥ 0`, `x ≥ 0`.
pub fn bessel_j(k: u32, x: f64) -> f64 {
    if x == 0.0 {
        return if k == 0 { 1.0 } else { 0.0 };
    }
    if x.abs() <= BESSEL_SERIES_LIMIT || (k as f64) > x * x {
        bessel_series(k, x)
    } else {
        bessel_miller(k, x)
    }
}

/// `J_n(x)` for a signed order, via `J_{-k} = (-1)^k J_k`.
pub fn bessel_j_signed(n: i64, x: f64) -> f64 {
    let k = n.unsigned_abs() as u32;
    let v = bessel_j(k, x);
    if n < 0 && k % 2 == 1 {
        -v
    } else {
        v
    }
}

fn bessel_series(k: u32, x: f64) -> f64 {
    let half = 0.5 * x;
    let mut lead = 1.0;
    for i in 1..=k {
        lead *= half / i as f64;
    }
    let q = -half * half;
    let mut term = lead;
    let mut sum = lead;
    for m in 1..500 {
        term *= q / (m as f64 * (m + k) as f64);
        sum += term;
        if term.abs() <= 1e-17 * sum.abs().max(lead.abs() * 1e-300) {
            break;
        }
    }
    sum
}

fn bessel_miller(k: u32, x: f64) -> f64 {
    let top = (k as f64).max(x);
    let mut start = (top + 30.0 + (60.0 * top).sqrt()) as usize;
    if start % 2 == 1 {
        start += 1;
    }
    let mut next = 0.0;
    let mut cur = 1e-300;
    let mut norm = 0.0;
    let mut wanted = 0.0;
    for n in (1..=start).rev() {
        let prev = 2.0 * n as f64 / x * cur - next;
        next = cur;
        cur = prev;
        // cur now holds the unnormalized J_{n-1}
        let order = n - 1;
        if order == k as usize {
            wanted = cur;
        }
        if order % 2 == 0 && order > 0 {
            norm += 2.0 * cur;
        }
        if cur.abs() > 1e250 {
            cur *= 1e-250;
            next *= 1e-250;
            norm *= 1e-250;
            wanted *= 1e-250;
        }
    }
    norm += cur;
    wanted / norm
}

/// `dJ_k/dx = (J_{k-1} - J_{k+1}) / 2`.
pub fn bessel_j_prime(k: u32, x: f64) -> f64 {
    let k = k as i64;
    0.5 * (bessel_j_signed(k - 1, x) - bessel_j_signed(k + 1, x))
}

/// Orders whose first zero is memoized on first use.
pub const ZERO_TABLE_MAX_ORDER: u32 = 64;

/// First positive zeros `α_k` of `J_k` for `k = 0..=64`.
#[derive(Debug, Clone)]
pub struct BesselZeroTable {
    entries: BTreeMap<u32, f64>,
}

impl BesselZeroTable {
    fn build() -> Result<Self> {
        let mut entries = BTreeMap::new();
        for k in 0..=ZERO_TABLE_MAX_ORDER {
            entries.insert(k, find_first_zero(k)?);
        }
        Ok(Self { entries })
    }

    pub fn get(&self, k: u32) -> Option<f64> {
        self.entries.get(&k).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (u32, f64)> + '_ {
        self.entries.iter().map(|(k, v)| (*k, *v))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

static ZERO_TABLE: OnceLock<std::result::Result<BesselZeroTable, Error>> = OnceLock::new();

/// The shared, lazily built zero table.
pub fn bessel_zero_table() -> Result<&'static BesselZeroTable> {
    ZERO_TABLE
        .get_or_init(BesselZeroTable::build)
        .as_ref()
        .map_err(Clone::clone)
}

/// First positive zero `α_k` of `J_k`.
pub fn bessel_first_zero(k: u32) -> Result<f64> {
    if k <= ZERO_TABLE_MAX_ORDER {
        let table = bessel_zero_table()?;
        return Ok(table
            .get(k)
            .expect("table covers every order up to the max"));
    }
    find_first_zero(k)
}

/// `α = α_0 ≈ 2.4048256`, the first zero of `J_0`.
pub fn alpha0() -> f64 {
    bessel_first_zero(0).expect("first zero of J_0 is always bracketed")
}

fn find_first_zero(k: u32) -> Result<f64> {
    // scan for the first sign change, starting past the origin
    let step = 0.1;
    let mut lo = k as f64 + 1.0;
    let mut f_lo = bessel_j(k, lo);
    let limit = 4.0 * k as f64 + 40.0;
    let mut hi = lo + step;
    let mut f_hi = bessel_j(k, hi);
    while f_lo.signum() == f_hi.signum() {
        lo = hi;
        f_lo = f_hi;
        hi += step;
        if hi > limit {
            return Err(Error::Bracket(format!(
                "no sign change of J_{k} below {limit}"
            )));
        }
        f_hi = bessel_j(k, hi);
    }
    while hi - lo > 1e-3 {
        let mid = 0.5 * (lo + hi);
        let f_mid = bessel_j(k, mid);
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    let mut x = 0.5 * (lo + hi);
    for _ in 0..50 {
        let f = bessel_j(k, x);
        if f.abs() <= 1e-15 {
            break;
        }
        let dx = f / bessel_j_prime(k, x);
        x -= dx;
        if dx.abs() <= 1e-15 * x {
            break;
        }
    }
    if !(x > lo - 1e-3 && x < hi + 1e-3) {
        return Err(Error::Bracket(format!("Newton left the bracket for J_{k}")));
    }
    Ok(x)
}
