//! Verification reports and their human, JSON and CSV renderings.

use std::fmt::Write as _;
use std::time::Duration;

use num_complex::Complex64;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::quadrature::PolarGrid;

pub const SCHEMA_VERSION: u32 = 1;

/// A real or complex value in a report.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Quantity {
    Real(f64),
    Complex(Complex64),
}

impl Quantity {
    pub fn to_complex(self) -> Complex64 {
        match self {
            Quantity::Real(x) => Complex64::new(x, 0.0),
            Quantity::Complex(c) => c,
        }
    }

    pub fn magnitude(self) -> f64 {
        self.to_complex().norm()
    }

    fn parts(self) -> (f64, f64) {
        let c = self.to_complex();
        (c.re, c.im)
    }
}

impl From<f64> for Quantity {
    fn from(x: f64) -> Self {
        Quantity::Real(x)
    }
}

impl From<Complex64> for Quantity {
    fn from(c: Complex64) -> Self {
        Quantity::Complex(c)
    }
}

impl std::fmt::Display for Quantity {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match *self {
            Quantity::Real(x) => write!(f, "{x:.10}"),
            Quantity::Complex(c) => {
                let sign = if c.im.is_sign_negative() { '-' } else { '+' };
                write!(f, "{:.10}{sign}{:.10}i", c.re, c.im.abs())
            }
        }
    }
}

impl Serialize for Quantity {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match *self {
            Quantity::Real(x) => s.serialize_f64(x),
            Quantity::Complex(c) => {
                let mut st = s.serialize_struct("Complex", 2)?;
                st.serialize_field("re", &c.re)?;
                st.serialize_field("im", &c.im)?;
                st.end()
            }
        }
    }
}

/// One row of a report. Rows without a tolerance are informational and
/// carry no verdict.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Entry {
    pub name: String,
    pub claimed: Option<Quantity>,
    pub computed: Quantity,
    pub abs_err: Option<f64>,
    pub rel_err: Option<f64>,
    pub tolerance: Option<f64>,
    pub pass: Option<bool>,
}

impl Entry {
    /// A value with nothing to compare against.
    pub fn info(name: impl Into<String>, computed: impl Into<Quantity>) -> Self {
        Self {
            name: name.into(),
            claimed: None,
            computed: computed.into(),
            abs_err: None,
            rel_err: None,
            tolerance: None,
            pass: None,
        }
    }

    /// A value compared against a claim; passes iff `rel_err <= tolerance`.
    /// The relative error falls back to the absolute one for a zero claim.
    pub fn check(
        name: impl Into<String>,
        claimed: impl Into<Quantity>,
        computed: impl Into<Quantity>,
        tolerance: f64,
    ) -> Self {
        let claimed = claimed.into();
        let computed = computed.into();
        let abs_err = (computed.to_complex() - claimed.to_complex()).norm();
        let scale = claimed.magnitude();
        let rel_err = if scale > 0.0 {
            abs_err / scale
        } else {
            abs_err
        };
        Self {
            name: name.into(),
            claimed: Some(claimed),
            computed,
            abs_err: Some(abs_err),
            rel_err: Some(rel_err),
            tolerance: Some(tolerance),
            pass: Some(rel_err <= tolerance),
        }
    }

    /// A condition with a recorded value, e.g. a monotonicity check.
    pub fn condition(name: impl Into<String>, computed: impl Into<Quantity>, holds: bool) -> Self {
        Self {
            pass: Some(holds),
            ..Self::info(name, computed)
        }
    }

    pub fn failed(&self) -> bool {
        self.pass == Some(false)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct GridInfo {
    pub n_radial: usize,
    pub n_theta: usize,
}

impl From<&PolarGrid> for GridInfo {
    fn from(g: &PolarGrid) -> Self {
        Self {
            n_radial: g.n_radial(),
            n_theta: g.n_theta(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub schema: u32,
    pub command: String,
    #[serde(serialize_with = "as_map")]
    pub parameters: Vec<(String, String)>,
    pub grid: GridInfo,
    pub results: Vec<Entry>,
    pub wall_time_s: f64,
    pub pass: bool,
}

impl Report {
    pub fn new(command: impl Into<String>, grid: &PolarGrid) -> Self {
        Self {
            schema: SCHEMA_VERSION,
            command: command.into(),
            parameters: Vec::new(),
            grid: grid.into(),
            results: Vec::new(),
            wall_time_s: 0.0,
            pass: true,
        }
    }

    pub fn param(mut self, key: &str, value: impl ToString) -> Self {
        self.parameters.push((key.to_string(), value.to_string()));
        self
    }

    pub fn push(&mut self, entry: Entry) {
        self.pass &= !entry.failed();
        self.results.push(entry);
    }

    pub fn extend(&mut self, entries: impl IntoIterator<Item = Entry>) {
        for e in entries {
            self.push(e);
        }
    }

    pub fn set_wall_time(&mut self, d: Duration) {
        self.wall_time_s = d.as_secs_f64();
    }

    pub fn failures(&self) -> impl Iterator<Item = &Entry> {
        self.results.iter().filter(|e| e.failed())
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Human => self.to_human(),
            Format::Json => self.to_json(),
            Format::Csv => self.to_csv(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialises")
    }

    pub fn to_human(&self) -> String {
        let mut out = String::new();
        let params: Vec<String> = self
            .parameters
            .iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect();
        let _ = writeln!(
            out,
            "{} [{}] grid {}x{}",
            self.command,
            params.join(" "),
            self.grid.n_radial,
            self.grid.n_theta
        );
        let width = self
            .results
            .iter()
            .map(|e| e.name.len())
            .max()
            .unwrap_or(4)
            .max(4);
        let _ = writeln!(
            out,
            "{:<width$}  {:>34}  {:>34}  {:>10}  {}",
            "name", "computed", "claimed", "rel_err", "status"
        );
        for e in &self.results {
            let claimed = e
                .claimed
                .map(|c| c.to_string())
                .unwrap_or_else(|| "-".into());
            let rel = e
                .rel_err
                .map(|r| format!("{r:.2e}"))
                .unwrap_or_else(|| "-".into());
            let status = match e.pass {
                Some(true) => "pass",
                Some(false) => "FAIL",
                None => "",
            };
            let _ = writeln!(
                out,
                "{:<width$}  {:>34}  {:>34}  {:>10}  {}",
                e.name,
                e.computed.to_string(),
                claimed,
                rel,
                status
            );
        }
        let _ = writeln!(
            out,
            "{} in {:.3} s",
            if self.pass { "PASS" } else { "FAIL" },
            self.wall_time_s
        );
        out
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        let opt = |x: Option<f64>| x.map(|v| v.to_string()).unwrap_or_default();
        w.write_record([
            "command",
            "name",
            "computed_re",
            "computed_im",
            "claimed_re",
            "claimed_im",
            "abs_err",
            "rel_err",
            "tolerance",
            "pass",
        ])
        .expect("in-memory write");
        for e in &self.results {
            let (cre, cim) = e.computed.parts();
            let claimed = e.claimed.map(Quantity::parts);
            w.write_record([
                self.command.clone(),
                e.name.clone(),
                cre.to_string(),
                cim.to_string(),
                opt(claimed.map(|c| c.0)),
                opt(claimed.map(|c| c.1)),
                opt(e.abs_err),
                opt(e.rel_err),
                opt(e.tolerance),
                e.pass.map(|p| p.to_string()).unwrap_or_default(),
            ])
            .expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("flush")).expect("csv is utf-8")
    }
}

fn as_map<S: Serializer>(pairs: &[(String, String)], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_map(pairs.iter().map(|(k, v)| (k, v)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Human,
    Json,
    Csv,
}

impl std::str::FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "human" | "table" => Ok(Format::Human),
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            other => Err(format!(
                "unknown format '{other}' (expected human, json or csv)"
            )),
        }
    }
}
