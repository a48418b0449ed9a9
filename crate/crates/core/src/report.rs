//! Report schema and writers for JSON and CSV artifacts.

use std::collections::BTreeMap;
use std::io::{self, Write};

use serde::{Deserialize, Serialize};
use serde_json::ser::{Formatter, PrettyFormatter};

use crate::config::ScenarioConfig;
use crate::essential::{EdgeCandidate, EdgeSource, FixedPointRun};
use crate::strip2d::{CutBc, TrappedCandidate};
use crate::trapping::TrappingReport;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ToolInfo {
    pub name: String,
    pub version: String,
}

impl Default for ToolInfo {
    fn default() -> Self {
        Self { name: env!("CARGO_PKG_NAME").into(), version: env!("CARGO_PKG_VERSION").into() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BandSummary {
    pub n: usize,
    pub omega_star: f64,
    pub alpha_crit: f64,
    pub lambda_star: f64,
    pub source: EdgeSource,
    pub scan: EdgeCandidate,
    pub fixed_point: FixedPointRun,
    /// Discrete residual of the edge-mode equation.
    pub ode_residual: f64,
    /// Drift ratio used by the dispersion bound.
    pub q: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModeSummary {
    pub index: usize,
    pub omega: f64,
    pub localization: f64,
    pub residual: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub file: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Strip2dSummary {
    #[serde(rename = "L")]
    pub l: f64,
    pub m: usize,
    pub n: usize,
    pub cut_bc: CutBc,
    pub dim: usize,
    /// Band edge on the `eta` grid of the mesh, used for detection.
    pub omega_star_shared: f64,
    pub eigenvalues: Vec<f64>,
    pub bottom_eigenvalues: Vec<f64>,
    pub conjugation_defect: Option<f64>,
    pub shift: f64,
    pub modes: Vec<ModeSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub doubled_eigenvalues: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub truncation_gap: Option<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub schema_version: u32,
    pub tool: ToolInfo,
    pub config: ScenarioConfig,
    pub band: BandSummary,
    pub trapping: TrappingReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub strip2d: Option<Strip2dSummary>,
    pub candidates: Vec<TrappedCandidate>,
    /// `omega_1 - Omega*` for the top Ritz value.
    pub gap: Option<f64>,
    pub warnings: Vec<String>,
    /// Wall-clock seconds per stage; excluded from reproducibility checks.
    pub timings: BTreeMap<String, f64>,
}

/// `{:.16e}` for finite floats, `nan` otherwise.
pub fn fmt_f64(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        "nan".into()
    }
}

/// Pretty JSON with every float printed to 17 significant digits.
struct SciFormatter<'a>(PrettyFormatter<'a>);

impl Formatter for SciFormatter<'_> {
    fn write_f64<W: ?Sized + Write>(&mut self, w: &mut W, value: f64) -> io::Result<()> {
        if value.is_finite() {
            write!(w, "{value:.16e}")
        } else {
            w.write_all(b"null")
        }
    }
    fn begin_array<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_array(w)
    }
    fn end_array<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array(w)
    }
    fn begin_array_value<W: ?Sized + Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_array_value(w, first)
    }
    fn end_array_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array_value(w)
    }
    fn begin_object<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object(w)
    }
    fn end_object<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object(w)
    }
    fn begin_object_key<W: ?Sized + Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_object_key(w, first)
    }
    fn begin_object_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object_value(w)
    }
    fn end_object_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object_value(w)
    }
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, SciFormatter(PrettyFormatter::new()));
    value.serialize(&mut ser).expect("report serializes to JSON");
    buf.push(b'\n');
    String::from_utf8(buf).expect("JSON is UTF-8")
}

/// CSV with a header row; floats through [`fmt_f64`].
pub fn write_csv<W: Write>(mut w: W, header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> io::Result<()> {
    writeln!(w, "{}", header.join(","))?;
    for r in rows {
        writeln!(w, "{}", r.join(","))?;
    }
    w.flush()
}
