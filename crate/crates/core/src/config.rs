//! Scenario files: TOML with one table per pipeline stage.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::essential::SearchOptions;
use crate::profiles::{CurvatureProfile, DepthProfile};
use crate::strip2d::{CutBc, DetectionTolerances, SolveOptions};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DepthConfig {
    pub family: String,
    #[serde(default)]
    pub params: Vec<f64>,
    pub delta: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurvatureConfig {
    pub family: String,
    #[serde(default)]
    pub params: Vec<f64>,
    #[serde(rename = "R")]
    pub r: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransversalConfig {
    #[serde(default = "default_transversal_n")]
    pub n: usize,
}

fn default_transversal_n() -> usize {
    1024
}

impl Default for TransversalConfig {
    fn default() -> Self {
        Self { n: default_transversal_n() }
    }
}

/// Unset fields fall back to `SearchOptions::for_width(delta)`.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SearchConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha_lo: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha_hi: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coarse_n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
}

impl SearchConfig {
    pub fn resolve(&self, delta: f64) -> SearchOptions {
        let d = SearchOptions::for_width(delta);
        SearchOptions {
            alpha_lo: self.alpha_lo.unwrap_or(d.alpha_lo),
            alpha_hi: self.alpha_hi.unwrap_or(d.alpha_hi),
            coarse_n: self.coarse_n.unwrap_or(d.coarse_n),
            tol: self.tol.unwrap_or(d.tol),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Strip2dConfig {
    /// Truncation half-length; `8 R` when unset.
    #[serde(rename = "L", skip_serializing_if = "Option::is_none")]
    pub l: Option<f64>,
    pub m: usize,
    pub n: usize,
    #[serde(default = "default_cut")]
    pub cut_bc: CutBc,
    #[serde(default = "default_k")]
    pub k: usize,
    /// Repeat the solve on `[-2L, 2L]` with the same spacing.
    #[serde(default = "default_true")]
    pub stability_solve: bool,
    #[serde(default = "default_rel_gap")]
    pub rel_gap: f64,
    #[serde(default = "default_loc")]
    pub loc_threshold: f64,
    #[serde(default = "default_trunc")]
    pub trunc_rel: f64,
    #[serde(default = "default_solver_tol")]
    pub tol: f64,
}

fn default_cut() -> CutBc {
    CutBc::Neumann
}
fn default_k() -> usize {
    4
}
fn default_true() -> bool {
    true
}
fn default_rel_gap() -> f64 {
    DetectionTolerances::default().rel_gap
}
fn default_loc() -> f64 {
    DetectionTolerances::default().loc_threshold
}
fn default_trunc() -> f64 {
    DetectionTolerances::default().trunc_rel
}
fn default_solver_tol() -> f64 {
    SolveOptions::default().tol
}

impl Strip2dConfig {
    pub fn half_length(&self, r: f64) -> f64 {
        self.l.unwrap_or(8.0 * r)
    }

    pub fn tolerances(&self) -> DetectionTolerances {
        DetectionTolerances { rel_gap: self.rel_gap, loc_threshold: self.loc_threshold, trunc_rel: self.trunc_rel }
    }

    pub fn solve_options(&self) -> SolveOptions {
        SolveOptions { tol: self.tol, ..SolveOptions::new(self.k) }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    #[serde(default = "default_dir")]
    pub dir: String,
    #[serde(default = "default_formats")]
    pub formats: Vec<String>,
}

fn default_dir() -> String {
    "out".into()
}
fn default_formats() -> Vec<String> {
    vec!["json".into(), "csv".into()]
}

impl Default for OutputConfig {
    fn default() -> Self {
        Self { dir: default_dir(), formats: default_formats() }
    }
}

impl OutputConfig {
    pub fn wants(&self, format: &str) -> bool {
        self.formats.iter().any(|f| f == format)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub depth: DepthConfig,
    pub curvature: CurvatureConfig,
    #[serde(default)]
    pub transversal: TransversalConfig,
    #[serde(default)]
    pub search: SearchConfig,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub strip2d: Option<Strip2dConfig>,
    #[serde(default)]
    pub outputs: OutputConfig,
}

impl ScenarioConfig {
    /// Parses and validates a scenario.
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Io(std::io::Error::new(e.kind(), format!("cannot read {}: {e}", path.display()))))?;
        Self::from_toml_str(&text)
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("scenario serializes to TOML")
    }

    pub fn depth_profile(&self) -> Result<DepthProfile> {
        DepthProfile::new(&self.depth.family, &self.depth.params, self.depth.delta)
    }

    pub fn curvature_profile(&self) -> Result<CurvatureProfile> {
        CurvatureProfile::new(&self.curvature.family, &self.curvature.params, self.curvature.r)
    }

    pub fn search_options(&self) -> SearchOptions {
        self.search.resolve(self.depth.delta)
    }

    /// Checks every field and reports all problems at once.
    pub fn validate(&self) -> Result<()> {
        let mut issues = Vec::new();
        if let Err(e) = self.depth_profile() {
            issues.push(format!("depth: {e}"));
        }
        let curvature = self.curvature_profile();
        if let Err(e) = &curvature {
            issues.push(format!("curvature: {e}"));
        }
        if let Ok(c) = &curvature {
            let a = c.safety_margin(self.depth.delta);
            if a >= 1.0 {
                issues.push(format!("curvature: safety margin A = delta * max|gamma| = {a} must be < 1"));
            }
        }
        if self.transversal.n < 8 {
            issues.push(format!("transversal.n: need at least 8 cells, got {}", self.transversal.n));
        }
        let s = self.search_options();
        if !(s.alpha_lo > 0.0 && s.alpha_hi > s.alpha_lo) {
            issues.push(format!("search: need 0 < alpha_lo < alpha_hi, got [{}, {}]", s.alpha_lo, s.alpha_hi));
        }
        if s.coarse_n < 3 {
            issues.push(format!("search.coarse_n: need at least 3 points, got {}", s.coarse_n));
        }
        if !(s.tol > 0.0) {
            issues.push(format!("search.tol: must be > 0, got {}", s.tol));
        }
        if let Some(st) = &self.strip2d {
            let l = st.half_length(self.curvature.r);
            if !(l > self.curvature.r) {
                issues.push(format!("strip2d.L: must exceed R = {}, got {l}", self.curvature.r));
            }
            if st.m < 8 || st.n < 8 {
                issues.push(format!("strip2d.m, strip2d.n: need at least 8 cells, got {} x {}", st.m, st.n));
            }
            if st.k == 0 {
                issues.push("strip2d.k: need at least one eigenvalue".into());
            }
            if !(st.rel_gap >= 0.0) {
                issues.push(format!("strip2d.rel_gap: must be >= 0, got {}", st.rel_gap));
            }
            if !(0.0..=1.0).contains(&st.loc_threshold) {
                issues.push(format!("strip2d.loc_threshold: must lie in [0, 1], got {}", st.loc_threshold));
            }
            if !(st.trunc_rel > 0.0) {
                issues.push(format!("strip2d.trunc_rel: must be > 0, got {}", st.trunc_rel));
            }
            if !(st.tol > 0.0 && st.tol < 1.0) {
                issues.push(format!("strip2d.tol: must lie in (0, 1), got {}", st.tol));
            }
        }
        for f in &self.outputs.formats {
            if f != "json" && f != "csv" {
                issues.push(format!("outputs.formats: unknown format `{f}` (json, csv)"));
            }
        }
        if issues.is_empty() {
            Ok(())
        } else {
            Err(Error::Config(issues.join("; ")))
        }
    }

    /// Copy with the scalar at `path` (`section.key` or `section.key[i]`)
    /// replaced by `value`.
    pub fn with_override(&self, path: &str, value: f64) -> Result<Self> {
        let root = toml::Value::try_from(self).map_err(|e| Error::Config(e.to_string()))?;
        let mut last_err = None;
        for candidate in [toml::Value::Float(value), toml::Value::Integer(value as i64)] {
            if matches!(candidate, toml::Value::Integer(_)) && value.fract() != 0.0 {
                continue;
            }
            let mut v = root.clone();
            set_path(&mut v, path, candidate)?;
            match v.try_into::<ScenarioConfig>() {
                Ok(cfg) => {
                    cfg.validate()?;
                    return Ok(cfg);
                }
                Err(e) => last_err = Some(e.to_string()),
            }
        }
        Err(Error::Config(format!("cannot set `{path}` to {value}: {}", last_err.unwrap_or_default())))
    }
}

fn set_path(root: &mut toml::Value, path: &str, value: toml::Value) -> Result<()> {
    let bad = |why: &str| Error::Config(format!("sweep path `{path}`: {why}"));
    let parts: Vec<&str> = path.split('.').collect();
    if parts.len() != 2 {
        return Err(bad("expected `section.key` or `section.key[i]`"));
    }
    let section = root
        .get_mut(parts[0])
        .and_then(|s| s.as_table_mut())
        .ok_or_else(|| bad("no such section"))?;
    let (key, index) = match parts[1].split_once('[') {
        Some((k, rest)) => {
            let i = rest.strip_suffix(']').and_then(|s| s.parse::<usize>().ok()).ok_or_else(|| bad("bad index"))?;
            (k, Some(i))
        }
        None => (parts[1], None),
    };
    match index {
        None => {
            if let Some(old) = section.get(key) {
                if old.is_table() || old.is_array() {
                    return Err(bad("does not address a scalar"));
                }
            }
            section.insert(key.to_string(), value);
        }
        Some(i) => {
            let arr = section.get_mut(key).and_then(|a| a.as_array_mut()).ok_or_else(|| bad("not an array"))?;
            let slot = arr.get_mut(i).ok_or_else(|| bad("index out of range"))?;
            *slot = match value {
                toml::Value::Integer(k) => toml::Value::Float(k as f64),
                v => v,
            };
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    const REFERENCE: &str = r#"
[depth]
family = "log-depth"
params = [1.0]
delta = 1.0

[curvature]
family = "bump"
params = [0.4]
R = 2.0

[strip2d]
m = 768
n = 64
"#;

    #[test]
    fn defaults_fill_in() {
        let c = ScenarioConfig::from_toml_str(REFERENCE).unwrap();
        let s = c.strip2d.as_ref().unwrap();
        assert_eq!(s.half_length(2.0), 16.0);
        assert_eq!(s.cut_bc, CutBc::Neumann);
        assert_eq!(c.transversal.n, 1024);
        assert_eq!(c.outputs.formats, ["json", "csv"]);
        assert_eq!(c.search_options(), SearchOptions::for_width(1.0));
    }

    #[test]
    fn round_trip() {
        let c = ScenarioConfig::from_toml_str(REFERENCE).unwrap();
        assert_eq!(ScenarioConfig::from_toml_str(&c.to_toml_string()).unwrap(), c);
    }

    #[test]
    fn overrides() {
        let c = ScenarioConfig::from_toml_str(REFERENCE).unwrap();
        let d = c.with_override("curvature.params[0]", 0.2).unwrap();
        assert_eq!(d.curvature.params, [0.2]);
        let d = c.with_override("strip2d.L", 32.0).unwrap();
        assert_eq!(d.strip2d.unwrap().l, Some(32.0));
        let d = c.with_override("strip2d.m", 1536.0).unwrap();
        assert_eq!(d.strip2d.unwrap().m, 1536);
        assert!(c.with_override("strip2d.m", 10.5).is_err());
        assert!(c.with_override("nope.x", 1.0).is_err());
        assert!(c.with_override("depth.params", 1.0).is_err());
        assert!(c.with_override("curvature.typo", 1.0).is_err());
    }

    #[test]
    fn diagnostics_name_fields() {
        let bad = REFERENCE.replace("R = 2.0", "R = 2.0\nextra = 1").replace("m = 768", "m = 4");
        assert!(ScenarioConfig::from_toml_str(&bad).is_err());
        let bad = REFERENCE.replace("m = 768", "m = 4").replace("family = \"bump\"", "family = \"wiggle\"");
        let msg = ScenarioConfig::from_toml_str(&bad).unwrap_err().to_string();
        assert!(msg.contains("strip2d.m") && msg.contains("curvature"), "{msg}");
    }
}
