//! Scenario pipeline: band edge, trapping criterion, two-dimensional solve.

use std::collections::BTreeMap;
use std::fs::{self, File};
use std::io::BufWriter;
use std::path::{Path, PathBuf};
use std::time::Instant;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::config::ScenarioConfig;
use crate::error::{Error, Result};
use crate::essential::{dispersion_curve, find_omega_star, logspace, verify_mode_ode, DispersionCurve, EdgeSource};
use crate::profiles::validate_theorem_hypotheses;
use crate::report::{
    fmt_f64, to_json, write_csv, BandSummary, ModeSummary, RunReport, Strip2dSummary, ToolInfo, SCHEMA_VERSION,
};
use crate::strip2d::{
    assemble_pencil_2d, build_mesh, detect_trapped_modes, embed_mesh, solve_top_spectrum, StripMesh2D,
};
use crate::transversal::{drift_ratio, TransversalGrid};
use crate::trapping::evaluate_criterion;

const DISPERSION_POINTS: usize = 200;

/// Field data kept for export after a run.
#[derive(Debug, Clone)]
pub struct ModeFields {
    pub mesh: StripMesh2D,
    /// Nodal values on the `(m + 1) x (n + 1)` grid, `xi`-major.
    pub fields: Vec<Vec<Complex64>>,
}

#[derive(Debug, Clone)]
pub struct ScenarioOutcome {
    pub report: RunReport,
    pub dispersion: DispersionCurve,
    pub modes: Option<ModeFields>,
}

fn mode_file(index: usize) -> String {
    format!("mode_{index}.csv")
}

/// Runs every stage of a scenario without touching the file system.
pub fn compute_scenario(cfg: &ScenarioConfig) -> Result<ScenarioOutcome> {
    let total = Instant::now();
    let mut timings = BTreeMap::new();
    let mut warnings = Vec::new();
    let d = cfg.depth_profile()?;
    let c = cfg.curvature_profile()?;
    let hyp = validate_theorem_hypotheses(&d, 512)?;
    if !hyp.monotone {
        return Err(Error::Hypothesis(format!(
            "depth must increase offshore (beta' > 0 on [0, delta]); min beta' = {:e}",
            hyp.min_beta_prime
        )));
    }
    let search = cfg.search_options();

    let t = Instant::now();
    let grid = TransversalGrid::new(cfg.transversal.n, d.delta())?;
    let band = find_omega_star(&d, &grid, &search)?;
    let ode_residual = verify_mode_ode(&band, &d, &grid)?;
    let dispersion = dispersion_curve(&d, &grid, &logspace(search.alpha_lo, search.alpha_hi, DISPERSION_POINTS))?;
    timings.insert("band".to_string(), t.elapsed().as_secs_f64());
    if band.source == EdgeSource::Scan {
        warnings.push("fixed-point iteration fell short of the scan maximum; edge taken from the scan".into());
    }

    let t = Instant::now();
    let trapping = evaluate_criterion(&band, &d, &c)?;
    timings.insert("criterion".to_string(), t.elapsed().as_secs_f64());
    warnings.extend(trapping.warnings.iter().cloned());

    let mut strip = None;
    let mut candidates = Vec::new();
    let mut gap = None;
    let mut modes = None;
    if let Some(st) = &cfg.strip2d {
        let t = Instant::now();
        let l = st.half_length(c.support_radius());
        let opts = st.solve_options();
        let shared = find_omega_star(&d, &TransversalGrid::new(st.n, d.delta())?, &search)?;
        let mesh = build_mesh(&c, &d, l, st.m, st.n)?;
        let forms = assemble_pencil_2d(&mesh, &d, st.cut_bc);
        let mut result = solve_top_spectrum(&forms, &opts)?;
        result.omega_star_ref = Some(shared.omega_star);
        timings.insert("strip2d".to_string(), t.elapsed().as_secs_f64());

        let mut doubled_eigenvalues = None;
        if st.stability_solve {
            let t = Instant::now();
            let mesh2 = build_mesh(&c, &d, 2.0 * l, 2 * st.m, st.n)?;
            let forms2 = assemble_pencil_2d(&mesh2, &d, st.cut_bc);
            let o2 = crate::strip2d::SolveOptions { both_ends: false, ..opts };
            let doubled = solve_top_spectrum(&forms2, &o2)?;
            result.attach_truncation(&doubled);
            doubled_eigenvalues = Some(doubled.eigenvalues());
            timings.insert("stability".to_string(), t.elapsed().as_secs_f64());
        }
        candidates = detect_trapped_modes(&result, &shared, &st.tolerances());
        gap = Some(result.omega_top() - shared.omega_star);
        let csv = cfg.outputs.wants("csv");
        strip = Some(Strip2dSummary {
            l,
            m: st.m,
            n: st.n,
            cut_bc: st.cut_bc,
            dim: result.dim,
            omega_star_shared: shared.omega_star,
            eigenvalues: result.eigenvalues(),
            bottom_eigenvalues: result.bottom_eigenvalues(),
            conjugation_defect: result.conjugation_defect(),
            shift: result.shift_top,
            modes: result
                .top
                .iter()
                .enumerate()
                .map(|(i, m)| ModeSummary {
                    index: i + 1,
                    omega: m.omega,
                    localization: m.localization,
                    residual: m.residual,
                    file: csv.then(|| mode_file(i + 1)),
                })
                .collect(),
            doubled_eigenvalues,
            truncation_gap: result.truncation_gap.clone(),
        });
        modes = Some(ModeFields { fields: result.top.iter().map(|m| forms.nodal_field(&m.vector)).collect(), mesh });
    }
    timings.insert("total".to_string(), total.elapsed().as_secs_f64());

    let report = RunReport {
        schema_version: SCHEMA_VERSION,
        tool: ToolInfo::default(),
        config: cfg.clone(),
        band: BandSummary {
            n: grid.n(),
            omega_star: band.omega_star,
            alpha_crit: band.alpha_crit,
            lambda_star: band.lambda_star,
            source: band.source,
            scan: band.scan,
            fixed_point: band.fixed_point,
            ode_residual,
            q: drift_ratio(&d, &grid),
        },
        trapping,
        strip2d: strip,
        candidates,
        gap,
        warnings,
        timings,
    };
    Ok(ScenarioOutcome { report, dispersion, modes })
}

/// Writes `report.json`, `dispersion.csv` and one `mode_k.csv` per Ritz pair.
pub fn write_artifacts(outcome: &ScenarioOutcome, dir: &Path) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let outputs = &outcome.report.config.outputs;
    let mut written = Vec::new();
    if outputs.wants("json") {
        let p = dir.join("report.json");
        fs::write(&p, to_json(&outcome.report))?;
        written.push(p);
    }
    if outputs.wants("csv") {
        let p = dir.join("dispersion.csv");
        let rows = outcome
            .dispersion
            .samples
            .iter()
            .map(|s| vec![fmt_f64(s.alpha), fmt_f64(s.omega), fmt_f64(s.bound)]);
        write_csv(BufWriter::new(File::create(&p)?), &["alpha", "omega", "bound"], rows)?;
        written.push(p);
        if let Some(m) = &outcome.modes {
            let emb = embed_mesh(&m.mesh, 0.0);
            let (nm, nn) = (m.mesh.m, m.mesh.n);
            for (k, field) in m.fields.iter().enumerate() {
                let p = dir.join(mode_file(k + 1));
                let rows = (0..=nm).flat_map(|i| (0..=nn).map(move |j| (i, j))).map(|(i, j)| {
                    let q = i * (nn + 1) + j;
                    let z = field[q];
                    vec![
                        fmt_f64(m.mesh.xi(i)),
                        fmt_f64(m.mesh.eta(j)),
                        fmt_f64(emb.x[q]),
                        fmt_f64(emb.y[q]),
                        fmt_f64(z.re),
                        fmt_f64(z.im),
                        fmt_f64(z.norm()),
                    ]
                });
                write_csv(BufWriter::new(File::create(&p)?), &["xi", "eta", "x", "y", "re", "im", "abs"], rows)?;
                written.push(p);
            }
        }
    }
    Ok(written)
}

pub fn run_scenario(cfg: &ScenarioConfig, dir: &Path) -> Result<RunReport> {
    let outcome = compute_scenario(cfg)?;
    let files = write_artifacts(&outcome, dir)?;
    for f in &files {
        log::info!("wrote {}", f.display());
    }
    Ok(outcome.report)
}

/// One line of `sweep.csv`.
#[derive(Debug, Clone)]
pub struct SweepRow {
    pub value: f64,
    pub outcome: std::result::Result<RunReport, String>,
}

impl SweepRow {
    pub fn is_ok(&self) -> bool {
        self.outcome.is_ok()
    }
}

pub const SWEEP_HEADER: [&str; 12] = [
    "value",
    "status",
    "omega_star",
    "C_beta",
    "verdict_integral",
    "verdict_pointwise",
    "omega_top",
    "gap",
    "rel_gap",
    "candidates",
    "truncation_gap",
    "message",
];

impl SweepRow {
    pub fn fields(&self) -> Vec<String> {
        let blank = String::new;
        match &self.outcome {
            Ok(r) => {
                let top = r.strip2d.as_ref().and_then(|s| s.eigenvalues.first().copied());
                let shared = r.strip2d.as_ref().map(|s| s.omega_star_shared);
                let trunc = r.strip2d.as_ref().and_then(|s| s.truncation_gap.as_ref()).and_then(|t| t.first().copied());
                vec![
                    fmt_f64(self.value),
                    "ok".into(),
                    fmt_f64(r.band.omega_star),
                    fmt_f64(r.trapping.c_beta),
                    r.trapping.verdict_integral.as_str().into(),
                    r.trapping.verdict_pointwise.as_str().into(),
                    top.map_or_else(blank, fmt_f64),
                    r.gap.map_or_else(blank, fmt_f64),
                    r.gap.zip(shared).map_or_else(blank, |(g, s)| fmt_f64(g / s)),
                    r.candidates.len().to_string(),
                    trunc.map_or_else(blank, fmt_f64),
                    String::new(),
                ]
            }
            Err(msg) => {
                let mut v = vec![fmt_f64(self.value), "error".into()];
                v.extend(std::iter::repeat_n(String::new(), 9));
                v.push(format!("\"{}\"", msg.replace('"', "'")));
                v
            }
        }
    }
}

/// Runs the scenario once per value of the parameter at `path`, at most
/// `jobs` rows at a time. Rows keep the order of `values`.
pub fn run_sweep(cfg: &ScenarioConfig, path: &str, values: &[f64], jobs: usize) -> Result<Vec<SweepRow>> {
    let configs = values.iter().map(|&v| cfg.with_override(path, v)).collect::<Result<Vec<_>>>()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| Error::Config(format!("cannot start {jobs} workers: {e}")))?;
    let rows = pool.install(|| {
        configs
            .par_iter()
            .zip(values)
            .map(|(c, &value)| SweepRow {
                value,
                outcome: compute_scenario(c).map(|o| o.report).map_err(|e| e.to_string()),
            })
            .collect()
    });
    Ok(rows)
}

pub fn write_sweep_csv(rows: &[SweepRow], path: &Path) -> Result<()> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir)?;
    }
    write_csv(BufWriter::new(File::create(path)?), &SWEEP_HEADER, rows.iter().map(SweepRow::fields))?;
    Ok(())
}
