use serde::{Deserialize, Serialize};

use super::assembly::{assemble_pencil_2d, CutBc};
use super::mesh::StripMesh2D;
use super::solve::{solve_top_spectrum, SolveOptions, SpectrumResult2D};
use crate::error::Result;
use crate::essential::EssentialBand;
use crate::profiles::DepthProfile;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DetectionTolerances {
    pub rel_gap: f64,
    pub loc_threshold: f64,
    pub trunc_rel: f64,
}

impl Default for DetectionTolerances {
    fn default() -> Self {
        Self { rel_gap: 1e-3, loc_threshold: 0.9, trunc_rel: 0.05 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrappedCandidate {
    /// Position in the descending eigenvalue list.
    pub index: usize,
    pub omega: f64,
    /// `omega - Omega*`.
    pub gap: f64,
    /// `(omega - Omega*) / Omega*`.
    pub rel_gap: f64,
    pub localization: f64,
    pub truncation_gap: Option<f64>,
}

/// Ritz pairs above the band edge that are localized near the bend and, when
/// a doubled-domain solve is attached, stable under truncation.
pub fn detect_trapped_modes(
    result: &SpectrumResult2D,
    band: &EssentialBand,
    tol: &DetectionTolerances,
) -> Vec<TrappedCandidate> {
    let os = band.omega_star;
    result
        .top
        .iter()
        .enumerate()
        .filter_map(|(index, m)| {
            let trunc = result.truncation_gap.as_ref().and_then(|t| t.get(index).copied());
            let ok = m.omega > os * (1.0 + tol.rel_gap)
                && m.localization >= tol.loc_threshold
                && trunc.is_none_or(|t| t <= tol.trunc_rel);
            ok.then(|| TrappedCandidate {
                index,
                omega: m.omega,
                gap: m.omega - os,
                rel_gap: (m.omega - os) / os,
                localization: m.localization,
                truncation_gap: trunc,
            })
        })
        .collect()
}

/// Top eigenvalue of the same mesh with Dirichlet and with Neumann cuts.
pub fn bracketing_check(mesh: &StripMesh2D, d: &DepthProfile, opts: &SolveOptions) -> Result<(f64, f64)> {
    let o = SolveOptions { k: 1, both_ends: false, ..*opts };
    let solve = |cut| solve_top_spectrum(&assemble_pencil_2d(mesh, d, cut), &o).map(|r| r.omega_top());
    let (dir, neu) = rayon::join(|| solve(CutBc::Dirichlet), || solve(CutBc::Neumann));
    Ok((dir?, neu?))
}
