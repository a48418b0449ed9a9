//! Dispersion curve `alpha -> omega_alpha` and the band edge `Omega*`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::profiles::{golden_max, DepthProfile};
use crate::transversal::{
    assemble_transversal_forms, dispersion_upper_bound, drift_ratio, optimal_alpha, solve_transversal,
    TransversalForms, TransversalGrid, TransversalMode,
};

const FIXED_POINT_CAP: usize = 64;
const FIXED_POINT_TOL: f64 = 1e-10;
/// Eigenvalue round-off tolerated when comparing the fixed point with the scan.
const FIXED_POINT_SLACK: f64 = 1e-9;

/// One point of the dispersion curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DispersionSample {
    pub alpha: f64,
    pub omega: f64,
    /// Analytic upper bound at `alpha`.
    pub bound: f64,
    /// `bound - omega`.
    pub gap: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DispersionCurve {
    pub samples: Vec<DispersionSample>,
    /// Ratio `q` used by the bound.
    pub q: f64,
}

/// Top transversal eigenvalue at each `alpha` together with the analytic bound.
pub fn dispersion_curve(d: &DepthProfile, grid: &TransversalGrid, alphas: &[f64]) -> Result<DispersionCurve> {
    if alphas.iter().any(|a| !(a.is_finite() && *a > 0.0)) {
        return Err(Error::Precondition("dispersion wavenumbers must be positive".into()));
    }
    if alphas.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Precondition("dispersion wavenumbers must be strictly increasing".into()));
    }
    let forms = assemble_transversal_forms(grid, d);
    let q = drift_ratio(d, grid);
    let samples = alphas
        .par_iter()
        .map(|&alpha| {
            let omega = solve_transversal(&forms, alpha, 1)?[0].omega;
            let bound = dispersion_upper_bound(q, grid.delta(), alpha);
            Ok(DispersionSample { alpha, omega, bound, gap: bound - omega })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(DispersionCurve { samples, q })
}

/// `count` log-spaced values from `lo` to `hi` inclusive.
pub fn logspace(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    if count == 1 {
        return vec![lo];
    }
    let (a, b) = (lo.ln(), hi.ln());
    (0..count)
        .map(|i| {
            if i == 0 {
                lo
            } else if i + 1 == count {
                hi
            } else {
                (a + (b - a) * i as f64 / (count - 1) as f64).exp()
            }
        })
        .collect()
}

/// Bracket and resolution of the band-edge search.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SearchOptions {
    pub alpha_lo: f64,
    pub alpha_hi: f64,
    pub coarse_n: usize,
    pub tol: f64,
}

impl SearchOptions {
    /// `[1e-2, 1e3] / delta`, 48 coarse points, relative width `1e-8`.
    pub fn for_width(delta: f64) -> Self {
        Self { alpha_lo: 1e-2 / delta, alpha_hi: 1e3 / delta, coarse_n: 48, tol: 1e-8 }
    }
}

/// A candidate maximizer of the dispersion curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EdgeCandidate {
    pub alpha: f64,
    pub omega: f64,
}

/// Outcome of the iteration `alpha <- sqrt(J2 / J1)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FixedPointRun {
    pub alpha: f64,
    pub omega: f64,
    pub iterations: usize,
    pub converged: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EdgeSource {
    FixedPoint,
    Scan,
}

/// Upper edge of the essential band and its transversal eigenfunction.
#[derive(Debug, Clone, PartialEq)]
pub struct EssentialBand {
    pub omega_star: f64,
    pub alpha_crit: f64,
    /// `1 / Omega*`.
    pub lambda_star: f64,
    /// Edge eigenvector on the grid, `phi^T W phi = 1`.
    pub phi_star: TransversalMode,
    pub grid: TransversalGrid,
    pub scan: EdgeCandidate,
    pub fixed_point: FixedPointRun,
    pub source: EdgeSource,
}

impl EssentialBand {
    /// `[-Omega*, Omega*]`.
    pub fn band(&self) -> (f64, f64) {
        (-self.omega_star, self.omega_star)
    }

    /// Nodal values of `phi*`.
    pub fn phi(&self) -> &[f64] {
        &self.phi_star.phi
    }
}

fn top_mode(forms: &TransversalForms, alpha: f64) -> Result<TransversalMode> {
    Ok(solve_transversal(forms, alpha, 1)?.swap_remove(0))
}

/// Coarse log scan, golden-section refinement and the fixed-point iteration.
pub fn find_omega_star(d: &DepthProfile, grid: &TransversalGrid, search: &SearchOptions) -> Result<EssentialBand> {
    let SearchOptions { alpha_lo: lo, alpha_hi: hi, coarse_n, tol } = *search;
    if !(lo > 0.0 && hi > lo && tol > 0.0) || coarse_n < 3 {
        return Err(Error::Precondition(format!(
            "search needs 0 < alpha_lo < alpha_hi, tol > 0 and coarse_n >= 3 (got [{lo}, {hi}], {coarse_n}, {tol})"
        )));
    }
    let forms = assemble_transversal_forms(grid, d);
    if forms.b.is_zero() {
        return Err(Error::NoPositiveEdge);
    }
    let alphas = logspace(lo, hi, coarse_n);
    let omegas = alphas
        .par_iter()
        .map(|&a| top_mode(&forms, a).map(|m| m.omega))
        .collect::<Result<Vec<_>>>()?;
    let (imax, &wmax) = omegas
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .expect("coarse scan is non-empty");
    if !(wmax > 0.0) {
        return Err(Error::NoPositiveEdge);
    }
    if imax == 0 || imax == coarse_n - 1 {
        return Err(Error::BoundaryHit { alpha: alphas[imax], lo, hi });
    }

    let omega_at = |log_a: f64| top_mode(&forms, log_a.exp()).map(|m| m.omega).unwrap_or(f64::NEG_INFINITY);
    let (a, b) = (alphas[imax - 1].ln(), alphas[imax + 1].ln());
    let log_best = golden_max(omega_at, a, b, tol);
    let scan_alpha = log_best.exp();
    let scan = EdgeCandidate { alpha: scan_alpha, omega: top_mode(&forms, scan_alpha)?.omega };

    let mut alpha = scan.alpha;
    let mut mode = top_mode(&forms, alpha)?;
    let mut iterations = 0;
    let mut converged = false;
    while iterations < FIXED_POINT_CAP {
        iterations += 1;
        let next = optimal_alpha(&mode.phi, &forms)?;
        if !next.is_finite() || next <= 0.0 {
            break;
        }
        let step = (next - alpha).abs();
        alpha = next;
        mode = top_mode(&forms, alpha)?;
        if step <= FIXED_POINT_TOL * alpha {
            converged = true;
            break;
        }
    }
    let fixed_point = FixedPointRun { alpha, omega: mode.omega, iterations, converged };

    let use_fixed = converged && fixed_point.omega >= scan.omega * (1.0 - FIXED_POINT_SLACK);
    if !converged {
        log::warn!("fixed-point wavenumber iteration did not converge in {iterations} steps; using the scan result");
    }
    let (source, phi_star) = if use_fixed {
        (EdgeSource::FixedPoint, mode)
    } else {
        (EdgeSource::Scan, top_mode(&forms, scan.alpha)?)
    };
    let alpha_crit = phi_star.alpha;
    if alpha_crit <= lo * (1.0 + tol) || alpha_crit >= hi * (1.0 - tol) {
        return Err(Error::BoundaryHit { alpha: alpha_crit, lo, hi });
    }
    Ok(EssentialBand {
        omega_star: phi_star.omega,
        alpha_crit,
        lambda_star: 1.0 / phi_star.omega,
        phi_star,
        grid: *grid,
        scan,
        fixed_point,
        source,
    })
}

/// Weighted discrete norm of the residual of
/// `phi'' = beta' phi' + (alpha^2 - Lambda alpha beta') phi`
/// at interior nodes, plus the defects `|phi(0)|` and `|phi'(delta)|`.
pub fn verify_mode_ode(band: &EssentialBand, d: &DepthProfile, grid: &TransversalGrid) -> Result<f64> {
    let phi = band.phi();
    if phi.len() != grid.n() + 1 {
        return Err(Error::Precondition(format!(
            "band was computed on {} cells, grid has {}",
            phi.len() - 1,
            grid.n()
        )));
    }
    let n = grid.n();
    let h = grid.h();
    let (alpha, lambda) = (band.alpha_crit, band.lambda_star);
    let mut sum = 0.0;
    for i in 1..n {
        let (beta, bp, _) = d.derivatives(grid.node(i));
        let d2 = (phi[i + 1] - 2.0 * phi[i] + phi[i - 1]) / (h * h);
        let d1 = (phi[i + 1] - phi[i - 1]) / (2.0 * h);
        let r = d2 - bp * d1 - (alpha * alpha - lambda * alpha * bp) * phi[i];
        sum += h * (-beta).exp() * r * r;
    }
    let slope_end = (3.0 * phi[n] - 4.0 * phi[n - 1] + phi[n - 2]) / (2.0 * h);
    Ok(sum.sqrt() + phi[0].abs() + slope_end.abs())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn reference() -> (DepthProfile, TransversalGrid) {
        (DepthProfile::new("log-depth", &[1.0], 1.0).unwrap(), TransversalGrid::new(256, 1.0).unwrap())
    }

    #[test]
    fn flat_bottom_has_no_edge() {
        let d = DepthProfile::new("linear", &[0.0], 1.0).unwrap();
        let g = TransversalGrid::new(32, 1.0).unwrap();
        assert!(matches!(find_omega_star(&d, &g, &SearchOptions::for_width(1.0)), Err(Error::NoPositiveEdge)));
        let c = dispersion_curve(&d, &g, &[0.5, 1.0]).unwrap();
        assert!(c.samples.iter().all(|s| s.omega == 0.0));
    }

    #[test]
    fn edge_is_consistent() {
        let (d, g) = reference();
        let band = find_omega_star(&d, &g, &SearchOptions::for_width(1.0)).unwrap();
        assert_eq!(band.source, EdgeSource::FixedPoint);
        assert!(band.fixed_point.converged);
        assert!((band.scan.omega - band.omega_star).abs() <= 1e-10 * band.omega_star);
        let forms = assemble_transversal_forms(&g, &d);
        let j = crate::transversal::rayleigh_quotient(band.phi(), &forms, band.alpha_crit).unwrap();
        assert!((j - band.omega_star).abs() < 1e-10);
        let a = optimal_alpha(band.phi(), &forms).unwrap();
        assert!((a - band.alpha_crit).abs() < 1e-8 * a);
        assert_eq!(band.band(), (-band.omega_star, band.omega_star));
        assert_eq!(band.phi()[0], 0.0);
    }

    #[test]
    fn shift_invariance() {
        let (d, g) = reference();
        let s = SearchOptions::for_width(1.0);
        let a = find_omega_star(&d, &g, &s).unwrap();
        let b = find_omega_star(&d.clone().shifted(1.3), &g, &s).unwrap();
        assert!((a.omega_star - b.omega_star).abs() < 1e-12 * a.omega_star);
        assert!((a.alpha_crit - b.alpha_crit).abs() < 1e-8 * a.alpha_crit);
    }

    #[test]
    fn narrow_bracket_hits_boundary() {
        let (d, g) = reference();
        let s = SearchOptions { alpha_lo: 10.0, alpha_hi: 100.0, coarse_n: 8, tol: 1e-8 };
        assert!(matches!(find_omega_star(&d, &g, &s), Err(Error::BoundaryHit { .. })));
    }

    #[test]
    fn curve_respects_bound() {
        let (d, g) = reference();
        let c = dispersion_curve(&d, &g, &logspace(0.1, 100.0, 20)).unwrap();
        assert!(c.samples.iter().all(|s| s.omega > 0.0 && s.gap >= 0.0));
        assert!(dispersion_curve(&d, &g, &[1.0, 0.5]).is_err());
    }

    #[test]
    fn logspace_endpoints() {
        let v = logspace(0.1, 100.0, 4);
        assert_eq!(v[0], 0.1);
        assert_eq!(v[3], 100.0);
        assert!((v[1] - 1.0).abs() < 1e-14);
    }
}
