//! Trapping constants and the sufficient conditions for a discrete eigenvalue
//! above the essential band.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::essential::EssentialBand;
use crate::profiles::{curvature_moments, validate_theorem_hypotheses, CurvatureProfile, DepthProfile};
use crate::quadrature::{composite_gauss, sampled_weights};

/// Points per Chebyshev grid when re-checking the depth hypotheses.
const HYPOTHESIS_POINTS: usize = 512;

/// Outcome of a sufficient condition; serialized as `true`, `false` or `null`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(from = "Option<bool>", into = "Option<bool>")]
pub enum Verdict {
    Holds,
    Fails,
    Indeterminate,
}

impl Verdict {
    pub fn from_bool(b: bool) -> Self {
        if b {
            Verdict::Holds
        } else {
            Verdict::Fails
        }
    }

    pub fn holds(self) -> bool {
        self == Verdict::Holds
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Holds => "true",
            Verdict::Fails => "false",
            Verdict::Indeterminate => "indeterminate",
        }
    }
}

impl From<Option<bool>> for Verdict {
    fn from(v: Option<bool>) -> Self {
        v.map_or(Verdict::Indeterminate, Verdict::from_bool)
    }
}

impl From<Verdict> for Option<bool> {
    fn from(v: Verdict) -> Self {
        match v {
            Verdict::Holds => Some(true),
            Verdict::Fails => Some(false),
            Verdict::Indeterminate => None,
        }
    }
}

/// Integrates `f(eta, e^{-beta}, beta', phi, phi')` with the assembly quadrature.
fn eta_integral<F>(band: &EssentialBand, d: &DepthProfile, f: F) -> f64
where
    F: Fn(f64, f64, f64, f64, f64) -> f64,
{
    let grid = band.grid;
    let phi = band.phi();
    grid.gauss_points()
        .map(|(c, eta, w)| {
            let (beta, bp, _) = d.derivatives(eta);
            let (v, dv) = grid.interpolate(phi, c, eta);
            w * f(eta, (-beta).exp(), bp, v, dv)
        })
        .sum()
}

/// `I1 = ∫ eta e^{-beta} (phi'^2 - alpha^2 phi^2) d eta`.
pub fn compute_i1(band: &EssentialBand, d: &DepthProfile) -> f64 {
    let a2 = band.alpha_crit * band.alpha_crit;
    eta_integral(band, d, |eta, e, _, v, dv| eta * e * (dv * dv - a2 * v * v))
}

/// Terms of the integration-by-parts form of `I1`, which is valid when
/// `phi` solves the edge equation exactly.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct I1Decomposition {
    /// `∫ e^{-beta} phi^2`.
    pub norm: f64,
    /// `∫ beta' e^{-beta} phi^2`.
    pub drift: f64,
    /// `e^{-beta(delta)} phi(delta)^2`.
    pub boundary: f64,
    /// `∫ eta beta' e^{-beta} phi^2 ∫ e^{-beta} phi^2 - ∫ beta' e^{-beta} phi^2 ∫ eta e^{-beta} phi^2`.
    pub chebyshev: f64,
    /// `((-drift - boundary) norm / 2 + Lambda alpha chebyshev) / norm`.
    pub value: f64,
}

pub fn i1_decomposition(band: &EssentialBand, d: &DepthProfile) -> I1Decomposition {
    let norm = eta_integral(band, d, |_, e, _, v, _| e * v * v);
    let drift = eta_integral(band, d, |_, e, bp, v, _| bp * e * v * v);
    let first = eta_integral(band, d, |eta, e, _, v, _| eta * e * v * v);
    let eta_drift = eta_integral(band, d, |eta, e, bp, v, _| eta * bp * e * v * v);
    let delta = band.grid.delta();
    let end = *band.phi().last().expect("non-empty mode");
    let boundary = (-d.beta(delta)).exp() * end * end;
    let chebyshev = eta_drift * norm - drift * first;
    let value = ((-0.5 * drift - 0.5 * boundary) * norm + band.lambda_star * band.alpha_crit * chebyshev) / norm;
    I1Decomposition { norm, drift, boundary, chebyshev, value }
}

/// `F = 1` when `gamma >= 0`, else `1 / (1 - A)`.
pub fn curvature_factor(c: &CurvatureProfile, delta: f64) -> Result<f64> {
    let a = c.safety_margin(delta);
    if a >= 1.0 {
        return Err(Error::SelfIntersection { margin: a });
    }
    Ok(if c.kappa_minus() > 0.0 { 1.0 / (1.0 - a) } else { 1.0 })
}

/// `I2 = F alpha^2 ∫ eta^2 e^{-beta} phi^2 d eta`.
pub fn compute_i2(band: &EssentialBand, d: &DepthProfile, c: &CurvatureProfile) -> Result<f64> {
    let f = curvature_factor(c, band.grid.delta())?;
    let a2 = band.alpha_crit * band.alpha_crit;
    Ok(f * a2 * eta_integral(band, d, |eta, e, _, v, _| eta * eta * e * v * v))
}

/// `C_beta = I2 / (-I1)`.
pub fn compute_c_beta(i1: f64, i2: f64) -> Result<f64> {
    if !(i1 < 0.0) {
        return Err(Error::Hypothesis(format!(
            "I1 = {i1} is not negative; the depth profile does not satisfy the monotone concave assumptions"
        )));
    }
    Ok(i2 / -i1)
}

/// `(∫ x g f)(∫ f) - (∫ g f)(∫ x f)` for samples on a uniform grid of `[a, b]`.
pub fn chebyshev_defect(f: &[f64], g: &[f64], a: f64, b: f64) -> f64 {
    assert_eq!(f.len(), g.len(), "f and g must be sampled on the same grid");
    let n = f.len();
    if n < 2 {
        return 0.0;
    }
    let h = (b - a) / (n - 1) as f64;
    let w = sampled_weights(n, h);
    let (mut xgf, mut sf, mut gf, mut xf) = (0.0, 0.0, 0.0, 0.0);
    for i in 0..n {
        let x = a + i as f64 * h;
        xgf += w[i] * x * g[i] * f[i];
        sf += w[i] * f[i];
        gf += w[i] * g[i] * f[i];
        xf += w[i] * x * f[i];
    }
    xgf * sf - gf * xf
}

/// Quadrature of both terms of the exact defect
/// `D = ∫∫ gamma eta e^{-beta}(phi'^2 - alpha^2 phi^2)
///    + alpha^2 ∫∫ eta^2 gamma^2 / (1 + eta gamma) e^{-beta} phi^2`
/// over `|xi| < r`.
pub fn compute_d_gamma_exact(band: &EssentialBand, d: &DepthProfile, c: &CurvatureProfile, r: f64) -> Result<f64> {
    if !(r > c.support_radius()) {
        return Err(Error::Precondition(format!("r = {r} must exceed the support radius {}", c.support_radius())));
    }
    let delta = band.grid.delta();
    let margin = c.safety_margin(delta);
    if margin >= 1.0 {
        return Err(Error::SelfIntersection { margin });
    }
    if c.is_zero() {
        return Ok(0.0);
    }
    let a2 = band.alpha_crit * band.alpha_crit;
    let grid = band.grid;
    let phi = band.phi();
    // eta quadrature nodes shared by both terms
    let nodes: Vec<(f64, f64, f64)> = grid
        .gauss_points()
        .map(|(cell, eta, w)| {
            let (beta, _, _) = d.derivatives(eta);
            let (v, dv) = grid.interpolate(phi, cell, eta);
            let e = (-beta).exp();
            (eta, w * eta * e * (dv * dv - a2 * v * v), w * e * v * v)
        })
        .collect();
    let i1: f64 = nodes.iter().map(|n| n.1).sum();
    let slice = |xi: f64| -> f64 {
        let g = c.gamma(xi);
        if g == 0.0 {
            return 0.0;
        }
        let second: f64 = nodes.iter().map(|&(eta, _, m)| eta * eta * g * g / (1.0 + eta * g) * m).sum();
        g * i1 + a2 * second
    };
    let breaks = c.breakpoints();
    let mut total = 0.0;
    for w in breaks.windows(2) {
        if w[1] > w[0] {
            total += composite_gauss(slice, w[0], w[1], 256, 8);
        }
    }
    Ok(total)
}

/// Constants, moments and verdicts for one depth/curvature pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrappingReport {
    #[serde(rename = "I1")]
    pub i1: f64,
    #[serde(rename = "I2")]
    pub i2: f64,
    #[serde(rename = "C_beta")]
    pub c_beta: f64,
    /// Pointwise threshold `1 / C_beta`: `0 <= gamma < c_beta_R` forces the
    /// integral condition.
    #[serde(rename = "c_beta_R")]
    pub c_beta_r: f64,
    /// `C_beta / (2R)`, reported for reference.
    #[serde(rename = "c_beta_over_2R")]
    pub c_beta_over_2r: f64,
    /// Factor `F` inside `I2`.
    pub curvature_factor: f64,
    pub m1: f64,
    pub m2: f64,
    #[serde(rename = "A")]
    pub a: f64,
    #[serde(rename = "D_bound")]
    pub d_bound: f64,
    #[serde(rename = "D_exact")]
    pub d_exact: f64,
    pub verdict_integral: Verdict,
    pub verdict_pointwise: Verdict,
    /// `m1 - C_beta m2`.
    pub margin: f64,
    pub monotone: bool,
    pub strictly_concave: bool,
    pub concave: bool,
    pub warnings: Vec<String>,
}

/// Evaluates the integral condition `m1 > C_beta m2` and the pointwise
/// condition `0 <= gamma < c_beta_R`, `gamma != 0`. Both are sufficient
/// conditions only.
pub fn evaluate_criterion(band: &EssentialBand, d: &DepthProfile, c: &CurvatureProfile) -> Result<TrappingReport> {
    let delta = band.grid.delta();
    let moments = curvature_moments(c, delta)?;
    let hyp = validate_theorem_hypotheses(d, HYPOTHESIS_POINTS)?;
    let mut warnings = Vec::new();
    let mut valid = true;
    if !hyp.monotone {
        valid = false;
        warnings.push(format!("depth is not increasing offshore: min beta' = {:e}", hyp.min_beta_prime));
    }
    if !hyp.concave {
        valid = false;
        warnings.push(format!("log-depth is not concave: max beta'' = {:e}", hyp.max_beta_double));
    } else if !hyp.strictly_concave {
        warnings.push(format!(
            "log-depth is concave but not strictly: max beta'' = {:e}; accepted",
            hyp.max_beta_double
        ));
    }
    let i1 = compute_i1(band, d);
    let i2 = compute_i2(band, d, c)?;
    let f = curvature_factor(c, delta)?;
    let c_beta = match compute_c_beta(i1, i2) {
        Ok(v) => v,
        Err(e) => {
            valid = false;
            warnings.push(e.to_string());
            f64::NAN
        }
    };
    let r = c.support_radius();
    let d_bound = i1 * moments.m1 + i2 * moments.m2;
    let d_exact = compute_d_gamma_exact(band, d, c, 2.0 * r)?;
    let c_beta_r = 1.0 / c_beta;
    let (verdict_integral, verdict_pointwise) = if valid {
        let integral = moments.m1 > c_beta * moments.m2;
        let pointwise = !c.is_zero() && c.kappa_minus() == 0.0 && c.kappa_plus() < c_beta_r;
        (Verdict::from_bool(integral), Verdict::from_bool(pointwise))
    } else {
        (Verdict::Indeterminate, Verdict::Indeterminate)
    };
    for w in &warnings {
        log::warn!("{w}");
    }
    Ok(TrappingReport {
        i1,
        i2,
        c_beta,
        c_beta_r,
        c_beta_over_2r: c_beta / (2.0 * r),
        curvature_factor: f,
        m1: moments.m1,
        m2: moments.m2,
        a: moments.margin,
        d_bound,
        d_exact,
        verdict_integral,
        verdict_pointwise,
        margin: moments.m1 - c_beta * moments.m2,
        monotone: hyp.monotone,
        strictly_concave: hyp.strictly_concave,
        concave: hyp.concave,
        warnings,
    })
}
