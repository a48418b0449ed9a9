//! Depth and coastline-curvature profiles.
//!
//! A depth profile is stored through its logarithm `beta = ln H` on the strip
//! `0 <= eta <= delta`; the Hilbert-space weight is `h = exp(-beta)`. A
//! curvature profile is a signed curvature `gamma(xi)` supported in `[-R, R]`.
//! Positive curvature bends the coast toward the Dirichlet side `eta = 0`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature;
use crate::spline::{CubicSpline, EndCondition};

/// Tolerance used when checking the strict sign hypotheses on a sample grid.
pub const SIGN_TOL: f64 = 1e-12;

const VALIDATION_GRID: usize = 2049;

#[derive(Debug, Clone, PartialEq)]
enum DepthShape {
    LogDepth { slope: f64 },
    Linear { slope: f64 },
    TanhRamp { amplitude: f64, width: f64 },
    Tabulated(CubicSpline),
}

/// Longitudinally uniform log-depth `beta(eta)` with analytic derivatives.
#[derive(Debug, Clone, PartialEq)]
pub struct DepthProfile {
    delta: f64,
    shape: DepthShape,
    offset: f64,
    family: String,
    params: Vec<f64>,
}

impl DepthProfile {
    /// Builds a profile from a family name and its parameter list.
    ///
    /// Families: `log-depth [s]` (beta = ln(1 + s eta)), `linear [s]`
    /// (beta = s eta), `tanh [s, w]` (beta = s tanh(eta / w)) and
    /// `tabulated [b0, .., bk]` (beta sampled on a uniform grid of [0, delta],
    /// natural cubic spline).
    pub fn new(family: &str, params: &[f64], delta: f64) -> Result<Self> {
        if !(delta.is_finite() && delta > 0.0) {
            return Err(Error::Precondition(format!("strip width delta must be > 0, got {delta}")));
        }
        let bad = |reason: &str| Error::InvalidParams { family: family.to_string(), reason: reason.to_string() };
        if params.iter().any(|p| !p.is_finite()) {
            return Err(bad("parameters must be finite"));
        }
        let shape = match family {
            "log-depth" | "log_depth" | "logdepth" => {
                let [slope] = params else { return Err(bad("expected [s]")) };
                DepthShape::LogDepth { slope: *slope }
            }
            "linear" => {
                let [slope] = params else { return Err(bad("expected [s]")) };
                DepthShape::Linear { slope: *slope }
            }
            "tanh" | "tanh-ramp" => {
                let [amplitude, width] = params else { return Err(bad("expected [s, w]")) };
                if *width <= 0.0 {
                    return Err(bad("ramp width must be > 0"));
                }
                DepthShape::TanhRamp { amplitude: *amplitude, width: *width }
            }
            "tabulated" => {
                if params.len() < 2 {
                    return Err(bad("need at least two samples"));
                }
                DepthShape::Tabulated(CubicSpline::new(0.0, delta, params, EndCondition::Natural))
            }
            _ => return Err(Error::UnknownFamily { kind: "depth", name: family.to_string() }),
        };
        let profile = Self { delta, shape, offset: 0.0, family: family.to_string(), params: params.to_vec() };
        for i in 0..VALIDATION_GRID {
            let eta = delta * i as f64 / (VALIDATION_GRID - 1) as f64;
            let (b, bp, bpp) = profile.derivatives(eta);
            if !(b.is_finite() && bp.is_finite() && bpp.is_finite()) {
                return Err(Error::NonFiniteDepth { eta });
            }
        }
        Ok(profile)
    }

    /// The same profile with `beta` shifted by a constant (depth scaled by `e^c`).
    pub fn shifted(mut self, c: f64) -> Self {
        self.offset += c;
        self
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn family(&self) -> &str {
        &self.family
    }

    pub fn params(&self) -> &[f64] {
        &self.params
    }

    pub fn offset(&self) -> f64 {
        self.offset
    }

    /// `(beta, beta', beta'')` at `eta`.
    pub fn derivatives(&self, eta: f64) -> (f64, f64, f64) {
        let (b, bp, bpp) = match &self.shape {
            DepthShape::LogDepth { slope } => {
                let q = 1.0 + slope * eta;
                (q.ln(), slope / q, -slope * slope / (q * q))
            }
            DepthShape::Linear { slope } => (slope * eta, *slope, 0.0),
            DepthShape::TanhRamp { amplitude, width } => {
                let t = (eta / width).tanh();
                let sech2 = 1.0 - t * t;
                (amplitude * t, amplitude / width * sech2, -2.0 * amplitude / (width * width) * sech2 * t)
            }
            DepthShape::Tabulated(s) => s.eval3(eta),
        };
        (b + self.offset, bp, bpp)
    }

    pub fn beta(&self, eta: f64) -> f64 {
        self.derivatives(eta).0
    }

    pub fn beta_prime(&self, eta: f64) -> f64 {
        self.derivatives(eta).1
    }

    pub fn beta_double(&self, eta: f64) -> f64 {
        self.derivatives(eta).2
    }

    /// Weight `h = exp(-beta)`.
    pub fn weight(&self, eta: f64) -> f64 {
        (-self.beta(eta)).exp()
    }

    /// Undisturbed depth `H = exp(beta)`.
    pub fn depth(&self, eta: f64) -> f64 {
        self.beta(eta).exp()
    }
}

/// Outcome of sampling the sign hypotheses on beta' and beta''.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HypothesisReport {
    pub monotone: bool,
    pub strictly_concave: bool,
    /// beta'' <= 0 up to the sampling tolerance.
    pub concave: bool,
    pub min_beta_prime: f64,
    pub max_beta_double: f64,
}

/// Samples beta' and beta'' at `n_check` Chebyshev points of `(0, delta)`.
pub fn validate_theorem_hypotheses(d: &DepthProfile, n_check: usize) -> Result<HypothesisReport> {
    if n_check < 16 {
        return Err(Error::Precondition(format!("n_check must be >= 16, got {n_check}")));
    }
    let mut min_bp = f64::INFINITY;
    let mut max_bpp = f64::NEG_INFINITY;
    for k in 1..=n_check {
        let t = ((2 * k - 1) as f64 * PI / (2 * n_check) as f64).cos();
        let eta = 0.5 * d.delta() * (1.0 - t);
        let (_, bp, bpp) = d.derivatives(eta);
        min_bp = min_bp.min(bp);
        max_bpp = max_bpp.max(bpp);
    }
    Ok(HypothesisReport {
        monotone: min_bp > SIGN_TOL,
        strictly_concave: max_bpp < -SIGN_TOL,
        concave: max_bpp <= SIGN_TOL,
        min_beta_prime: min_bp,
        max_beta_double: max_bpp,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Bump {
    amplitude: f64,
    center: f64,
    radius: f64,
}

impl Bump {
    fn eval(&self, xi: f64) -> f64 {
        let t = (xi - self.center) / self.radius;
        if t.abs() >= 1.0 {
            0.0
        } else {
            self.amplitude * (1.0 - 1.0 / (1.0 - t * t)).exp()
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum CurvatureShape {
    Zero,
    Bumps(Vec<Bump>),
    Tabulated(CubicSpline),
}

/// Signed coastline curvature with compact support in `[-R, R]`.
#[derive(Debug, Clone, PartialEq)]
pub struct CurvatureProfile {
    support_radius: f64,
    shape: CurvatureShape,
    kappa_plus: f64,
    kappa_minus: f64,
    family: String,
    params: Vec<f64>,
}

const EXTREMA_SAMPLES: usize = 4096;

impl CurvatureProfile {
    /// Families: `zero []`, `bump [a]` (a exp(1 - 1/(1 - (xi/R)^2))),
    /// `bumps [a1, c1, r1, a2, c2, r2, ..]` (sum of bumps centred at c with
    /// radius r, each inside [-R, R]) and `tabulated [g0, .., gk]` (samples on
    /// a uniform grid of [-R, R], clamped cubic spline, zero outside).
    pub fn new(family: &str, params: &[f64], support_radius: f64) -> Result<Self> {
        if !(support_radius.is_finite() && support_radius > 0.0) {
            return Err(Error::Precondition(format!("support radius R must be > 0, got {support_radius}")));
        }
        let bad = |reason: &str| Error::InvalidParams { family: family.to_string(), reason: reason.to_string() };
        if params.iter().any(|p| !p.is_finite()) {
            return Err(bad("parameters must be finite"));
        }
        let r = support_radius;
        let shape = match family {
            "zero" | "straight" => {
                if !params.is_empty() {
                    return Err(bad("takes no parameters"));
                }
                CurvatureShape::Zero
            }
            "bump" => {
                let [a] = params else { return Err(bad("expected [a]")) };
                CurvatureShape::Bumps(vec![Bump { amplitude: *a, center: 0.0, radius: r }])
            }
            "bumps" => {
                if params.is_empty() || params.len() % 3 != 0 {
                    return Err(bad("expected triples [a, c, r]"));
                }
                let mut bumps = Vec::new();
                for t in params.chunks(3) {
                    let b = Bump { amplitude: t[0], center: t[1], radius: t[2] };
                    if b.radius <= 0.0 || b.center.abs() + b.radius > r * (1.0 + 1e-12) {
                        return Err(bad("each bump must satisfy r > 0 and |c| + r <= R"));
                    }
                    bumps.push(b);
                }
                CurvatureShape::Bumps(bumps)
            }
            "tabulated" => {
                if params.len() < 3 {
                    return Err(bad("need at least three samples"));
                }
                for idx in [0, params.len() - 1] {
                    if params[idx] != 0.0 {
                        return Err(Error::CurvatureOutsideSupport { index: idx, value: params[idx] });
                    }
                }
                CurvatureShape::Tabulated(CubicSpline::new(-r, r, params, EndCondition::Clamped(0.0, 0.0)))
            }
            _ => return Err(Error::UnknownFamily { kind: "curvature", name: family.to_string() }),
        };
        let mut profile = Self {
            support_radius: r,
            shape,
            kappa_plus: 0.0,
            kappa_minus: 0.0,
            family: family.to_string(),
            params: params.to_vec(),
        };
        let (lo, hi) = profile.extrema();
        profile.kappa_plus = hi;
        profile.kappa_minus = -lo;
        Ok(profile)
    }

    pub fn zero(support_radius: f64) -> Result<Self> {
        Self::new("zero", &[], support_radius)
    }

    /// The same profile with every value multiplied by `t`.
    pub fn scaled(&self, t: f64) -> Result<Self> {
        let params: Vec<f64> = match &self.shape {
            CurvatureShape::Zero => Vec::new(),
            CurvatureShape::Bumps(_) if self.family == "bump" => vec![self.params[0] * t],
            CurvatureShape::Bumps(_) => self
                .params
                .chunks(3)
                .flat_map(|c| [c[0] * t, c[1], c[2]])
                .collect(),
            CurvatureShape::Tabulated(_) => self.params.iter().map(|g| g * t).collect(),
        };
        Self::new(&self.family, &params, self.support_radius)
    }

    pub fn gamma(&self, xi: f64) -> f64 {
        if xi.abs() >= self.support_radius {
            return 0.0;
        }
        match &self.shape {
            CurvatureShape::Zero => 0.0,
            CurvatureShape::Bumps(b) => b.iter().map(|b| b.eval(xi)).sum(),
            CurvatureShape::Tabulated(s) => s.eval(xi),
        }
    }

    pub fn support_radius(&self) -> f64 {
        self.support_radius
    }

    pub fn family(&self) -> &str {
        &self.family
    }

    pub fn params(&self) -> &[f64] {
        &self.params
    }

    /// `sup gamma`.
    pub fn kappa_plus(&self) -> f64 {
        self.kappa_plus
    }

    /// `-inf gamma`.
    pub fn kappa_minus(&self) -> f64 {
        self.kappa_minus
    }

    pub fn is_zero(&self) -> bool {
        self.kappa_plus == 0.0 && self.kappa_minus == 0.0
    }

    /// `A = delta max(kappa+, kappa-, 0)`.
    pub fn safety_margin(&self, delta: f64) -> f64 {
        delta * self.kappa_plus.max(self.kappa_minus).max(0.0)
    }

    /// Breakpoints where gamma may lose smoothness (bump edges, support ends).
    pub(crate) fn breakpoints(&self) -> Vec<f64> {
        let r = self.support_radius;
        let mut pts = vec![-r, r];
        match &self.shape {
            CurvatureShape::Bumps(b) => {
                for b in b {
                    pts.push(b.center - b.radius);
                    pts.push(b.center);
                    pts.push(b.center + b.radius);
                }
            }
            CurvatureShape::Tabulated(s) => pts.extend(s.knots()),
            CurvatureShape::Zero => {}
        }
        pts.retain(|x| x.abs() <= r);
        pts.sort_by(f64::total_cmp);
        pts.dedup_by(|a, b| (*a - *b).abs() < 1e-14 * r);
        pts
    }

    /// (inf gamma, sup gamma) over [-R, R] by dense sampling plus
    /// golden-section refinement around the best samples.
    fn extrema(&self) -> (f64, f64) {
        let r = self.support_radius;
        let h = 2.0 * r / (EXTREMA_SAMPLES - 1) as f64;
        let xs: Vec<f64> = (0..EXTREMA_SAMPLES).map(|i| -r + i as f64 * h).collect();
        let vals: Vec<f64> = xs.iter().map(|&x| self.gamma(x)).collect();
        let refine = |sign: f64| -> f64 {
            let (imax, _) = vals
                .iter()
                .enumerate()
                .max_by(|a, b| (sign * a.1).total_cmp(&(sign * b.1)))
                .expect("non-empty sample set");
            let lo = xs[imax.saturating_sub(1)];
            let hi = xs[(imax + 1).min(EXTREMA_SAMPLES - 1)];
            let f = |x: f64| sign * self.gamma(x);
            let x = golden_max(f, lo, hi, 1e-14 * r.max(1.0));
            (sign * vals[imax]).max(f(x)) * sign
        };
        let sup = refine(1.0).max(0.0);
        let inf = refine(-1.0).min(0.0);
        (inf, sup)
    }
}

/// Golden-section search for a maximum of `f` on `[a, b]`.
pub(crate) fn golden_max<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64, tol: f64) -> f64 {
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while (b - a).abs() > tol {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    if fc >= fd {
        c
    } else {
        d
    }
}

/// Integral moments of a curvature profile together with the safety margin.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvatureMoments {
    /// `∫ gamma dxi`.
    pub m1: f64,
    /// `∫ gamma² dxi`.
    pub m2: f64,
    /// `A = delta max(kappa+, kappa-, 0)`.
    pub margin: f64,
}

/// Moments by adaptive quadrature on `[-R, R]`; rejects `A >= 1`.
pub fn curvature_moments(c: &CurvatureProfile, delta: f64) -> Result<CurvatureMoments> {
    let margin = c.safety_margin(delta);
    if margin >= 1.0 {
        return Err(Error::SelfIntersection { margin });
    }
    if c.is_zero() {
        return Ok(CurvatureMoments { m1: 0.0, m2: 0.0, margin });
    }
    let breaks = c.breakpoints();
    let m1 = quadrature::adaptive_with_breaks(|x| c.gamma(x), &breaks, 1e-14);
    let m2 = quadrature::adaptive_with_breaks(|x| c.gamma(x).powi(2), &breaks, 1e-14);
    Ok(CurvatureMoments { m1, m2, margin })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log_depth_closed_form() {
        let d = DepthProfile::new("log-depth", &[1.0], 1.0).unwrap();
        assert_eq!(d.beta(0.0), 0.0);
        assert!((d.beta(0.5) - 1.5f64.ln()).abs() < 1e-15);
        assert_eq!(d.beta_prime(0.0), 1.0);
        assert_eq!(d.beta_double(0.0), -1.0);
        assert!((d.weight(1.0) - 0.5).abs() < 1e-15);
        assert!((d.depth(1.0) - 2.0).abs() < 1e-15);
    }

    #[test]
    fn linear_closed_form() {
        let d = DepthProfile::new("linear", &[0.5], 1.0).unwrap();
        for eta in [0.0, 0.3, 1.0] {
            assert_eq!(d.beta_prime(eta), 0.5);
            assert_eq!(d.beta_double(eta), 0.0);
        }
    }

    #[test]
    fn decreasing_tabulated_builds_but_is_not_monotone() {
        let d = DepthProfile::new("tabulated", &[0.0, -0.2, -0.5, -0.9], 1.0).unwrap();
        let rep = validate_theorem_hypotheses(&d, 64).unwrap();
        assert!(!rep.monotone);
    }

    #[test]
    fn hypothesis_flags() {
        let d = DepthProfile::new("log-depth", &[1.0], 1.0).unwrap();
        let rep = validate_theorem_hypotheses(&d, 32).unwrap();
        assert!(rep.monotone && rep.strictly_concave && rep.concave);
        let d = DepthProfile::new("linear", &[0.7], 1.0).unwrap();
        let rep = validate_theorem_hypotheses(&d, 32).unwrap();
        assert!(rep.monotone && !rep.strictly_concave && rep.concave);
        let d = DepthProfile::new("linear", &[-1.0], 1.0).unwrap();
        let rep = validate_theorem_hypotheses(&d, 32).unwrap();
        assert!(!rep.monotone);
        assert!(validate_theorem_hypotheses(&d, 8).is_err());
    }

    #[test]
    fn depth_errors() {
        assert!(matches!(DepthProfile::new("cosine", &[1.0], 1.0), Err(Error::UnknownFamily { .. })));
        assert!(matches!(DepthProfile::new("log-depth", &[-1.0], 1.0), Err(Error::NonFiniteDepth { .. })));
        assert!(DepthProfile::new("linear", &[1.0], 0.0).is_err());
        assert!(DepthProfile::new("tanh", &[1.0], 1.0).is_err());
    }

    #[test]
    fn builtin_derivatives_match_central_differences() {
        let profiles = [
            DepthProfile::new("log-depth", &[2.0], 1.3).unwrap(),
            DepthProfile::new("linear", &[0.4], 1.0).unwrap(),
            DepthProfile::new("tanh", &[1.5, 0.6], 1.0).unwrap(),
            DepthProfile::new("tabulated", &[0.0, 0.4, 0.7, 0.9, 1.0], 1.0).unwrap(),
        ];
        let eps = 1e-4;
        for d in &profiles {
            for k in 1..20 {
                let eta = d.delta() * (k as f64 - 0.37) / 20.0;
                let fd1 = (d.beta(eta + eps) - d.beta(eta - eps)) / (2.0 * eps);
                let fd2 = (d.beta_prime(eta + eps) - d.beta_prime(eta - eps)) / (2.0 * eps);
                assert!((d.beta_prime(eta) - fd1).abs() <= 50.0 * eps * eps, "{}", d.family());
                assert!((d.beta_double(eta) - fd2).abs() <= 200.0 * eps * eps, "{}", d.family());
            }
        }
    }

    #[test]
    fn shift_changes_only_beta() {
        let d = DepthProfile::new("tanh", &[1.0, 0.5], 1.0).unwrap();
        let s = d.clone().shifted(0.7);
        assert!((s.beta(0.3) - d.beta(0.3) - 0.7).abs() < 1e-15);
        assert_eq!(s.beta_prime(0.3), d.beta_prime(0.3));
    }

    #[test]
    fn bump_construction_and_extremes() {
        let c = CurvatureProfile::new("bump", &[0.1], 2.0).unwrap();
        assert!((c.gamma(0.0) - 0.1).abs() < 1e-15);
        assert_eq!(c.gamma(2.0), 0.0);
        assert_eq!(c.gamma(-2.0), 0.0);
        assert!((c.kappa_plus() - 0.1).abs() < 1e-14);
        assert_eq!(c.kappa_minus(), 0.0);

        let z = CurvatureProfile::zero(1.0).unwrap();
        assert_eq!((z.kappa_plus(), z.kappa_minus()), (0.0, 0.0));

        let n = CurvatureProfile::new("bump", &[-0.05], 1.0).unwrap();
        assert_eq!(n.kappa_plus(), 0.0);
        assert!((n.kappa_minus() - 0.05).abs() < 1e-14);
    }

    #[test]
    fn tabulated_curvature_must_vanish_at_edges() {
        let err = CurvatureProfile::new("tabulated", &[0.1, 0.2, 0.0], 1.0).unwrap_err();
        assert!(matches!(err, Error::CurvatureOutsideSupport { index: 0, .. }));
        let c = CurvatureProfile::new("tabulated", &[0.0, 0.1, 0.3, 0.1, 0.0], 1.0).unwrap();
        assert_eq!(c.gamma(1.0), 0.0);
        assert_eq!(c.gamma(-3.0), 0.0);
        assert!((c.gamma(0.0) - 0.3).abs() < 1e-14);
        assert!(c.kappa_plus() >= 0.3);
    }

    #[test]
    fn off_centre_extremum_is_refined() {
        let c = CurvatureProfile::new("bumps", &[0.2, 0.3137, 0.5, -0.1, -1.0, 0.8], 2.0).unwrap();
        assert!((c.kappa_plus() - 0.2).abs() < 1e-12);
        assert!((c.kappa_minus() - 0.1).abs() < 1e-12);
    }

    #[test]
    fn moments_zero_and_homogeneity() {
        let z = CurvatureProfile::zero(1.0).unwrap();
        let m = curvature_moments(&z, 1.0).unwrap();
        assert_eq!((m.m1, m.m2, m.margin), (0.0, 0.0, 0.0));

        let c = CurvatureProfile::new("bumps", &[0.1, 0.5, 1.0, -0.04, -1.0, 0.7], 2.0).unwrap();
        let c2 = c.scaled(2.0).unwrap();
        let a = curvature_moments(&c, 1.0).unwrap();
        let b = curvature_moments(&c2, 1.0).unwrap();
        assert!((b.m1 - 2.0 * a.m1).abs() < 1e-13);
        assert!((b.m2 - 4.0 * a.m2).abs() < 1e-13);
    }

    #[test]
    fn self_intersection_rejected() {
        let c = CurvatureProfile::new("bump", &[-1.2], 1.0).unwrap();
        assert!(matches!(curvature_moments(&c, 1.0), Err(Error::SelfIntersection { .. })));
    }

    #[test]
    fn metric_factor_bounds_by_sampling() {
        let c = CurvatureProfile::new("bumps", &[0.3, 0.2, 0.8, -0.25, -1.0, 0.9], 2.0).unwrap();
        let delta = 1.5;
        let a = c.safety_margin(delta);
        assert!(a < 1.0);
        for i in 0..=400 {
            let xi = -3.0 + 6.0 * i as f64 / 400.0;
            for j in 0..=20 {
                let eta = delta * j as f64 / 20.0;
                let p = 1.0 + eta * c.gamma(xi);
                assert!(p >= 1.0 - a - 1e-14 && p <= 1.0 + a + 1e-14);
            }
        }
    }
}
