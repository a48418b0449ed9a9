use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::assembly::PencilForms2D;
use crate::error::{Error, Result};
use crate::linalg::lanczos::{largest, LanczosOptions};
use crate::linalg::scalar::dot;
use crate::linalg::BandCholesky;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolveOptions {
    /// Eigenvalues wanted at each end of the spectrum.
    pub k: usize,
    pub tol: f64,
    pub max_restarts: usize,
    pub seed: u64,
    /// Lanczos steps used to estimate the spectral edge before shifting.
    pub estimate_steps: usize,
    /// Also solve for the most negative eigenvalues.
    pub both_ends: bool,
}

impl SolveOptions {
    pub fn new(k: usize) -> Self {
        Self { k, tol: 1e-12, max_restarts: 300, seed: 0x5eed, estimate_steps: 40, both_ends: true }
    }
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self::new(4)
    }
}

/// One eigenpair of `M x = omega L x`.
#[derive(Debug, Clone)]
pub struct RitzMode {
    pub omega: f64,
    /// Unknown vector, normalized to `x^H W x = 1`.
    pub vector: Vec<Complex64>,
    /// `|M x - omega L x| / (|M x| + |omega| |L x|)`.
    pub residual: f64,
    /// Share of the weighted norm in `|xi| <= R + 2 delta`.
    pub localization: f64,
}

#[derive(Debug, Clone)]
pub struct SpectrumResult2D {
    /// Largest eigenvalues, descending.
    pub top: Vec<RitzMode>,
    /// Most negative eigenvalues, ascending (empty unless requested).
    pub bottom: Vec<RitzMode>,
    pub shift_top: f64,
    pub shift_bottom: Option<f64>,
    pub dim: usize,
    pub restarts: usize,
    pub omega_star_ref: Option<f64>,
    /// `|omega(L) - omega(2L)| / |omega(L)|` per top mode, once a second solve is attached.
    pub truncation_gap: Option<Vec<f64>>,
}

impl SpectrumResult2D {
    pub fn eigenvalues(&self) -> Vec<f64> {
        self.top.iter().map(|m| m.omega).collect()
    }

    pub fn bottom_eigenvalues(&self) -> Vec<f64> {
        self.bottom.iter().map(|m| m.omega).collect()
    }

    pub fn localization(&self) -> Vec<f64> {
        self.top.iter().map(|m| m.localization).collect()
    }

    pub fn omega_top(&self) -> f64 {
        self.top[0].omega
    }

    /// `max_j |top_j + bottom_j|`.
    pub fn conjugation_defect(&self) -> Option<f64> {
        if self.bottom.is_empty() {
            return None;
        }
        Some(self.top.iter().zip(&self.bottom).map(|(t, b)| (t.omega + b.omega).abs()).fold(0.0, f64::max))
    }

    /// Records the truncation gap against a solve on a doubled domain.
    pub fn attach_truncation(&mut self, doubled: &SpectrumResult2D) {
        self.truncation_gap = Some(
            self.top.iter().zip(&doubled.top).map(|(a, b)| ((a.omega - b.omega) / a.omega).abs()).collect(),
        );
    }
}

fn solve_real(f: &BandCholesky<f64>, x: &[Complex64]) -> Vec<Complex64> {
    let mut re: Vec<f64> = x.iter().map(|z| z.re).collect();
    let mut im: Vec<f64> = x.iter().map(|z| z.im).collect();
    f.solve_in_place(&mut re);
    f.solve_in_place(&mut im);
    re.into_iter().zip(im).map(|(a, b)| Complex64::new(a, b)).collect()
}

/// `sign M x` with `M = -i S`.
fn apply_signed_m(forms: &PencilForms2D, sign: f64, x: &[Complex64]) -> Vec<Complex64> {
    forms.s.matvec(x).into_iter().map(|v| Complex64::new(sign * v.im, -sign * v.re)).collect()
}

/// Smallest eigenvalue of `Lh`, from Lanczos on its inverse.
pub fn lh_min_eigenvalue(forms: &PencilForms2D) -> Result<f64> {
    let bw = forms.dofs.bandwidth();
    let f = forms.lh.real_band(bw).cholesky()?;
    let mut o = LanczosOptions::new(1);
    o.tol = 1e-10;
    let r = largest(forms.dim(), |x| solve_real(&f, x), |x| x.to_vec(), &o)?;
    Ok(1.0 / r.values[0])
}

struct EdgeSolve {
    modes: Vec<RitzMode>,
    shift: f64,
    restarts: usize,
}

/// Top end of `sign M x = omega L x`; returned `omega` are for `sign M`.
fn solve_edge(forms: &PencilForms2D, lfac: &BandCholesky<f64>, sign: f64, opts: &SolveOptions) -> Result<EdgeSolve> {
    let n = forms.dim();
    let bw = forms.dofs.bandwidth();
    let gram = |x: &[Complex64]| forms.lh.matvec(x);

    let mut est = LanczosOptions::new(1);
    est.ncv = opts.estimate_steps.max(4);
    est.max_restarts = 0;
    est.accept_unconverged = true;
    est.seed = opts.seed;
    let theta = largest(n, |x| solve_real(lfac, &apply_signed_m(forms, sign, x)), gram, &est)?.values[0];
    if !(theta > 0.0) {
        return Err(Error::NoPositiveEdge);
    }

    // sigma L - sign M is positive definite exactly when sigma exceeds the top eigenvalue.
    let mut bump = 1e-3;
    let (sigma, fac) = loop {
        let sigma = theta * (1.0 + bump);
        match forms.lh.hermitian_band_with_skew(sigma, Some((&forms.s, -sign)), bw).cholesky() {
            Ok(f) => break (sigma, f),
            Err(_) if bump < 1e3 => bump *= 2.0,
            Err(e) => return Err(e),
        }
    };
    log::debug!("edge estimate {theta:.10e}, shift {sigma:.10e}");

    let mut lo = LanczosOptions::new(opts.k);
    lo.tol = opts.tol;
    lo.max_restarts = opts.max_restarts;
    lo.seed = opts.seed;
    let apply = |x: &[Complex64]| fac.solve(&forms.lh.matvec(x));
    let ritz = largest(n, apply, gram, &lo)?;

    let mut modes: Vec<RitzMode> = ritz
        .vectors
        .into_iter()
        .map(|mut x| {
            let lx = forms.lh.matvec(&x);
            let mx = apply_signed_m(forms, sign, &x);
            let omega = dot(&x, &mx).re / dot(&x, &lx).re;
            let num: f64 = mx.iter().zip(&lx).map(|(a, b)| (a - b * omega).norm_sqr()).sum::<f64>().sqrt();
            let den = mx.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
                + omega.abs() * lx.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
            let wn = forms.w.quad(&x);
            let localization = forms.w_inner.quad(&x) / wn;
            let (kmax, _) = x
                .iter()
                .enumerate()
                .fold((0, -1.0), |(k, best), (i, z)| if z.norm() > best { (i, z.norm()) } else { (k, best) });
            let phase = x[kmax].conj() / x[kmax].norm() / wn.sqrt();
            x.iter_mut().for_each(|z| *z *= phase);
            RitzMode { omega, vector: x, residual: num / den, localization }
        })
        .collect();
    modes.sort_by(|a, b| b.omega.total_cmp(&a.omega));
    Ok(EdgeSolve { modes, shift: sigma, restarts: ritz.restarts })
}

/// `k` largest eigenvalues of `Mh x = omega Lh x` (and optionally the `k` most
/// negative) by shift-invert Lanczos in the `Lh` inner product.
pub fn solve_top_spectrum(forms: &PencilForms2D, opts: &SolveOptions) -> Result<SpectrumResult2D> {
    if opts.k == 0 {
        return Err(Error::Precondition("solve_top_spectrum needs k >= 1".into()));
    }
    let bw = forms.dofs.bandwidth();
    let lfac = forms.lh.real_band(bw).cholesky()?;
    let (top, bottom) = if opts.both_ends {
        let (t, b) = rayon::join(|| solve_edge(forms, &lfac, 1.0, opts), || solve_edge(forms, &lfac, -1.0, opts));
        (t?, Some(b?))
    } else {
        (solve_edge(forms, &lfac, 1.0, opts)?, None)
    };
    let (bottom_modes, shift_bottom, rb) = match bottom {
        Some(b) => {
            let modes = b.modes.into_iter().map(|m| RitzMode { omega: -m.omega, ..m }).collect();
            (modes, Some(-b.shift), b.restarts)
        }
        None => (Vec::new(), None, 0),
    };
    Ok(SpectrumResult2D {
        top: top.modes,
        bottom: bottom_modes,
        shift_top: top.shift,
        shift_bottom,
        dim: forms.dim(),
        restarts: top.restarts.max(rb),
        omega_star_ref: None,
        truncation_gap: None,
    })
}
