//! The one-dimensional transversal pencil `alpha B phi = omega (K + alpha^2 W) phi`
//! on `(0, delta)` with `phi(0) = 0` and a natural condition at `eta = delta`.

use std::f64::consts::PI;

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{Error, Result};
use crate::linalg::tridiag::{self, count_above, PencilPair};
use crate::linalg::SymTridiag;
use crate::profiles::DepthProfile;
use crate::quadrature::gauss2;

/// Uniform piecewise-linear grid `eta_i = i delta / n`, `i = 0..=n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransversalGrid {
    n: usize,
    delta: f64,
}

impl TransversalGrid {
    pub fn new(n: usize, delta: f64) -> Result<Self> {
        if n < 2 {
            return Err(Error::Precondition(format!("transversal grid needs n >= 2 cells, got {n}")));
        }
        if !(delta.is_finite() && delta > 0.0) {
            return Err(Error::Precondition(format!("strip width must be > 0, got {delta}")));
        }
        Ok(Self { n, delta })
    }

    /// Number of cells.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn h(&self) -> f64 {
        self.delta / self.n as f64
    }

    pub fn node(&self, i: usize) -> f64 {
        if i == self.n {
            self.delta
        } else {
            i as f64 * self.h()
        }
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..=self.n).map(|i| self.node(i)).collect()
    }

    /// Every assembly quadrature point `(cell, eta, weight)`.
    pub fn gauss_points(&self) -> impl Iterator<Item = (usize, f64, f64)> + '_ {
        (0..self.n).flat_map(move |c| gauss2(self.node(c), self.node(c + 1)).map(move |(x, w)| (c, x, w)))
    }

    /// Value and slope of a nodal function at `eta` inside `cell`.
    pub fn interpolate(&self, phi: &[f64], cell: usize, eta: f64) -> (f64, f64) {
        let (a, b) = (self.node(cell), self.node(cell + 1));
        let t = (eta - a) / (b - a);
        let v = phi[cell] * (1.0 - t) + phi[cell + 1] * t;
        (v, (phi[cell + 1] - phi[cell]) / (b - a))
    }
}

/// Weighted stiffness `K`, weighted mass `W` and drift mass `B` on the free
/// nodes `1..=n` (the Dirichlet node is eliminated).
#[derive(Debug, Clone, PartialEq)]
pub struct TransversalForms {
    pub grid: TransversalGrid,
    pub k: SymTridiag,
    pub w: SymTridiag,
    pub b: SymTridiag,
}

/// Assembles the three forms with two-point Gauss quadrature per cell.
pub fn assemble_transversal_forms(grid: &TransversalGrid, d: &DepthProfile) -> TransversalForms {
    let n = grid.n();
    let mut k = SymTridiag::zeros(n);
    let mut w = SymTridiag::zeros(n);
    let mut b = SymTridiag::zeros(n);
    let h = grid.h();
    for (c, eta, wq) in grid.gauss_points() {
        let (beta, bp, _) = d.derivatives(eta);
        let e = (-beta).exp();
        let drift = bp * e;
        let t = (eta - grid.node(c)) / h;
        let shape = [1.0 - t, t];
        let slope = [-1.0 / h, 1.0 / h];
        // Global node g maps to unknown g - 1.
        for a in 0..2 {
            for bb in a..2 {
                let (ga, gb) = (c + a, c + bb);
                if ga == 0 {
                    continue;
                }
                let kv = wq * e * slope[a] * slope[bb];
                let wv = wq * e * shape[a] * shape[bb];
                let bv = wq * drift * shape[a] * shape[bb];
                if ga == gb {
                    k.diag[ga - 1] += kv;
                    w.diag[ga - 1] += wv;
                    b.diag[ga - 1] += bv;
                } else {
                    k.off[ga - 1] += kv;
                    w.off[ga - 1] += wv;
                    b.off[ga - 1] += bv;
                }
            }
        }
    }
    TransversalForms { grid: *grid, k, w, b }
}

impl TransversalForms {
    pub fn dim(&self) -> usize {
        self.k.len()
    }

    /// `K + s W`.
    pub fn stiffness(&self, s: f64) -> SymTridiag {
        self.k.combine(1.0, &self.w, s)
    }

    /// Free coefficients of a nodal function (drops the Dirichlet node).
    fn free<'a>(&self, phi: &'a [f64]) -> Result<&'a [f64]> {
        match phi.len() {
            l if l == self.dim() + 1 => Ok(&phi[1..]),
            l if l == self.dim() => Ok(phi),
            l => Err(Error::Precondition(format!(
                "nodal function has {l} entries, expected {} or {}",
                self.dim() + 1,
                self.dim()
            ))),
        }
    }
}

/// A solution of the transversal pencil at wavenumber `alpha`.
#[derive(Debug, Clone, PartialEq)]
pub struct TransversalMode {
    pub alpha: f64,
    pub omega: f64,
    /// Nodal values `phi(eta_0) = 0, ..., phi(eta_n)`, scaled so that
    /// `phi^T W phi = 1` and `phi(eta_1) > 0`.
    pub phi: Vec<f64>,
    pub j1: f64,
    pub j2: f64,
    /// `|alpha B phi - omega (K + alpha^2 W) phi|_2`.
    pub residual: f64,
}

/// The `k` largest eigenpairs of `a B phi = omega (K + s W) phi`.
pub fn solve_pencil(forms: &TransversalForms, a: f64, s: f64, k: usize) -> Result<Vec<PencilPair>> {
    tridiag::top_eigenpairs(&forms.b.scaled(a), &forms.stiffness(s), k)
}

/// Eigenvalues only of `a B phi = omega (K + s W) phi`, every one of them, descending.
pub fn pencil_eigenvalues(forms: &TransversalForms, a: f64, s: f64) -> Result<Vec<f64>> {
    let p = forms.b.scaled(a);
    let stiff = forms.stiffness(s);
    stiff.check_positive_definite()?;
    let n = forms.dim();
    let mut hi = 1.0;
    while count_above(&p, &stiff, hi) > 0 {
        hi *= 2.0;
    }
    let mut lo = -1.0;
    while count_above(&p, &stiff, lo) < n {
        lo *= 2.0;
    }
    let mut out = Vec::with_capacity(n);
    for j in 1..=n {
        let (mut l, mut h) = (lo, hi);
        loop {
            let mid = 0.5 * (l + h);
            if mid <= l || mid >= h || h - l <= 2.0 * f64::EPSILON * l.abs().max(h.abs()) {
                break;
            }
            if count_above(&p, &stiff, mid) >= j {
                l = mid;
            } else {
                h = mid;
            }
        }
        out.push(0.5 * (l + h));
        hi = h;
    }
    Ok(out)
}

fn finish_mode(forms: &TransversalForms, alpha: f64, omega: f64, mut x: Vec<f64>) -> TransversalMode {
    let wn = forms.w.quad(&x).sqrt();
    let sign = if x[0] < 0.0 { -1.0 } else { 1.0 };
    x.iter_mut().for_each(|v| *v *= sign / wn);
    let a = forms.stiffness(alpha * alpha);
    let bx = forms.b.matvec(&x);
    let ax = a.matvec(&x);
    let residual = bx.iter().zip(&ax).map(|(b, a)| (alpha * b - omega * a).powi(2)).sum::<f64>().sqrt();
    let bq = forms.b.quad(&x);
    let (j1, j2) = if bq != 0.0 { (forms.w.quad(&x) / bq, forms.k.quad(&x) / bq) } else { (f64::NAN, f64::NAN) };
    let mut phi = Vec::with_capacity(x.len() + 1);
    phi.push(0.0);
    phi.extend(x);
    TransversalMode { alpha, omega, phi, j1, j2, residual }
}

/// The `k` largest-`omega` solutions of `alpha B phi = omega (K + alpha^2 W) phi`.
///
/// At `alpha = 0`, or when `B` vanishes, the spectrum is `{0}`; the returned
/// eigenvectors are then the lowest modes of `K phi = mu W phi`.
pub fn solve_transversal(forms: &TransversalForms, alpha: f64, k: usize) -> Result<Vec<TransversalMode>> {
    if k == 0 || k > forms.dim() {
        return Err(Error::Precondition(format!("k must be in 1..={}, got {k}", forms.dim())));
    }
    if alpha == 0.0 || forms.b.is_zero() {
        let pairs = tridiag::top_eigenpairs(&forms.w, &forms.k, k)?;
        return Ok(pairs.into_iter().map(|p| finish_mode(forms, alpha, 0.0, p.vector)).collect());
    }
    let pairs = solve_pencil(forms, alpha, alpha * alpha, k)?;
    Ok(pairs.into_iter().map(|p| finish_mode(forms, alpha, p.value, p.vector)).collect())
}

/// Same contract as [`solve_transversal`], by Cholesky reduction of
/// `K + alpha^2 W` to a dense standard symmetric eigenproblem. Cubic cost.
pub fn solve_transversal_dense(forms: &TransversalForms, alpha: f64, k: usize) -> Result<Vec<TransversalMode>> {
    let n = forms.dim();
    if k == 0 || k > n {
        return Err(Error::Precondition(format!("k must be in 1..={n}, got {k}")));
    }
    let a = forms.stiffness(alpha * alpha).to_dense();
    let chol = a.cholesky().ok_or(Error::Factorization { pivot: 0 })?;
    let l = chol.l();
    let p: DMatrix<f64> = forms.b.to_dense() * alpha;
    let y = l.solve_lower_triangular(&p).ok_or(Error::Factorization { pivot: 0 })?;
    let c = l.solve_lower_triangular(&y.transpose()).ok_or(Error::Factorization { pivot: 0 })?;
    let c = 0.5 * (&c + c.transpose());
    let eig = SymmetricEigen::new(c);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[j].total_cmp(&eig.eigenvalues[i]));
    let lt = l.transpose();
    order[..k]
        .iter()
        .map(|&i| {
            let x = lt
                .solve_upper_triangular(&eig.eigenvectors.column(i).into_owned())
                .ok_or(Error::Factorization { pivot: 0 })?;
            Ok(finish_mode(forms, alpha, eig.eigenvalues[i], x.iter().copied().collect()))
        })
        .collect()
}

/// `(J1, J2) = (<W phi, phi>, <K phi, phi>) / <B phi, phi>`.
pub fn j_functionals(phi: &[f64], forms: &TransversalForms) -> Result<(f64, f64)> {
    let x = forms.free(phi)?;
    let bq = forms.b.quad(x);
    let scale = forms.w.quad(x).abs().max(f64::MIN_POSITIVE);
    if !(bq > 1e-14 * scale) {
        return Err(Error::DegenerateDrift { value: bq });
    }
    Ok((forms.w.quad(x) / bq, forms.k.quad(x) / bq))
}

/// `J_alpha(phi) = 1 / (alpha J1 + J2 / alpha)`.
pub fn rayleigh_quotient(phi: &[f64], forms: &TransversalForms, alpha: f64) -> Result<f64> {
    if !(alpha > 0.0) {
        return Err(Error::Precondition(format!("alpha must be > 0, got {alpha}")));
    }
    let (j1, j2) = j_functionals(phi, forms)?;
    Ok(1.0 / (alpha * j1 + j2 / alpha))
}

/// Maximizer `sqrt(J2 / J1)` of `alpha -> J_alpha(phi)`.
pub fn optimal_alpha(phi: &[f64], forms: &TransversalForms) -> Result<f64> {
    let (j1, j2) = j_functionals(phi, forms)?;
    if !(j1 > 0.0) {
        return Err(Error::Precondition(format!("J1 must be > 0, got {j1}")));
    }
    Ok((j2 / j1).sqrt())
}

/// `q = inf e^{-beta} / sup(beta' e^{-beta})` over a dense grid that
/// contains the assembly quadrature points of `grid`.
pub fn drift_ratio(d: &DepthProfile, grid: &TransversalGrid) -> f64 {
    let dense = 4096;
    let samples = (0..=dense)
        .map(|i| d.delta() * i as f64 / dense as f64)
        .chain(grid.gauss_points().map(|(_, x, _)| x));
    let (mut inf_w, mut sup_b) = (f64::INFINITY, f64::NEG_INFINITY);
    for eta in samples {
        let (b, bp, _) = d.derivatives(eta);
        let e = (-b).exp();
        inf_w = inf_w.min(e);
        sup_b = sup_b.max(bp * e);
    }
    inf_w / sup_b
}

/// `(alpha q + (pi^2 / 4 delta^2) q / alpha)^{-1}`.
pub fn dispersion_upper_bound(q: f64, delta: f64, alpha: f64) -> f64 {
    1.0 / (alpha * q + PI * PI / (4.0 * delta * delta) * q / alpha)
}
