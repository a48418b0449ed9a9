//! Symmetric tridiagonal matrices and the definite tridiagonal pencil `P x = w A x`.

use crate::error::{Error, Result};

/// Symmetric tridiagonal matrix; `off[i]` couples rows `i` and `i + 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymTridiag {
    pub diag: Vec<f64>,
    pub off: Vec<f64>,
}

impl SymTridiag {
    pub fn zeros(n: usize) -> Self {
        Self { diag: vec![0.0; n], off: vec![0.0; n.saturating_sub(1)] }
    }

    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    /// `a * self + b * other`.
    pub fn combine(&self, a: f64, other: &SymTridiag, b: f64) -> SymTridiag {
        SymTridiag {
            diag: self.diag.iter().zip(&other.diag).map(|(x, y)| a * x + b * y).collect(),
            off: self.off.iter().zip(&other.off).map(|(x, y)| a * x + b * y).collect(),
        }
    }

    pub fn scaled(&self, a: f64) -> SymTridiag {
        SymTridiag {
            diag: self.diag.iter().map(|x| a * x).collect(),
            off: self.off.iter().map(|x| a * x).collect(),
        }
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        let n = self.len();
        let mut y: Vec<f64> = self.diag.iter().zip(x).map(|(d, x)| d * x).collect();
        for i in 0..n.saturating_sub(1) {
            y[i] += self.off[i] * x[i + 1];
            y[i + 1] += self.off[i] * x[i];
        }
        y
    }

    /// `x^T A y`.
    pub fn bilinear(&self, x: &[f64], y: &[f64]) -> f64 {
        self.matvec(y).iter().zip(x).map(|(a, b)| a * b).sum()
    }

    pub fn quad(&self, x: &[f64]) -> f64 {
        self.bilinear(x, x)
    }

    pub fn is_zero(&self) -> bool {
        self.diag.iter().chain(&self.off).all(|&v| v == 0.0)
    }

    pub fn to_dense(&self) -> nalgebra::DMatrix<f64> {
        let n = self.len();
        let mut m = nalgebra::DMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = self.diag[i];
            if i + 1 < n {
                m[(i, i + 1)] = self.off[i];
                m[(i + 1, i)] = self.off[i];
            }
        }
        m
    }

    /// Checks positive definiteness through the `LDL^T` pivots.
    pub fn check_positive_definite(&self) -> Result<()> {
        let mut d = 0.0;
        for i in 0..self.len() {
            d = if i == 0 { self.diag[0] } else { self.diag[i] - self.off[i - 1].powi(2) / d };
            if !(d > 0.0) {
                return Err(Error::Factorization { pivot: i });
            }
        }
        Ok(())
    }
}

/// Number of eigenvalues of `P x = w A x` strictly greater than `w`.
///
/// By Sylvester's law of inertia this is the number of positive pivots of
/// `P - w A`, which requires `A` positive definite.
pub fn count_above(p: &SymTridiag, a: &SymTridiag, w: f64) -> usize {
    let n = p.len();
    let mut count = 0;
    let mut d = 0.0;
    for i in 0..n {
        let s = p.diag[i] - w * a.diag[i];
        d = if i == 0 {
            s
        } else {
            let e = p.off[i - 1] - w * a.off[i - 1];
            s - e * e / d
        };
        if d == 0.0 {
            d = -f64::EPSILON * (s.abs() + f64::MIN_POSITIVE);
        }
        if d > 0.0 {
            count += 1;
        }
    }
    count
}

/// Gaussian elimination with partial pivoting for a general tridiagonal
/// system `sub[i] x[i-1] + diag[i] x[i] + sup[i] x[i+1] = rhs[i]`.
fn solve_general(sub: &[f64], diag: &[f64], sup: &[f64], rhs: &mut [f64]) {
    let n = diag.len();
    // Row i of U holds up to three entries: u0 (diag), u1, u2.
    let mut u0 = diag.to_vec();
    let mut u1: Vec<f64> = (0..n).map(|i| if i + 1 < n { sup[i] } else { 0.0 }).collect();
    let mut u2 = vec![0.0; n];
    let tiny = f64::MIN_POSITIVE.sqrt();
    for i in 0..n.saturating_sub(1) {
        let (mut l0, mut l1, mut l2) = (sub[i + 1], diag[i + 1], if i + 2 < n { sup[i + 1] } else { 0.0 });
        if l0.abs() > u0[i].abs() {
            std::mem::swap(&mut u0[i], &mut l0);
            std::mem::swap(&mut u1[i], &mut l1);
            std::mem::swap(&mut u2[i], &mut l2);
            rhs.swap(i, i + 1);
        }
        if u0[i] == 0.0 {
            u0[i] = tiny;
        }
        let f = l0 / u0[i];
        u0[i + 1] = l1 - f * u1[i];
        u1[i + 1] = l2 - f * u2[i];
        rhs[i + 1] -= f * rhs[i];
    }
    if u0[n - 1] == 0.0 {
        u0[n - 1] = tiny;
    }
    for i in (0..n).rev() {
        let mut s = rhs[i];
        if i + 1 < n {
            s -= u1[i] * rhs[i + 1];
        }
        if i + 2 < n {
            s -= u2[i] * rhs[i + 2];
        }
        rhs[i] = s / u0[i];
    }
}

/// Eigenpair of the tridiagonal pencil, `A`-normalized.
#[derive(Debug, Clone, PartialEq)]
pub struct PencilPair {
    pub value: f64,
    pub vector: Vec<f64>,
}

/// The `k` largest eigenpairs of `P x = w A x` (descending), `A` positive
/// definite: bisection on the inertia count followed by inverse iteration.
pub fn top_eigenpairs(p: &SymTridiag, a: &SymTridiag, k: usize) -> Result<Vec<PencilPair>> {
    let n = p.len();
    if k == 0 || k > n {
        return Err(Error::Precondition(format!("requested {k} eigenpairs of a pencil of size {n}")));
    }
    a.check_positive_definite()?;
    let mut hi = 1.0;
    while count_above(p, a, hi) > 0 {
        hi *= 2.0;
    }
    let mut lo = -1.0;
    while count_above(p, a, lo) < n {
        lo *= 2.0;
    }
    let mut pairs: Vec<PencilPair> = Vec::with_capacity(k);
    for j in 1..=k {
        // Invariant: count(l) >= j > count(h).
        let (mut l, mut h) = (lo, hi);
        for _ in 0..256 {
            let mid = 0.5 * (l + h);
            if mid <= l || mid >= h || h - l <= 2.0 * f64::EPSILON * l.abs().max(h.abs()) {
                break;
            }
            if count_above(p, a, mid) >= j {
                l = mid;
            } else {
                h = mid;
            }
        }
        let value = 0.5 * (l + h);
        let vector = inverse_iteration(p, a, value, &pairs);
        let num = p.quad(&vector);
        let den = a.quad(&vector);
        pairs.push(PencilPair { value: num / den, vector });
        hi = h;
    }
    Ok(pairs)
}

fn inverse_iteration(p: &SymTridiag, a: &SymTridiag, shift: f64, previous: &[PencilPair]) -> Vec<f64> {
    let n = p.len();
    let sub: Vec<f64> = (0..n).map(|i| if i == 0 { 0.0 } else { p.off[i - 1] - shift * a.off[i - 1] }).collect();
    let sup: Vec<f64> = (0..n).map(|i| if i + 1 < n { p.off[i] - shift * a.off[i] } else { 0.0 }).collect();
    let diag: Vec<f64> = (0..n).map(|i| p.diag[i] - shift * a.diag[i]).collect();
    let mut x: Vec<f64> = (0..n).map(|i| 1.0 + 0.25 * ((i as f64 * 0.7548776662).fract() - 0.5)).collect();
    for _ in 0..4 {
        let mut rhs = a.matvec(&x);
        solve_general(&sub, &diag, &sup, &mut rhs);
        let big = rhs.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        if !(big > 0.0 && big.is_finite()) {
            break;
        }
        x = rhs.iter().map(|v| v / big).collect();
        for q in previous {
            let c = a.bilinear(&q.vector, &x);
            for (xi, qi) in x.iter_mut().zip(&q.vector) {
                *xi -= c * qi;
            }
        }
        let norm = a.quad(&x).sqrt();
        if norm == 0.0 || !norm.is_finite() {
            break;
        }
        x.iter_mut().for_each(|v| *v /= norm);
    }
    x
}
