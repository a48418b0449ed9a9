//! Thick-restart Lanczos for operators self-adjoint in a weighted inner product.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::scalar::{axpy, dot};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LanczosOptions {
    /// Number of wanted eigenpairs (largest algebraic).
    pub nev: usize,
    /// Maximal basis size before a restart.
    pub ncv: usize,
    /// Relative residual tolerance `|T y - theta y| <= tol |theta|`.
    pub tol: f64,
    pub max_restarts: usize,
    pub seed: u64,
    /// Return the current Ritz pairs instead of failing at the restart cap.
    pub accept_unconverged: bool,
}

impl LanczosOptions {
    pub fn new(nev: usize) -> Self {
        Self { nev, ncv: (2 * nev + 20).max(32), tol: 1e-12, max_restarts: 200, seed: 0x5eed, accept_unconverged: false }
    }
}

#[derive(Debug, Clone)]
pub struct RitzPairs {
    pub values: Vec<f64>,
    pub vectors: Vec<Vec<Complex64>>,
    pub residuals: Vec<f64>,
    pub restarts: usize,
}

/// Largest eigenpairs of `T`, self-adjoint with respect to `<x, y> = x^H G y`.
///
/// `apply` computes `T x` and `gram` computes `G x`. Full reorthogonalization
/// is used; basis vectors are `G`-orthonormal.
pub fn largest<A, G>(n: usize, apply: A, gram: G, opts: &LanczosOptions) -> Result<RitzPairs>
where
    A: Fn(&[Complex64]) -> Vec<Complex64>,
    G: Fn(&[Complex64]) -> Vec<Complex64>,
{
    let nev = opts.nev.min(n);
    let ncv = opts.ncv.min(n).max(nev + 1).min(n);
    if nev == 0 {
        return Err(Error::Precondition("Lanczos needs at least one wanted eigenpair".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut v0: Vec<Complex64> =
        (0..n).map(|_| Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5)).collect();
    let g0 = gram(&v0);
    let nrm = dot(&v0, &g0).re.sqrt();
    v0.iter_mut().for_each(|x| *x /= nrm);

    // Basis V, G V and the projected matrix H = V^H G T V.
    let mut basis: Vec<Vec<Complex64>> = vec![v0];
    let mut gbasis: Vec<Vec<Complex64>> = vec![g0.iter().map(|x| x / nrm).collect()];
    let mut h = DMatrix::<f64>::zeros(ncv, ncv);
    let mut start = 0usize;
    let mut restarts = 0usize;
    loop {
        let mut beta_last = 0.0;
        let mut residual_vec: Vec<Complex64> = Vec::new();
        for j in start..ncv {
            let mut w = apply(&basis[j]);
            // Two passes of classical Gram-Schmidt in the G inner product.
            for pass in 0..2 {
                for (i, gv) in gbasis.iter().enumerate() {
                    let c = dot(gv, &w);
                    // H is real up to round-off; the imaginary part is still removed from w.
                    let hij = if pass == 0 { c.re } else { h[(i, j)] + c.re };
                    h[(i, j)] = hij;
                    h[(j, i)] = hij;
                    axpy(-c, &basis[i], &mut w);
                }
            }
            let gw = gram(&w);
            let beta = dot(&w, &gw).re.max(0.0).sqrt();
            let scale = (0..=j).map(|i| h[(i, j)].abs()).fold(f64::MIN_POSITIVE, f64::max);
            if j + 1 < ncv {
                if beta <= 1e-14 * scale {
                    // Invariant subspace: continue with a fresh random direction.
                    let mut r: Vec<Complex64> =
                        (0..n).map(|_| Complex64::new(rng.gen::<f64>() - 0.5, 0.0)).collect();
                    for _ in 0..2 {
                        for (i, gv) in gbasis.iter().enumerate() {
                            let c = dot(gv, &r);
                            axpy(-c, &basis[i], &mut r);
                        }
                    }
                    let gr = gram(&r);
                    let nr = dot(&r, &gr).re.sqrt();
                    basis.push(r.iter().map(|x| x / nr).collect());
                    gbasis.push(gr.iter().map(|x| x / nr).collect());
                    h[(j + 1, j)] = 0.0;
                    h[(j, j + 1)] = 0.0;
                } else {
                    basis.push(w.iter().map(|x| x / beta).collect());
                    gbasis.push(gw.iter().map(|x| x / beta).collect());
                    h[(j + 1, j)] = beta;
                    h[(j, j + 1)] = beta;
                }
            } else {
                beta_last = beta;
                residual_vec = if beta > 0.0 { w.iter().map(|x| x / beta).collect() } else { w };
            }
        }

        let eig = SymmetricEigen::new(h.clone());
        let mut order: Vec<usize> = (0..ncv).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
        let res: Vec<f64> = order.iter().map(|&k| (beta_last * eig.eigenvectors[(ncv - 1, k)]).abs()).collect();
        let theta: Vec<f64> = order.iter().map(|&k| eig.eigenvalues[k]).collect();
        let converged = (0..nev).all(|i| res[i] <= opts.tol * theta[i].abs().max(f64::MIN_POSITIVE));
        if converged || restarts >= opts.max_restarts || ncv == n {
            if !converged && ncv < n && !opts.accept_unconverged {
                let worst = (0..nev).map(|i| res[i] / theta[i].abs().max(f64::MIN_POSITIVE)).fold(0.0, f64::max);
                return Err(Error::NoConvergence { iterations: restarts, residual: worst });
            }
            let vectors = order[..nev]
                .iter()
                .map(|&k| {
                    let mut y = vec![Complex64::new(0.0, 0.0); n];
                    for (i, v) in basis.iter().enumerate() {
                        axpy(Complex64::new(eig.eigenvectors[(i, k)], 0.0), v, &mut y);
                    }
                    y
                })
                .collect();
            return Ok(RitzPairs {
                values: theta[..nev].to_vec(),
                vectors,
                residuals: res[..nev].to_vec(),
                restarts,
            });
        }

        // Thick restart: keep the best `keep` Ritz vectors plus the residual.
        let keep = (nev + (ncv - nev) / 2).min(ncv - 1);
        let mut new_basis = Vec::with_capacity(ncv);
        let mut new_gbasis = Vec::with_capacity(ncv);
        for &k in &order[..keep] {
            let mut y = vec![Complex64::new(0.0, 0.0); n];
            let mut gy = vec![Complex64::new(0.0, 0.0); n];
            for i in 0..ncv {
                let c = Complex64::new(eig.eigenvectors[(i, k)], 0.0);
                axpy(c, &basis[i], &mut y);
                axpy(c, &gbasis[i], &mut gy);
            }
            new_basis.push(y);
            new_gbasis.push(gy);
        }
        let mut hn = DMatrix::<f64>::zeros(ncv, ncv);
        for (i, &k) in order[..keep].iter().enumerate() {
            hn[(i, i)] = theta[i];
            let b = beta_last * eig.eigenvectors[(ncv - 1, k)];
            hn[(i, keep)] = b;
            hn[(keep, i)] = b;
        }
        let gr = gram(&residual_vec);
        new_basis.push(residual_vec);
        new_gbasis.push(gr);
        basis = new_basis;
        gbasis = new_gbasis;
        h = hn;
        start = keep;
        restarts += 1;
    }
}
