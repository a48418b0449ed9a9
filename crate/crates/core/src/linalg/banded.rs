//! Hermitian positive-definite band matrices and their Cholesky factors.

use super::scalar::Scalar;
use crate::error::{Error, Result};

/// Lower half of a Hermitian band matrix with half-bandwidth `bw`.
///
/// Row `i` stores columns `i - bw ..= i` at offsets `0 ..= bw`.
#[derive(Debug, Clone)]
pub struct HermitianBand<T> {
    n: usize,
    bw: usize,
    data: Vec<T>,
}

impl<T: Scalar> HermitianBand<T> {
    pub fn zeros(n: usize, bw: usize) -> Self {
        Self { n, bw, data: vec![T::ZERO; n * (bw + 1)] }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn bandwidth(&self) -> usize {
        self.bw
    }

    #[inline]
    fn idx(&self, i: usize, j: usize) -> usize {
        i * (self.bw + 1) + (j + self.bw - i)
    }

    /// Adds `v` at `(i, j)`, `j <= i`, `i - j <= bw`.
    #[inline]
    pub fn add_lower(&mut self, i: usize, j: usize, v: T) {
        debug_assert!(j <= i && i - j <= self.bw);
        let k = self.idx(i, j);
        self.data[k] += v;
    }

    pub fn get(&self, i: usize, j: usize) -> T {
        if j > i {
            return self.get(j, i).conj();
        }
        if i - j > self.bw {
            return T::ZERO;
        }
        self.data[self.idx(i, j)]
    }

    /// In-place `L L^H` factorization; fails on the first non-positive pivot.
    pub fn cholesky(mut self) -> Result<BandCholesky<T>> {
        let (n, bw) = (self.n, self.bw);
        for i in 0..n {
            let j0 = i.saturating_sub(bw);
            for j in j0..=i {
                // L[i][k] and L[j][k] are both inside the band for k >= j0.
                let mut s = self.data[self.idx(i, j)];
                let ri = self.idx(i, j0);
                let rj = self.idx(j, j0);
                for t in 0..j - j0 {
                    s -= self.data[ri + t] * self.data[rj + t].conj();
                }
                if i == j {
                    let d = s.re();
                    if !(d > 0.0) || !d.is_finite() {
                        return Err(Error::Factorization { pivot: i });
                    }
                    let k = self.idx(i, i);
                    self.data[k] = T::from_real(d.sqrt());
                } else {
                    let djj = self.data[self.idx(j, j)];
                    let k = self.idx(i, j);
                    self.data[k] = s / djj;
                }
            }
        }
        Ok(BandCholesky { band: self })
    }
}

/// Cholesky factor `L` of a Hermitian band matrix.
#[derive(Debug, Clone)]
pub struct BandCholesky<T> {
    band: HermitianBand<T>,
}

impl<T: Scalar> BandCholesky<T> {
    pub fn dim(&self) -> usize {
        self.band.n
    }

    /// Solves `L L^H x = b` in place.
    pub fn solve_in_place(&self, x: &mut [T]) {
        self.forward(x);
        self.backward(x);
    }

    pub fn solve(&self, b: &[T]) -> Vec<T> {
        let mut x = b.to_vec();
        self.solve_in_place(&mut x);
        x
    }

    /// Applies `L^{-1}`.
    pub fn forward(&self, x: &mut [T]) {
        let (n, bw) = (self.band.n, self.band.bw);
        let d = &self.band.data;
        for i in 0..n {
            let j0 = i.saturating_sub(bw);
            let row = self.band.idx(i, j0);
            let mut s = x[i];
            for (t, xj) in x[j0..i].iter().enumerate() {
                s -= d[row + t] * *xj;
            }
            x[i] = s / d[self.band.idx(i, i)];
        }
    }

    /// Applies `L^{-H}`.
    pub fn backward(&self, x: &mut [T]) {
        let (n, bw) = (self.band.n, self.band.bw);
        let d = &self.band.data;
        for i in (0..n).rev() {
            x[i] = x[i] / d[self.band.idx(i, i)].conj();
            let xi = x[i];
            let j0 = i.saturating_sub(bw);
            let row = self.band.idx(i, j0);
            for (t, xj) in x[j0..i].iter_mut().enumerate() {
                *xj -= d[row + t].conj() * xi;
            }
        }
    }
}
