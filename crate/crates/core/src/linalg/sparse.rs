//! Compressed sparse row matrices assembled from triplets.

use super::banded::HermitianBand;
use super::scalar::Scalar;

/// Real CSR matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Csr {
    n: usize,
    row_ptr: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<f64>,
}

/// Triplet accumulator for square matrices with a prescribed symmetry.
///
/// Only entries with `row <= col` are accumulated; the lower triangle is
/// mirrored with `sign` at build time, so `A^T = sign * A` holds exactly.
#[derive(Debug, Clone)]
pub struct SymmetricBuilder {
    n: usize,
    sign: f64,
    entries: Vec<(usize, usize, f64)>,
}

impl SymmetricBuilder {
    /// `sign = 1` for symmetric, `-1` for skew-symmetric matrices.
    pub fn new(n: usize, sign: f64) -> Self {
        Self { n, sign, entries: Vec::new() }
    }

    /// Adds `v` at `(r, c)`; entries with `r > c` are folded onto `(c, r)`.
    pub fn add(&mut self, r: usize, c: usize, v: f64) {
        if r == c && self.sign < 0.0 {
            return;
        }
        if r <= c {
            self.entries.push((r, c, v));
        } else {
            self.entries.push((c, r, self.sign * v));
        }
    }

    pub fn build(mut self) -> Csr {
        self.entries.sort_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));
        let mut upper: Vec<(usize, usize, f64)> = Vec::with_capacity(self.entries.len());
        for (r, c, v) in self.entries {
            match upper.last_mut() {
                Some(last) if last.0 == r && last.1 == c => last.2 += v,
                _ => upper.push((r, c, v)),
            }
        }
        let mut all: Vec<(usize, usize, f64)> = Vec::with_capacity(2 * upper.len());
        for &(r, c, v) in &upper {
            all.push((r, c, v));
            if r != c {
                all.push((c, r, self.sign * v));
            }
        }
        all.sort_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));
        let mut row_ptr = vec![0; self.n + 1];
        let mut cols = Vec::with_capacity(all.len());
        let mut vals = Vec::with_capacity(all.len());
        for (r, c, v) in all {
            row_ptr[r + 1] += 1;
            cols.push(c);
            vals.push(v);
        }
        for i in 0..self.n {
            row_ptr[i + 1] += row_ptr[i];
        }
        Csr { n: self.n, row_ptr, cols, vals }
    }
}

impl Csr {
    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn nnz(&self) -> usize {
        self.vals.len()
    }

    pub fn get(&self, r: usize, c: usize) -> f64 {
        let range = self.row_ptr[r]..self.row_ptr[r + 1];
        match self.cols[range.clone()].binary_search(&c) {
            Ok(k) => self.vals[range.start + k],
            Err(_) => 0.0,
        }
    }

    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.n).flat_map(move |r| {
            (self.row_ptr[r]..self.row_ptr[r + 1]).map(move |k| (r, self.cols[k], self.vals[k]))
        })
    }

    /// `y = A x` for real or complex `x`.
    pub fn matvec<T: Scalar>(&self, x: &[T]) -> Vec<T> {
        let mut y = vec![T::ZERO; self.n];
        self.matvec_into(x, &mut y);
        y
    }

    pub fn matvec_into<T: Scalar>(&self, x: &[T], y: &mut [T]) {
        for (r, yr) in y.iter_mut().enumerate() {
            let mut s = T::ZERO;
            for k in self.row_ptr[r]..self.row_ptr[r + 1] {
                s += x[self.cols[k]] * self.vals[k];
            }
            *yr = s;
        }
    }

    /// `x^H A x` (real part).
    pub fn quad<T: Scalar>(&self, x: &[T]) -> f64 {
        let y = self.matvec(x);
        super::scalar::dot(x, &y).re()
    }

    /// Largest `|r - c|` over stored entries.
    pub fn bandwidth(&self) -> usize {
        self.triplets().map(|(r, c, _)| r.abs_diff(c)).max().unwrap_or(0)
    }

    /// `max |A - sign A^T|` over stored entries.
    pub fn symmetry_defect(&self, sign: f64) -> f64 {
        self.triplets().map(|(r, c, v)| (v - sign * self.get(c, r)).abs()).fold(0.0, f64::max)
    }

    /// Lower band of `a * self + b * (-i) * other`, where `other` is skew;
    /// the result is Hermitian.
    pub fn hermitian_band_with_skew(
        &self,
        a: f64,
        other: Option<(&Csr, f64)>,
        bw: usize,
    ) -> HermitianBand<num_complex::Complex64> {
        use num_complex::Complex64;
        let mut band = HermitianBand::zeros(self.n, bw);
        for (r, c, v) in self.triplets() {
            if c <= r {
                band.add_lower(r, c, Complex64::new(a * v, 0.0));
            }
        }
        if let Some((s, b)) = other {
            for (r, c, v) in s.triplets() {
                if c < r {
                    band.add_lower(r, c, Complex64::new(0.0, -b * v));
                }
            }
        }
        band
    }

    pub fn real_band(&self, bw: usize) -> HermitianBand<f64> {
        let mut band = HermitianBand::zeros(self.n, bw);
        for (r, c, v) in self.triplets() {
            if c <= r {
                band.add_lower(r, c, v);
            }
        }
        band
    }
}
