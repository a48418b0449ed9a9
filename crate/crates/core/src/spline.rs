//! Cubic interpolating splines on uniform knots.

/// End condition of a cubic spline.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EndCondition {
    /// Zero second derivative at both ends.
    Natural,
    /// Prescribed first derivative at both ends.
    Clamped(f64, f64),
}

/// C² cubic spline through equispaced samples on `[x0, x0 + h (n-1)]`.
#[derive(Debug, Clone, PartialEq)]
pub struct CubicSpline {
    x0: f64,
    h: f64,
    y: Vec<f64>,
    /// Second derivatives at the knots.
    m: Vec<f64>,
}

impl CubicSpline {
    pub fn new(x0: f64, x1: f64, y: &[f64], end: EndCondition) -> Self {
        let n = y.len();
        assert!(n >= 2, "spline needs at least two samples");
        let h = (x1 - x0) / (n - 1) as f64;
        let mut sub = vec![0.0; n];
        let mut diag = vec![0.0; n];
        let mut sup = vec![0.0; n];
        let mut rhs = vec![0.0; n];
        for i in 1..n - 1 {
            sub[i] = h / 6.0;
            diag[i] = 2.0 * h / 3.0;
            sup[i] = h / 6.0;
            rhs[i] = (y[i + 1] - 2.0 * y[i] + y[i - 1]) / h;
        }
        match end {
            EndCondition::Natural => {
                diag[0] = 1.0;
                diag[n - 1] = 1.0;
            }
            EndCondition::Clamped(d0, d1) => {
                diag[0] = h / 3.0;
                sup[0] = h / 6.0;
                rhs[0] = (y[1] - y[0]) / h - d0;
                sub[n - 1] = h / 6.0;
                diag[n - 1] = h / 3.0;
                rhs[n - 1] = d1 - (y[n - 1] - y[n - 2]) / h;
            }
        }
        // Thomas algorithm; the system is diagonally dominant.
        for i in 1..n {
            let w = sub[i] / diag[i - 1];
            diag[i] -= w * sup[i - 1];
            rhs[i] -= w * rhs[i - 1];
        }
        let mut m = vec![0.0; n];
        m[n - 1] = rhs[n - 1] / diag[n - 1];
        for i in (0..n - 1).rev() {
            m[i] = (rhs[i] - sup[i] * m[i + 1]) / diag[i];
        }
        Self { x0, h, y: y.to_vec(), m }
    }

    pub fn knots(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.y.len()).map(move |i| self.x0 + i as f64 * self.h)
    }

    pub fn samples(&self) -> &[f64] {
        &self.y
    }

    fn locate(&self, x: f64) -> (usize, f64, f64) {
        let n = self.y.len();
        let t = ((x - self.x0) / self.h).clamp(0.0, (n - 1) as f64);
        let i = (t.floor() as usize).min(n - 2);
        let a = self.x0 + (i + 1) as f64 * self.h - x;
        let b = x - (self.x0 + i as f64 * self.h);
        (i, a, b)
    }

    /// Value, first and second derivative at `x` (clamped to the knot range).
    pub fn eval3(&self, x: f64) -> (f64, f64, f64) {
        let (i, a, b) = self.locate(x);
        let h = self.h;
        let (m0, m1) = (self.m[i], self.m[i + 1]);
        let (y0, y1) = (self.y[i], self.y[i + 1]);
        let v = m0 * a * a * a / (6.0 * h)
            + m1 * b * b * b / (6.0 * h)
            + (y0 / h - m0 * h / 6.0) * a
            + (y1 / h - m1 * h / 6.0) * b;
        let d = -m0 * a * a / (2.0 * h) + m1 * b * b / (2.0 * h) - (y0 / h - m0 * h / 6.0)
            + (y1 / h - m1 * h / 6.0);
        let dd = (m0 * a + m1 * b) / h;
        (v, d, dd)
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.eval3(x).0
    }
}
