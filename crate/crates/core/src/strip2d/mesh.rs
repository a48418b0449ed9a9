use crate::error::{Error, Result};
use crate::profiles::{CurvatureProfile, DepthProfile};
use crate::quadrature::gauss2;

/// Uniform tensor mesh of the truncated strip `[-L, L] x [0, delta]`.
#[derive(Debug, Clone)]
pub struct StripMesh2D {
    pub l: f64,
    /// Cells in `xi`.
    pub m: usize,
    /// Cells in `eta`.
    pub n: usize,
    pub delta: f64,
    pub curvature: CurvatureProfile,
    /// `gamma` at the two Gauss abscissae of every `xi` cell.
    pub gamma_gauss: Vec<[f64; 2]>,
    /// `p = 1 + eta gamma` at every Gauss point, indexed by
    /// `(2 ci + gi) * 2n + (2 cj + gj)`.
    pub p_samples: Vec<f64>,
}

impl StripMesh2D {
    pub fn hx(&self) -> f64 {
        2.0 * self.l / self.m as f64
    }

    pub fn hy(&self) -> f64 {
        self.delta / self.n as f64
    }

    pub fn xi(&self, i: usize) -> f64 {
        if i == self.m {
            self.l
        } else {
            -self.l + i as f64 * self.hx()
        }
    }

    pub fn eta(&self, j: usize) -> f64 {
        if j == self.n {
            self.delta
        } else {
            j as f64 * self.hy()
        }
    }

    pub fn xi_gauss(&self, ci: usize) -> [(f64, f64); 2] {
        gauss2(self.xi(ci), self.xi(ci + 1))
    }

    pub fn eta_gauss(&self, cj: usize) -> [(f64, f64); 2] {
        gauss2(self.eta(cj), self.eta(cj + 1))
    }

    pub fn p_at(&self, ci: usize, gi: usize, cj: usize, gj: usize) -> f64 {
        self.p_samples[(2 * ci + gi) * 2 * self.n + 2 * cj + gj]
    }

    pub fn p_range(&self) -> (f64, f64) {
        self.p_samples.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &p| (lo.min(p), hi.max(p)))
    }

    /// `p` at mesh node `(i, j)`.
    pub fn p_node(&self, i: usize, j: usize) -> f64 {
        1.0 + self.eta(j) * self.curvature.gamma(self.xi(i))
    }

    pub fn p_node_range(&self) -> (f64, f64) {
        let mut r = (f64::INFINITY, f64::NEG_INFINITY);
        for i in 0..=self.m {
            for j in 0..=self.n {
                let p = self.p_node(i, j);
                r = (r.0.min(p), r.1.max(p));
            }
        }
        r
    }

    pub fn support_radius(&self) -> f64 {
        self.curvature.support_radius()
    }
}

/// Samples the metric factor at all quadrature points of a uniform mesh.
pub fn build_mesh(c: &CurvatureProfile, d: &DepthProfile, l: f64, m: usize, n: usize) -> Result<StripMesh2D> {
    if !(l > c.support_radius()) {
        return Err(Error::Precondition(format!(
            "truncation half-length L = {l} must exceed the support radius R = {}",
            c.support_radius()
        )));
    }
    if m < 8 || n < 8 {
        return Err(Error::Precondition(format!("mesh needs m, n >= 8 cells, got {m} x {n}")));
    }
    let delta = d.delta();
    let margin = c.safety_margin(delta);
    if margin >= 1.0 {
        return Err(Error::SelfIntersection { margin });
    }
    let mut mesh = StripMesh2D {
        l,
        m,
        n,
        delta,
        curvature: c.clone(),
        gamma_gauss: Vec::with_capacity(m),
        p_samples: Vec::with_capacity(4 * m * n),
    };
    for ci in 0..m {
        let g = mesh.xi_gauss(ci).map(|(x, _)| c.gamma(x));
        mesh.gamma_gauss.push(g);
    }
    for ci in 0..m {
        for gi in 0..2 {
            let g = mesh.gamma_gauss[ci][gi];
            for cj in 0..n {
                for (eta, _) in mesh.eta_gauss(cj) {
                    let p = 1.0 + eta * g;
                    if !(p > 0.0) {
                        return Err(Error::SelfIntersection { margin });
                    }
                    mesh.p_samples.push(p);
                }
            }
        }
    }
    Ok(mesh)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn depth() -> DepthProfile {
        DepthProfile::new("log-depth", &[1.0], 1.0).unwrap()
    }

    #[test]
    fn straight_strip_has_unit_metric() {
        let m = build_mesh(&CurvatureProfile::zero(1.0).unwrap(), &depth(), 4.0, 16, 8).unwrap();
        assert!(m.p_samples.iter().all(|&p| p == 1.0));
        assert_eq!(m.xi(0), -4.0);
        assert_eq!(m.xi(16), 4.0);
    }

    #[test]
    fn metric_bounds_follow_curvature() {
        let c = CurvatureProfile::new("bump", &[0.1], 2.0).unwrap();
        let m = build_mesh(&c, &depth(), 4.0, 64, 16).unwrap();
        let (lo, hi) = m.p_range();
        assert!(lo >= 1.0 && hi <= 1.1 + 1e-15);

        let c = CurvatureProfile::new("bump", &[-0.5], 1.0).unwrap();
        let m = build_mesh(&c, &depth(), 2.0, 64, 16).unwrap();
        let (lo, _) = m.p_range();
        assert!(lo >= 0.5 && lo < 0.51);
        assert!((m.p_node_range().0 - 0.5).abs() < 1e-15);
    }

    #[test]
    fn rejects_short_truncation_and_coarse_meshes() {
        let c = CurvatureProfile::new("bump", &[0.1], 2.0).unwrap();
        assert!(build_mesh(&c, &depth(), 2.0, 64, 16).is_err());
        assert!(build_mesh(&c, &depth(), 4.0, 4, 16).is_err());
    }
}
