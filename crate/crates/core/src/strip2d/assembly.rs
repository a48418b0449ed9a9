use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::mesh::StripMesh2D;
use crate::linalg::{Csr, SymmetricBuilder};
use crate::profiles::DepthProfile;

/// Condition imposed on the artificial cuts `xi = -L` and `xi = L`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CutBc {
    Dirichlet,
    Neumann,
    Periodic,
}

impl std::fmt::Display for CutBc {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            CutBc::Dirichlet => "dirichlet",
            CutBc::Neumann => "neumann",
            CutBc::Periodic => "periodic",
        })
    }
}

/// Numbering of the free nodes: `xi` columns in band-friendly order, the
/// `n` free `eta` nodes `1..=n` contiguous inside each column.
#[derive(Debug, Clone, PartialEq)]
pub struct DofMap {
    pub m: usize,
    pub n: usize,
    pub cut_bc: CutBc,
    /// Position of `xi` node `i` in the column order, `None` if constrained.
    column: Vec<Option<usize>>,
    columns: usize,
}

impl DofMap {
    pub fn new(m: usize, n: usize, cut_bc: CutBc) -> Self {
        let mut column = vec![None; m + 1];
        let columns = match cut_bc {
            CutBc::Neumann => {
                for (i, c) in column.iter_mut().enumerate() {
                    *c = Some(i);
                }
                m + 1
            }
            CutBc::Dirichlet => {
                for i in 1..m {
                    column[i] = Some(i - 1);
                }
                m - 1
            }
            CutBc::Periodic => {
                // 0, 1, m-1, 2, m-2, ... keeps ring neighbours within two columns.
                let mut order = vec![0usize];
                let (mut lo, mut hi) = (1usize, m - 1);
                while lo <= hi {
                    order.push(lo);
                    if hi != lo {
                        order.push(hi);
                    }
                    lo += 1;
                    hi -= 1;
                }
                for (pos, &i) in order.iter().enumerate() {
                    column[i] = Some(pos);
                }
                column[m] = column[0];
                m
            }
        };
        Self { m, n, cut_bc, column, columns }
    }

    pub fn len(&self) -> usize {
        self.columns * self.n
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Unknown index of node `(i, j)`, or `None` when constrained.
    pub fn dof(&self, i: usize, j: usize) -> Option<usize> {
        if j == 0 {
            return None;
        }
        self.column[i].map(|c| c * self.n + j - 1)
    }

    /// Half-bandwidth of the assembled matrices.
    pub fn bandwidth(&self) -> usize {
        match self.cut_bc {
            CutBc::Periodic => 2 * self.n + 1,
            _ => self.n + 1,
        }
    }
}

/// Discrete forms of the pencil `omega L - M` on a strip mesh.
///
/// `L` is real symmetric; `M = -i S` with `S` real skew-symmetric, so `M` is
/// Hermitian.
#[derive(Debug, Clone)]
pub struct PencilForms2D {
    pub lh: Csr,
    pub s: Csr,
    /// Weighted mass `∫∫ e^{-beta} p N N`.
    pub w: Csr,
    /// Weighted mass restricted to `|xi| <= R + 2 delta`.
    pub w_inner: Csr,
    pub dofs: DofMap,
    pub cut_bc: CutBc,
    pub mesh: StripMesh2D,
    /// Half-width of the localization window.
    pub inner_radius: f64,
}

impl PencilForms2D {
    pub fn dim(&self) -> usize {
        self.dofs.len()
    }

    /// `M x = -i S x`.
    pub fn apply_m(&self, x: &[Complex64]) -> Vec<Complex64> {
        self.s.matvec(x).into_iter().map(|v| Complex64::new(v.im, -v.re)).collect()
    }

    /// `max |M - M^H|` over stored entries (zero by construction).
    pub fn hermiticity_defect(&self) -> f64 {
        self.s.symmetry_defect(-1.0)
    }

    /// Nodal field on the full `(m + 1) x (n + 1)` grid, `xi`-major, with
    /// zeros on constrained nodes.
    pub fn nodal_field(&self, x: &[Complex64]) -> Vec<Complex64> {
        let (m, n) = (self.dofs.m, self.dofs.n);
        let mut out = vec![Complex64::new(0.0, 0.0); (m + 1) * (n + 1)];
        for i in 0..=m {
            for j in 0..=n {
                if let Some(k) = self.dofs.dof(i, j) {
                    out[i * (n + 1) + j] = x[k];
                }
            }
        }
        out
    }
}

/// Bilinear elements with 2 x 2 Gauss quadrature per cell.
pub fn assemble_pencil_2d(mesh: &StripMesh2D, d: &DepthProfile, cut_bc: CutBc) -> PencilForms2D {
    let (m, n) = (mesh.m, mesh.n);
    let dofs = DofMap::new(m, n, cut_bc);
    let size = dofs.len();
    let mut lh = SymmetricBuilder::new(size, 1.0);
    let mut sk = SymmetricBuilder::new(size, -1.0);
    let mut w = SymmetricBuilder::new(size, 1.0);
    let mut w_in = SymmetricBuilder::new(size, 1.0);
    let inner_radius = mesh.support_radius() + 2.0 * mesh.delta;
    let (hx, hy) = (mesh.hx(), mesh.hy());

    // eta factors at the Gauss points of each eta cell
    let eta_data: Vec<[(f64, f64, f64, f64); 2]> = (0..n)
        .map(|cj| {
            mesh.eta_gauss(cj).map(|(eta, wq)| {
                let (beta, bp, _) = d.derivatives(eta);
                let e = (-beta).exp();
                (eta, wq, e, bp * e)
            })
        })
        .collect();

    for ci in 0..m {
        let xg = mesh.xi_gauss(ci);
        for cj in 0..n {
            let corners = [(ci, cj), (ci + 1, cj), (ci, cj + 1), (ci + 1, cj + 1)];
            let ids: Vec<Option<usize>> = corners.iter().map(|&(i, j)| dofs.dof(i, j)).collect();
            if ids.iter().all(Option::is_none) {
                continue;
            }
            let mut kl = [[0.0; 4]; 4];
            let mut cl = [[0.0; 4]; 4];
            let mut ml = [[0.0; 4]; 4];
            let mut inner = [[0.0; 4]; 4];
            for (gi, &(xi, wx)) in xg.iter().enumerate() {
                let tx = (xi - mesh.xi(ci)) / hx;
                let nx = [1.0 - tx, tx];
                let dnx = [-1.0 / hx, 1.0 / hx];
                for (gj, &(eta, wy, e, drift)) in eta_data[cj].iter().enumerate() {
                    let ty = (eta - mesh.eta(cj)) / hy;
                    let ny = [1.0 - ty, ty];
                    let dny = [-1.0 / hy, 1.0 / hy];
                    let p = mesh.p_at(ci, gi, cj, gj);
                    let wq = wx * wy;
                    let inside = xi.abs() <= inner_radius;
                    let shape = |k: usize| (nx[k % 2] * ny[k / 2], dnx[k % 2] * ny[k / 2], nx[k % 2] * dny[k / 2]);
                    for r in 0..4 {
                        let (vr, xr, yr) = shape(r);
                        for c in 0..4 {
                            let (vc, xc, yc) = shape(c);
                            kl[r][c] += wq * e * (xr * xc / p + p * yr * yc);
                            cl[r][c] += wq * drift * xc * vr;
                            ml[r][c] += wq * e * p * vr * vc;
                            if inside {
                                inner[r][c] += wq * e * p * vr * vc;
                            }
                        }
                    }
                }
            }
            for r in 0..4 {
                for c in 0..4 {
                    let (Some(gr), Some(gc)) = (ids[r], ids[c]) else { continue };
                    if gr <= gc {
                        lh.add(gr, gc, kl[r][c]);
                        w.add(gr, gc, ml[r][c]);
                        w_in.add(gr, gc, inner[r][c]);
                    }
                    if gr < gc {
                        sk.add(gr, gc, 0.5 * (cl[r][c] - cl[c][r]));
                    }
                }
            }
        }
    }
    PencilForms2D {
        lh: lh.build(),
        s: sk.build(),
        w: w.build(),
        w_inner: w_in.build(),
        dofs,
        cut_bc,
        mesh: mesh.clone(),
        inner_radius,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profiles::CurvatureProfile;
    use crate::strip2d::mesh::build_mesh;

    fn forms(cut: CutBc, a: f64) -> PencilForms2D {
        let d = DepthProfile::new("log-depth", &[1.0], 1.0).unwrap();
        let c = if a == 0.0 {
            CurvatureProfile::zero(1.0).unwrap()
        } else {
            CurvatureProfile::new("bump", &[a], 1.0).unwrap()
        };
        let mesh = build_mesh(&c, &d, 2.0, 16, 8).unwrap();
        assemble_pencil_2d(&mesh, &d, cut)
    }

    #[test]
    fn exact_symmetries() {
        for cut in [CutBc::Dirichlet, CutBc::Neumann, CutBc::Periodic] {
            let f = forms(cut, 0.2);
            assert_eq!(f.hermiticity_defect(), 0.0);
            assert_eq!(f.lh.symmetry_defect(1.0), 0.0);
            assert!(f.lh.bandwidth() <= f.dofs.bandwidth());
            assert!(f.s.bandwidth() <= f.dofs.bandwidth());
        }
    }

    #[test]
    fn dof_counts() {
        assert_eq!(DofMap::new(16, 8, CutBc::Neumann).len(), 17 * 8);
        assert_eq!(DofMap::new(16, 8, CutBc::Dirichlet).len(), 15 * 8);
        assert_eq!(DofMap::new(16, 8, CutBc::Periodic).len(), 16 * 8);
        let p = DofMap::new(9, 8, CutBc::Periodic);
        let mut cols: Vec<usize> = (0..9).map(|i| p.dof(i, 1).unwrap() / 8).collect();
        cols.sort();
        assert_eq!(cols, (0..9).collect::<Vec<_>>());
        assert_eq!(p.dof(9, 3), p.dof(0, 3));
    }

    #[test]
    fn periodic_straight_strip_commutes_with_translation() {
        let f = forms(CutBc::Periodic, 0.0);
        let (m, n) = (f.dofs.m, f.dofs.n);
        let x: Vec<f64> = (0..f.dim()).map(|k| ((k * 7919) % 101) as f64 / 101.0 - 0.5).collect();
        let shift = |v: &[f64]| -> Vec<f64> {
            let mut out = vec![0.0; v.len()];
            for i in 0..m {
                for j in 1..=n {
                    out[f.dofs.dof((i + 1) % m, j).unwrap()] = v[f.dofs.dof(i, j).unwrap()];
                }
            }
            out
        };
        for mat in [&f.lh, &f.s] {
            let a = shift(&mat.matvec(&x));
            let b = mat.matvec(&shift(&x));
            let err = a.iter().zip(&b).map(|(u, v)| (u - v).abs()).fold(0.0, f64::max);
            assert!(err < 1e-13, "{err}");
        }
    }
}
