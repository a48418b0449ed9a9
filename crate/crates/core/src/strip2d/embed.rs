use super::mesh::StripMesh2D;
use crate::quadrature::{adaptive_with_breaks, gauss_legendre};

/// Physical coordinates of the mesh nodes, `xi`-major like the nodal fields.
#[derive(Debug, Clone, PartialEq)]
pub struct Embedding {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    /// Tangent angle of the coast line at each `xi` node.
    pub theta: Vec<f64>,
    /// `(X', Y')` at each `xi` node.
    pub tangent: Vec<(f64, f64)>,
}

/// Rebuilds the coast line from its curvature, anchored at `xi = 0`, and maps
/// `(xi, eta)` to `X - eta Y'`, `Y + eta X'`.
pub fn embed_mesh(mesh: &StripMesh2D, theta0: f64) -> Embedding {
    let c = &mesh.curvature;
    let breaks = c.breakpoints();
    let turn = |a: f64, b: f64| -> f64 {
        let (lo, hi, s) = if a <= b { (a, b, 1.0) } else { (b, a, -1.0) };
        let mut pts = vec![lo];
        pts.extend(breaks.iter().copied().filter(|&x| x > lo && x < hi));
        pts.push(hi);
        s * adaptive_with_breaks(|x| c.gamma(x), &pts, 1e-14)
    };
    let (gx, gw) = gauss_legendre(8);
    // (theta(b), X(b) - X(a), Y(b) - Y(a)) given theta(a)
    let step = |a: f64, b: f64, ta: f64| -> (f64, f64, f64) {
        let (mid, half) = (0.5 * (a + b), 0.5 * (b - a));
        let (mut dx, mut dy) = (0.0, 0.0);
        for (u, w) in gx.iter().zip(&gw) {
            let s = mid + half * u;
            let t = ta - turn(a, s);
            dx += w * half * t.cos();
            dy += w * half * t.sin();
        }
        (ta - turn(a, b), dx, dy)
    };

    let m = mesh.m;
    let mut theta = vec![0.0; m + 1];
    let mut xs = vec![0.0; m + 1];
    let mut ys = vec![0.0; m + 1];
    let first = (0..=m).find(|&i| mesh.xi(i) >= 0.0).unwrap_or(m);
    let (mut t, mut px, mut py, mut from) = (theta0, 0.0, 0.0, 0.0);
    for i in first..=m {
        let (tn, dx, dy) = step(from, mesh.xi(i), t);
        (t, px, py, from) = (tn, px + dx, py + dy, mesh.xi(i));
        (theta[i], xs[i], ys[i]) = (t, px, py);
    }
    let (mut t, mut px, mut py, mut from) = (theta0, 0.0, 0.0, 0.0);
    for i in (0..first).rev() {
        let (tn, dx, dy) = step(from, mesh.xi(i), t);
        (t, px, py, from) = (tn, px + dx, py + dy, mesh.xi(i));
        (theta[i], xs[i], ys[i]) = (t, px, py);
    }

    let n = mesh.n;
    let mut x = Vec::with_capacity((m + 1) * (n + 1));
    let mut y = Vec::with_capacity((m + 1) * (n + 1));
    let tangent: Vec<(f64, f64)> = theta.iter().map(|t| (t.cos(), t.sin())).collect();
    for i in 0..=m {
        let (tx, ty) = tangent[i];
        for j in 0..=n {
            let eta = mesh.eta(j);
            x.push(xs[i] - eta * ty);
            y.push(ys[i] + eta * tx);
        }
    }
    Embedding { x, y, theta, tangent }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profiles::{curvature_moments, CurvatureProfile, DepthProfile};
    use crate::strip2d::mesh::build_mesh;

    fn depth() -> DepthProfile {
        DepthProfile::new("log-depth", &[1.0], 1.0).unwrap()
    }

    #[test]
    fn straight_strip_is_identity() {
        let mesh = build_mesh(&CurvatureProfile::zero(1.0).unwrap(), &depth(), 2.0, 16, 8).unwrap();
        let e = embed_mesh(&mesh, 0.0);
        for i in 0..=16 {
            for j in 0..=8 {
                let k = i * 9 + j;
                assert!((e.x[k] - mesh.xi(i)).abs() < 1e-14);
                assert!((e.y[k] - mesh.eta(j)).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn turning_angle_and_unit_tangent() {
        let c = CurvatureProfile::new("bump", &[0.3], 2.0).unwrap();
        let mesh = build_mesh(&c, &depth(), 4.0, 40, 8).unwrap();
        let e = embed_mesh(&mesh, 0.4);
        let m1 = curvature_moments(&c, 1.0).unwrap().m1;
        assert!((e.theta[40] - e.theta[0] + m1).abs() < 1e-12);
        assert!(e.tangent.iter().all(|(a, b)| (a * a + b * b - 1.0).abs() < 1e-10));
    }
}
