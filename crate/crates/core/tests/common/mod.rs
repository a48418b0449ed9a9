//! Independent reference computations shared by the integration tests.
#![allow(dead_code)]

use nalgebra::{DMatrix, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use shelfwave::profiles::DepthProfile;
use shelfwave::transversal::TransversalForms;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `phi'(delta)` for `phi'' = beta' phi' + (alpha^2 - lambda alpha beta') phi`,
/// `phi(0) = 0`, `phi'(0) = 1`, by classical RK4.
fn shoot(d: &DepthProfile, alpha: f64, lambda: f64, steps: usize) -> f64 {
    let h = d.delta() / steps as f64;
    let rhs = |eta: f64, y: [f64; 2]| -> [f64; 2] {
        let bp = d.beta_prime(eta);
        [y[1], bp * y[1] + (alpha * alpha - lambda * alpha * bp) * y[0]]
    };
    let mut y = [0.0, 1.0];
    for i in 0..steps {
        let t = i as f64 * h;
        let k1 = rhs(t, y);
        let k2 = rhs(t + 0.5 * h, [y[0] + 0.5 * h * k1[0], y[1] + 0.5 * h * k1[1]]);
        let k3 = rhs(t + 0.5 * h, [y[0] + 0.5 * h * k2[0], y[1] + 0.5 * h * k2[1]]);
        let k4 = rhs(t + h, [y[0] + h * k3[0], y[1] + h * k3[1]]);
        for c in 0..2 {
            y[c] += h / 6.0 * (k1[c] + 2.0 * k2[c] + 2.0 * k3[c] + k4[c]);
        }
        // keep the scale bounded; only the sign of phi' matters
        let s = y[0].abs().max(y[1].abs());
        if s > 1e100 {
            y = [y[0] / s, y[1] / s];
        }
    }
    y[1]
}

/// Top eigenvalue `omega = 1 / lambda_1` of the continuous transversal
/// problem at `alpha > 0`, by shooting on the smallest positive `lambda`.
pub fn shooting_omega(d: &DepthProfile, alpha: f64) -> f64 {
    let steps = 4000;
    let mut lo = 1e-6;
    let f_lo = shoot(d, alpha, lo, steps);
    assert!(f_lo > 0.0);
    let mut hi = lo;
    loop {
        hi *= 1.05;
        if shoot(d, alpha, hi, steps) <= 0.0 {
            break;
        }
        lo = hi;
        assert!(hi < 1e12, "no eigenvalue found");
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if shoot(d, alpha, mid, steps) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-15 * hi {
            break;
        }
    }
    2.0 / (lo + hi)
}

/// `max_alpha omega_alpha` of the continuous problem by golden section.
pub fn shooting_omega_star(d: &DepthProfile, mut a: f64, mut b: f64) -> (f64, f64) {
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = b - g * (b - a);
    let mut x2 = a + g * (b - a);
    let (mut f1, mut f2) = (shooting_omega(d, x1), shooting_omega(d, x2));
    while b - a > 1e-7 {
        if f1 < f2 {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + g * (b - a);
            f2 = shooting_omega(d, x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - g * (b - a);
            f1 = shooting_omega(d, x1);
        }
    }
    let x = 0.5 * (a + b);
    (shooting_omega(d, x), x)
}

/// All eigenvalues of `a B x = omega (K + s W) x` through a dense Cholesky
/// reduction, descending.
pub fn dense_pencil(forms: &TransversalForms, a: f64, s: f64) -> Vec<f64> {
    let p = forms.b.to_dense() * a;
    let q = forms.k.to_dense() + forms.w.to_dense() * s;
    let l = q.cholesky().expect("positive definite stiffness").l();
    let linv = l.clone().try_inverse().unwrap();
    let c: DMatrix<f64> = &linv * p * linv.transpose();
    let c = (&c + c.transpose()) * 0.5;
    let mut v: Vec<f64> = SymmetricEigen::new(c).eigenvalues.iter().copied().collect();
    v.sort_by(|x, y| y.total_cmp(x));
    v
}

/// Composite Simpson rule with `n` (even) panels.
pub fn simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, n: usize) -> f64 {
    let h = (b - a) / n as f64;
    let mut s = f(a) + f(b);
    for i in 1..n {
        s += if i % 2 == 1 { 4.0 } else { 2.0 } * f(a + i as f64 * h);
    }
    s * h / 3.0
}

/// `(∫ b, ∫ b^2)` over `(-1, 1)` for the unit bump `exp(1 - 1/(1 - t^2))`.
pub fn bump_constants() -> (f64, f64) {
    let b = |t: f64| if t.abs() < 1.0 { (1.0 - 1.0 / (1.0 - t * t)).exp() } else { 0.0 };
    (simpson(b, -1.0, 1.0, 200_000), simpson(|t| b(t) * b(t), -1.0, 1.0, 200_000))
}

/// A random depth profile from one of the builtin families that is
/// increasing and concave on `[0, delta]`.
pub fn random_admissible_depth(r: &mut ChaCha8Rng, delta: f64) -> DepthProfile {
    match r.gen_range(0..4) {
        0 => DepthProfile::new("log-depth", &[r.gen_range(0.2..5.0)], delta).unwrap(),
        1 => DepthProfile::new("linear", &[r.gen_range(0.2..3.0)], delta).unwrap(),
        2 => {
            let w = r.gen_range(0.5..3.0) * delta;
            DepthProfile::new("tanh", &[r.gen_range(0.3..3.0), w], delta).unwrap()
        }
        _ => {
            // increasing concave samples: positive, decreasing increments
            let k = r.gen_range(6..12);
            let mut inc = r.gen_range(0.2..0.6);
            let mut v = vec![0.0];
            for _ in 0..k {
                let last = *v.last().unwrap();
                v.push(last + inc);
                inc *= r.gen_range(0.6..0.95);
            }
            DepthProfile::new("tabulated", &v, delta).unwrap()
        }
    }
}
