mod common;

use shelfwave::essential::{find_omega_star, SearchOptions};
use shelfwave::profiles::{curvature_moments, CurvatureProfile, DepthProfile};
use shelfwave::strip2d::{assemble_pencil_2d, build_mesh, solve_top_spectrum, CutBc, SolveOptions};
use shelfwave::transversal::{assemble_transversal_forms, pencil_eigenvalues, solve_transversal, TransversalGrid};
use shelfwave::trapping::{evaluate_criterion, Verdict};

fn log_depth() -> DepthProfile {
    DepthProfile::new("log-depth", &[1.0], 1.0).unwrap()
}

#[test]
fn finite_elements_converge_to_shooting() {
    let d = log_depth();
    for alpha in [0.5, 1.8, 5.0] {
        let exact = common::shooting_omega(&d, alpha);
        let err = |n: usize| {
            let forms = assemble_transversal_forms(&TransversalGrid::new(n, 1.0).unwrap(), &d);
            (solve_transversal(&forms, alpha, 1).unwrap()[0].omega - exact).abs() / exact
        };
        let (e1, e2) = (err(256), err(512));
        assert!(e2 < 1e-5, "alpha {alpha}: {e2}");
        assert!((e1 / e2 - 4.0).abs() < 0.4, "alpha {alpha}: ratio {}", e1 / e2);
    }
}

#[test]
fn band_edge_matches_shooting_maximum() {
    let d = log_depth();
    let (exact, alpha) = common::shooting_omega_star(&d, 1.0, 3.0);
    let b = find_omega_star(&d, &TransversalGrid::new(1024, 1.0).unwrap(), &SearchOptions::for_width(1.0)).unwrap();
    assert!((b.omega_star - exact).abs() / exact < 1e-6, "{} vs {exact}", b.omega_star);
    assert!((b.alpha_crit - alpha).abs() / alpha < 1e-3, "{} vs {alpha}", b.alpha_crit);
}

#[test]
fn sturm_bisection_matches_dense_reduction() {
    let mut r = common::rng(11);
    for _ in 0..5 {
        let d = common::random_admissible_depth(&mut r, 1.0);
        let forms = assemble_transversal_forms(&TransversalGrid::new(64, 1.0).unwrap(), &d);
        for (a, s) in [(0.3, 0.09), (2.0, 4.0), (-1.0, 1.0), (5.0, 0.1)] {
            let sturm = pencil_eigenvalues(&forms, a, s).unwrap();
            let dense = common::dense_pencil(&forms, a, s);
            let scale = dense.iter().map(|v| v.abs()).fold(0.0, f64::max);
            for (x, y) in sturm.iter().zip(&dense) {
                assert!((x - y).abs() <= 1e-11 * scale, "{x} vs {y}");
            }
        }
    }
}

#[test]
fn bump_moments_and_critical_amplitude() {
    let (c1, c2) = common::bump_constants();
    let d = DepthProfile::new("linear", &[1.0], 1.0).unwrap();
    let b = find_omega_star(&d, &TransversalGrid::new(1024, 1.0).unwrap(), &SearchOptions::for_width(1.0)).unwrap();
    let (a, r) = (0.3, 2.0);
    let m = curvature_moments(&CurvatureProfile::new("bump", &[a], r).unwrap(), 1.0).unwrap();
    assert!((m.m1 - a * r * c1).abs() < 1e-10);
    assert!((m.m2 - a * a * r * c2).abs() < 1e-10);

    // m1 > C m2 reads a < c1 / (C c2) for a single positive bump
    let c_beta = evaluate_criterion(&b, &d, &CurvatureProfile::zero(r).unwrap()).unwrap().c_beta;
    let a_crit = c1 / (c_beta * c2);
    for (t, want) in [(0.98, Verdict::Holds), (1.02, Verdict::Fails)] {
        let c = CurvatureProfile::new("bump", &[t * a_crit], r).unwrap();
        assert_eq!(evaluate_criterion(&b, &d, &c).unwrap().verdict_integral, want);
    }
}

#[test]
fn periodic_straight_strip_separates_variables() {
    let d = log_depth();
    let (l, m, n) = (2.0, 64, 16);
    let forms = assemble_pencil_2d(&build_mesh(&CurvatureProfile::zero(1.0).unwrap(), &d, l, m, n).unwrap(), &d, CutBc::Periodic);
    let res = solve_top_spectrum(&forms, &SolveOptions::new(6)).unwrap();
    let t = assemble_transversal_forms(&TransversalGrid::new(n, 1.0).unwrap(), &d);
    let h = 2.0 * l / m as f64;
    let mut all = Vec::new();
    for k in 0..m {
        let th = 2.0 * std::f64::consts::PI * k as f64 / m as f64;
        let a = 3.0 * th.sin() / (h * (2.0 + th.cos()));
        let s = 6.0 * (1.0 - th.cos()) / (h * h * (2.0 + th.cos()));
        all.extend(common::dense_pencil(&t, a, s));
    }
    all.sort_by(|a, b| b.total_cmp(a));
    for (x, y) in res.eigenvalues().iter().zip(&all) {
        assert!((x - y).abs() < 1e-10, "{x} vs {y}");
    }
}
