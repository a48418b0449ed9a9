use proptest::prelude::*;
use shelfwave::essential::{find_omega_star, SearchOptions};
use shelfwave::profiles::{CurvatureProfile, DepthProfile};
use shelfwave::transversal::{assemble_transversal_forms, pencil_eigenvalues, TransversalGrid};
use shelfwave::trapping::evaluate_criterion;

fn depth(k: u8, p: f64, delta: f64) -> DepthProfile {
    match k % 3 {
        0 => DepthProfile::new("log-depth", &[p], delta).unwrap(),
        1 => DepthProfile::new("linear", &[p], delta).unwrap(),
        _ => DepthProfile::new("tanh", &[p, delta], delta).unwrap(),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn spectrum_is_odd_in_alpha(k in 0u8..3, p in 0.2f64..3.0, a in 0.01f64..20.0, s in 0.0f64..50.0) {
        let forms = assemble_transversal_forms(&TransversalGrid::new(48, 1.0).unwrap(), &depth(k, p, 1.0));
        let plus = pencil_eigenvalues(&forms, a, s).unwrap();
        let minus = pencil_eigenvalues(&forms, -a, s).unwrap();
        let scale = plus[0].abs();
        for (x, y) in plus.iter().zip(minus.iter().rev()) {
            prop_assert!((x + y).abs() <= 1e-11 * scale, "{} {}", x, y);
        }
    }

    #[test]
    fn depth_offset_leaves_constants_unchanged(k in 0u8..3, p in 0.2f64..3.0, c in -2.0f64..2.0, a in 0.05f64..0.4) {
        let grid = TransversalGrid::new(128, 1.0).unwrap();
        let search = SearchOptions::for_width(1.0);
        let curv = CurvatureProfile::new("bump", &[a], 1.5).unwrap();
        let d0 = depth(k, p, 1.0);
        let d1 = depth(k, p, 1.0).shifted(c);
        let b0 = find_omega_star(&d0, &grid, &search).unwrap();
        let b1 = find_omega_star(&d1, &grid, &search).unwrap();
        prop_assert!((b0.omega_star - b1.omega_star).abs() <= 1e-10 * b0.omega_star);
        let c0 = evaluate_criterion(&b0, &d0, &curv).unwrap().c_beta;
        let c1 = evaluate_criterion(&b1, &d1, &curv).unwrap().c_beta;
        prop_assert!((c0 - c1).abs() <= 1e-7 * c0.abs(), "{} {}", c0, c1);
    }
}
