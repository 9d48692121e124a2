mod common;

use common::{expr, increasing_polynomial, laurent_polynomial, rect};
use hhcert::convexity::{
    check_convexity, counterexample_search, ConvexityMode, WitnessPoints, DEFAULT_TOL,
};
use hhcert::Rect;
use proptest::prelude::*;

const GRID: usize = 10;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn witnesses_recheck(f in laurent_polynomial(), r in rect(), mode_index in 0usize..4) {
        let mode = ConvexityMode::ALL[mode_index];
        let verdict = check_convexity(&f, &r, mode, GRID, DEFAULT_TOL).unwrap();
        prop_assert_eq!(verdict.certified_on_grid, verdict.witness.is_none());
        if let Some(w) = verdict.witness {
            let again = w.recheck(&f, mode).unwrap();
            prop_assert!(again > DEFAULT_TOL);
            prop_assert_eq!(again, w.violation);
        }
    }

    #[test]
    fn searched_witnesses_recheck(f in laurent_polynomial(), r in rect()) {
        let mode = ConvexityMode::HarmonicJoint;
        if let Some(w) = counterexample_search(&f, &r, mode, 3).unwrap() {
            let WitnessPoints::Planar { first, second } = w.points else { panic!() };
            prop_assert!(r.contains(first[0], first[1]) && r.contains(second[0], second[1]));
            prop_assert!((0.0..=1.0).contains(&w.t));
            prop_assert_eq!(w.recheck(&f, mode).unwrap(), w.violation);
            prop_assert!(w.violation > DEFAULT_TOL);
        }
    }

    #[test]
    fn joint_certificate_implies_coordinate_certificate(f in laurent_polynomial(), r in rect()) {
        for (joint, coordinate) in [
            (ConvexityMode::HarmonicJoint, ConvexityMode::HarmonicCoordinate),
            (ConvexityMode::ClassicalJoint, ConvexityMode::ClassicalCoordinate),
        ] {
            if check_convexity(&f, &r, joint, GRID, DEFAULT_TOL).unwrap().certified_on_grid {
                prop_assert!(check_convexity(&f, &r, coordinate, GRID, DEFAULT_TOL).unwrap().certified_on_grid);
            }
        }
    }

    #[test]
    fn increasing_classical_certificate_implies_harmonic(f in increasing_polynomial(), r in rect()) {
        let classical = check_convexity(&f, &r, ConvexityMode::ClassicalCoordinate, GRID, DEFAULT_TOL).unwrap();
        if classical.certified_on_grid {
            let harmonic = check_convexity(&f, &r, ConvexityMode::HarmonicCoordinate, GRID, DEFAULT_TOL).unwrap();
            prop_assert!(harmonic.certified_on_grid, "{f}");
        }
    }

    #[test]
    fn harmonic_affine_family_stays_certified(alpha in -5.0f64..5.0, beta in -5.0f64..5.0, r in rect()) {
        let f = expr(&format!("({alpha})/(x*y)+({beta})"));
        let g = expr(&format!("({alpha})/x+({beta})"));
        for n in [8, 16] {
            let v = check_convexity(&f, &r, ConvexityMode::HarmonicCoordinate, n, DEFAULT_TOL).unwrap();
            prop_assert!(v.certified_on_grid, "grid {n}: {:?}", v.witness);
            let v = check_convexity(&g, &r, ConvexityMode::Harmonic1D, n, DEFAULT_TOL).unwrap();
            prop_assert!(v.certified_on_grid, "grid {n}: {:?}", v.witness);
        }
    }
}

#[test]
fn shifted_product_counterexample() {
    let f = expr("(x-1)*(y-2)");
    let r = Rect::new(1.0, 3.0, 2.0, 3.0).unwrap();
    let coordinate = check_convexity(&f, &r, ConvexityMode::HarmonicCoordinate, 100, DEFAULT_TOL).unwrap();
    assert!(coordinate.certified_on_grid);
    let joint = check_convexity(&f, &r, ConvexityMode::HarmonicJoint, 100, DEFAULT_TOL).unwrap();
    let w = joint.witness.unwrap();
    assert!(w.violation > DEFAULT_TOL);
    let searched = counterexample_search(&f, &r, ConvexityMode::HarmonicJoint, 20).unwrap().unwrap();
    assert!(searched.violation >= w.violation * 0.5);
}

#[test]
fn scans_are_deterministic() {
    let f = expr("x^2*y^-1-3*x*y");
    let r = Rect::new(1.0, 2.5, 0.5, 2.0).unwrap();
    for mode in ConvexityMode::ALL.into_iter().take(4) {
        let first = check_convexity(&f, &r, mode, 24, DEFAULT_TOL).unwrap();
        for _ in 0..3 {
            assert_eq!(check_convexity(&f, &r, mode, 24, DEFAULT_TOL).unwrap(), first);
        }
    }
}
