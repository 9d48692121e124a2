mod common;

use common::{expr, laurent_polynomial, rect};
use hhcert::convexity::{check_convexity, ConvexityMode, DEFAULT_TOL};
use hhcert::hh::{
    bound_theorem, chain_classical_2d, chain_harmonic_1d, chain_harmonic_2d, derivative_magnitude,
    identity_lemma,
};
use hhcert::special::BoundParams;
use hhcert::{Expr, Rect, Tolerance};
use proptest::prelude::*;

fn scaled(f: &Expr, lambda: f64) -> Expr {
    expr(&format!("({lambda})*({f})"))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn constants_make_every_chain_flat(k in -10.0f64..10.0, r in rect()) {
        let f = Expr::constant(k);
        let tol = Tolerance::default();
        for chain in [
            chain_harmonic_2d(&f, &r, &tol).unwrap(),
            chain_classical_2d(&f, &r, &tol).unwrap(),
            chain_harmonic_1d(&f, r.a, r.b, &tol).unwrap(),
        ] {
            for v in &chain.values {
                prop_assert!((v - k).abs() <= 1e-12 * (1.0 + k.abs()));
            }
            for m in &chain.margins {
                prop_assert!(m.abs() <= 1e-12 * (1.0 + k.abs()));
            }
            prop_assert!(chain.ordering_ok);
        }
    }

    #[test]
    fn coordinate_convex_functions_have_ordered_chains(f in laurent_polynomial(), r in rect()) {
        let verdict = check_convexity(&f, &r, ConvexityMode::HarmonicCoordinate, 12, DEFAULT_TOL).unwrap();
        prop_assume!(verdict.certified_on_grid);
        let chain = chain_harmonic_2d(&f, &r, &Tolerance::default()).unwrap();
        prop_assert!(chain.ordering_ok, "{f}: {:?}", chain);
    }

    #[test]
    fn functions_of_x_reduce_to_the_one_dimensional_chain(
        k in -2.0f64..2.0, i in -2i32..=3, m in -2.0f64..2.0, r in rect()
    ) {
        let f = expr(&format!("({k})*x^{i}+({m})*x"));
        let tol = Tolerance::default();
        let two = chain_harmonic_2d(&f, &r, &tol).unwrap();
        let one = chain_harmonic_1d(&f, r.a, r.b, &tol).unwrap();
        for (i2, i1) in [(0, 0), (2, 1), (4, 2)] {
            let slack = two.quad_errors[i2] + one.quad_errors[i1] + 1e-12 * (1.0 + one.values[i1].abs());
            prop_assert!((two.values[i2] - one.values[i1]).abs() <= slack);
        }
    }

    #[test]
    fn identity_holds_for_laurent_polynomials(f in laurent_polynomial(), r in rect()) {
        let rep = identity_lemma(&f, &r, &Tolerance::default()).unwrap();
        prop_assert!(rep.residual_ok, "{f} on {r:?}: {rep:?}");
    }

    #[test]
    fn identity_is_linear_in_f(f in laurent_polynomial(), r in rect()) {
        let tol = Tolerance::default();
        let base = identity_lemma(&f, &r, &tol).unwrap();
        for lambda in [2.0, -1.0] {
            let rep = identity_lemma(&scaled(&f, lambda), &r, &tol).unwrap();
            let slack = lambda.abs() * base.combined_error + rep.combined_error + 1e-15;
            prop_assert!((rep.lhs - lambda * base.lhs).abs() <= slack);
            prop_assert!((rep.rhs - lambda * base.rhs).abs() <= slack);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn bound_dominates_when_its_hypothesis_holds(f in laurent_polynomial(), r in rect(), qi in 0usize..3) {
        let q = [1.5, 2.0, 3.0][qi];
        let magnitude = derivative_magnitude(&f, q);
        let pre = check_convexity(&magnitude, &r, ConvexityMode::HarmonicCoordinate, 12, DEFAULT_TOL);
        prop_assume!(matches!(pre, Ok(ref v) if v.certified_on_grid));
        let rep = bound_theorem(&f, &r, BoundParams::new(q).unwrap(), &Tolerance::default()).unwrap();
        prop_assert!(rep.holds_direct, "{f} q={q} on {r:?}: {rep:?}");
    }
}

#[test]
fn identity_examples() {
    let tol = Tolerance::default();
    let r = Rect::new(1.0, 2.0, 1.0, 3.0).unwrap();
    for s in ["x*y", "x^2*y^2", "1/(x*y)", "exp(x+y)"] {
        let rep = identity_lemma(&expr(s), &r, &tol).unwrap();
        assert!(rep.residual.abs() <= 1e-7, "{s}: {rep:?}");
    }
}
