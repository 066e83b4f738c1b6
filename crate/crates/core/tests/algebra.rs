//! Oracle-first tests for the torus algebra: frozen example values computed
//! through the window-action oracle, plus the property suites at their
//! contractual sample counts.

use num_complex::Complex64;
use qtorus_core::algebra::{product_oracle_gap, ExponentVec, GnsWindow};
use qtorus_core::checks::{self, VerifyConfig};
use qtorus_core::{sample, DeformationMatrix, TorusContext, TorusElement, TAU};

fn cfg2() -> VerifyConfig {
    VerifyConfig::new(DeformationMatrix::two_dim(0.25), 42)
}

fn cfg3() -> VerifyConfig {
    VerifyConfig::new(
        DeformationMatrix::from_upper(3, &[0.25, -0.125, 0.4]).unwrap(),
        43,
    )
}

#[test]
fn frozen_values_match_the_window_oracle() {
    // Set up the oracle first, read the expected coefficients off it, and
    // assert the frozen literals agree with both routes.
    let ctx = TorusContext::new(DeformationMatrix::two_dim(0.25));
    let window = GnsWindow::new(&ctx, 3);
    let u1 = TorusElement::generator(&ctx, 1);
    let u2 = TorusElement::generator(&ctx, 2);

    // oracle route: act with u_1 then u_2 on the vacuum
    let e0 = window.basis_vector(&ExponentVec::zero(2)).unwrap();
    let oracle = window.apply(&u2, &window.apply(&u1, &e0));
    let idx = window.index_of(&ExponentVec(vec![1, 1])).unwrap();
    let oracle_coeff = oracle.coeffs[idx];
    let frozen = Complex64::new(0.0, -1.0); // e^{-πi/2}
    assert!((oracle_coeff - frozen).norm() < 1e-15);

    // algebra route agrees
    let alg = u2.mul(&u1).coefficient(&ExponentVec(vec![1, 1]));
    assert!((alg - frozen).norm() < 1e-15);

    // star through the adjoint oracle: matrix of a* is the adjoint of the
    // matrix of a on interior indices
    let a = u1.mul(&u2);
    let (ma, _) = window.matrix(&a);
    let (ms, _) = window.matrix(&a.star());
    let adj = ma.adjoint();
    for row in window.interior_indices(2) {
        for col in window.interior_indices(2) {
            assert!((ms[(row, col)] - adj[(row, col)]).norm() < 1e-12);
        }
    }
    let frozen_star = Complex64::from_polar(1.0, -TAU * 0.25);
    assert!(
        (a.star().coefficient(&ExponentVec(vec![-1, -1])) - frozen_star).norm() < 1e-12
    );
}

#[test]
fn laplacian_kernel_on_truncated_basis_is_the_constants() {
    let ctx = TorusContext::new(DeformationMatrix::two_dim(0.25));
    for m1 in -2i32..=2 {
        for m2 in -2i32..=2 {
            let e = TorusElement::monomial(
                &ctx,
                ExponentVec(vec![m1, m2]),
                Complex64::new(1.0, 0.0),
            );
            let lap = e.laplacian();
            if m1 == 0 && m2 == 0 {
                assert!(lap.is_zero());
            } else {
                assert!(!lap.is_zero());
            }
        }
    }
}

#[test]
fn oracle_equivalence_hundred_pairs_n2_and_n3() {
    for (cfg, n) in [(cfg2(), 2usize), (cfg3(), 3usize)] {
        let ctx = cfg.context();
        let mut rng = sample::rng(cfg.seed);
        for _ in 0..50 {
            let a = sample::element(&mut rng, &ctx, 2, 3);
            let b = sample::element(&mut rng, &ctx, 2, 3);
            let window = GnsWindow::new(&ctx, a.support_radius() + b.support_radius() + 1);
            let gap = product_oracle_gap(&window, &a, &b);
            assert!(gap < 1e-12, "n={n} gap {gap}");
        }
    }
}

#[test]
fn property_suites_pass_for_n2_and_n3() {
    for cfg in [cfg2(), cfg3()] {
        for outcome in [
            checks::check_deformation_relation(&cfg),
            checks::check_associativity(&cfg),
            checks::check_trace_property(&cfg),
            checks::check_star_properties(&cfg),
            checks::check_derivations(&cfg),
        ] {
            assert!(
                outcome.passed,
                "{} failed: gap {:.3e} {:?}",
                outcome.name, outcome.max_gap, outcome.witness
            );
        }
    }
}

#[test]
fn random_xi_deformation_relation() {
    let mut rng = sample::rng(99);
    for _ in 0..5 {
        use rand::Rng;
        let theta: f64 = rng.gen_range(-0.5..0.5);
        let cfg = VerifyConfig::new(DeformationMatrix::two_dim(theta), 7);
        let outcome = checks::check_deformation_relation(&cfg);
        assert!(outcome.passed, "xi={theta}: {:?}", outcome.witness);
    }
}
