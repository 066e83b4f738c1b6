//! Named invariant suites over the whole engine. Every suite draws its
//! randomness from an explicit seed, reports the largest deviation it saw,
//! and carries a witness string on failure. The command-line `verify`
//! command and the acceptance tests are both driven from here.

use std::sync::Arc;

use nalgebra::DVector;
use num_complex::Complex64;

use crate::algebra::{
    product_oracle_gap, DeformationMatrix, ExponentVec, GnsWindow, TorusContext, TorusElement, TAU,
};
use crate::bundle::{
    check_multiplicative, check_regular, connection_axiom_gap, AdSection, BundleModel,
    ConnectionSpec, ModelKind, TotalForm,
};
use crate::dirac::{
    dirac_apply, dirac_residual, dirac_spectrum, gauge_spinor_inner, pi_r_apply, GammaRep,
    GaugeSpinor, Spinor,
};
use crate::error::Result;
use crate::forms::{FormIndex, TorusForm};
use crate::hopf::{embedded_differential, germs_map, CalculusKind, EnvelopeElement, LaurentElement};
use crate::sample::{self, Seeded};
use crate::yang_mills::{
    analytic_residual, exterior_cov_derivative, flat_kernel_solver,
    gauge_qlc_apply, gauge_shift, geometric_residual, s_adjoint_apply, s_exterior_apply,
    ym_functional, TrivializedSection,
};

/// Configuration of a verification run.
#[derive(Debug, Clone)]
pub struct VerifyConfig {
    pub xi: DeformationMatrix,
    pub seed: u64,
    pub samples: usize,
    pub max_exp: i32,
    pub cutoff: i32,
    pub tol_alg: f64,
    pub tol_mid: f64,
    pub tol_pipeline: f64,
}

impl VerifyConfig {
    pub fn new(xi: DeformationMatrix, seed: u64) -> Self {
        Self {
            xi,
            seed,
            samples: 25,
            max_exp: 2,
            cutoff: 2,
            tol_alg: 1e-12,
            tol_mid: 1e-10,
            tol_pipeline: 1e-9,
        }
    }

    pub fn context(&self) -> Arc<TorusContext> {
        TorusContext::new(self.xi.clone())
    }
}

/// Result of one named suite.
#[derive(Debug, Clone)]
pub struct CheckOutcome {
    pub name: String,
    pub passed: bool,
    pub max_gap: f64,
    pub witness: Option<String>,
}

impl CheckOutcome {
    fn pass(name: &str, max_gap: f64) -> Self {
        Self {
            name: name.into(),
            passed: true,
            max_gap,
            witness: None,
        }
    }

    fn judged(name: &str, max_gap: f64, tol: f64, witness: String) -> Self {
        if max_gap <= tol {
            Self::pass(name, max_gap)
        } else {
            Self {
                name: name.into(),
                passed: false,
                max_gap,
                witness: Some(witness),
            }
        }
    }

    fn error(name: &str, err: impl std::fmt::Display) -> Self {
        Self {
            name: name.into(),
            passed: false,
            max_gap: f64::INFINITY,
            witness: Some(err.to_string()),
        }
    }
}

fn outcome_from(name: &str, tol: f64, body: impl FnOnce() -> Result<(f64, String)>) -> CheckOutcome {
    match body() {
        Ok((gap, witness)) => CheckOutcome::judged(name, gap, tol, witness),
        Err(e) => CheckOutcome::error(name, e),
    }
}

// ---------------------------------------------------------------------------
// torus algebra
// ---------------------------------------------------------------------------

pub fn check_deformation_relation(cfg: &VerifyConfig) -> CheckOutcome {
    outcome_from("algebra/deformation-relation", cfg.tol_alg, || {
        let ctx = cfg.context();
        let mut gap: f64 = 0.0;
        let mut worst = String::new();
        for k in 1..=ctx.n {
            for j in 1..=ctx.n {
                let uk = TorusElement::generator(&ctx, k);
                let uj = TorusElement::generator(&ctx, j);
                let lhs = uk.mul(&uj);
                let phase = Complex64::from_polar(1.0, TAU * ctx.xi.entry(k - 1, j - 1));
                let rhs = uj.mul(&uk).scale(phase);
                let g = lhs.sub(&rhs).sup_coeff_norm();
                if g > gap {
                    gap = g;
                    worst = format!("(k,j)=({k},{j}) gap {g:.3e}");
                }
            }
        }
        Ok((gap, worst))
    })
}

pub fn check_associativity(cfg: &VerifyConfig) -> CheckOutcome {
    outcome_from("algebra/associativity", cfg.tol_alg, || {
        let ctx = cfg.context();
        let mut rng = sample::rng(cfg.seed ^ 0xA550C1);
        let mut gap: f64 = 0.0;
        for _ in 0..cfg.samples {
            let a = sample::element(&mut rng, &ctx, cfg.max_exp, 4);
            let b = sample::element(&mut rng, &ctx, cfg.max_exp, 4);
            let c = sample::element(&mut rng, &ctx, cfg.max_exp, 4);
            gap = gap.max(a.mul(&b).mul(&c).sub(&a.mul(&b.mul(&c))).sup_coeff_norm());
        }
        Ok((gap, "associativity".into()))
    })
}

pub fn check_trace_property(cfg: &VerifyConfig) -> CheckOutcome {
    outcome_from("algebra/trace-property", cfg.tol_alg, || {
        let ctx = cfg.context();
        let mut rng = sample::rng(cfg.seed ^ 0x7EACE);
        let mut gap: f64 = 0.0;
        for _ in 0..cfg.samples {
            let a = sample::element(&mut rng, &ctx, cfg.max_exp, 4);
            let b = sample::element(&mut rng, &ctx, cfg.max_exp, 4);
            gap = gap.max((a.mul(&b).trace() - b.mul(&a).trace()).norm());
        }
        Ok((gap, "trace(ab) vs trace(ba)".into()))
    })
}

pub fn check_star_properties(cfg: &VerifyConfig) -> CheckOutcome {
    outcome_from("algebra/star-involution", cfg.tol_alg, || {
        let ctx = cfg.context();
        let mut rng = sample::rng(cfg.seed ^ 0x57A12);
        let mut gap: f64 = 0.0;
        for _ in 0..cfg.samples {
            let a = sample::element(&mut rng, &ctx, cfg.max_exp, 4);
            let b = sample::element(&mut rng, &ctx, cfg.max_exp, 4);
            gap = gap.max(a.star().star().sub(&a).sup_coeff_norm());
            gap = gap.max(a.mul(&b).star().sub(&b.star().mul(&a.star())).sup_coeff_norm());
            let positivity = a.star().mul(&a).trace();
            gap = gap.max(positivity.im.abs());
            gap = gap.max((-positivity.re).max(0.0));
            // τ_0(a*a) = 0 iff a = 0 within threshold
            if !a.is_zero() && positivity.re <= 0.0 {
                gap = gap.max(1.0);
            }
        }
        Ok((gap, "involution / positivity".into()))
    })
}

pub fn check_derivations(cfg: &VerifyConfig) -> CheckOutcome {
    outcome_from("algebra/derivations", cfg.tol_alg, || {
        let ctx = cfg.context();
        let mut rng = sample::rng(cfg.seed ^ 0xDE1B);
        let mut gap: f64 = 0.0;
        for _ in 0..cfg.samples {
            let a = sample::element(&mut rng, &ctx, cfg.max_exp, 4);
            let b = sample::element(&mut rng, &ctx, cfg.max_exp, 4);
            for axis in 1..=ctx.n {
                let da = a.derivation(axis)?;
                // star compatibility
                gap = gap.max(a.star().derivation(axis)?.sub(&da.star()).sup_coeff_norm());
                // Leibniz
                let lhs = a.mul(&b).derivation(axis)?;
                let rhs = da.mul(&b).add(&a.mul(&b.derivation(axis)?));
                gap = gap.max(lhs.sub(&rhs).sup_coeff_norm());
            }
            // Laplacian agrees with iterated derivations
            let mut twice = TorusElement::zero(&ctx);
            for axis in 1..=ctx.n {
                twice = twice.add(&a.derivation(axis)?.derivation(axis)?);
            }
            gap = gap.max(a.laplacian().sub(&twice).sup_coeff_norm());
        }
        Ok((gap, "derivation star/Leibniz/Laplacian".into()))
    })
}

pub fn check_gns_oracle(cfg: &VerifyConfig, pairs: usize) -> CheckOutcome {
    outcome_from("algebra/gns-oracle", cfg.tol_alg, || {
        let ctx = cfg.context();
        let mut rng = sample::rng(cfg.seed ^ 0x06A5);
        let mut gap: f64 = 0.0;
        for _ in 0..pairs {
            let a = sample::element(&mut rng, &ctx, 2, 3);
            let b = sample::element(&mut rng, &ctx, 2, 3);
            let margin = a.support_radius() + b.support_radius();
            let window = GnsWindow::new(&ctx, margin + 1);
            gap = gap.max(product_oracle_gap(&window, &a, &b));
        }
        Ok((gap, "algebraic product vs composed window actions".into()))
    })
}

// ---------------------------------------------------------------------------
// forms
// ---------------------------------------------------------------------------

pub fn check_d_squared(cfg: &VerifyConfig, per_degree: usize) -> CheckOutcome {
    outcome_from("forms/d-squared", cfg.tol_alg, || {
        let ctx = cfg.context();
        let mut rng = sample::rng(cfg.seed ^ 0xD2);
        let mut gap: f64 = 0.0;
        for degree in 0..=ctx.n {
            for _ in 0..per_degree {
                let f = sample::form(&mut rng, &ctx, degree, cfg.max_exp, 3);
                gap = gap.max(f.differential().differential().sup_coeff_norm());
            }
        }
        Ok((gap, "d² on random forms of every degree".into()))
    })
}

pub fn check_graded_leibniz(cfg: &VerifyConfig) -> CheckOutcome {
    outcome_from("forms/graded-leibniz", cfg.tol_alg, || {
        let ctx = cfg.context();
        let mut rng = sample::rng(cfg.seed ^ 0x1E1B);
        let mut gap: f64 = 0.0;
        for _ in 0..cfg.samples {
            for ka in 0..=ctx.n {
                let a = sample::form(&mut rng, &ctx, ka, cfg.max_exp, 2);
                let b = sample::mixed_form(&mut rng, &ctx, cfg.max_exp, 2);
                let lhs = a.wedge(&b).differential();
                let sign = if ka % 2 == 0 { 1.0 } else { -1.0 };
                let rhs = a
                    .differential()
                    .wedge(&b)
                    .add(&a.wedge(&b.differential()).scale_re(sign));
                gap = gap.max(lhs.sub(&rhs).sup_coeff_norm());
            }
        }
        Ok((gap, "graded Leibniz".into()))
    })
}

pub fn check_anti_hermitian_d(cfg: &VerifyConfig) -> CheckOutcome {
    outcome_from("forms/anti-hermitian-d", cfg.tol_alg, || {
        let ctx = cfg.context();
        let mut rng = sample::rng(cfg.seed ^ 0xAAD);
        let mut gap: f64 = 0.0;
        for _ in 0..cfg.samples {
            let a = sample::mixed_form(&mut rng, &ctx, cfg.max_exp, 3);
            let lhs = a.star().differential();
            let rhs = a.differential().star().scale_re(-1.0);
            gap = gap.max(lhs.sub(&rhs).sup_coeff_norm());
        }
        Ok((gap, "d(a*) = -(da)*".into()))
    })
}

pub fn check_stokes(cfg: &VerifyConfig) -> CheckOutcome {
    outcome_from("forms/stokes", cfg.tol_alg, || {
        let ctx = cfg.context();
        let mut rng = sample::rng(cfg.seed ^ 0x570);
        let mut gap: f64 = 0.0;
        for _ in 0..cfg.samples {
            let mu = sample::form(&mut rng, &ctx, ctx.n - 1, cfg.max_exp, 4);
            gap = gap.max(mu.differential().integrate().norm());
        }
        Ok((gap, "∫ dμ = 0".into()))
    })
}

pub fn check_hodge(cfg: &VerifyConfig) -> CheckOutcome {
    outcome_from("forms/hodge", cfg.tol_alg, || {
        let ctx = cfg.context();
        let n = ctx.n;
        let mut gap: f64 = 0.0;
        // sign oracle: e_S ∧ ⋆e_S = +dvol and ⋆e_S supported on the complement
        for mask in 0u32..(1 << n) {
            let idx = FormIndex(mask);
            let e = TorusForm::monomial(idx, TorusElement::one(&ctx));
            let star = e.hodge();
            let product = e.wedge(&star);
            gap = gap.max(product.sub(&TorusForm::dvol(&ctx)).sup_coeff_norm());
            let comp = star.component(idx.complement(n));
            gap = gap.max((comp.trace().norm() - 1.0).abs());
            // involution sign (-1)^{k(n-k)}
            let k = idx.degree();
            let sign = if (k * (n - k)) % 2 == 0 { 1.0 } else { -1.0 };
            gap = gap.max(e.hodge().hodge().sub(&e.scale_re(sign)).sup_coeff_norm());
            gap = gap.max(e.hodge().hodge_inv().sub(&e.hodge_inv().hodge()).sup_coeff_norm());
            gap = gap.max(e.hodge_inv().hodge().sub(&e).sup_coeff_norm());
        }
        let mut rng = sample::rng(cfg.seed ^ 0x0D6E);
        for _ in 0..cfg.samples {
            let f = sample::mixed_form(&mut rng, &ctx, cfg.max_exp, 2);
            let mut expected = TorusForm::zero(&ctx);
            for k in 0..=n {
                let sign = if (k * (n - k)) % 2 == 0 { 1.0 } else { -1.0 };
                expected = expected.add(&f.degree_part(k).scale_re(sign));
            }
            gap = gap.max(f.hodge().hodge().sub(&expected).sup_coeff_norm());
        }
        Ok((gap, "Hodge sign oracle / involution".into()))
    })
}

pub fn check_codifferential_adjoint(cfg: &VerifyConfig, per_degree: usize) -> CheckOutcome {
    outcome_from("forms/codifferential-adjoint", cfg.tol_pipeline, || {
        let ctx = cfg.context();
        let mut rng = sample::rng(cfg.seed ^ 0xC0D1F);
        let mut gap: f64 = 0.0;
        for k in 0..ctx.n {
            for _ in 0..per_degree {
                let a = sample::form(&mut rng, &ctx, k, cfg.max_exp, 3);
                let b = sample::form(&mut rng, &ctx, k + 1, cfg.max_exp, 3);
                let lhs = a.differential().inner(&b);
                let rhs = a.inner(&b.codifferential());
                gap = gap.max((lhs - rhs).norm());
            }
        }
        Ok((gap, "⟨da|b⟩ = ⟨a|d*b⟩".into()))
    })
}

pub fn check_hermitian_detection(cfg: &VerifyConfig) -> CheckOutcome {
    outcome_from("forms/hermitian-detection", cfg.tol_alg, || {
        let ctx = cfg.context();
        let mut rng = sample::rng(cfg.seed ^ 0x8E2);
        let mut gap: f64 = 0.0;
        for _ in 0..cfg.samples {
            let h1 = sample::hermitian_one_form(&mut rng, &ctx, cfg.max_exp, 2);
            let h2 = sample::hermitian_one_form(&mut rng, &ctx, cfg.max_exp, 2);
            if !h1.is_hermitian(cfg.tol_alg) {
                gap = gap.max(1.0);
            }
            // closed under real linear combination
            let combo = h1.scale_re(0.75).add(&h2.scale_re(-2.5));
            gap = gap.max(combo.sub(&combo.star()).sup_coeff_norm());
            // iff: a generic complex multiple is not Hermitian
            let skew = h1.scale(Complex64::new(0.0, 1.0));
            if !skew.is_zero() && skew.is_hermitian(cfg.tol_alg) {
                gap = gap.max(1.0);
            }
        }
        Ok((gap, "is_hermitian ⟺ star-fixed; real-linear closure".into()))
    })
}

pub fn check_inner_positivity(cfg: &VerifyConfig) -> CheckOutcome {
    outcome_from("forms/inner-positivity", cfg.tol_alg, || {
        let ctx = cfg.context();
        let mut rng = sample::rng(cfg.seed ^ 0x90511);
        let mut gap: f64 = 0.0;
        for _ in 0..cfg.samples {
            let a = sample::mixed_form(&mut rng, &ctx, cfg.max_exp, 3);
            let ip = a.inner(&a);
            gap = gap.max(ip.im.abs());
            gap = gap.max((-ip.re).max(0.0));
            if !a.is_zero() && ip.re <= 0.0 {
                gap = gap.max(1.0);
            }
            // degree orthogonality
            let f0 = sample::form(&mut rng, &ctx, 0, cfg.max_exp, 2);
            let f1 = sample::form(&mut rng, &ctx, 1, cfg.max_exp, 2);
            gap = gap.max(f0.inner(&f1).norm());
        }
        Ok((gap, "positivity and degree orthogonality".into()))
    })
}

// ---------------------------------------------------------------------------
// Hopf algebra and envelope
// ---------------------------------------------------------------------------

pub fn check_hopf_axioms(cfg: &VerifyConfig) -> CheckOutcome {
    outcome_from("hopf/axioms", cfg.tol_alg, || {
        let mut rng = sample::rng(cfg.seed ^ 0x80F);
        let mut gap: f64 = 0.0;
        for _ in 0..cfg.samples {
            let g = sample::laurent(&mut rng, 4, 4);
            // (ε ⊗ id) Δ = id for group-likes: Σ ε(z^a) c_a z^a = g
            let mut recomposed = LaurentElement::zero();
            for (a, c) in g.coproduct() {
                recomposed = recomposed.add(&LaurentElement::monomial(a, c));
            }
            gap = gap.max(recomposed.sub(&g).sup_coeff_norm());
            // m(S ⊗ id)Δ = ηε under convolution
            let mut conv = LaurentElement::zero();
            for (a, c) in g.coproduct() {
                conv = conv.add(&LaurentElement::z(-a).mul(&LaurentElement::monomial(a, c)));
            }
            let expected = LaurentElement::monomial(0, g.counit());
            gap = gap.max(conv.sub(&expected).sup_coeff_norm());
            // involutive antipode, star-involution
            gap = gap.max(g.antipode().antipode().sub(&g).sup_coeff_norm());
            gap = gap.max(g.star().star().sub(&g).sup_coeff_norm());
        }
        Ok((gap, "counit/antipode axioms".into()))
    })
}

pub fn check_germs_kernel(cfg: &VerifyConfig) -> CheckOutcome {
    outcome_from("hopf/germs-kernel", cfg.tol_alg, || {
        let mut gap: f64 = 0.0;
        // non-standard: even powers and constants vanish, odd powers hit ϑ
        for m in -6i64..=6 {
            let v = germs_map(CalculusKind::NonStandard, &LaurentElement::z(m)).0;
            let expected = if m.rem_euclid(2) == 1 { 1.0 } else { 0.0 };
            gap = gap.max((v - Complex64::new(expected, 0.0)).norm());
        }
        // classical: z^m - 1 - m(z - 1) lies in Ker²(ε); verified by double
        // synthetic division by (z - 1) after clearing the Laurent tail
        for m in -5i64..=5 {
            let p = LaurentElement::z(m)
                .sub(&LaurentElement::one())
                .sub(&LaurentElement::z(1).sub(&LaurentElement::one()).scale(Complex64::new(m as f64, 0.0)));
            gap = gap.max(divide_twice_by_z_minus_one(&p));
            let v = germs_map(CalculusKind::Classical, &LaurentElement::z(m)).0;
            gap = gap.max((v - Complex64::new(m as f64, 0.0)).norm());
        }
        Ok((gap, "quotient oracle for the classical germs map".into()))
    })
}

/// Remainder size after dividing a Laurent polynomial twice by (z - 1);
/// zero exactly when the input lies in (z-1)² C[z, z^{-1}].
fn divide_twice_by_z_minus_one(p: &LaurentElement) -> f64 {
    let min_pow = p.terms().map(|(&a, _)| a).min().unwrap_or(0).min(0);
    // clear the tail: q(z) = z^{-min} p(z) is an ordinary polynomial
    let shifted: Vec<(i64, Complex64)> = p.terms().map(|(&a, &c)| (a - min_pow, c)).collect();
    let deg = shifted.iter().map(|&(a, _)| a).max().unwrap_or(0) as usize;
    let mut coeffs = vec![Complex64::new(0.0, 0.0); deg + 1];
    for (a, c) in shifted {
        coeffs[a as usize] += c;
    }
    let mut rem_total = 0.0f64;
    for _ in 0..2 {
        // synthetic division by (z - 1): remainder is the value at 1
        let mut acc = Complex64::new(0.0, 0.0);
        let mut quotient = vec![Complex64::new(0.0, 0.0); coeffs.len().saturating_sub(1)];
        for i in (0..coeffs.len()).rev() {
            acc += coeffs[i];
            if i > 0 {
                quotient[i - 1] = acc;
            }
        }
        rem_total = rem_total.max(acc.norm());
        coeffs = quotient;
        if coeffs.is_empty() {
            break;
        }
    }
    rem_total
}

pub fn check_envelope(cfg: &VerifyConfig) -> CheckOutcome {
    outcome_from("hopf/envelope", cfg.tol_alg, || {
        let mut rng = sample::rng(cfg.seed ^ 0xE27);
        let mut gap: f64 = 0.0;
        for kind in [CalculusKind::NonStandard, CalculusKind::Classical] {
            for _ in 0..cfg.samples {
                // d² = 0 within the truncation bound
                let a = sample::envelope(&mut rng, kind, 3, 1, 3);
                gap = gap.max(a.differential().differential().sup_coeff_norm());
                // graded Leibniz on homogeneous left factors
                for j in 0..=1u32 {
                    let x = sample::envelope(&mut rng, kind, 2, 0, 2)
                        .mul(&EnvelopeElement::monomial(kind, 0, j, Complex64::new(1.0, 0.0)));
                    let y = sample::envelope(&mut rng, kind, 2, 1, 2);
                    let lhs = x.mul(&y).differential();
                    let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
                    let rhs = x
                        .differential()
                        .mul(&y)
                        .add(&x.mul(&y.differential()).scale(Complex64::new(sign, 0.0)));
                    gap = gap.max(lhs.sub(&rhs).sup_coeff_norm());
                }
                // anti-Hermitian differential and involution
                let b = sample::envelope(&mut rng, kind, 3, 2, 3);
                gap = gap.max(b.star().star().sub(&b).sup_coeff_norm());
                let lhs = b.star().differential();
                let rhs = b.differential().star().scale(Complex64::new(-1.0, 0.0));
                gap = gap.max(lhs.sub(&rhs).sup_coeff_norm());
            }
            // embedded differential law: multiplying the legs gives dϑ
            let theta = EnvelopeElement::theta(kind);
            let product = theta.mul(&theta).scale(embedded_differential(kind));
            gap = gap.max(product.sub(&theta.differential()).sup_coeff_norm());
        }
        Ok((gap, "envelope d²/Leibniz/star".into()))
    })
}

// ---------------------------------------------------------------------------
// bundle
// ---------------------------------------------------------------------------

fn both_models(cfg: &VerifyConfig) -> Result<Vec<Arc<BundleModel>>> {
    let ctx = cfg.context();
    Ok(vec![
        BundleModel::model_a(&ctx, None)?,
        BundleModel::model_b(&ctx),
    ])
}

fn random_connection(
    rng: &mut Seeded,
    model: &Arc<BundleModel>,
    cfg: &VerifyConfig,
) -> Result<ConnectionSpec> {
    let mu = sample::hermitian_one_form(rng, model.base(), cfg.max_exp.min(1), 2);
    ConnectionSpec::new(model, mu)
}

pub fn check_connection_axiom(cfg: &VerifyConfig) -> CheckOutcome {
    outcome_from("bundle/connection-axiom", cfg.tol_alg, || {
        let mut rng = sample::rng(cfg.seed ^ 0xC0AC);
        let mut gap: f64 = 0.0;
        for model in both_models(cfg)? {
            for _ in 0..cfg.samples.min(10) {
                let omega = random_connection(&mut rng, &model, cfg)?;
                gap = gap.max(connection_axiom_gap(&omega)?);
                // Hermiticity of ω(ϑ)
                let w = omega.omega_theta();
                gap = gap.max(w.star().sub(&w).sup_coeff_norm());
            }
        }
        Ok((gap, "coaction legs of ω(ϑ)".into()))
    })
}

pub fn check_curvature_star_rule(cfg: &VerifyConfig) -> CheckOutcome {
    outcome_from("bundle/curvature-star-rule", cfg.tol_mid, || {
        let mut rng = sample::rng(cfg.seed ^ 0xC57A);
        let mut gap: f64 = 0.0;
        for model in both_models(cfg)? {
            for _ in 0..cfg.samples {
                let omega = random_connection(&mut rng, &model, cfg)?;
                let r = omega.curvature()?.value;
                gap = gap.max(r.star().add(&r).sup_coeff_norm());
            }
        }
        Ok((gap, "star(R(ϑ)) = -R(ϑ)".into()))
    })
}

pub fn check_canonical_connections(cfg: &VerifyConfig) -> CheckOutcome {
    outcome_from("bundle/canonical-flat-regular", cfg.tol_mid, || {
        let mut rng = sample::rng(cfg.seed ^ 0xCA20);
        let mut gap: f64 = 0.0;
        let mut witness = String::new();
        for model in both_models(cfg)? {
            let wc = ConnectionSpec::canonical(&model);
            gap = gap.max(wc.curvature()?.value.sup_coeff_norm());
            let samples = random_horizontals(&mut rng, &model, cfg, 6);
            let rep = check_regular(&wc, &samples, cfg.tol_alg)?;
            if !rep.regular {
                gap = gap.max(rep.max_gap);
                witness = rep.witness.unwrap_or_default();
            }
            // canonical multiplicativity
            let mul = check_multiplicative(&wc, cfg.tol_alg);
            if !mul.multiplicative {
                gap = gap.max(mul.max_gap);
            }
        }
        Ok((gap, witness))
    })
}

pub fn random_horizontals(
    rng: &mut Seeded,
    model: &Arc<BundleModel>,
    cfg: &VerifyConfig,
    count: usize,
) -> Vec<TotalForm> {
    let base = model.base().clone();
    let mut out = Vec::new();
    for i in 0..count {
        let degree = i % base.n;
        let f = sample::form(rng, &base, degree, cfg.max_exp.min(1), 2);
        match model.kind {
            ModelKind::A => {
                use rand::Rng;
                let power: i32 = rng.gen_range(-2..=2);
                let u = TorusElement::monomial(
                    model.total(),
                    {
                        let mut v = vec![0i32; base.n + 1];
                        v[base.n] = power;
                        ExponentVec(v)
                    },
                    Complex64::new(1.0, 0.0),
                );
                out.push(
                    TotalForm::embed_base(model, &f)
                        .mul(&TotalForm::from_total_a(model, TorusForm::from_element(u))),
                );
            }
            ModelKind::B => {
                use rand::Rng;
                let a: i64 = rng.gen_range(-2..=2);
                out.push(TotalForm::from_b_monomial(model, &f, a, 0));
            }
        }
    }
    out
}

pub fn check_model_b_curvature_closed_form(cfg: &VerifyConfig, samples: usize) -> CheckOutcome {
    outcome_from("bundle/model-b-curvature", cfg.tol_mid, || {
        let ctx = cfg.context();
        let model = BundleModel::model_b(&ctx);
        let mut rng = sample::rng(cfg.seed ^ 0xB2C);
        let mut gap: f64 = 0.0;
        for _ in 0..samples {
            let omega = random_connection(&mut rng, &model, cfg)?;
            let general = omega.curvature_general()?;
            let closed = omega.mu().differential().add(&omega.mu().wedge(omega.mu()));
            gap = gap.max(general.sub(&closed).sup_coeff_norm());
        }
        Ok((gap, "general total-form curvature vs dμ + μμ".into()))
    })
}

pub fn check_covariant_derivatives(cfg: &VerifyConfig) -> CheckOutcome {
    outcome_from("bundle/covariant-derivatives", cfg.tol_mid, || {
        let mut rng = sample::rng(cfg.seed ^ 0xC0D);
        let mut gap: f64 = 0.0;
        for model in both_models(cfg)? {
            let wc = ConnectionSpec::canonical(&model);
            let omega = random_connection(&mut rng, &model, cfg)?;
            // restriction to base forms is d, for both derivatives
            for _ in 0..cfg.samples.min(8) {
                let b = sample::form(&mut rng, model.base(), 1, cfg.max_exp.min(1), 2);
                let phi = TotalForm::embed_base(&model, &b);
                let expected = TotalForm::embed_base(&model, &b.differential());
                gap = gap.max(
                    omega
                        .covariant_derivative(&phi)?
                        .sub(&expected)
                        .sup_coeff_norm(),
                );
                gap = gap.max(
                    omega
                        .dual_covariant_derivative(&phi)?
                        .sub(&expected)
                        .sup_coeff_norm(),
                );
            }
            for phi in random_horizontals(&mut rng, &model, cfg, 6) {
                // duality through the involution: D̂(φ) = -(D(φ*))*
                let lhs = omega.dual_covariant_derivative(&phi)?;
                let rhs = omega
                    .covariant_derivative(&phi.star())?
                    .star()
                    .scale(Complex64::new(-1.0, 0.0));
                gap = gap.max(lhs.sub(&rhs).sup_coeff_norm());
                // flatness of the canonical connection: D² = D̂² = 0
                gap = gap.max(
                    wc.covariant_derivative(&wc.covariant_derivative(&phi)?)?
                        .sup_coeff_norm(),
                );
                gap = gap.max(
                    wc.dual_covariant_derivative(&wc.dual_covariant_derivative(&phi)?)?
                        .sup_coeff_norm(),
                );
                // regular canonical connection: D = D̂
                gap = gap.max(
                    wc.covariant_derivative(&phi)?
                        .sub(&wc.dual_covariant_derivative(&phi)?)
                        .sup_coeff_norm(),
                );
            }
        }
        Ok((gap, "D restrictions, duality, flat squares".into()))
    })
}

pub fn check_bianchi(cfg: &VerifyConfig, samples: usize) -> CheckOutcome {
    outcome_from("bundle/bianchi", cfg.tol_pipeline, || {
        let mut rng = sample::rng(cfg.seed ^ 0xB1A);
        let mut gap: f64 = 0.0;
        for model in both_models(cfg)? {
            for _ in 0..samples {
                let omega = random_connection(&mut rng, &model, cfg)?;
                let r = omega.curvature()?;
                let lhs = omega.twisted_covariant_derivative(&r)?;
                // ⟨ω,⟨ω,ω⟩⟩ - ⟨⟨ω,ω⟩,ω⟩ through the bracket machinery
                let w = omega.omega_theta();
                let ww = omega.theta_bracket(&w, &w);
                let rhs_total = omega
                    .theta_bracket(&w, &ww)
                    .sub(&omega.theta_bracket(&ww, &w));
                let rhs = rhs_total.project_base(cfg.tol_alg)?;
                gap = gap.max(lhs.value.sub(&rhs).sup_coeff_norm());
                if model.kind == ModelKind::A {
                    // both sides vanish identically in the classical case
                    gap = gap.max(lhs.value.sup_coeff_norm());
                    gap = gap.max(rhs.sup_coeff_norm());
                }
                // dual twisted derivative of a displacement flips sign
                let lam = AdSection::new(sample::hermitian_one_form(
                    &mut rng,
                    model.base(),
                    cfg.max_exp.min(1),
                    2,
                ));
                let dual = omega.dual_twisted_covariant_derivative(&lam)?;
                let neg = omega.twisted_covariant_derivative(&lam)?;
                gap = gap.max(dual.value.add(&neg.value).sup_coeff_norm());
            }
        }
        Ok((gap, "second Bianchi identity".into()))
    })
}

pub fn check_s_adjointness(cfg: &VerifyConfig, per_degree: usize) -> CheckOutcome {
    outcome_from("bundle/s-adjointness", cfg.tol_pipeline, || {
        let ctx = cfg.context();
        let model = BundleModel::model_b(&ctx);
        let mut rng = sample::rng(cfg.seed ^ 0x5AD);
        let mut gap: f64 = 0.0;
        for _ in 0..per_degree {
            let omega = random_connection(&mut rng, &model, cfg)?;
            for a in 0..ctx.n {
                let eta = TrivializedSection::new(sample::form(&mut rng, &ctx, a, 1, 2));
                let sigma = TrivializedSection::new(sample::form(&mut rng, &ctx, a + 1, 1, 2));
                let lhs = s_exterior_apply(&omega, &eta)?
                    .coefficient
                    .inner(&sigma.coefficient);
                let rhs = eta
                    .coefficient
                    .inner(&s_adjoint_apply(&omega, &sigma)?.coefficient);
                gap = gap.max((lhs - rhs).norm());
            }
        }
        Ok((gap, "⟨d^Ŝ a|b⟩ = ⟨a|d^Ŝ* b⟩".into()))
    })
}

// ---------------------------------------------------------------------------
// Yang–Mills
// ---------------------------------------------------------------------------

pub fn check_metric_compatibility(cfg: &VerifyConfig, pairs: usize) -> CheckOutcome {
    outcome_from("yang-mills/metric-compatibility", cfg.tol_mid, || {
        let ctx = cfg.context();
        let model = BundleModel::model_a(&ctx, None)?;
        let mut rng = sample::rng(cfg.seed ^ 0x3E7);
        let mut gap: f64 = 0.0;
        for _ in 0..pairs {
            let omega = random_connection(&mut rng, &model, cfg)?;
            let b1 = sample::element(&mut rng, &ctx, cfg.max_exp, 3);
            let b2 = sample::element(&mut rng, &ctx, cfg.max_exp, 3);
            let grad1 = gauge_qlc_apply(&omega, &b1).coefficient;
            let grad2 = gauge_qlc_apply(&omega, &b2).coefficient;
            // ⟨T_1, ∇̂T_2⟩ - ⟨∇̂T_1, T_2⟩ = d⟨T_1, T_2⟩ with
            // ⟨T_1, T_2⟩ = b_1^* b_2
            let lhs = grad2
                .mul_element_left(&b1.star())
                .sub(&grad1.star().mul_element_right(&b2));
            let rhs = TorusForm::from_element(b1.star().mul(&b2)).differential();
            gap = gap.max(lhs.sub(&rhs).sup_coeff_norm());
        }
        Ok((gap, "⟨T1,∇̂T2⟩ - ⟨∇̂T1,T2⟩ = d⟨T1,T2⟩".into()))
    })
}

pub fn check_residual_consistency(cfg: &VerifyConfig, samples: usize) -> CheckOutcome {
    outcome_from("yang-mills/residual-consistency", cfg.tol_pipeline, || {
        let mut rng = sample::rng(cfg.seed ^ 0x2E5);
        let mut gap: f64 = 0.0;
        for model in both_models(cfg)? {
            for _ in 0..samples {
                let omega = random_connection(&mut rng, &model, cfg)?;
                let rep = geometric_residual(&omega, cfg.tol_pipeline)?;
                gap = gap.max(rep.consistency_gap);
                if model.kind == ModelKind::B {
                    // term-by-term agreement with the analytic equation
                    let ana = analytic_residual(&model, omega.mu(), cfg.tol_pipeline)?;
                    gap = gap.max(
                        ana.closed_form
                            .sub(&rep.closed_form)
                            .sup_coeff_norm(),
                    );
                    gap = gap.max(ana.consistency_gap);
                }
            }
        }
        Ok((gap, "pipeline vs closed forms".into()))
    })
}

pub fn check_variational_oracle(cfg: &VerifyConfig, samples: usize) -> CheckOutcome {
    outcome_from("yang-mills/variational-oracle", 1e-7, || {
        let mut rng = sample::rng(cfg.seed ^ 0xFD0);
        let mut gap: f64 = 0.0;
        for model in both_models(cfg)? {
            for _ in 0..samples {
                let omega = random_connection(&mut rng, &model, cfg)?;
                let lam = sample::hermitian_one_form(&mut rng, model.base(), 1, 2);
                // the functional is an exact quartic in t: the 5-point
                // stencil derivative is exact up to round-off
                let h = 0.25f64;
                let f = |t: f64| -> Result<f64> {
                    let shifted = ConnectionSpec::new(&model, omega.mu().add(&lam.scale_re(t)))?;
                    ym_functional(&shifted)
                };
                let deriv =
                    (8.0 * (f(h)? - f(-h)?) - (f(2.0 * h)? - f(-2.0 * h)?)) / (12.0 * h);
                let rep = geometric_residual(&omega, cfg.tol_pipeline)?;
                let pairing = 2.0 * rep.residual.coefficient.inner(&lam).re;
                let scale = deriv.abs().max(1.0);
                gap = gap.max((deriv - pairing).abs() / scale);
            }
        }
        Ok((
            gap,
            "d/dt ‖R(ω+tλ)‖² = 2 Re⟨residual|λ⟩ (5-point stencil)".into(),
        ))
    })
}

pub fn check_solution_sets(cfg: &VerifyConfig) -> CheckOutcome {
    outcome_from("yang-mills/solution-sets", cfg.tol_pipeline, || {
        let ctx = cfg.context();
        let mut rng = sample::rng(cfg.seed ^ 0x5015);
        let mut gap: f64 = 0.0;
        let ma = BundleModel::model_a(&ctx, None)?;
        let kernel = flat_kernel_solver(&ma, cfg.max_exp.max(1))?;
        for mu in &kernel.ym_basis {
            let hermitian = mu.add(&mu.star()).scale_re(0.5);
            let omega = ConnectionSpec::new(&ma, hermitian)?;
            gap = gap.max(geometric_residual(&omega, cfg.tol_pipeline)?.norm);
        }
        // model A: flat displacements t_j dU_j + db are solutions as well
        for _ in 0..cfg.samples.min(8) {
            let b = sample::anti_hermitian_element(&mut rng, &ctx, 1, 2);
            let mut mu = TorusForm::from_element(b).differential();
            for axis in 1..=ctx.n {
                use rand::Rng;
                mu = mu.add(&TorusForm::du(&ctx, axis).scale_re(rng.gen_range(-2.0..2.0)));
            }
            let omega = ConnectionSpec::new(&ma, mu)?;
            gap = gap.max(geometric_residual(&omega, cfg.tol_pipeline)?.norm);
        }
        // model B: scalar integer displacements solve both equations
        let mb = BundleModel::model_b(&ctx);
        for _ in 0..cfg.samples.min(8) {
            use rand::Rng;
            let mut mu = TorusForm::zero(&ctx);
            for axis in 1..=ctx.n {
                let m: i32 = rng.gen_range(-3..=3);
                mu = mu.add(&TorusForm::du(&ctx, axis).scale_re(TAU * m as f64));
            }
            // flatness gate
            gap = gap.max(mu.differential().add(&mu.wedge(&mu)).sup_coeff_norm());
            let omega = ConnectionSpec::new(&mb, mu.clone())?;
            gap = gap.max(geometric_residual(&omega, cfg.tol_pipeline)?.norm);
            gap = gap.max(analytic_residual(&mb, &mu, cfg.tol_pipeline)?.norm);
        }
        Ok((gap, "kernel members give zero residuals".into()))
    })
}

pub fn check_functional_positivity(cfg: &VerifyConfig) -> CheckOutcome {
    outcome_from("yang-mills/functional-positivity", cfg.tol_mid, || {
        let mut rng = sample::rng(cfg.seed ^ 0xF05);
        let mut gap: f64 = 0.0;
        for model in both_models(cfg)? {
            for _ in 0..cfg.samples {
                let omega = random_connection(&mut rng, &model, cfg)?;
                let v = ym_functional(&omega)?;
                gap = gap.max((-v).max(0.0));
                let r = omega.curvature()?.value;
                if r.sup_coeff_norm() > 1e-6 && v <= 0.0 {
                    gap = gap.max(1.0);
                }
                if r.is_zero() {
                    gap = gap.max(v.abs());
                }
            }
        }
        Ok((gap, "‖R‖² ≥ 0, zero iff flat".into()))
    })
}

pub fn check_residual_linearity(cfg: &VerifyConfig) -> CheckOutcome {
    outcome_from("yang-mills/residual-linearity", cfg.tol_pipeline, || {
        let ctx = cfg.context();
        let mut rng = sample::rng(cfg.seed ^ 0x11E);
        let mut gap: f64 = 0.0;
        let ma = BundleModel::model_a(&ctx, None)?;
        for _ in 0..cfg.samples.min(10) {
            let mu1 = sample::hermitian_one_form(&mut rng, &ctx, 1, 2);
            let mu2 = sample::hermitian_one_form(&mut rng, &ctx, 1, 2);
            let r1 = geometric_residual(&ConnectionSpec::new(&ma, mu1.clone())?, 1e-9)?;
            let r2 = geometric_residual(&ConnectionSpec::new(&ma, mu2.clone())?, 1e-9)?;
            let combined = mu1.scale_re(2.0).add(&mu2.scale_re(-3.0));
            let rc = geometric_residual(&ConnectionSpec::new(&ma, combined)?, 1e-9)?;
            let expected = r1
                .residual
                .coefficient
                .scale_re(2.0)
                .add(&r2.residual.coefficient.scale_re(-3.0));
            gap = gap.max(rc.residual.coefficient.sub(&expected).sup_coeff_norm());
        }
        // model B: a constructed pair witnesses nonlinearity
        let mb = BundleModel::model_b(&ctx);
        let u1 = TorusElement::generator(&ctx, 1);
        let u2 = TorusElement::generator(&ctx, 2);
        let mu1 = TorusForm::monomial(FormIndex::single(2), u1.add(&u1.star()));
        let mu2 = TorusForm::monomial(FormIndex::single(1), u2.add(&u2.star()));
        let r1 = geometric_residual(&ConnectionSpec::new(&mb, mu1.clone())?, 1e-9)?;
        let r2 = geometric_residual(&ConnectionSpec::new(&mb, mu2.clone())?, 1e-9)?;
        let rc = geometric_residual(&ConnectionSpec::new(&mb, mu1.add(&mu2))?, 1e-9)?;
        let defect = rc
            .residual
            .coefficient
            .sub(&r1.residual.coefficient)
            .sub(&r2.residual.coefficient)
            .sup_coeff_norm();
        if defect <= cfg.tol_pipeline {
            gap = gap.max(1.0); // nonlinearity witness must be visible
        }
        Ok((gap, "model A linear; model B nonlinearity witness".into()))
    })
}

pub fn check_grassmann_independence(cfg: &VerifyConfig) -> CheckOutcome {
    outcome_from("yang-mills/grassmann-independence", cfg.tol_alg, || {
        let ctx = cfg.context();
        let mut rng = sample::rng(cfg.seed ^ 0x62A5);
        let mut gap: f64 = 0.0;
        for model in both_models(cfg)? {
            for _ in 0..cfg.samples.min(10) {
                let omega1 = random_connection(&mut rng, &model, cfg)?;
                let omega2 = random_connection(&mut rng, &model, cfg)?;
                let b = sample::element(&mut rng, &ctx, cfg.max_exp, 3);
                let g1 = gauge_qlc_apply(&omega1, &b).coefficient;
                let g2 = gauge_qlc_apply(&omega2, &b).coefficient;
                gap = gap.max(g1.sub(&g2).sup_coeff_norm());
                // Grassmann value is d(b)
                let expected = TorusForm::from_element(b).differential();
                gap = gap.max(g1.sub(&expected).sup_coeff_norm());
                // applying the exterior derivative twice is the zero map
                let dd = exterior_cov_derivative(
                    &omega1,
                    &exterior_cov_derivative(&omega1, &TrivializedSection::new(g1)),
                );
                gap = gap.max(dd.coefficient.sup_coeff_norm());
            }
        }
        Ok((gap, "gauge qlc is the Grassmann connection".into()))
    })
}

pub fn check_gauge_invariance(cfg: &VerifyConfig, cases: usize) -> CheckOutcome {
    outcome_from("yang-mills/gauge-invariance", cfg.tol_mid, || {
        let ctx = cfg.context();
        let mut rng = sample::rng(cfg.seed ^ 0x6A6);
        let mut gap: f64 = 0.0;
        let ma = BundleModel::model_a(&ctx, None)?;
        let mb = BundleModel::model_b(&ctx);
        for i in 0..cases {
            // model A: closed Hermitian shifts t_j dU_j + db
            let omega = random_connection(&mut rng, &ma, cfg)?;
            let b = sample::anti_hermitian_element(&mut rng, &ctx, 1, 2);
            let mut shift = TorusForm::from_element(b).differential();
            for axis in 1..=ctx.n {
                use rand::Rng;
                shift = shift.add(&TorusForm::du(&ctx, axis).scale_re(rng.gen_range(-2.0..2.0)));
            }
            let before = ym_functional(&omega)?;
            let r_before = omega.curvature()?.value;
            let rep = gauge_shift(&omega, &shift)?;
            if !rep.ym_invariant {
                gap = gap.max(1.0);
            }
            let after = ym_functional(&rep.shifted)?;
            gap = gap.max((before - after).abs());
            let r_after = rep.shifted.curvature()?.value;
            gap = gap.max(r_after.sub(&r_before).sup_coeff_norm());

            // model B: central flat shifts 2π Σ m_j dU_j
            let omega_b = random_connection(&mut rng, &mb, cfg)?;
            let mut shift_b = TorusForm::zero(&ctx);
            for axis in 1..=ctx.n {
                use rand::Rng;
                let m: i32 = rng.gen_range(-2..=2);
                shift_b = shift_b.add(&TorusForm::du(&ctx, axis).scale_re(TAU * m as f64));
            }
            let before_b = ym_functional(&omega_b)?;
            let rb_before = omega_b.curvature()?.value;
            let rep_b = gauge_shift(&omega_b, &shift_b)?;
            if !rep_b.ym_invariant {
                gap = gap.max(1.0);
            }
            let after_b = ym_functional(&rep_b.shifted)?;
            gap = gap.max((before_b - after_b).abs());
            let rb_after = rep_b.shifted.curvature()?.value;
            gap = gap.max(rb_after.sub(&rb_before).sup_coeff_norm());
            let _ = i;
        }
        Ok((gap, "‖R‖² and R unchanged under flat shifts".into()))
    })
}

pub fn check_kernel_dimensions(cfg: &VerifyConfig) -> CheckOutcome {
    outcome_from("yang-mills/kernel-dimensions", 0.5, || {
        let ctx = cfg.context();
        let n = ctx.n;
        let max_exp = cfg.max_exp.max(1);
        let side = (2 * max_exp + 1) as usize;
        let ma = BundleModel::model_a(&ctx, None)?;
        let rep = flat_kernel_solver(&ma, max_exp)?;
        let mut gap: f64 = 0.0;
        if rep.ym_dim != n {
            gap = gap.max(1.0);
        }
        // harmonic basis must span {dU_j}: constant coefficients only
        for f in &rep.ym_basis {
            for (_, x) in f.components() {
                for (m, _) in x.terms() {
                    if !m.is_zero() {
                        gap = gap.max(1.0);
                    }
                }
            }
        }
        let expected_flat = n + side.pow(n as u32) - 1;
        if rep.flat_dim != expected_flat {
            gap = gap.max(1.0);
        }
        // deformation independence of the dimensions
        let flat_ctx = TorusContext::new(DeformationMatrix::zero(n));
        let ma0 = BundleModel::model_a(&flat_ctx, None)?;
        let rep0 = flat_kernel_solver(&ma0, max_exp)?;
        if rep0.ym_dim != rep.ym_dim || rep0.flat_dim != rep.flat_dim {
            gap = gap.max(1.0);
        }
        Ok((
            gap,
            format!(
                "ym_dim={} flat_dim={} (expected {n}, {expected_flat})",
                rep.ym_dim, rep.flat_dim
            ),
        ))
    })
}

// ---------------------------------------------------------------------------
// Dirac
// ---------------------------------------------------------------------------

pub fn check_gamma_anticommutation(cfg: &VerifyConfig) -> CheckOutcome {
    outcome_from("dirac/gamma-anticommutation", 1e-14, || {
        let mut gap: f64 = 0.0;
        for n in 2..=5 {
            let rep = GammaRep::new(n)?;
            gap = gap.max(rep.anticommutation_gap());
        }
        let _ = cfg;
        Ok((gap, "{γ^j,γ^k} = 2δ_jk".into()))
    })
}

pub fn check_dirac_squared(cfg: &VerifyConfig) -> CheckOutcome {
    outcome_from("dirac/dirac-squared", cfg.tol_mid, || {
        let ctx = cfg.context();
        let rep = GammaRep::new(ctx.n)?;
        let mut rng = sample::rng(cfg.seed ^ 0xD52);
        let mut gap: f64 = 0.0;
        for _ in 0..cfg.samples {
            let m = sample::exponent(&mut rng, ctx.n, 3);
            let v = DVector::from_iterator(
                rep.spin_dim(),
                (0..rep.spin_dim()).map(|_| Complex64::new(1.0, -0.5)),
            );
            let psi = Spinor::monomial(&ctx, m.clone(), v);
            let dd = dirac_apply(&rep, &dirac_apply(&rep, &psi)?)?;
            let expected = psi.scale(Complex64::new(-(TAU * TAU) * m.norm_sq() as f64, 0.0));
            gap = gap.max(dd.sub(&expected).sup_coeff_norm());
        }
        Ok((gap, "𝒟² = -4π²|m|² on monomial spinors".into()))
    })
}

pub fn check_pi_r(cfg: &VerifyConfig) -> CheckOutcome {
    outcome_from("dirac/pi-r", cfg.tol_pipeline, || {
        let ctx = cfg.context();
        let rep = GammaRep::new(ctx.n)?;
        let one = TorusElement::one(&ctx);
        let mut rng = sample::rng(cfg.seed ^ 0x318);
        let mut gap: f64 = 0.0;
        for _ in 0..cfg.samples {
            let b = sample::element(&mut rng, &ctx, 2, 3);
            let psi = sample::spinor(&mut rng, &ctx, rep.spin_dim(), 2, 3);
            // commutator identity π_R(d_U b)ψ = 𝒟(bψ) - b𝒟ψ
            let lhs = pi_r_apply(&one, &b, &rep, &psi)?;
            let rhs = dirac_apply(&rep, &psi.module_action(&b))?
                .sub(&dirac_apply(&rep, &psi)?.module_action(&b));
            gap = gap.max(lhs.sub(&rhs).sup_coeff_norm());
            // operator composition law:
            // π_R(b0 d_U b1) π_R(1 d_U c1) = π_R(b0 d_U(b1 c0)) π_R(1 d_U c1)
            //                              - π_R(b0 b1 d_U c0) π_R(1 d_U c1)
            // specialized through [𝒟,b1] M_{c0} = [𝒟,b1 c0] - b1 [𝒟,c0]
            let b0 = sample::element(&mut rng, &ctx, 1, 2);
            let c0 = sample::element(&mut rng, &ctx, 1, 2);
            let c1 = sample::element(&mut rng, &ctx, 1, 2);
            let inner = pi_r_apply(&one, &c1, &rep, &psi)?;
            let left = pi_r_apply(&b0, &b, &rep, &inner.module_action(&c0))?;
            let right = pi_r_apply(&b0, &b.mul(&c0), &rep, &inner)?
                .sub(&pi_r_apply(&b0.mul(&b), &c0, &rep, &inner)?);
            gap = gap.max(left.sub(&right).sup_coeff_norm());
        }
        Ok((gap, "π_R commutator and composition identities".into()))
    })
}

pub fn check_gauge_dirac_kernel(cfg: &VerifyConfig) -> CheckOutcome {
    outcome_from("dirac/gauge-dirac-kernel", cfg.tol_mid, || {
        let ctx = cfg.context();
        let model = BundleModel::model_a(&ctx, None)?;
        let wc = ConnectionSpec::canonical(&model);
        let rep = GammaRep::new(ctx.n)?;
        let mut rng = sample::rng(cfg.seed ^ 0x6D1);
        let mut gap: f64 = 0.0;
        for _ in 0..cfg.samples.min(6) {
            let v = DVector::from_iterator(
                rep.spin_dim(),
                (0..rep.spin_dim()).map(|_| {
                    use rand::Rng;
                    Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
                }),
            );
            let psi0 = Spinor::constant(&ctx, v);
            let gs = GaugeSpinor::new(TorusElement::one(&ctx), psi0.clone());
            gap = gap.max(dirac_residual(&wc, &rep, &gs)?.sup_coeff_norm());
            // positivity and normalization of the gauge spinor pairing
            let ip = gauge_spinor_inner(&gs, &gs)?;
            gap = gap.max(ip.im.abs());
            gap = gap.max((-ip.re).max(0.0));
        }
        Ok((gap, "canonical gauge Dirac annihilates constants".into()))
    })
}

pub fn check_spectrum(cfg: &VerifyConfig) -> CheckOutcome {
    outcome_from("dirac/spectrum", 1e-8, || {
        let ctx = cfg.context();
        let model = BundleModel::model_a(&ctx, None)?;
        let wc = ConnectionSpec::canonical(&model);
        let rep = GammaRep::new(ctx.n)?;
        let mut gap: f64 = 0.0;
        let mut signatures = Vec::new();
        for cutoff in 1..=cfg.cutoff.max(1) {
            let spec = dirac_spectrum(&wc, &rep, cutoff)?;
            signatures.push(spec.signature);
            // negation symmetry
            for l in &spec.eigenvalues {
                let ok = spec.eigenvalues.iter().any(|w| (w + l).norm() < 1e-8);
                if !ok {
                    gap = gap.max(l.norm().max(1.0));
                }
            }
            // kernel dimension at m = 0
            let zeros = spec.eigenvalues.iter().filter(|l| l.norm() < 1e-9).count();
            if zeros != rep.spin_dim() {
                gap = gap.max(1.0);
            }
        }
        if signatures.windows(2).any(|w| w[0] != w[1]) || signatures[0] != Some(-1) {
            gap = gap.max(1.0);
        }
        Ok((gap, "negation symmetry / signature stability".into()))
    })
}

/// Run every suite with counts from the configuration.
pub fn run_all(cfg: &VerifyConfig) -> Vec<CheckOutcome> {
    vec![
        check_deformation_relation(cfg),
        check_associativity(cfg),
        check_trace_property(cfg),
        check_star_properties(cfg),
        check_derivations(cfg),
        check_gns_oracle(cfg, cfg.samples),
        check_d_squared(cfg, cfg.samples),
        check_graded_leibniz(cfg),
        check_anti_hermitian_d(cfg),
        check_stokes(cfg),
        check_hodge(cfg),
        check_codifferential_adjoint(cfg, cfg.samples),
        check_hermitian_detection(cfg),
        check_inner_positivity(cfg),
        check_hopf_axioms(cfg),
        check_germs_kernel(cfg),
        check_envelope(cfg),
        check_connection_axiom(cfg),
        check_curvature_star_rule(cfg),
        check_canonical_connections(cfg),
        check_model_b_curvature_closed_form(cfg, cfg.samples),
        check_covariant_derivatives(cfg),
        check_bianchi(cfg, cfg.samples.min(10)),
        check_s_adjointness(cfg, cfg.samples.min(10)),
        check_metric_compatibility(cfg, cfg.samples),
        check_residual_consistency(cfg, cfg.samples.min(15)),
        check_variational_oracle(cfg, cfg.samples.min(6)),
        check_solution_sets(cfg),
        check_functional_positivity(cfg),
        check_residual_linearity(cfg),
        check_grassmann_independence(cfg),
        check_gauge_invariance(cfg, cfg.samples.min(10)),
        check_kernel_dimensions(cfg),
        check_gamma_anticommutation(cfg),
        check_dirac_squared(cfg),
        check_pi_r(cfg),
        check_gauge_dirac_kernel(cfg),
        check_spectrum(cfg),
    ]
}
