//! Seeded random generators for elements, forms and spinors. All randomized
//! verification flows from an explicit 64-bit seed through these helpers,
//! keeping every check reproducible.

use std::sync::Arc;

use nalgebra::DVector;
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::algebra::{ExponentVec, TorusContext, TorusElement};
use crate::dirac::Spinor;
use crate::forms::{FormIndex, TorusForm};
use crate::hopf::{CalculusKind, EnvelopeElement, LaurentElement};

pub type Seeded = ChaCha8Rng;

pub fn rng(seed: u64) -> Seeded {
    ChaCha8Rng::seed_from_u64(seed)
}

fn coeff(rng: &mut Seeded) -> Complex64 {
    Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

pub fn exponent(rng: &mut Seeded, n: usize, max_exp: i32) -> ExponentVec {
    ExponentVec((0..n).map(|_| rng.gen_range(-max_exp..=max_exp)).collect())
}

/// Random element with `terms` monomials of sup-norm at most `max_exp`.
pub fn element(
    rng: &mut Seeded,
    ctx: &Arc<TorusContext>,
    max_exp: i32,
    terms: usize,
) -> TorusElement {
    let mut e = TorusElement::zero(ctx);
    for _ in 0..terms {
        e = e.add(&TorusElement::monomial(
            ctx,
            exponent(rng, ctx.n, max_exp),
            coeff(rng),
        ));
    }
    e
}

pub fn hermitian_element(
    rng: &mut Seeded,
    ctx: &Arc<TorusContext>,
    max_exp: i32,
    terms: usize,
) -> TorusElement {
    let a = element(rng, ctx, max_exp, terms);
    a.add(&a.star())
}

pub fn anti_hermitian_element(
    rng: &mut Seeded,
    ctx: &Arc<TorusContext>,
    max_exp: i32,
    terms: usize,
) -> TorusElement {
    let a = element(rng, ctx, max_exp, terms);
    a.sub(&a.star())
}

/// Random homogeneous form of the given degree.
pub fn form(
    rng: &mut Seeded,
    ctx: &Arc<TorusContext>,
    degree: usize,
    max_exp: i32,
    terms: usize,
) -> TorusForm {
    assert!(degree <= ctx.n);
    let indices: Vec<FormIndex> = all_indices_of_degree(ctx.n, degree);
    let mut f = TorusForm::zero(ctx);
    for idx in indices {
        f = f.add(&TorusForm::monomial(idx, element(rng, ctx, max_exp, terms)));
    }
    f
}

pub fn all_indices_of_degree(n: usize, degree: usize) -> Vec<FormIndex> {
    (0u32..(1 << n))
        .filter(|m| m.count_ones() as usize == degree)
        .map(FormIndex)
        .collect()
}

/// Random Hermitian 1-form (a valid connection displacement).
pub fn hermitian_one_form(
    rng: &mut Seeded,
    ctx: &Arc<TorusContext>,
    max_exp: i32,
    terms: usize,
) -> TorusForm {
    let f = form(rng, ctx, 1, max_exp, terms);
    f.add(&f.star())
}

/// Random mixed-degree form (all degrees 0..=n populated).
pub fn mixed_form(
    rng: &mut Seeded,
    ctx: &Arc<TorusContext>,
    max_exp: i32,
    terms: usize,
) -> TorusForm {
    let mut f = TorusForm::zero(ctx);
    for degree in 0..=ctx.n {
        f = f.add(&form(rng, ctx, degree, max_exp, terms));
    }
    f
}

pub fn laurent(rng: &mut Seeded, max_exp: i64, terms: usize) -> LaurentElement {
    let mut e = LaurentElement::zero();
    for _ in 0..terms {
        e = e.add(&LaurentElement::monomial(
            rng.gen_range(-max_exp..=max_exp),
            coeff(rng),
        ));
    }
    e
}

pub fn envelope(
    rng: &mut Seeded,
    kind: CalculusKind,
    max_exp: i64,
    max_degree: u32,
    terms: usize,
) -> EnvelopeElement {
    let mut e = EnvelopeElement::zero(kind);
    for _ in 0..terms {
        let a = rng.gen_range(-max_exp..=max_exp);
        let k = rng.gen_range(0..=max_degree);
        e = e.add(&EnvelopeElement::monomial(kind, a, k, coeff(rng)));
    }
    e
}

pub fn spinor(
    rng: &mut Seeded,
    ctx: &Arc<TorusContext>,
    spin_dim: usize,
    max_exp: i32,
    terms: usize,
) -> Spinor {
    let mut s = Spinor::zero(ctx, spin_dim);
    for _ in 0..terms {
        let v = DVector::from_iterator(spin_dim, (0..spin_dim).map(|_| coeff(rng)));
        s = s.add(&Spinor::monomial(ctx, exponent(rng, ctx.n, max_exp), v));
    }
    s
}
