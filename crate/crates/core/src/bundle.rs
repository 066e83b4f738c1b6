//! The two quantum principal U(1)-bundle models over the deformed torus:
//!
//! * model A — total algebra the (n+1)-torus with the classical 1-dimensional
//!   calculus of U(1); total forms are forms on the (n+1)-torus and the
//!   fiber coaction sends the last generator to itself tensor `z`;
//! * model B — total algebra `T^n_Ξ ⊗ C[z,z⁻¹]` with the non-standard
//!   calculus; total forms are base forms tensored with envelope monomials
//!   `z^a ϑ^k`.
//!
//! Connections are stored as a Hermitian base 1-form displacement `μ` over
//! the canonical connection. Curvature, covariant derivatives, the
//! S-operator and the twisted covariant derivative are all evaluated through
//! the general total-form arithmetic and cross-checked against their closed
//! forms where one exists.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_complex::Complex64;

use crate::algebra::{ExponentVec, TorusContext, TorusElement, TAU};
use crate::error::{Error, Result};
use crate::forms::{FormIndex, TorusForm};
use crate::hopf::{embedded_differential, CalculusKind, DEFAULT_ENVELOPE_DEGREE};

pub const TOL_ALG: f64 = 1e-12;
pub const TOL_PIPELINE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelKind {
    A,
    B,
}

/// A bundle model: base context plus, for model A, the extended total
/// context, and for model B the envelope truncation bound.
#[derive(Debug)]
pub struct BundleModel {
    pub kind: ModelKind,
    base: Arc<TorusContext>,
    total: Option<Arc<TorusContext>>,
    max_envelope_degree: u32,
}

impl BundleModel {
    /// Model A over `base`; `fiber_row` supplies the deformation phases of
    /// the new fiber generator against the base ones (zeros by default).
    pub fn model_a(base: &Arc<TorusContext>, fiber_row: Option<&[f64]>) -> Result<Arc<Self>> {
        let xi_ext = base.xi.extended(fiber_row)?;
        let total = TorusContext::with_threshold(xi_ext, base.zero_threshold);
        Ok(Arc::new(Self {
            kind: ModelKind::A,
            base: base.clone(),
            total: Some(total),
            max_envelope_degree: DEFAULT_ENVELOPE_DEGREE,
        }))
    }

    pub fn model_b(base: &Arc<TorusContext>) -> Arc<Self> {
        Arc::new(Self {
            kind: ModelKind::B,
            base: base.clone(),
            total: None,
            max_envelope_degree: DEFAULT_ENVELOPE_DEGREE,
        })
    }

    pub fn base(&self) -> &Arc<TorusContext> {
        &self.base
    }

    pub fn base_dim(&self) -> usize {
        self.base.n
    }

    /// Total-space context for model A.
    pub fn total(&self) -> &Arc<TorusContext> {
        self.total.as_ref().expect("total context only in model A")
    }

    pub fn calculus(&self) -> CalculusKind {
        match self.kind {
            ModelKind::A => CalculusKind::Classical,
            ModelKind::B => CalculusKind::NonStandard,
        }
    }

    /// The model/calculus pairing rule: A goes with the classical calculus,
    /// B with the non-standard one.
    pub fn check_calculus(&self, kind: CalculusKind) -> Result<()> {
        if self.calculus() == kind {
            Ok(())
        } else {
            Err(Error::ModelCalculusMismatch)
        }
    }
}

/// Total-space differential form.
#[derive(Debug, Clone)]
pub struct TotalForm {
    model: Arc<BundleModel>,
    repr: TotalRepr,
}

#[derive(Debug, Clone)]
enum TotalRepr {
    /// Model A: a form on the (n+1)-torus.
    A(TorusForm),
    /// Model B: map (base wedge index, z exponent, germ degree) → coefficient.
    B {
        terms: BTreeMap<(FormIndex, i64, u32), TorusElement>,
        truncated: bool,
    },
}

impl TotalForm {
    pub fn zero(model: &Arc<BundleModel>) -> Self {
        match model.kind {
            ModelKind::A => Self {
                model: model.clone(),
                repr: TotalRepr::A(TorusForm::zero(model.total())),
            },
            ModelKind::B => Self {
                model: model.clone(),
                repr: TotalRepr::B {
                    terms: BTreeMap::new(),
                    truncated: false,
                },
            },
        }
    }

    pub fn model(&self) -> &Arc<BundleModel> {
        &self.model
    }

    /// Model A: wrap a form on the total torus.
    pub fn from_total_a(model: &Arc<BundleModel>, f: TorusForm) -> Self {
        assert_eq!(model.kind, ModelKind::A);
        Self {
            model: model.clone(),
            repr: TotalRepr::A(f),
        }
    }

    /// Model B monomial `(base form) ⊗ z^a ϑ^k`.
    pub fn from_b_monomial(model: &Arc<BundleModel>, f: &TorusForm, a: i64, k: u32) -> Self {
        assert_eq!(model.kind, ModelKind::B);
        let mut out = Self::zero(model);
        if let TotalRepr::B { terms, .. } = &mut out.repr {
            for (idx, x) in f.components() {
                terms.insert((*idx, a, k), x.clone());
            }
        }
        out
    }

    /// Embed a base form into the total calculus: model A pads exponents
    /// with a zero fiber entry, model B tensors with `z^0 ϑ^0`.
    pub fn embed_base(model: &Arc<BundleModel>, f: &TorusForm) -> Self {
        match model.kind {
            ModelKind::A => {
                let total = model.total();
                let mut out = TorusForm::zero(total);
                for (idx, x) in f.components() {
                    let lifted = TorusElement::from_terms(
                        total,
                        x.terms().map(|(m, c)| {
                            let mut v = m.0.clone();
                            v.push(0);
                            (ExponentVec(v), *c)
                        }),
                    );
                    out = out.add(&TorusForm::monomial(*idx, lifted));
                }
                Self {
                    model: model.clone(),
                    repr: TotalRepr::A(out),
                }
            }
            ModelKind::B => {
                let mut terms = BTreeMap::new();
                for (idx, x) in f.components() {
                    terms.insert((*idx, 0i64, 0u32), x.clone());
                }
                Self {
                    model: model.clone(),
                    repr: TotalRepr::B {
                        terms,
                        truncated: false,
                    },
                }
            }
        }
    }

    pub fn as_total_a(&self) -> &TorusForm {
        match &self.repr {
            TotalRepr::A(f) => f,
            _ => panic!("model A representation expected"),
        }
    }

    pub fn b_terms(&self) -> impl Iterator<Item = (&(FormIndex, i64, u32), &TorusElement)> {
        match &self.repr {
            TotalRepr::B { terms, .. } => terms.iter(),
            _ => panic!("model B representation expected"),
        }
    }

    pub fn truncated(&self) -> bool {
        match &self.repr {
            TotalRepr::A(_) => false,
            TotalRepr::B { truncated, .. } => *truncated,
        }
    }

    pub fn is_zero(&self) -> bool {
        match &self.repr {
            TotalRepr::A(f) => f.is_zero(),
            TotalRepr::B { terms, .. } => terms.is_empty(),
        }
    }

    pub fn sup_coeff_norm(&self) -> f64 {
        match &self.repr {
            TotalRepr::A(f) => f.sup_coeff_norm(),
            TotalRepr::B { terms, .. } => terms
                .values()
                .map(|x| x.sup_coeff_norm())
                .fold(0.0, f64::max),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert!(Arc::ptr_eq(&self.model, &other.model));
        match (&self.repr, &other.repr) {
            (TotalRepr::A(a), TotalRepr::A(b)) => Self {
                model: self.model.clone(),
                repr: TotalRepr::A(a.add(b)),
            },
            (
                TotalRepr::B { terms: ta, truncated: fa },
                TotalRepr::B { terms: tb, truncated: fb },
            ) => {
                let mut terms = ta.clone();
                for (key, x) in tb {
                    merge_b_term(&mut terms, *key, x.clone());
                }
                Self {
                    model: self.model.clone(),
                    repr: TotalRepr::B {
                        terms,
                        truncated: *fa || *fb,
                    },
                }
            }
            _ => unreachable!(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    pub fn scale(&self, c: Complex64) -> Self {
        match &self.repr {
            TotalRepr::A(f) => Self {
                model: self.model.clone(),
                repr: TotalRepr::A(f.scale(c)),
            },
            TotalRepr::B { terms, truncated } => {
                let mut out = BTreeMap::new();
                for (key, x) in terms {
                    merge_b_term(&mut out, *key, x.scale(c));
                }
                Self {
                    model: self.model.clone(),
                    repr: TotalRepr::B {
                        terms: out,
                        truncated: *truncated,
                    },
                }
            }
        }
    }

    /// Graded product of total forms.
    pub fn mul(&self, other: &Self) -> Self {
        assert!(Arc::ptr_eq(&self.model, &other.model));
        match (&self.repr, &other.repr) {
            (TotalRepr::A(a), TotalRepr::A(b)) => Self {
                model: self.model.clone(),
                repr: TotalRepr::A(a.wedge(b)),
            },
            (
                TotalRepr::B { terms: ta, truncated: fa },
                TotalRepr::B { terms: tb, truncated: fb },
            ) => {
                let max_deg = self.model.max_envelope_degree;
                let mut terms = BTreeMap::new();
                let mut truncated = *fa || *fb;
                for (&(s, a, j), x) in ta {
                    for (&(t, b, k), y) in tb {
                        if s.0 & t.0 != 0 {
                            continue;
                        }
                        if j + k > max_deg {
                            truncated = true;
                            continue;
                        }
                        // graded tensor sign (-1)^{j·|t|} times the envelope
                        // commutation sign (-1)^{j·b}
                        let mut sign = 1.0f64;
                        if (j as usize * t.degree()) % 2 == 1 {
                            sign = -sign;
                        }
                        if (j as i64 * b).rem_euclid(2) == 1 {
                            sign = -sign;
                        }
                        sign *= wedge_sign(s, t);
                        let coeff = x.mul(y).scale(Complex64::new(sign, 0.0));
                        merge_b_term(&mut terms, (FormIndex(s.0 | t.0), a + b, j + k), coeff);
                    }
                }
                Self {
                    model: self.model.clone(),
                    repr: TotalRepr::B { terms, truncated },
                }
            }
            _ => unreachable!(),
        }
    }

    /// Total differential.
    pub fn differential(&self) -> Self {
        match &self.repr {
            TotalRepr::A(f) => Self {
                model: self.model.clone(),
                repr: TotalRepr::A(f.differential()),
            },
            TotalRepr::B { terms, truncated } => {
                let max_deg = self.model.max_envelope_degree;
                let mut out = BTreeMap::new();
                let mut trunc = *truncated;
                for (&(s, a, k), x) in terms {
                    // d(base part) ⊗ z^a ϑ^k
                    let base = TorusForm::monomial(s, x.clone()).differential();
                    for (idx, y) in base.components() {
                        merge_b_term(&mut out, (*idx, a, k), y.clone());
                    }
                    // ± base ⊗ d(z^a ϑ^k); envelope rule
                    let fa = if a.rem_euclid(2) == 1 { 1.0 } else { 0.0 };
                    let fk = if k % 2 == 1 { 1.0 } else { 0.0 };
                    let factor = fa - fk;
                    if factor != 0.0 {
                        if k + 1 > max_deg {
                            trunc = true;
                        } else {
                            let sign = if s.degree() % 2 == 0 { 1.0 } else { -1.0 };
                            merge_b_term(
                                &mut out,
                                (s, a, k + 1),
                                x.scale(Complex64::new(sign * factor, 0.0)),
                            );
                        }
                    }
                }
                Self {
                    model: self.model.clone(),
                    repr: TotalRepr::B {
                        terms: out,
                        truncated: trunc,
                    },
                }
            }
        }
    }

    /// Graded involution of the total calculus.
    pub fn star(&self) -> Self {
        match &self.repr {
            TotalRepr::A(f) => Self {
                model: self.model.clone(),
                repr: TotalRepr::A(f.star()),
            },
            TotalRepr::B { terms, truncated } => {
                let mut out = BTreeMap::new();
                for (&(s, a, k), x) in terms {
                    // (z^a ϑ^k)^* = (-1)^{k(k-1)/2} (-1)^{ka} z^{-a} ϑ^k
                    let mut sign = if (k * k.wrapping_sub(1) / 2) % 2 == 1 {
                        -1.0
                    } else {
                        1.0
                    };
                    if (k as i64 * a).rem_euclid(2) == 1 {
                        sign = -sign;
                    }
                    merge_b_term(&mut out, (s, -a, k), x.star().scale(Complex64::new(sign, 0.0)));
                }
                Self {
                    model: self.model.clone(),
                    repr: TotalRepr::B {
                        terms: out,
                        truncated: *truncated,
                    },
                }
            }
        }
    }

    /// Structural horizontality: model A forms must not involve the fiber
    /// direction `dU_{n+1}`; model B forms must have germ degree zero.
    pub fn is_horizontal(&self, tol: f64) -> bool {
        match &self.repr {
            TotalRepr::A(f) => {
                let fiber_axis = self.model.base_dim() + 1;
                f.components()
                    .all(|(idx, x)| !idx.contains(fiber_axis) || x.sup_coeff_norm() <= tol)
            }
            TotalRepr::B { terms, .. } => terms
                .iter()
                .all(|(&(_, _, k), x)| k == 0 || x.sup_coeff_norm() <= tol),
        }
    }

    /// Project the vertical components away (used after operations whose
    /// result is horizontal up to floating-point noise).
    fn horizontal_part(&self) -> Self {
        match &self.repr {
            TotalRepr::A(f) => {
                let fiber_axis = self.model.base_dim() + 1;
                let mut out = TorusForm::zero(self.model.total());
                for (idx, x) in f.components() {
                    if !idx.contains(fiber_axis) {
                        out = out.add(&TorusForm::monomial(*idx, x.clone()));
                    }
                }
                Self {
                    model: self.model.clone(),
                    repr: TotalRepr::A(out),
                }
            }
            TotalRepr::B { terms, truncated } => {
                let mut out = BTreeMap::new();
                for (&(s, a, k), x) in terms {
                    if k == 0 {
                        merge_b_term(&mut out, (s, a, k), x.clone());
                    }
                }
                Self {
                    model: self.model.clone(),
                    repr: TotalRepr::B {
                        terms: out,
                        truncated: *truncated,
                    },
                }
            }
        }
    }

    /// Split a horizontal form by (form degree, fiber weight): model A uses
    /// the exponent of the fiber generator, model B the z-exponent.
    fn horizontal_graded_parts(&self) -> Vec<(usize, i64, TotalForm)> {
        let mut buckets: BTreeMap<(usize, i64), TotalForm> = BTreeMap::new();
        match &self.repr {
            TotalRepr::A(f) => {
                let nb = self.model.base_dim();
                for (idx, x) in f.components() {
                    for (m, c) in x.terms() {
                        let weight = m.0[nb] as i64;
                        let key = (idx.degree(), weight);
                        let mono = TorusForm::monomial(
                            *idx,
                            TorusElement::monomial(self.model.total(), m.clone(), *c),
                        );
                        let piece = TotalForm {
                            model: self.model.clone(),
                            repr: TotalRepr::A(mono),
                        };
                        buckets
                            .entry(key)
                            .and_modify(|e| *e = e.add(&piece))
                            .or_insert(piece);
                    }
                }
            }
            TotalRepr::B { terms, .. } => {
                for (&(s, a, k), x) in terms {
                    assert_eq!(k, 0, "horizontal form expected");
                    let key = (s.degree(), a);
                    let piece = TotalForm::from_b_monomial(
                        &self.model,
                        &TorusForm::monomial(s, x.clone()),
                        a,
                        0,
                    );
                    buckets
                        .entry(key)
                        .and_modify(|e| *e = e.add(&piece))
                        .or_insert(piece);
                }
            }
        }
        buckets
            .into_iter()
            .map(|((deg, w), f)| (deg, w, f))
            .collect()
    }

    /// Project a horizontal, fiber-weight-zero form onto base forms.
    pub fn project_base(&self, tol: f64) -> Result<TorusForm> {
        let base = self.model.base().clone();
        match &self.repr {
            TotalRepr::A(f) => {
                let nb = self.model.base_dim();
                let mut out = TorusForm::zero(&base);
                for (idx, x) in f.components() {
                    if idx.contains(nb + 1) {
                        if x.sup_coeff_norm() > tol {
                            return Err(Error::NotHorizontal(format!(
                                "dU_{} component of size {:.3e}",
                                nb + 1,
                                x.sup_coeff_norm()
                            )));
                        }
                        continue;
                    }
                    let mut dropped = TorusElement::zero(&base);
                    for (m, c) in x.terms() {
                        if m.0[nb] != 0 {
                            if c.norm() > tol {
                                return Err(Error::NotHorizontal(format!(
                                    "fiber exponent {} with coefficient {:.3e}",
                                    m.0[nb],
                                    c.norm()
                                )));
                            }
                            continue;
                        }
                        let mut v = m.0.clone();
                        v.pop();
                        dropped = dropped.add(&TorusElement::monomial(&base, ExponentVec(v), *c));
                    }
                    out = out.add(&TorusForm::monomial(*idx, dropped));
                }
                Ok(out)
            }
            TotalRepr::B { terms, .. } => {
                let mut out = TorusForm::zero(&base);
                for (&(s, a, k), x) in terms {
                    if (k != 0 || a != 0) && x.sup_coeff_norm() > tol {
                        return Err(Error::NotHorizontal(format!(
                            "z^{a} ϑ^{k} component of size {:.3e}",
                            x.sup_coeff_norm()
                        )));
                    }
                    if k == 0 && a == 0 {
                        out = out.add(&TorusForm::monomial(s, x.clone()));
                    }
                }
                Ok(out)
            }
        }
    }
}

fn wedge_sign(s: FormIndex, t: FormIndex) -> f64 {
    let mut inversions = 0u32;
    for axis in s.axes() {
        let below = t.0 & ((1u32 << (axis - 1)) - 1);
        inversions += below.count_ones();
    }
    if inversions % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

fn merge_b_term(
    terms: &mut BTreeMap<(FormIndex, i64, u32), TorusElement>,
    key: (FormIndex, i64, u32),
    x: TorusElement,
) {
    if x.is_zero() {
        return;
    }
    match terms.entry(key) {
        std::collections::btree_map::Entry::Vacant(v) => {
            v.insert(x);
        }
        std::collections::btree_map::Entry::Occupied(mut o) => {
            let s = o.get().add(&x);
            if s.is_zero() {
                o.remove();
            } else {
                *o.get_mut() = s;
            }
        }
    }
}

/// Section of type ad: since the adjoint corepresentation is trivial for
/// both calculi, it is determined by its value on the germ `ϑ`, a base form.
#[derive(Debug, Clone, PartialEq)]
pub struct AdSection {
    pub value: TorusForm,
}

impl AdSection {
    pub fn new(value: TorusForm) -> Self {
        Self { value }
    }

    pub fn zero(ctx: &Arc<TorusContext>) -> Self {
        Self {
            value: TorusForm::zero(ctx),
        }
    }
}

/// A quantum principal connection `ω = ω^c + λ` stored through the
/// displacement value `λ(ϑ) = μ`, a Hermitian base 1-form (`μ = 0` is the
/// canonical connection).
#[derive(Debug, Clone)]
pub struct ConnectionSpec {
    model: Arc<BundleModel>,
    mu: TorusForm,
}

impl ConnectionSpec {
    pub fn new(model: &Arc<BundleModel>, mu: TorusForm) -> Result<Self> {
        if !mu.is_zero() {
            if mu.pure_degree()? != 1 {
                return Err(Error::Unsupported(
                    "connection displacement must be a 1-form".into(),
                ));
            }
            if !mu.is_hermitian(TOL_ALG) {
                return Err(Error::NotHermitian(format!(
                    "μ - μ* has sup norm {:.3e}",
                    mu.sub(&mu.star()).sup_coeff_norm()
                )));
            }
        }
        Ok(Self {
            model: model.clone(),
            mu,
        })
    }

    /// The canonical connection of either model (`μ = 0`).
    pub fn canonical(model: &Arc<BundleModel>) -> Self {
        Self {
            model: model.clone(),
            mu: TorusForm::zero(model.base()),
        }
    }

    pub fn model(&self) -> &Arc<BundleModel> {
        &self.model
    }

    pub fn mu(&self) -> &TorusForm {
        &self.mu
    }

    /// Evaluate `ω(ϑ)` as a total form:
    /// model A `-2π dU_{n+1} + μ`, model B `μ ⊗ 1 + 1 ⊗ ϑ`.
    pub fn omega_theta(&self) -> TotalForm {
        match self.model.kind {
            ModelKind::A => {
                let total = self.model.total();
                let fiber_axis = self.model.base_dim() + 1;
                let canonical = TorusForm::du(total, fiber_axis).scale_re(-TAU);
                let mu = TotalForm::embed_base(&self.model, &self.mu);
                TotalForm::from_total_a(&self.model, canonical).add(&mu)
            }
            ModelKind::B => {
                let mu = TotalForm::embed_base(&self.model, &self.mu);
                let vertical = TotalForm::from_b_monomial(
                    &self.model,
                    &TorusForm::one(self.model.base()),
                    0,
                    1,
                );
                mu.add(&vertical)
            }
        }
    }

    /// `⟨ψ, φ⟩ = m ∘ (ψ ⊗ φ) ∘ Θ` evaluated at `ϑ`, for sections given by
    /// their `ϑ`-values.
    pub fn theta_bracket(&self, psi: &TotalForm, phi: &TotalForm) -> TotalForm {
        let c = embedded_differential(self.model.calculus());
        psi.mul(phi).scale(c)
    }

    /// Curvature evaluated at `ϑ`, computed through the general total-form
    /// arithmetic `R(ϑ) = d ω(ϑ) - ⟨ω, ω⟩(ϑ)` and verified against the
    /// closed form (`dμ` for model A, `dμ + μμ` for model B).
    pub fn curvature(&self) -> Result<AdSection> {
        let general = self.curvature_general()?;
        let closed = self.curvature_closed_form();
        let gap = general.sub(&closed).sup_coeff_norm();
        if gap > TOL_PIPELINE {
            return Err(Error::Consistency {
                what: "curvature general vs closed form".into(),
                gap,
                tol: TOL_PIPELINE,
            });
        }
        Ok(AdSection::new(general))
    }

    /// The general route only (no closed-form check).
    pub fn curvature_general(&self) -> Result<TorusForm> {
        let omega = self.omega_theta();
        let total = omega.differential().sub(&self.theta_bracket(&omega, &omega));
        total.project_base(TOL_ALG)
    }

    /// Closed-form curvature value.
    pub fn curvature_closed_form(&self) -> TorusForm {
        let dmu = self.mu.differential();
        match self.model.kind {
            ModelKind::A => dmu,
            ModelKind::B => dmu.add(&self.mu.wedge(&self.mu)),
        }
    }

    /// Covariant derivative `D^ω(φ) = dφ - (-1)^k φ^{(0)} ω(π(φ^{(1)}))` of a
    /// horizontal form, evaluated through the coaction weights (model A: the
    /// fiber exponent with the classical germs map; model B: the z-exponent
    /// parity). The result is horizontal; vertical round-off is checked and
    /// projected away.
    pub fn covariant_derivative(&self, phi: &TotalForm) -> Result<TotalForm> {
        self.require_horizontal(phi)?;
        let omega = self.omega_theta();
        let mut out = phi.differential();
        for (deg, weight, part) in phi.horizontal_graded_parts() {
            let germ = self.germ_weight(weight);
            if germ == 0.0 {
                continue;
            }
            let sign = if deg % 2 == 0 { 1.0 } else { -1.0 };
            out = out.sub(&part.mul(&omega).scale(Complex64::new(sign * germ, 0.0)));
        }
        self.finish_horizontal(out, "covariant derivative")
    }

    /// Dual covariant derivative
    /// `D̂^ω(φ) = dφ + ω(π(S^{-1}(φ^{(1)}))) φ^{(0)}`.
    pub fn dual_covariant_derivative(&self, phi: &TotalForm) -> Result<TotalForm> {
        self.require_horizontal(phi)?;
        let omega = self.omega_theta();
        let mut out = phi.differential();
        for (_deg, weight, part) in phi.horizontal_graded_parts() {
            // S^{-1}(z^w) = z^{-w}
            let germ = self.germ_weight(-weight);
            if germ == 0.0 {
                continue;
            }
            out = out.add(&omega.mul(&part).scale(Complex64::new(germ, 0.0)));
        }
        self.finish_horizontal(out, "dual covariant derivative")
    }

    /// The germs-map weight of the fiber coaction leg `z^w`.
    fn germ_weight(&self, w: i64) -> f64 {
        match self.model.calculus() {
            CalculusKind::Classical => w as f64,
            CalculusKind::NonStandard => {
                if w.rem_euclid(2) == 1 {
                    1.0
                } else {
                    0.0
                }
            }
        }
    }

    fn require_horizontal(&self, phi: &TotalForm) -> Result<()> {
        if phi.is_horizontal(0.0) {
            Ok(())
        } else {
            Err(Error::NotHorizontal("input to a covariant derivative".into()))
        }
    }

    fn finish_horizontal(&self, f: TotalForm, what: &str) -> Result<TotalForm> {
        let horizontal = f.horizontal_part();
        let vertical_norm = f.sub(&horizontal).sup_coeff_norm();
        if vertical_norm > TOL_ALG {
            return Err(Error::Consistency {
                what: format!("{what}: vertical residue"),
                gap: vertical_norm,
                tol: TOL_ALG,
            });
        }
        Ok(horizontal)
    }

    /// The dual S-operator evaluated on an ad-section of pure degree `a`:
    /// zero for model A, `μη - (-1)^a ημ` for model B.
    pub fn s_operator(&self, tau: &AdSection) -> Result<AdSection> {
        let a = tau.value.pure_degree()?;
        match self.model.kind {
            ModelKind::A => Ok(AdSection::zero(self.model.base())),
            ModelKind::B => {
                let left = self.mu.wedge(&tau.value);
                let right = tau.value.wedge(&self.mu);
                let sign = if a % 2 == 0 { 1.0 } else { -1.0 };
                Ok(AdSection::new(left.sub(&right.scale_re(sign))))
            }
        }
    }

    /// Twisted covariant derivative of an ad-section,
    /// `DS^ω(τ) = dτ - ⟨ω, τ⟩ + (-1)^a ⟨τ, ω⟩`, evaluated through the
    /// general total-form arithmetic. For the trivial adjoint coaction it
    /// lands on base forms again.
    pub fn twisted_covariant_derivative(&self, tau: &AdSection) -> Result<AdSection> {
        let a = tau.value.pure_degree()?;
        let omega = self.omega_theta();
        let tau_tot = TotalForm::embed_base(&self.model, &tau.value);
        let sign = if a % 2 == 0 { 1.0 } else { -1.0 };
        let total = tau_tot
            .differential()
            .sub(&self.theta_bracket(&omega, &tau_tot))
            .add(&self.theta_bracket(&tau_tot, &omega).scale(Complex64::new(sign, 0.0)));
        Ok(AdSection::new(total.project_base(TOL_ALG)?))
    }

    /// Dual twisted covariant derivative, the star conjugate of the twisted
    /// one at the evaluated level.
    pub fn dual_twisted_covariant_derivative(&self, tau: &AdSection) -> Result<AdSection> {
        let starred = AdSection::new(tau.value.star());
        let ds = self.twisted_covariant_derivative(&starred)?;
        Ok(AdSection::new(ds.value.star()))
    }
}

/// Report of a randomized regularity check.
#[derive(Debug, Clone)]
pub struct RegularityReport {
    pub regular: bool,
    pub max_gap: f64,
    pub witness: Option<String>,
}

/// Test the regularity identity
/// `ω(ϑ) φ = (-1)^k φ^{(0)} ω(ϑ ∘ φ^{(1)})` on the supplied horizontal
/// forms (callers generate them; see `sample`). For the classical calculus
/// `ϑ ∘ z^w = ϑ`; for the non-standard one `ϑ ∘ z^w = (-1)^w ϑ`.
pub fn check_regular(
    omega: &ConnectionSpec,
    samples: &[TotalForm],
    tol: f64,
) -> Result<RegularityReport> {
    let omega_theta = omega.omega_theta();
    let mut max_gap: f64 = 0.0;
    let mut witness = None;
    for (i, phi) in samples.iter().enumerate() {
        if !phi.is_horizontal(0.0) {
            return Err(Error::NotHorizontal(format!("regularity sample {i}")));
        }
        for (deg, weight, part) in phi.horizontal_graded_parts() {
            let lhs = omega_theta.mul(&part);
            let module_sign = match omega.model().calculus() {
                CalculusKind::Classical => 1.0,
                CalculusKind::NonStandard => {
                    if weight.rem_euclid(2) == 1 {
                        -1.0
                    } else {
                        1.0
                    }
                }
            };
            let sign = if deg % 2 == 0 { 1.0 } else { -1.0 };
            let rhs = part
                .mul(&omega_theta)
                .scale(Complex64::new(sign * module_sign, 0.0));
            let gap = lhs.sub(&rhs).sup_coeff_norm();
            if gap > max_gap {
                max_gap = gap;
                if gap > tol {
                    witness = Some(format!(
                        "sample {i}, degree {deg}, fiber weight {weight}: gap {gap:.3e}"
                    ));
                }
            }
        }
    }
    Ok(RegularityReport {
        regular: max_gap <= tol,
        max_gap,
        witness,
    })
}

/// Report of the multiplicativity check.
#[derive(Debug, Clone)]
pub struct MultiplicativityReport {
    pub multiplicative: bool,
    pub max_gap: f64,
    pub rationale: String,
}

/// Multiplicativity `ω(π(g^{(1)})) ω(π(g^{(2)})) = 0` for all `g` in the
/// calculus ideal. Classical calculus (ideal Ker²ε): the condition reduces
/// to `ω(ϑ)² = 0`. Non-standard calculus (ideal (z²-1)G): evaluated on the
/// generators `(z²-1) z^m`, the two germ legs cancel identically; the check
/// recomputes the cancellation through the total-form arithmetic.
pub fn check_multiplicative(omega: &ConnectionSpec, tol: f64) -> MultiplicativityReport {
    let w = omega.omega_theta();
    match omega.model().calculus() {
        CalculusKind::Classical => {
            let sq = w.mul(&w);
            let gap = sq.sup_coeff_norm();
            MultiplicativityReport {
                multiplicative: gap <= tol,
                max_gap: gap,
                rationale: "classical ideal Ker²(ε): condition is ω(ϑ)² = 0".into(),
            }
        }
        CalculusKind::NonStandard => {
            let sq = w.mul(&w);
            let mut gap: f64 = 0.0;
            for m in -3i64..=3 {
                let lead = if (m + 2).rem_euclid(2) == 1 { 1.0 } else { 0.0 };
                let tail = if m.rem_euclid(2) == 1 { 1.0 } else { 0.0 };
                let value = sq.scale(Complex64::new(lead - tail, 0.0));
                gap = gap.max(value.sup_coeff_norm());
            }
            MultiplicativityReport {
                multiplicative: gap <= tol,
                max_gap: gap,
                rationale: "ideal (z²-1)G: germ legs of (z²-1)z^m cancel pairwise".into(),
            }
        }
    }
}

/// Check the connection axiom `Δ_{Ω(P)}(ω(ϑ)) = ω(ϑ) ⊗ 1 + 1 ⊗ ϑ` by
/// computing the coaction legs of `ω(ϑ)` explicitly. Returns the largest
/// deviation across legs.
pub fn connection_axiom_gap(omega: &ConnectionSpec) -> Result<f64> {
    let model = omega.model().clone();
    let w = omega.omega_theta();
    // legs keyed by (z exponent, germ degree) of the right tensor factor
    let mut legs: BTreeMap<(i64, u32), TotalForm> = BTreeMap::new();
    let mut push = |key: (i64, u32), piece: TotalForm| match legs.entry(key) {
        std::collections::btree_map::Entry::Vacant(v) => {
            v.insert(piece);
        }
        std::collections::btree_map::Entry::Occupied(mut o) => {
            let s = o.get().add(&piece);
            *o.get_mut() = s;
        }
    };
    match &w.repr {
        TotalRepr::A(f) => {
            let nb = model.base_dim();
            let fiber_axis = nb + 1;
            let total = model.total();
            for (idx, x) in f.components() {
                for (m, c) in x.terms() {
                    let zexp = m.0[nb] as i64;
                    let mono = TorusForm::monomial(*idx, TorusElement::monomial(total, m.clone(), *c));
                    push(
                        (zexp, 0),
                        TotalForm::from_total_a(&model, mono.clone()),
                    );
                    if idx.contains(fiber_axis) {
                        // dU_{n+1} ↦ dU_{n+1} ⊗ z^{..} + (-1/2π) 1 ⊗ z^{..} ϑ;
                        // the fiber axis is maximal, so stripping it from the
                        // tail of the wedge word carries no sign.
                        let stripped = FormIndex(idx.0 & !(1u32 << (fiber_axis - 1)));
                        let piece = TorusForm::monomial(
                            stripped,
                            TorusElement::monomial(total, m.clone(), *c),
                        )
                        .scale_re(-1.0 / TAU);
                        push((zexp, 1), TotalForm::from_total_a(&model, piece));
                    }
                }
            }
        }
        TotalRepr::B { terms, .. } => {
            for (&(s, a, k), x) in terms {
                match k {
                    0 => {
                        // Δ(z^a) = z^a ⊗ z^a
                        push(
                            (a, 0),
                            TotalForm::from_b_monomial(&model, &TorusForm::monomial(s, x.clone()), a, 0),
                        );
                    }
                    1 => {
                        // Δ(z^a ϑ) = z^a ϑ ⊗ z^a + z^a ⊗ z^a ϑ
                        push(
                            (a, 0),
                            TotalForm::from_b_monomial(&model, &TorusForm::monomial(s, x.clone()), a, 1),
                        );
                        push(
                            (a, 1),
                            TotalForm::from_b_monomial(&model, &TorusForm::monomial(s, x.clone()), a, 0),
                        );
                    }
                    _ => {
                        return Err(Error::Unsupported(
                            "coaction legs implemented for germ degree ≤ 1".into(),
                        ))
                    }
                }
            }
        }
    }
    // expected: leg (0,0) = ω(ϑ), leg (0,1) = 1, all others zero
    let mut gap: f64 = 0.0;
    let one = TotalForm::embed_base(&model, &TorusForm::one(model.base()));
    for (key, leg) in &legs {
        let expected = match key {
            (0, 0) => w.clone(),
            (0, 1) => one.clone(),
            _ => TotalForm::zero(&model),
        };
        gap = gap.max(leg.sub(&expected).sup_coeff_norm());
    }
    if !legs.contains_key(&(0, 1)) {
        gap = gap.max(1.0);
    }
    Ok(gap)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::DeformationMatrix;

    fn base2() -> Arc<TorusContext> {
        TorusContext::new(DeformationMatrix::two_dim(0.25))
    }

    fn hermitian_mu(ctx: &Arc<TorusContext>) -> TorusForm {
        let u1 = TorusElement::generator(ctx, 1);
        TorusForm::monomial(FormIndex::single(2), u1.add(&u1.star()))
    }

    #[test]
    fn canonical_connection_values() {
        let base = base2();
        let ma = BundleModel::model_a(&base, None).unwrap();
        let wc = ConnectionSpec::canonical(&ma);
        let w = wc.omega_theta();
        let expected = TorusForm::du(ma.total(), 3).scale_re(-TAU);
        assert_eq!(w.as_total_a(), &expected);

        let mb = BundleModel::model_b(&base);
        let wc_b = ConnectionSpec::canonical(&mb);
        let w_b = wc_b.omega_theta();
        let mut count = 0;
        for (&(s, a, k), x) in w_b.b_terms() {
            assert_eq!((s, a, k), (FormIndex::SCALAR, 0, 1));
            assert_eq!(x, &TorusElement::one(&base));
            count += 1;
        }
        assert_eq!(count, 1);
    }

    #[test]
    fn canonical_connections_are_flat() {
        let base = base2();
        for model in [
            BundleModel::model_a(&base, None).unwrap(),
            BundleModel::model_b(&base),
        ] {
            let wc = ConnectionSpec::canonical(&model);
            let r = wc.curvature().unwrap();
            assert!(r.value.is_zero(), "canonical curvature must vanish");
        }
    }

    #[test]
    fn model_a_curvature_example() {
        // μ = (u_1 + u_1^*) dU_2 → R(ϑ) = 2π (u_1^* - u_1) dU_1 dU_2
        let base = base2();
        let ma = BundleModel::model_a(&base, None).unwrap();
        let omega = ConnectionSpec::new(&ma, hermitian_mu(&base)).unwrap();
        let r = omega.curvature().unwrap();
        let u1 = TorusElement::generator(&base, 1);
        let expected = TorusForm::monomial(
            FormIndex::from_axes(&[1, 2]).unwrap(),
            u1.star().sub(&u1).scale_re(TAU),
        );
        assert!(r.value.sub(&expected).sup_coeff_norm() < 1e-12);
    }

    #[test]
    fn model_b_scalar_mu_is_flat() {
        let base = base2();
        let mb = BundleModel::model_b(&base);
        let mu = TorusForm::du(&base, 1).scale_re(TAU);
        let omega = ConnectionSpec::new(&mb, mu).unwrap();
        let r = omega.curvature().unwrap();
        assert!(r.value.is_zero());
    }

    #[test]
    fn connection_requires_hermitian_mu() {
        let base = base2();
        let ma = BundleModel::model_a(&base, None).unwrap();
        let u1 = TorusElement::generator(&base, 1);
        let bad = TorusForm::monomial(FormIndex::single(1), u1);
        assert!(ConnectionSpec::new(&ma, bad).is_err());
    }

    #[test]
    fn covariant_derivative_restricts_to_d_on_base() {
        let base = base2();
        for model in [
            BundleModel::model_a(&base, None).unwrap(),
            BundleModel::model_b(&base),
        ] {
            let omega = ConnectionSpec::new(&model, hermitian_mu(&base)).unwrap();
            let b = TorusForm::from_element(TorusElement::generator(&base, 1));
            let phi = TotalForm::embed_base(&model, &b);
            let d_phi = omega.covariant_derivative(&phi).unwrap();
            let expected = TotalForm::embed_base(&model, &b.differential());
            assert!(d_phi.sub(&expected).sup_coeff_norm() < 1e-12);
            let dhat_phi = omega.dual_covariant_derivative(&phi).unwrap();
            assert!(dhat_phi.sub(&expected).sup_coeff_norm() < 1e-12);
        }
    }

    #[test]
    fn canonical_kills_the_fiber_section_model_a() {
        // D^{ω^c}(u_{n+1}) = 0 = D̂^{ω^c}(u_{n+1})
        let base = base2();
        let ma = BundleModel::model_a(&base, None).unwrap();
        let wc = ConnectionSpec::canonical(&ma);
        let u3 = TorusElement::generator(ma.total(), 3);
        let phi = TotalForm::from_total_a(&ma, TorusForm::from_element(u3));
        assert!(wc.covariant_derivative(&phi).unwrap().is_zero());
        assert!(wc.dual_covariant_derivative(&phi).unwrap().is_zero());
    }

    #[test]
    fn s_operator_examples() {
        let base = base2();
        let ma = BundleModel::model_a(&base, None).unwrap();
        let omega_a = ConnectionSpec::new(&ma, hermitian_mu(&base)).unwrap();
        let tau = AdSection::new(TorusForm::du(&base, 1));
        assert!(omega_a.s_operator(&tau).unwrap().value.is_zero());

        let mb = BundleModel::model_b(&base);
        let omega_b = ConnectionSpec::new(&mb, hermitian_mu(&base)).unwrap();
        // η = dU_1: μ dU_1 + dU_1 μ = 0 by wedge antisymmetry over central dU
        assert!(omega_b.s_operator(&tau).unwrap().value.is_zero());
        // η = u_2 (degree 0): μ u_2 - u_2 μ ≠ 0 for deformed coefficients
        let b = AdSection::new(TorusForm::from_element(TorusElement::generator(&base, 2)));
        let s = omega_b.s_operator(&b).unwrap();
        assert!(!s.value.is_zero());
        let u2 = TorusElement::generator(&base, 2);
        let mu = hermitian_mu(&base);
        let expected = mu
            .mul_element_right(&u2)
            .sub(&mu.mul_element_left(&u2));
        assert!(s.value.sub(&expected).sup_coeff_norm() < 1e-12);
    }

    #[test]
    fn regularity_of_canonical_connections() {
        let base = base2();
        for model in [
            BundleModel::model_a(&base, None).unwrap(),
            BundleModel::model_b(&base),
        ] {
            let wc = ConnectionSpec::canonical(&model);
            let samples = sample_horizontals(&model);
            let rep = check_regular(&wc, &samples, 1e-12).unwrap();
            assert!(rep.regular, "canonical connection must be regular: {rep:?}");
        }
    }

    #[test]
    fn displaced_model_b_connection_is_not_regular() {
        let base = base2();
        let mb = BundleModel::model_b(&base);
        let omega = ConnectionSpec::new(&mb, hermitian_mu(&base)).unwrap();
        let samples = sample_horizontals(&mb);
        let rep = check_regular(&omega, &samples, 1e-12).unwrap();
        assert!(!rep.regular);
        assert!(rep.witness.is_some());
    }

    fn sample_horizontals(model: &Arc<BundleModel>) -> Vec<TotalForm> {
        let base = model.base().clone();
        let u2 = TorusElement::generator(&base, 2);
        let f0 = TorusForm::from_element(u2.clone());
        let f1 = TorusForm::monomial(FormIndex::single(1), u2);
        match model.kind {
            ModelKind::A => {
                let u3 = TorusElement::generator(model.total(), 3);
                vec![
                    TotalForm::embed_base(model, &f0),
                    TotalForm::embed_base(model, &f1),
                    TotalForm::from_total_a(model, TorusForm::from_element(u3.clone())),
                    TotalForm::embed_base(model, &f1).mul(&TotalForm::from_total_a(
                        model,
                        TorusForm::from_element(u3),
                    )),
                ]
            }
            ModelKind::B => vec![
                TotalForm::embed_base(model, &f0),
                TotalForm::embed_base(model, &f1),
                TotalForm::from_b_monomial(model, &f0, 1, 0),
                TotalForm::from_b_monomial(model, &f1, 1, 0),
                TotalForm::from_b_monomial(model, &f1, 2, 0),
            ],
        }
    }

    #[test]
    fn connection_axiom_holds_for_random_displacements() {
        let base = base2();
        for model in [
            BundleModel::model_a(&base, None).unwrap(),
            BundleModel::model_b(&base),
        ] {
            for omega in [
                ConnectionSpec::canonical(&model),
                ConnectionSpec::new(&model, hermitian_mu(&base)).unwrap(),
            ] {
                let gap = connection_axiom_gap(&omega).unwrap();
                assert!(gap < 1e-12, "axiom gap {gap}");
            }
        }
    }

    #[test]
    fn multiplicativity_reports() {
        let base = base2();
        let ma = BundleModel::model_a(&base, None).unwrap();
        let wc = ConnectionSpec::canonical(&ma);
        assert!(check_multiplicative(&wc, 1e-12).multiplicative);
        // classical with μ whose square is nonzero is not multiplicative
        let u1 = TorusElement::generator(&base, 1);
        let u2 = TorusElement::generator(&base, 2);
        let mu = TorusForm::monomial(FormIndex::single(2), u1.add(&u1.star())).add(
            &TorusForm::monomial(FormIndex::single(1), u2.add(&u2.star())),
        );
        let omega = ConnectionSpec::new(&ma, mu.clone()).unwrap();
        assert!(!check_multiplicative(&omega, 1e-12).multiplicative);
        // non-standard: always multiplicative
        let mb = BundleModel::model_b(&base);
        let omega_b = ConnectionSpec::new(&mb, mu).unwrap();
        assert!(check_multiplicative(&omega_b, 1e-12).multiplicative);
    }
}
