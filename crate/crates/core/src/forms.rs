//! The graded differential *-algebra of forms on the deformed torus,
//! `T^n_Ξ ⊗ Λ C^n`, with anti-Hermitian differential, Euclidean Hodge star
//! on the exterior factor, trace integration and the induced inner product.
//!
//! Conventions fixed here and used everywhere downstream:
//!   - `dU_j` commute with algebra coefficients and satisfy `dU_j^* = dU_j`;
//!   - the involution is the graded one, `(ab)^* = (-1)^{∂a ∂b} b^* a^*`,
//!     which on components reads `(x ⊗ e_S)^* = x^* ⊗ e_S`;
//!   - `d(x ⊗ e_S) = Σ_j i δ_j(x) e_j ∧ e_S`, so `d(a^*) = -(da)^*`;
//!   - `⟨a|b⟩ = ∫ a^* ∧ ⋆b`, antilinear in the first slot, positive definite;
//!   - the codifferential on degree k+1 is `(-1)^k ⋆^{-1} d ⋆`, the formal
//!     adjoint of `d` for this inner product.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_complex::Complex64;

use crate::algebra::{contexts_match, TorusContext, TorusElement};
use crate::error::{Error, Result};

/// Index of a wedge basis monomial `dU_{j_1}···dU_{j_k}` with strictly
/// increasing axes, stored as a bitmask (bit j-1 set ⟺ axis j present).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FormIndex(pub u32);

impl FormIndex {
    pub const SCALAR: FormIndex = FormIndex(0);

    pub fn from_axes(axes: &[usize]) -> Result<Self> {
        let mut mask = 0u32;
        let mut prev = 0usize;
        for &a in axes {
            if a == 0 || a <= prev {
                return Err(Error::Unsupported(format!(
                    "axes must be strictly increasing and 1-based, got {axes:?}"
                )));
            }
            prev = a;
            mask |= 1 << (a - 1);
        }
        Ok(FormIndex(mask))
    }

    pub fn single(axis: usize) -> Self {
        FormIndex(1 << (axis - 1))
    }

    pub fn full(n: usize) -> Self {
        FormIndex(((1u64 << n) - 1) as u32)
    }

    pub fn degree(&self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn contains(&self, axis: usize) -> bool {
        self.0 & (1 << (axis - 1)) != 0
    }

    pub fn axes(&self) -> Vec<usize> {
        (1..=32).filter(|&a| self.contains(a)).collect()
    }

    /// Complement within `{1..n}`.
    pub fn complement(&self, n: usize) -> Self {
        FormIndex(!self.0 & FormIndex::full(n).0)
    }

    fn disjoint(&self, other: &FormIndex) -> bool {
        self.0 & other.0 == 0
    }

    /// Shuffle sign of `e_S ∧ e_T = sign · e_{S∪T}` for disjoint S, T:
    /// parity of the number of pairs (s,t) ∈ S×T with s > t.
    fn shuffle_sign(&self, other: &FormIndex) -> f64 {
        let mut inversions = 0u32;
        for s in self.axes() {
            // count members of `other` strictly below s
            let below = other.0 & ((1u32 << (s - 1)) - 1);
            inversions += below.count_ones();
        }
        if inversions % 2 == 0 {
            1.0
        } else {
            -1.0
        }
    }

    /// Sign of the permutation (S, S^c) relative to (1..n):
    /// `⋆ e_S = hodge_sign(S) e_{S^c}`.
    fn hodge_sign(&self, n: usize) -> f64 {
        self.shuffle_sign(&self.complement(n))
    }
}

/// Graded form with components indexed by wedge monomials; every component
/// element shares the same torus context and components of degree > n are
/// never stored.
#[derive(Debug, Clone)]
pub struct TorusForm {
    ctx: Arc<TorusContext>,
    components: BTreeMap<FormIndex, TorusElement>,
}

impl TorusForm {
    pub fn zero(ctx: &Arc<TorusContext>) -> Self {
        Self {
            ctx: ctx.clone(),
            components: BTreeMap::new(),
        }
    }

    pub fn from_element(x: TorusElement) -> Self {
        let ctx = x.context().clone();
        let mut f = Self::zero(&ctx);
        f.add_component(FormIndex::SCALAR, x);
        f
    }

    pub fn one(ctx: &Arc<TorusContext>) -> Self {
        Self::from_element(TorusElement::one(ctx))
    }

    /// The basis 1-form `dU_axis`.
    pub fn du(ctx: &Arc<TorusContext>, axis: usize) -> Self {
        assert!(axis >= 1 && axis <= ctx.n);
        let mut f = Self::zero(ctx);
        f.add_component(FormIndex::single(axis), TorusElement::one(ctx));
        f
    }

    /// The volume form `dU_1 ··· dU_n`.
    pub fn dvol(ctx: &Arc<TorusContext>) -> Self {
        let mut f = Self::zero(ctx);
        f.add_component(FormIndex::full(ctx.n), TorusElement::one(ctx));
        f
    }

    pub fn monomial(idx: FormIndex, x: TorusElement) -> Self {
        let ctx = x.context().clone();
        let mut f = Self::zero(&ctx);
        f.add_component(idx, x);
        f
    }

    pub fn context(&self) -> &Arc<TorusContext> {
        &self.ctx
    }

    pub fn dim(&self) -> usize {
        self.ctx.n
    }

    pub fn components(&self) -> impl Iterator<Item = (&FormIndex, &TorusElement)> {
        self.components.iter()
    }

    pub fn component(&self, idx: FormIndex) -> TorusElement {
        self.components
            .get(&idx)
            .cloned()
            .unwrap_or_else(|| TorusElement::zero(&self.ctx))
    }

    pub fn is_zero(&self) -> bool {
        self.components.is_empty()
    }

    /// Degrees present in the form, ascending.
    pub fn degrees(&self) -> Vec<usize> {
        let mut d: Vec<usize> = self.components.keys().map(|i| i.degree()).collect();
        d.sort_unstable();
        d.dedup();
        d
    }

    /// The unique degree, or an error when components of several degrees
    /// (or none) are present.
    pub fn pure_degree(&self) -> Result<usize> {
        let d = self.degrees();
        match d.as_slice() {
            [k] => Ok(*k),
            [] => Ok(0),
            _ => Err(Error::MixedDegree),
        }
    }

    pub fn degree_part(&self, k: usize) -> Self {
        let mut f = Self::zero(&self.ctx);
        for (idx, x) in &self.components {
            if idx.degree() == k {
                f.add_component(*idx, x.clone());
            }
        }
        f
    }

    fn add_component(&mut self, idx: FormIndex, x: TorusElement) {
        assert!(idx.degree() <= self.ctx.n, "degree exceeds dimension");
        if x.is_zero() {
            return;
        }
        match self.components.entry(idx) {
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

    pub fn add(&self, other: &Self) -> Self {
        contexts_match(&self.ctx, &other.ctx).expect("incompatible contexts in form add");
        let mut out = self.clone();
        for (idx, x) in &other.components {
            out.add_component(*idx, x.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    pub fn scale(&self, c: Complex64) -> Self {
        let mut out = Self::zero(&self.ctx);
        for (idx, x) in &self.components {
            out.add_component(*idx, x.scale(c));
        }
        out
    }

    pub fn scale_re(&self, t: f64) -> Self {
        self.scale(Complex64::new(t, 0.0))
    }

    /// Left multiplication by an algebra element.
    pub fn mul_element_left(&self, x: &TorusElement) -> Self {
        let mut out = Self::zero(&self.ctx);
        for (idx, y) in &self.components {
            out.add_component(*idx, x.mul(y));
        }
        out
    }

    pub fn mul_element_right(&self, x: &TorusElement) -> Self {
        let mut out = Self::zero(&self.ctx);
        for (idx, y) in &self.components {
            out.add_component(*idx, y.mul(x));
        }
        out
    }

    /// Wedge product: `(x ⊗ e_S)(y ⊗ e_T) = sign(S,T) · xy ⊗ e_{S∪T}`,
    /// zero when S and T intersect. The `dU_j` are central over coefficients.
    pub fn wedge(&self, other: &Self) -> Self {
        contexts_match(&self.ctx, &other.ctx).expect("incompatible contexts in wedge");
        let mut out = Self::zero(&self.ctx);
        for (s, x) in &self.components {
            for (t, y) in &other.components {
                if !s.disjoint(t) {
                    continue;
                }
                let sign = s.shuffle_sign(t);
                out.add_component(
                    FormIndex(s.0 | t.0),
                    x.mul(y).scale(Complex64::new(sign, 0.0)),
                );
            }
        }
        out
    }

    pub fn try_wedge(&self, other: &Self) -> Result<Self> {
        contexts_match(&self.ctx, &other.ctx)?;
        Ok(self.wedge(other))
    }

    /// The differential `d(x ⊗ e_S) = Σ_j i δ_j(x) e_j ∧ e_S`.
    pub fn differential(&self) -> Self {
        let mut out = Self::zero(&self.ctx);
        for (s, x) in &self.components {
            for axis in 1..=self.ctx.n {
                if s.contains(axis) {
                    continue;
                }
                let dx = x
                    .derivation(axis)
                    .expect("axis in range")
                    .scale(Complex64::new(0.0, 1.0));
                if dx.is_zero() {
                    continue;
                }
                let ej = FormIndex::single(axis);
                let sign = ej.shuffle_sign(s);
                out.add_component(
                    FormIndex(ej.0 | s.0),
                    dx.scale(Complex64::new(sign, 0.0)),
                );
            }
        }
        out
    }

    /// Componentwise Euclidean Hodge star on the exterior factor,
    /// `⋆ e_S = sign(S, S^c) e_{S^c}`; `⋆1 = dvol`, `⋆dvol = 1`.
    pub fn hodge(&self) -> Self {
        let n = self.ctx.n;
        let mut out = Self::zero(&self.ctx);
        for (s, x) in &self.components {
            let sign = s.hodge_sign(n);
            out.add_component(s.complement(n), x.scale(Complex64::new(sign, 0.0)));
        }
        out
    }

    /// Inverse Hodge star; on degree k it is `(-1)^{k(n-k)} ⋆`.
    pub fn hodge_inv(&self) -> Self {
        let n = self.ctx.n;
        let mut out = Self::zero(&self.ctx);
        for (s, x) in &self.components {
            let k = s.degree();
            let sign = s.hodge_sign(n) * if (k * (n - k)) % 2 == 0 { 1.0 } else { -1.0 };
            out.add_component(s.complement(n), x.scale(Complex64::new(sign, 0.0)));
        }
        out
    }

    /// Trace integration: `τ_0` of the top-degree coefficient, zero when no
    /// degree-n component is present.
    pub fn integrate(&self) -> Complex64 {
        self.component(FormIndex::full(self.ctx.n)).trace()
    }

    /// Graded involution: `(x ⊗ e_S)^* = x^* ⊗ e_S`. Satisfies
    /// `(ab)^* = (-1)^{∂a ∂b} b^* a^*` and `dU_j^* = dU_j`.
    pub fn star(&self) -> Self {
        let mut out = Self::zero(&self.ctx);
        for (s, x) in &self.components {
            out.add_component(*s, x.star());
        }
        out
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.sub(&self.star()).sup_coeff_norm() <= tol
    }

    /// `⟨a|b⟩ = ∫ a^* ∧ ⋆b`, summed over matching degrees; forms of
    /// different degree are orthogonal; antilinear in the first slot.
    pub fn inner(&self, other: &Self) -> Complex64 {
        contexts_match(&self.ctx, &other.ctx).expect("incompatible contexts in inner");
        let mut acc = Complex64::new(0.0, 0.0);
        for k in 0..=self.ctx.n {
            let a = self.degree_part(k);
            let b = other.degree_part(k);
            if a.is_zero() || b.is_zero() {
                continue;
            }
            acc += a.star().wedge(&b.hodge()).integrate();
        }
        acc
    }

    pub fn try_inner(&self, other: &Self) -> Result<Complex64> {
        contexts_match(&self.ctx, &other.ctx)?;
        Ok(self.inner(other))
    }

    /// `√⟨a|a⟩`.
    pub fn norm(&self) -> f64 {
        self.inner(self).re.max(0.0).sqrt()
    }

    /// Formal adjoint of the differential: on degree k+1 it acts as
    /// `(-1)^k ⋆^{-1} d ⋆`; degree-0 components are annihilated.
    pub fn codifferential(&self) -> Self {
        let mut out = Self::zero(&self.ctx);
        for (s, x) in &self.components {
            let deg = s.degree();
            if deg == 0 {
                continue;
            }
            let piece = Self::monomial(*s, x.clone());
            let sign = if (deg - 1) % 2 == 0 { 1.0 } else { -1.0 };
            out = out.add(
                &piece
                    .hodge()
                    .differential()
                    .hodge_inv()
                    .scale(Complex64::new(sign, 0.0)),
            );
        }
        out
    }

    /// Largest coefficient magnitude across components.
    pub fn sup_coeff_norm(&self) -> f64 {
        self.components
            .values()
            .map(|x| x.sup_coeff_norm())
            .fold(0.0, f64::max)
    }

    pub fn map_coefficients<F>(&self, f: F) -> Self
    where
        F: Fn(&TorusElement) -> TorusElement,
    {
        let mut out = Self::zero(&self.ctx);
        for (idx, x) in &self.components {
            out.add_component(*idx, f(x));
        }
        out
    }
}

impl PartialEq for TorusForm {
    fn eq(&self, other: &Self) -> bool {
        contexts_match(&self.ctx, &other.ctx).is_ok() && self.components == other.components
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{DeformationMatrix, TAU};

    fn ctx2() -> Arc<TorusContext> {
        TorusContext::new(DeformationMatrix::two_dim(0.25))
    }

    #[test]
    fn wedge_antisymmetry_on_basis() {
        let ctx = ctx2();
        let d1 = TorusForm::du(&ctx, 1);
        let d2 = TorusForm::du(&ctx, 2);
        let a = d1.wedge(&d2);
        let b = d2.wedge(&d1);
        assert_eq!(a, b.scale(Complex64::new(-1.0, 0.0)));
        let c = a.component(FormIndex::from_axes(&[1, 2]).unwrap());
        assert_eq!(c, TorusElement::one(&ctx));
    }

    #[test]
    fn wedge_of_coefficient_forms() {
        // (u_1 dU_1) ∧ (u_2 dU_2) = (u_1 u_2) dU_1 dU_2
        let ctx = ctx2();
        let u1 = TorusElement::generator(&ctx, 1);
        let u2 = TorusElement::generator(&ctx, 2);
        let a = TorusForm::monomial(FormIndex::single(1), u1.clone());
        let b = TorusForm::monomial(FormIndex::single(2), u2.clone());
        let w = a.wedge(&b);
        assert_eq!(w.component(FormIndex::full(2)), u1.mul(&u2));
    }

    #[test]
    fn real_scalar_one_form_squares_to_zero() {
        let ctx = ctx2();
        let mu = TorusForm::du(&ctx, 1)
            .scale_re(0.7)
            .add(&TorusForm::du(&ctx, 2).scale_re(-1.3));
        assert!(mu.wedge(&mu).is_zero());
    }

    #[test]
    fn differential_of_generator() {
        // d(u_1) = i δ_1(u_1) dU_1 = -2π u_1 dU_1
        let ctx = ctx2();
        let u1 = TorusElement::generator(&ctx, 1);
        let d = TorusForm::from_element(u1.clone()).differential();
        let expected = TorusForm::monomial(FormIndex::single(1), u1.clone()).scale_re(-TAU);
        assert_eq!(d, expected);
        // and -(1/2π) u_1^* d(u_1) = dU_1
        let lhs = d.mul_element_left(&u1.star()).scale_re(-1.0 / TAU);
        assert_eq!(lhs, TorusForm::du(&ctx, 1));
    }

    #[test]
    fn d_of_basis_one_form_vanishes() {
        let ctx = ctx2();
        assert!(TorusForm::du(&ctx, 1).differential().is_zero());
    }

    #[test]
    fn hodge_on_basis_two_dim() {
        let ctx = ctx2();
        assert_eq!(TorusForm::one(&ctx).hodge(), TorusForm::dvol(&ctx));
        assert_eq!(TorusForm::dvol(&ctx).hodge(), TorusForm::one(&ctx));
        assert_eq!(TorusForm::du(&ctx, 1).hodge(), TorusForm::du(&ctx, 2));
        assert_eq!(
            TorusForm::du(&ctx, 2).hodge(),
            TorusForm::du(&ctx, 1).scale_re(-1.0)
        );
    }

    #[test]
    fn integrate_examples() {
        let ctx = ctx2();
        assert_eq!(TorusForm::dvol(&ctx).integrate(), Complex64::new(1.0, 0.0));
        let u1dvol = TorusForm::dvol(&ctx).mul_element_left(&TorusElement::generator(&ctx, 1));
        assert_eq!(u1dvol.integrate(), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn inner_product_on_basis() {
        let ctx = ctx2();
        let d1 = TorusForm::du(&ctx, 1);
        let d2 = TorusForm::du(&ctx, 2);
        assert!((d1.inner(&d1) - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        assert!(d1.inner(&d2).norm() < 1e-15);
    }

    #[test]
    fn star_fixes_dvol_and_coefficient_one_forms() {
        let ctx = ctx2();
        let u1 = TorusElement::generator(&ctx, 1);
        let a = TorusForm::monomial(FormIndex::single(1), u1.clone());
        assert_eq!(a.star(), TorusForm::monomial(FormIndex::single(1), u1.star()));
        // graded involution: the volume form is self-adjoint in every
        // dimension (coefficient reversal sign cancels the prefactor)
        assert_eq!(TorusForm::dvol(&ctx).star(), TorusForm::dvol(&ctx));
    }

    #[test]
    fn codifferential_of_basis_one_form_vanishes() {
        let ctx = ctx2();
        assert!(TorusForm::du(&ctx, 1).codifferential().is_zero());
    }

    #[test]
    fn codifferential_of_exact_form() {
        // Frozen from the adjointness oracle (see tests/calculus.rs):
        // d*(d(u_1 dU_2)) = +4π² u_1 dU_2.
        let ctx = ctx2();
        let u1 = TorusElement::generator(&ctx, 1);
        let mu = TorusForm::monomial(FormIndex::single(2), u1.clone());
        let r = mu.differential().codifferential();
        let expected = mu.scale_re(TAU * TAU);
        assert!(r.sub(&expected).sup_coeff_norm() < 1e-12);
    }
}
