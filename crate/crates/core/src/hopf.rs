//! The Hopf *-algebra of Laurent polynomials for U(1), its two 1-dimensional
//! bicovariant first-order calculi (classical and non-standard), the quantum
//! germs map and the truncated universal envelope of the non-standard
//! calculus.
//!
//! Envelope conventions (non-standard calculus):
//!   - `ϑ z^a = (-1)^a z^a ϑ`, `ϑ^* = ϑ`, `dϑ = -ϑϑ`;
//!   - `d(z^a) = z^a ϑ` for odd a, `0` for even a;
//!   - the involution is graded, `(xy)^* = (-1)^{∂x ∂y} y^* x^*`, and the
//!     differential is anti-Hermitian: `d(t^*) = -(dt)^*`.
//! The classical calculus is realized degenerately in the same container
//! with `ϑ z = z ϑ` and `ϑϑ = 0`.

use std::collections::BTreeMap;

use num_complex::Complex64;

/// Which of the two bicovariant calculi of U(1) is in force.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CalculusKind {
    Classical,
    NonStandard,
}

/// Finitely supported Laurent polynomial `Σ c_a z^a`.
#[derive(Debug, Clone, PartialEq)]
pub struct LaurentElement {
    terms: BTreeMap<i64, Complex64>,
}

const LAURENT_ZERO_THRESHOLD: f64 = 1e-14;

impl LaurentElement {
    pub fn zero() -> Self {
        Self {
            terms: BTreeMap::new(),
        }
    }

    pub fn one() -> Self {
        Self::monomial(0, Complex64::new(1.0, 0.0))
    }

    pub fn z(power: i64) -> Self {
        Self::monomial(power, Complex64::new(1.0, 0.0))
    }

    pub fn monomial(power: i64, c: Complex64) -> Self {
        let mut terms = BTreeMap::new();
        if c.norm() > LAURENT_ZERO_THRESHOLD {
            terms.insert(power, c);
        }
        Self { terms }
    }

    pub fn from_terms<I: IntoIterator<Item = (i64, Complex64)>>(iter: I) -> Self {
        let mut e = Self::zero();
        for (p, c) in iter {
            e.add_term(p, c);
        }
        e
    }

    fn add_term(&mut self, p: i64, c: Complex64) {
        let entry = self.terms.entry(p).or_insert(Complex64::new(0.0, 0.0));
        *entry += c;
        if entry.norm() <= LAURENT_ZERO_THRESHOLD {
            self.terms.remove(&p);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&i64, &Complex64)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, p: i64) -> Complex64 {
        self.terms.get(&p).copied().unwrap_or(Complex64::new(0.0, 0.0))
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (&p, &c) in &other.terms {
            out.add_term(p, c);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self::from_terms(self.terms.iter().map(|(&p, &a)| (p, a * c)))
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (&p, &a) in &self.terms {
            for (&q, &b) in &other.terms {
                out.add_term(p + q, a * b);
            }
        }
        out
    }

    /// Coproduct `Δ(z^a) = z^a ⊗ z^a`, extended linearly; the group-like
    /// structure makes both legs monomials, so the tensor is returned as a
    /// list of `(a, coefficient)` diagonal terms.
    pub fn coproduct(&self) -> Vec<(i64, Complex64)> {
        self.terms.iter().map(|(&p, &c)| (p, c)).collect()
    }

    /// Counit `ε(z^a) = 1`.
    pub fn counit(&self) -> Complex64 {
        self.terms.values().sum()
    }

    /// Antipode `S(z^a) = z^{-a}`.
    pub fn antipode(&self) -> Self {
        Self::from_terms(self.terms.iter().map(|(&p, &c)| (-p, c)))
    }

    /// Involution `(c z^a)^* = conj(c) z^{-a}`.
    pub fn star(&self) -> Self {
        Self::from_terms(self.terms.iter().map(|(&p, &c)| (-p, c.conj())))
    }

    pub fn sup_coeff_norm(&self) -> f64 {
        self.terms.values().map(|c| c.norm()).fold(0.0, f64::max)
    }
}

/// Element of the 1-dimensional quantum dual Lie algebra: a multiple of the
/// germ `ϑ = π(z)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GermsVector(pub Complex64);

impl GermsVector {
    pub fn zero() -> Self {
        GermsVector(Complex64::new(0.0, 0.0))
    }

    pub fn theta() -> Self {
        GermsVector(Complex64::new(1.0, 0.0))
    }
}

/// Quantum germs map for either calculus, linear on Laurent elements:
/// classical `π(z^a) = a ϑ`; non-standard `π(z^a) = ϑ` for odd a, `0` even.
pub fn germs_map(kind: CalculusKind, g: &LaurentElement) -> GermsVector {
    let mut acc = Complex64::new(0.0, 0.0);
    for (&p, &c) in g.terms() {
        match kind {
            CalculusKind::Classical => acc += c * p as f64,
            CalculusKind::NonStandard => {
                if p.rem_euclid(2) == 1 {
                    acc += c;
                }
            }
        }
    }
    GermsVector(acc)
}

/// The embedded differential `Θ(ϑ)` as the coefficient of `ϑ ⊗ ϑ`:
/// classical `0`, non-standard `-1` (the unique choice reproducing `dϑ`).
pub fn embedded_differential(kind: CalculusKind) -> Complex64 {
    match kind {
        CalculusKind::Classical => Complex64::new(0.0, 0.0),
        CalculusKind::NonStandard => Complex64::new(-1.0, 0.0),
    }
}

/// Truncated element of the universal envelope: a combination of `z^a ϑ^k`
/// with `k ≤ max_degree`. Products whose germ degree would exceed the bound
/// are dropped and the `truncated` flag set (sticky).
#[derive(Debug, Clone)]
pub struct EnvelopeElement {
    kind: CalculusKind,
    max_degree: u32,
    terms: BTreeMap<(i64, u32), Complex64>,
    pub truncated: bool,
}

pub const DEFAULT_ENVELOPE_DEGREE: u32 = 3;

impl EnvelopeElement {
    pub fn zero(kind: CalculusKind) -> Self {
        Self::zero_with_degree(kind, DEFAULT_ENVELOPE_DEGREE)
    }

    pub fn zero_with_degree(kind: CalculusKind, max_degree: u32) -> Self {
        Self {
            kind,
            max_degree,
            terms: BTreeMap::new(),
            truncated: false,
        }
    }

    pub fn one(kind: CalculusKind) -> Self {
        Self::monomial(kind, 0, 0, Complex64::new(1.0, 0.0))
    }

    pub fn z_power(kind: CalculusKind, a: i64) -> Self {
        Self::monomial(kind, a, 0, Complex64::new(1.0, 0.0))
    }

    pub fn theta(kind: CalculusKind) -> Self {
        Self::monomial(kind, 0, 1, Complex64::new(1.0, 0.0))
    }

    pub fn monomial(kind: CalculusKind, a: i64, k: u32, c: Complex64) -> Self {
        let mut e = Self::zero(kind);
        e.add_term(a, k, c);
        e
    }

    pub fn kind(&self) -> CalculusKind {
        self.kind
    }

    pub fn max_degree(&self) -> u32 {
        self.max_degree
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(i64, u32), &Complex64)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, a: i64, k: u32) -> Complex64 {
        self.terms
            .get(&(a, k))
            .copied()
            .unwrap_or(Complex64::new(0.0, 0.0))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_term(&mut self, a: i64, k: u32, c: Complex64) {
        if self.kind == CalculusKind::Classical && k >= 2 {
            // exterior algebra of a 1-dimensional space: ϑϑ = 0 exactly
            return;
        }
        if k > self.max_degree {
            self.truncated = true;
            return;
        }
        let entry = self
            .terms
            .entry((a, k))
            .or_insert(Complex64::new(0.0, 0.0));
        *entry += c;
        if entry.norm() <= LAURENT_ZERO_THRESHOLD {
            self.terms.remove(&(a, k));
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.kind, other.kind);
        let mut out = self.clone();
        out.truncated |= other.truncated;
        for (&(a, k), &c) in &other.terms {
            out.add_term(a, k, c);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    pub fn scale(&self, c: Complex64) -> Self {
        let mut out = Self::zero_with_degree(self.kind, self.max_degree);
        out.truncated = self.truncated;
        for (&(a, k), &b) in &self.terms {
            out.add_term(a, k, b * c);
        }
        out
    }

    /// Monomial rule `(z^a ϑ^j)(z^b ϑ^k) = s z^{a+b} ϑ^{j+k}` with
    /// `s = (-1)^{jb}` in the non-standard calculus and `s = 1` classically.
    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.kind, other.kind);
        let max_degree = self.max_degree.min(other.max_degree);
        let mut out = Self::zero_with_degree(self.kind, max_degree);
        out.truncated = self.truncated || other.truncated;
        for (&(a, j), &x) in &self.terms {
            for (&(b, k), &y) in &other.terms {
                let sign = match self.kind {
                    CalculusKind::NonStandard => {
                        if (j as i64 * b).rem_euclid(2) == 1 {
                            -1.0
                        } else {
                            1.0
                        }
                    }
                    CalculusKind::Classical => 1.0,
                };
                out.add_term(a + b, j + k, x * y * sign);
            }
        }
        out
    }

    /// Differential. Non-standard: `d(z^a ϑ^k) = ([a odd] - [k odd]) z^a ϑ^{k+1}`
    /// (from `d(z^a) = [a odd] z^a ϑ`, `dϑ = -ϑϑ` and the graded Leibniz
    /// rule). Classical: `d(z^a) = a z^a ϑ`, `dϑ = 0`.
    pub fn differential(&self) -> Self {
        let mut out = Self::zero_with_degree(self.kind, self.max_degree);
        out.truncated = self.truncated;
        for (&(a, k), &c) in &self.terms {
            match self.kind {
                CalculusKind::NonStandard => {
                    let fa = if a.rem_euclid(2) == 1 { 1.0 } else { 0.0 };
                    let fk = if k % 2 == 1 { 1.0 } else { 0.0 };
                    let f = fa - fk;
                    if f != 0.0 {
                        out.add_term(a, k + 1, c * f);
                    }
                }
                CalculusKind::Classical => {
                    if k == 0 && a != 0 {
                        out.add_term(a, 1, c * a as f64);
                    }
                }
            }
        }
        out
    }

    /// Graded involution: `(z^a)^* = z^{-a}`, `ϑ^* = ϑ`,
    /// `(xy)^* = (-1)^{∂x ∂y} y^* x^*`; on monomials
    /// `(z^a ϑ^k)^* = (-1)^{k(k-1)/2} (-1)^{ka} z^{-a} ϑ^k` (non-standard;
    /// no `(-1)^{ka}` classically).
    pub fn star(&self) -> Self {
        let mut out = Self::zero_with_degree(self.kind, self.max_degree);
        out.truncated = self.truncated;
        for (&(a, k), &c) in &self.terms {
            let mut sign = if (k * (k.wrapping_sub(1)) / 2) % 2 == 1 {
                -1.0
            } else {
                1.0
            };
            if self.kind == CalculusKind::NonStandard && (k as i64 * a).rem_euclid(2) == 1 {
                sign = -sign;
            }
            out.add_term(-a, k, c.conj() * sign);
        }
        out
    }

    pub fn sup_coeff_norm(&self) -> f64 {
        self.terms.values().map(|c| c.norm()).fold(0.0, f64::max)
    }
}

impl PartialEq for EnvelopeElement {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind && self.terms == other.terms
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coproduct_is_group_like() {
        let g = LaurentElement::z(3);
        assert_eq!(g.coproduct(), vec![(3, Complex64::new(1.0, 0.0))]);
    }

    #[test]
    fn counit_sums_coefficients() {
        let g = LaurentElement::z(3).add(&LaurentElement::monomial(-1, Complex64::new(2.0, 0.0)));
        assert_eq!(g.counit(), Complex64::new(3.0, 0.0));
    }

    #[test]
    fn antipode_is_involutive() {
        let g = LaurentElement::from_terms([
            (2, Complex64::new(1.0, -0.5)),
            (-3, Complex64::new(0.25, 0.0)),
        ]);
        assert_eq!(g.antipode().antipode(), g);
    }

    #[test]
    fn germs_map_values() {
        assert_eq!(
            germs_map(CalculusKind::NonStandard, &LaurentElement::z(3)),
            GermsVector::theta()
        );
        assert_eq!(
            germs_map(CalculusKind::NonStandard, &LaurentElement::z(2)),
            GermsVector::zero()
        );
        for m in -4i64..=4 {
            let g = germs_map(CalculusKind::Classical, &LaurentElement::z(m));
            assert_eq!(g.0, Complex64::new(m as f64, 0.0));
        }
        for kind in [CalculusKind::Classical, CalculusKind::NonStandard] {
            assert_eq!(germs_map(kind, &LaurentElement::one()), GermsVector::zero());
        }
    }

    #[test]
    fn envelope_commutation_rule() {
        let kind = CalculusKind::NonStandard;
        let theta = EnvelopeElement::theta(kind);
        let z = EnvelopeElement::z_power(kind, 1);
        let z2 = EnvelopeElement::z_power(kind, 2);
        // ϑ z = -z ϑ, ϑ z² = z² ϑ
        assert_eq!(theta.mul(&z), z.mul(&theta).scale(Complex64::new(-1.0, 0.0)));
        assert_eq!(theta.mul(&z2), z2.mul(&theta));
        // z^a z^b = z^{a+b} at germ degree 0
        let p = EnvelopeElement::z_power(kind, 2).mul(&EnvelopeElement::z_power(kind, -5));
        assert_eq!(p, EnvelopeElement::z_power(kind, -3));
    }

    #[test]
    fn envelope_differential_rules() {
        let kind = CalculusKind::NonStandard;
        let z = EnvelopeElement::z_power(kind, 1);
        let theta = EnvelopeElement::theta(kind);
        assert_eq!(z.differential(), z.mul(&theta));
        assert_eq!(
            theta.differential(),
            theta.mul(&theta).scale(Complex64::new(-1.0, 0.0))
        );
        // d(z z^{-1}) = 0 expanded by Leibniz: zϑz^{-1} + zz^{-1}ϑ = -ϑ + ϑ
        let zi = EnvelopeElement::z_power(kind, -1);
        let leibniz = z.differential().mul(&zi).add(&z.mul(&zi.differential()));
        assert!(leibniz.is_zero());
    }

    #[test]
    fn envelope_star_rules() {
        let kind = CalculusKind::NonStandard;
        let z = EnvelopeElement::z_power(kind, 1);
        let theta = EnvelopeElement::theta(kind);
        assert_eq!(theta.star(), theta);
        // (zϑ)^* = ϑ z^{-1} = -z^{-1} ϑ
        let zi_theta = EnvelopeElement::z_power(kind, -1).mul(&theta);
        assert_eq!(z.mul(&theta).star(), zi_theta.scale(Complex64::new(-1.0, 0.0)));
        // involution
        let e = EnvelopeElement::monomial(kind, 3, 2, Complex64::new(0.5, 1.0))
            .add(&EnvelopeElement::monomial(kind, -2, 1, Complex64::new(-1.0, 0.25)));
        assert_eq!(e.star().star(), e);
        // anti-Hermitian differential: d(a^*) = -(da)^*
        let da_star = e.star().differential();
        let star_da = e.differential().star();
        assert_eq!(da_star, star_da.scale(Complex64::new(-1.0, 0.0)));
    }

    #[test]
    fn truncation_is_flagged_not_fatal() {
        let kind = CalculusKind::NonStandard;
        let t = EnvelopeElement::monomial(kind, 0, 3, Complex64::new(1.0, 0.0));
        let p = t.mul(&EnvelopeElement::theta(kind));
        assert!(p.is_zero());
        assert!(p.truncated);
    }

    #[test]
    fn classical_envelope_is_exterior() {
        let kind = CalculusKind::Classical;
        let theta = EnvelopeElement::theta(kind);
        assert!(theta.mul(&theta).is_zero());
        assert!(!theta.mul(&theta).truncated);
        let z = EnvelopeElement::z_power(kind, 1);
        assert_eq!(theta.mul(&z), z.mul(&theta));
        assert_eq!(
            EnvelopeElement::z_power(kind, 3).differential(),
            EnvelopeElement::monomial(kind, 3, 1, Complex64::new(3.0, 0.0))
        );
    }

    #[test]
    fn embedded_differential_reproduces_d_theta() {
        for kind in [CalculusKind::Classical, CalculusKind::NonStandard] {
            let theta = EnvelopeElement::theta(kind);
            let coeff = embedded_differential(kind);
            let product = theta.mul(&theta).scale(coeff);
            assert_eq!(product, theta.differential());
        }
    }
}
