use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use super::deformation::DeformationMatrix;
use crate::error::{Error, Result};

pub const TAU: f64 = 2.0 * std::f64::consts::PI;

/// Shared environment of a torus algebra: dimension, deformation matrix and
/// the coefficient pruning threshold. Elements hold it by `Arc`; operations
/// require both operands to reference an equal context.
#[derive(Debug, PartialEq)]
pub struct TorusContext {
    pub n: usize,
    pub xi: DeformationMatrix,
    pub zero_threshold: f64,
}

pub const DEFAULT_ZERO_THRESHOLD: f64 = 1e-14;

impl TorusContext {
    pub fn new(xi: DeformationMatrix) -> Arc<Self> {
        Arc::new(Self {
            n: xi.dim(),
            xi,
            zero_threshold: DEFAULT_ZERO_THRESHOLD,
        })
    }

    pub fn with_threshold(xi: DeformationMatrix, zero_threshold: f64) -> Arc<Self> {
        Arc::new(Self {
            n: xi.dim(),
            xi,
            zero_threshold,
        })
    }

    /// Commutative torus of dimension `n`.
    pub fn commutative(n: usize) -> Arc<Self> {
        Self::new(DeformationMatrix::zero(n))
    }

    /// Normal-ordering phase exponent for `u^m · u^{m'}`:
    /// s = sum over k > j of m_k xi_kj m'_j (k outer, j inner).
    pub fn reorder_exponent(&self, m: &[i32], mp: &[i32]) -> f64 {
        let mut s = 0.0;
        for k in 1..self.n {
            if m[k] == 0 {
                continue;
            }
            for j in 0..k {
                if mp[j] == 0 {
                    continue;
                }
                s += (m[k] as f64) * self.xi.entry(k, j) * (mp[j] as f64);
            }
        }
        s
    }

    /// The unit phase `e^{2πi s}` with `s = reorder_exponent(m, m')`.
    pub fn reorder_phase(&self, m: &[i32], mp: &[i32]) -> Complex64 {
        Complex64::from_polar(1.0, TAU * self.reorder_exponent(m, mp))
    }
}

pub fn contexts_match(a: &Arc<TorusContext>, b: &Arc<TorusContext>) -> Result<()> {
    if Arc::ptr_eq(a, b) {
        return Ok(());
    }
    if a.n != b.n {
        return Err(Error::DimensionMismatch { left: a.n, right: b.n });
    }
    if a.xi != b.xi {
        return Err(Error::DeformationMismatch);
    }
    Ok(())
}

/// Exponent multi-index of a normal-ordered monomial `u_1^{m_1}···u_n^{m_n}`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExponentVec(pub Vec<i32>);

impl ExponentVec {
    pub fn zero(n: usize) -> Self {
        ExponentVec(vec![0; n])
    }

    pub fn unit(n: usize, axis: usize) -> Self {
        let mut v = vec![0; n];
        v[axis - 1] = 1;
        ExponentVec(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    pub fn neg(&self) -> Self {
        ExponentVec(self.0.iter().map(|&c| -c).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        ExponentVec(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(&a, &b)| a + b)
                .collect(),
        )
    }

    /// Squared Euclidean norm of the exponent vector.
    pub fn norm_sq(&self) -> i64 {
        self.0.iter().map(|&c| (c as i64) * (c as i64)).sum()
    }

    /// Sup norm.
    pub fn sup_norm(&self) -> i32 {
        self.0.iter().map(|c| c.abs()).max().unwrap_or(0)
    }
}

impl fmt::Display for ExponentVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// Finitely supported element of the deformed torus algebra: a complex
/// combination of normal-ordered monomials `u^m`, stored in canonical form
/// (each exponent once, coefficients above the pruning threshold, sorted
/// lexicographically by the map order).
#[derive(Debug, Clone)]
pub struct TorusElement {
    ctx: Arc<TorusContext>,
    terms: BTreeMap<ExponentVec, Complex64>,
}

impl TorusElement {
    pub fn zero(ctx: &Arc<TorusContext>) -> Self {
        Self {
            ctx: ctx.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(ctx: &Arc<TorusContext>) -> Self {
        Self::monomial(ctx, ExponentVec::zero(ctx.n), Complex64::new(1.0, 0.0))
    }

    pub fn scalar(ctx: &Arc<TorusContext>, c: Complex64) -> Self {
        Self::monomial(ctx, ExponentVec::zero(ctx.n), c)
    }

    /// The generator `u_axis` (1-based).
    pub fn generator(ctx: &Arc<TorusContext>, axis: usize) -> Self {
        assert!(axis >= 1 && axis <= ctx.n, "axis {axis} out of range");
        Self::monomial(ctx, ExponentVec::unit(ctx.n, axis), Complex64::new(1.0, 0.0))
    }

    pub fn monomial(ctx: &Arc<TorusContext>, m: ExponentVec, c: Complex64) -> Self {
        assert_eq!(m.len(), ctx.n, "exponent length vs dimension");
        let mut terms = BTreeMap::new();
        if c.norm() > ctx.zero_threshold {
            terms.insert(m, c);
        }
        Self {
            ctx: ctx.clone(),
            terms,
        }
    }

    pub fn from_terms<I>(ctx: &Arc<TorusContext>, iter: I) -> Self
    where
        I: IntoIterator<Item = (ExponentVec, Complex64)>,
    {
        let mut e = Self::zero(ctx);
        for (m, c) in iter {
            e.add_term(m, c);
        }
        e
    }

    pub fn context(&self) -> &Arc<TorusContext> {
        &self.ctx
    }

    pub fn dim(&self) -> usize {
        self.ctx.n
    }

    pub fn terms(&self) -> impl Iterator<Item = (&ExponentVec, &Complex64)> {
        self.terms.iter()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m: &ExponentVec) -> Complex64 {
        self.terms.get(m).copied().unwrap_or(Complex64::new(0.0, 0.0))
    }

    /// Largest sup-norm exponent in the support.
    pub fn support_radius(&self) -> i32 {
        self.terms.keys().map(|m| m.sup_norm()).max().unwrap_or(0)
    }

    fn add_term(&mut self, m: ExponentVec, c: Complex64) {
        let threshold = self.ctx.zero_threshold;
        let entry = self.terms.entry(m);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                if c.norm() > threshold {
                    v.insert(c);
                }
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = *o.get() + c;
                if s.norm() > threshold {
                    *o.get_mut() = s;
                } else {
                    o.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        contexts_match(&self.ctx, &other.ctx).expect("incompatible contexts in add");
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), *c);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    pub fn scale(&self, c: Complex64) -> Self {
        let mut out = Self::zero(&self.ctx);
        for (m, a) in &self.terms {
            out.add_term(m.clone(), a * c);
        }
        out
    }

    pub fn scale_re(&self, t: f64) -> Self {
        self.scale(Complex64::new(t, 0.0))
    }

    /// Bilinear product. Monomials obey
    /// `u^m · u^{m'} = e^{2πi Σ_{k>j} m_k Ξ_kj m'_j} u^{m+m'}`.
    pub fn mul(&self, other: &Self) -> Self {
        contexts_match(&self.ctx, &other.ctx).expect("incompatible contexts in mul");
        let mut out = Self::zero(&self.ctx);
        for (m, a) in &self.terms {
            for (mp, b) in &other.terms {
                let phase = self.ctx.reorder_phase(&m.0, &mp.0);
                out.add_term(m.add(mp), a * b * phase);
            }
        }
        out
    }

    /// Checked product; errors on dimension or deformation mismatch.
    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        contexts_match(&self.ctx, &other.ctx)?;
        Ok(self.mul(other))
    }

    /// Antilinear involution. On a monomial,
    /// `(c u^m)^* = conj(c) e^{2πi Σ_{k>j} m_k Ξ_kj m_j} u^{-m}`,
    /// the phase being the cost of normal-ordering the reversed inverse word.
    pub fn star(&self) -> Self {
        let mut out = Self::zero(&self.ctx);
        for (m, c) in &self.terms {
            let phase = Complex64::from_polar(1.0, TAU * self.ctx.reorder_exponent(&m.0, &m.0));
            out.add_term(m.neg(), c.conj() * phase);
        }
        out
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.sub(&self.star()).sup_coeff_norm() <= tol
    }

    /// The unique normalized tracial state: the coefficient of `u^0`.
    pub fn trace(&self) -> Complex64 {
        self.coefficient(&ExponentVec::zero(self.ctx.n))
    }

    /// The derivation along `axis` (1-based): `δ_j(u^m) = 2πi m_j u^m`.
    pub fn derivation(&self, axis: usize) -> Result<Self> {
        if axis < 1 || axis > self.ctx.n {
            return Err(Error::AxisOutOfRange { axis, n: self.ctx.n });
        }
        let mut out = Self::zero(&self.ctx);
        for (m, c) in &self.terms {
            let factor = Complex64::new(0.0, TAU * m.0[axis - 1] as f64);
            out.add_term(m.clone(), c * factor);
        }
        Ok(out)
    }

    /// Flat Laplacian `Σ_j δ_j²`; on a monomial it scales by `-4π² |m|²`.
    pub fn laplacian(&self) -> Self {
        let mut out = Self::zero(&self.ctx);
        for (m, c) in &self.terms {
            let factor = -(TAU * TAU) * m.norm_sq() as f64;
            out.add_term(m.clone(), c * factor);
        }
        out
    }

    /// Largest coefficient magnitude; a convenient sup-style norm for
    /// tolerance comparisons.
    pub fn sup_coeff_norm(&self) -> f64 {
        self.terms.values().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// `τ_0(a^* a)`, the squared GNS norm; real and nonnegative.
    pub fn l2_norm_sq(&self) -> f64 {
        self.terms.values().map(|c| c.norm_sqr()).sum()
    }
}

impl PartialEq for TorusElement {
    fn eq(&self, other: &Self) -> bool {
        contexts_match(&self.ctx, &other.ctx).is_ok() && self.terms == other.terms
    }
}

impl fmt::Display for TorusElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({:.6}{:+.6}i)·u^{}", c.re, c.im, m)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx2() -> Arc<TorusContext> {
        TorusContext::new(DeformationMatrix::two_dim(0.25))
    }

    #[test]
    fn product_in_normal_order_has_unit_phase() {
        let ctx = ctx2();
        let u1 = TorusElement::generator(&ctx, 1);
        let u2 = TorusElement::generator(&ctx, 2);
        let p = u1.mul(&u2);
        let c = p.coefficient(&ExponentVec(vec![1, 1]));
        assert!((c - Complex64::new(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn reversed_product_picks_up_the_deformation_phase() {
        // xi_12 = 1/4: u_2 u_1 = e^{-πi/2} u_1 u_2 = -i u_1 u_2
        let ctx = ctx2();
        let u1 = TorusElement::generator(&ctx, 1);
        let u2 = TorusElement::generator(&ctx, 2);
        let p = u2.mul(&u1);
        let c = p.coefficient(&ExponentVec(vec![1, 1]));
        assert!((c - Complex64::new(0.0, -1.0)).norm() < 1e-12);
    }

    #[test]
    fn unitarity() {
        let ctx = ctx2();
        for axis in 1..=2 {
            let u = TorusElement::generator(&ctx, axis);
            let p = u.mul(&u.star());
            assert_eq!(p, TorusElement::one(&ctx));
        }
    }

    #[test]
    fn star_of_u1u2() {
        // (u_1 u_2)^* = e^{-2πi·0.25} u_1^{-1} u_2^{-1}
        let ctx = ctx2();
        let u1 = TorusElement::generator(&ctx, 1);
        let u2 = TorusElement::generator(&ctx, 2);
        let w = u1.mul(&u2);
        let s = w.star();
        let expected = Complex64::from_polar(1.0, -TAU * 0.25);
        let c = s.coefficient(&ExponentVec(vec![-1, -1]));
        assert!((c - expected).norm() < 1e-12);
        // and w^* w = 1
        assert_eq!(s.mul(&w), TorusElement::one(&ctx));
    }

    #[test]
    fn star_of_scalar_conjugates() {
        let ctx = ctx2();
        let c = Complex64::new(2.0, -3.0);
        let e = TorusElement::scalar(&ctx, c);
        assert_eq!(e.star(), TorusElement::scalar(&ctx, c.conj()));
    }

    #[test]
    fn trace_examples() {
        let ctx = ctx2();
        assert_eq!(TorusElement::one(&ctx).trace(), Complex64::new(1.0, 0.0));
        assert_eq!(
            TorusElement::generator(&ctx, 1).trace(),
            Complex64::new(0.0, 0.0)
        );
        let u1 = TorusElement::generator(&ctx, 1);
        assert_eq!(u1.mul(&u1.star()).trace(), Complex64::new(1.0, 0.0));
    }

    #[test]
    fn derivation_rules() {
        let ctx = ctx2();
        let u1 = TorusElement::generator(&ctx, 1);
        let u2 = TorusElement::generator(&ctx, 2);
        let d = u1.derivation(1).unwrap();
        assert_eq!(d, u1.scale(Complex64::new(0.0, TAU)));
        assert!(u2.derivation(1).unwrap().is_zero());
        // Leibniz with δ_1(u_2) = 0: δ_1(u_1 u_2) = 2πi u_1 u_2
        let w = u1.mul(&u2);
        assert_eq!(w.derivation(1).unwrap(), w.scale(Complex64::new(0.0, TAU)));
        assert!(u1.derivation(3).is_err());
    }

    #[test]
    fn laplacian_matches_iterated_derivations() {
        let ctx = ctx2();
        let u1 = TorusElement::generator(&ctx, 1);
        assert!(TorusElement::one(&ctx).laplacian().is_zero());
        let twice = u1.derivation(1).unwrap().derivation(1).unwrap();
        assert_eq!(u1.laplacian(), twice);
        let lam = u1.laplacian().coefficient(&ExponentVec(vec![1, 0]));
        assert!((lam - Complex64::new(-TAU * TAU, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn mismatched_contexts_error() {
        let a = TorusElement::one(&ctx2());
        let b = TorusElement::one(&TorusContext::new(DeformationMatrix::two_dim(0.5)));
        assert!(a.try_mul(&b).is_err());
        let c = TorusElement::one(&TorusContext::commutative(3));
        assert!(a.try_mul(&c).is_err());
    }
}
