use crate::error::{Error, Result};

use super::{Scalar, UNIT_TOL};

/// Univariate jet: a power series truncated at a fixed degree.
///
/// `coeffs[k]` is the coefficient of `t^k`; the order is `coeffs.len() - 1`.
/// Binary operations reconcile mismatched orders by truncating to the
/// smaller one.
#[derive(Clone, Debug, PartialEq)]
pub struct Jet1<S = f64> {
    coeffs: Vec<S>,
}

impl<S: Scalar> Jet1<S> {
    pub fn new(coeffs: Vec<S>) -> Self {
        assert!(!coeffs.is_empty(), "a jet stores at least the constant term");
        Self { coeffs }
    }

    pub fn zero(order: usize) -> Self {
        Self { coeffs: vec![S::zero(); order + 1] }
    }

    pub fn constant(c: S, order: usize) -> Self {
        let mut coeffs = vec![S::zero(); order + 1];
        coeffs[0] = c;
        Self { coeffs }
    }

    /// The series `t` itself.
    pub fn var(order: usize) -> Self {
        let mut j = Self::zero(order);
        if order >= 1 {
            j.coeffs[1] = S::one();
        }
        j
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Coefficient of `t^k`; zero beyond the retained order.
    pub fn coeff(&self, k: usize) -> S {
        self.coeffs.get(k).copied().unwrap_or_else(S::zero)
    }

    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    pub fn set_coeff(&mut self, k: usize, value: S) {
        assert!(k < self.coeffs.len());
        self.coeffs[k] = value;
    }

    pub fn truncate(&self, order: usize) -> Self {
        let n = order.min(self.order());
        Self { coeffs: self.coeffs[..=n].to_vec() }
    }

    pub fn max_abs(&self) -> S {
        self.coeffs.iter().fold(S::zero(), |m, &c| m.max(c.abs()))
    }

    /// Largest magnitude among coefficients of degree >= `from`.
    pub fn max_abs_from(&self, from: usize) -> S {
        self.coeffs
            .iter()
            .skip(from)
            .fold(S::zero(), |m, &c| m.max(c.abs()))
    }

    pub fn is_zero_within(&self, tol: S) -> bool {
        self.max_abs() <= tol
    }

    fn common_order(&self, other: &Self) -> usize {
        self.order().min(other.order())
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.common_order(other);
        Self::new((0..=n).map(|k| self.coeff(k) + other.coeff(k)).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.common_order(other);
        Self::new((0..=n).map(|k| self.coeff(k) - other.coeff(k)).collect())
    }

    pub fn neg(&self) -> Self {
        Self::new(self.coeffs.iter().map(|&c| -c).collect())
    }

    pub fn scale(&self, s: S) -> Self {
        Self::new(self.coeffs.iter().map(|&c| c * s).collect())
    }

    pub fn add_constant(&self, c: S) -> Self {
        let mut out = self.clone();
        out.coeffs[0] = out.coeffs[0] + c;
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let n = self.common_order(other);
        let mut coeffs = vec![S::zero(); n + 1];
        for i in 0..=n {
            let a = self.coeff(i);
            if a == S::zero() {
                continue;
            }
            for j in 0..=(n - i) {
                coeffs[i + j] = coeffs[i + j] + a * other.coeff(j);
            }
        }
        Self::new(coeffs)
    }

    /// Formal derivative; the retained order drops by one.
    pub fn derivative(&self) -> Result<Self> {
        if self.order() == 0 {
            return Err(Error::ZeroBudget);
        }
        Ok(Self::new(
            (1..=self.order())
                .map(|k| self.coeffs[k] * S::lit(k as f64))
                .collect(),
        ))
    }

    /// Antiderivative with vanishing constant term; the order grows by one.
    pub fn integrate(&self) -> Self {
        let mut coeffs = vec![S::zero(); self.order() + 2];
        for k in 0..=self.order() {
            coeffs[k + 1] = self.coeffs[k] / S::lit((k + 1) as f64);
        }
        Self::new(coeffs)
    }

    /// Quotient by a series with unit constant term.
    pub fn div_unit(&self, b: &Self) -> Result<Self> {
        let b0 = b.coeff(0);
        if b0.abs() <= S::lit(UNIT_TOL) {
            return Err(Error::NonUnitDivisor(b0.as_f64()));
        }
        let n = self.common_order(b);
        let mut q = vec![S::zero(); n + 1];
        for k in 0..=n {
            let mut acc = self.coeff(k);
            for i in 1..=k {
                acc = acc - b.coeff(i) * q[k - i];
            }
            q[k] = acc / b0;
        }
        Ok(Self::new(q))
    }

    pub fn recip(&self) -> Result<Self> {
        Self::constant(S::one(), self.order()).div_unit(self)
    }

    /// Square root with positive constant term.
    pub fn sqrt(&self) -> Result<Self> {
        let a0 = self.coeff(0);
        if a0 <= S::lit(UNIT_TOL) {
            return Err(Error::NonPositiveConstantTerm(a0.as_f64()));
        }
        let s0 = a0.sqrt();
        let two_s0 = s0 + s0;
        let n = self.order();
        let mut s = vec![S::zero(); n + 1];
        s[0] = s0;
        for k in 1..=n {
            let mut acc = self.coeff(k);
            for i in 1..k {
                acc = acc - s[i] * s[k - i];
            }
            s[k] = acc / two_s0;
        }
        Ok(Self::new(s))
    }

    /// Substitution `self(inner(t))`; `inner` must vanish at 0.
    pub fn compose(&self, inner: &Self) -> Result<Self> {
        let c0 = inner.coeff(0);
        if c0.abs() > S::lit(UNIT_TOL) {
            return Err(Error::NonVanishingConstant(c0.as_f64()));
        }
        let n = self.order().min(inner.order());
        // Horner evaluation in the inner series.
        let mut acc = Jet1::constant(self.coeff(self.order()), n);
        for k in (0..self.order()).rev() {
            acc = acc.mul(&inner.truncate(n)).add_constant(self.coeff(k));
        }
        Ok(acc)
    }

    /// Compositional inverse of a series with `f(0) = 0`, `f'(0) != 0`.
    ///
    /// Solved degree by degree: the coefficient of `t^k` in `self(w(t))`
    /// depends on `w_k` only through the linear term.
    pub fn reversion(&self) -> Result<Self> {
        let c0 = self.coeff(0);
        if c0.abs() > S::lit(UNIT_TOL) {
            return Err(Error::NonVanishingConstant(c0.as_f64()));
        }
        let f1 = self.coeff(1);
        if f1.abs() <= S::lit(UNIT_TOL) {
            return Err(Error::NonUnitDivisor(f1.as_f64()));
        }
        let n = self.order();
        let mut w = Jet1::zero(n);
        if n >= 1 {
            w.coeffs[1] = S::one() / f1;
        }
        for k in 2..=n {
            let composed = self.compose(&w)?;
            // composed matches t up to degree k-1; fix degree k.
            w.coeffs[k] = -composed.coeff(k) / f1;
        }
        Ok(w)
    }

    /// Horner evaluation of the underlying polynomial.
    pub fn eval(&self, t: S) -> S {
        self.coeffs
            .iter()
            .rev()
            .fold(S::zero(), |acc, &c| acc * t + c)
    }
}
