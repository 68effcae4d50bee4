use crate::error::{Error, Result};

use super::{Jet1, Scalar, DIVISIBILITY_TOL, UNIT_TOL};

/// Bivariate jet in `(u, v)` with rectangular truncation.
///
/// Coefficients are stored densely for all monomials `u^i v^j` with
/// `i <= u_order`, `j <= v_order`. `valid_total` is the certified total
/// degree: coefficients with `i + j > valid_total` may have been corrupted
/// by truncation and are never asserted on. Binary operations reconcile
/// orders by truncation and certify to the minimum of the operands'
/// certified degrees.
#[derive(Clone, Debug, PartialEq)]
pub struct Jet2<S = f64> {
    u_order: usize,
    v_order: usize,
    valid_total: usize,
    c: Vec<S>,
}

impl<S: Scalar> Jet2<S> {
    pub fn zero(u_order: usize, v_order: usize) -> Self {
        Self {
            u_order,
            v_order,
            valid_total: u_order + v_order,
            c: vec![S::zero(); (u_order + 1) * (v_order + 1)],
        }
    }

    pub fn constant(value: S, u_order: usize, v_order: usize) -> Self {
        let mut j = Self::zero(u_order, v_order);
        j.c[0] = value;
        j
    }

    /// The coordinate series `u`.
    pub fn var_u(u_order: usize, v_order: usize) -> Self {
        let mut j = Self::zero(u_order, v_order);
        if u_order >= 1 {
            let idx = j.index(1, 0);
            j.c[idx] = S::one();
        }
        j
    }

    /// The coordinate series `v`.
    pub fn var_v(u_order: usize, v_order: usize) -> Self {
        let mut j = Self::zero(u_order, v_order);
        if v_order >= 1 {
            let idx = j.index(0, 1);
            j.c[idx] = S::one();
        }
        j
    }

    /// Builds an exact polynomial from sparse `(i, j, coefficient)` terms.
    pub fn from_terms(u_order: usize, v_order: usize, terms: &[(usize, usize, S)]) -> Self {
        let mut j = Self::zero(u_order, v_order);
        for &(i, k, value) in terms {
            assert!(i <= u_order && k <= v_order, "term outside the truncation rectangle");
            let idx = j.index(i, k);
            j.c[idx] = value;
        }
        j
    }

    fn index(&self, i: usize, j: usize) -> usize {
        i * (self.v_order + 1) + j
    }

    pub fn u_order(&self) -> usize {
        self.u_order
    }

    pub fn v_order(&self) -> usize {
        self.v_order
    }

    pub fn valid_total(&self) -> usize {
        self.valid_total
    }

    /// Re-stamps the certified total degree (only downwards).
    pub fn with_valid_total(mut self, valid_total: usize) -> Self {
        self.valid_total = self.valid_total.min(valid_total);
        self
    }

    /// Coefficient of `u^i v^j`; zero outside the rectangle.
    pub fn coeff(&self, i: usize, j: usize) -> S {
        if i > self.u_order || j > self.v_order {
            S::zero()
        } else {
            self.c[self.index(i, j)]
        }
    }

    pub fn set_coeff(&mut self, i: usize, j: usize, value: S) {
        assert!(i <= self.u_order && j <= self.v_order);
        let idx = self.index(i, j);
        self.c[idx] = value;
    }

    /// Iterates over certified monomials `(i, j, coefficient)`.
    pub fn certified_terms(&self) -> impl Iterator<Item = (usize, usize, S)> + '_ {
        (0..=self.u_order).flat_map(move |i| {
            (0..=self.v_order)
                .filter(move |&j| i + j <= self.valid_total)
                .map(move |j| (i, j, self.coeff(i, j)))
        })
    }

    /// Largest coefficient magnitude over certified monomials.
    pub fn max_abs(&self) -> S {
        self.certified_terms()
            .fold(S::zero(), |m, (_, _, c)| m.max(c.abs()))
    }

    pub fn truncate(&self, u_order: usize, v_order: usize) -> Self {
        let uo = u_order.min(self.u_order);
        let vo = v_order.min(self.v_order);
        let mut out = Self::zero(uo, vo);
        for i in 0..=uo {
            for j in 0..=vo {
                let idx = out.index(i, j);
                out.c[idx] = self.coeff(i, j);
            }
        }
        out.valid_total = self.valid_total.min(uo + vo);
        out
    }

    fn reconciled(&self, other: &Self) -> (usize, usize, usize) {
        (
            self.u_order.min(other.u_order),
            self.v_order.min(other.v_order),
            self.valid_total.min(other.valid_total),
        )
    }

    pub fn add(&self, other: &Self) -> Self {
        let (uo, vo, valid) = self.reconciled(other);
        let mut out = Self::zero(uo, vo);
        for i in 0..=uo {
            for j in 0..=vo {
                let idx = out.index(i, j);
                out.c[idx] = self.coeff(i, j) + other.coeff(i, j);
            }
        }
        out.valid_total = valid;
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        let mut out = self.clone();
        for c in &mut out.c {
            *c = -*c;
        }
        out
    }

    pub fn scale(&self, s: S) -> Self {
        let mut out = self.clone();
        for c in &mut out.c {
            *c = *c * s;
        }
        out
    }

    pub fn add_constant(&self, value: S) -> Self {
        let mut out = self.clone();
        out.c[0] = out.c[0] + value;
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let (uo, vo, valid) = self.reconciled(other);
        let mut out = Self::zero(uo, vo);
        for i1 in 0..=uo.min(self.u_order) {
            for j1 in 0..=vo.min(self.v_order) {
                let a = self.coeff(i1, j1);
                if a == S::zero() {
                    continue;
                }
                for i2 in 0..=(uo - i1) {
                    for j2 in 0..=(vo - j1) {
                        let idx = out.index(i1 + i2, j1 + j2);
                        out.c[idx] = out.c[idx] + a * other.coeff(i2, j2);
                    }
                }
            }
        }
        out.valid_total = valid;
        out
    }

    /// Multiplication by the coordinate `v` (shifts the `v`-grading up).
    pub fn mul_v(&self) -> Self {
        let mut out = Self::zero(self.u_order, self.v_order);
        for i in 0..=self.u_order {
            for j in 1..=self.v_order {
                let idx = out.index(i, j);
                out.c[idx] = self.coeff(i, j - 1);
            }
        }
        out.valid_total = (self.valid_total + 1).min(self.u_order + self.v_order);
        out
    }

    pub fn derive_u(&self) -> Result<Self> {
        if self.valid_total == 0 {
            return Err(Error::ZeroBudget);
        }
        let uo = self.u_order.saturating_sub(1);
        let mut out = Self::zero(uo, self.v_order);
        for i in 0..=uo {
            for j in 0..=self.v_order {
                let idx = out.index(i, j);
                out.c[idx] = self.coeff(i + 1, j) * S::lit((i + 1) as f64);
            }
        }
        out.valid_total = self.valid_total - 1;
        Ok(out)
    }

    pub fn derive_v(&self) -> Result<Self> {
        if self.valid_total == 0 {
            return Err(Error::ZeroBudget);
        }
        let vo = self.v_order.saturating_sub(1);
        let mut out = Self::zero(self.u_order, vo);
        for i in 0..=self.u_order {
            for j in 0..=vo {
                let idx = out.index(i, j);
                out.c[idx] = self.coeff(i, j + 1) * S::lit((j + 1) as f64);
            }
        }
        out.valid_total = self.valid_total - 1;
        Ok(out)
    }

    /// Quotient by a series whose constant term is a unit.
    ///
    /// Solved coefficientwise in graded order: every product term on the
    /// right has strictly smaller total degree, so the recursion is
    /// well-founded.
    pub fn div_unit(&self, b: &Self) -> Result<Self> {
        let b0 = b.coeff(0, 0);
        if b0.abs() <= S::lit(UNIT_TOL) {
            return Err(Error::NonUnitDivisor(b0.as_f64()));
        }
        let (uo, vo, valid) = self.reconciled(b);
        let mut q = Self::zero(uo, vo);
        for d in 0..=(uo + vo) {
            for i in d.saturating_sub(vo)..=d.min(uo) {
                let j = d - i;
                let mut acc = self.coeff(i, j);
                for k in 0..=i {
                    for l in 0..=j {
                        if k == 0 && l == 0 {
                            continue;
                        }
                        acc = acc - b.coeff(k, l) * q.coeff(i - k, j - l);
                    }
                }
                let idx = q.index(i, j);
                q.c[idx] = acc / b0;
            }
        }
        q.valid_total = valid;
        Ok(q)
    }

    pub fn recip(&self) -> Result<Self> {
        Self::constant(S::one(), self.u_order, self.v_order).div_unit(self)
    }

    /// Square root with positive constant term, same graded recursion as
    /// [`Jet2::div_unit`].
    pub fn sqrt(&self) -> Result<Self> {
        let a0 = self.coeff(0, 0);
        if a0 <= S::lit(UNIT_TOL) {
            return Err(Error::NonPositiveConstantTerm(a0.as_f64()));
        }
        let s0 = a0.sqrt();
        let two_s0 = s0 + s0;
        let mut s = Self::zero(self.u_order, self.v_order);
        s.c[0] = s0;
        for d in 1..=(self.u_order + self.v_order) {
            for i in d.saturating_sub(self.v_order)..=d.min(self.u_order) {
                let j = d - i;
                let mut acc = self.coeff(i, j);
                for k in 0..=i {
                    for l in 0..=j {
                        if (k == 0 && l == 0) || (k == i && l == j) {
                            continue;
                        }
                        acc = acc - s.coeff(k, l) * s.coeff(i - k, j - l);
                    }
                }
                let idx = s.index(i, j);
                s.c[idx] = acc / two_s0;
            }
        }
        s.valid_total = self.valid_total;
        Ok(s)
    }

    /// Exact division by `v`. Fails when a `v^0` coefficient exceeds the
    /// divisibility tolerance (the singular set is not the `u`-axis).
    pub fn div_exact_v(&self) -> Result<Self> {
        let scale = self.max_abs().max(S::one());
        let tol = S::lit(DIVISIBILITY_TOL) * scale;
        let mut worst = S::zero();
        for i in 0..=self.u_order {
            worst = worst.max(self.coeff(i, 0).abs());
        }
        if worst > tol {
            return Err(Error::NotDivisible(worst.as_f64()));
        }
        let vo = self.v_order.saturating_sub(1);
        let mut out = Self::zero(self.u_order, vo);
        for i in 0..=self.u_order {
            for j in 0..=vo {
                let idx = out.index(i, j);
                out.c[idx] = self.coeff(i, j + 1);
            }
        }
        out.valid_total = self.valid_total.saturating_sub(1);
        Ok(out)
    }

    /// Restriction to the `u`-axis.
    pub fn restrict_v0(&self) -> Jet1<S> {
        let n = self.u_order.min(self.valid_total);
        Jet1::new((0..=n).map(|i| self.coeff(i, 0)).collect())
    }

    /// Embeds a univariate series in `u` as a bivariate jet.
    ///
    /// The embedded series has no `v`-dependence, so certification is
    /// limited only by the univariate order.
    pub fn embed_u(a: &Jet1<S>, v_order: usize) -> Self {
        let mut out = Self::zero(a.order(), v_order);
        for i in 0..=a.order() {
            let idx = out.index(i, 0);
            out.c[idx] = a.coeff(i);
        }
        out.valid_total = a.order();
        out
    }

    /// Substitution `self(xi(u,v), eta(u,v))` for maps vanishing at the
    /// origin, by nested Horner evaluation over the jet ring.
    pub fn compose(&self, xi: &Self, eta: &Self) -> Result<Self> {
        for (name, m) in [("xi", xi), ("eta", eta)] {
            let c0 = m.coeff(0, 0);
            if c0.abs() > S::lit(UNIT_TOL) {
                let _ = name;
                return Err(Error::NonVanishingConstant(c0.as_f64()));
            }
        }
        let uo = xi.u_order.min(eta.u_order);
        let vo = xi.v_order.min(eta.v_order);
        let valid = self
            .valid_total
            .min(xi.valid_total)
            .min(eta.valid_total);
        let xi_t = xi.truncate(uo, vo);
        let eta_t = eta.truncate(uo, vo);

        let mut acc = Jet2::zero(uo, vo);
        for i in (0..=self.u_order).rev() {
            // row_i(eta) = sum_j a_{ij} eta^j, Horner in eta
            let mut row = Jet2::constant(self.coeff(i, self.v_order), uo, vo);
            for j in (0..self.v_order).rev() {
                row = row.mul(&eta_t).add_constant(self.coeff(i, j));
            }
            acc = acc.mul(&xi_t).add(&row);
        }
        acc.valid_total = valid;
        Ok(acc)
    }

    /// Numeric evaluation of the retained polynomial at a point.
    pub fn eval(&self, u: S, v: S) -> S {
        let mut acc = S::zero();
        for i in (0..=self.u_order).rev() {
            let mut row = S::zero();
            for j in (0..=self.v_order).rev() {
                row = row * v + self.coeff(i, j);
            }
            acc = acc * u + row;
        }
        acc
    }

    /// Largest deviation from `other` over monomials certified in both and
    /// of total degree at most `max_total`.
    pub fn max_dev_up_to(&self, other: &Self, max_total: usize) -> S {
        let d = self
            .valid_total
            .min(other.valid_total)
            .min(max_total);
        let uo = self.u_order.min(other.u_order);
        let vo = self.v_order.min(other.v_order);
        let mut worst = S::zero();
        for i in 0..=uo {
            for j in 0..=vo.min(d.saturating_sub(i)) {
                if i + j > d {
                    continue;
                }
                worst = worst.max((self.coeff(i, j) - other.coeff(i, j)).abs());
            }
        }
        worst
    }
}
