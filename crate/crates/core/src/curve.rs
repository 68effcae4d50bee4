//! Space-curve machinery on univariate jets: Frenet apparatus, series
//! integration of the fundamental theorem of curves, arclength
//! reparametrization, and the initial normal fields fed to the Cauchy
//! solver.

use crate::error::{Error, Result};
use crate::jet::{Jet1, UNIT_TOL};

/// Orthonormality tolerance for frames and unit fields.
pub const FRAME_TOL: f64 = 1e-9;

/// Which of the two admissible normal fields along a curve is meant.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Branch {
    Plus,
    Minus,
}

impl Branch {
    pub fn sign(self) -> f64 {
        match self {
            Branch::Plus => 1.0,
            Branch::Minus => -1.0,
        }
    }

    pub fn opposite(self) -> Self {
        match self {
            Branch::Plus => Branch::Minus,
            Branch::Minus => Branch::Plus,
        }
    }
}

/// An `R^3`-valued univariate jet.
#[derive(Clone, Debug, PartialEq)]
pub struct SeriesVec3(pub [Jet1; 3]);

impl SeriesVec3 {
    pub fn zero(order: usize) -> Self {
        Self(std::array::from_fn(|_| Jet1::zero(order)))
    }

    pub fn constant(p: [f64; 3], order: usize) -> Self {
        Self(std::array::from_fn(|k| Jet1::constant(p[k], order)))
    }

    pub fn order(&self) -> usize {
        self.0.iter().map(|c| c.order()).min().unwrap()
    }

    pub fn truncate(&self, order: usize) -> Self {
        Self(std::array::from_fn(|k| self.0[k].truncate(order)))
    }

    pub fn add(&self, other: &Self) -> Self {
        Self(std::array::from_fn(|k| self.0[k].add(&other.0[k])))
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self(std::array::from_fn(|k| self.0[k].sub(&other.0[k])))
    }

    pub fn neg(&self) -> Self {
        Self(std::array::from_fn(|k| self.0[k].neg()))
    }

    pub fn scale(&self, s: f64) -> Self {
        Self(std::array::from_fn(|k| self.0[k].scale(s)))
    }

    pub fn scale_jet(&self, s: &Jet1) -> Self {
        Self(std::array::from_fn(|k| self.0[k].mul(s)))
    }

    pub fn dot(&self, other: &Self) -> Jet1 {
        let mut acc = self.0[0].mul(&other.0[0]);
        for k in 1..3 {
            acc = acc.add(&self.0[k].mul(&other.0[k]));
        }
        acc
    }

    pub fn cross(&self, other: &Self) -> Self {
        let [a0, a1, a2] = &self.0;
        let [b0, b1, b2] = &other.0;
        Self([
            a1.mul(b2).sub(&a2.mul(b1)),
            a2.mul(b0).sub(&a0.mul(b2)),
            a0.mul(b1).sub(&a1.mul(b0)),
        ])
    }

    pub fn norm_sq(&self) -> Jet1 {
        self.dot(self)
    }

    pub fn derivative(&self) -> Result<Self> {
        Ok(Self([
            self.0[0].derivative()?,
            self.0[1].derivative()?,
            self.0[2].derivative()?,
        ]))
    }

    pub fn compose(&self, inner: &Jet1) -> Result<Self> {
        Ok(Self([
            self.0[0].compose(inner)?,
            self.0[1].compose(inner)?,
            self.0[2].compose(inner)?,
        ]))
    }

    pub fn at_zero(&self) -> [f64; 3] {
        std::array::from_fn(|k| self.0[k].coeff(0))
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().fold(0.0, |m, c| m.max(c.max_abs()))
    }

    /// Negates odd coefficients, i.e. substitutes `t -> -t`.
    pub fn reverse_parameter(&self) -> Self {
        Self(std::array::from_fn(|k| {
            Jet1::new(
                self.0[k]
                    .coeffs()
                    .iter()
                    .enumerate()
                    .map(|(d, &c)| if d % 2 == 1 { -c } else { c })
                    .collect(),
            )
        }))
    }
}

pub fn det3(a: &SeriesVec3, b: &SeriesVec3, c: &SeriesVec3) -> Jet1 {
    a.cross(b).dot(c)
}

/// A space curve as a triple of univariate jets in the parameter `t`.
#[derive(Clone, Debug, PartialEq)]
pub struct SpaceCurveJet {
    pub x: Jet1,
    pub y: Jet1,
    pub z: Jet1,
    /// Set once `|curve'|^2 - 1` has been checked to vanish as a series.
    pub arclength_certified: bool,
}

impl SpaceCurveJet {
    pub fn new(x: Jet1, y: Jet1, z: Jet1) -> Self {
        Self { x, y, z, arclength_certified: false }
    }

    pub fn from_vec(v: SeriesVec3) -> Self {
        let [x, y, z] = v.0;
        Self::new(x, y, z)
    }

    pub fn as_vec(&self) -> SeriesVec3 {
        SeriesVec3([self.x.clone(), self.y.clone(), self.z.clone()])
    }

    pub fn order(&self) -> usize {
        self.as_vec().order()
    }

    pub fn derivative(&self) -> Result<SeriesVec3> {
        self.as_vec().derivative()
    }

    pub fn point_at_zero(&self) -> [f64; 3] {
        [self.x.coeff(0), self.y.coeff(0), self.z.coeff(0)]
    }

    /// Largest deviation of `|curve'|^2` from 1.
    pub fn unit_speed_deviation(&self) -> Result<f64> {
        let speed2 = self.derivative()?.norm_sq();
        Ok(speed2.add_constant(-1.0).max_abs())
    }

    pub fn certify_arclength(mut self, tol: f64) -> Result<Self> {
        let dev = self.unit_speed_deviation()?;
        if dev > tol {
            return Err(Error::DegenerateCurve("curve is not arclength parametrized"));
        }
        self.arclength_certified = true;
        Ok(self)
    }

    /// `t -> -t`; arclength certification survives the flip.
    pub fn reverse_parameter(&self) -> Self {
        let mut out = Self::from_vec(self.as_vec().reverse_parameter());
        out.arclength_certified = self.arclength_certified;
        out
    }
}

/// Frenet frame and curvature data of a regular space curve, as series.
#[derive(Clone, Debug)]
pub struct FrenetData {
    pub e: SeriesVec3,
    pub n: SeriesVec3,
    pub b: SeriesVec3,
    pub kappa: Jet1,
    pub tau: Jet1,
}

impl FrenetData {
    /// Frame vectors evaluated at `t = 0`.
    pub fn frame_at_zero(&self) -> [[f64; 3]; 3] {
        [self.e.at_zero(), self.n.at_zero(), self.b.at_zero()]
    }
}

/// Curvature, torsion and the Frenet frame of a regular curve with
/// non-vanishing curvature, by the standard cross-product formulas.
pub fn frenet_apparatus(c: &SpaceCurveJet) -> Result<FrenetData> {
    let d1 = c.derivative()?;
    let d2 = d1.derivative()?;
    let d3 = d2.derivative()?;

    let speed2 = d1.norm_sq();
    if speed2.coeff(0) <= UNIT_TOL {
        return Err(Error::DegenerateCurve("vanishing speed at t = 0"));
    }
    let cr = d1.cross(&d2);
    let cr2 = cr.norm_sq();
    if cr2.coeff(0) <= UNIT_TOL {
        return Err(Error::DegenerateCurve("vanishing curvature at t = 0"));
    }

    let speed = speed2.sqrt()?;
    let cr_norm = cr2.sqrt()?;
    let kappa = cr_norm.div_unit(&speed2.mul(&speed))?;
    let tau = det3(&d1, &d2, &d3).div_unit(&cr2)?;

    let e = d1.scale_jet(&speed.recip()?);
    let b = cr.scale_jet(&cr_norm.recip()?);
    let n = b.cross(&e);

    Ok(FrenetData { e, n, b, kappa, tau })
}

fn check_orthonormal_frame(frame: &[[f64; 3]; 3]) -> Result<()> {
    let dot = |a: &[f64; 3], b: &[f64; 3]| a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
    for i in 0..3 {
        for j in i..3 {
            let expect = if i == j { 1.0 } else { 0.0 };
            if (dot(&frame[i], &frame[j]) - expect).abs() > FRAME_TOL {
                return Err(Error::NonOrthonormalFrame);
            }
        }
    }
    let [e, n, b] = frame;
    let det = e[0] * (n[1] * b[2] - n[2] * b[1]) - e[1] * (n[0] * b[2] - n[2] * b[0])
        + e[2] * (n[0] * b[1] - n[1] * b[0]);
    if det < 0.0 {
        return Err(Error::NonOrthonormalFrame);
    }
    Ok(())
}

/// Integrates the Frenet system `e' = kappa n`, `n' = -kappa e + tau b`,
/// `b' = -tau n`, `position' = e` degree by degree, producing the unique
/// arclength curve with the given curvature and torsion.
///
/// `frame0 = [e(0), n(0), b(0)]` must be orthonormal and positively
/// oriented; the frames come out to order `min(kappa, tau) + 1` and the
/// curve one order higher.
pub fn curve_from_curvature_torsion(
    kappa: &Jet1,
    tau: &Jet1,
    frame0: [[f64; 3]; 3],
    p0: [f64; 3],
) -> Result<SpaceCurveJet> {
    if kappa.coeff(0) <= 0.0 {
        return Err(Error::DegenerateCurve("curvature must be positive at t = 0"));
    }
    check_orthonormal_frame(&frame0)?;

    let frame_order = kappa.order().min(tau.order()) + 1;
    let mut e = SeriesVec3::zero(frame_order);
    let mut n = SeriesVec3::zero(frame_order);
    let mut b = SeriesVec3::zero(frame_order);
    for c in 0..3 {
        e.0[c].set_coeff(0, frame0[0][c]);
        n.0[c].set_coeff(0, frame0[1][c]);
        b.0[c].set_coeff(0, frame0[2][c]);
    }

    let conv = |a: &Jet1, w: &Jet1, k: usize| -> f64 {
        (0..=k).map(|i| a.coeff(i) * w.coeff(k - i)).sum()
    };

    for k in 0..frame_order {
        let inv = 1.0 / (k + 1) as f64;
        for c in 0..3 {
            let de = conv(kappa, &n.0[c], k);
            let dn = -conv(kappa, &e.0[c], k) + conv(tau, &b.0[c], k);
            let db = -conv(tau, &n.0[c], k);
            e.0[c].set_coeff(k + 1, de * inv);
            n.0[c].set_coeff(k + 1, dn * inv);
            b.0[c].set_coeff(k + 1, db * inv);
        }
    }

    let mut pos = SeriesVec3::zero(frame_order + 1);
    for c in 0..3 {
        pos.0[c].set_coeff(0, p0[c]);
        for k in 0..=frame_order {
            pos.0[c].set_coeff(k + 1, e.0[c].coeff(k) / (k + 1) as f64);
        }
    }

    let mut curve = SpaceCurveJet::from_vec(pos);
    curve.arclength_certified = true;
    Ok(curve)
}

/// Arclength reparametrization: returns the inverse parameter series
/// `s_inverse` and the unit-speed curve `c o s_inverse`.
pub fn arclength_reparam(c: &SpaceCurveJet) -> Result<(Jet1, SpaceCurveJet)> {
    let d1 = c.derivative()?;
    let speed2 = d1.norm_sq();
    if speed2.coeff(0) <= UNIT_TOL {
        return Err(Error::DegenerateCurve("vanishing speed at t = 0"));
    }
    if speed2.add_constant(-1.0).max_abs() <= 1e-12 {
        let mut out = c.clone();
        out.arclength_certified = true;
        return Ok((Jet1::var(c.order()), out));
    }
    let speed = speed2.sqrt()?;
    let s = speed.integrate();
    let s_inv = s.reversion()?;
    let unit = c.as_vec().compose(&s_inv)?;
    let curve = SpaceCurveJet::from_vec(unit).certify_arclength(1e-8)?;
    Ok((s_inv, curve))
}

/// The appendix completion: given orthonormal `a, b` and `|mu| < 1`, the
/// unique unit vector `w` with `w . a = 0`, `w . b = mu` and `det(a, b, w)`
/// of the requested sign.
pub fn orthonormal_completion(
    a: [f64; 3],
    b: [f64; 3],
    mu: f64,
    sign: Branch,
) -> Result<[f64; 3]> {
    let dot = |x: &[f64; 3], y: &[f64; 3]| x[0] * y[0] + x[1] * y[1] + x[2] * y[2];
    if (dot(&a, &a) - 1.0).abs() > FRAME_TOL
        || (dot(&b, &b) - 1.0).abs() > FRAME_TOL
        || dot(&a, &b).abs() > FRAME_TOL
    {
        return Err(Error::NotOrthonormal);
    }
    if mu.abs() >= 1.0 - UNIT_TOL {
        return Err(Error::MuOutOfRange(mu.abs()));
    }
    let axb = [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ];
    let root = sign.sign() * (1.0 - mu * mu).sqrt();
    Ok(std::array::from_fn(|k| mu * b[k] + root * axb[k]))
}

/// A unit normal field along a curve, one of the two branches singled out
/// by the sign of `det(sigma', X, sigma'')`.
#[derive(Clone, Debug)]
pub struct NormalField {
    pub w: SeriesVec3,
    pub branch: Branch,
}

/// The field `X^{branch}` along an arclength curve: the serieswise
/// completion with `X . sigma' = 0`, `X . sigma'' = kappa_s` and
/// `det(sigma', X^+, sigma'') > 0` (`< 0` for the minus branch).
///
/// Explicitly `X = c n + (sign) sqrt(1 - c^2) (n x sigma')` with
/// `c = kappa_s / kappa`.
pub fn initial_normal_field(
    sigma: &SpaceCurveJet,
    frenet: &FrenetData,
    kappa_s: &Jet1,
    branch: Branch,
) -> Result<NormalField> {
    if !sigma.arclength_certified {
        return Err(Error::DegenerateCurve("initial field needs an arclength curve"));
    }
    let c = kappa_s.div_unit(&frenet.kappa)?;
    if c.coeff(0).abs() >= 1.0 - UNIT_TOL {
        return Err(Error::GenericityViolated(
            "kappa(0) does not strictly exceed |kappa_s(0)|",
        ));
    }
    let one = Jet1::constant(1.0, c.order());
    let root = one.sub(&c.mul(&c)).sqrt()?;
    let sdot = sigma.derivative()?;
    let lateral = frenet.n.cross(&sdot);
    let w = frenet
        .n
        .scale_jet(&c)
        .add(&lateral.scale_jet(&root.scale(branch.sign())));
    Ok(NormalField { w, branch })
}
