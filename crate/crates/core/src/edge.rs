//! Map-germ geometry of cuspidal edges: the factored normal part `phi`,
//! fundamental forms, adapted coordinates, the invariant suite along the
//! singular curve, and intrinsic (Kossowski) metric data.

use crate::curve::{frenet_apparatus, FrenetData, SpaceCurveJet};
use crate::error::{Error, Result};
use crate::jet::{det3, Jet1, Jet2, JetVec3, UNIT_TOL};

/// Residual tolerance for the adapted-coordinate conditions along `v = 0`.
pub const ADAPT_TOL: f64 = 1e-7;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CoordinateStatus {
    Raw,
    Adapted,
}

/// A map germ `(R^2, 0) -> (R^3, 0)` whose singular set is the `u`-axis.
#[derive(Clone, Debug)]
pub struct MapGerm {
    pub f: JetVec3,
    pub status: CoordinateStatus,
}

impl MapGerm {
    pub fn raw(f: JetVec3) -> Self {
        Self { f, status: CoordinateStatus::Raw }
    }

    /// Wraps a germ that is claimed to be adapted, verifying the claim.
    pub fn adapted(f: JetVec3) -> Result<Self> {
        check_adapted(&f)?;
        Ok(Self { f, status: CoordinateStatus::Adapted })
    }
}

/// Common rectangular truncation of the three components.
pub fn germ_orders(f: &JetVec3) -> (usize, usize) {
    (
        f.0.iter().map(|c| c.u_order()).min().unwrap(),
        f.0.iter().map(|c| c.v_order()).min().unwrap(),
    )
}

/// A source coordinate change `(u, v) = (xi(u', v'), eta(u', v'))`.
#[derive(Clone, Debug)]
pub struct CoordinateChange {
    pub xi: Jet2,
    pub eta: Jet2,
}

impl CoordinateChange {
    pub fn identity(u_order: usize, v_order: usize) -> Self {
        Self {
            xi: Jet2::var_u(u_order, v_order),
            eta: Jet2::var_v(u_order, v_order),
        }
    }

    /// Substitutes the change into a germ.
    pub fn apply(&self, f: &JetVec3) -> Result<JetVec3> {
        f.try_map(|c| c.compose(&self.xi, &self.eta))
    }

    /// The change "first `next`, then `self`" as a single substitution.
    pub fn then(&self, next: &CoordinateChange) -> Result<Self> {
        Ok(Self {
            xi: self.xi.compose(&next.xi, &next.eta)?,
            eta: self.eta.compose(&next.xi, &next.eta)?,
        })
    }
}

/// The factored `v`-derivative: the unique `phi` with `f_v = v phi`.
///
/// Fails when `f_v` does not vanish along the `u`-axis, i.e. when the
/// singular set of the germ is not the axis.
pub fn extract_phi(f: &JetVec3) -> Result<JetVec3> {
    f.derive_v()?.try_map(|c| c.div_exact_v())
}

/// The unit normal `nu = (f_u x phi) / |f_u x phi|`, smooth across the
/// edge because `phi` is.
pub fn unit_normal(f: &JetVec3) -> Result<JetVec3> {
    let cr = f.derive_u()?.cross(&extract_phi(f)?);
    let n2 = cr.norm_sq();
    if n2.coeff(0, 0) <= UNIT_TOL {
        return Err(Error::DegenerateEdge("f_u and phi are parallel at the origin"));
    }
    Ok(cr.scale_jet(&n2.sqrt()?.recip()?))
}

/// First fundamental form coefficients `E, F, G` of a germ.
#[derive(Clone, Debug)]
pub struct FundForm {
    pub e: Jet2,
    pub f: Jet2,
    pub g: Jet2,
}

pub fn first_fundamental_form(f: &JetVec3) -> Result<FundForm> {
    let fu = f.derive_u()?;
    let fv = f.derive_v()?;
    Ok(FundForm {
        e: fu.dot(&fu),
        f: fu.dot(&fv),
        g: fv.dot(&fv),
    })
}

/// Largest residual of the adapted-coordinate conditions along `v = 0`:
/// `|f_u| = 1`, `f_u . phi = 0`, `|phi| = 1`.
pub fn adaptedness_deviation(f: &JetVec3) -> Result<f64> {
    let fu = f.derive_u()?;
    let phi = extract_phi(f)?;
    let d_unit = fu.dot(&fu).restrict_v0().add_constant(-1.0).max_abs();
    let d_orth = fu.dot(&phi).restrict_v0().max_abs();
    let d_phi = phi.dot(&phi).restrict_v0().add_constant(-1.0).max_abs();
    Ok(d_unit.max(d_orth).max(d_phi))
}

pub fn check_adapted(f: &JetVec3) -> Result<()> {
    let dev = adaptedness_deviation(f)?;
    if dev > ADAPT_TOL {
        return Err(Error::NotAdapted(dev));
    }
    Ok(())
}

/// Brings a germ into adapted coordinates by four successive source
/// changes, returning the adapted germ together with the composite change
/// (so `change.apply(original) = adapted`):
///
/// 1. a null shear `u -> u - c(u) v` absorbing the kernel direction of
///    `df` along the axis into the `v`-lines;
/// 2. the arclength reparametrization of the edge curve `u -> f(u, 0)`;
/// 3. a quadratic shear `u -> u + q(u) v^2` making `phi` orthogonal to
///    `f_u` along the axis;
/// 4. a fiber scaling `v -> a(u) v` normalizing `|phi|` to 1 there.
pub fn adapt_germ(f: &JetVec3) -> Result<(MapGerm, CoordinateChange)> {
    let (uo, vo) = germ_orders(f);
    let mut g = f.clone();
    let mut change = CoordinateChange::identity(uo, vo);

    let step = |g: &JetVec3, ch: &CoordinateChange, s: CoordinateChange| {
        Ok::<_, Error>((s.apply(g)?, ch.then(&s)?))
    };

    // 1. null shear
    let fu = g.derive_u()?;
    let e_axis = fu.dot(&fu).restrict_v0();
    if e_axis.coeff(0) <= UNIT_TOL {
        return Err(Error::DegenerateEdge("edge curve has vanishing speed at 0"));
    }
    let c = g.derive_v()?.dot(&fu).restrict_v0().div_unit(&e_axis)?;
    let shear = CoordinateChange {
        xi: Jet2::var_u(uo, vo).sub(&Jet2::embed_u(&c, vo).mul_v()),
        eta: Jet2::var_v(uo, vo),
    };
    (g, change) = step(&g, &change, shear)?;
    // fails here if the kernel direction did not account for all of f_v on
    // the axis, i.e. the germ is not singular along it
    let _ = extract_phi(&g)?;

    // 2. arclength along the edge
    let speed2 = g.derive_u()?.dot(&g.derive_u()?).restrict_v0();
    let u_of_s = speed2.sqrt()?.integrate().reversion()?;
    let reparam = CoordinateChange {
        xi: Jet2::embed_u(&u_of_s, vo),
        eta: Jet2::var_v(uo, vo),
    };
    (g, change) = step(&g, &change, reparam)?;

    // 3. quadratic shear
    let fu = g.derive_u()?;
    let e_axis = fu.dot(&fu).restrict_v0();
    let q = extract_phi(&g)?
        .dot(&fu)
        .restrict_v0()
        .div_unit(&e_axis)?
        .scale(-0.5);
    let (guo, gvo) = germ_orders(&g);
    let qshear = CoordinateChange {
        xi: Jet2::var_u(guo, gvo).add(&Jet2::embed_u(&q, gvo).mul_v().mul_v()),
        eta: Jet2::var_v(guo, gvo),
    };
    (g, change) = step(&g, &change, qshear)?;

    // 4. fiber scaling
    let phi = extract_phi(&g)?;
    let m = phi.dot(&phi).restrict_v0();
    if m.coeff(0) <= UNIT_TOL {
        return Err(Error::DegenerateEdge("phi vanishes at the origin"));
    }
    let a = m.sqrt()?.sqrt()?.recip()?;
    let (guo, gvo) = germ_orders(&g);
    let scale = CoordinateChange {
        xi: Jet2::var_u(guo, gvo),
        eta: Jet2::embed_u(&a, gvo).mul_v(),
    };
    (g, change) = step(&g, &change, scale)?;

    Ok((MapGerm::adapted(g)?, change))
}

/// Negates every coefficient of odd `u`-degree, i.e. substitutes
/// `u -> -u`. The flip preserves adaptedness and reverses the sign of
/// `kappa_nu` and `kappa_c`.
pub fn flip_u(f: &JetVec3) -> JetVec3 {
    f.map(|c| {
        let mut out = c.clone();
        for i in (1..=c.u_order()).step_by(2) {
            for j in 0..=c.v_order() {
                out.set_coeff(i, j, -c.coeff(i, j));
            }
        }
        out
    })
}

/// The edge curve `u -> f(u, 0)`.
pub fn edge_curve(f: &JetVec3) -> SpaceCurveJet {
    SpaceCurveJet::new(
        f.x().restrict_v0(),
        f.y().restrict_v0(),
        f.z().restrict_v0(),
    )
}

/// The invariants of an adapted germ along its singular curve.
///
/// With `{f_u, phi, nu}` orthonormal along the axis the edge curve
/// decomposes as `gamma'' = kappa_s phi + kappa_nu nu`, so
/// `kappa^2 = kappa_s^2 + kappa_nu^2` holds serieswise.
#[derive(Clone, Debug)]
pub struct EdgeInvariants {
    pub gamma: SpaceCurveJet,
    /// singular curvature `phi . gamma''`
    pub kappa_s: Jet1,
    /// limiting normal curvature `det(f_u, phi, f_uu)` along the axis
    pub kappa_nu: Jet1,
    /// cuspidal curvature `det(f_u, f_vv, f_vvv)` along the axis
    pub kappa_c: Jet1,
    /// Frenet data of the edge curve; absent when its curvature vanishes
    /// at the origin (then torsion is undefined)
    pub frenet: Option<FrenetData>,
}

impl EdgeInvariants {
    pub fn kappa(&self) -> Option<&Jet1> {
        self.frenet.as_ref().map(|f| &f.kappa)
    }

    pub fn tau(&self) -> Option<&Jet1> {
        self.frenet.as_ref().map(|f| &f.tau)
    }

    /// `|kappa_nu(0)|` bounded away from zero: the edge is a generic germ.
    pub fn is_generic(&self, tol: f64) -> bool {
        self.kappa_nu.coeff(0).abs() > tol
    }

    /// `|kappa_c(0)|` bounded away from zero: the germ is a cuspidal edge
    /// rather than a degenerate frontal singularity.
    pub fn is_cuspidal_edge(&self, tol: f64) -> bool {
        self.kappa_c.coeff(0).abs() > tol
    }
}

pub fn edge_invariants(f: &JetVec3) -> Result<EdgeInvariants> {
    check_adapted(f)?;
    let fu = f.derive_u()?;
    let fuu = fu.derive_u()?;
    let phi = extract_phi(f)?;
    let phi_v = phi.derive_v()?;

    let kappa_s = phi.dot(&fuu).restrict_v0();
    let kappa_nu = det3(&fu, &phi, &fuu).restrict_v0();
    // f_vv = phi + v phi_v and f_vvv = 2 phi_v + v phi_vv along the axis
    let kappa_c = det3(&fu, &phi, &phi_v).restrict_v0().scale(2.0);

    let gamma = edge_curve(f).certify_arclength(ADAPT_TOL)?;
    let frenet = match frenet_apparatus(&gamma) {
        Ok(fr) => Some(fr),
        Err(Error::DegenerateCurve(_)) => None,
        Err(e) => return Err(e),
    };

    Ok(EdgeInvariants { gamma, kappa_s, kappa_nu, kappa_c, frenet })
}

/// Intrinsic singular curvature of a Kossowski metric along `v = 0`:
///
/// `kappa_s = (-F_v E_u + 2 E F_uv - E E_vv) / (2 E^{3/2} lambda_v)`
///
/// where `lambda` is the signed area density (vanishing on the axis).
pub fn kappa_s_from_metric(e: &Jet2, f: &Jet2, g: &Jet2, lambda: &Jet2) -> Result<Jet1> {
    let _ = g; // the restriction to the axis does not involve G directly
    let e_u = e.derive_u()?;
    let f_v = f.derive_v()?;
    let f_uv = f.derive_u()?.derive_v()?;
    let e_vv = e.derive_v()?.derive_v()?;
    let num = f_v
        .mul(&e_u)
        .neg()
        .add(&e.mul(&f_uv).scale(2.0))
        .sub(&e.mul(&e_vv));
    let den = e.mul(&e.sqrt()?).scale(2.0).mul(&lambda.derive_v()?);
    num.restrict_v0().div_unit(&den.restrict_v0())
}

/// Intrinsic data of a Kossowski metric in the normal form
/// `ds^2 = (1 + v^2 E0) du^2 + v^2 G0 dv^2`.
#[derive(Clone, Debug)]
pub struct KossowskiMetric {
    pub e0: Jet2,
    pub g0: Jet2,
}

impl KossowskiMetric {
    pub fn new(e0: Jet2, g0: Jet2) -> Result<Self> {
        if g0.coeff(0, 0) <= UNIT_TOL {
            return Err(Error::InvalidMetric("G0 must be positive at the origin"));
        }
        Ok(Self { e0, g0 })
    }

    /// `E = 1 + v^2 E0`
    pub fn e(&self) -> Jet2 {
        self.e0.mul_v().mul_v().add_constant(1.0)
    }

    /// `G = v^2 G0`
    pub fn g(&self) -> Jet2 {
        self.g0.mul_v().mul_v()
    }

    /// `lambda = v sqrt(E G0)`, the signed area density.
    pub fn lambda(&self) -> Result<Jet2> {
        Ok(self.e().mul(&self.g0).sqrt()?.mul_v())
    }

    /// For the normal form the general expression collapses to
    /// `-E0(u, 0) / sqrt(G0(u, 0))`.
    pub fn kappa_s_intrinsic(&self) -> Result<Jet1> {
        let (uo, vo) = (self.e0.u_order(), self.e0.v_order());
        kappa_s_from_metric(
            &self.e(),
            &Jet2::zero(uo, vo),
            &self.g(),
            &self.lambda()?,
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::test_support::{cos_series, sin_series};

    fn worked_example_germ(uo: usize, vo: usize) -> JetVec3 {
        // f = (u, -v^2/2 + u^3/6, u^2/2 + u^3/6 + v^3/6)
        JetVec3([
            Jet2::from_terms(uo, vo, &[(1, 0, 1.0)]),
            Jet2::from_terms(uo, vo, &[(0, 2, -0.5), (3, 0, 1.0 / 6.0)]),
            Jet2::from_terms(uo, vo, &[(2, 0, 0.5), (3, 0, 1.0 / 6.0), (0, 3, 1.0 / 6.0)]),
        ])
    }

    /// Rotated circle of cusps: adapted, with constant invariants
    /// kappa_s = cos(alpha), kappa_nu = -sin(alpha), kappa_c = cos(alpha).
    fn tilted_circle_germ(alpha: f64, uo: usize, vo: usize) -> JetVec3 {
        let (s, c) = alpha.sin_cos();
        let cosu = Jet2::embed_u(&cos_series(uo), vo);
        let sinu = Jet2::embed_u(&sin_series(uo), vo);
        let r = Jet2::from_terms(uo, vo, &[(0, 0, 1.0), (0, 2, -c / 2.0)]);
        JetVec3([
            r.mul(&cosu),
            r.mul(&sinu),
            Jet2::from_terms(uo, vo, &[(0, 2, s / 2.0), (0, 3, 1.0 / 6.0)]),
        ])
    }

    #[test]
    fn phi_of_explicit_germ() {
        let f = worked_example_germ(5, 4);
        let phi = extract_phi(&f).unwrap();
        assert!(phi.x().max_abs() < 1e-15);
        assert!(phi.y().add_constant(1.0).max_abs() < 1e-15);
        let expect_z = Jet2::from_terms(5, 3, &[(0, 1, 0.5)]);
        assert!(phi.z().sub(&expect_z).max_abs() < 1e-15);
    }

    #[test]
    fn immersion_is_rejected() {
        let f = JetVec3([
            Jet2::from_terms(3, 3, &[(1, 0, 1.0)]),
            Jet2::from_terms(3, 3, &[(0, 1, 1.0)]),
            Jet2::zero(3, 3),
        ]);
        assert!(matches!(extract_phi(&f), Err(Error::NotDivisible(_))));
        // and adaptation cannot repair it either
        assert!(adapt_germ(&f).is_err());
    }

    #[test]
    fn standard_cusp_is_cuspidal_but_not_generic() {
        // f = (u, v^2/2, v^3/6): a cylinder over the standard cusp
        let f = JetVec3([
            Jet2::from_terms(6, 4, &[(1, 0, 1.0)]),
            Jet2::from_terms(6, 4, &[(0, 2, 0.5)]),
            Jet2::from_terms(6, 4, &[(0, 3, 1.0 / 6.0)]),
        ]);
        let inv = edge_invariants(&f).unwrap();
        assert!(inv.kappa_nu.max_abs() < 1e-14);
        assert!(inv.kappa_s.max_abs() < 1e-14);
        assert!(inv.kappa_c.add_constant(-1.0).max_abs() < 1e-14);
        assert!(!inv.is_generic(1e-9));
        assert!(inv.is_cuspidal_edge(1e-9));
        assert!(inv.frenet.is_none());
    }

    #[test]
    fn tilted_circle_invariants() {
        let alpha = std::f64::consts::FRAC_PI_3;
        let f = tilted_circle_germ(alpha, 10, 6);
        assert!(adaptedness_deviation(&f).unwrap() < 1e-14);
        let inv = edge_invariants(&f).unwrap();
        let n = 6;
        assert!(inv.kappa_s.truncate(n).add_constant(-alpha.cos()).max_abs() < 1e-12);
        assert!(inv.kappa_nu.truncate(n).add_constant(alpha.sin()).max_abs() < 1e-12);
        assert!(inv.kappa_c.truncate(n).add_constant(-alpha.cos()).max_abs() < 1e-12);
        let fr = inv.frenet.as_ref().unwrap();
        assert!(fr.kappa.truncate(n).add_constant(-1.0).max_abs() < 1e-10);
        assert!(fr.tau.truncate(n).max_abs() < 1e-10);
        // kappa^2 = kappa_s^2 + kappa_nu^2 serieswise
        let lhs = fr.kappa.mul(&fr.kappa).truncate(n);
        let rhs = inv
            .kappa_s
            .mul(&inv.kappa_s)
            .add(&inv.kappa_nu.mul(&inv.kappa_nu))
            .truncate(n);
        assert!(lhs.sub(&rhs).max_abs() < 1e-10);
    }

    #[test]
    fn unit_normal_is_unit_and_orthogonal() {
        let f = tilted_circle_germ(0.7, 8, 5);
        let nu = unit_normal(&f).unwrap();
        assert!(nu.norm_sq().add_constant(-1.0).max_dev_up_to(&Jet2::zero(8, 5), 5) < 1e-10);
        let fu = f.derive_u().unwrap();
        assert!(nu.dot(&fu).max_dev_up_to(&Jet2::zero(8, 5), 5) < 1e-10);
    }

    #[test]
    fn adaptation_recovers_invariants() {
        let alpha = std::f64::consts::FRAC_PI_3;
        let g = tilted_circle_germ(alpha, 12, 6);
        // hide the adapted structure behind a messy source change
        let messy = CoordinateChange {
            xi: Jet2::from_terms(12, 6, &[(1, 0, 1.0), (0, 1, 0.3), (2, 0, 0.1)]),
            eta: Jet2::from_terms(12, 6, &[(0, 1, 1.0), (1, 1, 0.2)]),
        };
        let f = messy.apply(&g).unwrap();
        // the shear leaves a v-linear term, so f is not even phi-factorable
        assert!(check_adapted(&f).is_err());

        let (adapted, change) = adapt_germ(&f).unwrap();
        assert_eq!(adapted.status, CoordinateStatus::Adapted);
        let inv = edge_invariants(&adapted.f).unwrap();
        assert!((inv.kappa_s.coeff(0) - alpha.cos()).abs() < 1e-8);
        assert!((inv.kappa_nu.coeff(0) + alpha.sin()).abs() < 1e-8);
        assert!((inv.kappa_c.coeff(0) - alpha.cos()).abs() < 1e-8);

        // the reported change reproduces the adapted germ from the input
        let redo = change.apply(&f).unwrap();
        for k in 0..3 {
            assert!(redo.0[k].max_dev_up_to(&adapted.f.0[k], 5) < 1e-10);
        }
    }

    #[test]
    fn u_flip_reverses_kappa_nu_and_kappa_c() {
        let f = tilted_circle_germ(0.9, 10, 6);
        let inv = edge_invariants(&f).unwrap();
        let flipped = flip_u(&f);
        let inv_f = edge_invariants(&flipped).unwrap();
        assert!((inv_f.kappa_nu.coeff(0) + inv.kappa_nu.coeff(0)).abs() < 1e-12);
        assert!((inv_f.kappa_c.coeff(0) + inv.kappa_c.coeff(0)).abs() < 1e-12);
        assert!((inv_f.kappa_s.coeff(0) - inv.kappa_s.coeff(0)).abs() < 1e-12);
    }

    #[test]
    fn intrinsic_kappa_s_of_normal_form() {
        // E = 1 + e0 v^2, G = v^2: kappa_s = -e0
        let e0 = 0.75;
        let m = KossowskiMetric::new(
            Jet2::constant(e0, 6, 6),
            Jet2::constant(1.0, 6, 6),
        )
        .unwrap();
        let ks = m.kappa_s_intrinsic().unwrap();
        assert!(ks.add_constant(e0).max_abs() < 1e-12);

        // non-constant data against the closed form -E0(u,0)/sqrt(G0(u,0))
        let e0j = Jet2::from_terms(6, 6, &[(0, 0, 0.5), (1, 0, -0.3), (2, 0, 0.1), (0, 1, 0.4)]);
        let g0j = Jet2::from_terms(6, 6, &[(0, 0, 2.0), (1, 0, 0.6), (0, 1, -0.2)]);
        let m = KossowskiMetric::new(e0j.clone(), g0j.clone()).unwrap();
        let ks = m.kappa_s_intrinsic().unwrap();
        let expect = e0j
            .restrict_v0()
            .neg()
            .div_unit(&g0j.restrict_v0().sqrt().unwrap())
            .unwrap();
        assert!(ks.truncate(4).sub(&expect.truncate(4)).max_abs() < 1e-11);

        assert!(matches!(
            KossowskiMetric::new(Jet2::zero(2, 2), Jet2::zero(2, 2)),
            Err(Error::InvalidMetric(_))
        ));
    }
}
