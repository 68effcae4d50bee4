//! Theorem-level constructions on top of the Cauchy solver: deformation of
//! a cuspidal edge to a prescribed boundary curve, the isomer, the planar
//! normalization family, the curvature-moving family, metric realization,
//! and isometry verification.
//!
//! All constructions adapt the input first and report results in adapted
//! coordinates; the substitution returned by [`adapt_germ`] lets callers
//! pull results back if they need the original gauge.

use crate::curve::{
    curve_from_curvature_torsion, frenet_apparatus, initial_normal_field, Branch, SeriesVec3,
    SpaceCurveJet,
};
use crate::edge::{
    adapt_germ, edge_invariants, first_fundamental_form, flip_u, EdgeInvariants, KossowskiMetric,
    MapGerm,
};
use crate::error::{Error, Result};
use crate::jet::{Jet1, Jet2, JetVec3, UNIT_TOL};
use crate::solver::{build_rhs_from_germ, build_rhs_from_metric, ck_solve, residual};

/// Acceptance thresholds for a returned deformation.
pub const I_FORM_TOL: f64 = 1e-7;
pub const PRODUCT_TOL: f64 = 1e-6;
pub const BOUNDARY_TOL: f64 = 1e-8;
pub const KAPPA_S_TOL: f64 = 1e-7;

/// Deviations between a deformation output and what the theorems promise.
///
/// `product_dev` compares the intrinsic product `kappa_c kappa_nu` up to a
/// global sign (only its absolute value is invariant under orientation
/// flips).
#[derive(Clone, Copy, Debug)]
pub struct VerificationReport {
    /// total degree up to which series were compared
    pub compared_degree: usize,
    pub i_form_dev: f64,
    pub product_dev: f64,
    pub boundary_dev: f64,
    pub kappa_s_dev: f64,
    pub residual: f64,
    pub passed: bool,
}

#[derive(Clone, Debug)]
pub struct DeformationResult {
    pub germ: MapGerm,
    pub branch: Branch,
    pub source_invariants: EdgeInvariants,
    pub result_invariants: EdgeInvariants,
    pub verification: VerificationReport,
}

/// `kappa_c kappa_nu` of an invariant set, truncated to `n`.
fn product_series(inv: &EdgeInvariants, n: usize) -> Jet1 {
    inv.kappa_c.mul(&inv.kappa_nu).truncate(n)
}

fn dev_up_to_sign(a: &Jet1, b: &Jet1) -> f64 {
    a.sub(b).max_abs().min(a.add(b).max_abs())
}

fn i_form_deviation(f: &JetVec3, g: &JetVec3, degree: usize) -> Result<f64> {
    let ff = first_fundamental_form(f)?;
    let fg = first_fundamental_form(g)?;
    Ok(ff
        .e
        .max_dev_up_to(&fg.e, degree)
        .max(ff.f.max_dev_up_to(&fg.f, degree))
        .max(ff.g.max_dev_up_to(&fg.g, degree)))
}

fn boundary_deviation(g: &JetVec3, sigma: &SpaceCurveJet, degree: usize) -> f64 {
    let b = SeriesVec3([
        g.x().restrict_v0(),
        g.y().restrict_v0(),
        g.z().restrict_v0(),
    ]);
    b.sub(&sigma.as_vec()).truncate(degree).max_abs()
}

/// Solves Theorem A: the unique germ (per branch) isometric to `f` whose
/// singular image is `sigma`.
///
/// The input is adapted first; when its limiting normal curvature is
/// negative at the origin the whole problem is conjugated by the
/// orientation flip `u -> -u` (which makes `kappa_nu(0) > 0`, the gauge in
/// which the two branches are labeled) and the solution flipped back.
/// With `sigma` the edge curve of `f` itself, branch `+` returns `f` and
/// branch `-` its isomer.
pub fn deform_to_curve(
    f: &JetVec3,
    sigma: &SpaceCurveJet,
    branch: Branch,
) -> Result<DeformationResult> {
    if !sigma.arclength_certified {
        return Err(Error::DegenerateCurve("target curve must be arclength certified"));
    }
    let (adapted, _) = adapt_germ(f)?;
    let src_inv = edge_invariants(&adapted.f)?;
    if !src_inv.is_generic(UNIT_TOL) {
        return Err(Error::GenericityViolated(
            "limiting normal curvature vanishes at the origin",
        ));
    }
    if !src_inv.is_cuspidal_edge(UNIT_TOL) {
        return Err(Error::DegenerateEdge("cuspidal curvature vanishes at the origin"));
    }

    let flip = src_inv.kappa_nu.coeff(0) < 0.0;
    let (work_f, work_sigma) = if flip {
        (flip_u(&adapted.f), sigma.reverse_parameter())
    } else {
        (adapted.f.clone(), sigma.clone())
    };
    let work_inv = edge_invariants(&work_f)?;

    let fr = frenet_apparatus(&work_sigma)?;
    let kappa0 = fr.kappa.coeff(0);
    let ks0 = work_inv.kappa_s.coeff(0);
    if kappa0 <= ks0.abs() + UNIT_TOL {
        return Err(Error::CurvatureTooSmall { kappa: kappa0, kappa_s: ks0 });
    }

    let field = initial_normal_field(&work_sigma, &fr, &work_inv.kappa_s, branch)?;
    let rhs = build_rhs_from_germ(&work_f)?;
    let (uo, vo) = crate::edge::germ_orders(&work_f);
    let sol = ck_solve(&rhs, &work_sigma, &field.w, vo, uo)?;
    let res = residual(&sol.g, &sol.psi, &rhs)?.max();

    let g = if flip { flip_u(&sol.g) } else { sol.g };
    let out_inv = edge_invariants(&g)?;

    let degree = g
        .x()
        .valid_total()
        .min(adapted.f.x().valid_total())
        .saturating_sub(1);
    let i_form_dev = i_form_deviation(&adapted.f, &g, degree)?;
    let product_dev = dev_up_to_sign(
        &product_series(&src_inv, degree),
        &product_series(&out_inv, degree),
    );
    let boundary_dev = boundary_deviation(&g, sigma, degree);
    let kappa_s_dev = src_inv
        .kappa_s
        .truncate(degree)
        .sub(&out_inv.kappa_s.truncate(degree))
        .max_abs();
    let verification = VerificationReport {
        compared_degree: degree,
        i_form_dev,
        product_dev,
        boundary_dev,
        kappa_s_dev,
        residual: res,
        passed: i_form_dev <= I_FORM_TOL
            && product_dev <= PRODUCT_TOL
            && boundary_dev <= BOUNDARY_TOL
            && kappa_s_dev <= KAPPA_S_TOL,
    };

    Ok(DeformationResult {
        germ: MapGerm::adapted(g)?,
        branch,
        source_invariants: src_inv,
        result_invariants: out_inv,
        verification,
    })
}

/// The isomer: the second germ sharing the fundamental form and singular
/// image of `f`. Applying it twice returns (the adapted form of) `f`.
pub fn isomer(f: &JetVec3) -> Result<DeformationResult> {
    let (adapted, _) = adapt_germ(f)?;
    let inv = edge_invariants(&adapted.f)?;
    deform_to_curve(&adapted.f, &inv.gamma, Branch::Minus)
}

/// Curvature law for a one-parameter family of boundary curves.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum CurvatureLaw {
    /// `(kappa + s, tau)`: moves the limiting normal curvature
    AddToKappa,
    /// `(kappa, (1 - s) tau)`: flattens torsion, planar at `s = 1`
    ScaleTorsion,
}

#[derive(Clone, Debug)]
pub struct FamilySpec {
    pub law: CurvatureLaw,
    pub s_values: Vec<f64>,
}

impl FamilySpec {
    pub fn grid(law: CurvatureLaw, from: f64, to: f64, count: usize) -> Self {
        assert!(count >= 2);
        let step = (to - from) / (count - 1) as f64;
        Self {
            law,
            s_values: (0..count).map(|k| from + step * k as f64).collect(),
        }
    }
}

/// Solves the family: for each `s` the boundary curve is rebuilt from the
/// modified curvature/torsion with the original initial frame, so `s = 0`
/// reproduces the edge curve of `f` exactly.
pub fn deform_family(
    f: &JetVec3,
    branch: Branch,
    spec: &FamilySpec,
) -> Result<Vec<(f64, DeformationResult)>> {
    let (adapted, _) = adapt_germ(f)?;
    let inv = edge_invariants(&adapted.f)?;
    let fr = inv
        .frenet
        .as_ref()
        .ok_or(Error::DegenerateCurve("edge curve has vanishing curvature"))?;
    let frame0 = fr.frame_at_zero();
    let p0 = inv.gamma.point_at_zero();

    let mut out = Vec::with_capacity(spec.s_values.len());
    for &s in &spec.s_values {
        let (kappa, tau) = match spec.law {
            CurvatureLaw::AddToKappa => (fr.kappa.add_constant(s), fr.tau.clone()),
            CurvatureLaw::ScaleTorsion => (fr.kappa.clone(), fr.tau.scale(1.0 - s)),
        };
        if kappa.coeff(0) <= UNIT_TOL {
            return Err(Error::CurvatureTooSmall {
                kappa: kappa.coeff(0),
                kappa_s: inv.kappa_s.coeff(0),
            });
        }
        let sigma = curve_from_curvature_torsion(&kappa, &tau, frame0, p0)?;
        out.push((s, deform_to_curve(&adapted.f, &sigma, branch)?));
    }
    Ok(out)
}

/// Corollary-C family: boundary torsion scaled to `(1 - s) tau`; at
/// `s = 1` the deformed edge lies on a planar curve.
pub fn planar_normalization(
    f: &JetVec3,
    branch: Branch,
    s_values: Vec<f64>,
) -> Result<Vec<(f64, DeformationResult)>> {
    deform_family(f, branch, &FamilySpec { law: CurvatureLaw::ScaleTorsion, s_values })
}

/// Corollary-B family: boundary curvature moved to `kappa + s`, which
/// moves `|kappa_nu|` to `sqrt((kappa + s)^2 - kappa_s^2)` along the edge.
pub fn kappa_nu_family(
    f: &JetVec3,
    s_values: Vec<f64>,
) -> Result<Vec<(f64, DeformationResult)>> {
    deform_family(f, Branch::Plus, &FamilySpec { law: CurvatureLaw::AddToKappa, s_values })
}

/// Realizes a Kossowski metric as a cuspidal edge over a prescribed
/// arclength boundary curve (one germ per branch; the two are mirror
/// images).
pub fn realize_metric(
    m: &KossowskiMetric,
    sigma: &SpaceCurveJet,
    branch: Branch,
    v_order: usize,
    u_order: usize,
) -> Result<(MapGerm, VerificationReport)> {
    let fr = frenet_apparatus(sigma)?;
    let ks = m.kappa_s_intrinsic()?;
    let kappa0 = fr.kappa.coeff(0);
    if kappa0 <= ks.coeff(0).abs() + UNIT_TOL {
        return Err(Error::CurvatureTooSmall { kappa: kappa0, kappa_s: ks.coeff(0) });
    }
    let field = initial_normal_field(sigma, &fr, &ks, branch)?;
    // |psi(u,0)|^2 must equal G0(u,0), so scale the unit field
    let scale = m.g0.restrict_v0().sqrt()?;
    let psi0 = field.w.scale_jet(&scale);

    let rhs = build_rhs_from_metric(m)?;
    let sol = ck_solve(&rhs, sigma, &psi0, v_order, u_order)?;
    let res = residual(&sol.g, &sol.psi, &rhs)?.max();

    let out_inv = edge_invariants(&sol.g)?;
    let degree = sol.g.x().valid_total().saturating_sub(1);
    let ff = first_fundamental_form(&sol.g)?;
    let i_form_dev = ff
        .e
        .max_dev_up_to(&m.e(), degree)
        .max(ff.f.max_dev_up_to(&Jet2::zero(u_order, v_order), degree))
        .max(ff.g.max_dev_up_to(&m.g(), degree));
    let kappa_s_dev = out_inv
        .kappa_s
        .truncate(degree.min(ks.order()))
        .sub(&ks.truncate(degree))
        .max_abs();
    let boundary_dev = boundary_deviation(&sol.g, sigma, degree);
    let report = VerificationReport {
        compared_degree: degree,
        i_form_dev,
        product_dev: 0.0,
        boundary_dev,
        kappa_s_dev,
        residual: res,
        passed: i_form_dev <= I_FORM_TOL
            && boundary_dev <= BOUNDARY_TOL
            && kappa_s_dev <= KAPPA_S_TOL,
    };
    Ok((MapGerm::adapted(sol.g)?, report))
}

/// Report of [`verify_isometry`].
#[derive(Clone, Copy, Debug)]
pub struct IsometryReport {
    pub compared_degree: usize,
    pub e_dev: f64,
    pub f_dev: f64,
    pub g_dev: f64,
    pub product_dev: f64,
    pub boundary_dev: f64,
}

impl IsometryReport {
    pub fn i_form_dev(&self) -> f64 {
        self.e_dev.max(self.f_dev).max(self.g_dev)
    }
}

/// Compares the fundamental forms of two germs sharing domain coordinates,
/// the intrinsic product `kappa_c kappa_nu` (up to sign), and their
/// boundary curves.
pub fn verify_isometry(f: &JetVec3, g: &JetVec3, max_degree: usize) -> Result<IsometryReport> {
    let ff = first_fundamental_form(f)?;
    let fg = first_fundamental_form(g)?;
    let degree = max_degree
        .min(ff.e.valid_total())
        .min(fg.e.valid_total());
    let e_dev = ff.e.max_dev_up_to(&fg.e, degree);
    let f_dev = ff.f.max_dev_up_to(&fg.f, degree);
    let g_dev = ff.g.max_dev_up_to(&fg.g, degree);

    let product_dev = match (edge_invariants(f), edge_invariants(g)) {
        (Ok(a), Ok(b)) => dev_up_to_sign(
            &product_series(&a, degree),
            &product_series(&b, degree),
        ),
        // one of the germs is not adapted: the product is gauge-dependent
        // there, so it is not compared
        _ => 0.0,
    };
    let boundary_dev = {
        let bf = SeriesVec3([
            f.x().restrict_v0(),
            f.y().restrict_v0(),
            f.z().restrict_v0(),
        ]);
        let bg = SeriesVec3([
            g.x().restrict_v0(),
            g.y().restrict_v0(),
            g.z().restrict_v0(),
        ]);
        bf.sub(&bg).truncate(degree).max_abs()
    };
    Ok(IsometryReport { compared_degree: degree, e_dev, f_dev, g_dev, product_dev, boundary_dev })
}

/// Reflects the image of a germ across the plane through `p0` with unit
/// normal `n` (used to relate the two branches over a planar boundary).
pub fn reflect_germ(f: &JetVec3, p0: [f64; 3], n: [f64; 3]) -> JetVec3 {
    let nn = (n[0] * n[0] + n[1] * n[1] + n[2] * n[2]).sqrt();
    let n = [n[0] / nn, n[1] / nn, n[2] / nn];
    let (uo, vo) = crate::edge::germ_orders(f);
    // signed distance to the plane, as a jet
    let mut d = Jet2::constant(-(p0[0] * n[0] + p0[1] * n[1] + p0[2] * n[2]), uo, vo);
    for k in 0..3 {
        d = d.add(&f.0[k].scale(n[k]));
    }
    JetVec3(std::array::from_fn(|k| f.0[k].sub(&d.scale(2.0 * n[k]))))
}
