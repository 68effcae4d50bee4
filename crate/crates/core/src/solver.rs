//! Degree-by-degree Cauchy–Kovalevskaya recursion for the quasilinear
//! system
//!
//! ```text
//! (g_v, r_v, psi_v) = F(u, v; psi_u, (psi, g_u, r_u)),   r = g_u
//! ```
//!
//! whose solution is a map germ with prescribed first fundamental form and
//! boundary curve. The first two rows are `g_v = v psi` and `r_v = v psi_u`;
//! the third solves a 3x3 linear system whose matrix has rows
//! `(psi, g_u, r_u)` and whose right side is supplied by [`RhsData`]: either
//! from a source germ (reproduce its fundamental form) or from intrinsic
//! Kossowski metric data.
//!
//! Everything is graded by `v`-level with `Jet1`-in-`u` coefficients. Each
//! level consumes one `u`-derivative of the previous ones, so the certified
//! `u`-order decays by one per level; the `Jet1` order bookkeeping tracks
//! this automatically and the assembled `Jet2` is stamped with the certified
//! total degree `min_k (order_k + k)`.

use crate::curve::{det3, SeriesVec3, SpaceCurveJet};
use crate::edge::{check_adapted, extract_phi, KossowskiMetric};
use crate::error::{Error, Result};
use crate::jet::{Jet1, Jet2, JetVec3, UNIT_TOL};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RhsMode {
    Germ,
    Metric,
}

/// Precomputed source terms of the recursion.
///
/// Rows of the linear system for `psi_v` read
/// `A psi_v = (s1, s2, s3 + v (psi_u . psi_u))^T` with `A = (psi, g_u, r_u)`
/// as rows; `s1..s3` are the mode-dependent static parts.
#[derive(Clone, Debug)]
pub struct RhsData {
    pub mode: RhsMode,
    pub s1: Jet2,
    pub s2: Jet2,
    pub s3: Jet2,
}

/// Source terms from an adapted generic germ `f`:
/// `(phi_v . phi, phi_v . f_u, (phi . f_uu)_v - (v/2)(phi . phi)_uu)`.
pub fn build_rhs_from_germ(f: &JetVec3) -> Result<RhsData> {
    check_adapted(f)?;
    let fu = f.derive_u()?;
    let fuu = fu.derive_u()?;
    let phi = extract_phi(f)?;
    let phi_v = phi.derive_v()?;

    let kappa_nu0 = det3(
        &restrict_vec(&fu),
        &restrict_vec(&phi),
        &restrict_vec(&fuu),
    )
    .coeff(0);
    if kappa_nu0.abs() <= UNIT_TOL {
        return Err(Error::NonGeneric);
    }

    let s1 = phi_v.dot(&phi);
    let s2 = phi_v.dot(&fu);
    let s3 = phi
        .dot(&fuu)
        .derive_v()?
        .sub(&phi.dot(&phi).derive_u()?.derive_u()?.mul_v().scale(0.5));
    Ok(RhsData { mode: RhsMode::Germ, s1, s2, s3 })
}

/// Source terms from Kossowski normal-form data, with the 1/2
/// factor folded in:
/// `((G0)_v / 2, -v (G0)_u / 2, (-3 (E0)_v - v (E0)_vv - v (G0)_uu) / 2)`.
pub fn build_rhs_from_metric(m: &KossowskiMetric) -> Result<RhsData> {
    let s1 = m.g0.derive_v()?.scale(0.5);
    let s2 = m.g0.derive_u()?.mul_v().scale(-0.5);
    let s3 = m
        .e0
        .derive_v()?
        .scale(3.0)
        .add(&m.e0.derive_v()?.derive_v()?.mul_v())
        .add(&m.g0.derive_u()?.derive_u()?.mul_v())
        .scale(-0.5);
    Ok(RhsData { mode: RhsMode::Metric, s1, s2, s3 })
}

/// The `v^k` coefficient of a bivariate jet, as a `Jet1` in `u` certified
/// to whatever the total-degree budget leaves for this level.
fn v_level(a: &Jet2, k: usize, level: usize) -> Result<Jet1> {
    if a.valid_total() < k {
        return Err(Error::BudgetExhausted { level, needed: k });
    }
    let ord = a.u_order().min(a.valid_total() - k);
    Ok(Jet1::new((0..=ord).map(|i| a.coeff(i, k)).collect()))
}

fn restrict_vec(f: &JetVec3) -> SeriesVec3 {
    SeriesVec3([
        f.x().restrict_v0(),
        f.y().restrict_v0(),
        f.z().restrict_v0(),
    ])
}

fn budget(level: usize) -> impl Fn(Error) -> Error {
    move |e| match e {
        Error::ZeroBudget => Error::BudgetExhausted { level, needed: level + 1 },
        other => other,
    }
}

/// 3x3 matrix over the `Jet1` ring, rows indexed first.
struct Mat1 {
    rows: [[Jet1; 3]; 3],
}

impl Mat1 {
    fn from_row_vectors(r0: &SeriesVec3, r1: &SeriesVec3, r2: &SeriesVec3) -> Self {
        Self { rows: [r0.0.clone(), r1.0.clone(), r2.0.clone()] }
    }

    fn det(&self) -> Jet1 {
        let m = &self.rows;
        let c0 = m[1][1].mul(&m[2][2]).sub(&m[1][2].mul(&m[2][1]));
        let c1 = m[1][0].mul(&m[2][2]).sub(&m[1][2].mul(&m[2][0]));
        let c2 = m[1][0].mul(&m[2][1]).sub(&m[1][1].mul(&m[2][0]));
        m[0][0].mul(&c0).sub(&m[0][1].mul(&c1)).add(&m[0][2].mul(&c2))
    }

    /// Adjugate-based inverse; the caller has verified the determinant is a
    /// unit at the origin.
    fn inverse(&self, det: &Jet1) -> Result<Self> {
        let m = &self.rows;
        let cof = |i: usize, j: usize| -> Jet1 {
            let (r0, r1) = match i {
                0 => (1, 2),
                1 => (0, 2),
                _ => (0, 1),
            };
            let (c0, c1) = match j {
                0 => (1, 2),
                1 => (0, 2),
                _ => (0, 1),
            };
            let minor = m[r0][c0].mul(&m[r1][c1]).sub(&m[r0][c1].mul(&m[r1][c0]));
            if (i + j) % 2 == 0 {
                minor
            } else {
                minor.neg()
            }
        };
        let mut rows: Vec<[Jet1; 3]> = Vec::with_capacity(3);
        for i in 0..3 {
            rows.push(std::array::from_fn(|j| {
                cof(j, i).div_unit(det).expect("unit determinant checked by caller")
            }));
        }
        let r2 = rows.pop().unwrap();
        let r1 = rows.pop().unwrap();
        let r0 = rows.pop().unwrap();
        Ok(Self { rows: [r0, r1, r2] })
    }

    fn mul_vec(&self, b: &[Jet1; 3]) -> SeriesVec3 {
        SeriesVec3(std::array::from_fn(|i| {
            self.rows[i][0]
                .mul(&b[0])
                .add(&self.rows[i][1].mul(&b[1]))
                .add(&self.rows[i][2].mul(&b[2]))
        }))
    }
}

fn assemble(levels: &[SeriesVec3], u_order: usize, v_order: usize) -> JetVec3 {
    let mut valid = u_order + v_order;
    for (k, lvl) in levels.iter().enumerate() {
        valid = valid.min(lvl.order() + k);
    }
    JetVec3(std::array::from_fn(|c| {
        let mut out = Jet2::zero(u_order, v_order);
        for (k, lvl) in levels.iter().enumerate() {
            for i in 0..=lvl.0[c].order().min(u_order) {
                out.set_coeff(i, k, lvl.0[c].coeff(i));
            }
        }
        out.with_valid_total(valid)
    }))
}

/// Result of a solve: the germ `g` and the factored normal part `psi`
/// (`g_v = v psi`).
#[derive(Clone, Debug)]
pub struct CkSolution {
    pub g: JetVec3,
    pub psi: JetVec3,
}

/// Runs the recursion with initial data `g(u,0) = sigma(u)`,
/// `r(u,0) = sigma'(u)`, `psi(u,0) = psi0(u)` up to `v`-level `v_order`,
/// consuming `u`-coefficients up to degree `u_order`.
///
/// Level-by-level: the linear system `A x = b` for `x = psi_v` is expanded
/// in `v`-levels and solved by one adjugate inverse of the level-zero
/// matrix `A0 = (psi0, sigma', sigma'')` over the `Jet1` ring:
/// `x_k = A0^{-1} (b_k - sum_{i=1..k} A_i x_{k-i})`.
pub fn ck_solve(
    rhs: &RhsData,
    sigma: &SpaceCurveJet,
    psi0: &SeriesVec3,
    v_order: usize,
    u_order: usize,
) -> Result<CkSolution> {
    if !sigma.arclength_certified {
        return Err(Error::DegenerateCurve("solver requires an arclength boundary curve"));
    }
    let g0 = sigma.as_vec().truncate(u_order);
    let r0 = g0.derivative().map_err(budget(0))?;
    let sdd = r0.derivative().map_err(budget(0))?;
    let p0 = psi0.truncate(u_order);

    let a0 = Mat1::from_row_vectors(&p0, &r0, &sdd);
    let det = a0.det();
    // |sigma''(0)| is the curvature scale of the problem; below this the
    // osculating frame degenerates and the system is unsolvable
    let kappa0 = sdd.norm_sq().coeff(0).sqrt();
    if det.coeff(0).abs() < 1e-9 * kappa0.max(UNIT_TOL) {
        return Err(Error::MatrixSingular(det.coeff(0)));
    }
    let a0_inv = a0.inverse(&det)?;

    let mut psi_lvl = vec![p0];
    let mut g_lvl = vec![g0];
    let mut r_lvl = vec![r0];
    let mut x_lvl: Vec<SeriesVec3> = Vec::new();

    for k in 0..v_order {
        let ctx = budget(k + 1);
        let mut b = [
            v_level(&rhs.s1, k, k + 1)?,
            v_level(&rhs.s2, k, k + 1)?,
            v_level(&rhs.s3, k, k + 1)?,
        ];
        if k >= 1 {
            // the v (psi_u . psi_u) part of the third row
            for i in 0..k {
                let pi = psi_lvl[i].derivative().map_err(&ctx)?;
                let pj = psi_lvl[k - 1 - i].derivative().map_err(&ctx)?;
                b[2] = b[2].add(&pi.dot(&pj));
            }
        }
        for i in 1..=k {
            let rows = [
                psi_lvl[i].clone(),
                g_lvl[i].derivative().map_err(&ctx)?,
                r_lvl[i].derivative().map_err(&ctx)?,
            ];
            for (row, bc) in rows.iter().zip(b.iter_mut()) {
                *bc = bc.sub(&row.dot(&x_lvl[k - i]));
            }
        }
        let x = a0_inv.mul_vec(&b);
        psi_lvl.push(x.scale(1.0 / (k + 1) as f64));
        x_lvl.push(x);

        let g_next = if k == 0 {
            SeriesVec3::zero(g_lvl[0].order())
        } else {
            psi_lvl[k - 1].scale(1.0 / (k + 1) as f64)
        };
        r_lvl.push(g_next.derivative().map_err(&ctx)?);
        g_lvl.push(g_next);
    }

    Ok(CkSolution {
        g: assemble(&g_lvl, u_order, v_order),
        psi: assemble(&psi_lvl, u_order, v_order),
    })
}

/// Per-equation residuals of a candidate solution, as max coefficient
/// magnitudes over certified monomials.
#[derive(Clone, Copy, Debug)]
pub struct ResidualReport {
    /// `g_v - v psi`
    pub g_v: f64,
    /// `r_v - v psi_u`
    pub r_v: f64,
    /// `psi_v . psi - s1`
    pub row1: f64,
    /// `psi_v . g_u - s2`
    pub row2: f64,
    /// `psi_v . r_u - s3 - v (psi_u . psi_u)`
    pub row3: f64,
}

impl ResidualReport {
    pub fn max(&self) -> f64 {
        self.g_v.max(self.r_v).max(self.row1).max(self.row2).max(self.row3)
    }
}

pub fn residual(g: &JetVec3, psi: &JetVec3, rhs: &RhsData) -> Result<ResidualReport> {
    let gv = g.derive_v()?;
    let gu = g.derive_u()?;
    let rv = gu.derive_v()?;
    let ru = gu.derive_u()?;
    let psi_u = psi.derive_u()?;
    let psi_v = psi.derive_v()?;

    let d_gv = gv.sub(&psi.map(|c| c.mul_v())).max_abs();
    let d_rv = rv.sub(&psi_u.map(|c| c.mul_v())).max_abs();
    let d1 = psi_v.dot(psi).sub(&rhs.s1).max_abs();
    let d2 = psi_v.dot(&gu).sub(&rhs.s2).max_abs();
    let d3 = psi_v
        .dot(&ru)
        .sub(&rhs.s3)
        .sub(&psi_u.dot(&psi_u).mul_v())
        .max_abs();
    Ok(ResidualReport { g_v: d_gv, r_v: d_rv, row1: d1, row2: d2, row3: d3 })
}
