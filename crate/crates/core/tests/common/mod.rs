//! Shared fixtures for the integration suites.
#![allow(dead_code)]

pub mod props;

use cforge_core::curve::SpaceCurveJet;
use cforge_core::jet::{Jet1, Jet2, JetVec3};

/// Taylor series of `cos t`.
pub fn cos_series(order: usize) -> Jet1 {
    let mut c = vec![0.0; order + 1];
    let mut fact = 1.0;
    for (k, ck) in c.iter_mut().enumerate() {
        if k > 0 {
            fact *= k as f64;
        }
        if k % 2 == 0 {
            *ck = if k % 4 == 0 { 1.0 } else { -1.0 } / fact;
        }
    }
    Jet1::new(c)
}

/// Taylor series of `sin t`.
pub fn sin_series(order: usize) -> Jet1 {
    let mut c = vec![0.0; order + 1];
    let mut fact = 1.0;
    for (k, ck) in c.iter_mut().enumerate() {
        if k > 0 {
            fact *= k as f64;
        }
        if k % 2 == 1 {
            *ck = if k % 4 == 1 { 1.0 } else { -1.0 } / fact;
        }
    }
    Jet1::new(c)
}

/// The worked example germ `(u, -v^2/2 + u^3/6, u^2/2 + u^3/6 + v^3/6)`:
/// a generic cuspidal edge along the u-axis with a non-planar edge curve.
pub fn example_f(uo: usize, vo: usize) -> JetVec3 {
    JetVec3([
        Jet2::from_terms(uo, vo, &[(1, 0, 1.0)]),
        Jet2::from_terms(uo, vo, &[(0, 2, -0.5), (3, 0, 1.0 / 6.0)]),
        Jet2::from_terms(uo, vo, &[(2, 0, 0.5), (3, 0, 1.0 / 6.0), (0, 3, 1.0 / 6.0)]),
    ])
}

/// The degree-6 polynomial companion of [`example_f`]: a different germ
/// whose first fundamental form agrees with `f`'s through total degree 5.
pub fn example_g() -> JetVec3 {
    let (uo, vo) = (6, 6);
    let g1 = Jet2::from_terms(
        uo,
        vo,
        &[
            (1, 0, 1.0),
            (2, 2, 0.5),
            (3, 2, -0.5),
            (1, 4, -0.5),
            (0, 5, 1.0 / 30.0),
            (3, 3, 1.0 / 6.0),
            (2, 4, 9.0 / 4.0),
            (0, 6, 1.0 / 6.0),
        ],
    );
    let g2 = Jet2::from_terms(
        uo,
        vo,
        &[
            (0, 2, 0.5),
            (3, 0, 1.0 / 6.0),
            (2, 2, -1.0),
            (1, 3, 1.0 / 3.0),
            (3, 2, 2.0),
            (2, 3, -1.0 / 3.0),
            (1, 4, 1.0),
            (0, 5, -0.2),
            (4, 2, -9.0 / 4.0),
            (2, 4, -6.0),
            (1, 5, 13.0 / 15.0),
            (0, 6, -11.0 / 36.0),
        ],
    );
    let g3 = Jet2::from_terms(
        uo,
        vo,
        &[
            (2, 0, 0.5),
            (3, 0, 1.0 / 6.0),
            (1, 2, -1.0),
            (0, 3, 1.0 / 6.0),
            (2, 2, 1.0),
            (0, 4, 0.5),
            (2, 3, -1.0 / 3.0),
            (1, 4, -2.5),
            (0, 5, -1.0 / 15.0),
            (4, 2, -2.0),
            (3, 3, 2.0 / 3.0),
            (2, 4, 6.0),
            (1, 5, 0.4),
            (0, 6, 25.0 / 18.0),
        ],
    );
    JetVec3([g1, g2, g3])
}

/// Edge curve of [`example_f`] in its own parameter:
/// `(t, t^3/6, t^2/2 + t^3/6)`.
pub fn example_edge_curve(order: usize) -> SpaceCurveJet {
    let mut x = Jet1::zero(order);
    let mut y = Jet1::zero(order);
    let mut z = Jet1::zero(order);
    x.set_coeff(1, 1.0);
    y.set_coeff(3, 1.0 / 6.0);
    z.set_coeff(2, 0.5);
    z.set_coeff(3, 1.0 / 6.0);
    SpaceCurveJet::new(x, y, z)
}

/// `delta(t) = 4 + 8t + 8t^2 + t^4 = 4 |c' x c''|^2`, the common
/// denominator of the closed-form curvature and torsion of
/// [`example_edge_curve`]: with `c' = (1, t^2/2, t + t^2/2)` and
/// `c'' = (0, t, 1 + t)` the cross product is
/// `(-t^2/2, -(1 + t), t)`, whose squared norm is `delta / 4`.
pub fn example_delta(order: usize) -> Jet1 {
    let mut d = Jet1::zero(order);
    d.set_coeff(0, 4.0);
    d.set_coeff(1, 8.0);
    d.set_coeff(2, 8.0);
    d.set_coeff(4, 1.0);
    d
}

/// Closed form of `kappa(t)^2` for [`example_edge_curve`]:
/// `2 delta / (2 + 2t^2 + 2t^3 + t^4)^3`.
pub fn example_kappa_sq_reference(order: usize) -> Jet1 {
    let mut q = Jet1::zero(order);
    q.set_coeff(0, 2.0);
    q.set_coeff(2, 2.0);
    q.set_coeff(3, 2.0);
    q.set_coeff(4, 1.0);
    let denom = q.mul(&q).mul(&q);
    example_delta(order).scale(2.0).div_unit(&denom).unwrap()
}

/// Closed form of `tau(t)` for [`example_edge_curve`]: `-4 / delta`.
pub fn example_tau_reference(order: usize) -> Jet1 {
    Jet1::zero(order)
        .add_constant(-4.0)
        .div_unit(&example_delta(order))
        .unwrap()
}

/// An adapted germ whose edge curve is a circle of radius 1 and whose
/// cuspidal cross-sections are tilted by `alpha` out of the normal plane:
/// `kappa_s = cos(alpha)`, `kappa_nu = -sin(alpha)`, `kappa_c = cos(alpha)`.
pub fn tilted_circle_germ(alpha: f64, uo: usize, vo: usize) -> JetVec3 {
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

/// Arclength unit circle `(sin t, 1 - cos t, 0)` with the standard frame
/// at the origin.
pub fn unit_circle_curve(order: usize) -> SpaceCurveJet {
    SpaceCurveJet {
        x: sin_series(order),
        y: cos_series(order).scale(-1.0).add_constant(1.0),
        z: Jet1::zero(order),
        arclength_certified: true,
    }
}
