//! Randomized property suites, shared by the `properties` and
//! `acceptance` targets. Each function runs its full caseload with a
//! pinned seed and panics with context on the first violation.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use cforge_core::curve::{
    curve_from_curvature_torsion, frenet_apparatus, orthonormal_completion, Branch,
};
use cforge_core::edge::{adapt_germ, edge_invariants, extract_phi};
use cforge_core::jet::{Jet1, Jet2, JetVec3};
use cforge_core::pipeline::deform_to_curve;

pub const CASES: usize = 100;

fn rand_jet1(rng: &mut ChaCha8Rng, order: usize, amp: f64) -> Jet1 {
    Jet1::new((0..=order).map(|_| rng.gen_range(-amp..amp)).collect())
}

fn rand_jet2(rng: &mut ChaCha8Rng, uo: usize, vo: usize, amp: f64) -> Jet2 {
    let mut j = Jet2::zero(uo, vo);
    for i in 0..=uo {
        for k in 0..=vo {
            j.set_coeff(i, k, rng.gen_range(-amp..amp));
        }
    }
    j
}

/// Commutativity, associativity, distributivity and the Leibniz rule for
/// both jet rings, to 1e-12.
pub fn jet_ring_axioms() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xA11CE);
    for case in 0..CASES {
        let a = rand_jet1(&mut rng, 8, 1.0);
        let b = rand_jet1(&mut rng, 8, 1.0);
        let c = rand_jet1(&mut rng, 8, 1.0);
        assert!(a.mul(&b).sub(&b.mul(&a)).max_abs() <= 1e-12, "case {case}: jet1 mul comm");
        assert!(
            a.mul(&b).mul(&c).sub(&a.mul(&b.mul(&c))).max_abs() <= 1e-12,
            "case {case}: jet1 mul assoc"
        );
        assert!(
            a.add(&b).mul(&c).sub(&a.mul(&c).add(&b.mul(&c))).max_abs() <= 1e-12,
            "case {case}: jet1 distributivity"
        );
        let lhs = a.mul(&b).derivative().unwrap();
        let rhs = a.derivative().unwrap().mul(&b).add(&a.mul(&b.derivative().unwrap()));
        assert!(lhs.sub(&rhs).max_abs() <= 1e-12, "case {case}: jet1 Leibniz");

        let p = rand_jet2(&mut rng, 4, 4, 1.0);
        let q = rand_jet2(&mut rng, 4, 4, 1.0);
        let r = rand_jet2(&mut rng, 4, 4, 1.0);
        let d = |x: &Jet2, y: &Jet2| {
            let deg = x.valid_total().min(y.valid_total());
            x.max_dev_up_to(y, deg)
        };
        assert!(d(&p.mul(&q), &q.mul(&p)) <= 1e-12, "case {case}: jet2 mul comm");
        assert!(
            d(&p.mul(&q).mul(&r), &p.mul(&q.mul(&r))) <= 1e-12,
            "case {case}: jet2 mul assoc"
        );
        assert!(
            d(&p.add(&q).mul(&r), &p.mul(&r).add(&q.mul(&r))) <= 1e-12,
            "case {case}: jet2 distributivity"
        );
        let lhs = p.mul(&q).derive_u().unwrap();
        let rhs = p.derive_u().unwrap().mul(&q).add(&p.mul(&q.derive_u().unwrap()));
        assert!(d(&lhs, &rhs) <= 1e-12, "case {case}: jet2 Leibniz (u)");
        let lhs = p.mul(&q).derive_v().unwrap();
        let rhs = p.derive_v().unwrap().mul(&q).add(&p.mul(&q.derive_v().unwrap()));
        assert!(d(&lhs, &rhs) <= 1e-12, "case {case}: jet2 Leibniz (v)");
    }
}

fn rand_unit(rng: &mut ChaCha8Rng) -> [f64; 3] {
    loop {
        let v: [f64; 3] = [
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
        ];
        let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        if n > 0.1 {
            return [v[0] / n, v[1] / n, v[2] / n];
        }
    }
}

/// The orthonormal-completion lemma: `w` is unit, orthogonal to `a`, has
/// prescribed inner product with `b`, and `det(a, b, w)` carries the
/// requested sign with magnitude `sqrt(1 - mu^2)`, all to 1e-10.
pub fn completion_lemma() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xB0B);
    let dot = |x: &[f64; 3], y: &[f64; 3]| x[0] * y[0] + x[1] * y[1] + x[2] * y[2];
    let cross = |x: &[f64; 3], y: &[f64; 3]| {
        [
            x[1] * y[2] - x[2] * y[1],
            x[2] * y[0] - x[0] * y[2],
            x[0] * y[1] - x[1] * y[0],
        ]
    };
    for case in 0..CASES {
        let a = rand_unit(&mut rng);
        let b = loop {
            let c = rand_unit(&mut rng);
            let p = dot(&a, &c);
            let raw = [c[0] - p * a[0], c[1] - p * a[1], c[2] - p * a[2]];
            let n = dot(&raw, &raw).sqrt();
            if n > 0.1 {
                break [raw[0] / n, raw[1] / n, raw[2] / n];
            }
        };
        let mu: f64 = rng.gen_range(-0.99..0.99);
        for branch in [Branch::Plus, Branch::Minus] {
            let w = orthonormal_completion(a, b, mu, branch).unwrap();
            assert!((dot(&w, &w) - 1.0).abs() <= 1e-10, "case {case}: |w| = 1");
            assert!(dot(&w, &a).abs() <= 1e-10, "case {case}: w . a = 0");
            assert!((dot(&w, &b) - mu).abs() <= 1e-10, "case {case}: w . b = mu");
            let det = dot(&cross(&a, &b), &w);
            assert!(
                (det - branch.sign() * (1.0 - mu * mu).sqrt()).abs() <= 1e-10,
                "case {case}: det(a, b, w) = {:+}sqrt(1 - mu^2)",
                branch.sign()
            );
        }
    }
}

/// Rebuilding a curve from random curvature/torsion data and measuring it
/// again returns the data, to 1e-8.
pub fn frenet_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xF8E);
    for case in 0..CASES {
        let mut kappa = rand_jet1(&mut rng, 8, 0.3);
        kappa.set_coeff(0, rng.gen_range(0.5..1.5));
        let tau = rand_jet1(&mut rng, 8, 0.5);
        let frame = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
        let p0 = [
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
        ];
        let c = curve_from_curvature_torsion(&kappa, &tau, frame, p0).unwrap();
        let fr = frenet_apparatus(&c).unwrap();
        let deg = 6.min(fr.kappa.order()).min(fr.tau.order());
        let dk = fr.kappa.truncate(deg).sub(&kappa.truncate(deg)).max_abs();
        let dt = fr.tau.truncate(deg).sub(&tau.truncate(deg)).max_abs();
        assert!(dk <= 1e-8, "case {case}: kappa deviates by {dk:e}");
        assert!(dt <= 1e-8, "case {case}: tau deviates by {dt:e}");
    }
}

/// A random raw germ with a cuspidal edge along the u-axis:
/// `c0(u) + (v^2/2) c2(u) + (v^3/6) c3(u)` with mild coefficients.
fn rand_edge_germ(rng: &mut ChaCha8Rng, uo: usize, vo: usize) -> JetVec3 {
    let mut f = JetVec3::zero(uo, vo);
    for comp in 0..3 {
        for i in 0..=uo {
            let amp = 0.4 / (1.0 + i as f64);
            f.0[comp].set_coeff(i, 0, rng.gen_range(-amp..amp));
        }
        for i in 0..=uo.min(3) {
            f.0[comp].set_coeff(i, 2, rng.gen_range(-0.4..0.4));
            f.0[comp].set_coeff(i, 3, rng.gen_range(-0.4..0.4));
        }
    }
    // make the edge curve regular and close to unit speed
    f.0[0].set_coeff(0, 0, 0.0);
    f.0[0].set_coeff(1, 0, 1.0);
    f
}

/// Draws random germs until one adapts to a generic cuspidal edge whose
/// edge curve has nonvanishing curvature.
fn rand_generic_germ(rng: &mut ChaCha8Rng, uo: usize, vo: usize) -> (JetVec3, usize) {
    for attempt in 0..50 {
        let f = rand_edge_germ(rng, uo, vo);
        let Ok((adapted, _)) = adapt_germ(&f) else { continue };
        let Ok(inv) = edge_invariants(&adapted.f) else { continue };
        let generic = inv.kappa_nu.coeff(0).abs() > 0.05
            && inv.kappa_c.coeff(0).abs() > 0.05
            && inv.frenet.as_ref().is_some_and(|fr| fr.kappa.coeff(0) > 0.05);
        if generic {
            return (adapted.f, attempt);
        }
    }
    panic!("no generic germ found in 50 attempts");
}

/// The extrinsic identity `kappa^2 = kappa_s^2 + kappa_nu^2` along the
/// edge of random generic germs, to 1e-7.
pub fn kappa_identity() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x1D);
    for case in 0..CASES {
        let (f, _) = rand_generic_germ(&mut rng, 8, 4);
        let inv = edge_invariants(&f).unwrap();
        let fr = inv.frenet.as_ref().unwrap();
        let deg = 3.min(fr.kappa.order());
        let lhs = fr.kappa.mul(&fr.kappa).truncate(deg);
        let rhs = inv
            .kappa_s
            .mul(&inv.kappa_s)
            .add(&inv.kappa_nu.mul(&inv.kappa_nu))
            .truncate(deg);
        let dev = lhs.sub(&rhs).max_abs();
        assert!(dev <= 1e-7, "case {case}: identity deviates by {dev:e}");
    }
}

/// Deforms random generic germs onto their own edge curves (both
/// branches) and checks the solver residual against its certificate bound
/// plus the four consequences of sharing a fundamental form:
/// `g_u.psi = f_u.phi`, `g_uu.psi = f_uu.phi`, `psi_v.g_u = phi_v.f_u`
/// and the third-row identity, all to 1e-8.
pub fn solver_residual_and_isometry_identities() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xCC);
    for case in 0..CASES {
        let (f, _) = rand_generic_germ(&mut rng, 12, 4);
        let inv = edge_invariants(&f).unwrap();
        let branch = if rng.gen_bool(0.5) { Branch::Plus } else { Branch::Minus };
        let r = match deform_to_curve(&f, &inv.gamma, branch) {
            Ok(r) => r,
            Err(e) => panic!("case {case}: deformation failed: {e}"),
        };
        let g = &r.germ.f;
        let max_coeff = g
            .0
            .iter()
            .flat_map(|c| (0..=c.u_order()).flat_map(move |i| (0..=c.v_order()).map(move |j| c.coeff(i, j).abs())))
            .fold(1.0_f64, f64::max);
        assert!(
            r.verification.residual <= 1e-10 * max_coeff,
            "case {case}: residual {:e} exceeds 1e-10 * {max_coeff:e}",
            r.verification.residual
        );

        let phi = extract_phi(&f).unwrap();
        let psi = extract_phi(g).unwrap();
        let fu = f.derive_u().unwrap();
        let fuu = fu.derive_u().unwrap();
        let gu = g.derive_u().unwrap();
        let guu = gu.derive_u().unwrap();
        let dev = |lhs: &Jet2, rhs: &Jet2, what: &str| {
            let deg = lhs.valid_total().min(rhs.valid_total());
            let d = lhs.max_dev_up_to(rhs, deg);
            assert!(d <= 1e-8, "case {case}: {what} deviates by {d:e} at degree {deg}");
        };
        dev(&gu.dot(&psi), &fu.dot(&phi), "g_u . psi = f_u . phi");
        dev(&guu.dot(&psi), &fuu.dot(&phi), "g_uu . psi = f_uu . phi");
        let psi_v = psi.derive_v().unwrap();
        let phi_v = phi.derive_v().unwrap();
        dev(&psi_v.dot(&gu), &phi_v.dot(&fu), "psi_v . g_u = phi_v . f_u");
        let psi_u = psi.derive_u().unwrap();
        let third = phi
            .dot(&fuu)
            .derive_v()
            .unwrap()
            .sub(&phi.dot(&phi).derive_u().unwrap().derive_u().unwrap().mul_v().scale(0.5))
            .add(&psi_u.dot(&psi_u).mul_v());
        dev(&psi_v.dot(&guu), &third, "psi_v . g_uu = third-row data");
    }
}
