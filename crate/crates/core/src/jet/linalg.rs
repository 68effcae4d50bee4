use crate::error::{Error, Result};

use super::{Jet2, Scalar, UNIT_TOL};

/// An `R^3`-valued bivariate jet.
#[derive(Clone, Debug, PartialEq)]
pub struct JetVec3<S = f64>(pub [Jet2<S>; 3]);

impl<S: Scalar> JetVec3<S> {
    pub fn zero(u_order: usize, v_order: usize) -> Self {
        Self(std::array::from_fn(|_| Jet2::zero(u_order, v_order)))
    }

    pub fn x(&self) -> &Jet2<S> {
        &self.0[0]
    }

    pub fn y(&self) -> &Jet2<S> {
        &self.0[1]
    }

    pub fn z(&self) -> &Jet2<S> {
        &self.0[2]
    }

    pub fn map(&self, f: impl Fn(&Jet2<S>) -> Jet2<S>) -> Self {
        Self(std::array::from_fn(|k| f(&self.0[k])))
    }

    pub fn try_map(&self, f: impl Fn(&Jet2<S>) -> Result<Jet2<S>>) -> Result<Self> {
        Ok(Self([f(&self.0[0])?, f(&self.0[1])?, f(&self.0[2])?]))
    }

    pub fn add(&self, other: &Self) -> Self {
        Self(std::array::from_fn(|k| self.0[k].add(&other.0[k])))
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self(std::array::from_fn(|k| self.0[k].sub(&other.0[k])))
    }

    pub fn scale_jet(&self, s: &Jet2<S>) -> Self {
        Self(std::array::from_fn(|k| self.0[k].mul(s)))
    }

    pub fn dot(&self, other: &Self) -> Jet2<S> {
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

    pub fn norm_sq(&self) -> Jet2<S> {
        self.dot(self)
    }

    pub fn derive_u(&self) -> Result<Self> {
        self.try_map(|c| c.derive_u())
    }

    pub fn derive_v(&self) -> Result<Self> {
        self.try_map(|c| c.derive_v())
    }

    pub fn max_abs(&self) -> S {
        self.0
            .iter()
            .fold(S::zero(), |m, c| m.max(c.max_abs()))
    }

    pub fn eval(&self, u: S, v: S) -> [S; 3] {
        std::array::from_fn(|k| self.0[k].eval(u, v))
    }
}

/// Scalar triple product `det(a, b, c)` over the jet ring.
pub fn det3<S: Scalar>(a: &JetVec3<S>, b: &JetVec3<S>, c: &JetVec3<S>) -> Jet2<S> {
    a.cross(b).dot(c)
}

/// A 3x3 matrix of bivariate jets, stored row-major.
#[derive(Clone, Debug)]
pub struct JetMat3<S = f64>(pub [[Jet2<S>; 3]; 3]);

impl<S: Scalar> JetMat3<S> {
    pub fn identity(u_order: usize, v_order: usize) -> Self {
        Self(std::array::from_fn(|i| {
            std::array::from_fn(|j| {
                if i == j {
                    Jet2::constant(S::one(), u_order, v_order)
                } else {
                    Jet2::zero(u_order, v_order)
                }
            })
        }))
    }

    pub fn from_rows(rows: [JetVec3<S>; 3]) -> Self {
        let [r0, r1, r2] = rows;
        Self([r0.0, r1.0, r2.0])
    }

    pub fn det(&self) -> Jet2<S> {
        let m = &self.0;
        let c0 = m[1][1].mul(&m[2][2]).sub(&m[1][2].mul(&m[2][1]));
        let c1 = m[1][0].mul(&m[2][2]).sub(&m[1][2].mul(&m[2][0]));
        let c2 = m[1][0].mul(&m[2][1]).sub(&m[1][1].mul(&m[2][0]));
        m[0][0].mul(&c0).sub(&m[0][1].mul(&c1)).add(&m[0][2].mul(&c2))
    }

    /// Inverse via the adjugate and a unit-division by the determinant.
    pub fn inverse(&self) -> Result<Self> {
        let det = self.det();
        let d0 = det.coeff(0, 0);
        if d0.abs() <= S::lit(UNIT_TOL) {
            return Err(Error::SingularAtOrigin(d0.as_f64()));
        }
        let m = &self.0;
        let cof = |i: usize, j: usize| -> Jet2<S> {
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
        // adjugate = transpose of the cofactor matrix
        let mut rows: Vec<[Jet2<S>; 3]> = Vec::with_capacity(3);
        for i in 0..3 {
            let row: [Jet2<S>; 3] = std::array::from_fn(|j| {
                cof(j, i).div_unit(&det).expect("unit determinant checked above")
            });
            rows.push(row);
        }
        let r2 = rows.pop().unwrap();
        let r1 = rows.pop().unwrap();
        let r0 = rows.pop().unwrap();
        Ok(Self([r0, r1, r2]))
    }

    pub fn mul_vec(&self, v: &JetVec3<S>) -> JetVec3<S> {
        JetVec3(std::array::from_fn(|i| {
            let mut acc = self.0[i][0].mul(&v.0[0]);
            for k in 1..3 {
                acc = acc.add(&self.0[i][k].mul(&v.0[k]));
            }
            acc
        }))
    }

    pub fn mul_mat(&self, other: &Self) -> Self {
        Self(std::array::from_fn(|i| {
            std::array::from_fn(|j| {
                let mut acc = self.0[i][0].mul(&other.0[0][j]);
                for k in 1..3 {
                    acc = acc.add(&self.0[i][k].mul(&other.0[k][j]));
                }
                acc
            })
        }))
    }
}
