//! File formats: JSON germ and curve-spec documents, and OBJ/CSV mesh
//! export for visualizing germs on a sample grid.
//!
//! Writing is deterministic (fixed ordering, shortest-round-trip floats in
//! JSON, 17 significant digits in mesh text), and a write/read round trip
//! reproduces coefficients bit-exactly.

use std::collections::HashSet;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::curve::{arclength_reparam, curve_from_curvature_torsion, SpaceCurveJet};
use crate::error::{Error, Result};
use crate::jet::{Jet1, JetVec3};

/// One sparse coefficient of a germ: the `u^i v^j` term of all three
/// components.
#[derive(Clone, Copy, Debug, Serialize, Deserialize, PartialEq)]
pub struct GermCoeff {
    pub i: usize,
    pub j: usize,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

/// On-disk form of a map germ.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GermFile {
    pub u_order: usize,
    pub v_order: usize,
    pub coeffs: Vec<GermCoeff>,
}

impl GermFile {
    /// Serializes the certified, nonzero monomials of a germ in graded
    /// order.
    pub fn from_germ(f: &JetVec3) -> Self {
        let (uo, vo) = crate::edge::germ_orders(f);
        let valid = f.0.iter().map(|c| c.valid_total()).min().unwrap();
        let mut coeffs = Vec::new();
        for d in 0..=valid.min(uo + vo) {
            for i in d.saturating_sub(vo)..=d.min(uo) {
                let j = d - i;
                let (x, y, z) = (
                    f.x().coeff(i, j),
                    f.y().coeff(i, j),
                    f.z().coeff(i, j),
                );
                if x != 0.0 || y != 0.0 || z != 0.0 {
                    coeffs.push(GermCoeff { i, j, x, y, z });
                }
            }
        }
        Self { u_order: uo, v_order: vo, coeffs }
    }

    pub fn to_germ(&self) -> Result<JetVec3> {
        let mut seen = HashSet::new();
        for c in &self.coeffs {
            if c.i > self.u_order || c.j > self.v_order {
                return Err(Error::InvalidFile(format!(
                    "coefficient ({}, {}) outside the ({}, {}) truncation",
                    c.i, c.j, self.u_order, self.v_order
                )));
            }
            if !seen.insert((c.i, c.j)) {
                return Err(Error::InvalidFile(format!(
                    "duplicate coefficient ({}, {})",
                    c.i, c.j
                )));
            }
        }
        let mut out = JetVec3::zero(self.u_order, self.v_order);
        for c in &self.coeffs {
            out.0[0].set_coeff(c.i, c.j, c.x);
            out.0[1].set_coeff(c.i, c.j, c.y);
            out.0[2].set_coeff(c.i, c.j, c.z);
        }
        Ok(out)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("germ file serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}

pub fn read_germ(path: &Path) -> Result<JetVec3> {
    GermFile::from_json(&std::fs::read_to_string(path)?)?.to_germ()
}

pub fn write_germ(path: &Path, f: &JetVec3) -> Result<()> {
    Ok(std::fs::write(path, GermFile::from_germ(f).to_json())?)
}

/// One coefficient of an explicit space curve: the `t^k` term.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct CurveCoeff {
    pub k: usize,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

/// On-disk form of a boundary curve: either explicit component series, or
/// intrinsic curvature/torsion data for the fundamental theorem of curves.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum CurveSpecFile {
    Explicit {
        order: usize,
        coeffs: Vec<CurveCoeff>,
    },
    Intrinsic {
        kappa: Vec<f64>,
        tau: Vec<f64>,
        frame0: [[f64; 3]; 3],
        p0: [f64; 3],
    },
}

impl CurveSpecFile {
    /// Builds the arclength-certified curve the solver consumes. Explicit
    /// curves are reparametrized by arclength first.
    pub fn to_curve(&self) -> Result<SpaceCurveJet> {
        match self {
            CurveSpecFile::Explicit { order, coeffs } => {
                let mut x = Jet1::zero(*order);
                let mut y = Jet1::zero(*order);
                let mut z = Jet1::zero(*order);
                let mut seen = HashSet::new();
                for c in coeffs {
                    if c.k > *order {
                        return Err(Error::InvalidFile(format!(
                            "curve coefficient {} beyond order {}",
                            c.k, order
                        )));
                    }
                    if !seen.insert(c.k) {
                        return Err(Error::InvalidFile(format!(
                            "duplicate curve coefficient {}",
                            c.k
                        )));
                    }
                    x.set_coeff(c.k, c.x);
                    y.set_coeff(c.k, c.y);
                    z.set_coeff(c.k, c.z);
                }
                let (_, curve) = arclength_reparam(&SpaceCurveJet::new(x, y, z))?;
                Ok(curve)
            }
            CurveSpecFile::Intrinsic { kappa, tau, frame0, p0 } => {
                if kappa.is_empty() || kappa[0] <= 0.0 {
                    return Err(Error::InvalidFile(
                        "intrinsic curve needs kappa[0] > 0".into(),
                    ));
                }
                let k = Jet1::new(kappa.clone());
                let t = if tau.is_empty() {
                    Jet1::zero(k.order())
                } else {
                    Jet1::new(tau.clone())
                };
                curve_from_curvature_torsion(&k, &t, *frame0, *p0)
            }
        }
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}

pub fn read_curve_spec(path: &Path) -> Result<SpaceCurveJet> {
    CurveSpecFile::from_json(&std::fs::read_to_string(path)?)?.to_curve()
}

/// A rectangular sample grid for mesh export.
#[derive(Clone, Copy, Debug)]
pub struct MeshGrid {
    pub u_min: f64,
    pub u_max: f64,
    pub u_samples: usize,
    pub v_min: f64,
    pub v_max: f64,
    pub v_samples: usize,
}

impl MeshGrid {
    fn validate(&self) -> Result<()> {
        if self.u_samples < 2
            || self.v_samples < 2
            || !(self.u_min < self.u_max)
            || !(self.v_min < self.v_max)
        {
            return Err(Error::InvalidFile(
                "mesh grid needs at least 2x2 samples and increasing ranges".into(),
            ));
        }
        Ok(())
    }

    fn point(&self, i: usize, j: usize) -> (f64, f64) {
        let fu = i as f64 / (self.u_samples - 1) as f64;
        let fv = j as f64 / (self.v_samples - 1) as f64;
        (
            self.u_min + (self.u_max - self.u_min) * fu,
            self.v_min + (self.v_max - self.v_min) * fv,
        )
    }
}

/// Wavefront OBJ: vertices in row-major grid order (`u` rows, `v`
/// columns), one quad face per grid cell.
pub fn write_obj<W: Write>(w: &mut W, f: &JetVec3, grid: &MeshGrid) -> Result<()> {
    grid.validate()?;
    for i in 0..grid.u_samples {
        for j in 0..grid.v_samples {
            let (u, v) = grid.point(i, j);
            let p = f.eval(u, v);
            writeln!(w, "v {:.16e} {:.16e} {:.16e}", p[0], p[1], p[2])?;
        }
    }
    let idx = |i: usize, j: usize| i * grid.v_samples + j + 1; // OBJ is 1-based
    for i in 0..grid.u_samples - 1 {
        for j in 0..grid.v_samples - 1 {
            writeln!(
                w,
                "f {} {} {} {}",
                idx(i, j),
                idx(i + 1, j),
                idx(i + 1, j + 1),
                idx(i, j + 1)
            )?;
        }
    }
    Ok(())
}

/// CSV with a `u,v,x,y,z` header and one row per grid sample.
pub fn write_csv<W: Write>(w: &mut W, f: &JetVec3, grid: &MeshGrid) -> Result<()> {
    grid.validate()?;
    writeln!(w, "u,v,x,y,z")?;
    for i in 0..grid.u_samples {
        for j in 0..grid.v_samples {
            let (u, v) = grid.point(i, j);
            let p = f.eval(u, v);
            writeln!(
                w,
                "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
                u, v, p[0], p[1], p[2]
            )?;
        }
    }
    Ok(())
}
