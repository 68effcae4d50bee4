//! Differential-geometric invariants of cuspidal edge map germs and their
//! isometric deformations, computed on truncated power series.
//!
//! The crate is layered bottom-up:
//!
//! * [`jet`] — exact truncated series arithmetic in one and two variables;
//! * [`curve`] — Frenet apparatus, series integration of the fundamental
//!   theorem of space curves, and the initial normal fields of the solver;
//! * [`edge`] — map-germ geometry: fundamental forms, adapted coordinates,
//!   the invariant suite along the singular curve, Kossowski metric data;
//! * [`solver`] — the degree-by-degree Cauchy recursion producing a germ
//!   with prescribed first fundamental form and boundary space curve;
//! * [`pipeline`] — theorem-level constructions (isomer, planar
//!   normalization, curvature-moving families) with verification reports;
//! * [`io`] — JSON germ/curve files and OBJ/CSV mesh export.

pub mod curve;
pub mod edge;
pub mod error;
pub mod io;
pub mod jet;
pub mod pipeline;
pub mod solver;

pub use error::{Error, Result};
