//! Exact workbench for Lipschitz analysis of polyhedral convex sets,
//! set-valued maps with polyhedral graphs, and piecewise-linear value
//! functions.
//!
//! Everything is computed in arbitrary-precision rational arithmetic; no
//! floating point enters any decision. The layers, bottom to top:
//!
//! - [`rat`]: rational scalars, vectors, and exact linear algebra.
//! - [`lp`]: exact linear programming with verified optimality,
//!   infeasibility, and unboundedness certificates.
//! - [`poly`]: polyhedra in H- and V-form, Fourier–Motzkin projection,
//!   representation conversion, cone calculus, face enumeration, and
//!   Euclidean projection.

pub mod criteria;
pub mod error;
pub mod gendiff;
pub mod lp;
pub mod oracle;
pub mod poly;
pub mod rat;
mod simplex;
pub mod varfun;

pub use error::{Error, Result};
pub use lp::{Feasibility, LinearProgram, LpOutcome, RowKind, Sense, VarBound};
pub use poly::{ConeSet, Face, HPolyhedron, PointLocation, VPolytope};
pub use rat::{rat, rat_int, Rat};
pub use varfun::{ExtReal, GraphMap, Norm, PLValueFunction};
