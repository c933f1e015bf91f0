//! Potential theory and tropical convexity for divisors on compact metric
//! graphs.
//!
//! The crate models a compact, connected metric graph `Γ`, continuous
//! piecewise-linear functions on it, and effective divisors with real
//! masses. On top of those it provides:
//!
//! - electrical potentials: the j-function, effective resistance, and the
//!   function associated with a pair of equal-degree divisors
//!   ([`associated_function`]);
//! - the divisor metric `ρ` and the deviation integral `Φ` ([`rho`],
//!   [`s_func`]);
//! - tropical paths between divisors and the segments/hulls they span
//!   ([`t_path_eval`], [`TSegment`], [`TConvexHull`]);
//! - reduced divisors on segments and hulls, with optimality certificates
//!   ([`reduced_on_segment`], [`reduced_on_hull`]);
//! - canonical projections onto a hull and the retraction/contraction
//!   homotopies built from them ([`canonical_project`], [`retraction_sample`],
//!   [`contraction_sample`]).
//!
//! Start with the `examples/` directory: each file is a runnable tour of one
//! capability. A small CLI (`divgraph`) wraps the same operations for use
//! from files; see the `cli` module and the README.

pub mod cli;
pub mod divisor;
pub mod error;
pub mod graph;
pub mod io;
pub mod potential;
pub mod projection;
pub mod pwl;
pub mod reduced;
pub mod space;
pub mod subset;

pub use divisor::RDivisor;
pub use error::{Error, Result};
pub use graph::{EdgeSpec, MetricGraph, PointOnGraph, Tolerances};
pub use potential::{associated_function, effective_resistance, j_function, LaplacianSystem};
pub use projection::{
    canonical_project, contraction_sample, retraction_sample, target_distance, ProjectionTarget,
};
pub use pwl::{Clip, Combine, Extrema, PwlFunction, SignedDivisor};
pub use reduced::{
    extremals, hull_contains, reduced_certificate, reduced_on_hull, reduced_on_segment,
    CertificateDetail, CertificateReport, ReducedResult, ReducedStatus, TConvexHull,
};
pub use space::{
    b_function, divisors_close, rho, s_func, segment_contains, segment_intersection, t_path_eval,
    TSegment,
};
pub use subset::ClosedSubset;
