//! Exact Laurent objects in a half-integer-exponent variable and series
//! graded by an effective curve-class monoid.

mod graded;
mod half_laurent;
mod lattice;

pub use graded::{GradedSeries, PushForward};
pub(crate) use graded::{add_terms, exp_terms, log_terms, scale_terms, Terms};
pub use half_laurent::{HalfLaurent, Window};
pub use lattice::{monoid_order, CurveClass, DegreeCutoff, LatticeMap};
