//! Exact generating-function calculus for curve-counting invariants.
//!
//! The crate converts between Gopakumar-Vafa (BPS) invariants, stable-pair
//! generating series and Gromov-Witten invariants, globally over a curve-class
//! lattice and locally over a finite Euler-weighted model of the Chow variety.
//! It also carries the Euler-characteristic bookkeeping that turns perverse
//! cohomology data into genus tables, and identity checkers for flops and for
//! the Hilbert scheme/compactified Jacobian relation of planar curves.
//!
//! All arithmetic is exact over the rationals.

pub mod chow;
pub mod cli;
pub mod error;
pub mod flop;
pub mod genus;
pub mod io;
pub mod perverse;
pub mod rational;
pub mod series;
pub mod transforms;

pub use error::{Error, Result};
pub use rational::Rational;
pub use series::{CurveClass, DegreeCutoff, GradedSeries, HalfLaurent, LatticeMap, Window};
