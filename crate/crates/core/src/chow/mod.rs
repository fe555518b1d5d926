//! Local theory on a finite Euler-weighted model of the Chow variety.
//!
//! Functions on the model are densities against the Euler-characteristic
//! measure: integrating `f` means `Σ e(γ) f(γ)`, and convolution and the
//! multiple maps `γ -> kγ` push measures forward. With these conventions
//! integration is a ring map to graded series, so local identities integrate
//! to global ones.

mod convolution;
mod local;
mod model;

pub use convolution::{conv_exp, conv_log, convolve, push_multiple, LocalFunction, Overflow};
pub use local::{
    integrate_function, integrate_table, local_gv_from_pt, local_pt_from_gv, local_resolving_window,
    LocalGVTable,
};
pub use model::{cycle_order, ChowModel, Cycle, Generator, Point};
