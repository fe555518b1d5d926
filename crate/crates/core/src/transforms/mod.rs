//! Global correspondences between BPS, stable-pair and Gromov-Witten
//! invariants, with multiple covers resummed over the class monoid.

use std::fmt;
use std::str::FromStr;

use crate::error::Error;

mod gromov_witten;
mod stable_pairs;
mod tables;

pub use crate::genus::pt_local_irreducible;
pub use gromov_witten::{gv_from_gw, gw_from_gv, sin_kernel_lambda, LambdaSeries};
pub use stable_pairs::{gv_from_pt, pt_from_gv, pt_log_from_gv, resolving_window};
pub use tables::{GVTable, GWTable};

/// Which variable the q-kernels are written in.
///
/// `GlobalQ` uses `(q^{k/2} - q^{-k/2})^{2g-2}` with the pair series read as
/// `Σ P_n (-q)^n`; `LocalMinusQ` uses the same kernel in `-q` with the pair
/// series read as `Σ P_n q^n`. The two differ by the substitution `q -> -q`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Convention {
    GlobalQ,
    LocalMinusQ,
}

impl Convention {
    pub fn as_str(self) -> &'static str {
        match self {
            Convention::GlobalQ => "global-q",
            Convention::LocalMinusQ => "local-minus-q",
        }
    }
}

impl fmt::Display for Convention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Convention {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "global-q" => Ok(Convention::GlobalQ),
            "local-minus-q" => Ok(Convention::LocalMinusQ),
            other => Err(Error::Parse(format!("unknown convention {other:?}"))),
        }
    }
}
