use thiserror::Error;

use crate::rational::Rational;
use crate::series::CurveClass;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("window error: {0}")]
    Window(String),

    #[error("rank mismatch: {left} vs {right}")]
    RankMismatch { left: usize, right: usize },

    #[error("cutoff mismatch between operands")]
    CutoffMismatch,

    #[error("constant term must be {expected}")]
    ConstantTerm { expected: &'static str },

    #[error("divisor is not a unit (constant term must be exactly 1)")]
    NonUnit,

    #[error("classes leave the effective cone: {}", format_pairs(.0))]
    LeavesEffectiveCone(Vec<(CurveClass, CurveClass)>),

    #[error("lattice map is not invertible over the integers (determinant {0})")]
    NotUnimodular(i64),

    #[error("polynomial is not symmetric under exponent negation")]
    Asymmetric,

    #[error("half-integer exponent s^{0} present where integer exponents are required")]
    HalfIntegerExponent(i64),

    #[error("negative genus {0} is not allowed here")]
    NegativeGenus(i64),

    #[error("non-integral invariant {value} at {location}")]
    NotIntegral { location: String, value: Rational },

    #[error("nonvanishing residual at {location}: {reason}")]
    Residual { location: String, reason: String },

    #[error("lambda order {order} too small to resolve genus {genus}")]
    LambdaOrder { order: i64, genus: i64 },

    #[error("cycle {0} lies outside the model")]
    OutsideModel(String),

    #[error("zero Euler weight at cycle {0} receives nonzero mass")]
    ZeroWeight(String),

    #[error("inconsistent spectral data at ({i},{j}): {reason}")]
    Spectral { i: i64, j: i64, reason: String },

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("parse error: {0}")]
    Parse(String),
}

fn format_pairs(pairs: &[(CurveClass, CurveClass)]) -> String {
    pairs
        .iter()
        .map(|(from, to)| format!("{from} -> {to}"))
        .collect::<Vec<_>>()
        .join(", ")
}

impl Error {
    /// Integrality and residual failures signal that an identity did not
    /// hold, as opposed to malformed or out-of-contract input.
    pub fn is_check_failure(&self) -> bool {
        matches!(self, Error::NotIntegral { .. } | Error::Residual { .. })
    }

    pub fn location(&self) -> Option<String> {
        match self {
            Error::NotIntegral { location, .. } | Error::Residual { location, .. } => {
                Some(location.clone())
            }
            Error::HalfIntegerExponent(u) => Some(format!("s^{u}")),
            Error::NegativeGenus(g) => Some(format!("g={g}")),
            Error::OutsideModel(c) | Error::ZeroWeight(c) => Some(c.clone()),
            Error::Spectral { i, j, .. } => Some(format!("({i},{j})")),
            Error::LeavesEffectiveCone(pairs) => pairs.first().map(|(from, _)| from.to_string()),
            _ => None,
        }
    }

    pub(crate) fn at(self, location: impl std::fmt::Display) -> Self {
        match self {
            Error::NotIntegral { value, location: inner } => Error::NotIntegral {
                location: join_location(location, &inner),
                value,
            },
            Error::Residual { reason, location: inner } => Error::Residual {
                location: join_location(location, &inner),
                reason,
            },
            other => other,
        }
    }
}

fn join_location(outer: impl std::fmt::Display, inner: &str) -> String {
    if inner.is_empty() {
        outer.to_string()
    } else {
        format!("{outer} {inner}")
    }
}
