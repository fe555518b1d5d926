//! Euler-characteristic bookkeeping for perverse data over the Hilbert-Chow
//! map.
//!
//! A [`PerverseDatum`] records, at each point of the Chow variety, the
//! symmetric polynomial `Σ χ(ᵖHⁱ) yⁱ`. Data are assembled from tables of
//! weight-graded summands, optionally running the weight spectral sequence
//! at the level of dimensions, and decomposed into local invariants.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::genus::{decompose_symmetric, kernel_plus, GenusVector};
use crate::rational::{from_bigint, int, to_integer, Rational};
use crate::series::{HalfLaurent, Window};

pub mod fixtures;
mod spectral;

pub use spectral::{e2_from_e1, page_euler_characteristic, SpectralPage};

/// Per-point symmetric Laurent polynomials in `y`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PerverseDatum {
    points: BTreeMap<String, HalfLaurent>,
}

impl PerverseDatum {
    pub fn new(points: impl IntoIterator<Item = (String, HalfLaurent)>) -> Result<Self> {
        let mut datum = PerverseDatum::default();
        for (label, poly) in points {
            datum.insert(label, poly)?;
        }
        Ok(datum)
    }

    /// Adds `poly` at `label`, summing with anything already there.
    pub fn insert(&mut self, label: String, poly: HalfLaurent) -> Result<()> {
        if !poly.is_polynomial() {
            return Err(Error::Window(format!("datum at {label} must be a polynomial")));
        }
        poly.require_integer_exponents()?;
        if !poly.is_symmetric() {
            return Err(Error::Asymmetric);
        }
        let sum = match self.points.remove(&label) {
            Some(existing) => &existing + &poly,
            None => poly,
        };
        self.points.insert(label, sum);
        Ok(())
    }

    pub fn get(&self, label: &str) -> Option<&HalfLaurent> {
        self.points.get(label)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &HalfLaurent)> {
        self.points.iter().map(|(l, p)| (l.as_str(), p))
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Sum over all points, i.e. the integral against unit weights.
    pub fn total(&self) -> HalfLaurent {
        self.points
            .values()
            .fold(HalfLaurent::zero(), |acc, p| &acc + p)
    }
}

/// Genus decomposition at every point.
pub fn gv_from_perverse(d: &PerverseDatum) -> Result<BTreeMap<String, GenusVector>> {
    d.iter()
        .map(|(label, poly)| {
            let v = decompose_symmetric(poly).map_err(|e| e.at(format!("point={label}")))?;
            Ok((label.to_string(), v))
        })
        .collect()
}

/// A weight-graded summand pushed forward to a point of the Chow variety.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Summand {
    pub name: String,
    pub support: String,
    /// `Σ χ(ᵖHᵐ(Rπ_* summand)) yᵐ`.
    pub poly: HalfLaurent,
    /// Weight-graded piece the summand lives in.
    pub weight: i64,
}

/// Rank of `d1: E1^{i,j} -> E1^{i+1,j}` at one support point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankEntry {
    pub support: String,
    pub i: i64,
    pub j: i64,
    pub rank: u64,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SummandTable {
    pub summands: Vec<Summand>,
    pub ranks: Vec<RankEntry>,
}

impl SummandTable {
    pub fn validate(&self) -> Result<()> {
        for s in &self.summands {
            if !s.poly.is_polynomial() {
                return Err(Error::Window(format!("summand {} must be a polynomial", s.name)));
            }
            s.poly.require_integer_exponents()?;
            if s.weight == 0 && !s.poly.is_symmetric() {
                return Err(Error::Invalid(format!(
                    "pure summand {} must have a symmetric polynomial",
                    s.name
                )));
            }
        }
        for r in &self.ranks {
            if !self.summands.iter().any(|s| s.support == r.support) {
                return Err(Error::Invalid(format!(
                    "rank data refers to unknown support {}",
                    r.support
                )));
            }
        }
        Ok(())
    }

    /// The `E1` page at `support`: a coefficient of `yᵐ` in weight `w`
    /// sits at `(i, j) = (-w, m + w)`.
    pub fn page(&self, support: &str) -> Result<SpectralPage> {
        let mut page = SpectralPage::new();
        for s in self.summands.iter().filter(|s| s.support == support) {
            for (&u, c) in s.poly.coeffs() {
                let m = u / 2;
                let dim = to_integer(c)
                    .and_then(|d| d.to_u64())
                    .ok_or_else(|| Error::Spectral {
                        i: -s.weight,
                        j: m + s.weight,
                        reason: format!("summand {} contributes {c}, not a dimension", s.name),
                    })?;
                page = page.with_dim(-s.weight, m + s.weight, dim);
            }
        }
        for r in self.ranks.iter().filter(|r| r.support == support) {
            page = page.with_rank(r.i, r.j, r.rank);
        }
        Ok(page)
    }

    pub fn supports(&self) -> Vec<String> {
        let mut out: Vec<String> = self.summands.iter().map(|s| s.support.clone()).collect();
        out.sort();
        out.dedup();
        out
    }
}

/// How a summand table becomes a datum.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AssemblyMode {
    /// Sum the characters of all graded pieces.
    Pure,
    /// Run the weight spectral sequence with the supplied `d1` ranks first.
    Filtered,
}

impl FromStr for AssemblyMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "pure" => Ok(AssemblyMode::Pure),
            "filtered" => Ok(AssemblyMode::Filtered),
            other => Err(Error::Parse(format!("unknown assembly mode {other:?}"))),
        }
    }
}

impl fmt::Display for AssemblyMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AssemblyMode::Pure => "pure",
            AssemblyMode::Filtered => "filtered",
        })
    }
}

pub fn assemble_datum(summands: &SummandTable, mode: AssemblyMode) -> Result<PerverseDatum> {
    summands.validate()?;
    let mut datum = PerverseDatum::default();
    for support in summands.supports() {
        let poly = match mode {
            AssemblyMode::Pure => summands
                .summands
                .iter()
                .filter(|s| s.support == support)
                .fold(HalfLaurent::zero(), |acc, s| &acc + &s.poly),
            AssemblyMode::Filtered => {
                let e2 = e2_from_e1(&summands.page(&support)?)?;
                HalfLaurent::from_q(
                    e2.iter().map(|(&(i, j), &d)| (i + j, int(d as i64))),
                    Window::Polynomial,
                )
            }
        };
        datum.insert(support, poly)?;
    }
    Ok(datum)
}

/// A stratum of the moduli space with its Euler characteristic and the
/// (constant) value of the Behrend function on it.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Stratum {
    pub euler: i64,
    pub nu: i64,
}

/// `Σ e · ν`.
pub fn behrend_euler_check(strata: &[Stratum]) -> i64 {
    strata.iter().map(|s| s.euler * s.nu).sum()
}

/// Outcome of [`versal_identity_check`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VersalCheck {
    pub holds: bool,
    /// `Σ e_n q^{n+1-g} - q/(1+q)^2 · Σ χ_i q^i`, as far as both sides are known.
    pub residual: HalfLaurent,
}

fn jacobian_side(jac: &HalfLaurent, hi: i64) -> Result<HalfLaurent> {
    if !jac.is_polynomial() {
        return Err(Error::Window("Jacobian datum must be a polynomial".into()));
    }
    jac.require_integer_exponents()?;
    if !jac.is_symmetric() {
        return Err(Error::Asymmetric);
    }
    let depth = jac.min_exponent().map_or(0, |v| -v.min(0));
    Ok((&kernel_plus(0, hi + depth) * jac).truncate(hi))
}

/// Compares `Σ_{n=0}^{N} e(C^[n]) q^{n+1-g}` with
/// `q/(1+q)^2 · Σ χ(ᵖHⁱ) qⁱ` through `q^{N+1-g}`.
///
/// `hilb` holds the Hilbert-scheme Euler characteristics with the sign
/// twist `(-1)^n` already applied.
pub fn versal_identity_check(hilb: &[BigInt], jac: &HalfLaurent, g: i64) -> Result<VersalCheck> {
    if hilb.is_empty() {
        return Err(Error::Invalid("need at least e(C^[0])".into()));
    }
    let top = hilb.len() as i64 - 1 + 1 - g;
    let hi = 2 * top;
    let lhs = HalfLaurent::from_q(
        hilb.iter().enumerate().map(|(n, e)| (n as i64 + 1 - g, from_bigint(e))),
        Window::Through(hi),
    );
    let rhs = jacobian_side(jac, hi)?;
    let residual = &lhs - &rhs;
    Ok(VersalCheck {
        holds: residual.is_zero(),
        residual,
    })
}

/// The `e(C^[n])`, `n = 0..=n_max`, that satisfy the identity for `jac`.
pub fn hilbert_euler_from_jacobian(jac: &HalfLaurent, g: i64, n_max: usize) -> Result<Vec<BigInt>> {
    let top = n_max as i64 + 1 - g;
    let rhs = jacobian_side(jac, 2 * top)?;
    if let Some(low) = rhs.min_exponent() {
        if low < 2 * (1 - g) {
            return Err(Error::Residual {
                location: String::new(),
                reason: format!("term q^{} lies below q^{}", low / 2, 1 - g),
            });
        }
    }
    (0..=n_max as i64)
        .map(|n| {
            let c: Rational = rhs.coeff_q(n + 1 - g);
            to_integer(&c).ok_or_else(|| Error::NotIntegral {
                location: format!("n={n}"),
                value: c,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::genus::recompose;

    fn y(coeffs: &[(i64, i64)]) -> HalfLaurent {
        HalfLaurent::from_q(coeffs.iter().map(|&(e, c)| (e, int(c))), Window::Polynomial)
    }

    #[test]
    fn pointwise_decomposition() {
        let d = PerverseDatum::new([
            ("a".to_string(), y(&[(1, 1), (0, 2), (-1, 1)])),
            ("b".to_string(), y(&[(1, 3), (0, 1), (-1, 3)])),
        ])
        .unwrap();
        let v = gv_from_perverse(&d).unwrap();
        assert_eq!(v["a"], GenusVector::from_i64(&[(1, 1)]));
        assert_eq!(v["b"], GenusVector::from_i64(&[(1, 3), (0, -5)]));
        assert!(PerverseDatum::new([("c".to_string(), y(&[(1, 1)]))]).is_err());
    }

    #[test]
    fn versal_identity_for_nodal_and_rational_curves() {
        let nodal = recompose(&GenusVector::from_i64(&[(0, -1), (1, 1)])).unwrap();
        let hilb: Vec<BigInt> = [1, -1, 2, -3, 4, -5].iter().map(|&x| BigInt::from(x)).collect();
        assert!(versal_identity_check(&hilb, &nodal, 1).unwrap().holds);
        assert_eq!(hilbert_euler_from_jacobian(&nodal, 1, 5).unwrap(), hilb);

        let rational = HalfLaurent::one();
        let hilb: Vec<BigInt> = (0..6).map(|n| BigInt::from(if n % 2 == 0 { n + 1 } else { -(n + 1) })).collect();
        assert!(versal_identity_check(&hilb, &rational, 0).unwrap().holds);
        let mut broken = hilb.clone();
        broken[3] += 1;
        let check = versal_identity_check(&broken, &rational, 0).unwrap();
        assert!(!check.holds);
        assert_eq!(check.residual.coeff_q(4), int(1));
    }

    #[test]
    fn behrend_sums() {
        assert_eq!(behrend_euler_check(&[Stratum { euler: 1, nu: 1 }]), 1);
        assert_eq!(
            behrend_euler_check(&[Stratum { euler: 2, nu: 3 }, Stratum { euler: -1, nu: 4 }]),
            2
        );
    }
}
