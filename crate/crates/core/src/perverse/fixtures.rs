//! Built-in data: the Enriques `I_n` double fiber in three normalizations,
//! an elliptic fibration, nodal and cuspidal local curves, and smooth curves.

use super::{assemble_datum, AssemblyMode, PerverseDatum, RankEntry, Stratum, Summand, SummandTable};
use crate::chow::{ChowModel, Cycle, Generator, Point};
use crate::error::{Error, Result};
use crate::genus::{decompose_symmetric, genus_basis, GenusVector};
use crate::rational::{int, sign};
use crate::series::{CurveClass, HalfLaurent, Window};

/// A named datum with, when the geometry supplies them, the strata of the
/// moduli space that compute its genus-zero value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fixture {
    pub name: String,
    pub datum: PerverseDatum,
    pub strata: Option<Vec<Stratum>>,
}

impl Fixture {
    /// Genus decomposition of the datum integrated over its points.
    pub fn invariants(&self) -> Result<GenusVector> {
        decompose_symmetric(&self.datum.total())
    }
}

fn y(coeffs: &[(i64, i64)]) -> HalfLaurent {
    HalfLaurent::from_q(coeffs.iter().map(|&(e, c)| (e, int(c))), Window::Polynomial)
}

fn single(name: &str, label: &str, poly: HalfLaurent, strata: Option<Vec<Stratum>>) -> Result<Fixture> {
    Ok(Fixture {
        name: name.into(),
        datum: PerverseDatum::new([(label.to_string(), poly)])?,
        strata,
    })
}

const ENRIQUES_POINTS: [&str; 4] = ["y1", "y2", "y3", "y4"];

fn check_n(n: u32) -> Result<()> {
    if n < 2 {
        return Err(Error::Invalid(format!("the I_n fiber needs n >= 2, got {n}")));
    }
    Ok(())
}

/// The weight-graded pieces of the vanishing-cycle sheaf for an `I_n`
/// double fiber, pushed to the Chow variety.
///
/// Over each special point `y_i` lie `n` rational curves, each giving
/// `y + y^{-1}` in weight zero, and `n` nodes, each giving a point summand
/// in weights `+1` and `-1`. The intersection complexes of the rank-one
/// local systems on the components `M_k` push forward to zero. The `d1`
/// ranks at each `y_i` are `n - 1` on `E1^{0,-1} -> E1^{1,-1}` and dually
/// on `E1^{-1,1} -> E1^{0,1}`.
pub fn enriques_summands(n: u32) -> Result<SummandTable> {
    check_n(n)?;
    let mut table = SummandTable::default();
    for point in ENRIQUES_POINTS {
        for j in 1..=n {
            table.summands.push(Summand {
                name: format!("IC(C_{point}^{j})"),
                support: point.into(),
                poly: y(&[(-1, 1), (1, 1)]),
                weight: 0,
            });
            for w in [1, -1] {
                table.summands.push(Summand {
                    name: format!("Q_p{point}^{j}[w={w}]"),
                    support: point.into(),
                    poly: HalfLaurent::one(),
                    weight: w,
                });
            }
        }
        for (i, j) in [(0, -1), (-1, 1)] {
            table.ranks.push(RankEntry {
                support: point.into(),
                i,
                j,
                rank: u64::from(n - 1),
            });
        }
    }
    for k in 1..=n {
        table.summands.push(Summand {
            name: format!("IC(L_{k})"),
            support: format!("M{k}"),
            poly: HalfLaurent::zero(),
            weight: 0,
        });
    }
    Ok(table)
}

/// Summands reproducing the tabulated HST column: at each `y_i` the `n`
/// components of the normalization, each contributing `y + y^{-1}`.
pub fn enriques_hst_summands(n: u32) -> Result<SummandTable> {
    check_n(n)?;
    let mut table = SummandTable::default();
    for point in ENRIQUES_POINTS {
        for j in 1..=n {
            table.summands.push(Summand {
                name: format!("IC(normalization_{point}^{j})"),
                support: point.into(),
                poly: y(&[(-1, 1), (1, 1)]),
                weight: 0,
            });
        }
    }
    Ok(table)
}

/// `4 e(C) + n (e(E) - 4)` with Behrend function `-1`, where `C` is the
/// `I_n` cycle (`e = n`) and `E` an elliptic curve.
pub fn enriques_strata(n: u32) -> Vec<Stratum> {
    let n = i64::from(n);
    let mut strata = vec![Stratum { euler: n, nu: -1 }; 4];
    strata.extend(std::iter::repeat_n(Stratum { euler: -4, nu: -1 }, n as usize));
    strata
}

/// The three columns `HST`, `KL`, `ours` for the `I_n` double fiber.
///
/// The HST column is driven by [`enriques_hst_summands`] and carries no
/// strata: its genus-zero value is not a Behrend integral.
pub fn enriques_in(n: u32) -> Result<Vec<Fixture>> {
    let lemma = enriques_summands(n)?;
    Ok(vec![
        Fixture {
            name: "HST".into(),
            datum: assemble_datum(&enriques_hst_summands(n)?, AssemblyMode::Pure)?,
            strata: None,
        },
        Fixture {
            name: "KL".into(),
            datum: assemble_datum(&lemma, AssemblyMode::Pure)?,
            strata: Some(enriques_strata(n)),
        },
        Fixture {
            name: "ours".into(),
            datum: assemble_datum(&lemma, AssemblyMode::Filtered)?,
            strata: Some(enriques_strata(n)),
        },
    ])
}

/// `(name, n_0, n_1, Σ_{g>=2} |n_g|)` for each column.
pub fn enriques_table(n: u32) -> Result<Vec<(String, GenusVector)>> {
    enriques_in(n)?
        .into_iter()
        .map(|f| Ok((f.name.clone(), f.invariants()?)))
        .collect()
}

/// `-e(X) + e(S)(y^{1/2} + y^{-1/2})^2` on the fiber class.
pub fn elliptic_fibration(e_x: i64, e_s: i64) -> Result<Fixture> {
    let poly = &HalfLaurent::constant(int(-e_x)) + &genus_basis(1).scale(&int(e_s));
    single(
        "elliptic-fibration",
        "fiber",
        poly,
        Some(vec![Stratum { euler: e_x, nu: -1 }]),
    )
}

/// Fiberwise data over the base of an elliptic fibration: smooth fibers
/// over a stratum of Euler characteristic `e(S) - e(X)`, nodal fibers over
/// `e(X)` points. Point labels match the datum labels.
pub fn elliptic_fiberwise(e_x: i64, e_s: i64) -> Result<(ChowModel, PerverseDatum)> {
    let fiber = CurveClass::new([1]);
    let model = ChowModel::new(
        1,
        vec![
            Generator { label: "smooth".into(), class: fiber.clone() },
            Generator { label: "nodal".into(), class: fiber },
        ],
        vec![
            Point { cycle: Cycle::new([1, 0]), euler: e_s - e_x, label: Some("smooth".into()) },
            Point { cycle: Cycle::new([0, 1]), euler: e_x, label: Some("nodal".into()) },
        ],
    )?;
    let datum = PerverseDatum::new([
        ("smooth".to_string(), genus_basis(1)),
        ("nodal".to_string(), y(&[(-1, 1), (0, 1), (1, 1)])),
    ])?;
    Ok((model, datum))
}

/// Irreducible rational curve with one node: `n_0 = -1`, `n_1 = 1`.
pub fn nodal_local() -> Result<Fixture> {
    single(
        "nodal",
        "gamma",
        y(&[(-1, 1), (0, 1), (1, 1)]),
        Some(vec![Stratum { euler: 1, nu: -1 }]),
    )
}

/// Irreducible rational curve with one cusp: `n_0 = -2`, `n_1 = 1`.
pub fn cusp_local() -> Result<Fixture> {
    single(
        "cusp",
        "gamma",
        y(&[(-1, 1), (1, 1)]),
        Some(vec![Stratum { euler: 2, nu: -1 }]),
    )
}

/// Smooth curve of genus `g` whose moduli carry Behrend value `nu`:
/// `n_g = (-1)^g nu` and nothing else.
pub fn smooth_curve(g: i64, nu: i64) -> Result<Fixture> {
    if g < 0 {
        return Err(Error::NegativeGenus(g));
    }
    let jacobian_euler = if g == 0 { 1 } else { 0 };
    single(
        &format!("smooth-genus-{g}"),
        "gamma",
        genus_basis(g).scale(&(sign(g) * int(nu))),
        Some(vec![Stratum { euler: jacobian_euler, nu }]),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perverse::behrend_euler_check;

    #[test]
    fn enriques_columns() {
        for n in 2..=9u32 {
            let table = enriques_table(n).unwrap();
            let nn = i64::from(n);
            assert_eq!(table[0].1, GenusVector::from_i64(&[(0, -8 * nn), (1, 4 * nn)]));
            assert_eq!(table[1].1, GenusVector::from_i64(&[(1, 4 * nn)]));
            assert_eq!(table[2].1, GenusVector::from_i64(&[(1, 4)]));
            assert_eq!(behrend_euler_check(&enriques_strata(n)), 0);
        }
    }

    #[test]
    fn ours_datum_per_point() {
        let ours = &enriques_in(3).unwrap()[2];
        assert_eq!(ours.datum.get("y1"), Some(&y(&[(-1, 1), (0, 2), (1, 1)])));
        assert_eq!(ours.datum.get("M1"), Some(&HalfLaurent::zero()));
    }

    #[test]
    fn small_fixtures() {
        assert_eq!(nodal_local().unwrap().invariants().unwrap(), GenusVector::from_i64(&[(0, -1), (1, 1)]));
        assert_eq!(cusp_local().unwrap().invariants().unwrap(), GenusVector::from_i64(&[(0, -2), (1, 1)]));
        assert_eq!(
            elliptic_fibration(7, 3).unwrap().invariants().unwrap(),
            GenusVector::from_i64(&[(0, -7), (1, 3)])
        );
        assert_eq!(
            smooth_curve(3, 2).unwrap().invariants().unwrap(),
            GenusVector::from_i64(&[(3, -2)])
        );
        assert!(enriques_in(1).is_err());
    }
}
