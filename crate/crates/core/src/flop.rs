//! Flops at the level of series and local tables.
//!
//! A flop `X ⇢ X†` over a common contraction `Y` induces a lattice map `φ`
//! on curve classes. The quotient of the pair series of `X` by its part
//! supported on contracted (fiber) classes is `φ`-equivariant, and local
//! invariants on the Chow model transport along `φ` unchanged.

use std::collections::BTreeMap;

use crate::chow::{ChowModel, Cycle, LocalFunction, LocalGVTable};
use crate::error::{Error, Result};
use crate::rational::{int, Rational};
use crate::series::{CurveClass, DegreeCutoff, GradedSeries, HalfLaurent, LatticeMap};
use crate::transforms::{pt_from_gv, Convention, GVTable};

/// Both sides of a flop: pair series of `X`, `X/Y`, `X†`, `X†/Y`, the map
/// `φ` and a basis of the fiber sublattice of `X`.
///
/// The fiber sublattice of `X†` is the image of the basis under `φ`.
#[derive(Clone, Debug, PartialEq)]
pub struct FlopFixture {
    pub pt_x: GradedSeries,
    pub pt_x_over_y: GradedSeries,
    pub pt_xdag: GradedSeries,
    pub pt_xdag_over_y: GradedSeries,
    pub phi: LatticeMap,
    pub fiber_basis: Vec<CurveClass>,
}

/// Outcome of [`flop_check`].
#[derive(Clone, Debug)]
pub struct FlopReport {
    /// `φ_*(PT(X)/PT(X/Y)) - PT(X†)/PT(X†/Y)` on the classes of the `X†`
    /// cutoff that can be compared.
    pub residual: GradedSeries,
    /// Classes of the `X†` cutoff whose preimage is effective but lies
    /// outside the `X` cutoff.
    pub unresolved: Vec<CurveClass>,
    /// Non-effective images of nonzero quotient terms.
    pub off_cone: Vec<CurveClass>,
}

impl FlopReport {
    pub fn holds(&self) -> bool {
        self.residual.terms().next().is_none()
    }

    /// Turns a nonzero residual into a residual error at its first class.
    pub fn require_zero(&self) -> Result<()> {
        match self.residual.terms().next() {
            None => Ok(()),
            Some((beta, coeff)) => Err(Error::Residual {
                location: format!("beta={beta}"),
                reason: format!("flop residual {coeff}"),
            }),
        }
    }
}

fn rank_of(mut rows: Vec<Vec<Rational>>) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..cols {
        let Some(pivot) = (rank..rows.len()).find(|&r| rows[r][col] != int(0)) else {
            continue;
        };
        rows.swap(rank, pivot);
        let p = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && row[col] != int(0) {
                let f = &row[col] / &p[col];
                for (x, y) in row.iter_mut().zip(&p) {
                    *x -= &f * y;
                }
            }
        }
        rank += 1;
    }
    rank
}

fn to_rows(classes: &[CurveClass]) -> Vec<Vec<Rational>> {
    classes
        .iter()
        .map(|c| c.coords().iter().map(|&x| int(x)).collect())
        .collect()
}

/// True when `beta` lies in the rational span of `basis`.
pub fn in_span(basis: &[CurveClass], beta: &CurveClass) -> bool {
    let base = rank_of(to_rows(basis));
    let mut extended = basis.to_vec();
    extended.push(beta.clone());
    rank_of(to_rows(&extended)) == base
}

fn check_support(series: &GradedSeries, basis: &[CurveClass], side: &str) -> Result<()> {
    for (beta, _) in series.terms() {
        if !in_span(basis, beta) {
            return Err(Error::Invalid(format!(
                "{side} series has a term at {beta} outside the fiber sublattice"
            )));
        }
    }
    Ok(())
}

impl FlopFixture {
    pub fn validate(&self) -> Result<()> {
        let rank = self.phi.rank();
        for s in [&self.pt_x, &self.pt_x_over_y, &self.pt_xdag, &self.pt_xdag_over_y] {
            s.cutoff().check_rank(rank)?;
        }
        for b in &self.fiber_basis {
            if b.rank() != rank {
                return Err(Error::RankMismatch { left: rank, right: b.rank() });
            }
        }
        if self.pt_x.cutoff() != self.pt_x_over_y.cutoff() || self.pt_xdag.cutoff() != self.pt_xdag_over_y.cutoff() {
            return Err(Error::CutoffMismatch);
        }
        check_support(&self.pt_x_over_y, &self.fiber_basis, "X/Y")?;
        check_support(&self.pt_xdag_over_y, &self.fiber_basis_dag(), "X†/Y")
    }

    pub fn fiber_basis_dag(&self) -> Vec<CurveClass> {
        self.fiber_basis.iter().map(|b| self.phi.apply(b)).collect()
    }

    /// Builds all four series from invariants of `X` and `X†`, taking the
    /// relative series from the entries on fiber classes.
    #[allow(clippy::too_many_arguments)]
    pub fn from_gv(
        n_x: &GVTable,
        n_xdag: &GVTable,
        phi: LatticeMap,
        fiber_basis: Vec<CurveClass>,
        cutoff_x: &DegreeCutoff,
        cutoff_xdag: &DegreeCutoff,
        hi: i64,
    ) -> Result<Self> {
        let fiber_dag: Vec<CurveClass> = fiber_basis.iter().map(|b| phi.apply(b)).collect();
        let fiber_part = |n: &GVTable, basis: &[CurveClass]| -> Result<GVTable> {
            GVTable::from_entries(
                n.rank(),
                n.iter()
                    .filter(|(beta, _, _)| in_span(basis, beta))
                    .map(|(beta, g, v)| (beta.clone(), g, v.clone())),
            )
        };
        let fixture = FlopFixture {
            pt_x: pt_from_gv(n_x, cutoff_x, hi, Convention::GlobalQ)?,
            pt_x_over_y: pt_from_gv(&fiber_part(n_x, &fiber_basis)?, cutoff_x, hi, Convention::GlobalQ)?,
            pt_xdag: pt_from_gv(n_xdag, cutoff_xdag, hi, Convention::GlobalQ)?,
            pt_xdag_over_y: pt_from_gv(&fiber_part(n_xdag, &fiber_dag)?, cutoff_xdag, hi, Convention::GlobalQ)?,
            phi,
            fiber_basis,
        };
        fixture.validate()?;
        Ok(fixture)
    }

    /// `X = X†` with `φ` the identity.
    pub fn identity(n: &GVTable, fiber_basis: Vec<CurveClass>, cutoff: &DegreeCutoff, hi: i64) -> Result<Self> {
        let phi = LatticeMap::identity(n.rank());
        Self::from_gv(n, n, phi, fiber_basis, cutoff, cutoff, hi)
    }

    /// One genus-zero curve in each of the classes `(1,0)` and `(0,1)` on `X`,
    /// with `(0,1)` contracted; on `X†` the images `(1,1)` and the flopped
    /// curve `(0,1)`. The map is `φ(a,b) = (a, a-b)`.
    pub fn conifold_pair(bound: i64, hi: i64) -> Result<Self> {
        let n_x = GVTable::from_i64(2, &[(&[1, 0], 0, 1), (&[0, 1], 0, 1)])?;
        let n_xdag = GVTable::from_i64(2, &[(&[1, 1], 0, 1), (&[0, 1], 0, 1)])?;
        let phi = LatticeMap::new(vec![vec![1, 0], vec![1, -1]])?;
        let cutoff = DegreeCutoff::total_degree(2, bound)?;
        Self::from_gv(&n_x, &n_xdag, phi, vec![CurveClass::new([0, 1])], &cutoff, &cutoff, hi)
    }
}

/// Compares `φ_*(PT(X)/PT(X/Y))` with `PT(X†)/PT(X†/Y)`.
///
/// The `X` quotient is pushed onto signed classes. Every class of the `X†`
/// cutoff whose preimage is either non-effective (the `X` side is zero there)
/// or inside the `X` cutoff is compared; images that leave the effective
/// cone are reported, not compared.
pub fn flop_check(fx: &FlopFixture) -> Result<FlopReport> {
    fx.validate()?;
    let quotient = fx.pt_x.div(&fx.pt_x_over_y)?;
    let quotient_dag = fx.pt_xdag.div(&fx.pt_xdag_over_y)?;
    let pushed = quotient.push_signed(&fx.phi);
    let off_cone = pushed
        .iter()
        .filter(|(beta, c)| !beta.is_effective() && !c.is_zero())
        .map(|(beta, _)| beta.clone())
        .collect();
    let inverse = fx.phi.inverse();
    let mut unresolved = Vec::new();
    let mut residual: BTreeMap<CurveClass, HalfLaurent> = BTreeMap::new();
    for beta in quotient_dag.cutoff().classes() {
        let pre = inverse.apply(&beta);
        if pre.is_effective() && !quotient.cutoff().contains(&pre) {
            unresolved.push(beta);
            continue;
        }
        let lhs = pushed.get(&beta).cloned().unwrap_or_else(HalfLaurent::zero);
        let diff = &lhs - &quotient_dag.coeff(&beta);
        if !diff.is_zero() {
            residual.insert(beta, diff);
        }
    }
    Ok(FlopReport {
        residual: GradedSeries::new(quotient_dag.cutoff().clone(), residual)?,
        unresolved,
        off_cone,
    })
}

/// Generator correspondence `model -> model†` induced by `φ`: each generator
/// goes to the unique target generator of class `φ(class)`, ties broken by
/// equal labels.
fn generator_map(phi: &LatticeMap, model: &ChowModel, target: &ChowModel) -> Result<Vec<usize>> {
    if model.rank() != phi.rank() || target.rank() != phi.rank() {
        return Err(Error::RankMismatch { left: model.rank(), right: target.rank() });
    }
    let mut map = Vec::new();
    let mut off_cone = Vec::new();
    for generator in model.generators() {
        let image = phi.apply(&generator.class);
        if !image.is_effective() {
            off_cone.push((generator.class.clone(), image));
            continue;
        }
        let candidates: Vec<usize> = target
            .generators()
            .iter()
            .enumerate()
            .filter(|(_, t)| t.class == image)
            .map(|(i, _)| i)
            .collect();
        let chosen = match candidates.as_slice() {
            [only] => *only,
            [] => {
                return Err(Error::OutsideModel(format!(
                    "no generator of class {image} for {}",
                    generator.label
                )))
            }
            many => many
                .iter()
                .copied()
                .find(|&i| target.generators()[i].label == generator.label)
                .ok_or_else(|| {
                    Error::Invalid(format!(
                        "generator {} has several images of class {image}",
                        generator.label
                    ))
                })?,
        };
        map.push(chosen);
    }
    if !off_cone.is_empty() {
        return Err(Error::LeavesEffectiveCone(off_cone));
    }
    Ok(map)
}

fn transport_cycle(map: &[usize], target_len: usize, cycle: &Cycle, target: &ChowModel) -> Result<Cycle> {
    let mut mults = vec![0u32; target_len];
    for (i, &m) in cycle.multiplicities().iter().enumerate() {
        mults[map[i]] += m;
    }
    let image = Cycle::new(mults);
    target.require(&image)?;
    Ok(image)
}

/// Relabels the support cycles of a local table along `φ`.
pub fn transport_gv(
    n: &LocalGVTable,
    phi: &LatticeMap,
    model: &ChowModel,
    target: &ChowModel,
) -> Result<LocalGVTable> {
    let map = generator_map(phi, model, target)?;
    let len = target.generators().len();
    let mut out = LocalGVTable::new();
    for (cycle, g, value) in n.iter() {
        model.require(cycle)?;
        out.set(transport_cycle(&map, len, cycle, target)?, g, value.clone())?;
    }
    Ok(out)
}

/// Relabels the support of a local function along `φ`.
pub fn transport_function(
    f: &LocalFunction,
    phi: &LatticeMap,
    model: &ChowModel,
    target: &ChowModel,
) -> Result<LocalFunction> {
    let map = generator_map(phi, model, target)?;
    let len = target.generators().len();
    let values = f
        .iter()
        .map(|(cycle, v)| Ok((transport_cycle(&map, len, cycle, target)?, v.clone())))
        .collect::<Result<Vec<_>>>()?;
    Ok(LocalFunction::new(values))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chow::{local_gv_from_pt, local_pt_from_gv, Generator, Point};
    use crate::genus::GenusVector;

    #[test]
    fn span_membership() {
        let basis = [CurveClass::new([0, 1])];
        assert!(in_span(&basis, &CurveClass::new([0, 3])));
        assert!(!in_span(&basis, &CurveClass::new([1, 1])));
        assert!(in_span(&[CurveClass::new([1, 1]), CurveClass::new([1, -1])], &CurveClass::new([5, 2])));
    }

    #[test]
    fn conifold_pair_holds() {
        let fx = FlopFixture::conifold_pair(4, 6).unwrap();
        let report = flop_check(&fx).unwrap();
        assert!(report.holds(), "{}", report.residual);
        assert!(report.off_cone.is_empty());
        // The quotient on X lives on multiples of (1,0) and lands on (k,k).
        let quotient = fx.pt_x.div(&fx.pt_x_over_y).unwrap();
        assert!(quotient.terms().all(|(b, _)| b.coords()[1] == 0));
    }

    #[test]
    fn perturbation_detected() {
        let mut fx = FlopFixture::conifold_pair(4, 6).unwrap();
        let beta = CurveClass::new([1, 1]);
        let bumped = &fx.pt_xdag.coeff(&beta) + &HalfLaurent::monomial(2, int(1));
        let mut terms: Vec<_> = fx.pt_xdag.terms().map(|(b, v)| (b.clone(), v.clone())).collect();
        terms.retain(|(b, _)| b != &beta);
        terms.push((beta.clone(), bumped));
        fx.pt_xdag = GradedSeries::new(fx.pt_xdag.cutoff().clone(), terms).unwrap();
        let report = flop_check(&fx).unwrap();
        assert!(!report.holds());
        let err = report.require_zero().unwrap_err();
        assert!(err.is_check_failure());
        assert_eq!(err.location().as_deref(), Some("beta=(1,1)"));
    }

    #[test]
    fn identity_fixture_holds() {
        let n = GVTable::from_i64(2, &[(&[1, 0], 0, 2), (&[0, 1], 0, 1), (&[1, 1], 1, -1)]).unwrap();
        let cutoff = DegreeCutoff::total_degree(2, 3).unwrap();
        let fx = FlopFixture::identity(&n, vec![CurveClass::new([0, 1])], &cutoff, 4).unwrap();
        assert!(flop_check(&fx).unwrap().holds());
    }

    #[test]
    fn misplaced_relative_series() {
        let mut fx = FlopFixture::conifold_pair(3, 4).unwrap();
        fx.pt_x_over_y = fx.pt_x.clone();
        assert!(matches!(flop_check(&fx), Err(Error::Invalid(_))));
    }

    fn swap_models() -> (ChowModel, ChowModel) {
        let gens = |a: [i64; 2], b: [i64; 2]| {
            vec![
                Generator { label: "C".into(), class: CurveClass::new(a) },
                Generator { label: "D".into(), class: CurveClass::new(b) },
            ]
        };
        let points = || {
            [[1, 0], [0, 1], [2, 0], [1, 1]]
                .into_iter()
                .map(|m| Point { cycle: Cycle::new(m), euler: 1, label: None })
                .collect::<Vec<_>>()
        };
        (
            ChowModel::new(2, gens([1, 0], [1, 1]), points()).unwrap(),
            ChowModel::new(2, gens([1, 1], [1, 0]), points()).unwrap(),
        )
    }

    #[test]
    fn transport_is_compatible_with_local_series() {
        let (model, target) = swap_models();
        let phi = LatticeMap::new(vec![vec![1, 0], vec![1, -1]]).unwrap();
        let mut n = LocalGVTable::new();
        n.set_genus_vector(&Cycle::new([1, 0]), &GenusVector::from_i64(&[(0, -1), (1, 1)])).unwrap();
        n.set_genus_vector(&Cycle::new([0, 1]), &GenusVector::from_i64(&[(0, 1)])).unwrap();
        let moved = transport_gv(&n, &phi, &model, &target).unwrap();
        assert_eq!(moved, n);
        let p = local_pt_from_gv(&n, &model, 8, Convention::LocalMinusQ).unwrap();
        let p_dag = transport_function(&p, &phi, &model, &target).unwrap();
        assert_eq!(local_gv_from_pt(&p_dag, &target, 1, Convention::LocalMinusQ).unwrap(), moved);
        let back = transport_gv(&moved, &phi.inverse(), &target, &model).unwrap();
        assert_eq!(back, n);
    }

    #[test]
    fn exceptional_generator_is_rejected() {
        let model = ChowModel::single_support(CurveClass::new([0, 1]), 2).unwrap();
        let target = ChowModel::single_support(CurveClass::new([0, 1]), 2).unwrap();
        let phi = LatticeMap::new(vec![vec![1, 0], vec![1, -1]]).unwrap();
        let n = LocalGVTable::new();
        assert!(matches!(
            transport_gv(&n, &phi, &model, &target),
            Err(Error::LeavesEffectiveCone(_))
        ));
    }
}
