use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;

use super::convolution::{conv_exp, conv_log, push_multiple_with, LocalFunction, Overflow};
use super::model::{ChowModel, Cycle};
use crate::error::{Error, Result};
use crate::genus::{extract_genus_from_qseries, kernel_minus, GenusVector};
use crate::rational::{from_bigint, int, sign};
use crate::series::{CurveClass, HalfLaurent, Terms};
use crate::transforms::{Convention, GVTable};

/// Local invariants `n_{g,γ}` at points of a Chow model.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LocalGVTable {
    entries: BTreeMap<(Cycle, i64), BigInt>,
}

impl LocalGVTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_entries(entries: impl IntoIterator<Item = (Cycle, i64, BigInt)>) -> Result<Self> {
        let mut table = LocalGVTable::new();
        for (c, g, n) in entries {
            let sum = table.get(&c, g) + n;
            table.set(c, g, sum)?;
        }
        Ok(table)
    }

    /// Resolves point labels against `model`.
    pub fn from_labels<'a>(
        model: &ChowModel,
        vectors: impl IntoIterator<Item = (&'a str, &'a GenusVector)>,
    ) -> Result<Self> {
        let mut table = LocalGVTable::new();
        for (label, v) in vectors {
            let cycle = model
                .cycle_by_label(label)
                .ok_or_else(|| Error::OutsideModel(label.to_string()))?
                .clone();
            table.set_genus_vector(&cycle, v)?;
        }
        Ok(table)
    }

    pub fn set(&mut self, cycle: Cycle, g: i64, n: BigInt) -> Result<()> {
        if cycle.is_zero() {
            return Err(Error::Invalid("the zero cycle carries no invariants".into()));
        }
        if n.is_zero() {
            self.entries.remove(&(cycle, g));
        } else {
            self.entries.insert((cycle, g), n);
        }
        Ok(())
    }

    pub fn set_genus_vector(&mut self, cycle: &Cycle, v: &GenusVector) -> Result<()> {
        for (g, n) in v.iter() {
            self.set(cycle.clone(), g, n.clone())?;
        }
        Ok(())
    }

    pub fn get(&self, cycle: &Cycle, g: i64) -> BigInt {
        self.entries
            .get(&(cycle.clone(), g))
            .cloned()
            .unwrap_or_else(BigInt::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Cycle, i64, &BigInt)> {
        self.entries.iter().map(|((c, g), n)| (c, *g, n))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn cycles(&self) -> BTreeSet<Cycle> {
        self.entries.keys().map(|(c, _)| c.clone()).collect()
    }

    pub fn genus_vector(&self, cycle: &Cycle) -> GenusVector {
        GenusVector::from_entries(
            self.iter()
                .filter(|(c, _, _)| *c == cycle)
                .map(|(_, g, n)| (g, n.clone())),
        )
    }

    pub fn min_genus(&self) -> Option<i64> {
        self.entries.keys().map(|(_, g)| *g).min()
    }

    pub fn max_genus(&self) -> Option<i64> {
        self.entries.keys().map(|(_, g)| *g).max()
    }

    fn check_support(&self, model: &ChowModel) -> Result<()> {
        for c in self.cycles() {
            model.require(&c)?;
        }
        Ok(())
    }
}

impl fmt::Display for LocalGVTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (c, g, n)) in self.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "n[g={g}, cycle={c}] = {n}")?;
        }
        Ok(())
    }
}

/// `Σ_k (k)_* (n/k)(-1)^{g-1} kernel(g, k)` in the global `q` convention.
fn local_log(n: &LocalGVTable, model: &ChowModel, hi: i64) -> Result<LocalFunction> {
    let max_total = model.ordered_cycles().last().map_or(1, Cycle::total);
    let mut acc = LocalFunction::zero();
    for cycle in n.cycles() {
        let v = n.genus_vector(&cycle);
        for k in 1..=max_total as u32 {
            if !model.contains(&cycle.scale(k)) {
                continue;
            }
            let value = v.iter().fold(HalfLaurent::zero(), |sum, (g, c)| {
                let coeff = from_bigint(c) * sign(g - 1) / int(i64::from(k));
                &sum + &kernel_minus(g, i64::from(k), hi).scale(&coeff)
            });
            let f = LocalFunction::new([(cycle.clone(), value)]);
            acc = acc.add(&push_multiple_with(&f, k, model, Overflow::Drop)?);
        }
    }
    Ok(acc)
}

/// Local stable-pair function from local invariants.
///
/// In the local convention the value at `γ` is `Σ_n P_{n,γ} q^n` and the
/// kernels are written in `-q`; the global convention substitutes `q -> -q`.
pub fn local_pt_from_gv(
    n: &LocalGVTable,
    model: &ChowModel,
    hi: i64,
    convention: Convention,
) -> Result<LocalFunction> {
    n.check_support(model)?;
    if hi < 0 {
        return Err(Error::Window(format!(
            "window s^{hi} is too shallow to hold the constant term"
        )));
    }
    let exact = n.min_genus().is_none_or(|g| g >= 1);
    let pole = n.max_genus().map_or(0, |g| (g - 1).max(0));
    let chain = model.ordered_cycles().last().map_or(1, Cycle::total) as i64;
    let mut margin = 2 * pole * chain + 2;
    let f = loop {
        let f = conv_exp(&local_log(n, model, hi + margin)?, model)?;
        if exact || f.window().covers(hi) {
            break f;
        }
        margin *= 2;
    };
    let f = if exact { f } else { f.uniform_through(model, hi) };
    match convention {
        Convention::GlobalQ => Ok(f),
        Convention::LocalMinusQ => f.negate_variable(),
    }
}

/// Smallest window at which [`local_gv_from_pt`] recovers `n` from
/// `local_pt_from_gv(n, model, hi, _)`.
pub fn local_resolving_window(n: &LocalGVTable, model: &ChowModel) -> i64 {
    let pole = n.max_genus().map_or(0, |g| (g - 1).max(0));
    let depth = n.min_genus().map_or(0, |g| (-g).max(0));
    let chain = model.ordered_cycles().last().map_or(1, Cycle::total) as i64;
    2 * pole * chain + 2 + 2 * depth
}

/// Inverts [`local_pt_from_gv`], cycle by cycle in order of total
/// multiplicity, stripping the pushforwards of lower cycles.
pub fn local_gv_from_pt(
    p: &LocalFunction,
    model: &ChowModel,
    g_max: i64,
    convention: Convention,
) -> Result<LocalGVTable> {
    let p = match convention {
        Convention::GlobalQ => p.clone(),
        Convention::LocalMinusQ => p.negate_variable()?,
    };
    let log = conv_log(&p, model)?;
    let mut table = LocalGVTable::new();
    for cycle in model.ordered_cycles() {
        let mut rest = log.get(&cycle);
        let hi = rest.window().hi().unwrap_or(0);
        let target = model.require(&cycle)?.euler;
        for k in 2..=cycle.total() as u32 {
            let Some(base) = cycle.divide(k) else { continue };
            let Some(base_weight) = model.euler(&base) else { continue };
            let v = table.genus_vector(&base);
            if v.is_empty() {
                continue;
            }
            if target == 0 {
                return Err(Error::ZeroWeight(cycle.to_string()));
            }
            for (g, c) in v.iter() {
                let coeff = from_bigint(c) * sign(g - 1) / int(i64::from(k)) * int(base_weight)
                    / int(target);
                rest = &rest - &kernel_minus(g, i64::from(k), hi).scale(&coeff);
            }
        }
        let v = extract_genus_from_qseries(&rest, g_max).map_err(|e| e.at(format!("cycle={cycle}")))?;
        table.set_genus_vector(&cycle, &v)?;
    }
    Ok(table)
}

/// `Σ_γ e(γ) f(γ)` grouped by the class of `γ`.
pub fn integrate_function(f: &LocalFunction, model: &ChowModel) -> Result<BTreeMap<CurveClass, HalfLaurent>> {
    f.check_support(model)?;
    let mut out: Terms<CurveClass> = BTreeMap::new();
    for (cycle, value) in f.iter() {
        let e = model.require(cycle)?.euler;
        let term = value.scale(&int(e));
        let class = model.class_of(cycle);
        let sum = match out.remove(&class) {
            Some(existing) => &existing + &term,
            None => term,
        };
        out.insert(class, sum);
    }
    Ok(out)
}

/// `Σ_γ e(γ) n_{g,γ}` grouped by the class of `γ`.
pub fn integrate_table(n: &LocalGVTable, model: &ChowModel) -> Result<GVTable> {
    n.check_support(model)?;
    let mut out = GVTable::new(model.rank());
    for (cycle, g, value) in n.iter() {
        let e = model.require(cycle)?.euler;
        let class = model.class_of(cycle);
        let sum = out.get(&class, g) + value * BigInt::from(e);
        out.set(class, g, sum)?;
    }
    Ok(out)
}
