use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::genus::GenusVector;
use crate::rational::Rational;
use crate::series::CurveClass;

fn check_class(rank: usize, beta: &CurveClass) -> Result<()> {
    if beta.rank() != rank {
        return Err(Error::RankMismatch {
            left: rank,
            right: beta.rank(),
        });
    }
    if !beta.is_effective() || beta.is_zero() {
        return Err(Error::Invalid(format!(
            "class {beta} must be effective and nonzero"
        )));
    }
    Ok(())
}

/// Integer invariants `n_{g,beta}` over nonzero effective classes.
///
/// Genus is unrestricted in sign so that tables read off stable-pair series
/// can carry their negative-genus content.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GVTable {
    rank: usize,
    entries: BTreeMap<(CurveClass, i64), BigInt>,
}

impl GVTable {
    pub fn new(rank: usize) -> Self {
        GVTable {
            rank,
            entries: BTreeMap::new(),
        }
    }

    pub fn from_entries(
        rank: usize,
        entries: impl IntoIterator<Item = (CurveClass, i64, BigInt)>,
    ) -> Result<Self> {
        let mut table = GVTable::new(rank);
        for (beta, g, n) in entries {
            let sum = table.get(&beta, g) + n;
            table.set(beta, g, sum)?;
        }
        Ok(table)
    }

    /// Convenience for small literal tables: `(class, genus, value)`.
    pub fn from_i64(rank: usize, entries: &[(&[i64], i64, i64)]) -> Result<Self> {
        Self::from_entries(
            rank,
            entries
                .iter()
                .map(|(beta, g, n)| (CurveClass::new(beta.to_vec()), *g, BigInt::from(*n))),
        )
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn set(&mut self, beta: CurveClass, g: i64, n: BigInt) -> Result<()> {
        check_class(self.rank, &beta)?;
        if n.is_zero() {
            self.entries.remove(&(beta, g));
        } else {
            self.entries.insert((beta, g), n);
        }
        Ok(())
    }

    pub fn set_genus_vector(&mut self, beta: &CurveClass, v: &GenusVector) -> Result<()> {
        for (g, n) in v.iter() {
            self.set(beta.clone(), g, n.clone())?;
        }
        Ok(())
    }

    pub fn get(&self, beta: &CurveClass, g: i64) -> BigInt {
        self.entries
            .get(&(beta.clone(), g))
            .cloned()
            .unwrap_or_else(BigInt::zero)
    }

    /// Entries as `(class, genus, value)`, ordered by class then genus.
    pub fn iter(&self) -> impl Iterator<Item = (&CurveClass, i64, &BigInt)> {
        self.entries.iter().map(|((b, g), n)| (b, *g, n))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn classes(&self) -> BTreeSet<CurveClass> {
        self.entries.keys().map(|(b, _)| b.clone()).collect()
    }

    pub fn genus_vector(&self, beta: &CurveClass) -> GenusVector {
        GenusVector::from_entries(
            self.entries
                .range((beta.clone(), i64::MIN)..=(beta.clone(), i64::MAX))
                .map(|((_, g), n)| (*g, n.clone())),
        )
    }

    pub fn min_genus(&self) -> Option<i64> {
        self.entries.keys().map(|(_, g)| *g).min()
    }

    pub fn max_genus(&self) -> Option<i64> {
        self.entries.keys().map(|(_, g)| *g).max()
    }

    /// True when some entry sits in negative genus.
    pub fn has_negative_genus(&self) -> bool {
        self.min_genus().is_some_and(|g| g < 0)
    }
}

impl fmt::Display for GVTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (beta, g, n)) in self.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "n[g={g}, beta={beta}] = {n}")?;
        }
        Ok(())
    }
}

/// Rational invariants `GW_{g,beta}` over nonzero effective classes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GWTable {
    rank: usize,
    entries: BTreeMap<(CurveClass, i64), Rational>,
}

impl GWTable {
    pub fn new(rank: usize) -> Self {
        GWTable {
            rank,
            entries: BTreeMap::new(),
        }
    }

    pub fn from_entries(
        rank: usize,
        entries: impl IntoIterator<Item = (CurveClass, i64, Rational)>,
    ) -> Result<Self> {
        let mut table = GWTable::new(rank);
        for (beta, g, value) in entries {
            let sum = table.get(&beta, g) + value;
            table.set(beta, g, sum)?;
        }
        Ok(table)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn set(&mut self, beta: CurveClass, g: i64, value: Rational) -> Result<()> {
        check_class(self.rank, &beta)?;
        if g < 0 {
            return Err(Error::NegativeGenus(g));
        }
        if value.is_zero() {
            self.entries.remove(&(beta, g));
        } else {
            self.entries.insert((beta, g), value);
        }
        Ok(())
    }

    pub fn get(&self, beta: &CurveClass, g: i64) -> Rational {
        self.entries
            .get(&(beta.clone(), g))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&CurveClass, i64, &Rational)> {
        self.entries.iter().map(|((b, g), v)| (b, *g, v))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn max_genus(&self) -> Option<i64> {
        self.entries.keys().map(|(_, g)| *g).max()
    }

    /// Drops every entry of genus above `g_max`.
    pub fn up_to_genus(&self, g_max: i64) -> GWTable {
        GWTable {
            rank: self.rank,
            entries: self
                .entries
                .iter()
                .filter(|((_, g), _)| *g <= g_max)
                .map(|(k, v)| (k.clone(), v.clone()))
                .collect(),
        }
    }
}

impl fmt::Display for GWTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (beta, g, v)) in self.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "GW[g={g}, beta={beta}] = {v}")?;
        }
        Ok(())
    }
}
