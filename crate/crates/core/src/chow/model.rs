use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::series::CurveClass;

/// Multiplicities of each generator in an effective one-cycle.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Cycle(pub Vec<u32>);

impl Cycle {
    pub fn new(mults: impl Into<Vec<u32>>) -> Self {
        Cycle(mults.into())
    }

    pub fn zero(len: usize) -> Self {
        Cycle(vec![0; len])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&m| m == 0)
    }

    pub fn multiplicities(&self) -> &[u32] {
        &self.0
    }

    pub fn total(&self) -> u64 {
        self.0.iter().map(|&m| u64::from(m)).sum()
    }

    pub fn add(&self, other: &Cycle) -> Cycle {
        Cycle(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn scale(&self, k: u32) -> Cycle {
        Cycle(self.0.iter().map(|a| a * k).collect())
    }

    pub fn divide(&self, k: u32) -> Option<Cycle> {
        self.0
            .iter()
            .all(|a| a % k == 0)
            .then(|| Cycle(self.0.iter().map(|a| a / k).collect()))
    }
}

impl fmt::Display for Cycle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, m) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{m}")?;
        }
        write!(f, "]")
    }
}

/// Orders cycles by total multiplicity, then lexicographically; every
/// proper summand of a cycle comes first.
pub fn cycle_order(a: &Cycle, b: &Cycle) -> std::cmp::Ordering {
    a.total().cmp(&b.total()).then_with(|| a.cmp(b))
}

/// An irreducible cycle support and its curve class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    pub label: String,
    pub class: CurveClass,
}

/// A stratum of the Chow model: a cycle with its Euler weight.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Point {
    pub cycle: Cycle,
    pub euler: i64,
    pub label: Option<String>,
}

/// Finite Euler-weighted model of the cycle monoid.
///
/// The zero cycle is always present with weight one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChowModel {
    rank: usize,
    generators: Vec<Generator>,
    points: BTreeMap<Cycle, Point>,
}

impl ChowModel {
    pub fn new(rank: usize, generators: Vec<Generator>, points: Vec<Point>) -> Result<Self> {
        if generators.is_empty() {
            return Err(Error::Invalid("a Chow model needs at least one generator".into()));
        }
        for g in &generators {
            if g.class.rank() != rank {
                return Err(Error::RankMismatch {
                    left: rank,
                    right: g.class.rank(),
                });
            }
            if !g.class.is_effective() || g.class.is_zero() {
                return Err(Error::Invalid(format!(
                    "generator {} has class {} which is not effective and nonzero",
                    g.label, g.class
                )));
            }
        }
        let m = generators.len();
        let mut map = BTreeMap::new();
        let mut labels = std::collections::BTreeSet::new();
        for p in points {
            if p.cycle.len() != m {
                return Err(Error::Invalid(format!(
                    "cycle {} has {} entries but the model has {m} generators",
                    p.cycle,
                    p.cycle.len()
                )));
            }
            if p.cycle.is_zero() && p.euler != 1 {
                return Err(Error::Invalid("the zero cycle must have Euler weight 1".into()));
            }
            if let Some(label) = &p.label {
                if !labels.insert(label.clone()) {
                    return Err(Error::Invalid(format!("duplicate point label {label}")));
                }
            }
            if map.contains_key(&p.cycle) {
                return Err(Error::Invalid(format!("duplicate cycle {}", p.cycle)));
            }
            map.insert(p.cycle.clone(), p);
        }
        let zero = Cycle::zero(m);
        map.entry(zero.clone()).or_insert(Point {
            cycle: zero,
            euler: 1,
            label: None,
        });
        Ok(ChowModel {
            rank,
            generators,
            points: map,
        })
    }

    /// One generator of class `class` and the points `0, γ, 2γ, …, top·γ`,
    /// all of weight one.
    pub fn single_support(class: CurveClass, top: u32) -> Result<Self> {
        let rank = class.rank();
        let points = (0..=top)
            .map(|k| Point {
                cycle: Cycle::new([k]),
                euler: 1,
                label: None,
            })
            .collect();
        Self::new(
            rank,
            vec![Generator {
                label: "C".into(),
                class,
            }],
            points,
        )
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn zero_cycle(&self) -> Cycle {
        Cycle::zero(self.generators.len())
    }

    /// Points in lexicographic cycle order.
    pub fn points(&self) -> impl Iterator<Item = &Point> {
        self.points.values()
    }

    /// Nonzero cycles with every proper summand before the cycle itself.
    pub fn ordered_cycles(&self) -> Vec<Cycle> {
        let mut cycles: Vec<Cycle> = self.points.keys().filter(|c| !c.is_zero()).cloned().collect();
        cycles.sort_by(cycle_order);
        cycles
    }

    pub fn contains(&self, cycle: &Cycle) -> bool {
        self.points.contains_key(cycle)
    }

    pub fn point(&self, cycle: &Cycle) -> Option<&Point> {
        self.points.get(cycle)
    }

    pub fn euler(&self, cycle: &Cycle) -> Option<i64> {
        self.points.get(cycle).map(|p| p.euler)
    }

    pub fn cycle_by_label(&self, label: &str) -> Option<&Cycle> {
        self.points
            .values()
            .find(|p| p.label.as_deref() == Some(label))
            .map(|p| &p.cycle)
    }

    /// `Σ mult_i · class(gen_i)`.
    pub fn class_of(&self, cycle: &Cycle) -> CurveClass {
        self.generators
            .iter()
            .zip(&cycle.0)
            .fold(CurveClass::zero(self.rank), |acc, (g, &m)| {
                acc.add(&g.class.scale(i64::from(m)))
            })
    }

    pub(crate) fn require(&self, cycle: &Cycle) -> Result<&Point> {
        self.points
            .get(cycle)
            .ok_or_else(|| Error::OutsideModel(cycle.to_string()))
    }
}
