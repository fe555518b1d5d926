use std::fmt;

use crate::error::{Error, Result};

/// Integer curve class of fixed rank.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CurveClass(pub Vec<i64>);

impl CurveClass {
    pub fn new(coords: impl Into<Vec<i64>>) -> Self {
        CurveClass(coords.into())
    }

    pub fn zero(rank: usize) -> Self {
        CurveClass(vec![0; rank])
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn is_effective(&self) -> bool {
        self.0.iter().all(|&c| c >= 0)
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    pub fn add(&self, other: &CurveClass) -> CurveClass {
        CurveClass(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &CurveClass) -> CurveClass {
        CurveClass(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, k: i64) -> CurveClass {
        CurveClass(self.0.iter().map(|a| a * k).collect())
    }

    /// `self / k` when every coordinate is divisible by `k`.
    pub fn divide(&self, k: i64) -> Option<CurveClass> {
        self.0
            .iter()
            .all(|a| a % k == 0)
            .then(|| CurveClass(self.0.iter().map(|a| a / k).collect()))
    }
}

impl fmt::Display for CurveClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// Positive linear functional bounding the classes a series keeps.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DegreeCutoff {
    weights: Vec<i64>,
    bound: i64,
}

impl DegreeCutoff {
    pub fn new(weights: impl Into<Vec<i64>>, bound: i64) -> Result<Self> {
        let weights = weights.into();
        if weights.is_empty() {
            return Err(Error::Invalid("cutoff needs at least one weight".into()));
        }
        if weights.iter().any(|&w| w <= 0) {
            return Err(Error::Invalid("cutoff weights must be positive".into()));
        }
        if bound <= 0 {
            return Err(Error::Invalid("cutoff bound must be positive".into()));
        }
        Ok(DegreeCutoff { weights, bound })
    }

    /// All weights one.
    pub fn total_degree(rank: usize, bound: i64) -> Result<Self> {
        Self::new(vec![1; rank], bound)
    }

    pub fn rank(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self) -> &[i64] {
        &self.weights
    }

    pub fn bound(&self) -> i64 {
        self.bound
    }

    pub fn degree(&self, beta: &CurveClass) -> i64 {
        self.weights.iter().zip(&beta.0).map(|(w, b)| w * b).sum()
    }

    pub fn contains(&self, beta: &CurveClass) -> bool {
        beta.rank() == self.rank() && beta.is_effective() && self.degree(beta) <= self.bound
    }

    /// Longest chain of nonzero effective classes whose sum stays in the cutoff.
    pub fn max_chain(&self) -> i64 {
        self.bound / self.weights.iter().min().copied().unwrap_or(1)
    }

    /// Every effective class within the cutoff, in monoid order.
    pub fn classes(&self) -> Vec<CurveClass> {
        let mut out = Vec::new();
        let mut current = vec![0i64; self.rank()];
        self.enumerate(0, 0, &mut current, &mut out);
        out.sort_by(|a, b| monoid_order(self, a, b));
        out
    }

    fn enumerate(&self, idx: usize, used: i64, current: &mut Vec<i64>, out: &mut Vec<CurveClass>) {
        if idx == self.rank() {
            out.push(CurveClass(current.clone()));
            return;
        }
        let w = self.weights[idx];
        let mut c = 0;
        while used + c * w <= self.bound {
            current[idx] = c;
            self.enumerate(idx + 1, used + c * w, current, out);
            c += 1;
        }
        current[idx] = 0;
    }

    pub(crate) fn check_rank(&self, rank: usize) -> Result<()> {
        if rank != self.rank() {
            return Err(Error::RankMismatch {
                left: self.rank(),
                right: rank,
            });
        }
        Ok(())
    }
}

/// Graded-lexicographic order: by cutoff degree, ties broken lexicographically.
pub fn monoid_order(cutoff: &DegreeCutoff, a: &CurveClass, b: &CurveClass) -> std::cmp::Ordering {
    cutoff
        .degree(a)
        .cmp(&cutoff.degree(b))
        .then_with(|| a.cmp(b))
}

/// Integer matrix with determinant ±1 acting on curve classes.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LatticeMap {
    rows: Vec<Vec<i64>>,
}

impl LatticeMap {
    pub fn new(rows: Vec<Vec<i64>>) -> Result<Self> {
        let r = rows.len();
        if r == 0 || rows.iter().any(|row| row.len() != r) {
            return Err(Error::Invalid("lattice map must be a nonempty square matrix".into()));
        }
        let det = determinant(&rows);
        if det.abs() != 1 {
            return Err(Error::NotUnimodular(det));
        }
        Ok(LatticeMap { rows })
    }

    pub fn identity(rank: usize) -> Self {
        let rows = (0..rank)
            .map(|i| (0..rank).map(|j| i64::from(i == j)).collect())
            .collect();
        LatticeMap { rows }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<i64>] {
        &self.rows
    }

    pub fn apply(&self, beta: &CurveClass) -> CurveClass {
        CurveClass(
            self.rows
                .iter()
                .map(|row| row.iter().zip(&beta.0).map(|(m, b)| m * b).sum())
                .collect(),
        )
    }

    /// `self ∘ first`: apply `first`, then `self`.
    pub fn compose(&self, first: &LatticeMap) -> LatticeMap {
        let r = self.rank();
        let rows = (0..r)
            .map(|i| {
                (0..r)
                    .map(|j| (0..r).map(|k| self.rows[i][k] * first.rows[k][j]).sum())
                    .collect()
            })
            .collect();
        LatticeMap { rows }
    }

    /// Integer inverse through the adjugate.
    pub fn inverse(&self) -> LatticeMap {
        let r = self.rank();
        let det = determinant(&self.rows);
        let rows = (0..r)
            .map(|i| {
                (0..r)
                    .map(|j| {
                        // adj[i][j] = cofactor[j][i]
                        let minor: Vec<Vec<i64>> = (0..r)
                            .filter(|&a| a != j)
                            .map(|a| {
                                (0..r)
                                    .filter(|&b| b != i)
                                    .map(|b| self.rows[a][b])
                                    .collect()
                            })
                            .collect();
                        let sign = if (i + j) % 2 == 0 { 1 } else { -1 };
                        sign * determinant(&minor) * det
                    })
                    .collect()
            })
            .collect();
        LatticeMap { rows }
    }
}

fn determinant(m: &[Vec<i64>]) -> i64 {
    let n = m.len();
    match n {
        0 => 1,
        1 => m[0][0],
        _ => (0..n)
            .map(|j| {
                let minor: Vec<Vec<i64>> = m[1..]
                    .iter()
                    .map(|row| {
                        row.iter()
                            .enumerate()
                            .filter(|&(c, _)| c != j)
                            .map(|(_, v)| *v)
                            .collect()
                    })
                    .collect();
                let sign = if j % 2 == 0 { 1 } else { -1 };
                sign * m[0][j] * determinant(&minor)
            })
            .sum(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn class_enumeration() {
        let cutoff = DegreeCutoff::new(vec![1, 2], 3).unwrap();
        let classes = cutoff.classes();
        let expected: Vec<CurveClass> = [[0, 0], [1, 0], [0, 1], [2, 0], [1, 1], [3, 0]]
            .iter()
            .map(|c| CurveClass::new(c.to_vec()))
            .collect();
        assert_eq!(classes, expected);
        assert_eq!(cutoff.max_chain(), 3);
        assert!(DegreeCutoff::new(vec![0, 1], 3).is_err());
    }

    #[test]
    fn lattice_map_inverse_and_composition() {
        let phi = LatticeMap::new(vec![vec![1, 0], vec![1, -1]]).unwrap();
        assert_eq!(phi.apply(&CurveClass::new([1, 0])), CurveClass::new([1, 1]));
        assert_eq!(phi.apply(&CurveClass::new([0, 1])), CurveClass::new([0, -1]));
        assert_eq!(phi.inverse(), phi);
        let shear = LatticeMap::new(vec![vec![1, 1, 0], vec![0, 1, 2], vec![0, 0, 1]]).unwrap();
        assert_eq!(shear.compose(&shear.inverse()), LatticeMap::identity(3));
        assert_eq!(
            LatticeMap::new(vec![vec![2, 0], vec![0, 1]]),
            Err(Error::NotUnimodular(2))
        );
    }
}
