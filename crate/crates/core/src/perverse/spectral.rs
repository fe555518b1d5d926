use std::collections::BTreeMap;

use crate::error::{Error, Result};

/// Dimensions of an `E1` page and ranks of `d1: E1^{i,j} -> E1^{i+1,j}`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SpectralPage {
    pub e1: BTreeMap<(i64, i64), u64>,
    pub d1_ranks: BTreeMap<(i64, i64), u64>,
}

impl SpectralPage {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_dim(mut self, i: i64, j: i64, dim: u64) -> Self {
        *self.e1.entry((i, j)).or_insert(0) += dim;
        self
    }

    pub fn with_rank(mut self, i: i64, j: i64, rank: u64) -> Self {
        *self.d1_ranks.entry((i, j)).or_insert(0) += rank;
        self
    }

    pub fn dim(&self, i: i64, j: i64) -> u64 {
        self.e1.get(&(i, j)).copied().unwrap_or(0)
    }

    pub fn rank(&self, i: i64, j: i64) -> u64 {
        self.d1_ranks.get(&(i, j)).copied().unwrap_or(0)
    }

    /// `Σ (-1)^{i+j} dim E1^{i,j}`.
    pub fn euler_characteristic(&self) -> i64 {
        self.e1
            .iter()
            .map(|(&(i, j), &d)| if (i + j) % 2 == 0 { d as i64 } else { -(d as i64) })
            .sum()
    }
}

/// `dim E2^{i,j} = dim E1^{i,j} - rank d1^{i,j} - rank d1^{i-1,j}`.
///
/// The sequence is taken to degenerate at `E2`, so this is also `E∞`.
/// Zero entries are omitted from the result.
pub fn e2_from_e1(page: &SpectralPage) -> Result<BTreeMap<(i64, i64), u64>> {
    for (&(i, j), &r) in &page.d1_ranks {
        let bound = page.dim(i, j).min(page.dim(i + 1, j));
        if r > bound {
            return Err(Error::Spectral {
                i,
                j,
                reason: format!("rank {r} exceeds min(dim E1^{{{i},{j}}}, dim E1^{{{},{j}}}) = {bound}", i + 1),
            });
        }
    }
    let mut e2 = BTreeMap::new();
    for (&(i, j), &d) in &page.e1 {
        let lost = page.rank(i, j) + page.rank(i - 1, j);
        if lost > d {
            return Err(Error::Spectral {
                i,
                j,
                reason: format!("differentials of total rank {lost} exceed dimension {d}"),
            });
        }
        if d > lost {
            e2.insert((i, j), d - lost);
        }
    }
    Ok(e2)
}

/// `Σ (-1)^{i+j} dim` of a page given as a dimension map.
pub fn page_euler_characteristic(page: &BTreeMap<(i64, i64), u64>) -> i64 {
    page.iter()
        .map(|(&(i, j), &d)| if (i + j) % 2 == 0 { d as i64 } else { -(d as i64) })
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_ranks_are_identity() {
        let page = SpectralPage::new().with_dim(0, 0, 2).with_dim(1, -1, 5);
        assert_eq!(e2_from_e1(&page).unwrap(), page.e1);
    }

    #[test]
    fn single_differential() {
        let page = SpectralPage::new().with_dim(0, 0, 3).with_dim(1, 0, 1).with_rank(0, 0, 1);
        let e2 = e2_from_e1(&page).unwrap();
        assert_eq!(e2.get(&(0, 0)), Some(&2));
        assert_eq!(e2.get(&(1, 0)), None);
        assert_eq!(page_euler_characteristic(&e2), page.euler_characteristic());
    }

    #[test]
    fn enriques_point() {
        for n in 2..=9u64 {
            let page = SpectralPage::new().with_dim(0, -1, n).with_dim(1, -1, n).with_rank(0, -1, n - 1);
            let e2 = e2_from_e1(&page).unwrap();
            assert_eq!(e2[&(0, -1)], 1);
            assert_eq!(e2[&(1, -1)], 1);
        }
    }

    #[test]
    fn inconsistent_ranks() {
        let page = SpectralPage::new().with_dim(0, 0, 1).with_dim(1, 0, 3).with_rank(0, 0, 2);
        assert!(matches!(e2_from_e1(&page), Err(Error::Spectral { i: 0, j: 0, .. })));
        let page = SpectralPage::new()
            .with_dim(-1, 0, 2)
            .with_dim(0, 0, 2)
            .with_dim(1, 0, 2)
            .with_rank(-1, 0, 2)
            .with_rank(0, 0, 1);
        assert!(matches!(e2_from_e1(&page), Err(Error::Spectral { i: 0, j: 0, .. })));
    }
}
