//! Run-length encoding of integer sets as inclusive `[lo, hi]` runs.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{Element, FiniteSet};

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Runs(pub Vec<[i64; 2]>);

impl Runs {
    /// Runs of an ascending sequence of distinct integers.
    pub fn from_sorted(values: impl IntoIterator<Item = i64>) -> Self {
        let mut runs: Vec<[i64; 2]> = Vec::new();
        for v in values {
            match runs.last_mut() {
                Some(last) if last[1] + 1 == v => last[1] = v,
                _ => runs.push([v, v]),
            }
        }
        Runs(runs)
    }

    pub fn from_set(set: &FiniteSet) -> Result<Self> {
        let values = set
            .iter()
            .map(|x| {
                x.as_int()
                    .ok_or_else(|| Error::Domain(format!("run-length encoding needs integers, got {x}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_sorted(values))
    }

    /// Runs of `{lo + i : bits[i]}`.
    pub fn from_bitmap(lo: i64, bits: &[bool]) -> Self {
        Self::from_sorted(bits.iter().enumerate().filter(|(_, b)| **b).map(|(i, _)| lo + i as i64))
    }

    pub fn cardinality(&self) -> u64 {
        self.0.iter().map(|[a, b]| (b - a + 1) as u64).sum()
    }

    pub fn contains(&self, x: i64) -> bool {
        let i = self.0.partition_point(|r| r[1] < x);
        self.0.get(i).is_some_and(|r| r[0] <= x)
    }

    pub fn to_set(&self) -> FiniteSet {
        FiniteSet::from_sorted_unchecked(
            self.0
                .iter()
                .flat_map(|&[a, b]| (a..=b).map(Element::Int))
                .collect(),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let set: FiniteSet = [1, 2, 3, 7, 9, 10].into_iter().map(Element::Int).collect();
        let runs = Runs::from_set(&set).unwrap();
        assert_eq!(runs.0, vec![[1, 3], [7, 7], [9, 10]]);
        assert_eq!(runs.cardinality(), 6);
        assert_eq!(runs.to_set(), set);
        assert!(runs.contains(2) && runs.contains(9) && !runs.contains(8) && !runs.contains(11));
        assert_eq!(serde_json::to_string(&runs).unwrap(), "[[1,3],[7,7],[9,10]]");
    }

    #[test]
    fn bitmap_form() {
        let runs = Runs::from_bitmap(5, &[true, true, false, true]);
        assert_eq!(runs.0, vec![[5, 6], [8, 8]]);
        assert!(Runs::from_bitmap(0, &[]).0.is_empty());
    }
}
