//! Reiter weights built from Følner sets, and the superlevel-set slicing
//! that turns a weight function back into a family of sets.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::FolnerSequence;
use crate::error::{Error, Result};
use crate::group::{Element, FiniteSet, Group};
use crate::rational::BigRational;

/// A finitely supported probability weight on a group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReiterWeights {
    group: Group,
    weights: BTreeMap<Element, BigRational>,
    total: BigRational,
}

impl ReiterWeights {
    /// Validates that every weight is non-negative, every element belongs to
    /// `group`, and the weights sum to exactly 1. Zero weights are dropped.
    pub fn new(group: Group, weights: impl IntoIterator<Item = (Element, BigRational)>) -> Result<Self> {
        let mut table = BTreeMap::new();
        let mut total = BigRational::zero();
        for (x, w) in weights {
            if !group.contains(&x) {
                return Err(Error::Domain(format!("{x} is not an element of {group}")));
            }
            if w.is_negative() {
                return Err(Error::Domain(format!("negative weight {w} at {x}")));
            }
            if w.is_zero() {
                continue;
            }
            total += &w;
            if table.insert(x.clone(), w).is_some() {
                return Err(Error::Domain(format!("{x} listed twice")));
            }
        }
        if !total.is_one() {
            return Err(Error::Domain(format!("weights sum to {total}, not 1")));
        }
        Ok(ReiterWeights { group, weights: table, total })
    }

    /// No validation; `total` is recomputed from the table. Used for
    /// negative controls and for tables already known to be normalised.
    pub fn from_table_unchecked(group: Group, weights: BTreeMap<Element, BigRational>) -> Self {
        let total = weights.values().fold(BigRational::zero(), |acc, w| acc + w);
        ReiterWeights { group, weights, total }
    }

    pub fn group(&self) -> Group {
        self.group
    }

    pub fn support(&self) -> FiniteSet {
        FiniteSet::from_sorted_unchecked(self.weights.keys().cloned().collect())
    }

    pub fn weight(&self, x: &Element) -> BigRational {
        self.weights.get(x).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn total(&self) -> &BigRational {
        &self.total
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Element, &BigRational)> {
        self.weights.iter()
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// Distinct positive weight values, ascending.
    pub fn levels(&self) -> Vec<BigRational> {
        let mut levels: Vec<BigRational> = self.weights.values().cloned().collect();
        levels.sort();
        levels.dedup();
        levels
    }
}

/// Uniform weights `1/|Φ_N|` on `Φ_N`.
pub fn reiter_from_folner(phi: &FolnerSequence, n: usize) -> Result<ReiterWeights> {
    let set = phi.at(n)?;
    let w = BigRational::new(BigInt::one(), BigInt::from(set.len()));
    Ok(ReiterWeights {
        group: phi.group(),
        weights: set.into_iter().map(|x| (x, w.clone())).collect(),
        total: BigRational::one(),
    })
}

/// `w(x) = |Φ_N ∩ xΦ_N| / |Φ_N|²`, supported on `Φ_N Φ_N⁻¹`.
///
/// `|Φ ∩ xΦ|` counts the pairs `(a, b) ∈ Φ²` with `a b⁻¹ = x`, so one pass
/// over `Φ²` fills the whole table.
pub fn two_sided_reiter(phi: &FolnerSequence, n: usize) -> Result<ReiterWeights> {
    let set = phi.at(n)?;
    let group = phi.group();
    let inverses: Vec<Element> = set.iter().map(|b| group.inv(b)).collect();
    let mut counts: HashMap<Element, u64> = HashMap::new();
    for a in set.iter() {
        for b_inv in &inverses {
            *counts.entry(group.mul(a, b_inv)).or_default() += 1;
        }
    }
    let size = BigInt::from(set.len());
    let denom = &size * &size;
    let weights = counts
        .into_iter()
        .map(|(x, c)| (x, BigRational::new(BigInt::from(c), denom.clone())))
        .collect();
    Ok(ReiterWeights {
        group,
        weights,
        total: BigRational::one(),
    })
}

/// Strict superlevel set `{x : w(x) > h}`.
pub fn slice(w: &ReiterWeights, h: &BigRational) -> Result<FiniteSet> {
    if !h.is_positive() {
        return Err(Error::Domain(format!("slice level must be positive, got {h}")));
    }
    Ok(FiniteSet::from_sorted_unchecked(
        w.weights
            .iter()
            .filter(|(_, v)| *v > h)
            .map(|(x, _)| x.clone())
            .collect(),
    ))
}

/// Exact layer-cake reconstruction of a weight table from its slices.
///
/// With distinct levels `0 = h_0 < h_1 < ... < h_k`, every `x` must satisfy
/// `w(x) = Σ_j (h_{j+1} - h_j) · 1[w(x) > h_j]`, where membership is read
/// off the materialised slices. Also requires the total to be exactly 1 and
/// every weight non-negative.
pub fn unslice_check(w: &ReiterWeights) -> bool {
    if w.weights.values().any(|v| v.is_negative()) {
        return false;
    }
    let stored_total = w.weights.values().fold(BigRational::zero(), |acc, v| acc + v);
    if stored_total != w.total || !w.total.is_one() {
        return false;
    }
    let mut levels = vec![BigRational::zero()];
    levels.extend(w.levels());
    let mut rebuilt: BTreeMap<&Element, BigRational> = w.weights.keys().map(|x| (x, BigRational::zero())).collect();
    for pair in levels.windows(2) {
        let (lo, hi) = (&pair[0], &pair[1]);
        let step = hi - lo;
        // level 0 is not a valid slice height; its slice is the support
        let layer: FiniteSet = if lo.is_zero() {
            w.weights.iter().filter(|(_, v)| v.is_positive()).map(|(x, _)| x.clone()).collect()
        } else {
            match slice(w, lo) {
                Ok(s) => s,
                Err(_) => return false,
            }
        };
        for x in layer.iter() {
            if let Some(acc) = rebuilt.get_mut(x) {
                *acc += &step;
            }
        }
    }
    rebuilt.into_iter().all(|(x, v)| w.weights.get(x) == Some(&v))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn triangle() -> ReiterWeights {
        ReiterWeights::new(
            Group::Integers,
            [(Element::Int(-1), q(1, 4)), (Element::Int(0), q(1, 2)), (Element::Int(1), q(1, 4))],
        )
        .unwrap()
    }

    fn ints(v: &[i64]) -> FiniteSet {
        v.iter().copied().map(Element::Int).collect()
    }

    #[test]
    fn uniform_weights() {
        let w = reiter_from_folner(&FolnerSequence::interval(), 4).unwrap();
        assert_eq!(w.support(), ints(&[0, 1, 2, 3]));
        assert!(w.iter().all(|(_, v)| *v == q(1, 4)));
        assert!(w.total().is_one());
        assert!(unslice_check(&w));
    }

    #[test]
    fn two_sided_on_two_points() {
        let w = two_sided_reiter(&FolnerSequence::interval(), 2).unwrap();
        assert_eq!(w, triangle());
    }

    #[test]
    fn identity_weight_dominates() {
        let phi = FolnerSequence::alt_coset();
        let w = two_sided_reiter(&phi, 5).unwrap();
        let top = w.weight(&Group::Alternating.identity());
        assert_eq!(top, q(1, 12));
        assert!(w.iter().all(|(_, v)| *v <= top));
        assert!(w.total().is_one());
    }

    #[test]
    fn slicing_triangle() {
        let w = triangle();
        assert_eq!(slice(&w, &q(1, 3)).unwrap(), ints(&[0]));
        assert_eq!(slice(&w, &q(1, 5)).unwrap(), ints(&[-1, 0, 1]));
        assert!(slice(&w, &q(1, 2)).unwrap().is_empty());
        assert!(slice(&w, &q(0, 1)).is_err());
        assert!(unslice_check(&w));
    }

    #[test]
    fn corrupted_table_fails_reconstruction() {
        let mut table: BTreeMap<Element, BigRational> = triangle().iter().map(|(x, v)| (x.clone(), v.clone())).collect();
        table.insert(Element::Int(1), q(1, 3));
        assert!(!unslice_check(&ReiterWeights::from_table_unchecked(Group::Integers, table)));
    }

    #[test]
    fn constructor_validates() {
        assert!(ReiterWeights::new(Group::Integers, [(Element::Int(0), q(1, 2))]).is_err());
        assert!(ReiterWeights::new(Group::Integers, [(Element::Int(0), q(3, 2)), (Element::Int(1), q(-1, 2))]).is_err());
        assert!(ReiterWeights::new(Group::Alternating, [(Element::Perm("(1 2)".parse().unwrap()), q(1, 1))]).is_err());
    }
}
