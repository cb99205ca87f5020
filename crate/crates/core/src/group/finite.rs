use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use super::Element;

/// A finite set of group elements, kept sorted and deduplicated so that
/// iteration order (and everything derived from it) is deterministic.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FiniteSet {
    items: Vec<Element>,
}

impl FiniteSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_sorted_unchecked(items: Vec<Element>) -> Self {
        debug_assert!(items.windows(2).all(|w| w[0] < w[1]));
        FiniteSet { items }
    }

    pub fn singleton(x: Element) -> Self {
        FiniteSet { items: vec![x] }
    }

    /// `{lo, ..., hi}` in ℤ.
    pub fn interval(lo: i64, hi: i64) -> Self {
        FiniteSet {
            items: (lo..=hi).map(Element::Int).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn contains(&self, x: &Element) -> bool {
        self.items.binary_search(x).is_ok()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Element> {
        self.items.iter()
    }

    pub fn as_slice(&self) -> &[Element] {
        &self.items
    }

    pub fn first(&self) -> Option<&Element> {
        self.items.first()
    }

    pub fn is_subset(&self, other: &FiniteSet) -> bool {
        self.len() <= other.len() && self.iter().all(|x| other.contains(x))
    }

    pub fn is_disjoint(&self, other: &FiniteSet) -> bool {
        self.intersection_len(other) == 0
    }

    pub fn union(&self, other: &FiniteSet) -> FiniteSet {
        self.merge(other, |a, b| a || b)
    }

    pub fn intersection(&self, other: &FiniteSet) -> FiniteSet {
        self.merge(other, |a, b| a && b)
    }

    pub fn difference(&self, other: &FiniteSet) -> FiniteSet {
        self.merge(other, |a, b| a && !b)
    }

    pub fn symmetric_difference(&self, other: &FiniteSet) -> FiniteSet {
        self.merge(other, |a, b| a != b)
    }

    pub fn intersection_len(&self, other: &FiniteSet) -> usize {
        let (mut i, mut j, mut n) = (0, 0, 0);
        while i < self.items.len() && j < other.items.len() {
            match self.items[i].cmp(&other.items[j]) {
                Ordering::Less => i += 1,
                Ordering::Greater => j += 1,
                Ordering::Equal => {
                    n += 1;
                    i += 1;
                    j += 1;
                }
            }
        }
        n
    }

    pub fn symmetric_difference_len(&self, other: &FiniteSet) -> usize {
        self.len() + other.len() - 2 * self.intersection_len(other)
    }

    pub fn filter(&self, mut keep: impl FnMut(&Element) -> bool) -> FiniteSet {
        FiniteSet {
            items: self.items.iter().filter(|x| keep(x)).cloned().collect(),
        }
    }

    fn merge(&self, other: &FiniteSet, keep: impl Fn(bool, bool) -> bool) -> FiniteSet {
        let (a, b) = (&self.items, &other.items);
        let (mut i, mut j) = (0, 0);
        let mut out = Vec::new();
        while i < a.len() || j < b.len() {
            let ord = match (a.get(i), b.get(j)) {
                (Some(x), Some(y)) => x.cmp(y),
                (Some(_), None) => Ordering::Less,
                (None, _) => Ordering::Greater,
            };
            match ord {
                Ordering::Less => {
                    if keep(true, false) {
                        out.push(a[i].clone());
                    }
                    i += 1;
                }
                Ordering::Greater => {
                    if keep(false, true) {
                        out.push(b[j].clone());
                    }
                    j += 1;
                }
                Ordering::Equal => {
                    if keep(true, true) {
                        out.push(a[i].clone());
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        FiniteSet { items: out }
    }

    pub fn into_vec(self) -> Vec<Element> {
        self.items
    }
}

impl FromIterator<Element> for FiniteSet {
    fn from_iter<I: IntoIterator<Item = Element>>(iter: I) -> Self {
        let mut items: Vec<Element> = iter.into_iter().collect();
        items.sort_unstable();
        items.dedup();
        FiniteSet { items }
    }
}

impl<'a> IntoIterator for &'a FiniteSet {
    type Item = &'a Element;
    type IntoIter = std::slice::Iter<'a, Element>;

    fn into_iter(self) -> Self::IntoIter {
        self.items.iter()
    }
}

impl IntoIterator for FiniteSet {
    type Item = Element;
    type IntoIter = std::vec::IntoIter<Element>;

    fn into_iter(self) -> Self::IntoIter {
        self.items.into_iter()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> FiniteSet {
        v.iter().copied().map(Element::Int).collect()
    }

    #[test]
    fn set_algebra() {
        let a = ints(&[1, 2, 3, 5]);
        let b = ints(&[2, 5, 8]);
        assert_eq!(a.union(&b), ints(&[1, 2, 3, 5, 8]));
        assert_eq!(a.intersection(&b), ints(&[2, 5]));
        assert_eq!(a.difference(&b), ints(&[1, 3]));
        assert_eq!(a.symmetric_difference(&b), ints(&[1, 3, 8]));
        assert_eq!(a.symmetric_difference_len(&b), 3);
        assert!(ints(&[2, 5]).is_subset(&a));
        assert!(!b.is_subset(&a));
    }

    #[test]
    fn collecting_sorts_and_dedups() {
        let s = ints(&[3, 1, 3, 2]);
        assert_eq!(s.as_slice(), &[Element::Int(1), Element::Int(2), Element::Int(3)]);
        assert_eq!(FiniteSet::interval(-1, 1), ints(&[-1, 0, 1]));
    }
}
