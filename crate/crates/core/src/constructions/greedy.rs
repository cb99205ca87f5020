use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{Element, FiniteSet, Group};
use crate::rational::{ratio, Rational};

/// Greedy maximal `S′ ⊆ S` whose translates `f·S′`, `f ∈ F`, are pairwise
/// disjoint. Elements of `S` are taken in the set's order and accepted iff
/// no `f·s` is already covered by an accepted translate.
///
/// Maximality gives `F⁻¹F·S′ ⊇ S`: a rejected `s` has `f₁s = f₂s′` for some
/// accepted `s′`, so `s ∈ F⁻¹F s′`.
pub fn greedy_disjoint_cover(group: Group, s: &FiniteSet, f: &FiniteSet) -> Result<FiniteSet> {
    if f.is_empty() {
        return Err(Error::Domain("the translate set F must be non-empty".into()));
    }
    let mut occupied: HashSet<Element> = HashSet::with_capacity(s.len().min(1 << 20) * f.len());
    let mut kept = Vec::new();
    let mut images = Vec::with_capacity(f.len());
    for x in s.iter() {
        images.clear();
        images.extend(f.iter().map(|g| group.mul(g, x)));
        if images.iter().any(|y| occupied.contains(y)) {
            continue;
        }
        occupied.extend(images.drain(..));
        kept.push(x.clone());
    }
    Ok(FiniteSet::from_sorted_unchecked(kept))
}

/// Brute-force check of the greedy postconditions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GreedyCheck {
    pub subset: bool,
    pub disjoint: bool,
    pub covers: bool,
    pub maximal: bool,
}

impl GreedyCheck {
    pub fn holds(&self) -> bool {
        self.subset && self.disjoint && self.covers && self.maximal
    }
}

/// Re-checks `S′ ⊆ S`, pairwise disjointness of `f·S′`, `F⁻¹F·S′ ⊇ S`, and
/// that no element of `S ∖ S′` can be added, each directly from the
/// definitions.
pub fn check_greedy(group: Group, s: &FiniteSet, f: &FiniteSet, s_prime: &FiniteSet) -> GreedyCheck {
    let subset = s_prime.is_subset(s);
    let translates: Vec<FiniteSet> = f
        .iter()
        .map(|g| s_prime.iter().map(|x| group.mul(g, x)).collect())
        .collect();
    let mut disjoint = true;
    for i in 0..translates.len() {
        for j in i + 1..translates.len() {
            if !translates[i].is_disjoint(&translates[j]) {
                disjoint = false;
            }
        }
    }
    let spread = group.product_set(&group.inverse_set(f), f);
    let cover = group.product_set(&spread, s_prime);
    let covers = s.is_subset(&cover);
    let union: FiniteSet = translates.iter().flat_map(|t| t.iter().cloned()).collect();
    // the translates of a new x are distinct by cancellation, so adding x
    // is blocked exactly when one of them is already covered
    let maximal = s
        .iter()
        .filter(|x| !s_prime.contains(x))
        .all(|x| f.iter().any(|g| union.contains(&group.mul(g, x))));
    GreedyCheck {
        subset,
        disjoint,
        covers,
        maximal,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelCertificate {
    pub level: usize,
    pub translates: usize,
    pub members: usize,
    #[serde(with = "crate::rational::repr")]
    pub density: Rational,
    /// `|F_n·S_n ∖ W|`: translate mass falling outside the window.
    pub leak: usize,
    /// `n·|S_n| = |F_n S_n| ≤ |W| + leak`, i.e. density ≤ (1 + leak/|W|)/n.
    pub density_bounded: bool,
    pub disjoint: bool,
    pub covers_previous: bool,
    pub nested: bool,
}

/// Decreasing sets `W = S_0 ⊇ S_1 ⊇ ...` where `S_n` is the greedy cover of
/// `S_{n-1}` with `F_n = {g_1, ..., g_{size(n)}}`, `g_i = enumerate(i - 1)`.
/// Since `S_{n-1} ⊆ F_n⁻¹F_n S_n` at every level,
/// `W ⊆ (F_1⁻¹F_1)⋯(F_n⁻¹F_n)·S_n`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SyndeticFamily {
    pub group: Group,
    pub generators: Vec<Element>,
    pub sizes: Vec<usize>,
    pub levels: Vec<FiniteSet>,
    pub certificates: Vec<LevelCertificate>,
    pub window_too_small: bool,
}

impl SyndeticFamily {
    /// `S_n`, with `S_0` the window.
    pub fn level(&self, n: usize) -> &FiniteSet {
        &self.levels[n]
    }

    pub fn depth(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn translates(&self, n: usize) -> FiniteSet {
        self.generators[..self.sizes[n - 1]].iter().cloned().collect()
    }
}

/// `size(n) = n`, the literal family.
pub fn shrinking_syndetic_family(group: Group, depth: usize, window: &FiniteSet) -> Result<SyndeticFamily> {
    let sizes: Vec<usize> = (1..=depth).collect();
    syndetic_family_with_sizes(group, &sizes, window)
}

/// The family with `|F_n| = sizes[n - 1]`, which must be strictly increasing.
/// A fast-growing schedule realises a subsequence of the literal family's
/// density bounds with one greedy pass per kept level.
pub fn syndetic_family_with_sizes(group: Group, sizes: &[usize], window: &FiniteSet) -> Result<SyndeticFamily> {
    if sizes.is_empty() || sizes[0] == 0 || sizes.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Domain("translate counts must be positive and strictly increasing".into()));
    }
    if window.is_empty() {
        return Err(Error::Domain("empty window".into()));
    }
    let max = *sizes.last().expect("non-empty");
    let generators: Vec<Element> = group.elements().take(max).collect();
    let mut levels = vec![window.clone()];
    let mut certificates = Vec::with_capacity(sizes.len());
    let mut window_too_small = false;
    for (i, &size) in sizes.iter().enumerate() {
        let f: FiniteSet = generators[..size].iter().cloned().collect();
        let prev = &levels[i];
        let next = greedy_disjoint_cover(group, prev, &f)?;
        let image: Vec<Element> = f.iter().flat_map(|g| next.iter().map(move |x| group.mul(g, x))).collect();
        let image_set: FiniteSet = image.iter().cloned().collect();
        let disjoint = image_set.len() == image.len();
        let leak = image_set.len() - image_set.intersection_len(window);
        let spread = group.product_set(&group.inverse_set(&f), &f);
        let covers_previous = prev.is_subset(&group.product_set(&spread, &next));
        let density = ratio(next.len(), window.len());
        let density_bounded = size * next.len() <= window.len() + leak;
        if next.is_empty() {
            window_too_small = true;
        }
        certificates.push(LevelCertificate {
            level: i + 1,
            translates: size,
            members: next.len(),
            density,
            leak,
            density_bounded,
            disjoint,
            covers_previous,
            nested: next.is_subset(prev),
        });
        levels.push(next);
    }
    Ok(SyndeticFamily {
        group,
        generators,
        sizes: sizes.to_vec(),
        levels,
        certificates,
        window_too_small,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> FiniteSet {
        v.iter().copied().map(Element::Int).collect()
    }

    #[test]
    fn greedy_examples() {
        let z = Group::Integers;
        let s = FiniteSet::interval(0, 9);
        assert_eq!(greedy_disjoint_cover(z, &s, &ints(&[0, 1])).unwrap(), ints(&[0, 2, 4, 6, 8]));
        assert_eq!(greedy_disjoint_cover(z, &s, &ints(&[0, 2])).unwrap(), ints(&[0, 1, 4, 5, 8, 9]));
        assert_eq!(greedy_disjoint_cover(z, &s, &ints(&[0])).unwrap(), s);
        assert!(greedy_disjoint_cover(z, &s, &FiniteSet::new()).is_err());
        for f in [ints(&[0, 1]), ints(&[0, 2]), ints(&[-3, 1, 4])] {
            let sp = greedy_disjoint_cover(z, &s, &f).unwrap();
            assert!(check_greedy(z, &s, &f, &sp).holds());
        }
    }

    #[test]
    fn check_catches_broken_covers() {
        let z = Group::Integers;
        let s = FiniteSet::interval(0, 9);
        let f = ints(&[0, 1]);
        let c = check_greedy(z, &s, &f, &ints(&[0, 1, 4]));
        assert!(!c.disjoint);
        let c = check_greedy(z, &s, &f, &ints(&[0, 6]));
        assert!(!c.covers && !c.maximal);
    }

    #[test]
    fn greedy_in_alternating_group() {
        let a = Group::Alternating;
        let s = a.exhaustion(2).unwrap();
        let f: FiniteSet = a.elements().take(3).collect();
        let sp = greedy_disjoint_cover(a, &s, &f).unwrap();
        assert!(check_greedy(a, &s, &f, &sp).holds());
    }

    #[test]
    fn literal_family_on_integers() {
        let w = FiniteSet::interval(0, 999);
        let fam = shrinking_syndetic_family(Group::Integers, 3, &w).unwrap();
        assert!(!fam.window_too_small);
        assert!(fam.level(2).len() * 2 <= w.len());
        assert!(fam.level(2).is_subset(fam.level(1)));
        for c in &fam.certificates {
            assert!(c.disjoint && c.covers_previous && c.nested && c.density_bounded, "{c:?}");
        }
        // the translates g_i S_3, i ≤ 3, are pairwise disjoint
        let s3 = fam.level(3);
        let shifted: Vec<FiniteSet> = fam.generators[..3]
            .iter()
            .map(|g| s3.iter().map(|x| Group::Integers.mul(g, x)).collect())
            .collect();
        for i in 0..3 {
            for j in i + 1..3 {
                assert!(shifted[i].is_disjoint(&shifted[j]));
            }
        }
        let depth1 = shrinking_syndetic_family(Group::Integers, 1, &w).unwrap();
        assert_eq!(depth1.level(1), &w);
    }

    #[test]
    fn schedules_must_increase() {
        let w = FiniteSet::interval(0, 99);
        assert!(syndetic_family_with_sizes(Group::Integers, &[2, 2], &w).is_err());
        assert!(syndetic_family_with_sizes(Group::Integers, &[], &w).is_err());
        let fam = syndetic_family_with_sizes(Group::Integers, &[4, 40], &w).unwrap();
        assert!(fam.certificates.iter().all(|c| c.density_bounded));
        let tiny = syndetic_family_with_sizes(Group::Integers, &[500], &FiniteSet::interval(0, 3)).unwrap();
        assert!(!tiny.window_too_small);
        assert_eq!(tiny.level(1).len(), 1);
    }
}
