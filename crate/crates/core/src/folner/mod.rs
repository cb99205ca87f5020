//! Følner sequences: built-in families, exact defects, inversion and right
//! translation.
//!
//! Defects are reported as `|Φ_N △ gΦ_N| / |Φ_N|` (left) and
//! `|Φ_N g △ Φ_N| / |Φ_N|` (right). Since `|gΦ_N| = |Φ_N|` this is
//! `2 - 2|Φ_N ∩ gΦ_N|/|Φ_N|`, so it tends to 0 exactly when the overlap
//! ratio tends to 1.

mod reiter;

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{all_of_degree_at_most, Element, FiniteSet, Group, Perm};
use crate::rational::{ratio, Rational};

pub use reiter::{reiter_from_folner, slice, two_sided_reiter, unslice_check, ReiterWeights};

/// Largest `n` accepted by the A(ℕ) coset sequence (`|A_9| = 181440`).
pub const ALT_COSET_MAX_INDEX: usize = 10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Handedness {
    Left,
    Right,
    TwoSided,
}

impl Handedness {
    pub fn is_left(self) -> bool {
        matches!(self, Handedness::Left | Handedness::TwoSided)
    }

    pub fn is_right(self) -> bool {
        matches!(self, Handedness::Right | Handedness::TwoSided)
    }

    fn mirrored(self) -> Self {
        match self {
            Handedness::Left => Handedness::Right,
            Handedness::Right => Handedness::Left,
            Handedness::TwoSided => Handedness::TwoSided,
        }
    }
}

type SetFn = Arc<dyn Fn(usize) -> FiniteSet + Send + Sync>;

/// `N ↦ Φ_N`, a sequence of non-empty finite subsets of a group together
/// with a claimed handedness. The claim is checked empirically through
/// [`left_defect`] and [`right_defect`], never assumed by the kernels.
#[derive(Clone)]
pub struct FolnerSequence {
    name: String,
    group: Group,
    handedness: Handedness,
    first_index: usize,
    last_index: Option<usize>,
    nested: bool,
    at: SetFn,
}

impl fmt::Debug for FolnerSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FolnerSequence")
            .field("name", &self.name)
            .field("group", &self.group)
            .field("handedness", &self.handedness)
            .field("first_index", &self.first_index)
            .field("last_index", &self.last_index)
            .field("nested", &self.nested)
            .finish()
    }
}

impl FolnerSequence {
    /// A sequence from an arbitrary index function. `at` must return a
    /// non-empty set for every index in range.
    pub fn custom(
        name: impl Into<String>,
        group: Group,
        handedness: Handedness,
        first_index: usize,
        at: impl Fn(usize) -> FiniteSet + Send + Sync + 'static,
    ) -> Self {
        FolnerSequence {
            name: name.into(),
            group,
            handedness,
            first_index,
            last_index: None,
            nested: false,
            at: Arc::new(at),
        }
    }

    /// `Φ_N = [0, N)` in ℤ.
    pub fn interval() -> Self {
        Self::custom("interval", Group::Integers, Handedness::TwoSided, 1, |n| {
            FiniteSet::interval(0, n as i64 - 1)
        })
        .assume_nested()
    }

    /// `Φ_N = [1, N]` in ℤ, the classical density window.
    pub fn initial_segment() -> Self {
        Self::custom("initial-segment", Group::Integers, Handedness::TwoSided, 1, |n| {
            FiniteSet::interval(1, n as i64)
        })
        .assume_nested()
    }

    /// `Φ_N = [-N, N]` in ℤ.
    pub fn symmetric_interval() -> Self {
        Self::custom("symmetric-interval", Group::Integers, Handedness::TwoSided, 1, |n| {
            FiniteSet::interval(-(n as i64), n as i64)
        })
        .assume_nested()
    }

    /// `Φ_N = [0, N)^d` in ℤᵈ.
    pub fn lattice_box(d: usize) -> Self {
        let group = if d == 1 { Group::Integers } else { Group::Lattice(d) };
        Self::custom(format!("box{d}"), group, Handedness::TwoSided, 1, move |n| {
            let n = n as i64;
            let mut out = vec![vec![0i64; d]];
            for axis in 0..d {
                out = out
                    .into_iter()
                    .flat_map(|v| {
                        (0..n).map(move |x| {
                            let mut w = v.clone();
                            w[axis] = x;
                            w
                        })
                    })
                    .collect();
            }
            if d == 1 {
                out.into_iter().map(|v| Element::Int(v[0])).collect()
            } else {
                out.into_iter().map(Element::Lattice).collect()
            }
        })
        .assume_nested()
    }

    /// `Φ_N = K_N`, the group's own exhaustion. Two-sided for the locally
    /// finite permutation groups, where every level is a subgroup.
    pub fn exhaustion(group: Group) -> Self {
        let mut seq = Self::custom(format!("exhaustion-{group}"), group, Handedness::TwoSided, 1, move |n| {
            group.exhaustion(n).expect("index checked against last_index")
        })
        .assume_nested();
        if matches!(group, Group::Symmetric | Group::Alternating) {
            seq.last_index = Some(10 - crate::group::PERM_EXHAUSTION_OFFSET as usize);
        }
        seq
    }

    /// `Φ_n = A_{n-1} · h_n` in A(ℕ) with `h_n = (1 n)(2 3)`, for
    /// `4 ≤ n ≤ 10`. A left Følner sequence whose union over `n ≥ 5` has
    /// density 1 yet contains no decreasing finite-products set.
    pub fn alt_coset() -> Self {
        let mut seq = Self::custom("alt-coset", Group::Alternating, Handedness::Left, 4, |n| {
            let h = transposition_pair(n as u32).expect("n >= 4");
            let h = h.as_perm().expect("permutation").clone();
            all_of_degree_at_most(n as u32 - 1, true)
                .into_iter()
                .map(|a| Element::Perm(a.compose(&h)))
                .collect()
        });
        seq.last_index = Some(ALT_COSET_MAX_INDEX);
        seq
    }

    /// Declares `Φ_1 ⊆ Φ_2 ⊆ ...`, so that `Φ_1 ∪ ... ∪ Φ_s = Φ_s`.
    pub fn assume_nested(mut self) -> Self {
        self.nested = true;
        self
    }

    pub fn is_nested(&self) -> bool {
        self.nested
    }

    pub fn with_last_index(mut self, last: usize) -> Self {
        self.last_index = Some(last);
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn group(&self) -> Group {
        self.group
    }

    pub fn handedness(&self) -> Handedness {
        self.handedness
    }

    pub fn first_index(&self) -> usize {
        self.first_index
    }

    pub fn last_index(&self) -> Option<usize> {
        self.last_index
    }

    pub fn check_index(&self, n: usize) -> Result<()> {
        if n < self.first_index || self.last_index.is_some_and(|last| n > last) {
            return Err(Error::InvalidIndex {
                sequence: self.name.clone(),
                index: n,
                first: self.first_index,
            });
        }
        Ok(())
    }

    /// `Φ_N`.
    pub fn at(&self, n: usize) -> Result<FiniteSet> {
        self.check_index(n)?;
        let set = (self.at)(n);
        if set.is_empty() {
            return Err(Error::Domain(format!("{}: Φ_{n} is empty", self.name)));
        }
        Ok(set)
    }

    /// `N ↦ Φ_N^{-1}`. In a discrete (hence unimodular) group this turns a
    /// left Følner sequence into a right one.
    pub fn invert(&self) -> FolnerSequence {
        let inner = self.at.clone();
        let group = self.group;
        FolnerSequence {
            name: format!("inverse({})", self.name),
            group,
            handedness: self.handedness.mirrored(),
            first_index: self.first_index,
            last_index: self.last_index,
            nested: self.nested,
            at: Arc::new(move |n| group.inverse_set(&inner(n))),
        }
    }

    /// `N ↦ Φ_N · h_N`. Right translation leaves left defects unchanged.
    ///
    /// Fails for a right-only sequence in a non-abelian group, where no
    /// handedness survives the translation.
    pub fn translated(
        &self,
        shifts: impl Fn(usize) -> Element + Send + Sync + 'static,
    ) -> Result<FolnerSequence> {
        let abelian = matches!(self.group, Group::Integers | Group::Lattice(_));
        let handedness = if abelian {
            self.handedness
        } else if self.handedness.is_left() {
            Handedness::Left
        } else {
            return Err(Error::Precondition(format!(
                "right translation of the right-only sequence `{}` has no Følner property",
                self.name
            )));
        };
        let inner = self.at.clone();
        let group = self.group;
        Ok(FolnerSequence {
            name: format!("translated({})", self.name),
            group,
            handedness,
            first_index: self.first_index,
            last_index: self.last_index,
            nested: false,
            at: Arc::new(move |n| {
                let h = shifts(n);
                inner(n).iter().map(|x| group.mul(x, &h)).collect()
            }),
        })
    }
}

/// `h_n = (1 n)(2 3)`, an even permutation for `n ≥ 4`.
pub fn transposition_pair(n: u32) -> Result<Element> {
    if n < 4 {
        return Err(Error::Domain(format!(
            "(1 n)(2 3) needs n >= 4 to be a product of disjoint transpositions, got n = {n}"
        )));
    }
    Ok(Element::Perm(Perm::from_cycles(&[[1, n], [2, 3]])?))
}

/// `|Φ_N △ gΦ_N| / |Φ_N|`, exact, in `[0, 2]`.
pub fn left_defect(phi: &FolnerSequence, n: usize, g: &Element) -> Result<Rational> {
    let set = phi.at(n)?;
    let group = phi.group();
    group.multiply(&group.identity(), g)?;
    let moved: FiniteSet = set.iter().map(|x| group.mul(g, x)).collect();
    Ok(ratio(set.symmetric_difference_len(&moved), set.len()))
}

/// `|Φ_N g △ Φ_N| / |Φ_N|`, exact, in `[0, 2]`.
pub fn right_defect(phi: &FolnerSequence, n: usize, g: &Element) -> Result<Rational> {
    let set = phi.at(n)?;
    let group = phi.group();
    group.multiply(&group.identity(), g)?;
    let moved: FiniteSet = set.iter().map(|x| group.mul(x, g)).collect();
    Ok(ratio(set.symmetric_difference_len(&moved), set.len()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn perm(s: &str) -> Element {
        Element::Perm(s.parse().unwrap())
    }

    #[test]
    fn interval_defects() {
        let phi = FolnerSequence::interval();
        let one = Element::Int(1);
        assert_eq!(left_defect(&phi, 10, &one).unwrap(), Rational::new(2, 10));
        assert_eq!(right_defect(&phi, 10, &one).unwrap(), Rational::new(2, 10));
        assert_eq!(left_defect(&phi, 10, &Element::Int(0)).unwrap(), Rational::from_integer(0));
    }

    #[test]
    fn interval_left_defect_is_two_g_over_n() {
        let phi = FolnerSequence::interval();
        for g in -6i64..=6 {
            for n in (g.unsigned_abs() as usize + 1)..40 {
                let d = left_defect(&phi, n, &Element::Int(g)).unwrap();
                assert_eq!(d, Rational::new(2 * g.abs(), n as i64), "g={g} N={n}");
            }
        }
    }

    #[test]
    fn transposition_pair_shape() {
        assert_eq!(transposition_pair(4).unwrap(), perm("(1 4)(2 3)"));
        let h5 = transposition_pair(5).unwrap();
        assert_eq!(h5, perm("(1 5)(2 3)"));
        assert_eq!(Group::Alternating.sign(&h5).unwrap(), 1);
        let h4 = transposition_pair(4).unwrap();
        let p = h4.as_perm().unwrap();
        assert_eq!((p.apply(1), p.apply(4), p.apply(2), p.apply(3)), (4, 1, 3, 2));
        assert!(transposition_pair(3).is_err());
    }

    #[test]
    fn alt_coset_sequence() {
        let phi = FolnerSequence::alt_coset();
        assert!(phi.at(3).is_err());
        assert!(phi.at(11).is_err());
        let phi5 = phi.at(5).unwrap();
        assert_eq!(phi5.len(), 12);
        for g in Group::Alternating.exhaustion(1).unwrap().iter() {
            assert_eq!(left_defect(&phi, 5, g).unwrap(), Rational::from_integer(0));
        }
    }

    #[test]
    fn alt_coset_right_defect_at_three_cycle() {
        // Φ_5 g is the coset A_4 (h_5 g); an independent count is in the
        // integration tests. It is disjoint from Φ_5.
        let phi = FolnerSequence::alt_coset();
        assert_eq!(right_defect(&phi, 5, &perm("(1 2 3)")).unwrap(), Rational::from_integer(2));
    }

    #[test]
    fn inversion() {
        let phi = FolnerSequence::interval();
        let inv = phi.invert();
        assert_eq!(inv.handedness(), Handedness::TwoSided);
        assert_eq!(inv.at(4).unwrap(), FiniteSet::interval(-3, 0));
        let sym = FolnerSequence::symmetric_interval();
        assert_eq!(sym.invert().at(6).unwrap(), sym.at(6).unwrap());

        let alt = FolnerSequence::alt_coset();
        let alt_inv = alt.invert();
        assert_eq!(alt_inv.handedness(), Handedness::Right);
        for g in Group::Alternating.exhaustion(1).unwrap().iter() {
            assert_eq!(right_defect(&alt_inv, 5, g).unwrap(), Rational::from_integer(0));
        }
        for n in 4..=6 {
            assert_eq!(alt_inv.invert().at(n).unwrap(), alt.at(n).unwrap());
        }
    }

    #[test]
    fn translation_keeps_left_defect() {
        let phi = FolnerSequence::interval();
        let moved = phi.translated(|n| Element::Int((n * n) as i64)).unwrap();
        assert_eq!(moved.at(3).unwrap(), FiniteSet::interval(9, 11));
        let one = Element::Int(1);
        assert_eq!(left_defect(&moved, 10, &one).unwrap(), Rational::new(2, 10));

        let alt = FolnerSequence::alt_coset();
        let shifted = alt.translated(|n| transposition_pair(n as u32 + 1).unwrap()).unwrap();
        for g in ["(1 2 3)", "(1 2)(3 4)", "(2 4 3)"] {
            assert_eq!(
                left_defect(&shifted, 6, &perm(g)).unwrap(),
                left_defect(&alt, 6, &perm(g)).unwrap()
            );
        }
        assert!(alt.invert().translated(|_| perm("(1 2 3)")).is_err());
    }

    #[test]
    fn lattice_box_sizes() {
        let phi = FolnerSequence::lattice_box(2);
        assert_eq!(phi.at(3).unwrap().len(), 9);
        let e1 = Element::Lattice(vec![1, 0]);
        assert_eq!(left_defect(&phi, 4, &e1).unwrap(), Rational::new(8, 16));
    }

    #[test]
    fn defect_rejects_foreign_elements() {
        let phi = FolnerSequence::interval();
        assert!(left_defect(&phi, 3, &perm("(1 2)")).is_err());
    }
}
