//! Subsets of a group given by membership predicates, their shift and
//! Boolean algebra, and density estimates along Følner sequences.

use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::folner::FolnerSequence;
use crate::group::{Element, FiniteSet, Group};
use crate::rational::{ratio, Rational};

/// Windows at least this large are filtered in parallel.
const PARALLEL_THRESHOLD: usize = 1 << 14;

type Membership = Arc<dyn Fn(&Element) -> bool + Send + Sync>;

/// A named, pure membership predicate on a group.
#[derive(Clone)]
pub struct SubsetSpec {
    name: String,
    provenance: String,
    group: Group,
    member: Membership,
}

impl fmt::Debug for SubsetSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SubsetSpec")
            .field("name", &self.name)
            .field("group", &self.group)
            .field("provenance", &self.provenance)
            .finish()
    }
}

impl SubsetSpec {
    pub fn new(
        name: impl Into<String>,
        group: Group,
        provenance: impl Into<String>,
        member: impl Fn(&Element) -> bool + Send + Sync + 'static,
    ) -> Self {
        SubsetSpec {
            name: name.into(),
            provenance: provenance.into(),
            group,
            member: Arc::new(member),
        }
    }

    pub fn all(group: Group) -> Self {
        Self::new("G", group, "whole group", |_| true)
    }

    pub fn empty(group: Group) -> Self {
        Self::new("∅", group, "empty set", |_| false)
    }

    /// A finite set, as a subset of the group.
    pub fn finite(name: impl Into<String>, group: Group, set: FiniteSet) -> Self {
        let size = set.len();
        Self::new(name, group, format!("finite set of {size} elements"), move |x| set.contains(x))
    }

    /// `{x ∈ ℤ : x ≡ residue (mod modulus)}`.
    pub fn residue_class(modulus: i64, residue: i64) -> Result<Self> {
        if modulus <= 0 {
            return Err(Error::Domain(format!("modulus must be positive, got {modulus}")));
        }
        let r = residue.rem_euclid(modulus);
        let name = if r == 0 { format!("{modulus}Z") } else { format!("{modulus}Z+{r}") };
        Ok(Self::new(name, Group::Integers, "residue class", move |x| {
            x.as_int().is_some_and(|n| n.rem_euclid(modulus) == r)
        }))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn provenance(&self) -> &str {
        &self.provenance
    }

    pub fn group(&self) -> Group {
        self.group
    }

    pub fn renamed(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    /// Membership; elements of another backend are never members.
    #[inline]
    pub fn contains(&self, x: &Element) -> bool {
        x.backend() == self.group.backend() && (self.member)(x)
    }

    fn same_backend(&self, other: &SubsetSpec) -> Result<()> {
        if self.group.backend() != other.group.backend() {
            return Err(Error::BackendMismatch {
                expected: self.group.backend(),
                found: other.group.backend(),
            });
        }
        Ok(())
    }

    /// `gE`, i.e. `x ↦ member(g⁻¹x)`.
    pub fn shift_left(&self, g: &Element) -> Result<SubsetSpec> {
        let group = self.group;
        let g_inv = group.inverse(g)?;
        let inner = self.member.clone();
        Ok(SubsetSpec {
            name: format!("{g}·{}", self.name),
            provenance: self.provenance.clone(),
            group,
            member: Arc::new(move |x| inner(&group.mul(&g_inv, x))),
        })
    }

    /// `Eg`, i.e. `x ↦ member(xg⁻¹)`.
    pub fn shift_right(&self, g: &Element) -> Result<SubsetSpec> {
        let group = self.group;
        let g_inv = group.inverse(g)?;
        let inner = self.member.clone();
        Ok(SubsetSpec {
            name: format!("{}·{g}", self.name),
            provenance: self.provenance.clone(),
            group,
            member: Arc::new(move |x| inner(&group.mul(x, &g_inv))),
        })
    }

    pub fn complement(&self) -> SubsetSpec {
        let inner = self.member.clone();
        SubsetSpec {
            name: format!("({})ᶜ", self.name),
            provenance: self.provenance.clone(),
            group: self.group,
            member: Arc::new(move |x| !inner(x)),
        }
    }

    fn combine(&self, other: &SubsetSpec, op: &str, f: fn(bool, bool) -> bool) -> Result<SubsetSpec> {
        self.same_backend(other)?;
        let (a, b) = (self.member.clone(), other.member.clone());
        Ok(SubsetSpec {
            name: format!("({} {op} {})", self.name, other.name),
            provenance: format!("{} {op} {}", self.provenance, other.provenance),
            group: self.group,
            member: Arc::new(move |x| f(a(x), b(x))),
        })
    }

    pub fn union(&self, other: &SubsetSpec) -> Result<SubsetSpec> {
        self.combine(other, "∪", |a, b| a || b)
    }

    pub fn intersection(&self, other: &SubsetSpec) -> Result<SubsetSpec> {
        self.combine(other, "∩", |a, b| a && b)
    }

    pub fn difference(&self, other: &SubsetSpec) -> Result<SubsetSpec> {
        self.combine(other, "∖", |a, b| a && !b)
    }

    pub fn symmetric_difference(&self, other: &SubsetSpec) -> Result<SubsetSpec> {
        self.combine(other, "△", |a, b| a != b)
    }

    /// `{x ∈ window : member(x)}`.
    pub fn materialize(&self, window: &FiniteSet) -> FiniteSet {
        let items = window.as_slice();
        let kept: Vec<Element> = if items.len() >= PARALLEL_THRESHOLD {
            items.par_iter().filter(|x| self.contains(x)).cloned().collect()
        } else {
            items.iter().filter(|x| self.contains(x)).cloned().collect()
        };
        FiniteSet::from_sorted_unchecked(kept)
    }

    /// `|E ∩ window|`.
    pub fn count_in(&self, window: &FiniteSet) -> usize {
        let items = window.as_slice();
        if items.len() >= PARALLEL_THRESHOLD {
            items.par_iter().filter(|x| self.contains(x)).count()
        } else {
            items.iter().filter(|x| self.contains(x)).count()
        }
    }

    /// Membership of every integer in `[lo, hi]` as a bitmap, for scans
    /// over ℤ windows too large to hold as element sets.
    pub fn int_bitmap(&self, lo: i64, hi: i64) -> Result<Vec<bool>> {
        if self.group != Group::Integers {
            return Err(Error::Unsupported {
                op: "int_bitmap",
                backend: self.group.backend(),
            });
        }
        if hi < lo {
            return Ok(Vec::new());
        }
        Ok((lo..=hi)
            .into_par_iter()
            .map(|n| (self.member)(&Element::Int(n)))
            .collect())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DensityRow {
    pub n: usize,
    pub count: usize,
    pub size: usize,
    #[serde(with = "crate::rational::repr")]
    pub ratio: Rational,
}

/// Exact counts `|E ∩ Φ_N|` along a range of indices. The upper and lower
/// estimates are the max and min ratio over the tail half of the tested
/// range; they are finite-scale estimates of limsup and liminf, not limits.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DensityReport {
    pub set: String,
    pub sequence: String,
    pub rows: Vec<DensityRow>,
    #[serde(with = "crate::rational::repr")]
    pub upper_estimate: Rational,
    #[serde(with = "crate::rational::repr")]
    pub lower_estimate: Rational,
}

impl DensityReport {
    fn from_rows(set: &SubsetSpec, phi: &FolnerSequence, rows: Vec<DensityRow>) -> Self {
        let tail = &rows[rows.len() / 2..];
        let upper = tail.iter().map(|r| r.ratio).max().expect("non-empty range");
        let lower = tail.iter().map(|r| r.ratio).min().expect("non-empty range");
        DensityReport {
            set: set.name().to_string(),
            sequence: phi.name().to_string(),
            rows,
            upper_estimate: upper,
            lower_estimate: lower,
        }
    }

    pub fn last(&self) -> &DensityRow {
        self.rows.last().expect("density reports are non-empty")
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("N,count,size,ratio\n");
        for r in &self.rows {
            out.push_str(&format!("{},{},{},{}\n", r.n, r.count, r.size, r.ratio));
        }
        out
    }
}

/// `|E ∩ Φ_N| / |Φ_N|` for every `N` in `indices`.
pub fn density_along(
    set: &SubsetSpec,
    phi: &FolnerSequence,
    indices: impl IntoIterator<Item = usize>,
) -> Result<DensityReport> {
    let mut indices: Vec<usize> = indices.into_iter().collect();
    indices.sort_unstable();
    indices.dedup();
    if indices.is_empty() {
        return Err(Error::Domain("density_along needs at least one index".into()));
    }
    if set.group().backend() != phi.group().backend() {
        return Err(Error::BackendMismatch {
            expected: phi.group().backend(),
            found: set.group().backend(),
        });
    }
    let mut rows = Vec::with_capacity(indices.len());
    for n in indices {
        let window = phi.at(n)?;
        let count = set.count_in(&window);
        rows.push(DensityRow {
            n,
            count,
            size: window.len(),
            ratio: ratio(count, window.len()),
        });
    }
    Ok(DensityReport::from_rows(set, phi, rows))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::folner::{left_defect, FolnerSequence};

    fn ints(v: &[i64]) -> FiniteSet {
        v.iter().copied().map(Element::Int).collect()
    }

    fn evens() -> SubsetSpec {
        SubsetSpec::residue_class(2, 0).unwrap()
    }

    #[test]
    fn density_of_evens() {
        let r = density_along(&evens(), &FolnerSequence::initial_segment(), [10]).unwrap();
        assert_eq!(r.last().ratio, Rational::new(1, 2));
        assert_eq!(r.last().count, 5);
        let all = density_along(&SubsetSpec::all(Group::Integers), &FolnerSequence::interval(), 1..20).unwrap();
        assert!(all.rows.iter().all(|row| row.ratio == Rational::from_integer(1)));
    }

    #[test]
    fn tail_half_estimates() {
        // [1, N] ∩ 2ℤ has ratio 1/2 for even N and (N-1)/2N for odd N
        let r = density_along(&evens(), &FolnerSequence::initial_segment(), 1..=8).unwrap();
        assert_eq!(r.upper_estimate, Rational::new(1, 2));
        assert_eq!(r.lower_estimate, Rational::new(2, 5));
        assert!(density_along(&evens(), &FolnerSequence::interval(), []).is_err());
    }

    #[test]
    fn shifts() {
        let odd = evens().shift_left(&Element::Int(1)).unwrap();
        assert_eq!(odd.materialize(&FiniteSet::interval(0, 5)), ints(&[1, 3, 5]));
        let same = evens().shift_right(&Element::Int(0)).unwrap();
        let w = FiniteSet::interval(-20, 20);
        assert_eq!(same.materialize(&w), evens().materialize(&w));
    }

    #[test]
    fn left_shift_of_coset_by_subgroup_element() {
        let phi = FolnerSequence::alt_coset();
        let phi5 = SubsetSpec::finite("Φ5", Group::Alternating, phi.at(5).unwrap());
        let a5 = Group::Alternating.exhaustion(2).unwrap();
        for g in Group::Alternating.exhaustion(1).unwrap().iter() {
            assert_eq!(phi5.shift_left(g).unwrap().materialize(&a5), phi5.materialize(&a5));
        }
    }

    #[test]
    fn boolean_algebra() {
        let w = FiniteSet::interval(-100, 100);
        let odd = SubsetSpec::residue_class(2, 1).unwrap();
        assert_eq!(evens().union(&odd).unwrap().materialize(&w), w);
        assert!(evens().intersection(&evens().complement()).unwrap().materialize(&w).is_empty());
        let threes = SubsetSpec::residue_class(3, 0).unwrap();
        let sd = evens().symmetric_difference(&threes).unwrap();
        assert_eq!(sd.materialize(&FiniteSet::interval(1, 12)), ints(&[2, 3, 4, 8, 9, 10]));
        let alt = SubsetSpec::all(Group::Alternating);
        assert!(matches!(evens().union(&alt), Err(Error::BackendMismatch { .. })));
    }

    #[test]
    fn materialize_basics() {
        assert_eq!(evens().materialize(&FiniteSet::interval(0, 6)), ints(&[0, 2, 4, 6]));
        assert!(SubsetSpec::empty(Group::Integers).materialize(&FiniteSet::interval(0, 6)).is_empty());
        let big = FiniteSet::interval(0, 99_999);
        assert_eq!(evens().materialize(&big).len(), 50_000);
    }

    #[test]
    fn translated_sequence_sees_full_density_of_thick_set() {
        let t = SubsetSpec::new("T", Group::Integers, "blocks", |x| x.as_int().unwrap().rem_euclid(10) < 5);
        let base = FolnerSequence::custom("first-five", Group::Integers, crate::Handedness::TwoSided, 1, |_| {
            FiniteSet::interval(0, 4)
        });
        let moved = base.translated(|n| Element::Int(10 * n as i64)).unwrap();
        let r = density_along(&t, &moved, 1..30).unwrap();
        assert!(r.rows.iter().all(|row| row.ratio == Rational::from_integer(1)));
    }

    #[test]
    fn shift_changes_count_by_at_most_the_defect() {
        let phi = FolnerSequence::interval();
        let e = SubsetSpec::residue_class(3, 1).unwrap();
        for g in -4i64..=4 {
            let g = Element::Int(g);
            let shifted = e.shift_left(&Group::Integers.inv(&g)).unwrap();
            for n in [7usize, 20, 33] {
                let w = phi.at(n).unwrap();
                let diff = (e.count_in(&w) as i64 - shifted.count_in(&w) as i64).abs();
                let defect = left_defect(&phi, n, &g).unwrap() * Rational::from_integer(n as i64);
                assert!(Rational::from_integer(diff) <= defect);
            }
        }
    }
}
