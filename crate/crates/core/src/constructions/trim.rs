use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use super::greedy::{syndetic_family_with_sizes, LevelCertificate};
use crate::error::{Error, Result};
use crate::folner::FolnerSequence;
use crate::group::{Element, FiniteSet};
use crate::rational::{ceil, ratio, Rational};
use crate::sets::{density_along, DensityRow, SubsetSpec};

/// Membership in `Φ_1 ∪ ... ∪ Φ_s`.
fn initial_union(phi: &FolnerSequence, s: usize) -> Result<SubsetSpec> {
    let group = phi.group();
    let name = format!("Φ_1..Φ_{s}");
    if s < phi.first_index() {
        return Ok(SubsetSpec::empty(group).renamed(name));
    }
    if phi.is_nested() {
        return Ok(SubsetSpec::finite(name, group, phi.at(s)?));
    }
    let mut union: HashSet<Element> = HashSet::new();
    for n in phi.first_index()..=s {
        union.extend(phi.at(n)?);
    }
    let set: FiniteSet = union.into_iter().collect();
    Ok(SubsetSpec::finite(name, group, set))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TrimCalibration {
    /// `s_i`, the last Følner index removed from `A_i`.
    pub cutoffs: Vec<usize>,
    /// Tail-half upper density estimates of the `A_i`.
    #[serde(with = "rational_vec")]
    pub estimates: Vec<Rational>,
    /// `ε/2^i`.
    #[serde(with = "rational_vec")]
    pub tolerances: Vec<Rational>,
    /// `|∪A_i′ ∩ Φ_N| / |Φ_N|` on the calibration indices.
    pub union_rows: Vec<DensityRow>,
    /// `Σ est_i + ε`.
    #[serde(with = "crate::rational::repr")]
    pub bound: Rational,
    /// Every union row is at most `bound`.
    pub certified: bool,
}

mod rational_vec {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    use crate::rational::{Rational, RationalRepr};

    pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
        v.iter().map(|r| RationalRepr::from(*r)).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
        let v = Vec::<RationalRepr>::deserialize(d)?;
        if v.iter().any(|r| r.den == 0) {
            return Err(serde::de::Error::custom("zero denominator"));
        }
        Ok(v.iter().map(Rational::from).collect())
    }
}

/// `A_i′ = A_i ∖ (Φ_1 ∪ ... ∪ Φ_{s_i})`, with `s_i` the smallest cutoff
/// (at least 1) such that every calibration index `N > s_i` has
/// `|A_i ∩ Φ_N|/|Φ_N| < est_i + ε/2^i`. Here `est_i` is the tail-half
/// upper estimate of `A_i` on the calibration indices.
///
/// Fails when the largest calibration index itself violates the tolerance,
/// since no tested index would then be left above `s_i`. The estimate is a
/// maximum over the tail half, so violations can only come from the head
/// half and the guard does not fire for this estimator.
pub fn cofinite_trim(
    sets: &[SubsetSpec],
    phi: &FolnerSequence,
    epsilon: Rational,
    calibration: &[usize],
) -> Result<(Vec<SubsetSpec>, TrimCalibration)> {
    if epsilon <= Rational::from_integer(0) {
        return Err(Error::Domain(format!("epsilon must be positive, got {epsilon}")));
    }
    let mut indices = calibration.to_vec();
    indices.sort_unstable();
    indices.dedup();
    let last = *indices.last().ok_or_else(|| Error::Domain("empty calibration range".into()))?;
    let mut trimmed = Vec::with_capacity(sets.len());
    let mut cutoffs = Vec::with_capacity(sets.len());
    let mut estimates = Vec::with_capacity(sets.len());
    let mut tolerances = Vec::with_capacity(sets.len());
    let mut tolerance = epsilon;
    for (i, a) in sets.iter().enumerate() {
        tolerance /= 2;
        let report = density_along(a, phi, indices.iter().copied())?;
        let est = report.upper_estimate;
        let violating = report
            .rows
            .iter()
            .filter(|r| r.ratio >= est + tolerance)
            .map(|r| r.n)
            .max();
        if violating == Some(last) {
            return Err(Error::Calibration {
                index: i + 1,
                reason: format!("density at the largest calibration index {last} exceeds {} + {tolerance}", est),
            });
        }
        let s = violating.unwrap_or(0).max(1).max(phi.first_index());
        let removed = initial_union(phi, s)?;
        let kept = a
            .difference(&removed)?
            .renamed(format!("{}′", a.name()));
        trimmed.push(kept);
        cutoffs.push(s);
        estimates.push(est);
        tolerances.push(tolerance);
    }
    let group = phi.group();
    let members: Vec<SubsetSpec> = trimmed.clone();
    let union = SubsetSpec::new("∪A′", group, "union of trimmed sets", move |x| {
        members.iter().any(|m| m.contains(x))
    });
    let union_rows = density_along(&union, phi, indices.iter().copied())?.rows;
    let bound = estimates.iter().copied().sum::<Rational>() + epsilon;
    let certified = union_rows.iter().all(|r| r.ratio <= bound);
    Ok((
        trimmed,
        TrimCalibration {
            cutoffs,
            estimates,
            tolerances,
            union_rows,
            bound,
            certified,
        },
    ))
}

/// `n_i = ⌈2i(i+1)/ε⌉`, so that `Σ_i 1/n_i ≤ ε/2`.
pub fn non_pws_schedule(epsilon: Rational, depth: usize) -> Result<Vec<usize>> {
    if epsilon <= Rational::from_integer(0) || epsilon >= Rational::from_integer(1) {
        return Err(Error::Domain(format!("epsilon must lie in (0, 1), got {epsilon}")));
    }
    (1..=depth as i64)
        .map(|i| {
            let n = ceil(&(Rational::from_integer(2 * i * (i + 1)) / epsilon));
            usize::try_from(n).map_err(|_| Error::Budget("schedule overflow".into()))
        })
        .collect()
}

/// The result of the non-piecewise-syndetic construction on a window.
#[derive(Clone, Debug)]
pub struct NonPwsConstruction {
    pub q: SubsetSpec,
    pub members: FiniteSet,
    pub window: FiniteSet,
    #[allow(missing_docs)]
    pub epsilon: Rational,
    /// `|F|` used for each kept level of the shrinking family.
    pub schedule: Vec<usize>,
    /// `g_i = enumerate(i - 1)`.
    pub shifts: Vec<Element>,
    /// `S^{(i)}`, the kept levels.
    pub levels: Vec<FiniteSet>,
    pub level_certificates: Vec<LevelCertificate>,
    /// `A_i′ = g_i S^{(i)} ∖ (Φ_1 ∪ ... ∪ Φ_{s_i})`, materialised.
    pub removed: Vec<FiniteSet>,
    /// `S_i′ = g_i⁻¹ A_i′`.
    pub trimmed_levels: Vec<FiniteSet>,
    pub calibration: TrimCalibration,
    /// `Σ_i leak_i / (n_i |W|)`: how far the family's window densities may
    /// exceed `1/n_i` because translates leave the window.
    pub boundary_term: Rational,
}

/// Core check for one covering set `K`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoreCheck {
    /// Least `N` with `K ⊆ {g_1⁻¹, ..., g_N⁻¹}`.
    pub n: usize,
    pub core_size: usize,
    /// `∩_{i≤N} S_i′` misses `K·Q` entirely.
    pub disjoint_from_kq: bool,
}

impl NonPwsConstruction {
    /// Verifies `G ∖ K·Q ⊇ ∩_{i≤N} S_i′` on the window: a point `x` of the
    /// core with `x = g_i⁻¹ q` would put `q = g_i x` in `A_i′`, outside `Q`.
    pub fn core_check(&self, k: &FiniteSet) -> Result<CoreCheck> {
        let group = self.q.group();
        let inverses: Vec<Element> = self.shifts.iter().map(|g| group.inv(g)).collect();
        let mut n = 0;
        for x in k.iter() {
            let pos = inverses.iter().position(|y| y == x).ok_or_else(|| {
                Error::Precondition(format!(
                    "{x} is not among g_1⁻¹..g_{}⁻¹; build with a larger depth",
                    self.shifts.len()
                ))
            })?;
            n = n.max(pos + 1);
        }
        let mut core = self.trimmed_levels[0].clone();
        for level in &self.trimmed_levels[1..n.max(1)] {
            core = core.intersection(level);
        }
        let kq = crate::structures::left_multiple(&self.q, k)?;
        let disjoint = core.iter().all(|x| !kq.contains(x));
        Ok(CoreCheck {
            n,
            core_size: core.len(),
            disjoint_from_kq: disjoint,
        })
    }
}

/// `Q = W ∖ ∪_i g_i S_i′` for a shrinking syndetic family kept at the
/// schedule `n_i = ⌈2i(i+1)/ε⌉`, trimmed with total tolerance `ε/2`.
///
/// The family contributes upper density at most `Σ 1/n_i ≤ ε/2` (plus the
/// reported boundary term) and the trim at most `ε/2`, so `Q` has window
/// lower density at least `1 - ε` up to that term. Translates of `Q` by
/// `K ⊆ {g_1⁻¹, ..., g_N⁻¹}` miss the syndetic core `∩_{i≤N} S_i′`.
pub fn non_pws_large_set(
    phi: &FolnerSequence,
    epsilon: Rational,
    depth: usize,
    window: &FiniteSet,
    calibration: &[usize],
) -> Result<NonPwsConstruction> {
    if depth == 0 {
        return Err(Error::Domain("depth must be positive".into()));
    }
    let group = phi.group();
    let schedule = non_pws_schedule(epsilon, depth)?;
    let family = syndetic_family_with_sizes(group, &schedule, window)?;
    if family.window_too_small {
        return Err(Error::Precondition(format!(
            "window of {} elements is too small for {} translates",
            window.len(),
            schedule.last().expect("depth > 0")
        )));
    }
    let shifts: Vec<Element> = group.elements().take(depth).collect();
    let translated: Vec<FiniteSet> = shifts
        .iter()
        .zip(&family.levels[1..])
        .map(|(g, s)| s.iter().map(|x| group.mul(g, x)).collect())
        .collect();
    let specs: Vec<SubsetSpec> = translated
        .iter()
        .enumerate()
        .map(|(i, a)| SubsetSpec::finite(format!("A{}", i + 1), group, a.clone()))
        .collect();
    let (trimmed, calibration) = cofinite_trim(&specs, phi, epsilon / 2, calibration)?;
    let removed: Vec<FiniteSet> = trimmed
        .iter()
        .zip(&translated)
        .map(|(t, a)| t.materialize(a))
        .collect();
    let trimmed_levels: Vec<FiniteSet> = removed
        .iter()
        .zip(&shifts)
        .map(|(a, g)| {
            let g_inv = group.inv(g);
            a.iter().map(|x| group.mul(&g_inv, x)).collect()
        })
        .collect();
    let mut holes: HashSet<&Element> = HashSet::new();
    for a in &removed {
        holes.extend(a.iter());
    }
    let members = window.filter(|x| !holes.contains(x));
    let boundary_term = family
        .certificates
        .iter()
        .map(|c| ratio(c.leak, c.translates * window.len()))
        .sum();
    let q = SubsetSpec::finite(format!("Q(eps={epsilon}, depth={depth})"), group, members.clone());
    Ok(NonPwsConstruction {
        q,
        members,
        window: window.clone(),
        epsilon,
        schedule,
        shifts,
        levels: family.levels[1..].to_vec(),
        level_certificates: family.certificates,
        removed,
        trimmed_levels,
        calibration,
        boundary_term,
    })
}

/// `1..=64` followed by a roughly geometric grid up to `max`, ending at `max`.
pub fn calibration_grid(max: usize) -> Vec<usize> {
    let mut out: Vec<usize> = (1..=max.min(64)).collect();
    let mut n = 64.0f64;
    while (n as usize) < max {
        n *= 1.1;
        out.push((n.ceil() as usize).min(max));
    }
    out.dedup();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::Group;

    #[test]
    fn trim_of_a_residue_class() {
        let phi = FolnerSequence::initial_segment();
        let evens = SubsetSpec::residue_class(2, 0).unwrap();
        let grid = calibration_grid(10_000);
        let (trimmed, cal) = cofinite_trim(std::slice::from_ref(&evens), &phi, Rational::new(1, 10), &grid).unwrap();
        assert!(cal.cutoffs[0] < 100);
        assert!(cal.certified);
        let w = FiniteSet::interval(1, 1000);
        let kept = trimmed[0].materialize(&w);
        let all = evens.materialize(&w);
        assert!(kept.is_subset(&all));
        assert!(all.difference(&kept).iter().all(|x| x.as_int().unwrap() <= cal.cutoffs[0] as i64));
    }

    #[test]
    fn trim_of_empty_set() {
        let phi = FolnerSequence::initial_segment();
        let (trimmed, cal) =
            cofinite_trim(&[SubsetSpec::empty(Group::Integers)], &phi, Rational::new(1, 10), &[10, 100]).unwrap();
        assert_eq!(cal.cutoffs, vec![1]);
        assert!(trimmed[0].materialize(&FiniteSet::interval(-50, 50)).is_empty());
    }

    #[test]
    fn trim_of_two_progressions() {
        let phi = FolnerSequence::initial_segment();
        let sets = [SubsetSpec::residue_class(2, 0).unwrap(), SubsetSpec::residue_class(3, 0).unwrap()];
        let (_, cal) = cofinite_trim(&sets, &phi, Rational::new(1, 10), &calibration_grid(10_000)).unwrap();
        assert!(cal.certified);
        assert!(cal.bound <= Rational::new(1, 2) + Rational::new(1, 3) + Rational::new(1, 10) + Rational::new(1, 100));
    }

    #[test]
    fn cutoffs_come_from_the_head_of_the_range() {
        // a set that is dense early and empty later
        let early = SubsetSpec::new("early", Group::Integers, "test", |x| (1..=20).contains(&x.as_int().unwrap()));
        let phi = FolnerSequence::initial_segment();
        let grid = [10, 20, 40, 80, 160, 320];
        let (trimmed, cal) = cofinite_trim(&[early], &phi, Rational::new(1, 10), &grid).unwrap();
        assert_eq!(cal.cutoffs, vec![40]);
        assert!(trimmed[0].materialize(&FiniteSet::interval(-100, 100)).is_empty());
        assert!(cofinite_trim(&[], &phi, Rational::new(1, 10), &[]).is_err());
    }

    #[test]
    fn schedule_sums_below_half_epsilon() {
        let eps = Rational::new(1, 4);
        let s = non_pws_schedule(eps, 12).unwrap();
        assert_eq!(&s[..3], &[16, 48, 96]);
        let total: Rational = s.iter().map(|&n| Rational::new(1, n as i64)).sum();
        assert!(total <= eps / 2);
    }

    #[test]
    fn small_non_pws_construction() {
        let phi = FolnerSequence::initial_segment();
        let w = FiniteSet::interval(1, 20_000);
        let c = non_pws_large_set(&phi, Rational::new(1, 4), 5, &w, &calibration_grid(20_000)).unwrap();
        let r = density_along(&c.q, &phi, calibration_grid(20_000)).unwrap();
        assert!(r.lower_estimate >= Rational::new(3, 4) - c.boundary_term);
        for k in 0..=2 {
            let check = c.core_check(&FiniteSet::interval(-k, k)).unwrap();
            assert!(check.disjoint_from_kq && check.core_size > 0, "{check:?}");
        }
        assert!(c.core_check(&FiniteSet::interval(-4, 4)).is_err());
    }
}
