use rayon::prelude::*;

use super::{check_group, Detection, Outcome, SearchScope, StructureKind, StructureWitness, WitnessData};
use crate::error::Result;
use crate::group::{Element, FiniteSet};
use crate::sets::SubsetSpec;

const PARALLEL_THRESHOLD: usize = 1 << 12;

/// `K·P = {k·p : k ∈ K, p ∈ P}` as a predicate: `x ∈ KP` iff some `k⁻¹x ∈ P`.
pub fn left_multiple(p: &SubsetSpec, k: &FiniteSet) -> Result<SubsetSpec> {
    let group = check_group(p, k)?;
    let k_inv: Vec<Element> = k.iter().map(|x| group.inv(x)).collect();
    let inner = p.clone();
    Ok(SubsetSpec::new(
        format!("K·{}", p.name()),
        group,
        format!("{} translates of {}", k.len(), p.name()),
        move |x| k_inv.iter().any(|ki| inner.contains(&group.mul(ki, x))),
    ))
}

/// First `w ∈ W` (in window order) with no `k ∈ K` and `s ∈ S` such that
/// `w = k·s`.
pub fn first_uncovered(s: &SubsetSpec, k: &FiniteSet, w: &FiniteSet) -> Result<Option<Element>> {
    let covered = left_multiple(s, k)?;
    check_group(s, w)?;
    let items = w.as_slice();
    Ok(if items.len() >= PARALLEL_THRESHOLD {
        items.par_iter().find_first(|x| !covered.contains(x)).cloned()
    } else {
        items.iter().find(|x| !covered.contains(x)).cloned()
    })
}

/// Window proxy for syndeticity: `W ⊆ K·S`.
pub fn is_syndetic_window(s: &SubsetSpec, k: &FiniteSet, w: &FiniteSet) -> Result<bool> {
    Ok(first_uncovered(s, k, w)?.is_none())
}

fn first_translate(
    t: &SubsetSpec,
    k: &FiniteSet,
    w: &FiniteSet,
    skip: impl Fn(&Element) -> bool + Sync,
) -> Option<Element> {
    let group = t.group();
    let fits = |g: &&Element| !skip(g) && k.iter().all(|x| t.contains(&group.mul(x, g)));
    let items = w.as_slice();
    if items.len() >= PARALLEL_THRESHOLD {
        items.par_iter().find_first(fits).cloned()
    } else {
        items.iter().find(fits).cloned()
    }
}

fn translate_detection(
    kind: StructureKind,
    k: &FiniteSet,
    cover: Option<&FiniteSet>,
    excluded: Option<&FiniteSet>,
    w: &FiniteSet,
    found: Option<Element>,
    witness_set: &SubsetSpec,
) -> Result<Detection> {
    let queries = (w.len() * k.len()) as u64;
    let (outcome, witness) = match found {
        Some(g) => {
            let data = WitnessData::Translate {
                g,
                k: k.clone(),
                cover: cover.cloned(),
            };
            (Outcome::Found, Some(StructureWitness::checked(kind, data, Some(witness_set))?))
        }
        None => (Outcome::NotFound, None),
    };
    Ok(Detection {
        kind,
        outcome,
        witness,
        scope: SearchScope::window(k, cover, excluded, w),
        queries,
    })
}

/// First `g ∈ W` (in window order) with `K·g ⊆ T`.
pub fn is_thick_window(t: &SubsetSpec, k: &FiniteSet, w: &FiniteSet) -> Result<Detection> {
    check_group(t, k)?;
    check_group(t, w)?;
    let found = first_translate(t, k, w, |_| false);
    translate_detection(StructureKind::Thick, k, None, None, w, found, t)
}

/// Whether `K·P` is `(K′, W)`-thick.
pub fn is_pws_window(p: &SubsetSpec, k: &FiniteSet, k_prime: &FiniteSet, w: &FiniteSet) -> Result<Detection> {
    let kp = left_multiple(p, k)?;
    check_group(p, k_prime)?;
    check_group(p, w)?;
    let found = first_translate(&kp, k_prime, w, |_| false);
    translate_detection(StructureKind::Pws, k_prime, Some(k), None, w, found, p)
}

/// First `g ∈ W ∖ K` with `K·g ⊆ T`.
pub fn find_shift_avoiding(t: &SubsetSpec, k: &FiniteSet, w: &FiniteSet) -> Result<Detection> {
    check_group(t, k)?;
    check_group(t, w)?;
    let found = first_translate(t, k, w, |g| k.contains(g));
    translate_detection(StructureKind::Thick, k, None, Some(k), w, found, t)
}
