use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::folner::{transposition_pair, FolnerSequence, ALT_COSET_MAX_INDEX};
use crate::group::{Element, Group, Perm};
use crate::sets::SubsetSpec;

/// Largest level at which the obstruction check still materialises `Φ_j`.
pub const OBSTRUCTION_MAX_LEVEL: usize = 9;

/// The unique `n` with `σ ∈ Φ_n`, if any: `n = σ(1) ≥ 4`, `σ` even of
/// degree at most `n`, and `σ·h_n⁻¹` fixes `n`.
pub fn alt_coset_index(sigma: &Perm) -> Option<usize> {
    let n = sigma.apply(1);
    if n < 4 || sigma.degree() > n || sigma.sign() != 1 {
        return None;
    }
    let h = transposition_pair(n).ok()?;
    let h = h.as_perm()?;
    let a = sigma.compose(&h.inverse());
    (a.degree() < n).then_some(n as usize)
}

/// `Φ_n = A_{n-1}·h_n` for `4 ≤ n ≤ n_max`, together with the union
/// `E = ∪_{n≥5} Φ_n`. Membership in `E` is decided for every level, not
/// only up to `n_max`.
pub fn alt_group_example(n_max: usize) -> Result<(FolnerSequence, SubsetSpec)> {
    if !(5..=ALT_COSET_MAX_INDEX).contains(&n_max) {
        return Err(Error::Domain(format!(
            "n_max must lie in 5..={ALT_COSET_MAX_INDEX}, got {n_max}"
        )));
    }
    let phi = FolnerSequence::alt_coset().with_last_index(n_max);
    let e = SubsetSpec::new(
        "E",
        Group::Alternating,
        "union of the cosets A_{n-1}(1 n)(2 3) for n >= 5",
        |x: &Element| {
            x.as_perm()
                .and_then(alt_coset_index)
                .is_some_and(|n| n >= 5)
        },
    );
    Ok((phi, e))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ObstructionCheck {
    pub n: usize,
    pub window_level: usize,
    pub holds: bool,
    pub pairs_checked: u64,
    /// `(g, h)` with `g·h ∈ E`.
    pub violation: Option<(Element, Element)>,
}

/// Exhaustively checks `g·h ∉ E` for every `h ∈ Φ_{n+1}` and every
/// `g ∈ Φ_j`, `n + 1 < j ≤ window_level`. An empty range of `j` holds
/// vacuously.
pub fn fpd_obstruction_check(
    e: &SubsetSpec,
    phi: &FolnerSequence,
    n: usize,
    window_level: usize,
) -> Result<ObstructionCheck> {
    if window_level > OBSTRUCTION_MAX_LEVEL {
        return Err(Error::Domain(format!(
            "window level {window_level} exceeds {OBSTRUCTION_MAX_LEVEL}"
        )));
    }
    let mut check = ObstructionCheck {
        n,
        window_level,
        holds: true,
        pairs_checked: 0,
        violation: None,
    };
    if n + 2 > window_level {
        return Ok(check);
    }
    let group = phi.group();
    let hs = phi.at(n + 1)?;
    for j in n + 2..=window_level {
        let gs = phi.at(j)?;
        check.pairs_checked += (gs.len() * hs.len()) as u64;
        let found = gs.as_slice().par_iter().find_map_first(|g| {
            hs.iter()
                .find(|h| e.contains(&group.mul(g, h)))
                .map(|h| (g.clone(), h.clone()))
        });
        if found.is_some() {
            check.holds = false;
            check.violation = found;
            break;
        }
    }
    Ok(check)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coset_index_matches_the_sequence() {
        let (phi, e) = alt_group_example(7).unwrap();
        for n in 4..=7 {
            for s in phi.at(n).unwrap().iter() {
                assert_eq!(alt_coset_index(s.as_perm().unwrap()), Some(n));
                assert_eq!(e.contains(s), n >= 5);
            }
        }
        let id = Group::Alternating.identity();
        assert!(!e.contains(&id));
        assert_eq!(alt_coset_index(&"(1 5)(2 3)".parse().unwrap()), Some(5));
        assert_eq!(alt_coset_index(&"(1 5 2)".parse().unwrap()), Some(5));
        assert_eq!(alt_coset_index(&"(1 5)(2 6)".parse().unwrap()), None);
        assert_eq!(alt_coset_index(&"(1 2 3)".parse().unwrap()), None);
    }

    #[test]
    fn small_cosets() {
        let (phi, _) = alt_group_example(6).unwrap();
        let p5 = phi.at(5).unwrap();
        assert_eq!(p5.len(), 12);
        assert!(p5.iter().all(|s| s.as_perm().unwrap().apply(1) == 5));
        assert!(p5.is_disjoint(&phi.at(6).unwrap()));
        assert!(alt_group_example(4).is_err());
        assert!(alt_group_example(11).is_err());
    }

    #[test]
    fn obstruction_holds_at_small_levels() {
        let (phi, e) = alt_group_example(7).unwrap();
        let c = fpd_obstruction_check(&e, &phi, 4, 7).unwrap();
        assert!(c.holds, "{c:?}");
        assert_eq!(c.pairs_checked, 12 * (60 + 360));
        let vacuous = fpd_obstruction_check(&e, &phi, 6, 7).unwrap();
        assert!(vacuous.holds && vacuous.pairs_checked == 0);
    }

    #[test]
    fn obstruction_detects_a_bad_set() {
        let (phi, _) = alt_group_example(7).unwrap();
        let everything = SubsetSpec::all(Group::Alternating);
        let c = fpd_obstruction_check(&everything, &phi, 4, 6).unwrap();
        assert!(!c.holds);
        let (g, h) = c.violation.unwrap();
        assert!(phi.at(6).unwrap().contains(&g) && phi.at(5).unwrap().contains(&h));
    }
}
