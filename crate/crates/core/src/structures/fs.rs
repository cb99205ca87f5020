use super::{Detection, Outcome, SearchScope, StructureKind, StructureWitness, WitnessData};
use crate::error::{Error, Result};
use crate::group::{Element, FiniteSet, Group};
use crate::sets::SubsetSpec;

pub const MAX_FS_GENERATORS: usize = 30;

/// Largest sum for which subset sums are collected in a reachability table.
const TABLE_LIMIT: i64 = 1 << 22;
/// Largest number of subsets enumerated one by one.
const SUBSET_LIMIT: usize = 1 << 22;

/// `FS(x_1, ..., x_m)`, all non-empty subset sums of positive integers.
pub fn fs_set(xs: &[i64]) -> Result<FiniteSet> {
    if xs.is_empty() {
        return Err(Error::Domain("finite sums need at least one generator".into()));
    }
    if xs.len() > MAX_FS_GENERATORS {
        return Err(Error::Budget(format!(
            "{} generators exceed the limit of {MAX_FS_GENERATORS}",
            xs.len()
        )));
    }
    if let Some(x) = xs.iter().find(|&&x| x <= 0) {
        return Err(Error::Domain(format!("finite sums take positive generators, got {x}")));
    }
    let total: i64 = xs.iter().sum();
    if total <= TABLE_LIMIT {
        let mut reach = vec![false; total as usize + 1];
        let mut top = 0usize;
        for &x in xs {
            let x = x as usize;
            for s in (1..=top).rev() {
                if reach[s] {
                    reach[s + x] = true;
                }
            }
            reach[x] = true;
            top += x;
        }
        return Ok(FiniteSet::from_sorted_unchecked(
            (1..=total).filter(|&s| reach[s as usize]).map(Element::Int).collect(),
        ));
    }
    if (1usize << xs.len()) > SUBSET_LIMIT {
        return Err(Error::Budget(format!(
            "finite sums of {} generators with total {total} are too large to enumerate",
            xs.len()
        )));
    }
    let mut sums = vec![0i64; 1 << xs.len()];
    for mask in 1..sums.len() {
        let low = mask.trailing_zeros() as usize;
        sums[mask] = sums[mask & (mask - 1)] + xs[low];
    }
    Ok(sums[1..].iter().copied().map(Element::Int).collect())
}

/// A non-empty `α` with `Σ_{n∈α} x_n ≡ 0 (mod t)`.
///
/// Prefix sums first: among the `m + 1` prefix sums two agree mod `t` once
/// `m ≥ t`, and their difference is a block of consecutive generators. When
/// that fails (only possible for `m < t`) a subset-sum table over residues
/// decides existence exactly.
pub fn fs_meets_multiples(xs: &[i64], t: i64) -> Result<Detection> {
    if xs.is_empty() {
        return Err(Error::Domain("finite sums need at least one generator".into()));
    }
    if t <= 0 {
        return Err(Error::Domain(format!("modulus must be positive, got {t}")));
    }
    let scope = SearchScope::SubsetSums { m: xs.len(), modulus: t };
    let mut first_seen = vec![usize::MAX; t as usize];
    first_seen[0] = 0;
    let mut prefix = 0i64;
    let mut alpha = None;
    for (j, &x) in xs.iter().enumerate() {
        prefix = (prefix + x).rem_euclid(t);
        let r = prefix as usize;
        if first_seen[r] != usize::MAX {
            alpha = Some((first_seen[r] + 1..=j + 1).collect::<Vec<_>>());
            break;
        }
        first_seen[r] = j + 1;
    }
    let alpha = alpha.or_else(|| residue_table_search(xs, t));
    let (outcome, witness) = match alpha {
        Some(alpha) => {
            let sum = alpha.iter().map(|&i| xs[i - 1]).sum();
            let data = WitnessData::SubsetSum {
                generators: xs.to_vec(),
                alpha,
                sum,
                modulus: t,
            };
            (Outcome::Found, Some(StructureWitness::checked(StructureKind::Fs, data, None)?))
        }
        None => (Outcome::NotFound, None),
    };
    Ok(Detection {
        kind: StructureKind::Fs,
        outcome,
        witness,
        scope,
        queries: xs.len() as u64,
    })
}

/// Least-index-first subset with sum ≡ 0 mod t, via reachable residues.
fn residue_table_search(xs: &[i64], t: i64) -> Option<Vec<usize>> {
    let t = t as usize;
    // parent[r] = (generator index, previous residue or None for a singleton)
    let mut parent: Vec<Option<(usize, Option<usize>)>> = vec![None; t];
    for (i, &x) in xs.iter().enumerate() {
        let x = x.rem_euclid(t as i64) as usize;
        let reached: Vec<usize> = (0..t).filter(|&r| parent[r].is_some_and(|(j, _)| j < i)).collect();
        let mut updates = vec![(x, (i, None))];
        updates.extend(reached.into_iter().map(|r| ((r + x) % t, (i, Some(r)))));
        for (r, p) in updates {
            if parent[r].is_none() {
                parent[r] = Some(p);
            }
        }
        if parent[0].is_some() {
            break;
        }
    }
    let mut alpha = Vec::new();
    let mut r = 0usize;
    let mut limit = xs.len();
    loop {
        let (i, prev) = parent[r]?;
        debug_assert!(i < limit);
        limit = i;
        alpha.push(i + 1);
        match prev {
            Some(p) => r = p,
            None => break,
        }
    }
    alpha.reverse();
    Some(alpha)
}

/// Searches `t ∈ [-shift_bound, shift_bound]` (in the order `0, 1, -1, 2, ...`)
/// and `1 ≤ x_1 ≤ ... ≤ x_m ≤ generator_bound` for `FS(x) + t ⊆ E`.
///
/// Membership of `E` is prefetched once over the reachable integer range.
/// `budget` caps the number of sum checks; running out reports how many
/// shifts were completely searched.
pub fn shifted_fs_search(
    e: &SubsetSpec,
    m: usize,
    generator_bound: i64,
    shift_bound: i64,
    budget: u64,
) -> Result<Detection> {
    if e.group() != Group::Integers {
        return Err(Error::Unsupported {
            op: "shifted_fs_search",
            backend: e.group().backend(),
        });
    }
    if m == 0 || m > MAX_FS_GENERATORS || generator_bound < 1 || shift_bound < 0 {
        return Err(Error::Domain(format!(
            "need 1 <= m <= {MAX_FS_GENERATORS}, generator_bound >= 1, shift_bound >= 0"
        )));
    }
    let lo = 1 - shift_bound;
    let hi = generator_bound
        .checked_mul(m as i64)
        .and_then(|v| v.checked_add(shift_bound))
        .ok_or_else(|| Error::Budget("search range overflows".into()))?;
    let bits = e.int_bitmap(lo, hi)?;
    let member = |v: i64| bits[(v - lo) as usize];

    let mut search = SumsSearch {
        m,
        generator_bound,
        member: &member,
        queries: 0,
        budget,
        xs: Vec::with_capacity(m),
        sums: Vec::with_capacity(1 << m.min(20)),
    };
    let mut shifts_completed = 0u64;
    let mut outcome = Outcome::NotFound;
    let mut witness = None;
    for i in 0..(2 * shift_bound as u64 + 1) {
        let t = if i % 2 == 1 { i.div_ceil(2) as i64 } else { -((i / 2) as i64) };
        match search.run(t) {
            Step::Found => {
                let data = WitnessData::ShiftedSums {
                    shift: t,
                    generators: search.xs.clone(),
                };
                witness = Some(StructureWitness::checked(StructureKind::Fs, data, Some(e))?);
                outcome = Outcome::Found;
                break;
            }
            Step::Exhausted => {
                outcome = Outcome::BudgetExhausted;
                break;
            }
            Step::Done => shifts_completed += 1,
        }
    }
    Ok(Detection {
        kind: StructureKind::Fs,
        outcome,
        witness,
        scope: SearchScope::ShiftedSums {
            m,
            generator_bound,
            shift_bound,
            shifts_completed,
        },
        queries: search.queries,
    })
}

enum Step {
    Found,
    Done,
    Exhausted,
}

struct SumsSearch<'a, F: Fn(i64) -> bool> {
    m: usize,
    generator_bound: i64,
    member: &'a F,
    queries: u64,
    budget: u64,
    xs: Vec<i64>,
    /// All non-empty subset sums of `xs`, with multiplicity, so that the
    /// sums added by the next generator are `x` and `x + s` for each `s`.
    sums: Vec<i64>,
}

impl<F: Fn(i64) -> bool> SumsSearch<'_, F> {
    fn run(&mut self, t: i64) -> Step {
        self.xs.clear();
        self.sums.clear();
        self.extend(t, 1)
    }

    fn extend(&mut self, t: i64, from: i64) -> Step {
        if self.xs.len() == self.m {
            return Step::Found;
        }
        let base = self.sums.len();
        for x in from..=self.generator_bound {
            let needed = base as u64 + 1;
            if self.queries + needed > self.budget {
                return Step::Exhausted;
            }
            self.queries += needed;
            let ok = (self.member)(x + t) && self.sums[..base].iter().all(|s| (self.member)(s + x + t));
            if !ok {
                continue;
            }
            self.xs.push(x);
            self.sums.push(x);
            for i in 0..base {
                let s = self.sums[i] + x;
                self.sums.push(s);
            }
            match self.extend(t, x) {
                Step::Done => {}
                other => return other,
            }
            self.xs.pop();
            self.sums.truncate(base);
        }
        Step::Done
    }
}
