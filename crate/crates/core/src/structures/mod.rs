//! Finite sums and finite products sets, window tests for syndetic, thick
//! and piecewise syndetic sets, and bounded searches that either return a
//! witness or state exactly what they searched.

mod fp;
mod fs;
mod windows;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{Element, FiniteSet, Group};
use crate::sets::SubsetSpec;

pub use fp::{
    extract_fpi_from_thick, fp_chain_search, fp_products, fp_set, verify_fp_containment, ChainSearchOptions,
    Extraction, FpChain, FpMode, FpVerification, MAX_FP_CHAIN,
};
pub use fs::{fs_meets_multiples, fs_set, shifted_fs_search, MAX_FS_GENERATORS};
pub use windows::{find_shift_avoiding, first_uncovered, is_pws_window, is_syndetic_window, is_thick_window, left_multiple};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StructureKind {
    Fs,
    Fpi,
    Fpd,
    Fp,
    Syndetic,
    Thick,
    Pws,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum WitnessData {
    /// `Σ_{n∈α} x_n ≡ 0 (mod modulus)`, with 1-based `alpha`.
    SubsetSum {
        generators: Vec<i64>,
        alpha: Vec<usize>,
        sum: i64,
        modulus: i64,
    },
    /// `FS(generators) + shift ⊆ E`.
    ShiftedSums { shift: i64, generators: Vec<i64> },
    /// Every product of `mode` built from `generators` lies in `E`.
    Chain { mode: FpMode, generators: Vec<Element> },
    /// `K·g ⊆ T`, or `K·g ⊆ cover·P` when `cover` is present.
    Translate {
        g: Element,
        k: FiniteSet,
        cover: Option<FiniteSet>,
    },
}

/// A positive answer that re-checks from its own data.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructureWitness {
    pub kind: StructureKind,
    pub data: WitnessData,
    pub verified: bool,
}

impl StructureWitness {
    fn checked(kind: StructureKind, data: WitnessData, set: Option<&SubsetSpec>) -> Result<Self> {
        let mut w = StructureWitness {
            kind,
            data,
            verified: false,
        };
        w.verified = w.reverify(set)?;
        Ok(w)
    }

    /// Re-runs the defining check. `set` is the set the witness was found
    /// in; subset-sum witnesses do not need it.
    pub fn reverify(&self, set: Option<&SubsetSpec>) -> Result<bool> {
        let need_set = || set.ok_or_else(|| Error::Precondition("this witness re-checks against a set".into()));
        Ok(match &self.data {
            WitnessData::SubsetSum {
                generators,
                alpha,
                sum,
                modulus,
            } => {
                let mut seen = alpha.clone();
                seen.sort_unstable();
                seen.dedup();
                let valid = !alpha.is_empty()
                    && seen.len() == alpha.len()
                    && alpha.iter().all(|&i| i >= 1 && i <= generators.len());
                valid
                    && *modulus > 0
                    && alpha.iter().map(|&i| generators[i - 1]).sum::<i64>() == *sum
                    && sum.rem_euclid(*modulus) == 0
            }
            WitnessData::ShiftedSums { shift, generators } => {
                let e = need_set()?;
                fs_set(generators)?
                    .iter()
                    .all(|s| e.contains(&Element::Int(s.as_int().expect("integer sums") + shift)))
            }
            WitnessData::Chain { mode, generators } => {
                let e = need_set()?;
                let chain = FpChain::new(e.group(), generators.clone())?;
                verify_fp_containment(&chain, e, *mode)?.holds
            }
            WitnessData::Translate { g, k, cover } => {
                let t = need_set()?;
                let group = t.group();
                let target = match cover {
                    Some(c) => left_multiple(t, c)?,
                    None => t.clone(),
                };
                k.iter().all(|x| target.contains(&group.mul(x, g)))
            }
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Found,
    /// Exhaustive negative within the stated scope; says nothing beyond it.
    NotFound,
    BudgetExhausted,
}

/// What a search covered, so that negatives are always scoped.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "search", rename_all = "snake_case")]
pub enum SearchScope {
    Window {
        k: FiniteSet,
        cover: Option<FiniteSet>,
        excluded: Option<FiniteSet>,
        window_len: usize,
        window_first: Option<Element>,
        window_last: Option<Element>,
    },
    SubsetSums {
        m: usize,
        modulus: i64,
    },
    ShiftedSums {
        m: usize,
        generator_bound: i64,
        shift_bound: i64,
        shifts_completed: u64,
    },
    Chain {
        m: usize,
        mode: FpMode,
        escaping: bool,
        candidates: usize,
        budget: u64,
    },
}

impl SearchScope {
    fn window(k: &FiniteSet, cover: Option<&FiniteSet>, excluded: Option<&FiniteSet>, w: &FiniteSet) -> Self {
        SearchScope::Window {
            k: k.clone(),
            cover: cover.cloned(),
            excluded: excluded.cloned(),
            window_len: w.len(),
            window_first: w.first().cloned(),
            window_last: w.as_slice().last().cloned(),
        }
    }
}

/// Result of a bounded search.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Detection {
    pub kind: StructureKind,
    pub outcome: Outcome,
    pub witness: Option<StructureWitness>,
    pub scope: SearchScope,
    pub queries: u64,
}

impl Detection {
    pub fn found(&self) -> bool {
        self.outcome == Outcome::Found
    }
}

fn check_group(set: &SubsetSpec, elements: &FiniteSet) -> Result<Group> {
    let group = set.group();
    if let Some(x) = elements.iter().find(|x| x.backend() != group.backend()) {
        return Err(Error::BackendMismatch {
            expected: group.backend(),
            found: x.backend(),
        });
    }
    Ok(group)
}
