use serde::{Deserialize, Serialize};

use super::{Detection, Outcome, SearchScope, StructureKind, StructureWitness, WitnessData};
use crate::error::{Error, Result};
use crate::group::{Element, FiniteSet, Group};
use crate::sets::SubsetSpec;

/// Longest chain whose product families are enumerated exhaustively.
pub const MAX_FP_CHAIN: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FpMode {
    /// `inc_α = g_{k_1} ⋯ g_{k_m}` for `k_1 < ... < k_m`.
    Fpi,
    /// `dec_α = g_{k_m} ⋯ g_{k_1}`.
    Fpd,
    /// `inc_α · dec_β` with `α ∩ β = ∅`, `α ∪ β ≠ ∅`.
    Fp,
}

impl FpMode {
    pub fn kind(self) -> StructureKind {
        match self {
            FpMode::Fpi => StructureKind::Fpi,
            FpMode::Fpd => StructureKind::Fpd,
            FpMode::Fp => StructureKind::Fp,
        }
    }
}

impl std::str::FromStr for FpMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "fpi" => Ok(FpMode::Fpi),
            "fpd" => Ok(FpMode::Fpd),
            "fp" => Ok(FpMode::Fp),
            _ => Err(Error::Parse(format!("unknown product mode `{s}` (fpi, fpd, fp)"))),
        }
    }
}

/// A finite generator list `g_1, ..., g_m`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FpChain {
    pub group: Group,
    pub generators: Vec<Element>,
}

impl FpChain {
    pub fn new(group: Group, generators: Vec<Element>) -> Result<Self> {
        if generators.is_empty() {
            return Err(Error::Domain("a chain needs at least one generator".into()));
        }
        for g in &generators {
            if !group.contains(g) {
                return Err(Error::Domain(format!("{g} is not an element of {group}")));
            }
        }
        Ok(FpChain { group, generators })
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    /// Whether `g_i ∉ exhaustion(i)` for every `i`.
    pub fn is_escaping(&self) -> bool {
        self.generators
            .iter()
            .enumerate()
            .all(|(i, g)| !self.group.in_exhaustion(g, i + 1))
    }

    fn mask(&self, indices: &[usize]) -> Result<u32> {
        let mut mask = 0u32;
        for &k in indices {
            if k == 0 || k > self.len() || k > 32 {
                return Err(Error::Domain(format!("index {k} outside 1..={}", self.len())));
            }
            mask |= 1 << (k - 1);
        }
        Ok(mask)
    }

    fn inc(&self, mask: u32) -> Element {
        let mut acc = self.group.identity();
        for (i, g) in self.generators.iter().enumerate() {
            if mask >> i & 1 == 1 {
                acc = self.group.mul(&acc, g);
            }
        }
        acc
    }

    fn dec(&self, mask: u32) -> Element {
        let mut acc = self.group.identity();
        for (i, g) in self.generators.iter().enumerate() {
            if mask >> i & 1 == 1 {
                acc = self.group.mul(g, &acc);
            }
        }
        acc
    }
}

fn indices(mask: u32) -> Vec<usize> {
    (0..32).filter(|i| mask >> i & 1 == 1).map(|i| i as usize + 1).collect()
}

/// `inc_α · dec_β`, with empty products equal to the identity.
pub fn fp_products(chain: &FpChain, alpha: &[usize], beta: &[usize]) -> Result<Element> {
    let a = chain.mask(alpha)?;
    let b = chain.mask(beta)?;
    if a & b != 0 {
        return Err(Error::Domain(format!("index sets {alpha:?} and {beta:?} overlap")));
    }
    if a | b == 0 {
        return Err(Error::Domain("α and β are both empty".into()));
    }
    Ok(chain.group.mul(&chain.inc(a), &chain.dec(b)))
}

/// `(α mask, β mask, product)` for every admissible pair of `mode`, in the
/// order `β` ascending, then `α` ascending. Stops early when `visit`
/// returns `false`.
fn for_each_product(chain: &FpChain, mode: FpMode, mut visit: impl FnMut(u32, u32, &Element) -> bool) -> Result<()> {
    let m = chain.len();
    if m > MAX_FP_CHAIN {
        return Err(Error::Budget(format!(
            "chains longer than {MAX_FP_CHAIN} are not enumerated (got {m})"
        )));
    }
    let group = chain.group;
    let full = (1u32 << m) - 1;
    // inc and dec over all masks, built from the mask without its top bit
    let mut inc = vec![group.identity(); 1 << m];
    let mut dec = vec![group.identity(); 1 << m];
    for mask in 1..=full {
        let top = 31 - mask.leading_zeros();
        let rest = (mask & !(1 << top)) as usize;
        let g = &chain.generators[top as usize];
        inc[mask as usize] = group.mul(&inc[rest], g);
        dec[mask as usize] = group.mul(g, &dec[rest]);
    }
    match mode {
        FpMode::Fpi => {
            for a in 1..=full {
                if !visit(a, 0, &inc[a as usize]) {
                    break;
                }
            }
        }
        FpMode::Fpd => {
            for b in 1..=full {
                if !visit(0, b, &dec[b as usize]) {
                    break;
                }
            }
        }
        FpMode::Fp => {
            'outer: for b in 0..=full {
                let free = full & !b;
                for a in 0..=full {
                    if a & free != a || (a | b) == 0 {
                        continue;
                    }
                    let product = if b == 0 {
                        inc[a as usize].clone()
                    } else if a == 0 {
                        dec[b as usize].clone()
                    } else {
                        group.mul(&inc[a as usize], &dec[b as usize])
                    };
                    if !visit(a, b, &product) {
                        break 'outer;
                    }
                }
            }
        }
    }
    Ok(())
}

/// The full product family of `mode`.
pub fn fp_set(chain: &FpChain, mode: FpMode) -> Result<FiniteSet> {
    let mut out = Vec::new();
    for_each_product(chain, mode, |_, _, p| {
        out.push(p.clone());
        true
    })?;
    Ok(out.into_iter().collect())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FpVerification {
    pub holds: bool,
    /// First violating `(α, β, product)` in the enumeration order.
    pub counterexample: Option<(Vec<usize>, Vec<usize>, Element)>,
    pub products_checked: u64,
}

/// Checks every admissible product of `mode` against `E`.
pub fn verify_fp_containment(chain: &FpChain, e: &SubsetSpec, mode: FpMode) -> Result<FpVerification> {
    let mut counterexample = None;
    let mut checked = 0u64;
    for_each_product(chain, mode, |a, b, p| {
        checked += 1;
        if e.contains(p) {
            true
        } else {
            counterexample = Some((indices(a), indices(b), p.clone()));
            false
        }
    })?;
    Ok(FpVerification {
        holds: counterexample.is_none(),
        counterexample,
        products_checked: checked,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainSearchOptions {
    /// Maximum number of membership queries to `E`.
    pub budget: u64,
    /// Require `g_i ∉ exhaustion(i)`.
    pub escaping: bool,
}

/// Backtracking search for `g_1, ..., g_m` drawn from `candidates` with
/// every product of `mode` inside `E`.
///
/// Keeps the nested sets `E_0 = E` and
/// `E_{i+1} = g⁻¹E_i ∩ E_i ∩ E_i g⁻¹` (FP), `E_i ∩ g⁻¹E_i` (FPI) or
/// `E_i ∩ E_i g⁻¹` (FPD) for `g = g_{i+1}`, and picks `g_{i+1} ∈ E_i`.
/// Each level is stored as the list of candidates it still contains, so
/// membership in `E_{i+1}` costs only the new shifted conditions.
/// Candidates are tried in the window's order.
pub fn fp_chain_search(
    e: &SubsetSpec,
    m: usize,
    mode: FpMode,
    candidates: &FiniteSet,
    opts: ChainSearchOptions,
) -> Result<Detection> {
    if m == 0 || m > MAX_FP_CHAIN {
        return Err(Error::Domain(format!("chain length must be in 1..={MAX_FP_CHAIN}")));
    }
    let group = super::check_group(e, candidates)?;
    let mut search = ChainSearch {
        e,
        group,
        mode,
        m,
        escaping: opts.escaping,
        budget: opts.budget,
        queries: 0,
        chain: Vec::with_capacity(m),
    };
    let scope = SearchScope::Chain {
        m,
        mode,
        escaping: opts.escaping,
        candidates: candidates.len(),
        budget: opts.budget,
    };
    let mut level0 = Vec::with_capacity(candidates.len());
    let mut exhausted = false;
    for x in candidates.iter() {
        if !search.spend(1) {
            exhausted = true;
            break;
        }
        if e.contains(x) {
            level0.push(x.clone());
        }
    }
    let step = if exhausted { ChainStep::Exhausted } else { search.descend(&level0) };
    let (outcome, witness) = match step {
        ChainStep::Found => {
            let data = WitnessData::Chain {
                mode,
                generators: search.chain.clone(),
            };
            (Outcome::Found, Some(StructureWitness::checked(mode.kind(), data, Some(e))?))
        }
        ChainStep::Done => (Outcome::NotFound, None),
        ChainStep::Exhausted => (Outcome::BudgetExhausted, None),
    };
    Ok(Detection {
        kind: mode.kind(),
        outcome,
        witness,
        scope,
        queries: search.queries,
    })
}

enum ChainStep {
    Found,
    Done,
    Exhausted,
}

struct ChainSearch<'a> {
    e: &'a SubsetSpec,
    group: Group,
    mode: FpMode,
    m: usize,
    escaping: bool,
    budget: u64,
    queries: u64,
    chain: Vec<Element>,
}

impl ChainSearch<'_> {
    fn spend(&mut self, n: u64) -> bool {
        if self.queries + n > self.budget {
            return false;
        }
        self.queries += n;
        true
    }

    /// Membership in `E_depth`, expanding the recursion down to `E`.
    fn in_level(&mut self, x: &Element, depth: usize) -> Option<bool> {
        if depth == 0 {
            if !self.spend(1) {
                return None;
            }
            return Some(self.e.contains(x));
        }
        let g = self.chain[depth - 1].clone();
        if !self.in_level(x, depth - 1)? {
            return Some(false);
        }
        self.shifted_conditions(x, &g, depth - 1)
    }

    /// The conditions `E_{depth+1}` adds on top of `E_depth`.
    fn shifted_conditions(&mut self, x: &Element, g: &Element, depth: usize) -> Option<bool> {
        if matches!(self.mode, FpMode::Fpi | FpMode::Fp) && !self.in_level(&self.group.mul(g, x), depth)? {
            return Some(false);
        }
        if matches!(self.mode, FpMode::Fpd | FpMode::Fp) && !self.in_level(&self.group.mul(x, g), depth)? {
            return Some(false);
        }
        Some(true)
    }

    /// `level` lists the candidates inside `E_i` with `i = chain.len()`.
    fn descend(&mut self, level: &[Element]) -> ChainStep {
        let depth = self.chain.len();
        if depth == self.m {
            return ChainStep::Found;
        }
        for g in level {
            if self.escaping && self.group.in_exhaustion(g, depth + 1) {
                continue;
            }
            self.chain.push(g.clone());
            if depth + 1 == self.m {
                return ChainStep::Found;
            }
            let mut next = Vec::new();
            for x in level {
                match self.shifted_conditions(x, g, depth) {
                    Some(true) => next.push(x.clone()),
                    Some(false) => {}
                    None => return ChainStep::Exhausted,
                }
            }
            match self.descend(&next) {
                ChainStep::Done => {}
                other => return other,
            }
            self.chain.pop();
        }
        ChainStep::Done
    }
}

/// Outcome of the greedy increasing-products extraction.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Extraction {
    /// The generators found so far; complete when `complete` is set.
    pub generators: Vec<Element>,
    pub complete: bool,
    pub candidates_tried: u64,
}

/// Greedy escaping chain with `FPI(g_1, ..., g_m) ⊆ T`.
///
/// With `H = FPI(g_1, ..., g_n)` (empty at the start), `g_{n+1}` is the
/// first element of the enumeration, among the first `budget`, with
/// `g_{n+1} ∉ exhaustion(n + 1)` and `(H ∪ {id}) g_{n+1} ⊆ T`. Then
/// `FPI(g_1, ..., g_{n+1}) = H ∪ {g_{n+1}} ∪ H g_{n+1} ⊆ T`.
pub fn extract_fpi_from_thick(t: &SubsetSpec, m: usize, budget: u64) -> Result<Extraction> {
    if m == 0 || m > MAX_FP_CHAIN {
        return Err(Error::Domain(format!("chain length must be in 1..={MAX_FP_CHAIN}")));
    }
    let group = t.group();
    let mut h: Vec<Element> = Vec::new();
    let mut generators = Vec::with_capacity(m);
    let mut tried = 0u64;
    for n in 0..m {
        let mut chosen = None;
        for (i, g) in group.elements().enumerate() {
            if i as u64 >= budget {
                break;
            }
            tried += 1;
            if group.in_exhaustion(&g, n + 1) || !t.contains(&g) {
                continue;
            }
            if h.iter().all(|x| t.contains(&group.mul(x, &g))) {
                chosen = Some(g);
                break;
            }
        }
        let Some(g) = chosen else {
            return Ok(Extraction {
                generators,
                complete: false,
                candidates_tried: tried,
            });
        };
        let extended: Vec<Element> = h.iter().map(|x| group.mul(x, &g)).collect();
        h.push(g.clone());
        h.extend(extended);
        generators.push(g);
    }
    Ok(Extraction {
        generators,
        complete: true,
        candidates_tried: tried,
    })
}
