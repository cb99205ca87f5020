//! Window-scale statements about orbit points `g·1_Q` in `{0,1}^G`, where
//! `(g·1_Q)(x) = 1_Q(x·g)`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::folner::FolnerSequence;
use crate::group::{Backend, Element, FiniteSet, Group};
use crate::rational::{ratio, Rational};
use crate::sets::SubsetSpec;
use crate::structures::is_syndetic_window;

const PARALLEL_THRESHOLD: usize = 1 << 12;

/// Largest domain for which all `2^|D|` patterns are tabulated.
pub const MAX_PATTERN_DOMAIN: usize = 20;

/// A `{0,1}`-valued function on a finite domain.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Pattern {
    domain: FiniteSet,
    bits: Vec<bool>,
}

impl Pattern {
    pub fn new(cells: impl IntoIterator<Item = (Element, bool)>) -> Result<Self> {
        let mut cells: Vec<(Element, bool)> = cells.into_iter().collect();
        cells.sort_by(|a, b| a.0.cmp(&b.0));
        if cells.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(Error::Domain("pattern assigns a cell twice".into()));
        }
        let (domain, bits): (Vec<Element>, Vec<bool>) = cells.into_iter().unzip();
        Ok(Pattern {
            domain: FiniteSet::from_sorted_unchecked(domain),
            bits,
        })
    }

    pub fn empty() -> Self {
        Pattern {
            domain: FiniteSet::new(),
            bits: Vec::new(),
        }
    }

    /// Parses `"0:1,1:0,2:0"` (cells of ℤ with their bits).
    pub fn parse_int(text: &str) -> Result<Self> {
        let text = text.trim();
        if text.is_empty() {
            return Ok(Self::empty());
        }
        let cells = text
            .split(',')
            .map(|cell| {
                let (x, b) = cell
                    .split_once(':')
                    .ok_or_else(|| Error::Parse(format!("cell {cell:?} is not of the form x:b")))?;
                let x: i64 = x.trim().parse().map_err(|_| Error::Parse(format!("bad cell {x:?}")))?;
                let b = match b.trim() {
                    "0" => false,
                    "1" => true,
                    other => return Err(Error::Parse(format!("bit must be 0 or 1, got {other:?}"))),
                };
                Ok((Element::Int(x), b))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(cells)
    }

    /// The pattern on `domain` whose bits are the binary digits of `mask`,
    /// least significant digit on the first cell.
    pub fn from_mask(domain: &FiniteSet, mask: u64) -> Self {
        Pattern {
            domain: domain.clone(),
            bits: (0..domain.len()).map(|i| mask >> i & 1 == 1).collect(),
        }
    }

    pub fn domain(&self) -> &FiniteSet {
        &self.domain
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn get(&self, x: &Element) -> Option<bool> {
        self.domain.as_slice().binary_search(x).ok().map(|i| self.bits[i])
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    /// `C^g` on `D·g` with `C^g(x·g) = C(x)`; `h` matches `C^g` exactly
    /// when `g·h` matches `C`.
    pub fn shifted(&self, group: Group, g: &Element) -> Pattern {
        Pattern::new(self.domain.iter().zip(&self.bits).map(|(x, &b)| (group.mul(x, g), b)))
            .expect("right multiplication is injective")
    }

    /// Whether the orbit point `g·1_Q` agrees with this pattern.
    pub fn matches(&self, q: &SubsetSpec, g: &Element) -> bool {
        let group = q.group();
        self.domain
            .iter()
            .zip(&self.bits)
            .all(|(x, &b)| q.contains(&group.mul(x, g)) == b)
    }
}

/// `x ↦ 1_Q(x·g)` on `domain`.
pub fn orbit_point(q: &SubsetSpec, g: &Element, domain: &FiniteSet) -> Pattern {
    let group = q.group();
    Pattern {
        domain: domain.clone(),
        bits: domain.iter().map(|x| q.contains(&group.mul(x, g))).collect(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EmpiricalMeasure {
    pub cylinder: Pattern,
    pub n: usize,
    pub matches: usize,
    pub size: usize,
    #[serde(with = "crate::rational::repr")]
    pub frequency: Rational,
}

fn count_matching(points: &[Element], pred: impl Fn(&Element) -> bool + Sync) -> usize {
    if points.len() >= PARALLEL_THRESHOLD {
        points.par_iter().filter(|g| pred(g)).count()
    } else {
        points.iter().filter(|g| pred(g)).count()
    }
}

fn check_backend(q: &SubsetSpec, psi: &FolnerSequence) -> Result<()> {
    if q.group().backend() != psi.group().backend() {
        return Err(Error::BackendMismatch {
            expected: psi.group().backend(),
            found: q.group().backend(),
        });
    }
    Ok(())
}

/// `μ_N(C) = |{g ∈ Ψ_N : g·1_Q matches C}| / |Ψ_N|`, exactly.
pub fn empirical_measure(q: &SubsetSpec, psi: &FolnerSequence, n: usize, cylinder: &Pattern) -> Result<EmpiricalMeasure> {
    check_backend(q, psi)?;
    let points = psi.at(n)?;
    let matches = count_matching(points.as_slice(), |g| cylinder.matches(q, g));
    Ok(EmpiricalMeasure {
        cylinder: cylinder.clone(),
        n,
        matches,
        size: points.len(),
        frequency: ratio(matches, points.len()),
    })
}

/// `μ_N` of every pattern on `domain`, indexed by [`Pattern::from_mask`].
/// The counts sum to `|Ψ_N|`.
pub fn pattern_frequencies(q: &SubsetSpec, psi: &FolnerSequence, n: usize, domain: &FiniteSet) -> Result<Vec<Rational>> {
    check_backend(q, psi)?;
    if domain.len() > MAX_PATTERN_DOMAIN {
        return Err(Error::Budget(format!(
            "{} cells give too many patterns (at most {MAX_PATTERN_DOMAIN} cells)",
            domain.len()
        )));
    }
    let points = psi.at(n)?;
    let mask_of = |g: &Element| {
        orbit_point(q, g, domain)
            .bits
            .iter()
            .enumerate()
            .fold(0usize, |m, (i, &b)| m | (b as usize) << i)
    };
    let mut counts = vec![0usize; 1 << domain.len()];
    let masks: Vec<usize> = if points.len() >= PARALLEL_THRESHOLD {
        points.as_slice().par_iter().map(mask_of).collect()
    } else {
        points.iter().map(mask_of).collect()
    };
    for m in masks {
        counts[m] += 1;
    }
    Ok(counts.into_iter().map(|c| ratio(c, points.len())).collect())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitProbe {
    pub k: FiniteSet,
    pub domain: FiniteSet,
    pub samples: usize,
    /// Samples `g` for which `domain ⊆ K·(Q g⁻¹)`.
    pub positives: Vec<Element>,
}

/// Tests each sampled orbit point `x ↦ 1_Q(x·g)` for `(K, domain)`
/// syndeticity, i.e. whether every `w ∈ domain` has some `k ∈ K` with
/// `k⁻¹·w·g ∈ Q`.
pub fn syndetic_orbit_probe(q: &SubsetSpec, k: &FiniteSet, samples: &[Element], domain: &FiniteSet) -> Result<OrbitProbe> {
    let group = q.group();
    let mut positives = Vec::new();
    for g in samples {
        let inner = q.clone();
        let g_owned = g.clone();
        let translated = SubsetSpec::new("Qg⁻¹", group, "orbit point", move |x| inner.contains(&group.mul(x, &g_owned)));
        if is_syndetic_window(&translated, k, domain)? {
            positives.push(g.clone());
        }
    }
    Ok(OrbitProbe {
        k: k.clone(),
        domain: domain.clone(),
        samples: samples.len(),
        positives,
    })
}

/// `1 ∈ Q′`, `0, 2 ∉ Q′`, and every other member of `Q′` in the window has a
/// neighbour in `Q′`. Then `1` is the only position where the pattern
/// `{-1 ↦ 0, 0 ↦ 1, 1 ↦ 0}` occurs.
pub fn unique_pattern_check(q: &SubsetSpec, window: &FiniteSet) -> Result<bool> {
    if q.group().backend() != Backend::Integer {
        return Err(Error::BackendMismatch {
            expected: Backend::Integer,
            found: q.group().backend(),
        });
    }
    let has = |v: i64| q.contains(&Element::Int(v));
    if !has(1) || has(0) || has(2) {
        return Ok(false);
    }
    for x in window.iter() {
        let v = x.as_int().ok_or_else(|| Error::Domain(format!("{x} is not an integer")))?;
        if v != 1 && has(v) && !has(v - 1) && !has(v + 1) {
            return Ok(false);
        }
    }
    Ok(true)
}
