//! Finitely supported permutations of the positive integers.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use smallvec::SmallVec;

use crate::error::{Error, Result};

type Images = SmallVec<[u32; 12]>;

/// A permutation of `{1, 2, ...}` moving finitely many points.
///
/// Stored densely as `images[i] = σ(i + 1)` with trailing fixed points
/// trimmed, so two values representing the same function compare equal.
/// The length of the image table is the *degree*: the largest moved point,
/// or 0 for the identity.
///
/// Ordering is by degree first and lexicographic on images within a degree,
/// which is also the enumeration order of S(ℕ).
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Perm {
    images: Images,
}

impl Perm {
    pub fn identity() -> Self {
        Perm::default()
    }

    /// Builds from an image table `[σ(1), ..., σ(n)]`.
    pub fn from_images(images: &[u32]) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n + 1];
        for &y in images {
            if y == 0 || y as usize > n || seen[y as usize] {
                return Err(Error::Domain(format!("{images:?} is not a permutation of 1..={n}")));
            }
            seen[y as usize] = true;
        }
        Ok(Self::from_trusted(images.iter().copied().collect()))
    }

    fn from_trusted(mut images: Images) -> Self {
        while let Some(&last) = images.last() {
            if last as usize == images.len() {
                images.pop();
            } else {
                break;
            }
        }
        Perm { images }
    }

    /// Builds from disjoint cycles, e.g. `[[1, 5], [2, 3]]` for `(1 5)(2 3)`.
    pub fn from_cycles<C: AsRef<[u32]>>(cycles: &[C]) -> Result<Self> {
        let degree = cycles
            .iter()
            .flat_map(|c| c.as_ref().iter().copied())
            .max()
            .unwrap_or(0) as usize;
        let mut images: Images = (1..=degree as u32).collect();
        let mut touched = vec![false; degree + 1];
        for cycle in cycles {
            let cycle = cycle.as_ref();
            for (i, &p) in cycle.iter().enumerate() {
                if p == 0 {
                    return Err(Error::Domain("cycle entries must be positive".into()));
                }
                if touched[p as usize] {
                    return Err(Error::Domain(format!("point {p} appears in more than one cycle position")));
                }
                touched[p as usize] = true;
                images[p as usize - 1] = cycle[(i + 1) % cycle.len()];
            }
        }
        Ok(Self::from_trusted(images))
    }

    /// `σ(x)`.
    #[inline]
    pub fn apply(&self, x: u32) -> u32 {
        match self.images.get((x as usize).wrapping_sub(1)) {
            Some(&y) if x > 0 => y,
            _ => x,
        }
    }

    pub fn degree(&self) -> u32 {
        self.images.len() as u32
    }

    pub fn is_identity(&self) -> bool {
        self.images.is_empty()
    }

    /// `(self · other)(x) = self(other(x))`.
    pub fn compose(&self, other: &Perm) -> Perm {
        let n = self.images.len().max(other.images.len());
        let images: Images = (1..=n as u32).map(|x| self.apply(other.apply(x))).collect();
        Self::from_trusted(images)
    }

    pub fn inverse(&self) -> Perm {
        let mut images: Images = SmallVec::from_elem(0, self.images.len());
        for (i, &y) in self.images.iter().enumerate() {
            images[y as usize - 1] = i as u32 + 1;
        }
        Perm { images }
    }

    /// Parity as `+1` (even) or `-1` (odd).
    pub fn sign(&self) -> i8 {
        let transpositions: usize = self.cycles().iter().map(|c| c.len() - 1).sum();
        if transpositions.is_multiple_of(2) {
            1
        } else {
            -1
        }
    }

    /// Moved points as `(point, image)` pairs, ascending by point.
    pub fn pairs(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.images
            .iter()
            .enumerate()
            .map(|(i, &y)| (i as u32 + 1, y))
            .filter(|(x, y)| x != y)
    }

    /// Non-trivial cycles, each starting at its smallest point.
    pub fn cycles(&self) -> Vec<Vec<u32>> {
        let n = self.images.len();
        let mut seen = vec![false; n + 1];
        let mut out = Vec::new();
        for start in 1..=n as u32 {
            if seen[start as usize] || self.apply(start) == start {
                continue;
            }
            let mut cycle = vec![start];
            seen[start as usize] = true;
            let mut x = self.apply(start);
            while x != start {
                seen[x as usize] = true;
                cycle.push(x);
                x = self.apply(x);
            }
            out.push(cycle);
        }
        out
    }

    pub fn images(&self) -> &[u32] {
        &self.images
    }
}

impl Ord for Perm {
    fn cmp(&self, other: &Self) -> Ordering {
        self.images
            .len()
            .cmp(&other.images.len())
            .then_with(|| self.images.cmp(&other.images))
    }
}

impl PartialOrd for Perm {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return f.write_str("()");
        }
        for cycle in cycles {
            f.write_str("(")?;
            for (i, p) in cycle.iter().enumerate() {
                if i > 0 {
                    f.write_str(" ")?;
                }
                write!(f, "{p}")?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Perm {
    type Err = Error;

    /// Parses cycle notation such as `"(1 5)(2 3)"`; `"()"` is the identity.
    /// Cycles may share points, in which case they are composed right to left.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = |why: &str| Error::Parse(format!("bad cycle notation `{s}`: {why}"));
        let mut result = Perm::identity();
        let mut rest = s;
        let mut cycles = Vec::new();
        while !rest.is_empty() {
            let open = rest.strip_prefix('(').ok_or_else(|| bad("expected `(`"))?;
            let close = open.find(')').ok_or_else(|| bad("unclosed `(`"))?;
            let body = &open[..close];
            let points = body
                .split(|c: char| c.is_whitespace() || c == ',')
                .filter(|t| !t.is_empty())
                .map(|t| t.parse::<u32>().map_err(|_| bad("non-integer point")))
                .collect::<Result<Vec<_>>>()?;
            let mut sorted = points.clone();
            sorted.sort_unstable();
            sorted.dedup();
            if sorted.len() != points.len() {
                return Err(bad("repeated point within a cycle"));
            }
            if points.len() > 1 {
                cycles.push(points);
            }
            rest = open[close + 1..].trim_start();
        }
        for cycle in cycles.iter().rev() {
            let c = Perm::from_cycles(&[cycle.as_slice()])?;
            result = c.compose(&result);
        }
        Ok(result)
    }
}

impl Serialize for Perm {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Perm {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

/// Lexicographic successor of `v` in place; `false` once `v` was the last.
pub(crate) fn next_permutation(v: &mut [u32]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// All permutations of `{1..=n}` in lexicographic order of image tables,
/// optionally only the even ones.
pub fn all_of_degree_at_most(n: u32, even_only: bool) -> Vec<Perm> {
    let mut v: Vec<u32> = (1..=n).collect();
    let mut out = Vec::new();
    loop {
        let p = Perm::from_trusted(v.iter().copied().collect());
        if !even_only || p.sign() == 1 {
            out.push(p);
        }
        if !next_permutation(&mut v) {
            break;
        }
    }
    out
}
