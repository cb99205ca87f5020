//! Countable groups: ℤ, ℤᵈ, the finitary symmetric group S(ℕ) and its
//! alternating subgroup A(ℕ).
//!
//! Every backend comes with a bijective enumeration `ℕ → G` and a nested
//! exhaustion by finite sets, which is how compact sets are modelled in the
//! discrete setting.

mod finite;
mod perm;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use finite::FiniteSet;
pub use perm::{all_of_degree_at_most, Perm};

/// Extra points in the permutation exhaustion: level `n` is supported in
/// `{1, ..., n + 3}`, so level 1 already holds every `(1 n)(2 3)` on 4 points.
pub const PERM_EXHAUSTION_OFFSET: u32 = 3;

/// Which representation an element uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Backend {
    Integer,
    Lattice(usize),
    Permutation,
}

impl fmt::Display for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Backend::Integer => f.write_str("integer"),
            Backend::Lattice(d) => write!(f, "lattice Z^{d}"),
            Backend::Permutation => f.write_str("permutation"),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Element {
    Int(i64),
    Lattice(Vec<i64>),
    Perm(Perm),
}

impl Element {
    pub fn backend(&self) -> Backend {
        match self {
            Element::Int(_) => Backend::Integer,
            Element::Lattice(v) => Backend::Lattice(v.len()),
            Element::Perm(_) => Backend::Permutation,
        }
    }

    pub fn as_int(&self) -> Option<i64> {
        match self {
            Element::Int(n) => Some(*n),
            _ => None,
        }
    }

    pub fn as_perm(&self) -> Option<&Perm> {
        match self {
            Element::Perm(p) => Some(p),
            _ => None,
        }
    }
}

impl From<i64> for Element {
    fn from(n: i64) -> Self {
        Element::Int(n)
    }
}

impl From<Perm> for Element {
    fn from(p: Perm) -> Self {
        Element::Perm(p)
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Element::Int(n) => write!(f, "{n}"),
            Element::Lattice(v) => {
                f.write_str("(")?;
                for (i, x) in v.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{x}")?;
                }
                f.write_str(")")
            }
            Element::Perm(p) => write!(f, "{p}"),
        }
    }
}

impl fmt::Debug for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A countable group backend. Values are plain descriptors; elements carry
/// their own payload.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Group {
    Integers,
    Lattice(usize),
    Symmetric,
    Alternating,
}

impl Group {
    pub fn backend(&self) -> Backend {
        match self {
            Group::Integers => Backend::Integer,
            Group::Lattice(d) => Backend::Lattice(*d),
            Group::Symmetric | Group::Alternating => Backend::Permutation,
        }
    }

    pub fn identity(&self) -> Element {
        match self {
            Group::Integers => Element::Int(0),
            Group::Lattice(d) => Element::Lattice(vec![0; *d]),
            Group::Symmetric | Group::Alternating => Element::Perm(Perm::identity()),
        }
    }

    fn check(&self, g: &Element) -> Result<()> {
        if g.backend() != self.backend() {
            return Err(Error::BackendMismatch {
                expected: self.backend(),
                found: g.backend(),
            });
        }
        Ok(())
    }

    /// Whether `g` is an element of this group (right payload, and even
    /// parity for A(ℕ)).
    pub fn contains(&self, g: &Element) -> bool {
        match (self, g) {
            (Group::Integers, Element::Int(_)) => true,
            (Group::Lattice(d), Element::Lattice(v)) => v.len() == *d,
            (Group::Symmetric, Element::Perm(_)) => true,
            (Group::Alternating, Element::Perm(p)) => p.sign() == 1,
            _ => false,
        }
    }

    /// `g · h`; for permutations `(g·h)(x) = g(h(x))`.
    pub fn multiply(&self, g: &Element, h: &Element) -> Result<Element> {
        self.check(g)?;
        self.check(h)?;
        Ok(match (g, h) {
            (Element::Int(a), Element::Int(b)) => Element::Int(a + b),
            (Element::Lattice(a), Element::Lattice(b)) => {
                Element::Lattice(a.iter().zip(b).map(|(x, y)| x + y).collect())
            }
            (Element::Perm(a), Element::Perm(b)) => Element::Perm(a.compose(b)),
            _ => unreachable!("backends checked above"),
        })
    }

    /// Infallible [`Group::multiply`] for hot loops over elements already
    /// known to belong to this group.
    ///
    /// # Panics
    /// On a backend mismatch.
    pub fn mul(&self, g: &Element, h: &Element) -> Element {
        match self.multiply(g, h) {
            Ok(x) => x,
            Err(e) => panic!("{e}"),
        }
    }

    pub fn inverse(&self, g: &Element) -> Result<Element> {
        self.check(g)?;
        Ok(match g {
            Element::Int(a) => Element::Int(-a),
            Element::Lattice(a) => Element::Lattice(a.iter().map(|x| -x).collect()),
            Element::Perm(p) => Element::Perm(p.inverse()),
        })
    }

    /// Infallible [`Group::inverse`].
    ///
    /// # Panics
    /// On a backend mismatch.
    pub fn inv(&self, g: &Element) -> Element {
        match self.inverse(g) {
            Ok(x) => x,
            Err(e) => panic!("{e}"),
        }
    }

    /// Parity of a permutation.
    pub fn sign(&self, g: &Element) -> Result<i8> {
        match g {
            Element::Perm(p) => Ok(p.sign()),
            other => Err(Error::Unsupported {
                op: "sign",
                backend: other.backend(),
            }),
        }
    }

    /// The `index`-th element of a fixed bijection `ℕ → G`.
    ///
    /// ℤ: `0, 1, -1, 2, -2, ...`; ℤᵈ: sup-norm shells, lexicographic inside a
    /// shell; S(ℕ)/A(ℕ): by degree, lexicographic on image tables inside a
    /// degree. The permutation case walks the enumeration, so it costs
    /// `O(index)`; use [`Group::elements`] for scans.
    pub fn enumerate(&self, index: u64) -> Element {
        match self {
            Group::Integers => Element::Int(int_at(index)),
            Group::Lattice(d) => Element::Lattice(lattice_at(*d, index)),
            _ => self
                .elements()
                .nth(index as usize)
                .expect("permutation enumeration is infinite"),
        }
    }

    /// The enumeration as an iterator.
    pub fn elements(&self) -> Box<dyn Iterator<Item = Element> + Send> {
        match *self {
            Group::Integers => Box::new((0u64..).map(|i| Element::Int(int_at(i)))),
            Group::Lattice(d) => Box::new((0u32..).flat_map(move |r| lattice_shell(d, r).map(Element::Lattice))),
            Group::Symmetric => Box::new(PermEnumeration::new(false).map(Element::Perm)),
            Group::Alternating => Box::new(PermEnumeration::new(true).map(Element::Perm)),
        }
    }

    /// Level `n ≥ 1` of the exhaustion `K_1 ⊂ K_2 ⊂ ...`.
    ///
    /// ℤ: `[-n, n]`; ℤᵈ: `[-n, n]^d`; S(ℕ)/A(ℕ): all (even) permutations
    /// supported in `{1, ..., n + 3}`.
    pub fn exhaustion(&self, n: usize) -> Result<FiniteSet> {
        if n == 0 {
            return Err(Error::Domain("exhaustion levels start at 1".into()));
        }
        let r = n as i64;
        Ok(match self {
            Group::Integers => (-r..=r).map(Element::Int).collect(),
            Group::Lattice(d) => BoxIter::new(*d, r).map(Element::Lattice).collect(),
            Group::Symmetric | Group::Alternating => {
                let degree = n as u32 + PERM_EXHAUSTION_OFFSET;
                if degree > 10 {
                    return Err(Error::Budget(format!(
                        "permutation exhaustion level {n} has {degree}! elements"
                    )));
                }
                all_of_degree_at_most(degree, *self == Group::Alternating)
                    .into_iter()
                    .map(Element::Perm)
                    .collect()
            }
        })
    }

    /// Least `n ≥ 1` with `g ∈ exhaustion(n)`.
    pub fn exhaustion_level(&self, g: &Element) -> usize {
        let level = match g {
            Element::Int(a) => a.unsigned_abs() as usize,
            Element::Lattice(v) => v.iter().map(|x| x.unsigned_abs() as usize).max().unwrap_or(0),
            Element::Perm(p) => p.degree().saturating_sub(PERM_EXHAUSTION_OFFSET) as usize,
        };
        level.max(1)
    }

    /// `g ∈ exhaustion(n)` without materialising the level.
    pub fn in_exhaustion(&self, g: &Element, n: usize) -> bool {
        self.exhaustion_level(g) <= n
    }

    /// `{a · b : a ∈ left, b ∈ right}`.
    pub fn product_set(&self, left: &FiniteSet, right: &FiniteSet) -> FiniteSet {
        left.iter()
            .flat_map(|a| right.iter().map(move |b| self.mul(a, b)))
            .collect()
    }

    pub fn inverse_set(&self, set: &FiniteSet) -> FiniteSet {
        set.iter().map(|g| self.inv(g)).collect()
    }

    pub fn id(&self) -> String {
        match self {
            Group::Integers => "z".into(),
            Group::Lattice(d) => format!("z{d}"),
            Group::Symmetric => "sym".into(),
            Group::Alternating => "alt".into(),
        }
    }
}

impl fmt::Display for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.id())
    }
}

impl FromStr for Group {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "z" | "int" | "integers" => Ok(Group::Integers),
            "sym" | "s" | "symmetric" => Ok(Group::Symmetric),
            "alt" | "a" | "alternating" => Ok(Group::Alternating),
            other => {
                let digits = other
                    .strip_prefix("z^")
                    .or_else(|| other.strip_prefix('z'))
                    .ok_or_else(|| Error::Parse(format!("unknown group `{s}`")))?;
                let d: usize = digits
                    .parse()
                    .map_err(|_| Error::Parse(format!("unknown group `{s}`")))?;
                if d == 0 {
                    return Err(Error::Parse("lattice dimension must be positive".into()));
                }
                Ok(if d == 1 { Group::Integers } else { Group::Lattice(d) })
            }
        }
    }
}

fn int_at(i: u64) -> i64 {
    if i % 2 == 1 {
        i.div_ceil(2) as i64
    } else {
        -((i / 2) as i64)
    }
}

/// Lexicographic odometer over `[-r, r]^d`.
struct BoxIter {
    r: i64,
    current: Option<Vec<i64>>,
}

impl BoxIter {
    fn new(d: usize, r: i64) -> Self {
        BoxIter {
            r,
            current: Some(vec![-r; d]),
        }
    }
}

impl Iterator for BoxIter {
    type Item = Vec<i64>;

    fn next(&mut self) -> Option<Vec<i64>> {
        let out = self.current.take()?;
        let mut next = out.clone();
        let mut i = next.len();
        loop {
            if i == 0 {
                break;
            }
            i -= 1;
            if next[i] < self.r {
                next[i] += 1;
                self.current = Some(next);
                break;
            }
            next[i] = -self.r;
        }
        Some(out)
    }
}

fn lattice_shell(d: usize, r: u32) -> impl Iterator<Item = Vec<i64>> {
    let r = r as i64;
    BoxIter::new(d, r).filter(move |v| v.iter().map(|x| x.abs()).max().unwrap_or(0) == r)
}

fn lattice_at(d: usize, index: u64) -> Vec<i64> {
    let mut r = 0u32;
    let mut inner = 0u64;
    loop {
        let outer = (2 * r as u64 + 1).pow(d as u32);
        if index < outer {
            return lattice_shell(d, r)
                .nth((index - inner) as usize)
                .expect("index falls inside this shell");
        }
        inner = outer;
        r += 1;
    }
}

/// Degree-graded, lexicographic enumeration of S(ℕ) or A(ℕ).
struct PermEnumeration {
    even_only: bool,
    degree: u32,
    current: Vec<u32>,
    fresh: bool,
}

impl PermEnumeration {
    fn new(even_only: bool) -> Self {
        PermEnumeration {
            even_only,
            degree: 0,
            current: Vec::new(),
            fresh: true,
        }
    }
}

impl Iterator for PermEnumeration {
    type Item = Perm;

    fn next(&mut self) -> Option<Perm> {
        loop {
            if self.fresh {
                self.fresh = false;
            } else if !perm::next_permutation(&mut self.current) {
                self.degree += 1;
                self.current = (1..=self.degree).collect();
            }
            // only permutations whose largest moved point is exactly `degree`
            let top_moved = self.degree == 0 || self.current[self.degree as usize - 1] != self.degree;
            if !top_moved {
                continue;
            }
            let p = Perm::from_images(&self.current).expect("lexicographic successor is a permutation");
            if self.even_only && p.sign() != 1 {
                continue;
            }
            return Some(p);
        }
    }
}
