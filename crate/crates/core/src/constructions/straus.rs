use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{Element, Group};
use crate::rational::{ceil, Rational};
use crate::sets::SubsetSpec;

/// Removes `{a_n k + n : k ≥ 1}` for every `n ≥ 1`, with `a_n = 2ⁿ·c` and
/// `c = ⌈2/ε⌉`. The removed progressions have total relative mass
/// `Σ 1/a_n = 1/c ≤ ε/2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StrausParams {
    #[serde(with = "crate::rational::repr")]
    pub epsilon: Rational,
    pub base: i64,
}

impl StrausParams {
    pub fn new(epsilon: Rational) -> Result<Self> {
        if epsilon <= Rational::from_integer(0) || epsilon >= Rational::from_integer(1) {
            return Err(Error::Domain(format!("epsilon must lie in (0, 1), got {epsilon}")));
        }
        Ok(StrausParams {
            epsilon,
            base: ceil(&(Rational::from_integer(2) / epsilon)),
        })
    }

    /// `a_n`, or `None` once it overflows.
    pub fn modulus(&self, n: u32) -> Option<i64> {
        1i64.checked_shl(n).filter(|p| *p > 0)?.checked_mul(self.base)
    }

    /// First element of the `n`-th removed progression: `k ≥ b_n = 1`.
    pub fn tail_start(&self, _n: u32) -> i64 {
        1
    }

    /// `Σ_{n≥1} 1/a_n`, exactly.
    pub fn removed_mass(&self) -> Rational {
        Rational::new(1, self.base)
    }

    /// `Σ 1/a_n ≤ ε/2`, checked exactly.
    pub fn certified(&self) -> bool {
        self.removed_mass() <= self.epsilon / 2
    }

    pub fn member(&self, x: i64) -> bool {
        if x < 1 {
            return false;
        }
        let mut n = 1u32;
        while let Some(a) = self.modulus(n) {
            let first = match a.checked_add(n as i64) {
                Some(v) => v,
                None => break,
            };
            if first > x {
                break;
            }
            if (x - n as i64) % a == 0 {
                return false;
            }
            n += 1;
        }
        true
    }
}

/// `{x ≥ 1}` with the tails of sparser and sparser progressions removed.
pub fn straus_set(epsilon: Rational) -> Result<SubsetSpec> {
    let params = StrausParams::new(epsilon)?;
    Ok(SubsetSpec::new(
        format!("straus(eps={epsilon})"),
        Group::Integers,
        format!("N minus {{2^n·{}·k + n : k >= 1}} for n >= 1", params.base),
        move |x: &Element| x.as_int().is_some_and(|v| params.member(v)),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::FiniteSet;

    #[test]
    fn parameters() {
        let p = StrausParams::new(Rational::new(1, 2)).unwrap();
        assert_eq!(p.base, 4);
        assert_eq!(p.modulus(1), Some(8));
        assert!(p.certified());
        assert!(StrausParams::new(Rational::from_integer(1)).is_err());
        assert!(StrausParams::new(Rational::from_integer(0)).is_err());
    }

    #[test]
    fn first_progression_is_removed() {
        let p = StrausParams::new(Rational::new(1, 2)).unwrap();
        assert!(!p.member(9));
        for x in 1..=8 {
            assert!(p.member(x), "{x}");
        }
        assert!(!p.member(0) && !p.member(-5));
    }

    #[test]
    fn removal_is_exact() {
        let p = StrausParams::new(Rational::new(1, 10)).unwrap();
        for n in 1..8u32 {
            let a = p.modulus(n).unwrap();
            for k in 1..40 {
                assert!(!p.member(a * k + n as i64));
            }
        }
    }

    #[test]
    fn small_window_count() {
        let e = straus_set(Rational::new(1, 10)).unwrap();
        // removed below 100: 41, 81 (n = 1) and 82 (n = 2)
        let members = e.materialize(&FiniteSet::interval(1, 100));
        assert_eq!(members.len(), 97);
        assert!(members.len() >= 90);
    }
}
