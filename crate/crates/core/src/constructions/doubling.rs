use crate::error::{Error, Result};
use crate::group::{Backend, Element, Group};
use crate::sets::SubsetSpec;

/// `Q′ = 2Q ∪ (2Q + 1) ∪ {1}`. Every member other than 1 has a neighbour
/// in `Q′`, because `2q` and `2q + 1` come in pairs.
///
/// Requires `0, 1 ∉ Q`; shift `Q` first otherwise.
pub fn doubling_example(q: &SubsetSpec) -> Result<SubsetSpec> {
    if q.group().backend() != Backend::Integer {
        return Err(Error::BackendMismatch {
            expected: Backend::Integer,
            found: q.group().backend(),
        });
    }
    for v in [0, 1] {
        if q.contains(&Element::Int(v)) {
            return Err(Error::Precondition(format!(
                "{v} ∈ {}; shift the set so that 0 and 1 are not members",
                q.name()
            )));
        }
    }
    let inner = q.clone();
    Ok(SubsetSpec::new(
        format!("double({})", q.name()),
        Group::Integers,
        format!("2Q ∪ (2Q+1) ∪ {{1}} for Q = {}", q.name()),
        move |x: &Element| {
            x.as_int().is_some_and(|v| v == 1 || inner.contains(&Element::Int(v.div_euclid(2))))
        },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::FiniteSet;

    fn ints(v: &[i64]) -> FiniteSet {
        v.iter().copied().map(Element::Int).collect()
    }

    #[test]
    fn doubles_a_finite_set() {
        let q = SubsetSpec::finite("Q", Group::Integers, ints(&[2, 5]));
        let d = doubling_example(&q).unwrap();
        assert_eq!(d.materialize(&FiniteSet::interval(-20, 20)), ints(&[1, 4, 5, 10, 11]));
        let e = doubling_example(&SubsetSpec::empty(Group::Integers)).unwrap();
        assert_eq!(e.materialize(&FiniteSet::interval(-20, 20)), ints(&[1]));
    }

    #[test]
    fn rejects_zero_and_one() {
        for bad in [0, 1] {
            let q = SubsetSpec::finite("Q", Group::Integers, ints(&[bad, 7]));
            assert!(matches!(doubling_example(&q), Err(Error::Precondition(_))));
        }
        assert!(doubling_example(&SubsetSpec::all(Group::Alternating)).is_err());
    }
}
