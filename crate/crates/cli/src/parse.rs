//! Text forms of groups, elements, finite sets, sets and Følner sequences.

use std::path::Path;

use amenable::constructions::{alt_group_example, doubling_example, non_pws_large_set, straus_set, calibration_grid};
use amenable::rational::parse_rational;
use amenable::rle::Runs;
use amenable::{Element, FiniteSet, FolnerSequence, Group, Perm, Rational, SubsetSpec};

use crate::error::{CliError, CliResult};

fn invalid(msg: impl Into<String>) -> CliError {
    CliError::Invalid(msg.into())
}

pub fn group(text: &str) -> CliResult<Group> {
    Ok(text.parse()?)
}

/// `5`, `[1,2]` or `(1 2)(3 4)` depending on the group.
pub fn element(group: Group, text: &str) -> CliResult<Element> {
    let text = text.trim();
    let x = match group {
        Group::Integers => Element::Int(text.parse().map_err(|_| invalid(format!("bad integer `{text}`")))?),
        Group::Lattice(d) => {
            let body = text.trim_start_matches('[').trim_end_matches(']');
            let v = body
                .split(',')
                .map(|t| t.trim().parse::<i64>().map_err(|_| invalid(format!("bad vector `{text}`"))))
                .collect::<CliResult<Vec<_>>>()?;
            if v.len() != d {
                return Err(invalid(format!("`{text}` does not have {d} coordinates")));
            }
            Element::Lattice(v)
        }
        Group::Symmetric | Group::Alternating => Element::Perm(text.parse::<Perm>()?),
    };
    if !group.contains(&x) {
        return Err(invalid(format!("{x} is not an element of {group}")));
    }
    Ok(x)
}

/// `lo:hi` (an integer interval), `level:n` (the group's exhaustion), or a
/// list separated by `;` (or `,` for integers).
pub fn finite_set(group: Group, text: &str) -> CliResult<FiniteSet> {
    let text = text.trim();
    if let Some(level) = text.strip_prefix("level:") {
        let n: usize = level.parse().map_err(|_| invalid(format!("bad level `{level}`")))?;
        return Ok(group.exhaustion(n)?);
    }
    if group == Group::Integers {
        if let Some((lo, hi)) = split_range(text) {
            let lo: i64 = lo.parse().map_err(|_| invalid(format!("bad bound `{lo}`")))?;
            let hi: i64 = hi.parse().map_err(|_| invalid(format!("bad bound `{hi}`")))?;
            if lo > hi {
                return Err(invalid(format!("empty interval `{text}`")));
            }
            if (hi - lo) as u64 >= 1 << 32 {
                return Err(invalid(format!("interval `{text}` is too large")));
            }
            return Ok(FiniteSet::interval(lo, hi));
        }
    }
    let sep = if group == Group::Integers && !text.contains(';') { ',' } else { ';' };
    text.split(sep)
        .filter(|t| !t.trim().is_empty())
        .map(|t| element(group, t))
        .collect()
}

/// `lo:hi` where `lo` may be negative.
fn split_range(text: &str) -> Option<(&str, &str)> {
    let (lo, hi) = text.split_once(':')?;
    let ok = |s: &str| {
        let s = s.trim();
        !s.is_empty() && s.trim_start_matches('-').chars().all(|c| c.is_ascii_digit())
    };
    (ok(lo) && ok(hi)).then(|| (lo.trim(), hi.trim()))
}

fn params(text: &str) -> CliResult<Vec<(&str, &str)>> {
    if text.is_empty() {
        return Ok(Vec::new());
    }
    text.split(',')
        .map(|kv| kv.split_once('=').ok_or_else(|| invalid(format!("expected key=value, got `{kv}`"))))
        .collect()
}

fn param<'a>(ps: &[(&str, &'a str)], key: &str) -> Option<&'a str> {
    ps.iter().find(|(k, _)| *k == key).map(|(_, v)| *v)
}

fn required<'a>(ps: &[(&str, &'a str)], key: &str, what: &str) -> CliResult<&'a str> {
    param(ps, key).ok_or_else(|| invalid(format!("`{what}` needs `{key}=`")))
}

fn number<T: std::str::FromStr>(text: &str, key: &str) -> CliResult<T> {
    text.parse().map_err(|_| invalid(format!("bad value `{text}` for `{key}`")))
}

pub fn rational(text: &str) -> CliResult<Rational> {
    Ok(parse_rational(text)?)
}

/// A saved construction: `{"group": ..., "members": [[lo, hi], ...]}`.
fn load_members(path: &Path) -> CliResult<SubsetSpec> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| invalid(format!("cannot read set file {}: {e}", path.display())))?;
    let value: serde_json::Value = serde_json::from_str(&text)?;
    let body = value.get("result").unwrap_or(&value);
    let members = body
        .get("members")
        .ok_or_else(|| invalid(format!("{} has no `members` field", path.display())))?;
    let runs: Runs = serde_json::from_value(members.clone())?;
    let name = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    Ok(SubsetSpec::new(name, Group::Integers, format!("loaded from {}", path.display()), move |x| {
        x.as_int().is_some_and(|v| runs.contains(v))
    }))
}

/// Set descriptions:
///
/// * `all`, `empty`, `finite:2,5` (or `finite:lo:hi`), `residue:m=2,r=0`
/// * `straus:eps=0.1`
/// * `nonpws:eps=0.25,depth=12,window=100000`
/// * `alt-e` (the density-one set of the coset sequence in A(ℕ))
/// * `complement:<set>`, `doubling:<set>`
/// * `@path.json`, a saved `construct` report over ℤ
pub fn set(group: Group, text: &str) -> CliResult<SubsetSpec> {
    let text = text.trim();
    if let Some(path) = text.strip_prefix('@') {
        return load_members(Path::new(path));
    }
    let (head, rest) = text.split_once(':').unwrap_or((text, ""));
    match head {
        "all" | "z" | "g" => Ok(SubsetSpec::all(group)),
        "empty" => Ok(SubsetSpec::empty(group)),
        "finite" => Ok(SubsetSpec::finite(text, group, finite_set(group, rest)?)),
        "complement" => Ok(set(group, rest)?.complement()),
        "doubling" => Ok(doubling_example(&set(group, rest)?)?),
        "residue" => {
            let ps = params(rest)?;
            let m = number(required(&ps, "m", head)?, "m")?;
            let r = number(param(&ps, "r").unwrap_or("0"), "r")?;
            Ok(SubsetSpec::residue_class(m, r)?)
        }
        "straus" => {
            let ps = params(rest)?;
            Ok(straus_set(rational(required(&ps, "eps", head)?)?)?)
        }
        "nonpws" => {
            let ps = params(rest)?;
            let eps = rational(required(&ps, "eps", head)?)?;
            let depth = number(param(&ps, "depth").unwrap_or("12"), "depth")?;
            let window: i64 = number(param(&ps, "window").unwrap_or("100000"), "window")?;
            if window < 1 {
                return Err(invalid("window must be positive"));
            }
            let c = non_pws_large_set(
                &FolnerSequence::initial_segment(),
                eps,
                depth,
                &FiniteSet::interval(1, window),
                &calibration_grid(window as usize),
            )?;
            Ok(c.q)
        }
        "alt-e" => Ok(alt_group_example(9)?.1),
        _ => Err(invalid(format!("unknown set `{text}`"))),
    }
}

/// `interval`, `initial`, `symmetric`, `box:d`, `exhaustion:<group>`,
/// `alt-coset`, or `inverse:<sequence>`.
pub fn folner(text: &str) -> CliResult<FolnerSequence> {
    let text = text.trim();
    let (head, rest) = text.split_once(':').unwrap_or((text, ""));
    Ok(match head {
        "interval" => FolnerSequence::interval(),
        "initial" | "initial-segment" => FolnerSequence::initial_segment(),
        "symmetric" | "symmetric-interval" => FolnerSequence::symmetric_interval(),
        "box" => FolnerSequence::lattice_box(number(rest, "box")?),
        "exhaustion" => FolnerSequence::exhaustion(group(rest)?),
        "alt-coset" => FolnerSequence::alt_coset(),
        "inverse" => folner(rest)?.invert(),
        _ => return Err(invalid(format!("unknown Følner sequence `{text}`"))),
    })
}

/// `lo:hi` or `lo..hi` as an inclusive index range.
pub fn index_range(text: &str) -> CliResult<(usize, usize)> {
    let (lo, hi) = text
        .split_once("..")
        .or_else(|| text.split_once(':'))
        .ok_or_else(|| invalid(format!("bad range `{text}`")))?;
    let lo: usize = number(lo.trim(), "range")?;
    let hi: usize = number(hi.trim(), "range")?;
    if lo == 0 || lo > hi {
        return Err(invalid(format!("bad range `{text}`")));
    }
    Ok((lo, hi))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_finite_sets() {
        let z = Group::Integers;
        assert_eq!(finite_set(z, "-2:2").unwrap(), FiniteSet::interval(-2, 2));
        assert_eq!(finite_set(z, "3,1,2").unwrap(), FiniteSet::interval(1, 3));
        assert_eq!(finite_set(Group::Alternating, "level:1").unwrap().len(), 12);
        let perms = finite_set(Group::Symmetric, "(1 2);(2 3)").unwrap();
        assert_eq!(perms.len(), 2);
        assert!(finite_set(z, "3:1").is_err());
        assert!(finite_set(Group::Alternating, "(1 2)").is_err());
    }

    #[test]
    fn parses_sets() {
        let z = Group::Integers;
        let evens = set(z, "residue:m=2,r=0").unwrap();
        assert!(evens.contains(&Element::Int(4)) && !evens.contains(&Element::Int(3)));
        let d = set(z, "doubling:finite:2,5").unwrap();
        assert_eq!(d.materialize(&FiniteSet::interval(0, 20)).len(), 5);
        assert!(set(z, "doubling:finite:1,5").is_err());
        assert!(set(z, "straus:eps=0.1").unwrap().contains(&Element::Int(40)));
        assert!(set(z, "straus").is_err());
        assert!(set(z, "bogus").is_err());
        assert!(set(z, "complement:empty").unwrap().contains(&Element::Int(0)));
    }

    #[test]
    fn parses_ranges_and_sequences() {
        assert_eq!(index_range("1000..1000000").unwrap(), (1000, 1_000_000));
        assert_eq!(index_range("5:9").unwrap(), (5, 9));
        assert!(index_range("0..3").is_err());
        assert_eq!(folner("box:2").unwrap().group(), Group::Lattice(2));
        assert!(folner("nope").is_err());
    }
}
