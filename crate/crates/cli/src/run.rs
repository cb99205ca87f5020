use amenable::constructions::{
    alt_group_example, calibration_grid, check_greedy, fpd_obstruction_check, greedy_disjoint_cover,
    non_pws_large_set, shrinking_syndetic_family, StrausParams,
};
use amenable::folner::{left_defect, reiter_from_folner, right_defect, two_sided_reiter, unslice_check};
use amenable::rational::{ratio, RationalRepr};
use amenable::rle::Runs;
use amenable::sets::density_along;
use amenable::structures::{
    extract_fpi_from_thick, find_shift_avoiding, first_uncovered, fp_chain_search, fs_meets_multiples,
    is_pws_window, is_thick_window, shifted_fs_search, verify_fp_containment, ChainSearchOptions, Detection,
    FpChain, FpMode, Outcome,
};
use amenable::symbolic::{empirical_measure, syndetic_orbit_probe, unique_pattern_check, Pattern};
use amenable::{Element, FiniteSet, FolnerSequence, Group, Rational, SubsetSpec};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::config::{ExperimentConfig, Operation};
use crate::error::{CliError, CliResult};
use crate::parse;
use crate::report::Report;

pub const DEFAULT_BUDGET: u64 = 100_000_000;

/// Largest integer window materialised into a report.
const MAX_EMIT: i64 = 1 << 26;

/// About `points` indices from `lo` to `hi`, evenly spaced on a log scale,
/// always including both ends.
pub fn index_grid(lo: usize, hi: usize, points: usize) -> Vec<usize> {
    if hi - lo < points.max(2) {
        return (lo..=hi).collect();
    }
    let ratio = (hi as f64 / lo as f64).powf(1.0 / (points.max(2) - 1) as f64);
    let mut out = vec![lo];
    let mut x = lo as f64;
    for _ in 1..points.max(2) - 1 {
        x *= ratio;
        out.push((x.round() as usize).clamp(lo, hi));
    }
    out.push(hi);
    out.dedup();
    out
}

fn int_window(text: &str) -> CliResult<(i64, i64)> {
    let w = parse::finite_set(Group::Integers, text)?;
    let lo = w.first().and_then(Element::as_int).ok_or_else(|| CliError::Invalid("empty window".into()))?;
    let hi = w.as_slice().last().and_then(Element::as_int).expect("non-empty");
    if hi - lo + 1 != w.len() as i64 {
        return Err(CliError::Invalid(format!("window `{text}` must be an interval lo:hi")));
    }
    if hi - lo >= MAX_EMIT {
        return Err(CliError::Invalid(format!("window `{text}` is too large to emit")));
    }
    Ok((lo, hi))
}

fn runs_of(set: &SubsetSpec, lo: i64, hi: i64) -> CliResult<Runs> {
    Ok(Runs::from_bitmap(lo, &set.int_bitmap(lo, hi)?))
}

fn rational_json(r: Rational) -> Value {
    serde_json::to_value(RationalRepr::from(r)).expect("plain struct")
}

fn detection(report: &mut Report, d: &Detection, set: Option<&SubsetSpec>) -> CliResult<()> {
    report.metrics.queries += d.queries;
    if d.outcome == Outcome::BudgetExhausted {
        report.metrics.budget_exhausted = true;
    }
    if let Some(w) = &d.witness {
        report.certify("witness re-verifies", w.verified && w.reverify(set)?);
    }
    report.result = serde_json::to_value(d)?;
    Ok(())
}

/// Executes one configured operation.
pub fn run(config: &ExperimentConfig) -> CliResult<Report> {
    let group = parse::group(&config.group)?;
    let budget = config.budget.unwrap_or(DEFAULT_BUDGET);
    let mut report = Report::new(config.clone());
    match &config.op {
        Operation::Density { set, folner, range, points } => {
            let phi = parse::folner(folner)?;
            let e = parse::set(phi.group(), set)?;
            if range[0] == 0 || range[0] > range[1] || *points == 0 {
                return Err(CliError::Invalid(format!("bad range {range:?}")));
            }
            let r = density_along(&e, &phi, index_grid(range[0], range[1], *points))?;
            report.csv = Some(r.to_csv());
            report.result = serde_json::to_value(&r)?;
        }
        Operation::DetectFs { set, m, bounds } => {
            let e = parse::set(Group::Integers, set)?;
            let d = shifted_fs_search(&e, *m, bounds[0], bounds[1], budget)?;
            detection(&mut report, &d, Some(&e))?;
        }
        Operation::DetectMultiples { xs, t } => {
            let d = fs_meets_multiples(xs, *t)?;
            detection(&mut report, &d, None)?;
        }
        Operation::DetectSyndetic { set, k, window } => {
            let e = parse::set(group, set)?;
            let k = parse::finite_set(group, k)?;
            let w = parse::finite_set(group, window)?;
            let gap = first_uncovered(&e, &k, &w)?;
            report.metrics.queries = (w.len() * k.len()) as u64;
            report.result = json!({
                "syndetic": gap.is_none(),
                "first_uncovered": gap,
                "k": k,
                "window_len": w.len(),
            });
        }
        Operation::DetectThick { set, k, window, avoid_k } => {
            let e = parse::set(group, set)?;
            let k = parse::finite_set(group, k)?;
            let w = parse::finite_set(group, window)?;
            let d = if *avoid_k {
                find_shift_avoiding(&e, &k, &w)?
            } else {
                is_thick_window(&e, &k, &w)?
            };
            detection(&mut report, &d, Some(&e))?;
        }
        Operation::DetectPws { set, k, k_prime, window } => {
            let e = parse::set(group, set)?;
            let k = parse::finite_set(group, k)?;
            let kp = parse::finite_set(group, k_prime)?;
            let w = parse::finite_set(group, window)?;
            let d = is_pws_window(&e, &k, &kp, &w)?;
            detection(&mut report, &d, Some(&e))?;
        }
        Operation::DetectFp { set, m, mode, candidates, escaping } => {
            let e = parse::set(group, set)?;
            let mode: FpMode = mode.parse()?;
            let c = parse::finite_set(group, candidates)?;
            let d = fp_chain_search(&e, *m, mode, &c, ChainSearchOptions { budget, escaping: *escaping })?;
            detection(&mut report, &d, Some(&e))?;
        }
        Operation::ExtractFpi { set, m } => {
            let t = parse::set(group, set)?;
            let x = extract_fpi_from_thick(&t, *m, budget)?;
            report.metrics.queries = x.candidates_tried;
            if x.complete {
                let chain = FpChain::new(group, x.generators.clone())?;
                let v = verify_fp_containment(&chain, &t, FpMode::Fpi)?;
                report.certify("increasing products lie in the set", v.holds);
                report.certify("generators escape the exhaustion", chain.is_escaping());
            } else {
                report.metrics.budget_exhausted = true;
            }
            report.result = serde_json::to_value(&x)?;
        }
        Operation::Obstruction { n, window_level } => {
            let (phi, e) = alt_group_example(9)?;
            let c = fpd_obstruction_check(&e, &phi, *n, *window_level)?;
            report.metrics.queries = c.pairs_checked;
            report.result = serde_json::to_value(&c)?;
        }
        Operation::Defect { folner, n, g } => {
            let phi = parse::folner(folner)?;
            let g = parse::element(phi.group(), g)?;
            report.result = json!({
                "sequence": phi.name(),
                "handedness": phi.handedness(),
                "n": n,
                "size": phi.at(*n)?.len(),
                "left_defect": rational_json(left_defect(&phi, *n, &g)?),
                "right_defect": rational_json(right_defect(&phi, *n, &g)?),
            });
        }
        Operation::Reiter { folner, n, two_sided } => {
            let phi = parse::folner(folner)?;
            let w = if *two_sided {
                two_sided_reiter(&phi, *n)?
            } else {
                reiter_from_folner(&phi, *n)?
            };
            report.certify("slices reassemble the weights", unslice_check(&w));
            let weights: Vec<Value> = w
                .iter()
                .map(|(x, v)| json!({"element": x, "num": v.numer().to_string(), "den": v.denom().to_string()}))
                .collect();
            report.result = json!({
                "sequence": phi.name(),
                "n": n,
                "two_sided": two_sided,
                "support": w.len(),
                "levels": w.levels().len(),
                "weights": weights,
            });
        }
        Operation::Measure { set, psi, n, cylinder } => {
            let psi = parse::folner(psi)?;
            let q = parse::set(psi.group(), set)?;
            let c = Pattern::parse_int(cylinder)?;
            let m = empirical_measure(&q, &psi, *n, &c)?;
            report.result = json!({
                "N": m.n,
                "matches": m.matches,
                "size": m.size,
                "frequency_num": m.frequency.numer(),
                "frequency_den": m.frequency.denom(),
            });
        }
        Operation::Probe { set, k, domain, samples, sample_window } => {
            let q = parse::set(group, set)?;
            let k = parse::finite_set(group, k)?;
            let domain = parse::finite_set(group, domain)?;
            let pool = parse::finite_set(group, sample_window)?;
            if pool.is_empty() {
                return Err(CliError::Invalid("empty sample window".into()));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
            let picks: Vec<Element> = (0..*samples)
                .map(|_| pool.as_slice()[rng.gen_range(0..pool.len())].clone())
                .collect();
            let p = syndetic_orbit_probe(&q, &k, &picks, &domain)?;
            report.result = serde_json::to_value(&p)?;
        }
        Operation::Unique { set, window } => {
            let q = parse::set(Group::Integers, set)?;
            let w = parse::finite_set(Group::Integers, window)?;
            report.result = json!({ "unique": unique_pattern_check(&q, &w)? });
        }
        Operation::ConstructStraus { eps, emit_window } => {
            let p = StrausParams::new(parse::rational(eps)?)?;
            let e = parse::set(Group::Integers, &format!("straus:eps={eps}"))?;
            report.certify("removed mass is at most eps/2", p.certified());
            let mut result = json!({
                "params": {
                    "epsilon": rational_json(p.epsilon),
                    "a_n": format!("2^n * {}", p.base),
                    "b_n": 1,
                    "removed_mass": rational_json(p.removed_mass()),
                },
            });
            if let Some(w) = emit_window {
                let (lo, hi) = int_window(w)?;
                let runs = runs_of(&e, lo, hi)?;
                let count = runs.cardinality() as usize;
                let density = ratio(count, (hi - lo + 1) as usize);
                if lo == 1 {
                    report.certify("window density is at least 1 - eps", density >= Rational::from_integer(1) - p.epsilon);
                }
                result["window"] = json!([lo, hi]);
                result["count"] = json!(count);
                result["density"] = rational_json(density);
                result["members"] = serde_json::to_value(&runs)?;
            }
            report.result = result;
        }
        Operation::ConstructNonpws { eps, depth, window, core_k } => {
            if group != Group::Integers {
                return Err(CliError::Invalid("the non-piecewise-syndetic construction runs over z".into()));
            }
            if *window < 1 || *window >= MAX_EMIT {
                return Err(CliError::Invalid(format!("bad window {window}")));
            }
            let eps_r = parse::rational(eps)?;
            let phi = FolnerSequence::initial_segment();
            let w = FiniteSet::interval(1, *window);
            let grid = calibration_grid(*window as usize);
            let c = non_pws_large_set(&phi, eps_r, *depth, &w, &grid)?;
            let density = density_along(&c.q, &phi, grid)?;
            let floor = Rational::from_integer(1) - eps_r - c.boundary_term;
            report.certify("trimmed union stays below its bound", c.calibration.certified);
            for cert in &c.level_certificates {
                report.certify(
                    format!("level {} is a disjoint packing covering the previous level", cert.level),
                    cert.disjoint && cert.covers_previous && cert.nested && cert.density_bounded,
                );
            }
            report.certify("lower density estimate clears 1 - eps - boundary", density.lower_estimate >= floor);
            let mut cores = Vec::new();
            for k in 1..=*core_k {
                let check = c.core_check(&FiniteSet::interval(-k, k))?;
                report.certify(format!("core misses K·Q for K = [-{k}, {k}]"), check.disjoint_from_kq);
                cores.push(json!({"k": k, "check": check}));
            }
            report.result = json!({
                "params": {"epsilon": rational_json(eps_r), "depth": depth, "schedule": c.schedule},
                "window": [1, window],
                "count": c.members.len(),
                "members": Runs::from_set(&c.members)?,
                "certificates": {
                    "calibration": c.calibration,
                    "boundary_term": rational_json(c.boundary_term),
                    "levels": c.level_certificates,
                    "lower_estimate": rational_json(density.lower_estimate),
                    "upper_estimate": rational_json(density.upper_estimate),
                    "core_checks": cores,
                },
            });
        }
        Operation::ConstructAlt { n_max } => {
            let (phi, e) = alt_group_example(*n_max)?;
            let mut rows = Vec::new();
            let mut seen = std::collections::HashSet::new();
            let mut disjoint = true;
            for n in phi.first_index()..=*n_max {
                let set = phi.at(n)?;
                let in_e = e.count_in(&set);
                let first_point = set.iter().all(|s| s.as_perm().is_some_and(|p| p.apply(1) == n as u32));
                for s in set.iter() {
                    disjoint &= seen.insert(s.clone());
                }
                report.certify(format!("every σ in level {n} has σ(1) = {n}"), first_point);
                if n >= 5 {
                    report.certify(format!("E has density 1 at index {n}"), in_e == set.len());
                }
                rows.push(json!({"n": n, "size": set.len(), "in_e": in_e, "density": rational_json(ratio(in_e, set.len()))}));
            }
            report.certify("levels are pairwise disjoint", disjoint);
            report.result = json!({"sequence": phi.name(), "rows": rows});
        }
        Operation::ConstructDoubling { set, emit_window } => {
            let q = parse::set(Group::Integers, &format!("doubling:{set}"))?;
            let (lo, hi) = int_window(emit_window)?;
            let window = FiniteSet::interval(lo, hi);
            report.certify("1 is the only isolated member", unique_pattern_check(&q, &window)?);
            report.result = json!({"window": [lo, hi], "members": runs_of(&q, lo, hi)?});
        }
        Operation::ConstructFamily { depth, window } => {
            let w = parse::finite_set(group, window)?;
            let fam = shrinking_syndetic_family(group, *depth, &w)?;
            for c in &fam.certificates {
                report.certify(
                    format!("level {} is a disjoint packing covering the previous level", c.level),
                    c.disjoint && c.covers_previous && c.nested && c.density_bounded,
                );
            }
            report.result = json!({
                "window_too_small": fam.window_too_small,
                "generators": fam.generators,
                "levels": fam.certificates,
            });
        }
        Operation::ConstructGreedy { s, f } => {
            let s = parse::finite_set(group, s)?;
            let f = parse::finite_set(group, f)?;
            let sp = greedy_disjoint_cover(group, &s, &f)?;
            let check = check_greedy(group, &s, &f, &sp);
            report.certify("greedy postconditions", check.holds());
            report.result = json!({"selected": sp, "check": check});
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(op: Operation) -> ExperimentConfig {
        ExperimentConfig {
            group: "z".into(),
            seed: 0,
            budget: None,
            op,
        }
    }

    #[test]
    fn grid_includes_both_ends() {
        let g = index_grid(1000, 1_000_000, 40);
        assert_eq!(g.first(), Some(&1000));
        assert_eq!(g.last(), Some(&1_000_000));
        assert!(g.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(index_grid(3, 7, 40), vec![3, 4, 5, 6, 7]);
    }

    #[test]
    fn finite_sums_in_everything() {
        let r = run(&config(Operation::DetectFs {
            set: "z".into(),
            m: 2,
            bounds: [4, 4],
        }))
        .unwrap();
        assert_eq!(r.result["witness"]["data"]["shift"], 0);
        assert_eq!(r.result["witness"]["data"]["generators"], json!([1, 1]));
        assert!(r.failed_certificates().is_empty());
    }

    #[test]
    fn straus_density_report() {
        let r = run(&config(Operation::Density {
            set: "straus:eps=0.1".into(),
            folner: "initial".into(),
            range: [1000, 100_000],
            points: 10,
        }))
        .unwrap();
        let last = r.result["rows"].as_array().unwrap().last().unwrap().clone();
        let ratio = last["ratio"]["num"].as_i64().unwrap() as f64 / last["ratio"]["den"].as_i64().unwrap() as f64;
        assert!(ratio >= 0.9);
        assert!(r.csv.unwrap().starts_with("N,count,size,ratio"));
    }

    #[test]
    fn malformed_operations_are_invalid() {
        let bad = run(&config(Operation::DetectSyndetic {
            set: "nothing".into(),
            k: "0".into(),
            window: "0:5".into(),
        }));
        assert!(matches!(bad, Err(CliError::Invalid(_))));
    }
}
