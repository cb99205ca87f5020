//! The acceptance suites. `fast` runs every criterion at reduced scale,
//! `full` at the stated scale.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use amenable::constructions::{
    alt_group_example, calibration_grid, check_greedy, doubling_example, fpd_obstruction_check,
    greedy_disjoint_cover, non_pws_large_set, straus_set,
};
use amenable::folner::{left_defect, two_sided_reiter, unslice_check, ReiterWeights};
use amenable::rational::{big, ratio, RationalRepr};
use amenable::sets::density_along;
use amenable::structures::{
    fp_chain_search, fs_meets_multiples, is_pws_window, is_syndetic_window, is_thick_window, shifted_fs_search,
    ChainSearchOptions, FpMode, Outcome,
};
use amenable::symbolic::{empirical_measure, pattern_frequencies, unique_pattern_check, Pattern};
use amenable::{Element, FiniteSet, FolnerSequence, Group, Rational, SubsetSpec};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{CliError, CliResult};

pub type GreedyFn = fn(Group, &FiniteSet, &FiniteSet) -> amenable::Result<FiniteSet>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scale {
    Fast,
    Full,
}

impl FromStr for Scale {
    type Err = CliError;

    fn from_str(s: &str) -> CliResult<Self> {
        match s {
            "fast" => Ok(Scale::Fast),
            "full" => Ok(Scale::Full),
            _ => Err(CliError::Invalid(format!("unknown suite `{s}` (expected fast or full)"))),
        }
    }
}

impl fmt::Display for Scale {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Scale::Fast => "fast",
            Scale::Full => "full",
        })
    }
}

#[derive(Clone, Copy)]
pub struct SuiteOptions {
    pub scale: Scale,
    pub seed: u64,
    /// The greedy packing under test; swapped out by the negative control.
    pub greedy: GreedyFn,
}

impl SuiteOptions {
    pub fn new(scale: Scale, seed: u64) -> Self {
        SuiteOptions {
            scale,
            seed,
            greedy: greedy_disjoint_cover,
        }
    }

    fn pick<T>(&self, fast: T, full: T) -> T {
        match self.scale {
            Scale::Fast => fast,
            Scale::Full => full,
        }
    }

    fn rng(&self, criterion: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed.wrapping_mul(0x9e37_79b9_7f4a_7c15).wrapping_add(criterion))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CriterionResult {
    pub id: u32,
    pub name: String,
    pub passed: bool,
    pub detail: Value,
    #[serde(skip)]
    pub elapsed: Duration,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: Scale,
    pub seed: u64,
    pub criteria: Vec<CriterionResult>,
    pub passed: bool,
}

impl SuiteReport {
    pub fn failing(&self) -> Vec<&CriterionResult> {
        self.criteria.iter().filter(|c| !c.passed).collect()
    }
}

/// Stated runtime limit per criterion at full scale, in seconds.
pub fn runtime_limit(id: u32) -> Option<u64> {
    match id {
        1 => Some(60),
        2 => Some(600),
        3 => Some(10),
        4 => Some(300),
        6 => Some(5),
        8 => Some(300),
        _ => None,
    }
}

pub const CRITERIA: [(u32, &str); 11] = [
    (1, "straus density"),
    (2, "straus shift-freeness"),
    (3, "greedy packing"),
    (4, "alternating coset example"),
    (5, "decreasing products obstruction"),
    (6, "finite sums meet multiples"),
    (7, "slicing round trip"),
    (8, "large set that is not piecewise syndetic"),
    (9, "syndetic and thick sets meet"),
    (10, "symbolic frequencies"),
    (11, "determinism"),
];

fn rational_json(r: Rational) -> Value {
    serde_json::to_value(RationalRepr::from(r)).expect("plain struct")
}

type Verdict = amenable::Result<(bool, Value)>;

fn criterion(opts: &SuiteOptions, id: u32) -> Verdict {
    match id {
        1 => straus_density(opts),
        2 => straus_shift_free(opts),
        3 => greedy(opts),
        4 => alt_example(opts),
        5 => obstruction(opts),
        6 => multiples(opts),
        7 => slicing(opts),
        8 => non_pws(opts),
        9 => duality(opts),
        10 => symbolic(opts),
        11 => determinism(opts),
        _ => unreachable!("criterion ids are fixed"),
    }
}

/// Runs the criteria in `ids` (all of them when empty).
pub fn run_criteria(opts: &SuiteOptions, ids: &[u32]) -> SuiteReport {
    let mut criteria = Vec::new();
    for &(id, name) in CRITERIA.iter().filter(|(id, _)| ids.is_empty() || ids.contains(id)) {
        let start = Instant::now();
        let (passed, detail) = match criterion(opts, id) {
            Ok(r) => r,
            Err(e) => (false, json!({"error": e.to_string()})),
        };
        criteria.push(CriterionResult {
            id,
            name: name.into(),
            passed,
            detail,
            elapsed: start.elapsed(),
        });
    }
    let passed = criteria.iter().all(|c| c.passed);
    SuiteReport {
        suite: opts.scale,
        seed: opts.seed,
        criteria,
        passed,
    }
}

pub fn suite(opts: &SuiteOptions) -> SuiteReport {
    run_criteria(opts, &[])
}

fn straus_density(opts: &SuiteOptions) -> Verdict {
    let w = opts.pick(100_000, 1_000_000);
    let e = straus_set(Rational::new(1, 10))?;
    let count = e.int_bitmap(1, w)?.into_iter().filter(|&b| b).count();
    let density = ratio(count, w as usize);
    Ok((
        density >= Rational::new(9, 10),
        json!({"window": [1, w], "count": count, "density": rational_json(density)}),
    ))
}

fn straus_shift_free(opts: &SuiteOptions) -> Verdict {
    let (gens, shift) = opts.pick((16, 64), (64, 1024));
    let e = straus_set(Rational::new(1, 10))?;
    let d = shifted_fs_search(&e, 4, gens, shift, u64::MAX)?;
    let verified = d.witness.as_ref().map(|w| w.reverify(Some(&e))).transpose()?;
    Ok((
        d.outcome == Outcome::NotFound,
        json!({"detection": d, "witness_reverified": verified}),
    ))
}

fn random_subset(rng: &mut ChaCha8Rng, lo: i64, hi: i64, p: f64) -> FiniteSet {
    (lo..=hi).filter(|_| rng.gen_bool(p)).map(Element::Int).collect()
}

fn greedy(opts: &SuiteOptions) -> Verdict {
    let instances = opts.pick(200, 1000);
    let mut rng = opts.rng(3);
    let z = Group::Integers;
    let mut failures = Vec::new();
    for i in 0..instances {
        let size = rng.gen_range(1..=4);
        let mut f = FiniteSet::new();
        while f.len() < size {
            f = f.union(&FiniteSet::singleton(Element::Int(rng.gen_range(-5..=5))));
        }
        let p = rng.gen_range(0.05..0.95);
        let s = random_subset(&mut rng, 0, 100, p);
        let sp = (opts.greedy)(z, &s, &f)?;
        let check = check_greedy(z, &s, &f, &sp);
        if !check.holds() && failures.len() < 5 {
            failures.push(json!({"instance": i, "s": s, "f": f, "selected": sp, "check": check}));
        }
    }
    Ok((failures.is_empty(), json!({"instances": instances, "failures": failures})))
}

fn alt_example(opts: &SuiteOptions) -> Verdict {
    let n_max = opts.pick(8, 9);
    let defect_max = opts.pick(6, 7);
    let (phi, e) = alt_group_example(n_max)?;
    let alt = Group::Alternating;
    let mut rows = Vec::new();
    let mut seen = HashSet::new();
    let (mut first_point, mut disjoint, mut dense, mut invariant) = (true, true, true, true);
    for n in phi.first_index()..=n_max {
        let level = phi.at(n)?;
        let fp = level.iter().all(|s| s.as_perm().is_some_and(|p| alt.contains(s) && p.apply(1) == n as u32));
        let dj = level.iter().all(|s| seen.insert(s.clone()));
        let in_e = e.count_in(&level);
        let d = ratio(in_e, level.len());
        let mut defect_checked = 0;
        if n <= defect_max {
            let sub = alt
                .exhaustion(n.saturating_sub(4).max(1))?
                .filter(|g| g.as_perm().is_some_and(|p| p.degree() < n as u32));
            for g in sub.iter() {
                invariant &= left_defect(&phi, n, g)? == Rational::from_integer(0);
            }
            defect_checked = sub.len();
        }
        first_point &= fp;
        disjoint &= dj;
        if n >= 5 {
            dense &= d == Rational::from_integer(1);
        }
        rows.push(json!({
            "n": n,
            "size": level.len(),
            "first_point": fp,
            "disjoint_from_earlier": dj,
            "density": rational_json(d),
            "defect_elements_checked": defect_checked,
        }));
    }
    Ok((
        first_point && disjoint && dense && invariant,
        json!({
            "first_point": first_point,
            "pairwise_disjoint": disjoint,
            "density_one": dense,
            "left_invariant": invariant,
            "levels": rows,
        }),
    ))
}

fn obstruction(opts: &SuiteOptions) -> Verdict {
    let (n_top, window_level) = opts.pick((5, 7), (6, 8));
    let (chain_level, budget) = opts.pick((5, 1_000_000), (6, 10_000_000));
    let (phi, e) = alt_group_example(9)?;
    let mut checks = Vec::new();
    let mut holds = true;
    for n in 4..=n_top {
        let c = fpd_obstruction_check(&e, &phi, n, window_level)?;
        holds &= c.holds;
        checks.push(c);
    }
    let window = Group::Alternating.exhaustion(chain_level)?;
    let search = fp_chain_search(&e, 3, FpMode::Fpd, &window, ChainSearchOptions { budget, escaping: true })?;
    // The same search restricted to the top coset levels, with room to finish.
    let mut top = FiniteSet::new();
    for n in 7..=9 {
        top = top.union(&phi.at(n)?);
    }
    let targeted = fp_chain_search(
        &e,
        3,
        FpMode::Fpd,
        &top,
        ChainSearchOptions {
            budget: 100_000_000,
            escaping: true,
        },
    )?;
    let targeted_verified = targeted.witness.as_ref().map(|w| w.reverify(Some(&e))).transpose()?;
    Ok((
        holds && search.outcome == Outcome::NotFound,
        json!({
            "obstruction": checks,
            "chain_search": {"window_level": chain_level, "budget": budget, "detection": search},
            "top_levels_search": {"levels": [7, 9], "detection": targeted, "witness_reverified": targeted_verified},
        }),
    ))
}

fn multiples(opts: &SuiteOptions) -> Verdict {
    let instances = opts.pick(200, 1000);
    let mut rng = opts.rng(6);
    let mut failures = Vec::new();
    for i in 0..instances {
        let t = rng.gen_range(1..=20i64);
        let xs: Vec<i64> = (0..t).map(|_| rng.gen_range(-1_000_000..=1_000_000)).collect();
        let d = fs_meets_multiples(&xs, t)?;
        let ok = d.outcome == Outcome::Found
            && d.witness.as_ref().is_some_and(|w| w.verified && w.reverify(None).unwrap_or(false));
        if !ok && failures.len() < 5 {
            failures.push(json!({"instance": i, "xs": xs, "t": t, "detection": d}));
        }
    }
    Ok((failures.is_empty(), json!({"instances": instances, "failures": failures})))
}

fn slicing(opts: &SuiteOptions) -> Verdict {
    let tables = opts.pick(20, 100);
    let n_max = opts.pick(30, 100);
    let mut rng = opts.rng(7);
    let mut failed_tables = Vec::new();
    for i in 0..tables {
        let support = rng.gen_range(1..=50usize);
        let raw: Vec<i64> = (0..support).map(|_| rng.gen_range(1..=1000)).collect();
        let total: i64 = raw.iter().sum();
        let w = ReiterWeights::new(
            Group::Integers,
            raw.iter()
                .enumerate()
                .map(|(x, &c)| (Element::Int(x as i64 - 25), big(&Rational::new(c, total)))),
        )?;
        if !unslice_check(&w) {
            failed_tables.push(i);
        }
    }
    let phi = FolnerSequence::interval();
    let mut failed_reiter = Vec::new();
    for n in 1..=n_max {
        if !unslice_check(&two_sided_reiter(&phi, n)?) {
            failed_reiter.push(n);
        }
    }
    Ok((
        failed_tables.is_empty() && failed_reiter.is_empty(),
        json!({
            "tables": tables,
            "failed_tables": failed_tables,
            "reiter_indices": [1, n_max],
            "failed_reiter": failed_reiter,
        }),
    ))
}

fn non_pws(opts: &SuiteOptions) -> Verdict {
    let window = opts.pick(20_000i64, 100_000);
    let eps = Rational::new(1, 4);
    let phi = FolnerSequence::initial_segment();
    let w = FiniteSet::interval(1, window);
    let grid = calibration_grid(window as usize);
    let c = non_pws_large_set(&phi, eps, 12, &w, &grid)?;
    let density = density_along(&c.q, &phi, grid)?;
    let floor = Rational::new(74, 100) - c.boundary_term;
    let dense = density.lower_estimate >= floor;
    let k_prime = FiniteSet::interval(-8, 8);
    let mut rows = Vec::new();
    let (mut not_pws, mut cores) = (true, true);
    for k in 1..=5 {
        let kset = FiniteSet::interval(-k, k);
        let d = is_pws_window(&c.q, &kset, &k_prime, &w)?;
        let core = c.core_check(&kset)?;
        not_pws &= d.outcome == Outcome::NotFound;
        cores &= core.disjoint_from_kq;
        let translate = d.witness.as_ref().map(|w| &w.data);
        rows.push(json!({"k": k, "pws_outcome": d.outcome, "pws_witness": translate, "core": core}));
    }
    Ok((
        dense && not_pws && cores,
        json!({
            "window": [1, window],
            "count": c.members.len(),
            "schedule": c.schedule,
            "cutoffs": c.calibration.cutoffs,
            "boundary_term": rational_json(c.boundary_term),
            "lower_estimate": rational_json(density.lower_estimate),
            "density_bound_holds": dense,
            "not_piecewise_syndetic": not_pws,
            "cores_avoid_kq": cores,
            "k_checks": rows,
        }),
    ))
}

fn duality(opts: &SuiteOptions) -> Verdict {
    let instances = opts.pick(100, 500);
    let mut rng = opts.rng(9);
    let z = Group::Integers;
    let w = FiniteSet::interval(0, 199);
    let mut premises = 0;
    let mut failures = Vec::new();
    for i in 0..instances {
        let mut k = random_subset(&mut rng, -4, 4, 0.5);
        if k.is_empty() {
            k = FiniteSet::singleton(Element::Int(0));
        }
        let ps = rng.gen_range(0.4..0.95);
        let s = SubsetSpec::finite("S", z, random_subset(&mut rng, -10, 210, ps));
        let mut t_set = FiniteSet::new();
        for _ in 0..rng.gen_range(1..=4) {
            let start = rng.gen_range(-10..=200i64);
            let len = rng.gen_range(1..=20i64);
            t_set = t_set.union(&FiniteSet::interval(start, start + len));
        }
        let t = SubsetSpec::finite("T", z, t_set.clone());
        // T must contain K⁻¹g for some g whose translate stays in W.
        let k_inv = z.inverse_set(&k);
        let inner = w.filter(|g| k_inv.iter().all(|x| w.contains(&z.mul(x, g))));
        let syndetic = is_syndetic_window(&s, &k, &w)?;
        let thick = is_thick_window(&t, &k_inv, &inner)?.found();
        if syndetic && thick {
            premises += 1;
            let meet = s.materialize(&w).intersection_len(&t_set) > 0;
            if !meet && failures.len() < 5 {
                failures.push(json!({"instance": i, "k": k, "t": t_set}));
            }
        }
    }
    Ok((
        premises > 0 && failures.is_empty(),
        json!({"instances": instances, "premises_met": premises, "failures": failures}),
    ))
}

fn symbolic(opts: &SuiteOptions) -> Verdict {
    let n_max = opts.pick(500, 10_000);
    let evens = SubsetSpec::residue_class(2, 0)?;
    let psi = FolnerSequence::interval();
    let one = Pattern::parse_int("0:1")?;
    let half = Rational::new(1, 2);
    let mut first_bad = None;
    for n in 1..=n_max {
        if empirical_measure(&evens, &psi, 2 * n, &one)?.frequency != half {
            first_bad = Some(n);
            break;
        }
    }
    let cells = FiniteSet::interval(-1, 1);
    let mut sums = Vec::new();
    for (name, q) in [("evens", evens.clone()), ("straus", straus_set(Rational::new(1, 10))?)] {
        for n in [7usize, 100, 1000] {
            let total: Rational = pattern_frequencies(&q, &psi, n, &cells)?.into_iter().sum();
            sums.push(json!({"set": name, "N": n, "sum": rational_json(total)}));
        }
    }
    let normalized = sums.iter().all(|s| s["sum"] == rational_json(Rational::from_integer(1)));
    let mut rng = opts.rng(10);
    let mut not_unique = Vec::new();
    for i in 0..50 {
        let p = rng.gen_range(0.05..0.8);
        let q = SubsetSpec::finite("Q", Group::Integers, random_subset(&mut rng, 2, 200, p));
        let doubled = doubling_example(&q)?;
        if !unique_pattern_check(&doubled, &FiniteSet::interval(-16, 420))? {
            not_unique.push(i);
        }
    }
    Ok((
        first_bad.is_none() && normalized && not_unique.is_empty(),
        json!({
            "frequency_indices": [1, n_max],
            "first_wrong_index": first_bad,
            "pattern_sums": sums,
            "doubled_sets": 50,
            "not_unique": not_unique,
        }),
    ))
}

fn determinism(opts: &SuiteOptions) -> Verdict {
    let fast = SuiteOptions {
        scale: Scale::Fast,
        ..*opts
    };
    let ids: Vec<u32> = (1..=10).collect();
    let a = crate::report::to_json(&run_criteria(&fast, &ids)).map_err(|e| amenable::Error::Domain(e.to_string()))?;
    let b = crate::report::to_json(&run_criteria(&fast, &ids)).map_err(|e| amenable::Error::Domain(e.to_string()))?;
    Ok((a == b, json!({"bytes": a.len(), "identical": a == b})))
}
