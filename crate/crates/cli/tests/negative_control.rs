use amenable::{FiniteSet, Group};
use amenable_cli::suite::{run_criteria, Scale, SuiteOptions};

/// Keeps every element, so translates overlap whenever `F` has two points.
fn overlapping_greedy(_: Group, s: &FiniteSet, _: &FiniteSet) -> amenable::Result<FiniteSet> {
    Ok(s.clone())
}

#[test]
fn broken_disjointness_fails_the_greedy_criterion() {
    let opts = SuiteOptions {
        greedy: overlapping_greedy,
        ..SuiteOptions::new(Scale::Fast, 0)
    };
    let report = run_criteria(&opts, &[1, 3, 6]);
    let failing: Vec<_> = report.failing().iter().map(|c| (c.id, c.name.clone())).collect();
    assert_eq!(failing, vec![(3, "greedy packing".to_string())]);
    let detail = &report.criteria[1].detail["failures"][0]["check"];
    assert_eq!(detail["disjoint"], false);
}
