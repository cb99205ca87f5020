//! Frozen values, each recomputed here by a brute-force route that shares
//! no code with the library.

use std::collections::{BTreeMap, HashSet};

use amenable::constructions::{
    alt_group_example, doubling_example, greedy_disjoint_cover, shrinking_syndetic_family, straus_set,
};
use amenable::folner::{left_defect, right_defect, two_sided_reiter};
use amenable::rational::big;
use amenable::structures::{fp_set, fs_set, FpChain, FpMode};
use amenable::symbolic::empirical_measure;
use amenable::symbolic::Pattern;
use amenable::{Element, FiniteSet, FolnerSequence, Group, Perm, Rational, SubsetSpec};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Permutations as image tables on `{1..=n}`, composed by hand.
fn images(p: &Perm, n: u32) -> Vec<u32> {
    (1..=n).map(|x| p.apply(x)).collect()
}

fn compose(a: &[u32], b: &[u32]) -> Vec<u32> {
    b.iter().map(|&x| a[x as usize - 1]).collect()
}

fn sieve_straus(limit: usize, base: usize) -> Vec<bool> {
    let mut member = vec![true; limit + 1];
    member[0] = false;
    let mut n = 1;
    loop {
        let a = base << n;
        if a + n > limit {
            break;
        }
        let mut x = a + n;
        while x <= limit {
            member[x] = false;
            x += a;
        }
        n += 1;
    }
    member
}

#[test]
fn straus_count_on_a_million() {
    let e = straus_set(Rational::new(1, 10)).unwrap();
    let count = e.count_in(&FiniteSet::interval(1, 1_000_000));
    let oracle = sieve_straus(1_000_000, 20).iter().filter(|&&b| b).count();
    assert_eq!(count, oracle);
    assert_eq!(count, 950_010);
    assert!(Rational::new(count as i64, 1_000_000) >= Rational::new(9, 10));
}

#[test]
fn straus_small_parameters_match_the_sieve() {
    let e = straus_set(Rational::new(1, 2)).unwrap();
    let sieve = sieve_straus(5000, 4);
    for x in 1..=5000 {
        assert_eq!(e.contains(&Element::Int(x)), sieve[x as usize], "{x}");
    }
}

#[test]
fn two_sided_weights_of_intervals() {
    let phi = FolnerSequence::interval();
    for n in [1usize, 2, 7, 30] {
        let w = two_sided_reiter(&phi, n).unwrap();
        let n2 = (n * n) as i64;
        for x in -(n as i64) - 2..=n as i64 + 2 {
            let pairs = (0..n as i64)
                .flat_map(|a| (0..n as i64).map(move |b| a - b))
                .filter(|&d| d == x)
                .count() as i64;
            assert_eq!(w.weight(&Element::Int(x)), big(&Rational::new(pairs, n2)), "n={n} x={x}");
        }
    }
}

#[test]
fn two_sided_weights_of_a_subgroup_are_uniform() {
    let phi = FolnerSequence::exhaustion(Group::Alternating);
    let w = two_sided_reiter(&phi, 1).unwrap();
    assert_eq!(w.len(), 12);
    for (_, v) in w.iter() {
        assert_eq!(v, &big(&Rational::new(1, 12)));
    }
}

#[test]
fn right_defect_of_the_coset_sequence() {
    let phi = FolnerSequence::alt_coset();
    let g: Perm = "(1 2 3)".parse().unwrap();
    assert_eq!(right_defect(&phi, 5, &Element::Perm(g.clone())).unwrap(), Rational::from_integer(2));
    // by hand: Φ_5 g against Φ_5 as image tables
    let set: HashSet<Vec<u32>> = phi.at(5).unwrap().iter().map(|s| images(s.as_perm().unwrap(), 5)).collect();
    let moved: HashSet<Vec<u32>> = set.iter().map(|s| compose(s, &images(&g, 5))).collect();
    let sym = set.symmetric_difference(&moved).count();
    assert_eq!(Rational::new(sym as i64, set.len() as i64), Rational::from_integer(2));
    for a in phi.at(4).unwrap().iter() {
        // Φ_5 = A_4 h_5 is left-invariant under A_4
        assert_eq!(left_defect(&phi, 5, a).unwrap(), Rational::from_integer(0));
    }
}

#[test]
fn coset_sizes_and_density_of_e() {
    let (phi, e) = alt_group_example(9).unwrap();
    // (n - 1)!
    let mut factorial = 2usize;
    for n in 4..=9 {
        factorial *= n - 1;
        let set = phi.at(n).unwrap();
        assert_eq!(set.len(), factorial / 2);
        if n >= 5 {
            assert_eq!(e.count_in(&set), set.len());
        }
    }
}

fn greedy_oracle(s: &[i64], f: &[i64]) -> Vec<i64> {
    let mut taken: Vec<i64> = Vec::new();
    let mut covered: HashSet<i64> = HashSet::new();
    for &x in s {
        let img: Vec<i64> = f.iter().map(|g| g + x).collect();
        if img.iter().all(|y| !covered.contains(y)) {
            covered.extend(img);
            taken.push(x);
        }
    }
    taken
}

#[test]
fn greedy_matches_a_replay() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..200 {
        let s: FiniteSet = (0..rng.gen_range(1..60)).map(|_| Element::Int(rng.gen_range(0..=100))).collect();
        let f: FiniteSet = (0..rng.gen_range(1..=4)).map(|_| Element::Int(rng.gen_range(-5..=5))).collect();
        let sv: Vec<i64> = s.iter().map(|x| x.as_int().unwrap()).collect();
        let fv: Vec<i64> = f.iter().map(|x| x.as_int().unwrap()).collect();
        let got: Vec<i64> = greedy_disjoint_cover(Group::Integers, &s, &f)
            .unwrap()
            .iter()
            .map(|x| x.as_int().unwrap())
            .collect();
        assert_eq!(got, greedy_oracle(&sv, &fv));
    }
}

#[test]
fn syndetic_family_on_a_thousand() {
    let w = FiniteSet::interval(0, 999);
    let fam = shrinking_syndetic_family(Group::Integers, 2, &w).unwrap();
    let all: Vec<i64> = (0..1000).collect();
    let s1 = greedy_oracle(&all, &[0]);
    let s2 = greedy_oracle(&s1, &[0, 1]);
    let got: Vec<i64> = fam.level(2).iter().map(|x| x.as_int().unwrap()).collect();
    assert_eq!(got, s2);
    assert_eq!(s2.len(), 500);
}

#[test]
fn finite_sums_match_subset_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..100 {
        let xs: Vec<i64> = (0..rng.gen_range(1..=10)).map(|_| rng.gen_range(1..=50)).collect();
        let mut oracle: Vec<i64> = (1u32..1 << xs.len())
            .map(|mask| (0..xs.len()).filter(|i| mask >> i & 1 == 1).map(|i| xs[i]).sum())
            .collect();
        oracle.sort_unstable();
        oracle.dedup();
        let got: Vec<i64> = fs_set(&xs).unwrap().iter().map(|x| x.as_int().unwrap()).collect();
        assert_eq!(got, oracle);
    }
}

#[test]
fn decreasing_products_match_image_tables() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let n = 7u32;
    for _ in 0..20 {
        let gens: Vec<Perm> = (0..4)
            .map(|_| {
                let mut v: Vec<u32> = (1..=n).collect();
                for i in (1..v.len()).rev() {
                    v.swap(i, rng.gen_range(0..=i));
                }
                Perm::from_images(&v).unwrap()
            })
            .collect();
        let chain = FpChain::new(Group::Symmetric, gens.iter().cloned().map(Element::Perm).collect()).unwrap();
        let tables: Vec<Vec<u32>> = gens.iter().map(|g| images(g, n)).collect();
        let mut dec: Vec<Vec<u32>> = Vec::new();
        let mut inc: Vec<Vec<u32>> = Vec::new();
        for mask in 1u32..16 {
            let idx: Vec<usize> = (0..4).filter(|i| mask >> i & 1 == 1).collect();
            let mut d: Vec<u32> = (1..=n).collect();
            let mut c: Vec<u32> = (1..=n).collect();
            for &i in &idx {
                d = compose(&tables[i], &d);
                c = compose(&c, &tables[i]);
            }
            dec.push(d);
            inc.push(c);
        }
        let as_tables = |s: FiniteSet| -> BTreeMap<Vec<u32>, ()> {
            s.iter().map(|x| (images(x.as_perm().unwrap(), n), ())).collect()
        };
        let dec_oracle: BTreeMap<Vec<u32>, ()> = dec.into_iter().map(|t| (t, ())).collect();
        let inc_oracle: BTreeMap<Vec<u32>, ()> = inc.into_iter().map(|t| (t, ())).collect();
        assert_eq!(as_tables(fp_set(&chain, FpMode::Fpd).unwrap()), dec_oracle);
        assert_eq!(as_tables(fp_set(&chain, FpMode::Fpi).unwrap()), inc_oracle);
    }
}

#[test]
fn doubled_set_by_formula() {
    let q = SubsetSpec::finite("Q", Group::Integers, [2i64, 5].into_iter().map(Element::Int).collect());
    let d = doubling_example(&q).unwrap();
    let oracle: Vec<i64> = (-50i64..=50)
        .filter(|&x| x == 1 || [2, 5].contains(&(x.div_euclid(2))))
        .collect();
    let got: Vec<i64> = d.materialize(&FiniteSet::interval(-50, 50)).iter().map(|x| x.as_int().unwrap()).collect();
    assert_eq!(got, oracle);
    assert_eq!(got, vec![1, 4, 5, 10, 11]);
}

#[test]
fn evens_have_frequency_one_half() {
    let psi = FolnerSequence::interval();
    let q = SubsetSpec::residue_class(2, 0).unwrap();
    let c = Pattern::parse_int("0:1").unwrap();
    for n in [2usize, 10, 1000, 20_000] {
        assert_eq!(empirical_measure(&q, &psi, n, &c).unwrap().frequency, Rational::new(1, 2));
    }
}
