mod common;

use bogomolov::cohomology::{b0, corestriction_check, verify_sylow_injectivity, B0Options, Cochain, H2Data, Status};
use bogomolov::group::{corpus, FiniteGroup};
use common::oracle::{b0_dense, h2_dense};
use proptest::prelude::*;

fn h2(g: &FiniteGroup) -> Vec<u64> {
    H2Data::compute(g, g.order().max(2) as u64).unwrap().invariants().invariant_factors.clone()
}

fn binom2(t: u32) -> usize {
    (t * (t.saturating_sub(1)) / 2) as usize
}

#[test]
fn cyclic_groups_have_trivial_multiplier() {
    for n in 1..=64 {
        assert!(h2(&corpus::cyclic(n)).is_empty(), "C{n}");
    }
}

#[test]
fn homocyclic_multipliers() {
    for p in [2u64, 3, 5] {
        assert_eq!(h2(&corpus::elementary_abelian(p as usize, 2)), vec![p]);
    }
    for p in [2usize, 3, 5, 7] {
        for n in 1..=6u32 {
            for t in 2..=6u32 {
                let q = p.pow(n);
                if q.checked_pow(t).is_none_or(|o| o > 64) {
                    continue;
                }
                let g = corpus::abelian(&vec![q; t as usize]);
                assert_eq!(h2(&g), vec![q as u64; binom2(t)], "(Z/{q})^{t}");
            }
        }
    }
}

#[test]
fn small_nonabelian_multipliers_match_oracle() {
    let q8 = corpus::quaternion(8);
    let d4 = corpus::dihedral(4);
    assert!(h2(&q8).is_empty());
    assert!(h2_dense(&q8.table_rows()).is_empty());
    assert_eq!(h2(&d4), vec![2]);
    assert_eq!(h2_dense(&d4.table_rows()), vec![2]);
}

#[test]
fn oracle_agrees_on_small_corpus() {
    for (name, g) in corpus::small_corpus().into_iter().filter(|(_, g)| g.order() <= 16) {
        let table = g.table_rows();
        assert_eq!(h2(&g), h2_dense(&table), "{name}: multiplier");
        let ours = b0(&g, B0Options::default()).unwrap().invariants().invariant_factors.clone();
        assert_eq!(ours, b0_dense(&table), "{name}: unramified part");
    }
}

#[test]
fn unramified_part_trivial_on_corpus() {
    let corpus = corpus::small_corpus();
    assert!(corpus.len() >= 20);
    for (name, g) in corpus {
        let r = b0(&g, B0Options::default()).unwrap();
        assert!(r.invariants().is_trivial(), "{name}");
        assert!(divides_componentwise(&r.invariants().invariant_factors, &r.h2.invariants().invariant_factors));
    }
}

/// A subgroup's invariant factors (largest first) divide the ambient ones.
fn divides_componentwise(sub: &[u64], ambient: &[u64]) -> bool {
    sub.len() <= ambient.len() && sub.iter().rev().zip(ambient.iter().rev()).all(|(a, b)| b % a == 0)
}

#[test]
fn order_identity_on_corpus() {
    for (name, g) in corpus::small_corpus() {
        let d = H2Data::compute(&g, g.order().max(2) as u64).unwrap_or_else(|e| panic!("{name}: {e}"));
        let o = |x: &bogomolov::linalg::FinAbGroup| x.order().unwrap();
        assert_eq!(o(&d.h2_zm), o(&d.hom_invariants) * o(d.invariants()), "{name}");
    }
}

#[test]
fn transfer_after_restriction_is_index() {
    for (name, g) in corpus::small_corpus().into_iter().filter(|(_, g)| g.order() <= 24) {
        for h in g.subgroup_class_representatives() {
            assert!(corestriction_check(&g, &h).unwrap(), "{name}, subgroup of order {}", h.order());
        }
    }
}

#[test]
fn unramified_part_stable_under_relabeling_and_without_reduction() {
    for (name, g) in corpus::small_corpus().into_iter().filter(|(_, g)| g.order() <= 24) {
        let base = b0(&g, B0Options::default()).unwrap().invariants().clone();
        let full = b0(&g, B0Options { reduce: false, ..Default::default() }).unwrap().invariants().clone();
        assert_eq!(base, full, "{name}");
        let n = g.order() as u32;
        let perm: Vec<u32> = std::iter::once(0).chain((1..n).rev()).collect();
        let relabeled = g.relabel(&perm).unwrap();
        assert_eq!(b0(&relabeled, B0Options::default()).unwrap().invariants(), &base, "{name}");
        assert_eq!(h2(&relabeled), h2(&g), "{name}");
    }
}

#[test]
fn sylow_injectivity_on_corpus() {
    for (name, g) in corpus::small_corpus() {
        let r = verify_sylow_injectivity(&g, 64).unwrap();
        assert_ne!(r.status, Status::Fail, "{name}");
        let vacuous = h2(&g).is_empty();
        assert_eq!(r.status == Status::VacuousPass, vacuous, "{name}");
    }
}

#[test]
fn differential_squares_to_zero_exhaustively() {
    for (name, g) in corpus::small_corpus().into_iter().filter(|(_, g)| g.order() <= 12) {
        let n = g.order();
        let m = n.max(2) as u64;
        // every basis 1-cochain
        for x in 1..n as u32 {
            let f = Cochain::from_fn1(n, m, |a| u64::from(a == x));
            assert!(f.differential(&g).unwrap().differential(&g).unwrap().is_zero(), "{name}");
        }
    }
}

fn corpus_index() -> impl Strategy<Value = usize> {
    0..corpus::small_corpus().len()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn coboundaries_are_cocycles(i in corpus_index(), seed in any::<u64>()) {
        let (_, g) = corpus::small_corpus().swap_remove(i);
        let n = g.order();
        let m = n.max(2) as u64;
        let f = Cochain::from_fn1(n, m, |a| seed.wrapping_mul(a as u64 + 7).rotate_left(a % 61) % m);
        let d = f.differential(&g).unwrap();
        prop_assert!(d.differential(&g).unwrap().is_zero());
    }

    #[test]
    fn restriction_and_inflation_commute_with_differential(i in corpus_index(), seed in any::<u64>()) {
        let (_, g) = corpus::small_corpus().swap_remove(i);
        let n = g.order();
        let m = n.max(2) as u64;
        let f = Cochain::from_fn1(n, m, |a| seed.rotate_left(a % 63) % m);
        for h in g.bicyclic_subgroups(Default::default()) {
            let local = h.to_group(&g);
            let lhs = f.differential(&g).unwrap().restrict(&g, &h).unwrap();
            let rhs = f.restrict(&g, &h).unwrap().differential(&local).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
        let z = g.center();
        let q = g.quotient_group(&z).unwrap();
        let fq = Cochain::from_fn1(q.group.order(), m, |a| seed.rotate_right(a % 63) % m);
        let lhs = fq.differential(&q.group).unwrap().inflate(&g, &q.projection).unwrap();
        let rhs = fq.inflate(&g, &q.projection).unwrap().differential(&g).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn conjugation_commutes_with_differential(i in corpus_index(), seed in any::<u64>(), x in any::<u32>()) {
        let (_, g) = corpus::small_corpus().swap_remove(i);
        let n_sub = g.derived_subgroup();
        let local = n_sub.to_group(&g);
        let m = g.order().max(2) as u64;
        let x = x % g.order() as u32;
        let f = Cochain::from_fn1(local.order(), m, |a| seed.rotate_left(a % 63) % m);
        let lhs = f.differential(&local).unwrap().conjugate(&g, &n_sub, x).unwrap();
        let rhs = f.conjugate(&g, &n_sub, x).unwrap().differential(&local).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn gauge_round_trip_on_random_cocycles(i in corpus_index(), seed in any::<u64>()) {
        let (_, g) = corpus::small_corpus().swap_remove(i);
        let n = g.order();
        if n > 24 { return Ok(()); }
        let m = n.max(2) as u64;
        let data = H2Data::compute(&g, m).unwrap();
        let mut y = vec![0u64; data.model.dim()];
        for (k, c) in data.cocycles.iter().enumerate() {
            let t = seed.rotate_left(k as u32 % 63) % m;
            for (a, b) in y.iter_mut().zip(c) { *a = (*a + t * b) % m; }
        }
        let f = data.model.phi(&y);
        prop_assert!(f.is_cocycle(&g).unwrap());
        prop_assert_eq!(data.model.gamma(&f), y);
    }
}
