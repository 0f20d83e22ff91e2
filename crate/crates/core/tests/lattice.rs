use std::time::{Duration, Instant};

use bogomolov::group::{corpus, FiniteGroup};
use bogomolov::lattice::{
    flabby_report, h1_lattice, saltman_kernel_lattice, sylow_kernel_lattice, tate_minus1, tate_zero, Branch, GLattice,
    DEFAULT_H1_CAP,
};

fn multiply_by(n: usize, k: usize) -> Vec<u32> {
    (0..n).map(|x| ((x * k) % n) as u32).collect()
}

/// Acting groups with their names, for the exhaustive permutation checks.
fn small_acting_groups() -> Vec<(&'static str, FiniteGroup)> {
    vec![
        ("S3", corpus::symmetric(3)),
        ("D4", corpus::dihedral(4)),
        ("C4", corpus::cyclic(4)),
        ("C6", corpus::cyclic(6)),
    ]
}

#[test]
fn permutation_lattices_are_flabby() {
    for (name, g) in small_acting_groups() {
        let subs = g.all_subgroups();
        for k in &subs {
            let m = GLattice::permutation(&g, k).unwrap();
            assert_eq!(m.rank(), g.order() / k.order());
            for h in &subs {
                assert!(
                    tate_minus1(&m, h).unwrap().is_trivial(),
                    "{name}: K of order {}, H of order {}",
                    k.order(),
                    h.order()
                );
            }
        }
    }
}

#[test]
fn regular_lattice_is_cohomologically_trivial() {
    for g in [corpus::symmetric(3), corpus::dihedral(4)] {
        let m = GLattice::regular(&g);
        for h in g.all_subgroups() {
            assert!(tate_minus1(&m, &h).unwrap().is_trivial());
            assert!(tate_zero(&m, &h).unwrap().is_trivial());
            assert!(h1_lattice(&m, &h, DEFAULT_H1_CAP).unwrap().is_trivial());
        }
        let r = flabby_report(&m, 48).unwrap();
        assert!(r.coh_trivial_evidence && r.is_flabby && r.is_coflabby);
    }
}

#[test]
fn trivial_lattice_has_norm_cokernel() {
    let s3 = corpus::symmetric(3);
    let z = GLattice::trivial(&s3, 1);
    for h in s3.all_subgroups() {
        let t0 = tate_zero(&z, &h).unwrap();
        let expect: Vec<u64> = if h.order() == 1 { vec![] } else { vec![h.order() as u64] };
        assert_eq!(t0.invariant_factors, expect);
    }
    let r = flabby_report(&z, 48).unwrap();
    assert!(r.is_flabby);
    assert!(!r.coh_trivial_evidence);
}

#[test]
fn sign_lattice_is_not_flabby() {
    let c2 = corpus::cyclic(2);
    let m = GLattice::sign(&c2, &c2.trivial_subgroup()).unwrap();
    let r = flabby_report(&m, 48).unwrap();
    assert!(!r.is_flabby);
    let whole = r.subgroups.iter().find(|s| s.order == 2).unwrap();
    assert_eq!(whole.tate_minus1.invariant_factors, vec![2]);
}

#[test]
fn periodicity_on_cyclic_subgroups() {
    // for cyclic H the two code paths must agree
    let c2 = corpus::cyclic(2);
    let sign = GLattice::sign(&c2, &c2.trivial_subgroup()).unwrap();
    let mut lattices = vec![sign];
    let c3 = corpus::cyclic(3);
    let c4 = corpus::cyclic(4);
    lattices.push(saltman_kernel_lattice(&c3, &c2, &[vec![0, 2, 1]]).unwrap().kernel);
    lattices.push(saltman_kernel_lattice(&corpus::cyclic(5), &c4, &[multiply_by(5, 2)]).unwrap().kernel);
    let s3 = corpus::symmetric(3);
    lattices.push(GLattice::trivial(&s3, 2));
    lattices.push(GLattice::permutation(&s3, &s3.all_subgroups()[1]).unwrap());
    let d4 = corpus::dihedral(4);
    let refl = d4.all_subgroups().into_iter().find(|h| h.order() == 4).unwrap();
    lattices.push(GLattice::sign(&d4, &refl).unwrap());
    for m in &lattices {
        let g = m.group();
        for h in g.all_subgroups() {
            let cyclic = h.elements.iter().any(|&x| g.element_order(x) as usize == h.order());
            if cyclic {
                assert_eq!(tate_minus1(m, &h).unwrap(), h1_lattice(m, &h, DEFAULT_H1_CAP).unwrap());
            }
        }
    }
}

#[test]
fn kernel_lattices_for_coprime_actions() {
    let start = Instant::now();
    let cases: Vec<(FiniteGroup, FiniteGroup, Vec<Vec<u32>>)> = vec![
        (corpus::cyclic(3), corpus::cyclic(2), vec![vec![0, 2, 1]]),
        (corpus::cyclic(5), corpus::cyclic(4), vec![multiply_by(5, 2)]),
        (corpus::cyclic(7), corpus::cyclic(3), vec![multiply_by(7, 2)]),
    ];
    for (n, g0, act) in cases {
        let k = saltman_kernel_lattice(&n, &g0, &act).unwrap();
        assert_eq!(k.kernel.rank(), n.order() * g0.order());
        assert_eq!(k.index, n.order() as u128);
        assert_eq!(k.characters, n.order());
        let r = flabby_report(&k.kernel, 48).unwrap();
        assert!(r.coh_trivial_evidence, "|N| = {}, |G0| = {}", n.order(), g0.order());
    }
    assert!(start.elapsed() < Duration::from_secs(60));
}

#[test]
fn kernel_lattice_over_s3() {
    // odd permutations invert C3: the orders are not coprime
    let n = corpus::cyclic(3);
    let g0 = corpus::symmetric(3);
    let even = g0.derived_subgroup();
    let act: Vec<Vec<u32>> =
        g0.generators().iter().map(|&s| if even.contains(s) { vec![0, 1, 2] } else { vec![0, 2, 1] }).collect();
    let k = saltman_kernel_lattice(&n, &g0, &act).unwrap();
    assert_eq!(k.kernel.rank(), 18);
    assert_eq!(k.index, 3);
    let r = flabby_report(&k.kernel, 48).unwrap();
    assert_eq!(r.subgroups.len(), 4);
}

#[test]
fn sylow_kernel_branches() {
    let start = Instant::now();
    // inversion on C3, p = 3: stabilizer trivial, index 2 prime to 3
    let k = sylow_kernel_lattice(&corpus::cyclic(3), &corpus::cyclic(2), &[vec![0, 2, 1]], 3, 48).unwrap();
    assert_eq!(k.stabilizer.order(), 1);
    assert_eq!(k.branch, Branch::CoprimeIndex);
    assert_eq!(k.evidence_pass, Some(true));
    assert!(k.stabilizer_acts_trivially);
    assert_eq!(k.lattice.kernel.rank(), 6);

    let k = sylow_kernel_lattice(&corpus::cyclic(5), &corpus::cyclic(4), &[multiply_by(5, 2)], 5, 48).unwrap();
    assert_eq!(k.branch, Branch::CoprimeIndex);
    assert_eq!(k.evidence_pass, Some(true));

    // trivial action: the stabilizer is everything and the check is vacuous
    let k = sylow_kernel_lattice(&corpus::cyclic(3), &corpus::cyclic(2), &[vec![0, 1, 2]], 3, 48).unwrap();
    assert_eq!(k.stabilizer.order(), 2);
    assert_eq!(k.descended.group().order(), 1);
    assert_eq!(k.evidence_pass, Some(true));
    assert!(k.stabilizer_acts_trivially);

    // swap on C2×C2, p = 2: index 2 is not prime to p, quotient C2 cyclic
    let k = sylow_kernel_lattice(&corpus::elementary_abelian(2, 2), &corpus::cyclic(2), &[vec![0, 2, 1, 3]], 2, 48)
        .unwrap();
    assert_eq!(k.branch, Branch::CyclicSylow);
    assert_eq!(k.evidence_pass, None);

    // C2×C2 acting faithfully on C2³, p = 2: quotient C2×C2 has a non-cyclic Sylow
    let g0 = corpus::elementary_abelian(2, 2);
    let swap01: Vec<u32> = (0..8u32).map(|x| (x & 4) | ((x & 1) << 1) | ((x & 2) >> 1)).collect();
    let shear: Vec<u32> = (0..8u32).map(|x| if x & 4 != 0 { x ^ 3 } else { x }).collect();
    let k = sylow_kernel_lattice(&corpus::elementary_abelian(2, 3), &g0, &[swap01, shear], 2, 48).unwrap();
    assert_eq!(k.stabilizer.order(), 1);
    assert_eq!(k.branch, Branch::NoClaim);

    // C6 inverted by C2: the 2-part is centralized, the 3-part is not
    let inv6: Vec<u32> = (0..6u32).map(|x| (6 - x) % 6).collect();
    let k2 = sylow_kernel_lattice(&corpus::cyclic(6), &corpus::cyclic(2), std::slice::from_ref(&inv6), 2, 48).unwrap();
    assert_eq!(k2.stabilizer.order(), 2);
    assert_eq!(k2.sylow_order, 2);
    let k3 = sylow_kernel_lattice(&corpus::cyclic(6), &corpus::cyclic(2), &[inv6], 3, 48).unwrap();
    assert_eq!(k3.stabilizer.order(), 1);
    assert_eq!(k3.branch, Branch::CoprimeIndex);
    assert_eq!(k3.evidence_pass, Some(true));
    assert!(start.elapsed() < Duration::from_secs(60));
}

#[test]
fn rejects_invalid_actions() {
    let c2 = corpus::cyclic(2);
    // x ↦ 2x is not an automorphism of C4
    assert!(saltman_kernel_lattice(&corpus::cyclic(4), &c2, &[multiply_by(4, 2)]).is_err());
    assert!(sylow_kernel_lattice(&corpus::cyclic(3), &c2, &[vec![0, 2, 1]], 2, 48).is_err());
}
