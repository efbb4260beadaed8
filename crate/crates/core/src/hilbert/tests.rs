use super::*;

fn fr(v: &[u32]) -> ReplicateVector {
    ReplicateVector::new(v.to_vec()).unwrap()
}

fn basis(n: usize, m: usize, alg: Algorithm) -> HilbertBasis {
    let sys = ConeSystem::orthogonal_array(n, m).unwrap();
    hilbert_basis(&sys, alg, &Budget::default()).unwrap()
}

#[test]
fn one_factor() {
    let b = basis(1, 1, Algorithm::ProjectAndLift);
    assert_eq!(b.elements(), &[fr(&[1, 1])]);
}

#[test]
fn two_factors_strength_one() {
    for alg in [Algorithm::Completion, Algorithm::ProjectAndLift] {
        let b = basis(2, 1, alg);
        assert_eq!(
            b.elements(),
            &[fr(&[0, 1, 1, 0]), fr(&[1, 0, 0, 1])],
            "{alg}"
        );
    }
}

#[test]
fn three_factors_strength_one_has_antipodal_pairs() {
    let b = basis(3, 1, Algorithm::ProjectAndLift);
    assert_eq!(b.len(), 6);
    let pairs: Vec<&ReplicateVector> = b.elements().iter().filter(|e| e.total() == 2).collect();
    assert_eq!(pairs.len(), 4);
    for p in pairs {
        let s: Vec<usize> = (0..8).filter(|&i| p.counts()[i] > 0).collect();
        assert_eq!(s.len(), 2);
        assert_eq!(s[0] ^ s[1], 7);
    }
}

#[test]
fn full_strength_gives_full_design() {
    for n in 1..=4 {
        let b = basis(n, n, Algorithm::ProjectAndLift);
        assert_eq!(b.elements(), &[ReplicateVector::full(n).unwrap()]);
    }
}

#[test]
fn solvers_agree_on_small_systems() {
    for n in 1..=3 {
        for m in 1..=n {
            assert_eq!(
                basis(n, m, Algorithm::Completion),
                basis(n, m, Algorithm::ProjectAndLift),
                "OA({n},{m})"
            );
        }
    }
    assert_eq!(
        basis(4, 3, Algorithm::Completion),
        basis(4, 3, Algorithm::ProjectAndLift)
    );
}

#[test]
fn oracle_agrees_on_three_factors() {
    for m in 1..=3 {
        let sys = ConeSystem::orthogonal_array(3, m).unwrap();
        let b = hilbert_basis(&sys, Algorithm::ProjectAndLift, &Budget::default()).unwrap();
        let cap = b.elements().iter().map(|e| e.total()).max().unwrap() as u32;
        let oracle = brute_force_minimal_solutions(&sys, cap + 2, DEFAULT_ORACLE_NODE_CAP).unwrap();
        assert_eq!(oracle, b.elements(), "m = {m}");
    }
}

#[test]
fn oracle_small_totals() {
    let sys = ConeSystem::orthogonal_array(3, 1).unwrap();
    assert!(brute_force_minimal_solutions(&sys, 0, 1000)
        .unwrap()
        .is_empty());
    assert!(brute_force_minimal_solutions(&sys, 1, 1000)
        .unwrap()
        .is_empty());
    assert_eq!(
        brute_force_minimal_solutions(&sys, 2, 1000).unwrap().len(),
        4
    );
    let sys = ConeSystem::orthogonal_array(2, 1).unwrap();
    assert_eq!(
        brute_force_minimal_solutions(&sys, 4, 1000).unwrap(),
        vec![fr(&[0, 1, 1, 0]), fr(&[1, 0, 0, 1])]
    );
}

#[test]
fn oracle_node_cap() {
    let sys = ConeSystem::orthogonal_array(4, 2).unwrap();
    assert!(matches!(
        brute_force_minimal_solutions(&sys, 16, 10),
        Err(Error::OracleInfeasible { cap: 10 })
    ));
}

#[test]
fn forced_zero_small() {
    // With the point -- removed only the antidiagonal pair survives.
    let sys = ConeSystem::orthogonal_array(2, 1)
        .unwrap()
        .with_forced_zero([0])
        .unwrap();
    for alg in [Algorithm::Completion, Algorithm::ProjectAndLift] {
        let b = hilbert_basis(&sys, alg, &Budget::default()).unwrap();
        assert_eq!(b.elements(), &[fr(&[0, 1, 1, 0])]);
    }
    let sys = ConeSystem::orthogonal_array(2, 1)
        .unwrap()
        .with_forced_zero([0, 1])
        .unwrap();
    let b = hilbert_basis(&sys, Algorithm::ProjectAndLift, &Budget::default()).unwrap();
    assert!(b.is_empty());
}

#[test]
fn forced_zero_matches_filtered_oracle() {
    let sys = ConeSystem::orthogonal_array(3, 1)
        .unwrap()
        .with_forced_zero([0, 5])
        .unwrap();
    let b = hilbert_basis(&sys, Algorithm::ProjectAndLift, &Budget::default()).unwrap();
    let c = hilbert_basis(&sys, Algorithm::Completion, &Budget::default()).unwrap();
    assert_eq!(b, c);
    let cap = b.elements().iter().map(|e| e.total()).max().unwrap() as u32;
    let oracle = brute_force_minimal_solutions(&sys, cap + 2, DEFAULT_ORACLE_NODE_CAP).unwrap();
    assert_eq!(oracle, b.elements());
    assert!(b
        .elements()
        .iter()
        .all(|e| e.counts()[0] == 0 && e.counts()[5] == 0));
}

#[test]
fn forced_zero_rejects_out_of_range() {
    let sys = ConeSystem::orthogonal_array(2, 1).unwrap();
    assert!(sys.with_forced_zero([4]).is_err());
}

#[test]
fn budget_exhaustion_is_reported() {
    let sys = ConeSystem::orthogonal_array(4, 2).unwrap();
    let tiny = Budget {
        max_insertions: 10,
        ..Budget::default()
    };
    for alg in [Algorithm::Completion, Algorithm::ProjectAndLift] {
        assert!(matches!(
            hilbert_basis(&sys, alg, &tiny),
            Err(Error::BudgetExhausted { .. })
        ));
    }
}

#[test]
fn verify_flags_bad_bases() {
    let sys = ConeSystem::orthogonal_array(2, 1).unwrap();
    let good = HilbertBasis::from_elements(sys.clone(), vec![fr(&[0, 1, 1, 0]), fr(&[1, 0, 0, 1])])
        .unwrap();
    assert!(good.verify().is_empty());
    let redundant = HilbertBasis::from_elements(
        sys.clone(),
        vec![fr(&[0, 1, 1, 0]), fr(&[1, 0, 0, 1]), fr(&[1, 1, 1, 1])],
    )
    .unwrap();
    assert_eq!(redundant.verify().len(), 1);
    let wrong = HilbertBasis::from_elements(sys, vec![fr(&[1, 1, 0, 0])]).unwrap();
    assert_eq!(wrong.verify().len(), 1);
}

#[test]
fn membership() {
    let sys = ConeSystem::orthogonal_array(2, 1).unwrap();
    assert!(is_member(&sys, &fr(&[1, 1, 1, 1])).unwrap());
    assert!(is_member(&sys, &fr(&[0, 0, 0, 0])).unwrap());
    assert!(!is_member(&sys, &fr(&[1, 1, 0, 0])).unwrap());
    assert!(is_member(&sys, &fr(&[1, 1])).is_err());
}

#[test]
fn decompose_members() {
    let b = basis(3, 2, Algorithm::ProjectAndLift);
    let full = ReplicateVector::full(3).unwrap();
    let parts = decompose(&b, &full).unwrap();
    let mut sum = vec![0u32; 8];
    for &(i, k) in &parts {
        for (s, c) in sum.iter_mut().zip(b.elements()[i].counts()) {
            *s += k * c;
        }
    }
    assert_eq!(sum, full.counts());
    assert_eq!(parts.len(), 2);
    assert_eq!(decompose(&b, &b.elements()[1]).unwrap(), vec![(1, 1)]);
    assert_eq!(
        decompose(&b, &ReplicateVector::zeros(3).unwrap()).unwrap(),
        vec![]
    );
    assert!(matches!(
        decompose(&b, &fr(&[1, 0, 0, 0, 0, 0, 0, 0])),
        Err(Error::NotMember)
    ));
}

#[test]
fn decompose_detects_incomplete_basis() {
    let sys = ConeSystem::orthogonal_array(2, 1).unwrap();
    let half = HilbertBasis::from_elements(sys, vec![fr(&[1, 0, 0, 1])]).unwrap();
    assert!(matches!(
        decompose(&half, &fr(&[0, 1, 1, 0])),
        Err(Error::Infeasible)
    ));
}

#[test]
fn deterministic_output() {
    let a = basis(4, 2, Algorithm::ProjectAndLift);
    let b = basis(4, 2, Algorithm::ProjectAndLift);
    assert_eq!(a, b);
    assert_eq!(a.len(), 26);
    assert!(a.verify().is_empty());
}

#[test]
fn generic_system() {
    // x0 + x1 - x2 - x3 = 0 over four coordinates.
    let sys = ConeSystem::new(vec![vec![1, 1, -1, -1]], 4).unwrap();
    let b = hilbert_basis(&sys, Algorithm::ProjectAndLift, &Budget::default()).unwrap();
    assert_eq!(
        b.elements(),
        &[
            fr(&[0, 1, 0, 1]),
            fr(&[0, 1, 1, 0]),
            fr(&[1, 0, 0, 1]),
            fr(&[1, 0, 1, 0])
        ]
    );
    assert!(ConeSystem::new(vec![vec![1, 0, -1, -1]], 4).is_err());
}
