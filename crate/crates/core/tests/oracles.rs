#![allow(clippy::needless_range_loop)]

//! Independent recomputations checked against the library.

use hk_core::character::{
    case_of_twist, geometry_of, loop_value, loop_values, orbit_representatives, rank_exception_census, CaseId,
    Character,
};
use hk_core::invariants::{chi_crosscheck, chi_sum, closed_form, euler_by_stratification};
use hk_core::lattice::{
    class_of, rank_of, verify_dependencies, verify_dependencies_with, DivisorClass, LinePair, Permutation5,
};
use hk_core::lineset::LineSet;
use num_rational::Rational64;

fn rational_rank(rows: &[[i64; 5]]) -> usize {
    let mut m: Vec<Vec<Rational64>> =
        rows.iter().map(|r| r.iter().map(|&x| Rational64::from_integer(x)).collect()).collect();
    let mut rank = 0;
    for col in 0..5 {
        let Some(p) = (rank..m.len()).find(|&r| m[r][col] != Rational64::from_integer(0)) else {
            continue;
        };
        m.swap(rank, p);
        let pivot = m[rank][col];
        for r in 0..m.len() {
            if r != rank {
                let f = m[r][col] / pivot;
                for c in 0..5 {
                    let v = m[rank][c];
                    m[r][c] -= f * v;
                }
            }
        }
        rank += 1;
    }
    rank
}

#[test]
fn rank_agrees_with_rational_elimination_on_all_subsets() {
    for mask in 0u16..1024 {
        let set = LineSet::from_bits(mask);
        let rows: Vec<[i64; 5]> = set.iter().map(|p| class_of(p).0).collect();
        assert_eq!(rank_of(set.iter().map(class_of)), rational_rank(&rows), "{set}");
    }
}

#[test]
fn dependency_census_has_no_counterexamples() {
    let report = verify_dependencies();
    assert!(report.pass(), "{:?}", report.counterexamples);
    let with_oracle =
        verify_dependencies_with(|ps| rational_rank(&ps.iter().map(|&p| class_of(p).0).collect::<Vec<_>>()));
    assert_eq!(report, with_oracle);
}

#[test]
fn dependency_census_detects_a_wrong_rank() {
    let broken =
        verify_dependencies_with(|ps| if ps.len() == 7 { 4 } else { rank_of(ps.iter().map(|&p| class_of(p))) });
    assert!(!broken.pass());
}

/// Orbit count by Burnside's lemma, with fixed points tested on loop values.
fn burnside(n: u32) -> u64 {
    let mut fixed_total = 0u64;
    for t in Permutation5::all() {
        for code in 0..Character::count(n) {
            let psi = Character::from_code(n, code);
            let v = loop_values(&psi);
            if LinePair::all().all(|p| v[p.index()] == loop_value(&psi, p.permuted(t))) {
                fixed_total += 1;
            }
        }
    }
    assert_eq!(fixed_total % 120, 0);
    fixed_total / 120
}

#[test]
fn orbit_count_matches_burnside() {
    for n in 2..=6 {
        let reps = orbit_representatives(n);
        assert_eq!(reps.len() as u64, burnside(n), "n = {n}");
        assert_eq!(reps.iter().map(|r| r.1 as u64).sum::<u64>(), Character::count(n));
    }
}

#[test]
fn character_numerics_hold_exhaustively() {
    for n in 3..=8u32 {
        let nn = n as i64;
        for code in 0..Character::count(n) {
            let psi = Character::from_code(n, code);
            let g = geometry_of(&psi).unwrap();
            assert_eq!(g.f % nn, 0);
            assert!((0..=5 * nn).contains(&g.f));
            assert_eq!(g.f == 0, psi.is_zero());
            assert_eq!(g.s % nn, 0);
            assert!((0..=3 * nn).contains(&g.s));
            for (i, &l) in g.lambda.iter().enumerate() {
                assert_eq!(l % nn, 0);
                assert!((0..=2 * nn).contains(&l));
                if l == 2 * nn {
                    // the exceptional curve E_i carries a log pole
                    assert_ne!(loop_value(&psi, LinePair::of(i as u8 + 1, 5)), n - 1, "{psi}");
                }
            }
            assert_eq!(g.lambda.iter().sum::<i64>(), 2 * g.f - g.s);
        }
    }
}

#[test]
fn eigenclass_is_the_weighted_branch_divisor() {
    for n in 3..=6u32 {
        for code in 0..Character::count(n) {
            let psi = Character::from_code(n, code);
            let g = geometry_of(&psi).unwrap();
            let weighted: DivisorClass = LinePair::all().map(|p| loop_value(&psi, p) as i64 * class_of(p)).sum();
            let expected = DivisorClass::new(g.f, g.lambda.map(|l| -l));
            assert_eq!(weighted, expected, "{psi}");
            assert_eq!(n as i64 * g.eigenclass, expected);
        }
    }
}

#[test]
fn every_nonzero_character_has_one_case() {
    for n in 3..=10u32 {
        let mut seen = [0u64; 18];
        for code in 1..Character::count(n) {
            let psi = Character::from_code(n, code);
            let g = geometry_of(&psi).unwrap();
            let CaseId::Numbered(k) = g.case_id else { panic!("{psi} has no case") };
            assert!((1..=17).contains(&k));
            assert_eq!(case_of_twist(g.twist), Some(k));
            seen[k as usize] += 1;
        }
        assert_eq!(seen.iter().sum::<u64>(), Character::count(n) - 1);
    }
    assert_eq!(geometry_of(&Character::zero(7)).unwrap().case_id, CaseId::Trivial);
}

#[test]
fn rank_exceptions_match_the_expected_shapes() {
    let expected: &[(u32, &[&str])] = &[
        (4, &["fiber5", "triangle"]),
        (5, &["claw"]),
        (6, &["claw", "star"]),
        (7, &["claw"]),
        (8, &["claw"]),
        (9, &["claw"]),
    ];
    for &(n, kinds) in expected {
        let c = rank_exception_census(n).unwrap();
        assert!(c.pass(), "{c:?}");
        let got: Vec<&str> = c.by_kind.keys().map(String::as_str).collect();
        assert_eq!(got, kinds, "n = {n}");
    }
}

#[test]
fn global_chi_identity() {
    assert_eq!(chi_sum(3).unwrap(), 90);
    assert_eq!(chi_sum(5).unwrap(), 5000);
    for n in 3..=8 {
        assert!(chi_crosscheck(n).unwrap(), "n = {n}");
    }
    for n in 2..=20 {
        let c = closed_form(n);
        assert_eq!(euler_by_stratification(n), c.euler);
        assert_eq!(12 * c.chi_o, c.k2 + c.euler);
    }
}
