use hk_core::character::Character;
use hk_core::invariants::{rigidity_report, RigidityOptions};
use hk_core::lattice::DivisorClass;
use hk_core::lineset::LineSet;
use hk_core::vanishing::{
    gvt_search, prove_with, regenerate, Certificate, CertificateKind, Checker, ProveConfig, Registry, VanishingProblem,
};
use rand::{Rng, SeedableRng};

#[test]
fn every_emitted_certificate_replays() {
    let checker = Checker::new();
    let reg = Registry::builtin();
    for n in 3..=12 {
        let report = rigidity_report(n, reg, &RigidityOptions::default()).unwrap();
        for p in &report.problems {
            if p.kind == CertificateKind::Unresolved {
                continue;
            }
            checker
                .replay(&p.key.problem(true), &p.certificate, reg)
                .unwrap_or_else(|e| panic!("n = {n}, {:?}: {e}", p.key));
        }
    }
}

#[test]
fn certificates_for_original_characters_replay() {
    // not only canonical forms: the certificate of the character's own problem
    let checker = Checker::new();
    let reg = Registry::builtin();
    for code in 0..Character::count(5) {
        let prob = VanishingProblem::from_character(&Character::from_code(5, code)).unwrap();
        let cert = prove_with(&prob, reg, &ProveConfig::default());
        checker.replay(&prob, &cert, reg).unwrap();
    }
}

#[test]
fn undropped_retry_certificates_replay() {
    let checker = Checker::new();
    let empty = Registry::empty();
    let config = ProveConfig { retry_undropped: true, ..ProveConfig::default() };
    for n in 4..=8 {
        let report = rigidity_report(n, &empty, &RigidityOptions { prove: config, ..Default::default() }).unwrap();
        assert!(report.rigid, "n = {n}");
        for p in &report.problems {
            checker.replay(&p.key.problem(true), &p.certificate, &empty).unwrap();
        }
    }
}

#[test]
fn any_single_table_fault_stops_replay() {
    let reg = Registry::builtin();
    let report = rigidity_report(6, reg, &RigidityOptions::default()).unwrap();
    let sample = &report.problems[0];
    for r in 0..10 {
        for c in 0..10 {
            let faulty = Checker::with_fault(r, c, 1);
            assert!(faulty.replay(&sample.key.problem(true), &sample.certificate, reg).is_err());
        }
    }
}

#[test]
fn tampered_certificates_are_rejected() {
    let checker = Checker::new();
    let reg = Registry::builtin();
    let report = rigidity_report(7, reg, &RigidityOptions::default()).unwrap();
    let mut rejected = 0;
    for p in &report.problems {
        if let Certificate::Gvt { a, b, report } = &p.certificate {
            let mut bad = *report;
            bad.rank += 1;
            let forged = Certificate::Gvt { a: *a, b: *b, report: bad };
            assert!(checker.replay(&p.key.problem(true), &forged, reg).is_err());
            rejected += 1;
        }
        let other = VanishingProblem::new(p.key.logset, p.key.twist + DivisorClass::L, true);
        assert!(checker.replay(&other, &p.certificate, reg).is_err() || p.kind == CertificateKind::Unresolved);
    }
    assert!(rejected > 0);
}

/// `h^1 = 0` and `h^2 = 0` force `chi = h^0 >= 0`, so no witness may exist
/// for a problem with negative `chi`.
#[test]
fn search_never_certifies_negative_chi() {
    let mut rng = rand::rngs::StdRng::seed_from_u64(0x5eed);
    let mut negative = 0;
    for _ in 0..4000 {
        let t = LineSet::from_bits(rng.gen_range(0..1024));
        let twist = DivisorClass::new(rng.gen_range(-3..=3), std::array::from_fn(|_| rng.gen_range(-2..=2)));
        let prob = VanishingProblem::new(t, twist, true);
        if prob.chi() < 0 {
            negative += 1;
            assert!(gvt_search(&prob).is_none(), "{:?}", prob);
        }
    }
    assert!(negative > 100);
}

#[test]
fn registry_is_reproducible_and_sufficient() {
    let reg = Registry::builtin();
    assert_eq!(regenerate(&ProveConfig::default()).to_text(), Registry::builtin_text());
    let empty = Registry::empty();
    for n in 4..=12 {
        let without = rigidity_report(n, &empty, &RigidityOptions::default()).unwrap();
        for p in without.unresolved() {
            assert!(reg.covers(&p.key.problem(true)), "n = {n}: {:?}", p.key);
        }
        let with = rigidity_report(n, reg, &RigidityOptions::default()).unwrap();
        assert!(with.rigid && with.unresolved().next().is_none());
        assert_eq!(with.tally[&CertificateKind::NonVanishing], 0);
    }
}
