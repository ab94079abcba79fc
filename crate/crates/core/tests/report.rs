use gquot::limits::LimitSystem;
use gquot::report::*;

#[test]
fn criteria_are_prefixed_and_named() {
    for id in [1, 4, 9, 14] {
        let checks = criterion(id, Profile::Default, DEFAULT_SEED);
        assert!(!checks.is_empty());
        for c in &checks {
            assert!(c.name.starts_with(&format!("c{id:02}.")), "{}", c.name);
            assert_eq!(c.passed(), c.expected == c.computed);
        }
    }
    assert!(!criterion(15, Profile::Default, 0)[0].passed());
}

#[test]
fn seeds_change_random_inputs() {
    assert_ne!(random_test_words(1, 50), random_test_words(2, 50));
    let a = random_limit_systems(3, 20, 9);
    assert_eq!(a, random_limit_systems(3, 20, 9));
    for (s, m) in &a {
        assert_eq!(limit_scan(s, *m).is_some(), s.dims.iter().any(|&d| d > 9 * m));
    }
}

#[test]
fn scan_oracle() {
    let s = LimitSystem::new(vec![0, 0, 3, 3, 8], 2, 10).unwrap();
    assert_eq!(limit_scan(&s, 0), Some(12));
    assert_eq!(limit_scan(&s, 1), Some(12));
    assert_eq!(limit_scan(&s, 3), Some(14));
    assert_eq!(limit_scan(&s, 4), None);
}

#[test]
fn failing_and_limited_checks() {
    let checks = check_relators(gquot::families::FamilyKind::Thm1, 3, 5).unwrap();
    let bad: Vec<_> = checks.iter().filter(|c| !c.passed()).map(|c| c.name.as_str()).collect();
    assert_eq!(bad, ["relators.thm1.3.w_3.level5", "relators.thm1.3.t_3.level5"]);
    let c = enumerate(gquot::coset::CertificateKind::Thm4, 4, 50).unwrap();
    assert_eq!(c[0].verdict, Verdict::Resource);
}
