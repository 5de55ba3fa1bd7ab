use std::f64::consts::PI;

use azx_core::label::{funcs, Binding, Label};
use azx_core::notation::*;
use azx_core::random::{random_diagram, random_labelled_diagram, random_phase_diagram};
use azx_core::rules::{catalog, check_catalog, check_rule, corrupted_rule, find_rule, RuleFamily};
use azx_core::simplify::simplify;
use azx_core::{evaluate, Diagram};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::sync::Arc;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn simplify_preserves_value(seed in any::<u64>(), wires in 1usize..=3, x in -PI..PI) {
        let mut r = ChaCha8Rng::seed_from_u64(seed);
        let d = random_phase_diagram(&mut r, wires, 6, "t", &[1, -1, 2]);
        let b = Binding::new().with("t", x);
        let s = simplify(&d);
        prop_assert!(s.vertex_count() <= d.vertex_count());
        prop_assert!(evaluate(&s, &b).unwrap().approx_eq(&evaluate(&d, &b).unwrap(), 1e-10));
    }

    #[test]
    fn simplify_is_idempotent(seed in any::<u64>(), wires in 1usize..=3) {
        let mut r = ChaCha8Rng::seed_from_u64(seed);
        let labels = [
            Label::phase("t", 1, 0.3).unwrap(),
            Label::func("t", Arc::new(funcs::SinPlusTwo)),
            Label::real(0.0),
        ];
        let d = random_labelled_diagram(&mut r, wires, 4, &labels);
        let once = simplify(&d);
        prop_assert_eq!(simplify(&once), once);
    }
}

#[test]
fn simplify_fuses_and_cancels() {
    let d = chain(&[
        green_param("t", 1, 0.1, 1, 1).unwrap(),
        hadamard(),
        hadamard(),
        green_param("t", 2, 0.2, 1, 1).unwrap(),
        gbox_real(1.0, 1, 1),
    ])
    .unwrap();
    let s = simplify(&d);
    assert_eq!(s.vertex_count(), 1);
    let b = Binding::new().with("t", 0.7);
    assert!(evaluate(&s, &b).unwrap().approx_eq(&evaluate(&d, &b).unwrap(), 1e-12));
    let plain = random_diagram(&mut ChaCha8Rng::seed_from_u64(9), 2, 6);
    let bb = Binding::new();
    assert!(evaluate(&simplify(&plain), &bb).unwrap().approx_eq(&evaluate(&plain, &bb).unwrap(), 1e-10));
}

#[test]
fn catalogue_is_sound() {
    let reports = check_catalog(20, 42).unwrap();
    for r in &reports {
        assert!(r.passed, "{} deviates by {}", r.name, r.max_deviation);
    }
    assert_eq!(reports.len(), catalog().len());
}

#[test]
fn every_axiom_has_its_flip() {
    let all = catalog();
    for r in all.iter().filter(|r| r.family == RuleFamily::Axiom && !r.is_flipped()) {
        let flipped = format!("{}.flip", r.name);
        assert!(all.iter().any(|s| s.name == flipped), "missing {flipped}");
    }
    assert_eq!(all.iter().filter(|r| r.family == RuleFamily::Axiom).count(), 34);
    assert!(all.iter().any(|r| r.family == RuleFamily::Lemma));
    assert!(all.iter().any(|r| r.family == RuleFamily::Supplementary));
}

#[test]
fn named_rules_resolve() {
    for name in ["S1", "Bas0", "Inv", "H2", "piwtopicap", "hopf", "cycle-1", "cycle-2", "2gn2rpis"] {
        let r = find_rule(name).unwrap_or_else(|| panic!("{name}"));
        assert!(check_rule(&r, 10, 7).unwrap().passed, "{name}");
    }
    assert!(find_rule("no-such-rule").is_none());
}

#[test]
fn corrupted_rule_is_caught() {
    let report = check_rule(&corrupted_rule(), 10, 42).unwrap();
    assert!(!report.passed);
    assert!(report.max_deviation > 1e-3);
}

#[test]
fn rule_sides_agree_in_shape() {
    let mut r = ChaCha8Rng::seed_from_u64(5);
    for rule in catalog() {
        let a = azx_core::rules::sample_assignment(&rule.free, 0, &mut r);
        let (l, rr): (Diagram, Diagram) = rule.sides(&a);
        assert_eq!((l.n_inputs(), l.n_outputs()), (rr.n_inputs(), rr.n_outputs()), "{}", rule.name);
    }
}
