use std::f64::consts::PI;
use std::sync::Arc;

use azx_core::diff::{differentiate, differentiate_at, finite_difference, occurrences, shift_rule_eval};
use azx_core::label::{funcs, Binding, Label, ParamFunction, C64};
use azx_core::notation::*;
use azx_core::random::{random_diagram, random_labelled_diagram, random_phase_diagram};
use azx_core::simplify::simplify;
use azx_core::{evaluate, Diagram, Tensor, ZxError};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn at(d: &Diagram, x: f64) -> Tensor {
    evaluate(d, &Binding::new().with("t", x)).unwrap()
}

fn random_ks(r: &mut ChaCha8Rng) -> Vec<i32> {
    let s = r.gen_range(1..=6);
    (0..s).map(|_| [-2, -1, 1, 2][r.gen_range(0..4)]).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn matches_central_difference(seed in any::<u64>(), wires in 1usize..=3, x in -PI..PI) {
        let mut r = ChaCha8Rng::seed_from_u64(seed);
        let ks = random_ks(&mut r);
        let d = random_phase_diagram(&mut r, wires, 4, "t", &ks);
        let dd = differentiate(&d, "t").unwrap();
        prop_assert!(dd.vertex_count() <= d.vertex_count() + 4 * ks.len());
        let fd = finite_difference(&d, "t", &Binding::new().with("t", x), 1e-5).unwrap();
        prop_assert!(at(&dd, x).max_abs_diff(&fd) <= 1e-6);
    }

    #[test]
    fn chain_rule_scales_by_k(seed in any::<u64>(), k in prop::sample::select(vec![-3i32, -2, 2, 3]), s in 1usize..=3, x in -PI..PI) {
        let d_k = random_phase_diagram(&mut ChaCha8Rng::seed_from_u64(seed), 2, 4, "t", &vec![k; s]);
        let d_1 = random_phase_diagram(&mut ChaCha8Rng::seed_from_u64(seed), 2, 4, "t", &vec![1; s]);
        let lhs = at(&differentiate(&d_k, "t").unwrap(), x);
        let rhs = at(&differentiate(&d_1, "t").unwrap(), k as f64 * x).scale(C64::new(k as f64, 0.0));
        prop_assert!(lhs.approx_eq(&rhs, 1e-9));
    }

    #[test]
    fn commutes_with_simplify(seed in any::<u64>(), x in -PI..PI) {
        let mut r = ChaCha8Rng::seed_from_u64(seed);
        let ks = random_ks(&mut r);
        let d = random_phase_diagram(&mut r, 2, 5, "t", &ks);
        let a = at(&differentiate(&d, "t").unwrap(), x);
        let b = at(&differentiate(&simplify(&d), "t").unwrap(), x);
        prop_assert!(a.approx_eq(&b, 1e-9));
    }

    #[test]
    fn shift_rule_equals_derivative(seed in any::<u64>(), wires in 1usize..=2, x in -PI..PI) {
        let mut r = ChaCha8Rng::seed_from_u64(seed);
        let u = random_phase_diagram(&mut r, wires, 3, "t", &[1]);
        let obs = random_diagram(&mut r, wires, 3);
        let d = chain(&[u.clone(), obs, u.dagger().unwrap()]).unwrap();
        let b = Binding::new().with("t", x);
        let shifted = shift_rule_eval(&d, "t", &b).unwrap();
        prop_assert!(shifted.approx_eq(&at(&differentiate(&d, "t").unwrap(), x), 1e-10));
    }

    #[test]
    fn function_labels(seed in any::<u64>(), x in -PI..PI) {
        let mut r = ChaCha8Rng::seed_from_u64(seed);
        let labels = [
            Label::func("t", Arc::new(funcs::SinPlusTwo)),
            Label::func("t", Arc::new(funcs::ExpI(1))),
            Label::phase("t", -1, 0.4).unwrap(),
        ];
        let d = random_labelled_diagram(&mut r, 2, 2, &labels);
        let fd = finite_difference(&d, "t", &Binding::new().with("t", x), 1e-5).unwrap();
        prop_assert!(at(&differentiate(&d, "t").unwrap(), x).max_abs_diff(&fd) <= 1e-6);
        let pointwise = differentiate_at(&d, "t", x, &Binding::new()).unwrap();
        prop_assert!(pointwise.max_abs_diff(&fd) <= 1e-6);
    }
}

#[test]
fn overhead_per_occurrence() {
    for s in 1..=6 {
        let d = chain(&vec![green_param("t", 1, 0.0, 1, 1).unwrap(); s]).unwrap();
        let dd = differentiate(&d, "t").unwrap();
        assert!(dd.vertex_count() - d.vertex_count() <= 4 * s, "s={s}");
        assert_eq!(occurrences(&d, "t").len(), s);
    }
}

#[test]
fn product_rule_on_two_functions() {
    // d/dt [(sin t + 2)(cos t)] on the |1> branch.
    let f = Label::func("t", Arc::new(funcs::SinPlusTwo));
    let g = Label::func("t", Arc::new(funcs::Cosine));
    let d = chain(&[green_box(f, 1, 1), green_box(g, 1, 1)]).unwrap();
    let x = 0.8;
    let t = differentiate_at(&d, "t", x, &Binding::new()).unwrap();
    let want = x.cos() * x.cos() - (x.sin() + 2.0) * x.sin();
    assert!((t.get(1, 1) - C64::new(want, 0.0)).norm() < 1e-12);
    assert!(t.get(0, 0).norm() < 1e-12);
}

#[test]
fn vanishing_functions_need_a_point() {
    let d = chain(&[green_box(Label::func("t", Arc::new(funcs::Sine)), 1, 1), hadamard()]).unwrap();
    assert!(matches!(differentiate(&d, "t"), Err(ZxError::VanishingFunction(_))));
    for x in [0.0, PI, 0.3] {
        let exact = differentiate_at(&d, "t", x, &Binding::new()).unwrap();
        let fd = finite_difference(&d, "t", &Binding::new().with("t", x), 1e-5).unwrap();
        assert!(exact.max_abs_diff(&fd) < 1e-8, "x={x}");
    }
    assert!(funcs::SinPlusTwo.never_vanishes());
}

#[test]
fn shift_rule_rejects_other_shapes() {
    let d = green_param("t", 2, 0.0, 1, 1).unwrap();
    assert!(matches!(shift_rule_eval(&d, "t", &Binding::new().with("t", 0.1)), Err(ZxError::ShapeMismatch(_))));
}

#[test]
fn absent_parameter_has_zero_derivative() {
    let d = random_diagram(&mut ChaCha8Rng::seed_from_u64(2), 2, 5);
    let t = evaluate(&differentiate(&d, "t").unwrap(), &Binding::new()).unwrap();
    assert_eq!(t.max_abs(), 0.0);
    assert_eq!((t.inputs(), t.outputs()), (2, 2));
}
