use std::sync::Arc;

use azx::circuit::{parse_circuit, write_circuit};
use azx::json::{diagram_to_string, parse_diagram, parse_tensor, tensor_to_value};
use azx_core::label::{funcs, Binding, FuncRegistry, Label};
use azx_core::random::{random_ansatz, random_labelled_diagram};
use azx_core::{evaluate, Diagram};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn random_labels() -> Vec<Label> {
    vec![
        Label::phase("t", -2, 0.125).unwrap(),
        Label::func("s", Arc::new(funcs::Affine(azx_core::label::C64::new(0.5, -1.0), azx_core::label::C64::new(0.1, 2.0)))),
        Label::func("t", Arc::new(funcs::Ratio(Arc::new(funcs::SinPlusTwo)))),
        Label::Const(azx_core::label::C64::new(-0.3, 0.7)),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn diagrams_round_trip(seed in any::<u64>(), wires in 1usize..=3) {
        let mut r = ChaCha8Rng::seed_from_u64(seed);
        let d = random_labelled_diagram(&mut r, wires, 4, &random_labels());
        let text = diagram_to_string(&d);
        let back = parse_diagram(&text, &FuncRegistry::with_builtins()).unwrap();
        prop_assert_eq!(&back, &d);
        prop_assert_eq!(diagram_to_string(&back), text);
    }

    #[test]
    fn circuits_round_trip(seed in any::<u64>(), n in 1usize..=4) {
        let mut r = ChaCha8Rng::seed_from_u64(seed);
        let a = random_ansatz(&mut r, n, 3, 6);
        prop_assert_eq!(parse_circuit(&write_circuit(&a)).unwrap(), a);
    }
}

#[test]
fn matrices_round_trip_through_text() {
    let d = random_labelled_diagram(&mut ChaCha8Rng::seed_from_u64(1), 2, 3, &random_labels()[..1]);
    let t = evaluate(&d, &Binding::new().with("t", 0.4)).unwrap();
    let text = serde_json::to_string(&tensor_to_value(&t)).unwrap();
    assert_eq!(parse_tensor(&text).unwrap(), t);
}

#[test]
fn boundary_wires_and_scalars_survive() {
    let mut d = Diagram::identity(2).tensor(&azx_core::notation::swap());
    d.mul_sqrt2(-5);
    let back = parse_diagram(&diagram_to_string(&d), &FuncRegistry::with_builtins()).unwrap();
    assert_eq!(back, d);
    assert_eq!(back.sqrt2_power(), -5);
}

#[test]
fn semantic_errors_name_the_field() {
    let reg = FuncRegistry::with_builtins();
    let cases = [
        (r#"{"vertices":[],"edges":[],"inputs":[["out",0]],"outputs":[]}"#, "inputs[0]"),
        (r#"{"vertices":[{"id":0,"kind":"pink","params":{"tau":"1","inputs":0,"outputs":0}}],"edges":[],"inputs":[],"outputs":[]}"#, "vertices[0].params.tau"),
        (r#"{"vertices":[{"id":0,"kind":"green_box","params":{"label":{"func":{"param":"t","id":"tan"}},"inputs":0,"outputs":0}}],"edges":[],"inputs":[],"outputs":[]}"#, "vertices[0].params.label.func.id"),
        (r#"{"vertices":[{"id":0,"kind":"green_box","params":{"label":{"phase":{"param":"t","k":0}},"inputs":0,"outputs":0}}],"edges":[],"inputs":[],"outputs":[]}"#, "vertices[0].params.label.phase.k"),
        (r#"{"vertices":[{"id":0,"kind":"hadamard"},{"id":0,"kind":"hadamard"}],"edges":[],"inputs":[],"outputs":[]}"#, "vertices[1]"),
        (r#"{"vertices":[{"id":0,"kind":"hadamard"}],"edges":[[[0,0],[0,5]]],"inputs":[],"outputs":[]}"#, "edges[0]"),
        (r#"{"vertices":[],"edges":[],"outputs":[]}"#, "inputs"),
        (r#"[1, 2]"#, "document"),
    ];
    for (doc, loc) in cases {
        let e = parse_diagram(doc, &reg).unwrap_err();
        assert_eq!(e.location, loc, "{doc}: {e}");
    }
}
