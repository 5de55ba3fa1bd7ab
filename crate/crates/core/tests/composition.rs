use std::f64::consts::{FRAC_PI_2, PI};

use azx_core::interp::{contraction_order, evaluate_with};
use azx_core::label::{Binding, C64, ONE, ZERO};
use azx_core::notation::*;
use azx_core::random::{random_diagram, random_phase_diagram};
use azx_core::{evaluate, Diagram, EvalOptions, Tau, Tensor};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn ev(d: &Diagram) -> Tensor {
    evaluate(d, &Binding::new()).unwrap()
}

/// Matrix product `b * a` computed entry by entry.
fn matmul(b: &Tensor, a: &Tensor) -> Vec<Vec<C64>> {
    (0..b.rows())
        .map(|r| {
            (0..a.cols())
                .map(|c| (0..a.rows()).map(|k| b.get(r, k) * a.get(k, c)).sum())
                .collect()
        })
        .collect()
}

fn kron(a: &Tensor, b: &Tensor) -> Vec<Vec<C64>> {
    (0..a.rows() * b.rows())
        .map(|r| {
            (0..a.cols() * b.cols())
                .map(|c| a.get(r / b.rows(), c / b.cols()) * b.get(r % b.rows(), c % b.cols()))
                .collect()
        })
        .collect()
}

fn close(t: &Tensor, m: &[Vec<C64>], tol: f64) -> bool {
    t.rows() == m.len()
        && m.iter().enumerate().all(|(r, row)| {
            row.len() == t.cols() && row.iter().enumerate().all(|(c, z)| (t.get(r, c) - z).norm() <= tol)
        })
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn sequential_composition_is_matrix_product(seed in any::<u64>(), wires in 1usize..=4) {
        let mut r = rng(seed);
        let f = random_diagram(&mut r, wires, 4);
        let g = random_diagram(&mut r, wires, 4);
        let fg = f.then(&g).unwrap();
        prop_assert!(close(&ev(&fg), &matmul(&ev(&g), &ev(&f)), 1e-10));
    }

    #[test]
    fn parallel_composition_is_kronecker(seed in any::<u64>(), a in 1usize..=2, b in 1usize..=2) {
        let mut r = rng(seed);
        let f = random_diagram(&mut r, a, 4);
        let g = random_diagram(&mut r, b, 4);
        prop_assert!(close(&ev(&f.tensor(&g)), &kron(&ev(&f), &ev(&g)), 1e-10));
    }

    #[test]
    fn interchange_law(seed in any::<u64>(), a in 1usize..=2, b in 1usize..=2) {
        let mut r = rng(seed);
        let f1 = random_diagram(&mut r, a, 3);
        let f2 = random_diagram(&mut r, a, 3);
        let g1 = random_diagram(&mut r, b, 3);
        let g2 = random_diagram(&mut r, b, 3);
        let lhs = f1.then(&f2).unwrap().tensor(&g1.then(&g2).unwrap());
        let rhs = f1.tensor(&g1).then(&f2.tensor(&g2)).unwrap();
        prop_assert!(ev(&lhs).approx_eq(&ev(&rhs), 1e-10));
    }

    #[test]
    fn dagger_is_conjugate_transpose_and_involutive(seed in any::<u64>(), x in -PI..PI) {
        let mut r = rng(seed);
        let d = random_phase_diagram(&mut r, 2, 5, "t", &[1, -2]);
        let b = Binding::new().with("t", x);
        let m = evaluate(&d, &b).unwrap();
        let dd = d.dagger().unwrap();
        let md = evaluate(&dd, &b).unwrap();
        for row in 0..m.rows() {
            for col in 0..m.cols() {
                prop_assert!((md.get(col, row) - m.get(row, col).conj()).norm() < 1e-10);
            }
        }
        prop_assert!(evaluate(&dd.dagger().unwrap(), &b).unwrap().approx_eq(&m, 1e-10));
    }

    #[test]
    fn contraction_order_does_not_matter(seed in any::<u64>(), wires in 1usize..=4) {
        let mut r = rng(seed);
        let d = random_diagram(&mut r, wires, 8);
        let fwd = evaluate_with(&d, &Binding::new(), &EvalOptions::default()).unwrap();
        let rev = evaluate_with(&d, &Binding::new(), &EvalOptions { reverse_ties: true, ..EvalOptions::default() }).unwrap();
        prop_assert!(fwd.approx_eq(&rev, 1e-9));
    }
}

#[test]
fn identity_and_empty() {
    assert!(ev(&Diagram::empty(1, 1).unwrap()).approx_eq(&Tensor::identity(1), 0.0));
    assert_eq!(ev(&Diagram::empty(0, 0).unwrap()).as_scalar(), Some(ONE));
    assert!(Diagram::empty(2, 1).is_err());
    let f = random_diagram(&mut rng(3), 2, 5);
    let g = f.then(&Diagram::empty(2, 2).unwrap()).unwrap();
    assert!(ev(&g).approx_eq(&ev(&f), 1e-12));
}

#[test]
fn generators_have_their_matrices() {
    let t = ev(&triangle());
    assert!(t.approx_eq(&Tensor::from_real_rows(&[&[1.0, 1.0], &[0.0, 1.0]]), 0.0));
    let a = C64::new(0.3, -1.2);
    let g = ev(&gbox(a, 1, 1));
    assert_eq!((g.get(0, 0), g.get(0, 1), g.get(1, 0), g.get(1, 1)), (ONE, ZERO, ZERO, a));
    let w2 = ev(&w(2).unwrap());
    let want = Tensor::from_real_rows(&[&[1.0, 0.0], &[0.0, 1.0], &[0.0, 1.0], &[0.0, 0.0]]);
    assert!(w2.approx_eq(&want, 0.0));
    let b = C64::new(-0.7, 0.4);
    assert_eq!(ev(&scalar(a).tensor(&scalar(b))).as_scalar().map(|z| (z - a * b).norm() < 1e-14), Some(true));
    assert!(ev(&zero_scalar()).as_scalar() == Some(ZERO));
}

#[test]
fn small_compositions() {
    let hh = hadamard().then(&hadamard()).unwrap();
    assert!(ev(&hh).approx_eq(&Tensor::identity(1), 1e-12));
    let ti = triangle().then(&triangle_inverse()).unwrap();
    assert!(ev(&ti).approx_eq(&Tensor::identity(1), 1e-12));
    let ii = Diagram::identity(1).tensor(&Diagram::identity(1));
    assert!(ev(&ii).approx_eq(&Tensor::identity(2), 0.0));
    let sw = Tensor::from_real_rows(&[
        &[1.0, 0.0, 0.0, 0.0],
        &[0.0, 0.0, 1.0, 0.0],
        &[0.0, 1.0, 0.0, 0.0],
        &[0.0, 0.0, 0.0, 1.0],
    ]);
    assert!(ev(&swap()).approx_eq(&sw, 0.0));
}

#[test]
fn snake_through_swap() {
    // (cup (x) id) . (id (x) swap) . (id (x) cap) straightens to a wire.
    let d = chain(&[
        Diagram::identity(1).tensor(&cap()),
        Diagram::identity(1).tensor(&swap()),
        cup().tensor(&Diagram::identity(1)),
    ])
    .unwrap();
    let t = ev(&d);
    // Direct sum over the closed wire index.
    let mut want = Tensor::zeros(1, 1);
    for x in 0..2 {
        want.set(x, x, ONE);
    }
    assert!(t.approx_eq(&want, 1e-12));
}

#[test]
fn w_spider_closed_form() {
    for m in 1..=5 {
        let t = ev(&w_spider(m).unwrap());
        for row in 0..1usize << m {
            let head0 = if row == 0 { ONE } else { ZERO };
            let head1 = if row.count_ones() == 1 { ONE } else { ZERO };
            assert_eq!(t.get(row, 0), head0, "m={m} row={row}");
            assert_eq!(t.get(row, 1), head1, "m={m} row={row}");
        }
        assert!(ev(&w(m).unwrap()).approx_eq(&t, 0.0));
    }
}

#[test]
fn pink_pi_is_not_gate() {
    let x = ev(&pink_spider(Tau::Pi, 1, 1));
    assert!(x.approx_eq(&Tensor::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]), 1e-12));
}

#[test]
fn bent_not_is_symmetric_pair() {
    let d = cap().then(&pink_spider(Tau::Pi, 1, 1).tensor(&Diagram::identity(1))).unwrap();
    let t = ev(&d);
    let want = [0.0, 1.0, 1.0, 0.0];
    for (r, w) in want.iter().enumerate() {
        assert!((t.get(r, 0) - C64::new(*w, 0.0)).norm() < 1e-12);
    }
}

#[test]
fn x_rotation_global_phase() {
    let a = FRAC_PI_2;
    let e = C64::from_polar(1.0, a);
    let want = Tensor::from_data(1, 1, vec![(ONE + e) * 0.5, (ONE - e) * 0.5, (ONE - e) * 0.5, (ONE + e) * 0.5]);
    assert!(ev(&x_phase_spider(a)).approx_eq(&want, 1e-12));
    // At pi the prefactor i cancels -i X.
    let xp = ev(&x_phase_spider(PI));
    let x = Tensor::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]);
    assert!(xp.approx_eq(&x, 1e-12));
}

#[test]
fn contraction_plans() {
    let chain10 = chain(&vec![gbox_real(0.5, 1, 1); 10]).unwrap();
    let plan = contraction_order(&chain10, &EvalOptions::default()).unwrap();
    assert_eq!(plan.max_rank, 1);
    let sim = azx_core::bp::closed_expectation(&azx_core::bp::sim9(4).unwrap(), &azx_core::bp::PauliString::parse("ZZZZ").unwrap()).unwrap();
    assert!(contraction_order(&sim, &EvalOptions::default()).unwrap().max_rank <= 8);
    let empty = contraction_order(&Diagram::new(0, 0), &EvalOptions::default()).unwrap();
    assert!(empty.steps.is_empty());
}

#[test]
fn unbound_and_oversized() {
    let d = random_phase_diagram(&mut rng(1), 1, 2, "t", &[1]);
    assert!(evaluate(&d, &Binding::new()).is_err());
    let big = Diagram::identity(14).tensor(&Diagram::identity(14));
    assert!(evaluate(&big, &Binding::new()).is_err());
}
