//! Seeded random diagrams for property checks.

use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::PI;

use rand::Rng;

use crate::bp::{Ansatz, Gate};
use crate::diagram::{Diagram, Tau};
use crate::label::{Label, Param, C64};
use crate::notation::*;

pub fn annulus<R: Rng>(rng: &mut R) -> C64 {
    C64::from_polar(rng.gen_range(0.2..=2.0), rng.gen_range(-PI..PI))
}

/// Places `gate`, acting on `width` consecutive wires starting at `at`, inside `wires` wires.
pub fn on_wires(gate: &Diagram, at: usize, wires: usize) -> Diagram {
    let width = gate.n_inputs();
    Diagram::identity(at)
        .tensor(gate)
        .tensor(&Diagram::identity(wires - at - width))
}

fn random_gate<R: Rng>(rng: &mut R, wires: usize) -> (Diagram, usize) {
    let pick = if wires >= 2 { rng.gen_range(0..10) } else { rng.gen_range(0..6) };
    let tau = if rng.gen::<bool>() { Tau::Pi } else { Tau::Zero };
    let g = match pick {
        0 => gbox(annulus(rng), 1, 1),
        1 => pink(tau, 1, 1),
        2 => hadamard(),
        3 => triangle(),
        4 => triangle_inverse(),
        5 => w(2).expect("arity").then(&w(2).expect("arity").transpose()).expect("shapes"),
        6 => cnot(),
        7 => cz(),
        8 => gbox(annulus(rng), 2, 2),
        _ => swap(),
    };
    let width = g.n_inputs();
    let at = rng.gen_range(0..=wires - width);
    (g, at)
}

/// A `wires -> wires` circuit of `depth` random parameter-free generators.
pub fn random_diagram<R: Rng>(rng: &mut R, wires: usize, depth: usize) -> Diagram {
    let mut d = Diagram::identity(wires);
    for _ in 0..depth {
        let (g, at) = random_gate(rng, wires);
        d = d.then(&on_wires(&g, at, wires)).expect("square layers");
    }
    d
}

/// Like [`random_diagram`] but with one box `exp(i (k x + c))` per entry of `ks`,
/// at random positions and with random offsets `c`.
pub fn random_phase_diagram<R: Rng>(rng: &mut R, wires: usize, depth: usize, param: &str, ks: &[i32]) -> Diagram {
    let mut d = Diagram::identity(wires);
    let mut slots: Vec<usize> = (0..ks.len()).map(|_| rng.gen_range(0..=depth)).collect();
    slots.sort_unstable();
    let mut next = 0;
    for step in 0..=depth {
        while next < ks.len() && slots[next] == step {
            let c = rng.gen_range(-PI..PI);
            let l = Label::phase(Param::new(param), ks[next], c).expect("nonzero k");
            let g = green_box(l, 1, 1);
            d = d.then(&on_wires(&g, rng.gen_range(0..wires), wires)).expect("square");
            next += 1;
        }
        if step < depth {
            let (g, at) = random_gate(rng, wires);
            d = d.then(&on_wires(&g, at, wires)).expect("square layers");
        }
    }
    d
}

/// A diagram with boxes labelled by arbitrary `labels`, interleaved with random gates.
pub fn random_labelled_diagram<R: Rng>(rng: &mut R, wires: usize, depth: usize, labels: &[Label]) -> Diagram {
    let mut d = Diagram::identity(wires);
    for l in labels {
        let (g, at) = random_gate(rng, wires);
        d = d.then(&on_wires(&g, at, wires)).expect("square");
        let arity_out = if wires >= 2 && rng.gen::<bool>() { 2 } else { 1 };
        let b = green_box(l.clone(), arity_out, arity_out);
        d = d.then(&on_wires(&b, rng.gen_range(0..=wires - arity_out), wires)).expect("square");
    }
    for _ in 0..depth {
        let (g, at) = random_gate(rng, wires);
        d = d.then(&on_wires(&g, at, wires)).expect("square");
    }
    d
}

/// A random circuit on `n` qubits with `params` parameterised rotations named
/// `p1, p2, ...` mixed with fixed rotations, Hadamards and entangling gates.
pub fn random_ansatz<R: Rng>(rng: &mut R, n: usize, params: usize, filler: usize) -> Ansatz {
    let mut kinds: Vec<bool> = (0..params + filler).map(|i| i < params).collect();
    for i in (1..kinds.len()).rev() {
        kinds.swap(i, rng.gen_range(0..=i));
    }
    let mut gates = Vec::new();
    let mut next = 1;
    for parametric in kinds {
        let q = rng.gen_range(0..n);
        if parametric {
            let p = Param::new(format!("p{next}"));
            next += 1;
            gates.push(if rng.gen::<bool>() { Gate::Rz(q, p) } else { Gate::Rx(q, p) });
            continue;
        }
        let pick = if n >= 2 { rng.gen_range(0..5) } else { rng.gen_range(0..3) };
        let other = (q + rng.gen_range(1..n.max(2))) % n.max(2);
        gates.push(match pick {
            0 => Gate::H(q),
            1 => Gate::RzFixed(q, rng.gen_range(-PI..PI)),
            2 => Gate::RxFixed(q, rng.gen_range(-PI..PI)),
            3 => Gate::Cnot(q, other),
            _ => Gate::Cz(q, other),
        });
    }
    Ansatz::new(n, gates).expect("well-formed by construction")
}
