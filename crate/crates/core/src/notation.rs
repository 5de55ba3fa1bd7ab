//! Single generators as diagrams, and the derived shorthands built from them.

use alloc::vec::Vec;

use crate::diagram::{Diagram, Port, Tau, VertexKind};
use crate::error::{Result, ZxError};
use crate::label::{Label, Param, C64, ONE};

/// A diagram holding one vertex, inputs wired to its input legs in order, then outputs.
pub fn generator(kind: VertexKind) -> Diagram {
    let (n, m) = kind.io();
    let mut d = Diagram::new(n, m);
    let v = d.add_vertex(kind);
    for i in 0..n {
        d.connect(Port::Input(i), Port::Leg(v, i)).expect("fresh port");
    }
    for j in 0..m {
        d.connect(Port::Leg(v, n + j), Port::Output(j)).expect("fresh port");
    }
    d
}

pub fn green_box(label: Label, inputs: usize, outputs: usize) -> Diagram {
    generator(VertexKind::green(label, inputs, outputs))
}

pub fn gbox(a: C64, inputs: usize, outputs: usize) -> Diagram {
    green_box(Label::Const(a), inputs, outputs)
}

pub fn gbox_real(a: f64, inputs: usize, outputs: usize) -> Diagram {
    gbox(C64::new(a, 0.0), inputs, outputs)
}

/// Green spider with phase `alpha`: a box labelled `exp(i alpha)`.
pub fn green_phase_spider(alpha: f64, inputs: usize, outputs: usize) -> Diagram {
    green_box(Label::angle(alpha), inputs, outputs)
}

/// Green box labelled `exp(i (k * param + c))`.
pub fn green_param(param: impl Into<Param>, k: i32, c: f64, inputs: usize, outputs: usize) -> Result<Diagram> {
    Ok(green_box(Label::phase(param, k, c)?, inputs, outputs))
}

pub fn pink(tau: Tau, inputs: usize, outputs: usize) -> Diagram {
    generator(VertexKind::pink(tau, inputs, outputs))
}

pub fn hadamard() -> Diagram {
    generator(VertexKind::Hadamard)
}

pub fn triangle() -> Diagram {
    generator(VertexKind::Triangle)
}

pub fn triangle_inverse() -> Diagram {
    generator(VertexKind::TriangleInverse)
}

/// The triangle read backwards, with matrix `[[1,0],[1,1]]`.
pub fn triangle_transpose() -> Diagram {
    triangle().transpose()
}

pub fn w(outputs: usize) -> Result<Diagram> {
    let k = VertexKind::W { outputs };
    k.validate()?;
    Ok(generator(k))
}

pub fn swap() -> Diagram {
    let mut d = Diagram::new(2, 2);
    d.connect(Port::Input(0), Port::Output(1)).expect("fresh");
    d.connect(Port::Input(1), Port::Output(0)).expect("fresh");
    d
}

pub fn cap() -> Diagram {
    let mut d = Diagram::new(0, 2);
    d.connect(Port::Output(0), Port::Output(1)).expect("fresh");
    d
}

pub fn cup() -> Diagram {
    cap().transpose()
}

/// Parallel composition of a list of diagrams, first on top.
pub fn tensor_all(parts: &[Diagram]) -> Diagram {
    parts
        .iter()
        .fold(Diagram::new(0, 0), |acc, d| acc.tensor(d))
}

/// Sequential composition of a list of diagrams, first applied first.
pub fn chain(parts: &[Diagram]) -> Result<Diagram> {
    let (first, rest) = parts
        .split_first()
        .ok_or_else(|| ZxError::InvalidDiagram("empty composition".into()))?;
    rest.iter().try_fold(first.clone(), |acc, d| acc.then(d))
}

/// The scalar `0`.
pub fn zero_scalar() -> Diagram {
    pink(Tau::Pi, 0, 0)
}

/// The scalar `a`, built from a green state projected onto `|1>`.
pub fn scalar(a: C64) -> Diagram {
    gbox(a, 0, 1).then(&pink(Tau::Pi, 1, 0)).expect("shapes agree")
}

pub fn scalar_real(a: f64) -> Diagram {
    scalar(C64::new(a, 0.0))
}

/// The scalar `sqrt(2)^p` as an empty diagram.
pub fn sqrt2_scalar(p: i32) -> Diagram {
    let mut d = Diagram::new(0, 0);
    d.mul_sqrt2(p);
    d
}

/// Pink spider derived from Hadamard-conjugated green spiders.
pub fn pink_spider(tau: Tau, inputs: usize, outputs: usize) -> Diagram {
    let alpha = match tau {
        Tau::Zero => 0.0,
        Tau::Pi => core::f64::consts::PI,
    };
    let mut d = Diagram::new(inputs, outputs);
    let g = d.add_vertex(VertexKind::green(Label::angle(alpha), inputs, outputs));
    for l in 0..inputs + outputs {
        let h = d.add_vertex(VertexKind::Hadamard);
        d.connect(Port::Leg(g, l), Port::Leg(h, 1)).expect("fresh");
        let b = if l < inputs { Port::Input(l) } else { Port::Output(l - inputs) };
        d.connect(b, Port::Leg(h, 0)).expect("fresh");
    }
    d.mul_sqrt2(inputs as i32 + outputs as i32 - 2);
    d
}

/// Pink rotation `H * green(alpha) * H` on one wire.
pub fn x_phase_spider(alpha: f64) -> Diagram {
    chain(&[hadamard(), green_phase_spider(alpha, 1, 1), hadamard()]).expect("shapes agree")
}

/// `W(1 -> 2)` from a pink copy followed by the projector killing `|11>`.
fn w2_derived() -> Diagram {
    let mut d = Diagram::new(1, 2);
    let p = d.add_vertex(VertexKind::pink(Tau::Zero, 1, 2));
    let sink = d.add_vertex(VertexKind::green(Label::real(-1.0), 2, 0));
    d.connect(Port::Input(0), Port::Leg(p, 0)).expect("fresh");
    for j in 0..2 {
        let g = d.add_vertex(VertexKind::green(Label::Const(ONE), 1, 2));
        let t = d.add_vertex(VertexKind::Triangle);
        d.connect(Port::Leg(p, 1 + j), Port::Leg(g, 0)).expect("fresh");
        d.connect(Port::Leg(g, 1), Port::Output(j)).expect("fresh");
        d.connect(Port::Leg(g, 2), Port::Leg(t, 0)).expect("fresh");
        d.connect(Port::Leg(t, 1), Port::Leg(sink, j)).expect("fresh");
    }
    d
}

/// W spider with `outputs` tails, assembled from spiders and triangles.
pub fn w_spider(outputs: usize) -> Result<Diagram> {
    match outputs {
        0 => Err(ZxError::InvalidKind("W spider needs at least one tail".into())),
        1 => Ok(Diagram::identity(1)),
        2 => Ok(w2_derived()),
        m => w2_derived().then(&Diagram::identity(1).tensor(&w_spider(m - 1)?)),
    }
}

/// Controlled-NOT with control on wire 0.
pub fn cnot() -> Diagram {
    let mut d = Diagram::new(2, 2);
    let c = d.add_vertex(VertexKind::green(Label::Const(ONE), 1, 2));
    let x = d.add_vertex(VertexKind::pink(Tau::Zero, 2, 1));
    d.connect(Port::Input(0), Port::Leg(c, 0)).expect("fresh");
    d.connect(Port::Leg(c, 1), Port::Output(0)).expect("fresh");
    d.connect(Port::Input(1), Port::Leg(x, 0)).expect("fresh");
    d.connect(Port::Leg(c, 2), Port::Leg(x, 1)).expect("fresh");
    d.connect(Port::Leg(x, 2), Port::Output(1)).expect("fresh");
    d
}

/// Controlled-Z.
pub fn cz() -> Diagram {
    let mut d = Diagram::new(2, 2);
    let mut extra = Vec::new();
    for q in 0..2 {
        let g = d.add_vertex(VertexKind::green(Label::Const(ONE), 1, 2));
        d.connect(Port::Input(q), Port::Leg(g, 0)).expect("fresh");
        d.connect(Port::Leg(g, 1), Port::Output(q)).expect("fresh");
        extra.push(Port::Leg(g, 2));
    }
    let h = d.add_vertex(VertexKind::Hadamard);
    d.connect(extra[0], Port::Leg(h, 0)).expect("fresh");
    d.connect(extra[1], Port::Leg(h, 1)).expect("fresh");
    d.mul_sqrt2(1);
    d
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interp::evaluate;
    use crate::label::{Binding, I};
    use crate::tensor::Tensor;

    fn ev(d: &Diagram) -> Tensor {
        evaluate(d, &Binding::new()).unwrap()
    }

    #[test]
    fn derived_pink_matches_generator() {
        for tau in [Tau::Zero, Tau::Pi] {
            for n in 0..3 {
                for m in 0..3 {
                    let a = ev(&pink_spider(tau, n, m));
                    let b = ev(&pink(tau, n, m));
                    assert!(a.approx_eq(&b, 1e-12), "{tau:?} {n} {m}");
                }
            }
        }
    }

    #[test]
    fn derived_w_matches_generator() {
        for m in 1..5 {
            assert!(ev(&w_spider(m).unwrap()).approx_eq(&ev(&w(m).unwrap()), 1e-12));
        }
        assert!(w_spider(0).is_err());
    }

    #[test]
    fn scalars() {
        let a = C64::new(0.3, -1.2);
        assert!((ev(&scalar(a)).data()[0] - a).norm() < 1e-15);
        assert_eq!(ev(&zero_scalar()).data()[0], C64::new(0.0, 0.0));
        assert!((ev(&gbox(a, 0, 0)).data()[0] - (ONE + a)).norm() < 1e-15);
    }

    #[test]
    fn x_rotation() {
        let al = 0.77_f64;
        let t = ev(&x_phase_spider(al));
        let e = C64::from_polar(1.0, al / 2.0);
        let (c, s) = ((al / 2.0).cos(), (al / 2.0).sin());
        let want = Tensor::from_data(1, 1, alloc::vec![e * c, -I * e * s, -I * e * s, e * c]);
        assert!(t.approx_eq(&want, 1e-14));
    }

    #[test]
    fn two_qubit_gates() {
        let cx = Tensor::from_real_rows(&[
            &[1.0, 0.0, 0.0, 0.0],
            &[0.0, 1.0, 0.0, 0.0],
            &[0.0, 0.0, 0.0, 1.0],
            &[0.0, 0.0, 1.0, 0.0],
        ]);
        assert!(ev(&cnot()).approx_eq(&cx, 1e-14));
        let czm = Tensor::from_real_rows(&[
            &[1.0, 0.0, 0.0, 0.0],
            &[0.0, 1.0, 0.0, 0.0],
            &[0.0, 0.0, 1.0, 0.0],
            &[0.0, 0.0, 0.0, -1.0],
        ]);
        assert!(ev(&cz()).approx_eq(&czm, 1e-14));
    }

    #[test]
    fn transposed_triangle() {
        let t = ev(&triangle_transpose());
        assert_eq!(t, Tensor::from_real_rows(&[&[1.0, 0.0], &[1.0, 1.0]]));
        let swapped = ev(&cap().then(&swap()).unwrap());
        assert_eq!(swapped, ev(&cap()));
        assert_eq!(ev(&cup()).data(), ev(&cap()).data());
    }
}
