//! Diagrammatic averaging of a diagram over a uniformly distributed phase.
//!
//! Every occurrence `exp(i (±k alpha + c))` of the parameter is unfused into a
//! constant box with one extra leg. Averaging over `alpha` then keeps exactly the
//! terms whose number of `+` legs set to one equals the number of `-` legs set to
//! one, which the weight-class gadget enforces.

use alloc::string::ToString;
use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::diagram::{Diagram, Port, Tau, VertexId, VertexKind};
use crate::diff::occurrences;
use crate::error::{Result, ZxError};
use crate::interp::evaluate;
use crate::label::{Binding, Label, C64, I, ONE};
use crate::tensor::Tensor;

/// Largest number of occurrence pairs with a diagrammatic gadget.
pub const MAX_GADGET_ARITY: usize = 3;

/// Occurrences of a parameter split by the sign of their coefficient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OccurrencePattern {
    pub plus: Vec<VertexId>,
    pub minus: Vec<VertexId>,
    /// Common value of `|k|`.
    pub k: u32,
}

impl OccurrencePattern {
    pub fn arity(&self) -> usize {
        self.plus.len().max(self.minus.len())
    }
}

pub fn occurrence_pattern(d: &Diagram, param: &str) -> Result<OccurrencePattern> {
    let mut pat = OccurrencePattern {
        plus: Vec::new(),
        minus: Vec::new(),
        k: 0,
    };
    for v in occurrences(d, param) {
        match d.kind(v).and_then(|k| k.label()) {
            Some(Label::Phase(p)) => {
                let k = p.k.unsigned_abs();
                if pat.k != 0 && pat.k != k {
                    return Err(ZxError::MixedCoefficients(param.to_string()));
                }
                pat.k = k;
                if p.k > 0 { pat.plus.push(v) } else { pat.minus.push(v) }
            }
            _ => {
                return Err(ZxError::UnsupportedOccurrence {
                    param: param.to_string(),
                    vertex: v,
                    reason: "only exp(i (k x + c)) labels can be averaged".into(),
                })
            }
        }
    }
    Ok(pat)
}

/// The map with entries `[|x| = |y|]` from `p` input qubits `y` to `p` output qubits `x`.
pub fn weight_class_gadget(p: usize) -> Result<Diagram> {
    match p {
        0 => return Ok(Diagram::new(0, 0)),
        1 => return Ok(Diagram::identity(1)),
        p if p > MAX_GADGET_ARITY => return Err(ZxError::UnsupportedArity(p)),
        _ => {}
    }
    let mut d = Diagram::new(p, p);
    let hub0 = d.add_vertex(VertexKind::green(Label::Const(ONE), 0, 2 * p));
    let hub1 = d.add_vertex(VertexKind::green(Label::Const(ONE), 0, 2 * p));
    let slots = (0..p).map(Port::Output).chain((0..p).map(Port::Input));
    for (l, slot) in slots.enumerate() {
        // Outputs pick up i^(t x), inputs (-i)^(t x); together with the Hadamard
        // sign this sums i^(t (|x| - |y|)) over t in 0..4.
        let a = if matches!(slot, Port::Output(_)) { I } else { -I };
        let s = d.add_vertex(VertexKind::green(Label::Const(ONE), 0, 3));
        let t_hub = d.add_vertex(VertexKind::Triangle);
        let b = d.add_vertex(VertexKind::green(Label::Const(a - ONE), 1, 1));
        let t_leg = d.add_vertex(VertexKind::Triangle);
        let h = d.add_vertex(VertexKind::Hadamard);
        d.connect(Port::Leg(s, 0), slot)?;
        d.connect(Port::Leg(hub0, l), Port::Leg(t_hub, 0))?;
        d.connect(Port::Leg(t_hub, 1), Port::Leg(b, 0))?;
        d.connect(Port::Leg(b, 1), Port::Leg(t_leg, 1))?;
        d.connect(Port::Leg(t_leg, 0), Port::Leg(s, 1))?;
        d.connect(Port::Leg(s, 2), Port::Leg(h, 0))?;
        d.connect(Port::Leg(h, 1), Port::Leg(hub1, l))?;
    }
    d.mul_sqrt2(2 * p as i32 - 4);
    Ok(d)
}

/// Unfuses every occurrence, returning the diagram with parameter-free labels and the
/// attachment ports of the `+` and `-` occurrences, in vertex order.
fn unfuse(d: &Diagram, pat: &OccurrencePattern) -> Result<(Diagram, Vec<Port>, Vec<Port>)> {
    let mut e = d.clone();
    let attach = |v: VertexId, e: &mut Diagram| -> Result<Port> {
        let c = match e.kind(v).and_then(|k| k.label()) {
            Some(Label::Phase(p)) => p.c,
            _ => unreachable!("pattern holds phase labels"),
        };
        e.extend_green(v, Label::angle(c))
    };
    let mut plus = Vec::new();
    for v in &pat.plus {
        plus.push(attach(*v, &mut e)?);
    }
    let mut minus = Vec::new();
    for v in &pat.minus {
        minus.push(attach(*v, &mut e)?);
    }
    Ok((e, plus, minus))
}

/// Exact average of `d` over the parameter, as a diagram free of it.
pub fn integrate_uniform(d: &Diagram, param: &str) -> Result<Diagram> {
    let pat = occurrence_pattern(d, param)?;
    if pat.plus.is_empty() && pat.minus.is_empty() {
        return Ok(d.clone());
    }
    let p = pat.arity();
    if p > MAX_GADGET_ARITY {
        return Err(ZxError::UnsupportedArity(p));
    }
    let (mut e, mut plus, mut minus) = unfuse(d, &pat)?;
    // Pad the shorter side with legs pinned to zero.
    while plus.len() < p || minus.len() < p {
        let v = e.add_vertex(VertexKind::pink(Tau::Zero, 0, 1));
        if plus.len() < p { plus.push(Port::Leg(v, 0)) } else { minus.push(Port::Leg(v, 0)) }
    }
    let g = weight_class_gadget(p)?;
    e.embed(&g, &minus, &plus)?;
    Ok(e)
}

/// Averages over each parameter in turn.
pub fn integrate_all(d: &Diagram, params: &[&str]) -> Result<Diagram> {
    params.iter().try_fold(d.clone(), |acc, p| integrate_uniform(&acc, p))
}

/// Trapezoidal average over `nodes` equally spaced phases in `[-pi, pi)`.
pub fn quadrature_oracle(d: &Diagram, param: &str, binding: &Binding, nodes: usize) -> Result<Tensor> {
    if nodes == 0 {
        return Err(ZxError::ShapeMismatch("quadrature needs at least one node".into()));
    }
    let mut acc: Option<Tensor> = None;
    for j in 0..nodes {
        let x = -PI + 2.0 * PI * j as f64 / nodes as f64;
        let b = binding.clone().with(param, x);
        let t = evaluate(d, &b)?;
        acc = Some(match acc {
            None => t,
            Some(a) => &a + &t,
        });
    }
    Ok(acc.expect("nonempty").scale(C64::new(1.0 / nodes as f64, 0.0)))
}

/// Numerical average for patterns without a gadget. The node count exceeds the
/// largest frequency present, so the trapezoidal rule is exact up to rounding.
pub fn integrate_numeric(d: &Diagram, param: &str, binding: &Binding) -> Result<Tensor> {
    let pat = occurrence_pattern(d, param)?;
    let nodes = pat.k as usize * pat.plus.len().max(pat.minus.len()) + 1;
    quadrature_oracle(d, param, binding, nodes.max(1))
}

/// Average as a matrix, using the gadget where one exists and quadrature otherwise.
pub fn integrate_eval(d: &Diagram, param: &str, binding: &Binding) -> Result<(Tensor, bool)> {
    match integrate_uniform(d, param) {
        Ok(e) => Ok((evaluate(&e, binding)?, true)),
        Err(ZxError::UnsupportedArity(_)) => Ok((integrate_numeric(d, param, binding)?, false)),
        Err(e) => Err(e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::notation::*;

    fn ev(d: &Diagram) -> Tensor {
        evaluate(d, &Binding::new()).unwrap()
    }

    #[test]
    fn gadget_entries_exact() {
        for p in 1..=3 {
            let t = ev(&weight_class_gadget(p).unwrap());
            for x in 0..1usize << p {
                for y in 0..1usize << p {
                    let want = if x.count_ones() == y.count_ones() { 1.0 } else { 0.0 };
                    assert!((t.get(x, y) - C64::new(want, 0.0)).norm() < 1e-12, "p={p} {x} {y}");
                }
            }
        }
        assert_eq!(weight_class_gadget(2).unwrap().vertex_count(), 22);
        assert_eq!(weight_class_gadget(3).unwrap().vertex_count(), 32);
        assert_eq!(weight_class_gadget(4), Err(ZxError::UnsupportedArity(4)));
    }

    #[test]
    fn single_pair_against_quadrature() {
        let d = chain(&[
            green_param("a", 1, 0.3, 1, 1).unwrap(),
            hadamard(),
            green_param("a", -1, 0.0, 1, 1).unwrap(),
        ])
        .unwrap();
        let b = Binding::new();
        let exact = ev(&integrate_uniform(&d, "a").unwrap());
        let q = quadrature_oracle(&d, "a", &b, 1024).unwrap();
        assert!(exact.approx_eq(&q, 1e-10));
    }

    #[test]
    fn unbalanced_and_mixed() {
        let d = chain(&[green_param("a", 2, 0.0, 1, 1).unwrap(), hadamard()]).unwrap();
        let exact = ev(&integrate_uniform(&d, "a").unwrap());
        let q = quadrature_oracle(&d, "a", &Binding::new(), 64).unwrap();
        assert!(exact.approx_eq(&q, 1e-12));
        let m = chain(&[d.clone(), green_param("a", 1, 0.0, 1, 1).unwrap()]).unwrap();
        assert!(matches!(integrate_uniform(&m, "a"), Err(ZxError::MixedCoefficients(_))));
    }
}
