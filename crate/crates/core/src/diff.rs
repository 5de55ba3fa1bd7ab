//! Diagrammatic derivatives with respect to a real parameter.
//!
//! Each occurrence `f(x)` of the parameter gains an extra leg carrying
//! `T^t diag(1, f'/f)`, and a W spider fed by `|1>` selects exactly one occurrence
//! at a time, which is the product rule.

use alloc::string::ToString;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::f64::consts::FRAC_PI_2;

use crate::diagram::{Diagram, Port, Tau, VertexId, VertexKind};
use crate::error::{Result, ZxError};
use crate::interp::evaluate;
use crate::label::{funcs::Ratio, Binding, Label, PhaseLabel, C64, I, ONE};
use crate::notation::zero_scalar;
use crate::tensor::Tensor;

/// Modulus below which a label counts as vanishing at a point.
pub const VANISHING: f64 = 1e-9;

/// Green boxes whose label depends on `param`, in vertex order.
pub fn occurrences(d: &Diagram, param: &str) -> Vec<VertexId> {
    d.vertices()
        .filter(|(_, k)| k.label().is_some_and(|l| l.mentions(param)))
        .map(|(v, _)| v)
        .collect()
}

/// Rewrites `d` so each occurrence is a one-legged box attached to a green spider,
/// returning the new diagram and the occurrence vertices.
pub fn normalize_occurrences(d: &Diagram, param: &str) -> Result<(Diagram, Vec<VertexId>)> {
    let mut e = d.clone();
    let mut out = Vec::new();
    for v in occurrences(d, param) {
        let kind = e.kind(v).expect("listed").clone();
        let hangs_off_spider = kind.arity() == 1
            && matches!(
                e.partner(Port::Leg(v, 0)),
                Some(Port::Leg(u, _)) if matches!(
                    e.kind(u),
                    Some(VertexKind::GreenBox { label, .. }) if !label.mentions(param)
                )
            );
        if hangs_off_spider {
            out.push(v);
            continue;
        }
        let label = kind.label().expect("occurrence is a green box").clone();
        let (n, m) = kind.io();
        e.replace_kind(v, VertexKind::green(Label::Const(ONE), n, m))?;
        let port = e.extend_green(v, Label::Const(ONE))?;
        let leaf = e.add_vertex(VertexKind::green(label, 1, 0));
        e.connect(port, Port::Leg(leaf, 0))?;
        out.push(leaf);
    }
    Ok((e, out))
}

/// Joins the control arms to a `|1>` source, through a W spider when there are several.
fn attach_control(e: &mut Diagram, arms: &[Port], head_factor: Option<C64>) -> Result<()> {
    let src = e.add_vertex(VertexKind::pink(Tau::Pi, 0, 1));
    let mut head = Port::Leg(src, 0);
    if let Some(z) = head_factor {
        let b = e.add_vertex(VertexKind::green(Label::Const(z), 1, 1));
        e.connect(head, Port::Leg(b, 0))?;
        head = Port::Leg(b, 1);
    }
    if arms.len() == 1 {
        return e.connect(head, arms[0]);
    }
    let w = e.add_vertex(VertexKind::W { outputs: arms.len() });
    e.connect(head, Port::Leg(w, 0))?;
    for (j, a) in arms.iter().enumerate() {
        e.connect(Port::Leg(w, 1 + j), *a)?;
    }
    Ok(())
}

/// Adds `T^t diag(1, ratio)` on a fresh leg of occurrence `v`, returning the control port.
fn ratio_arm(e: &mut Diagram, v: VertexId, ratio: Option<Label>) -> Result<Port> {
    let label = e.kind(v).and_then(|k| k.label()).expect("green occurrence").clone();
    let extra = e.extend_green(v, label)?;
    let t = e.add_vertex(VertexKind::Triangle);
    e.connect(extra, Port::Leg(t, 0))?;
    match ratio {
        None => Ok(Port::Leg(t, 1)),
        Some(r) => {
            let b = e.add_vertex(VertexKind::green(r, 1, 1));
            e.connect(Port::Leg(t, 1), Port::Leg(b, 0))?;
            Ok(Port::Leg(b, 1))
        }
    }
}

/// The derivative of `d` with respect to `param`, as a diagram.
///
/// Function labels must be known never to vanish; otherwise use [`differentiate_at`].
pub fn differentiate(d: &Diagram, param: &str) -> Result<Diagram> {
    let occ = occurrences(d, param);
    if occ.is_empty() {
        return Ok(d.tensor(&zero_scalar()));
    }
    let labels: Vec<Label> = occ
        .iter()
        .map(|v| d.kind(*v).and_then(|k| k.label()).expect("green").clone())
        .collect();
    for l in &labels {
        if let Label::Func(f) = l {
            if !f.func.never_vanishes() {
                return Err(ZxError::VanishingFunction(f.func.id()));
            }
        }
    }
    let all_phase = labels.iter().all(|l| matches!(l, Label::Phase(_)));
    let single = occ.len() == 1;
    let mut e = d.clone();
    let mut arms = Vec::new();
    for (v, l) in occ.iter().zip(&labels) {
        let ratio = match l {
            Label::Phase(p) if all_phase && !single => {
                (p.k != 1).then(|| Label::real(p.k as f64))
            }
            Label::Phase(p) => Some(Label::Const(I * p.k as f64)),
            Label::Func(f) => Some(Label::Func(crate::label::FuncLabel {
                param: f.param.clone(),
                func: Arc::new(Ratio(f.func.clone())),
            })),
            Label::Const(_) => unreachable!("occurrences mention the parameter"),
        };
        arms.push(ratio_arm(&mut e, *v, ratio)?);
    }
    let head = (all_phase && !single).then_some(I);
    attach_control(&mut e, &arms, head)?;
    Ok(e)
}

/// Derivative at `x0`, valid even where labels vanish. Other parameters come from `binding`.
pub fn differentiate_at(d: &Diagram, param: &str, x0: f64, binding: &Binding) -> Result<Tensor> {
    let b0 = binding.clone().with(param, x0);
    let occ = occurrences(d, param);
    if occ.is_empty() {
        return Ok(Tensor::zeros(d.n_inputs(), d.n_outputs()));
    }
    let mut e = d.clone();
    let mut arms = Vec::new();
    for v in occ {
        let label = e.kind(v).and_then(|k| k.label()).expect("green").clone();
        let f0 = label.value(&b0)?;
        let df = match &label {
            Label::Phase(p) => I * p.k as f64 * f0,
            Label::Func(f) => f.func.derivative(x0),
            Label::Const(_) => unreachable!("occurrences mention the parameter"),
        };
        if f0.norm() > VANISHING {
            arms.push(ratio_arm(&mut e, v, Some(Label::Const(df / f0)))?);
        } else {
            // At a zero of f the box is |0..0><0..0|; its derivative only lives on |1..1>.
            let (n, m) = e.kind(v).expect("listed").io();
            e.replace_kind(v, VertexKind::green(Label::Const(ONE), n, m))?;
            let extra = e.extend_green(v, Label::Const(ONE))?;
            let b = e.add_vertex(VertexKind::green(Label::Const(df), 1, 1));
            e.connect(extra, Port::Leg(b, 0))?;
            arms.push(Port::Leg(b, 1));
        }
    }
    attach_control(&mut e, &arms, None)?;
    evaluate(&e, &b0)
}

/// Exact two-term shift rule for a parameter occurring once with `k = 1` and once
/// with `k = -1`: both phases shift by a quarter turn and the new legs are joined
/// through a pink pi spider.
pub fn shift_rule_diagram(d: &Diagram, param: &str) -> Result<Diagram> {
    let occ = occurrences(d, param);
    let ks: Vec<(VertexId, PhaseLabel)> = occ
        .iter()
        .filter_map(|v| match d.kind(*v).and_then(|k| k.label()) {
            Some(Label::Phase(p)) => Some((*v, p.clone())),
            _ => None,
        })
        .collect();
    let ok = ks.len() == 2 && occ.len() == 2 && {
        let mut k: Vec<i32> = ks.iter().map(|(_, p)| p.k).collect();
        k.sort();
        k == [-1, 1]
    };
    if !ok {
        return Err(ZxError::ShapeMismatch(
            "shift rule needs one exp(i x) and one exp(-i x) occurrence".to_string(),
        ));
    }
    let mut e = d.clone();
    let mut ports = Vec::new();
    for (v, p) in ks {
        let shifted = Label::Phase(PhaseLabel {
            param: p.param.clone(),
            k: p.k,
            c: p.c + p.k as f64 * FRAC_PI_2,
        });
        let (n, m) = e.kind(v).expect("listed").io();
        e.replace_kind(v, VertexKind::green(shifted.clone(), n, m))?;
        ports.push(e.extend_green(v, shifted)?);
    }
    let x = e.add_vertex(VertexKind::pink(Tau::Pi, 1, 1));
    e.connect(ports[0], Port::Leg(x, 0))?;
    e.connect(Port::Leg(x, 1), ports[1])?;
    Ok(e)
}

pub fn shift_rule_eval(d: &Diagram, param: &str, binding: &Binding) -> Result<Tensor> {
    evaluate(&shift_rule_diagram(d, param)?, binding)
}

/// Central difference `(D(x + h) - D(x - h)) / 2h` at the bound value of `param`.
pub fn finite_difference(d: &Diagram, param: &str, binding: &Binding, h: f64) -> Result<Tensor> {
    let x = binding.require(&param.into())?;
    let up = evaluate(d, &binding.clone().with(param, x + h))?;
    let down = evaluate(d, &binding.clone().with(param, x - h))?;
    Ok((&up - &down).scale(C64::new(0.5 / h, 0.0)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::label::funcs;
    use crate::notation::*;

    #[test]
    fn single_rotation_derivative() {
        let d = green_param("t", 1, 0.0, 1, 1).unwrap();
        let dd = differentiate(&d, "t").unwrap();
        assert!(dd.vertex_count() - d.vertex_count() <= 4);
        let b = Binding::new().with("t", 0.4);
        let got = evaluate(&dd, &b).unwrap();
        let want = Tensor::from_data(1, 1, alloc::vec![C64::new(0.0, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0), I * C64::from_polar(1.0, 0.4)]);
        assert!(got.approx_eq(&want, 1e-12));
    }

    #[test]
    fn no_occurrence_gives_zero() {
        let d = hadamard();
        let t = evaluate(&differentiate(&d, "t").unwrap(), &Binding::new()).unwrap();
        assert!(t.max_abs() == 0.0);
    }

    #[test]
    fn vanishing_function_rejected_then_handled() {
        let d = green_box(Label::func("t", Arc::new(funcs::Sine)), 1, 1);
        assert!(matches!(differentiate(&d, "t"), Err(ZxError::VanishingFunction(_))));
        let at = differentiate_at(&d, "t", 0.0, &Binding::new()).unwrap();
        let fd = finite_difference(&d, "t", &Binding::new().with("t", 0.0), 1e-5).unwrap();
        assert!(at.approx_eq(&fd, 1e-8));
    }

    #[test]
    fn shift_rule_pair() {
        let d = chain(&[
            green_param("t", 1, 0.2, 1, 1).unwrap(),
            hadamard(),
            green_param("t", -1, 0.0, 1, 1).unwrap(),
        ])
        .unwrap();
        let b = Binding::new().with("t", 1.1);
        let s = shift_rule_eval(&d, "t", &b).unwrap();
        let a = evaluate(&differentiate(&d, "t").unwrap(), &b).unwrap();
        assert!(s.approx_eq(&a, 1e-12));
    }

    #[test]
    fn normalization_preserves_value() {
        let d = chain(&[green_param("t", 2, 0.1, 1, 2).unwrap(), gbox_real(0.5, 2, 1)]).unwrap();
        let (n, occ) = normalize_occurrences(&d, "t").unwrap();
        assert_eq!(occ.len(), 1);
        assert_eq!(n.kind(occ[0]).unwrap().arity(), 1);
        let b = Binding::new().with("t", 0.9);
        assert!(evaluate(&n, &b).unwrap().approx_eq(&evaluate(&d, &b).unwrap(), 1e-13));
    }
}
