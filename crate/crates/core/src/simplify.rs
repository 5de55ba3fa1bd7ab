//! Semantics-preserving rewriting to a smaller diagram.
//!
//! Steps, tried in this order until none applies: removal of identity spiders,
//! cancellation of adjacent Hadamards, green box fusion and pink spider fusion.
//! Every step deletes at least one vertex, so rewriting terminates.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::diagram::{Diagram, Port, Tau, VertexId, VertexKind};
use crate::label::{Label, ONE};

pub fn simplify(d: &Diagram) -> Diagram {
    let mut d = d.clone();
    while simplify_step(&mut d) {}
    d
}

/// Applies one rewrite, returning whether anything changed.
pub fn simplify_step(d: &mut Diagram) -> bool {
    remove_identity(d) || cancel_hadamards(d) || fuse_pair(d, true) || fuse_pair(d, false)
}

fn is_identity(k: &VertexKind) -> bool {
    match k {
        VertexKind::GreenBox { label: Label::Const(a), .. } => k.arity() == 2 && *a == ONE,
        VertexKind::Pink { tau: Tau::Zero, .. } => k.arity() == 2,
        _ => false,
    }
}

fn remove_identity(d: &mut Diagram) -> bool {
    let Some(v) = d.vertices().find(|(_, k)| is_identity(k)).map(|(v, _)| v) else {
        return false;
    };
    splice_out(d, v);
    true
}

/// Removes a two-legged vertex acting as a plain wire.
fn splice_out(d: &mut Diagram, v: VertexId) {
    let (_, partners) = d.remove_vertex(v).expect("vertex exists");
    match (partners[0], partners[1]) {
        (Some(Port::Leg(a, 1)), _) if a == v => d.mul_sqrt2(2),
        (Some(p), Some(q)) => d.connect(p, q).expect("freed ports"),
        _ => unreachable!("diagram must be valid"),
    }
}

fn cancel_hadamards(d: &mut Diagram) -> bool {
    let found = d.vertices().find_map(|(u, k)| {
        if *k != VertexKind::Hadamard {
            return None;
        }
        (0..2).find_map(|l| match d.partner(Port::Leg(u, l)) {
            Some(Port::Leg(v, m)) if v != u && d.kind(v) == Some(&VertexKind::Hadamard) => {
                Some((u, l, v, m))
            }
            _ => None,
        })
    });
    let Some((u, l, v, m)) = found else {
        return false;
    };
    let pu = d.partner(Port::Leg(u, 1 - l));
    let pv = d.partner(Port::Leg(v, 1 - m));
    d.remove_vertex(u).expect("exists");
    d.remove_vertex(v).expect("exists");
    if pu == Some(Port::Leg(v, 1 - m)) {
        // Two Hadamards in a closed loop: the trace of the identity.
        d.mul_sqrt2(2);
    } else {
        d.connect(pu.expect("valid"), pv.expect("valid")).expect("freed ports");
    }
    true
}

fn merged_kind(a: &VertexKind, b: &VertexKind, green: bool) -> Option<VertexKind> {
    match (a, b) {
        (VertexKind::GreenBox { label: x, .. }, VertexKind::GreenBox { label: y, .. }) if green => {
            x.fuse(y).map(|l| VertexKind::green(l, 0, 0))
        }
        (VertexKind::Pink { tau: x, .. }, VertexKind::Pink { tau: y, .. }) if !green => {
            Some(VertexKind::pink(x.add(*y), 0, 0))
        }
        _ => None,
    }
}

fn fuse_pair(d: &mut Diagram, green: bool) -> bool {
    let mut found = None;
    'outer: for (u, ku) in d.vertices() {
        for p in d.neighbours(u).into_iter().flatten() {
            if let Port::Leg(v, _) = p {
                if v != u {
                    if let Some(k) = merged_kind(ku, d.kind(v).expect("linked"), green) {
                        found = Some((u, v, k));
                        break 'outer;
                    }
                }
            }
        }
    }
    let Some((u, v, kind)) = found else {
        return false;
    };
    merge(d, u, v, kind);
    true
}

/// Replaces `u` and `v` by one vertex of `kind` carrying all legs not shared between them.
fn merge(d: &mut Diagram, u: VertexId, v: VertexId, kind: VertexKind) {
    let mut ins = Vec::new();
    let mut outs = Vec::new();
    let mut shared = 0;
    for x in [u, v] {
        let (n, _) = d.kind(x).expect("exists").io();
        for (l, p) in d.neighbours(x).into_iter().enumerate() {
            let p = p.expect("valid diagram");
            let other = if x == u { v } else { u };
            if matches!(p, Port::Leg(y, _) if y == other) {
                shared += 1;
                continue;
            }
            if l < n { ins.push(Port::Leg(x, l)) } else { outs.push(Port::Leg(x, l)) }
        }
    }
    let shared = shared / 2;
    let kept: Vec<Port> = ins.iter().chain(outs.iter()).copied().collect();
    let partners: Vec<Port> = kept.iter().map(|p| d.partner(*p).expect("valid")).collect();
    let kind = match kind {
        VertexKind::GreenBox { label, .. } => VertexKind::green(label, ins.len(), outs.len()),
        VertexKind::Pink { tau, .. } => {
            d.mul_sqrt2(2 * (shared - 1));
            VertexKind::pink(tau, ins.len(), outs.len())
        }
        other => other,
    };
    d.remove_vertex(u).expect("exists");
    d.remove_vertex(v).expect("exists");
    let w = d.add_vertex(kind);
    let index: BTreeMap<Port, usize> = kept.iter().enumerate().map(|(i, p)| (*p, i)).collect();
    for (i, q) in partners.iter().enumerate() {
        match index.get(q) {
            Some(j) if *j > i => d.connect(Port::Leg(w, i), Port::Leg(w, *j)).expect("fresh"),
            Some(_) => {}
            None => d.connect(Port::Leg(w, i), *q).expect("fresh"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interp::evaluate;
    use crate::label::{Binding, C64};
    use crate::notation::*;

    #[test]
    fn fuses_green_chain() {
        let d = chain(&[
            gbox(C64::new(2.0, 0.0), 1, 1),
            gbox(C64::new(0.0, 3.0), 1, 1),
            hadamard(),
            hadamard(),
        ])
        .unwrap();
        let s = simplify(&d);
        assert_eq!(s.vertex_count(), 1);
        let b = Binding::new();
        assert!(evaluate(&s, &b).unwrap().approx_eq(&evaluate(&d, &b).unwrap(), 1e-14));
    }

    #[test]
    fn pink_double_edge_scalar() {
        let mut d = Diagram::new(1, 1);
        let a = d.add_vertex(VertexKind::pink(Tau::Pi, 1, 2));
        let b = d.add_vertex(VertexKind::pink(Tau::Zero, 2, 1));
        d.connect(Port::Input(0), Port::Leg(a, 0)).unwrap();
        d.connect(Port::Leg(a, 1), Port::Leg(b, 0)).unwrap();
        d.connect(Port::Leg(a, 2), Port::Leg(b, 1)).unwrap();
        d.connect(Port::Leg(b, 2), Port::Output(0)).unwrap();
        let s = simplify(&d);
        assert_eq!(s.vertex_count(), 1);
        assert_eq!(s.sqrt2_power(), 2);
        let bd = Binding::new();
        assert!(evaluate(&s, &bd).unwrap().approx_eq(&evaluate(&d, &bd).unwrap(), 1e-14));
    }

    #[test]
    fn identity_self_loop() {
        let s = simplify(&cap().then(&pink(Tau::Zero, 2, 0)).unwrap());
        assert_eq!(s.vertex_count(), 0);
        assert_eq!(s.sqrt2_power(), 2);
    }

    #[test]
    fn idempotent() {
        let d = chain(&[cnot(), cz(), cnot()]).unwrap();
        let s = simplify(&d);
        assert_eq!(simplify(&s), s);
    }
}
