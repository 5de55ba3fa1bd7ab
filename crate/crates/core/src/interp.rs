//! Standard interpretation of diagrams by dense tensor-network contraction.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use crate::diagram::{Diagram, Port, VertexKind};
use crate::error::{Result, ZxError};
use crate::label::{Binding, C64, ONE, ZERO};
use crate::tensor::Tensor;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EvalOptions {
    /// Largest rank any tensor may reach during contraction.
    pub max_wires: usize,
    /// Break cost ties towards the highest node ids instead of the lowest.
    pub reverse_ties: bool,
}

impl Default for EvalOptions {
    fn default() -> Self {
        EvalOptions {
            max_wires: 26,
            reverse_ties: false,
        }
    }
}

/// The pairwise contraction sequence chosen for a diagram.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContractionPlan {
    /// Node identifiers merged at each step; the result keeps the smaller one.
    pub steps: Vec<(usize, usize)>,
    /// Largest number of internal legs held by a tensor produced by a contraction step.
    pub max_rank: usize,
}

/// `sqrt(2)^p`.
pub fn sqrt2_pow(p: i32) -> f64 {
    let base = 2f64.powi(p.div_euclid(2));
    if p.rem_euclid(2) == 1 { base * core::f64::consts::SQRT_2 } else { base }
}

/// Entries of a generator, indexed by its legs with leg 0 most significant.
pub fn vertex_tensor(kind: &VertexKind, binding: &Binding) -> Result<Vec<C64>> {
    let r = kind.arity();
    let mut v = vec![ZERO; 1 << r];
    match kind {
        VertexKind::GreenBox { label, .. } => {
            let a = label.value(binding)?;
            v[0] += ONE;
            v[(1 << r) - 1] += a;
        }
        VertexKind::Pink { tau, .. } => {
            for (idx, x) in v.iter_mut().enumerate() {
                if (idx.count_ones() as usize) % 2 == tau.bit() {
                    *x = ONE;
                }
            }
        }
        VertexKind::Hadamard => {
            let s = core::f64::consts::FRAC_1_SQRT_2;
            v = vec![C64::new(s, 0.0), C64::new(s, 0.0), C64::new(s, 0.0), C64::new(-s, 0.0)];
        }
        VertexKind::Triangle => {
            v = vec![ONE, ZERO, ONE, ONE];
        }
        VertexKind::TriangleInverse => {
            v = vec![ONE, ZERO, -ONE, ONE];
        }
        VertexKind::W { outputs } => {
            let m = *outputs;
            v[0] = ONE;
            for t in 0..m {
                v[(1 << m) | (1 << t)] = ONE;
            }
        }
    }
    Ok(v)
}

struct Node {
    id: usize,
    labels: Vec<usize>,
    data: Vec<C64>,
}

/// Sums over repeated labels of a single tensor.
fn self_trace(labels: Vec<usize>, data: Vec<C64>) -> (Vec<usize>, Vec<C64>) {
    let r = labels.len();
    let mut pairs = Vec::new();
    let mut keep = Vec::new();
    for (p, l) in labels.iter().enumerate() {
        match labels.iter().position(|x| x == l) {
            Some(q) if q < p => pairs.push((q, p)),
            _ => {}
        }
    }
    for (p, l) in labels.iter().enumerate() {
        if labels.iter().filter(|x| *x == l).count() == 1 {
            keep.push(p);
        }
    }
    if pairs.is_empty() {
        return (labels, data);
    }
    let bit = |idx: usize, p: usize| (idx >> (r - 1 - p)) & 1;
    let k = keep.len();
    let mut out = vec![ZERO; 1 << k];
    for (idx, z) in data.iter().enumerate() {
        if pairs.iter().all(|(a, b)| bit(idx, *a) == bit(idx, *b)) {
            let mut o = 0;
            for (i, p) in keep.iter().enumerate() {
                o |= bit(idx, *p) << (k - 1 - i);
            }
            out[o] += z;
        }
    }
    (keep.iter().map(|p| labels[*p]).collect(), out)
}

/// Reorders tensor axes from `from` to `to`, which must be permutations of each other.
fn permute(data: &[C64], from: &[usize], to: &[usize]) -> Vec<C64> {
    if from == to {
        return data.to_vec();
    }
    let r = from.len();
    let src: Vec<usize> = to
        .iter()
        .map(|l| from.iter().position(|x| x == l).expect("label present"))
        .collect();
    let mut out = vec![ZERO; data.len()];
    for (new_idx, slot) in out.iter_mut().enumerate() {
        let mut old = 0;
        for (p, q) in src.iter().enumerate() {
            old |= ((new_idx >> (r - 1 - p)) & 1) << (r - 1 - q);
        }
        *slot = data[old];
    }
    out
}

fn contract(a: &Node, b: &Node) -> Node {
    let shared: Vec<usize> = a.labels.iter().copied().filter(|l| b.labels.contains(l)).collect();
    let fa: Vec<usize> = a.labels.iter().copied().filter(|l| !shared.contains(l)).collect();
    let fb: Vec<usize> = b.labels.iter().copied().filter(|l| !shared.contains(l)).collect();
    let mut la = fa.clone();
    la.extend(&shared);
    let mut lb = shared.clone();
    lb.extend(&fb);
    let ma = permute(&a.data, &a.labels, &la);
    let mb = permute(&b.data, &b.labels, &lb);
    let (r, k, c) = (1usize << fa.len(), 1usize << shared.len(), 1usize << fb.len());
    let mut out = vec![ZERO; r * c];
    for i in 0..r {
        for t in 0..k {
            let x = ma[i * k + t];
            if x == ZERO {
                continue;
            }
            let row = &mb[t * c..(t + 1) * c];
            for (o, y) in out[i * c..(i + 1) * c].iter_mut().zip(row) {
                *o += x * y;
            }
        }
    }
    let mut labels = fa;
    labels.extend(fb);
    Node {
        id: a.id.min(b.id),
        labels,
        data: out,
    }
}

struct Network {
    nodes: Vec<Node>,
    n_open: usize,
}

fn build(d: &Diagram, binding: Option<&Binding>, opts: &EvalOptions) -> Result<Network> {
    d.validate()?;
    let n_out = d.n_outputs();
    let n_open = n_out + d.n_inputs();
    let open = |p: Port| match p {
        Port::Output(j) => j,
        Port::Input(i) => n_out + i,
        Port::Leg(..) => unreachable!(),
    };
    let mut leg_label: BTreeMap<Port, usize> = BTreeMap::new();
    let mut next = n_open;
    let mut deltas = Vec::new();
    for (a, b) in d.edges() {
        match (a.is_boundary(), b.is_boundary()) {
            (false, false) => {
                leg_label.insert(a, next);
                leg_label.insert(b, next);
                next += 1;
            }
            (false, true) => {
                leg_label.insert(a, open(b));
            }
            (true, false) => {
                leg_label.insert(b, open(a));
            }
            (true, true) => deltas.push((open(a), open(b))),
        }
    }
    let mut nodes = Vec::new();
    let mut max_id = 0;
    let empty = Binding::new();
    for (v, kind) in d.vertices() {
        if kind.arity() > opts.max_wires {
            return Err(ZxError::TooLarge {
                wires: kind.arity(),
                limit: opts.max_wires,
            });
        }
        let labels: Vec<usize> = (0..kind.arity()).map(|l| leg_label[&Port::Leg(v, l)]).collect();
        let data = match binding {
            Some(b) => vertex_tensor(kind, b)?,
            None => match vertex_tensor(kind, &empty) {
                Ok(x) => x,
                Err(_) => vec![ZERO; 1 << kind.arity()],
            },
        };
        let (labels, data) = self_trace(labels, data);
        nodes.push(Node { id: v.0, labels, data });
        max_id = max_id.max(v.0 + 1);
    }
    for (k, (a, b)) in deltas.into_iter().enumerate() {
        nodes.push(Node {
            id: max_id + k,
            labels: vec![a, b],
            data: vec![ONE, ZERO, ZERO, ONE],
        });
    }
    Ok(Network { nodes, n_open })
}

/// Runs the greedy contraction, returning the plan and, if `numeric`, the final node.
fn run(mut net: Network, opts: &EvalOptions, numeric: bool) -> Result<(ContractionPlan, Option<Node>)> {
    let mut plan = ContractionPlan {
        steps: Vec::new(),
        max_rank: 0,
    };
    let internal = |labels: &[usize]| labels.iter().filter(|l| **l >= net.n_open).count();
    while net.nodes.len() > 1 {
        let mut owner: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (i, n) in net.nodes.iter().enumerate() {
            for l in &n.labels {
                owner.entry(*l).or_default().push(i);
            }
        }
        let mut best: Option<(f64, (usize, usize), (usize, usize), usize)> = None;
        for owners in owner.values() {
            if owners.len() != 2 {
                continue;
            }
            let (i, j) = (owners[0], owners[1]);
            let (a, b) = (&net.nodes[i], &net.nodes[j]);
            let shared = a.labels.iter().filter(|l| b.labels.contains(l)).count();
            let r = a.labels.len() + b.labels.len() - 2 * shared;
            let cost = 2f64.powi(r as i32) - 2f64.powi(a.labels.len() as i32) - 2f64.powi(b.labels.len() as i32);
            let key = (a.id.min(b.id), a.id.max(b.id));
            let better = match &best {
                None => true,
                Some((c, k, _, _)) => {
                    cost < *c || (cost == *c && if opts.reverse_ties { key > *k } else { key < *k })
                }
            };
            if better {
                best = Some((cost, key, (i, j), r));
            }
        }
        let (i, j, r) = match best {
            Some((_, _, (i, j), r)) => (i, j, r),
            None => {
                // Disconnected pieces: take an outer product of the two extreme ids.
                let mut idx: Vec<usize> = (0..net.nodes.len()).collect();
                idx.sort_by_key(|k| net.nodes[*k].id);
                if opts.reverse_ties {
                    idx.reverse();
                }
                let (i, j) = (idx[0], idx[1]);
                (i, j, net.nodes[i].labels.len() + net.nodes[j].labels.len())
            }
        };
        if r > opts.max_wires {
            return Err(ZxError::TooLarge {
                wires: r,
                limit: opts.max_wires,
            });
        }
        let (hi, lo) = if i > j { (i, j) } else { (j, i) };
        let b = net.nodes.swap_remove(hi);
        let a = net.nodes.swap_remove(lo);
        let (first, second) = if a.id < b.id { (a, b) } else { (b, a) };
        plan.steps.push((first.id, second.id));
        let merged = if numeric {
            contract(&first, &second)
        } else {
            let mut labels: Vec<usize> = first.labels.iter().copied().filter(|l| !second.labels.contains(l)).collect();
            labels.extend(second.labels.iter().copied().filter(|l| !first.labels.contains(l)));
            Node {
                id: first.id,
                labels,
                data: Vec::new(),
            }
        };
        plan.max_rank = plan.max_rank.max(internal(&merged.labels));
        net.nodes.push(merged);
    }
    Ok((plan, net.nodes.pop()))
}

/// The contraction order the evaluator would use, without doing the arithmetic.
pub fn contraction_order(d: &Diagram, opts: &EvalOptions) -> Result<ContractionPlan> {
    let net = build(d, None, opts)?;
    Ok(run(net, opts, false)?.0)
}

pub fn evaluate(d: &Diagram, binding: &Binding) -> Result<Tensor> {
    evaluate_with(d, binding, &EvalOptions::default())
}

pub fn evaluate_with(d: &Diagram, binding: &Binding, opts: &EvalOptions) -> Result<Tensor> {
    let n_open = d.n_inputs() + d.n_outputs();
    if n_open > opts.max_wires {
        return Err(ZxError::TooLarge {
            wires: n_open,
            limit: opts.max_wires,
        });
    }
    let net = build(d, Some(binding), opts)?;
    let (_, node) = run(net, opts, true)?;
    let node = node.unwrap_or(Node {
        id: 0,
        labels: Vec::new(),
        data: vec![ONE],
    });
    let target: Vec<usize> = (0..n_open).collect();
    let data = permute(&node.data, &node.labels, &target);
    let s = sqrt2_pow(d.sqrt2_power());
    let data = data.into_iter().map(|z| z * s).collect();
    Ok(Tensor::from_data(d.n_inputs(), d.n_outputs(), data))
}

/// Evaluates a diagram without open wires to a complex number.
pub fn evaluate_scalar(d: &Diagram, binding: &Binding) -> Result<C64> {
    if d.n_inputs() + d.n_outputs() != 0 {
        return Err(ZxError::ShapeMismatch("expected a scalar diagram".into()));
    }
    Ok(evaluate(d, binding)?.data()[0])
}
