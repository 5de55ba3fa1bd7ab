//! Open graphs of generators with ordered input and output boundaries.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Result, ZxError};
use crate::label::Label;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexId(pub usize);

/// An attachment point: a boundary slot or a numbered leg of a vertex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Port {
    Input(usize),
    Output(usize),
    Leg(VertexId, usize),
}

impl Port {
    pub fn is_boundary(&self) -> bool {
        !matches!(self, Port::Leg(..))
    }
}

/// Phase of a pink spider, either 0 or pi.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Tau {
    Zero,
    Pi,
}

impl Tau {
    pub fn bit(self) -> usize {
        match self {
            Tau::Zero => 0,
            Tau::Pi => 1,
        }
    }

    pub fn from_bit(b: usize) -> Tau {
        if b % 2 == 0 { Tau::Zero } else { Tau::Pi }
    }

    pub fn add(self, other: Tau) -> Tau {
        Tau::from_bit(self.bit() + other.bit())
    }
}

/// A generator. Legs are numbered inputs first, then outputs.
///
/// The triangle and its inverse have leg 0 as input and leg 1 as output.
/// The W spider has its head on leg 0 and `outputs` tail legs after it.
#[derive(Clone, Debug, PartialEq)]
pub enum VertexKind {
    GreenBox {
        label: Label,
        inputs: usize,
        outputs: usize,
    },
    Pink {
        tau: Tau,
        inputs: usize,
        outputs: usize,
    },
    Hadamard,
    Triangle,
    TriangleInverse,
    W {
        outputs: usize,
    },
}

impl VertexKind {
    pub fn green(label: Label, inputs: usize, outputs: usize) -> Self {
        VertexKind::GreenBox {
            label,
            inputs,
            outputs,
        }
    }

    pub fn pink(tau: Tau, inputs: usize, outputs: usize) -> Self {
        VertexKind::Pink {
            tau,
            inputs,
            outputs,
        }
    }

    /// Number of input legs and output legs.
    pub fn io(&self) -> (usize, usize) {
        match self {
            VertexKind::GreenBox {
                inputs, outputs, ..
            }
            | VertexKind::Pink {
                inputs, outputs, ..
            } => (*inputs, *outputs),
            VertexKind::Hadamard | VertexKind::Triangle | VertexKind::TriangleInverse => (1, 1),
            VertexKind::W { outputs } => (1, *outputs),
        }
    }

    pub fn arity(&self) -> usize {
        let (a, b) = self.io();
        a + b
    }

    pub fn label(&self) -> Option<&Label> {
        match self {
            VertexKind::GreenBox { label, .. } => Some(label),
            _ => None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            VertexKind::W { outputs } if *outputs == 0 => {
                Err(ZxError::InvalidKind("W spider needs at least one tail".into()))
            }
            VertexKind::GreenBox {
                label: Label::Phase(p),
                ..
            } if p.k == 0 => Err(ZxError::InvalidKind("phase coefficient k must be nonzero".into())),
            _ => Ok(()),
        }
    }

    /// Kind after exchanging the roles of inputs and outputs, and the leg permutation
    /// sending each old leg to its new index.
    fn flipped(&self) -> (VertexKind, Vec<usize>) {
        match self {
            VertexKind::GreenBox {
                label,
                inputs,
                outputs,
            } => (
                VertexKind::green(label.clone(), *outputs, *inputs),
                flip_legs(*inputs, *outputs),
            ),
            VertexKind::Pink {
                tau,
                inputs,
                outputs,
            } => (
                VertexKind::pink(*tau, *outputs, *inputs),
                flip_legs(*inputs, *outputs),
            ),
            other => (other.clone(), (0..other.arity()).collect()),
        }
    }
}

fn flip_legs(n: usize, m: usize) -> Vec<usize> {
    (0..n + m).map(|l| if l < n { m + l } else { l - n }).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum End {
    P(Port),
    J(usize),
}

/// An open ZX diagram with an exact scalar factor `sqrt(2)^sqrt2_power`.
#[derive(Clone, Debug)]
pub struct Diagram {
    vertices: BTreeMap<VertexId, VertexKind>,
    links: BTreeMap<Port, Port>,
    n_inputs: usize,
    n_outputs: usize,
    sqrt2_power: i32,
    next_id: usize,
}

impl PartialEq for Diagram {
    fn eq(&self, other: &Self) -> bool {
        self.vertices == other.vertices
            && self.links == other.links
            && self.n_inputs == other.n_inputs
            && self.n_outputs == other.n_outputs
            && self.sqrt2_power == other.sqrt2_power
    }
}

impl Diagram {
    /// A diagram with the given boundary and nothing attached yet.
    pub fn new(n_inputs: usize, n_outputs: usize) -> Self {
        Diagram {
            vertices: BTreeMap::new(),
            links: BTreeMap::new(),
            n_inputs,
            n_outputs,
            sqrt2_power: 0,
            next_id: 0,
        }
    }

    /// The identity on `n` wires.
    pub fn identity(n: usize) -> Self {
        let mut d = Diagram::new(n, n);
        for i in 0..n {
            d.link(Port::Input(i), Port::Output(i));
        }
        d
    }

    /// The generator-free diagram of the given type; only square types exist.
    pub fn empty(n_inputs: usize, n_outputs: usize) -> Result<Self> {
        if n_inputs != n_outputs {
            return Err(ZxError::ArityMismatch {
                expected: n_inputs,
                found: n_outputs,
            });
        }
        Ok(Diagram::identity(n_inputs))
    }

    pub fn n_inputs(&self) -> usize {
        self.n_inputs
    }

    pub fn n_outputs(&self) -> usize {
        self.n_outputs
    }

    pub fn sqrt2_power(&self) -> i32 {
        self.sqrt2_power
    }

    pub fn mul_sqrt2(&mut self, k: i32) {
        self.sqrt2_power += k;
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertices(&self) -> impl Iterator<Item = (VertexId, &VertexKind)> {
        self.vertices.iter().map(|(v, k)| (*v, k))
    }

    pub fn kind(&self, v: VertexId) -> Option<&VertexKind> {
        self.vertices.get(&v)
    }

    /// Each link once, smaller port first.
    pub fn edges(&self) -> impl Iterator<Item = (Port, Port)> + '_ {
        self.links
            .iter()
            .filter(|(a, b)| a < b)
            .map(|(a, b)| (*a, *b))
    }

    pub fn partner(&self, p: Port) -> Option<Port> {
        self.links.get(&p).copied()
    }

    /// Partners of each leg of `v`, in leg order.
    pub fn neighbours(&self, v: VertexId) -> Vec<Option<Port>> {
        let n = self.vertices.get(&v).map_or(0, |k| k.arity());
        (0..n).map(|l| self.partner(Port::Leg(v, l))).collect()
    }

    pub fn add_vertex(&mut self, kind: VertexKind) -> VertexId {
        let id = VertexId(self.next_id);
        self.next_id += 1;
        self.vertices.insert(id, kind);
        id
    }

    /// Adds a vertex under a caller-chosen identifier.
    pub fn insert_vertex(&mut self, id: VertexId, kind: VertexKind) -> Result<()> {
        if self.vertices.contains_key(&id) {
            return Err(ZxError::InvalidDiagram(format!("duplicate vertex id {}", id.0)));
        }
        self.vertices.insert(id, kind);
        self.next_id = self.next_id.max(id.0 + 1);
        Ok(())
    }

    fn check_port(&self, p: Port) -> Result<()> {
        let ok = match p {
            Port::Input(i) => i < self.n_inputs,
            Port::Output(j) => j < self.n_outputs,
            Port::Leg(v, l) => match self.vertices.get(&v) {
                Some(k) => l < k.arity(),
                None => return Err(ZxError::UnknownVertex(v)),
            },
        };
        if ok { Ok(()) } else { Err(ZxError::NoSuchPort(p)) }
    }

    fn link(&mut self, a: Port, b: Port) {
        self.links.insert(a, b);
        self.links.insert(b, a);
    }

    pub fn connect(&mut self, a: Port, b: Port) -> Result<()> {
        self.check_port(a)?;
        self.check_port(b)?;
        if a == b {
            return Err(ZxError::InvalidDiagram(format!("port {a:?} linked to itself")));
        }
        for p in [a, b] {
            if self.links.contains_key(&p) {
                return Err(ZxError::PortOccupied(p));
            }
        }
        self.link(a, b);
        Ok(())
    }

    pub fn disconnect(&mut self, p: Port) -> Option<Port> {
        let q = self.links.remove(&p)?;
        self.links.remove(&q);
        Some(q)
    }

    /// Removes `v`, returning its kind and the former partner of each leg.
    pub fn remove_vertex(&mut self, v: VertexId) -> Result<(VertexKind, Vec<Option<Port>>)> {
        let kind = self.vertices.get(&v).cloned().ok_or(ZxError::UnknownVertex(v))?;
        let partners = (0..kind.arity())
            .map(|l| self.disconnect(Port::Leg(v, l)))
            .collect();
        self.vertices.remove(&v);
        Ok((kind, partners))
    }

    /// Replaces the kind of `v` by one of equal arity.
    pub fn replace_kind(&mut self, v: VertexId, kind: VertexKind) -> Result<()> {
        let old = self.vertices.get_mut(&v).ok_or(ZxError::UnknownVertex(v))?;
        if old.arity() != kind.arity() {
            return Err(ZxError::ArityMismatch {
                expected: old.arity(),
                found: kind.arity(),
            });
        }
        *old = kind;
        Ok(())
    }

    /// Gives a green box one more output leg with the given label, returning the new port.
    pub fn extend_green(&mut self, v: VertexId, label: Label) -> Result<Port> {
        match self.vertices.get_mut(&v) {
            Some(VertexKind::GreenBox {
                label: l,
                inputs,
                outputs,
            }) => {
                *l = label;
                *outputs += 1;
                Ok(Port::Leg(v, *inputs + *outputs - 1))
            }
            Some(_) => Err(ZxError::InvalidKind(format!("{v:?} is not a green box"))),
            None => Err(ZxError::UnknownVertex(v)),
        }
    }

    pub fn push_input(&mut self) -> Port {
        self.n_inputs += 1;
        Port::Input(self.n_inputs - 1)
    }

    pub fn push_output(&mut self) -> Port {
        self.n_outputs += 1;
        Port::Output(self.n_outputs - 1)
    }

    /// Applies `f` to every green box label.
    pub fn map_labels(&mut self, mut f: impl FnMut(&Label) -> Result<Label>) -> Result<()> {
        for k in self.vertices.values_mut() {
            if let VertexKind::GreenBox { label, .. } = k {
                *label = f(label)?;
            }
        }
        Ok(())
    }

    /// Checks that every leg and boundary slot is linked exactly once.
    pub fn validate(&self) -> Result<()> {
        for (v, k) in &self.vertices {
            k.validate()?;
            for l in 0..k.arity() {
                if !self.links.contains_key(&Port::Leg(*v, l)) {
                    return Err(ZxError::InvalidDiagram(format!("dangling leg {l} of {v:?}")));
                }
            }
        }
        for i in 0..self.n_inputs {
            if !self.links.contains_key(&Port::Input(i)) {
                return Err(ZxError::InvalidDiagram(format!("input slot {i} unconnected")));
            }
        }
        for j in 0..self.n_outputs {
            if !self.links.contains_key(&Port::Output(j)) {
                return Err(ZxError::InvalidDiagram(format!("output slot {j} unconnected")));
            }
        }
        for (a, b) in &self.links {
            self.check_port(*a)?;
            if self.links.get(b) != Some(a) {
                return Err(ZxError::InvalidDiagram(format!("asymmetric link {a:?}")));
            }
        }
        Ok(())
    }

    /// Copies the vertices of `src` into `self`, pushing its links, rewritten by
    /// `boundary`, onto `edges`.
    fn absorb(
        &mut self,
        src: &Diagram,
        boundary: impl Fn(Port) -> End,
        edges: &mut Vec<(End, End)>,
    ) -> BTreeMap<VertexId, VertexId> {
        let mut map = BTreeMap::new();
        for (v, k) in &src.vertices {
            map.insert(*v, self.add_vertex(k.clone()));
        }
        let tr = |p: Port| match p {
            Port::Leg(v, l) => End::P(Port::Leg(map[&v], l)),
            b => boundary(b),
        };
        for (a, b) in src.edges() {
            edges.push((tr(a), tr(b)));
        }
        self.sqrt2_power += src.sqrt2_power;
        map
    }

    /// Links the given ends, collapsing chains through junctions. Each junction
    /// must occur exactly twice; closed junction loops contribute a factor 2.
    fn splice(&mut self, edges: Vec<(End, End)>, junctions: usize) -> Result<()> {
        let mut inc: Vec<Vec<usize>> = vec![Vec::new(); junctions];
        for (e, (a, b)) in edges.iter().enumerate() {
            for x in [a, b] {
                if let End::J(j) = x {
                    inc[*j].push(e);
                }
            }
        }
        if inc.iter().any(|v| v.len() != 2) {
            return Err(ZxError::InvalidDiagram("unconnected boundary in composition".into()));
        }
        let mut used = vec![false; edges.len()];
        for start in 0..edges.len() {
            if used[start] {
                continue;
            }
            let (a, b) = edges[start];
            let (from, mut cur) = match (a, b) {
                (End::P(p), other) => (p, other),
                (other, End::P(p)) => (p, other),
                _ => continue,
            };
            used[start] = true;
            let mut e = start;
            while let End::J(j) = cur {
                let next = if inc[j][0] == e { inc[j][1] } else { inc[j][0] };
                e = next;
                used[e] = true;
                let (x, y) = edges[e];
                cur = if x == End::J(j) { y } else { x };
            }
            if let End::P(to) = cur {
                self.connect(from, to)?;
            }
        }
        // Whatever is left consists of closed loops of plain wire.
        let mut loops = 0;
        for start in 0..edges.len() {
            if used[start] {
                continue;
            }
            loops += 1;
            let mut e = start;
            let mut cur = edges[e].1;
            used[e] = true;
            while let End::J(j) = cur {
                let next = if inc[j][0] == e { inc[j][1] } else { inc[j][0] };
                if used[next] {
                    break;
                }
                e = next;
                used[e] = true;
                let (x, y) = edges[e];
                cur = if x == End::J(j) { y } else { x };
            }
        }
        self.sqrt2_power += 2 * loops;
        Ok(())
    }

    /// Sequential composition: `self` first, then `next`.
    pub fn then(&self, next: &Diagram) -> Result<Diagram> {
        if self.n_outputs != next.n_inputs {
            return Err(ZxError::ArityMismatch {
                expected: self.n_outputs,
                found: next.n_inputs,
            });
        }
        let mut r = Diagram::new(self.n_inputs, next.n_outputs);
        let mut edges = Vec::new();
        r.absorb(
            self,
            |p| match p {
                Port::Output(j) => End::J(j),
                p => End::P(p),
            },
            &mut edges,
        );
        r.absorb(
            next,
            |p| match p {
                Port::Input(i) => End::J(i),
                p => End::P(p),
            },
            &mut edges,
        );
        r.splice(edges, self.n_outputs)?;
        Ok(r)
    }

    /// Parallel composition with `other` placed below `self`.
    pub fn tensor(&self, other: &Diagram) -> Diagram {
        let mut r = Diagram::new(self.n_inputs + other.n_inputs, self.n_outputs + other.n_outputs);
        let mut edges = Vec::new();
        r.absorb(self, End::P, &mut edges);
        let (ni, no) = (self.n_inputs, self.n_outputs);
        r.absorb(
            other,
            move |p| match p {
                Port::Input(i) => End::P(Port::Input(i + ni)),
                Port::Output(j) => End::P(Port::Output(j + no)),
                p => End::P(p),
            },
            &mut edges,
        );
        r.splice(edges, 0).expect("disjoint union cannot clash");
        r
    }

    /// Inserts `sub`, linking its input slot `i` to `inputs[i]` and its output slot `j`
    /// to `outputs[j]`. The host ports must be free. Returns the vertex renaming.
    pub fn embed(
        &mut self,
        sub: &Diagram,
        inputs: &[Port],
        outputs: &[Port],
    ) -> Result<BTreeMap<VertexId, VertexId>> {
        if inputs.len() != sub.n_inputs {
            return Err(ZxError::ArityMismatch {
                expected: sub.n_inputs,
                found: inputs.len(),
            });
        }
        if outputs.len() != sub.n_outputs {
            return Err(ZxError::ArityMismatch {
                expected: sub.n_outputs,
                found: outputs.len(),
            });
        }
        let mut edges = Vec::new();
        let map = self.absorb(
            sub,
            |p| match p {
                Port::Input(i) => End::P(inputs[i]),
                Port::Output(j) => End::P(outputs[j]),
                p => End::P(p),
            },
            &mut edges,
        );
        self.splice(edges, 0)?;
        Ok(map)
    }

    /// Feeds output slot `output` back into input slot `input`.
    pub fn partial_trace(&self, input: usize, output: usize) -> Result<Diagram> {
        self.check_port(Port::Input(input))?;
        self.check_port(Port::Output(output))?;
        let mut r = Diagram::new(self.n_inputs - 1, self.n_outputs - 1);
        let mut edges = Vec::new();
        r.absorb(
            self,
            |p| match p {
                Port::Input(i) if i == input => End::J(0),
                Port::Input(i) if i > input => End::P(Port::Input(i - 1)),
                Port::Output(j) if j == output => End::J(0),
                Port::Output(j) if j > output => End::P(Port::Output(j - 1)),
                p => End::P(p),
            },
            &mut edges,
        );
        r.splice(edges, 1)?;
        Ok(r)
    }

    fn flip(&self, conjugate: bool) -> Result<Diagram> {
        let mut r = Diagram::new(self.n_outputs, self.n_inputs);
        r.sqrt2_power = self.sqrt2_power;
        r.next_id = self.next_id;
        let mut perms = BTreeMap::new();
        for (v, k) in &self.vertices {
            let (mut nk, perm) = k.flipped();
            if conjugate {
                if let VertexKind::GreenBox { label, .. } = &mut nk {
                    *label = label.conj()?;
                }
            }
            r.vertices.insert(*v, nk);
            perms.insert(*v, perm);
        }
        let tr = |p: Port| match p {
            Port::Input(i) => Port::Output(i),
            Port::Output(j) => Port::Input(j),
            Port::Leg(v, l) => Port::Leg(v, perms[&v][l]),
        };
        for (a, b) in &self.links {
            r.links.insert(tr(*a), tr(*b));
        }
        Ok(r)
    }

    /// The vertical mirror image, whose matrix is the transpose.
    pub fn transpose(&self) -> Diagram {
        self.flip(false).expect("transpose never conjugates")
    }

    /// Conjugate transpose. Fails for function labels without a conjugate.
    pub fn dagger(&self) -> Result<Diagram> {
        self.flip(true)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h() -> Diagram {
        let mut d = Diagram::new(1, 1);
        let v = d.add_vertex(VertexKind::Hadamard);
        d.connect(Port::Input(0), Port::Leg(v, 0)).unwrap();
        d.connect(Port::Leg(v, 1), Port::Output(0)).unwrap();
        d
    }

    #[test]
    fn empty_requires_square() {
        assert!(Diagram::empty(1, 2).is_err());
        assert_eq!(Diagram::empty(2, 2).unwrap().edges().count(), 2);
    }

    #[test]
    fn connect_rejects_reuse() {
        let mut d = Diagram::new(1, 1);
        let v = d.add_vertex(VertexKind::Hadamard);
        d.connect(Port::Input(0), Port::Leg(v, 0)).unwrap();
        assert_eq!(
            d.connect(Port::Leg(v, 0), Port::Output(0)),
            Err(ZxError::PortOccupied(Port::Leg(v, 0)))
        );
        assert!(d.connect(Port::Leg(v, 5), Port::Output(0)).is_err());
        assert!(d.validate().is_err());
    }

    #[test]
    fn compose_counts() {
        let d = h().then(&h()).unwrap();
        assert_eq!(d.vertex_count(), 2);
        d.validate().unwrap();
        let p = h().tensor(&h());
        assert_eq!((p.n_inputs(), p.n_outputs()), (2, 2));
        p.validate().unwrap();
        assert!(h().then(&p).is_err());
    }

    #[test]
    fn cap_then_cup_is_loop() {
        let mut cap = Diagram::new(0, 2);
        cap.connect(Port::Output(0), Port::Output(1)).unwrap();
        let mut cup = Diagram::new(2, 0);
        cup.connect(Port::Input(0), Port::Input(1)).unwrap();
        let s = cap.then(&cup).unwrap();
        assert_eq!(s.sqrt2_power(), 2);
        assert_eq!(s.edges().count(), 0);
    }

    #[test]
    fn trace_of_identity() {
        let t = Diagram::identity(2).partial_trace(1, 1).unwrap();
        assert_eq!(t.sqrt2_power(), 2);
        assert_eq!(t, {
            let mut d = Diagram::identity(1);
            d.mul_sqrt2(2);
            d
        });
    }

    #[test]
    fn dagger_involution() {
        let mut d = Diagram::new(1, 2);
        let v = d.add_vertex(VertexKind::green(Label::Const(crate::label::I), 1, 2));
        d.connect(Port::Input(0), Port::Leg(v, 0)).unwrap();
        d.connect(Port::Leg(v, 1), Port::Output(0)).unwrap();
        d.connect(Port::Leg(v, 2), Port::Output(1)).unwrap();
        let dd = d.dagger().unwrap();
        assert_eq!((dd.n_inputs(), dd.n_outputs()), (2, 1));
        dd.validate().unwrap();
        assert_eq!(dd.dagger().unwrap(), d);
        assert_eq!(d.transpose().transpose(), d);
    }
}
