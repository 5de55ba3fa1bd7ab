//! Gradient statistics of parameterised circuits, computed by differentiating and
//! averaging expectation-value diagrams.

#[allow(unused_imports)]
use num_traits::Float;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::diagram::{Diagram, Port, Tau, VertexKind};
use crate::diff::{differentiate, occurrences};
use crate::error::{Result, ZxError};
use crate::integrate::{integrate_all, weight_class_gadget};
use crate::interp::{evaluate, evaluate_scalar};
use crate::label::{Binding, Label, Param, C64, I, ONE};
use crate::notation::{gbox_real, pink, scalar, tensor_all};
use crate::statevec;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

/// A tensor product of Paulis, one per qubit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PauliString(pub Vec<Pauli>);

impl PauliString {
    pub fn parse(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| match c.to_ascii_uppercase() {
                'I' => Ok(Pauli::I),
                'X' => Ok(Pauli::X),
                'Y' => Ok(Pauli::Y),
                'Z' => Ok(Pauli::Z),
                other => Err(ZxError::InvalidAnsatz(format!("unknown Pauli `{other}`"))),
            })
            .collect::<Result<Vec<_>>>()
            .map(PauliString)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// The observable as a diagram on `len()` wires.
    pub fn diagram(&self) -> Diagram {
        let wires: Vec<Diagram> = self
            .0
            .iter()
            .map(|p| match p {
                Pauli::I => Diagram::identity(1),
                Pauli::Z => gbox_real(-1.0, 1, 1),
                Pauli::X => pink(Tau::Pi, 1, 1),
                Pauli::Y => gbox_real(-1.0, 1, 1)
                    .then(&pink(Tau::Pi, 1, 1))
                    .expect("single wires")
                    .tensor(&scalar(I)),
            })
            .collect();
        tensor_all(&wires)
    }
}

impl core::fmt::Display for PauliString {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        for p in &self.0 {
            let c = match p {
                Pauli::I => 'I',
                Pauli::X => 'X',
                Pauli::Y => 'Y',
                Pauli::Z => 'Z',
            };
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

/// A real combination of Pauli strings.
#[derive(Clone, Debug, PartialEq)]
pub struct PauliHamiltonian {
    pub terms: Vec<(f64, PauliString)>,
}

impl PauliHamiltonian {
    pub fn single(p: PauliString) -> Self {
        PauliHamiltonian {
            terms: vec![(1.0, p)],
        }
    }

    /// `Z` on every one of `n` qubits.
    pub fn all_z(n: usize) -> Self {
        Self::single(PauliString(vec![Pauli::Z; n]))
    }

    /// Parses sums such as `ZZ`, `0.5*XZ+0.3*ZZ` or `-XY + 2*ZI`.
    pub fn parse(s: &str) -> Result<Self> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(ZxError::InvalidAnsatz("empty Hamiltonian".into()));
        }
        let mut terms = Vec::new();
        let mut start = 0;
        let bytes = compact.as_bytes();
        let mut pieces = Vec::new();
        for i in 1..bytes.len() {
            let prev = bytes[i - 1];
            if (bytes[i] == b'+' || bytes[i] == b'-') && prev != b'e' && prev != b'E' && prev != b'*' {
                pieces.push(&compact[start..i]);
                start = i;
            }
        }
        pieces.push(&compact[start..]);
        for piece in pieces {
            let (sign, body) = match piece.as_bytes().first() {
                Some(b'+') => (1.0, &piece[1..]),
                Some(b'-') => (-1.0, &piece[1..]),
                _ => (1.0, piece),
            };
            let (w, p) = match body.split_once('*') {
                Some((c, p)) => (
                    c.parse::<f64>()
                        .map_err(|_| ZxError::InvalidAnsatz(format!("bad coefficient `{c}`")))?,
                    p,
                ),
                None => (1.0, body),
            };
            if p.is_empty() {
                return Err(ZxError::InvalidAnsatz(format!("missing Pauli string in `{piece}`")));
            }
            terms.push((sign * w, PauliString::parse(p)?));
        }
        let n = terms[0].1.len();
        if terms.iter().any(|(_, p)| p.len() != n) {
            return Err(ZxError::InvalidAnsatz("Pauli strings differ in length".into()));
        }
        Ok(PauliHamiltonian { terms })
    }

    pub fn n_qubits(&self) -> usize {
        self.terms.first().map_or(0, |(_, p)| p.len())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Gate {
    /// `diag(1, exp(i theta))`.
    Rz(usize, Param),
    /// `H Rz(theta) H`.
    Rx(usize, Param),
    RzFixed(usize, f64),
    RxFixed(usize, f64),
    H(usize),
    Cnot(usize, usize),
    Cz(usize, usize),
}

impl Gate {
    pub fn qubits(&self) -> Vec<usize> {
        match self {
            Gate::Rz(q, _) | Gate::Rx(q, _) | Gate::RzFixed(q, _) | Gate::RxFixed(q, _) | Gate::H(q) => {
                vec![*q]
            }
            Gate::Cnot(a, b) | Gate::Cz(a, b) => vec![*a, *b],
        }
    }

    pub fn param(&self) -> Option<&Param> {
        match self {
            Gate::Rz(_, p) | Gate::Rx(_, p) => Some(p),
            _ => None,
        }
    }
}

/// A circuit in which every parameter drives exactly one rotation.
#[derive(Clone, Debug, PartialEq)]
pub struct Ansatz {
    n_qubits: usize,
    gates: Vec<Gate>,
}

impl Ansatz {
    pub fn new(n_qubits: usize, gates: Vec<Gate>) -> Result<Self> {
        let a = Ansatz { n_qubits, gates };
        a.validate()?;
        Ok(a)
    }

    fn validate(&self) -> Result<()> {
        if self.n_qubits == 0 {
            return Err(ZxError::InvalidAnsatz("no qubits".into()));
        }
        let mut seen: Vec<&Param> = Vec::new();
        for g in &self.gates {
            let qs = g.qubits();
            for q in &qs {
                if *q >= self.n_qubits {
                    return Err(ZxError::BadQubitIndex {
                        index: *q,
                        qubits: self.n_qubits,
                    });
                }
            }
            if qs.len() == 2 && qs[0] == qs[1] {
                return Err(ZxError::InvalidAnsatz(format!("two-qubit gate on a single qubit {}", qs[0])));
            }
            if let Some(p) = g.param() {
                if seen.contains(&p) {
                    return Err(ZxError::InvalidAnsatz(format!("parameter `{p}` drives more than one gate")));
                }
                seen.push(p);
            }
        }
        Ok(())
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    /// Parameters in order of first appearance.
    pub fn params(&self) -> Vec<Param> {
        self.gates.iter().filter_map(|g| g.param().cloned()).collect()
    }
}

/// Hadamards, a line of controlled-Z gates, then one X rotation per qubit.
pub fn sim9(n: usize) -> Result<Ansatz> {
    let mut gates: Vec<Gate> = (0..n).map(Gate::H).collect();
    gates.extend((0..n.saturating_sub(1)).map(|i| Gate::Cz(i, i + 1)));
    gates.extend((0..n).map(|q| Gate::Rx(q, Param::new(format!("theta{}", q + 1)))));
    Ansatz::new(n, gates)
}

fn link(d: &mut Diagram, cur: &mut [Port], q: usize, v: crate::diagram::VertexId, leg_in: usize, leg_out: usize) {
    d.connect(cur[q], Port::Leg(v, leg_in)).expect("free ports");
    cur[q] = Port::Leg(v, leg_out);
}

/// The circuit unitary as a diagram; rotations are green boxes with phase labels.
pub fn ansatz_to_diagram(a: &Ansatz) -> Result<Diagram> {
    let n = a.n_qubits;
    let mut d = Diagram::new(n, n);
    let mut cur: Vec<Port> = (0..n).map(Port::Input).collect();
    let phase_box = |d: &mut Diagram, l: Label| d.add_vertex(VertexKind::green(l, 1, 1));
    for g in &a.gates {
        match g {
            Gate::Rz(q, p) => {
                let v = phase_box(&mut d, Label::phase(p.clone(), 1, 0.0)?);
                link(&mut d, &mut cur, *q, v, 0, 1);
            }
            Gate::RzFixed(q, al) => {
                let v = phase_box(&mut d, Label::angle(*al));
                link(&mut d, &mut cur, *q, v, 0, 1);
            }
            Gate::Rx(_, _) | Gate::RxFixed(_, _) => {
                let (q, l) = match g {
                    Gate::Rx(q, p) => (*q, Label::phase(p.clone(), 1, 0.0)?),
                    Gate::RxFixed(q, al) => (*q, Label::angle(*al)),
                    _ => unreachable!(),
                };
                let h1 = d.add_vertex(VertexKind::Hadamard);
                link(&mut d, &mut cur, q, h1, 0, 1);
                let v = phase_box(&mut d, l);
                link(&mut d, &mut cur, q, v, 0, 1);
                let h2 = d.add_vertex(VertexKind::Hadamard);
                link(&mut d, &mut cur, q, h2, 0, 1);
            }
            Gate::H(q) => {
                let h = d.add_vertex(VertexKind::Hadamard);
                link(&mut d, &mut cur, *q, h, 0, 1);
            }
            Gate::Cnot(c, t) => {
                let gc = d.add_vertex(VertexKind::green(Label::Const(ONE), 1, 2));
                let xt = d.add_vertex(VertexKind::pink(Tau::Zero, 2, 1));
                link(&mut d, &mut cur, *c, gc, 0, 1);
                link(&mut d, &mut cur, *t, xt, 0, 2);
                d.connect(Port::Leg(gc, 2), Port::Leg(xt, 1))?;
            }
            Gate::Cz(x, y) => {
                let gx = d.add_vertex(VertexKind::green(Label::Const(ONE), 1, 2));
                let gy = d.add_vertex(VertexKind::green(Label::Const(ONE), 1, 2));
                let h = d.add_vertex(VertexKind::Hadamard);
                link(&mut d, &mut cur, *x, gx, 0, 1);
                link(&mut d, &mut cur, *y, gy, 0, 1);
                d.connect(Port::Leg(gx, 2), Port::Leg(h, 0))?;
                d.connect(Port::Leg(h, 1), Port::Leg(gy, 2))?;
                d.mul_sqrt2(1);
            }
        }
    }
    for (q, p) in cur.into_iter().enumerate() {
        d.connect(p, Port::Output(q))?;
    }
    Ok(d)
}

/// The closed diagram `<0| U^dag P U |0>`.
pub fn closed_expectation(a: &Ansatz, p: &PauliString) -> Result<Diagram> {
    if p.len() != a.n_qubits {
        return Err(ZxError::InvalidAnsatz(format!(
            "observable acts on {} qubits, circuit on {}",
            p.len(),
            a.n_qubits
        )));
    }
    let n = a.n_qubits;
    let u = ansatz_to_diagram(a)?;
    let kets = tensor_all(&vec![pink(Tau::Zero, 0, 1); n]);
    let bras = tensor_all(&vec![pink(Tau::Zero, 1, 0); n]);
    crate::notation::chain(&[kets, u.clone(), p.diagram(), u.dagger()?, bras])
}

/// One weighted observable term, with each parameter occurrence dragged to the boundary.
#[derive(Clone, Debug, PartialEq)]
pub struct ExpectationTerm {
    pub weight: f64,
    pub pauli: PauliString,
    /// No inputs; outputs `2i` and `2i + 1` carry the `+` and `-` occurrence of parameter `i`.
    pub core: Diagram,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExpectationDiagram {
    pub n_qubits: usize,
    pub params: Vec<Param>,
    pub terms: Vec<ExpectationTerm>,
}

/// Replaces the `exp(i theta)` and `exp(-i theta)` occurrence of every parameter by
/// a constant box with an extra leg, appended as outputs `(+, -)` per parameter.
pub fn drag_to_boundary(mut d: Diagram, params: &[Param]) -> Result<Diagram> {
    for p in params {
        let occ = occurrences(&d, p.as_str());
        let mut plus = None;
        let mut minus = None;
        for v in &occ {
            match d.kind(*v).and_then(|k| k.label()) {
                Some(Label::Phase(ph)) if ph.k == 1 && plus.is_none() => plus = Some((*v, ph.c)),
                Some(Label::Phase(ph)) if ph.k == -1 && minus.is_none() => minus = Some((*v, ph.c)),
                _ => return Err(ZxError::FusionObstruction(p.to_string())),
            }
        }
        let (Some(pl), Some(mi)) = (plus, minus) else {
            return Err(ZxError::FusionObstruction(p.to_string()));
        };
        for (v, c) in [pl, mi] {
            let (n, m) = d.kind(v).expect("listed").io();
            d.replace_kind(v, VertexKind::green(Label::angle(c), n, m))?;
            let leg = d.extend_green(v, Label::angle(c))?;
            let out = d.push_output();
            d.connect(leg, out)?;
        }
    }
    Ok(d)
}

pub fn expectation_diagram(a: &Ansatz, h: &PauliHamiltonian) -> Result<ExpectationDiagram> {
    let params = a.params();
    let terms = h
        .terms
        .iter()
        .map(|(w, p)| {
            Ok(ExpectationTerm {
                weight: *w,
                pauli: p.clone(),
                core: drag_to_boundary(closed_expectation(a, p)?, &params)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ExpectationDiagram {
        n_qubits: a.n_qubits,
        params,
        terms,
    })
}

/// One-legged effects `exp(± i theta)` closing the boundary of a core.
fn parameter_effects(params: &[Param]) -> Result<Diagram> {
    let mut parts = Vec::new();
    for p in params {
        for k in [1, -1] {
            parts.push(crate::notation::green_box(Label::phase(p.clone(), k, 0.0)?, 1, 0));
        }
    }
    Ok(tensor_all(&parts))
}

impl ExpectationDiagram {
    /// The closed, parameter-dependent diagram of term `t`.
    pub fn plugged(&self, t: usize) -> Result<Diagram> {
        self.terms[t].core.then(&parameter_effects(&self.params)?)
    }

    pub fn value(&self, b: &Binding) -> Result<f64> {
        let mut acc = 0.0;
        for t in 0..self.terms.len() {
            acc += self.terms[t].weight * evaluate_scalar(&self.plugged(t)?, b)?.re;
        }
        Ok(acc)
    }

    fn param_index(&self, param: &str) -> Result<usize> {
        self.params
            .iter()
            .position(|p| p.as_str() == param)
            .ok_or_else(|| ZxError::UnboundParameter(param.to_string()))
    }

    fn param_names(&self) -> Vec<&str> {
        self.params.iter().map(|p| p.as_str()).collect()
    }
}

/// Mean of the partial derivative over independent uniform parameters.
pub fn gradient_mean(e: &ExpectationDiagram, param: &str) -> Result<f64> {
    e.param_index(param)?;
    let names = e.param_names();
    let mut acc = 0.0;
    for t in 0..e.terms.len() {
        let d = differentiate(&e.plugged(t)?, param)?;
        let avg = integrate_all(&d, &names)?;
        acc += e.terms[t].weight * evaluate_scalar(&avg, &Binding::new())?.re;
    }
    Ok(acc)
}

/// The averaged product of two derivatives of one parameter: the four legs
/// `(+, -, +, -)` of the two copies take values `1001` or `0110`.
pub fn cycle_gadget() -> Diagram {
    let mut d = Diagram::new(0, 4);
    let g1 = d.add_vertex(VertexKind::green(Label::Const(ONE), 0, 3));
    let g2 = d.add_vertex(VertexKind::green(Label::Const(ONE), 0, 3));
    let x = d.add_vertex(VertexKind::pink(Tau::Pi, 1, 1));
    let wiring = [
        (Port::Leg(g1, 0), Port::Output(0)),
        (Port::Leg(g1, 1), Port::Output(3)),
        (Port::Leg(g2, 0), Port::Output(1)),
        (Port::Leg(g2, 1), Port::Output(2)),
        (Port::Leg(g1, 2), Port::Leg(x, 0)),
        (Port::Leg(x, 1), Port::Leg(g2, 2)),
    ];
    for (a, b) in wiring {
        d.connect(a, b).expect("fresh");
    }
    d
}

/// Averaged product of derivatives for a pair of cores: a cycle gadget on `param`
/// and weight-class gadgets on every other parameter.
pub fn variance_pair_diagram(a: &Diagram, b: &Diagram, j: usize) -> Result<Diagram> {
    let m2 = a.n_outputs();
    if b.n_outputs() != m2 || m2 % 2 != 0 || j >= m2 / 2 {
        return Err(ZxError::ShapeMismatch("cores disagree on their parameters".into()));
    }
    let m = m2 / 2;
    let mut eff = Diagram::new(4 * m, 0);
    for i in 0..m {
        let (ap, am, bp, bm) = (2 * i, 2 * i + 1, m2 + 2 * i, m2 + 2 * i + 1);
        if i == j {
            eff.embed(
                &cycle_gadget(),
                &[],
                &[Port::Input(ap), Port::Input(am), Port::Input(bp), Port::Input(bm)],
            )?;
        } else {
            eff.embed(
                &weight_class_gadget(2)?,
                &[Port::Input(am), Port::Input(bm)],
                &[Port::Input(ap), Port::Input(bp)],
            )?;
        }
    }
    a.tensor(b).then(&eff)
}

/// Weighted diagrams whose values sum to the second moment of the derivative.
pub fn variance_terms(e: &ExpectationDiagram, param: &str) -> Result<Vec<(f64, Diagram)>> {
    let j = e.param_index(param)?;
    let mut out = Vec::new();
    for s in &e.terms {
        for t in &e.terms {
            out.push((s.weight * t.weight, variance_pair_diagram(&s.core, &t.core, j)?));
        }
    }
    Ok(out)
}

/// The second-moment diagram for a single-term observable.
pub fn variance_diagram(e: &ExpectationDiagram, param: &str) -> Result<Diagram> {
    if e.terms.len() != 1 {
        return Err(ZxError::ShapeMismatch(
            "observable has several terms; use variance_terms".into(),
        ));
    }
    let (w, d) = variance_terms(e, param)?.remove(0);
    let mut d = d;
    if w != 1.0 {
        d = d.tensor(&scalar(C64::new(w, 0.0)));
    }
    Ok(d)
}

/// Variance of the derivative: second moment minus squared mean.
pub fn gradient_variance(e: &ExpectationDiagram, param: &str) -> Result<f64> {
    let mut second = 0.0;
    for (w, d) in variance_terms(e, param)? {
        second += w * evaluate_scalar(&d, &Binding::new())?.re;
    }
    let mean = gradient_mean(e, param)?;
    Ok(second - mean * mean)
}

#[derive(Clone, Debug, PartialEq)]
pub enum VarianceMethod {
    Diagrammatic,
    MonteCarlo { samples: usize, seed: u64 },
}

#[derive(Clone, Debug, PartialEq)]
pub struct ParamVariance {
    pub param: Param,
    pub mean: f64,
    pub variance: f64,
    /// Standard error of the variance estimate; absent for exact methods.
    pub std_error: Option<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct VarianceReport {
    pub n_qubits: usize,
    pub method: VarianceMethod,
    pub rows: Vec<ParamVariance>,
    /// Wall-clock seconds, filled in by callers that can measure time.
    pub runtime_secs: Option<f64>,
}

pub fn diagrammatic_report(a: &Ansatz, h: &PauliHamiltonian, params: &[Param]) -> Result<VarianceReport> {
    let e = expectation_diagram(a, h)?;
    let chosen = if params.is_empty() { e.params.clone() } else { params.to_vec() };
    let rows = chosen
        .iter()
        .map(|p| {
            Ok(ParamVariance {
                param: p.clone(),
                mean: gradient_mean(&e, p.as_str())?,
                variance: gradient_variance(&e, p.as_str())?,
                std_error: None,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(VarianceReport {
        n_qubits: a.n_qubits,
        method: VarianceMethod::Diagrammatic,
        rows,
        runtime_secs: None,
    })
}

/// Sample estimate of the derivative's mean and variance, by state-vector simulation
/// and the parameter-shift rule at uniformly random parameters.
pub fn monte_carlo_variance(
    a: &Ansatz,
    h: &PauliHamiltonian,
    param: &str,
    samples: usize,
    seed: u64,
) -> Result<ParamVariance> {
    let params = a.params();
    if !params.iter().any(|p| p.as_str() == param) {
        return Err(ZxError::UnboundParameter(param.to_string()));
    }
    if samples < 2 {
        return Err(ZxError::ShapeMismatch("need at least two samples".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut g = Vec::with_capacity(samples);
    for _ in 0..samples {
        let mut b = Binding::new();
        for p in &params {
            b.set(p.clone(), rng.gen_range(-PI..PI));
        }
        g.push(statevec::shift_gradient(a, h, &b, param)?);
    }
    let n = samples as f64;
    let mean = g.iter().sum::<f64>() / n;
    let var = g.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0);
    let sq_mean = g.iter().map(|x| x * x).sum::<f64>() / n;
    let sq_var = g.iter().map(|x| (x * x - sq_mean) * (x * x - sq_mean)).sum::<f64>() / (n - 1.0);
    Ok(ParamVariance {
        param: Param::new(param),
        mean,
        variance: var,
        std_error: Some((sq_var / n).sqrt()),
    })
}

pub fn monte_carlo_report(
    a: &Ansatz,
    h: &PauliHamiltonian,
    params: &[Param],
    samples: usize,
    seed: u64,
) -> Result<VarianceReport> {
    let chosen = if params.is_empty() { a.params() } else { params.to_vec() };
    let rows = chosen
        .iter()
        .map(|p| monte_carlo_variance(a, h, p.as_str(), samples, seed))
        .collect::<Result<Vec<_>>>()?;
    Ok(VarianceReport {
        n_qubits: a.n_qubits,
        method: VarianceMethod::MonteCarlo { samples, seed },
        rows,
        runtime_secs: None,
    })
}

/// Upper bound `2^-(n-2)` on the derivative variance of the line-graph ansatz.
pub fn sim9_bound(n: usize) -> f64 {
    2f64.powi(2 - n as i32)
}

#[derive(Clone, Debug, PartialEq)]
pub struct Sim9Check {
    pub n: usize,
    pub bound: f64,
    pub variances: Vec<(Param, f64)>,
    pub within_bound: bool,
}

/// Computes every derivative variance of [`sim9`] on `n` qubits with `H = Z^n`
/// and compares it with [`sim9_bound`].
pub fn sim9_bound_check(n: usize) -> Result<Sim9Check> {
    let a = sim9(n)?;
    let e = expectation_diagram(&a, &PauliHamiltonian::all_z(n))?;
    let bound = sim9_bound(n);
    let variances = e
        .params
        .iter()
        .map(|p| Ok((p.clone(), gradient_variance(&e, p.as_str())?)))
        .collect::<Result<Vec<_>>>()?;
    let within_bound = variances.iter().all(|(_, v)| *v <= bound + 1e-9);
    Ok(Sim9Check {
        n,
        bound,
        variances,
        within_bound,
    })
}

/// The line-graph-state scalar `<G| P_x |G>^2`, where `G` is the graph state of a
/// path on `x.len()` vertices and `P_x` puts `Y` where `x` is set and `Z` elsewhere.
/// Averaging it over all `x` gives the derivative variance of [`sim9`].
pub fn line_scalar(x: &[bool]) -> Result<f64> {
    let n = x.len();
    let mut gates: Vec<Gate> = (0..n).map(Gate::H).collect();
    gates.extend((0..n.saturating_sub(1)).map(|i| Gate::Cz(i, i + 1)));
    let a = Ansatz::new(n, gates)?;
    let p = PauliString(x.iter().map(|b| if *b { Pauli::Y } else { Pauli::Z }).collect());
    let v = evaluate_scalar(&closed_expectation(&a, &p)?, &Binding::new())?;
    Ok((v * v).re)
}

/// Matrix of a parameter-free circuit, for comparison with simulation.
pub fn circuit_matrix(a: &Ansatz, b: &Binding) -> Result<crate::tensor::Tensor> {
    evaluate(&ansatz_to_diagram(a)?, b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::statevec::simulate;

    #[test]
    fn parses_hamiltonians() {
        let h = PauliHamiltonian::parse("0.5*XZ + 0.3*ZZ - YI").unwrap();
        assert_eq!(h.terms.len(), 3);
        assert_eq!(h.terms[2].0, -1.0);
        assert_eq!(h.terms[0].1.to_string(), "XZ");
        assert!(PauliHamiltonian::parse("XZ+Z").is_err());
        assert!(PauliHamiltonian::parse("1e-1*Z").unwrap().terms[0].0 == 0.1);
    }

    #[test]
    fn rejects_reused_parameter() {
        let g = vec![Gate::Rz(0, "t".into()), Gate::Rx(0, "t".into())];
        assert!(Ansatz::new(1, g).is_err());
        assert!(Ansatz::new(1, vec![Gate::H(3)]).is_err());
    }

    #[test]
    fn circuit_diagram_matches_simulation() {
        let a = Ansatz::new(
            2,
            vec![
                Gate::H(0),
                Gate::Rx(1, "a".into()),
                Gate::Cnot(0, 1),
                Gate::Rz(0, "b".into()),
                Gate::Cz(0, 1),
                Gate::RxFixed(0, 0.3),
            ],
        )
        .unwrap();
        let b = Binding::new().with("a", 0.7).with("b", -1.2);
        let u = circuit_matrix(&a, &b).unwrap();
        let s = simulate(&a, &b).unwrap();
        for (r, z) in s.amplitudes().iter().enumerate() {
            assert!((u.get(r, 0) - z).norm() < 1e-12);
        }
    }

    #[test]
    fn expectation_matches_simulation() {
        let a = sim9(3).unwrap();
        let h = PauliHamiltonian::parse("0.5*XZY+ZZZ").unwrap();
        let e = expectation_diagram(&a, &h).unwrap();
        let b = Binding::new().with("theta1", 0.4).with("theta2", 1.9).with("theta3", -0.8);
        let want = statevec::cost(&a, &h, &b).unwrap();
        assert!((e.value(&b).unwrap() - want).abs() < 1e-12);
        assert_eq!(e.terms[0].core.n_outputs(), 6);
    }

    #[test]
    fn cycle_gadget_support() {
        let t = evaluate(&cycle_gadget(), &Binding::new()).unwrap();
        for idx in 0..16 {
            let want = if idx == 0b1001 || idx == 0b0110 { 1.0 } else { 0.0 };
            assert!((t.get(idx, 0).re - want).abs() < 1e-14);
        }
    }

    #[test]
    fn two_qubit_sim9_variance() {
        let c = sim9_bound_check(2).unwrap();
        for (_, v) in &c.variances {
            assert!((v - 0.25).abs() < 1e-10);
        }
    }
}
