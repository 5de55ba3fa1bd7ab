//! Catalogue of sound rewrite rules, each checked by sampling its free labels and
//! comparing the interpretations of both sides.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::diagram::{Diagram, Port, Tau, VertexKind};
use crate::error::Result;
use crate::integrate::weight_class_gadget;
use crate::interp::evaluate;
use crate::bp::cycle_gadget;
use crate::label::{Binding, Label, C64, I, ONE, ZERO};
use crate::notation::*;

/// Default agreement tolerance, relative to the largest entry when that exceeds one.
pub const RULE_TOLERANCE: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FreeKind {
    /// Any complex number.
    Complex,
    /// A complex number away from zero.
    NonZero,
    /// A real phase in `[-pi, pi)`.
    Phase,
    /// `0` or `pi`.
    Tau,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FreeLabel {
    pub name: &'static str,
    pub kind: FreeKind,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum RuleFamily {
    Axiom,
    Lemma,
    Supplementary,
}

/// Values chosen for the free labels of a rule.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Assignment(BTreeMap<&'static str, C64>);

impl Assignment {
    pub fn set(&mut self, name: &'static str, z: C64) {
        self.0.insert(name, z);
    }

    pub fn c(&self, name: &str) -> C64 {
        self.0.get(name).copied().unwrap_or(ZERO)
    }

    pub fn phase(&self, name: &str) -> f64 {
        self.c(name).re
    }

    pub fn tau(&self, name: &str) -> Tau {
        if self.c(name).re.abs() > 1.0 { Tau::Pi } else { Tau::Zero }
    }
}

type Builder = Arc<dyn Fn(&Assignment) -> (Diagram, Diagram) + Send + Sync>;

#[derive(Clone)]
pub struct Rule {
    pub name: String,
    pub family: RuleFamily,
    pub free: Vec<FreeLabel>,
    /// Side conditions and scalar bookkeeping worth knowing when applying the rule.
    pub note: &'static str,
    flipped: bool,
    build: Builder,
}

impl core::fmt::Debug for Rule {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("Rule")
            .field("name", &self.name)
            .field("family", &self.family)
            .field("free", &self.free)
            .field("flipped", &self.flipped)
            .finish()
    }
}

impl Rule {
    pub fn new(
        name: &str,
        family: RuleFamily,
        free: &[FreeLabel],
        note: &'static str,
        build: impl Fn(&Assignment) -> (Diagram, Diagram) + Send + Sync + 'static,
    ) -> Rule {
        Rule {
            name: name.into(),
            family,
            free: free.to_vec(),
            note,
            flipped: false,
            build: Arc::new(build),
        }
    }

    pub fn is_flipped(&self) -> bool {
        self.flipped
    }

    /// Left- and right-hand sides for an assignment.
    pub fn sides(&self, a: &Assignment) -> (Diagram, Diagram) {
        let (l, r) = (self.build)(a);
        if self.flipped { (l.transpose(), r.transpose()) } else { (l, r) }
    }

    /// The vertically mirrored rule.
    pub fn flip(&self) -> Rule {
        let mut r = self.clone();
        r.flipped = !r.flipped;
        r.name = format!("{}.flip", self.name);
        r
    }
}

const A: FreeLabel = FreeLabel { name: "a", kind: FreeKind::Complex };
const B: FreeLabel = FreeLabel { name: "b", kind: FreeKind::Complex };
const NZ: FreeLabel = FreeLabel { name: "a", kind: FreeKind::NonZero };
const ALPHA: FreeLabel = FreeLabel { name: "alpha", kind: FreeKind::Phase };
const TAU: FreeLabel = FreeLabel { name: "tau", kind: FreeKind::Tau };
const SIGMA: FreeLabel = FreeLabel { name: "sigma", kind: FreeKind::Tau };

fn seq(parts: &[Diagram]) -> Diagram {
    chain(parts).expect("rule sides are well typed")
}

fn par(parts: &[Diagram]) -> Diagram {
    tensor_all(parts)
}

fn id(n: usize) -> Diagram {
    Diagram::identity(n)
}

fn gb(a: C64, n: usize, m: usize) -> Diagram {
    gbox(a, n, m)
}

fn gr(a: f64, n: usize, m: usize) -> Diagram {
    gbox_real(a, n, m)
}

fn p0(n: usize, m: usize) -> Diagram {
    pink(Tau::Zero, n, m)
}

fn ppi(n: usize, m: usize) -> Diagram {
    pink(Tau::Pi, n, m)
}

fn scaled(d: Diagram, p: i32) -> Diagram {
    let mut d = d;
    d.mul_sqrt2(p);
    d
}

fn wd(m: usize) -> Diagram {
    w_spider(m).expect("positive arity")
}

/// Green box `a` with one input, one output and a triangle looping from leg 2 to leg 3.
fn triangle_loop(a: C64) -> Diagram {
    let mut d = Diagram::new(1, 1);
    let g = d.add_vertex(VertexKind::green(Label::Const(a), 1, 3));
    let t = d.add_vertex(VertexKind::Triangle);
    d.connect(Port::Input(0), Port::Leg(g, 0)).expect("fresh");
    d.connect(Port::Leg(g, 1), Port::Output(0)).expect("fresh");
    d.connect(Port::Leg(g, 2), Port::Leg(t, 0)).expect("fresh");
    d.connect(Port::Leg(t, 1), Port::Leg(g, 3)).expect("fresh");
    d
}

/// Green boxes `a` (input side) and `b` (output side) joined by a pink pi wire and a second wire `via`.
fn contradictory_pair(a: C64, b: C64, via: Diagram) -> Diagram {
    seq(&[gb(a, 1, 2), par(&[ppi(1, 1), via]), gb(b, 2, 1)])
}

/// Four green legs tied to one weight-class gadget, each ket/bra pair linked by pink pi.
fn cycle_lhs() -> Diagram {
    let mut d = Diagram::new(0, 4);
    let s: Vec<_> = (0..4)
        .map(|_| d.add_vertex(VertexKind::green(Label::Const(ONE), 0, 3)))
        .collect();
    for (j, v) in s.iter().enumerate() {
        d.connect(Port::Leg(*v, 0), Port::Output(j)).expect("fresh");
    }
    for pair in [(0, 1), (2, 3)] {
        let x = d.add_vertex(VertexKind::pink(Tau::Pi, 1, 1));
        d.connect(Port::Leg(s[pair.0], 1), Port::Leg(x, 0)).expect("fresh");
        d.connect(Port::Leg(x, 1), Port::Leg(s[pair.1], 1)).expect("fresh");
    }
    let g = weight_class_gadget(2).expect("p = 2");
    d.embed(
        &g,
        &[Port::Leg(s[1], 2), Port::Leg(s[3], 2)],
        &[Port::Leg(s[0], 2), Port::Leg(s[2], 2)],
    )
    .expect("free ports");
    d
}

fn pic(m: usize) -> Rule {
    Rule::new(&format!("pic-{m}"), RuleFamily::Lemma, &[ALPHA], "scalar exp(i alpha)", move |s| {
        let al = s.phase("alpha");
        let pis: Vec<Diagram> = (0..m).map(|_| ppi(1, 1)).collect();
        (
            seq(&[ppi(1, 1), green_phase_spider(al, 1, m)]),
            par(&[
                scalar(C64::from_polar(1.0, al)),
                seq(&[green_phase_spider(-al, 1, m), par(&pis)]),
            ]),
        )
    })
}

fn w_decomp(m: usize) -> Rule {
    Rule::new(&format!("w-decomp-{m}"), RuleFamily::Lemma, &[], "", move |_| {
        (wd(m), w(m).expect("positive arity"))
    })
}

fn axioms() -> Vec<Rule> {
    use RuleFamily::Axiom as X;
    vec![
        Rule::new("S1", X, &[A, B], "", |s| {
            (seq(&[gb(s.c("a"), 2, 1), gb(s.c("b"), 1, 2)]), gb(s.c("a") * s.c("b"), 2, 2))
        }),
        Rule::new("S2", X, &[], "", |_| (gr(1.0, 1, 1), id(1))),
        Rule::new("S3", X, &[], "", |_| (gr(1.0, 0, 2), cap())),
        Rule::new("Ept", X, &[A], "", |s| (seq(&[p0(0, 1), gb(s.c("a"), 1, 0)]), Diagram::new(0, 0))),
        Rule::new("B1", X, &[], "", |_| (seq(&[p0(0, 1), gr(1.0, 1, 2)]), par(&[p0(0, 1), p0(0, 1)]))),
        Rule::new("B2", X, &[], "", |_| {
            (
                seq(&[p0(2, 1), gr(1.0, 1, 2)]),
                seq(&[
                    par(&[gr(1.0, 1, 2), gr(1.0, 1, 2)]),
                    par(&[id(1), swap(), id(1)]),
                    par(&[p0(2, 1), p0(2, 1)]),
                ]),
            )
        }),
        Rule::new("B3", X, &[A], "scalar a", |s| {
            (
                seq(&[ppi(0, 1), gb(s.c("a"), 1, 2)]),
                par(&[scalar(s.c("a")), ppi(0, 1), ppi(0, 1)]),
            )
        }),
        Rule::new("Brk", X, &[], "", |_| {
            (
                seq(&[
                    par(&[ppi(0, 1), id(1)]),
                    par(&[triangle(), triangle()]),
                    gr(1.0, 2, 1),
                    triangle_inverse(),
                ]),
                id(1),
            )
        }),
        Rule::new("Bas0", X, &[], "", |_| (seq(&[p0(0, 1), triangle()]), p0(0, 1))),
        Rule::new("Bas1", X, &[], "", |_| (seq(&[ppi(0, 1), triangle()]), gr(1.0, 0, 1))),
        Rule::new("Suc", X, &[A], "", |s| {
            (seq(&[gb(s.c("a"), 0, 1), triangle_transpose()]), gb(s.c("a") + ONE, 0, 1))
        }),
        Rule::new("Inv", X, &[], "", |_| (seq(&[triangle(), triangle_inverse()]), id(1))),
        Rule::new("Zero", X, &[], "", |_| (gr(0.0, 1, 1), par(&[p0(1, 0), p0(0, 1)]))),
        Rule::new("EU", X, &[], "scalar sqrt 2", |_| {
            let p = seq(&[p0(1, 2), par(&[id(1), gb(-I, 1, 0)])]);
            (seq(&[gb(I, 1, 1), p, gb(I, 1, 1)]), scaled(hadamard(), 1))
        }),
        Rule::new("Sym", X, &[], "", |_| (seq(&[wd(2), swap()]), wd(2))),
        Rule::new("Aso", X, &[], "", |_| {
            (seq(&[wd(2), par(&[wd(2), id(1)])]), seq(&[wd(2), par(&[id(1), wd(2)])]))
        }),
        Rule::new("Pcy", X, &[NZ], "requires a != 0; scalar a", |s| {
            let a = s.c("a");
            (
                seq(&[ppi(1, 1), gb(a, 1, 1), ppi(1, 1)]),
                par(&[gb(ONE / a, 1, 1), scalar(a)]),
            )
        }),
    ]
}

fn lemmas() -> Vec<Rule> {
    use RuleFamily::Lemma as L;
    let mut v = vec![
        Rule::new("S1r", L, &[TAU, SIGMA], "", |s| {
            (
                seq(&[pink(s.tau("tau"), 2, 1), pink(s.tau("sigma"), 1, 2)]),
                pink(s.tau("tau").add(s.tau("sigma")), 2, 2),
            )
        }),
        Rule::new("H2", L, &[], "", |_| (seq(&[hadamard(), hadamard()]), id(1))),
        Rule::new("tri-transpose", L, &[], "", |_| {
            (seq(&[ppi(1, 1), triangle(), ppi(1, 1)]), triangle_transpose())
        }),
        Rule::new("tri-inverse", L, &[], "", |_| {
            (seq(&[gr(-1.0, 1, 1), triangle(), gr(-1.0, 1, 1)]), triangle_inverse())
        }),
        Rule::new("tri-one", L, &[], "", |_| (seq(&[triangle(), ppi(1, 0)]), ppi(1, 0))),
        Rule::new("hopf", L, &[], "", |_| {
            (seq(&[gr(1.0, 1, 2), p0(2, 1)]), par(&[gr(1.0, 1, 0), p0(0, 1)]))
        }),
        Rule::new("pi-commute", L, &[], "scalar -1", |_| {
            (
                seq(&[gr(-1.0, 1, 1), ppi(1, 1)]),
                par(&[scalar_real(-1.0), seq(&[ppi(1, 1), gr(-1.0, 1, 1)])]),
            )
        }),
        Rule::new("piwtopicap", L, &[], "", |_| {
            (seq(&[ppi(0, 1), wd(2)]), seq(&[cap(), par(&[ppi(1, 1), id(1)])]))
        }),
        Rule::new("w-head-0", L, &[], "", |_| {
            (seq(&[p0(0, 1), wd(3)]), par(&[p0(0, 1), p0(0, 1), p0(0, 1)]))
        }),
        Rule::new("w-head-1", L, &[], "", |_| {
            (seq(&[ppi(0, 1), wd(3)]), seq(&[ppi(0, 1), w(3).expect("arity")]))
        }),
        Rule::new("rgboxtriangle-0", L, &[A, B], "", |s| {
            (
                seq(&[p0(0, 1), gb(s.c("b"), 1, 1), triangle_transpose(), gb(s.c("a"), 1, 1)]),
                gb(s.c("a"), 0, 1),
            )
        }),
        Rule::new("rgboxtriangle-1", L, &[A, B], "scalar ab", |s| {
            (
                seq(&[ppi(0, 1), gb(s.c("b"), 1, 1), triangle_transpose(), gb(s.c("a"), 1, 1)]),
                par(&[scalar(s.c("a") * s.c("b")), ppi(0, 1)]),
            )
        }),
    ];
    v.extend((0..4).map(pic));
    v.extend((1..5).map(w_decomp));
    v
}

fn supplementary() -> Vec<Rule> {
    use RuleFamily::Supplementary as P;
    vec![
        Rule::new("zerobox", P, &[], "", |_| {
            (gr(0.0, 2, 1), par(&[p0(1, 0), p0(1, 0), p0(0, 1)]))
        }),
        Rule::new("rdecomp", P, &[], "", |_| {
            (p0(1, 2), seq(&[par(&[gr(1.0, 0, 2), id(1)]), par(&[id(1), p0(2, 1)])]))
        }),
        Rule::new("bas0t", P, &[], "", |_| (seq(&[p0(0, 1), triangle_transpose()]), gr(1.0, 0, 1))),
        Rule::new("bas1t", P, &[], "", |_| (seq(&[ppi(0, 1), triangle_transpose()]), ppi(0, 1))),
        Rule::new("trihopf", P, &[], "", |_| {
            (seq(&[gr(1.0, 1, 2), par(&[triangle(), id(1)]), p0(2, 1)]), triangle())
        }),
        Rule::new("triloop", P, &[A], "", |s| (triangle_loop(s.c("a")), gb(s.c("a"), 1, 1))),
        Rule::new("cnotstable", P, &[], "", |_| {
            (seq(&[par(&[id(1), gr(1.0, 0, 1)]), cnot()]), par(&[id(1), gr(1.0, 0, 1)]))
        }),
        Rule::new("wplug", P, &[], "", |_| (seq(&[wd(3), par(&[id(2), p0(1, 0)])]), wd(2))),
        Rule::new("wsum", P, &[A, B], "", |s| {
            (
                seq(&[par(&[gb(s.c("a"), 0, 1), gb(s.c("b"), 0, 1)]), wd(2).transpose()]),
                gb(s.c("a") + s.c("b"), 0, 1),
            )
        }),
        Rule::new("w2pitri", P, &[], "scalar -1", |_| {
            (
                seq(&[
                    ppi(0, 1),
                    wd(2),
                    par(&[triangle_transpose(), seq(&[gr(-1.0, 1, 1), triangle_transpose()])]),
                ]),
                par(&[
                    scalar_real(-1.0),
                    seq(&[cap(), par(&[seq(&[ppi(1, 1), gr(-1.0, 1, 1)]), id(1)])]),
                ]),
            )
        }),
        Rule::new("diffexampletop", P, &[], "scalar sqrt 2", |_| {
            (gr(1.0, 0, 1), scaled(seq(&[p0(0, 1), hadamard()]), 1))
        }),
        Rule::new("2gn1rpi", P, &[A, B], "", |s| {
            (
                contradictory_pair(s.c("a"), s.c("b"), id(1)),
                par(&[zero_scalar(), id(1)]),
            )
        }),
        Rule::new("2gn1rpi1r0", P, &[A, B], "", |s| {
            (
                contradictory_pair(s.c("a"), s.c("b"), p0(1, 1)),
                par(&[zero_scalar(), id(1)]),
            )
        }),
        Rule::new("2gn2rpis", P, &[A, B], "", |s| {
            (
                seq(&[gb(s.c("a"), 1, 2), par(&[ppi(1, 1), ppi(1, 1)]), gb(s.c("b"), 2, 1)]),
                seq(&[gb(s.c("a"), 1, 1), ppi(1, 1), gb(s.c("b"), 1, 1)]),
            )
        }),
        Rule::new("ket00plusketo1", P, &[], "", |_| {
            (
                seq(&[gr(1.0, 0, 1), wd(2)]),
                seq(&[gr(-1.0, 0, 2), par(&[triangle_transpose(), triangle_transpose()])]),
            )
        }),
        Rule::new("cycle-1", P, &[], "", |_| (cycle_lhs(), cycle_gadget())),
        Rule::new("cycle-2", P, &[], "scalar 2", |_| {
            (
                weight_class_gadget(2).expect("p = 2").partial_trace(1, 1).expect("slots exist"),
                scaled(id(1), 2),
            )
        }),
    ]
}

/// Every rule, with vertical flips of the axioms.
pub fn catalog() -> Vec<Rule> {
    let ax = axioms();
    let flips: Vec<Rule> = ax.iter().map(Rule::flip).collect();
    let mut all = ax;
    all.extend(flips);
    all.extend(lemmas());
    all.extend(supplementary());
    all
}

pub fn find_rule(name: &str) -> Option<Rule> {
    catalog().into_iter().find(|r| r.name == name)
}

fn special(kind: FreeKind, i: usize) -> Option<C64> {
    let pts = [ZERO, ONE, -ONE, I];
    match kind {
        FreeKind::Complex if i < 4 => Some(pts[i]),
        FreeKind::NonZero if i < 3 => Some(pts[i + 1]),
        _ => None,
    }
}

/// Draws a value: complex labels from the annulus `0.2 <= |a| <= 2`, after first
/// visiting the points `0, 1, -1, i`; phases uniformly from `[-pi, pi)`.
pub fn sample_value<R: Rng>(kind: FreeKind, index: usize, rng: &mut R) -> C64 {
    if let Some(z) = special(kind, index) {
        return z;
    }
    match kind {
        FreeKind::Complex | FreeKind::NonZero => {
            C64::from_polar(rng.gen_range(0.2..=2.0), rng.gen_range(-PI..PI))
        }
        FreeKind::Phase => C64::new(rng.gen_range(-PI..PI), 0.0),
        FreeKind::Tau => C64::new(if rng.gen::<bool>() { PI } else { 0.0 }, 0.0),
    }
}

pub fn sample_assignment<R: Rng>(free: &[FreeLabel], index: usize, rng: &mut R) -> Assignment {
    let mut a = Assignment::default();
    for (k, f) in free.iter().enumerate() {
        a.set(f.name, sample_value(f.kind, index + k, rng));
    }
    a
}

#[derive(Clone, Debug, PartialEq)]
pub struct RuleReport {
    pub name: String,
    pub samples: usize,
    pub max_deviation: f64,
    pub passed: bool,
}

fn name_seed(name: &str) -> u64 {
    name.bytes()
        .fold(0xcbf2_9ce4_8422_2325u64, |h, b| (h ^ b as u64).wrapping_mul(0x0100_0000_01b3))
}

/// Entrywise deviation between two maps, scaled down when entries exceed one.
pub fn relative_deviation(l: &crate::tensor::Tensor, r: &crate::tensor::Tensor) -> f64 {
    let scale = l.max_abs().max(r.max_abs()).max(1.0);
    l.max_abs_diff(r) / scale
}

/// Samples the free labels of `rule` and compares both sides.
pub fn check_rule(rule: &Rule, samples: usize, seed: u64) -> Result<RuleReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ name_seed(&rule.name));
    let n = if rule.free.is_empty() { 1 } else { samples.max(1) };
    let mut worst = 0.0f64;
    let b = Binding::new();
    for i in 0..n {
        let a = sample_assignment(&rule.free, i, &mut rng);
        let (l, r) = rule.sides(&a);
        let dev = relative_deviation(&evaluate(&l, &b)?, &evaluate(&r, &b)?);
        worst = worst.max(dev);
    }
    Ok(RuleReport {
        name: rule.name.clone(),
        samples: n,
        max_deviation: worst,
        passed: worst <= RULE_TOLERANCE,
    })
}

pub fn check_catalog(samples: usize, seed: u64) -> Result<Vec<RuleReport>> {
    catalog().iter().map(|r| check_rule(r, samples, seed)).collect()
}

/// A deliberately unsound rule, used to confirm that checking can fail.
pub fn corrupted_rule() -> Rule {
    Rule::new("corrupted-S1", RuleFamily::Axiom, &[A, B], "", |s| {
        (seq(&[gb(s.c("a"), 2, 1), gb(s.c("b"), 1, 2)]), gb(s.c("a") + s.c("b"), 2, 2))
    })
}
