use alloc::string::String;

use crate::diagram::{Port, VertexId};

pub type Result<T, E = ZxError> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ZxError {
    #[error("arity mismatch: expected {expected}, found {found}")]
    ArityMismatch { expected: usize, found: usize },
    #[error("port {0:?} is already connected")]
    PortOccupied(Port),
    #[error("port {0:?} does not exist")]
    NoSuchPort(Port),
    #[error("unknown vertex {0:?}")]
    UnknownVertex(VertexId),
    #[error("invalid diagram: {0}")]
    InvalidDiagram(String),
    #[error("invalid generator: {0}")]
    InvalidKind(String),
    #[error("label `{0}` has no registered conjugate")]
    NotDaggerable(String),
    #[error("parameter `{0}` is not bound")]
    UnboundParameter(String),
    #[error("contraction needs {wires} open wires, limit is {limit}")]
    TooLarge { wires: usize, limit: usize },
    #[error("unsupported occurrence of `{param}` at {vertex:?}: {reason}")]
    UnsupportedOccurrence {
        param: String,
        vertex: VertexId,
        reason: String,
    },
    #[error("function `{0}` may vanish; use the point derivative")]
    VanishingFunction(String),
    #[error("occurrence pattern does not match: {0}")]
    ShapeMismatch(String),
    #[error("no diagrammatic integration gadget for {0} occurrence pairs")]
    UnsupportedArity(usize),
    #[error("occurrences of `{0}` disagree on |k|")]
    MixedCoefficients(String),
    #[error("qubit index {index} out of range for {qubits} qubits")]
    BadQubitIndex { index: usize, qubits: usize },
    #[error("invalid ansatz: {0}")]
    InvalidAnsatz(String),
    #[error("cannot drag `{0}` to the boundary")]
    FusionObstruction(String),
}
