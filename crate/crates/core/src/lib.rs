//! Algebraic ZX-calculus: diagrams over green boxes, pink spiders, Hadamards,
//! triangles and W spiders, with exact-by-construction differentiation and
//! integration of parameterised diagrams.
#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod bp;
pub mod diagram;
pub mod diff;
pub mod error;
pub mod integrate;
pub mod interp;
pub mod label;
pub mod notation;
pub mod random;
pub mod rules;
pub mod simplify;
pub mod statevec;
pub mod tensor;

pub use diagram::{Diagram, Port, Tau, VertexId, VertexKind};
pub use error::{Result, ZxError};
pub use interp::{evaluate, evaluate_with, EvalOptions};
pub use label::{Binding, Label, Param, ParamFunction, C64};
pub use tensor::Tensor;
