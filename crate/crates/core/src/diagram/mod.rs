//! Labelled string diagrams over a pluggable monoidal signature.
//!
//! The underlying category is the free symmetric monoidal category on the
//! signature's generators, represented as acyclic port graphs with ordered
//! boundaries. Wire crossings are implicit in the edge set, so there are no
//! swap nodes. A [`LabelledDiagram`] names each boundary port with a label;
//! these are the morphisms threaded through evaluation.

mod fresh;
mod graph;
mod labelled;
mod signature;

pub use fresh::{freshlabels, FreshLabels};
pub use graph::{CanonicalForm, Diagram, NodeId, Source, Target};
pub use labelled::{append, apply_generator, diagram_eq, LabelledDiagram};
pub use signature::{Generator, Signature, SignatureError};

use alloc::string::String;
use core::fmt;

use crate::syntax::{Label, LabelContext, Name};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DiagramError {
    /// A label occurs on both sides of a disjoint union.
    LabelClash(Label),
    /// The codomain of the first diagram is not the domain of the second.
    BoundaryMismatch { left: LabelContext, right: LabelContext },
    UnknownGenerator(Name),
    /// The port graph violates linearity, typing or acyclicity.
    Malformed(String),
}

impl fmt::Display for DiagramError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DiagramError::LabelClash(l) => write!(f, "label {l} occurs on both sides of a tensor"),
            DiagramError::BoundaryMismatch { left, right } => {
                write!(f, "cannot compose: outputs {left} do not match inputs {right}")
            }
            DiagramError::UnknownGenerator(g) => write!(f, "unknown generator `{g}`"),
            DiagramError::Malformed(why) => write!(f, "malformed diagram: {why}"),
        }
    }
}
