//! Abstract syntax shared by every other module.

mod alpha;
mod context;
mod name;
mod ops;
mod term;
mod types;

pub use alpha::alpha_eq;
pub use context::{ContextError, LabelContext, VarContext};
pub use name::{Label, Name};
pub use ops::{free_labels, free_vars, fresh_name, is_value, substitute, substitute_many};
pub use term::{BoxedDiagram, LabelTuple, Span, Term, TermKind};
pub use types::{MType, Type};
