//! A linear/non-linear lambda calculus for describing string diagrams.
//!
//! Programs are typed with a single judgement over mixed linear and
//! intuitionistic contexts. Evaluation is big-step over configurations
//! `(S, m)`: `S` is the labelled string diagram built so far and `m` the
//! remaining program. `box` turns a duplicable circuit-building function into
//! a first-class diagram value and `apply` pastes such a value onto open wires.
//!
//! The crate also carries a finite denotational model of the diagram-free
//! fragment (pointed finite posets and strict monotone maps) so that soundness
//! and adequacy can be checked by computation.
//!
//! Everything here is pure and allocation-only; file formats, IO and the
//! command-line driver live in the `eclnl` crate.

#![cfg_attr(not(test), no_std)]
// Type errors carry the expected and found types for diagnostics.
#![allow(clippy::result_large_err)]

extern crate alloc;

pub mod diagram;
pub mod eval;
pub mod oracle;
pub mod parser;
pub mod syntax;
pub mod typeck;

pub use diagram::{
    Diagram, DiagramError, FreshLabels, Generator, LabelledDiagram, Signature, SignatureError,
};
pub use eval::{eval, run_program, Configuration, Outcome, RunReport, RuntimeError, DEFAULT_FUEL};
pub use oracle::{
    check_adequacy, check_linear_fixpoint, check_soundness, Adequacy, Domain, FinPoset, Oracle, OracleError, Soundness,
    StrictMap,
};
pub use parser::{parse_program, parse_term, parse_type, print_term, ParseError, ParseErrorKind, SourceProgram};
pub use syntax::{
    Label, LabelContext, LabelTuple, MType, Name, Span, Term, TermKind, Type, VarContext,
};
pub use typeck::{
    check, check_configuration, infer, Derivation, Rule, TypeError, TypeErrorKind, TypingDerivation,
};
