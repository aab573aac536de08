//! The typing judgement `G; Q |- m : A`.
//!
//! Checking is by usage synthesis: one bottom-up pass computes the linear
//! variables and labels each subterm consumes, and every multi-premise rule
//! checks that its premises consume disjoint resources. Intuitionistic
//! variables are not tracked and may be used any number of times.

mod check;

pub use check::{check, check_configuration, infer};

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::syntax::{Label, LabelContext, Name, Span, Term, Type, VarContext};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TypeErrorKind {
    LinearVarUnused,
    LinearVarReused,
    LabelUnused,
    LabelReused,
    /// A linear variable or a label occurs under `lift`, `rec` or in a
    /// position whose context must be intuitionistic.
    LinearVarInIntuitionisticPosition,
    TypeMismatch,
    UnknownVariable,
    UnknownConstant,
    UnknownLabel,
    NotAFunction,
    NotABang,
    NotADiag,
    NotASum,
    NotATensor,
    NotEmpty,
    CaseBranchResourceMismatch,
    /// `left`/`right` without annotation and no expected type to read it from.
    MissingAnnotation,
    MalformedDiagram,
    DanglingLabel,
    ConfigurationMismatch,
}

impl TypeErrorKind {
    pub fn as_str(self) -> &'static str {
        match self {
            TypeErrorKind::LinearVarUnused => "LinearVarUnused",
            TypeErrorKind::LinearVarReused => "LinearVarReused",
            TypeErrorKind::LabelUnused => "LabelUnused",
            TypeErrorKind::LabelReused => "LabelReused",
            TypeErrorKind::LinearVarInIntuitionisticPosition => "LinearVarInIntuitionisticPosition",
            TypeErrorKind::TypeMismatch => "TypeMismatch",
            TypeErrorKind::UnknownVariable => "UnknownVariable",
            TypeErrorKind::UnknownConstant => "UnknownConstant",
            TypeErrorKind::UnknownLabel => "UnknownLabel",
            TypeErrorKind::NotAFunction => "NotAFunction",
            TypeErrorKind::NotABang => "NotABang",
            TypeErrorKind::NotADiag => "NotADiag",
            TypeErrorKind::NotASum => "NotASum",
            TypeErrorKind::NotATensor => "NotATensor",
            TypeErrorKind::NotEmpty => "NotEmpty",
            TypeErrorKind::CaseBranchResourceMismatch => "CaseBranchResourceMismatch",
            TypeErrorKind::MissingAnnotation => "MissingAnnotation",
            TypeErrorKind::MalformedDiagram => "MalformedDiagram",
            TypeErrorKind::DanglingLabel => "DanglingLabel",
            TypeErrorKind::ConfigurationMismatch => "ConfigurationMismatch",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TypeError {
    pub kind: TypeErrorKind,
    pub span: Span,
    /// The rule being applied when the error was found.
    pub rule: Option<&'static str>,
    /// Offending variable, label or constant.
    pub name: Option<String>,
    pub expected: Option<Type>,
    pub found: Option<Type>,
}

impl TypeError {
    pub(crate) fn new(kind: TypeErrorKind, span: Span) -> Self {
        TypeError { kind, span, rule: None, name: None, expected: None, found: None }
    }

    pub(crate) fn named(mut self, name: impl fmt::Display) -> Self {
        self.name = Some(alloc::format!("{name}"));
        self
    }

    pub(crate) fn in_rule(mut self, rule: &'static str) -> Self {
        self.rule.get_or_insert(rule);
        self
    }

    pub(crate) fn types(mut self, expected: Option<Type>, found: Option<Type>) -> Self {
        self.expected = expected;
        self.found = found;
        self
    }
}

impl fmt::Display for TypeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use TypeErrorKind as K;
        let name = self.name.as_deref().unwrap_or("?");
        match self.kind {
            K::LinearVarUnused => write!(f, "linear variable `{name}` is never used")?,
            K::LinearVarReused => write!(f, "linear variable `{name}` is used more than once")?,
            K::LabelUnused => write!(f, "label `{name}` is never used")?,
            K::LabelReused => write!(f, "label `{name}` is used more than once")?,
            K::LinearVarInIntuitionisticPosition => {
                write!(f, "`{name}` is linear and cannot occur here")?
            }
            K::TypeMismatch => f.write_str("type mismatch")?,
            K::UnknownVariable => write!(f, "unbound variable `{name}`")?,
            K::UnknownConstant => write!(f, "unknown constant `{name}`")?,
            K::UnknownLabel => write!(f, "label `{name}` is not in the label context")?,
            K::NotAFunction => f.write_str("not a function")?,
            K::NotABang => f.write_str("expected a type of the form !A")?,
            K::NotADiag => f.write_str("expected a type of the form Diag(T, U)")?,
            K::NotASum => f.write_str("expected a sum type")?,
            K::NotATensor => f.write_str("expected a tensor type")?,
            K::NotEmpty => f.write_str("expected the empty type 0")?,
            K::CaseBranchResourceMismatch => {
                write!(f, "case branches consume different linear resources (`{name}`)")?
            }
            K::MissingAnnotation => f.write_str("cannot determine the type of this injection; add [A, B]")?,
            K::MalformedDiagram => write!(f, "malformed boxed diagram: {name}")?,
            K::DanglingLabel => write!(f, "label `{name}` is not an output of the diagram")?,
            K::ConfigurationMismatch => write!(f, "diagram does not start from the given inputs: {name}")?,
        }
        if let Some(e) = &self.expected {
            write!(f, "; expected `{e}`")?;
        }
        if let Some(t) = &self.found {
            write!(f, ", found `{t}`")?;
        }
        if let Some(r) = self.rule {
            write!(f, " [{r}]")?;
        }
        Ok(())
    }
}

/// Typing rules, with the data each instance needs to be printed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Rule {
    Var(Name),
    Label(Label),
    Const(Name),
    Let(Name),
    Initial,
    Left,
    Right,
    Case(Name, Name),
    Star,
    Seq,
    Pair,
    LetPair(Name, Name),
    Abs(Name),
    App,
    Lift,
    Force,
    Box,
    Apply,
    Diag,
    Rec(Name),
}

impl Rule {
    pub fn name(&self) -> &'static str {
        match self {
            Rule::Var(_) => "var",
            Rule::Label(_) => "label",
            Rule::Const(_) => "const",
            Rule::Let(_) => "let",
            Rule::Initial => "initial",
            Rule::Left => "left",
            Rule::Right => "right",
            Rule::Case(..) => "case",
            Rule::Star => "*",
            Rule::Seq => "seq",
            Rule::Pair => "pair",
            Rule::LetPair(..) => "let-pair",
            Rule::Abs(_) => "abs",
            Rule::App => "app",
            Rule::Lift => "lift",
            Rule::Force => "force",
            Rule::Box => "box",
            Rule::Apply => "apply",
            Rule::Diag => "diag",
            Rule::Rec(_) => "rec",
        }
    }
}

/// One node of a derivation: the rule used, the type concluded, and the
/// linear variables and labels the subtree consumes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Derivation {
    pub rule: Rule,
    pub ty: Type,
    pub vars: Vec<Name>,
    pub labels: Vec<Label>,
    pub span: Span,
    pub premises: Vec<Derivation>,
}

impl Derivation {
    pub fn size(&self) -> usize {
        1 + self.premises.iter().map(Derivation::size).sum::<usize>()
    }

    pub fn for_each(&self, f: &mut impl FnMut(&Derivation)) {
        f(self);
        for p in &self.premises {
            p.for_each(f);
        }
    }

    fn write(&self, depth: usize, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for _ in 0..depth {
            f.write_str("  ")?;
        }
        write!(f, "({}) : {}", self.rule.name(), self.ty)?;
        if !self.vars.is_empty() || !self.labels.is_empty() {
            f.write_str("  uses")?;
            for v in &self.vars {
                write!(f, " {v}")?;
            }
            for l in &self.labels {
                write!(f, " {l}")?;
            }
        }
        writeln!(f)?;
        for p in &self.premises {
            p.write(depth + 1, f)?;
        }
        Ok(())
    }
}

impl fmt::Display for Derivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write(0, f)
    }
}

/// A complete derivation of `gamma; q |- term : ty`.
#[derive(Clone, Debug)]
pub struct TypingDerivation {
    pub gamma: VarContext,
    pub q: LabelContext,
    pub term: Term,
    pub ty: Type,
    pub tree: Derivation,
}
