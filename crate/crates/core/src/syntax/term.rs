use alloc::boxed::Box;
use alloc::sync::Arc;
use alloc::vec::Vec;

use super::{Label, MType, Name, Type};
use crate::diagram::LabelledDiagram;

/// Byte range in the source text. Terms built in code carry `Span::default()`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Span {
    pub start: u32,
    pub end: u32,
}

impl Span {
    pub fn new(start: usize, end: usize) -> Self {
        Span { start: start as u32, end: end as u32 }
    }

    pub fn join(self, other: Span) -> Span {
        Span { start: self.start.min(other.start), end: self.end.max(other.end) }
    }

    pub fn len(&self) -> usize {
        (self.end - self.start) as usize
    }

    pub fn is_empty(&self) -> bool {
        self.end == self.start
    }
}

/// A term together with the source span it was parsed from.
///
/// Equality compares structure only and ignores spans; binder names are
/// significant (use [`alpha_eq`](super::alpha_eq) to quotient them out).
#[derive(Clone, Debug)]
pub struct Term {
    pub kind: TermKind,
    pub span: Span,
}

impl PartialEq for Term {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind
    }
}

impl Eq for Term {}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TermKind {
    Var(Name),
    Const(Name),
    Let(Name, Box<Term>, Box<Term>),
    /// `initial[C] m`, the eliminator for `0`.
    Initial(Type, Box<Term>),
    /// `left[A,B] m`; the annotation may be left to the expected type.
    Left(Option<(Type, Type)>, Box<Term>),
    Right(Option<(Type, Type)>, Box<Term>),
    /// `case m of { left x -> n | right y -> p }`
    Case(Box<Term>, Name, Box<Term>, Name, Box<Term>),
    Star,
    Seq(Box<Term>, Box<Term>),
    Pair(Box<Term>, Box<Term>),
    LetPair(Name, Name, Box<Term>, Box<Term>),
    Lambda(Name, Type, Box<Term>),
    App(Box<Term>, Box<Term>),
    Lift(Box<Term>),
    Force(Box<Term>),
    Label(Label),
    Box(MType, Box<Term>),
    Apply(Box<Term>, Box<Term>),
    BoxedDiag(Arc<BoxedDiagram>),
    /// `rec x : !A. m`; the annotation is the type of `x`.
    Rec(Name, Type, Box<Term>),
}

/// The value `(l, S, l')`: a closed diagram with its boundary tuples.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoxedDiagram {
    pub inputs: LabelTuple,
    pub diagram: LabelledDiagram,
    pub outputs: LabelTuple,
}

/// Tuples of labels built from single labels, `*` and pairs.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum LabelTuple {
    Lbl(Label),
    Star,
    Pair(Box<LabelTuple>, Box<LabelTuple>),
}

impl LabelTuple {
    pub fn pair(a: LabelTuple, b: LabelTuple) -> LabelTuple {
        LabelTuple::Pair(Box::new(a), Box::new(b))
    }

    /// Labels in left-to-right order.
    pub fn labels(&self) -> Vec<Label> {
        let mut out = Vec::new();
        self.collect(&mut out);
        out
    }

    fn collect(&self, out: &mut Vec<Label>) {
        match self {
            LabelTuple::Lbl(l) => out.push(l.clone()),
            LabelTuple::Star => {}
            LabelTuple::Pair(a, b) => {
                a.collect(out);
                b.collect(out);
            }
        }
    }

    /// True when no label occurs twice.
    pub fn is_linear(&self) -> bool {
        let mut ls = self.labels();
        let n = ls.len();
        ls.sort();
        ls.dedup();
        ls.len() == n
    }

    /// Replaces every label through `f`, keeping the tree shape.
    pub fn map(&self, f: &mut impl FnMut(&Label) -> Label) -> LabelTuple {
        match self {
            LabelTuple::Lbl(l) => LabelTuple::Lbl(f(l)),
            LabelTuple::Star => LabelTuple::Star,
            LabelTuple::Pair(a, b) => LabelTuple::pair(a.map(f), b.map(f)),
        }
    }

    /// Same tree shape, ignoring label names.
    pub fn same_shape(&self, other: &LabelTuple) -> bool {
        match (self, other) {
            (LabelTuple::Lbl(_), LabelTuple::Lbl(_)) | (LabelTuple::Star, LabelTuple::Star) => true,
            (LabelTuple::Pair(a, b), LabelTuple::Pair(c, d)) => a.same_shape(c) && b.same_shape(d),
            _ => false,
        }
    }

    /// The M-type obtained by reading each label's wire type from `wire_of`.
    pub fn mtype(&self, wire_of: &impl Fn(&Label) -> Option<Name>) -> Option<MType> {
        Some(match self {
            LabelTuple::Lbl(l) => MType::Wire(wire_of(l)?),
            LabelTuple::Star => MType::Unit,
            LabelTuple::Pair(a, b) => MType::tensor(a.mtype(wire_of)?, b.mtype(wire_of)?),
        })
    }

    pub fn to_term(&self) -> Term {
        match self {
            LabelTuple::Lbl(l) => Term::label(l.clone()),
            LabelTuple::Star => Term::star(),
            LabelTuple::Pair(a, b) => Term::pair(a.to_term(), b.to_term()),
        }
    }

    /// Reads a label tuple back from a value built of labels, `*` and pairs.
    pub fn from_term(m: &Term) -> Option<LabelTuple> {
        match &m.kind {
            TermKind::Label(l) => Some(LabelTuple::Lbl(l.clone())),
            TermKind::Star => Some(LabelTuple::Star),
            TermKind::Pair(a, b) => Some(LabelTuple::pair(Self::from_term(a)?, Self::from_term(b)?)),
            _ => None,
        }
    }
}

impl core::fmt::Display for LabelTuple {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            LabelTuple::Lbl(l) => write!(f, "{l}"),
            LabelTuple::Star => f.write_str("*"),
            LabelTuple::Pair(a, b) => write!(f, "<{a}, {b}>"),
        }
    }
}

impl From<TermKind> for Term {
    fn from(kind: TermKind) -> Self {
        Term { kind, span: Span::default() }
    }
}

fn b(m: Term) -> Box<Term> {
    Box::new(m)
}

impl Term {
    pub fn new(kind: TermKind, span: Span) -> Self {
        Term { kind, span }
    }

    pub fn with_span(mut self, span: Span) -> Self {
        self.span = span;
        self
    }

    pub fn var(x: &str) -> Term {
        TermKind::Var(Name::new(x)).into()
    }

    pub fn constant(c: &str) -> Term {
        TermKind::Const(Name::new(c)).into()
    }

    pub fn let_(x: &str, m: Term, n: Term) -> Term {
        TermKind::Let(Name::new(x), b(m), b(n)).into()
    }

    pub fn initial(c: Type, m: Term) -> Term {
        TermKind::Initial(c, b(m)).into()
    }

    pub fn left(annot: Option<(Type, Type)>, m: Term) -> Term {
        TermKind::Left(annot, b(m)).into()
    }

    pub fn right(annot: Option<(Type, Type)>, m: Term) -> Term {
        TermKind::Right(annot, b(m)).into()
    }

    pub fn case(m: Term, x: &str, n: Term, y: &str, p: Term) -> Term {
        TermKind::Case(b(m), Name::new(x), b(n), Name::new(y), b(p)).into()
    }

    pub fn star() -> Term {
        TermKind::Star.into()
    }

    pub fn seq(m: Term, n: Term) -> Term {
        TermKind::Seq(b(m), b(n)).into()
    }

    pub fn pair(m: Term, n: Term) -> Term {
        TermKind::Pair(b(m), b(n)).into()
    }

    pub fn let_pair(x: &str, y: &str, m: Term, n: Term) -> Term {
        TermKind::LetPair(Name::new(x), Name::new(y), b(m), b(n)).into()
    }

    pub fn lam(x: &str, ty: Type, m: Term) -> Term {
        TermKind::Lambda(Name::new(x), ty, b(m)).into()
    }

    pub fn app(m: Term, n: Term) -> Term {
        TermKind::App(b(m), b(n)).into()
    }

    pub fn lift(m: Term) -> Term {
        TermKind::Lift(b(m)).into()
    }

    pub fn force(m: Term) -> Term {
        TermKind::Force(b(m)).into()
    }

    pub fn label(l: Label) -> Term {
        TermKind::Label(l).into()
    }

    pub fn boxed(t: MType, m: Term) -> Term {
        TermKind::Box(t, b(m)).into()
    }

    pub fn apply(m: Term, n: Term) -> Term {
        TermKind::Apply(b(m), b(n)).into()
    }

    pub fn boxed_diag(inputs: LabelTuple, diagram: LabelledDiagram, outputs: LabelTuple) -> Term {
        TermKind::BoxedDiag(Arc::new(BoxedDiagram { inputs, diagram, outputs })).into()
    }

    pub fn rec(x: &str, ty: Type, m: Term) -> Term {
        TermKind::Rec(Name::new(x), ty, b(m)).into()
    }

    /// Number of syntax nodes.
    pub fn size(&self) -> usize {
        let mut n = 0;
        self.for_each_child(&mut |c| n += c.size());
        n + 1
    }

    /// Height of the syntax tree.
    pub fn depth(&self) -> usize {
        let mut d = 0;
        self.for_each_child(&mut |c| d = d.max(c.depth()));
        d + 1
    }

    pub fn for_each_child<'a>(&'a self, f: &mut impl FnMut(&'a Term)) {
        match &self.kind {
            TermKind::Var(_)
            | TermKind::Const(_)
            | TermKind::Star
            | TermKind::Label(_)
            | TermKind::BoxedDiag(_) => {}
            TermKind::Initial(_, m)
            | TermKind::Left(_, m)
            | TermKind::Right(_, m)
            | TermKind::Lambda(_, _, m)
            | TermKind::Lift(m)
            | TermKind::Force(m)
            | TermKind::Box(_, m)
            | TermKind::Rec(_, _, m) => f(m),
            TermKind::Let(_, m, n)
            | TermKind::Seq(m, n)
            | TermKind::Pair(m, n)
            | TermKind::LetPair(_, _, m, n)
            | TermKind::App(m, n)
            | TermKind::Apply(m, n) => {
                f(m);
                f(n);
            }
            TermKind::Case(m, _, n, _, p) => {
                f(m);
                f(n);
                f(p);
            }
        }
    }

    /// True when the term contains no label, boxed diagram, box, apply or
    /// constant, and mentions no wire or diagram type.
    pub fn is_diagram_free(&self) -> bool {
        let here = match &self.kind {
            TermKind::Const(_)
            | TermKind::Label(_)
            | TermKind::Box(..)
            | TermKind::Apply(..)
            | TermKind::BoxedDiag(_) => false,
            TermKind::Initial(t, _) | TermKind::Lambda(_, t, _) | TermKind::Rec(_, t, _) => {
                t.is_diagram_free()
            }
            TermKind::Left(Some((a, c)), _) | TermKind::Right(Some((a, c)), _) => {
                a.is_diagram_free() && c.is_diagram_free()
            }
            _ => true,
        };
        let mut ok = here;
        self.for_each_child(&mut |c| ok = ok && c.is_diagram_free());
        ok
    }
}
