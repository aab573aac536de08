//! Big-step evaluation of configurations `(S, m)`.
//!
//! The interpreter is an explicit-stack machine so that deep recursion in the
//! object language does not exhaust the host stack. Every dispatch on a
//! non-value term costs one unit of fuel.

use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use crate::diagram::{append, apply_generator, freshlabels, FreshLabels, LabelledDiagram, Signature};
use crate::parser::print_term;
use crate::syntax::{
    is_value, substitute, substitute_many, BoxedDiagram, LabelContext, LabelTuple, Name, Term, TermKind, Type,
    VarContext,
};
use crate::typeck::{infer, TypeError};

pub const DEFAULT_FUEL: u64 = 100_000;

/// A diagram under construction, the remaining program and the state of the
/// fresh-label source.
#[derive(Clone, Debug)]
pub struct Configuration {
    pub diagram: LabelledDiagram,
    pub term: Term,
    pub fresh: FreshLabels,
}

impl Configuration {
    /// `(id_Q, m)` with a label source that avoids every label of `q`.
    pub fn new(q: &LabelContext, term: Term) -> Self {
        Configuration { diagram: LabelledDiagram::identity(q), term, fresh: FreshLabels::after(q.labels()) }
    }

    pub fn with_diagram(diagram: LabelledDiagram, term: Term) -> Self {
        let fresh = FreshLabels::after(diagram.labels().iter());
        Configuration { diagram, term, fresh }
    }
}

/// A stuck configuration: the rule that could not fire and why.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RuntimeError {
    pub rule: &'static str,
    pub detail: String,
}

impl fmt::Display for RuntimeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.rule, self.detail)
    }
}

#[allow(clippy::large_enum_variant)]
#[derive(Clone, Debug)]
pub enum Outcome {
    Value(Configuration),
    Error(RuntimeError),
    FuelExhausted,
}

impl Outcome {
    pub fn kind(&self) -> &'static str {
        match self {
            Outcome::Value(_) => "value",
            Outcome::Error(_) => "error",
            Outcome::FuelExhausted => "fuel-exhausted",
        }
    }

    pub fn value(&self) -> Option<&Configuration> {
        match self {
            Outcome::Value(c) => Some(c),
            _ => None,
        }
    }

    pub fn is_error(&self) -> bool {
        matches!(self, Outcome::Error(_))
    }
}

enum Frame {
    PairL(Term),
    PairR(Term),
    Let(Name, Term),
    LetPair(Name, Name, Term),
    Seq(Term),
    Case(Name, Term, Name, Term),
    Left(Option<(Type, Type)>),
    Right(Option<(Type, Type)>),
    Initial,
    AppL(Term),
    AppR(Term),
    Force,
    Box(crate::syntax::MType),
    /// Restores the outer diagram once a boxed sub-evaluation finishes.
    BoxReturn(LabelledDiagram, LabelTuple),
    ApplyL(Term),
    ApplyR(Term),
}

fn stuck(rule: &'static str, detail: impl fmt::Display) -> RuntimeError {
    RuntimeError { rule, detail: alloc::format!("{detail}") }
}

/// Evaluates `c` with at most `fuel` steps.
pub fn eval(c: Configuration, sig: &Signature, fuel: u64) -> Outcome {
    let Configuration { mut diagram, term, mut fresh } = c;
    match run(&mut diagram, term, &mut fresh, sig, fuel) {
        Ok(Some(v)) => Outcome::Value(Configuration { diagram, term: v, fresh }),
        Ok(None) => Outcome::FuelExhausted,
        Err(e) => Outcome::Error(e),
    }
}

fn run(
    s: &mut LabelledDiagram,
    term: Term,
    gen: &mut FreshLabels,
    sig: &Signature,
    mut fuel: u64,
) -> Result<Option<Term>, RuntimeError> {
    let mut stack: Vec<Frame> = Vec::new();
    // Either a term to evaluate or a value to return to the top frame.
    let mut current = term;
    let mut returning = false;
    loop {
        if !returning {
            if is_value(&current) {
                if let TermKind::Var(x) = &current.kind {
                    return Err(stuck("var", alloc::format!("free variable `{x}`")));
                }
                returning = true;
                continue;
            }
            if fuel == 0 {
                return Ok(None);
            }
            fuel -= 1;
            let m = current;
            current = match m.kind {
                TermKind::Pair(a, b) => {
                    stack.push(Frame::PairL(*b));
                    *a
                }
                TermKind::Let(x, a, b) => {
                    stack.push(Frame::Let(x, *b));
                    *a
                }
                TermKind::LetPair(x, y, a, b) => {
                    stack.push(Frame::LetPair(x, y, *b));
                    *a
                }
                TermKind::Seq(a, b) => {
                    stack.push(Frame::Seq(*b));
                    *a
                }
                TermKind::Case(a, x, n, y, p) => {
                    stack.push(Frame::Case(x, *n, y, *p));
                    *a
                }
                TermKind::Left(t, a) => {
                    stack.push(Frame::Left(t));
                    *a
                }
                TermKind::Right(t, a) => {
                    stack.push(Frame::Right(t));
                    *a
                }
                TermKind::Initial(_, a) => {
                    stack.push(Frame::Initial);
                    *a
                }
                TermKind::App(f, a) => {
                    stack.push(Frame::AppL(*a));
                    *f
                }
                TermKind::Force(a) => {
                    stack.push(Frame::Force);
                    *a
                }
                TermKind::Box(t, a) => {
                    stack.push(Frame::Box(t));
                    *a
                }
                TermKind::Apply(a, b) => {
                    stack.push(Frame::ApplyL(*b));
                    *a
                }
                TermKind::Rec(x, t, body) => {
                    let again = Term::new(TermKind::Rec(x.clone(), t, body.clone()), m.span);
                    substitute(&body, &Term::lift(again), &x)
                }
                _ => unreachable!("values are handled above"),
            };
            continue;
        }

        // `current` is a value.
        let Some(frame) = stack.pop() else {
            return Ok(Some(current));
        };
        let v = current;
        returning = false;
        current = match frame {
            Frame::PairL(b) => {
                stack.push(Frame::PairR(v));
                b
            }
            Frame::PairR(a) => {
                returning = true;
                Term::pair(a, v)
            }
            Frame::Let(x, body) => substitute(&body, &v, &x),
            Frame::LetPair(x, y, body) => match v.kind {
                TermKind::Pair(a, b) => substitute_many(&body, &[(x, *a), (y, *b)]),
                _ => return Err(stuck("let-pair", alloc::format!("`{}` is not a pair", print_term(&v)))),
            },
            Frame::Seq(b) => match v.kind {
                TermKind::Star => b,
                _ => return Err(stuck("seq", alloc::format!("`{}` is not *", print_term(&v)))),
            },
            Frame::Case(x, n, y, p) => match v.kind {
                TermKind::Left(_, w) => substitute(&n, &w, &x),
                TermKind::Right(_, w) => substitute(&p, &w, &y),
                _ => return Err(stuck("case", alloc::format!("`{}` is not an injection", print_term(&v)))),
            },
            Frame::Left(t) => {
                returning = true;
                Term::left(t, v)
            }
            Frame::Right(t) => {
                returning = true;
                Term::right(t, v)
            }
            Frame::Initial => return Err(stuck("initial", alloc::format!("`{}` has no cases", print_term(&v)))),
            Frame::AppL(a) => {
                stack.push(Frame::AppR(v));
                a
            }
            Frame::AppR(f) => match f.kind {
                TermKind::Lambda(x, _, body) => substitute(&body, &v, &x),
                TermKind::Const(c) => {
                    let g = sig.generator(c.as_str()).ok_or_else(|| stuck("const", alloc::format!("unknown generator `{c}`")))?;
                    let k = LabelTuple::from_term(&v)
                        .ok_or_else(|| stuck("const", alloc::format!("`{}` is not a label tuple", print_term(&v))))?;
                    let (s2, out) = apply_generator(s, g, &k, gen)
                        .ok_or_else(|| stuck("const", alloc::format!("cannot apply `{c}` to {k}")))?;
                    *s = s2;
                    returning = true;
                    out.to_term()
                }
                _ => return Err(stuck("app", alloc::format!("`{}` is not a function", print_term(&f)))),
            },
            Frame::Force => match v.kind {
                TermKind::Lift(m) => *m,
                _ => return Err(stuck("force", alloc::format!("`{}` is not lifted", print_term(&v)))),
            },
            Frame::Box(t) => match v.kind {
                TermKind::Lift(n) => {
                    let (q, inputs) = freshlabels(&t, gen);
                    let outer = core::mem::replace(s, LabelledDiagram::identity(&q));
                    stack.push(Frame::BoxReturn(outer, inputs.clone()));
                    Term::app(*n, inputs.to_term())
                }
                _ => return Err(stuck("box", alloc::format!("`{}` is not lifted", print_term(&v)))),
            },
            Frame::BoxReturn(outer, inputs) => {
                let outputs = LabelTuple::from_term(&v)
                    .ok_or_else(|| stuck("box", alloc::format!("`{}` is not a label tuple", print_term(&v))))?;
                let inner = core::mem::replace(s, outer);
                let ls = outputs.labels();
                if !outputs.is_linear() || ls.len() != inner.cod().len() || !ls.iter().all(|l| inner.cod().contains(l)) {
                    return Err(stuck("box", alloc::format!("{outputs} does not cover the outputs {}", inner.cod())));
                }
                returning = true;
                Term::new(TermKind::BoxedDiag(Arc::new(BoxedDiagram { inputs, diagram: inner, outputs })), Default::default())
            }
            Frame::ApplyL(b) => {
                stack.push(Frame::ApplyR(v));
                b
            }
            Frame::ApplyR(f) => {
                let TermKind::BoxedDiag(bd) = &f.kind else {
                    return Err(stuck("apply", alloc::format!("`{}` is not a boxed diagram", print_term(&f))));
                };
                let k = LabelTuple::from_term(&v)
                    .ok_or_else(|| stuck("apply", alloc::format!("`{}` is not a label tuple", print_term(&v))))?;
                let (s2, out) = append(s, &k, &bd.inputs, &bd.diagram, &bd.outputs, gen)
                    .ok_or_else(|| stuck("apply", alloc::format!("append is undefined for {k}")))?;
                *s = s2;
                returning = true;
                out.to_term()
            }
        };
    }
}

/// What running a closed program produced.
#[derive(Clone, Debug)]
pub struct RunReport {
    pub ty: Type,
    pub outcome: Outcome,
    /// Boxed diagrams found inside the value, left to right.
    pub boxed: Vec<Arc<BoxedDiagram>>,
    /// The value in surface syntax.
    pub printed: Option<String>,
}

impl RunReport {
    pub fn diagram(&self) -> Option<&LabelledDiagram> {
        self.outcome.value().map(|c| &c.diagram)
    }
}

/// Typechecks `m` in the empty contexts and evaluates it from the empty
/// diagram with a fresh label counter.
pub fn run_program(m: &Term, sig: &Signature, fuel: u64) -> Result<RunReport, TypeError> {
    let d = infer(sig, &VarContext::new(), &LabelContext::new(), m)?;
    let outcome = eval(Configuration::new(&LabelContext::new(), m.clone()), sig, fuel);
    let (boxed, printed) = match &outcome {
        Outcome::Value(c) => {
            let mut boxed = Vec::new();
            collect_boxed(&c.term, &mut boxed);
            (boxed, Some(print_term(&c.term)))
        }
        _ => (Vec::new(), None),
    };
    Ok(RunReport { ty: d.ty, outcome, boxed, printed })
}

fn collect_boxed(v: &Term, out: &mut Vec<Arc<BoxedDiagram>>) {
    if let TermKind::BoxedDiag(b) = &v.kind {
        out.push(b.clone());
    }
    // Boxed diagrams under `lift` or a lambda are not values yet.
    if matches!(v.kind, TermKind::Pair(..) | TermKind::Left(..) | TermKind::Right(..)) {
        v.for_each_child(&mut |c| collect_boxed(c, out));
    }
}
