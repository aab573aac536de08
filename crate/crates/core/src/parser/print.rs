use alloc::string::String;
use core::fmt::Write;

use crate::syntax::{Term, TermKind};

// Levels, loosest first: sequence, binder forms, application, prefix
// operators, atoms.
const SEQ: u8 = 0;
const BINDER: u8 = 1;
const APP: u8 = 2;
const UNARY: u8 = 3;
const ATOM: u8 = 4;

/// Surface syntax for `m`. Internal forms (labels and boxed diagrams) print
/// as `#l0` and `#diag{...}`, which the parser refuses.
pub fn print_term(m: &Term) -> String {
    let mut out = String::new();
    go(m, SEQ, &mut out);
    out
}

fn level(m: &Term) -> u8 {
    match &m.kind {
        TermKind::Seq(..) => SEQ,
        TermKind::Let(..) | TermKind::LetPair(..) | TermKind::Lambda(..) | TermKind::Rec(..) | TermKind::Case(..) => {
            BINDER
        }
        TermKind::App(..) => APP,
        TermKind::Lift(_)
        | TermKind::Force(_)
        | TermKind::Box(..)
        | TermKind::Initial(..)
        | TermKind::Left(..)
        | TermKind::Right(..) => UNARY,
        _ => ATOM,
    }
}

fn go(m: &Term, ctx: u8, out: &mut String) {
    let paren = level(m) < ctx;
    if paren {
        out.push('(');
    }
    match &m.kind {
        TermKind::Var(x) | TermKind::Const(x) => out.push_str(x.as_str()),
        TermKind::Label(l) => out.push_str(l.as_str()),
        TermKind::Star => out.push('*'),
        TermKind::Seq(a, b) => {
            go(a, APP, out);
            out.push_str("; ");
            go(b, SEQ, out);
        }
        TermKind::Let(x, a, b) => {
            let _ = write!(out, "let {x} = ");
            go(a, SEQ, out);
            out.push_str(" in ");
            go(b, SEQ, out);
        }
        TermKind::LetPair(x, y, a, b) => {
            let _ = write!(out, "let <{x}, {y}> = ");
            go(a, SEQ, out);
            out.push_str(" in ");
            go(b, SEQ, out);
        }
        TermKind::Lambda(x, t, b) => {
            let _ = write!(out, "\\{x}:{t}. ");
            go(b, SEQ, out);
        }
        TermKind::Rec(x, t, b) => {
            let _ = write!(out, "rec {x}:{t}. ");
            go(b, SEQ, out);
        }
        TermKind::Case(s, x, n, y, p) => {
            out.push_str("case ");
            go(s, SEQ, out);
            let _ = write!(out, " of {{ left {x} -> ");
            go(n, SEQ, out);
            let _ = write!(out, " | right {y} -> ");
            go(p, SEQ, out);
            out.push_str(" }");
        }
        TermKind::App(f, a) => {
            go(f, APP, out);
            out.push(' ');
            go(a, ATOM, out);
        }
        TermKind::Lift(a) => prefix("lift", a, out),
        TermKind::Force(a) => prefix("force", a, out),
        TermKind::Box(t, a) => prefix(&alloc::format!("box[{t}]"), a, out),
        TermKind::Initial(t, a) => prefix(&alloc::format!("initial[{t}]"), a, out),
        TermKind::Left(annot, a) | TermKind::Right(annot, a) => {
            let kw = if matches!(m.kind, TermKind::Left(..)) { "left" } else { "right" };
            match annot {
                Some((s, t)) => prefix(&alloc::format!("{kw}[{s}, {t}]"), a, out),
                None => prefix(kw, a, out),
            }
        }
        TermKind::Pair(a, b) => {
            out.push('<');
            go(a, SEQ, out);
            out.push_str(", ");
            go(b, SEQ, out);
            out.push('>');
        }
        TermKind::Apply(a, b) => {
            out.push_str("apply(");
            go(a, SEQ, out);
            out.push_str(", ");
            go(b, SEQ, out);
            out.push(')');
        }
        TermKind::BoxedDiag(bd) => {
            let _ = write!(out, "#diag{{{} | {:?} | {}}}", bd.inputs, bd.diagram, bd.outputs);
        }
    }
    if paren {
        out.push(')');
    }
}

fn prefix(kw: &str, a: &Term, out: &mut String) {
    out.push_str(kw);
    out.push(' ');
    go(a, UNARY, out);
}
