//! Concrete syntax.
//!
//! ```text
//! program := ('signature' STRING)? ('def' IDENT '=' term ';;')* term
//! term    := expr (';' term)?
//! expr    := 'let' IDENT '=' term 'in' term
//!          | 'let' '<' IDENT ',' IDENT '>' '=' term 'in' term
//!          | '\' IDENT ':' type '.' term
//!          | 'rec' IDENT ':' type '.' term
//!          | 'case' term 'of' '{' 'left' IDENT '->' term '|' 'right' IDENT '->' term '}'
//!          | unary+
//! unary   := ('lift' | 'force' | 'box' '[' type ']' | 'initial' '[' type ']'
//!             | 'left' ('[' type ',' type ']')? | 'right' (...)?) unary
//!          | IDENT | '*' | '<' term ',' term '>' | 'apply' '(' term ',' term ')' | '(' term ')'
//! type    := sum ('-o' type)?       sum := tensor ('+' tensor)*
//! tensor  := pre ('*' pre)*         pre := '!' pre | '0' | 'I' | IDENT | 'Diag' '(' type ',' type ')' | '(' type ')'
//! ```
//!
//! `--` starts a line comment.

mod grammar;
mod lexer;
mod print;

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

pub use lexer::KEYWORDS;
pub use print::print_term;

use crate::diagram::Signature;
use crate::syntax::{MType, Name, Span, Term, TermKind, Type};
use grammar::Parser;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ParseErrorKind {
    Syntax { expected: Vec<String>, found: String },
    UnexpectedChar(char),
    UnterminatedString,
    /// `#l...` labels and `#diag{...}` values only come out of evaluation.
    InternalForm,
    NotAnMType(Type),
    UnknownWireType(Name),
    DuplicateDefinition(Name),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub kind: ParseErrorKind,
    pub span: Span,
    /// 1-based.
    pub line: usize,
    /// 1-based, in characters.
    pub column: usize,
}

impl ParseError {
    pub(crate) fn new(kind: ParseErrorKind, span: Span, src: &str) -> Self {
        let before = &src[..(span.start as usize).min(src.len())];
        let line = before.matches('\n').count() + 1;
        let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
        ParseError { kind, span, line, column }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: ", self.line, self.column)?;
        match &self.kind {
            ParseErrorKind::Syntax { expected, found } => {
                write!(f, "unexpected {found}")?;
                if !expected.is_empty() {
                    write!(f, ", expected one of {}", expected.join(", "))?;
                }
                Ok(())
            }
            ParseErrorKind::UnexpectedChar(c) => write!(f, "unexpected character {c:?}"),
            ParseErrorKind::UnterminatedString => f.write_str("unterminated string"),
            ParseErrorKind::InternalForm => f.write_str("labels and boxed diagrams cannot be written in source"),
            ParseErrorKind::NotAnMType(t) => write!(f, "`{t}` is not built from wires, I and *"),
            ParseErrorKind::UnknownWireType(w) => write!(f, "wire type `{w}` is not declared by the signature"),
            ParseErrorKind::DuplicateDefinition(x) => write!(f, "`{x}` is defined twice"),
        }
    }
}

/// A parsed program file before name resolution.
#[derive(Clone, Debug)]
pub struct SourceProgram {
    pub signature_path: Option<String>,
    pub definitions: Vec<(Name, Term)>,
    pub main: Term,
}

impl SourceProgram {
    /// Definitions as nested `let`s around `main`, with generator names
    /// resolved to constants. `src` is the text the program came from and is
    /// used only to locate errors.
    pub fn to_term(&self, sig: &Signature, src: &str) -> Result<Term, ParseError> {
        let mut m = self.main.clone();
        for (x, body) in self.definitions.iter().rev() {
            let span = body.span.join(m.span);
            m = Term::new(TermKind::Let(x.clone(), alloc::boxed::Box::new(body.clone()), alloc::boxed::Box::new(m)), span);
        }
        resolve(&m, sig, src)
    }
}

pub fn parse_program(src: &str) -> Result<SourceProgram, ParseError> {
    Parser::new(src)?.program()
}

/// Parses a single term and resolves it against `sig`.
pub fn parse_term(src: &str, sig: &Signature) -> Result<Term, ParseError> {
    resolve(&parse_raw_term(src)?, sig, src)
}

/// Parses a single term without resolving names: every identifier is a
/// variable and wire names are not checked.
pub fn parse_raw_term(src: &str) -> Result<Term, ParseError> {
    let mut p = Parser::new(src)?;
    let m = p.term()?;
    p.finish()?;
    Ok(m)
}

/// Parses a type; wire names are not checked.
pub fn parse_type(src: &str) -> Result<Type, ParseError> {
    let mut p = Parser::new(src)?;
    let t = p.ty()?;
    p.finish()?;
    Ok(t)
}

pub fn parse_mtype(src: &str) -> Result<MType, ParseError> {
    let mut p = Parser::new(src)?;
    let t = p.mtype()?;
    p.finish()?;
    Ok(t)
}

/// Turns free identifiers naming generators into constants and checks that
/// every wire type in an annotation is declared.
pub fn resolve(m: &Term, sig: &Signature, src: &str) -> Result<Term, ParseError> {
    resolve_in_scope(m, sig, src, &[])
}

/// As [`resolve`], with `bound` in scope around `m`.
pub fn resolve_in_scope(m: &Term, sig: &Signature, src: &str, bound: &[Name]) -> Result<Term, ParseError> {
    let mut bound = bound.to_vec();
    go(m, sig, src, &mut bound)
}

fn check_type(t: &Type, sig: &Signature, span: Span, src: &str) -> Result<(), ParseError> {
    let mut bad = None;
    t.for_each_wire(&mut |w| {
        if bad.is_none() && !sig.has_wire(w) {
            bad = Some(w.clone());
        }
    });
    match bad {
        Some(w) => Err(ParseError::new(ParseErrorKind::UnknownWireType(w), span, src)),
        None => Ok(()),
    }
}

fn go(m: &Term, sig: &Signature, src: &str, bound: &mut Vec<Name>) -> Result<Term, ParseError> {
    use alloc::boxed::Box as B;
    let rec = |n: &Term, bound: &mut Vec<Name>| go(n, sig, src, bound).map(B::new);
    let under = |xs: &[&Name], n: &Term, bound: &mut Vec<Name>| {
        let k = bound.len();
        bound.extend(xs.iter().map(|x| (*x).clone()));
        let r = go(n, sig, src, bound).map(B::new);
        bound.truncate(k);
        r
    };
    let kind = match &m.kind {
        TermKind::Var(x) => {
            if !bound.contains(x) && sig.generator(x.as_str()).is_some() {
                TermKind::Const(x.clone())
            } else {
                TermKind::Var(x.clone())
            }
        }
        TermKind::Const(_) | TermKind::Star | TermKind::Label(_) | TermKind::BoxedDiag(_) => m.kind.clone(),
        TermKind::Let(x, a, b) => TermKind::Let(x.clone(), rec(a, bound)?, under(&[x], b, bound)?),
        TermKind::Initial(t, a) => {
            check_type(t, sig, m.span, src)?;
            TermKind::Initial(t.clone(), rec(a, bound)?)
        }
        TermKind::Left(annot, a) | TermKind::Right(annot, a) => {
            if let Some((s, t)) = annot {
                check_type(s, sig, m.span, src)?;
                check_type(t, sig, m.span, src)?;
            }
            let a = rec(a, bound)?;
            if matches!(m.kind, TermKind::Left(..)) {
                TermKind::Left(annot.clone(), a)
            } else {
                TermKind::Right(annot.clone(), a)
            }
        }
        TermKind::Case(s, x, n, y, p) => {
            TermKind::Case(rec(s, bound)?, x.clone(), under(&[x], n, bound)?, y.clone(), under(&[y], p, bound)?)
        }
        TermKind::Seq(a, b) => TermKind::Seq(rec(a, bound)?, rec(b, bound)?),
        TermKind::Pair(a, b) => TermKind::Pair(rec(a, bound)?, rec(b, bound)?),
        TermKind::App(a, b) => TermKind::App(rec(a, bound)?, rec(b, bound)?),
        TermKind::Apply(a, b) => TermKind::Apply(rec(a, bound)?, rec(b, bound)?),
        TermKind::LetPair(x, y, a, b) => {
            TermKind::LetPair(x.clone(), y.clone(), rec(a, bound)?, under(&[x, y], b, bound)?)
        }
        TermKind::Lambda(x, t, b) => {
            check_type(t, sig, m.span, src)?;
            TermKind::Lambda(x.clone(), t.clone(), under(&[x], b, bound)?)
        }
        TermKind::Rec(x, t, b) => {
            check_type(t, sig, m.span, src)?;
            TermKind::Rec(x.clone(), t.clone(), under(&[x], b, bound)?)
        }
        TermKind::Lift(a) => TermKind::Lift(rec(a, bound)?),
        TermKind::Force(a) => TermKind::Force(rec(a, bound)?),
        TermKind::Box(t, a) => {
            check_type(&t.to_type(), sig, m.span, src)?;
            TermKind::Box(t.clone(), rec(a, bound)?)
        }
    };
    Ok(Term::new(kind, m.span))
}

/// Identifiers the parser would read as keywords or type tokens.
pub fn is_reserved(x: &str) -> bool {
    KEYWORDS.contains(&x) || x == "I" || x == "Diag"
}
