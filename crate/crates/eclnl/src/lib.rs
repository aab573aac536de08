//! File formats, program loading and the test corpus for the `eclnl`
//! language. The calculus itself lives in `eclnl-core`.

#![allow(clippy::result_large_err)]

pub mod corpus;
pub mod dot;
pub mod json;

use std::path::{Path, PathBuf};

use eclnl_core::{
    parse_program, ParseError, SignatureError, Signature, SourceProgram, Span, Term, TypeError,
};
use eclnl_core::DiagramError;
use serde::Serialize;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{0}")]
    Parse(ParseError),
    #[error("{0}")]
    Type(TypeError),
    #[error("{0}")]
    Signature(SignatureError),
    #[error("{0}")]
    Diagram(DiagramError),
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{0}")]
    Format(String),
}

impl From<ParseError> for Error {
    fn from(e: ParseError) -> Self {
        Error::Parse(e)
    }
}

impl From<SignatureError> for Error {
    fn from(e: SignatureError) -> Self {
        Error::Signature(e)
    }
}

impl From<DiagramError> for Error {
    fn from(e: DiagramError) -> Self {
        Error::Diagram(e)
    }
}

impl From<TypeError> for Error {
    fn from(e: TypeError) -> Self {
        Error::Type(e)
    }
}

pub fn read(path: &Path) -> Result<String, Error> {
    std::fs::read_to_string(path).map_err(|source| Error::Io { path: path.to_path_buf(), source })
}

/// 1-based line and column (in characters) of a byte offset.
pub fn line_col(src: &str, offset: usize) -> (usize, usize) {
    let offset = offset.min(src.len());
    let before = &src[..offset];
    let line = before.matches('\n').count() + 1;
    let col = before.rsplit('\n').next().unwrap_or("").chars().count() + 1;
    (line, col)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SpanInfo {
    pub line: usize,
    pub col: usize,
    pub len: usize,
}

/// A machine-readable static error.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Diagnostic {
    pub kind: String,
    pub span: Option<SpanInfo>,
    pub detail: String,
}

fn span_info(src: &str, span: Span) -> SpanInfo {
    let (line, col) = line_col(src, span.start as usize);
    SpanInfo { line, col, len: span.len() }
}

impl Diagnostic {
    pub fn new(e: &Error, src: &str) -> Self {
        let (kind, span) = match e {
            Error::Parse(p) => (parse_kind(p), Some(span_info(src, p.span))),
            Error::Type(t) => (t.kind.as_str().to_string(), Some(span_info(src, t.span))),
            Error::Io { .. } => ("Io".to_string(), None),
            Error::Signature(_) => ("Signature".to_string(), None),
            Error::Diagram(_) => ("Diagram".to_string(), None),
            Error::Json(_) | Error::Format(_) => ("Format".to_string(), None),
        };
        let detail = match e {
            Error::Parse(p) => {
                let full = p.to_string();
                let prefix = format!("{}:{}: ", p.line, p.column);
                full.strip_prefix(&prefix).map(str::to_string).unwrap_or(full)
            }
            _ => e.to_string(),
        };
        Diagnostic { kind, span, detail }
    }

    /// `file:line:col: detail`, or just the detail when there is no span.
    pub fn render(&self, file: &str) -> String {
        match &self.span {
            Some(s) => format!("{file}:{}:{}: {}", s.line, s.col, self.detail),
            // IO errors already name the path they concern.
            None if self.kind == "Io" => self.detail.clone(),
            None => format!("{file}: {}", self.detail),
        }
    }
}

fn parse_kind(p: &ParseError) -> String {
    use eclnl_core::ParseErrorKind as K;
    match p.kind {
        K::Syntax { .. } => "SyntaxError",
        K::UnexpectedChar(_) => "UnexpectedChar",
        K::UnterminatedString => "UnterminatedString",
        K::InternalForm => "InternalForm",
        K::NotAnMType(_) => "NotAnMType",
        K::UnknownWireType(_) => "UnknownWireType",
        K::DuplicateDefinition(_) => "DuplicateDefinition",
    }
    .to_string()
}

/// A program file with its signature resolved and its names bound.
#[derive(Clone, Debug)]
pub struct Loaded {
    pub src: String,
    pub program: SourceProgram,
    pub signature: Signature,
    pub term: Term,
}

/// Picks the signature: an explicit path, else the program's `signature`
/// line (relative to the program file), else the built-in demo signature.
pub fn resolve_signature(program: &SourceProgram, file: &Path, explicit: Option<&Path>) -> Result<Signature, Error> {
    let path = match (explicit, &program.signature_path) {
        (Some(p), _) => p.to_path_buf(),
        (None, Some(p)) => file.parent().unwrap_or(Path::new(".")).join(p),
        (None, None) => return Ok(Signature::demo()),
    };
    json::parse_signature(&read(&path)?)
}

pub fn load_source(src: String, file: &Path, explicit: Option<&Path>) -> Result<Loaded, (Error, String)> {
    let program = match parse_program(&src) {
        Ok(p) => p,
        Err(e) => return Err((e.into(), src)),
    };
    let signature = match resolve_signature(&program, file, explicit) {
        Ok(s) => s,
        Err(e) => return Err((e, src)),
    };
    match program.to_term(&signature, &src) {
        Ok(term) => Ok(Loaded { src, program, signature, term }),
        Err(e) => Err((e.into(), src)),
    }
}

/// Reads, parses and resolves a program file. Errors come with the text
/// they refer to, when there is one.
pub fn load_program(file: &Path, explicit: Option<&Path>) -> Result<Loaded, (Error, String)> {
    let src = read(file).map_err(|e| (e, String::new()))?;
    load_source(src, file, explicit)
}
