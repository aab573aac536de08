use alloc::boxed::Box;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use super::lexer::{tokenize, Tok};
use super::{ParseError, ParseErrorKind, SourceProgram};
use crate::syntax::{MType, Name, Span, Term, TermKind, Type};

pub(super) struct Parser<'a> {
    src: &'a str,
    toks: Vec<(Tok, Span)>,
    pos: usize,
    /// Tokens that would have been accepted at `pos`, for error messages.
    expected: Vec<&'static str>,
}

type PResult<T> = Result<T, ParseError>;

impl<'a> Parser<'a> {
    pub fn new(src: &'a str) -> PResult<Self> {
        Ok(Parser { src, toks: tokenize(src)?, pos: 0, expected: Vec::new() })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn span(&self) -> Span {
        self.toks[self.pos].1
    }

    fn prev_end(&self) -> u32 {
        if self.pos == 0 {
            0
        } else {
            self.toks[self.pos - 1].1.end
        }
    }

    fn since(&self, start: u32) -> Span {
        Span { start, end: self.prev_end().max(start) }
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if t != Tok::Eof {
            self.pos += 1;
        }
        self.expected.clear();
        t
    }

    fn check(&mut self, t: &Tok, what: &'static str) -> bool {
        if self.peek() == t {
            true
        } else {
            self.expected.push(what);
            false
        }
    }

    fn eat(&mut self, t: &Tok, what: &'static str) -> bool {
        if self.check(t, what) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, t: &Tok, what: &'static str) -> PResult<()> {
        if self.eat(t, what) {
            Ok(())
        } else {
            Err(self.unexpected())
        }
    }

    fn unexpected(&mut self) -> ParseError {
        let mut expected: Vec<String> = self.expected.iter().map(|s| s.to_string()).collect();
        expected.sort();
        expected.dedup();
        let found = self.peek().to_string();
        ParseError::new(ParseErrorKind::Syntax { expected, found }, self.span(), self.src)
    }

    fn ident(&mut self) -> PResult<Name> {
        if let Tok::Ident(x) = self.peek() {
            let x = Name::new(x);
            self.bump();
            Ok(x)
        } else {
            self.expected.push("identifier");
            Err(self.unexpected())
        }
    }

    pub fn finish(&mut self) -> PResult<()> {
        self.expect(&Tok::Eof, "end of input")
    }

    pub fn program(&mut self) -> PResult<SourceProgram> {
        let mut signature_path = None;
        if self.eat(&Tok::Signature, "`signature`") {
            match self.bump() {
                Tok::Str(s) => signature_path = Some(s),
                _ => {
                    self.pos -= 1;
                    self.expected.push("string");
                    return Err(self.unexpected());
                }
            }
        }
        let mut definitions: Vec<(Name, Term)> = Vec::new();
        while self.check(&Tok::Def, "`def`") {
            let start = self.span();
            self.bump();
            let name = self.ident()?;
            if definitions.iter().any(|(n, _)| *n == name) {
                return Err(ParseError::new(
                    ParseErrorKind::DuplicateDefinition(name),
                    Span { start: start.start, end: self.prev_end() },
                    self.src,
                ));
            }
            self.expect(&Tok::Eq, "`=`")?;
            let body = self.term()?;
            self.expect(&Tok::SemiSemi, "`;;`")?;
            definitions.push((name, body));
        }
        let main = self.term()?;
        self.finish()?;
        Ok(SourceProgram { signature_path, definitions, main })
    }

    // term := expr (';' term)?
    pub fn term(&mut self) -> PResult<Term> {
        let start = self.span().start;
        let first = self.expr()?;
        if self.eat(&Tok::Semi, "`;`") {
            let rest = self.term()?;
            return Ok(Term::new(TermKind::Seq(Box::new(first), Box::new(rest)), self.since(start)));
        }
        Ok(first)
    }

    fn expr(&mut self) -> PResult<Term> {
        let start = self.span().start;
        let kind = match self.peek() {
            Tok::Let => {
                self.bump();
                if self.eat(&Tok::LAngle, "`<`") {
                    let x = self.ident()?;
                    self.expect(&Tok::Comma, "`,`")?;
                    let y = self.ident()?;
                    self.expect(&Tok::RAngle, "`>`")?;
                    self.expect(&Tok::Eq, "`=`")?;
                    let m = self.term()?;
                    self.expect(&Tok::In, "`in`")?;
                    let n = self.term()?;
                    TermKind::LetPair(x, y, Box::new(m), Box::new(n))
                } else {
                    let x = self.ident()?;
                    self.expect(&Tok::Eq, "`=`")?;
                    let m = self.term()?;
                    self.expect(&Tok::In, "`in`")?;
                    let n = self.term()?;
                    TermKind::Let(x, Box::new(m), Box::new(n))
                }
            }
            Tok::Backslash | Tok::Rec => {
                let is_rec = self.bump() == Tok::Rec;
                let x = self.ident()?;
                self.expect(&Tok::Colon, "`:`")?;
                let t = self.ty()?;
                self.expect(&Tok::Dot, "`.`")?;
                let body = Box::new(self.term()?);
                if is_rec {
                    TermKind::Rec(x, t, body)
                } else {
                    TermKind::Lambda(x, t, body)
                }
            }
            Tok::Case => {
                self.bump();
                let m = self.term()?;
                self.expect(&Tok::Of, "`of`")?;
                self.expect(&Tok::LBrace, "`{`")?;
                self.expect(&Tok::Left, "`left`")?;
                let x = self.ident()?;
                self.expect(&Tok::Arrow, "`->`")?;
                let n = self.term()?;
                self.expect(&Tok::Bar, "`|`")?;
                self.expect(&Tok::Right, "`right`")?;
                let y = self.ident()?;
                self.expect(&Tok::Arrow, "`->`")?;
                let p = self.term()?;
                self.expect(&Tok::RBrace, "`}`")?;
                TermKind::Case(Box::new(m), x, Box::new(n), y, Box::new(p))
            }
            _ => {
                self.expected.extend(["`let`", "`\\`", "`rec`", "`case`"]);
                return self.app();
            }
        };
        Ok(Term::new(kind, self.since(start)))
    }

    fn starts_unary(&self) -> bool {
        matches!(
            self.peek(),
            Tok::Ident(_)
                | Tok::Star
                | Tok::LAngle
                | Tok::LParen
                | Tok::Apply
                | Tok::Lift
                | Tok::Force
                | Tok::Box
                | Tok::Left
                | Tok::Right
                | Tok::Initial
        )
    }

    fn app(&mut self) -> PResult<Term> {
        let start = self.span().start;
        let mut head = self.unary()?;
        while self.starts_unary() {
            let arg = self.unary()?;
            head = Term::new(TermKind::App(Box::new(head), Box::new(arg)), self.since(start));
        }
        Ok(head)
    }

    fn unary(&mut self) -> PResult<Term> {
        let start = self.span().start;
        let kind = match self.peek() {
            Tok::Lift | Tok::Force => {
                let lift = self.bump() == Tok::Lift;
                let m = Box::new(self.unary()?);
                if lift {
                    TermKind::Lift(m)
                } else {
                    TermKind::Force(m)
                }
            }
            Tok::Box => {
                self.bump();
                self.expect(&Tok::LBracket, "`[`")?;
                let t = self.mtype()?;
                self.expect(&Tok::RBracket, "`]`")?;
                TermKind::Box(t, Box::new(self.unary()?))
            }
            Tok::Initial => {
                self.bump();
                self.expect(&Tok::LBracket, "`[`")?;
                let t = self.ty()?;
                self.expect(&Tok::RBracket, "`]`")?;
                TermKind::Initial(t, Box::new(self.unary()?))
            }
            Tok::Left | Tok::Right => {
                let left = self.bump() == Tok::Left;
                let annot = if self.eat(&Tok::LBracket, "`[`") {
                    let a = self.ty()?;
                    self.expect(&Tok::Comma, "`,`")?;
                    let b = self.ty()?;
                    self.expect(&Tok::RBracket, "`]`")?;
                    Some((a, b))
                } else {
                    None
                };
                let m = Box::new(self.unary()?);
                if left {
                    TermKind::Left(annot, m)
                } else {
                    TermKind::Right(annot, m)
                }
            }
            _ => {
                self.expected.extend(["`lift`", "`force`", "`box`", "`initial`", "`left`", "`right`"]);
                return self.atom();
            }
        };
        Ok(Term::new(kind, self.since(start)))
    }

    fn atom(&mut self) -> PResult<Term> {
        let start = self.span().start;
        let kind = match self.peek().clone() {
            Tok::Ident(x) => {
                self.bump();
                TermKind::Var(Name::new(&x))
            }
            Tok::Star => {
                self.bump();
                TermKind::Star
            }
            Tok::LAngle => {
                self.bump();
                let m = self.term()?;
                self.expect(&Tok::Comma, "`,`")?;
                let n = self.term()?;
                self.expect(&Tok::RAngle, "`>`")?;
                TermKind::Pair(Box::new(m), Box::new(n))
            }
            Tok::Apply => {
                self.bump();
                self.expect(&Tok::LParen, "`(`")?;
                let m = self.term()?;
                self.expect(&Tok::Comma, "`,`")?;
                let n = self.term()?;
                self.expect(&Tok::RParen, "`)`")?;
                TermKind::Apply(Box::new(m), Box::new(n))
            }
            Tok::LParen => {
                self.bump();
                let m = self.term()?;
                self.expect(&Tok::RParen, "`)`")?;
                return Ok(m.with_span(self.since(start)));
            }
            _ => {
                self.expected.extend(["identifier", "`*`", "`<`", "`apply`", "`(`"]);
                return Err(self.unexpected());
            }
        };
        Ok(Term::new(kind, self.since(start)))
    }

    // type := sum ('-o' type)?
    pub fn ty(&mut self) -> PResult<Type> {
        let a = self.sum_ty()?;
        if self.eat(&Tok::Lolli, "`-o`") {
            let b = self.ty()?;
            return Ok(Type::lolli(a, b));
        }
        Ok(a)
    }

    fn sum_ty(&mut self) -> PResult<Type> {
        let mut a = self.tensor_ty()?;
        while self.eat(&Tok::Plus, "`+`") {
            let b = self.tensor_ty()?;
            a = Type::sum(a, b);
        }
        Ok(a)
    }

    fn tensor_ty(&mut self) -> PResult<Type> {
        let mut a = self.prefix_ty()?;
        while self.eat(&Tok::Star, "`*`") {
            let b = self.prefix_ty()?;
            a = Type::tensor(a, b);
        }
        Ok(a)
    }

    fn prefix_ty(&mut self) -> PResult<Type> {
        if self.eat(&Tok::Bang, "`!`") {
            return Ok(Type::bang(self.prefix_ty()?));
        }
        match self.peek().clone() {
            Tok::Zero => {
                self.bump();
                Ok(Type::Zero)
            }
            Tok::Ident(x) if x == "I" => {
                self.bump();
                Ok(Type::Unit)
            }
            Tok::Ident(x) if x == "Diag" => {
                self.bump();
                self.expect(&Tok::LParen, "`(`")?;
                let a = self.mtype()?;
                self.expect(&Tok::Comma, "`,`")?;
                let b = self.mtype()?;
                self.expect(&Tok::RParen, "`)`")?;
                Ok(Type::Diag(a, b))
            }
            Tok::Ident(x) => {
                self.bump();
                Ok(Type::Wire(Name::new(&x)))
            }
            Tok::LParen => {
                self.bump();
                let t = self.ty()?;
                self.expect(&Tok::RParen, "`)`")?;
                Ok(t)
            }
            _ => {
                self.expected.extend(["type", "`!`", "`(`"]);
                Err(self.unexpected())
            }
        }
    }

    pub fn mtype(&mut self) -> PResult<MType> {
        let start = self.span();
        let t = self.ty()?;
        t.as_mtype().ok_or_else(|| {
            ParseError::new(ParseErrorKind::NotAnMType(t), Span { start: start.start, end: self.prev_end() }, self.src)
        })
    }
}
