use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use super::{ParseError, ParseErrorKind};
use crate::syntax::Span;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    Str(String),
    Zero,
    // keywords
    Let,
    In,
    Case,
    Of,
    Left,
    Right,
    Box,
    Apply,
    Lift,
    Force,
    Rec,
    Initial,
    Def,
    Signature,
    // punctuation
    Backslash,
    Dot,
    Colon,
    LParen,
    RParen,
    LAngle,
    RAngle,
    LBracket,
    RBracket,
    LBrace,
    RBrace,
    Comma,
    Semi,
    SemiSemi,
    Star,
    Plus,
    Lolli,
    Bang,
    Bar,
    Arrow,
    Eq,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Tok::Ident(x) => return write!(f, "identifier `{x}`"),
            Tok::Str(s) => return write!(f, "string {s:?}"),
            Tok::Zero => "`0`",
            Tok::Let => "`let`",
            Tok::In => "`in`",
            Tok::Case => "`case`",
            Tok::Of => "`of`",
            Tok::Left => "`left`",
            Tok::Right => "`right`",
            Tok::Box => "`box`",
            Tok::Apply => "`apply`",
            Tok::Lift => "`lift`",
            Tok::Force => "`force`",
            Tok::Rec => "`rec`",
            Tok::Initial => "`initial`",
            Tok::Def => "`def`",
            Tok::Signature => "`signature`",
            Tok::Backslash => "`\\`",
            Tok::Dot => "`.`",
            Tok::Colon => "`:`",
            Tok::LParen => "`(`",
            Tok::RParen => "`)`",
            Tok::LAngle => "`<`",
            Tok::RAngle => "`>`",
            Tok::LBracket => "`[`",
            Tok::RBracket => "`]`",
            Tok::LBrace => "`{`",
            Tok::RBrace => "`}`",
            Tok::Comma => "`,`",
            Tok::Semi => "`;`",
            Tok::SemiSemi => "`;;`",
            Tok::Star => "`*`",
            Tok::Plus => "`+`",
            Tok::Lolli => "`-o`",
            Tok::Bang => "`!`",
            Tok::Bar => "`|`",
            Tok::Arrow => "`->`",
            Tok::Eq => "`=`",
            Tok::Eof => "end of input",
        };
        f.write_str(s)
    }
}

pub const KEYWORDS: &[&str] =
    &["let", "in", "case", "of", "left", "right", "box", "apply", "lift", "force", "rec", "initial", "def", "signature"];

fn keyword(s: &str) -> Option<Tok> {
    Some(match s {
        "let" => Tok::Let,
        "in" => Tok::In,
        "case" => Tok::Case,
        "of" => Tok::Of,
        "left" => Tok::Left,
        "right" => Tok::Right,
        "box" => Tok::Box,
        "apply" => Tok::Apply,
        "lift" => Tok::Lift,
        "force" => Tok::Force,
        "rec" => Tok::Rec,
        "initial" => Tok::Initial,
        "def" => Tok::Def,
        "signature" => Tok::Signature,
        _ => return None,
    })
}

pub fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

pub fn is_ident_continue(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '\''
}

pub fn tokenize(src: &str) -> Result<Vec<(Tok, Span)>, ParseError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    let err = |kind, start: usize, end: usize| Err(ParseError::new(kind, Span::new(start, end), src));
    while i < bytes.len() {
        let c = bytes[i] as char;
        let start = i;
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        if src[i..].starts_with("--") {
            while i < bytes.len() && bytes[i] != b'\n' {
                i += 1;
            }
            continue;
        }
        let two = |s: &str| src[i..].starts_with(s);
        let (tok, len) = if two("-o") && !src[i + 2..].starts_with(is_ident_continue) {
            (Tok::Lolli, 2)
        } else if two("->") {
            (Tok::Arrow, 2)
        } else if two(";;") {
            (Tok::SemiSemi, 2)
        } else if is_ident_start(c) {
            let mut j = i + 1;
            while j < bytes.len() && is_ident_continue(bytes[j] as char) {
                j += 1;
            }
            let word = &src[i..j];
            (keyword(word).unwrap_or_else(|| Tok::Ident(String::from(word))), j - i)
        } else if c == '"' {
            let mut j = i + 1;
            let mut s = String::new();
            loop {
                match src[j..].chars().next() {
                    None | Some('\n') => return err(ParseErrorKind::UnterminatedString, start, j),
                    Some('"') => break,
                    Some('\\') if src[j + 1..].starts_with(['"', '\\']) => {
                        s.push(bytes[j + 1] as char);
                        j += 2;
                    }
                    Some(ch) => {
                        s.push(ch);
                        j += ch.len_utf8();
                    }
                }
            }
            (Tok::Str(s), j + 1 - i)
        } else if c == '#' {
            let mut j = i + 1;
            while j < bytes.len() && (is_ident_continue(bytes[j] as char) || bytes[j] == b'{') {
                j += 1;
            }
            return err(ParseErrorKind::InternalForm, start, j);
        } else {
            let t = match c {
                '0' => Tok::Zero,
                '\\' => Tok::Backslash,
                '.' => Tok::Dot,
                ':' => Tok::Colon,
                '(' => Tok::LParen,
                ')' => Tok::RParen,
                '<' => Tok::LAngle,
                '>' => Tok::RAngle,
                '[' => Tok::LBracket,
                ']' => Tok::RBracket,
                '{' => Tok::LBrace,
                '}' => Tok::RBrace,
                ',' => Tok::Comma,
                ';' => Tok::Semi,
                '*' => Tok::Star,
                '+' => Tok::Plus,
                '!' => Tok::Bang,
                '|' => Tok::Bar,
                '=' => Tok::Eq,
                _ => {
                    let ch = src[i..].chars().next().unwrap();
                    return err(ParseErrorKind::UnexpectedChar(ch), start, i + ch.len_utf8());
                }
            };
            (t, 1)
        };
        i += len;
        out.push((tok, Span::new(start, i)));
    }
    out.push((Tok::Eof, Span::new(src.len(), src.len())));
    Ok(out)
}
