use crate::syntax::SourceSpan;

use super::ParseError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    Upper(String),
    Int(String),
    Fun,
    Let,
    In,
    Forall,
    Val,
    Tilde,
    LParen,
    RParen,
    Comma,
    Colon,
    Dot,
    Arrow,
    Equals,
    Eof,
}

impl Tok {
    pub fn describe(&self) -> String {
        match self {
            Tok::Ident(s) | Tok::Upper(s) | Tok::Int(s) => format!("`{s}`"),
            Tok::Fun => "`fun`".into(),
            Tok::Let => "`let`".into(),
            Tok::In => "`in`".into(),
            Tok::Forall => "`forall`".into(),
            Tok::Val => "`val`".into(),
            Tok::Tilde => "`~`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Colon => "`:`".into(),
            Tok::Dot => "`.`".into(),
            Tok::Arrow => "`->`".into(),
            Tok::Equals => "`=`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Token {
    pub tok: Tok,
    pub span: SourceSpan,
}

pub fn tokenize(src: &str) -> Result<Vec<Token>, ParseError> {
    let mut out = Vec::new();
    let mut chars = src.char_indices().peekable();
    let mut line = 1;
    let mut line_start = 0;
    let span = |start: usize, end: usize, line: usize, line_start: usize| SourceSpan {
        start,
        end,
        line,
        column: src[line_start..start].chars().count() + 1,
    };

    while let Some(&(i, c)) = chars.peek() {
        if c == '\n' {
            chars.next();
            line += 1;
            line_start = i + 1;
            continue;
        }
        if c.is_whitespace() {
            chars.next();
            continue;
        }
        if c == '-' && src[i..].starts_with("--") {
            while let Some(&(_, c)) = chars.peek() {
                if c == '\n' {
                    break;
                }
                chars.next();
            }
            continue;
        }
        let single = match c {
            '~' => Some(Tok::Tilde),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            ',' => Some(Tok::Comma),
            ':' => Some(Tok::Colon),
            '.' => Some(Tok::Dot),
            '=' => Some(Tok::Equals),
            '→' => Some(Tok::Arrow),
            '∀' => Some(Tok::Forall),
            _ => None,
        };
        if let Some(tok) = single {
            chars.next();
            out.push(Token { tok, span: span(i, i + c.len_utf8(), line, line_start) });
            continue;
        }
        if c == '-' {
            chars.next();
            if let Some(&(_, '>')) = chars.peek() {
                chars.next();
                out.push(Token { tok: Tok::Arrow, span: span(i, i + 2, line, line_start) });
                continue;
            }
            return Err(ParseError::new(span(i, i + 1, line, line_start), "unexpected `-`", vec!["`->`".into()]));
        }
        if c.is_ascii_digit() {
            let mut end = i;
            while let Some(&(j, d)) = chars.peek() {
                if !d.is_ascii_digit() {
                    break;
                }
                end = j + d.len_utf8();
                chars.next();
            }
            out.push(Token { tok: Tok::Int(src[i..end].to_string()), span: span(i, end, line, line_start) });
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let mut end = i;
            while let Some(&(j, d)) = chars.peek() {
                if !(d.is_ascii_alphanumeric() || d == '_' || d == '\'') {
                    break;
                }
                end = j + d.len_utf8();
                chars.next();
            }
            let text = &src[i..end];
            let tok = match text {
                "fun" => Tok::Fun,
                "let" => Tok::Let,
                "in" => Tok::In,
                "forall" => Tok::Forall,
                "val" => Tok::Val,
                _ if c.is_ascii_uppercase() => Tok::Upper(text.to_string()),
                _ => Tok::Ident(text.to_string()),
            };
            out.push(Token { tok, span: span(i, end, line, line_start) });
            continue;
        }
        return Err(ParseError::new(
            span(i, i + c.len_utf8(), line, line_start),
            &format!("unexpected character `{c}`"),
            vec![],
        ));
    }
    out.push(Token { tok: Tok::Eof, span: span(src.len(), src.len(), line, line_start) });
    Ok(out)
}
