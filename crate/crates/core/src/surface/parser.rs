use std::collections::HashMap;

use crate::syntax::{Ctor, NameSupply, SourceSpan, Term, TermKind, TermVar, TyVar, Type};

use super::lexer::{tokenize, Tok, Token};
use super::ParseError;

const MAX_DEPTH: usize = 256;

/// Parsing state shared across several inputs: a name supply, and an interner
/// so that the same free type-variable name always denotes the same variable.
#[derive(Debug, Default)]
pub struct Session {
    pub supply: NameSupply,
    free: HashMap<String, TyVar>,
}

impl Session {
    pub fn new() -> Session {
        Session { supply: NameSupply::new(), free: HashMap::new() }
    }

    /// The variable a free occurrence of `name` denotes.
    pub fn free_var(&mut self, name: &str) -> TyVar {
        if let Some(a) = self.free.get(name) {
            return a.clone();
        }
        let a = self.supply.named(name);
        self.free.insert(name.to_string(), a.clone());
        a
    }

    pub fn parse_term(&mut self, src: &str) -> Result<Term, ParseError> {
        let mut p = Parser::new(src, self)?;
        let m = p.term()?;
        p.expect_eof()?;
        Ok(m)
    }

    pub fn parse_type(&mut self, src: &str) -> Result<Type, ParseError> {
        let mut p = Parser::new(src, self)?;
        let t = p.ty()?;
        p.expect_eof()?;
        Ok(t)
    }

    /// A file: any number of `val NAME : TYPE` declarations, then an optional
    /// expression.
    pub fn parse_program(&mut self, src: &str) -> Result<Program, ParseError> {
        let mut p = Parser::new(src, self)?;
        let mut decls = Vec::new();
        while p.peek() == &Tok::Val {
            p.bump();
            let span = p.span();
            let name = p.ident()?;
            p.expect(Tok::Colon)?;
            let t = p.ty()?;
            decls.push(Decl { name: TermVar::new(&name), ty: t, span });
        }
        let body = if p.peek() == &Tok::Eof { None } else { Some(p.term()?) };
        p.expect_eof()?;
        Ok(Program { decls, body })
    }
}

#[derive(Clone, Debug)]
pub struct Decl {
    pub name: TermVar,
    pub ty: Type,
    pub span: SourceSpan,
}

#[derive(Clone, Debug)]
pub struct Program {
    pub decls: Vec<Decl>,
    pub body: Option<Term>,
}

pub fn parse_term(src: &str) -> Result<Term, ParseError> {
    Session::new().parse_term(src)
}

pub fn parse_type(src: &str) -> Result<Type, ParseError> {
    Session::new().parse_type(src)
}

struct Parser<'s> {
    toks: Vec<Token>,
    pos: usize,
    scope: Vec<(String, TyVar)>,
    depth: usize,
    session: &'s mut Session,
}

impl<'s> Parser<'s> {
    fn new(src: &str, session: &'s mut Session) -> Result<Parser<'s>, ParseError> {
        Ok(Parser { toks: tokenize(src)?, pos: 0, scope: Vec::new(), depth: 0, session })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn span(&self) -> SourceSpan {
        self.toks[self.pos].span
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn prev_end(&self) -> usize {
        if self.pos == 0 {
            0
        } else {
            self.toks[self.pos - 1].span.end
        }
    }

    fn spanning(&self, start: SourceSpan) -> SourceSpan {
        SourceSpan { end: self.prev_end().max(start.start), ..start }
    }

    fn error(&self, expected: &[&str]) -> ParseError {
        let found = self.peek().describe();
        let message = if expected.is_empty() {
            format!("unexpected {found}")
        } else {
            format!("expected {}, found {found}", expected.join(" or "))
        };
        ParseError::new(self.span(), &message, expected.iter().map(|s| s.to_string()).collect())
    }

    fn expect(&mut self, tok: Tok) -> Result<Token, ParseError> {
        if *self.peek() == tok {
            Ok(self.bump())
        } else {
            Err(self.error(&[&tok.describe()]))
        }
    }

    fn expect_eof(&self) -> Result<(), ParseError> {
        if *self.peek() == Tok::Eof {
            Ok(())
        } else {
            Err(self.error(&["end of input"]))
        }
    }

    fn ident(&mut self) -> Result<String, ParseError> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.bump();
                Ok(s)
            }
            _ => Err(self.error(&["identifier"])),
        }
    }

    fn enter(&mut self) -> Result<(), ParseError> {
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            return Err(ParseError::new(self.span(), "input nested too deeply", vec![]));
        }
        Ok(())
    }

    fn leave(&mut self) {
        self.depth -= 1;
    }

    // ---- types ----

    fn ty(&mut self) -> Result<Type, ParseError> {
        self.enter()?;
        let out = self.ty_inner();
        self.leave();
        out
    }

    fn ty_inner(&mut self) -> Result<Type, ParseError> {
        if *self.peek() == Tok::Forall {
            self.bump();
            let mut vars = Vec::new();
            while let Tok::Ident(name) = self.peek().clone() {
                self.bump();
                vars.push((name.clone(), self.session.supply.named(&name)));
            }
            if vars.is_empty() {
                return Err(self.error(&["type variable"]));
            }
            self.expect(Tok::Dot)?;
            let depth = self.scope.len();
            self.scope.extend(vars.iter().cloned());
            let body = self.ty();
            self.scope.truncate(depth);
            let vs: Vec<TyVar> = vars.into_iter().map(|(_, v)| v).collect();
            return Ok(Type::forall(&vs, body?));
        }
        let lhs = self.ty_app()?;
        if *self.peek() == Tok::Arrow {
            self.bump();
            let rhs = self.ty()?;
            return Ok(Type::arrow(lhs, rhs));
        }
        Ok(lhs)
    }

    fn ty_app(&mut self) -> Result<Type, ParseError> {
        if let Tok::Upper(name) = self.peek().clone() {
            if Ctor::from_name(&name) == Some(Ctor::List) {
                self.bump();
                self.enter()?;
                let arg = if matches!(self.peek(), Tok::Upper(n) if n == "List") {
                    self.ty_app()
                } else {
                    self.ty_atom()
                };
                self.leave();
                return Ok(Type::list(arg?));
            }
        }
        self.ty_atom()
    }

    fn ty_atom(&mut self) -> Result<Type, ParseError> {
        match self.peek().clone() {
            Tok::Ident(name) => {
                self.bump();
                Ok(Type::Var(self.lookup_tyvar(&name)))
            }
            Tok::Upper(name) => match Ctor::from_name(&name) {
                Some(d) if d.arity() == 0 => {
                    self.bump();
                    Ok(Type::Ctor(d, vec![]))
                }
                Some(d) => Err(ParseError::new(
                    self.span(),
                    &format!("type constructor `{}` expects {} argument(s)", name, d.arity()),
                    vec!["type".into()],
                )),
                None => Err(ParseError::new(
                    self.span(),
                    &format!("unknown type constructor `{name}`"),
                    vec!["Int".into(), "Unit".into(), "Bool".into(), "List".into()],
                )),
            },
            Tok::LParen => {
                self.bump();
                let first = self.ty()?;
                if *self.peek() == Tok::Comma {
                    self.bump();
                    let second = self.ty()?;
                    self.expect(Tok::RParen)?;
                    return Ok(Type::product(first, second));
                }
                self.expect(Tok::RParen)?;
                Ok(first)
            }
            _ => Err(self.error(&["type"])),
        }
    }

    fn lookup_tyvar(&mut self, name: &str) -> TyVar {
        for (n, v) in self.scope.iter().rev() {
            if n == name {
                return v.clone();
            }
        }
        self.session.free_var(name)
    }

    // ---- terms ----

    fn term(&mut self) -> Result<Term, ParseError> {
        self.enter()?;
        let out = self.term_inner();
        self.leave();
        out
    }

    fn term_inner(&mut self) -> Result<Term, ParseError> {
        match self.peek() {
            Tok::Fun => self.lambda(),
            Tok::Let => self.let_term(),
            _ => self.application(),
        }
    }

    fn binder(&mut self) -> Result<(String, Option<Type>), ParseError> {
        match self.peek().clone() {
            Tok::Ident(x) => {
                self.bump();
                Ok((x, None))
            }
            Tok::LParen => {
                self.bump();
                let x = self.ident()?;
                self.expect(Tok::Colon)?;
                let t = self.ty()?;
                self.expect(Tok::RParen)?;
                Ok((x, Some(t)))
            }
            _ => Err(self.error(&["identifier", "`(`"])),
        }
    }

    fn lambda(&mut self) -> Result<Term, ParseError> {
        let start = self.bump().span;
        let (x, ann) = self.binder()?;
        self.expect(Tok::Arrow)?;
        let body = self.term()?;
        let span = self.spanning(start);
        Ok(match ann {
            None => Term::new(TermKind::Lam(TermVar::new(&x), Box::new(body))),
            Some(a) => Term::new(TermKind::LamAnn(TermVar::new(&x), a, Box::new(body))),
        }
        .at(span))
    }

    fn let_term(&mut self) -> Result<Term, ParseError> {
        let start = self.bump().span;
        let (x, ann) = self.binder()?;
        self.expect(Tok::Equals)?;
        let bound = match &ann {
            None => self.term()?,
            Some(a) => {
                // Prefix binders scope over the bound term; well-formedness
                // later rejects their use when the bound term is not guarded.
                let (prefix, _) = a.prenex();
                let depth = self.scope.len();
                self.scope.extend(prefix.into_iter().map(|v| (v.name.to_string(), v)));
                let m = self.term();
                self.scope.truncate(depth);
                m?
            }
        };
        self.expect(Tok::In)?;
        let body = self.term()?;
        let span = self.spanning(start);
        let x = TermVar::new(&x);
        Ok(match ann {
            None => Term::new(TermKind::Let(x, Box::new(bound), Box::new(body))),
            Some(a) => Term::new(TermKind::LetAnn(x, a, Box::new(bound), Box::new(body))),
        }
        .at(span))
    }

    fn starts_atom(&self) -> bool {
        matches!(self.peek(), Tok::Ident(_) | Tok::Int(_) | Tok::Tilde | Tok::LParen)
    }

    fn application(&mut self) -> Result<Term, ParseError> {
        let start = self.span();
        if !self.starts_atom() {
            return Err(self.error(&["term"]));
        }
        let mut head = self.atom()?;
        loop {
            if self.starts_atom() {
                let arg = self.atom()?;
                head = Term::app(head, arg).at(self.spanning(start));
            } else if matches!(self.peek(), Tok::Fun | Tok::Let) {
                let arg = self.term()?;
                head = Term::app(head, arg).at(self.spanning(start));
                break;
            } else {
                break;
            }
        }
        Ok(head)
    }

    fn atom(&mut self) -> Result<Term, ParseError> {
        let start = self.span();
        match self.peek().clone() {
            Tok::Ident(x) => {
                self.bump();
                Ok(Term::var(&x).at(start))
            }
            Tok::Int(n) => {
                self.bump();
                Ok(Term::var(&n).at(start))
            }
            Tok::Tilde => {
                self.bump();
                match self.peek().clone() {
                    Tok::Ident(x) => {
                        self.bump();
                        Ok(Term::frozen(&x).at(self.spanning(start)))
                    }
                    _ => Err(self.error(&["identifier"])),
                }
            }
            Tok::LParen => {
                self.bump();
                let m = self.term()?;
                self.expect(Tok::RParen)?;
                Ok(m)
            }
            _ => Err(self.error(&["term"])),
        }
    }
}
