//! Surface syntax shared by simply-typed and System F terms.
//!
//! Terms: `\x:e. body` or `λx:e. body`, type abstraction `/\a. t` or `Λa. t`,
//! type application `t{T}`, application by left-associative juxtaposition.
//! Types: `e -> t` (right-associative), `forall a. T` or `∀a. T`.
//! The symbols `∃ ∀ ∧ ∨ ⊃` in term position stand for the constants
//! `exists forall and or implies`.

use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("syntax error at {position}: {message}")]
pub struct SyntaxError {
    pub position: usize,
    pub message: String,
}

impl SyntaxError {
    pub(crate) fn new(position: usize, message: impl Into<String>) -> Self {
        SyntaxError { position, message: message.into() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Token {
    Ident(String),
    Lambda,
    BigLambda,
    ForallSym,
    Colon,
    Dot,
    Arrow,
    LParen,
    RParen,
    LBrace,
    RBrace,
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Token::Ident(s) => write!(f, "`{s}`"),
            Token::Lambda => f.write_str("`\\`"),
            Token::BigLambda => f.write_str("`/\\`"),
            Token::ForallSym => f.write_str("`∀`"),
            Token::Colon => f.write_str("`:`"),
            Token::Dot => f.write_str("`.`"),
            Token::Arrow => f.write_str("`->`"),
            Token::LParen => f.write_str("`(`"),
            Token::RParen => f.write_str("`)`"),
            Token::LBrace => f.write_str("`{`"),
            Token::RBrace => f.write_str("`}`"),
        }
    }
}

pub(crate) fn is_ident_start(c: char) -> bool {
    c.is_alphanumeric() || c == '_'
}

fn is_ident_continue(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '\''
}

fn lex(text: &str) -> Result<Vec<(usize, Token)>, SyntaxError> {
    let mut out = Vec::new();
    let mut it = text.char_indices().peekable();
    while let Some((pos, c)) = it.next() {
        let tok = match c {
            c if c.is_whitespace() => continue,
            '\\' | 'λ' => Token::Lambda,
            'Λ' => Token::BigLambda,
            '/' => match it.next() {
                Some((_, '\\')) => Token::BigLambda,
                _ => return Err(SyntaxError::new(pos, "expected `/\\`")),
            },
            '-' => match it.next() {
                Some((_, '>')) => Token::Arrow,
                _ => return Err(SyntaxError::new(pos, "expected `->`")),
            },
            '→' => Token::Arrow,
            '∀' => Token::ForallSym,
            '∃' => Token::Ident("exists".into()),
            '∧' => Token::Ident("and".into()),
            '∨' => Token::Ident("or".into()),
            '⊃' => Token::Ident("implies".into()),
            ':' => Token::Colon,
            '.' => Token::Dot,
            '(' => Token::LParen,
            ')' => Token::RParen,
            '{' => Token::LBrace,
            '}' => Token::RBrace,
            c if is_ident_start(c) => {
                let mut name = String::from(c);
                while let Some(&(_, c)) = it.peek() {
                    if !is_ident_continue(c) {
                        break;
                    }
                    name.push(c);
                    it.next();
                }
                Token::Ident(name)
            }
            other => return Err(SyntaxError::new(pos, format!("unexpected character `{other}`"))),
        };
        out.push((pos, tok));
    }
    Ok(out)
}

/// Unresolved type syntax.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RawType {
    Name(String, usize),
    Arrow(Box<RawType>, Box<RawType>),
    Forall(String, Box<RawType>),
}

/// Unresolved term syntax; every identifier is still a name.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RawTerm {
    Name(String, usize),
    App(Box<RawTerm>, Box<RawTerm>),
    Lam(String, RawType, Box<RawTerm>),
    TyLam(String, Box<RawTerm>),
    TyApp(Box<RawTerm>, RawType),
}

struct Parser {
    toks: Vec<(usize, Token)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn new(text: &str) -> Result<Parser, SyntaxError> {
        Ok(Parser { toks: lex(text)?, pos: 0, end: text.len() })
    }

    fn peek(&self) -> Option<&Token> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(p, _)| *p)
    }

    fn unexpected(&self, wanted: &str) -> SyntaxError {
        match self.peek() {
            Some(t) => SyntaxError::new(self.offset(), format!("expected {wanted}, found {t}")),
            None => SyntaxError::new(self.end, format!("expected {wanted}, found end of input")),
        }
    }

    fn expect(&mut self, tok: Token, wanted: &str) -> Result<(), SyntaxError> {
        if self.peek() == Some(&tok) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.unexpected(wanted))
        }
    }

    fn ident(&mut self) -> Result<String, SyntaxError> {
        match self.peek() {
            Some(Token::Ident(s)) => {
                let s = s.clone();
                self.pos += 1;
                Ok(s)
            }
            _ => Err(self.unexpected("an identifier")),
        }
    }

    fn finish(&self) -> Result<(), SyntaxError> {
        if self.pos == self.toks.len() {
            Ok(())
        } else {
            Err(self.unexpected("end of input"))
        }
    }

    fn is_forall(&self) -> bool {
        matches!(self.peek(), Some(Token::ForallSym)) || matches!(self.peek(), Some(Token::Ident(s)) if s == "forall")
    }

    fn ty(&mut self) -> Result<RawType, SyntaxError> {
        if self.is_forall() {
            self.pos += 1;
            let var = self.ident()?;
            self.expect(Token::Dot, "`.`")?;
            return Ok(RawType::Forall(var, Box::new(self.ty()?)));
        }
        let left = self.ty_atom()?;
        if self.peek() == Some(&Token::Arrow) {
            self.pos += 1;
            Ok(RawType::Arrow(Box::new(left), Box::new(self.ty()?)))
        } else {
            Ok(left)
        }
    }

    fn ty_atom(&mut self) -> Result<RawType, SyntaxError> {
        let at = self.offset();
        match self.peek() {
            Some(Token::Ident(_)) => Ok(RawType::Name(self.ident()?, at)),
            Some(Token::LParen) => {
                self.pos += 1;
                let t = self.ty()?;
                self.expect(Token::RParen, "`)`")?;
                Ok(t)
            }
            _ => Err(self.unexpected("a type")),
        }
    }

    fn term(&mut self) -> Result<RawTerm, SyntaxError> {
        match self.peek() {
            Some(Token::Lambda) => {
                self.pos += 1;
                let var = self.ident()?;
                self.expect(Token::Colon, "`:` and a binder type")?;
                let ty = self.ty()?;
                self.expect(Token::Dot, "`.`")?;
                Ok(RawTerm::Lam(var, ty, Box::new(self.term()?)))
            }
            Some(Token::BigLambda) => {
                self.pos += 1;
                let var = self.ident()?;
                self.expect(Token::Dot, "`.`")?;
                Ok(RawTerm::TyLam(var, Box::new(self.term()?)))
            }
            _ => {
                let mut head = self.postfix()?;
                loop {
                    match self.peek() {
                        Some(Token::Ident(_) | Token::LParen | Token::ForallSym) => {
                            let arg = self.postfix()?;
                            head = RawTerm::App(Box::new(head), Box::new(arg));
                        }
                        // a trailing abstraction extends as far as possible
                        Some(Token::Lambda | Token::BigLambda) => {
                            let arg = self.term()?;
                            return Ok(RawTerm::App(Box::new(head), Box::new(arg)));
                        }
                        _ => return Ok(head),
                    }
                }
            }
        }
    }

    fn postfix(&mut self) -> Result<RawTerm, SyntaxError> {
        let mut t = self.atom()?;
        while self.peek() == Some(&Token::LBrace) {
            self.pos += 1;
            let ty = self.ty()?;
            self.expect(Token::RBrace, "`}`")?;
            t = RawTerm::TyApp(Box::new(t), ty);
        }
        Ok(t)
    }

    fn atom(&mut self) -> Result<RawTerm, SyntaxError> {
        let at = self.offset();
        match self.peek() {
            Some(Token::Ident(_)) => Ok(RawTerm::Name(self.ident()?, at)),
            Some(Token::ForallSym) => {
                self.pos += 1;
                Ok(RawTerm::Name("forall".into(), at))
            }
            Some(Token::LParen) => {
                self.pos += 1;
                let t = self.term()?;
                self.expect(Token::RParen, "`)`")?;
                Ok(t)
            }
            _ => Err(self.unexpected("a term")),
        }
    }
}

pub fn parse_raw_type(text: &str) -> Result<RawType, SyntaxError> {
    let mut p = Parser::new(text)?;
    let t = p.ty()?;
    p.finish()?;
    Ok(t)
}

pub fn parse_raw_term(text: &str) -> Result<RawTerm, SyntaxError> {
    let mut p = Parser::new(text)?;
    let t = p.term()?;
    p.finish()?;
    Ok(t)
}

/// Appends primes to `hint` until `taken` rejects it no more.
pub(crate) fn fresh_name(hint: &str, taken: impl Fn(&str) -> bool) -> String {
    let mut name = if hint.is_empty() { "x".to_string() } else { hint.to_string() };
    while taken(&name) {
        name.push('\'');
    }
    name
}
