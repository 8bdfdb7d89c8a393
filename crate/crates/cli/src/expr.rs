//! Lexer and recursive-descent parser for the expression language.
//!
//! ```text
//! expr   := term (('+'|'-') term)*
//! term   := factor (('*'|'/') factor)*
//! factor := '-' factor | base ('^' int)?
//! base   := rational | ident | derivs | '(' expr ')'
//! derivs := ident ('\'')+ | ident '^(' int ')'
//! ```

use std::fmt;

use num_bigint::BigInt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SyntaxError {
    pub pos: usize,
    pub msg: String,
}

impl fmt::Display for SyntaxError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "at column {}: {}", self.pos + 1, self.msg)
    }
}

impl std::error::Error for SyntaxError {}

fn err<T>(pos: usize, msg: impl Into<String>) -> Result<T, SyntaxError> {
    Err(SyntaxError { pos, msg: msg.into() })
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Prime,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, SyntaxError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let b = bytes[i];
        let start = i;
        let tok = match b {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'0'..=b'9' => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                out.push((start, Tok::Int(text[start..i].parse().expect("digits"))));
                continue;
            }
            b'a'..=b'z' | b'A'..=b'Z' | b'_' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push((start, Tok::Ident(text[start..i].to_string())));
                continue;
            }
            b'\'' => Tok::Prime,
            b'+' => Tok::Plus,
            b'-' => Tok::Minus,
            b'*' => Tok::Star,
            b'/' => Tok::Slash,
            b'^' => Tok::Caret,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            _ => {
                let c = text[i..].chars().next().expect("in bounds");
                return err(i, format!("unexpected character '{c}'"));
            }
        };
        out.push((start, tok));
        i += 1;
    }
    Ok(out)
}

/// Parsed expression; positions are byte offsets into the source.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Ast {
    Int(BigInt),
    Ident { name: String, pos: usize },
    Deriv { name: String, order: usize, pos: usize },
    Neg(Box<Ast>),
    Add(Box<Ast>, Box<Ast>),
    Sub(Box<Ast>, Box<Ast>),
    Mul(Box<Ast>, Box<Ast>),
    Div(Box<Ast>, Box<Ast>, usize),
    Pow(Box<Ast>, i32, usize),
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    i: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.i).map(|(_, t)| t)
    }

    fn peek_at(&self, k: usize) -> Option<&Tok> {
        self.toks.get(self.i + k).map(|(_, t)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.i).map_or(self.end, |(p, _)| *p)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.i).map(|(_, t)| t.clone());
        self.i += 1;
        t
    }

    fn expect(&mut self, t: Tok, what: &str) -> Result<(), SyntaxError> {
        let pos = self.pos();
        match self.bump() {
            Some(ref got) if *got == t => Ok(()),
            _ => err(pos, format!("expected {what}")),
        }
    }

    fn int(&mut self) -> Result<i64, SyntaxError> {
        let pos = self.pos();
        let neg = if self.peek() == Some(&Tok::Minus) {
            self.i += 1;
            true
        } else {
            false
        };
        match self.bump() {
            Some(Tok::Int(n)) => {
                let n: i64 = n.try_into().or_else(|_| err(pos, "integer too large"))?;
                Ok(if neg { -n } else { n })
            }
            _ => err(pos, "expected an integer"),
        }
    }

    fn expr(&mut self) -> Result<Ast, SyntaxError> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.i += 1;
                    lhs = Ast::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Some(Tok::Minus) => {
                    self.i += 1;
                    lhs = Ast::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Ast, SyntaxError> {
        let mut lhs = self.factor()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.i += 1;
                    lhs = Ast::Mul(Box::new(lhs), Box::new(self.factor()?));
                }
                Some(Tok::Slash) => {
                    let pos = self.pos();
                    self.i += 1;
                    lhs = Ast::Div(Box::new(lhs), Box::new(self.factor()?), pos);
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn factor(&mut self) -> Result<Ast, SyntaxError> {
        if self.peek() == Some(&Tok::Minus) {
            self.i += 1;
            return Ok(Ast::Neg(Box::new(self.factor()?)));
        }
        let base = self.base()?;
        if self.peek() == Some(&Tok::Caret) {
            let pos = self.pos();
            self.i += 1;
            let e = self.int()?;
            let e = i32::try_from(e).or_else(|_| err(pos, "exponent too large"))?;
            return Ok(Ast::Pow(Box::new(base), e, pos));
        }
        Ok(base)
    }

    fn base(&mut self) -> Result<Ast, SyntaxError> {
        let pos = self.pos();
        match self.bump() {
            Some(Tok::Int(n)) => Ok(Ast::Int(n)),
            Some(Tok::LParen) => {
                let e = self.expr()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(e)
            }
            Some(Tok::Ident(name)) => {
                let mut order = 0;
                while self.peek() == Some(&Tok::Prime) {
                    self.i += 1;
                    order += 1;
                }
                if order == 0 && self.peek() == Some(&Tok::Caret) && self.peek_at(1) == Some(&Tok::LParen) {
                    self.i += 2;
                    let n = self.int()?;
                    if n < 0 {
                        return err(pos, "negative derivative order");
                    }
                    self.expect(Tok::RParen, "')' after derivative order")?;
                    order = n as usize;
                }
                if order == 0 {
                    Ok(Ast::Ident { name, pos })
                } else {
                    Ok(Ast::Deriv { name, order, pos })
                }
            }
            Some(_) => err(pos, "expected a number, identifier or '('"),
            None => err(pos, "unexpected end of input"),
        }
    }
}

pub fn parse(text: &str) -> Result<Ast, SyntaxError> {
    let toks = lex(text)?;
    let mut p = Parser { toks, i: 0, end: text.len() };
    let e = p.expr()?;
    if p.i < p.toks.len() {
        return err(p.pos(), "unexpected trailing input");
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn id(name: &str, pos: usize) -> Ast {
        Ast::Ident { name: name.into(), pos }
    }

    #[test]
    fn precedence_and_derivatives() {
        let e = parse("u'' / u^3").unwrap();
        let want = Ast::Div(
            Box::new(Ast::Deriv { name: "u".into(), order: 2, pos: 0 }),
            Box::new(Ast::Pow(Box::new(id("u", 6)), 3, 7)),
            4,
        );
        assert_eq!(e, want);
        assert_eq!(parse("u^(4)").unwrap(), Ast::Deriv { name: "u".into(), order: 4, pos: 0 });
        let e = parse("-a + b").unwrap();
        assert_eq!(e, Ast::Add(Box::new(Ast::Neg(Box::new(id("a", 1)))), Box::new(id("b", 5))));
    }

    #[test]
    fn errors_carry_positions() {
        assert_eq!(parse("u + * 2").unwrap_err().pos, 4);
        assert_eq!(parse("(u").unwrap_err().pos, 2);
        assert_eq!(parse("u $").unwrap_err().pos, 2);
        assert_eq!(parse("u)").unwrap_err().msg, "unexpected trailing input");
    }
}
