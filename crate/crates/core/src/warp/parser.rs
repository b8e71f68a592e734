//! Recursive-descent parser for the warp expression language.
//!
//! ```text
//! expr   := term (('+'|'-') term)*
//! term   := factor (('*'|'/') factor)*
//! factor := ('-')? power
//! power  := atom ('^' factor)?
//! atom   := number | 'r' | 's' | 'pi' | 'e' | ident '(' expr ')' | '(' expr ')'
//! ```

use super::expr::{BinOp, Constant, Func, Var, WarpExpr};
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    Empty,
    UnexpectedChar(char),
    BadNumber(String),
    UnknownIdentifier(String),
    /// Function applied to a number of arguments other than one.
    Arity { name: String, found: usize },
    UnbalancedParen,
    UnexpectedEnd,
    UnexpectedToken(String),
}

/// Parse failure with a 0-based character offset into the source.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub kind: ParseErrorKind,
    pub position: usize,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = self.position;
        match &self.kind {
            ParseErrorKind::Empty => write!(f, "empty expression"),
            ParseErrorKind::UnexpectedChar(c) => write!(f, "unexpected character '{c}' at position {p}"),
            ParseErrorKind::BadNumber(t) => write!(f, "malformed number '{t}' at position {p}"),
            ParseErrorKind::UnknownIdentifier(t) => write!(f, "unknown identifier '{t}' at position {p}"),
            ParseErrorKind::Arity { name, found } => {
                write!(f, "{name} takes 1 argument, found {found} (position {p})")
            }
            ParseErrorKind::UnbalancedParen => write!(f, "unbalanced parenthesis at position {p}"),
            ParseErrorKind::UnexpectedEnd => write!(f, "syntax error at position {p}: unexpected end of input"),
            ParseErrorKind::UnexpectedToken(t) => write!(f, "syntax error at position {p}: unexpected '{t}'"),
        }
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Op(char),
    LParen,
    RParen,
    Comma,
}

impl Tok {
    fn text(&self) -> String {
        match self {
            Tok::Num(v) => format!("{v}"),
            Tok::Ident(s) => s.clone(),
            Tok::Op(c) => c.to_string(),
            Tok::LParen => "(".into(),
            Tok::RParen => ")".into(),
            Tok::Comma => ",".into(),
        }
    }
}

fn lex(src: &str) -> Result<(Vec<(Tok, usize)>, usize), ParseError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        if c.is_ascii_digit() || c == '.' {
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                i += 1;
            }
            // An exponent only when digits follow; otherwise `e` is the constant.
            if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                let mut j = i + 1;
                if j < chars.len() && (chars[j] == '+' || chars[j] == '-') {
                    j += 1;
                }
                if j < chars.len() && chars[j].is_ascii_digit() {
                    i = j;
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                    }
                }
            }
            let text: String = chars[start..i].iter().collect();
            let v: f64 = text.parse().map_err(|_| ParseError {
                kind: ParseErrorKind::BadNumber(text.clone()),
                position: start,
            })?;
            out.push((Tok::Num(v), start));
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push((Tok::Ident(chars[start..i].iter().collect()), start));
            continue;
        }
        let tok = match c {
            '+' | '-' | '*' | '/' | '^' => Tok::Op(c),
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            ',' => Tok::Comma,
            _ => {
                return Err(ParseError {
                    kind: ParseErrorKind::UnexpectedChar(c),
                    position: start,
                })
            }
        };
        out.push((tok, start));
        i += 1;
    }
    Ok((out, chars.len()))
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.0)
    }

    fn here(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |t| t.1)
    }

    fn err(&self, kind: ParseErrorKind) -> ParseError {
        ParseError {
            kind,
            position: self.here(),
        }
    }

    fn expr(&mut self) -> Result<WarpExpr, ParseError> {
        let mut lhs = self.term()?;
        while let Some(Tok::Op(c @ ('+' | '-'))) = self.peek() {
            let op = if *c == '+' { BinOp::Add } else { BinOp::Sub };
            self.pos += 1;
            let rhs = self.term()?;
            lhs = WarpExpr::bin(op, lhs, rhs);
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<WarpExpr, ParseError> {
        let mut lhs = self.factor()?;
        while let Some(Tok::Op(c @ ('*' | '/'))) = self.peek() {
            let op = if *c == '*' { BinOp::Mul } else { BinOp::Div };
            self.pos += 1;
            let rhs = self.factor()?;
            lhs = WarpExpr::bin(op, lhs, rhs);
        }
        Ok(lhs)
    }

    fn factor(&mut self) -> Result<WarpExpr, ParseError> {
        if let Some(Tok::Op('-')) = self.peek() {
            self.pos += 1;
            return Ok(WarpExpr::neg(self.power()?));
        }
        self.power()
    }

    fn power(&mut self) -> Result<WarpExpr, ParseError> {
        let base = self.atom()?;
        if let Some(Tok::Op('^')) = self.peek() {
            self.pos += 1;
            let exponent = self.factor()?;
            return Ok(WarpExpr::bin(BinOp::Pow, base, exponent));
        }
        Ok(base)
    }

    fn close_paren(&mut self, open_at: usize) -> Result<(), ParseError> {
        match self.peek() {
            Some(Tok::RParen) => {
                self.pos += 1;
                Ok(())
            }
            None => Err(ParseError {
                kind: ParseErrorKind::UnbalancedParen,
                position: open_at,
            }),
            Some(t) => Err(self.err(ParseErrorKind::UnexpectedToken(t.text()))),
        }
    }

    fn atom(&mut self) -> Result<WarpExpr, ParseError> {
        let Some((tok, at)) = self.toks.get(self.pos).cloned() else {
            return Err(self.err(ParseErrorKind::UnexpectedEnd));
        };
        self.pos += 1;
        match tok {
            Tok::Num(v) => Ok(WarpExpr::Num(v)),
            Tok::LParen => {
                let inner = self.expr()?;
                self.close_paren(at)?;
                Ok(inner)
            }
            Tok::Ident(name) => match name.as_str() {
                "r" => Ok(WarpExpr::Var(Var::R)),
                "s" => Ok(WarpExpr::Var(Var::S)),
                "pi" => Ok(WarpExpr::Const(Constant::Pi)),
                "e" => Ok(WarpExpr::Const(Constant::E)),
                _ => {
                    let Some(func) = Func::from_name(&name) else {
                        return Err(ParseError {
                            kind: ParseErrorKind::UnknownIdentifier(name),
                            position: at,
                        });
                    };
                    let open_at = self.here();
                    match self.peek() {
                        Some(Tok::LParen) => self.pos += 1,
                        _ => {
                            return Err(self.err(ParseErrorKind::Arity {
                                name,
                                found: 0,
                            }))
                        }
                    }
                    if let Some(Tok::RParen) = self.peek() {
                        return Err(self.err(ParseErrorKind::Arity { name, found: 0 }));
                    }
                    let arg = self.expr()?;
                    if let Some(Tok::Comma) = self.peek() {
                        let comma_at = self.here();
                        let mut found = 1;
                        while let Some(Tok::Comma) = self.peek() {
                            self.pos += 1;
                            self.expr()?;
                            found += 1;
                        }
                        return Err(ParseError {
                            kind: ParseErrorKind::Arity { name, found },
                            position: comma_at,
                        });
                    }
                    self.close_paren(open_at)?;
                    Ok(WarpExpr::func(func, arg))
                }
            },
            Tok::RParen => Err(ParseError {
                kind: ParseErrorKind::UnbalancedParen,
                position: at,
            }),
            other => Err(ParseError {
                kind: ParseErrorKind::UnexpectedToken(other.text()),
                position: at,
            }),
        }
    }
}

pub fn parse_warp(text: &str) -> Result<WarpExpr, ParseError> {
    let (toks, end) = lex(text)?;
    if toks.is_empty() {
        return Err(ParseError {
            kind: ParseErrorKind::Empty,
            position: 0,
        });
    }
    let mut p = Parser { toks, pos: 0, end };
    let e = p.expr()?;
    match p.peek() {
        None => Ok(e),
        Some(Tok::RParen) => Err(p.err(ParseErrorKind::UnbalancedParen)),
        Some(t) => {
            let text = t.text();
            Err(p.err(ParseErrorKind::UnexpectedToken(text)))
        }
    }
}
