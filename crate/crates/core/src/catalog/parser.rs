//! Recursive-descent parser for the corpus expression language.
//!
//! ```text
//! expr    = term { ("+" | "-") term } ;
//! term    = unary { "*" unary } ;
//! unary   = ("-" | "+") unary | power ;
//! power   = atom [ "^" integer ] ;
//! atom    = number | call | ident [ "[" ident "]" ] | "(" expr ")" ;
//! number  = integer [ "/" integer ] ;
//! call    = "sum" "(" expr ")" ;
//! ```
//!
//! `#` starts a comment running to the end of the line.

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use super::expr::{ExprNode, Pos};
use super::CatalogError;
use crate::poly::Rational;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Int(n) => format!("integer `{n}`"),
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Plus => "`+`".into(),
            Tok::Minus => "`-`".into(),
            Tok::Star => "`*`".into(),
            Tok::Slash => "`/`".into(),
            Tok::Caret => "`^`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::LBracket => "`[`".into(),
            Tok::RBracket => "`]`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

fn syntax(pos: Pos, msg: impl Into<String>) -> CatalogError {
    CatalogError::Syntax {
        line: pos.line,
        col: pos.col,
        msg: msg.into(),
    }
}

fn lex(text: &str) -> Result<Vec<(Tok, Pos)>, CatalogError> {
    let mut out = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let (mut i, mut line, mut col) = (0, 1, 1);
    while i < chars.len() {
        let c = chars[i];
        let pos = Pos { line, col };
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        if c == '#' {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            col += i - start;
            out.push((Tok::Int(s.parse().expect("digits parse")), pos));
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            col += i - start;
            out.push((Tok::Ident(s), pos));
            continue;
        }
        let tok = match c {
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '/' => Tok::Slash,
            '^' => Tok::Caret,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '[' => Tok::LBracket,
            ']' => Tok::RBracket,
            other => return Err(syntax(pos, format!("unexpected character `{other}`"))),
        };
        out.push((tok, pos));
        i += 1;
        col += 1;
    }
    out.push((Tok::Eof, Pos { line, col }));
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, Pos)>,
    at: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn pos(&self) -> Pos {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> (Tok, Pos) {
        let t = self.toks[self.at].clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn expect(&mut self, want: Tok) -> Result<(), CatalogError> {
        if *self.peek() == want {
            self.bump();
            Ok(())
        } else {
            Err(syntax(
                self.pos(),
                format!("expected {}, found {}", want.describe(), self.peek().describe()),
            ))
        }
    }

    fn expr(&mut self) -> Result<ExprNode, CatalogError> {
        let mut items = vec![self.term()?];
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    items.push(self.term()?);
                }
                Tok::Minus => {
                    self.bump();
                    items.push(ExprNode::Neg(Box::new(self.term()?)));
                }
                _ => break,
            }
        }
        Ok(if items.len() == 1 { items.pop().unwrap() } else { ExprNode::Add(items) })
    }

    fn term(&mut self) -> Result<ExprNode, CatalogError> {
        let mut items = vec![self.unary()?];
        loop {
            match self.peek() {
                Tok::Star => {
                    self.bump();
                    items.push(self.unary()?);
                }
                Tok::Slash => {
                    return Err(syntax(self.pos(), "`/` is only allowed between integer literals"))
                }
                Tok::Int(_) | Tok::Ident(_) | Tok::LParen => {
                    return Err(syntax(self.pos(), "implicit multiplication is not allowed; write `*`"))
                }
                _ => break,
            }
        }
        Ok(if items.len() == 1 { items.pop().unwrap() } else { ExprNode::Mul(items) })
    }

    fn unary(&mut self) -> Result<ExprNode, CatalogError> {
        match self.peek() {
            Tok::Minus => {
                self.bump();
                Ok(ExprNode::Neg(Box::new(self.unary()?)))
            }
            Tok::Plus => {
                self.bump();
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<ExprNode, CatalogError> {
        let base = self.atom()?;
        if *self.peek() != Tok::Caret {
            return Ok(base);
        }
        self.bump();
        let (tok, pos) = self.bump();
        match tok {
            Tok::Int(n) => {
                let e = n
                    .to_u32()
                    .ok_or_else(|| syntax(pos, format!("exponent {n} is too large")))?;
                Ok(ExprNode::Pow(Box::new(base), e))
            }
            Tok::Minus => Err(CatalogError::NegativeExponent {
                line: pos.line,
                col: pos.col,
            }),
            other => Err(syntax(
                pos,
                format!("exponent must be a non-negative integer literal, found {}", other.describe()),
            )),
        }
    }

    fn atom(&mut self) -> Result<ExprNode, CatalogError> {
        let (tok, pos) = self.bump();
        match tok {
            Tok::Int(n) => {
                if *self.peek() != Tok::Slash {
                    return Ok(ExprNode::Integer(n));
                }
                let slash = self.pos();
                self.bump();
                let (den_tok, den_pos) = self.bump();
                let Tok::Int(d) = den_tok else {
                    return Err(syntax(den_pos, "`/` must be followed by an integer literal"));
                };
                if d.is_zero() {
                    return Err(syntax(slash, "zero denominator"));
                }
                let r = Rational::new(n, d);
                Ok(if r.is_integer() {
                    ExprNode::Integer(r.to_integer())
                } else {
                    ExprNode::Rational(r)
                })
            }
            Tok::Ident(name) if name == "sum" && *self.peek() == Tok::LParen => {
                self.bump();
                let body = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok(ExprNode::Sum(Box::new(body), pos))
            }
            Tok::Ident(name) => {
                let index = if *self.peek() == Tok::LBracket {
                    self.bump();
                    let (t, p) = self.bump();
                    let Tok::Ident(ix) = t else {
                        return Err(syntax(p, "expected an index name inside `[...]`"));
                    };
                    self.expect(Tok::RBracket)?;
                    Some(ix)
                } else {
                    None
                };
                Ok(ExprNode::Variable { name, index, pos })
            }
            Tok::LParen => {
                let e = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok(e)
            }
            other => Err(syntax(pos, format!("expected an expression, found {}", other.describe()))),
        }
    }
}

/// Parses one expression into a tree. The whole input must be consumed.
pub fn parse_tree(text: &str) -> Result<ExprNode, CatalogError> {
    let mut p = Parser { toks: lex(text)?, at: 0 };
    let e = p.expr()?;
    if *p.peek() != Tok::Eof {
        return Err(syntax(p.pos(), format!("unexpected {}", p.peek().describe())));
    }
    Ok(e)
}
