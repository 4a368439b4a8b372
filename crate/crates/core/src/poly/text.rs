//! Text forms: canonical descending-power expressions and hex masks.
//!
//! Grammar accepted by [`parse_with`]:
//!
//! ```text
//! input  := hex | expr
//! hex    := "0x" hexdigit+            bit i of the integer = coefficient of x^i
//! expr   := term ("+" term)*
//! term   := power (("*" | "·")? power)*
//! power  := atom ("^" uint)?
//! atom   := "x" | "0" | "1" | "(" expr ")" | "bar" "(" expr ")" | name
//! ```
//!
//! Names (`M1`, `M_2`, `T5`, `B9`, `M3bar`, ...) are looked up through a
//! [`ParseAliases`] resolver; underscores inside names are ignored.

use super::Poly;
use crate::error::{Error, Result};

/// Largest exponent the parser will expand.
const MAX_EXPONENT: u64 = 1 << 20;

/// Name lookup used while parsing.
pub trait ParseAliases {
    fn resolve(&self, name: &str) -> Option<Poly>;
}

impl ParseAliases for () {
    fn resolve(&self, _: &str) -> Option<Poly> {
        None
    }
}

impl<F: Fn(&str) -> Option<Poly>> ParseAliases for F {
    fn resolve(&self, name: &str) -> Option<Poly> {
        self(name)
    }
}

/// Canonical expression: descending powers joined by `+`, `0` for zero.
pub(crate) fn format(p: &Poly) -> String {
    if p.is_zero() {
        return "0".to_owned();
    }
    let terms: Vec<String> = p
        .exponents()
        .map(|e| match e {
            0 => "1".to_owned(),
            1 => "x".to_owned(),
            _ => format!("x^{e}"),
        })
        .collect();
    terms.join("+")
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Plus,
    Star,
    Caret,
    LParen,
    RParen,
    Num(u64),
    Ident(String),
}

fn err(pos: usize, msg: impl Into<String>) -> Error {
    Error::Parse { pos, msg: msg.into() }
}

fn lex(s: &str) -> Result<Vec<(usize, Tok)>> {
    let mut out = Vec::new();
    let mut chars = s.char_indices().peekable();
    while let Some(&(pos, c)) = chars.peek() {
        match c {
            c if c.is_whitespace() => {
                chars.next();
            }
            '+' => {
                chars.next();
                out.push((pos, Tok::Plus));
            }
            '*' | '·' => {
                chars.next();
                out.push((pos, Tok::Star));
            }
            '^' => {
                chars.next();
                out.push((pos, Tok::Caret));
            }
            '(' => {
                chars.next();
                out.push((pos, Tok::LParen));
            }
            ')' => {
                chars.next();
                out.push((pos, Tok::RParen));
            }
            '0'..='9' => {
                let mut n: u64 = 0;
                while let Some(&(_, d)) = chars.peek() {
                    let Some(v) = d.to_digit(10) else { break };
                    n = n
                        .checked_mul(10)
                        .and_then(|n| n.checked_add(v as u64))
                        .ok_or_else(|| err(pos, "integer literal overflows"))?;
                    chars.next();
                }
                out.push((pos, Tok::Num(n)));
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let mut word = String::new();
                while let Some(&(_, d)) = chars.peek() {
                    if d.is_ascii_alphanumeric() || d == '_' {
                        word.push(d);
                        chars.next();
                    } else {
                        break;
                    }
                }
                out.push((pos, Tok::Ident(word)));
            }
            other => return Err(err(pos, format!("unexpected character {other:?}"))),
        }
    }
    Ok(out)
}

struct Parser<'a, A: ParseAliases + ?Sized> {
    toks: Vec<(usize, Tok)>,
    at: usize,
    end: usize,
    aliases: &'a A,
}

impl<A: ParseAliases + ?Sized> Parser<'_, A> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(_, t)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map_or(self.end, |(p, _)| *p)
    }

    fn expect(&mut self, want: Tok) -> Result<()> {
        if self.peek() == Some(&want) {
            self.at += 1;
            Ok(())
        } else {
            Err(err(self.pos(), format!("expected {want:?}")))
        }
    }

    fn expr(&mut self) -> Result<Poly> {
        let mut acc = self.term()?;
        while self.peek() == Some(&Tok::Plus) {
            self.at += 1;
            acc += &self.term()?;
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Poly> {
        let mut acc = self.power()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.at += 1;
                    acc = &acc * &self.power()?;
                }
                Some(Tok::LParen) | Some(Tok::Ident(_)) => {
                    acc = &acc * &self.power()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn power(&mut self) -> Result<Poly> {
        let base = self.atom()?;
        if self.peek() != Some(&Tok::Caret) {
            return Ok(base);
        }
        self.at += 1;
        let pos = self.pos();
        match self.peek() {
            Some(&Tok::Num(n)) if n <= MAX_EXPONENT => {
                self.at += 1;
                Ok(base.pow(n))
            }
            Some(Tok::Num(_)) => Err(err(pos, "exponent too large")),
            _ => Err(err(pos, "expected an integer exponent")),
        }
    }

    fn atom(&mut self) -> Result<Poly> {
        let pos = self.pos();
        let Some(tok) = self.peek().cloned() else {
            return Err(err(pos, "unexpected end of input"));
        };
        self.at += 1;
        match tok {
            Tok::Num(0) => Ok(Poly::zero()),
            Tok::Num(1) => Ok(Poly::one()),
            Tok::Num(n) => Err(err(pos, format!("constant {n} is not a GF(2) element"))),
            Tok::LParen => {
                let inner = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok(inner)
            }
            Tok::Ident(word) if word == "x" => Ok(Poly::x()),
            Tok::Ident(word) if word == "bar" => {
                self.expect(Tok::LParen)?;
                let inner = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok(inner.bar())
            }
            Tok::Ident(word) => {
                let key: String = word.chars().filter(|&c| c != '_').collect();
                self.aliases
                    .resolve(&key)
                    .ok_or_else(|| err(pos, format!("unknown name {word:?}")))
            }
            other => Err(err(pos, format!("unexpected token {other:?}"))),
        }
    }
}

fn parse_hex(digits: &str, pos: usize) -> Result<Poly> {
    let digits: String = digits.chars().filter(|&c| c != '_').collect();
    if digits.is_empty() {
        return Err(err(pos, "empty hex mask"));
    }
    let mut limbs = Vec::new();
    let bytes = digits.as_bytes();
    let mut end = bytes.len();
    while end > 0 {
        let start = end.saturating_sub(16);
        let chunk = &digits[start..end];
        let w = u64::from_str_radix(chunk, 16)
            .map_err(|_| err(pos + start, format!("invalid hex digits {chunk:?}")))?;
        limbs.push(w);
        end = start;
    }
    Ok(Poly::from_limbs(limbs))
}

/// Parses an expression or hex mask, resolving names through `aliases`.
pub fn parse_with<A: ParseAliases + ?Sized>(s: &str, aliases: &A) -> Result<Poly> {
    let trimmed = s.trim();
    if trimmed.is_empty() {
        return Err(err(0, "empty input"));
    }
    let offset = s.len() - s.trim_start().len();
    if let Some(hex) = trimmed
        .strip_prefix("0x")
        .or_else(|| trimmed.strip_prefix("0X"))
    {
        return parse_hex(hex, offset + 2);
    }
    let mut parser = Parser {
        toks: lex(s)?,
        at: 0,
        end: s.len(),
        aliases,
    };
    let p = parser.expr()?;
    if parser.at != parser.toks.len() {
        return Err(err(parser.pos(), "trailing input"));
    }
    Ok(p)
}
