use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;

use super::{GaussianRational, IndexLinearForm, SymbolicScalar};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    Imag(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn lex(text: &str) -> Result<Vec<Tok>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        match c {
            ' ' | '\t' | '\n' => i += 1,
            '+' => {
                out.push(Tok::Plus);
                i += 1;
            }
            '-' => {
                out.push(Tok::Minus);
                i += 1;
            }
            '*' => {
                out.push(Tok::Star);
                i += 1;
            }
            '/' => {
                out.push(Tok::Slash);
                i += 1;
            }
            '^' => {
                out.push(Tok::Caret);
                i += 1;
            }
            '(' => {
                out.push(Tok::LParen);
                i += 1;
            }
            ')' => {
                out.push(Tok::RParen);
                i += 1;
            }
            d if d.is_ascii_digit() => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let digits: String = chars[start..i].iter().collect();
                let n: BigInt = digits.parse().map_err(|_| Error::Parse(digits.clone()))?;
                // `2i` is an imaginary literal; `2in` is not.
                let imag = i < chars.len()
                    && chars[i] == 'i'
                    && !chars
                        .get(i + 1)
                        .is_some_and(|c| c.is_alphanumeric() || *c == '_');
                if imag {
                    out.push(Tok::Imag(n));
                    i += 1;
                } else {
                    out.push(Tok::Num(n));
                }
            }
            a if a.is_alphabetic() || a == '_' => {
                let start = i;
                while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                out.push(Tok::Ident(chars[start..i].iter().collect()));
            }
            other => return Err(Error::Parse(format!("unexpected character `{other}`"))),
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Tok>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == Some(t) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, t: &Tok) -> Result<()> {
        if self.eat(t) {
            Ok(())
        } else {
            Err(Error::Parse(format!(
                "expected {t:?}, found {:?}",
                self.peek()
            )))
        }
    }

    fn expr(&mut self) -> Result<SymbolicScalar> {
        let mut acc = self.term()?;
        loop {
            if self.eat(&Tok::Plus) {
                acc = &acc + &self.term()?;
            } else if self.eat(&Tok::Minus) {
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn starts_factor(&self) -> bool {
        matches!(
            self.peek(),
            Some(Tok::Num(_) | Tok::Imag(_) | Tok::Ident(_) | Tok::LParen)
        )
    }

    fn term(&mut self) -> Result<SymbolicScalar> {
        let mut acc = self.factor()?;
        loop {
            if self.eat(&Tok::Star) {
                acc = &acc * &self.factor()?;
            } else if self.eat(&Tok::Slash) {
                let d = self.factor()?;
                acc = &acc * &d.try_inverse()?;
            } else if self.starts_factor() {
                // juxtaposition multiplies
                acc = &acc * &self.factor()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn factor(&mut self) -> Result<SymbolicScalar> {
        if self.eat(&Tok::Minus) {
            return Ok(-self.factor()?);
        }
        if self.eat(&Tok::Plus) {
            return self.factor();
        }
        self.power()
    }

    fn power(&mut self) -> Result<SymbolicScalar> {
        if self.peek() == Some(&Tok::Ident("q".into())) {
            self.pos += 1;
            let exp = if self.eat(&Tok::Caret) {
                self.q_exponent()?
            } else {
                IndexLinearForm::constant(1)
            };
            return Ok(SymbolicScalar::q_pow(&exp));
        }
        let base = self.atom()?;
        if self.eat(&Tok::Caret) {
            let e = self.int_exponent()?;
            let e = i32::try_from(e).map_err(|_| Error::Parse("exponent too large".into()))?;
            base.pow_i(e)
        } else {
            Ok(base)
        }
    }

    fn q_exponent(&mut self) -> Result<IndexLinearForm> {
        let e = self.exponent_operand()?;
        e.as_index_form()
            .ok_or_else(|| Error::Parse(format!("q exponent `{e}` is not an integer affine form")))
    }

    fn int_exponent(&mut self) -> Result<i64> {
        let e = self.exponent_operand()?;
        e.as_index_form()
            .and_then(|f| f.as_constant())
            .ok_or_else(|| Error::Parse(format!("exponent `{e}` is not an integer")))
    }

    fn exponent_operand(&mut self) -> Result<SymbolicScalar> {
        if self.eat(&Tok::Minus) {
            return Ok(-self.exponent_operand()?);
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<SymbolicScalar> {
        match self.next() {
            Some(Tok::Num(n)) => Ok(SymbolicScalar::constant(GaussianRational::from(
                BigRational::from_integer(n),
            ))),
            Some(Tok::Imag(n)) => Ok(SymbolicScalar::constant(GaussianRational::new(
                BigRational::from_integer(0.into()),
                BigRational::from_integer(n),
            ))),
            Some(Tok::Ident(name)) => match name.as_str() {
                "i" => Ok(SymbolicScalar::i()),
                "q" => Err(Error::Parse("`q` cannot appear here".into())),
                _ => Ok(SymbolicScalar::symbol(&name)),
            },
            Some(Tok::LParen) => {
                let e = self.expr()?;
                self.expect(&Tok::RParen)?;
                Ok(e)
            }
            other => Err(Error::Parse(format!("unexpected token {other:?}"))),
        }
    }
}

/// Parses the canonical text form (and a little more: juxtaposition,
/// division by invertible values, `2i` literals).
pub fn parse_scalar(text: &str) -> Result<SymbolicScalar> {
    let toks = lex(text)?;
    if toks.is_empty() {
        return Err(Error::Parse("empty expression".into()));
    }
    let mut p = Parser { toks, pos: 0 };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(Error::Parse(format!("trailing input at {:?}", p.peek())));
    }
    Ok(e)
}

impl FromStr for SymbolicScalar {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        parse_scalar(s)
    }
}

impl FromStr for GaussianRational {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let e = parse_scalar(s)?;
        e.as_constant()
            .ok_or_else(|| Error::Parse(format!("`{s}` is not a numeric constant")))
    }
}

/// Parses an integer affine form such as `k+m-1`.
pub fn parse_index_form(text: &str) -> Result<IndexLinearForm> {
    let e = parse_scalar(text)?;
    e.as_index_form()
        .ok_or_else(|| Error::Parse(format!("`{text}` is not an integer affine form")))
}
